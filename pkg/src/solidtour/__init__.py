"""Hamilton paths and circles of countable solid tournaments, at finite depth."""

from __future__ import annotations

__version__ = "0.1.0"
