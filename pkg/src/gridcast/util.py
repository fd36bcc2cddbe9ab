"""Seed derivation and output formatting helpers."""

import hashlib


def derive_seed(*parts) -> int:
    """Stable 63-bit seed derived from a tuple of ints/strings.

    SHA-256 based so the value is identical across platforms, Python
    versions and process restarts (unlike hash()).
    """
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def fmt9(value: float) -> str:
    """Format a float with 9 significant digits (CSV/console convention)."""
    return format(value, ".9g")
