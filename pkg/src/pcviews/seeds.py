"""Stable per-view seed derivation.

Seeds are hashed from (global seed, scene id, object id, view index) so the
rendered output never depends on worker scheduling, and any single view can
be replayed in isolation.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """Deterministic 64-bit seed from an ordered tuple of identifiers."""
    payload = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")
