"""Conflict-graph construction under the protocol interference model.

Two eNBs interfere iff their euclidean distance is strictly below the
threshold (ties at exactly the threshold do not interfere). The resulting
adjacency drives both channel allocation and LBT carrier sensing.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .model import InterferenceMatrix, Point, positions_array


def build_interference_matrix(
    positions: Sequence[Point],
    threshold_km: float,
) -> InterferenceMatrix:
    if len(positions) < 1:
        raise ValidationError("need at least one position")
    if threshold_km < 0:
        raise ValidationError("threshold_km must be non-negative")
    pts = positions_array(positions)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    entries = (dist < threshold_km).astype(np.uint8)
    np.fill_diagonal(entries, 0)
    return InterferenceMatrix(size=len(positions), entries=entries, threshold_km=threshold_km)


def neighbor_set(c: InterferenceMatrix, k: int) -> set[int]:
    """Indices of eNBs that interfere with eNB k."""
    if not 0 <= k < c.size:
        raise IndexError(f"eNB index {k} out of range for K={c.size}")
    return set(np.nonzero(c.entries[k])[0].tolist())


def matrix_to_text(c: InterferenceMatrix) -> str:
    """Plain-text rows of 0/1 entries, one row per eNB."""
    return "\n".join(" ".join(str(int(v)) for v in row) for row in c.entries) + "\n"
