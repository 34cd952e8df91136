"""Sparse exact Gaussian elimination.

Vectors are dicts from column index to a nonzero field element. Pivots are
always the smallest column index of a row, so when columns follow a
descending monomial order the pivot of a row is its leading monomial.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from src.exactfield import ONE, FieldElement

Vector = dict[int, FieldElement]


def axpy(target: dict, factor: FieldElement, source: Mapping) -> None:
    """target += factor * source, dropping entries that cancel."""
    for col, value in source.items():
        updated = target.get(col, 0) + factor * value
        if updated:
            target[col] = updated
        else:
            target.pop(col, None)


def scaled(vector: Mapping, factor: FieldElement) -> dict:
    return {col: value * factor for col, value in vector.items()}


def rref(rows: Iterable[Mapping[int, FieldElement]]) -> list[Vector]:
    """Fully reduced row echelon form, rows sorted by pivot, pivots equal to one."""
    pivots: dict[int, Vector] = {}
    for raw in rows:
        vec = {c: v for c, v in raw.items() if v}
        reduce_against(vec, pivots)
        if not vec:
            continue
        pivot = min(vec)
        vec = scaled(vec, ONE / vec[pivot])
        vec[pivot] = ONE
        for row in pivots.values():
            factor = row.get(pivot)
            if factor:
                axpy(row, -factor, vec)
        pivots[pivot] = vec
    return [pivots[p] for p in sorted(pivots)]


def reduce_against(vec: dict, pivots: Mapping[int, Vector]) -> dict:
    """Clear every pivot column of ``vec`` in place using fully reduced rows."""
    for col in [c for c in vec if c in pivots]:
        factor = vec.get(col)
        if factor:
            axpy(vec, -factor, pivots[col])
    return vec


class EchelonBasis:
    """Incrementally built semi-echelon basis.

    Row k is zero at the pivots of rows 0..k-1, so one ordered pass reduces a
    vector. With ``track=True`` each row remembers how it was built from the
    tagged input vectors, which turns reductions into solutions and failed
    insertions into kernel vectors.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._rows: list[tuple[int, Vector, dict | None]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return [pivot for pivot, _, _ in self._rows]

    def reduce(self, vector: Mapping) -> tuple[Vector, dict]:
        """Return (residual, combination) with vector = residual + sum combination[t] * input_t."""
        vec = {c: v for c, v in vector.items() if v}
        acc: dict = {}
        for pivot, row, combo in self._rows:
            factor = vec.get(pivot)
            if not factor:
                continue
            axpy(vec, -factor, row)
            if self.track:
                axpy(acc, factor, combo)
        return vec, acc

    def contains(self, vector: Mapping) -> bool:
        residual, _ = self.reduce(vector)
        return not residual

    def insert(self, vector: Mapping, tag: Hashable = None) -> dict | None:
        """Add a vector.

        Returns None when it was independent. Otherwise returns the dependency
        e_tag - combination (empty when not tracking).
        """
        residual, acc = self.reduce(vector)
        if residual:
            pivot = min(residual)
            inv = ONE / residual[pivot]
            row = scaled(residual, inv)
            row[pivot] = ONE
            combo = None
            if self.track:
                combo = {tag: ONE}
                axpy(combo, -ONE, acc)
                combo = scaled(combo, inv)
            self._rows.append((pivot, row, combo))
            return None
        if not self.track:
            return {}
        dependency = {tag: ONE}
        axpy(dependency, -ONE, acc)
        return dependency


def rank(vectors: Iterable[Mapping], limit: int | None = None) -> int:
    """Rank of a family of sparse vectors, stopping early once ``limit`` is reached."""
    basis = EchelonBasis()
    for vec in vectors:
        basis.insert(vec)
        if limit is not None and basis.rank >= limit:
            break
    return basis.rank


def solve(columns: Sequence[Mapping], target: Mapping) -> dict[int, FieldElement] | None:
    """Find x with sum_u x[u] * columns[u] = target; free unknowns are set to zero."""
    basis = EchelonBasis(track=True)
    for index, col in enumerate(columns):
        basis.insert(col, index)
    residual, acc = basis.reduce(target)
    if residual:
        return None
    return acc


def determinant(matrix: Sequence[Sequence[FieldElement]]) -> FieldElement:
    """Determinant by fraction-exact elimination."""
    size = len(matrix)
    rows = [list(row) for row in matrix]
    det: FieldElement = ONE
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col]), None)
        if pivot is None:
            return 0 * ONE
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        lead = rows[col][col]
        det = det * lead
        for r in range(col + 1, size):
            factor = rows[r][col]
            if factor:
                ratio = factor / lead
                rows[r] = [a - ratio * b for a, b in zip(rows[r], rows[col])]
    return det
