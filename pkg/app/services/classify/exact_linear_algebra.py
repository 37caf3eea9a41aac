"""
Sparse exact Gauss-Jordan elimination.

Rows are dicts column -> entry. Entries are any exact field elements that
support + - * / and truthiness (QQ_I elements, ParamScalar). Nothing here
rounds, so ranks and null spaces are exact.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence

SparseRow = Dict[int, Any]


@dataclass
class ReducedRowEchelon:
    """Incrementally maintained reduced row echelon form.

    pivots maps a pivot column to its row; every pivot row has a unit pivot and
    zeros in all other pivot columns.
    """

    ncols: int
    pivots: Dict[int, SparseRow] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: SparseRow) -> SparseRow:
        """Remainder of a row after eliminating every current pivot column."""
        row = {c: v for c, v in row.items() if v}
        for col in [c for c in row if c in self.pivots]:
            factor = row.get(col)
            if not factor:
                continue
            for c, v in self.pivots[col].items():
                updated = row.get(c)
                updated = -factor * v if updated is None else updated - factor * v
                if updated:
                    row[c] = updated
                else:
                    row.pop(c, None)
        return row

    def add_row(self, row: SparseRow) -> bool:
        """Insert a row; returns True when it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        inverse = 1 / row[col]
        row = {c: v * inverse for c, v in row.items()}
        for other in self.pivots.values():
            factor = other.get(col)
            if not factor:
                continue
            for c, v in row.items():
                updated = other.get(c)
                updated = -factor * v if updated is None else updated - factor * v
                if updated:
                    other[c] = updated
                else:
                    other.pop(c, None)
        self.pivots[col] = row
        return True

    def free_columns(self) -> List[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def rows(self) -> List[SparseRow]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    def null_space(self, one: Any) -> List[SparseRow]:
        """One kernel vector per free column, with that entry set to one."""
        basis = []
        for free in self.free_columns():
            vector: SparseRow = {free: one}
            for col in sorted(self.pivots):
                value = self.pivots[col].get(free)
                if value:
                    vector[col] = -value
            basis.append(vector)
        return basis


def row_echelon(rows: Iterable[SparseRow], ncols: int) -> ReducedRowEchelon:
    echelon = ReducedRowEchelon(ncols)
    for row in rows:
        echelon.add_row(row)
    return echelon


def null_space(rows: Iterable[SparseRow], ncols: int, one: Any) -> List[SparseRow]:
    """Basis of {x : Ax = 0}."""
    return row_echelon(rows, ncols).null_space(one)


def rank(rows: Iterable[SparseRow], ncols: int) -> int:
    return row_echelon(rows, ncols).rank


def reduced_basis(vectors: Sequence[SparseRow], ncols: int) -> List[SparseRow]:
    """Reduced echelon basis of the span of the given vectors."""
    return row_echelon(vectors, ncols).rows()


def to_dense(vector: SparseRow, ncols: int, zero: Any) -> List[Any]:
    return [vector.get(c, zero) for c in range(ncols)]
