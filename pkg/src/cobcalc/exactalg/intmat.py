"""Dense integer matrices, Smith normal form and lattice reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


class IntegerMatrix:
    """Immutable dense matrix of Python ints."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], cols: int | None = None):
        rows = [tuple(int(x) for x in r) for r in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls([[0] * cols for _ in range(rows)], cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix([list(c) for c in zip(*self.entries)] if self.rows else [], self.rows)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntegerMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries],
            other.cols,
        )

    def __eq__(self, other):
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()})"

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )


def _round_div(a: int, b: int) -> int:
    # nearest-integer quotient keeps remainders small
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def smith_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` in Smith form.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is
    non-negative with each entry dividing the next.  The pivot at each
    stage is the entry of least absolute value, which keeps intermediate
    entries small for the block sizes met in practice.
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntegerMatrix.identity(rows).tolist()
    v = IntegerMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(cols):
                ra[k] -= q * rs[k]
            ua, us = u[dst], u[src]
            for k in range(rows):
                ua[k] -= q * us[k]

    def add_col(dst, src, q):
        if q:
            for r in a:
                r[dst] -= q * r[src]
            for r in v:
                r[dst] -= q * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                add_row(i, t, _round_div(a[i][t], p))
            for j in range(t + 1, cols):
                add_col(j, t, _round_div(a[t][j], p))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: (r[0], r[1] or -1, r[2] or -1))
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if a[i][j] % p
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntegerMatrix(u, rows), IntegerMatrix(a, cols), IntegerMatrix(v, cols)


def invariant_factors(m: IntegerMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, d, _ = smith_normal_form(m)
    return [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i]]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass
class LatticeReduction:
    """Reduced Hermite basis of a sublattice of ``ZZ^dim``.

    Rows of ``basis`` have strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into ``[0, pivot)``.
    :meth:`reduce` maps a vector to the unique representative of its
    coset whose pivot-column entries lie in ``[0, pivot)``.
    """

    dim: int
    basis: list[list[int]] = field(default_factory=list)
    pivots: list[int] = field(default_factory=list)

    def add(self, vec: Sequence[int]) -> bool:
        """Insert a generator; return True if the lattice grew."""
        v = list(vec)
        if len(v) != self.dim:
            raise ValueError("vector has wrong length")
        grew = False
        pos = {c: k for k, c in enumerate(self.pivots)}
        c = 0
        while True:
            while c < self.dim and v[c] == 0:
                c += 1
            if c == self.dim:
                break
            k = pos.get(c)
            if k is None:
                if v[c] < 0:
                    v = [-x for x in v]
                self._insert_row(c, v)
                grew = True
                break
            row = self.basis[k]
            p, x = row[c], v[c]
            if x % p == 0:
                q = x // p
                v = [a - q * b for a, b in zip(v, row)]
                continue
            g, s, t = _xgcd(p, x)
            new_row = [s * a + t * b for a, b in zip(row, v)]
            v = [(p // g) * a - (x // g) * b for a, b in zip(v, row)]
            self.basis[k] = new_row
            grew = True
        if grew:
            self._normalize()
        return grew

    def _insert_row(self, c, v):
        k = 0
        while k < len(self.pivots) and self.pivots[k] < c:
            k += 1
        self.pivots.insert(k, c)
        self.basis.insert(k, v)

    def _normalize(self):
        # ascending order: clearing column c_k never disturbs an earlier pivot
        for k in range(len(self.basis)):
            row, c = self.basis[k], self.pivots[k]
            p = row[c]
            for j in range(k):
                other = self.basis[j]
                q = other[c] // p
                if q:
                    self.basis[j] = [a - q * b for a, b in zip(other, row)]

    def reduce(self, vec: Sequence[int]) -> list[int]:
        w = list(vec)
        for row, c in zip(self.basis, self.pivots):
            q = w[c] // row[c]
            if q:
                for j in range(c, self.dim):
                    if row[j]:
                        w[j] -= q * row[j]
        return w

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self.reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def quotient_rank(self) -> int:
        return self.dim - self.rank

    @property
    def torsion(self) -> list[int]:
        """Invariant factors greater than one of ``ZZ^dim / lattice``."""
        if not self.basis:
            return []
        return [d for d in invariant_factors(IntegerMatrix(self.basis, self.dim)) if d > 1]


def lattice_normal_form(vectors: Sequence[Sequence[int]], dim: int | None = None) -> LatticeReduction:
    if dim is None:
        if not vectors:
            raise ValueError("dimension required for an empty generating set")
        dim = len(vectors[0])
    lat = LatticeReduction(dim)
    for v in vectors:
        lat.add(v)
    return lat
