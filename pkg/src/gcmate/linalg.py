"""Exact integer and finite-field linear algebra.

Everything here works on Python integers, so no result silently overflows
however large the walk-matrix entries get.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError


class BigMatrix:
    """Immutable dense matrix of arbitrary-precision integers."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if not data or not data[0]:
            raise DimensionError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged rows")
        self._rows = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> BigMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> BigMatrix:
        return cls([[0] * (rows if cols is None else cols) for _ in range(rows)])

    @classmethod
    def diag(cls, entries: Sequence[int]) -> BigMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> BigMatrix:
        return cls(zip(*columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        if isinstance(other, BigMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"BigMatrix({[list(r) for r in self._rows]!r})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def transpose(self) -> BigMatrix:
        return BigMatrix(zip(*self._rows))

    T = property(transpose)

    def __matmul__(self, other: BigMatrix) -> BigMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        return BigMatrix(
            [sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows
        )

    def __add__(self, other: BigMatrix) -> BigMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BigMatrix(
            [a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)
        )

    def __sub__(self, other: BigMatrix) -> BigMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return BigMatrix(
            [a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)
        )

    def __neg__(self) -> BigMatrix:
        return BigMatrix([-a for a in r] for r in self._rows)

    def scale(self, k: int) -> BigMatrix:
        return BigMatrix([k * a for a in r] for r in self._rows)

    def exact_div(self, k: int) -> BigMatrix:
        """Divide every entry by ``k``; raises ValueError if any division is inexact."""
        out = []
        for r in self._rows:
            row = []
            for a in r:
                q, rem = divmod(a, k)
                if rem:
                    raise ValueError(f"entry {a} not divisible by {k}")
                row.append(q)
            out.append(row)
        return BigMatrix(out)

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._rows[i][j] == self._rows[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def content(self) -> int:
        """gcd of all entries (0 for the zero matrix)."""
        g = 0
        for r in self._rows:
            for a in r:
                g = gcd(g, a)
                if g == 1:
                    return 1
        return g


def _require_square(m: BigMatrix) -> None:
    if not m.is_square:
        raise DimensionError(f"square matrix required, got {m.rows}x{m.cols}")


def det_bareiss(m: BigMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    _require_square(m)
    a = m.tolist()
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """Invariant factors ``d`` with optional unimodular ``u``, ``v``: u @ m @ v == diag(d)."""

    d: tuple[int, ...]
    u: BigMatrix | None = None
    v: BigMatrix | None = None

    @property
    def last(self) -> int:
        return self.d[-1]

    def diagonal(self) -> BigMatrix:
        return BigMatrix.diag(self.d)


def smith_normal_form(m: BigMatrix, want_transforms: bool = False) -> SnfDecomposition:
    """Smith normal form by gcd-driven row/column reduction.

    The pivot at each stage is a nonzero entry of least absolute value in the
    remaining block. With ``want_transforms`` the returned ``u`` and ``v`` are
    unimodular and satisfy ``u @ m @ v == diag(d)`` exactly.
    """
    _require_square(m)
    n = m.rows
    a = m.tolist()
    U = [[int(i == j) for j in range(n)] for i in range(n)] if want_transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if want_transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row[dst] -= q * row[src]
        rd, rs = a[dst], a[src]
        for c in range(n):
            if rs[c]:
                rd[c] -= q * rs[c]
        if U is not None:
            ud, us = U[dst], U[src]
            for c in range(n):
                if us[c]:
                    ud[c] -= q * us[c]

    def add_col(dst, src, q):
        # col[dst] -= q * col[src]
        for r in a:
            if r[src]:
                r[dst] -= q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] -= q * r[src]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                ri = a[i]
                for j in range(t, n):
                    x = ri[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, a[i][t] // piv)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // piv)
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            # Pivot row and column are clear; enforce divisibility of the rest.
            bad = next(
                (i for i in range(t + 1, n) if any(a[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]

    d = tuple(a[i][i] for i in range(n))
    if want_transforms:
        return SnfDecomposition(d, BigMatrix(U), BigMatrix(V))
    return SnfDecomposition(d)


def _check_prime(p: int) -> None:
    from .factor import is_prime

    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")


def _rref_mod_p(rows: list[list[int]], p: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form mod p; return pivot columns."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rank_mod_p(m: BigMatrix, p: int) -> int:
    """Rank of ``m`` over the field Z/pZ."""
    _check_prime(p)
    rows = [[x % p for x in r] for r in m]
    return len(_rref_mod_p(rows, p))


@dataclass(frozen=True)
class ModVector:
    p: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= x < self.p for x in self.entries):
            raise ValueError("entries must be reduced mod p")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def scaled(self, c: int) -> ModVector:
        return ModVector(self.p, tuple(c * x % self.p for x in self.entries))

    def canonical(self) -> ModVector:
        """Rescale so the first nonzero entry is 1."""
        lead = next((x for x in self.entries if x), None)
        if lead is None:
            return self
        return self.scaled(pow(lead, -1, self.p))


def nullspace_mod_p(m: BigMatrix, p: int) -> list[ModVector]:
    """Basis of {z : m z = 0 over Z/pZ}, each vector led by a 1."""
    _check_prime(p)
    rows = [[x % p for x in r] for r in m]
    pivots = _rref_mod_p(rows, p)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        z = [0] * m.cols
        z[f] = 1
        for r, c in enumerate(pivots):
            z[c] = -rows[r][f] % p
        basis.append(ModVector(p, tuple(z)).canonical())
    return basis


def char_poly(m: BigMatrix) -> list[int]:
    """Coefficients of det(xI - m), highest degree first.

    Faddeev-LeVerrier recurrence; each division by k is checked to be exact.
    """
    _require_square(m)
    n = m.rows
    a = m.tolist()
    coeffs = [1]
    # mk holds A * M_k; M_1 = I so A*M_1 = A.
    mk = [row[:] for row in a]
    for k in range(1, n + 1):
        tr = sum(mk[i][i] for i in range(n))
        c, rem = divmod(-tr, k)
        if rem:
            raise ArithmeticError(f"inexact trace division at step {k}")
        coeffs.append(c)
        if k == n:
            break
        # M_{k+1} = A M_k + c I, then multiply by A.
        for i in range(n):
            mk[i][i] += c
        cols = list(zip(*mk))
        mk = [[sum(x * y for x, y in zip(r, col) if x) for col in cols] for r in a]
    return coeffs


def solve_rational(a: BigMatrix, b: BigMatrix) -> tuple[BigMatrix, int]:
    """Solve ``a @ x == b`` exactly for invertible square ``a``.

    Returns ``(num, den)`` with ``x == num / den``, ``den > 0`` minimal.
    """
    _require_square(a)
    if a.rows != b.rows:
        raise DimensionError("right-hand side has wrong number of rows")
    n, k = a.rows, b.cols
    aug = [[Fraction(x) for x in ra] + [Fraction(x) for x in rb] for ra, rb in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        rc = aug[c]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], rc)]
    sol = [row[n:] for row in aug]
    den = 1
    for row in sol:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    num = BigMatrix([[int(x * den) for x in row] for row in sol])
    assert num.cols == k
    return num, den
