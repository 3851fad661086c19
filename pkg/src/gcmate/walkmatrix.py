"""Walk matrices and classification against the single-square-prime family."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .errors import TheoryViolation
from .factor import Factorization, factorize
from .graphs import Graph
from .linalg import BigMatrix, SnfDecomposition, det_bareiss, rank_mod_p, smith_normal_form


def walk_columns(g: Graph) -> list[list[int]]:
    """The vectors e, Ae, ..., A^{n-1}e."""
    n = g.n
    nbrs = [g.neighbors(v) for v in range(n)]
    cols = [[1] * n]
    for _ in range(n - 1):
        prev = cols[-1]
        cols.append([sum(prev[u] for u in nbrs[v]) for v in range(n)])
    return cols


@dataclass(frozen=True)
class WalkMatrixBundle:
    """Walk matrix with its determinant; the Smith form is computed on first access."""

    w: BigMatrix
    det: int

    @cached_property
    def snf(self) -> SnfDecomposition:
        return smith_normal_form(self.w)

    @property
    def n(self) -> int:
        return self.w.rows


def build_walk_matrix(g: Graph) -> WalkMatrixBundle:
    w = BigMatrix.from_columns(walk_columns(g))
    return WalkMatrixBundle(w, det_bareiss(w))


class Verdict(str, enum.Enum):
    NOT_CONTROLLABLE = "not_controllable"
    ODD_SQUARE_FREE_DGS = "odd_square_free_dgs"
    FAMILY_FN = "family_fn"
    OTHER = "other"
    UNCLASSIFIABLE = "unclassifiable"


@dataclass(frozen=True)
class FamilyClassification:
    verdict: Verdict
    bundle: WalkMatrixBundle
    p: int | None = None
    b: int | None = None
    # Factorization of 2^{-floor(n/2)} |det W|, when it was attempted.
    odd_factorization: Factorization | None = None
    snf: SnfDecomposition | None = field(default=None, compare=False)

    @property
    def dn_factorization(self) -> Factorization | None:
        """Factorization of the last invariant factor (only known for family members)."""
        if self.verdict is not Verdict.FAMILY_FN:
            return None
        f = self.odd_factorization.as_dict()
        f[2] = f.get(2, 0) + 1
        return Factorization(self.snf.last, tuple(sorted(f.items())), True)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "n": self.bundle.n}
        if self.p is not None:
            out["p"] = self.p
            out["b"] = self.b
        if self.snf is not None:
            out["dn"] = self.snf.last
        if self.verdict is Verdict.FAMILY_FN:
            out["dn_factorization"] = [[q, e] for q, e in self.dn_factorization.factors]
        elif self.odd_factorization is not None:
            out["odd_part_factorization"] = self.odd_factorization.to_json()
        out["det"] = self.bundle.det
        return out


def family_snf_pattern(n: int, p: int, b: int) -> tuple[int, ...]:
    """diag(1,...,1, 2,...,2, 2p^2 b) with ceil(n/2) ones."""
    ones = (n + 1) // 2
    twos = n // 2
    if twos == 0:
        return (1,) * ones
    return (1,) * ones + (2,) * (twos - 1) + (2 * p * p * b,)


def snf_matches_family(snf: SnfDecomposition, n: int) -> tuple[int, int] | None:
    """Return (p, b) if the invariant factors have the family shape, else None."""
    from .factor import is_prime

    if n < 2:
        return None
    d = snf.d
    ones, twos = (n + 1) // 2, n // 2
    if d[:ones] != (1,) * ones or d[ones:-1] != (2,) * (twos - 1):
        return None
    last = d[-1]
    if last % 2 or (last // 2) % 2 == 0:
        return None
    f = factorize(last // 2)
    if not f.complete:
        return None
    squared = [q for q, e in f.factors if e == 2]
    if len(squared) != 1 or any(e > 2 for _, e in f.factors):
        return None
    p = squared[0]
    if not is_prime(p):
        return None
    return p, last // 2 // (p * p)


def _two_adic(x: int) -> int:
    return (x & -x).bit_length() - 1


def classify(g: Graph, bundle: WalkMatrixBundle | None = None) -> FamilyClassification:
    """Place ``g`` in one of the verdict classes.

    Cheap tests run first: controllability, then the power of two in det W,
    then factoring the odd part. For family candidates the Smith-form shape
    and the (det, rank mod p) characterisation are both evaluated and must
    agree.
    """
    if bundle is None:
        bundle = build_walk_matrix(g)
    n = g.n
    det = abs(bundle.det)
    if det == 0:
        return FamilyClassification(Verdict.NOT_CONTROLLABLE, bundle)
    half = n // 2
    if _two_adic(det) != half:
        return FamilyClassification(Verdict.OTHER, bundle)
    odd = det >> half
    fac = factorize(odd)
    if not fac.complete:
        return FamilyClassification(Verdict.UNCLASSIFIABLE, bundle, odd_factorization=fac)
    exps = [e for _, e in fac.factors]
    if all(e == 1 for e in exps):
        return FamilyClassification(Verdict.ODD_SQUARE_FREE_DGS, bundle, odd_factorization=fac)
    squared = [q for q, e in fac.factors if e == 2]
    if len(squared) != 1 or any(e > 2 for e in exps):
        return FamilyClassification(Verdict.OTHER, bundle, odd_factorization=fac)

    p = squared[0]
    b = odd // (p * p)
    by_rank = rank_mod_p(bundle.w, p) == n - 1
    snf = bundle.snf
    by_shape = snf.d == family_snf_pattern(n, p, b)
    if by_rank != by_shape:
        raise TheoryViolation(
            f"Smith form {snf.d} and rank test (rank_{p} W == n-1: {by_rank}) disagree"
        )
    if not by_shape:
        return FamilyClassification(Verdict.OTHER, bundle, odd_factorization=fac, snf=snf)
    if rank_mod_p(bundle.w, 2) != (n + 1) // 2:
        raise TheoryViolation("family member with rank_2 W != ceil(n/2)")
    return FamilyClassification(Verdict.FAMILY_FN, bundle, p, b, fac, snf)
