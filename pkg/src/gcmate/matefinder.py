"""Decide DGS for family members and build the generalized cospectral mate.

The search works on a kernel vector v of W^T mod p. Dropping the zero
entries leaves v*, of length m. For each multiplier k = 1..p-1 the shortest
p-representative of k*v* is adjusted by +-p on at most three coordinates.
That enumerates every perfect representative, meaning a vector w with
w.e = p and w.w = p^2. The graph has a mate exactly when these number m in
total. They then form the columns of p*Q for a primitive orthogonal matrix
Q, and Q^T A Q is the mate's adjacency matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import AssemblyError, PreconditionError, TheoryViolation
from .graphs import Graph
from .linalg import BigMatrix, ModVector, nullspace_mod_p, rank_mod_p
from .walkmatrix import FamilyClassification, Verdict, WalkMatrixBundle


@dataclass(frozen=True)
class ShortestRep:
    p: int
    u: tuple[int, ...]
    # (u.e - p) / p, or None when u.e is not a multiple of p (then no perfect rep exists).
    sum_s: int | None
    norm: int


@dataclass(frozen=True)
class PerfectRep:
    w: tuple[int, ...]
    p: int

    def __post_init__(self):
        if sum(self.w) != self.p or sum(x * x for x in self.w) != self.p * self.p:
            raise ValueError(f"{self.w} is not a perfect {self.p}-representative")


def kernel_vector(bundle: WalkMatrixBundle, p: int) -> ModVector:
    """The nonzero solution of W^T z = 0 over Z/pZ, scaled so its last nonzero entry is 1.

    The scaling only relabels the multipliers k in the representative census;
    the verdict and the mate (up to isomorphism) do not depend on it.
    """
    basis = nullspace_mod_p(bundle.w.T, p)
    if len(basis) != 1:
        raise PreconditionError(f"kernel of W^T mod {p} has dimension {len(basis)}, expected 1")
    v = basis[0]
    last = next(x for x in reversed(v.entries) if x)
    v = v.scaled(pow(last, -1, p))
    if sum(v) % p:
        raise TheoryViolation("kernel vector has entry sum nonzero mod p")
    return v


def strip_zeros(v: ModVector) -> tuple[ModVector, tuple[int, ...]]:
    """Split ``v`` into its nonzero entries and the (0-based) positions of its zeros."""
    zeros = tuple(i for i, x in enumerate(v.entries) if x == 0)
    vstar = tuple(x for x in v.entries if x)
    if not vstar:
        raise PreconditionError("kernel vector is zero")
    return ModVector(v.p, vstar), zeros


def shortest_p_representative(v: Sequence[int], p: int) -> ShortestRep:
    half = (p - 1) // 2
    u = []
    for x in v:
        r = x % p
        if r == 0:
            raise ValueError(f"entry {x} is zero mod {p}")
        u.append(r - p if r > half else r)
    total = sum(u)
    s = (total - p) // p if total % p == 0 else None
    return ShortestRep(p, tuple(u), s, sum(x * x for x in u))


def _strategies(s: int) -> list[tuple[int, int]]:
    """All (|I|, |D|) with |I| + |D| <= 3 and |D| - |I| = s, fewest moves first."""
    return sorted(
        ((i, d) for i in range(4) for d in range(4) if i + d <= 3 and d - i == s),
        key=lambda t: t[0] + t[1],
    )


def enumerate_perfect_reps(u: ShortestRep) -> list[PerfectRep]:
    """Every perfect p-representative congruent to ``u`` mod p.

    Each one is u + p*sum(e_i, i in I) - p*sum(e_j, j in D), where I picks
    negative entries and D positive ones, |D| - |I| = s, |I| + |D| <= 3,
    and the chosen |u_k| sum to (u.u + p^2 (|I|+|D|-1)) / (2p).
    """
    p, vec, s, norm = u.p, u.u, u.sum_s, u.norm
    if s is None or abs(s) > 3 or norm > p * p:
        return []
    neg = [i for i, x in enumerate(vec) if x < 0]
    pos = [i for i, x in enumerate(vec) if x > 0]
    out = []
    for ni, nd in _strategies(s):
        twice = norm + p * p * (ni + nd - 1)
        if twice % (2 * p):
            continue
        target = twice // (2 * p)
        for inc in combinations(neg, ni):
            a = sum(-vec[i] for i in inc)
            if a > target:
                continue
            for dec in combinations(pos, nd):
                if a + sum(vec[j] for j in dec) != target:
                    continue
                w = list(vec)
                for i in inc:
                    w[i] += p
                for j in dec:
                    w[j] -= p
                out.append(PerfectRep(tuple(w), p))
    return out


BRUTE_FORCE_MAX_DIM = 16


def brute_force_perfect_reps(u: ShortestRep) -> list[PerfectRep]:
    """Exhaustive search over w_i in {u_i - p, u_i, u_i + p}.

    Partial sums of squares prune branches that already exceed p^2, and
    branches whose reachable entry sums cannot hit p.
    """
    p, vec = u.p, u.u
    m = len(vec)
    if m > BRUTE_FORCE_MAX_DIM:
        raise ValueError(f"brute force refuses dimension {m} > {BRUTE_FORCE_MAX_DIM}")
    choices = [(x - p, x, x + p) for x in vec]
    lo = [0] * (m + 1)
    hi = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        lo[i] = lo[i + 1] + choices[i][0]
        hi[i] = hi[i + 1] + choices[i][2]
    target_sq = p * p
    out = []
    w = [0] * m

    def go(i, total, sq):
        if sq > target_sq:
            return
        if not lo[i] <= p - total <= hi[i]:
            return
        if i == m:
            if sq == target_sq:
                out.append(PerfectRep(tuple(w), p))
            return
        for c in choices[i]:
            w[i] = c
            go(i + 1, total + c, sq + c * c)

    go(0, 0, 0)
    return out


@dataclass(frozen=True)
class PrimitiveMatrix:
    """p*Q for a regular rational orthogonal matrix Q of level p."""

    p: int
    qhat: BigMatrix

    def check(self) -> None:
        p, q = self.p, self.qhat
        n = q.rows
        e = (1,) * n
        if q.T @ q != BigMatrix.identity(n).scale(p * p):
            raise AssemblyError("qhat^T qhat != p^2 I")
        if q.matvec(e) != (p,) * n or q.T.matvec(e) != (p,) * n:
            raise AssemblyError("qhat is not regular (row or column sums differ from p)")
        if all(x % p == 0 for r in q for x in r):
            raise AssemblyError("level is not p: every entry divisible by p")
        if rank_mod_p(q, p) != 1:
            raise AssemblyError("rank of qhat mod p is not 1")

    def conjugate(self, a: BigMatrix) -> BigMatrix:
        """(1/p^2) qhat^T a qhat, which must be integral."""
        prod = self.qhat.T @ a @ self.qhat
        try:
            return prod.exact_div(self.p * self.p)
        except ValueError:
            raise TheoryViolation("Q^T A Q is not integral") from None


def assemble_primitive(
    reps: Sequence[PerfectRep], s_indices: Sequence[int], n: int, p: int
) -> PrimitiveMatrix:
    """Columns: the reps (spread over rows outside ``s_indices``), then p*e_j for j in ``s_indices``."""
    zeros = sorted(s_indices)
    if len(reps) + len(zeros) != n:
        raise AssemblyError(f"{len(reps)} reps + {len(zeros)} unit columns != {n}")
    live = [i for i in range(n) if i not in set(zeros)]
    for r in reps:
        if len(r.w) != len(live):
            raise AssemblyError("representative has wrong length")
        if sum(x * x for x in r.w) != p * p:
            raise AssemblyError(f"{r.w} does not have norm p^2")
    for a, b in combinations(reps, 2):
        if sum(x * y for x, y in zip(a.w, b.w)):
            raise AssemblyError(f"{a.w} and {b.w} are not orthogonal")
    cols = []
    for r in reps:
        col = [0] * n
        for i, x in zip(live, r.w):
            col[i] = x
        cols.append(col)
    for j in zeros:
        col = [0] * n
        col[j] = p
        cols.append(col)
    q = PrimitiveMatrix(p, BigMatrix.from_columns(cols))
    q.check()
    return q


class MateVerdict(str, enum.Enum):
    DGS = "dgs"
    MATE = "mate"


@dataclass(frozen=True)
class MateResult:
    verdict: MateVerdict
    p: int
    mate: Graph | None = None
    q: PrimitiveMatrix | None = None
    # k -> |R_k| for every multiplier examined.
    rep_census: dict[int, int] = field(default_factory=dict)
    kernel: ModVector | None = None
    # False when v^T v is nonzero mod p and no representative was enumerated.
    gate_passed: bool = True

    @property
    def support(self) -> int | None:
        if self.kernel is None:
            return None
        return sum(1 for x in self.kernel if x)


def _adjacency_or_fail(b: BigMatrix) -> Graph:
    if not b.is_symmetric():
        raise TheoryViolation("Q^T A Q is not symmetric")
    if any(b[i, i] for i in range(b.rows)):
        raise TheoryViolation("Q^T A Q has a nonzero diagonal entry")
    if any(x not in (0, 1) for r in b for x in r):
        raise TheoryViolation("Q^T A Q has an entry outside {0, 1}")
    return Graph.from_matrix(b.tolist())


def find_mate(
    g: Graph,
    cls: FamilyClassification,
    *,
    exhaustive: bool = False,
    kernel: ModVector | None = None,
) -> MateResult:
    """Run the mate search on a family member.

    By default the loop over k stops as soon as m representatives are
    found; ``exhaustive`` runs every k and checks the count never exceeds m.
    ``kernel`` overrides the canonical kernel vector (any nonzero multiple
    gives the same outcome up to isomorphism).
    """
    if cls.verdict is not Verdict.FAMILY_FN:
        raise PreconditionError(f"graph is not a family member (verdict {cls.verdict.value})")
    p = cls.p
    v = kernel_vector(cls.bundle, p) if kernel is None else kernel
    if sum(v) % p:
        raise TheoryViolation("kernel vector has entry sum nonzero mod p")
    if sum(x * x for x in v) % p:
        return MateResult(MateVerdict.DGS, p, kernel=v, gate_passed=False)

    vstar, zeros = strip_zeros(v)
    m = len(vstar)
    reps: list[PerfectRep] = []
    census: dict[int, int] = {}
    for k in range(1, p):
        u = shortest_p_representative([k * x for x in vstar], p)
        if u.sum_s is None:
            raise TheoryViolation("shortest representative has entry sum nonzero mod p")
        found = enumerate_perfect_reps(u)
        census[k] = len(found)
        reps.extend(found)
        if len(reps) > m:
            raise TheoryViolation(f"{len(reps)} perfect representatives exceed m = {m}")
        if len(reps) == m and not exhaustive:
            break

    if len(reps) < m:
        return MateResult(MateVerdict.DGS, p, rep_census=census, kernel=v)
    q = assemble_primitive(reps, zeros, g.n, p)
    mate = _adjacency_or_fail(q.conjugate(g.adjacency()))
    return MateResult(MateVerdict.MATE, p, mate, q, census, v)
