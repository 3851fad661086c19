"""Independent certification of generalized cospectral pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InconsistencyError
from .factor import is_prime
from .graphs import Graph, complement, is_isomorphic
from .linalg import BigMatrix, char_poly, rank_mod_p, solve_rational
from .matefinder import MateResult
from .walkmatrix import build_walk_matrix


def generalized_cospectral(g: Graph, h: Graph) -> bool:
    """Same characteristic polynomial for the graphs and for their complements."""
    if g.n != h.n:
        raise ValueError(f"vertex counts differ: {g.n} vs {h.n}")
    if char_poly(g.adjacency()) != char_poly(h.adjacency()):
        return False
    return char_poly(complement(g).adjacency()) == char_poly(complement(h).adjacency())


def matrix_level(num: BigMatrix, den: int) -> int:
    """Smallest k > 0 making k * num / den integral."""
    return abs(den) // gcd(den, num.content())


def recover_q(g: Graph, h: Graph) -> tuple[BigMatrix, int]:
    """The regular rational orthogonal Q with Q^T A(g) Q = A(h), as (level * Q, level).

    Q is read off Q^T W(g) = W(h), i.e. W(g)^T Q = W(h)^T.
    """
    wg = build_walk_matrix(g)
    wh = build_walk_matrix(h)
    if wg.det == 0:
        raise InconsistencyError("first graph is not controllable")
    if wh.det == 0:
        raise InconsistencyError("W(h) is singular")
    num, den = solve_rational(wg.w.T, wh.w.T)
    level = den
    n = g.n
    if num.T @ num != BigMatrix.identity(n).scale(level * level):
        raise InconsistencyError("recovered Q is not orthogonal")
    if num.matvec((1,) * n) != (level,) * n:
        raise InconsistencyError("recovered Q is not regular")
    if num.T @ g.adjacency() @ num != h.adjacency().scale(level * level):
        raise InconsistencyError("recovered Q does not conjugate A(g) to A(h)")
    return num, level


def xi_invariant(m: BigMatrix) -> int:
    """c2(M) + c2(J - I - M), each c2 a sum of 2x2 principal minors."""
    if not m.is_symmetric():
        raise ValueError("xi is defined for symmetric matrices")
    n = m.rows
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            mii, mjj, mij = m[i, i], m[j, j], m[i, j]
            total += mii * mjj - mij * mij
            total += mii * mjj - (1 - mij) ** 2
    return total


@dataclass
class CospectralCertificate:
    charpoly_g: list[int]
    charpoly_h: list[int]
    charpoly_gc: list[int]
    charpoly_hc: list[int]
    q_level: int | None = None
    q_num: BigMatrix | None = None
    passed: bool = False
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failures": self.failures,
            "charpoly_g": self.charpoly_g,
            "charpoly_h": self.charpoly_h,
            "charpoly_gc": self.charpoly_gc,
            "charpoly_hc": self.charpoly_hc,
            "q_level": self.q_level,
            "q_num": None if self.q_num is None else self.q_num.tolist(),
        }


def certify_pair(g: Graph, h: Graph) -> CospectralCertificate:
    """Check that ``h`` is a generalized cospectral mate of ``g``.

    Passing requires equal characteristic polynomials (graphs and
    complements), a recoverable Q whose level exceeds 1, rank 1 of
    level*Q modulo a prime level, xi(A(h)) = -n(n-1)/2, and g, h nonisomorphic.
    """
    if g.n != h.n:
        raise ValueError(f"vertex counts differ: {g.n} vs {h.n}")
    n = g.n
    cert = CospectralCertificate(
        char_poly(g.adjacency()),
        char_poly(h.adjacency()),
        char_poly(complement(g).adjacency()),
        char_poly(complement(h).adjacency()),
    )
    fail = cert.failures
    if cert.charpoly_g != cert.charpoly_h:
        fail.append("charpoly")
    if cert.charpoly_gc != cert.charpoly_hc:
        fail.append("complement_charpoly")
    if not fail:
        try:
            cert.q_num, cert.q_level = recover_q(g, h)
        except InconsistencyError as exc:
            fail.append(f"recover_q: {exc}")
    if cert.q_level is not None:
        if cert.q_level == 1:
            fail.append("level_1")
        elif is_prime(cert.q_level) and rank_mod_p(cert.q_num, cert.q_level) != 1:
            fail.append("rank_mod_level")
    if xi_invariant(h.adjacency()) != -n * (n - 1) // 2:
        fail.append("xi")
    if is_isomorphic(g, h)[0]:
        fail.append("isomorphic")
    cert.passed = not fail
    return cert


def certify_mate(g: Graph, result: MateResult) -> CospectralCertificate:
    """Certify a mate found by the search, including that Q is the one it built."""
    if result.mate is None:
        raise ValueError("result carries no mate")
    cert = certify_pair(g, result.mate)
    if cert.q_level is not None:
        if cert.q_level != result.p:
            cert.failures.append("level_not_p")
        if result.q is not None and cert.q_num != result.q.qhat:
            cert.failures.append("q_mismatch")
    cert.passed = not cert.failures
    return cert
