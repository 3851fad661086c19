"""Integer factorization: trial division, then Brent's rho under an effort budget."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd, isqrt, prod

TRIAL_LIMIT = 10**6
BUDGET_ENV = "GCMATE_FACTOR_BUDGET"
DEFAULT_BUDGET = 3_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, f in enumerate(flags) if f]


_PRIMES: list[int] | None = None
_BLOCKS: list[tuple[int, list[int]]] | None = None


def _small_primes() -> tuple[list[int], list[tuple[int, list[int]]]]:
    global _PRIMES, _BLOCKS
    if _PRIMES is None:
        _PRIMES = _sieve(TRIAL_LIMIT)
        # Primes grouped so one gcd rules out a whole block at once.
        _BLOCKS = [
            (prod(_PRIMES[i : i + 256]), _PRIMES[i : i + 256])
            for i in range(0, len(_PRIMES), 256)
        ]
    return _PRIMES, _BLOCKS


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first twenty prime bases.

    Deterministic below 3.3e24; beyond that a composite passes with
    probability under 4**-20.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _perfect_power(n: int) -> tuple[int, int] | None:
    """Return (root, k) with root**k == n for the largest such k > 1, if any."""
    # Every prime factor exceeds TRIAL_LIMIT by the time this is called.
    for k in range(n.bit_length() // TRIAL_LIMIT.bit_length() + 1, 1, -1):
        r = _iroot(n, k)
        if r > 1 and r**k == n:
            return r, k
    return None


def _iroot(n: int, k: int) -> int:
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _brent(n: int, c: int, budget: int) -> tuple[int | None, int]:
    """One Brent-rho attempt with constant ``c``; returns (factor or None, steps used)."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    steps = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        steps += r
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        steps += min(k, r)
        r <<= 1
        if steps > budget:
            return None, steps
    if g == n:
        # Batched gcd overshot; step singly from the saved point.
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return (g if g != n else None), steps


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]
    complete: bool
    # Unsplit composite cofactors left over when the budget ran out.
    remaining: tuple[int, ...] = field(default=())

    def multiplicity(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def to_json(self) -> dict:
        return {
            "factors": [[p, e] for p, e in self.factors],
            "complete": self.complete,
            "remaining": list(self.remaining),
        }


def factor_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    return int(raw)


def factorize(v: int, budget: int | None = None) -> Factorization:
    """Factor ``|v|`` into primes.

    ``budget`` bounds the total number of rho iterations (default from the
    ``GCMATE_FACTOR_BUDGET`` environment variable). When it runs out the
    result has ``complete=False`` and the unsplit cofactors in ``remaining``.
    """
    if v == 0:
        raise ValueError("cannot factor zero")
    if budget is None:
        budget = factor_budget()
    n = abs(v)
    found: dict[int, int] = {}
    _, blocks = _small_primes()

    for block, ps in blocks:
        if n == 1:
            break
        if gcd(n, block) == 1:
            continue
        for q in ps:
            while n % q == 0:
                n //= q
                found[q] = found.get(q, 0) + 1

    stack = [(n, 1)] if n > 1 else []
    left: list[int] = []
    spent = 0
    while stack:
        m, e = stack.pop()
        if m < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(m):
            # No factor below TRIAL_LIMIT survives, so m < TRIAL_LIMIT**2 is prime.
            found[m] = found.get(m, 0) + e
            continue
        pw = _perfect_power(m)
        if pw is not None:
            stack.append((pw[0], e * pw[1]))
            continue
        d = None
        c = 1
        while d is None and spent < budget:
            d, used = _brent(m, c, budget - spent)
            spent += used
            c += 1
        if d is None:
            left.append(m)
            continue
        stack.append((d, e))
        stack.append((m // d, e))
    factors = tuple(sorted(found.items()))
    return Factorization(v, factors, complete=not left, remaining=tuple(sorted(left)))
