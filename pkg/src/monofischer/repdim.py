"""Dimension formulas and branching rules for so(m) and gl(k).

Weights are tuples of :class:`fractions.Fraction` (integers or half-integers).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

__all__ = [
    "RepError",
    "HighestWeight",
    "Partition",
    "spinor_weights",
    "rho",
    "weyl_dim_so",
    "gl_dim",
    "klimyk_spinor_tensor",
    "klimyk_pairs",
    "pieri_wedge",
    "shifted_weights",
    "sdim",
    "harmonic_sdim",
    "spinor_tensor_identity",
    "graded_dim_identities",
]

HALF = Fraction(1, 2)


class RepError(ValueError):
    pass


def _frac_tuple(xs) -> tuple[Fraction, ...]:
    out = []
    for x in xs:
        if isinstance(x, float):
            raise RepError("weights must be exact (use Fraction or strings)")
        out.append(Fraction(x))
    return tuple(out)


@dataclass(frozen=True)
class HighestWeight:
    algebra: str  # "so" or "gl"
    rank_param: int  # m for so(m), k for gl(k)
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _frac_tuple(self.entries))
        if self.algebra == "so":
            _check_so_dominant(self.rank_param, self.entries)
        elif self.algebra == "gl":
            _check_gl_dominant(self.rank_param, self.entries)
        else:
            raise RepError(f"unknown algebra {self.algebra!r}")

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.entries) + ")"


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 0 for x in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise RepError(f"{parts} is not a partition")
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


def _check_so_dominant(m: int, lam: Sequence[Fraction]) -> None:
    if m < 2:
        raise RepError("so(m) needs m >= 2")
    n = m // 2
    if len(lam) != n:
        raise RepError(f"so({m}) weights have {n} entries, got {len(lam)}")
    dens = {x.denominator for x in lam}
    if not dens <= {1} and not dens <= {2}:
        raise RepError(f"mixed integrality in {tuple(map(str, lam))}")
    if n == 0:
        return
    for i in range(n - 1):
        if lam[i] < lam[i + 1]:
            raise RepError(f"weight {tuple(map(str, lam))} is not dominant for so({m})")
    if m % 2:
        if lam[-1] < 0:
            raise RepError(f"weight {tuple(map(str, lam))} is not dominant for so({m})")
    elif n >= 2 and lam[-2] < abs(lam[-1]):
        raise RepError(f"weight {tuple(map(str, lam))} is not dominant for so({m})")


def _check_gl_dominant(k: int, lam: Sequence[Fraction]) -> None:
    if len(lam) != k:
        raise RepError(f"gl({k}) weights have {k} entries, got {len(lam)}")
    for i in range(k - 1):
        if lam[i] < lam[i + 1]:
            raise RepError(f"weight {tuple(map(str, lam))} is not dominant for gl({k})")
        if (lam[i] - lam[i + 1]).denominator != 1:
            raise RepError("gl weights must differ by integers")


def rho(m: int) -> tuple[Fraction, ...]:
    """Half-sum of positive roots: B_n gives n-i+1/2, D_n gives n-i."""
    n = m // 2
    if m % 2:
        return tuple(Fraction(n - i) + HALF for i in range(1, n + 1))
    return tuple(Fraction(n - i) for i in range(1, n + 1))


def spinor_weights(m: int) -> list[tuple[Fraction, ...]]:
    """The 2^n weights (+-1/2, ..., +-1/2) of the spinor module."""
    n = m // 2
    return [tuple(HALF * s for s in signs) for signs in itertools.product((1, -1), repeat=n)]


def weyl_dim_so(m: int, lam: Sequence) -> int:
    """Weyl dimension formula for so(m)."""
    lam = _frac_tuple(lam)
    _check_so_dominant(m, lam)
    n = m // 2
    r = rho(m)
    L = [x + y for x, y in zip(lam, r)]
    num = Fraction(1)
    den = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= (L[i] - L[j]) * (L[i] + L[j])
            den *= (r[i] - r[j]) * (r[i] + r[j])
        if m % 2:
            num *= L[i]
            den *= r[i]
    d = num / den
    if d.denominator != 1 or d <= 0:
        raise RepError(f"Weyl formula gave non-natural value {d}")
    return int(d)


def gl_dim(k: int, lam: Sequence, shift=0) -> int:
    """Dimension of the gl(k) irrep; a uniform shift of the weight is ignored."""
    lam = _frac_tuple(lam)
    s = Fraction(shift)
    lam = tuple(x + s for x in lam)
    _check_gl_dominant(k, lam)
    num = Fraction(1)
    den = 1
    for i in range(k):
        for j in range(i + 1, k):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    d = num / den
    if d.denominator != 1 or d <= 0:
        raise RepError(f"gl dimension gave non-natural value {d}")
    return int(d)


def _is_so_dominant(m: int, lam) -> bool:
    try:
        _check_so_dominant(m, lam)
    except RepError:
        return False
    return True


def _pad(m: int, lam) -> tuple[Fraction, ...]:
    n = m // 2
    lam = _frac_tuple(lam)
    if len(lam) > n:
        if any(lam[n:]):
            raise RepError(f"weight {lam} has more than {n} nonzero entries")
        lam = lam[:n]
    return lam + (Fraction(0),) * (n - len(lam))


def klimyk_spinor_tensor(m: int, lam: Sequence) -> list[tuple[Fraction, ...]]:
    """Highest weights of E_lam (x) S: all dominant lam + mu, mu a spinor weight.

    Each summand occurs once.  Output is sorted in descending order.
    """
    lam = _pad(m, lam)
    if any(x.denominator != 1 for x in lam):
        raise RepError("klimyk_spinor_tensor needs an integral weight")
    _check_so_dominant(m, lam)
    out = {tuple(x + y for x, y in zip(lam, mu)) for mu in spinor_weights(m)}
    return sorted((nu for nu in out if _is_so_dominant(m, nu)), reverse=True)


def klimyk_pairs(m: int, summands: Sequence[tuple[Fraction, ...]]) -> int:
    """Summand count with the two chiral partners (last entry +-x) counted once."""
    if m % 2:
        return len(summands)
    return len({nu[:-1] + (abs(nu[-1]),) for nu in summands})


def pieri_wedge(k: int, j: int, a: Sequence[int]) -> list[tuple[int, ...]]:
    """Dominant a + eps(J) over j-element subsets J of {1..k} (lex order of J)."""
    a = Partition(tuple(a)).parts
    if len(a) != k:
        raise RepError(f"partition {a} has length {len(a)}, expected {k}")
    if not 0 <= j <= k:
        raise RepError(f"need 0 <= j <= k (got j={j}, k={k})")
    out = []
    for J in itertools.combinations(range(k), j):
        b = list(a)
        for i in J:
            b[i] += 1
        b = tuple(b)
        if all(b[i] >= b[i + 1] for i in range(k - 1)):
            out.append(b)
    return out


def shifted_weights(m: int, a: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """Spin(m) highest weights of the simplicial monogenics of degree ``a``.

    Odd m: the single weight (a_1+1/2, ..., a_k+1/2, 1/2, ..., 1/2).  Even m:
    both sign choices of the last entry.
    """
    n = m // 2
    a = tuple(a)
    if any(a[n:]):
        raise RepError(f"multidegree {a} has more than {n} nonzero parts")
    a = a[:n] + (0,) * (n - len(a))
    base = tuple(Fraction(x) + HALF for x in a)
    if m % 2:
        return [base]
    return [base, base[:-1] + (-base[-1],)]


def sdim(m: int, a: Sequence[int]) -> int:
    """Spin-dimension of M^S_a: Weyl dimension of the shifted weight(s)."""
    if not Partition(tuple(a)).parts == tuple(a):
        raise RepError(f"{a} is not a partition")
    return sum(weyl_dim_so(m, w) for w in shifted_weights(m, a))


def harmonic_sdim(m: int, a: Sequence[int]) -> int:
    """SO(m)-dimension of H^S_a.

    For even m whose rank equals the length of ``a`` and a nonzero last entry,
    the space is the O(m)-irreducible sum of the weights with both signs of the
    last entry.
    """
    a = Partition(tuple(a)).parts
    lam = _pad(m, a)
    d = weyl_dim_so(m, lam)
    if m % 2 == 0 and lam and lam[-1] != 0:
        d += weyl_dim_so(m, lam[:-1] + (-lam[-1],))
    return d


def spinor_tensor_identity(m: int, a: Sequence[int]) -> dict:
    """Check dim H^S_a * 2^n = sum_J sdim(a - eps(J)) over partitions a - eps(J)."""
    a = Partition(tuple(a)).parts
    k = len(a)
    lhs = harmonic_sdim(m, a) * 2 ** (m // 2)
    rhs = 0
    terms = []
    for r in range(k + 1):
        for J in itertools.combinations(range(k), r):
            b = list(a)
            for i in J:
                b[i] -= 1
            b = tuple(b)
            if min(b, default=0) >= 0 and all(b[i] >= b[i + 1] for i in range(k - 1)):
                d = sdim(m, b)
                terms.append({"J": [i + 1 for i in J], "b": list(b), "sdim": d})
                rhs += d
    return {"a": list(a), "lhs": lhs, "rhs": rhs, "terms": terms, "pass": lhs == rhs}


def graded_dim_identities(m: int, k: int, ell: int, force: bool = False) -> dict:
    """Exact dimension identities on degree ``ell`` (kernel dims vs formulas).

    (a) dim M_l = sum_{|a|=l} sdim(a) gl_dim(a)
    (b) dim H_l x S = sum_J dim M_{l-|J|}
    (c) dim P_l x S = sum over summand indices of dim M_t
    (d) dim H_l = sum_{|a|=l} dim H^S_a gl_dim(a)   (scalar)
    """
    from .decomp import StableRangeError, enumerate_summands
    from .spaces import harmonic_space, monogenic_space, partitions

    if m < 2 * k and not force:
        raise StableRangeError(m, k)
    n = m // 2
    mono = {t: monogenic_space(m, k, t).dim for t in range(ell + 1)}
    parts = partitions(ell, k)

    try:
        rhs_a = sum(sdim(m, a) * gl_dim(k, a, Fraction(m, 2)) for a in parts)
    except RepError:
        rhs_a = None  # some partition is too long for the rank: no formula
    lhs_b = harmonic_space(m, k, ell, spinor=True).dim
    rhs_b = sum(comb(k, r) * mono[ell - r] for r in range(min(k, ell) + 1))
    lhs_c = comb(ell + m * k - 1, m * k - 1) * 2 ** n
    rhs_c = sum(mono[s.t] for s in enumerate_summands(k, ell))
    lhs_d = harmonic_space(m, k, ell, spinor=False).dim
    try:
        rhs_d = sum(harmonic_sdim(m, a) * gl_dim(k, a) for a in parts)
    except RepError:
        rhs_d = None

    checks = {
        "a_monogenic": {"lhs": mono[ell], "rhs": rhs_a},
        "b_harmonic_spinor": {"lhs": lhs_b, "rhs": rhs_b},
        "c_fischer_count": {"lhs": lhs_c, "rhs": rhs_c},
        "d_harmonic_scalar": {"lhs": lhs_d, "rhs": rhs_d},
    }
    for c in checks.values():
        c["pass"] = c["lhs"] == c["rhs"]
    return {
        "m": m,
        "k": k,
        "degree": ell,
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
    }

