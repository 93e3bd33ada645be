"""Monogenic Fischer decomposition engine.

A spinor-valued polynomial of degree l is written uniquely (for m >= 2k) as

    P = sum over (J, n, t) of  prod r^2_ij^{n_ij} * ux_J * M_{J,n,t},

with M_{J,n,t} monogenic of degree t and l = t + |J| + 2 sum n_ij.  All
bases are assembled blockwise by multidegree and solved exactly.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .clifford import ZERO
from .exactla import LUSolver, ExactMatrix, SubspaceBasis, rank_of_vectors
from .operators import GeneratorTag, OperatorExpr, apply, apply_coords
from .poly import ClPoly, graded_component, multidegree
from .spaces import block_chart, block_kernel, compositions, slice_chart, _rsq_projector

__all__ = [
    "StableRangeError",
    "DecompositionError",
    "SummandIndex",
    "DecompositionResult",
    "enumerate_summands",
    "summand_operator",
    "build_summand_basis",
    "summand_block_basis",
    "verify_theorem1",
    "verify_scalar_fischer",
    "fischer_decompose",
    "harmonic_refinement",
]


class StableRangeError(ValueError):
    def __init__(self, m: int, k: int):
        super().__init__(
            f"m={m}, k={k} is outside the stable range m >= 2k; "
            "directness is not guaranteed (use the force override to probe)"
        )
        self.m = m
        self.k = k


class DecompositionError(RuntimeError):
    pass


def _pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, k + 1) for j in range(i, k + 1)]


@dataclass(frozen=True, order=True)
class SummandIndex:
    """Summand label: J (increasing), exponents n_ij over pairs i <= j, degree t."""

    J: tuple[int, ...]
    n: tuple[int, ...]
    t: int

    def k(self) -> int:
        # number of pairs is k(k+1)/2
        p = len(self.n)
        k = 0
        while k * (k + 1) // 2 < p:
            k += 1
        return k

    def degree(self) -> int:
        return self.t + len(self.J) + 2 * sum(self.n)

    def shift(self, k: int) -> tuple[int, ...]:
        """Multidegree added by the multiplication operators."""
        w = [0] * k
        for j in self.J:
            w[j - 1] += 1
        for (i, j), c in zip(_pairs(k), self.n):
            w[i - 1] += c
            w[j - 1] += c
        return tuple(w)

    def n_map(self, k: int) -> dict[tuple[int, int], int]:
        return {p: c for p, c in zip(_pairs(k), self.n) if c}

    def label(self) -> str:
        k = self.k()
        J = "{" + ",".join(map(str, self.J)) + "}"
        n = ",".join(f"r{i}{j}^{c}" for (i, j), c in self.n_map(k).items()) or "1"
        return f"J={J} n=[{n}] t={self.t}"

    def to_json(self) -> dict:
        k = self.k()
        return {
            "J": list(self.J),
            "n": [[i, j, c] for (i, j), c in zip(_pairs(k), self.n)],
            "t": self.t,
        }


def enumerate_summands(k: int, ell: int, with_J: bool = True) -> list[SummandIndex]:
    """All (J, n, t) with t + |J| + 2 sum n = ell.

    Order: t descending, then J lexicographic, then n lexicographic.
    """
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    npairs = k * (k + 1) // 2
    Js = [()]
    if with_J:
        Js = [J for r in range(k + 1) for J in itertools.combinations(range(1, k + 1), r)]
    out = []
    for J in Js:
        rest = ell - len(J)
        if rest < 0:
            continue
        for half in range(rest // 2 + 1):
            for n in compositions(half, npairs):
                out.append(SummandIndex(tuple(J), n, rest - 2 * half))
    out.sort(key=lambda s: (-s.t, s.J, s.n))
    return out


def summand_operator(s: SummandIndex, k: int, order: str = "increasing") -> OperatorExpr:
    """prod r^2_ij^{n_ij} ux_{j_1} ... ux_{j_r} as an operator word."""
    op = OperatorExpr.identity()
    for (i, j), c in zip(_pairs(k), s.n):
        for _ in range(c):
            op = op * OperatorExpr.gen(GeneratorTag("RSQ", i, j))
    J = s.J if order == "increasing" else tuple(reversed(s.J))
    for j in J:
        op = op * OperatorExpr.gen(GeneratorTag("VECMUL", j))
    return op


def _tags_innermost_first(s: SummandIndex, k: int, order: str) -> list[GeneratorTag]:
    J = s.J if order == "increasing" else tuple(reversed(s.J))
    tags = [GeneratorTag("VECMUL", j) for j in reversed(J)]
    for (i, j), c in zip(_pairs(k), s.n):
        tags += [GeneratorTag("RSQ", i, j)] * c
    return tags


def _check_range(m: int, k: int, force: bool):
    if m < 2 * k and not force:
        raise StableRangeError(m, k)


def _family(spinor: bool) -> str:
    return "dirac" if spinor else "laplace"


@lru_cache(maxsize=None)
def _block_columns(m: int, k: int, a: tuple, spinor: bool, order: str) -> tuple:
    """Summand vectors landing in block ``a``: (summand, kernel index, vector)."""
    chart = block_chart(m, k, a, spinor)
    frame = chart.frame
    cols = []
    for s in enumerate_summands(k, sum(a), with_J=spinor):
        sh = s.shift(k)
        b = tuple(x - y for x, y in zip(a, sh))
        if min(b) < 0:
            continue
        bchart = block_chart(m, k, b, spinor)
        tags = _tags_innermost_first(s, k, order)
        for idx, v in enumerate(block_kernel(m, k, b, spinor, _family(spinor))):
            kv = bchart.to_keyvec(v)
            for g in tags:
                kv = apply_coords(g, kv, m, k, frame)
            cols.append((s, idx, chart.from_keyvec(kv)))
    return tuple(cols)


@lru_cache(maxsize=None)
def _block_solver(m: int, k: int, a: tuple, spinor: bool, order: str) -> LUSolver:
    chart = block_chart(m, k, a, spinor)
    cols = _block_columns(m, k, a, spinor, order)
    return LUSolver(ExactMatrix.from_columns(chart.dim, [c[2] for c in cols]))


def summand_block_basis(m: int, k: int, a, spinor: bool = True, order: str = "increasing") -> SubspaceBasis:
    """All summand vectors of one multidegree block, in summand order."""
    a = tuple(a)
    chart = block_chart(m, k, a, spinor)
    return SubspaceBasis(chart, tuple(c[2] for c in _block_columns(m, k, a, spinor, order)), f"summands{a}")


def build_summand_basis(s: SummandIndex, m: int, k: int, force: bool = False,
                        order: str = "increasing", spinor: bool = True) -> SubspaceBasis:
    """Images of the monogenic (harmonic if scalar) basis under the summand operator."""
    _check_range(m, k, force)
    ell = s.degree()
    chart = slice_chart(m, k, ell, spinor)
    vecs = []
    for a in compositions(ell, k):
        bchart = block_chart(m, k, a, spinor)
        for s2, _, v in _block_columns(m, k, a, spinor, order):
            if s2 == s:
                vecs.append(chart.from_keyvec(bchart.to_keyvec(v)))
    return SubspaceBasis(chart, tuple(vecs), s.label())


def _verify(m: int, k: int, ell: int, spinor: bool, force: bool, order: str) -> dict:
    t0 = time.perf_counter()
    stable = m >= 2 * k
    _check_range(m, k, force)
    summands = enumerate_summands(k, ell, with_J=spinor)
    dims = {s: 0 for s in summands}
    per_summand: dict = {s: [] for s in summands}
    total_rank = 0
    ambient = 0
    for a in compositions(ell, k):
        ambient += block_chart(m, k, a, spinor).dim
        cols = _block_columns(m, k, a, spinor, order)
        for s, _, v in cols:
            dims[s] += 1
            per_summand[s].append({(a, p): x for p, x in v.items()})
        total_rank += _block_solver(m, k, a, spinor, order).rank
    rows = []
    for s in summands:
        r = rank_of_vectors(per_summand[s])
        d = dims[s]
        row = s.to_json()
        row.update({"dim": d, "rank": r, "injective": r == d})
        rows.append(row)
    total = sum(dims.values())
    ok = total == ambient and total_rank == total and all(r["injective"] for r in rows)
    return {
        "m": m,
        "k": k,
        "degree": ell,
        "values": "spinor" if spinor else "scalar",
        "order": order,
        "stable_range": stable,
        "summands": rows,
        "total_dim": total,
        "ambient_dim": ambient,
        "rank": total_rank,
        "pass": ok,
        "elapsed": f"{time.perf_counter() - t0:.3f}",
    }


def verify_theorem1(m: int, k: int, ell: int, force: bool = False, order: str = "increasing") -> dict:
    """Directness and spanning of the monogenic Fischer decomposition in degree ``ell``."""
    return _verify(m, k, ell, True, force, order)


def verify_scalar_fischer(m: int, k: int, ell: int, force: bool = False) -> dict:
    """Scalar counterpart: P_l = sum prod r^2_ij^{n_ij} H_t, directly."""
    return _verify(m, k, ell, False, force, "increasing")


@dataclass
class DecompositionResult:
    m: int
    k: int
    components: dict  # SummandIndex -> (monogenic part, assembled term)
    residual: ClPoly
    unique: bool = True
    warnings: list = field(default_factory=list)

    def reassemble(self) -> ClPoly:
        acc = ClPoly.zero(self.m, self.k)
        for _, term in self.components.values():
            acc = acc + term
        return acc

    def to_json(self) -> dict:
        comps = []
        for s in sorted(self.components, key=lambda s: (-s.degree(), -s.t, s.J, s.n)):
            mono, term = self.components[s]
            row = s.to_json()
            row["monogenic"] = mono.to_json()
            row["term"] = term.to_json()
            comps.append(row)
        return {
            "m": self.m,
            "k": self.k,
            "components": comps,
            "residual_zero": self.residual.is_zero(),
            "unique": self.unique,
            "warnings": list(self.warnings),
            "reassembled": self.reassemble().to_json(),
        }


def _decompose_homogeneous(P: ClPoly, spinor: bool, force: bool, order: str, mparts: dict,
                           warnings: list) -> None:
    m, k = P.m, P.k
    ell = P.degree() if P else 0
    chart = slice_chart(m, k, ell, spinor)
    vec = chart.to_vector(P)
    blocks: dict = {}
    for p, c in vec.items():
        exp, t = chart.keys[p]
        blocks.setdefault(multidegree(exp, k), {})[(exp, t)] = c
    for a, kv in blocks.items():
        bchart = block_chart(m, k, a, spinor)
        solver = _block_solver(m, k, a, spinor, order)
        x = solver.solve(bchart.from_keyvec(kv))
        if x is None:
            if m >= 2 * k:
                raise DecompositionError(f"inconsistent system in block {a} inside the stable range")
            warnings.append(f"block {a}: no witness found (outside the stable range)")
            continue
        cols = _block_columns(m, k, a, spinor, order)
        for c, coef in x.items():
            s, idx, _ = cols[c]
            b = tuple(u - w for u, w in zip(a, s.shift(k)))
            bch = block_chart(m, k, b, spinor)
            v = block_kernel(m, k, b, spinor, _family(spinor))[idx]
            acc = mparts.setdefault(s, {})
            for p, val in v.items():
                key = bch.keys[p]
                nv = acc.get(key, ZERO) + coef * val
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)


def fischer_decompose(P: ClPoly, force: bool = False, order: str = "increasing",
                      spinor: bool = True) -> DecompositionResult:
    """Exact decomposition of ``P`` into its Fischer components.

    Inhomogeneous input is split into graded components.  The assembled terms
    are recomputed from the monogenic parts through the generic operator
    action, so the residual is an independent check.
    """
    m, k = P.m, P.k
    _check_range(m, k, force)
    mparts: dict = {}
    warnings: list = []
    if m < 2 * k:
        warnings.append("outside the stable range: the witness need not be unique")
    degrees = sorted({sum(e) for e in P.terms})
    for d in degrees:
        _decompose_homogeneous(graded_component(P, d), spinor, force, order, mparts, warnings)
    components = {}
    for s, kv in mparts.items():
        chart = slice_chart(m, k, s.t, spinor)
        mono = chart.to_poly(chart.from_keyvec(kv))
        if mono.is_zero():
            continue
        term = apply(summand_operator(s, k, order), mono)
        components[s] = (mono, term)
    result = DecompositionResult(m, k, components, ClPoly.zero(m, k), m >= 2 * k, warnings)
    result.residual = P - result.reassemble()
    return result


def harmonic_refinement(ell: int, m: int, k: int, force: bool = False) -> dict:
    """H_l x S as the direct sum over J of the harmonic projections of ux_J M_{l-|J|}."""
    t0 = time.perf_counter()
    _check_range(m, k, force)
    Js = [J for r in range(min(k, ell) + 1) for J in itertools.combinations(range(1, k + 1), r)]
    dims = {J: 0 for J in Js}
    ranks = {J: 0 for J in Js}
    harmonic_ok = True
    total_rank = 0
    h_dim = 0
    laplacians = [GeneratorTag("LAPL", i, j) for i in range(1, k + 1) for j in range(i, k + 1)]
    for a in compositions(ell, k):
        chart = block_chart(m, k, a, True)
        frame = chart.frame
        proj = _rsq_projector(m, k, a, True)
        allv = []
        for J in Js:
            b = list(a)
            for j in J:
                b[j - 1] -= 1
            if min(b) < 0:
                continue
            b = tuple(b)
            bchart = block_chart(m, k, b, True)
            part = []
            for v in block_kernel(m, k, b, True, "dirac"):
                kv = bchart.to_keyvec(v)
                for j in reversed(J):
                    kv = apply_coords(GeneratorTag("VECMUL", j), kv, m, k, frame)
                w = chart.from_keyvec(kv)
                r = proj.project(w)
                h = dict(w)
                for p, c in r.items():
                    nv = h.get(p, ZERO) - c
                    if nv:
                        h[p] = nv
                    else:
                        h.pop(p, None)
                hk = chart.to_keyvec(h)
                for L in laplacians:
                    if apply_coords(L, hk, m, k, frame):
                        harmonic_ok = False
                part.append(h)
            dims[J] += len(part)
            ranks[J] += rank_of_vectors(part)
            allv.extend(part)
        total_rank += rank_of_vectors(allv)
        h_dim += len(block_kernel(m, k, a, True, "laplace"))
    parts = [
        {"J": list(J), "dim_M": dims[J], "rank": ranks[J], "injective": ranks[J] == dims[J]}
        for J in Js
    ]
    total = sum(dims.values())
    ok = harmonic_ok and total_rank == total == h_dim and all(p["injective"] for p in parts)
    return {
        "m": m,
        "k": k,
        "degree": ell,
        "parts": parts,
        "total_dim": total,
        "rank": total_rank,
        "harmonic_dim": h_dim,
        "projections_harmonic": harmonic_ok,
        "pass": ok,
        "elapsed": f"{time.perf_counter() - t0:.3f}",
    }
