"""Explicit bases of the polynomial spaces and the two Fischer projections.

Every operator involved (Dirac, Laplacians, r^2, vector multiplication and
the gl(k) generators) shifts the multidegree by a fixed amount, so all
spaces are assembled from independent kernels on multidegree blocks.
Vectors are sparse coordinate dicts over a :class:`CoordinateChart`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .clifford import ONE as _ONE
from .clifford import ZERO as _ZERO
from .clifford import build_spinor_frame
from .exactla import (
    CoordinateChart,
    ExactMatrix,
    IncrementalSpan,
    LinAlgError,
    Projector,
    SubspaceBasis,
    kernel_basis,
    rank_of_vectors,
)
from .operators import GeneratorTag, apply_coords, monomials_of_degree, triangular_split
from .poly import ClPoly, PolyError, multidegree

__all__ = [
    "SpaceError",
    "slice_chart",
    "block_chart",
    "compositions",
    "partitions",
    "is_partition",
    "monomial_basis",
    "harmonic_space",
    "monogenic_space",
    "simplicial_monogenics",
    "simplicial_harmonics",
    "harmonic_projection",
    "monogenic_projection",
    "generate_M_component",
    "monogenic_span_check",
    "export_manifest",
    "block_kernel",
]


class SpaceError(ValueError):
    pass


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All multidegrees of ``parts`` entries summing to ``total`` (lex descending)."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def is_partition(a: Sequence[int]) -> bool:
    return all(x >= 0 for x in a) and all(a[i] >= a[i + 1] for i in range(len(a) - 1))


def partitions(total: int, parts: int) -> list[tuple[int, ...]]:
    return [a for a in compositions(total, parts) if is_partition(a)]


def _frame(m: int, spinor: bool):
    return build_spinor_frame(m) if spinor else None


def _kind(spinor: bool) -> str:
    return "spinor" if spinor else "scalar"


@lru_cache(maxsize=None)
def slice_chart(m: int, k: int, degree: int, spinor: bool = True) -> CoordinateChart:
    """Chart of P_degree (x S): monomials lex descending, then spinor index."""
    if degree < 0:
        raise SpaceError("degree must be nonnegative")
    frame = _frame(m, spinor)
    nsp = frame.dim if spinor else 1
    keys = [(exp, t) for exp in monomials_of_degree(m * k, degree) for t in range(nsp)]
    return CoordinateChart(m, k, keys, frame, f"P_{degree}({_kind(spinor)}; m={m}, k={k})", degree)


@lru_cache(maxsize=None)
def block_chart(m: int, k: int, a: tuple[int, ...], spinor: bool = True) -> CoordinateChart:
    """Sub-chart of the multidegree-``a`` block."""
    if len(a) != k or any(x < 0 for x in a):
        raise SpaceError(f"bad multidegree {a} for k={k}")
    full = slice_chart(m, k, sum(a), spinor)
    return full.sub_chart(lambda key: multidegree(key[0], k) == a,
                          f"P_{a}({_kind(spinor)}; m={m}, k={k})", a)


def _selector_blocks(k: int, selector) -> tuple[int, list[tuple[int, ...]]]:
    if isinstance(selector, int):
        if selector < 0:
            raise SpaceError("degree must be nonnegative")
        return selector, compositions(selector, k)
    a = tuple(int(x) for x in selector)
    if len(a) != k or any(x < 0 for x in a):
        raise SpaceError(f"bad multidegree {a} for k={k}")
    return sum(a), [a]


def _chart_for(m, k, selector, spinor) -> CoordinateChart:
    if isinstance(selector, int):
        return slice_chart(m, k, selector, spinor)
    return block_chart(m, k, tuple(selector), spinor)


def _operator_matrix(m: int, k: int, a: tuple, spinor: bool, gens: Sequence[GeneratorTag],
                     chart: CoordinateChart) -> ExactMatrix:
    """Stacked matrix of ``gens`` on the columns of ``chart`` (block ``a``)."""
    frame = chart.frame
    row_index: dict = {}
    rows: list[dict] = []
    for col, key in enumerate(chart.keys):
        for g in gens:
            img = apply_coords(g, {key: _ONE}, m, k, frame)
            for tkey, c in img.items():
                r = row_index.get((g, tkey))
                if r is None:
                    r = row_index[(g, tkey)] = len(rows)
                    rows.append({})
                rows[r][col] = c
    return ExactMatrix._wrap(len(rows), chart.dim, rows)


_FAMILIES = ("dirac", "laplace", "dirac+t_minus", "laplace+t_minus", "none")


def _family_gens(k: int, family: str) -> list[GeneratorTag]:
    split = triangular_split(k)
    if family == "none":
        return []
    gens = list(split["f_minus"] if family.startswith("dirac") else split["p_minus"])
    if family.endswith("t_minus"):
        gens += split["t_minus"]
    return gens


@lru_cache(maxsize=None)
def block_kernel(m: int, k: int, a: tuple[int, ...], spinor: bool, family: str,
                 chirality: int | None = None) -> tuple[dict, ...]:
    """Kernel of an operator family on block ``a``, as block-chart vectors."""
    if family not in _FAMILIES:
        raise SpaceError(f"unknown operator family {family!r}")
    chart = block_chart(m, k, a, spinor)
    if chirality is not None:
        frame = chart.frame
        if frame is None or frame.chirality is None:
            raise SpaceError("chirality filter needs even m and spinor values")
        keep = [p for p, (_, t) in enumerate(chart.keys) if frame.chirality[t] == chirality]
    else:
        keep = list(range(chart.dim))
    gens = _family_gens(k, family)
    if not gens:
        return tuple({p: _ONE} for p in keep)
    M = _operator_matrix(m, k, a, spinor, gens, chart)
    if chirality is not None:
        pos = {p: q for q, p in enumerate(keep)}
        sub = [{pos[c]: v for c, v in row.items() if c in pos} for row in M.data]
        M = ExactMatrix._wrap(M.nrows, len(keep), sub)
        return tuple({keep[q]: v for q, v in vec.items()} for vec in kernel_basis(M))
    return tuple(kernel_basis(M))


def _assemble(m, k, selector, spinor, family, label, chirality=None) -> SubspaceBasis:
    _, blocks = _selector_blocks(k, selector)
    chart = _chart_for(m, k, selector, spinor)
    vecs = []
    for a in blocks:
        bchart = block_chart(m, k, a, spinor)
        for v in block_kernel(m, k, a, spinor, family, chirality):
            vecs.append(chart.from_keyvec(bchart.to_keyvec(v)))
    return SubspaceBasis(chart, tuple(vecs), label)


def _sel_label(selector) -> str:
    return str(selector) if isinstance(selector, int) else str(tuple(selector))


def monomial_basis(m: int, k: int, selector, spinor: bool = True) -> SubspaceBasis:
    """Full monomial (x spinor frame) basis of a degree or multidegree slice."""
    return _assemble(m, k, selector, spinor, "none", f"P_{_sel_label(selector)}")


def harmonic_space(m: int, k: int, degree, spinor: bool = False) -> SubspaceBasis:
    """Joint kernel of all Laplacians on the slice."""
    name = "H" if not spinor else "HxS"
    return _assemble(m, k, degree, spinor, "laplace", f"{name}_{_sel_label(degree)}")


def monogenic_space(m: int, k: int, degree) -> SubspaceBasis:
    """Joint kernel of the k Dirac operators on the spinor-valued slice."""
    return _assemble(m, k, degree, True, "dirac", f"M_{_sel_label(degree)}")


def _check_partition(a, k):
    a = tuple(int(x) for x in a)
    if len(a) != k:
        raise SpaceError(f"multidegree {a} has length {len(a)}, expected k={k}")
    if not is_partition(a):
        raise SpaceError(f"multidegree {a} is not a partition")
    return a


def simplicial_monogenics(m: int, k: int, a, chirality: int | None = None) -> SubspaceBasis:
    """Monogenics of multidegree ``a`` killed by the raising part t_-.

    For even ``m`` a ``chirality`` of +1 or -1 keeps one half-spinor part.
    """
    a = _check_partition(a, k)
    tag = "" if chirality is None else ("+" if chirality > 0 else "-")
    return _assemble(m, k, a, True, "dirac+t_minus", f"MS{tag}_{a}", chirality)


def simplicial_harmonics(m: int, k: int, a) -> SubspaceBasis:
    a = _check_partition(a, k)
    return _assemble(m, k, a, False, "laplace+t_minus", f"HS_{a}")


# ---------------------------------------------------------------------------
# projections


def _split_blocks(P: ClPoly, spinor: bool) -> tuple[int, dict]:
    if not P.is_homogeneous():
        raise PolyError("projection needs a homogeneous polynomial")
    ell = P.degree() if P else 0
    chart = slice_chart(P.m, P.k, ell, spinor)
    vec = chart.to_vector(P)
    blocks: dict = {}
    for p, c in vec.items():
        exp, t = chart.keys[p]
        blocks.setdefault(multidegree(exp, P.k), {})[(exp, t)] = c
    return ell, blocks


@lru_cache(maxsize=None)
def _rsq_projector(m: int, k: int, a: tuple, spinor: bool) -> Projector:
    """Projector onto sum_{i<=j} r^2_ij P_{a - e_i - e_j} inside block ``a``."""
    chart = block_chart(m, k, a, spinor)
    frame = chart.frame
    vecs = []
    for g in triangular_split(k)["p_plus"]:
        lower = list(a)
        lower[g.i - 1] -= 1
        lower[g.j - 1] -= 1
        if min(lower) < 0:
            continue
        for key in block_chart(m, k, tuple(lower), spinor).keys:
            vecs.append(chart.from_keyvec(apply_coords(g, {key: _ONE}, m, k, frame)))
    return Projector(chart, vecs)


@lru_cache(maxsize=None)
def _monogenic_projector(m: int, k: int, a: tuple) -> Projector:
    return Projector(block_chart(m, k, a, True), block_kernel(m, k, a, True, "dirac"))


def harmonic_projection(P: ClPoly, spinor: bool = True) -> ClPoly:
    """Fischer-orthogonal projection of a homogeneous polynomial onto the harmonics."""
    ell, blocks = _split_blocks(P, spinor)
    out = ClPoly.zero(P.m, P.k)
    for a, kv in blocks.items():
        proj = _rsq_projector(P.m, P.k, a, spinor)
        chart = proj.chart
        v = chart.from_keyvec(kv)
        r = proj.project(v)
        h = dict(v)
        for p, c in r.items():
            nv = h.get(p, _ZERO) - c
            if nv:
                h[p] = nv
            else:
                h.pop(p, None)
        out = out + chart.to_poly(h)
    return out


def monogenic_projection(P: ClPoly) -> ClPoly:
    """Component of ``P`` in M_l along sum_j ux_j (P_{l-1} x S)."""
    ell, blocks = _split_blocks(P, True)
    out = ClPoly.zero(P.m, P.k)
    for a, kv in blocks.items():
        proj = _monogenic_projector(P.m, P.k, a)
        out = out + proj.chart.to_poly(proj.project(proj.chart.from_keyvec(kv)))
    return out


# ---------------------------------------------------------------------------
# generation under t_+


def _tplus_closure(m: int, k: int, seeds: Sequence[tuple[tuple, dict]]) -> dict:
    """Span closure of block-keyed vectors under t_+; returns {block: IncrementalSpan}."""
    frame = build_spinor_frame(m)
    gens = triangular_split(k)["t_plus"]
    spans: dict = {}
    charts: dict = {}

    def push(a, kv):
        chart = charts.get(a)
        if chart is None:
            chart = charts[a] = block_chart(m, k, a, True)
            spans[a] = IncrementalSpan()
        return spans[a].add(chart.from_keyvec(kv))

    queue = []
    for a, kv in seeds:
        if push(a, kv):
            queue.append((a, kv))
    while queue:
        a, kv = queue.pop()
        for g in gens:
            img = apply_coords(g, kv, m, k, frame)
            if not img:
                continue
            b = tuple(x + y for x, y in zip(a, g.weight(k)))
            if push(b, img):
                queue.append((b, img))
    return {a: (charts[a], spans[a]) for a in spans}


def generate_M_component(m: int, k: int, a) -> SubspaceBasis:
    """M_(a): the t_+ closure of the simplicial monogenics of multidegree ``a``."""
    a = _check_partition(a, k)
    seed_chart = block_chart(m, k, a, True)
    seeds = [(a, seed_chart.to_keyvec(v)) for v in block_kernel(m, k, a, True, "dirac+t_minus")]
    closure = _tplus_closure(m, k, seeds)
    chart = slice_chart(m, k, sum(a), True)
    vecs = []
    for b in sorted(closure, reverse=True):
        bchart, span = closure[b]
        for p in sorted(span.rows):
            vecs.append(chart.from_keyvec(bchart.to_keyvec(span.rows[p])))
    return SubspaceBasis(chart, tuple(vecs), f"M_({','.join(map(str, a))})")


def monogenic_span_check(m: int, k: int, ell: int) -> dict:
    """Check M_l = M^S_l + sum_{i<j} h_ji M_l as an equality of spans.

    Also records that simplicial monogenics vanish on non-partition blocks.
    """
    frame = build_spinor_frame(m)
    gens = triangular_split(k)["t_plus"]
    ok = True
    nonpartition_zero = True
    dim_m = 0
    dim_sum = 0
    for a in compositions(ell, k):
        chart = block_chart(m, k, a, True)
        mono = block_kernel(m, k, a, True, "dirac")
        simp = block_kernel(m, k, a, True, "dirac+t_minus")
        if not is_partition(a) and simp:
            nonpartition_zero = False
        span = IncrementalSpan()
        for v in simp:
            span.add(v)
        for g in gens:
            w = tuple(-x for x in g.weight(k))
            src = tuple(x + y for x, y in zip(a, w))
            if min(src) < 0:
                continue
            schart = block_chart(m, k, src, True)
            for v in block_kernel(m, k, src, True, "dirac"):
                img = apply_coords(g, schart.to_keyvec(v), m, k, frame)
                if img:
                    span.add(chart.from_keyvec(img))
        mspan = IncrementalSpan()
        for v in mono:
            mspan.add(v)
        contained = all(mspan.contains(v) for v in span.rows.values())
        dim_m += len(mono)
        dim_sum += span.rank
        ok = ok and contained and span.rank == len(mono)
    return {
        "m": m,
        "k": k,
        "degree": ell,
        "dim_M": dim_m,
        "dim_span": dim_sum,
        "nonpartition_simplicial_zero": nonpartition_zero,
        "pass": ok and nonpartition_zero,
    }


def export_manifest(space: str, basis: SubspaceBasis) -> dict:
    """Interchange form of a basis: manifest plus one polynomial per element."""
    chart = basis.chart
    sel = chart.selector
    return {
        "space": space,
        "m": chart.m,
        "k": chart.k,
        "selector": sel if isinstance(sel, int) else list(sel) if sel is not None else None,
        "values": "spinor" if chart.spinor else "scalar",
        "dim": basis.dim,
        "elements": [P.to_json() for P in basis.elements()],
    }


def dims_by_block(basis: SubspaceBasis) -> dict:
    out: dict = {}
    k = basis.chart.k
    for v in basis.vectors:
        exp, _ = basis.chart.keys[next(iter(v))]
        a = multidegree(exp, k)
        out[a] = out.get(a, 0) + 1
    return out


def rank_check(basis: SubspaceBasis) -> bool:
    try:
        return rank_of_vectors(basis.vectors) == basis.dim
    except LinAlgError:
        return False
