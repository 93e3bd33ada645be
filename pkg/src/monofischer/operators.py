"""Invariant differential operators on Clifford-valued polynomials.

Generators (vector indices ``i, j`` in ``1..k``)::

    DIRAC j      sum_a e_a d/dx_aj
    VECMUL j     sum_a e_a x_aj              (left multiplication)
    RSQ (i,j)    sum_a x_ai x_aj             i <= j
    LAPL (i,j)   sum_a d/dx_ai d/dx_aj       i <= j
    EULER (i,j)  sum_a x_ai d/dx_aj
    H (i,j)      EULER(i,j) + (m/2) delta_ij

Words are composed right to left: the word ``(A, B)`` applies ``B`` first.
Structure constants of brackets are discovered by :func:`check_relation`,
never hard-coded.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

from gmpy2 import mpq

from .clifford import (
    ONE,
    ZERO,
    CliffordElement,
    ExactScalar,
    SpinorFrame,
    _mask_mul,
    build_spinor_frame,
)
from .poly import ClPoly

__all__ = [
    "KINDS",
    "GeneratorTag",
    "OperatorExpr",
    "OperatorError",
    "apply",
    "apply_coords",
    "commutator",
    "anticommutator",
    "bracket",
    "triangular_split",
    "all_generators",
    "RelationReport",
    "check_relation",
    "relation_suite",
    "monomials_upto",
    "monomials_of_degree",
]

KINDS = ("DIRAC", "VECMUL", "RSQ", "LAPL", "EULER", "H")
_ODD = {"DIRAC", "VECMUL"}


class OperatorError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GeneratorTag:
    kind: str
    i: int
    j: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OperatorError(f"unknown generator kind {self.kind!r}")
        if self.i < 1:
            raise OperatorError(f"index {self.i} out of range")
        if self.kind in _ODD:
            if self.j != 0:
                raise OperatorError(f"{self.kind} takes one index")
        else:
            if self.j < 1:
                raise OperatorError(f"{self.kind} takes two indices")
            if self.kind in ("RSQ", "LAPL") and self.i > self.j:
                raise OperatorError(f"{self.kind}({self.i},{self.j}) needs i <= j")

    @property
    def odd(self) -> bool:
        return self.kind in _ODD

    def max_index(self) -> int:
        return max(self.i, self.j)

    def degree_shift(self) -> int:
        return {"DIRAC": -1, "VECMUL": 1, "RSQ": 2, "LAPL": -2, "EULER": 0, "H": 0}[self.kind]

    def weight(self, k: int) -> tuple[int, ...]:
        """Shift of the multidegree (the gl(k) diagonal weight)."""
        w = [0] * k
        if self.kind == "DIRAC":
            w[self.i - 1] -= 1
        elif self.kind == "VECMUL":
            w[self.i - 1] += 1
        elif self.kind == "RSQ":
            w[self.i - 1] += 1
            w[self.j - 1] += 1
        elif self.kind == "LAPL":
            w[self.i - 1] -= 1
            w[self.j - 1] -= 1
        else:
            w[self.i - 1] += 1
            w[self.j - 1] -= 1
        return tuple(w)

    def __str__(self):
        if self.odd:
            return f"{self.kind}({self.i})"
        return f"{self.kind}({self.i},{self.j})"


def DIRAC(j):
    return GeneratorTag("DIRAC", j)


def VECMUL(j):
    return GeneratorTag("VECMUL", j)


def _check_indices(tag: GeneratorTag, m: int, k: int):
    if tag.max_index() > k:
        raise OperatorError(f"{tag} has an index above k={k}")


# ---------------------------------------------------------------------------
# single generators on ClPoly


def _acc(out: dict, exp: tuple, mask: int, c: ExactScalar):
    row = out.get(exp)
    if row is None:
        out[exp] = {mask: c}
        return
    v = row.get(mask)
    row[mask] = c if v is None else v + c


def _finish(m: int, k: int, out: dict) -> ClPoly:
    terms = {}
    for exp, row in out.items():
        clean = {mask: c for mask, c in row.items() if c}
        if clean:
            terms[exp] = CliffordElement._wrap(m, clean)
    return ClPoly._wrap(m, k, terms)


def _apply_gen(tag: GeneratorTag, P: ClPoly) -> ClPoly:
    m, k = P.m, P.k
    kind = tag.kind
    out: dict = {}
    if kind in ("DIRAC", "VECMUL"):
        j = tag.i
        for exp, c in P.terms.items():
            for a in range(1, m + 1):
                pos = (a - 1) * k + j - 1
                bit = 1 << (a - 1)
                if kind == "DIRAC":
                    e = exp[pos]
                    if not e:
                        continue
                    new = exp[:pos] + (e - 1,) + exp[pos + 1:]
                    f = e
                else:
                    new = exp[:pos] + (exp[pos] + 1,) + exp[pos + 1:]
                    f = 1
                for mask, v in c.terms.items():
                    sign, mc = _mask_mul(bit, mask)
                    val = v * (f * sign) if (f != 1 or sign != 1) else v
                    _acc(out, new, mc, val)
        return _finish(m, k, out)

    i, j = tag.i, tag.j
    for exp, c in P.terms.items():
        for a in range(1, m + 1):
            pi = (a - 1) * k + i - 1
            pj = (a - 1) * k + j - 1
            lst = list(exp)
            if kind == "RSQ":
                lst[pi] += 1
                lst[pj] += 1
                f = 1
            elif kind == "LAPL":
                if pi == pj:
                    f = lst[pi] * (lst[pi] - 1)
                    if not f:
                        continue
                    lst[pi] -= 2
                else:
                    f = lst[pi] * lst[pj]
                    if not f:
                        continue
                    lst[pi] -= 1
                    lst[pj] -= 1
            else:  # EULER / H share the first-order part
                f = lst[pj]
                if not f:
                    continue
                lst[pj] -= 1
                lst[pi] += 1
            new = tuple(lst)
            for mask, v in c.terms.items():
                _acc(out, new, mask, v * f if f != 1 else v)
        if kind == "H" and i == j:
            half_m = mpq(m, 2)
            for mask, v in c.terms.items():
                _acc(out, exp, mask, v * half_m)
    return _finish(m, k, out)


# ---------------------------------------------------------------------------
# operator expressions


class OperatorExpr:
    """Linear combination of words in the generators.

    ``terms`` maps a word (tuple of :class:`GeneratorTag`) to its exact
    coefficient.  The empty word is the identity.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for word, c in (terms or {}).items():
            c = ExactScalar.coerce(c)
            word = tuple(word)
            for g in word:
                if not isinstance(g, GeneratorTag):
                    raise OperatorError(f"{g!r} is not a generator")
            if c:
                v = clean.get(word)
                v = c if v is None else v + c
                if v:
                    clean[word] = v
                else:
                    clean.pop(word, None)
        self.terms = clean

    @classmethod
    def gen(cls, kind: str | GeneratorTag, i: int | None = None, j: int = 0, coeff=1) -> "OperatorExpr":
        tag = kind if isinstance(kind, GeneratorTag) else GeneratorTag(kind, i, j)
        return cls({(tag,): coeff})

    @classmethod
    def identity(cls, coeff=1) -> "OperatorExpr":
        return cls({(): coeff})

    @classmethod
    def zero(cls) -> "OperatorExpr":
        return cls({})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return OperatorExpr(out)

    def __neg__(self):
        return OperatorExpr({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out[w] + c1 * c2 if w in out else c1 * c2
            return OperatorExpr(out)
        c = ExactScalar.coerce(other)
        return OperatorExpr({w: v * c for w, v in self.terms.items()})

    def __rmul__(self, other):
        c = ExactScalar.coerce(other)
        return OperatorExpr({w: v * c for w, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, OperatorExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def generators(self) -> set[GeneratorTag]:
        return {g for w in self.terms for g in w}

    def __repr__(self):
        if not self.terms:
            return "OperatorExpr(0)"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            name = "*".join(map(str, w)) or "1"
            parts.append(f"({c}){name}")
        return " + ".join(parts)

    __str__ = __repr__


def commutator(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return a * b - b * a


def anticommutator(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return a * b + b * a


def bracket(a: OperatorExpr, b: OperatorExpr, kind: str) -> OperatorExpr:
    if kind == "commutator":
        return commutator(a, b)
    if kind == "anticommutator":
        return anticommutator(a, b)
    raise OperatorError(f"unknown bracket {kind!r}")


def apply(op: OperatorExpr | GeneratorTag, P: ClPoly) -> ClPoly:
    """Apply an operator expression to a Clifford-valued polynomial."""
    if isinstance(op, GeneratorTag):
        op = OperatorExpr.gen(op)
    for g in op.generators():
        _check_indices(g, P.m, P.k)
    out = ClPoly.zero(P.m, P.k)
    cache: dict[tuple, ClPoly] = {}
    for word, c in op.terms.items():
        # share suffixes between words
        cur = P
        for pos in range(len(word) - 1, -1, -1):
            suffix = word[pos:]
            hit = cache.get(suffix)
            if hit is None:
                hit = _apply_gen(word[pos], cur)
                cache[suffix] = hit
            cur = hit
        out = out + (cur if c == ONE else cur.scale(c))
    return out


# ---------------------------------------------------------------------------
# coordinate form: spinor-valued polynomials as {(exp, t): scalar}


def apply_coords(tag: GeneratorTag, vec: Mapping[tuple, ExactScalar], m: int, k: int,
                 frame: SpinorFrame | None) -> dict:
    """Apply one generator to a coordinate vector.

    Keys are ``(exp, t)`` with ``t`` a spinor-frame index (``0`` and
    ``frame=None`` for scalar-valued polynomials).  Odd generators need the
    frame.
    """
    out: dict = {}

    def add(key, c):
        v = out.get(key)
        out[key] = c if v is None else v + c

    kind = tag.kind
    if kind in _ODD:
        if frame is None:
            raise OperatorError(f"{tag} needs a spinor frame")
        j = tag.i
        for (exp, t), c in vec.items():
            for a in range(1, m + 1):
                pos = (a - 1) * k + j - 1
                if kind == "DIRAC":
                    e = exp[pos]
                    if not e:
                        continue
                    new = exp[:pos] + (e - 1,) + exp[pos + 1:]
                    f = c * e
                else:
                    new = exp[:pos] + (exp[pos] + 1,) + exp[pos + 1:]
                    f = c
                for row, s in frame.action[a - 1][t]:
                    add((new, row), f * s)
    else:
        i, j = tag.i, tag.j
        for (exp, t), c in vec.items():
            for a in range(1, m + 1):
                pi = (a - 1) * k + i - 1
                pj = (a - 1) * k + j - 1
                lst = list(exp)
                if kind == "RSQ":
                    lst[pi] += 1
                    lst[pj] += 1
                    f = 1
                elif kind == "LAPL":
                    if pi == pj:
                        f = lst[pi] * (lst[pi] - 1)
                        if not f:
                            continue
                        lst[pi] -= 2
                    else:
                        f = lst[pi] * lst[pj]
                        if not f:
                            continue
                        lst[pi] -= 1
                        lst[pj] -= 1
                else:
                    f = lst[pj]
                    if not f:
                        continue
                    lst[pj] -= 1
                    lst[pi] += 1
                add((tuple(lst), t), c * f if f != 1 else c)
            if kind == "H" and i == j:
                add((exp, t), c * mpq(m, 2))
    return {key: c for key, c in out.items() if c}


# ---------------------------------------------------------------------------
# generator families


def triangular_split(k: int) -> dict[str, list[GeneratorTag]]:
    """Generator families of osp(1|2k) = f_- + p_- + t + p_+ + f_+."""
    if k < 1:
        raise OperatorError("k must be positive")
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i, k + 1)]
    return {
        "p_plus": [GeneratorTag("RSQ", i, j) for i, j in pairs],
        "p_minus": [GeneratorTag("LAPL", i, j) for i, j in pairs],
        "t_0": [GeneratorTag("H", i, i) for i in range(1, k + 1)],
        # t_+ = span{h_ji, i < j}, t_- = span{h_ij, i < j}
        "t_plus": [GeneratorTag("H", j, i) for i in range(1, k + 1) for j in range(i + 1, k + 1)],
        "t_minus": [GeneratorTag("H", i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)],
        "f_plus": [GeneratorTag("VECMUL", i) for i in range(1, k + 1)],
        "f_minus": [GeneratorTag("DIRAC", i) for i in range(1, k + 1)],
    }


def all_generators(k: int) -> list[GeneratorTag]:
    fam = triangular_split(k)
    order = ("f_minus", "p_minus", "t_minus", "t_0", "t_plus", "p_plus", "f_plus")
    return [g for name in order for g in fam[name]]


# ---------------------------------------------------------------------------
# relation checking


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree ``d``, descending lexicographic."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        exp = [0] * nvars
        for p in combo:
            exp[p] += 1
        out.append(tuple(exp))
    out.sort(reverse=True)
    return out


def monomials_upto(nvars: int, dmax: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(dmax + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


@dataclass
class RelationReport:
    relation: str
    bracket: str
    constants: dict[str, str]
    max_degree: int
    m: int
    k: int
    passed: bool
    inputs_checked: int
    counterexample: dict | None = None
    elapsed: float = 0.0

    def to_json(self) -> dict:
        out = {
            "relation": self.relation,
            "bracket": self.bracket,
            "constant_found": self.constants,
            "max_degree": self.max_degree,
            "m": self.m,
            "k": self.k,
            "pass": self.passed,
            "inputs_checked": self.inputs_checked,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


class _Fitter:
    """Incremental exact solver for ``sum_c x_c T_c = R`` over many equations."""

    def __init__(self, n: int):
        self.n = n
        self.pivots: dict[int, tuple[dict, ExactScalar]] = {}
        self.order: list[int] = []

    def add(self, row: dict[int, ExactScalar], rhs: ExactScalar) -> bool:
        row = dict(row)
        for p in self.order:
            c = row.get(p)
            if c:
                prow, prhs = self.pivots[p]
                for col, v in prow.items():
                    nv = row.get(col, ZERO) - c * v
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
                rhs = rhs - c * prhs
        if not row:
            return not rhs
        p = min(row)
        inv = row[p].inverse()
        prow = {col: v * inv for col, v in row.items()}
        prhs = rhs * inv
        # keep earlier pivot rows reduced so the solution reads off directly
        for q in self.order:
            qrow, qrhs = self.pivots[q]
            c = qrow.get(p)
            if c:
                for col, v in prow.items():
                    nv = qrow.get(col, ZERO) - c * v
                    if nv:
                        qrow[col] = nv
                    else:
                        qrow.pop(col, None)
                self.pivots[q] = (qrow, qrhs - c * prhs)
        self.pivots[p] = (prow, prhs)
        self.order.append(p)
        self.order.sort()
        return True

    def solution(self) -> list[ExactScalar] | None:
        if len(self.pivots) < self.n:
            return None
        return [self.pivots[p][1] for p in range(self.n)]


def _label(expr: OperatorExpr) -> str:
    if len(expr.terms) == 1:
        (w, c), = expr.terms.items()
        if c == ONE:
            return "*".join(map(str, w)) or "1"
    return str(expr)


def _inputs(m: int, k: int, max_degree: int, mode: str) -> list[ClPoly]:
    monos = monomials_upto(m * k, max_degree)
    if mode == "clifford":
        one = CliffordElement.scalar(m, 1)
        return [ClPoly._wrap(m, k, {e: one}) for e in monos]
    if mode == "spinor":
        frame = build_spinor_frame(m)
        return [ClPoly._wrap(m, k, {e: s}) for e in monos for s in frame.basis]
    raise OperatorError(f"unknown input mode {mode!r}")


def _flatten(P: ClPoly) -> dict:
    return {(e, mask): v for e, c in P.terms.items() for mask, v in c.terms.items()}


def check_relation(
    x: OperatorExpr,
    y: OperatorExpr,
    expected: OperatorExpr | Sequence[OperatorExpr],
    bracket_kind: str,
    m: int,
    k: int,
    max_degree: int,
    *,
    fit: bool = False,
    inputs: str = "clifford",
    _images: Mapping | None = None,
) -> RelationReport:
    """Check ``bracket(x, y) == expected`` on all monomial inputs of degree <= max_degree.

    With ``fit=True``, ``expected`` is a list of candidate operators and the
    coefficients ``c`` in ``bracket(x, y) = sum c_i candidate_i`` are solved
    for exactly; they are reported in ``constants``.  In ``clifford`` mode
    the inputs are ``x^alpha * 1``: every operator here acts by left
    multiplication, so residuals on ``x^alpha * e_B`` are the residuals on
    ``x^alpha`` times the invertible ``e_B``, and this covers every
    monomial-blade input.  ``spinor`` mode feeds ``x^alpha s_t`` instead.
    """
    if max_degree < 0:
        raise OperatorError("max_degree must be nonnegative")
    t0 = time.perf_counter()
    if isinstance(expected, OperatorExpr):
        cands = [expected]
    else:
        cands = list(expected)
    for op in [x, y, *cands]:
        for g in op.generators():
            _check_indices(g, m, k)
    sym = "{" if bracket_kind == "anticommutator" else "["
    close = "}" if bracket_kind == "anticommutator" else "]"
    if fit:
        rhs_name = " + ".join(f"c{n}*{_label(c)}" for n, c in enumerate(cands)) or "0"
    else:
        rhs_name = " + ".join(_label(c) for c in cands) or "0"
    relation = f"{sym}{_label(x)}, {_label(y)}{close} = {rhs_name}"

    sign = 1 if bracket_kind == "anticommutator" else -1
    if bracket_kind not in ("commutator", "anticommutator"):
        raise OperatorError(f"unknown bracket {bracket_kind!r}")

    def img(op: OperatorExpr, v: ClPoly, idx: int) -> ClPoly:
        if _images is not None:
            hit = _images.get((op, idx))
            if hit is not None:
                return hit
        return apply(op, v)

    fitter = _Fitter(len(cands)) if fit else None
    fixed_rhs = None
    if not fit:
        fixed_rhs = OperatorExpr.zero()
        for c in cands:
            fixed_rhs = fixed_rhs + c
    ins = _inputs(m, k, max_degree, inputs)
    counter = None
    checked = 0
    for idx, v in enumerate(ins):
        xv = img(x, v, idx)
        yv = img(y, v, idx)
        lhs = apply(x, yv)
        other = apply(y, xv)
        lhs = lhs + other if sign > 0 else lhs - other
        checked += 1
        if not fit:
            resid = lhs - img(fixed_rhs, v, idx)
            if resid:
                counter = {"input": v.to_json(), "residual": resid.to_json()}
                break
            continue
        cimgs = [_flatten(img(c, v, idx)) for c in cands]
        target = _flatten(lhs)
        keys = set(target)
        for ci in cimgs:
            keys.update(ci)
        bad = False
        for key in sorted(keys):
            row = {n: ci[key] for n, ci in enumerate(cimgs) if key in ci}
            if not fitter.add(row, target.get(key, ZERO)):
                bad = True
                break
        if bad:
            counter = {"input": v.to_json(), "residual": lhs.to_json()}
            break
    constants: dict[str, str] = {}
    passed = counter is None
    if fit:
        sol = fitter.solution() if passed else None
        if passed and sol is None:
            passed = False
            counter = {"reason": "structure constants not determined by the inputs"}
        if sol is not None:
            for c, s in zip(cands, sol):
                constants[_label(c)] = str(s)
    else:
        for c in cands:
            constants[_label(c)] = "fixed"
    return RelationReport(
        relation=relation,
        bracket=bracket_kind,
        constants=constants,
        max_degree=max_degree,
        m=m,
        k=k,
        passed=passed,
        inputs_checked=checked,
        counterexample=counter,
        elapsed=time.perf_counter() - t0,
    )


def _candidates(g1: GeneratorTag, g2: GeneratorTag, k: int) -> list[GeneratorTag]:
    parity = g1.odd ^ g2.odd
    shift = g1.degree_shift() + g2.degree_shift()
    w = tuple(a + b for a, b in zip(g1.weight(k), g2.weight(k)))
    return [
        g
        for g in all_generators(k)
        if g.odd == parity and g.degree_shift() == shift and g.weight(k) == w
    ]


def relation_suite(m: int, k: int, max_degree: int = 3, inputs: str = "clifford") -> list[RelationReport]:
    """Bracket every pair of osp(1|2k) generators and fit it in their span.

    Each bracket is expanded against the generators with the same parity,
    degree shift and gl(k) weight; everything else has coefficient zero by
    grading.  An empty candidate list means the bracket must vanish.
    """
    gens = all_generators(k)
    ins = _inputs(m, k, max_degree, inputs)
    images: dict = {}
    for g in gens:
        op = OperatorExpr.gen(g)
        for idx, v in enumerate(ins):
            images[(op, idx)] = _apply_gen(g, v)
    reports = []
    for a, b in itertools.combinations_with_replacement(gens, 2):
        kind = "anticommutator" if (a.odd and b.odd) else "commutator"
        cands = [OperatorExpr.gen(c) for c in _candidates(a, b, k)]
        rep = check_relation(
            OperatorExpr.gen(a),
            OperatorExpr.gen(b),
            cands,
            kind,
            m,
            k,
            max_degree,
            fit=True,
            inputs=inputs,
            _images=images,
        )
        reports.append(rep)
    return reports
