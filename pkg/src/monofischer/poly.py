"""Sparse polynomials in the m*k variables x_ij with Clifford coefficients.

Exponents are flat tuples of length ``m*k``; variable ``x_ij`` (coordinate
``i`` of vector variable ``j``, both 1-based) sits at position
``(i - 1) * k + (j - 1)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial
from typing import Mapping, Sequence

from .clifford import (
    ZERO,
    CliffordElement,
    CliffordError,
    ExactScalar,
    _mask_mul,
)

__all__ = [
    "PolyError",
    "PolyFormatError",
    "ClPoly",
    "GradedSlice",
    "var_index",
    "multidegree",
    "graded_component",
    "fischer_inner",
    "exp_factorial",
]


class PolyError(ValueError):
    """Dimension mismatch or malformed polynomial data."""


class PolyFormatError(PolyError):
    """Interchange-format parse failure; the message carries the location."""


def var_index(i: int, j: int, k: int) -> int:
    return (i - 1) * k + (j - 1)


def multidegree(exp: Sequence[int], k: int) -> tuple[int, ...]:
    out = [0] * k
    for pos, e in enumerate(exp):
        if e:
            out[pos % k] += e
    return tuple(out)


def exp_factorial(exp: Sequence[int]) -> int:
    r = 1
    for e in exp:
        if e > 1:
            r *= factorial(e)
    return r


class ClPoly:
    """Polynomial ``sum_alpha x^alpha c_alpha`` with ``c_alpha`` in C_m."""

    __slots__ = ("m", "k", "terms")

    def __init__(self, m: int, k: int, terms: Mapping[tuple, CliffordElement] | None = None):
        if m < 1 or k < 1:
            raise PolyError("m and k must be positive")
        self.m = m
        self.k = k
        clean = {}
        if terms:
            n = m * k
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n or any(e < 0 for e in exp):
                    raise PolyError(f"exponent {exp} is not in N_0^({m}x{k})")
                if not isinstance(c, CliffordElement):
                    c = CliffordElement.scalar(m, c)
                if c.m != m:
                    raise PolyError(f"coefficient lives in C_{c.m}, expected C_{m}")
                if c:
                    clean[exp] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, m, k, terms) -> "ClPoly":
        obj = object.__new__(cls)
        obj.m = m
        obj.k = k
        obj.terms = terms
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, m: int, k: int) -> "ClPoly":
        return cls._wrap(m, k, {})

    @classmethod
    def constant(cls, m: int, k: int, c) -> "ClPoly":
        if not isinstance(c, CliffordElement):
            c = CliffordElement.scalar(m, c)
        return cls(m, k, {(0,) * (m * k): c})

    @classmethod
    def monomial(cls, m: int, k: int, exp: Sequence[int], c=1) -> "ClPoly":
        if not isinstance(c, CliffordElement):
            c = CliffordElement.scalar(m, c)
        return cls(m, k, {tuple(exp): c})

    @classmethod
    def variable(cls, m: int, k: int, i: int, j: int, c=1) -> "ClPoly":
        if not (1 <= i <= m and 1 <= j <= k):
            raise PolyError(f"x_{i}{j} is not a variable for m={m}, k={k}")
        exp = [0] * (m * k)
        exp[var_index(i, j, k)] = 1
        return cls.monomial(m, k, exp, c)

    @classmethod
    def vector_variable(cls, m: int, k: int, j: int) -> "ClPoly":
        """``ux_j = sum_i e_i x_ij``."""
        out = cls.zero(m, k)
        for i in range(1, m + 1):
            out = out + cls.variable(m, k, i, j, CliffordElement.generator(m, i))
        return out

    @classmethod
    def rsq(cls, m: int, k: int, i: int, j: int) -> "ClPoly":
        """``r^2_ij = sum_a x_ai x_aj``."""
        out = cls.zero(m, k)
        for a in range(1, m + 1):
            exp = [0] * (m * k)
            exp[var_index(a, i, k)] += 1
            exp[var_index(a, j, k)] += 1
            out = out + cls.monomial(m, k, exp)
        return out

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[tuple, CliffordElement]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def _check(self, other: "ClPoly"):
        if (self.m, self.k) != (other.m, other.k):
            raise PolyError(
                f"dimension mismatch: (m,k)=({self.m},{self.k}) vs ({other.m},{other.k})"
            )

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ClPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp)
            if v is None:
                out[exp] = c
            else:
                v = v + c
                if v:
                    out[exp] = v
                else:
                    del out[exp]
        return ClPoly._wrap(self.m, self.k, out)

    def __neg__(self):
        return ClPoly._wrap(self.m, self.k, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ClPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "ClPoly":
        c = ExactScalar.coerce(c)
        if not c:
            return ClPoly.zero(self.m, self.k)
        return ClPoly._wrap(self.m, self.k, {e: v.scale(c) for e, v in self.terms.items()})

    def __mul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def clifford_left_mul(self, c: CliffordElement) -> "ClPoly":
        if c.m != self.m:
            raise PolyError(f"dimension mismatch: C_{c.m} acting on m={self.m}")
        out = {}
        for e, v in self.terms.items():
            w = c * v
            if w:
                out[e] = w
        return ClPoly._wrap(self.m, self.k, out)

    def clifford_right_mul(self, c: CliffordElement) -> "ClPoly":
        if c.m != self.m:
            raise PolyError(f"dimension mismatch: C_{c.m} acting on m={self.m}")
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                out[e] = w
        return ClPoly._wrap(self.m, self.k, out)

    def mul_monomial(self, exp: Sequence[int]) -> "ClPoly":
        return ClPoly._wrap(
            self.m, self.k, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, ClPoly):
            return NotImplemented
        return (self.m, self.k) == (other.m, other.k) and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.k, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"ClPoly(m={self.m}, k={self.k}, 0)"
        parts = []
        for exp, c in self.sorted_terms()[:6]:
            mono = "*".join(
                f"x{p // self.k + 1}{p % self.k + 1}" + (f"^{e}" if e > 1 else "")
                for p, e in enumerate(exp)
                if e
            ) or "1"
            parts.append(f"{mono}*{c!r}")
        more = " + ..." if len(self.terms) > 6 else ""
        return f"ClPoly(m={self.m}, k={self.k}, " + " + ".join(parts) + more + ")"

    # interchange format ---------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for exp, c in self.sorted_terms():
            mat = [list(exp[i * self.k:(i + 1) * self.k]) for i in range(self.m)]
            terms.append({"exp": mat, "coeff": c.to_json()})
        return {"m": self.m, "k": self.k, "terms": terms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data) -> "ClPoly":
        if not isinstance(data, dict):
            raise PolyFormatError("$: expected a JSON object")
        for key in ("m", "k", "terms"):
            if key not in data:
                raise PolyFormatError(f"$: missing key {key!r}")
        m, k = data["m"], data["k"]
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise PolyFormatError("$.m: expected a positive integer")
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise PolyFormatError("$.k: expected a positive integer")
        if not isinstance(data["terms"], list):
            raise PolyFormatError("$.terms: expected a list")
        out = cls.zero(m, k)
        for t, item in enumerate(data["terms"]):
            where = f"$.terms[{t}]"
            if not isinstance(item, dict) or "exp" not in item or "coeff" not in item:
                raise PolyFormatError(f"{where}: expected an object with 'exp' and 'coeff'")
            mat = item["exp"]
            if (
                not isinstance(mat, list)
                or len(mat) != m
                or any(not isinstance(row, list) or len(row) != k for row in mat)
            ):
                raise PolyFormatError(f"{where}.exp: expected a {m}x{k} integer matrix")
            exp = []
            for r, row in enumerate(mat):
                for c, e in enumerate(row):
                    if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                        raise PolyFormatError(
                            f"{where}.exp[{r}][{c}]: expected a nonnegative integer"
                        )
                    exp.append(e)
            try:
                coeff = CliffordElement.from_json(m, item["coeff"])
            except CliffordError as exc:
                raise PolyFormatError(f"{where}.coeff{exc}") from None
            out = out + cls._wrap(m, k, {tuple(exp): coeff} if coeff else {})
        return out

    @classmethod
    def loads(cls, text: str) -> "ClPoly":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PolyFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(data)


@dataclass(frozen=True)
class GradedSlice:
    """Selects the total-degree ``degree`` part or the multidegree ``multi`` part."""

    degree: int | None = None
    multi: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.degree is None) == (self.multi is None):
            raise PolyError("give exactly one of degree / multidegree")
        if self.multi is not None:
            object.__setattr__(self, "multi", tuple(int(x) for x in self.multi))

    def matches(self, exp: Sequence[int], k: int) -> bool:
        if self.degree is not None:
            return sum(exp) == self.degree
        return multidegree(exp, k) == self.multi


def graded_component(P: ClPoly, s: GradedSlice | int | Sequence[int]) -> ClPoly:
    if not isinstance(s, GradedSlice):
        s = GradedSlice(degree=s) if isinstance(s, int) else GradedSlice(multi=tuple(s))
    if s.multi is not None and len(s.multi) != P.k:
        raise PolyError(f"multidegree {s.multi} has wrong length for k={P.k}")
    return ClPoly._wrap(P.m, P.k, {e: c for e, c in P.terms.items() if s.matches(e, P.k)})


def fischer_inner(f: ClPoly, g: ClPoly) -> ExactScalar:
    """``<f, g> = sum_alpha alpha! [bar(c_alpha) d_alpha]_0``."""
    f._check(g)
    acc = ZERO
    small, big = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for exp in small.terms:
        d = big.terms.get(exp)
        if d is None:
            continue
        c = f.terms[exp]
        d = g.terms[exp]
        cb = c.bar()
        s = ZERO
        # scalar part of a product only pairs identical blades
        for mask, a in cb.terms.items():
            b = d.terms.get(mask)
            if b is not None:
                sign, _ = _mask_mul(mask, mask)
                s = s + (a * b if sign > 0 else -(a * b))
        if s:
            acc = acc + s * exp_factorial(exp)
    return acc
