"""Exact complexified Clifford algebra C_m with e_i e_j + e_j e_i = -2 delta_ij.

Scalars are Gaussian rationals (:class:`ExactScalar`).  Blades are stored as
bitmasks internally (bit ``i - 1`` set means ``e_i`` is a factor) and exposed
as strictly increasing index tuples.  The spinor space is realized as the
minimal left ideal ``C_m I`` for an explicit primitive idempotent ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

__all__ = [
    "ExactScalar",
    "ZERO",
    "ONE",
    "I_UNIT",
    "CliffordError",
    "CliffordElement",
    "SpinorFrame",
    "blade_mul",
    "build_spinor_frame",
    "mask_to_blade",
    "blade_to_mask",
]


class CliffordError(ValueError):
    """Bad input to a Clifford-algebra operation."""


_MPQ = type(mpq(0))


def _to_mpq(x) -> "mpq":
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        try:
            return mpq(s)
        except ValueError as exc:
            raise CliffordError(f"invalid rational literal {x!r}") from exc
    if type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class ExactScalar:
    """Gaussian rational ``re + i*im`` with exact arbitrary precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _to_mpq(re))
        object.__setattr__(self, "im", _to_mpq(im))

    @classmethod
    def _raw(cls, re, im) -> "ExactScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        return cls._raw(_to_mpq(x), _MPQ_ZERO)

    @classmethod
    def parse(cls, re: str, im: str = "0") -> "ExactScalar":
        return cls._raw(_to_mpq(re), _to_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactScalar._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactScalar._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, _MPQ, Fraction)) and not isinstance(other, bool):
                q = _to_mpq(other)
                return ExactScalar._raw(self.re * q, self.im * q)
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactScalar._raw(a * c, _MPQ_ZERO)
        return ExactScalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return ExactScalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "ExactScalar":
        return ExactScalar._raw(self.re, -self.im)

    def abs2(self):
        """Squared modulus as an exact rational."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ExactScalar":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, _MPQ, Fraction)) and not isinstance(other, bool):
                q = _to_mpq(other)
                if not q:
                    raise ZeroDivisionError("division by exact zero")
                return ExactScalar._raw(self.re / q, self.im / q)
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_pair(self) -> tuple[str, str]:
        """Canonical ``("p/q", "p/q")`` strings for real and imaginary parts."""
        return (_qstr(self.re), _qstr(self.im))

    def as_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"{self} is not real")
        return Fraction(int(self.re.numerator), int(self.re.denominator))


def _qstr(q) -> str:
    return f"{q.numerator}/{q.denominator}"


_MPQ_ZERO = mpq(0)
ZERO = ExactScalar._raw(mpq(0), mpq(0))
ONE = ExactScalar._raw(mpq(1), mpq(0))
I_UNIT = ExactScalar._raw(mpq(0), mpq(1))


# ---------------------------------------------------------------------------
# blades


def blade_to_mask(indices: Iterable[int], m: int) -> int:
    mask = 0
    prev = 0
    for i in indices:
        if not isinstance(i, int) or i < 1 or i > m:
            raise CliffordError(f"generator index {i!r} outside 1..{m}")
        if i <= prev:
            raise CliffordError("blade indices must be strictly increasing")
        prev = i
        mask |= 1 << (i - 1)
    return mask


def mask_to_blade(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def _mask_mul(a: int, b: int) -> tuple[int, int]:
    # sign from moving each generator of b leftwards past the larger ones of a,
    # then e_i e_i = -1 for every shared generator
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    swaps += bin(a & b).count("1")
    return (-1 if swaps & 1 else 1), a ^ b


def blade_mul(a: Sequence[int], b: Sequence[int], m: int) -> tuple[int, tuple[int, ...]]:
    """Normal-ordered product of two basis blades: ``e_a e_b = coeff * e_blade``."""
    ma = blade_to_mask(a, m)
    mb = blade_to_mask(b, m)
    sign, mc = _mask_mul(ma, mb)
    return sign, mask_to_blade(mc)


def _grade(mask: int) -> int:
    return bin(mask).count("1")


def _bar_sign(mask: int) -> int:
    # reversal gives (-1)^{r(r-1)/2}, each bar(e_i) = -e_i gives (-1)^r
    r = _grade(mask)
    return -1 if ((r * (r - 1) // 2 + r) & 1) else 1


# ---------------------------------------------------------------------------
# elements


class CliffordElement:
    """Finite sum of blades with exact complex coefficients in C_m.

    ``terms`` maps blade bitmasks to nonzero :class:`ExactScalar` values.
    Instances are treated as immutable.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[int, ExactScalar] | None = None):
        if m < 1:
            raise CliffordError("dimension m must be positive")
        self.m = m
        full = (1 << m) - 1
        clean = {}
        if terms:
            for mask, c in terms.items():
                if mask & ~full or mask < 0:
                    raise CliffordError(f"blade {mask_to_blade(mask)} outside 1..{m}")
                c = ExactScalar.coerce(c)
                if c:
                    clean[mask] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, m: int, terms: dict) -> "CliffordElement":
        # trusted constructor: caller guarantees nonzero coefficients in range
        obj = object.__new__(cls)
        obj.m = m
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, m: int) -> "CliffordElement":
        return cls._wrap(m, {})

    @classmethod
    def scalar(cls, m: int, c=1) -> "CliffordElement":
        return cls(m, {0: ExactScalar.coerce(c)})

    @classmethod
    def generator(cls, m: int, i: int) -> "CliffordElement":
        if not 1 <= i <= m:
            raise CliffordError(f"generator index {i} outside 1..{m}")
        return cls._wrap(m, {1 << (i - 1): ONE})

    @classmethod
    def blade(cls, m: int, indices: Sequence[int], c=1) -> "CliffordElement":
        return cls(m, {blade_to_mask(indices, m): ExactScalar.coerce(c)})

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], ExactScalar]]:
        for mask in sorted(self.terms, key=lambda x: (_grade(x), mask_to_blade(x))):
            yield mask_to_blade(mask), self.terms[mask]

    def coefficient(self, blade: Sequence[int]) -> ExactScalar:
        return self.terms.get(blade_to_mask(blade, self.m), ZERO)

    def scalar_part(self) -> ExactScalar:
        """Coefficient of the scalar blade (complex, see module docs)."""
        return self.terms.get(0, ZERO)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "CliffordElement"):
        if other.m != self.m:
            raise CliffordError(f"dimension mismatch: C_{self.m} vs C_{other.m}")

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for mask, c in other.terms.items():
            v = out.get(mask)
            if v is None:
                out[mask] = c
            else:
                v = v + c
                if v:
                    out[mask] = v
                else:
                    del out[mask]
        return CliffordElement._wrap(self.m, out)

    def __neg__(self):
        return CliffordElement._wrap(self.m, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "CliffordElement":
        c = ExactScalar.coerce(c)
        if not c:
            return CliffordElement._wrap(self.m, {})
        return CliffordElement._wrap(self.m, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            self._check(other)
            out: dict[int, ExactScalar] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    sign, mc = _mask_mul(ma, mb)
                    term = ca * cb
                    if sign < 0:
                        term = -term
                    v = out.get(mc)
                    out[mc] = term if v is None else v + term
            return CliffordElement._wrap(self.m, {k: v for k, v in out.items() if v})
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def lmul_generator(self, i: int) -> "CliffordElement":
        """``e_i * self`` without the general product loop."""
        bit = 1 << (i - 1)
        out = {}
        for mask, c in self.terms.items():
            sign, mc = _mask_mul(bit, mask)
            out[mc] = -c if sign < 0 else c
        return CliffordElement._wrap(self.m, out)

    def bar(self) -> "CliffordElement":
        """Main antiinvolution combined with complex conjugation."""
        out = {}
        for mask, c in self.terms.items():
            c = c.conjugate()
            out[mask] = -c if _bar_sign(mask) < 0 else c
        return CliffordElement._wrap(self.m, out)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return f"CliffordElement(m={self.m}, 0)"
        parts = []
        for blade, c in self.items():
            name = "e" + "".join(map(str, blade)) if blade else "1"
            parts.append(f"({c}){name}")
        return f"CliffordElement(m={self.m}, " + " + ".join(parts) + ")"

    # serialization --------------------------------------------------------
    def to_json(self) -> list[dict]:
        out = []
        for blade, c in self.items():
            re, im = c.to_pair()
            out.append({"blade": list(blade), "re": re, "im": im})
        return out

    @classmethod
    def from_json(cls, m: int, data) -> "CliffordElement":
        if not isinstance(data, list):
            raise CliffordError("coefficient must be a list of blade terms")
        terms: dict[int, ExactScalar] = {}
        for pos, item in enumerate(data):
            where = f"[{pos}]"
            if not isinstance(item, dict) or "blade" not in item:
                raise CliffordError(f"{where}: expected an object with a 'blade' key")
            blade = item["blade"]
            if not isinstance(blade, list):
                raise CliffordError(f"{where}.blade: expected a list of indices")
            try:
                mask = blade_to_mask(blade, m)
            except CliffordError as exc:
                raise CliffordError(f"{where}.blade: {exc}") from None
            try:
                c = ExactScalar.parse(str(item.get("re", "0")), str(item.get("im", "0")))
            except CliffordError as exc:
                raise CliffordError(f"{where}: {exc}") from None
            if mask in terms:
                c = terms[mask] + c
            terms[mask] = c
        return cls(m, terms)


# ---------------------------------------------------------------------------
# spinor frame


@dataclass(frozen=True, eq=False)
class SpinorFrame:
    """Basis of the left ideal ``C_m I`` with coordinate maps.

    ``basis[t] = e_{T} I`` where ``T`` runs over subsets of the odd generators
    ``e_1, e_3, ..., e_{2n-1}`` encoded by ``key_masks[t]``.  The coefficient of
    blade ``key_masks[t]`` in an ideal element determines its ``t``-th
    coordinate.  ``action[i - 1]`` is the matrix of left multiplication by
    ``e_i``, stored column-wise as ``(row, coefficient)`` pairs.
    """

    m: int
    n: int
    idempotent: CliffordElement
    basis: tuple[CliffordElement, ...]
    key_masks: tuple[int, ...]
    key_coeffs: tuple[ExactScalar, ...]
    action: tuple[tuple[tuple[tuple[int, ExactScalar], ...], ...], ...]
    norms: tuple[ExactScalar, ...]
    chirality: tuple[int, ...] | None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, x: CliffordElement, check: bool = True) -> tuple[ExactScalar, ...]:
        """Coordinates of an ideal element; ``check`` verifies membership."""
        if x.m != self.m:
            raise CliffordError(f"dimension mismatch: C_{x.m} vs frame for m={self.m}")
        out = tuple(x.terms.get(km, ZERO) / kc for km, kc in zip(self.key_masks, self.key_coeffs))
        if check and self.element(out) != x:
            raise CliffordError("element does not lie in the spinor ideal")
        return out

    def element(self, coords: Sequence) -> CliffordElement:
        acc = CliffordElement.zero(self.m)
        for c, b in zip(coords, self.basis):
            c = ExactScalar.coerce(c)
            if c:
                acc = acc + b.scale(c)
        return acc

    def contains(self, x: CliffordElement) -> bool:
        try:
            self.coords(x)
        except CliffordError:
            return False
        return True

    def apply_generator(self, i: int, vec: Sequence[ExactScalar]) -> list[ExactScalar]:
        """Coordinates of ``e_i * s`` from the coordinates of ``s``."""
        out = [ZERO] * self.dim
        for t, c in enumerate(vec):
            if c:
                for row, a in self.action[i - 1][t]:
                    out[row] = out[row] + a * c
        return out

    def describe(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "dim": self.dim,
            "idempotent": self.idempotent.to_json(),
            "basis_blades": [list(mask_to_blade(km)) for km in self.key_masks],
            "norms": [list(c.to_pair()) for c in self.norms],
            "chirality": list(self.chirality) if self.chirality is not None else None,
            "action": {
                f"e{i + 1}": [
                    [[row, *a.to_pair()] for row, a in col] for col in self.action[i]
                ]
                for i in range(self.m)
            },
        }


def _pseudoscalar_unit(m: int) -> CliffordElement:
    """``c * e_1...e_m`` normalised so that it squares to one."""
    omega = CliffordElement._wrap(m, {(1 << m) - 1: ONE})
    sq = (omega * omega).scalar_part()
    c = ONE if sq == ONE else I_UNIT
    u = omega.scale(c)
    assert u * u == CliffordElement.scalar(m, 1)
    return u


@lru_cache(maxsize=None)
def build_spinor_frame(m: int) -> SpinorFrame:
    """Construct the spinor ideal for C_m, m > 2, and verify its invariants."""
    if not isinstance(m, int) or m <= 2:
        raise CliffordError(f"spinor frames need m > 2 (got {m!r})")
    n = m // 2
    half = ExactScalar(mpq(1, 2))
    one = CliffordElement.scalar(m, 1)
    idem = one
    for j in range(1, n + 1):
        pair = CliffordElement.blade(m, (2 * j - 1, 2 * j), I_UNIT)
        idem = idem * (one + pair).scale(half)
    if m % 2:
        u = _pseudoscalar_unit(m)
        factor = (one + u).scale(half)
        cand = idem * factor
        if cand.is_zero():
            cand = idem * (one - u).scale(half)
        idem = cand
    if idem.is_zero() or idem * idem != idem:
        raise CliffordError("idempotent construction failed")

    odd_bits = [1 << (2 * j - 2) for j in range(1, n + 1)]
    key_masks = []
    basis = []
    for t in range(1 << n):
        mask = 0
        for j in range(n):
            if t >> j & 1:
                mask |= odd_bits[j]
        key_masks.append(mask)
        basis.append(CliffordElement._wrap(m, {mask: ONE}) * idem)
    key_coeffs = []
    for km, b in zip(key_masks, basis):
        c = b.terms.get(km, ZERO)
        if not c:
            raise CliffordError("spinor basis element lacks its key blade")
        for other in key_masks:
            if other != km and b.terms.get(other):
                raise CliffordError("spinor key blades are not separating")
        key_coeffs.append(c)

    frame = SpinorFrame(
        m=m,
        n=n,
        idempotent=idem,
        basis=tuple(basis),
        key_masks=tuple(key_masks),
        key_coeffs=tuple(key_coeffs),
        action=(),
        norms=(),
        chirality=None,
    )

    action = []
    for i in range(1, m + 1):
        cols = []
        for b in basis:
            img = b.lmul_generator(i)
            co = frame.coords(img, check=True)  # closure under e_i
            cols.append(tuple((r, c) for r, c in enumerate(co) if c))
        action.append(tuple(cols))

    norms = []
    for p, bp in enumerate(basis):
        for q, bq in enumerate(basis):
            g = (bp.bar() * bq).scalar_part()
            if p == q:
                if g.im or g.re <= 0:
                    raise CliffordError("spinor Gram block is not positive")
                norms.append(g)
            elif g:
                raise CliffordError("spinor basis is not Fischer-orthogonal")

    chirality = None
    if m % 2 == 0:
        u = _pseudoscalar_unit(m)
        chir = []
        for b in basis:
            img = u * b
            if img == b:
                chir.append(1)
            elif img == -b:
                chir.append(-1)
            else:
                raise CliffordError("spinor basis is not chiral")
        chirality = tuple(chir)

    return SpinorFrame(
        m=m,
        n=n,
        idempotent=idem,
        basis=tuple(basis),
        key_masks=tuple(key_masks),
        key_coeffs=tuple(key_coeffs),
        action=tuple(action),
        norms=tuple(norms),
        chirality=chirality,
    )
