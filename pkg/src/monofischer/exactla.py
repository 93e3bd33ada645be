"""Exact linear algebra over the Gaussian rationals.

Matrices are stored as sparse rows (``dict`` column -> :class:`ExactScalar`).
Elimination pivots deterministically: columns left to right, and in each
column the first remaining row with a nonzero entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .clifford import ONE, ZERO, ExactScalar, SpinorFrame
from .poly import ClPoly, PolyError, exp_factorial, fischer_inner

__all__ = [
    "LinAlgError",
    "ExactMatrix",
    "rref",
    "rank",
    "rank_of_vectors",
    "kernel_basis",
    "solve",
    "LUSolver",
    "IncrementalSpan",
    "CoordinateChart",
    "SubspaceBasis",
    "DirectSumReport",
    "gram",
    "orthogonal_complement",
    "is_direct_sum",
    "leading_minors_positive",
    "Projector",
]

Vec = dict  # sparse vector: index -> ExactScalar


class LinAlgError(ValueError):
    pass


def _axpy(dst: dict, a: ExactScalar, src: dict) -> None:
    """dst -= a * src, dropping exact zeros."""
    for col, v in src.items():
        old = dst.get(col)
        nv = -(a * v) if old is None else old - a * v
        if nv:
            dst[col] = nv
        else:
            del dst[col]


class ExactMatrix:
    """Immutable sparse matrix with exact entries."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: Sequence[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if data is None:
            data = [dict() for _ in range(nrows)]
        if len(data) != nrows:
            raise LinAlgError("row count mismatch")
        rows = []
        for r in data:
            row = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise LinAlgError(f"column {c} out of range")
                v = ExactScalar.coerce(v)
                if v:
                    row[c] = v
            rows.append(row)
        self.data = rows

    @classmethod
    def _wrap(cls, nrows, ncols, rows):
        obj = object.__new__(cls)
        obj.nrows = nrows
        obj.ncols = ncols
        obj.data = rows
        return obj

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise LinAlgError("ragged matrix")
        return cls(nrows, ncols, [{c: v for c, v in enumerate(r)} for r in rows])

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[dict]) -> "ExactMatrix":
        rows: list[dict] = [dict() for _ in range(nrows)]
        for c, col in enumerate(columns):
            for r, v in col.items():
                if not 0 <= r < nrows:
                    raise LinAlgError(f"row {r} out of range")
                if v:
                    rows[r][c] = v
        return cls._wrap(nrows, len(columns), rows)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._wrap(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls._wrap(nrows, ncols, [dict() for _ in range(nrows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r].get(c, ZERO)

    def to_dense(self) -> list[list[ExactScalar]]:
        return [[row.get(c, ZERO) for c in range(self.ncols)] for row in self.data]

    def columns(self) -> list[dict]:
        cols: list[dict] = [dict() for _ in range(self.ncols)]
        for r, row in enumerate(self.data):
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._wrap(self.ncols, self.nrows, self.columns())

    def conj_transpose(self) -> "ExactMatrix":
        cols = self.columns()
        return ExactMatrix._wrap(
            self.ncols, self.nrows, [{r: v.conjugate() for r, v in col.items()} for col in cols]
        )

    def matvec(self, x: dict | Sequence) -> dict:
        if not isinstance(x, dict):
            if len(x) != self.ncols:
                raise LinAlgError("shape mismatch in matvec")
            x = {i: ExactScalar.coerce(v) for i, v in enumerate(x) if v}
        out = {}
        for r, row in enumerate(self.data):
            acc = ZERO
            small, big = (row, x) if len(row) <= len(x) else (x, row)
            for c in small:
                w = big.get(c)
                if w is not None:
                    acc = acc + row[c] * x[c]
            if acc:
                out[r] = acc
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise LinAlgError("shape mismatch in matmul")
        rows = []
        for row in self.data:
            acc: dict = {}
            for c, v in row.items():
                for c2, w in other.data[c].items():
                    old = acc.get(c2)
                    acc[c2] = v * w if old is None else old + v * w
            rows.append({c: v for c, v in acc.items() if v})
        return ExactMatrix._wrap(self.nrows, other.ncols, rows)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.nrows != other.nrows:
            raise LinAlgError("row mismatch in hstack")
        rows = []
        for a, b in zip(self.data, other.data):
            row = dict(a)
            for c, v in b.items():
                row[c + self.ncols] = v
            rows.append(row)
        return ExactMatrix._wrap(self.nrows, self.ncols + other.ncols, rows)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.shape == other.shape
            and self.data == other.data
        )

    def is_hermitian(self) -> bool:
        if self.nrows != self.ncols:
            return False
        for r, row in enumerate(self.data):
            for c, v in row.items():
                if self.data[c].get(r, ZERO) != v.conjugate():
                    return False
        return True

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.data))})"


# ---------------------------------------------------------------------------
# elimination


def _copy_rows(M: ExactMatrix) -> list[dict]:
    return [dict(r) for r in M.data]


def rref(M: ExactMatrix) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    rows = _copy_rows(M)
    live = [i for i, r in enumerate(rows) if r]
    pivots: list[int] = []
    prow_of: list[dict] = []
    for col in range(M.ncols):
        if not live:
            break
        p = None
        for pos, ri in enumerate(live):
            if col in rows[ri]:
                p = pos
                break
        if p is None:
            continue
        ri = live.pop(p)
        prow = rows[ri]
        inv = prow[col].inverse()
        if inv != ONE:
            prow = {c: v * inv for c, v in prow.items()}
        for rj in live:
            r = rows[rj]
            a = r.get(col)
            if a is not None:
                _axpy(r, a, prow)
        for q in prow_of:
            a = q.get(col)
            if a is not None:
                _axpy(q, a, prow)
        live = [rj for rj in live if rows[rj]]
        pivots.append(col)
        prow_of.append(prow)
    return prow_of, pivots


def _forward(rows: list[dict], ncols: int, record: bool = False):
    """Forward elimination in place; returns (pivot list, ops)."""
    live = [i for i, r in enumerate(rows) if r]
    pivots: list[tuple[int, int]] = []
    ops: list[tuple[int, list[tuple[int, ExactScalar]]]] = []
    for col in range(ncols):
        if not live:
            break
        p = None
        for pos, ri in enumerate(live):
            if col in rows[ri]:
                p = pos
                break
        if p is None:
            continue
        ri = live.pop(p)
        prow = rows[ri]
        inv = prow[col].inverse()
        step = []
        for rj in live:
            r = rows[rj]
            a = r.get(col)
            if a is not None:
                f = a * inv
                _axpy(r, f, prow)
                if record:
                    step.append((rj, f))
        if record:
            ops.append((ri, step))
        live = [rj for rj in live if rows[rj]]
        pivots.append((ri, col))
    return pivots, ops


def rank(M: ExactMatrix) -> int:
    rows = _copy_rows(M)
    if M.nrows > M.ncols:
        # eliminate on the transpose: fewer pivot searches, same rank
        rows = [dict(c) for c in M.columns()]
        pivots, _ = _forward(rows, M.nrows)
    else:
        pivots, _ = _forward(rows, M.ncols)
    return len(pivots)


def rank_of_vectors(vectors: Sequence[dict]) -> int:
    """Rank of a family of sparse vectors.

    Vectors whose supports are not linked through shared coordinates span
    independent subspaces, so the family is split into connected components
    (union-find on coordinates) and each component is eliminated separately.
    """
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in vectors:
        it = iter(v)
        first = next(it, None)
        if first is None:
            continue
        parent.setdefault(first, first)
        r0 = find(first)
        for c in it:
            parent.setdefault(c, c)
            rc = find(c)
            if rc != r0:
                parent[rc] = r0
    groups: dict = {}
    for v in vectors:
        if v:
            groups.setdefault(find(next(iter(v))), []).append(v)
    total = 0
    for vs in groups.values():
        coords = sorted({c for v in vs for c in v})
        pos = {c: p for p, c in enumerate(coords)}
        rows = [{pos[c]: x for c, x in v.items()} for v in vs]
        if len(rows) == 1:
            total += 1
            continue
        pivots, _ = _forward(rows, len(coords))
        total += len(pivots)
    return total


def kernel_basis(M: ExactMatrix) -> list[dict]:
    """Reduced-echelon kernel basis, one vector per free column."""
    R, pivots = rref(M)
    pivset = set(pivots)
    out = []
    for f in range(M.ncols):
        if f in pivset:
            continue
        v = {f: ONE}
        for row, pc in zip(R, pivots):
            a = row.get(f)
            if a is not None:
                v[pc] = -a
        out.append(v)
    return out


class LUSolver:
    """Replayable forward elimination for repeated solves against one matrix."""

    def __init__(self, M: ExactMatrix):
        self.matrix = M
        rows = _copy_rows(M)
        self._pivots, self._ops = _forward(rows, M.ncols, record=True)
        self._rows = rows
        self.rank = len(self._pivots)

    def solve(self, b: dict | Sequence) -> dict | None:
        """A solution of ``M x = b`` (free variables zero) or None if inconsistent."""
        M = self.matrix
        if not isinstance(b, dict):
            if len(b) != M.nrows:
                raise LinAlgError("shape mismatch in solve")
            b = {i: ExactScalar.coerce(v) for i, v in enumerate(b) if v}
        elif any(not 0 <= i < M.nrows for i in b):
            raise LinAlgError("shape mismatch in solve")
        y = dict(b)
        for ri, step in self._ops:
            yi = y.get(ri)
            if yi is None:
                continue
            for rj, f in step:
                nv = y.get(rj, ZERO) - f * yi
                if nv:
                    y[rj] = nv
                else:
                    y.pop(rj, None)
        pivrows = {ri for ri, _ in self._pivots}
        for r, v in y.items():
            if r not in pivrows and v:
                return None
        x: dict = {}
        for ri, col in reversed(self._pivots):
            row = self._rows[ri]
            acc = y.get(ri, ZERO)
            for c, v in row.items():
                if c != col:
                    xc = x.get(c)
                    if xc is not None:
                        acc = acc - v * xc
            val = acc / row[col]
            if val:
                x[col] = val
        return x


def solve(M: ExactMatrix, b) -> dict | None:
    return LUSolver(M).solve(b)


class IncrementalSpan:
    """Echelon form grown one vector at a time (span membership / rank)."""

    def __init__(self):
        self.rows: dict[int, dict] = {}  # pivot index -> reduced row (pivot entry 1)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        changed = True
        while changed and v:
            changed = False
            for p in sorted(v):
                row = self.rows.get(p)
                if row is not None:
                    _axpy(v, v[p], row)
                    changed = True
                    break
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; True if it enlarged the span."""
        r = self._reduce_full(v)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        if inv != ONE:
            r = {c: x * inv for c, x in r.items()}
        for q, row in self.rows.items():
            a = row.get(p)
            if a is not None:
                _axpy(row, a, r)
        self.rows[p] = r
        return True

    def _reduce_full(self, v: dict) -> dict:
        v = dict(v)
        for p in sorted(set(v) & set(self.rows)):
            a = v.get(p)
            if a is not None:
                _axpy(v, a, self.rows[p])
        return v

    def contains(self, v: dict) -> bool:
        return not self._reduce_full(v)


# ---------------------------------------------------------------------------
# charts and subspaces


class CoordinateChart:
    """Ordered monomial(-spinor) basis of one graded slice.

    ``keys[p] = (exp, t)``: monomial exponent and spinor-frame index (``t = 0``
    for scalar charts, where ``frame`` is None).
    """

    def __init__(self, m: int, k: int, keys: Sequence[tuple], frame: SpinorFrame | None,
                 label: str = "", selector=None):
        self.m = m
        self.selector = selector
        self.k = k
        self.frame = frame
        self.keys = tuple(keys)
        self.index = {key: p for p, key in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise LinAlgError("duplicate chart keys")
        self.label = label
        norms = frame.norms if frame is not None else (ExactScalar(1),)
        self.weights = tuple(norms[t].re * exp_factorial(exp) for exp, t in self.keys)

    @property
    def dim(self) -> int:
        return len(self.keys)

    @property
    def spinor(self) -> bool:
        return self.frame is not None

    def __repr__(self):
        return f"CoordinateChart({self.label or '?'}, m={self.m}, k={self.k}, dim={self.dim})"

    def sub_chart(self, pred, label: str = "", selector=None) -> "CoordinateChart":
        keys = [key for key in self.keys if pred(key)]
        return CoordinateChart(self.m, self.k, keys, self.frame, label, selector)

    def element(self, p: int) -> ClPoly:
        exp, t = self.keys[p]
        if self.frame is None:
            return ClPoly.monomial(self.m, self.k, exp)
        return ClPoly._wrap(self.m, self.k, {exp: self.frame.basis[t]})

    def to_keyvec(self, vec: dict) -> dict:
        return {self.keys[p]: v for p, v in vec.items()}

    def from_keyvec(self, kv: dict, strict: bool = True) -> dict:
        out = {}
        for key, v in kv.items():
            p = self.index.get(key)
            if p is None:
                if strict and v:
                    raise LinAlgError(f"coordinate {key} outside chart {self.label}")
                continue
            if v:
                out[p] = v
        return out

    def to_vector(self, P: ClPoly) -> dict:
        """Coordinates of ``P``; raises if ``P`` leaves the slice or the ideal."""
        if (P.m, P.k) != (self.m, self.k):
            raise PolyError("dimension mismatch between polynomial and chart")
        out = {}
        for exp, c in P.terms.items():
            if self.frame is None:
                if set(c.terms) - {0}:
                    raise LinAlgError("scalar chart given a Clifford-valued polynomial")
                co = (c.terms.get(0, ZERO),)
            else:
                co = self.frame.coords(c, check=True)
            for t, v in enumerate(co):
                if v:
                    p = self.index.get((exp, t))
                    if p is None:
                        raise LinAlgError(f"monomial {exp} outside chart {self.label}")
                    out[p] = v
        return out

    def to_poly(self, vec: dict) -> ClPoly:
        acc: dict = {}
        for p, v in vec.items():
            exp, t = self.keys[p]
            acc.setdefault(exp, []).append((t, v))
        terms = {}
        for exp, lst in acc.items():
            if self.frame is None:
                from .clifford import CliffordElement

                terms[exp] = CliffordElement.scalar(self.m, lst[0][1])
            else:
                co = [ZERO] * self.frame.dim
                for t, v in lst:
                    co[t] = v
                terms[exp] = self.frame.element(co)
        return ClPoly(self.m, self.k, terms)

    def inner(self, u: dict, v: dict) -> ExactScalar:
        """Fischer product of two coordinate vectors (conjugate-linear in ``u``)."""
        acc = ZERO
        small, big = (u, v) if len(u) <= len(v) else (v, u)
        w = self.weights
        for p in small:
            if p in big:
                acc = acc + u[p].conjugate() * v[p] * w[p]
        return acc


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Independent vectors in one chart; ``vectors`` are sparse coordinates."""

    chart: CoordinateChart
    vectors: tuple
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def elements(self) -> list[ClPoly]:
        return [self.chart.to_poly(v) for v in self.vectors]

    def matrix(self) -> ExactMatrix:
        return ExactMatrix.from_columns(self.chart.dim, list(self.vectors))

    def contains(self, P: ClPoly | dict) -> bool:
        v = self.chart.to_vector(P) if isinstance(P, ClPoly) else P
        span = IncrementalSpan()
        for w in self.vectors:
            span.add(w)
        return span.contains(v)

    def __repr__(self):
        return f"SubspaceBasis({self.label or '?'}, dim={self.dim}, chart={self.chart.label})"

    @classmethod
    def from_vectors(cls, chart: CoordinateChart, vectors: Iterable[dict], label: str = "",
                     check: bool = True) -> "SubspaceBasis":
        vecs = tuple(dict(v) for v in vectors)
        if check and vecs:
            if rank_of_vectors(vecs) != len(vecs):
                raise LinAlgError(f"{label or 'basis'}: vectors are linearly dependent")
        return cls(chart, vecs, label)

    @classmethod
    def spanned_by(cls, chart: CoordinateChart, vectors: Iterable[dict], label: str = "") -> "SubspaceBasis":
        """Independent subset (first-come) of a spanning family."""
        span = IncrementalSpan()
        keep = []
        for v in vectors:
            if span.add(v):
                keep.append(dict(v))
        return cls(chart, tuple(keep), label)

    def reindex(self, chart: CoordinateChart) -> "SubspaceBasis":
        """The same vectors expressed in another chart containing this one's keys."""
        if chart is self.chart:
            return self
        vecs = tuple(chart.from_keyvec(self.chart.to_keyvec(v)) for v in self.vectors)
        return SubspaceBasis(chart, vecs, self.label)


def gram(vectors: Sequence[ClPoly]) -> ExactMatrix:
    """Fischer Gram matrix ``G[p][q] = <v_p, v_q>`` of homogeneous polynomials."""
    degs = {P.degree() for P in vectors if P}
    if len(degs) > 1 or any(not P.is_homogeneous() for P in vectors):
        raise LinAlgError("gram: vectors must lie in one graded slice")
    n = len(vectors)
    rows = [dict() for _ in range(n)]
    for p in range(n):
        for q in range(p, n):
            g = fischer_inner(vectors[p], vectors[q])
            if g:
                rows[p][q] = g
                if q != p:
                    rows[q][p] = g.conjugate()
    return ExactMatrix._wrap(n, n, rows)


def chart_gram(basis: SubspaceBasis) -> ExactMatrix:
    vecs = basis.vectors
    n = len(vecs)
    rows = [dict() for _ in range(n)]
    for p in range(n):
        for q in range(p, n):
            g = basis.chart.inner(vecs[p], vecs[q])
            if g:
                rows[p][q] = g
                if q != p:
                    rows[q][p] = g.conjugate()
    return ExactMatrix._wrap(n, n, rows)


def leading_minors_positive(G: ExactMatrix) -> bool:
    """Every leading principal minor of a Hermitian matrix is a positive rational.

    Elimination without pivoting: the k-th pivot equals minor_k / minor_{k-1},
    so all minors are positive exactly when every pivot is.
    """
    if not G.is_hermitian():
        return False
    rows = _copy_rows(G)
    n = G.nrows
    for col in range(n):
        piv = rows[col].get(col, ZERO)
        if piv.im or piv.re <= 0:
            return False
        inv = piv.inverse()
        prow = rows[col]
        for r in range(col + 1, n):
            a = rows[r].get(col)
            if a is not None:
                _axpy(rows[r], a * inv, prow)
    return True


def _check_same_chart(a: SubspaceBasis, b: SubspaceBasis):
    if a.chart is not b.chart and a.chart.keys != b.chart.keys:
        raise LinAlgError("subspaces live in different charts")


def orthogonal_complement(ambient: SubspaceBasis, sub: SubspaceBasis) -> SubspaceBasis:
    """Fischer-orthogonal complement of ``sub`` inside ``ambient``."""
    _check_same_chart(ambient, sub)
    span = IncrementalSpan()
    for v in ambient.vectors:
        span.add(v)
    for s in sub.vectors:
        if not span.contains(s):
            raise LinAlgError("orthogonal_complement: sub is not contained in ambient")
    chart = ambient.chart
    rows = []
    for s in sub.vectors:
        rows.append({q: g for q, a in enumerate(ambient.vectors) if (g := chart.inner(s, a))})
    K = ExactMatrix._wrap(len(rows), ambient.dim, rows)
    out = []
    for c in kernel_basis(K):
        v: dict = {}
        for q, coef in c.items():
            _axpy(v, -coef, ambient.vectors[q])
        out.append(v)
    return SubspaceBasis(chart, tuple(out), f"({sub.label})^perp in {ambient.label}")


@dataclass
class DirectSumReport:
    dims: list[int]
    total: int
    rank: int
    ambient_dim: int | None
    passed: bool
    deficit: int = 0

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "total": self.total,
            "rank": self.rank,
            "ambient_dim": self.ambient_dim,
            "pass": self.passed,
            "deficit": self.deficit,
        }


def is_direct_sum(parts: Sequence[SubspaceBasis], ambient_dim: int | None = None) -> DirectSumReport:
    """Directness (rank = sum of dims), plus spanning when ``ambient_dim`` is given."""
    if parts:
        for p in parts[1:]:
            _check_same_chart(parts[0], p)
        r = rank_of_vectors([v for p in parts for v in p.vectors])
    else:
        r = 0
    dims = [p.dim for p in parts]
    total = sum(dims)
    ok = r == total and (ambient_dim is None or total == ambient_dim)
    return DirectSumReport(dims, total, r, ambient_dim, ok, total - r)


class Projector:
    """Fischer-orthogonal projection onto the span of a family in one chart."""

    def __init__(self, chart: CoordinateChart, vectors: Sequence[dict]):
        basis = SubspaceBasis.spanned_by(chart, vectors)
        self.chart = chart
        self.basis = basis
        self._lu = LUSolver(chart_gram(basis)) if basis.dim else None

    def coefficients(self, v: dict) -> dict:
        if self._lu is None:
            return {}
        rhs = {}
        for p, b in enumerate(self.basis.vectors):
            g = self.chart.inner(b, v)
            if g:
                rhs[p] = g
        c = self._lu.solve(rhs)
        if c is None:
            raise LinAlgError("singular Gram matrix in projection")
        return c

    def project(self, v: dict) -> dict:
        out: dict = {}
        for p, c in self.coefficients(v).items():
            _axpy(out, -c, self.basis.vectors[p])
        return out
