"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are stored as ``(a + b*i) / d`` with integers ``a, b, d``, ``d > 0`` and
``gcd(a, b, d) = 1``, which is a unique canonical form.  Matrices are dense
tuples of rows, subspaces are kept as reduced row-echelon bases so that equal
subspaces have equal bases.

The Hermitian inner product declares the coordinate basis orthonormal and is
conjugate-linear in the left slot.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoSolution, NotContained, UnsupportedScalar

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "I",
    "Matrix",
    "Subspace",
    "reduce",
    "kernel",
    "image",
    "solve",
    "solve_min_norm",
    "subspace_calculus",
    "preimage",
    "quotient_dim",
    "member",
    "Quotient",
]


class Scalar:
    """A Gaussian rational number."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = _to_fraction(re)
        im = _to_fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        if a == 0 and b == 0:
            self._a, self._b, self._d = 0, 0, 1
            return
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "Scalar":
        s = object.__new__(cls)
        s._set(a, b, d)
        return s

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, bool):
            raise UnsupportedScalar(f"boolean is not a scalar: {x!r}")
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, dict):
            return cls.from_json(x)
        raise UnsupportedScalar(f"not a Gaussian rational: {x!r}")

    # -- parsing / serialization -------------------------------------------
    _TERM = re.compile(r"^([+-]?\d+(?:/\d+)?)$")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q"``, ``"i"``, ``"-2i"``, ``"1/2+3/4i"`` style strings."""
        s = text.replace(" ", "")
        if not s:
            raise UnsupportedScalar("empty scalar string")
        if cls._TERM.match(s):
            return cls(Fraction(s))
        m = re.match(r"^([+-]?\d+(?:/\d+)?)?([+-]?)(\d+(?:/\d+)?)?\*?i$", s)
        if not m:
            raise UnsupportedScalar(f"cannot parse Gaussian rational {text!r}")
        re_part, sign, im_part = m.groups()
        if re_part is not None and sign == "" and im_part is None:
            # "3i" was captured as real part followed by i
            return cls(0, Fraction(re_part))
        im_val = Fraction(im_part) if im_part else Fraction(1)
        if sign == "-":
            im_val = -im_val
        return cls(Fraction(re_part) if re_part else 0, im_val)

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, dict):
            if set(obj) - {"re", "im"}:
                raise UnsupportedScalar(f"unexpected scalar keys {sorted(obj)}")
            return cls(_to_fraction(obj.get("re", 0)), _to_fraction(obj.get("im", 0)))
        return cls.coerce(obj)

    def to_json(self) -> dict:
        return {"re": _frac_str(self.re), "im": _frac_str(self.im)}

    # -- accessors -----------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def conj(self) -> "Scalar":
        return Scalar._raw(self._a, -self._b, self._d)

    def abs2(self) -> "Scalar":
        return self * self.conj()

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def __bool__(self) -> bool:
        return not (self._a == 0 and self._b == 0)

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except UnsupportedScalar:
                return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        if d1 == d2:
            return Scalar._raw(a1 + a2, b1 + b2, d1)
        return Scalar._raw(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self._a, -self._b, self._d)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except UnsupportedScalar:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except UnsupportedScalar:
                return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        return Scalar._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b, d = self._a, self._b, self._d
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar._raw(d * a, -d * b, n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except UnsupportedScalar:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except UnsupportedScalar:
                return NotImplemented
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        im_txt = "i" if im_ == 1 else "-i" if im_ == -1 else f"{im_}i"
        if re_ == 0:
            return im_txt
        if not im_txt.startswith("-"):
            im_txt = "+" + im_txt
        return f"{re_}{im_txt}"


def _to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise UnsupportedScalar(f"boolean is not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise UnsupportedScalar(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise UnsupportedScalar(f"not an exact rational: {x!r}")


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


ZERO = Scalar._raw(0, 0, 1)
ONE = Scalar._raw(1, 0, 1)
I = Scalar._raw(0, 1, 1)

Vector = tuple  # tuple of Scalar


def vec(values: Iterable) -> tuple:
    return tuple(Scalar.coerce(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def is_zero_vector(v: Sequence[Scalar]) -> bool:
    return all(x.is_zero() for x in v)


def hermitian(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """<u, v> = sum conj(u_i) v_i."""
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x.conj() * y
    return acc


class Matrix:
    """Dense matrix of scalars; immutable."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(Scalar.coerce(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionMismatch(f"ragged matrix data for shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def _wrap(cls, data: tuple, rows: int, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        row = (ZERO,) * cols
        return cls._wrap((row,) * rows, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._wrap(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> "Matrix":
        cols = len(columns)
        return cls._wrap(
            tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows)), rows, cols
        )

    @classmethod
    def from_rows(cls, rows_: Sequence[Sequence[Scalar]], cols: int) -> "Matrix":
        return cls._wrap(tuple(tuple(r) for r in rows_), len(rows_), cols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix._wrap(
            tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)),
            self.cols,
            self.rows,
        )

    T = property(transpose)

    def conj_transpose(self) -> "Matrix":
        return Matrix._wrap(
            tuple(
                tuple(self.data[i][j].conj() for i in range(self.rows)) for j in range(self.cols)
            ),
            self.cols,
            self.rows,
        )

    H = property(conj_transpose)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.data for x in row)

    def apply(self, v: Sequence[Scalar]) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.rows}x{self.cols}")
        nz = [(j, x) for j, x in enumerate(v) if x]
        out = []
        for row in self.data:
            acc = ZERO
            for j, x in nz:
                e = row[j]
                if e:
                    acc = acc + e * x
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = other.columns()
        return Matrix.from_columns([self.apply(c) for c in ocols], self.rows) if ocols else (
            Matrix._wrap(((),) * self.rows, self.rows, 0)
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in matrix addition")
        return Matrix._wrap(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.data, other.data)),
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-x for x in r) for r in self.data), self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = Scalar.coerce(c)
        return Matrix._wrap(tuple(tuple(c * x for x in r) for r in self.data), self.rows, self.cols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._wrap(tuple(tuple(r[j] for j in idx) for r in self.data), self.rows, len(idx))

    @staticmethod
    def hstack(blocks: Sequence["Matrix"], rows: int | None = None) -> "Matrix":
        if rows is None:
            rows = blocks[0].rows
        for b in blocks:
            if b.rows != rows:
                raise DimensionMismatch("hstack row mismatch")
        data = tuple(tuple(x for b in blocks for x in b.data[i]) for i in range(rows))
        return Matrix._wrap(data, rows, sum(b.cols for b in blocks))

    @staticmethod
    def vstack(blocks: Sequence["Matrix"], cols: int | None = None) -> "Matrix":
        if cols is None:
            cols = blocks[0].cols
        for b in blocks:
            if b.cols != cols:
                raise DimensionMismatch("vstack column mismatch")
        data = tuple(r for b in blocks for r in b.data)
        return Matrix._wrap(data, len(data), cols)

    @staticmethod
    def block(grid: Sequence[Sequence["Matrix | None"]], row_dims, col_dims) -> "Matrix":
        """Assemble a block matrix; ``None`` entries are zero blocks."""
        data = []
        for bi, rd in enumerate(row_dims):
            for i in range(rd):
                row = []
                for bj, cd in enumerate(col_dims):
                    blk = grid[bi][bj]
                    if blk is None:
                        row.extend((ZERO,) * cd)
                    else:
                        if (blk.rows, blk.cols) != (rd, cd):
                            raise DimensionMismatch(
                                f"block ({bi},{bj}) is {blk.rows}x{blk.cols}, expected {rd}x{cd}"
                            )
                        row.extend(blk.data[i])
                data.append(tuple(row))
        return Matrix._wrap(tuple(data), sum(row_dims), sum(col_dims))

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.data]


def _rref_rows(rows: list[list[Scalar]], ncols: int, pivot_limit: int | None = None):
    """In-place Gauss-Jordan elimination; returns pivot column list."""
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = prow[c].inverse()
        if inv != ONE:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [(j, prow[j]) for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            for j, x in nz:
                row[j] = row[j] - f * x
        pivots.append(c)
        r += 1
    return pivots


def reduce(m: Matrix):
    """Return ``(rank, rref, pivots)`` of ``m``; rref has all-zero rows dropped."""
    rows = [list(r) for r in m.data]
    pivots = _rref_rows(rows, m.cols)
    rank = len(pivots)
    rref = Matrix._wrap(tuple(tuple(r) for r in rows[:rank]), rank, m.cols)
    return rank, rref, tuple(pivots)


def rank(m: Matrix) -> int:
    return reduce(m)[0]


def _kernel_vectors(rref: Matrix, pivots: Sequence[int]) -> list[tuple]:
    n = rref.cols
    pivset = set(pivots)
    out = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, pc in enumerate(pivots):
            e = rref.data[i][f]
            if e:
                v[pc] = -e
        out.append(tuple(v))
    return out


def kernel(m: Matrix) -> "Subspace":
    """{x : m x = 0} as a canonical subspace of the column space."""
    _, rref, pivots = reduce(m)
    return Subspace.span(_kernel_vectors(rref, pivots), m.cols)


def image(m: Matrix) -> "Subspace":
    """Column space of ``m``."""
    return Subspace.span(m.columns(), m.rows)


def solve(m: Matrix, b: Sequence[Scalar]) -> tuple:
    """Some solution of ``m x = b`` (free variables set to zero)."""
    if len(b) != m.rows:
        raise DimensionMismatch(f"rhs of length {len(b)} for {m.rows} rows")
    rows = [list(r) + [b[i]] for i, r in enumerate(m.data)]
    pivots = _rref_rows(rows, m.cols + 1, pivot_limit=m.cols)
    for row in rows[len(pivots):]:
        if row[m.cols]:
            raise NoSolution("right-hand side is not in the image")
    x = [ZERO] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m.cols]
    return tuple(x)


def solve_min_norm(m: Matrix, b: Sequence[Scalar]) -> tuple:
    """The unique solution of ``m x = b`` orthogonal to ``ker m``.

    Solutions orthogonal to the kernel are exactly those in the range of the
    conjugate transpose, so ``x = m^H y`` with ``(m m^H) y = b``.
    """
    if len(b) != m.rows:
        raise DimensionMismatch(f"rhs of length {len(b)} for {m.rows} rows")
    if m.cols == 0:
        if not is_zero_vector(b):
            raise NoSolution("nonzero right-hand side for a map from the zero space")
        return ()
    mh = m.conj_transpose()
    y = solve(m @ mh, b)
    return mh.apply(y)


class Subspace:
    """Linear subspace of a coordinate space, stored by its rref basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, basis: Matrix, ambient_dim: int, pivots: tuple):
        self.basis = basis
        self.ambient_dim = ambient_dim
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(r)} in ambient {ambient_dim}")
        pivots = _rref_rows(rows, ambient_dim)
        k = len(pivots)
        return cls(Matrix._wrap(tuple(tuple(r) for r in rows[:k]), k, ambient_dim), ambient_dim,
                   tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(Matrix._wrap((), 0, ambient_dim), ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(Matrix.identity(ambient_dim), ambient_dim, tuple(range(ambient_dim)))

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(indices))
        rows = tuple(tuple(ONE if j == i else ZERO for j in range(ambient_dim)) for i in idx)
        return cls(Matrix._wrap(rows, len(idx), ambient_dim), ambient_dim, tuple(idx))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[tuple]:
        return list(self.basis.data)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce_vector(self, v: Sequence[Scalar]) -> tuple:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        w = list(v)
        for row, pc in zip(self.basis.data, self.pivots):
            f = w[pc]
            if f:
                for j, x in enumerate(row):
                    if x:
                        w[j] = w[j] - f * x
        return tuple(w)

    def contains_vector(self, v: Sequence[Scalar]) -> bool:
        return is_zero_vector(self.reduce_vector(v))

    __contains__ = contains_vector

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for v in other.basis.data)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis.data) + list(other.basis.data), self.ambient_dim)

    def equations(self) -> Matrix:
        """Rows spanning the functionals that vanish on this subspace."""
        ann = _kernel_vectors(self.basis, self.pivots)
        return Matrix._wrap(tuple(ann), len(ann), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        eq = Matrix.vstack([self.equations(), other.equations()], self.ambient_dim)
        return kernel(eq)

    def project(self, indices: Sequence[int]) -> "Subspace":
        """Image under the coordinate projection onto ``indices``."""
        return Subspace.span([[v[j] for j in indices] for v in self.basis.data], len(indices))

    def image_under(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise DimensionMismatch("matrix does not act on this subspace")
        return Subspace.span([m.apply(v) for v in self.basis.data], m.rows)

    def complement_in(self, other: "Subspace") -> list[tuple]:
        """Vectors of ``other``'s rref basis extending this subspace to ``other``.

        Requires this subspace to be contained in ``other``.  Greedy and
        therefore deterministic.
        """
        self._check(other)
        current = self
        out = []
        for v in other.basis.data:
            if not current.contains_vector(v):
                out.append(v)
                current = Subspace.span(list(current.basis.data) + [v], self.ambient_dim)
        return out

    def orthogonal_complement(self) -> "Subspace":
        """Hermitian orthogonal complement."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        conj_rows = tuple(tuple(x.conj() for x in row) for row in self.basis.data)
        return kernel(Matrix._wrap(conj_rows, self.dim, self.ambient_dim))


def preimage(a: Matrix, u: Subspace) -> Subspace:
    """{x : a x in u}."""
    if a.rows != u.ambient_dim:
        raise DimensionMismatch(f"map into dimension {a.rows}, subspace in {u.ambient_dim}")
    eq = u.equations()
    if eq.rows == 0:
        return Subspace.full(a.cols)
    return kernel(eq @ a)


def quotient_dim(u: Subspace, v: Subspace) -> int:
    """dim V - dim U for U contained in V."""
    u._check(v)
    if not v.contains(u):
        raise NotContained("quotient_dim requires U to be a subspace of V")
    return v.dim - u.dim


def member(v: Sequence[Scalar], u: Subspace) -> bool:
    return u.contains_vector(v)


def subspace_calculus(kind: str, *args):
    """Dispatch ``sum | intersect | preimage | quotient_dim | member``."""
    if kind == "sum":
        u, v = args
        return u + v
    if kind == "intersect":
        u, v = args
        return u.intersect(v)
    if kind == "preimage":
        a, u = args
        return preimage(a, u)
    if kind == "quotient_dim":
        u, v = args
        return quotient_dim(u, v)
    if kind == "member":
        v, u = args
        return member(v, u)
    raise ValueError(f"unknown subspace operation {kind!r}")


class Quotient:
    """A quotient ``cycles / boundaries`` with chosen representatives.

    Representatives are the greedy complement of the boundaries inside the
    cycles, so they are deterministic.  ``coords`` expresses a cycle in the
    representative basis modulo boundaries.
    """

    def __init__(self, cycles: Subspace, boundaries: Subspace):
        if not cycles.contains(boundaries):
            raise NotContained("boundaries are not contained in cycles")
        self.cycles = cycles
        self.boundaries = boundaries
        self.representatives = boundaries.complement_in(cycles)
        cols = list(self.representatives) + list(boundaries.basis.data)
        self._solver = Matrix.from_columns(cols, cycles.ambient_dim) if cols else None

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def ambient_dim(self) -> int:
        return self.cycles.ambient_dim

    def coords(self, x: Sequence[Scalar]) -> tuple:
        """Coordinates of the class of ``x``; raises NoSolution if ``x`` is not a cycle."""
        if self._solver is None:
            if not is_zero_vector(x):
                raise NoSolution("vector is not a cycle")
            return ()
        sol = solve(self._solver, x)
        return sol[: self.dim]

    def is_trivial(self, x: Sequence[Scalar]) -> bool:
        return self.boundaries.contains_vector(x)
