"""Dense exact linear algebra over the rationals.

Matrices are small (a few dozen rows at most), so everything is kept dense
and row-oriented.  Scalars are ``gmpy2.mpq``; anything that converts
cleanly (int, Fraction, "p/q" strings) is accepted on input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)

Vector = tuple


def scalar(x) -> mpq:
    """Coerce ``x`` to an exact rational.

    Floats are rejected: nothing in this package is allowed to round.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, type(ZERO))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        if "/" in s:
            p, q = s.split("/", 1)
            return mpq(int(p), int(q))
        return mpq(int(s))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted as exact scalars")
    # gmpy2.mpz and friends
    return mpq(x)


def fmt(x) -> str:
    return str(mpq(x))


class Matrix:
    """A dense rational matrix acting on column vectors."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = [[scalar(v) for v in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, rows: list, nrows: int, ncols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        rows = [[scalar(c[i]) for c in cols] for i in range(nrows)]
        return cls._raw(rows, nrows, len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        rows = [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)]
        return Matrix._raw(rows, self.ncols, self.nrows)

    def copy(self) -> "Matrix":
        return Matrix._raw([list(r) for r in self.rows], self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(not v for r in self.rows for v in r)

    def nonzero_entries(self):
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if v:
                    yield i, j, v

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def __mul__(self, c) -> "Matrix":
        c = scalar(c)
        return Matrix._raw([[a * c for a in r] for r in self.rows], self.nrows, self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            n = other.ncols
            # sparse rows of the right factor
            sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
            out = []
            for r in self.rows:
                acc = [ZERO] * n
                for k, a in enumerate(r):
                    if a:
                        for j, b in sparse[k]:
                            acc[j] += a * b
                out.append(acc)
            return Matrix._raw(out, self.nrows, n)
        v = list(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * x for a, x in zip(r, v) if a and x), ZERO) for r in self.rows)

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix._raw([a + b for a, b in zip(self.rows, other.rows)],
                           self.nrows, self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix._raw([list(r) for r in self.rows] + [list(r) for r in other.rows],
                           self.nrows + other.nrows, self.ncols)

    def rank(self) -> int:
        return len(rref(self)[1])

    def nullspace(self) -> list[Vector]:
        return nullspace(self)

    def image(self) -> "Subspace":
        return Subspace(self.nrows, self.columns())

    def kernel(self) -> "Subspace":
        return Subspace(self.ncols, nullspace(self))

    def det(self) -> mpq:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        d = ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for i in range(c + 1, n):
                f = m[i][c]
                if f:
                    f = f / piv
                    mi, mc = m[i], m[c]
                    for j in range(c, n):
                        if mc[j]:
                            mi[j] -= f * mc[j]
        return d

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = self.hstack(Matrix.identity(n))
        r, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix._raw([row[n:] for row in r.rows[:n]], n, n)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt(v) for v in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    pr = 0
    for c in range(ncols):
        if pr == nrows:
            break
        p = next((i for i in range(pr, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[pr], a[p] = a[p], a[pr]
        row = a[pr]
        inv = ONE / row[c]
        if inv != ONE:
            row = [v * inv for v in row]
            a[pr] = row
        nz = [(j, v) for j, v in enumerate(row) if v and j >= c]
        for i in range(nrows):
            if i != pr:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j, v in nz:
                        ai[j] -= f * v
        pivots.append(c)
        pr += 1
    return Matrix._raw(a, nrows, ncols), pivots


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    r, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for row, pc in zip(r.rows, pivots):
            if row[free]:
                v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    b = [scalar(x) for x in b]
    if len(b) != m.nrows:
        raise ValueError("right-hand side length mismatch")
    aug = Matrix._raw([list(r) + [x] for r, x in zip(m.rows, b)], m.nrows, m.ncols + 1)
    r, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [ZERO] * m.ncols
    for row, pc in zip(r.rows, pivots):
        x[pc] = row[m.ncols]
    return tuple(x)


def dot(u: Sequence, v: Sequence) -> mpq:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


class Subspace:
    """A subspace of Q^n stored by its reduced row echelon basis.

    The echelon basis is canonical, so equality of subspaces is equality of
    the stored bases.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        self.ambient = ambient
        vecs = [tuple(scalar(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in Q^{ambient}")
        if vecs:
            r, piv = rref(Matrix._raw([list(v) for v in vecs], len(vecs), ambient))
            self.basis = [tuple(row) for row in r.rows[: len(piv)]]
            self.pivots = piv
        else:
            self.basis, self.pivots = [], []

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n).rows)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    __hash__ = None

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise ValueError("subspaces of different ambient spaces")

    def contains(self, v: Sequence) -> bool:
        v = [scalar(x) for x in v]
        # reduce against the echelon basis
        for b, pc in zip(self.basis, self.pivots):
            f = v[pc]
            if f:
                v = [x - f * y for x, y in zip(v, b)]
        return not any(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace(self.ambient)
        # x = sum a_i u_i = sum b_j v_j  <=>  [U^T | -V^T] (a, b) = 0
        cols = self.basis + [tuple(-x for x in v) for v in other.basis]
        sol = nullspace(Matrix.from_columns(cols, self.ambient))
        k = len(self.basis)
        vecs = []
        for s in sol:
            vecs.append(tuple(sum((s[i] * self.basis[i][t] for i in range(k) if s[i]), ZERO)
                              for t in range(self.ambient)))
        return Subspace(self.ambient, vecs)

    __and__ = intersect

    def orthogonal_complement(self, gram: Matrix | None = None) -> "Subspace":
        """Complement under the standard inner product, or under ``gram``."""
        if not self.basis:
            return Subspace.full(self.ambient)
        rows = self.basis if gram is None else [gram.T @ b for b in self.basis]
        return Subspace(self.ambient, nullspace(Matrix._raw([list(r) for r in rows],
                                                            len(rows), self.ambient)))

    def complement_in(self, larger: "Subspace", gram: Matrix | None = None) -> "Subspace":
        """Complement of ``self`` inside ``larger``, orthogonal to ``self``."""
        self._check(larger)
        return larger.intersect(self.orthogonal_complement(gram))

    def image_under(self, m: Matrix) -> "Subspace":
        if m.ncols != self.ambient:
            raise ValueError("matrix does not act on this space")
        return Subspace(m.nrows, [m @ b for b in self.basis])

    def preimage_under(self, m: Matrix) -> "Subspace":
        """``{x : m x in self}``."""
        if m.nrows != self.ambient:
            raise ValueError("matrix does not map into this space")
        # x ↦ m x projected away from self must vanish
        perp = self.orthogonal_complement()
        if not perp.basis:
            return Subspace.full(m.ncols)
        p = Matrix._raw([list(b) for b in perp.basis], perp.dim, self.ambient)
        return (p @ m).kernel()

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coordinates of ``v`` in the echelon basis, or None if outside."""
        if not self.contains(v):
            return None
        return tuple(scalar(v[pc]) for pc in self.pivots)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient})"


def quotient_dim(num: Subspace, den: Subspace) -> int:
    return num.dim - (num & den).dim


def induced_rank(vectors: Sequence[Sequence], den: Subspace) -> int:
    """Rank of the classes of ``vectors`` in ``Q^n / den``."""
    return (Subspace(den.ambient, vectors) + den).dim - den.dim


def subspace_ops(u: Subspace, v: Subspace) -> dict:
    """Sum, intersection and the quotient complement of ``u`` modulo ``v``.

    The complement is the part of ``u`` orthogonal to ``u ∩ v`` under the
    monomial inner product.
    """
    inter = u & v
    return {"sum": u + v, "intersection": inter, "quotient": inter.complement_in(u)}
