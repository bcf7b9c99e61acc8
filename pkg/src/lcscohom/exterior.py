"""Exterior algebra on the dual of an m-dimensional rational vector space.

Multi-indices are 1-based strictly increasing tuples, so ``(1, 2, 4)`` is
e^{124} = e^1 ∧ e^2 ∧ e^4.  Degree-h forms are expanded in the
lexicographically ordered monomial basis, which is also the coordinate
order used for every operator matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

import gmpy2

from .linalg import ONE, ZERO, Matrix, Subspace, fmt, scalar
from .linalg import subspace_ops as _subspace_ops


class DegenerateForm(ValueError):
    """The 2-form has a singular coefficient matrix."""


class NotPositiveDefinite(ValueError):
    pass


class NotAComplexStructure(ValueError):
    pass


MultiIndex = tuple


@lru_cache(maxsize=None)
def basis(m: int, h: int) -> tuple[MultiIndex, ...]:
    """Monomials of degree h in lexicographic order."""
    if h < 0 or h > m:
        return ()
    return tuple(combinations(range(1, m + 1), h))


@lru_cache(maxsize=None)
def basis_index(m: int, h: int) -> dict[MultiIndex, int]:
    return {I: i for i, I in enumerate(basis(m, h))}


def canonical_sign(indices: Sequence[int], m: int | None = None) -> tuple[MultiIndex | None, int]:
    """Sort a list of 1-based indices, returning the sorted tuple and the
    permutation sign (0 and None when an index repeats)."""
    idx = list(indices)
    if m is not None:
        for i in idx:
            if not 1 <= i <= m:
                raise IndexError(f"index {i} outside 1..{m}")
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    # insertion sort, counting transpositions
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    return tuple(idx), sign


def _merge_sign(I: MultiIndex, J: MultiIndex) -> int:
    """Sign of e^I ∧ e^J relative to e^{I∪J}; assumes I, J disjoint."""
    inversions = 0
    for i in I:
        for j in J:
            if j < i:
                inversions += 1
    return -1 if inversions & 1 else 1


def monomial_label(I: MultiIndex, m: int) -> str:
    if not I:
        return "1"
    if m <= 9:
        return "e" + "".join(str(i) for i in I)
    return "e(" + ",".join(str(i) for i in I) + ")"


@dataclass(frozen=True, eq=False)
class Form:
    """A homogeneous form with sparse exact coefficients."""

    dim: int
    degree: int
    coeffs: Mapping[MultiIndex, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for I, c in self.coeffs.items():
            I = tuple(I)
            if len(I) != self.degree:
                raise ValueError(f"monomial {I} in a form of degree {self.degree}")
            J, s = canonical_sign(I, self.dim)
            c = scalar(c) * s
            if not c:
                continue
            if J in clean:
                c += clean[J]
            if c:
                clean[J] = c
            else:
                clean.pop(J, None)
        object.__setattr__(self, "coeffs", clean)

    # construction -----------------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree, {})

    @classmethod
    def one(cls, dim: int) -> "Form":
        return cls(dim, 0, {(): ONE})

    @classmethod
    def monomial(cls, dim: int, indices: Sequence[int], coeff=1) -> "Form":
        return cls(dim, len(indices), {tuple(indices): coeff})

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Sequence) -> "Form":
        b = basis(dim, degree)
        if len(vec) != len(b):
            raise ValueError("vector length does not match the monomial basis")
        return cls(dim, degree, {I: c for I, c in zip(b, vec) if c})

    @classmethod
    def parse(cls, text: str, dim: int) -> "Form":
        """Parse sums such as ``"e12 - e34"``, ``"1/2*e13"``, ``"e^{124}"`` or ``"1"``."""
        return parse_form(text, dim)

    # accessors --------------------------------------------------------------------

    def to_vector(self) -> tuple:
        return tuple(self.coeffs.get(I, ZERO) for I in basis(self.dim, self.degree))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, I) -> object:
        J, s = canonical_sign(I, self.dim)
        if s == 0:
            return ZERO
        return self.coeffs.get(J, ZERO) * s

    def _same_space(self, other: "Form") -> None:
        if self.dim != other.dim or self.degree != other.degree:
            raise ValueError("forms live in different spaces")

    # arithmetic -------------------------------------------------------------------

    def __add__(self, other: "Form") -> "Form":
        self._same_space(other)
        c = dict(self.coeffs)
        for I, v in other.coeffs.items():
            c[I] = c.get(I, ZERO) + v
        return Form(self.dim, self.degree, c)

    def __neg__(self) -> "Form":
        return Form(self.dim, self.degree, {I: -v for I, v in self.coeffs.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, c) -> "Form":
        c = scalar(c)
        return Form(self.dim, self.degree, {I: v * c for I, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    __hash__ = None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for I in sorted(self.coeffs):
            c = self.coeffs[I]
            label = monomial_label(I, self.dim)
            if label == "1":
                term = fmt(abs(c))
            elif abs(c) == 1:
                term = label
            else:
                term = f"{fmt(abs(c))}*{label}"
            parts.append(("-" if c < 0 else "+", term))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, t in parts[1:]:
            out += f"{s}{t}"
        return out

    def __repr__(self) -> str:
        return f"Form({self})"


_TERM = re.compile(r"([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*?\s*)?(e\^?\{?[0-9,()]+\}?)?")


def parse_form(text: str, dim: int) -> Form:
    s = text.replace(" ", "").replace("−", "-")
    if not s or s == "0":
        raise ValueError("cannot infer the degree of an empty form; use Form.zero")
    pos = 0
    terms: list[tuple[MultiIndex, object]] = []
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos or (mt.group(2) is None and mt.group(3) is None):
            raise ValueError(f"cannot parse form {text!r} at position {pos}")
        sign, num, mono = mt.groups()
        c = scalar(num) if num else ONE
        if sign == "-":
            c = -c
        if mono is None:
            I: MultiIndex = ()
        else:
            body = mono.lstrip("e^").strip("{}()")
            if "," in body or dim > 9:
                I = tuple(int(t) for t in body.replace("(", "").replace(")", "").split(","))
            else:
                I = tuple(int(ch) for ch in body)
        terms.append((I, c))
        pos = mt.end()
    degrees = {len(I) for I, _ in terms}
    if len(degrees) != 1:
        raise ValueError(f"inhomogeneous form {text!r}")
    out = Form.zero(dim, degrees.pop())
    for I, c in terms:
        out = out + Form(dim, len(I), {I: c})
    return out


def wedge(a: Form, b: Form) -> Form:
    if a.dim != b.dim:
        raise ValueError("wedge of forms in different dimensions")
    deg = a.degree + b.degree
    if deg > a.dim:
        return Form.zero(a.dim, deg)
    out: dict[MultiIndex, object] = {}
    for I, x in a.coeffs.items():
        sI = set(I)
        for J, y in b.coeffs.items():
            if sI.intersection(J):
                continue
            K = tuple(sorted(I + J))
            out[K] = out.get(K, ZERO) + _merge_sign(I, J) * x * y
    return Form(a.dim, deg, out)


def wedge_power(a: Form, k: int) -> Form:
    out = Form.one(a.dim)
    for _ in range(k):
        out = wedge(out, a)
    return out


# --------------------------------------------------------------------------------
# 2-forms, bivectors and the structures built from them


def two_form_matrix(omega: Form) -> Matrix:
    """``W[i][j] = omega(e_i, e_j)``."""
    if omega.degree != 2:
        raise ValueError("expected a 2-form")
    m = omega.dim
    w = Matrix.zeros(m, m)
    for (i, j), c in omega.coeffs.items():
        w.rows[i - 1][j - 1] = c
        w.rows[j - 1][i - 1] = -c
    return w


def two_form_from_matrix(w: Matrix) -> Form:
    m = w.nrows
    return Form(m, 2, {(i + 1, j + 1): w[i, j] for i in range(m) for j in range(i + 1, m) if w[i, j]})


@dataclass(frozen=True, eq=False)
class Bivector:
    """Σ_{i<j} P[i][j] e_i ∧ e_j with P skew-symmetric."""

    dim: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError("bivector matrix has the wrong shape")
        if self.matrix.T != -self.matrix:
            raise ValueError("bivector matrix is not skew-symmetric")

    def pairs(self):
        P = self.matrix
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if P[i, j]:
                    yield i + 1, j + 1, P[i, j]


def contract_vector(i: int, a: Form) -> Form:
    """ι_{e_i} a, evaluating a on e_i in the first slot."""
    if a.degree == 0:
        return Form.zero(a.dim, -1)
    out: dict[MultiIndex, object] = {}
    for I, c in a.coeffs.items():
        if i in I:
            p = I.index(i)
            out[I[:p] + I[p + 1:]] = -c if p & 1 else c
    return Form(a.dim, a.degree - 1, out)


def interior_product(v: Bivector, a: Form) -> Form:
    """ι_v a with ι_{X∧Y} = ι_Y ∘ ι_X, i.e. (ι_{X∧Y} a)(…) = a(X, Y, …)."""
    if v.dim != a.dim:
        raise ValueError("dimension mismatch")
    if a.degree < 2:
        return Form.zero(a.dim, a.degree - 2)
    out = Form.zero(a.dim, a.degree - 2)
    for i, j, c in v.pairs():
        out = out + contract_vector(j, contract_vector(i, a)) * c
    return out


def omega_inverse(omega: Form) -> Bivector:
    """The Poisson bivector of a nondegenerate 2-form.

    Normalized so that ι_{Ω^{-1}} Ω = n, which makes H = [L, Λ] act as
    n − h on h-forms for Λ = −ι_{Ω^{-1}}.
    """
    w = two_form_matrix(omega)
    try:
        winv = w.inverse()
    except ZeroDivisionError:
        raise DegenerateForm(f"2-form {omega} is degenerate") from None
    return Bivector(omega.dim, -winv)


def pfaffian(omega: Form) -> object:
    """Coefficient of e^{1…m} in Ω^n / n!."""
    m = omega.dim
    if m % 2:
        return ZERO
    top = wedge_power(omega, m // 2)
    return top.coeffs.get(tuple(range(1, m + 1)), ZERO) / factorial(m // 2)


def is_nondegenerate(omega: Form) -> bool:
    return omega.dim % 2 == 0 and pfaffian(omega) != 0


# --------------------------------------------------------------------------------
# graded operators


class GradedOperator:
    """A linear map on ∧^• given degree by degree.

    ``mats[h]`` is the matrix from the degree-h monomial basis (columns) to the
    degree-``targets[h]`` basis (rows).  Operators with a constant degree
    shift are the common case; star operators send h to m − h.
    """

    __slots__ = ("dim", "mats", "targets")

    def __init__(self, dim: int, mats: Mapping[int, Matrix], targets: Mapping[int, int]):
        self.dim = dim
        self.mats = dict(mats)
        self.targets = dict(targets)
        for h, M in self.mats.items():
            t = self.targets[h]
            rows = comb(dim, t) if 0 <= t <= dim else 0
            if M.shape != (rows, comb(dim, h)):
                raise ValueError(f"matrix for degree {h} has shape {M.shape}, "
                                 f"expected {(rows, comb(dim, h))}")

    @classmethod
    def with_shift(cls, dim: int, shift: int, mats: Mapping[int, Matrix]) -> "GradedOperator":
        return cls(dim, mats, {h: h + shift for h in mats})

    @classmethod
    def from_function(cls, dim: int, target: Callable[[int], int],
                      f: Callable[[Form], Form], degrees: Iterable[int] | None = None) -> "GradedOperator":
        mats, targets = {}, {}
        for h in (range(dim + 1) if degrees is None else degrees):
            t = target(h)
            cols = []
            nrows = comb(dim, t) if 0 <= t <= dim else 0
            for I in basis(dim, h):
                img = f(Form(dim, h, {I: ONE}))
                if nrows:
                    if img.degree != t:
                        raise ValueError("operator image has unexpected degree")
                    cols.append(img.to_vector())
                else:
                    cols.append(())
            mats[h] = Matrix.from_columns(cols, nrows) if cols else Matrix.zeros(nrows, 0)
            targets[h] = t
        return cls(dim, mats, targets)

    @classmethod
    def identity(cls, dim: int) -> "GradedOperator":
        return cls.with_shift(dim, 0, {h: Matrix.identity(comb(dim, h)) for h in range(dim + 1)})

    @classmethod
    def zero(cls, dim: int, shift: int) -> "GradedOperator":
        return cls.with_shift(dim, shift, {
            h: Matrix.zeros(comb(dim, h + shift) if 0 <= h + shift <= dim else 0, comb(dim, h))
            for h in range(dim + 1)})

    @property
    def shift(self) -> int | None:
        shifts = {t - h for h, t in self.targets.items()}
        return shifts.pop() if len(shifts) == 1 else None

    def __getitem__(self, h: int) -> Matrix:
        return self.mats[h]

    def degrees(self) -> list[int]:
        return sorted(self.mats)

    def __call__(self, a: Form) -> Form:
        if a.degree not in self.mats:
            if a.is_zero() and self.shift is not None:
                return Form.zero(self.dim, a.degree + self.shift)
            raise KeyError(f"operator not defined on degree {a.degree}")
        M = self.mats[a.degree]
        t = self.targets[a.degree]
        return Form.from_vector(self.dim, t, M @ a.to_vector())

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        if not isinstance(other, GradedOperator):
            return NotImplemented
        mats, targets = {}, {}
        for h in other.degrees():
            mid = other.targets[h]
            if mid in self.mats:
                mats[h] = self.mats[mid] @ other.mats[h]
                targets[h] = self.targets[mid]
            elif not 0 <= mid <= self.dim:
                t = mid + (self.shift or 0)
                mats[h] = Matrix.zeros(comb(self.dim, t) if 0 <= t <= self.dim else 0,
                                       comb(self.dim, h))
                targets[h] = t
        return GradedOperator(self.dim, mats, targets)

    def _combine(self, other: "GradedOperator", op) -> "GradedOperator":
        mats = {}
        for h in self.degrees():
            if h not in other.mats:
                continue
            if self.targets[h] != other.targets[h]:
                raise ValueError("operators have different degree behaviour")
            mats[h] = op(self.mats[h], other.mats[h])
        return GradedOperator(self.dim, mats, {h: self.targets[h] for h in mats})

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, Matrix.__add__)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, Matrix.__sub__)

    def __neg__(self) -> "GradedOperator":
        return GradedOperator(self.dim, {h: -M for h, M in self.mats.items()}, self.targets)

    def __mul__(self, c) -> "GradedOperator":
        return GradedOperator(self.dim, {h: M * c for h, M in self.mats.items()}, self.targets)

    __rmul__ = __mul__

    def power(self, k: int) -> "GradedOperator":
        out = GradedOperator.identity(self.dim)
        for _ in range(k):
            out = self @ out
        return out

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.mats.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return self.targets == other.targets and self.mats == other.mats

    __hash__ = None

    def restrict(self, degrees: Iterable[int]) -> "GradedOperator":
        ds = [h for h in degrees if h in self.mats]
        return GradedOperator(self.dim, {h: self.mats[h] for h in ds}, {h: self.targets[h] for h in ds})

    def __repr__(self) -> str:
        s = self.shift
        return f"GradedOperator(dim={self.dim}, shift={s if s is not None else 'mixed'})"


def commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b - b @ a


def wedge_operator(a: Form) -> GradedOperator:
    """The operator x ↦ a ∧ x."""
    return GradedOperator.from_function(a.dim, lambda h: h + a.degree, lambda x: wedge(a, x))


def lefschetz_operators(omega: Form) -> tuple[GradedOperator, GradedOperator, GradedOperator]:
    """L = Ω∧·, Λ = −ι_{Ω^{-1}} and H = [L, Λ]."""
    pi = omega_inverse(omega)
    m = omega.dim
    L = wedge_operator(omega)
    Lam = GradedOperator.from_function(m, lambda h: h - 2, lambda x: -interior_product(pi, x))
    H = commutator(L, Lam)
    return L, Lam, H


def is_primitive(omega: Form, a: Form) -> bool:
    """L^{n−h+1} a = 0, the Lefschetz characterization of primitivity."""
    n = omega.dim // 2
    if a.degree > n:
        return a.is_zero()
    img = wedge(wedge_power(omega, n - a.degree + 1), a)
    return img.is_zero()


@lru_cache(maxsize=64)
def _primitive_basis(omega_key, dim: int, degree: int):
    omega = Form(dim, 2, dict(omega_key))
    n = dim // 2
    Lp = wedge_operator(wedge_power(omega, n - degree + 1))
    return [Form.from_vector(dim, degree, v) for v in Lp[degree].nullspace()]


def primitive_basis(omega: Form, degree: int) -> list[Form]:
    if degree > omega.dim // 2:
        return []
    return _primitive_basis(tuple(sorted(omega.coeffs.items())), omega.dim, degree)


def lefschetz_decompose(omega: Form, a: Form) -> list[tuple[int, Form]]:
    """Write a = Σ_r L^r a_r with each a_r primitive; zero components are dropped.

    The components are found by solving one linear system over the union
    of the primitive bases pushed forward by L^r; uniqueness makes the
    solution the decomposition.
    """
    if not is_nondegenerate(omega):
        raise DegenerateForm(f"2-form {omega} is degenerate")
    h, m = a.degree, a.dim
    blocks = []
    cols = []
    for r in range(h // 2 + 1):
        p = h - 2 * r
        prims = primitive_basis(omega, p)
        Lr = wedge_power(omega, r)
        blocks.append((r, p, len(prims), prims))
        for b in prims:
            cols.append(wedge(Lr, b).to_vector())
    from .linalg import solve
    M = Matrix.from_columns(cols, comb(m, h)) if cols else Matrix.zeros(comb(m, h), 0)
    x = solve(M, a.to_vector())
    if x is None:
        raise ArithmeticError("Lefschetz decomposition failed; the 2-form is not symplectic")
    out, pos = [], 0
    for r, p, size, prims in blocks:
        comp = Form.zero(m, p)
        for b, c in zip(prims, x[pos:pos + size]):
            if c:
                comp = comp + b * c
        pos += size
        if not comp.is_zero():
            out.append((r, comp))
    return out


# --------------------------------------------------------------------------------
# complex structures, metrics, stars


def _exact_sqrt(x) -> object:
    x = scalar(x)
    p, q = x.numerator, x.denominator
    if p < 0 or not (gmpy2.is_square(p) and gmpy2.is_square(q)):
        raise ValueError(f"{fmt(x)} has no rational square root")
    return gmpy2.mpq(gmpy2.isqrt(p), gmpy2.isqrt(q))


@dataclass(frozen=True, eq=False)
class AlmostComplexStructure:
    """J acting on vectors: ``J e_j = Σ_i J[i][j] e_i``."""

    matrix: Matrix

    def __post_init__(self):
        J = self.matrix
        if J.nrows != J.ncols:
            raise NotAComplexStructure("J must be square")
        if J @ J != -Matrix.identity(J.nrows):
            raise NotAComplexStructure("J^2 is not -id")

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    @classmethod
    def from_coframe(cls, dim: int, images: Mapping[int, Form]) -> "AlmostComplexStructure":
        """Build J from its action on 1-forms, (Jα) = α ∘ J^{-1}.

        Only half of the coframe needs to be given: J e^i = φ forces
        J φ = −e^i.
        """
        act = {}
        for i, phi in images.items():
            if phi.degree != 1:
                raise ValueError("J must send 1-forms to 1-forms")
            act[i] = phi.to_vector()
            v = phi.to_vector()
            nz = [j for j, c in enumerate(v) if c]
            if len(nz) == 1 and (nz[0] + 1) not in images:
                e = [ZERO] * dim
                e[i - 1] = -ONE / v[nz[0]]
                act[nz[0] + 1] = tuple(e)
        missing = set(range(1, dim + 1)) - set(act)
        if missing:
            raise NotAComplexStructure(f"J undetermined on e^{sorted(missing)}")
        # columns of the covector action matrix Jc = (J^{-1})^T
        Jc = Matrix.from_columns([act[i] for i in range(1, dim + 1)], dim)
        # J = ((Jc)^T)^{-1} = -(Jc)^T
        return cls(-(Jc.T))

    def covector_matrix(self) -> Matrix:
        """Matrix of α ↦ α ∘ J^{-1} on the coordinate vectors of 1-forms."""
        return -(self.matrix.T)


@dataclass(frozen=True, eq=False)
class Metric:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        if g.nrows != g.ncols or g.T != g:
            raise NotPositiveDefinite("metric Gram matrix is not symmetric")
        for k in range(1, g.nrows + 1):
            minor = Matrix._raw([r[:k] for r in g.rows[:k]], k, k).det()
            if minor <= 0:
                raise NotPositiveDefinite(f"leading principal minor of order {k} is {fmt(minor)}")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    @classmethod
    def standard(cls, dim: int) -> "Metric":
        return cls(Matrix.identity(dim))

    def volume_factor(self) -> object:
        return _exact_sqrt(self.gram.det())


def j_on_forms(J: AlmostComplexStructure, a: Form) -> Form:
    return j_operator(J)(a)


def j_operator(J: AlmostComplexStructure) -> GradedOperator:
    """J extended to forms as an algebra map, (Ja)(X_1…X_h) = a(J^{-1}X_1, …)."""
    m = J.dim
    Jc = J.covector_matrix()
    images = [Form.from_vector(m, 1, Jc.column(i)) for i in range(m)]

    def act(x: Form) -> Form:
        out = Form.zero(m, x.degree)
        for I, c in x.coeffs.items():
            t = Form.one(m)
            for i in I:
                t = wedge(t, images[i - 1])
            out = out + t * c
        return out

    return GradedOperator.from_function(m, lambda h: h, act)


def _complement(I: MultiIndex, m: int) -> MultiIndex:
    s = set(I)
    return tuple(i for i in range(1, m + 1) if i not in s)


def _minor(P: Matrix, I: MultiIndex, J: MultiIndex) -> object:
    if not I:
        return ONE
    return Matrix._raw([[P[i - 1, j - 1] for j in J] for i in I], len(I), len(J)).det()


def _star_from_pairing(m: int, pairing: Matrix, vol) -> GradedOperator:
    """Star defined by b ∧ ⋆a = pairing(b, a)·vol·e^{1…m} on basis monomials."""
    mats, targets = {}, {}
    for h in range(m + 1):
        B = basis(m, h)
        t = m - h
        tindex = basis_index(m, t)
        M = Matrix.zeros(len(basis(m, t)), len(B))
        for col, J in enumerate(B):
            for I in B:
                G = _minor(pairing, I, J)
                if G:
                    Ic = _complement(I, m)
                    M.rows[tindex[Ic]][col] += _merge_sign(I, Ic) * G * vol
        mats[h], targets[h] = M, t
    return GradedOperator(m, mats, targets)


def symplectic_star_operator(omega: Form) -> GradedOperator:
    """b ∧ ⋆a = G(b, a)·Ω^n/n!, G induced on forms by Ω^{-1}.

    G(e^I, e^J) is the minor of the transposed bivector matrix; with this
    argument order ⋆ = J∗ for every compatible triple (g = Ω(·, J·)).
    """
    pi = omega_inverse(omega)
    return _star_from_pairing(omega.dim, pi.matrix.T, pfaffian(omega))


def symplectic_star(omega: Form, a: Form) -> Form:
    return symplectic_star_operator(omega)(a)


def form_gram(g: Metric, h: int) -> Matrix:
    """Inner products ⟨e^I, e^J⟩_g of degree-h monomials."""
    ginv = g.gram.inverse()
    B = basis(g.dim, h)
    return Matrix([[_minor(ginv, I, J) for J in B] for I in B], len(B))


def hodge_star_operator(g: Metric, orientation: int = 1) -> GradedOperator:
    """b ∧ ∗a = ⟨b, a⟩_g vol_g with vol_g = ±sqrt(det g)·e^{1…m}.

    ``orientation = -1`` orients by −e^{1…m}; an lcs structure passes the
    sign of its Pfaffian so that vol_g = Ω^n/n! for compatible triples.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    return _star_from_pairing(g.dim, g.gram.inverse(), g.volume_factor() * orientation)


def hodge_star(g: Metric, a: Form, orientation: int = 1) -> Form:
    return hodge_star_operator(g, orientation)(a)


def forms_to_subspace(forms: Sequence[Form], dim: int, degree: int) -> Subspace:
    for f in forms:
        if f.dim != dim or f.degree != degree:
            raise ValueError("forms must be homogeneous of the same degree")
    return Subspace(comb(dim, degree), [f.to_vector() for f in forms])


def subspace_to_forms(S: Subspace, dim: int, degree: int) -> list[Form]:
    return [Form.from_vector(dim, degree, b) for b in S.basis]


def subspace_ops(u: Sequence[Form], v: Sequence[Form], dim: int, degree: int) -> dict[str, list[Form]]:
    """Sum, intersection and quotient complement (u modulo u ∩ v) as form bases."""
    U, V = forms_to_subspace(u, dim, degree), forms_to_subspace(v, dim, degree)
    res = _subspace_ops(U, V)
    return {k: subspace_to_forms(S, dim, degree) for k, S in res.items()}
