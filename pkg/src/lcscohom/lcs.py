"""Locally conformally symplectic structures and the twisted operator calculus.

For a weight k the twisted differential is d_k = d − kθ∧, and
δ_k = d_{k−1}Λ − Λd_k.  Both are handled as pencils, i.e. operators whose
matrices are polynomials in k, so that evaluation at any rational weight
is exact and compositions such as δ_k d_k stay symbolic in k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence

from .exterior import (AlmostComplexStructure, DegenerateForm, Form, GradedOperator, Metric,
                       NotPositiveDefinite, basis, form_gram, hodge_star_operator,
                       is_nondegenerate, j_operator, lefschetz_operators, pfaffian,
                       symplectic_star_operator, two_form_from_matrix, two_form_matrix,
                       wedge, wedge_operator)
from .liealg import LieAlgebra
from .linalg import ONE, ZERO, Matrix, fmt, scalar, solve


class NotLcs(ValueError):
    pass


class LeeFormNotClosed(NotLcs):
    pass


class IncompatibleTriple(ValueError):
    pass


# ----------------------------------------------------------------------------------
# pencils


class OperatorPencil:
    """A family of graded operators P(k) = Σ_j k^j C_j with a constant degree shift.

    ``coeffs[h]`` lists the matrices C_0, C_1, … acting on degree h.
    """

    __slots__ = ("dim", "shift", "coeffs")

    def __init__(self, dim: int, shift: int, coeffs: Mapping[int, Sequence[Matrix]]):
        self.dim = dim
        self.shift = shift
        self.coeffs = {}
        for h, cs in coeffs.items():
            cs = list(cs)
            while len(cs) > 1 and cs[-1].is_zero():
                cs.pop()
            self.coeffs[h] = cs

    @classmethod
    def constant(cls, op: GradedOperator) -> "OperatorPencil":
        s = op.shift
        if s is None:
            raise ValueError("pencils need a constant degree shift")
        return cls(op.dim, s, {h: [op[h]] for h in op.degrees()})

    @classmethod
    def affine(cls, a: GradedOperator, b: GradedOperator) -> "OperatorPencil":
        """The pencil k ↦ a + k·b."""
        if a.shift != b.shift or a.shift is None:
            raise ValueError("affine pencil parts must share a degree shift")
        return cls(a.dim, a.shift, {h: [a[h], b[h]] for h in a.degrees()})

    @property
    def poly_degree(self) -> int:
        return max((len(cs) - 1 for cs in self.coeffs.values()), default=0)

    def degrees(self) -> list[int]:
        return sorted(self.coeffs)

    def matrix_coeffs(self, h: int) -> list[Matrix]:
        return self.coeffs[h]

    def at(self, k, h: int) -> Matrix:
        """The matrix of P(k) on degree h (Horner evaluation)."""
        k = scalar(k)
        cs = self.coeffs[h]
        out = cs[-1]
        for c in reversed(cs[:-1]):
            out = out * k + c
        return out

    def __call__(self, k) -> GradedOperator:
        k = scalar(k)
        return GradedOperator.with_shift(self.dim, self.shift, {h: self.at(k, h) for h in self.degrees()})

    def _zero(self, h: int) -> Matrix:
        t = h + self.shift
        return Matrix.zeros(comb(self.dim, t) if 0 <= t <= self.dim else 0, comb(self.dim, h))

    def __add__(self, other: "OperatorPencil") -> "OperatorPencil":
        if self.shift != other.shift:
            raise ValueError("pencil shifts differ")
        out = {}
        for h in self.degrees():
            a, b = self.coeffs[h], other.coeffs[h]
            n = max(len(a), len(b))
            out[h] = [(a[j] if j < len(a) else self._zero(h)) + (b[j] if j < len(b) else self._zero(h))
                      for j in range(n)]
        return OperatorPencil(self.dim, self.shift, out)

    def __neg__(self) -> "OperatorPencil":
        return OperatorPencil(self.dim, self.shift, {h: [-c for c in cs] for h, cs in self.coeffs.items()})

    def __sub__(self, other: "OperatorPencil") -> "OperatorPencil":
        return self + (-other)

    def __mul__(self, c) -> "OperatorPencil":
        return OperatorPencil(self.dim, self.shift, {h: [m * c for m in cs] for h, cs in self.coeffs.items()})

    __rmul__ = __mul__

    def __matmul__(self, other) -> "OperatorPencil":
        if isinstance(other, GradedOperator):
            other = OperatorPencil.constant(other)
        shift = self.shift + other.shift
        out = {}
        for h in other.degrees():
            mid = h + other.shift
            if mid in self.coeffs:
                a, b = self.coeffs[mid], other.coeffs[h]
                terms: list = [None] * (len(a) + len(b) - 1)
                for i, x in enumerate(a):
                    for j, y in enumerate(b):
                        p = x @ y
                        terms[i + j] = p if terms[i + j] is None else terms[i + j] + p
                out[h] = terms
            else:
                t = h + shift
                out[h] = [Matrix.zeros(comb(self.dim, t) if 0 <= t <= self.dim else 0, comb(self.dim, h))]
        return OperatorPencil(self.dim, shift, out)

    def __rmatmul__(self, other: GradedOperator) -> "OperatorPencil":
        return OperatorPencil.constant(other) @ self

    def reweight(self, a) -> "OperatorPencil":
        """The pencil k ↦ P(k + a)."""
        a = scalar(a)
        out = {}
        for h, cs in self.coeffs.items():
            n = len(cs)
            new = [c * 0 for c in cs]
            # binomial expansion of (k + a)^j
            for j, c in enumerate(cs):
                for i in range(j + 1):
                    new[i] = new[i] + c * (comb(j, i) * a ** (j - i))
            out[h] = new
        return OperatorPencil(self.dim, self.shift, out)

    def is_zero(self) -> bool:
        return all(c.is_zero() for cs in self.coeffs.values() for c in cs)

    def __repr__(self) -> str:
        return f"OperatorPencil(dim={self.dim}, shift={self.shift:+d}, degree={self.poly_degree})"


# ----------------------------------------------------------------------------------
# structures


def lee_form(g: LieAlgebra, omega: Form) -> Form:
    """The 1-form θ with dΩ = θ∧Ω; raises if none exists or it is not closed."""
    if not is_nondegenerate(omega):
        raise DegenerateForm(f"2-form {omega} is degenerate")
    m = g.dim
    dO = g.d(omega)
    cols = [wedge(Form.monomial(m, (i,)), omega).to_vector() for i in range(1, m + 1)]
    x = solve(Matrix.from_columns(cols, comb(m, 3)), dO.to_vector())
    if x is None:
        raise NotLcs(f"no 1-form θ satisfies dΩ = θ∧Ω for Ω = {omega}")
    theta = Form.from_vector(m, 1, x)
    if not g.d(theta).is_zero():
        raise LeeFormNotClosed(f"θ = {theta} solves dΩ = θ∧Ω but dθ = {g.d(theta)}")
    return theta


def triple_defects(omega: Form, J: AlmostComplexStructure, g: Metric | None = None) -> list[str]:
    """Reasons why (Ω, J, g) fails to be an almost-Hermitian triple."""
    W = two_form_matrix(omega)
    Jm = J.matrix
    out = []
    if Jm.T @ W @ Jm != W:
        out.append("Ω(J·, J·) != Ω")
    G = W @ Jm
    if G.T != G:
        out.append("Ω(·, J·) is not symmetric")
    else:
        try:
            Metric(G)
        except NotPositiveDefinite:
            out.append("Ω(·, J·) is not positive definite")
    if g is not None and g.gram != G:
        out.append("g != Ω(·, J·)")
    return out


def metric_of(omega: Form, J: AlmostComplexStructure) -> Metric:
    return Metric(two_form_matrix(omega) @ J.matrix)


def darboux_basis(omega: Form) -> Matrix:
    """Columns u_1, v_1, …, u_n, v_n with Ω(u_i, v_i) = 1 and all other pairings 0.

    Symplectic Gram–Schmidt over the rationals, scanning the standard basis.
    """
    m = omega.dim
    W = two_form_matrix(omega)
    if m % 2 or W.det() == 0:
        raise DegenerateForm(f"2-form {omega} is degenerate")

    def pair(x, y):
        return sum((x[i] * W[i, j] * y[j] for i in range(m) for j in range(m) if x[i] and y[j]), ZERO)

    pool = [tuple(ONE if i == j else ZERO for i in range(m)) for j in range(m)]
    out = []
    while pool:
        u = pool.pop(0)
        if not any(u):
            continue
        partner = next((q for q, y in enumerate(pool) if pair(u, y)), None)
        if partner is None:
            raise DegenerateForm(f"2-form {omega} is degenerate")
        v = pool.pop(partner)
        c = pair(u, v)
        v = tuple(x / c for x in v)
        out += [u, v]
        # project the rest onto the Ω-orthogonal of span{u, v}
        pool = [tuple(x[i] - pair(x, v) * u[i] + pair(x, u) * v[i] for i in range(m)) for x in pool]
    return Matrix.from_columns(out, m)


def compatible_triple(omega: Form) -> tuple[AlmostComplexStructure, Metric]:
    """J standard in a Darboux basis (J u_i = v_i), and g = Ω(·, J·)."""
    m = omega.dim
    P = darboux_basis(omega)
    Jstd = Matrix.zeros(m, m)
    for i in range(0, m, 2):
        Jstd.rows[i + 1][i] = ONE
        Jstd.rows[i][i + 1] = -ONE
    J = AlmostComplexStructure(P @ Jstd @ P.inverse())
    g = metric_of(omega, J)
    bad = triple_defects(omega, J, g)
    if bad:
        raise IncompatibleTriple("; ".join(bad))
    return J, g


class LcsStructure:
    """A Lie algebra with an lcs form Ω and its Lee form θ, plus an optional
    compatible triple (J, g)."""

    def __init__(self, algebra: LieAlgebra, omega: Form, theta: Form | None = None,
                 J: AlmostComplexStructure | None = None, metric: Metric | None = None,
                 name: str = "", validate: bool = True):
        """``validate=False`` skips the Lee-form check (diagnostics only: the
        identities tied to dΩ = θ∧Ω are then expected to fail)."""
        m = algebra.dim
        if omega.dim != m or omega.degree != 2:
            raise ValueError("Ω must be a 2-form on the algebra")
        if not is_nondegenerate(omega):
            raise DegenerateForm(f"2-form {omega} is degenerate")
        if not validate and theta is not None:
            found = theta
        else:
            found = lee_form(algebra, omega)
        if theta is None:
            theta = found
        elif theta != found:
            if not algebra.d(theta).is_zero():
                raise LeeFormNotClosed(f"dθ = {algebra.d(theta)} for θ = {theta}")
            raise NotLcs(f"dΩ − θ∧Ω != 0 for θ = {theta}; the Lee form is {found}")
        self.algebra = algebra
        self.omega = omega
        self.theta = theta
        self.name = name or algebra.name
        self.triple_source = None
        self._J, self._g = None, None
        if J is not None:
            if metric is None:
                metric = metric_of(omega, J) if not triple_defects(omega, J) else None
            bad = triple_defects(omega, J, metric)
            if bad:
                raise IncompatibleTriple("; ".join(bad))
            self._J, self._g = J, metric
            self.triple_source = "given"
        elif metric is not None:
            raise IncompatibleTriple("a metric without J cannot be checked for compatibility")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def n(self) -> int:
        return self.algebra.dim // 2

    @property
    def J(self) -> AlmostComplexStructure:
        self._ensure_triple()
        return self._J

    @property
    def metric(self) -> Metric:
        self._ensure_triple()
        return self._g

    @property
    def has_given_triple(self) -> bool:
        return self.triple_source == "given"

    def _ensure_triple(self) -> None:
        if self._J is None:
            self._J, self._g = compatible_triple(self.omega)
            self.triple_source = "synthesized"

    @cached_property
    def lefschetz(self) -> tuple[GradedOperator, GradedOperator, GradedOperator]:
        return lefschetz_operators(self.omega)

    @property
    def L(self) -> GradedOperator:
        return self.lefschetz[0]

    @property
    def Lam(self) -> GradedOperator:
        return self.lefschetz[1]

    @property
    def H(self) -> GradedOperator:
        return self.lefschetz[2]

    @cached_property
    def d(self) -> OperatorPencil:
        return d_pencil(self)

    @cached_property
    def delta(self) -> OperatorPencil:
        return delta_pencil(self)

    @cached_property
    def delta_d(self) -> OperatorPencil:
        """k ↦ δ_k d_k (quadratic in k)."""
        return self.delta @ self.d

    @cached_property
    def sym_star(self) -> GradedOperator:
        return symplectic_star_operator(self.omega)

    @cached_property
    def hodge_star(self) -> GradedOperator:
        return hodge_star_operator(self.metric, self.orientation)

    @property
    def orientation(self) -> int:
        """Sign of Ω^n/n! relative to e^{1…m}."""
        return 1 if pfaffian(self.omega) > 0 else -1

    @cached_property
    def j_forms(self) -> GradedOperator:
        return j_operator(self.J)

    def form_grams(self) -> dict[int, Matrix]:
        return {h: form_gram(self.metric, h) for h in range(self.dim + 1)}

    def __repr__(self) -> str:
        return f"LcsStructure({self.name or self.algebra!r}, Ω={self.omega}, θ={self.theta})"


def d_pencil(s: LcsStructure) -> OperatorPencil:
    """k ↦ d − kθ∧."""
    return OperatorPencil.affine(s.algebra.d, -wedge_operator(s.theta))


def delta_pencil(s: LcsStructure) -> OperatorPencil:
    """k ↦ d_{k−1}Λ − Λd_k."""
    d = d_pencil(s)
    Lam = s.Lam
    out = d.reweight(-1) @ Lam - (Lam @ d)
    assert out.poly_degree <= 1, "δ_k should be affine in k"
    return out


def dc_pencil(s: LcsStructure) -> OperatorPencil:
    """k ↦ d^c_k = J^{-1} d_k J."""
    Jf = s.j_forms
    Jinv = GradedOperator(s.dim, {h: M * (-1) ** h for h, M in Jf.mats.items()}, Jf.targets)
    return Jinv @ s.d @ Jf


# ----------------------------------------------------------------------------------
# identity checks


@dataclass
class Check:
    name: str
    degree: int | None
    ok: bool
    detail: str = ""


@dataclass
class Report:
    weight: object = None
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, degree: int | None, lhs: Matrix, rhs: Matrix | None = None) -> None:
        diff = lhs if rhs is None else lhs - rhs
        bad = list(diff.nonzero_entries())
        detail = ""
        if bad:
            i, j, v = bad[0]
            detail = f"{len(bad)} nonzero entries, first at ({i},{j}) = {fmt(v)}"
        self.checks.append(Check(name, degree, not bad, detail))

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        lines = [f"{'ok  ' if c.ok else 'FAIL'} {c.name} (degree {c.degree}) {c.detail}".rstrip()
                 for c in self.checks]
        return "\n".join(lines)


def _degrees(s: LcsStructure) -> range:
    return range(s.dim + 1)


def _pair(a: GradedOperator, b: GradedOperator, h: int) -> Matrix:
    """Matrix of a∘b on degree h (zero when the middle degree is out of range)."""
    mid = b.targets[h]
    if mid in a.mats:
        return a[mid] @ b[h]
    t = mid + (a.shift or 0)
    return Matrix.zeros(comb(a.dim, t) if 0 <= t <= a.dim else 0, comb(a.dim, h))


def verify_bidifferential(s: LcsStructure, k) -> Report:
    """(d_k)^2 = 0, δ_kδ_{k+1} = 0 and d_{k−1}δ_k + δ_kd_k = 0 in every degree."""
    k = scalar(k)
    d_k, d_km1 = s.d(k), s.d(k - 1)
    de_k, de_kp1 = s.delta(k), s.delta(k + 1)
    rep = Report(k)
    for h in _degrees(s):
        rep.add("d_k d_k = 0", h, _pair(d_k, d_k, h))
        rep.add("delta_k delta_{k+1} = 0", h, _pair(de_k, de_kp1, h))
        rep.add("d_{k-1} delta_k + delta_k d_k = 0", h, _pair(d_km1, de_k, h) + _pair(de_k, d_k, h))
    return rep


def verify_commutations(s: LcsStructure, k) -> Report:
    k = scalar(k)
    L, Lam = s.L, s.Lam
    d = s.d
    de = s.delta
    rep = Report(k)
    for h in _degrees(s):
        rep.add("L d_k - d_{k+1} L = 0", h, _pair(L, d(k), h) - _pair(d(k + 1), L, h))
        rep.add("L delta_k - delta_{k+1} L = d_k", h, _pair(L, de(k), h) - _pair(de(k + 1), L, h), d(k)[h])
        rep.add("delta_{k-1} Lam - Lam delta_k = 0", h, _pair(de(k - 1), Lam, h) - _pair(Lam, de(k), h))
        rep.add("d_{k-1} Lam - Lam d_k = delta_k", h, _pair(d(k - 1), Lam, h) - _pair(Lam, d(k), h), de(k)[h])
    return rep


def verify_product_rule(s: LcsStructure, k, l) -> Report:
    """d_k d_l = (l − k)θ∧d, which specializes to d_k² = 0."""
    k, l = scalar(k), scalar(l)
    T = wedge_operator(s.theta)
    rep = Report((k, l))
    dk, dl = s.d(k), s.d(l)
    Td = T @ s.algebra.d
    for h in _degrees(s):
        rep.add("d_k d_l = (l-k) theta^d", h, _pair(dk, dl, h), Td[h] * (l - k))
    return rep


def twisted_leibniz_check(s: LcsStructure, k, h) -> bool:
    """d_k(α∧β) = d_{k−h}α∧β + (−1)^{|α|}α∧d_hβ on all monomial pairs."""
    k, h = scalar(k), scalar(h)
    m = s.dim
    dk, dkh, dh = s.d(k), s.d(k - h), s.d(h)
    for p in range(m + 1):
        for q in range(m + 1 - p):
            for I in basis(m, p):
                a = Form.monomial(m, I)
                da = dkh(a)
                for Jx in basis(m, q):
                    b = Form.monomial(m, Jx)
                    lhs = dk(wedge(a, b))
                    rhs = wedge(da, b) + wedge(a, dh(b)) * (-1) ** p
                    if lhs != rhs:
                        return False
    return True


# ----------------------------------------------------------------------------------
# adjoints


def adjoint(M: Matrix, metric: Metric, h_src: int, h_tgt: int) -> Matrix:
    """Adjoint of M: ∧^{h_src} → ∧^{h_tgt} for the inner products induced by g.

    ⟨M x, y⟩ = ⟨x, M* y⟩ gives M* = G_src^{-1} M^T G_tgt.
    """
    Gs, Gt = form_gram(metric, h_src), form_gram(metric, h_tgt)
    return Gs.inverse() @ M.T @ Gt


def adjoint_operator(op: GradedOperator, metric: Metric) -> GradedOperator:
    grams = {h: form_gram(metric, h) for h in range(op.dim + 1)}
    mats, targets = {}, {}
    for h, M in op.mats.items():
        t = op.targets[h]
        if not 0 <= t <= op.dim:
            continue
        mats[t] = grams[h].inverse() @ M.T @ grams[t]
        targets[t] = h
    return GradedOperator(op.dim, mats, targets)


def verify_adjoint_identities(s: LcsStructure, k) -> Report:
    """d_k^* = −∗d_{−k}∗ and δ_k|_{∧^h} = (d^c_{−(n+k−h)})^* for the structure's triple."""
    k = scalar(k)
    g = s.metric
    st = s.hodge_star
    rep = Report(k)
    dk_adj = adjoint_operator(s.d(k), g)
    rhs = -(st @ s.d(-k) @ st)
    for h in range(1, s.dim + 1):
        rep.add("d_k^* = -*d_{-k}*", h, dk_adj[h], rhs[h])
    dc = dc_pencil(s)
    for h in range(s.dim + 1):
        w = -(s.n + k - h)
        lhs = s.delta(k)[h]
        if h == 0:
            rep.add("delta_k = (d^c_w)^*", h, lhs)
            continue
        M = dc(w)[h - 1]
        rep.add("delta_k = (d^c_w)^*", h, lhs, adjoint(M, g, h - 1, h))
    return rep
