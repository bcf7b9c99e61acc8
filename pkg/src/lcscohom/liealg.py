"""Lie algebras given by structure equations, and their Chevalley–Eilenberg complex."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

from .exterior import (AlmostComplexStructure, Form, GradedOperator, Metric,
                       NotAComplexStructure, NotPositiveDefinite, basis, wedge)
from .linalg import ONE, ZERO, Matrix, fmt, scalar


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}" + (f" in {text!r}" if text else ""))


class IndexOutOfRange(ParseError):
    pass


class SchemaError(ValueError):
    pass


class JacobiFailure(ValueError):
    pass


class LieAlgebra:
    """A Lie algebra of dimension m, stored through the 2-forms de^k.

    Structure constants follow de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j, i.e.
    de^k(X, Y) = −e^k([X, Y]).
    """

    def __init__(self, dim: int, differentials: Sequence[Form], name: str = ""):
        if len(differentials) != dim:
            raise ValueError(f"expected {dim} structure 2-forms, got {len(differentials)}")
        for k, f in enumerate(differentials, 1):
            if f.dim != dim or (f.degree != 2 and not f.is_zero()):
                raise ValueError(f"de^{k} is not a 2-form in dimension {dim}")
        self.dim = dim
        self.de = tuple(f if f.degree == 2 else Form.zero(dim, 2) for f in differentials)
        self.name = name

    @classmethod
    def from_constants(cls, dim: int, entries: Sequence[tuple[int, int, int, object]], name: str = "") -> "LieAlgebra":
        """Build from ``(k, i, j, coeff)`` meaning de^k ∋ coeff·e^{ij}."""
        de = [Form.zero(dim, 2) for _ in range(dim)]
        for k, i, j, c in entries:
            for x in (k, i, j):
                if not 1 <= x <= dim:
                    raise IndexOutOfRange(f"index {x} outside 1..{dim}")
            if i == j:
                continue
            de[k - 1] = de[k - 1] + Form(dim, 2, {(i, j): c})
        return cls(dim, de, name)

    def structure_constant(self, k: int, i: int, j: int) -> object:
        """c^k_{ij}, 1-based."""
        return -self.de[k - 1][(i, j)] if i != j else ZERO

    def bracket_matrix(self, i: int) -> Matrix:
        """Matrix of ad_{e_i} in the basis e_1…e_m."""
        m = self.dim
        return Matrix([[self.structure_constant(k, i, j) for j in range(1, m + 1)]
                       for k in range(1, m + 1)], m)

    @cached_property
    def d(self) -> GradedOperator:
        return ce_differential(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.de == other.de

    __hash__ = None

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"LieAlgebra{label}{to_salamon(self) if self.dim <= 9 else ''}"


# ----------------------------------------------------------------------------------
# Salamon notation

_PIECE = re.compile(r"([+-]?)(?:([0-9]+(?:/[0-9]+)?)\*)?([0-9]{2})")


def parse_salamon(s: str, m: int | None = None, name: str = "") -> LieAlgebra:
    """Parse ``"(0,0,12,0)"``-style structure equations.

    Each slot is 0 or a signed sum of digit pairs ``ij`` standing for e^{ij};
    a pair may carry an explicit rational coefficient as ``p/q*ij``.
    """
    text = s
    body = s.strip().replace(" ", "").replace("−", "-")
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError("expected a parenthesized list", text, 0)
    offset = s.find("(") + 1
    slots = body[1:-1].split(",") if body[1:-1] else []
    if m is None:
        m = len(slots)
    if len(slots) != m:
        raise ParseError(f"expected {m} entries, found {len(slots)}", text)
    if m > 9:
        raise ParseError("digit-pair notation supports at most 9 generators", text)
    entries = []
    pos = offset
    for k, slot in enumerate(slots, 1):
        if slot in ("0", "+0", "-0"):
            pos += len(slot) + 1
            continue
        if not slot:
            raise ParseError("empty entry", text, pos)
        p = 0
        while p < len(slot):
            mt = _PIECE.match(slot, p)
            if not mt or mt.end() == p:
                raise ParseError(f"unexpected {slot[p:]!r} in entry {k}", text, pos + p)
            sign, coeff, pair = mt.groups()
            if p > 0 and not sign:
                raise ParseError("missing sign between terms", text, pos + p)
            c = scalar(coeff) if coeff else ONE
            if sign == "-":
                c = -c
            i, j = int(pair[0]), int(pair[1])
            for x in (i, j):
                if not 1 <= x <= m:
                    raise IndexOutOfRange(f"index {x} outside 1..{m}", text, pos + p)
            if i == j:
                raise ParseError(f"repeated index in e^{{{pair}}}", text, pos + p)
            entries.append((k, i, j, c))
            p = mt.end()
        pos += len(slot) + 1
    return LieAlgebra.from_constants(m, entries, name)


def to_salamon(g: LieAlgebra) -> str:
    if g.dim > 9:
        raise ValueError("digit-pair notation supports at most 9 generators")
    slots = []
    for f in g.de:
        if f.is_zero():
            slots.append("0")
            continue
        terms = []
        for (i, j), c in sorted(f.coeffs.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = f"{i}{j}" if mag == 1 else f"{fmt(mag)}*{i}{j}"
            terms.append(sign + body)
        out = "".join(terms)
        slots.append(out[1:] if out.startswith("+") else out)
    return "(" + ",".join(slots) + ")"


pretty_print = to_salamon


# ----------------------------------------------------------------------------------
# Chevalley–Eilenberg differential


def ce_differential(g: LieAlgebra) -> GradedOperator:
    """d on ∧^•g*, extending e^k ↦ de^k by the graded Leibniz rule."""
    m = g.dim

    def d(x: Form) -> Form:
        out = Form.zero(m, x.degree + 1)
        for I, c in x.coeffs.items():
            for p, k in enumerate(I):
                dk = g.de[k - 1]
                if dk.is_zero():
                    continue
                left = Form.monomial(m, I[:p])
                right = Form.monomial(m, I[p + 1:])
                term = wedge(wedge(left, dk), right)
                out = out + (term * (-c if p & 1 else c))
        return out

    return GradedOperator.from_function(m, lambda h: h + 1, d)


def jacobi_defects(g: LieAlgebra) -> list[int]:
    """Generators k with d(de^k) ≠ 0."""
    d = g.d
    return [k for k in range(1, g.dim + 1) if not d(g.de[k - 1]).is_zero()]


def check_jacobi(g: LieAlgebra) -> bool:
    return not jacobi_defects(g)


def is_unimodular(g: LieAlgebra) -> bool:
    """tr ad_x = 0 for every basis vector x."""
    m = g.dim
    return all(sum((g.structure_constant(k, i, k) for k in range(1, m + 1)), ZERO) == 0
               for i in range(1, m + 1))


# ----------------------------------------------------------------------------------
# JSON documents


@dataclass(frozen=True, eq=False)
class AlgebraBundle:
    algebra: LieAlgebra
    omega: Form | None = None
    theta: Form | None = None
    J: AlmostComplexStructure | None = None
    metric: Metric | None = None
    name: str = ""


def _as_scalar(x, where: str):
    if isinstance(x, float):
        raise SchemaError(f"{where}: numbers must be exact strings such as \"1/2\", got {x!r}")
    try:
        return scalar(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: cannot read {x!r} as a rational ({exc})") from None


def _as_index(x, m: int, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= m:
        raise SchemaError(f"{where}: index {x!r} is not in 1..{m}")
    return x


def _square_matrix(rows, m: int, where: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != m or any(not isinstance(r, list) or len(r) != m for r in rows):
        raise SchemaError(f"{where}: expected an {m}x{m} matrix")
    return Matrix([[_as_scalar(v, f"{where}[{a}][{b}]") for b, v in enumerate(r)] for a, r in enumerate(rows)], m)


def _two_form(spec, m: int) -> Form:
    if isinstance(spec, list) and spec and all(isinstance(r, list) and len(r) == m for r in spec) and len(spec) == m \
            and not all(len(r) == 3 for r in spec):
        W = _square_matrix(spec, m, "omega")
        if W.T != -W:
            raise SchemaError("omega: matrix is not skew-symmetric")
        return Form(m, 2, {(i + 1, j + 1): W[i, j] for i in range(m) for j in range(i + 1, m)})
    if not isinstance(spec, list):
        raise SchemaError("omega: expected a list of [i, j, \"p/q\"] entries")
    seen: dict[tuple[int, int], object] = {}
    for n, e in enumerate(spec):
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError(f"omega[{n}]: expected [i, j, \"p/q\"]")
        i = _as_index(e[0], m, f"omega[{n}]")
        j = _as_index(e[1], m, f"omega[{n}]")
        c = _as_scalar(e[2], f"omega[{n}]")
        if i == j:
            if c:
                raise SchemaError(f"omega[{n}]: diagonal entry ({i},{i}) must vanish for a skew form")
            continue
        key, val = ((i, j), c) if i < j else ((j, i), -c)
        if key in seen and seen[key] != val:
            raise SchemaError(f"omega: entries for ({key[0]},{key[1]}) are not skew-symmetric")
        seen[key] = val
    return Form(m, 2, seen)


def load_algebra(document) -> AlgebraBundle:
    """Validate a JSON document (str, bytes, path-like text or parsed dict)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise SchemaError("top level must be an object")
    m = document.get("dim")
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise SchemaError("dim: expected a non-negative integer")
    name = document.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("name: expected a string")
    st = document.get("structure")
    if isinstance(st, str):
        try:
            g = parse_salamon(st, m, name)
        except ParseError as exc:
            raise SchemaError(f"structure: {exc}") from None
    elif isinstance(st, list):
        entries = []
        for n, e in enumerate(st):
            if not isinstance(e, list) or len(e) != 4:
                raise SchemaError(f"structure[{n}]: expected [k, i, j, \"p/q\"]")
            k, i, j = (_as_index(x, m, f"structure[{n}]") for x in e[:3])
            if i == j:
                raise SchemaError(f"structure[{n}]: repeated index {i}")
            entries.append((k, i, j, _as_scalar(e[3], f"structure[{n}]")))
        g = LieAlgebra.from_constants(m, entries, name)
    else:
        raise SchemaError("structure: expected a Salamon string or a list of [k, i, j, \"p/q\"]")
    bad = jacobi_defects(g)
    if bad:
        raise JacobiFailure("Jacobi identity fails: d(de^k) != 0 for k in " + ", ".join(map(str, bad)))

    omega = theta = None
    if "omega" in document:
        omega = _two_form(document["omega"], m)
    if "theta" in document:
        th = document["theta"]
        if not isinstance(th, list):
            raise SchemaError("theta: expected a list of [i, \"p/q\"]")
        coeffs: dict = {}
        for n, e in enumerate(th):
            if not isinstance(e, list) or len(e) != 2:
                raise SchemaError(f"theta[{n}]: expected [i, \"p/q\"]")
            i = _as_index(e[0], m, f"theta[{n}]")
            coeffs[(i,)] = coeffs.get((i,), ZERO) + _as_scalar(e[1], f"theta[{n}]")
        theta = Form(m, 1, coeffs)
    J = metric = None
    if document.get("J") is not None:
        try:
            J = AlmostComplexStructure(_square_matrix(document["J"], m, "J"))
        except NotAComplexStructure as exc:
            raise SchemaError(f"J: {exc}") from None
    if document.get("metric") is not None:
        try:
            metric = Metric(_square_matrix(document["metric"], m, "metric"))
        except NotPositiveDefinite as exc:
            raise SchemaError(f"metric: {exc}") from None
    if theta is not None and not g.d(theta).is_zero():
        raise SchemaError(f"theta is not closed: d(theta) = {g.d(theta)}")
    if omega is not None and theta is not None:
        defect = g.d(omega) - wedge(theta, omega)
        if not defect.is_zero():
            raise SchemaError(f"d(omega) - theta^omega = {defect} is not zero")
    return AlgebraBundle(g, omega, theta, J, metric, name)


def dump_algebra(bundle: AlgebraBundle) -> dict:
    """Inverse of :func:`load_algebra` (structure always written explicitly)."""
    g = bundle.algebra
    doc: dict = {"name": bundle.name or g.name, "dim": g.dim,
                 "structure": [[k, i, j, fmt(c)] for k, f in enumerate(g.de, 1)
                               for (i, j), c in sorted(f.coeffs.items())]}
    if bundle.omega is not None:
        doc["omega"] = [[i, j, fmt(c)] for (i, j), c in sorted(bundle.omega.coeffs.items())]
    if bundle.theta is not None:
        doc["theta"] = [[I[0], fmt(c)] for I, c in sorted(bundle.theta.coeffs.items())]
    if bundle.J is not None:
        doc["J"] = [[fmt(v) for v in r] for r in bundle.J.matrix.rows]
    if bundle.metric is not None:
        doc["metric"] = [[fmt(v) for v in r] for r in bundle.metric.gram.rows]
    return doc
