"""Built-in lcs Lie algebras with golden cohomology tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

from .cohomology import CohomologyTable, form_from_json, theory_name
from .exterior import AlmostComplexStructure, Form, Metric
from .lcs import LcsStructure
from .liealg import LieAlgebra, load_algebra, parse_salamon
from .linalg import Subspace, fmt, induced_rank, scalar


class UnknownEntry(KeyError):
    pass


class InvalidParameters(ValueError):
    pass


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GoldenTable:
    name: str
    dim: int
    weights: tuple
    theories: tuple
    cells: Mapping  # (theory, h, k) -> (dim, [Form] | None)

    @classmethod
    def from_json(cls, obj) -> "GoldenTable":
        if isinstance(obj, str):
            obj = json.loads(obj)
        m = obj["dim"]
        cells = {}
        for c in obj["cells"]:
            t, h, k = theory_name(c["theory"]), int(c["h"]), scalar(c["k"])
            reps = c.get("representatives")
            forms = [form_from_json(r, m, h) for r in reps] if reps is not None else None
            cells[(t, h, k)] = (int(c["dim"]), forms)
        return cls(obj.get("name", ""), m, tuple(scalar(k) for k in obj["weights"]),
                   tuple(theory_name(t) for t in obj["theories"]), cells)

    def dim_of(self, theory: str, h: int, k) -> int:
        return self.cells[(theory_name(theory), h, scalar(k))][0]


def load_golden(name: str) -> GoldenTable:
    text = resources.files("lcscohom").joinpath("data").joinpath(f"golden_{name}.json").read_text()
    return GoldenTable.from_json(text)


@dataclass
class CatalogEntry:
    name: str
    title: str
    structure: LcsStructure
    salamon: str | None
    params: dict = field(default_factory=dict)
    golden: GoldenTable | None = None
    notes: list = field(default_factory=list)

    @property
    def algebra(self) -> LieAlgebra:
        return self.structure.algebra

    @property
    def weights(self) -> tuple:
        return self.golden.weights if self.golden else tuple(range(-self.structure.n, self.structure.n + 1))

    def summary(self) -> dict:
        s = self.structure
        return {"name": self.name, "title": self.title, "dim": s.dim,
                "structure": self.salamon, "params": {k: fmt(v) for k, v in self.params.items()},
                "omega": str(s.omega), "theta": str(s.theta), "triple": s.triple_source,
                "J": [[fmt(v) for v in r] for r in s.J.matrix.rows],
                "metric": [[fmt(v) for v in r] for r in s.metric.gram.rows],
                "golden_weights": [fmt(k) for k in self.weights] if self.golden else None,
                "notes": self.notes}


NAMES = ("rh3", "d4", "ot21")


def _rh3() -> CatalogEntry:
    sal = "(0,0,12,0)"
    g = parse_salamon(sal, 4, "rh3")
    omega = Form.parse("e12+e34", 4)
    J = AlmostComplexStructure.from_coframe(4, {1: Form.parse("e2", 4), 3: Form.parse("e4", 4)})
    s = LcsStructure(g, omega, Form.parse("e4", 4), J, Metric.standard(4), name="rh3")
    return CatalogEntry("rh3", "Kodaira-Thurston surface", s, sal, golden=load_golden("rh3"))


def _d4() -> CatalogEntry:
    sal = "(14,-24,-12,0)"
    g = parse_salamon(sal, 4, "d4")
    omega = Form.parse("e12+e34", 4)
    s = LcsStructure(g, omega, Form.parse("-e4", 4), name="d4")
    s.J  # synthesize the triple eagerly so metadata is complete
    return CatalogEntry("d4", "Inoue surface S+ (Lie algebra d4)", s, sal, golden=load_golden("d4"),
                        notes=["structure string written with -12 in slot 3 (de3 = -e12)",
                               "compatible triple synthesized from a Darboux basis"])


def ot21_algebra(c1, c2) -> LieAlgebra:
    c1, c2 = scalar(c1), scalar(c2)
    half = scalar("1/2")
    entries = [(3, 1, 3, -1), (4, 2, 4, -1),
               (5, 1, 5, half), (5, 1, 6, c1), (5, 2, 5, half), (5, 2, 6, c2),
               (6, 1, 5, -c1), (6, 1, 6, half), (6, 2, 5, -c2), (6, 2, 6, half)]
    return LieAlgebra.from_constants(6, entries, "ot21")


def ot21_minus_omega(c1, c2, w25=1, w26=0, w34=1, w12=0, w14=0, w23=0) -> Form:
    """A member of the family of lcs forms with Lee form −e¹−e² (needs c₁ ≠ c₂)."""
    c1, c2 = scalar(c1), scalar(c2)
    w25, w26, w34, w12, w14, w23 = (scalar(x) for x in (w25, w26, w34, w12, w14, w23))
    den = 4 * c2 * c2 + 9
    w15 = ((4 * c1 * c2 + 9) * w25 - 6 * (c1 - c2) * w26) / den
    w16 = (6 * (c1 - c2) * w25 + (4 * c1 * c2 + 9) * w26) / den
    return Form(6, 2, {(1, 2): w12, (1, 4): w14, (1, 5): w15, (1, 6): w16, (2, 3): w23,
                       (2, 5): w25, (2, 6): w26, (3, 4): w34})


def _ot21(params: Mapping | None, variant: str) -> CatalogEntry:
    params = dict(params or {})
    unknown = set(params) - {"c1", "c2"}
    if unknown:
        raise InvalidParameters(f"unknown parameters {sorted(unknown)}; ot21 takes c1, c2")
    try:
        c1 = scalar(params.get("c1", 1))
        c2 = scalar(params.get("c2", 0))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidParameters(str(exc)) from None
    g = ot21_algebra(c1, c2)
    notes = ["compatible triple synthesized from a Darboux basis; a J with "
             "Je1 = e3, Je2 = e4, Je3 = e6 cannot square to -1"]
    if variant == "plus":
        omega = Form.parse("2e13+e14+e23+2e24+e56", 6)
        theta = Form.parse("e1+e2", 6)
    elif variant == "minus":
        if c1 == c2:
            raise InvalidParameters("the Lee form -e1-e2 requires c1 != c2")
        omega = ot21_minus_omega(c1, c2)
        theta = Form.parse("-e1-e2", 6)
    else:
        raise InvalidParameters(f"unknown variant {variant!r}; expected 'plus' or 'minus'")
    s = LcsStructure(g, omega, theta, name="ot21")
    s.J
    golden = load_golden("ot21") if variant == "plus" else None
    title = "Oeljeklaus-Toma manifold of type (2,1)"
    return CatalogEntry("ot21", title, s, None, {"c1": c1, "c2": c2}, golden, notes)


def builtin(name: str, params: Mapping | None = None, variant: str = "plus") -> CatalogEntry:
    if name == "rh3":
        entry = _rh3()
    elif name == "d4":
        entry = _d4()
    elif name == "ot21":
        return _ot21(params, variant)
    else:
        raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")
    if params:
        raise InvalidParameters(f"{name} takes no parameters")
    return entry


def entry_from_document(document, name: str = "") -> CatalogEntry:
    """Catalog entry from a JSON bundle (see liealg.load_algebra)."""
    b = load_algebra(document)
    if b.omega is None:
        raise InvalidParameters("the document has no omega")
    s = LcsStructure(b.algebra, b.omega, b.theta, b.J, b.metric, name=b.name or name)
    return CatalogEntry(s.name or "custom", s.name or "custom", s, None)


# ----------------------------------------------------------------------------------
# golden comparison


@dataclass
class GoldenDiff:
    cells_compared: int = 0
    dim_diffs: list = field(default_factory=list)
    span_diffs: list = field(default_factory=list)
    literal_mismatches: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.dim_diffs and not self.span_diffs

    def __bool__(self) -> bool:
        return not self.empty

    def as_dict(self) -> dict:
        return {"cells_compared": self.cells_compared, "empty": self.empty,
                "dim_diffs": self.dim_diffs, "span_diffs": self.span_diffs,
                "literal_span_mismatches": self.literal_mismatches}


def golden_diff(computed: CohomologyTable, golden: GoldenTable) -> GoldenDiff:
    """Cell-level dimension and span comparison.

    Spans are compared in the quotient: the golden forms must be cycles of the
    theory and independent modulo its boundaries, with the right count.
    Literal equality with the computed representatives is recorded
    separately and does not make the diff non-empty.
    """
    out = GoldenDiff()
    for (t, h, k), (gdim, greps) in sorted(golden.cells.items(), key=lambda x: (x[0][0], x[0][2], x[0][1])):
        key = (t, h, k)
        if key not in computed.groups:
            raise GridMismatch(f"computed table has no cell {t} h={h} k={fmt(k)}")
        grp = computed.groups[key]
        out.cells_compared += 1
        label = {"theory": t, "h": h, "k": fmt(k)}
        if grp.dim != gdim:
            out.dim_diffs.append({**label, "computed": grp.dim, "golden": gdim})
            continue
        if greps is None:
            continue
        vecs = [f.to_vector() for f in greps]
        outside = [str(f) for f, v in zip(greps, vecs) if not grp.numerator.contains(v)]
        if outside:
            out.span_diffs.append({**label, "reason": "not closed", "forms": outside})
            continue
        r = induced_rank(vecs, grp.denominator)
        if r != gdim or len(greps) != gdim:
            out.span_diffs.append({**label, "reason": f"independent modulo boundaries: {r} of {gdim}"})
            continue
        if vecs:
            ambient = len(vecs[0])
            if Subspace(ambient, vecs) != Subspace(ambient, [f.to_vector() for f in grp.representatives]):
                out.literal_mismatches.append({**label, "golden": [str(f) for f in greps],
                                               "computed": [str(f) for f in grp.representatives]})
    return out
