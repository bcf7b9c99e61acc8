"""The four weighted cohomologies of an lcs Lie algebra and their diagnostics.

For weight k and degree h:

* Morse–Novikov (deRham):  ker d_k / im d_k
* delta:                   ker δ_k / im δ_{k+1}
* Bott–Chern:              ker d_k ∩ ker δ_k / im δ_{k+1} d_{k+1}
* Aeppli:                  ker δ_k d_k / (im d_k + im δ_{k+1})

Representatives span the part of the numerator orthogonal to the
denominator for the inner product making the monomials orthonormal.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .arith import Poly
from .exterior import Form, GradedOperator, subspace_to_forms
from .lcs import LcsStructure, OperatorPencil, adjoint_operator
from .liealg import is_unimodular
from .linalg import ONE, ZERO, Matrix, Subspace, fmt, induced_rank, scalar


class NotUnimodular(ValueError):
    pass


class ClassNotClosed(ValueError):
    pass


THEORIES = ("deRham", "delta", "bottChern", "aeppli")
_ALIASES = {
    "d": "deRham", "dr": "deRham", "derham": "deRham", "mn": "deRham", "morse-novikov": "deRham",
    "delta": "delta", "δ": "delta",
    "bc": "bottChern", "bottchern": "bottChern", "bott-chern": "bottChern",
    "a": "aeppli", "aeppli": "aeppli",
}
SHORT = {"deRham": "d", "delta": "delta", "bottChern": "bc", "aeppli": "a"}


def theory_name(t: str) -> str:
    key = t.strip().lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown cohomology theory {t!r}; expected one of d, delta, bc, a")
    return _ALIASES[key]


def parse_theories(spec: str | Iterable[str]) -> tuple[str, ...]:
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    if any(i.strip().lower() == "all" for i in items):
        return THEORIES
    names = [theory_name(i) for i in items if i.strip()]
    return tuple(t for t in THEORIES if t in names)


# ----------------------------------------------------------------------------------
# subspaces of ∧^h attached to pencils


def _nforms(s: LcsStructure, h: int) -> int:
    return comb(s.dim, h) if 0 <= h <= s.dim else 0


def _kernel(P: OperatorPencil, k, h: int) -> Subspace:
    return P.at(k, h).kernel()


def _image(P: OperatorPencil, k, h: int, s: LcsStructure) -> Subspace:
    src = h - P.shift
    if src not in P.coeffs:
        return Subspace.zero(_nforms(s, h))
    return P.at(k, src).image()


def _cache(s: LcsStructure) -> dict:
    c = getattr(s, "_cohomology_cache", None)
    if c is None:
        c = {}
        s._cohomology_cache = c
    return c


def quotient_data(s: LcsStructure, theory: str, h: int, k) -> tuple[Subspace, Subspace]:
    """(numerator, denominator) subspaces of ∧^h for the given theory and weight."""
    theory = theory_name(theory)
    k = scalar(k)
    key = ("q", theory, h, k)
    cache = _cache(s)
    if key in cache:
        return cache[key]
    if not 0 <= h <= s.dim:
        out = (Subspace.zero(0), Subspace.zero(0))
    elif theory == "deRham":
        out = (_kernel(s.d, k, h), _image(s.d, k, h, s))
    elif theory == "delta":
        out = (_kernel(s.delta, k, h), _image(s.delta, k + 1, h, s))
    elif theory == "bottChern":
        num = _kernel(s.d, k, h) & _kernel(s.delta, k, h)
        out = (num, _image(s.delta_d, k + 1, h, s))
    else:
        num = _kernel(s.delta_d, k, h)
        out = (num, _image(s.d, k, h, s) + _image(s.delta, k + 1, h, s))
    if not out[1].issubset(out[0]):
        raise ArithmeticError(f"{theory} denominator not inside numerator at h={h}, k={fmt(k)}")
    cache[key] = out
    return out


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    theory: str
    degree: int
    weight: object
    dim: int
    representatives: tuple[Form, ...]
    numerator: Subspace = field(repr=False)
    denominator: Subspace = field(repr=False)

    def contains_class(self, f: Form) -> bool:
        return self.numerator.contains(f.to_vector())

    def is_exact(self, f: Form) -> bool:
        return self.denominator.contains(f.to_vector())

    def as_dict(self) -> dict:
        return {"theory": self.theory, "h": self.degree, "k": fmt(self.weight), "dim": self.dim,
                "representatives": [form_to_json(f) for f in self.representatives]}


def form_to_json(f: Form) -> list:
    return [[list(I), fmt(c)] for I, c in sorted(f.coeffs.items())]


def form_from_json(data: Sequence, dim: int, degree: int) -> Form:
    return Form(dim, degree, {tuple(I): scalar(c) for I, c in data})


def cohomology(s: LcsStructure, theory: str, h: int, k) -> CohomologyGroup:
    theory = theory_name(theory)
    k = scalar(k)
    key = ("g", theory, h, k)
    cache = _cache(s)
    if key in cache:
        return cache[key]
    num, den = quotient_data(s, theory, h, k)
    reps = num.intersect(den.orthogonal_complement()) if num.dim else num
    forms = tuple(subspace_to_forms(reps, s.dim, h)) if 0 <= h <= s.dim else ()
    g = CohomologyGroup(theory, h, k, num.dim - den.dim, forms, num, den)
    assert len(forms) == g.dim
    cache[key] = g
    return g


# ----------------------------------------------------------------------------------
# tables


@dataclass
class CohomologyTable:
    name: str
    dim: int
    weights: tuple
    theories: tuple[str, ...]
    groups: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def get(self, theory: str, h: int, k) -> CohomologyGroup:
        return self.groups[(theory_name(theory), h, scalar(k))]

    def dims(self, theory: str) -> dict:
        t = theory_name(theory)
        return {(h, k): g.dim for (tt, h, k), g in self.groups.items() if tt == t}

    def dim_of(self, theory: str, h: int, k) -> int:
        return self.get(theory, h, k).dim

    def euler(self, k) -> int:
        return sum((-1) ** h * self.dim_of("deRham", h, k) for h in range(self.dim + 1))

    def cells(self):
        for t in self.theories:
            for k in self.weights:
                for h in range(self.dim + 1):
                    yield self.groups[(t, h, k)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theory", "h", "k", "dim"])
        for g in self.cells():
            w.writerow([SHORT[g.theory], g.degree, fmt(g.weight), g.dim])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {"name": self.name, "dim": self.dim, "weights": [fmt(k) for k in self.weights],
                "theories": list(self.theories), "metadata": self.metadata,
                "cells": [g.as_dict() for g in self.cells()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"# {self.name}  (dim {self.dim})"]
        for t in self.theories:
            lines.append(f"[{t}]  rows h, columns k = " + " ".join(fmt(k) for k in self.weights))
            for h in range(self.dim + 1):
                lines.append(f"  h={h}: " + " ".join(f"{self.dim_of(t, h, k):>3}" for k in self.weights))
        return "\n".join(lines) + "\n"


def full_table(s: LcsStructure, weights: Iterable, theories: Iterable[str] | str = THEORIES) -> CohomologyTable:
    ws = tuple(sorted({scalar(k) for k in weights}))
    ts = parse_theories(theories)
    table = CohomologyTable(s.name, s.dim, ws, ts,
                            metadata={"triple": s.triple_source or "none",
                                      "omega": str(s.omega), "theta": str(s.theta)})
    for t in ts:
        for k in ws:
            for h in range(s.dim + 1):
                table.groups[(t, h, k)] = cohomology(s, t, h, k)
    if "deRham" in ts:
        expected = sum((-1) ** h * comb(s.dim, h) for h in range(s.dim + 1))
        for k in ws:
            assert table.euler(k) == expected, f"Euler characteristic fails at k={fmt(k)}"
    return table


def euler_characteristic(s: LcsStructure, k) -> int:
    return sum((-1) ** h * cohomology(s, "deRham", h, k).dim for h in range(s.dim + 1))


# ----------------------------------------------------------------------------------
# natural maps and the δ_k d_k-Lemma

NATURAL_MAPS = (("bottChern", "deRham"), ("bottChern", "delta"), ("bottChern", "aeppli"),
                ("deRham", "aeppli"), ("delta", "aeppli"))


@dataclass
class NaturalMapReport:
    degree: int
    weight: object
    dims: dict
    ranks: dict

    def injective(self, src: str, tgt: str) -> bool:
        return self.ranks[(src, tgt)] == self.dims[src]

    def surjective(self, src: str, tgt: str) -> bool:
        return self.ranks[(src, tgt)] == self.dims[tgt]


def induced_map_rank(src: CohomologyGroup, tgt: CohomologyGroup, op: Matrix | None = None) -> int:
    """Rank of the map induced on quotients by op (identity when None)."""
    vecs = [f.to_vector() for f in src.representatives]
    if op is not None:
        vecs = [op @ v for v in vecs]
    for v in vecs:
        if not tgt.numerator.contains(v):
            raise ArithmeticError(f"map does not send {src.theory} cycles to {tgt.theory} cycles")
    return induced_rank(vecs, tgt.denominator)


def natural_maps(s: LcsStructure, h: int, k) -> NaturalMapReport:
    groups = {t: cohomology(s, t, h, k) for t in THEORIES}
    ranks = {(a, b): induced_map_rank(groups[a], groups[b]) for a, b in NATURAL_MAPS}
    return NaturalMapReport(h, scalar(k), {t: g.dim for t, g in groups.items()}, ranks)


@dataclass
class LemmaReport:
    weight: object
    per_degree: dict

    @property
    def holds(self) -> bool:
        return all(self.per_degree.values())


def satisfies_lemma(s: LcsStructure, k) -> LemmaReport:
    """Injectivity of H_{d_k+δ_k} → H_{δ_kd_k} in every degree."""
    return LemmaReport(scalar(k), {h: natural_maps(s, h, k).injective("bottChern", "aeppli")
                                   for h in range(s.dim + 1)})


# ----------------------------------------------------------------------------------
# Laplacians


def _adj(s: LcsStructure, op: GradedOperator) -> GradedOperator:
    """Adjoint, padded with zero blocks so every degree 0..m is present."""
    a = adjoint_operator(op, s.metric)
    shift = -op.shift
    mats, targets = dict(a.mats), dict(a.targets)
    for t in range(s.dim + 1):
        if t not in mats:
            tgt = t + shift
            mats[t] = Matrix.zeros(_nforms(s, tgt), _nforms(s, t))
            targets[t] = tgt
    return GradedOperator(s.dim, mats, targets)


def _pencil_ops(s: LcsStructure, k) -> dict:
    k = scalar(k)
    ops = {"d_k": s.d(k), "d_{k-1}": s.d(k - 1), "d_{k+1}": s.d(k + 1),
           "delta_k": s.delta(k), "delta_{k+1}": s.delta(k + 1)}
    ops["dd_k"] = ops["delta_k"] @ ops["d_k"]
    ops["dd_{k+1}"] = ops["delta_{k+1}"] @ ops["d_{k+1}"]
    return ops


def laplacians(s: LcsStructure, k) -> dict[str, GradedOperator]:
    """Δ_{d_k}, Δ_{δ_k}, Δ_{d_k+δ_k} and Δ_{δ_kd_k} as graded operators."""
    o = _pencil_ops(s, k)
    A = {name: _adj(s, op) for name, op in o.items()}
    d, dm1, de, de1, dd, dd1 = (o[x] for x in ("d_k", "d_{k-1}", "delta_k", "delta_{k+1}", "dd_k", "dd_{k+1}"))
    dA, dm1A, deA, de1A, ddA, dd1A = (A[x] for x in ("d_k", "d_{k-1}", "delta_k", "delta_{k+1}", "dd_k", "dd_{k+1}"))
    lap_d = d @ dA + dA @ d
    lap_delta = deA @ de + de1 @ de1A
    t5 = dA @ de1
    t6 = dm1A @ de
    lap_bc = (dA @ d + deA @ de + dd1 @ dd1A + ddA @ dd
              + t5 @ _adj(s, t5) + _adj(s, t6) @ t6)
    u5 = de1 @ dA
    u6 = d @ deA
    lap_a = (d @ dA + de1 @ de1A + ddA @ dd + dd1 @ dd1A
             + u5 @ _adj(s, u5) + u6 @ _adj(s, u6))
    return {"deRham": lap_d, "delta": lap_delta, "bottChern": lap_bc, "aeppli": lap_a}


def harmonic_space(s: LcsStructure, theory: str, h: int, k) -> Subspace:
    theory = theory_name(theory)
    key = ("harm", theory, h, scalar(k))
    cache = _cache(s)
    if key not in cache:
        lk = cache.get(("lap", scalar(k)))
        if lk is None:
            lk = laplacians(s, k)
            cache[("lap", scalar(k))] = lk
        cache[key] = lk[theory][h].kernel()
    return cache[key]


def laplacian_kernels(s: LcsStructure, h: int, k) -> dict[str, int]:
    return {t: harmonic_space(s, t, h, k).dim for t in THEORIES}


# ----------------------------------------------------------------------------------
# dualities and Hard Lefschetz


@dataclass
class DualityVerdict:
    name: str
    degree: int
    weight: object
    source: tuple
    target: tuple
    source_dim: int
    target_dim: int
    rank: int
    well_defined: bool

    @property
    def ok(self) -> bool:
        return self.well_defined and self.source_dim == self.target_dim == self.rank

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"name": self.name, "h": self.degree, "k": fmt(self.weight), "source": list(self.source),
                "target": list(self.target), "source_dim": self.source_dim,
                "target_dim": self.target_dim, "rank": self.rank, "ok": self.ok}


def _require_unimodular(s: LcsStructure) -> None:
    if not is_unimodular(s.algebra):
        raise NotUnimodular(f"{s.name or 'algebra'} is not unimodular; duality checks are not meaningful")


def _quotient_map(name: str, s: LcsStructure, op: Matrix, src: tuple, tgt: tuple, h: int, k) -> DualityVerdict:
    """Check op maps numerator→numerator, denominator→denominator, with full rank."""
    (ts, hs, ks), (tt, ht, kt) = src, tgt
    ns, ds = quotient_data(s, ts, hs, ks)
    nt, dt = quotient_data(s, tt, ht, kt)
    gs = cohomology(s, ts, hs, ks)
    gt = cohomology(s, tt, ht, kt)
    well = (ns.image_under(op).issubset(nt) and ds.image_under(op).issubset(dt))
    rank = induced_rank([op @ f.to_vector() for f in gs.representatives], dt) if well else -1
    return DualityVerdict(name, h, scalar(k), (ts, hs, fmt(ks)), (tt, ht, fmt(kt)), gs.dim, gt.dim, rank, well)


def _harmonic_map(name: str, s: LcsStructure, op: Matrix, src: tuple, tgt: tuple, h: int, k) -> DualityVerdict:
    """Check op sends the harmonic space of src into that of tgt, injectively and onto."""
    Hs = harmonic_space(s, *src)
    Ht = harmonic_space(s, *tgt)
    img = Hs.image_under(op)
    well = img.issubset(Ht)
    return DualityVerdict(name, h, scalar(k), (src[0], src[1], fmt(src[2])), (tgt[0], tgt[1], fmt(tgt[2])),
                          Hs.dim, Ht.dim, img.dim if well else -1, well)


def _in_range(s: LcsStructure, *degrees: int) -> bool:
    return all(0 <= d <= s.dim for d in degrees)


def poincare_symplectic(s: LcsStructure, h: int, k) -> DualityVerdict:
    """⋆: H^{n−h}_{d_k} → H^{n+h}_{δ_{h+k}}."""
    _require_unimodular(s)
    k = scalar(k)
    n = s.n
    if not _in_range(s, n - h, n + h):
        raise ValueError(f"degree offset h={h} outside −{n}..{n}")
    return _quotient_map("symplectic star", s, s.sym_star[n - h],
                         ("deRham", n - h, k), ("delta", n + h, k + h), h, k)


def poincare_hodge(s: LcsStructure, h: int, k) -> list[DualityVerdict]:
    """∗: H^{n−h}_{d_k} → H^{n+h}_{d_{−k}} and ∗: H^{n−h}_{δ_{−k−h}} → H^{n+h}_{δ_{k+h}}."""
    _require_unimodular(s)
    k = scalar(k)
    n = s.n
    if not _in_range(s, n - h, n + h):
        raise ValueError(f"degree offset h={h} outside −{n}..{n}")
    st = s.hodge_star[n - h]
    return [
        _harmonic_map("hodge star on d_k", s, st, ("deRham", n - h, k), ("deRham", n + h, -k), h, k),
        _harmonic_map("hodge star on delta_k", s, st, ("delta", n - h, -k - h), ("delta", n + h, k + h), h, k),
    ]


def duality_bc_aeppli(s: LcsStructure, h: int, k) -> DualityVerdict:
    """∗: H^{n−h}_{d_k+δ_k} → H^{n+h}_{δ_{−k}d_{−k}}."""
    _require_unimodular(s)
    k = scalar(k)
    n = s.n
    if not _in_range(s, n - h, n + h):
        raise ValueError(f"degree offset h={h} outside −{n}..{n}")
    return _harmonic_map("hodge star BC to Aeppli", s, s.hodge_star[n - h],
                         ("bottChern", n - h, k), ("aeppli", n + h, -k), h, k)


def _lefschetz_power(s: LcsStructure, h: int, src_degree: int) -> Matrix:
    M = Matrix.identity(_nforms(s, src_degree))
    deg = src_degree
    for _ in range(h):
        M = s.L[deg] @ M
        deg += 2
    return M


def hlc_bc_aeppli(s: LcsStructure, h: int, k) -> list[DualityVerdict]:
    """L^h: H^{n−h}_{BC,k} → H^{n+h}_{BC,k+h}, and the same on Aeppli cohomology."""
    k = scalar(k)
    n = s.n
    if not 0 <= h <= n:
        raise ValueError(f"h={h} outside 0..{n}")
    Lh = _lefschetz_power(s, h, n - h)
    return [_quotient_map(f"L^{h} on {t}", s, Lh, (t, n - h, k), (t, n + h, k + h), h, k)
            for t in ("bottChern", "aeppli")]


@dataclass
class HlcReport:
    holds: bool
    failures: list
    witness: dict | None
    cells: list

    def as_dict(self) -> dict:
        return {"holds": self.holds, "failures": [f.as_dict() for f in self.failures],
                "witness": self.witness, "cells_tested": len(self.cells)}


def lcs_hlc_check(s: LcsStructure, weights: Iterable) -> HlcReport:
    """L^h: H^{n−h}_{d_k} → H^{n+h}_{d_{k+h}} for 0 ≤ h ≤ n and every listed k.

    For θ ≠ 0 the cell (h, k) = (n, −n) always fails for unimodular
    algebras: H⁰_{d_{−n}} = 0 while H^{2n}_{d_0} ≠ 0.
    """
    n = s.n
    ws = sorted({scalar(k) for k in weights})
    cells = []
    for k in ws:
        for h in range(n + 1):
            Lh = _lefschetz_power(s, h, n - h)
            cells.append(_quotient_map(f"L^{h} on deRham", s, Lh, ("deRham", n - h, k),
                                       ("deRham", n + h, k + h), h, k))
    failures = [c for c in cells if not c.ok]
    witness = None
    if not s.theta.is_zero():
        lo = cohomology(s, "deRham", 0, -n).dim
        hi = cohomology(s, "deRham", 2 * n, 0).dim
        if lo != hi:
            witness = {"h": n, "k": -n, "source": f"H^0_(d_{-n})", "source_dim": lo,
                       "target": f"H^{2 * n}_(d_0)", "target_dim": hi}
            if not any(c.degree == n and c.weight == -n for c in cells):
                Lh = _lefschetz_power(s, n, 0)
                extra = _quotient_map(f"L^{n} on deRham", s, Lh, ("deRham", 0, -n), ("deRham", 2 * n, 0), n, -n)
                cells.append(extra)
                if not extra.ok:
                    failures.append(extra)
    return HlcReport(not failures, failures, witness, cells)


def has_delta_closed_representative(s: LcsStructure, alpha: Form, k) -> bool:
    """Is there β with δ_k(α + d_kβ) = 0?  α must be d_k-closed."""
    k = scalar(k)
    h = alpha.degree
    if not s.d(k)(alpha).is_zero():
        raise ClassNotClosed(f"{alpha} is not d_{fmt(k)}-closed")
    target = s.delta(k)(alpha).to_vector()
    if not any(target):
        return True
    if h == 0:
        return False
    M = s.delta_d.at(k, h - 1)
    return M.image().contains(tuple(-x for x in target))


def verify_image_equalities(s: LcsStructure, h: int, k) -> dict:
    """im δ_{k+1} ∩ ker d_k = im d_k ∩ im δ_{k+1} = im d_k ∩ ker δ_k, degree h."""
    k = scalar(k)
    if not 0 <= h <= s.dim:
        return {"first": True, "second": True}
    im_d = _image(s.d, k, h, s)
    im_de = _image(s.delta, k + 1, h, s)
    ker_d = _kernel(s.d, k, h)
    ker_de = _kernel(s.delta, k, h)
    both = im_d & im_de
    first = (im_de & ker_d) == both
    second = (im_d & ker_de) == both
    return {"first": first, "second": second,
            "dims": {"im_delta_cap_ker_d": (im_de & ker_d).dim, "im_d_cap_im_delta": both.dim,
                     "im_d_cap_ker_delta": (im_d & ker_de).dim}}


# ----------------------------------------------------------------------------------
# critical weights


def _poly_matrix(coeffs: Sequence[Matrix]) -> list[list[Poly]]:
    M0 = coeffs[0]
    return [[Poly(c[i, j] for c in coeffs) for j in range(M0.ncols)] for i in range(M0.nrows)]


def _pad(cs: Sequence[Matrix], n: int) -> list[Matrix]:
    cs = list(cs)
    while len(cs) < n:
        cs.append(cs[0] * 0)
    return cs


def _stack(a: Sequence[Matrix], b: Sequence[Matrix], horizontal: bool) -> list[Matrix]:
    n = max(len(a), len(b))
    a, b = _pad(a, n), _pad(b, n)
    return [x.hstack(y) if horizontal else x.vstack(y) for x, y in zip(a, b)]


def determinantal_divisor(P: list[list[Poly]]) -> tuple[int, Poly]:
    """Generic rank r over Q(k) and the gcd D_r of all r×r minors (monic).

    Unimodular row and column operations over Q[k] bring the matrix to
    diagonal form; D_r is invariant under them and equals the product of
    the diagonal entries.
    """
    A = [list(r) for r in P]
    nr = len(A)
    nc = len(A[0]) if A else 0
    prod = Poly([1])
    t = 0
    while t < min(nr, nc):
        # pivot: nonzero entry of least degree in the trailing block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] and (best is None or A[i][j].degree < best[0]):
                    best = (A[i][j].degree, i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        dirty = False
        piv = A[t][t]
        for i in range(t + 1, nr):
            if A[i][t]:
                q, rem = divmod(A[i][t], piv)
                for j in range(t, nc):
                    if A[t][j]:
                        A[i][j] = A[i][j] - q * A[t][j]
                dirty |= bool(rem)
        for j in range(t + 1, nc):
            if A[t][j]:
                q, rem = divmod(A[t][j], piv)
                for i in range(t, nr):
                    if A[i][t]:
                        A[i][j] = A[i][j] - q * A[i][t]
                dirty |= bool(rem)
        if dirty:
            continue
        prod = prod * piv
        t += 1
    return t, prod.monic()


@dataclass
class CriticalWeights:
    weights: tuple
    unresolved: tuple
    generic_dims: dict
    per_matrix: list

    def as_dict(self) -> dict:
        return {"weights": [fmt(k) for k in self.weights],
                "unresolved_factors": [str(p.format("k")) for p in self.unresolved],
                "generic_dims": {f"{SHORT[t]}:{h}": d for (t, h), d in sorted(self.generic_dims.items())}}


def _theory_matrices(s: LcsStructure, theory: str, h: int) -> tuple[list, list]:
    """Polynomial matrices (numerator kernels, denominator images) for a cell."""
    d, de, dd = s.d, s.delta, s.delta_d
    m = s.dim
    ok = lambda x: 0 <= x <= m
    kers, ims = [], []
    if theory == "deRham":
        kers.append(d.coeffs[h])
        if ok(h - 1):
            ims.append(d.coeffs[h - 1])
    elif theory == "delta":
        kers.append(de.coeffs[h])
        if ok(h + 1):
            ims.append(de.reweight(1).coeffs[h + 1])
    elif theory == "bottChern":
        kers.append(_stack(d.coeffs[h], de.coeffs[h], horizontal=False))
        ims.append(dd.reweight(1).coeffs[h])
    else:
        kers.append(dd.coeffs[h])
        parts = []
        if ok(h - 1):
            parts.append(d.coeffs[h - 1])
        if ok(h + 1):
            parts.append(de.reweight(1).coeffs[h + 1])
        if len(parts) == 2:
            ims.append(_stack(parts[0], parts[1], horizontal=True))
        elif parts:
            ims.append(parts[0])
    return kers, ims


def critical_weights(s: LcsStructure, theory: str = "all") -> CriticalWeights:
    """Rational weights where some cohomology dimension can jump.

    Dimensions are C(m,h) − rank(kernel matrices) − rank(image matrices), and
    ranks of a polynomial matrix drop exactly at roots of its determinantal
    divisor.  Non-rational factors are returned as unresolved.
    """
    theories = parse_theories(theory)
    roots: set = set()
    unresolved: dict = {}
    generic: dict = {}
    per_matrix = []
    memo: dict = {}
    for t in theories:
        for h in range(s.dim + 1):
            kers, ims = _theory_matrices(s, t, h)
            dim = comb(s.dim, h)
            for role, mats in (("ker", kers), ("im", ims)):
                for cs in mats:
                    key = tuple(tuple(map(tuple, c.rows)) for c in cs)
                    if key not in memo:
                        if cs[0].nrows == 0 or cs[0].ncols == 0:
                            memo[key] = (0, Poly([1]))
                        else:
                            memo[key] = determinantal_divisor(_poly_matrix(cs))
                    r, D = memo[key]
                    dim += -r
                    per_matrix.append((t, h, role, r, D))
                    rest = D
                    for x in D.rational_roots() if D.degree > 0 else []:
                        roots.add(x)
                        lin = Poly([-x, 1])
                        while not (rest % lin):
                            rest = rest // lin
                    if rest.degree > 0:
                        unresolved[tuple(rest.c)] = rest
            generic[(t, h)] = dim
    return CriticalWeights(tuple(sorted(roots)), tuple(unresolved[k] for k in sorted(unresolved)),
                           generic, per_matrix)
