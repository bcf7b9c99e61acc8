"""Command-line interface.

Exit codes: 0 when every requested check has its expected verdict, 1 on a
check failure, 2 on usage or parse errors.  Output is deterministic; wall
clock timings are only emitted with ``--timings``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import arith
from .catalog import (NAMES, CatalogEntry, GoldenTable, GridMismatch, InvalidParameters, UnknownEntry,
                      builtin, entry_from_document, golden_diff)
from .cohomology import (THEORIES, critical_weights, duality_bc_aeppli, full_table, hlc_bc_aeppli,
                         laplacian_kernels, lcs_hlc_check, parse_theories, poincare_hodge,
                         poincare_symplectic, satisfies_lemma)
from .lcs import (NotLcs, verify_adjoint_identities, verify_bidifferential, verify_commutations,
                  verify_product_rule)
from .liealg import ParseError, SchemaError, is_unimodular
from .linalg import fmt, scalar

SUITES = ("identities", "dualities", "hlc", "lemma", "hodge")


class UsageError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    verdicts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    exit_code: int = 0

    def verdict(self, name: str, passed: bool, expected: bool = True, **detail) -> None:
        self.verdicts.append({"check": name, "passed": passed, "expected": "pass" if expected else "fail",
                              "ok": passed == expected, **detail})

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.verdicts)

    def as_dict(self, timings: bool = False) -> dict:
        d = {"command": self.command, "inputs": self.inputs, "ok": self.ok,
             "verdicts": self.verdicts, "artifacts": self.artifacts}
        if timings:
            d["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return d


# ----------------------------------------------------------------------------------
# argument parsing helpers


def parse_weights(rng: str | None, lst: str | None) -> tuple | None:
    if rng and lst:
        raise UsageError("--weights and --weights-list are mutually exclusive")
    if rng:
        m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", rng)
        if not m:
            raise UsageError(f"--weights expects a..b with integers, got {rng!r}")
        a, b = int(m.group(1)), int(m.group(2))
        if a > b:
            raise UsageError(f"empty weight range {rng}")
        return tuple(scalar(k) for k in range(a, b + 1))
    if lst:
        try:
            return tuple(scalar(x.strip()) for x in lst.split(",") if x.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--weights-list expects rationals p/q, got {lst!r}") from None
    return None


def parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"--params expects key=value pairs, got {part!r}")
        try:
            out[key.strip()] = scalar(val.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad rational {val!r} for {key.strip()}") from None
    return out


def resolve_entry(name: str, params: dict, variant: str) -> CatalogEntry:
    if name in NAMES:
        return builtin(name, params or None, variant)
    path = Path(name)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise UsageError(f"no such file {name}")
        return entry_from_document(path.read_text(), path.stem)
    raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")


def _half_grid(n: int) -> tuple:
    return tuple(scalar(i) / 2 for i in range(-2 * n - 2, 2 * n + 3)) if n else (scalar(0),)


def _emit(text: str, out: str | None, report: RunReport) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text)
        report.artifacts.append(out)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=str)


# ----------------------------------------------------------------------------------
# subcommands


def cmd_catalog(args, report: RunReport) -> None:
    if not args.algebra:
        rows = []
        for n in NAMES:
            e = builtin(n)
            rows.append(e.summary())
        if args.format == "json":
            _emit(_dump(rows), args.out, report)
        elif args.format == "csv":
            lines = ["name,dim,structure,omega,theta,triple"]
            lines += [f"{r['name']},{r['dim']},\"{r['structure'] or ''}\",{r['omega']},{r['theta']},{r['triple']}"
                      for r in rows]
            _emit("\n".join(lines), args.out, report)
        else:
            _emit("\n".join(f"{r['name']:6} dim {r['dim']}  {r['title']}  theta = {r['theta']}"
                            for r in rows), args.out, report)
        return
    e = resolve_entry(args.algebra, parse_params(args.params), args.variant)
    info = e.summary()
    if e.golden is not None:
        info["golden_euler_ok"] = all(
            sum((-1) ** h * e.golden.dim_of("deRham", h, k) for h in range(e.golden.dim + 1)) == 0
            for k in e.golden.weights if ("deRham", 0, k) in e.golden.cells)
    if args.format == "text":
        lines = [f"{k}: {v}" for k, v in info.items()]
        _emit("\n".join(lines), args.out, report)
    else:
        _emit(_dump(info), args.out, report)


def cmd_cohomology(args, report: RunReport) -> None:
    e = resolve_entry(args.algebra, parse_params(args.params), args.variant)
    weights = parse_weights(args.weights, args.weights_list) or e.weights
    theories = parse_theories(args.theories)
    t0 = time.perf_counter()
    table = full_table(e.structure, weights, theories)
    report.timings["cohomology"] = time.perf_counter() - t0
    report.inputs["weights"] = [fmt(k) for k in table.weights]
    text = {"csv": table.to_csv, "json": table.to_json, "text": table.to_text}[args.format]()
    _emit(text, args.out, report)


def _suite_identities(e: CatalogEntry, weights, report: RunReport) -> None:
    s = e.structure
    for k in weights:
        for label, rep in (("bidifferential", verify_bidifferential(s, k)),
                           ("commutations", verify_commutations(s, k)),
                           ("adjoints", verify_adjoint_identities(s, k)),
                           ("product rule", verify_product_rule(s, k, k + 1))):
            report.verdict(f"identities/{label}", rep.ok, k=fmt(k),
                           failures=[f"{c.name} (degree {c.degree}): {c.detail}" for c in rep.failures()])


def _suite_dualities(e: CatalogEntry, weights, report: RunReport) -> None:
    s = e.structure
    if not is_unimodular(s.algebra):
        report.verdict("dualities", False, detail="algebra is not unimodular")
        return
    n = s.n
    for k in weights:
        for h in range(-n, n + 1):
            vs = [poincare_symplectic(s, h, k), *poincare_hodge(s, h, k), duality_bc_aeppli(s, h, k)]
            if h >= 0:
                vs += hlc_bc_aeppli(s, h, k)
            for v in vs:
                report.verdict(f"dualities/{v.name}", v.ok, h=h, k=fmt(k),
                               source_dim=v.source_dim, target_dim=v.target_dim, rank=v.rank)


def _suite_hlc(e: CatalogEntry, weights, report: RunReport) -> None:
    s = e.structure
    r = lcs_hlc_check(s, weights)
    report.verdict("hlc/lcs-HLC", r.holds, expected=s.theta.is_zero(), witness=r.witness,
                   failing_cells=[f"h={c.degree} k={fmt(c.weight)}" for c in r.failures])


def _suite_lemma(e: CatalogEntry, weights, report: RunReport) -> None:
    s = e.structure
    per = {fmt(k): satisfies_lemma(s, k).holds for k in weights}
    report.verdict("lemma/lcs-lemma", all(per.values()), expected=s.theta.is_zero(), per_weight=per)


def _suite_hodge(e: CatalogEntry, weights, report: RunReport) -> None:
    s = e.structure
    table = full_table(s, weights, THEORIES)
    bad = []
    for k in table.weights:
        for h in range(s.dim + 1):
            ker = laplacian_kernels(s, h, k)
            for t in THEORIES:
                if ker[t] != table.dim_of(t, h, k):
                    bad.append(f"{t} h={h} k={fmt(k)}: {ker[t]} vs {table.dim_of(t, h, k)}")
    report.verdict("hodge/laplacian-kernels", not bad, mismatches=bad)


def cmd_check(args, report: RunReport) -> None:
    e = resolve_entry(args.algebra, parse_params(args.params), args.variant)
    suites = [x.strip() for x in args.suite.split(",") if x.strip()]
    if suites == ["all"]:
        suites = list(SUITES)
    unknown = [x for x in suites if x not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    weights = parse_weights(args.weights, args.weights_list)
    runners = {"identities": _suite_identities, "dualities": _suite_dualities,
               "hlc": _suite_hlc, "lemma": _suite_lemma, "hodge": _suite_hodge}
    for name in suites:
        ws = weights or (_half_grid(e.structure.n) if name == "identities" else e.weights)
        t0 = time.perf_counter()
        runners[name](e, ws, report)
        report.timings[name] = time.perf_counter() - t0
    if args.format == "json":
        _emit(_dump(report.as_dict(args.timings)), args.out, report)
        return
    # text/csv: one line per suite plus failing details
    lines = []
    for name in suites:
        vs = [v for v in report.verdicts if v["check"].split("/")[0] == name]
        ok = all(v["ok"] for v in vs)
        expect = {v["expected"] for v in vs}
        tag = "expected-fail" if expect == {"fail"} and ok else ("pass" if ok else "FAIL")
        line = f"{name}: {tag} ({sum(v['ok'] for v in vs)}/{len(vs)} checks as expected)"
        if args.timings:
            line += f" [{report.timings[name]:.3f}s]"
        lines.append(line)
        for v in vs:
            if not v["ok"]:
                lines.append(f"  unexpected: {json.dumps(v, default=str)}")
            elif v["expected"] == "fail" and v.get("witness"):
                w = v["witness"]
                lines.append(f"  witness: {w['source']} = {w['source_dim']}, {w['target']} = {w['target_dim']}")
    _emit("\n".join(lines), args.out, report)


def cmd_critical_weights(args, report: RunReport) -> None:
    e = resolve_entry(args.algebra, parse_params(args.params), args.variant)
    cw = critical_weights(e.structure, args.theories)
    d = cw.as_dict()
    if args.format == "json":
        _emit(_dump(d), args.out, report)
    elif args.format == "csv":
        lines = ["kind,value"] + [f"weight,{w}" for w in d["weights"]] + \
                [f"unresolved,{u}" for u in d["unresolved_factors"]]
        _emit("\n".join(lines), args.out, report)
    else:
        lines = ["critical weights: " + (", ".join(d["weights"]) or "none"),
                 "unresolved factors: " + (", ".join(d["unresolved_factors"]) or "none"),
                 "generic dimensions: " + " ".join(f"{k}={v}" for k, v in d["generic_dims"].items())]
        _emit("\n".join(lines), args.out, report)


def _require_poly(args) -> arith.Poly:
    if not args.poly:
        raise UsageError("--poly is required")
    try:
        return arith.parse_poly(args.poly)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_matrix(text: str) -> list[list[int]]:
    try:
        rows = [[int(x) for x in r.split(",")] for r in text.split(";")]
    except ValueError:
        raise UsageError(f"--matrix expects integer rows 'a,b,c;d,e,f;g,h,i', got {text!r}") from None
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise UsageError("--matrix must be 3x3")
    return rows


def _companion(p: arith.Poly) -> list[list[int]]:
    if p.degree != 3 or p.lc != 1 or not p.is_integral():
        raise UsageError("--poly must be a monic integer cubic")
    c0, c1, c2 = (int(p.coeff(i)) for i in range(3))
    return [[0, 0, -c0], [1, 0, -c1], [0, 1, -c2]]


def _num(x):
    x = scalar(x)
    return int(x) if x.denominator == 1 else fmt(x)


def cmd_arith(args, report: RunReport) -> None:
    """Every op reports {operation, inputs, verdict, certificate, bound}; a few
    headline values are repeated at top level for convenience."""
    op = args.op
    bound = None
    headline: dict = {}
    if op == "resolvent":
        q = _require_poly(args)
        res = arith.resolvent_cubic(q)
        inputs = {"poly": str(q)}
        headline = {"resolvent": str(res), "discriminant": _num(arith.discriminant_cubic(res))}
        try:
            cert = arith.galois_s4_certificate(q)
            verdict = "S4"
            report.verdict("galois-S4", True)
        except arith.CertificateNotApplicable as exc:
            cert = {"reason": str(exc)}
            verdict = "not certified"
        headline["galois"] = verdict
    elif op == "sturm":
        p = _require_poly(args)
        lo, hi = -float("inf"), float("inf")
        if args.interval:
            m = re.fullmatch(r"\s*([^.]+?)\s*\.\.\s*(.+?)\s*", args.interval)
            if not m:
                raise UsageError("--interval expects lo..hi")
            lo, hi = scalar(m.group(1)), scalar(m.group(2))
        sq = p.squarefree_part()
        count = arith.sturm_count(sq, lo, hi)
        inputs = {"poly": str(p), "interval": args.interval}
        verdict = f"{count} distinct real roots"
        headline = {"real_roots": count}
        cert = {"squarefree": p.is_squarefree(), "squarefree_part": str(sq),
                "sturm_chain": [str(c) for c in arith.sturm_chain(sq)],
                "isolating_intervals": [[fmt(a), fmt(b)] for a, b in arith.isolate_real_roots(sq, scalar("1/1024"))]}
    elif op == "factor-pattern":
        p = _require_poly(args)
        fp = arith.factor_pattern(p, args.prime)
        inputs = {"poly": str(p), "prime": args.prime}
        verdict = "irreducible" if fp.degrees == (p.degree,) else "reducible"
        headline = {"degrees": list(fp.degrees)}
        cert = {"degrees": list(fp.degrees), "squarefree": fp.squarefree}
    elif op == "inoue-s0":
        if args.poly:
            p = _require_poly(args)
            if p.degree != 3 or p.lc != 1 or p.coeff(0) != -1 or not p.is_integral():
                raise UsageError("--poly must be x^3 - a x^2 + b x - 1 with integer a, b")
            a, b = int(-p.coeff(2)), int(p.coeff(1))
        else:
            prm = parse_params(args.params)
            if set(prm) != {"a", "b"} or any(v.denominator != 1 for v in prm.values()):
                raise UsageError("inoue-s0 needs --poly or --params a=<int>,b=<int>")
            a, b = int(prm["a"]), int(prm["b"])
        bound = args.bound
        m = arith.inoue_reality_test(a, b, bound)
        inputs = {"a": a, "b": b}
        verdict = "no real power up to bound" if m is None else f"beta^{m} is real"
        cert = {"first_real_power": m, "char_poly": str(arith.Poly([-1, b, -a, 1]))}
    elif op == "gorbatsevich":
        A = _parse_matrix(args.matrix) if args.matrix else _companion(_require_poly(args))
        bound = args.bound
        rep = arith.gorbatsevich_s0_check(A, bound)
        inputs = {"matrix": A}
        verdict = rep.verdict
        cert = rep.as_dict()
    elif op == "vdw":
        if args.n is None:
            raise UsageError("vdw needs --n")
        s = args.s if args.s is not None else args.n - 2
        res = arith.vdw_polynomial(args.n, s, args.seed)
        inputs = {"n": args.n, "s": s, "seed": args.seed}
        verdict = "certified" if res.certificate["ok"] else "certificate failed"
        headline = {"f": str(res.f)}
        cert = res.as_dict()
        report.verdict("vdw-certificate", res.certificate["ok"])
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(op)
    result = {"operation": op, "inputs": inputs, "verdict": verdict, **headline,
              "certificate": cert, "bound": bound}
    if args.format == "text":
        _emit("\n".join(f"{k}: {v}" for k, v in result.items()), args.out, report)
    else:
        _emit(_dump(result), args.out, report)


def cmd_table_diff(args, report: RunReport) -> None:
    e = resolve_entry(args.algebra, parse_params(args.params), args.variant)
    golden: GoldenTable | None
    if args.golden:
        golden = GoldenTable.from_json(Path(args.golden).read_text())
    else:
        golden = e.golden
    if golden is None:
        raise UsageError(f"{e.name} has no golden table; pass --golden")
    table = full_table(e.structure, golden.weights, golden.theories)
    diff = golden_diff(table, golden)
    report.verdict("golden-diff", diff.empty, cells=diff.cells_compared)
    if args.format == "json":
        _emit(_dump(diff.as_dict()), args.out, report)
    else:
        lines = [f"{e.name}: {diff.cells_compared} cells compared, "
                 f"{'empty diff' if diff.empty else 'DIFFERENCES FOUND'}"]
        lines += [f"  dim {d['theory']} h={d['h']} k={d['k']}: computed {d['computed']}, golden {d['golden']}"
                  for d in diff.dim_diffs]
        lines += [f"  span {d['theory']} h={d['h']} k={d['k']}: {d['reason']}" for d in diff.span_diffs]
        if diff.literal_mismatches:
            lines.append(f"  ({len(diff.literal_mismatches)} cells with equal quotient spans but different literal bases)")
        _emit("\n".join(lines), args.out, report)


# ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcscohom", description="Exact cohomology of lcs Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra_required=True):
        sp.add_argument("--algebra", required=algebra_required, help="catalog name or JSON file")
        sp.add_argument("--params", help="entry parameters, e.g. c1=1,c2=0")
        sp.add_argument("--variant", choices=("plus", "minus"), default="plus",
                        help="ot21 Lee form e1+e2 (plus) or -e1-e2 (minus)")
        sp.add_argument("--format", choices=("csv", "json", "text"), default="text")
        sp.add_argument("--out", help="write the main output to this path")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings")

    def weights(sp):
        sp.add_argument("--weights", help="integer range a..b")
        sp.add_argument("--weights-list", help="comma separated rationals")

    sp = sub.add_parser("catalog", help="list or describe catalog entries")
    common(sp, algebra_required=False)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("cohomology", help="dimension and representative tables")
    common(sp)
    weights(sp)
    sp.add_argument("--theories", default="all")
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("check", help="identity, duality, HLC, lemma and Hodge suites")
    common(sp)
    weights(sp)
    sp.add_argument("--suite", default="identities,dualities,hlc,lemma")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("critical-weights", help="weights where dimensions can jump")
    common(sp)
    sp.add_argument("--theories", default="all")
    sp.set_defaults(func=cmd_critical_weights)

    sp = sub.add_parser("arith", help="number-theoretic certificates")
    sp.add_argument("op", choices=("inoue-s0", "gorbatsevich", "vdw", "resolvent", "sturm", "factor-pattern"))
    sp.add_argument("--poly")
    sp.add_argument("--matrix", help="3x3 integer matrix 'a,b,c;d,e,f;g,h,i'")
    sp.add_argument("--params")
    sp.add_argument("--bound", type=int, default=500)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--n", type=int, help="vdw degree")
    sp.add_argument("--s", type=int, help="vdw number of real roots (default n-2)")
    sp.add_argument("--prime", type=int, default=2)
    sp.add_argument("--interval", help="sturm interval lo..hi")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--timings", action="store_true")
    sp.set_defaults(func=cmd_arith)

    sp = sub.add_parser("table-diff", help="compare computed tables with golden data")
    common(sp)
    sp.add_argument("--golden", help="golden table JSON (defaults to the built-in one)")
    sp.set_defaults(func=cmd_table_diff)
    return p


def run(argv=None) -> RunReport:
    """Execute one command line; the exit code is stored on the report."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        report = RunReport("", {"argv": list(argv or [])})
        report.exit_code = int(exc.code or 0)
        return report
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command") and v is not None}
    report = RunReport(args.command, inputs)
    try:
        args.func(args, report)
    except (UsageError, UnknownEntry, InvalidParameters, ParseError, SchemaError, GridMismatch,
            NotLcs, FileNotFoundError, json.JSONDecodeError, arith.NotSquarefree, arith.WrongRootPattern,
            arith.DeterminantNotOne, arith.LeadingCoefficientVanishes) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"lcscohom: error: {msg}", file=sys.stderr)
        report.exit_code = 2
        return report
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"lcscohom: check failed: {exc}", file=sys.stderr)
        report.verdict("command", False, error=str(exc))
    if args.timings and args.command != "check":
        print(_dump({"timings": {k: round(v, 4) for k, v in report.timings.items()}}), file=sys.stderr)
    report.exit_code = 0 if report.ok else 1
    return report


def main(argv=None) -> int:
    return run(argv).exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
