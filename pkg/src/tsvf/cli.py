"""Command line entry point: ``tsvf <command> [options]``.

Exit codes: 0 success, 1 domain error (e.g. NullEvent, OrthogonalSelection,
a failed check), 2 parse/validation/usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import abl, catalog, ensemble, pointer, weak
from .errors import InputError, TsvfError, UnsupportedDescription, ValidationError
from .hilbert import basis_projector
from .scenario import ScenarioDocument, load
from .tsv import PreOnly, PrePost, reverse, reverse_generalized

SYMMETRY_TOL = 1e-12

COMMANDS = ("abl", "weak", "pointer", "simulate", "examples", "check-symmetry")


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}i"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _doc(args) -> ScenarioDocument:
    if not args.scenario:
        raise ValidationError("--scenario is required for this command", "--scenario")
    try:
        return load(args.scenario)
    except OSError as exc:
        raise ValidationError(exc.strerror or str(exc), args.scenario) from None


def _obs_name(doc: ScenarioDocument, override):
    src = override if override is not None else doc.observable_source
    return src if isinstance(src, str) else "matrix"


# ---------------------------------------------------------------------------
# commands


def cmd_abl(args) -> tuple[dict, int]:
    doc = _doc(args)
    C = abl.spectral(doc.observable(args.observable))
    if doc.generalized is not None:
        kind, dist = "generalized", abl.abl_generalized(doc.generalized, C)
    elif isinstance(doc.post, ensemble.Subspace):
        kind, dist = "subspace-post", abl.abl_degenerate(doc.pre, doc.post.projector, C)
    elif isinstance(doc.post, ensemble.RankOne):
        kind, dist = "pre-post", abl.abl_probability(doc.description.tsv, C)
    else:
        kind, dist = "pre-only", abl.born_probability(doc.pre, C)
    certain = None
    i = int(np.argmax(dist.probabilities))
    if dist.probabilities[i] >= 1 - abl.CERTAINTY_TOL:
        certain = float(dist.eigenvalues[i])
    report = {
        "command": "abl",
        "description": kind,
        "observable": _obs_name(doc, args.observable),
        "outcomes": [{"eigenvalue": c, "probability": p} for c, p in dist.entries],
        "element_of_reality": certain,
    }
    return report, 0


def cmd_weak(args) -> tuple[dict, int]:
    doc = _doc(args)
    C = doc.observable(args.observable)
    if doc.generalized is not None:
        kind, wv = "generalized", weak.weak_value_generalized(doc.generalized, C)
    elif isinstance(doc.post, ensemble.Subspace):
        kind, wv = "subspace-post", weak.weak_value_degenerate(doc.pre, doc.post.projector, C)
    elif isinstance(doc.post, ensemble.RankOne):
        kind, wv = "pre-post", weak.weak_value(doc.description.tsv, C)
    else:
        kind = "pre-only"
        wv = weak.weak_value_degenerate(doc.pre, doc.space.identity(), C)
    report = {
        "command": "weak",
        "description": kind,
        "observable": _obs_name(doc, args.observable),
        "weak_value": _c(wv.value),
        "condition": wv.condition,
    }
    return report, 0


def _grid(flag: str | None, default: float) -> list[float]:
    if flag is None:
        return [default]
    try:
        values = [float(v) for v in flag.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"not a number list: {flag!r}", "--lambda/--delta") from None
    if not values:
        raise ValidationError("empty value list", "--lambda/--delta")
    return values


def cmd_pointer(args) -> tuple[dict, int]:
    doc = _doc(args)
    if doc.pre is None or isinstance(doc.post, ensemble.Subspace):
        raise UnsupportedDescription(
            "the pointer model needs a pre-selected state and an optional rank-one post-selection")
    C = abl.spectral(doc.observable(args.observable))
    post = doc.post.bra if doc.post is not None else None
    lam0 = doc.coupling.strength if doc.coupling else 1.0
    del0 = doc.coupling.pointer_width if doc.coupling else 1.0
    reference = None
    if post is not None:
        reference = weak.weak_value(doc.description.tsv, C.reconstruct()).value
    else:
        psi = doc.pre.amplitudes
        reference = complex(np.vdot(psi, C.reconstruct().matrix @ psi))
    rows = []
    for lam in _grid(args.lam, lam0):
        for delta in _grid(args.delta, del0):
            try:
                k = pointer.Coupling(lam, delta)
            except ValueError as exc:
                raise ValidationError(str(exc), "--lambda/--delta") from None
            w = pointer.evolve_pointer(doc.pre, C, k, post)
            st = pointer.stats(w)
            try:
                strong = [p for _, p in pointer.strong_readout(w, C, k).entries]
            except TsvfError:
                strong = None
            rows.append({
                "lambda": lam, "delta": delta,
                "mean_q": st.mean_q, "var_q": st.var_q, "mean_p": st.mean_p,
                "survival": st.survival,
                "mean_q_over_lambda": st.mean_q / lam,
                "strong_readout": strong,
            })
    report = {
        "command": "pointer",
        "observable": _obs_name(doc, args.observable),
        "eigenvalues": [float(c) for c in C.eigenvalues],
        "weak_value": _c(reference),
        "rows": rows,
    }
    return report, 0


def cmd_simulate(args) -> tuple[dict, int]:
    doc = _doc(args)
    seed = args.seed if args.seed is not None else doc.seed
    if seed is None:
        raise ValidationError("a seed is required (--seed or document 'seed')", "--seed")
    trials = args.trials if args.trials is not None else doc.trials
    if trials is None:
        raise ValidationError("trial count required (--trials or document 'trials')", "--trials")
    rng = ensemble.RngPolicy(seed)
    report = {"command": "simulate", "seed": seed, "trials": trials}
    if doc.generalized is not None:
        cmp = ensemble.prepare_and_compare(doc.generalized, doc.observable(args.observable),
                                           trials, rng, args.workers)
        stats = cmp.freq
        exact = {ensemble.outcome_label(c): p for c, p in cmp.formula.entries}
        report["mode"] = "ancilla"
        report["composite_formula"] = {ensemble.outcome_label(c): p
                                       for c, p in cmp.composite_formula.entries}
    else:
        scen = doc.scenario(args.observable)
        stats = ensemble.run(scen, trials, rng, args.workers)
        report["mode"] = ("device" if isinstance(scen.intermediate, ensemble.UnitaryDevice)
                          else "projective" if scen.intermediate is not None else "selection")
        try:
            exact = ensemble.exact_conditional(scen)
        except abl.NullEvent:
            exact = None
    report["stats"] = stats.to_dict()
    report["exact"] = exact
    if stats.selected == 0:
        report["error"] = "NoSelectedTrials"
        return report, 1
    return report, 0


def cmd_examples(args) -> tuple[dict, int]:
    names = args.names or list(catalog.EXAMPLES)
    unknown = [n for n in names if n not in catalog.EXAMPLES]
    if unknown:
        raise ValidationError(f"unknown example(s) {unknown}; "
                              f"available: {list(catalog.EXAMPLES)}", "examples")
    ctx = catalog.RunContext(trials=args.trials or catalog.DEFAULT_TRIALS,
                             seed=args.seed if args.seed is not None else catalog.DEFAULT_SEED,
                             workers=args.workers)
    out, ok = [], True
    for name in names:
        results = catalog.run_example(catalog.EXAMPLES[name](), ctx)
        claims = []
        for r in results:
            ok &= r.passed
            claims.append({
                "claim": r.label, "expected": _c(r.expected), "actual": _c(r.actual),
                "tolerance": r.tolerance, "passed": bool(r.passed), "reference": r.anchor,
            })
        out.append({"example": name, "claims": claims})
    return {"command": "examples", "examples": out, "passed": ok}, 0 if ok else 1


def cmd_check_symmetry(args) -> tuple[dict, int]:
    doc = _doc(args)
    d = doc.description
    if isinstance(d, PreOnly):
        raise UnsupportedDescription("time reversal needs a post-selection")
    if args.observable is not None or doc.observable_source is not None:
        observables = [(_obs_name(doc, args.observable), doc.observable(args.observable))]
    else:
        observables = [(f"projector:{doc.space.labels[i] if doc.space.labels else i}",
                        basis_projector(doc.space, i)) for i in range(doc.space.dimension)]
    checks = []
    for name, C in observables:
        if isinstance(d, PrePost):
            fwd = lambda op: abl.abl_probability(d.tsv, op)
            bwd = lambda op: abl.abl_probability(reverse(d.tsv), op)
            wfwd = lambda op: weak.weak_value(d.tsv, op)
            wbwd = lambda op: weak.weak_value(reverse(d.tsv), op)
        else:
            fwd = lambda op: abl.abl_generalized(d.g, op)
            bwd = lambda op: abl.abl_generalized(reverse_generalized(d.g), op)
            wfwd = lambda op: weak.weak_value_generalized(d.g, op)
            wbwd = lambda op: weak.weak_value_generalized(reverse_generalized(d.g), op)
        try:
            gap = float(np.max(np.abs(fwd(C).probabilities - bwd(C).probabilities)))
            checks.append({"check": "abl-invariance", "observable": name,
                           "gap": gap, "passed": gap <= SYMMETRY_TOL})
        except abl.NullEvent:
            checks.append({"check": "abl-invariance", "observable": name,
                           "gap": None, "passed": True, "note": "NullEvent in both directions"})
        try:
            gap = float(abs(wbwd(C).value - np.conj(wfwd(C).value)))
            checks.append({"check": "weak-conjugation", "observable": name,
                           "gap": gap, "passed": gap <= SYMMETRY_TOL})
        except weak.OrthogonalSelection:
            checks.append({"check": "weak-conjugation", "observable": name,
                           "gap": None, "passed": True, "note": "OrthogonalSelection"})
    ok = all(c["passed"] for c in checks)
    return {"command": "check-symmetry", "checks": checks, "passed": ok}, 0 if ok else 1


HANDLERS = {
    "abl": cmd_abl,
    "weak": cmd_weak,
    "pointer": cmd_pointer,
    "simulate": cmd_simulate,
    "examples": cmd_examples,
    "check-symmetry": cmd_check_symmetry,
}


# ---------------------------------------------------------------------------
# rendering


def render_text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "abl":
        lines.append(f"ABL ({report['description']}) for {report['observable']}")
        for e in report["outcomes"]:
            lines.append(f"  {_fmt(e['eigenvalue']):>10}  {_fmt(e['probability'])}")
        eor = report["element_of_reality"]
        lines.append(f"element of reality: {'none' if eor is None else _fmt(eor)}")
    elif cmd == "weak":
        z = complex(*report["weak_value"])
        lines.append(f"weak value ({report['description']}) of {report['observable']}: {_fmt(z)}")
        lines.append(f"condition |<Phi|Psi>|: {_fmt(report['condition'])}")
    elif cmd == "pointer":
        lines.append(f"pointer for {report['observable']}, weak value "
                     f"{_fmt(complex(*report['weak_value']))}")
        lines.append(f"{'lambda':>10} {'delta':>10} {'mean_q':>14} {'var_q':>14} "
                     f"{'mean_p':>14} {'survival':>12}  strong")
        for r in report["rows"]:
            strong = ("-" if r["strong_readout"] is None
                      else " ".join(_fmt(p) for p in r["strong_readout"]))
            lines.append(f"{_fmt(r['lambda']):>10} {_fmt(r['delta']):>10} "
                         f"{_fmt(r['mean_q']):>14} {_fmt(r['var_q']):>14} "
                         f"{_fmt(r['mean_p']):>14} {_fmt(r['survival']):>12}  {strong}")
    elif cmd == "simulate":
        st = report["stats"]
        lines.append(f"{report['mode']} simulation: seed {report['seed']}, "
                     f"{st['trials']} trials, {st['selected']} selected "
                     f"(rate {_fmt(st['selection_rate'])})")
        exact = report.get("exact") or {}
        for label, count in st["outcome_counts"].items():
            f = st["conditional_freq"].get(label)
            se = st["stderr"].get(label)
            ex = exact.get(label)
            lines.append(f"  {label:>10}  count {count:>9}  freq {_fmt(f) if f is not None else '-':>14}"
                         f"  stderr {_fmt(se) if se is not None else '-':>14}"
                         f"  exact {_fmt(ex) if ex is not None else '-'}")
        if "error" in report:
            lines.append(f"error: {report['error']}")
    elif cmd == "examples":
        for ex in report["examples"]:
            lines.append(f"== {ex['example']}")
            for c in ex["claims"]:
                mark = "PASS" if c["passed"] else "FAIL"
                lines.append(f"  [{mark}] {c['claim']}: actual {_fmt(complex(*c['actual']))}, "
                             f"expected {_fmt(complex(*c['expected']))} "
                             f"(tol {_fmt(c['tolerance'])}; {c['reference']})")
        lines.append("all claims PASS" if report["passed"] else "some claims FAIL")
    elif cmd == "check-symmetry":
        for c in report["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            gap = "-" if c["gap"] is None else _fmt(c["gap"])
            lines.append(f"  [{mark}] {c['check']} {c['observable']}: gap {gap}"
                         + (f" ({c['note']})" if "note" in c else ""))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--scenario", metavar="PATH", help="scenario JSON document")
    common.add_argument("--observable", metavar="NAME",
                        help="builtin observable (pauli_x/y/z, total_spin_squared, "
                             "identity, projector:<label>)")
    common.add_argument("--trials", type=int, metavar="N")
    common.add_argument("--seed", type=int, metavar="S")
    common.add_argument("--lambda", dest="lam", metavar="X",
                        help="coupling strength(s), comma separated")
    common.add_argument("--delta", metavar="X", help="pointer width(s), comma separated")
    common.add_argument("--workers", type=int, default=1,
                        help="threads for Monte Carlo trials (output is independent of this)")

    parser = argparse.ArgumentParser(
        prog="tsvf", description="Pre- and post-selected quantum systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("abl", parents=[common], help="ABL outcome probabilities")
    sub.add_parser("weak", parents=[common], help="weak value")
    sub.add_parser("pointer", parents=[common], help="pointer statistics over a (lambda, delta) grid")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo ensemble")
    ex = sub.add_parser("examples", parents=[common], help="run the worked-example catalog")
    ex.add_argument("names", nargs="*", metavar="NAME", help=", ".join(catalog.EXAMPLES))
    sub.add_parser("check-symmetry", parents=[common], help="time-reversal invariants")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.trials is not None and args.trials < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return 2
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return 2
    if args.seed is not None and args.seed < 0:
        print("error: --seed must be non-negative", file=sys.stderr)
        return 2
    try:
        report, code = HANDLERS[args.command](args)
    except TsvfError as exc:
        code = 2 if isinstance(exc, InputError) else 1
        err = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        if args.format == "json":
            print(json.dumps(err, indent=2))
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
