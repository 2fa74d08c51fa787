"""Command-line entry point: ``perimin {minimize,sweep,probe,check}``.

Exit codes: 0 success, 1 invariant breach (or failed check), 2 malformed
input, 3 requested accuracy unreachable at this resolution.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import checks
from .extension import check_step3, sample_probes
from .functional import PreconditionError
from .io import ScenarioFormatError, exact, load_scenario, parse_rational, read_masks, write_masks
from .mincut import InfeasibleCutError, InvariantError
from .minimize import Problem, ResolutionExhaustedError, Variant, estimate_lambda, evaluate, minimize
from .space import CapacityScaleError

EXIT_OK, EXIT_INVARIANT, EXIT_MALFORMED, EXIT_RESOLUTION = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ScenarioFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _lambda_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _write_json(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _choose_lambda(args, scn) -> tuple[Fraction, dict]:
    if (args.lam is None) == (args.epsilon is None):
        raise UsageError("give exactly one of --lambda or --epsilon")
    if args.lam is not None:
        if args.lam < 0:
            raise UsageError("--lambda must be nonnegative")
        return args.lam, {}
    est = estimate_lambda(scn.space, scn.omega, args.epsilon)
    S = scn.space.scale
    return est.lam, {"epsilon": exact(args.epsilon, S), "layer_width": exact(est.r, S),
                     "layer_measure": exact(est.layer_measure, S), "certificate": exact(est.certificate, S),
                     "certificate_ok": est.certificate_ok}


def _solve_report(scn, lam: Fraction, variant: Variant) -> tuple[dict, object]:
    space = scn.space
    problem = Problem(space, scn.omega, lam, variant)
    res = minimize(problem)
    for side in (res.minimal_set, res.maximal_set):
        if evaluate(problem, side) != res.value:
            raise InvariantError("reported set does not reproduce the optimal value")
    S = space.scale
    uncovered = space.measure_of(scn.omega & ~res.minimal_set)
    report = {
        "lambda": exact(res.lam, S),
        "variant": variant.value,
        "value": exact(res.value, S),
        "uncovered_measure": exact(uncovered, S),
        "sizes": {"omega": int(scn.omega.sum()), "minimal": int(res.minimal_set.sum()),
                  "maximal": int(res.maximal_set.sum())},
    }
    return report, res


def cmd_minimize(args) -> int:
    t0 = time.perf_counter()
    scn, doc = load_scenario(args.scenario)
    lam, lam_info = _choose_lambda(args, scn)
    variant = Variant.parse(args.variant)
    report, res = _solve_report(scn, lam, variant)
    report["scenario"] = doc
    if lam_info:
        report["lambda_selection"] = lam_info
        report["budget_met"] = scn.space.measure_of(scn.omega & ~res.minimal_set) < args.epsilon
    if args.probes:
        probes = sample_probes(scn.space, res.minimal_set, args.probes, args.seed)
        report["extension"] = check_step3(scn.space, res.minimal_set, res.lam, probes).summary()
    out = Path(args.out)
    write_masks(scn.space, res.minimal_set, out / "minimal")
    write_masks(scn.space, res.maximal_set, out / "maximal")
    if not args.no_timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    _write_json(out / "report.json", report)
    print(f"value {report['value']['decimal']} at lambda {report['lambda']['decimal']}")
    return EXIT_OK


def _concave_nondecreasing(lams: list[Fraction], values: list[Fraction]) -> tuple[bool, bool]:
    nondecreasing = all(a <= b for a, b in zip(values, values[1:]))
    slopes = [(v1 - v0) / (l1 - l0) for l0, l1, v0, v1 in zip(lams, lams[1:], values, values[1:])]
    return nondecreasing, all(a >= b for a, b in zip(slopes, slopes[1:]))


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    scn, doc = load_scenario(args.scenario)
    lams = args.lambdas
    if not lams:
        raise UsageError("--lambdas needs at least one value")
    if any(b <= a for a, b in zip(lams, lams[1:])) or lams[0] < 0:
        raise UsageError("--lambdas must be nonnegative and strictly increasing")
    variant = Variant.parse(args.variant)
    runs, sets = [], []
    for lam in lams:
        report, res = _solve_report(scn, lam, variant)
        runs.append(report)
        sets.append(res.minimal_set)
    nested = all(not (a & ~b).any() for a, b in zip(sets, sets[1:]))
    quantized = [Fraction(r["lambda"]["numerator"], r["lambda"]["scale"]) for r in runs]
    values = [Fraction(r["value"]["numerator"], r["value"]["scale"]) for r in runs]
    monotone, concave = _concave_nondecreasing(quantized, values)
    out = Path(args.out)
    for i, s in enumerate(sets):
        write_masks(scn.space, s, out / f"minimal-{i}")
    doc_out = {"scenario": doc, "variant": variant.value, "runs": runs, "nested": nested,
               "nondecreasing": monotone, "concave": concave}
    if not args.no_timing:
        doc_out["timing_seconds"] = round(time.perf_counter() - t0, 6)
    _write_json(out / "sweep.json", doc_out)
    print(f"nested={nested} nondecreasing={monotone} concave={concave}")
    return EXIT_OK if nested else EXIT_INVARIANT


def cmd_probe(args) -> int:
    t0 = time.perf_counter()
    scn, doc = load_scenario(args.scenario)
    space = scn.space
    from_minimizer = args.mask is None
    if from_minimizer:
        lam, _ = _choose_lambda(args, scn)
        res = minimize(Problem(space, scn.omega, lam, Variant.parse(args.variant)))
        G, lam = res.minimal_set, res.lam
    else:
        if args.lam is None:
            raise UsageError("--mask needs --lambda for the inequality being tested")
        G, lam = read_masks(space, args.mask), args.lam
    probes = sample_probes(space, G, args.probes, args.seed)
    rep = check_step3(space, G, lam, probes)
    S = space.scale
    doc_out = {
        "scenario": doc,
        "source": "minimizer" if from_minimizer else "mask",
        "lambda": exact(lam, S),
        "seed": args.seed,
        "summary": rep.summary(),
        "violating_probes": rep.violating,
        "probes": [{"size": int(p.probe.sum()), "relative_perimeter": exact(p.relative_perimeter, S),
                    "measure": exact(p.measure, S), "perimeter": exact(p.perimeter, S),
                    "ratio": None if p.ratio is None else exact(p.ratio, S)} for p in rep.probes],
    }
    if not args.no_timing:
        doc_out["timing_seconds"] = round(time.perf_counter() - t0, 6)
    _write_json(Path(args.out) / "probe.json", doc_out)
    print(f"{len(rep.probes)} probes, {rep.step3_violations} violations")
    return EXIT_INVARIANT if from_minimizer and rep.step3_violations else EXIT_OK


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.detail})")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perimin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lam=True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--variant", default="inside", choices=["inside", "symdiff"])
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
        if lam:
            p.add_argument("--lambda", dest="lam", type=_rational)
            p.add_argument("--epsilon", type=_rational)

    p = sub.add_parser("minimize", help="solve one problem and write report and masks")
    common(p)
    p.add_argument("--probes", type=int, default=0, help="also test the extension inequality on N probes")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("sweep", help="solve along an increasing list of lambdas")
    common(p, lam=False)
    p.add_argument("--lambdas", type=_lambda_list, required=True, help="comma-separated, e.g. 1/4,1/2,1")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probe", help="test the extension inequality on sampled subsets")
    common(p)
    p.add_argument("--mask", help="PGM prefix of a set to test instead of the minimizer")
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("check", help="run a built-in invariant suite")
    p.add_argument("suite", choices=sorted(checks.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioFormatError, CapacityScaleError, PreconditionError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ResolutionExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except (InvariantError, InfeasibleCutError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
