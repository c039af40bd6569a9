"""
Command-line front end.

    python run_experiments.py verify data/pair.json
    python run_experiments.py oscillator --eps1 1 --eps2 3 --eps3 3 --export-pair output/oscillator.json
    python run_experiments.py classical --eps1 1 --eps2 3 --eps3 3 --state 1 0 2 0 1 1 --t-end 5 --dt 1e-4
    python run_experiments.py quantum --eps1 1 --eps2 3 --eps3 3 --subpair --t-end 1
    python run_experiments.py search --eps1 1 --eps2 3 --eps3 3 --subpair --d1 1 --d2 1
    python run_experiments.py appendix --g data/sl2.json --bunch data/bunch_sl2_c2.json

Exit status: 0 when every check passes, 1 when a verification failed (the
report is still written), 2 for usage, configuration and input errors.
"""
import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Optional

from algebra.alts import to_alts, verify_alts
from algebra.bunches import (convert_isorep, enlarge_bunch, iso_pair, load_bunch, load_isorep, load_lie_algebra,
                             split_structure_check, standard_isorep, verify_bunch, verify_isorep, verify_lie_algebra)
from algebra.codecs import dump_pair, load_pair
from algebra.errors import (AngleUnwindingError, AxiomViolation, ConfigError, ContractViolation, IsoPairError,
                            ParameterError, ReductionUnavailable)
from algebra.isotopic_pair import IsotopicPair, restrict_pair, verify_anti_jordan, verify_isotopic_pair
from algebra.oscillator import EpsilonParams, audit_structure_table, build_pair, r_matrices, renormalize_rc, \
    resolve_params
from algebra.representations import (load_representation, representation_to_json, subpair_representation,
                                     verify_representation, zero_extend)
from algebra.superalgebra import (LieSuperalgebra, build_super, is_abelian, is_ideal, quotient_superdimension,
                                  superalgebra_to_json, verify_super)
from dynamics.classical import (CSV_COLUMNS, ClassicalState, drift_report, integrate_full, order_study,
                                reduce_and_integrate, signs_preserved, xi_check)
from dynamics.errata import errata_audit
from dynamics.quantum import OPERATOR_NAMES, compare_with_conjugation, hidden_hamiltonian_audit, integrate_quantum
from dynamics.search import find_representation, float_pair
from report_writer import RunResults, emit_report
from run_config import DEFAULT_CONFIG_PATH, RunConfig, load_config

OVERRIDE_KEYS = ("dt", "t_end", "method", "sample_every", "seeds", "seed", "workers", "max_iters", "tol",
                 "output_dir")
SUBPAIR_KEEP = ([0, 1], [0, 1])  # p, q and a, b
ABELIAN_IDEAL = ("R[p,c]", "R[q,c]")
MIXED_IDEAL = ("R[p,c]", "R[q,c]", "r", "c")


def _params(args: argparse.Namespace) -> EpsilonParams:
    try:
        return resolve_params(args.eps1, args.eps2, args.eps3)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad oscillator constant: {exc}")


def _verify_pair(pair: IsotopicPair, tol: float, results: RunResults) -> Optional[LieSuperalgebra]:
    """Pair, anti-Jordan, ALTS and superalgebra reports; None when g(V) cannot be built"""
    results.reports.append(verify_isotopic_pair(pair, tol))
    results.reports.append(verify_anti_jordan(pair, tol))
    alts = to_alts(pair)
    results.reports.append(verify_alts(alts, tol))
    try:
        sa = build_super(alts, tol)
    except AxiomViolation as exc:
        results.checks["superalgebra_built"] = False
        results.details["superalgebra_error"] = {"message": str(exc),
                                                 "witness": list(exc.witness) if exc.witness else None}
        return None
    results.reports.append(verify_super(sa, tol))
    results.details["superdimension"] = list(sa.superdimension)
    results.details["g0_dimension"] = sa.even.dim
    return sa


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="verify", config=config.to_json())
    pair = load_pair(Path(args.pair))
    results.details["pair"] = {"file": args.pair, "n1": pair.n1, "n2": pair.n2, "exact": pair.exact}
    _verify_pair(pair, config.tol, results)
    return results


def _ideal_checks(sa: LieSuperalgebra, results: RunResults) -> None:
    g0 = list(sa.even.labels)
    if not all(label in sa.labels for label in MIXED_IDEAL):
        results.details["ideals"] = "not comparable (R[p,c] or R[q,c] outside the chosen g0 basis)"
        return
    results.checks["abelian_ideal_of_g0"] = (is_ideal(sa, ABELIAN_IDEAL, ambient=g0)
                                            and is_abelian(sa, ABELIAN_IDEAL))
    results.checks["ideal_2_2"] = is_ideal(sa, MIXED_IDEAL)
    results.details["quotient_superdimension"] = list(quotient_superdimension(sa, MIXED_IDEAL))


def cmd_oscillator(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="oscillator", config=config.to_json())
    params = _params(args)
    osc = build_pair(params, config.tol)
    results.details["params"] = params.to_json()
    results.details["degeneracies"] = list(params.degeneracies)
    sa = _verify_pair(osc.pair, config.tol, results)
    if sa is not None:
        if not params.degeneracies:
            results.checks["superdimension_6_6"] = sa.superdimension == (6, 6)
            results.checks["g0_dimension_6"] = sa.even.dim == 6
            _ideal_checks(sa, results)
        results.details["superalgebra"] = superalgebra_to_json(sa)

    renormalized = renormalize_rc(osc)
    results.checks["renormalized_pair_valid"] = verify_isotopic_pair(renormalized.pair, config.tol).passed
    results.details["renormalized_params"] = renormalized.params.to_json()

    r_audit = r_matrices(params)
    results.details["r_matrices"] = {"consistent": r_audit.consistent,
                                     "mismatches": [list(m) for m in r_audit.mismatches]}
    if sa is not None:
        table = audit_structure_table(params, config.tol)
        results.details["structure_table"] = [line.to_json() for line in table]
        results.summary.append(("Printed bracket table", ["Line", "Status", "Computed"],
                                [[line.line, line.status, line.computed or ""] for line in table]))
    errata = errata_audit(params)
    results.details["errata"] = [entry.to_json() for entry in errata]
    results.summary.append(("Errata audit", ["Item", "Printed", "Computed", "Consistent"],
                            [[e.item, e.printed, e.computed, e.consistent] for e in errata]))

    if args.export_pair:
        dump_pair(osc.pair, Path(args.export_pair))
        print(f"Pair written to {args.export_pair}")
    return results


def cmd_classical(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="classical", config=config.to_json())
    params = _params(args)
    s0 = ClassicalState.from_sequence(args.state)
    traj = integrate_full(s0, params, config.t_end, config.dt, config.method, config.sample_every,
                          config.rk45_rtol, config.rk45_atol)
    results.tables["trajectory.csv"] = (CSV_COLUMNS, traj.rows())
    results.details["params"] = params.to_json()
    results.details["initial_state"] = asdict(s0)

    drift = drift_report(traj)
    results.details["drift"] = drift
    for name, value in drift.items():
        results.checks[f"drift_{name}"] = value < config.drift_tol
    results.details["signs_preserved"] = signs_preserved(traj)
    results.summary.append(("Invariant drift", ["Invariant", "Relative drift"], [[k, v] for k, v in drift.items()]))

    try:
        fit = xi_check(traj, params)
        results.details["xi_fit"] = asdict(fit)
        results.checks["xi_slope"] = fit.relative_error < config.slope_tol
        results.checks["xi_linear"] = fit.max_residual < config.drift_tol
        results.summary.append(("xi fit", ["Fitted slope", "Predicted slope", "Relative error", "Max residual"],
                                [[fit.slope, fit.predicted_slope, fit.relative_error, fit.max_residual]]))
    except AngleUnwindingError as exc:
        results.details["xi_fit"] = {"error": str(exc)}

    try:
        reduced = reduce_and_integrate(s0, params, config.t_end, config.dt, config.method, config.sample_every)
        results.details["reduction"] = {"available": True, "max_deviation": reduced.max_deviation,
                                        "rc_identity_residual": reduced.rc_identity_residual}
        results.checks["reduction_agrees"] = reduced.max_deviation < config.drift_tol
    except ReductionUnavailable as exc:
        results.details["reduction"] = {"available": False, "reason": str(exc)}

    if args.order_study:
        study = order_study(s0, params, config.t_end, config.dt)
        results.details["order_study"] = asdict(study)
    return results


def _operators_jsonl(traj) -> str:
    lines = []
    for t, ops in zip(traj.times, traj.operators):
        record = {"t": float(t)}
        record.update({name: mat.tolist() for name, mat in zip(OPERATOR_NAMES, ops)})
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + "\n"


def cmd_quantum(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="quantum", config=config.to_json())
    params = _params(args)
    rep = load_representation(Path(args.rep)) if args.rep else subpair_representation(params)
    results.details["params"] = params.to_json()
    results.details["representation"] = {"source": args.rep or "subpair", "dim": rep.dim,
                                         "grading": list(rep.grading) if rep.grading else None}
    traj = integrate_quantum(rep, params, config.t_end, config.dt, config.sample_every, keep_operators=True,
                             tol=config.tol)
    results.tables["relations.csv"] = (["t"] + traj.relation_names + ["max"], traj.rows())
    results.details["relation_drift"] = traj.max_drift
    results.checks["relation_drift"] = traj.max_drift < config.drift_tol
    if args.operators:
        results.text_files["operators.jsonl"] = _operators_jsonl(traj)

    if rep.grading is None:
        results.details["hidden_hamiltonian"] = "skipped: the representation declares no grading"
        return results
    try:
        audit = hidden_hamiltonian_audit(rep, params, config.tol)
    except ContractViolation as exc:
        results.details["hidden_hamiltonian"] = f"skipped: {exc}"
        return results
    results.details["hidden_hamiltonian"] = audit.to_json()
    if audit.classification == "not-applicable":
        return results
    results.audits.append(audit.report)
    if audit.report.passed:
        deviation, _ = compare_with_conjugation(traj, audit.hamiltonian)
        results.details["conjugation_max_deviation"] = deviation
        results.checks["conjugation_agrees"] = deviation < config.drift_tol
    return results


def cmd_search(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="search", config=config.to_json())
    osc = None
    if args.pair:
        pair = load_pair(Path(args.pair))
        results.details["pair"] = args.pair
    else:
        if args.eps1 is None or args.eps2 is None or args.eps3 is None:
            raise ConfigError("search needs --pair or --eps1/--eps2/--eps3")
        osc = build_pair(_params(args), config.tol)
        pair = restrict_pair(osc.pair, *SUBPAIR_KEEP) if args.subpair else osc.pair
        results.details["pair"] = "oscillator subpair (p, q | a, b)" if args.subpair else "oscillator"
        results.details["params"] = osc.params.to_json()

    found = find_representation(pair, args.d1, args.d2, config.search_settings())
    results.details["search"] = found.to_json()
    results.documents["search_result.json"] = found.to_json()
    results.checks["search_success"] = found.success
    if not found.success:
        return results

    fpair = float_pair(pair)
    results.reports.append(verify_representation(found.representation, fpair, config.search_tol))
    results.documents["representation.json"] = representation_to_json(found.representation)
    if osc is not None and args.subpair:
        extended = zero_extend(found.representation, osc.pair, *SUBPAIR_KEEP)
        results.reports.append(verify_representation(extended, float_pair(osc.pair), config.search_tol))
        results.documents["extended_representation.json"] = representation_to_json(extended)
    return results


def cmd_appendix(args: argparse.Namespace, config: RunConfig) -> RunResults:
    results = RunResults(command="appendix", config=config.to_json())
    tol = config.tol
    g = load_lie_algebra(Path(args.g))
    results.details["lie_algebra"] = {"file": args.g, "labels": list(g.labels)}
    results.reports.append(verify_lie_algebra(g, tol))

    iso = verify_isotopic_pair(iso_pair(g), tol)
    iso.subject = "I(g)"
    results.reports.append(iso)
    standard = standard_isorep(g)
    results.reports.append(verify_isorep(standard, tol))
    split = split_structure_check(standard, tol=tol)
    results.reports.append(split.report)
    results.details["standard_isorep"] = {"q_invertible": split.q_invertible,
                                          "intertwiner_dimension": split.intertwiner_dimension}

    if args.bunch:
        bunch = load_bunch(Path(args.bunch))
        verification = verify_bunch(bunch, tol)
        results.reports.append(verification.report)
        results.details["bunch"] = {"file": args.bunch, "complete": verification.complete,
                                    "incomplete_at": list(verification.witness) if verification.witness else None}
        if verification.complete and verification.report.passed:
            enlarged = verify_isotopic_pair(enlarge_bunch(bunch, verification, tol), tol)
            enlarged.subject = "enlarged bunch"
            results.reports.append(enlarged)

    if args.isorep:
        given = load_isorep(Path(args.isorep))
        results.reports.append(verify_isorep(given, tol))
        results.reports.append(convert_isorep(given, tol=tol).report)
        if given.grading is not None:
            structure = split_structure_check(given, tol=tol)
            results.reports.append(structure.report)
            results.details["isorep"] = {"file": args.isorep, "q_invertible": structure.q_invertible,
                                         "intertwiner_dimension": structure.intertwiner_dimension}
    return results


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], RunResults]] = {
    "verify": cmd_verify,
    "oscillator": cmd_oscillator,
    "classical": cmd_classical,
    "quantum": cmd_quantum,
    "search": cmd_search,
    "appendix": cmd_appendix,
}


def _add_eps(parser: argparse.ArgumentParser, required: bool = True) -> None:
    for name in ("eps1", "eps2", "eps3"):
        parser.add_argument(f"--{name}", type=str, required=required, help="rational, e.g. 1 or 3/2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="JSON file overlaying the defaults")
    common.add_argument("--defaults", type=str, default=str(DEFAULT_CONFIG_PATH), help="defaults file")
    common.add_argument("--output-dir", dest="output_dir", type=str, help="directory for the reports")
    common.add_argument("--tol", type=float, help="float-backend tolerance")

    integration = argparse.ArgumentParser(add_help=False)
    integration.add_argument("--t-end", dest="t_end", type=float)
    integration.add_argument("--dt", type=float)
    integration.add_argument("--sample-every", dest="sample_every", type=int)

    parser = argparse.ArgumentParser(description="Isotopic pairs and coupled-oscillator experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="check a pair document")
    verify.add_argument("pair", type=str)

    oscillator = sub.add_parser("oscillator", parents=[common], help="build and audit the oscillator pair")
    _add_eps(oscillator)
    oscillator.add_argument("--export-pair", dest="export_pair", type=str, help="write the pair JSON here")

    classical = sub.add_parser("classical", parents=[common, integration], help="integrate the classical flow")
    _add_eps(classical)
    classical.add_argument("--state", type=float, nargs=6, required=True, metavar=("P", "Q", "R", "A", "B", "C"))
    classical.add_argument("--method", type=str)
    classical.add_argument("--order-study", dest="order_study", action="store_true")

    quantum = sub.add_parser("quantum", parents=[common, integration], help="integrate the operator equations")
    _add_eps(quantum)
    source = quantum.add_mutually_exclusive_group(required=True)
    source.add_argument("--rep", type=str, help="representation JSON of the oscillator pair")
    source.add_argument("--subpair", action="store_true", help="use the rank-one split representation")
    quantum.add_argument("--operators", action="store_true", help="also write operators.jsonl")

    search = sub.add_parser("search", parents=[common], help="search for a split representation")
    search.add_argument("--pair", type=str)
    _add_eps(search, required=False)
    search.add_argument("--subpair", action="store_true", help="restrict the oscillator pair to (p, q | a, b)")
    search.add_argument("--d1", type=int, required=True)
    search.add_argument("--d2", type=int, required=True)
    search.add_argument("--seeds", type=int)
    search.add_argument("--seed", type=int)
    search.add_argument("--max-iters", dest="max_iters", type=int)
    search.add_argument("--workers", type=int)

    appendix = sub.add_parser("appendix", parents=[common], help="Lie algebra, bunch and isorep checks")
    appendix.add_argument("--g", type=str, required=True)
    appendix.add_argument("--bunch", type=str)
    appendix.add_argument("--isorep", type=str)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        overrides = {key: getattr(args, key, None) for key in OVERRIDE_KEYS}
        config = load_config(Path(args.defaults), Path(args.config) if args.config else None, overrides)
        results = COMMANDS[args.command](args, config)
    except json.JSONDecodeError as exc:
        print(f"Error: malformed JSON: {exc}")
        return 2
    except (ConfigError, ParameterError, ContractViolation) as exc:
        print(f"Error: {exc}")
        return 2
    except OSError as exc:
        print(f"Error: {exc}")
        return 2
    except IsoPairError as exc:
        print(f"Error: {type(exc).__name__}: {exc}")
        return 1

    try:
        emit_report(results, Path(config.output_dir))
    except OSError as exc:
        print(f"Error writing reports: {exc}")
        return 2
    print(f"{results.command}: {'PASS' if results.passed else 'FAIL'}")
    return 0 if results.passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
