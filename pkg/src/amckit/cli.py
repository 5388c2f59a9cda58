"""Command-line surface: eval, check, classify, compile, verify, axioms.

Exit codes: 0 success/sound, 1 unsound pairing or verify mismatch,
2 input or parse error, 3 semiring axiom violation.  The AMC_SEED
environment variable overrides the default RNG seed; --seed overrides both.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .circuit import classify_circuit, parse_nnf, write_nnf
from .cnf import compile_cnf_to_sddnnf, parse_dimacs
from .errors import AmcError, UnsoundError
from .evaluation import evaluate, evaluate_checked, required_circuit_class, task_profile_of
from .obdd import ObddRef, obdd_to_circuit
from .oracle import amc_brute_force
from .semiring import DEFAULT_SEED, builtin, canonical_labeling, check_axioms, parse_labeling
from .values import format_value


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("AMC_SEED")
    return int(env) if env else DEFAULT_SEED


def _semiring_params(args):
    params = {}
    if getattr(args, "k", None) is not None:
        params["k"] = args.k
    if getattr(args, "grad_var", None) is not None:
        params["grad_var"] = args.grad_var
    if getattr(args, "order", None):
        params["order"] = tuple(int(v) for v in args.order.split(","))
    return params


def _load_task(args, variable_count):
    """Resolve (descriptor, labeling) from --labels and/or --semiring."""
    if args.labels:
        desc, lab = parse_labeling(Path(args.labels).read_text())
        if args.semiring and normalize_name(args.semiring) != desc.name:
            raise AmcError("--semiring %s conflicts with labeling file (%s)"
                           % (args.semiring, desc.name))
        if lab.variable_count < variable_count:
            raise AmcError("labeling covers %d of %d circuit variables"
                           % (lab.variable_count, variable_count))
        return desc, lab
    if not args.semiring:
        raise AmcError("needs --semiring or --labels")
    params = _semiring_params(args)
    if args.semiring.strip().lower() == "obdd" and "order" not in params:
        params["order"] = tuple(range(1, variable_count + 1))
    desc = builtin(args.semiring, **params)
    lab = desc.default_labeling(variable_count)
    if lab is None:
        raise AmcError("%s labels are free inputs; provide --labels FILE"
                       % desc.name)
    return desc, lab


def _emit(args, record, human_lines):
    if args.json:
        print(json.dumps(record))
    else:
        for line in human_lines:
            print(line)


def _value_str(value, args, circuit_path):
    if isinstance(value, ObddRef):
        out = args.out or str(Path(circuit_path).with_suffix(".obdd.nnf"))
        Path(out).write_text(write_nnf(obdd_to_circuit(
            value, value.store.order[-1] if value.store.order else 0)))
        return out
    return format_value(value)


def cmd_eval(args):
    circuit = parse_nnf(Path(args.circuit).read_text())
    desc, lab = _load_task(args, circuit.variable_count)
    try:
        value, note = evaluate_checked(circuit, desc, lab, mode=args.mode,
                                       extend=not args.no_extend,
                                       budget=args.budget)
    except UnsoundError as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return 1
    rendered = _value_str(value, args, args.circuit)
    record = {"value": rendered, "class": note.detected_class,
              "required": note.required_class, "status": note.status,
              "extended": list(note.extended_vars),
              "warnings": list(note.warnings)}
    lines = ["value: %s" % rendered,
             "class: %s" % note.detected_class,
             "required: %s" % note.required_class,
             "status: %s" % note.status]
    if note.extended_vars:
        lines.append("extended: %s" % ",".join(map(str, note.extended_vars)))
    for warning in note.warnings:
        lines.append("warning: %s" % warning)
    _emit(args, record, lines)
    return 0


def cmd_check(args):
    circuit = parse_nnf(Path(args.circuit).read_text())
    report = classify_circuit(circuit, budget=args.budget)

    def yesno(flag, witness, render):
        if flag is None:
            return "undecided (budget)"
        if flag:
            return "yes"
        return "no (%s)" % render(witness)

    lines = [
        "decomposable: %s" % yesno(
            report.decomposable, report.decomposable_witness,
            lambda w: "AND node %d shares variable %d between children %d "
                      "and %d" % (w.and_node, w.variable, w.child_a,
                                  w.child_b)),
        "deterministic: %s" % yesno(
            report.deterministic, report.deterministic_witness,
            lambda w: "OR node %d children %d and %d share model %s"
                      % (w.or_node, w.child_a, w.child_b,
                         " ".join(map(str, w.model)))),
        "smooth: %s" % yesno(
            report.smooth, report.smooth_witness,
            lambda w: "OR node %d children %d and %d differ on variable %d"
                      % (w.or_node, w.child_a, w.child_b, w.variable)),
        "class: %s%s" % (report.qualifier, report.class_label),
    ]
    record = {"decomposable": report.decomposable,
              "deterministic": report.deterministic,
              "smooth": report.smooth,
              "class": report.qualifier + report.class_label}
    _emit(args, record, lines)
    return 0


def cmd_classify(args):
    params = _semiring_params(args)
    if args.semiring.strip().lower() == "obdd" and "order" not in params:
        params["order"] = tuple(range(1, args.vars + 1))
    if args.semiring.strip().lower() == "grad" and "grad_var" not in params:
        params["grad_var"] = 1
    desc = builtin(args.semiring, **params)
    if args.labels:
        desc, lab = parse_labeling(Path(args.labels).read_text())
    else:
        lab = canonical_labeling(desc, args.vars)
    profile = task_profile_of(desc, lab)
    required = required_circuit_class(profile)
    lines = [
        "semiring: %s" % desc.name,
        "plus-idempotent: %s" % ("yes" if profile.plus_idempotent else "no"),
        "neutral: %s" % ("yes" if profile.pair_neutral else "no"),
        "times-idempotent-consistency-preserving: %s"
        % ("yes" if profile.times_idempotent_consistency_preserving
           else "no"),
        "required: %s" % required.name,
    ]
    record = {"semiring": desc.name,
              "plus_idempotent": profile.plus_idempotent,
              "neutral": profile.pair_neutral,
              "times_icp": profile.times_idempotent_consistency_preserving,
              "required": required.name}
    _emit(args, record, lines)
    return 0


def cmd_compile(args):
    cnf = parse_dimacs(Path(args.cnf).read_text())
    order = None
    if args.order:
        order = tuple(int(v) for v in args.order.split(","))
    circuit = compile_cnf_to_sddnnf(cnf, order)
    Path(args.out).write_text(write_nnf(circuit))
    for notice in cnf.notices:
        print("notice: %s" % notice, file=sys.stderr)
    record = {"nodes": len(circuit.nodes),
              "variables": circuit.variable_count, "wrote": args.out}
    _emit(args, record, ["nodes: %d" % len(circuit.nodes),
                         "variables: %d" % circuit.variable_count,
                         "wrote: %s" % args.out])
    return 0


def cmd_verify(args):
    circuit = parse_nnf(Path(args.circuit).read_text())
    desc, lab = _load_task(args, circuit.variable_count)
    got = evaluate(circuit, desc, lab)
    want = amc_brute_force(circuit, desc, lab, budget=args.budget)
    match = desc.values_close(got, want, tol=1e-9)
    lines = ["evaluate: %s" % _value_str(got, args, args.circuit),
             "oracle: %s" % _value_str(want, args, args.circuit),
             "match: %s" % ("yes" if match else "no")]
    record = {"evaluate": lines[0].split(": ", 1)[1],
              "oracle": lines[1].split(": ", 1)[1], "match": match}
    _emit(args, record, lines)
    return 0 if match else 1


def cmd_axioms(args):
    params = _semiring_params(args)
    if args.semiring.strip().lower() == "obdd" and "order" not in params:
        params["order"] = (1, 2, 3, 4)
    if args.semiring.strip().lower() == "grad" and "grad_var" not in params:
        params["grad_var"] = 1
    if args.semiring.strip().lower() == "kweight" and "k" not in params:
        params["k"] = 5
    desc = builtin(args.semiring, **params)
    report = check_axioms(desc, trials=args.trials, seed=_seed(args))
    lines = ["semiring: %s" % desc.name]
    for law in report.laws:
        if law.passed:
            lines.append("%s: pass" % law.law)
        else:
            lines.append("%s: FAIL witness=(%s)"
                         % (law.law, ", ".join(format_value(w)
                                               for w in law.witness)))
    record = {"semiring": desc.name, "trials": report.trials,
              "all_pass": report.all_pass,
              "failures": [law.law for law in report.failures()]}
    _emit(args, record, lines)
    return 0 if report.all_pass else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="amckit",
        description="Algebraic model counting over NNF circuits")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, circuit=False, semiring=False, budget=False):
        p.add_argument("--json", action="store_true",
                       help="machine-readable single-line output")
        p.add_argument("--seed", type=int, default=None)
        if circuit:
            p.add_argument("--circuit", required=True,
                           help="NNF circuit file (c2d format)")
        if semiring:
            p.add_argument("--semiring", default=None,
                           help="built-in semiring name")
            p.add_argument("--labels", default=None,
                           help="labeling file")
            p.add_argument("--k", type=int, default=None,
                           help="bound for kWEIGHT")
            p.add_argument("--grad-var", type=int, default=None,
                           dest="grad_var", help="gradient index for GRAD")
            p.add_argument("--order", default=None,
                           help="comma-separated variable order for OBDD")
        if budget:
            p.add_argument("--budget", type=int, default=24,
                           help="variable budget for exhaustive checks")

    p = sub.add_parser("eval", help="evaluate a circuit under a semiring")
    common(p, circuit=True, semiring=True, budget=True)
    p.add_argument("--mode", choices=("strict", "repair", "force"),
                   default="strict")
    p.add_argument("--no-extend", action="store_true",
                   help="do not account for labeled variables the circuit "
                        "never mentions")
    p.add_argument("--out", default=None,
                   help="output path for diagram-valued results")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="report circuit properties and class")
    common(p, circuit=True, budget=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("classify",
                       help="report a task's profile and required class")
    common(p, semiring=True)
    p.add_argument("--vars", type=int, default=3,
                   help="variable count for the canonical labeling")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("compile", help="compile DIMACS CNF to an sd-DNNF file")
    common(p)
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--order", default=None)
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("verify",
                       help="compare circuit evaluation against brute force")
    common(p, circuit=True, semiring=True, budget=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("axioms", help="randomized semiring law checks")
    common(p, semiring=True)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(fn=cmd_axioms)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (AmcError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
