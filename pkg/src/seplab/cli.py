"""The ``seplab`` command line.

Every subcommand prints one JSON report (schema "seplab-report/1") and exits
with 0 when a verdict was reached, 2 on input errors, 3 when an oracle check
or certificate check fails and 4 when a resource cap was hit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from seplab.monadic import (
    InsepCertificate, certificate_sides, explain_certificate, separability_formulas, separability_reps,
)
from seplab.presburger import FragmentError, ParseError, negate_qf, parse
from seplab.regsep import (
    RegsepCertificate, explain_regsep_certificate, prepare_pair, regsep, regsep_oracle_path,
)
from seplab.semilinear import formula_to_semilinear, rep_from_json
from seplab.vecnum import DimensionError, from_one_based
from seplab.zvass import (
    DeterminismError, MalformedRunError, ParikhAutomaton, ResourceCapError, ZVass, emptiness,
    pa_complement_det, pa_to_zvass, run_word,
)

SCHEMA = "seplab-report/1"
EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_CAP = 0, 2, 3, 4


class InputError(Exception):
    pass


def _read(path: str, digests: dict, name: str) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    digests[name] = {"path": path, "sha256": hashlib.sha256(data).hexdigest()}
    return data.decode("utf-8")


def _load_json(text: str, path: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e


def _load_set(path: str, kind: str, digests: dict, name: str):
    """A Formula (kind "formula") or a set representation (kind "rep"); "auto" picks by content."""
    text = _read(path, digests, name)
    if kind == "auto":
        kind = "rep" if text.lstrip().startswith("{") else "formula"
    if kind == "formula":
        return parse(text)
    return rep_from_json(_load_json(text, path))


def _load_automaton(path: str, kind: str, digests: dict, name: str):
    data = _load_json(_read(path, digests, name), path)
    if kind == "auto":
        kind = "pa" if "targets" in data else "zvass"
    return ParikhAutomaton.from_json(data) if kind == "pa" else ZVass.from_json(data)


def _as_zvass(A) -> ZVass:
    return pa_to_zvass(A)[0] if isinstance(A, ParikhAutomaton) else A


# ---------------------------------------------------------------- subcommands


def _set_oracle(lhs, rhs, separable: bool, max_k: int) -> dict:
    from seplab.oracles import oracle_battery
    to_rep = lambda s: formula_to_semilinear(s) if hasattr(s, "free") else s  # noqa: E731
    return oracle_battery(to_rep(lhs), to_rep(rhs), separable, max_k=max_k)


def cmd_sep_semilinear(args, report: dict) -> int:
    digests = report["inputs"]
    lhs = _load_set(args.lhs, args.input, digests, "lhs")
    rhs = _load_set(args.rhs, args.input, digests, "rhs")
    if hasattr(lhs, "free") != hasattr(rhs, "free"):
        raise InputError("lhs and rhs must both be formulas or both be representations")
    if hasattr(lhs, "free"):
        v = separability_formulas(lhs, rhs)
    else:
        if lhs.dim != rhs.dim:
            raise InputError(f"dimension mismatch: {lhs.dim} vs {rhs.dim}")
        v = separability_reps(lhs, rhs)
    report["separable"] = v.separable
    if v.certificate is not None:
        report["certificate"] = v.certificate.to_json()
    if args.oracle_check:
        report["oracle_check"] = _set_oracle(lhs, rhs, v.separable, args.max_k)
        if report["oracle_check"]["violations"]:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_mondec(args, report: dict) -> int:
    f = parse(_read(args.formula, report["inputs"], "formula"))
    v = separability_formulas(f, negate_qf(f))
    report["decomposable"] = v.separable
    if v.certificate is not None:
        report["certificate"] = v.certificate.to_json()
    if args.oracle_check:
        report["oracle_check"] = _set_oracle(f, negate_qf(f), v.separable, args.max_k)
        if report["oracle_check"]["violations"]:
            return EXIT_VIOLATION
    return EXIT_OK


def _regular_pair(V1, V2, args, report: dict, key: str) -> int:
    V, I1, I2, _ = prepare_pair(V1, V2)
    v = regsep(V, I1, I2, workers=args.threads)
    report[key] = v.separable
    report["details"] = {"skeletons": v.details.get("skeletons")}
    if v.certificate is not None:
        report["certificate"] = v.certificate.to_json()
    if args.oracle_check:
        try:
            o = regsep_oracle_path(V, I1, I2)
            report["oracle_check"] = {"oracle_separable": o.separable,
                                      "violations": [] if o.separable == v.separable else ["oracle path disagrees"]}
        except ResourceCapError as e:
            report["oracle_check"] = {"skipped": str(e), "violations": []}
        if report["oracle_check"]["violations"]:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_sep_regular(args, report: dict) -> int:
    kind = "pa" if args.pa else "zvass" if args.zvass else "auto"
    A1 = _load_automaton(args.a1, kind, report["inputs"], "a1")
    A2 = _load_automaton(args.a2, kind, report["inputs"], "a2")
    return _regular_pair(_as_zvass(A1), _as_zvass(A2), args, report, "separable")


def _regularity_pair(P: ParikhAutomaton) -> tuple:
    if not P.deterministic:
        raise DeterminismError("regularity needs a deterministic Parikh automaton")
    return pa_to_zvass(P)[0], pa_to_zvass(pa_complement_det(P))[0]


def cmd_regularity(args, report: dict) -> int:
    P = _load_automaton(args.pa, "pa", report["inputs"], "pa")
    V1, V2 = _regularity_pair(P)
    return _regular_pair(V1, V2, args, report, "regular")


def cmd_empty(args, report: dict) -> int:
    A = _load_automaton(args.zvass, "auto", report["inputs"], "zvass")
    V = _as_zvass(A)
    if args.indices is None:
        I = range(V.dim)
    else:
        I = from_one_based(int(x) for x in args.indices.split(",") if x.strip())
    w = emptiness(V, I)
    report["empty"] = w is None
    if w is not None:
        report["witness"] = {"run": list(w.run), "word": list(run_word(V, w.run))}
    return EXIT_OK


def cmd_certify(args, report: dict) -> int:
    rep = _load_json(_read(args.report, report["inputs"], "report"), args.report)
    if rep.get("schema") != SCHEMA:
        raise InputError(f"not a {SCHEMA} report")
    cert = rep.get("certificate")
    if cert is None:
        raise InputError("report carries no certificate")
    sub = rep.get("subcommand")
    if cert.get("kind") == "regsep":
        c = RegsepCertificate.from_json(cert)
        if sub == "regularity":
            V1, V2 = _regularity_pair(_load_automaton(args.lhs, "pa", report["inputs"], "lhs"))
        else:
            if args.rhs is None:
                raise InputError("certify needs --rhs for a sep-regular report")
            V1 = _as_zvass(_load_automaton(args.lhs, "auto", report["inputs"], "lhs"))
            V2 = _as_zvass(_load_automaton(args.rhs, "auto", report["inputs"], "rhs"))
        V, I1, I2, _ = prepare_pair(V1, V2)
        fails = explain_regsep_certificate(V, I1, I2, c)
    else:
        c = InsepCertificate.from_json(cert)
        if sub == "mondec":
            lhs = parse(_read(args.lhs, report["inputs"], "lhs"))
            rhs = negate_qf(lhs)
        else:
            if args.rhs is None:
                raise InputError("certify needs --rhs for a sep-semilinear report")
            lhs = _load_set(args.lhs, "auto", report["inputs"], "lhs")
            rhs = _load_set(args.rhs, "auto", report["inputs"], "rhs")
        R, S = certificate_sides(c, lhs, rhs)
        fails = explain_certificate(c, R, S)
    report["verified"] = not fails
    report["failures"] = fails
    return EXIT_OK if not fails else EXIT_VIOLATION


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for oracle sampling (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent subproblems")
    common.add_argument("--oracle-check", action="store_true", help="cross-check the verdict with the oracles")
    common.add_argument("--max-k", type=int, default=8, help="largest k for the ~_k oracle")
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="seplab", description="Separability deciders for Presburger sets and Z-VASS.")
    subs = p.add_subparsers(dest="subcommand", required=True)
    s = subs.add_parser("sep-semilinear", parents=[common], help="recognizable separability of two sets")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--input", choices=("formula", "rep", "auto"), default="auto")
    s.set_defaults(func=cmd_sep_semilinear)
    s = subs.add_parser("mondec", parents=[common], help="monadic decomposability of a quantifier-free formula")
    s.add_argument("--formula", required=True)
    s.set_defaults(func=cmd_mondec)
    s = subs.add_parser("sep-regular", parents=[common], help="regular separability of two automata")
    s.add_argument("--a1", required=True)
    s.add_argument("--a2", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--pa", action="store_true", help="inputs are Parikh automata")
    g.add_argument("--zvass", action="store_true", help="inputs are Z-VASS")
    s.set_defaults(func=cmd_sep_regular)
    s = subs.add_parser("regularity", parents=[common], help="regularity of a deterministic Parikh automaton")
    s.add_argument("--pa", required=True)
    s.set_defaults(func=cmd_regularity)
    s = subs.add_parser("empty", parents=[common], help="emptiness of a Z-VASS language")
    s.add_argument("--zvass", required=True)
    s.add_argument("--indices", help="comma-separated 1-based coordinates that must end at zero (default all)")
    s.set_defaults(func=cmd_empty)
    s = subs.add_parser("certify", parents=[common], help="re-check the certificate in a report")
    s.add_argument("--report", required=True)
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs")
    s.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report: dict = {"schema": SCHEMA, "command": ["seplab"] + argv, "subcommand": args.subcommand, "inputs": {}}
    t0 = time.perf_counter()
    try:
        code = args.func(args, report)
    except (InputError, ParseError, FragmentError, DimensionError, DeterminismError, MalformedRunError,
            ValueError, KeyError, TypeError) as e:
        report["error"] = f"{type(e).__name__}: {e}"
        code = EXIT_INPUT
    except ResourceCapError as e:
        report["error"] = f"resource cap: {e}"
        code = EXIT_CAP
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    report["exit_code"] = code
    text = json.dumps(report, indent=2, sort_keys=False)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
