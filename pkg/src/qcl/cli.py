"""Command-line interface: ``qcl state|op|map|suite``.

Documents are read from file paths, or from standard input when a path is
``-`` or no paths are given (then stdin holds one document or a JSON list of
them).  Results are JSON on standard output; diagnostics go to standard
error.  Exit codes: 0 success, 1 a suite proposition failed, 2 bad usage or
input.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import warnings

import numpy as np

from . import body as bd
from . import product as pr
from . import serialize as ser
from . import suite as st
from .config import Tolerances, tolerances
from .errors import QCLError
from .hermitian import BipartiteShape, bell_state, check_density, maximally_mixed, mix, pure_from_vector, werner_state

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

TOL_NAMES = [f.name for f in dataclasses.fields(Tolerances)]


class UsageError(Exception):
    pass


# input ---------------------------------------------------------------------


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def _documents(paths: list[str], n: int) -> list:
    if not paths:
        doc = _load("-")
        docs = doc if isinstance(doc, list) else [doc]
    else:
        if paths.count("-") > 1:
            raise UsageError("standard input can be used for one document only")
        docs = [_load(p) for p in paths]
    if len(docs) != n:
        raise UsageError(f"expected {n} input document(s), got {len(docs)}")
    return docs


def _body(doc) -> bd.Body:
    """Body from JSON; a bare matrix document stands for its singleton."""
    if isinstance(doc, dict) and "kind" not in doc and {"dim", "re", "im"} <= doc.keys():
        return bd.singleton(ser.matrix_from_json(doc))
    return ser.body_from_json(doc)


def _state(doc) -> np.ndarray:
    if isinstance(doc, dict) and doc.get("kind") == "vpoly" and len(doc.get("generators", [])) == 1:
        doc = doc["generators"][0]
    return check_density(ser.matrix_from_json(doc))


def _shape(args, required: bool = True) -> BipartiteShape | None:
    if args.shape is None:
        if required:
            raise UsageError("this map needs --shape d1xd2")
        return None
    try:
        return BipartiteShape.parse(args.shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QCL_SEED")
    if env is None:
        return 0
    try:
        seed = int(env)
    except ValueError:
        raise UsageError(f"QCL_SEED must be an integer, got {env!r}") from None
    if seed < 0:
        raise UsageError("QCL_SEED must be nonnegative")
    return seed


# commands ------------------------------------------------------------------


def _amplitudes(text: str) -> np.ndarray:
    text = text.strip()
    if not text.startswith("["):
        text = f"[{text}]"  # bare comma-separated reals
    try:
        vals = json.loads(text)
        arr = np.asarray(vals, dtype=float)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"amplitudes must be a JSON list of numbers or [re, im] pairs: {exc}") from exc
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim != 1:
        raise UsageError("amplitudes must be a JSON list of numbers or [re, im] pairs")
    return arr.astype(complex)


def cmd_state(args):
    spec = {"kind": args.kind}
    if args.spec is not None:
        spec = _load(args.spec)
        if not isinstance(spec, dict) or "kind" not in spec:
            raise UsageError("state spec must be a JSON object with a 'kind'")
    params = dict(spec.get("params", {}))
    kind = spec["kind"]
    if kind is None:
        raise UsageError("give a state kind or --spec")
    get = lambda name, flag: params[name] if name in params else getattr(args, flag)  # noqa: E731
    if kind == "maxmixed":
        d = get("dim", "dim")
        if d is None or int(d) < 1:
            raise UsageError("maxmixed needs a positive --dim")
        rho = maximally_mixed(int(d))
    elif kind == "bell":
        rho = bell_state()
    elif kind == "werner":
        p = get("p", "p")
        if p is None or not 0.0 <= float(p) <= 1.0:
            raise UsageError("werner needs --p in [0, 1]")
        rho = werner_state(float(p))
    elif kind == "pure":
        amps = params.get("amplitudes")
        if amps is not None:
            v = _amplitudes(json.dumps(amps))
        elif args.amplitudes is not None:
            v = _amplitudes(args.amplitudes)
        elif args.dim is not None and args.index is not None:
            if not 0 <= args.index < args.dim:
                raise UsageError("--index must lie in [0, dim)")
            v = np.zeros(args.dim, dtype=complex)
            v[args.index] = 1
        else:
            raise UsageError("pure needs --amplitudes or --dim with --index")
        if np.linalg.norm(v) == 0:
            raise UsageError("amplitudes must not all vanish")
        rho = pure_from_vector(v)
    elif kind == "mix":
        weights = params.get("weights", args.weights)
        if "states" in params:
            states = [ser.matrix_from_json(m) for m in params["states"]]
        else:
            states = [ser.matrix_from_json(doc) for doc in _documents(args.inputs, len(weights or []))]
        if not weights or len(weights) != len(states):
            raise UsageError("mix needs one weight per input state")
        rho = mix(zip(weights, states))
    else:
        raise UsageError(f"unknown state kind {kind!r}")
    return ser.matrix_to_json(rho), EXIT_OK


def cmd_op(args):
    op = args.op
    if op == "neg":
        (a,) = _documents(args.inputs, 1)
        return ser.body_to_json(bd.neg(_body(a))), EXIT_OK
    if op == "member":
        a, s = _documents(args.inputs, 2)
        B = _body(a)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", bd.InconclusiveMembershipWarning)
            v = bd.member_verdict(B, _state(s))
        for w in caught:
            print(f"qcl: warning: {w.message}", file=sys.stderr)
        return {"op": op, "result": bool(v.value), "exact": v.exact, "inconclusive": v.inconclusive,
                "body_kind": B.kind}, EXIT_OK
    a, b = (_body(x) for x in _documents(args.inputs, 2))
    if op == "meet":
        return ser.body_to_json(bd.meet(a, b)), EXIT_OK
    if op == "join":
        return ser.body_to_json(bd.join(a, b)), EXIT_OK
    if op == "leq":
        r = bd.leq(a, b, seed=_seed(args))
        return {"op": op, "result": r, "decided": r is not None, "left_kind": a.kind, "right_kind": b.kind}, EXIT_OK
    raise UsageError(f"unknown op {op!r}")


def cmd_map(args):
    m = args.map
    if m == "lambda":
        c1, c2 = (_body(x) for x in _documents(args.inputs, 2))
        shape = _shape(args, required=False) or BipartiteShape(c1.d, c2.d)
        return ser.body_to_json(pr.lambda_(c1, c2, shape)), EXIT_OK
    (doc,) = _documents(args.inputs, 1)
    C = _body(doc)
    shape = _shape(args)
    if m == "tau":
        t1, t2 = pr.tau(C, shape)
        return {"tau1": ser.body_to_json(t1), "tau2": ser.body_to_json(t2)}, EXIT_OK
    if m == "tau-inv":
        return ser.body_to_json(pr.tau_inv(C, shape, args.side)), EXIT_OK
    if m == "lambda-tau":
        return ser.body_to_json(pr.lambda_tau(C, shape)), EXIT_OK
    if m == "classify":
        return ser.report_to_json(pr.classify_proposition(C, shape)), EXIT_OK
    raise UsageError(f"unknown map {m!r}")


def cmd_suite(args):
    trials = {}
    for item in args.trials_for or []:
        name, _, n = item.partition("=")
        try:
            trials[name] = int(n)
        except ValueError:
            raise UsageError(f"--trials-for expects NAME=N, got {item!r}") from None
    names = {p.name for p in st.propositions()}
    unknown = (set(trials) | set(args.only or [])) - names
    if unknown:
        raise UsageError(f"unknown propositions: {', '.join(sorted(unknown))}")
    try:
        cfg = st.RunConfig(seed=_seed(args), shape=_shape(args, required=False) or BipartiteShape(2, 2),
                           trials=trials, default_trials=args.trials)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    def progress(entry):
        if args.verbose:
            mark = "pass" if entry["passed"] else "FAIL"
            print(f"{mark} {entry['name']} ({entry['trials']} trials, worst residual {entry['worst_residual']})",
                  file=sys.stderr)

    report = st.run_suite(cfg, only=args.only, progress=progress)
    if args.deterministic:
        report = st.strip_timing(report)
    return report, EXIT_OK if report["passed"] else EXIT_FAIL


# parser --------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _weights(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonneg_int, default=None, help="random seed (default: $QCL_SEED or 0)")
    common.add_argument("--shape", default=None, help="bipartite shape such as 2x2")
    common.add_argument("--out", default=None, help="write the JSON result to FILE")
    for name in TOL_NAMES:
        common.add_argument(f"--tol.{name}", dest=f"tol_{name}", type=_positive_float, default=None,
                            metavar="X", help=f"override the {name} tolerance")

    parser = argparse.ArgumentParser(prog="qcl", description="Convex-set quantum logic toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", parents=[common], help="construct a density matrix")
    p.add_argument("kind", nargs="?", choices=["pure", "bell", "werner", "maxmixed", "mix"])
    p.add_argument("--spec", help="JSON state spec {kind, params} from FILE or - for stdin")
    p.add_argument("--dim", type=_positive_int)
    p.add_argument("--index", type=int)
    p.add_argument("--amplitudes", help="comma-separated reals, or a JSON list of numbers or [re, im] pairs")
    p.add_argument("--p", type=float, help="Werner mixing weight")
    p.add_argument("--weights", type=_weights, help="comma-separated mixture weights")
    p.add_argument("inputs", nargs="*", default=[], help="state files for mix")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("op", parents=[common], help="lattice operations on bodies")
    p.add_argument("op", choices=["meet", "join", "neg", "leq", "member"])
    p.add_argument("inputs", nargs="*", help="body (and state) JSON files; - for stdin")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("map", parents=[common], help="product maps and classification")
    p.add_argument("map", choices=["lambda", "tau", "tau-inv", "lambda-tau", "classify"])
    p.add_argument("inputs", nargs="*", help="body JSON files; - for stdin")
    p.add_argument("--side", type=int, choices=[1, 2], default=1, help="factor for tau-inv")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("suite", parents=[common], help="run the property suite")
    p.add_argument("--trials", type=_positive_int, default=None, help="trial count for every proposition")
    p.add_argument("--trials-for", action="append", metavar="NAME=N", help="trial count for one proposition")
    p.add_argument("--only", nargs="+", metavar="NAME", help="run only these propositions")
    p.add_argument("--deterministic", action="store_true", help="omit timing fields from the report")
    p.add_argument("--verbose", "-v", action="store_true", help="one progress line per proposition on stderr")
    p.set_defaults(func=cmd_suite)
    return parser


def _emit(doc, out: str | None) -> None:
    text = ser.dumps(doc)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _error(kind: str, exc: BaseException, out: str | None) -> int:
    print(f"qcl: error: {exc}", file=sys.stderr)
    _emit({"error": {"type": kind, "message": str(exc)}}, None if out is None else out)
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # argparse stops filling positionals at the first option; later file names land here
    stray = [x for x in extra if x.startswith("-") and x != "-"]
    if stray or (extra and not hasattr(args, "inputs")):
        parser.error(f"unrecognized arguments: {' '.join(stray or extra)}")
    if extra:
        args.inputs = list(args.inputs or []) + extra
    overrides = {n: getattr(args, f"tol_{n}") for n in TOL_NAMES if getattr(args, f"tol_{n}") is not None}
    try:
        with tolerances(**overrides):
            doc, code = args.func(args)
    except UsageError as exc:
        return _error("UsageError", exc, args.out)
    except (QCLError, ValueError) as exc:
        return _error(type(exc).__name__, exc, args.out)
    _emit(doc, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
