"""Command-line front end: identity verification runs and property suites.

    mcshane verify cusp      --rep markov:3,3,3      --tol 1e-8
    mcshane verify boundary  --rep markov:3,3,4      --tol 1e-6
    mcshane verify qf        --rep markov:3,3+0.1i   --tol 1e-6
    mcshane verify su21-cusp --rep embed:su21:markov:3,3,3
    mcshane verify bowditch  --rep monodromy:RL
    mcshane props crossratio --samples 1000 --seed 7
    mcshane props cocycle    --group su21

Exit codes: 0 pass, 2 residual above tolerance, 3 diverged/non-convergent,
64 usage error.  Every flag has an environment override MCSHANE_<NAME>
(e.g. MCSHANE_TOL); explicit flags win.  Identical (config, seed) produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import enumeration, identity, props
from .errors import McShaneError, UsageError

EXIT_OK = 0
EXIT_TOL = 2
EXIT_DIVERGED = 3
EXIT_USAGE = 64

_DEFAULTS = {
    "cusp": dict(tol=1e-8, threshold=1e6, route="closed"),
    "qf": dict(tol=1e-6, threshold=1e6, route="closed"),
    "boundary": dict(tol=1e-6, threshold=1e6, route="definitional"),
    "su21-cusp": dict(tol=1e-6, threshold=1e6, route="closed"),
    "bowditch": dict(tol=1e-2, threshold=1e120, route="closed"),
}

_LABELS = {
    "cusp": "cusp identity (McShane): 1 = sum of cusp gaps",
    "qf": "quasi-Fuchsian cusp identity (complex lengths): 1 = sum of cusp gaps",
    "boundary": "boundary identity (generalized McShane): period(alpha) = sum of gaps",
    "su21-cusp": "C-Fuchsian cusp identity in SU(2,1): 1 = sum of cusp gaps",
    "bowditch": "mapping-torus vanishing identity (Bowditch): 0 = orbit sum",
}


def _env(name: str, default):
    raw = os.environ.get(f"MCSHANE_{name}")
    if raw is None:
        return default
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int) and not isinstance(default, bool):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mcshane", add_help=True)
    sub = ap.add_subparsers(dest="command")

    v = sub.add_parser("verify", help="run an identity verification")
    v.add_argument("identity", choices=sorted(_DEFAULTS))
    v.add_argument("--rep", default=_env("REP", None))
    v.add_argument("--tol", type=float, default=_env("TOL", None))
    v.add_argument("--trace-threshold", type=float, default=_env("TRACE_THRESHOLD", None))
    v.add_argument("--depth", type=int, default=_env("DEPTH", 200_000),
                   help="term budget (max summed terms)")
    v.add_argument("--route", choices=["definitional", "closed", "both"],
                   default=_env("ROUTE", None))
    v.add_argument("--format", choices=["json", "csv", "text"],
                   default=_env("FORMAT", "text"))
    v.add_argument("--seed", type=int, default=_env("SEED", 0))
    v.add_argument("--threads", type=int, default=_env("THREADS", 1))
    v.add_argument("--mod2pi", action="store_true",
                   help="pass when the 2-pi-reduced residual meets the tolerance")
    v.add_argument("--out", default=_env("OUT", None))

    p = sub.add_parser("props", help="run a sampled property suite")
    p.add_argument("suite", choices=sorted(props.ALL_SUITES))
    p.add_argument("--samples", type=int, default=_env("SAMPLES", 1000))
    p.add_argument("--seed", type=int, default=_env("SEED", 7))
    p.add_argument("--group", choices=["sl2c", "su21", "both"],
                   default=_env("GROUP", "both"))
    p.add_argument("--format", choices=["json", "text"], default=_env("FORMAT", "text"))
    p.add_argument("--out", default=_env("OUT", None))
    return ap


def _validate_rep(command: str, rep: enumeration.Representation) -> enumeration.Representation:
    if command in ("cusp", "qf"):
        if rep.target not in (enumeration.SL2R, enumeration.SL2C) or not rep.is_cusp:
            raise UsageError(f"{command} run needs a cusped SL(2) representation, got {rep.spec}")
    elif command == "boundary":
        if rep.is_cusp:
            raise UsageError("boundary run needs a hyperbolic boundary (non-cusp triple)")
    elif command == "su21-cusp":
        if rep.flavor == enumeration.FUCHSIAN:
            rep = enumeration.embed_cfuchsian(rep)
        if rep.flavor != enumeration.CFUCHSIAN or not rep.is_cusp:
            raise UsageError("su21-cusp run needs an embed:su21:markov:... cusp representation")
    elif command == "bowditch":
        if rep.flavor != enumeration.FIBERED:
            raise UsageError("bowditch run needs a monodromy:... representation")
    return rep


def _cmd_verify(args) -> int:
    if not args.rep:
        raise UsageError("--rep is required")
    defaults = _DEFAULTS[args.identity]
    tol = args.tol if args.tol is not None else defaults["tol"]
    threshold = (args.trace_threshold if args.trace_threshold is not None
                 else defaults["threshold"])
    route = args.route if args.route is not None else defaults["route"]
    rep = _validate_rep(args.identity, enumeration.parse_rep_spec(args.rep))
    policy = identity.ExpansionPolicy(
        trace_threshold=threshold, max_terms=args.depth, route=route,
        threads=args.threads,
    )
    if args.identity in ("cusp", "qf"):
        report = identity.sum_cusp_identity(rep, tol, policy, seed=args.seed)
    elif args.identity == "su21-cusp":
        report = identity.sum_cusp_identity(rep, tol, policy, seed=args.seed)
    elif args.identity == "boundary":
        report = identity.sum_boundary_identity(rep, tol, policy, seed=args.seed)
    else:
        report = identity.sum_mapping_torus(rep, tol, policy, seed=args.seed)

    chunks = []
    if args.format == "text":
        chunks.append(_header(args, tol, threshold, route))
        chunks.append(f"verifies: {_LABELS[args.identity]}\n")
        chunks.append(report.to_text())
    elif args.format == "json":
        chunks.append(report.to_json() + "\n")
    else:
        chunks.append(report.to_csv())
    _emit("".join(chunks), args.out)

    if report.diverged:
        return EXIT_DIVERGED
    if report.passes(tol, mod2pi=args.mod2pi):
        return EXIT_OK
    return EXIT_TOL


def _header(args, tol, threshold, route) -> str:
    cfg = (f"command=verify:{args.identity} rep={args.rep} tol={tol:g} "
           f"trace-threshold={threshold:g} depth={args.depth} route={route} "
           f"format={args.format} seed={args.seed} threads={args.threads} "
           f"mod2pi={args.mod2pi}")
    return f"mcshane {cfg}\n"


def _cmd_props(args) -> int:
    results = props.ALL_SUITES[args.suite](args.samples, args.seed, args.group)
    lines = [
        f"mcshane command=props:{args.suite} samples={args.samples} "
        f"seed={args.seed} group={args.group}"
    ]
    ok = True
    if args.format == "json":
        import json as _json

        payload = [
            {"name": r.name, "worst": float(f"{r.worst:.17g}"), "tol": r.tol,
             "samples": r.samples, "passed": r.passed}
            for r in results
        ]
        _emit(_json.dumps(payload, separators=(",", ":")) + "\n", args.out)
        ok = all(r.passed for r in results)
    else:
        for r in results:
            ok &= r.passed
            lines.append(
                f"{r.name}: worst={r.worst:.17g} tol={r.tol:g} "
                f"samples={r.samples} {'PASS' if r.passed else 'FAIL'}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_TOL


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_props(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except McShaneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
