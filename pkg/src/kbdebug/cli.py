"""Command line front end.

Subcommands: ``debug`` (batch enumeration), ``interactive`` (terminal
question loop), ``simulate`` (scripted answerer, prints the trace) and
``serve`` (HTTP API).  Exit codes: 1 for parse/admissibility problems, 2
for bad flags.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .dpi import DPI, DpiError, is_admissible, parse_dpi
from .formulas import render
from .interactive import (
    ScriptedOracle,
    SessionError,
    SessionParams,
    SessionState,
    best_candidate,
    compute_leading,
    prepare_query,
    record_answer,
    session_done,
)
from .dpi import solution_kb
from .hstree import non_interactive_debug
from .probability import (
    ProbabilityError,
    default_adaptation_factor,
    formula_fault_probs,
    parse_element_probs,
    prior_diag_probs,
    raw_formula_fault_probs,
    uniform_formula_probs,
)
from .query import QueryError


def _load_dpi(path: str) -> DPI:
    text = Path(path).read_text(encoding="utf-8")
    dpi = parse_dpi(text)
    if not is_admissible(dpi):
        raise DpiError("instance admits no diagnosis (check background and test cases)")
    return dpi


def _load_probs(dpi: DPI, args) -> dict[int, float]:
    if args.probs and args.uniform:
        raise SystemExit(_usage_error("--uniform and --probs are mutually exclusive"))
    if args.probs:
        elem = parse_element_probs(Path(args.probs).read_text(encoding="utf-8"))
        raw = raw_formula_fault_probs(dpi.kb, elem)
        c = args.adaptation if args.adaptation is not None else default_adaptation_factor(raw)
        return formula_fault_probs(dpi.kb, elem, c)
    return uniform_formula_probs(dpi.kb)


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _diag_str(d) -> str:
    return "[" + " ".join(str(i) for i in sorted(d)) + "]"


def _session_params(args) -> SessionParams:
    return SessionParams(
        mode=args.mode,
        sigma=args.sigma,
        n_min=args.nmin,
        n_max=args.nmax if args.nmax is not None else math.inf,
        timeout_s=args.timeout_ms / 1000.0,
        pool_size=args.pool_size,
        measure=args.measure.upper(),
    )


def cmd_debug(args) -> int:
    dpi = _load_dpi(args.dpi)
    probs = _load_probs(dpi, args)
    n_min = math.inf if args.all else args.nmin
    n_max = math.inf if args.all or args.nmax is None else args.nmax
    diagnoses = non_interactive_debug(
        dpi, probs, timeout_s=args.timeout_ms / 1000.0, n_min=n_min, n_max=n_max, auto=args.auto
    )
    dist = prior_diag_probs(diagnoses, probs)
    for d in diagnoses:
        print(f"{_diag_str(d)} p={dist[d]:.4f}")
    return 0


def _drive_interactively(session: SessionState, ask) -> list:
    while True:
        compute_leading(session)
        if session_done(session):
            d_max, _ = best_candidate(session)
            return solution_kb(session.dpi, d_max, tuple(session.new_positive), session.params.mode)
        query, pt = prepare_query(session)
        answer = ask(query, pt, session)
        if answer is None:  # skipped
            continue
        record_answer(session, query, pt, answer)


def cmd_interactive(args) -> int:
    dpi = _load_dpi(args.dpi)
    probs = _load_probs(dpi, args)
    session = SessionState(dpi=dpi, probs=probs, params=_session_params(args))

    def ask(query, pt, session):
        print("Should the intended KB entail all of:")
        for f in query:
            print(f"    {render(f)}")
        while True:
            reply = input("[y]es / [n]o / [s]kip > ").strip().lower()
            if reply in ("y", "yes"):
                return True
            if reply in ("n", "no"):
                return False
            if reply in ("s", "skip"):
                prepare_query(session)
                return None

    solution = _drive_interactively(session, ask)
    print("solution KB:")
    for f in solution:
        print(f"    {render(f)}")
    return 0


def cmd_simulate(args) -> int:
    dpi = _load_dpi(args.dpi)
    probs = _load_probs(dpi, args)
    try:
        target = frozenset(int(part) for part in args.true_diag.split(",") if part.strip())
    except ValueError:
        return _usage_error(f"--true-diag expects comma-separated ids, got {args.true_diag!r}")
    if not target <= dpi.kb.ids():
        return _usage_error(f"--true-diag ids {sorted(target)} outside the KB")
    session = SessionState(dpi=dpi, probs=probs, params=_session_params(args))
    oracle = ScriptedOracle(target)
    n_queries = 0
    while True:
        compute_leading(session)
        print("leading:", " ".join(_diag_str(d) for d in session.leading))
        if session_done(session):
            d_max, p = best_candidate(session)
            print(f"final diagnosis: {_diag_str(d_max)} p={p:.4f} after {n_queries} queries")
            solution = solution_kb(session.dpi, d_max, tuple(session.new_positive), session.params.mode)
            print("solution KB:")
            for f in solution:
                print(f"    {render(f)}")
            return 0
        query, pt = prepare_query(session)
        answer = oracle.answer(query, session)
        n_queries += 1
        rendered = ", ".join(render(f) for f in query)
        print(f"Q{n_queries}: {{{rendered}}} -> {str(answer).lower()}")
        record_answer(session, query, pt, answer)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ui_dir = args.ui_dir if args.ui_dir and Path(args.ui_dir).is_dir() else None
    app = create_app(snapshot_path=args.snapshot_file, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_common(parser: argparse.ArgumentParser, with_session: bool) -> None:
    parser.add_argument("dpi", help="problem instance file")
    parser.add_argument("--uniform", action="store_true", help="equal fault probabilities")
    parser.add_argument("--probs", metavar="FILE", help="element probability file")
    parser.add_argument("--adaptation", type=float, default=None, help="probability adaptation factor")
    parser.add_argument("--timeout-ms", dest="timeout_ms", type=int, default=1000)
    parser.add_argument("--nmin", type=int, default=2)
    parser.add_argument("--nmax", type=int, default=None)
    if with_session:
        parser.add_argument("--mode", choices=("static", "dynamic"), default="static")
        parser.add_argument("--sigma", type=float, default=0.0)
        parser.add_argument("--pool-size", dest="pool_size", type=int, default=1)
        parser.add_argument("--measure", choices=("ent", "spl", "ENT", "SPL"), default="ent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kbdebug", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_debug = sub.add_parser("debug", help="batch diagnosis enumeration")
    _add_common(p_debug, with_session=False)
    p_debug.add_argument("--all", action="store_true", help="enumerate every minimal diagnosis")
    p_debug.add_argument("--auto", action="store_true", help="return only the best diagnosis")
    p_debug.set_defaults(func=cmd_debug)

    p_inter = sub.add_parser("interactive", help="terminal question loop")
    _add_common(p_inter, with_session=True)
    p_inter.set_defaults(func=cmd_interactive)

    p_sim = sub.add_parser("simulate", help="scripted user, prints the trace")
    _add_common(p_sim, with_session=True)
    p_sim.add_argument("--true-diag", dest="true_diag", required=True, metavar="i,j,...")
    p_sim.set_defaults(func=cmd_simulate)

    p_serve = sub.add_parser("serve", help="start the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--snapshot-file", dest="snapshot_file", default=None,
                         help="dump session snapshots here on shutdown")
    p_serve.add_argument("--ui-dir", dest="ui_dir", default="frontend/dist",
                         help="serve a built frontend from this directory under /ui")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (DpiError, ProbabilityError, SessionError, QueryError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
