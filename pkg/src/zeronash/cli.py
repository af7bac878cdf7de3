"""Command-line interface.

Exit codes: 0 feasible/pass, 1 infeasible/fail, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import (
    EnumerationLimitError,
    min_error,
    solve_strong_zero_error,
    solve_zero_error,
)
from .game import (
    BayesianGame,
    GameError,
    available_games,
    compute_pure_nash,
    load_game,
    registry_get,
    serialize_game,
    uniform_prior,
)
from .hardy import SCAN_MIN_PROB, SCAN_TOL_ZERO, hardy_scan, scan_to_csv
from .noise import advantage_sweep
from .quantum import (
    DEFAULT_STRATEGY,
    STRATEGIES,
    HardyParams,
    StrategyError,
    build_strategy,
    verify_strong_zero_error,
    verify_zero_error,
)
from .tensor import DimensionError


@dataclass
class CommandOutcome:
    exit_code: int
    report: str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _game_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("name", nargs="?", help="built-in game name")
    p.add_argument("--game-file", help="path to a game-definition file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")

    parser = _Parser(prog="zeronash", description="Zero-error Nash coordination checks.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    games = sub.add_parser("games", help="inspect and check games", parents=[common])
    gsub = games.add_subparsers(dest="action", parser_class=_Parser)
    gsub.add_parser("list", parents=[common])
    show = gsub.add_parser("show", parents=[common])
    _game_args(show)
    check = gsub.add_parser("check", parents=[common])
    _game_args(check)
    check.add_argument("--classical", action="store_true", required=True)
    check.add_argument("--strong", action="store_true")
    check.add_argument("--prior", choices=["uniform"])

    nash = sub.add_parser("nash", help="pure Nash equilibria of one stage game",
                          parents=[common])
    _game_args(nash)
    nash.add_argument("--type-profile", required=True)

    quantum = sub.add_parser("quantum", parents=[common])
    qsub = quantum.add_subparsers(dest="action", parser_class=_Parser)
    verify = qsub.add_parser("verify", parents=[common])
    _game_args(verify)
    verify.add_argument("--strategy", choices=STRATEGIES)
    verify.add_argument("--gamma", type=float, default=np.pi / 3)
    verify.add_argument("--delta", type=float, default=np.pi / 3)
    verify.add_argument("--eta", type=float, default=0.0)
    verify.add_argument("--kappa", type=float, default=0.0)
    verify.add_argument("--mode", choices=["solved", "literal-x"], default="solved")
    verify.add_argument("--strong", action="store_true")
    verify.add_argument("--tol", type=float, default=1e-12)
    verify.add_argument("--min-prob", type=float,
                        help="positivity threshold for --strong (default 10*tol)")

    hardy = sub.add_parser("hardy", parents=[common])
    hsub = hardy.add_subparsers(dest="action", parser_class=_Parser)
    scan = hsub.add_parser("scan", parents=[common])
    scan.add_argument("--gamma-steps", type=int, required=True)
    scan.add_argument("--delta-steps", type=int, required=True)
    scan.add_argument("--eta", type=float, default=0.0)
    scan.add_argument("--kappa", type=float, default=0.0)
    scan.add_argument("--mode", choices=["solved", "literal-x"], default="solved")
    scan.add_argument("--tol", type=float, default=SCAN_TOL_ZERO)
    scan.add_argument("--min-prob", type=float, default=SCAN_MIN_PROB)
    scan.add_argument("--out")

    noise = sub.add_parser("noise", parents=[common])
    nsub = noise.add_subparsers(dest="action", parser_class=_Parser)
    sweep = nsub.add_parser("sweep", parents=[common])
    _game_args(sweep)
    sweep.add_argument("--strategy", choices=STRATEGIES)
    sweep.add_argument("--grid", default="21x21")
    sweep.add_argument("--out")
    floor = nsub.add_parser("floor", parents=[common])
    _game_args(floor)
    return parser


def _load(args) -> BayesianGame:
    if args.game_file and args.name:
        raise UsageError("give either a game name or --game-file, not both")
    if args.game_file:
        return load_game(args.game_file)
    if not args.name:
        raise UsageError("a game name or --game-file is required")
    return registry_get(args.name)


def _emit(args, data: dict, text: str) -> str:
    if args.json:
        return json.dumps(data, indent=2, sort_keys=False) + "\n"
    return text


def _strategy_for(args, game: BayesianGame):
    name = args.strategy or DEFAULT_STRATEGY.get(game.name)
    if name is None:
        raise UsageError(f"no default strategy for game {game.name}; pass --strategy")
    hardy = None
    if name == "hardy":
        hardy = HardyParams(getattr(args, "gamma", np.pi / 3), getattr(args, "delta", np.pi / 3),
                            getattr(args, "eta", 0.0), getattr(args, "kappa", 0.0),
                            getattr(args, "mode", "solved"))
    return build_strategy(name, hardy)


def _games(args) -> CommandOutcome:
    if args.action == "list":
        rows = []
        for name in available_games():
            g = registry_get(name)
            rows.append({"name": name, "players": g.n_players,
                         "type_profiles": len(g.allowed)})
        text = "".join(f"{r['name']}\t{r['players']} players\t{r['type_profiles']} type profiles\n"
                       for r in rows)
        return CommandOutcome(0, _emit(args, {"games": rows}, text))
    if args.action == "show":
        g = _load(args)
        doc = serialize_game(g)
        return CommandOutcome(0, _emit(args, {"game": g.name, "document": doc}, doc))
    if args.action == "check":
        g = _load(args)
        if args.prior == "uniform":
            g = g.with_prior(uniform_prior(g.type_spaces))
        report = solve_strong_zero_error(g) if args.strong else solve_zero_error(g)
        data = report.to_dict(g)
        verdict = data["verdict"]
        lines = [
            f"game: {g.name}",
            f"check: {data['check']} (classical)",
            f"verdict: {verdict}",
            f"profiles enumerated: {report.profiles_enumerated}",
            f"zero-error profiles: {report.zero_error_found}",
        ]
        if report.empty_type_profiles:
            lines.append("empty allowed sets at: " +
                         ", ".join(" ".join(tp) for tp in report.empty_type_profiles))
        if report.witness is not None:
            lines.append(f"witness: {json.dumps(data['witness'])}")
        if args.strong and report.uncovered:
            lines.append("uncovered: " + ", ".join(
                f"({' '.join(tp)}) -> ({','.join(ap)})" for tp, ap in report.uncovered))
        if report.certificates:
            lines.append(f"certificates: {len(report.certificates)} "
                         "(first failing type profile per profile; see --json)")
        lines.append("note: verdict is the same under any full-support prior")
        return CommandOutcome(0 if report.feasible else 1,
                              _emit(args, data, "\n".join(lines) + "\n"))
    raise UsageError("games: expected one of list, show, check")


def _nash(args) -> CommandOutcome:
    g = _load(args)
    tp = tuple(t.strip() for t in args.type_profile.split(","))
    if tp not in g.allowed:
        raise UsageError(f"unknown type profile {args.type_profile!r} for game {g.name}")
    eq = compute_pure_nash(g.stage_game(tp))
    index = [{a: k for k, a in enumerate(acts)} for acts in g.action_spaces]
    ordered = sorted(eq, key=lambda ap: [index[i][a] for i, a in enumerate(ap)])
    matches = eq == set(g.allowed[tp])
    data = {"game": g.name, "type_profile": list(tp),
            "equilibria": [list(ap) for ap in ordered],
            "matches_allowed_set": matches}
    text = (f"game: {g.name}\ntype profile: {' '.join(tp)}\n"
            f"pure Nash equilibria ({len(ordered)}): "
            + " ".join(",".join(ap) for ap in ordered)
            + f"\nmatches allowed set: {'yes' if matches else 'no'}\n")
    return CommandOutcome(0, _emit(args, data, text))


def _quantum(args) -> CommandOutcome:
    if args.action != "verify":
        raise UsageError("quantum: expected 'verify'")
    g = _load(args)
    s = _strategy_for(args, g)
    if args.strong:
        r = verify_strong_zero_error(s, g, args.tol, args.min_prob)
    else:
        r = verify_zero_error(s, g, args.tol)
    data = r.to_dict()
    lines = [f"game: {g.name}", f"strategy: {s.name}", f"check: {data['check']}",
             f"verdict: {data['verdict']}", f"max leak: {r.max_leak:.3e} (tol {r.tol:g})"]
    for tp, leak in r.leaks.items():
        lines.append(f"  leak {' '.join(tp)}: {leak:.3e}")
    if r.strong:
        tp, ap = r.min_allowed_at
        lines.append(f"min allowed probability: {r.min_allowed:.6g} at "
                     f"({' '.join(tp)}) -> ({','.join(ap)}) "
                     f"(threshold {r.positivity_threshold:g})")
    if s.name.startswith("hardy"):
        w = r.distributions[("x1", "y1")][("1", "1")]
        data["witness_probability"] = w
        lines.append(f"witness P((1,1)|x1,y1): {w:.6g}")
    return CommandOutcome(0 if r.passed else 1, _emit(args, data, "\n".join(lines) + "\n"))


def _hardy(args) -> CommandOutcome:
    if args.action != "scan":
        raise UsageError("hardy: expected 'scan'")
    if args.gamma_steps < 1 or args.delta_steps < 1:
        raise UsageError("--gamma-steps and --delta-steps must be positive")
    pts = hardy_scan(args.gamma_steps, args.delta_steps, args.eta, args.kappa, args.mode,
                     args.tol, args.min_prob)
    csv_text = scan_to_csv(pts)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8", newline="")
    best = max(pts, key=lambda p: p.witness)
    passed = sum(p.passed for p in pts)
    data = {
        "points": len(pts),
        "passed": passed,
        "best": {"gamma": best.gamma, "delta": best.delta, "witness_probability": best.witness},
        "rows": [{"gamma": p.gamma, "delta": p.delta, "witness_probability": p.witness,
                  "schmidt_min": p.schmidt_min, "max_leak": p.max_leak,
                  "min_allowed_probability": p.min_allowed,
                  "verdict": "pass" if p.passed else "fail"} for p in pts],
    }
    if args.out:
        text = (f"points: {len(pts)}\npassed: {passed}\n"
                f"best witness: {best.witness:.12g} at gamma={best.gamma:.12g} "
                f"delta={best.delta:.12g}\nwrote {args.out}\n")
    else:
        text = csv_text
    return CommandOutcome(0, _emit(args, data, text))


def _noise(args) -> CommandOutcome:
    g = _load(args)
    if args.action == "floor":
        f = min_error(g)
        data = {"game": g.name, "classical_min_error": str(f), "float": float(f)}
        return CommandOutcome(0, _emit(args, data, f"{g.name} classical min error: {f}\n"))
    if args.action != "sweep":
        raise UsageError("noise: expected 'sweep' or 'floor'")
    try:
        n_s, n_m = (int(v) for v in args.grid.lower().split("x"))
    except ValueError:
        raise UsageError(f"--grid expects NxM, got {args.grid!r}") from None
    s = _strategy_for(args, g)
    try:
        result = advantage_sweep(g, s, (n_s, n_m))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    csv_text = result.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8", newline="")
    n_adv = sum(r.advantage for r in result.rows)
    data = {"game": g.name, "strategy": s.name, "grid": [n_s, n_m],
            "classical_floor": str(result.classical_floor), "rows": len(result.rows),
            "advantage_cells": n_adv, "out": args.out}
    if args.out:
        text = (f"game: {g.name}\ngrid: {n_s}x{n_m}\nrows: {len(result.rows)}\n"
                f"classical floor: {result.classical_floor}\n"
                f"advantage cells: {n_adv}\nwrote {args.out}\n")
    else:
        text = csv_text
    return CommandOutcome(0, _emit(args, data, text))


_DISPATCH = {"games": _games, "nash": _nash, "quantum": _quantum, "hardy": _hardy,
             "noise": _noise}


def execute(argv: list[str]) -> CommandOutcome:
    parser = build_parser()
    out = io.StringIO()
    try:
        with redirect_stderr(out), redirect_stdout(out):
            args = parser.parse_args(argv)
    except UsageError as exc:
        return CommandOutcome(2, str(exc) + "\n")
    except SystemExit as exc:
        # --help
        return CommandOutcome(0 if exc.code == 0 else 2, out.getvalue())
    if args.command is None or getattr(args, "action", "") is None:
        return CommandOutcome(2, parser.format_usage())
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        return CommandOutcome(2, f"error: {exc}\n")
    except (GameError, StrategyError, DimensionError, EnumerationLimitError,
            OSError, ValueError) as exc:
        return CommandOutcome(2, f"error: {exc}\n")


def main(argv: list[str] | None = None) -> int:
    outcome = execute(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if outcome.exit_code != 2 else sys.stderr
    stream.write(outcome.report)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
