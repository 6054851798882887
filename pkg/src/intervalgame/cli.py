"""Command-line entry points.

simulate  run a described match and write the transcript JSON
verify    recheck a transcript file, or sweep an exhaustive adversary tree
play      interactive Player I against a chosen strategy
serve     loopback JSON session service for the browser playground

Exit codes: 0 success; 1 verification failures; 2 unusable input (bad flags,
unparseable descriptors, missing or corrupted files); 3 a strategy emitted an
illegal move during simulate.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import List, Optional

from .engine import (
    CorruptedTranscriptError,
    LegalityError,
    Move,
    StrategyMoveError,
    Transcript,
    new_game,
    play_move,
    render_certificate,
    run_match,
)
from .orders import order_to_text, parse_order, parse_point, point_to_text
from .strategies import make_player_II, payoff_text_for_strategy
from .verifier import (
    check_transcript,
    default_probe_bounds,
    exhaustive_adversary,
    payoff_model_for_strategy,
)


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        order = parse_order(args.order)
        transcript = run_match(
            order, args.payoff, args.p1, args.p2, args.horizon, args.seed
        )
    except StrategyMoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.out:
            _write_or_print(exc.transcript.to_json_text(), args.out)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_or_print(transcript.to_json_text(), args.out)
    return 0


def _bounds_for(order, p2_text: str, probes: Optional[int]):
    model = payoff_model_for_strategy(order, p2_text)
    bounds = default_probe_bounds(order, model)
    if probes is not None:
        bounds = dataclasses.replace(bounds, max_denominator=probes)
    return bounds


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        if args.exhaustive:
            if not args.order or not args.p2:
                print(
                    "error: --exhaustive needs --order and --p2", file=sys.stderr
                )
                return 2
            order = parse_order(args.order)
            payoff = args.payoff or payoff_text_for_strategy(args.p2)
            report = exhaustive_adversary(
                order,
                args.p2,
                payoff,
                args.width,
                args.depth,
                bounds=_bounds_for(order, args.p2, args.probes),
            )
        else:
            if not args.transcript:
                print(
                    "error: give --transcript FILE or --exhaustive", file=sys.stderr
                )
                return 2
            try:
                with open(args.transcript, "r", encoding="utf-8") as f:
                    text = f.read()
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            transcript = Transcript.from_json_text(text)
            report = check_transcript(
                transcript,
                bounds=_bounds_for(transcript.order, transcript.p2, args.probes),
            )
    except CorruptedTranscriptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.to_json_text())
    return 0 if report.ok else 1


def cmd_play(args: argparse.Namespace) -> int:
    try:
        order = parse_order(args.order)
        strategy = make_player_II(order, args.p2)
        payoff_text = args.payoff or payoff_text_for_strategy(args.p2)
        state = new_game(order, args.horizon)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    transcript = Transcript(
        order=order,
        order_text=order_to_text(order),
        payoff_text=payoff_text,
        p1="human",
        p2=args.p2,
        seed=0,
        horizon=args.horizon,
    )
    print(
        f"order {transcript.order_text}, strategy {args.p2}, "
        f"horizon {args.horizon}; type a point, or 'quit' to stop"
    )
    while not state.over:
        lower, upper = state.next_bounds()
        if lower is None and upper is None:
            print(f"stage {state.stage}: opening move, no bounds yet")
        else:
            print(
                f"stage {state.stage}: interval "
                f"({point_to_text(order, lower)}, {point_to_text(order, upper)})"
            )
        try:
            line = input("I> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            line = "quit"
        if line in ("quit", "q", "exit"):
            transcript.termination = "resignation"
            break
        if not line:
            continue
        try:
            point = parse_point(order, line)
        except (ValueError, TypeError) as exc:
            print(f"cannot read that point ({exc}); try again")
            continue
        try:
            s1 = play_move(state, point)
        except LegalityError as exc:
            print(f"illegal: {exc}; try again")
            continue
        stage = state.stage
        reply, certs = strategy.step(s1)
        state = play_move(s1, reply)
        transcript.moves.append(Move(stage, "I", s1.history[-1]))
        transcript.moves.append(Move(stage, "II", state.history[-1]))
        transcript.certificates.extend(certs)
        print(f"II plays {point_to_text(order, state.history[-1])}")
        for c in certs:
            print(f"  {render_certificate(order, c)}")
    else:
        transcript.termination = "horizon"
        print("horizon reached")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(transcript.to_json_text())
        print(f"wrote {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, resolve_port

    try:
        port = resolve_port(args.port)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intervalgame",
        description="interval-shrinking game engine, strategies, and verifier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a match and write its transcript")
    sim.add_argument("--order", required=True, help="order DSL, e.g. Q")
    sim.add_argument("--payoff", required=True, help="payoff DSL for the transcript")
    sim.add_argument("--p1", required=True, help="Player I descriptor")
    sim.add_argument("--p2", required=True, help="Player II descriptor")
    sim.add_argument("--horizon", type=int, default=64)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", help="transcript path (stdout when omitted)")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="recheck a transcript or sweep a game tree")
    ver.add_argument("--transcript", help="transcript JSON file to check")
    ver.add_argument("--exhaustive", action="store_true")
    ver.add_argument("--order", help="order DSL (exhaustive mode)")
    ver.add_argument("--p2", help="Player II descriptor (exhaustive mode)")
    ver.add_argument("--payoff", help="payoff DSL (defaults to the strategy's)")
    ver.add_argument("--width", type=int, default=3)
    ver.add_argument("--depth", type=int, default=4)
    ver.add_argument("--probes", type=int, help="probe denominator cap")
    ver.set_defaults(func=cmd_verify)

    play = sub.add_parser("play", help="play Player I interactively")
    play.add_argument("--order", required=True)
    play.add_argument("--p2", required=True)
    play.add_argument("--payoff", help="payoff DSL (defaults to the strategy's)")
    play.add_argument("--horizon", type=int, default=8)
    play.add_argument("--out", help="save the transcript here on exit")
    play.set_defaults(func=cmd_play)

    srv = sub.add_parser("serve", help="run the loopback JSON session service")
    srv.add_argument("--port", type=int, help="overrides INTERVALGAME_PORT")
    srv.add_argument("--host", default="127.0.0.1")
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
