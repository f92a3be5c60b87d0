"""Command-line front end: play games, run verification, solve tiny boards,
and serve interactive sessions over a line-JSON protocol.

Exit codes: 0 success (or no first-player win found), 2 usage error,
3 a first-player win / counterexample was found, 4 an internal invariant
was violated.
"""

from __future__ import annotations

import argparse
import json
import socketserver
import sys

from .game import (
    P1,
    P2,
    GameError,
    apply_move,
    new_game,
    threat_completions,
    threats,
    trace_dump,
)
from .hypercore import enumerate_copies, get_target, max_overlap, x_board
from .oracles import oracle_copies, oracle_max_overlap, oracle_threats
from .strategy import (
    GreedyP1,
    InapplicableState,
    ScriptExhausted,
    get_p1_policy,
    get_p2_strategy,
)
from .verify import exhaustive_verify, playout_suite, random_states, exact_solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_VIOLATION = 4


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------

def cmd_play(args) -> int:
    try:
        target = get_target(args.target)
        p1 = get_p1_policy(args.p1)
        p2 = get_p2_strategy(args.p2)
    except (KeyError, ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    state = new_game(target, horizon=args.horizon)
    total = len(target.edges)
    failure = None
    for _ in range(args.plies):
        if not state.status.ongoing:
            break
        if state.to_move == P1:
            try:
                edge = p1.decide(state)
                tag = args.p1
            except ScriptExhausted:
                break
            try:
                state = apply_move(state, P1, edge)
            except GameError as ex:
                print(f"error: illegal scripted move: {ex}", file=sys.stderr)
                return EXIT_USAGE
        else:
            try:
                dec = p2.decide(state)
            except InapplicableState as ex:
                failure = str(ex)
                break
            edge, tag = dec.edge, f"{args.p2}/{dec.tag}"
            state = apply_move(state, P2, edge)
        mover = state.move_log[-1][0]
        m1 = max_overlap(target, state.p1_edges, state.p2_edges)
        m2 = max_overlap(target, state.p2_edges, state.p1_edges)
        print(f"{len(state.move_log):3d}  P{mover} {list(edge)}  "
              f"progress {m1}/{total} vs {m2}/{total}  [{tag}]")
    print(f"result: {state.status.kind} after {len(state.move_log)} moves")
    trace = trace_dump(state)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(trace)
        print(f"trace written to {args.out}")
    else:
        sys.stdout.write(trace)
    if failure is not None:
        print(f"strategy failure: {failure}", file=sys.stderr)
        return EXIT_VIOLATION
    if state.status.kind == "p1win":
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

_STRATEGY_HOME = {"k24": "hatK24-3"}


def _home_target(strategy: str):
    if strategy in _STRATEGY_HOME:
        return _STRATEGY_HOME[strategy]
    if strategy.startswith("k2t:"):
        return "k2t" + strategy.split(":", 1)[1]
    return None


def cmd_verify(args) -> int:
    tname = args.target or _home_target(args.strategy)
    if tname is None:
        print("error: --target required for this strategy", file=sys.stderr)
        return EXIT_USAGE
    try:
        target = get_target(tname)
    except (KeyError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    if args.games:
        report = playout_suite(args.strategy, target, args.adversary,
                               args.games, args.plies, args.seed)
    else:
        report = exhaustive_verify(args.strategy, target, args.depth,
                                   args.fresh_budget)
    text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    if report.violations:
        return EXIT_VIOLATION
    if not report.no_p1_win:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------

_ORACLE_TARGETS = ("hatK24-3", "gminus", "k2t3")


def _embedding_set(embeddings):
    return sorted(tuple(sorted(d.items())) for d in embeddings)


def cmd_oracle_check(args) -> int:
    checked = 0
    failures = []
    for tname in _ORACLE_TARGETS:
        target = get_target(tname)
        for state in random_states(target, args.n, args.seed):
            p1e, p2e = state.p1_edges, state.p2_edges
            if max_overlap(target, p1e, p2e) != oracle_max_overlap(
                    target, p1e, p2e):
                failures.append((tname, "measure", p1e, p2e))
            if max_overlap(target, p2e, p1e) != oracle_max_overlap(
                    target, p2e, p1e):
                failures.append((tname, "measure-swapped", p1e, p2e))
            for own in (p1e, p2e):
                if _embedding_set(enumerate_copies(target, own)) != \
                        _embedding_set(oracle_copies(target, own)):
                    failures.append((tname, "copies", p1e, p2e))
            # threat records exist only while the game is live
            for player in (P1, P2) if state.status.ongoing else ():
                own = p1e if player == P1 else p2e
                other = p2e if player == P1 else p1e
                eng = {(r.edges, r.completing, r.uses_fresh)
                       for r in threats(state, player)}
                orc = oracle_threats(target, own, other, state.pool_size)
                if eng != orc:
                    failures.append((tname, f"threats-p{player}", p1e, p2e))
            checked += 1
            if failures:
                break
        if failures:
            break
    if failures:
        tname, what, p1e, p2e = failures[0]
        print(f"oracle-check: FAIL on {tname} ({what})")
        print(f"  p1={sorted(p1e)}")
        print(f"  p2={sorted(p2e)}")
        return EXIT_VIOLATION
    print(f"oracle-check: {checked} states x "
          f"{len(_ORACLE_TARGETS)} targets, all comparisons equal")
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    try:
        target = get_target(args.target)
    except (KeyError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    if args.k is not None and target.k != args.k:
        print(f"error: target {target.name} has arity {target.k}, not "
              f"{args.k}", file=sys.stderr)
        return EXIT_USAGE
    try:
        value = exact_solve(args.board, target, cap=args.cap)
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps({"board": args.board, "target": target.name,
                      "kind": value.kind, "depth": value.depth}))
    if value.kind == "p2win":
        # the second player can never win a complete-board strong game
        print("error: second-player win on a complete board", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

class Session:
    """One interactive game: the human claims for P1, the engine for P2."""

    def __init__(self):
        self.state = None
        self.player = None
        self.resigned = False

    # -- protocol handlers ------------------------------------------------

    def handle(self, raw: str) -> dict:
        try:
            msg = json.loads(raw)
        except json.JSONDecodeError as ex:
            return _err("BadJSON", str(ex))
        if not isinstance(msg, dict) or "cmd" not in msg:
            return _err("BadRequest", "message must be {'cmd': ...}")
        cmd = msg["cmd"]
        try:
            if cmd == "new_game":
                return self._new_game(msg)
            if cmd == "move":
                return self._move(msg)
            if cmd == "hint":
                return self._hint()
            if cmd == "resign":
                return self._resign()
            if cmd == "snapshot":
                return self._snapshot(msg)
        except GameError as ex:
            return _err(type(ex).__name__, str(ex))
        except (KeyError, ValueError, TypeError) as ex:
            return _err("BadRequest", str(ex))
        return _err("UnknownCommand", f"no such command {cmd!r}")

    def _new_game(self, msg) -> dict:
        tname = msg.get("target")
        if not tname:
            return _err("BadRequest", "new_game needs a target")
        try:
            target = get_target(tname)
        except (KeyError, OSError) as ex:
            return _err("UnknownTarget", str(ex))
        sname = msg.get("p2") or _home_strategy(target.name)
        if sname is None:
            return _err("NoStrategy",
                        f"no engine strategy for {target.name}; pass 'p2'")
        try:
            player = get_p2_strategy(sname)
        except ValueError as ex:
            return _err("BadRequest", str(ex))
        self.state = new_game(target, horizon=msg.get("horizon"))
        self.player = player
        self.resigned = False
        return self._payload(msg.get("xboard"))

    def _move(self, msg) -> dict:
        if self.state is None:
            return _err("NoGame", "send new_game first")
        if self.resigned or not self.state.status.ongoing:
            return _err("GameOver", "the game has ended")
        edge = msg.get("e")
        if not isinstance(edge, (list, tuple)):
            return _err("BadRequest", "move needs 'e': [vertices]")
        state = apply_move(self.state, P1, edge)
        if state.status.ongoing and state.to_move == P2:
            try:
                dec = self.player.decide(state)
            except InapplicableState as ex:
                self.state = state
                return _err("InapplicableState", str(ex))
            state = apply_move(state, P2, dec.edge)
        self.state = state
        return self._payload(msg.get("xboard"))

    def _hint(self) -> dict:
        if self.state is None:
            return _err("NoGame", "send new_game first")
        if self.resigned or not self.state.status.ongoing:
            return _err("GameOver", "the game has ended")
        if self.state.to_move != P1:
            return _err("WrongTurn", "hints are for the human seat")
        edge = GreedyP1().decide(self.state)
        return {"v": 1, "type": "hint", "e": list(edge)}

    def _resign(self) -> dict:
        if self.state is None:
            return _err("NoGame", "send new_game first")
        self.resigned = True
        return self._payload(None)

    def _snapshot(self, msg) -> dict:
        if self.state is None:
            return _err("NoGame", "send new_game first")
        return self._payload(msg.get("xboard"))

    # -- payloads ----------------------------------------------------------

    def _payload(self, center) -> dict:
        s = self.state
        target = s.target
        status = {"kind": "p2win" if self.resigned else s.status.kind}
        if self.resigned:
            status["resigned"] = True
        elif s.status.embedding is not None:
            status["embedding"] = [list(p) for p in s.status.embedding]
        out = {
            "v": 1,
            "type": "state",
            "target": target.name,
            "k": target.k,
            "to_move": s.to_move,
            "status": status,
            "pool_size": s.pool_size,
            "horizon": s.horizon,
            "p1_edges": [list(e) for e in sorted(s.p1_edges)],
            "p2_edges": [list(e) for e in sorted(s.p2_edges)],
            "move_log": [[p, list(e)] for p, e in s.move_log],
            "threats": {
                "p1": [_threat_json(r) for r in threats(s, P1)],
                "p2": [_threat_json(r) for r in threats(s, P2)],
            },
            "measures": {
                "p1": max_overlap(target, s.p1_edges, s.p2_edges),
                "p2": max_overlap(target, s.p2_edges, s.p1_edges),
            },
            "edge_total": len(target.edges),
        }
        if center is not None:
            out["xboard"] = {
                "x": center,
                "p1": [list(e) for e in sorted(x_board(s.p1_edges, center))],
                "p2": [list(e) for e in sorted(x_board(s.p2_edges, center))],
            }
        return out


def _threat_json(rec) -> dict:
    return {
        "edges": [list(e) for e in sorted(rec.edges)],
        "completing": list(rec.completing),
        "uses_fresh": rec.uses_fresh,
    }


def _err(code: str, message: str) -> dict:
    return {"v": 1, "type": "error", "code": code, "message": message}


def _home_strategy(target_name: str):
    if target_name == "hatK24-3":
        return "k24"
    if target_name.startswith("k2t") and target_name[3:].isdigit():
        return f"k2t:{target_name[3:]}"
    return None


def serve_stdio(infh=None, outfh=None) -> None:
    infh = infh or sys.stdin
    outfh = outfh or sys.stdout
    session = Session()
    for line in infh:
        line = line.strip()
        if not line:
            continue
        resp = session.handle(line)
        outfh.write(json.dumps(resp, separators=(",", ":")) + "\n")
        outfh.flush()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        session = Session()
        for raw in self.rfile:
            line = raw.decode("utf-8", "replace").strip()
            if not line:
                continue
            resp = session.handle(line)
            self.wfile.write(
                (json.dumps(resp, separators=(",", ":")) + "\n").encode())


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def cmd_serve(args) -> int:
    if args.stdio:
        serve_stdio()
        return EXIT_OK
    with _Server((args.host, args.port), _Handler) as srv:
        print(f"serving on {args.host}:{srv.server_address[1]}",
              file=sys.stderr)
        try:
            srv.serve_forever()
        except KeyboardInterrupt:
            pass
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="strongdraw",
        description="strong-game engine, drawing strategies, verifier")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play one game between two policies")
    p.add_argument("--target", required=True)
    p.add_argument("--p1", required=True,
                   help="p1-random:<seed> | p1-greedy | p1-scripted:<path>")
    p.add_argument("--p2", required=True, help="k24 | k2t:<t> | distraction")
    p.add_argument("--plies", type=int, default=80)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--out", default=None, help="trace file (JSONL)")
    p.set_defaults(fn=cmd_play)

    v = sub.add_parser("verify", help="exhaustive prefix search or playouts")
    v.add_argument("--strategy", required=True)
    v.add_argument("--target", default=None)
    v.add_argument("--depth", type=int, default=4)
    v.add_argument("--fresh-budget", type=int, default=None)
    v.add_argument("--games", type=int, default=0,
                   help="run a playout suite of this many games instead")
    v.add_argument("--adversary", default="p1-random")
    v.add_argument("--plies", type=int, default=60)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default=None, help="report file (JSON)")
    v.set_defaults(fn=cmd_verify)

    o = sub.add_parser("oracle-check",
                       help="engine vs brute-force oracles on random states")
    o.add_argument("--n", type=int, default=100, help="states per target")
    o.add_argument("--seed", type=int, default=1)
    o.set_defaults(fn=cmd_oracle_check)

    s = sub.add_parser("solve", help="perfect-play value of a tiny board")
    s.add_argument("--board", type=int, required=True)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--target", required=True)
    s.add_argument("--cap", type=int, default=35)
    s.set_defaults(fn=cmd_solve)

    sv = sub.add_parser("serve", help="line-JSON game service")
    sv.add_argument("--stdio", action="store_true")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8445)
    sv.set_defaults(fn=cmd_serve)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
