"""Command-line entry points and the line-JSON serve protocol."""

from __future__ import annotations

import io
import json

import pytest

from strongdraw.cli import Session, main, serve_stdio
from strongdraw.game import P1, P2, apply_move, new_game, threats, trace_load
from strongdraw.hypercore import get_target


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_missing_required_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["play"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_unknown_names_exit_2(capsys):
    rc = main(["play", "--target", "hatK24-3", "--p1", "p1-psychic",
               "--p2", "k24"])
    assert rc == 2
    rc = main(["play", "--target", "wat", "--p1", "p1-greedy", "--p2", "k24"])
    assert rc == 2
    capsys.readouterr()


def test_play_game_to_exit_zero(capsys):
    rc = main(["play", "--target", "hatK24-3", "--p1", "p1-random:1",
               "--p2", "k24", "--plies", "30"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "P2" in out
    assert "progress" in out


def test_play_writes_a_loadable_trace(tmp_path, capsys):
    path = tmp_path / "game.trace"
    rc = main(["play", "--target", "k2t3", "--p1", "p1-random:7",
               "--p2", "k2t:3", "--plies", "40", "--out", str(path)])
    capsys.readouterr()
    assert rc == 0
    st = trace_load(path.read_text(encoding="utf-8"))
    assert st.target.name == "k2t3"
    assert st.move_log
    assert st.status.kind != "p1win"


def test_play_with_an_exhausted_script_stops_cleanly(tmp_path, capsys):
    script = tmp_path / "p1.moves"
    script.write_text("k 3\n0 1 2\n30 31 32\n", encoding="utf-8")
    rc = main(["play", "--target", "hatK24-3",
               "--p1", f"p1-scripted:{script}", "--p2", "k24",
               "--plies", "60"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "result: ongoing" in out


def test_play_rejects_an_illegal_script(tmp_path, capsys):
    script = tmp_path / "p1.moves"
    script.write_text("k 3\n0 1 2\n0 1 2\n", encoding="utf-8")
    rc = main(["play", "--target", "hatK24-3",
               "--p1", f"p1-scripted:{script}", "--p2", "k24",
               "--plies", "60"])
    capsys.readouterr()
    assert rc == 2


def test_verify_exhaustive_to_json(capsys):
    rc = main(["verify", "--strategy", "k24", "--depth", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    data = json.loads(out)
    assert data["outcome"]["kind"] == "NoP1WinFound"
    assert data["target"] == "hatK24-3"


def test_verify_playouts_to_json(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    rc = main(["verify", "--strategy", "k2t:3", "--games", "3",
               "--adversary", "p1-random", "--plies", "40",
               "--out", str(out_path)])
    capsys.readouterr()
    assert rc == 0
    data = json.loads(out_path.read_text(encoding="utf-8"))
    assert data["games"] == 3
    assert data["outcome"]["kind"] == "NoP1WinFound"


def test_verify_counterexample_exits_3(capsys):
    rc = main(["verify", "--strategy", "p2-weak", "--target", "path2-3",
               "--depth", "3"])
    out = capsys.readouterr().out
    assert rc == 3
    data = json.loads(out)
    assert data["outcome"]["kind"] == "CounterexampleTrace"


def test_verify_without_a_home_target_exits_2(capsys):
    rc = main(["verify", "--strategy", "p2-weak", "--depth", "1"])
    assert rc == 2
    capsys.readouterr()


def test_oracle_check_small_corpus(capsys):
    rc = main(["oracle-check", "--n", "2", "--seed", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "all comparisons equal" in out


def test_solve_known_values(capsys):
    rc = main(["solve", "--board", "4", "--target", "k3"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "draw"
    rc = main(["solve", "--board", "5", "--target", "k3"])
    data = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert data["kind"] == "p1win"
    assert data["depth"] == 7


def test_solve_rejects_oversized_boards(capsys):
    rc = main(["solve", "--board", "8", "--target", "k3", "--cap", "20"])
    assert rc == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# the serve protocol
# ---------------------------------------------------------------------------


def send(session, **msg):
    return session.handle(json.dumps(msg))


def test_session_full_flow():
    s = Session()
    st = send(s, cmd="new_game", target="hatK24-3")
    assert st["v"] == 1 and st["type"] == "state"
    assert st["target"] == "hatK24-3"
    assert st["to_move"] == 1
    assert st["status"] == {"kind": "ongoing"}
    assert st["edge_total"] == 9

    st = send(s, cmd="move", e=[0, 1, 2])
    assert st["type"] == "state"
    assert len(st["move_log"]) == 2  # the engine answered
    assert st["move_log"][0] == [1, [0, 1, 2]]
    assert st["measures"]["p1"] == 1
    assert st["to_move"] == 1


def test_session_errors_preserve_the_game():
    s = Session()
    send(s, cmd="new_game", target="hatK24-3")
    send(s, cmd="move", e=[0, 1, 2])
    err = send(s, cmd="move", e=[0, 1, 2])
    assert err["type"] == "error"
    assert err["code"] == "EdgeAlreadyClaimed"
    snap = send(s, cmd="snapshot")
    assert snap["type"] == "state"
    assert len(snap["move_log"]) == 2


def test_session_rejects_bad_input():
    s = Session()
    assert s.handle("{not json")["code"] == "BadJSON"
    assert send(s, cmd="warp")["code"] == "UnknownCommand"
    assert send(s, cmd="move", e=[0, 1, 2])["code"] == "NoGame"
    assert send(s, cmd="new_game")["code"] == "BadRequest"
    assert send(s, cmd="new_game", target="wat")["code"] == "UnknownTarget"
    assert send(s, cmd="new_game", target="gminus")["code"] == "NoStrategy"


def test_session_hint_is_the_greedy_move():
    s = Session()
    send(s, cmd="new_game", target="k2t3")
    hint = send(s, cmd="hint")
    assert hint["type"] == "hint"
    assert hint["e"] == [0, 1, 2]


def test_session_resign_and_game_over():
    s = Session()
    send(s, cmd="new_game", target="hatK24-3")
    st = send(s, cmd="resign")
    assert st["status"] == {"kind": "p2win", "resigned": True}
    err = send(s, cmd="move", e=[0, 1, 2])
    assert err["code"] == "GameOver"


def test_session_horizon_draw():
    s = Session()
    send(s, cmd="new_game", target="hatK24-3", horizon=4)
    send(s, cmd="move", e=[0, 1, 2])
    st = send(s, cmd="move", e=[0, 1, 3])
    assert st["status"]["kind"] == "draw"


def test_session_xboard_projection():
    s = Session()
    send(s, cmd="new_game", target="hatK24-3")
    st = send(s, cmd="move", e=[0, 1, 2], xboard=0)
    assert st["xboard"]["x"] == 0
    assert [1, 2] in st["xboard"]["p1"]


def test_served_threats_match_the_engine():
    """The threat lists in a payload equal a direct engine computation on a
    state rebuilt from the served move log."""
    s = Session()
    send(s, cmd="new_game", target="hatK24-3")
    for e in ([0, 1, 2], [0, 1, 3], [0, 2, 3]):
        payload = send(s, cmd="move", e=e)
        assert payload["type"] == "state", payload

    st = new_game(get_target("hatK24-3"))
    for pl, e in payload["move_log"]:
        st = apply_move(st, pl, tuple(e))
    for key, pl in (("p1", P1), ("p2", P2)):
        direct = {
            (tuple(map(tuple, sorted(r.edges))), r.completing, r.uses_fresh)
            for r in threats(st, pl)
        }
        served = {
            (
                tuple(tuple(x) for x in t["edges"]),
                tuple(t["completing"]),
                t["uses_fresh"],
            )
            for t in payload["threats"][key]
        }
        assert direct == served


def test_protocol_replay_reproduces_snapshots():
    """Replaying a session's moves in a fresh session gives identical
    snapshots — the protocol is deterministic."""
    moves = ([0, 1, 2], [0, 1, 3], [4, 5, 6])
    snaps = []
    for _ in range(2):
        s = Session()
        send(s, cmd="new_game", target="k2t3")
        for e in moves:
            send(s, cmd="move", e=e)
        snaps.append(send(s, cmd="snapshot", xboard=1))
    assert snaps[0] == snaps[1]


def test_serve_stdio_speaks_line_json():
    lines = "\n".join(
        [
            json.dumps({"cmd": "new_game", "target": "hatK24-3"}),
            json.dumps({"cmd": "move", "e": [0, 1, 2]}),
            json.dumps({"cmd": "snapshot"}),
        ]
    )
    out = io.StringIO()
    serve_stdio(io.StringIO(lines + "\n"), out)
    replies = [json.loads(ln) for ln in out.getvalue().splitlines()]
    assert len(replies) == 3
    assert all(r["v"] == 1 for r in replies)
    assert replies[-1]["type"] == "state"
    assert len(replies[-1]["move_log"]) == 2
