"""The lure loop: family recognition, preconditions, and the loop itself."""

from __future__ import annotations

import pytest

from strongdraw.game import P1, P2, apply_move, has_threat, new_game
from strongdraw.hypercore import get_target, mk_edge
from strongdraw.strategy import (
    InapplicableState,
    distraction_ready,
    family_of,
    get_p2_strategy,
    infer_distraction_roles,
    p1_owns_excluded,
    scaffold_ok,
)

from conftest import state_from_sets

HAT_FAM = family_of(get_target("hatK24-3"))
FAN3_FAM = family_of(get_target("k2t3"))


def hat_scaffold(c, x, y, minors):
    """Lifted three-minor hat with center c and hubs x, y."""
    edges = [(c, x, y)]
    for m in minors:
        edges += [(c, x, m), (c, y, m)]
    return [mk_edge(e) for e in edges]


def junk(n, base=30):
    return [(base + 3 * i, base + 3 * i + 1, base + 3 * i + 2) for i in range(n)]


# ---------------------------------------------------------------------------
# family recognition
# ---------------------------------------------------------------------------


def test_families_are_recognised():
    assert HAT_FAM is not None and HAT_FAM.kind == "hat"
    assert FAN3_FAM is not None and FAN3_FAM.kind == "fan"
    assert FAN3_FAM.t == 3
    f5 = family_of(get_target("k2t5"))
    assert f5.kind == "fan" and f5.t == 5


def test_unsupported_targets_have_no_family():
    assert family_of(get_target("gminus")) is None
    assert family_of(get_target("k3")) is None
    assert family_of(get_target("path2-3")) is None


# ---------------------------------------------------------------------------
# preconditions
# ---------------------------------------------------------------------------


def test_scaffold_check_for_the_hat_family():
    sc = hat_scaffold(0, 1, 2, (3, 4, 5))
    st = state_from_sets("hatK24-3", junk(7), sc)
    assert scaffold_ok(st, 0, 1, 2, HAT_FAM)
    assert scaffold_ok(st, 0, 2, 1, HAT_FAM)
    assert not scaffold_ok(st, 1, 0, 2, HAT_FAM)  # wrong center

    # without the hub edge the scaffold is incomplete
    sc2 = [e for e in sc if e != (0, 1, 2)]
    st2 = state_from_sets("hatK24-3", junk(6), sc2)
    assert not scaffold_ok(st2, 0, 1, 2, HAT_FAM)


def test_scaffold_check_for_the_fan_family():
    # t doubly joined spokes, 2t-2 spread, no hub edge required
    c, x, y = 0, 1, 2
    edges = []
    for m in (3, 4, 5):  # t = 3 commons
        edges += [(c, x, m), (c, y, m)]
    st = state_from_sets("k2t3", junk(6), edges)
    assert not scaffold_ok(st, c, x, y, FAN3_FAM)  # spread only 3 < 2t-2
    edges += [(c, x, 6)]
    st = state_from_sets("k2t3", junk(7), edges)
    assert scaffold_ok(st, c, x, y, FAN3_FAM)


def test_excluded_copy_detection():
    own = hat_scaffold(0, 1, 9, (6, 7, 8))
    st = state_from_sets("hatK24-3", own, junk(6))
    assert p1_owns_excluded(st, 0, 1, HAT_FAM)
    assert p1_owns_excluded(st, 0, 9, HAT_FAM)
    assert not p1_owns_excluded(st, 0, 2, HAT_FAM)
    assert not p1_owns_excluded(st, 1, 0, HAT_FAM)


def test_precondition_swaps_to_the_clean_orientation():
    """An opponent copy keyed to one hub blocks that orientation only."""
    sc = hat_scaffold(0, 1, 2, (3, 4, 5))
    own = hat_scaffold(0, 1, 9, (6, 7, 8)) + [(30, 31, 32)]
    st = state_from_sets("hatK24-3", own, sc)
    assert st.to_move == P2
    assert not distraction_ready(st, 0, 1, 2, HAT_FAM)
    assert distraction_ready(st, 0, 2, 1, HAT_FAM)


def test_precondition_requires_no_open_threat(hat):
    sc = hat_scaffold(0, 1, 2, (3, 4, 5))
    own = [e for e in hat.edges if e != (1, 5, 6)]
    st = state_from_sets("hatK24-3", own, sc)
    assert has_threat(st, P1)
    assert not distraction_ready(st, 0, 1, 2, HAT_FAM)
    assert not distraction_ready(st, 0, 2, 1, HAT_FAM)


# ---------------------------------------------------------------------------
# the loop
# ---------------------------------------------------------------------------


def loop_state():
    return state_from_sets(
        "hatK24-3", junk(8), hat_scaffold(0, 1, 2, (3, 4, 5))
    )


def test_roles_are_inferred_from_the_board():
    st = loop_state()
    roles = infer_distraction_roles(st)
    assert roles is not None
    c, hx, hy = roles
    assert c == 0
    assert {hx, hy} == {1, 2}


def test_first_lure_claims_a_fresh_wing():
    st = loop_state()
    p2 = get_p2_strategy("distraction")
    dec = p2.decide(st)
    assert dec.tag == "lure"
    d = p2.mem.distraction
    fresh = set(dec.edge) - {d["c"], d["y"]}
    assert len(fresh) == 1
    assert fresh.pop() >= st.pool_size
    assert d["pending"], "the matching winning claim is remembered"


def test_unanswered_lure_is_converted_to_a_win():
    st = loop_state()
    p2 = get_p2_strategy("distraction")
    st = apply_move(st, P2, p2.decide(st).edge)
    st = apply_move(st, P1, (60, 61, 62))  # opponent looks away
    dec = p2.decide(st)
    assert dec.tag == "win"
    assert apply_move(st, P2, dec.edge).status.kind == "p2win"


def test_fifty_blocked_rounds_never_give_the_opponent_a_threat():
    """An always-blocking opponent survives, but never gets a threat of
    their own; the loop keeps producing legal lures."""
    st = loop_state()
    p2 = get_p2_strategy("distraction")
    for _ in range(50):
        dec = p2.decide(st)
        assert dec.tag == "lure"
        st = apply_move(st, P2, dec.edge)
        assert not has_threat(st, P1)
        block = p2.mem.distraction["pending"][-1]
        st = apply_move(st, P1, block)
        assert not has_threat(st, P1)
    assert st.status.ongoing
    assert len(st.p2_edges) == 7 + 50


def test_loop_without_a_scaffold_is_refused():
    st = state_from_sets("hatK24-3", [(0, 1, 2)], [])
    with pytest.raises(InapplicableState):
        get_p2_strategy("distraction").decide(st)
