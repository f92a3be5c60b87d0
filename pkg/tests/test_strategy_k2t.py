"""The fan-family drawing strategy: opening, exchange algorithm, resume."""

from __future__ import annotations

import collections

import pytest

from strongdraw.game import P1, P2, apply_move, new_game, threats
from strongdraw.hypercore import get_target, mk_edge
from strongdraw.strategy import (
    GreedyP1,
    InapplicableState,
    RandomP1,
    get_p2_strategy,
    resume_player,
)
from strongdraw.verify import strategy_invariants

from test_strategy_k24 import PassiveP1, hubs_and_anchors, run_game


def test_registry_rejects_small_t():
    with pytest.raises(ValueError):
        get_p2_strategy("k2t:2")
    with pytest.raises(ValueError):
        get_p2_strategy("k2t:x")


@pytest.mark.parametrize("t", [3, 4])
def test_opening_is_a_star_of_2t_minus_1_spokes(t):
    """Against a passive opponent the first 2t-1 moves share two common
    vertices, each of claim-degree 2t-1."""
    g = get_target(f"k2t{t}")
    p2 = get_p2_strategy(f"k2t:{t}")
    p1 = PassiveP1()
    st = new_game(g)
    for _ in range(2 * t - 1):
        st = apply_move(st, P1, p1.decide(st))
        st = apply_move(st, P2, p2.decide(st).edge)
    hubs, anchors = hubs_and_anchors(st.p2_edges)
    assert len(st.p2_edges) == 2 * t - 1
    assert len(hubs) == 2
    assert len(anchors) == 2 * t - 1
    assert all(st.degree(P2, h) == 2 * t - 1 for h in hubs)


def test_wrong_target_is_refused(hat):
    p2 = get_p2_strategy("k2t:3")
    st = apply_move(new_game(hat), P1, (0, 1, 2))
    with pytest.raises(InapplicableState):
        p2.decide(st)


def test_survives_random_and_greedy_opponents(fan3):
    for seed in range(8):
        st = run_game(fan3, get_p2_strategy("k2t:3"), RandomP1(seed), 80)
        assert st.status.kind != "p1win"
    st = run_game(fan3, get_p2_strategy("k2t:3"), GreedyP1(), 80)
    assert st.status.kind != "p1win"


def test_replies_never_leave_an_open_completion(fan3):
    def watch(st_before, dec, player):
        nxt = apply_move(st_before, P2, dec.edge)
        if nxt.status.ongoing:
            assert not threats(nxt, P1)

    for seed in range(8):
        st = run_game(fan3, get_p2_strategy("k2t:3"), RandomP1(seed), 80, watch)
        assert st.status.kind != "p1win"


# ---------------------------------------------------------------------------
# the exchange algorithm
# ---------------------------------------------------------------------------


class BookDriver:
    """Builds a pure two-hub book: two doubly covered spokes, then singles.

    Progress hits 2t at the opponent's tail move and 2t+1 right after,
    which lands in the exchange branch with two doubly covered spokes.
    """

    def __init__(self):
        self._fallback = GreedyP1()
        self._n = 0
        self._book = [
            (0, 1, 3), (0, 2, 3),
            (0, 1, 4), (0, 2, 4),
            (0, 1, 5), (0, 1, 6),
            (0, 1, 7),
        ]

    def decide(self, state):
        self._n += 1
        if self._n <= len(self._book):
            return mk_edge(self._book[self._n - 1])
        return self._fallback.decide(state)


def test_book_attack_runs_the_exchange_algorithm(fan3):
    """A near-copy with two doubly covered spokes yields a three-edge
    exchange set, and the unclaimed part keeps even size after replies."""
    p2 = get_p2_strategy("k2t:3")
    phases, tags = [], []

    def watch(st_before, dec, player):
        phases.append(player.mem.phase)
        tags.append(dec.tag)
        nxt = apply_move(st_before, P2, dec.edge)
        assert strategy_invariants(nxt, player) == []

    st = run_game(fan3, p2, BookDriver(), 40, watch)
    assert st.status.kind != "p1win"
    counts = collections.Counter(phases)
    assert counts["exchange-play"] > 0
    assert p2.mem.scal["doubly"] == 2
    assert tags[:6] == ["star"] * 5 + ["tail"]
    assert tags[6] == "exchange"
    # every exchange edge joins the copy run's center to one of its hubs
    a1 = p2.mem.reg["copy_center"]
    ha, hb = p2.mem.reg["copy_hub_a"], p2.mem.reg["copy_hub_b"]
    claimed_back = p2.mem.sets["swap_replies"]
    for e in claimed_back:
        assert a1 in e
        assert ha in e or hb in e


def test_tail_branch_without_a_near_copy(fan3):
    """When the opponent stays below full progress the strategy fills the
    tail and arms the lure loop."""
    p2 = get_p2_strategy("k2t:3")
    phases = []

    def watch(st_before, dec, player):
        phases.append(player.mem.phase)

    st = run_game(fan3, p2, PassiveP1(), 40, watch)
    assert st.status.kind != "p1win"
    assert "tailfill" in phases or "distraction" in phases
    assert "exchange-play" not in phases


def test_resume_reproduces_memory(fan3):
    p2 = get_p2_strategy("k2t:3")
    st = run_game(fan3, p2, BookDriver(), 30)
    assert st.status.ongoing
    back = resume_player("k2t:3", st)
    assert back.mem.phase == p2.mem.phase
    assert back.mem.reg == p2.mem.reg
    assert back.mem.seq == p2.mem.seq
    assert back.mem.sets == p2.mem.sets
