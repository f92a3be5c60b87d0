"""Shared fixtures and state-building helpers for the test suite."""

from __future__ import annotations

import pytest

from strongdraw.game import P1, P2, GameState, apply_move, new_game
from strongdraw.hypercore import get_target, mk_edge


def play(state: GameState, *edges) -> GameState:
    """Apply edges alternately starting with whoever is to move."""
    for e in edges:
        state = apply_move(state, state.to_move, e)
    return state


def state_from_sets(target_name: str, p1_edges, p2_edges) -> GameState:
    """Build a legal position holding exactly the given claim sets.

    The edge lists are interleaved into an alternating move log, so their
    lengths must satisfy len(p2) <= len(p1) <= len(p2) + 1.
    """
    p1 = [mk_edge(e) for e in p1_edges]
    p2 = [mk_edge(e) for e in p2_edges]
    if not len(p2) <= len(p1) <= len(p2) + 1:
        raise ValueError("claim sets cannot come from alternating play")
    st = new_game(get_target(target_name))
    for i in range(len(p1) + len(p2)):
        if i % 2 == 0:
            st = apply_move(st, P1, p1[i // 2])
        else:
            st = apply_move(st, P2, p2[i // 2])
    return st


@pytest.fixture(scope="session")
def hat():
    return get_target("hatK24-3")


@pytest.fixture(scope="session")
def gminus():
    return get_target("gminus")


@pytest.fixture(scope="session")
def fan3():
    return get_target("k2t3")


__all__ = ["play", "state_from_sets", "P1", "P2"]
