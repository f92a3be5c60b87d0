"""Second-player drawing strategies and first-player adversaries.

The two scripted strategies (``k24`` and ``k2t:<t>``) play the second
player on the infinite complete 3-uniform board.  Both follow the same
arc: build a star scaffold on fresh vertices, branch on how much of the
target the opponent has assembled, neutralise direct threats with paired
blocking moves, and finally lock the game into a *distraction loop* — an
endless sequence of one-move threats the opponent is forced to answer,
none of which they can convert into a completed copy.

A strategy is a plain function ``fn(state, mem) -> StrategyDecision``
driven by a :class:`StrategyMemory`.  The :class:`P2Player` wrapper adds
the universal rules (claim a winning edge first, verify blocking
soundness after) and owns the memory, so callers only see
``player.decide(state)``.

First-player adversaries (`p1-random`, `p1-greedy`, `p1-scripted`) share
the ``decide(state) -> edge`` shape.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import partial

from .game import (
    P1,
    P2,
    GameError,
    GameState,
    fresh_vertex,
    has_threat,
    new_game,
    apply_move,
    threat_completions,
    threats,
)
from .hypercore import (
    Edge,
    TargetGraph,
    lowest_increasing_edge,
    mk_edge,
    parse_edge_text,
    x_board,
)


class InapplicableState(GameError):
    """The scripted strategy's preconditions do not hold.

    Raised when the game has reached a position the strategy's case
    analysis says cannot occur.  Seeing this in verified play means a
    bookkeeping bug, not bad luck.
    """


class ScriptExhausted(GameError):
    """A scripted adversary ran out of moves."""


# ---------------------------------------------------------------------------
# memory and decisions


@dataclass
class StrategyMemory:
    """Mutable notebook a scripted strategy keeps between moves.

    Everything in here is recomputable by replaying the move log, which
    is how traces are resumed.

    - ``phase``: tag naming what the strategy intends to do next turn.
    - ``reg``: named single vertices (hubs, centers, pivots).
    - ``seq``: named vertex/edge tuples (anchor lists, reserved edges).
    - ``sets``: named edge sets (the exchange set and reply bookkeeping).
    - ``scal``: named integers (measure snapshots, shape counts).
    - ``distraction``: active lure-loop context, or ``None``.
    - ``audit``: free-form notes left at odd-but-handled positions.
    """

    phase: str = "open"
    reg: dict = field(default_factory=dict)
    seq: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    scal: dict = field(default_factory=dict)
    distraction: dict | None = None
    audit: list = field(default_factory=list)

    def clone(self) -> "StrategyMemory":
        m = StrategyMemory(phase=self.phase)
        m.reg = dict(self.reg)
        m.seq = {k: tuple(v) for k, v in self.seq.items()}
        m.sets = {k: set(v) for k, v in self.sets.items()}
        m.scal = dict(self.scal)
        if self.distraction is not None:
            m.distraction = dict(self.distraction)
            m.distraction["pending"] = list(self.distraction["pending"])
        m.audit = list(self.audit)
        return m


@dataclass(frozen=True)
class StrategyDecision:
    """An edge to claim plus the rule that picked it."""

    edge: Edge
    tag: str


def _fail(msg: str) -> "InapplicableState":
    return InapplicableState(msg)


# ---------------------------------------------------------------------------
# two-uniform helpers on projected boards
#
# All scaffold and precondition checks happen on an x-board: the set of
# vertex pairs completing claimed edges through a fixed vertex.


def _nbr_map(pairs) -> dict:
    nbrs: dict = {}
    for u, v in pairs:
        nbrs.setdefault(u, set()).add(v)
        nbrs.setdefault(v, set()).add(u)
    return nbrs


def _common(nbrs: dict, x: int, y: int) -> set:
    return (nbrs.get(x, set()) & nbrs.get(y, set())) - {x, y}


@dataclass(frozen=True)
class _Family:
    """Shape parameters for one strategy family.

    ``kind`` is "hat" (target = two hubs, four doubly-joined spokes and
    a hub edge) or "fan" (two hubs, t+1 doubly-joined spokes, t-2
    pendants, no hub edge).  The distraction scaffold is the target's
    hub link minus one doubly-joined spoke.
    """

    kind: str
    t: int = 0


FAMILY_HAT = _Family("hat")


def fan_family(t: int) -> _Family:
    return _Family("fan", t)


def family_of(target: TargetGraph) -> _Family | None:
    """Recognise which strategy family a target belongs to, if any."""
    if target.k != 3 or target.universal_center is None:
        return None
    bf = target.link_target().biflower()
    if bf is None or bf.pend1:
        return None
    if bf.has_main_edge and bf.n_common == 4 and not bf.pend0:
        return FAMILY_HAT
    if not bf.has_main_edge and bf.pend0 == bf.n_common - 3 and bf.n_common >= 4:
        return fan_family(bf.n_common - 1)
    return None


def scaffold_ok(state: GameState, c: int, x: int, y: int, fam: _Family) -> bool:
    """Does P2 own a full distraction scaffold with center c, hubs x,y?"""
    pairs = x_board(state.p2_edges, c)
    nbrs = _nbr_map(pairs)
    commons = _common(nbrs, x, y)
    if fam.kind == "hat":
        return (min(x, y), max(x, y)) in pairs and len(commons) >= 3
    spread = (nbrs.get(x, set()) | nbrs.get(y, set())) - {x, y}
    return len(commons) >= fam.t and len(spread) >= 2 * fam.t - 2


def p1_owns_excluded(state: GameState, center: int, main: int, fam: _Family) -> bool:
    """Has P1 claimed a forbidden two-hub copy (given center and one hub)?

    For the hat family the forbidden shape is hub edge plus three
    doubly-joined spokes; for the fan family it is t doubly-joined
    spokes with no hub edge required.
    """
    pairs = x_board(state.p1_edges, center)
    nbrs = _nbr_map(pairs)
    need = 3 if fam.kind == "hat" else fam.t
    for u in nbrs:
        if u == main or u == center:
            continue
        if fam.kind == "hat" and (min(main, u), max(main, u)) not in pairs:
            continue
        if len(_common(nbrs, main, u)) >= need:
            return True
    return False


def distraction_ready(state: GameState, c: int, x: int, y: int, fam: _Family) -> bool:
    """Check every precondition of the lure loop for hubs (x, y).

    x is the winning-side hub: lures go on the y side, wins on the x
    side.  Requires no live P1 threat, a complete P2 scaffold, and that
    P1 owns no excluded copy keyed to (c, x) in either orientation.
    """
    if has_threat(state, P1):
        return False
    if not scaffold_ok(state, c, x, y, fam):
        return False
    if p1_owns_excluded(state, c, x, fam):
        return False
    if p1_owns_excluded(state, x, c, fam):
        return False
    return True


def _enter_distraction(state, mem: StrategyMemory, fam: _Family, c: int, hub_pairs):
    """Try hub orientations in order; arm the loop on the first that fits."""
    for hx, hy in hub_pairs:
        if distraction_ready(state, c, hx, hy, fam):
            mem.distraction = {
                "family": fam.kind,
                "t": fam.t,
                "c": c,
                "x": hx,
                "y": hy,
                "pending": [],
            }
            mem.phase = "distraction"
            return True
    return False


def _lure_move(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    """Claim the next lure.  Wins on unanswered lures are picked up by
    the wrapper's win-first rule before this runs."""
    d = mem.distraction
    a = fresh_vertex(state)
    lure = mk_edge((d["c"], d["y"], a))
    d["pending"].append(mk_edge((d["c"], d["x"], a)))
    return StrategyDecision(lure, "lure")


# ---------------------------------------------------------------------------
# shared bookkeeping


def free_anchors(state: GameState, hub: int, anchors) -> set:
    """Anchors that no P1 edge joins to the hub together with another anchor."""
    out = set()
    for i, vi in enumerate(anchors):
        if all(
            mk_edge((hub, vi, vj)) not in state.p1_edges
            for j, vj in enumerate(anchors)
            if j != i
        ):
            out.add(vi)
    return out


def _p1_moves(state: GameState) -> list:
    return [e for pl, e in state.move_log if pl == P1]


def _last_p1_edge(state: GameState) -> Edge:
    pl, e = state.move_log[-1]
    if pl != P1:
        raise _fail("expected an opponent move immediately before deciding")
    return e


def _deg(state: GameState, v: int) -> int:
    return state.degree(P1, v)


def _classify_tight_block(edges) -> tuple:
    """Classify an 8-edge near-copy (all edges through one center).

    Returns ("bipartite", center, (hubA, hubB)) when the edges form the
    full two-hub/four-spoke grid with no hub edge, or
    ("pendant", center, (heavy, light), pend) when one spoke pair is
    replaced by a hub edge plus a single pendant edge.  Raises for any
    other shape.
    """
    edges = list(edges)
    center_cands = set(edges[0])
    for e in edges[1:]:
        center_cands &= set(e)
    if len(center_cands) != 1:
        raise _fail("near-copy lacks a unique center")
    center = next(iter(center_cands))
    deg: dict = {}
    for e in edges:
        for v in e:
            if v != center:
                deg[v] = deg.get(v, 0) + 1
    profile = sorted(deg.values(), reverse=True)
    if profile == [4, 4, 2, 2, 2, 2]:
        hubs = sorted(v for v, d in deg.items() if d == 4)
        return ("bipartite", center, (hubs[0], hubs[1]), None)
    if profile == [5, 4, 2, 2, 2, 1]:
        heavy = next(v for v, d in deg.items() if d == 5)
        light = next(v for v, d in deg.items() if d == 4)
        pend = next(v for v, d in deg.items() if d == 1)
        return ("pendant", center, (heavy, light), pend)
    raise _fail("near-copy has an unrecognised degree profile")


def _single_completion(state: GameState) -> Edge:
    comps = threat_completions(state, P1)
    if len(comps) != 1:
        raise _fail(f"expected exactly one completion to block, saw {len(comps)}")
    return comps[0]


def _free(state: GameState, edge: Edge) -> bool:
    return not state.is_claimed(edge)


# ---------------------------------------------------------------------------
# the hat-family strategy (9-edge target)


def _hat_check_target(state: GameState) -> None:
    fam = family_of(state.target)
    if fam is None or fam.kind != "hat":
        raise _fail("the k24 strategy only plays the 9-edge hat target")


def k24_move(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    handler = _HAT_PHASES.get(mem.phase)
    if handler is None:
        raise _fail(f"unknown phase {mem.phase!r}")
    return handler(state, mem)


def _hat_open(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    if not state.p2_edges:
        _hat_check_target(state)
        a = fresh_vertex(state)
        mem.reg["hub_a"] = a
        mem.reg["hub_b"] = a + 1
        mem.seq["anchors"] = (a + 2,)
        return StrategyDecision(mk_edge((a, a + 1, a + 2)), "star")
    v = fresh_vertex(state)
    mem.seq["anchors"] = mem.seq["anchors"] + (v,)
    if len(mem.seq["anchors"]) == 5:
        mem.phase = "assess"
    return StrategyDecision(
        mk_edge((mem.reg["hub_a"], mem.reg["hub_b"], v)), "star"
    )


def _hat_assess(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    a, b = mem.reg["hub_a"], mem.reg["hub_b"]
    anchors = mem.seq["anchors"]
    fa = free_anchors(state, a, anchors)
    fb = free_anchors(state, b, anchors)
    if len(fa) >= 2 or len(fb) >= 2:
        return _hat_free_pair_start(state, mem, fa, fb)
    return _hat_double_pair_start(state, mem)


def _hat_free_pair_start(state, mem, fa, fb) -> StrategyDecision:
    a, b = mem.reg["hub_a"], mem.reg["hub_b"]
    quals = [h for h, f in ((a, fa), (b, fb)) if len(f) >= 2]
    if len(quals) == 1:
        c = quals[0]
    else:
        # both hubs qualify: prefer a center outside the opponent's
        # second edge (or either, if that edge spans both hubs)
        e_star = _p1_moves(state)[1]
        in_star = [h for h in (a, b) if h in e_star]
        c = a if len(in_star) != 1 else (b if in_star == [a] else a)
    x = b if c == a else a
    fc = fa if c == a else fb
    picked = sorted(fc, key=lambda v: (_deg(state, v), v))[:2]
    mem.reg["center"] = c
    mem.reg["off_hub"] = x
    mem.seq["first_pair"] = tuple(sorted(picked))
    mem.phase = "pick-pivot"
    return StrategyDecision(mk_edge((c, picked[0], picked[1])), "fan")


def _hat_pick_pivot(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    c = mem.reg["center"]
    pair = mem.seq["first_pair"]
    others = [v for v in mem.seq["anchors"] if v not in pair]
    good = [
        p
        for p in pair
        if all(mk_edge((c, g, p)) not in state.p1_edges for g in others)
    ]
    if not good:
        raise _fail("both pivot candidates were spoiled in a single move")
    pivot = min(good)
    partner = pair[0] if pair[1] == pivot else pair[1]
    others.sort(key=lambda v: (-_deg(state, v), v))
    v3 = others[0]
    v1, v2 = sorted(others[1:])
    mem.reg["pivot"] = pivot
    mem.reg["v_backup"] = partner
    mem.seq["reserve"] = tuple(
        sorted((mk_edge((c, v1, pivot)), mk_edge((c, v2, pivot))))
    )
    mem.seq["loop_hubs"] = (mem.reg["off_hub"], pivot)
    mem.phase = "spoke-branch"
    return StrategyDecision(mk_edge((c, v3, pivot)), "fan")


def _claim_reserve(state, mem, tag="scaffold") -> StrategyDecision:
    open_res = [e for e in mem.seq["reserve"] if _free(state, e)]
    if not open_res:
        raise _fail("both reserved spoke edges are gone")
    return StrategyDecision(open_res[0], tag)


def _hat_spoke_branch(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    from .hypercore import max_overlap

    m = max_overlap(state.target, state.p1_edges, state.p2_edges)
    mem.scal["branch_progress"] = m
    if m <= 6:
        mem.phase = "await-distraction"
        return _claim_reserve(state, mem)
    if m == 7:
        mem.phase = "tight-dispatch"
        return _claim_reserve(state, mem)
    if m != 8:
        raise _fail(f"impossible progress {m} at the second branch point")
    # all eight opponent edges sit in one near-copy; its shape decides
    block = _single_completion(state)
    kind, center, hubs, pend = _classify_tight_block(state.p1_edges)
    if kind == "bipartite":
        if block != mk_edge((center, hubs[0], hubs[1])):
            raise _fail("grid near-copy must complete through its hub edge")
        mem.phase = "after-grid-block"
    else:
        if block != mk_edge((center, hubs[1], pend)):
            raise _fail("pendant near-copy must complete at its pendant")
        mem.reg["tower_center"] = center
        mem.seq["tower_hubs"] = hubs
        mem.phase = "tower-mirror"
    return StrategyDecision(block, "block")


def _hat_after_grid_block(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    mem.phase = "await-distraction"
    return _claim_reserve(state, mem)


def _tower_mirror(state: GameState, mem: StrategyMemory) -> StrategyDecision | None:
    """Answer a tower threat with its mirror edge, or None if no threat."""
    if not has_threat(state, P1):
        return None
    tc = mem.reg["tower_center"]
    hubs = set(mem.seq["tower_hubs"])
    block = _single_completion(state)
    if tc not in block or len(hubs & set(block)) != 1:
        raise _fail("in-tower threat does not have the mirror shape")
    last = _last_p1_edge(state)
    w = next(iter(set(block) - {tc} - hubs))
    other = next(iter(hubs - set(block)))
    if last != mk_edge((tc, other, w)):
        raise _fail("tower threat was not created by the mirrored claim")
    return StrategyDecision(block, "mirror")


def _hat_tower(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    dec = _tower_mirror(state, mem)
    if dec is not None:
        return dec
    # threats have dried up: finish the spoke scaffold
    dec = _claim_reserve(state, mem)
    other = [e for e in mem.seq["reserve"] if e != dec.edge and _free(state, e)]
    mem.phase = "tower-await-block" if other else "tower-mirror2"
    return dec


def _hat_tower_await(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    # the opponent blocked our spoke threat (else win-first fired)
    return _hat_loop_entry(state, mem)


def _hat_tower2(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    dec = _tower_mirror(state, mem)
    if dec is not None:
        return dec
    return _hat_loop_entry(state, mem)


def _hat_loop_entry(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    hx, hy = mem.seq["loop_hubs"]
    c = mem.reg["center"]
    if not _enter_distraction(state, mem, FAMILY_HAT, c, [(hx, hy), (hy, hx)]):
        raise _fail("lure-loop preconditions failed in both orientations")
    return _lure_move(state, mem)


def _hat_tight_dispatch(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    from .hypercore import max_overlap

    m = max_overlap(state.target, state.p1_edges, state.p2_edges)
    if m <= 7:
        return _hat_await_distraction(state, mem)
    if m != 8:
        raise _fail(f"impossible progress {m} after the spoke threat")
    recs = threats(state, P1)
    block = _single_completion(state)
    if len(recs) != 1:
        raise _fail("ambiguous near-copy after the spoke threat")
    img = recs[0].edges
    for e in mem.seq["reserve"]:
        if e in img:
            raise _fail("near-copy reuses a reserved spoke edge")
    kind, center, hubs, pend = _classify_tight_block(img)
    if kind == "bipartite":
        mem.phase = "await-distraction"
    else:
        mem.reg["tower_center"] = center
        mem.seq["tower_hubs"] = hubs
        mem.phase = "tower-mirror2"
    return StrategyDecision(block, "block")


def _hat_await_distraction(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    if has_threat(state, P1):
        # provably unreachable here; block soundly and re-enter next turn
        return StrategyDecision(_single_completion(state), "block")
    if len(state.p1_edges) > 10:
        raise _fail("opponent claimed too many edges before the lure loop")
    return _hat_loop_entry(state, mem)


def _hat_double_pair_start(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    a, b = mem.reg["hub_a"], mem.reg["hub_b"]
    anchors = mem.seq["anchors"]
    aset = set(anchors)
    moves = _p1_moves(state)
    hub_pairs: dict = {a: [], b: []}
    leftovers = []
    for e in state.p1_edges:
        for hub in (a, b):
            rest = set(e) - {hub}
            if hub in e and len(rest) == 2 and rest <= aset:
                hub_pairs[hub].append(tuple(sorted(rest)))
                break
        else:
            leftovers.append(e)
    if sorted(leftovers) != sorted(moves[:2]):
        raise _fail("low-freedom position lacks the double-pair pattern")
    for hub in (a, b):
        ps = hub_pairs[hub]
        flat = {v for p in ps for v in p}
        if len(ps) != 2 or len(flat) != 4:
            raise _fail("low-freedom position lacks the double-pair pattern")
    p_one, p_two = sorted(hub_pairs[a], key=min)
    fan = next(iter(aset - set(p_one) - set(p_two)))
    v1, v2 = sorted(p_one)
    v3, v4 = sorted(p_two)
    mem.reg["center"] = a
    mem.reg["off_hub"] = b
    mem.seq["fan_labels"] = (v1, v2, v3, v4, fan)
    mem.phase = "fan2"
    return StrategyDecision(mk_edge((a, v4, fan)), "fan")


def _hat_fan2(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    a = mem.reg["center"]
    v1, v2, v3, v4, fan = mem.seq["fan_labels"]
    w = [u for u in (v1, v2) if _free(state, mk_edge((a, u, fan)))]
    if not w:
        raise _fail("both first-pair fan edges are gone after one move")
    if w[0] != v1:
        v1, v2 = v2, v1
        mem.seq["fan_labels"] = (v1, v2, v3, v4, fan)
    mem.phase = "fan3"
    return StrategyDecision(mk_edge((a, v1, fan)), "fan")


def _hat_fan3(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    a = mem.reg["center"]
    b = mem.reg["off_hub"]
    v1, v2, v3, v4, fan = mem.seq["fan_labels"]
    cands = sorted(
        e for e in (mk_edge((a, v2, fan)), mk_edge((a, v3, fan))) if _free(state, e)
    )
    if cands:
        mem.seq["loop_hubs"] = (b, fan)
        mem.phase = "await-distraction"
        return StrategyDecision(cands[0], "scaffold")
    mem.phase = "fan4"
    return StrategyDecision(mk_edge((a, v1, v4)), "fan")


def _hat_fan4(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    a = mem.reg["center"]
    b = mem.reg["off_hub"]
    v1, v2, v3, v4, fan = mem.seq["fan_labels"]
    options = [
        (mk_edge((a, v2, v4)), v4),
        (mk_edge((a, v1, v3)), v1),
    ]
    open_opts = sorted((e, hub) for e, hub in options if _free(state, e))
    if not open_opts:
        raise _fail("both closing fan edges are gone after one move")
    edge, hub = open_opts[0]
    mem.seq["loop_hubs"] = (b, hub)
    mem.phase = "await-distraction"
    return StrategyDecision(edge, "scaffold")


def _hat_distraction(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    if has_threat(state, P1):
        raise _fail("opponent found a threat inside the lure loop")
    return _lure_move(state, mem)


_HAT_PHASES = {
    "open": _hat_open,
    "assess": _hat_assess,
    "pick-pivot": _hat_pick_pivot,
    "spoke-branch": _hat_spoke_branch,
    "after-grid-block": _hat_after_grid_block,
    "tower-mirror": _hat_tower,
    "tower-await-block": _hat_tower_await,
    "tower-mirror2": _hat_tower2,
    "tight-dispatch": _hat_tight_dispatch,
    "fan2": _hat_fan2,
    "fan3": _hat_fan3,
    "fan4": _hat_fan4,
    "await-distraction": _hat_await_distraction,
    "distraction": _hat_distraction,
}


# ---------------------------------------------------------------------------
# the fan-family strategy (3t-edge targets, t >= 3)


def _fan_check_target(state: GameState, t: int) -> None:
    fam = family_of(state.target)
    if fam is None or fam.kind != "fan" or fam.t != t:
        raise _fail(f"the k2t strategy instance expects the t={t} fan target")


def k2t_move(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    handler = _FAN_PHASES.get(mem.phase)
    if handler is None:
        raise _fail(f"unknown phase {mem.phase!r}")
    return handler(state, mem, t)


def _fan_open(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    if not state.p2_edges:
        _fan_check_target(state, t)
        x1 = fresh_vertex(state)
        mem.reg["post_a"] = x1
        mem.reg["post_b"] = x1 + 1
        mem.seq["spokes"] = (x1 + 2,)
        return StrategyDecision(mk_edge((x1, x1 + 1, x1 + 2)), "star")
    y = fresh_vertex(state)
    mem.seq["spokes"] = mem.seq["spokes"] + (y,)
    if len(mem.seq["spokes"]) == 2 * t - 1:
        mem.phase = "pick-tail"
    return StrategyDecision(
        mk_edge((mem.reg["post_a"], mem.reg["post_b"], y)), "star"
    )


def _fan_unique_roles(state: GameState, want: int) -> tuple:
    """The unique concrete (center, hubs) of the opponent's near-copy."""
    from .hypercore import max_overlap_roles

    value, roleset = max_overlap_roles(
        state.target, state.p1_edges, state.p2_edges
    )
    if value != want:
        raise _fail("progress changed while reading copy roles")
    if len(roleset) != 1:
        raise _fail("copy roles are not unique at full progress")
    center, mains = next(iter(roleset))
    mains = tuple(sorted(m for m in mains if m is not None))
    if center is None or len(mains) != 2:
        raise _fail("copy roles are not all concrete at full progress")
    return center, mains


def _fan_pick_tail(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    from .hypercore import max_overlap

    xa, xb = mem.reg["post_a"], mem.reg["post_b"]
    m = max_overlap(state.target, state.p1_edges, state.p2_edges)
    mem.scal["star_progress"] = m
    center = None
    if m == 2 * t:
        center, mains = _fan_unique_roles(state, m)
        mem.reg["copy_center"] = center
        mem.seq["copy_hubs"] = mains
        overlap = [x for x in (xa, xb) if x in mains]
        if len(overlap) > 1:
            raise _fail("both posts appear as hubs of the opponent copy")
        if overlap:
            x_c = xb if overlap[0] == xa else xa
        else:
            x_c = min((xa, xb), key=lambda v: (_deg(state, v), v))
    else:
        x_c = min((xa, xb), key=lambda v: (_deg(state, v), v))
    x_m = xb if x_c == xa else xa
    tail = fresh_vertex(state)
    mem.reg["center"] = x_c
    mem.reg["off_post"] = x_m
    mem.reg["tail"] = tail
    mem.phase = "tail-branch"
    return StrategyDecision(mk_edge((x_c, tail, mem.seq["spokes"][0])), "tail")


def _fan_tail_branch(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    from .hypercore import max_overlap

    m = max_overlap(state.target, state.p1_edges, state.p2_edges)
    if m <= 2 * t:
        mem.phase = "tailfill"
        return _fan_tailfill(state, mem, t)
    if m != 2 * t + 1:
        raise _fail(f"impossible progress {m} after the tail move")
    if "copy_center" not in mem.reg:
        raise _fail("full progress reached without a recorded near-copy")
    center, hubs = _fan_unique_roles(state, m)
    if center != mem.reg["copy_center"] or hubs != mem.seq["copy_hubs"]:
        raise _fail("the opponent near-copy changed identity")
    ha, hb = hubs
    spoke_hubs: dict = {}
    for e in state.p1_edges:
        rest = set(e) - {center}
        picked = rest & {ha, hb}
        if center not in e or len(rest) != 2 or len(picked) != 1:
            raise _fail("opponent edge is not a hub-spoke edge of the near-copy")
        v = next(iter(rest - picked))
        spoke_hubs.setdefault(v, set()).update(picked)
    both = {v for v, hs in spoke_hubs.items() if len(hs) == 2}
    only_a = {v for v, hs in spoke_hubs.items() if hs == {ha}}
    only_b = {v for v, hs in spoke_hubs.items() if hs == {hb}}
    if 2 * len(both) + len(only_a) + len(only_b) != 2 * t + 1:
        raise _fail("near-copy spoke counts do not add up")
    exchange = {mk_edge((center, hb, v)) for v in only_a}
    exchange |= {mk_edge((center, ha, v)) for v in only_b}
    if len(exchange) != 2 * (t - len(both)) + 1:
        raise _fail("exchange set has the wrong size")
    for e in exchange:
        if state.is_claimed(e):
            raise _fail("exchange edge is already claimed")
    mem.reg["copy_hub_a"] = ha
    mem.reg["copy_hub_b"] = hb
    mem.scal["doubly"] = len(both)
    mem.sets["exchange"] = exchange
    mem.sets["swap_replies"] = set()
    mem.sets["mirror_replies"] = set()
    mem.sets["fallback"] = set()
    first = min(exchange)
    exchange.discard(first)
    mem.phase = "exchange-play"
    return StrategyDecision(first, "exchange")


def _fan_tailfill(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    x_c, tail = mem.reg["center"], mem.reg["tail"]
    owned = sum(1 for e in state.p2_edges if x_c in e and tail in e)
    if owned < t:
        free = [
            mk_edge((x_c, tail, y))
            for y in mem.seq["spokes"]
            if _free(state, mk_edge((x_c, tail, y)))
        ]
        if not free:
            raise _fail("no tail spoke left to claim before the scaffold is full")
        if owned + 1 == t:
            mem.phase = "loop-entry"
        return StrategyDecision(min(free), "tailfill")
    return _fan_loop_entry(state, mem, t)


def _fan_enter_loop(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    return _fan_loop_entry(state, mem, t)


def _fan_loop_entry(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    c = mem.reg["center"]
    tail, x_m = mem.reg["tail"], mem.reg["off_post"]
    if not _enter_distraction(
        state, mem, fan_family(t), c, [(tail, x_m), (x_m, tail)]
    ):
        raise _fail("lure-loop preconditions failed in both orientations")
    return _lure_move(state, mem)


def _fan_exchange_play(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    a1 = mem.reg["copy_center"]
    ha, hb = mem.reg["copy_hub_a"], mem.reg["copy_hub_b"]
    exchange = mem.sets["exchange"]
    last = _last_p1_edge(state)
    if last in exchange:
        exchange.discard(last)
        mem.sets["swap_replies"].add(last)
        if not exchange:
            raise _fail("exchange set emptied on the opponent's move")
        reply = min(exchange)
        exchange.discard(reply)
        return StrategyDecision(reply, "exchange")
    rest = set(last) - {a1}
    picked = rest & {ha, hb}
    if a1 in last and len(picked) == 1:
        v = next(iter(rest - picked))
        if v not in (ha, hb):
            other = hb if picked == {ha} else ha
            mirror = mk_edge((a1, other, v))
            if state.is_claimed(mirror):
                raise _fail("mirror reply is already claimed")
            mem.sets["mirror_replies"].add(last)
            return StrategyDecision(mirror, "mirror")
    if set(last) == {a1, ha, hb}:
        mem.audit.append("opponent claimed the hub-hub edge; using spoke fallback")
    mem.sets["fallback"].add(last)
    x_c, tail = mem.reg["center"], mem.reg["tail"]
    free = [
        mk_edge((x_c, tail, y))
        for y in mem.seq["spokes"]
        if _free(state, mk_edge((x_c, tail, y)))
    ]
    if free:
        return StrategyDecision(min(free), "tailfill")
    owned = sum(1 for e in state.p2_edges if x_c in e and tail in e)
    if owned < t:
        raise _fail("tail spokes exhausted before the scaffold was full")
    return _fan_loop_entry(state, mem, t)


def _fan_distraction(state: GameState, mem: StrategyMemory, t: int) -> StrategyDecision:
    if has_threat(state, P1):
        raise _fail("opponent found a threat inside the lure loop")
    return _lure_move(state, mem)


_FAN_PHASES = {
    "open": _fan_open,
    "pick-tail": _fan_pick_tail,
    "tail-branch": _fan_tail_branch,
    "tailfill": _fan_tailfill,
    "loop-entry": _fan_enter_loop,
    "exchange-play": _fan_exchange_play,
    "distraction": _fan_distraction,
}


# ---------------------------------------------------------------------------
# standalone lure-loop strategy


def infer_distraction_roles(state: GameState) -> tuple | None:
    """Find the lexicographically first (c, x, y) whose lure-loop
    preconditions hold in the current position, or None."""
    fam = family_of(state.target)
    if fam is None:
        return None
    verts = sorted({v for e in state.p2_edges for v in e})
    for c in verts:
        pairs = x_board(state.p2_edges, c)
        if not pairs:
            continue
        nbrs = _nbr_map(pairs)
        cands = sorted(nbrs)
        for hx in cands:
            for hy in cands:
                if hy == hx:
                    continue
                if distraction_ready(state, c, hx, hy, fam):
                    return c, hx, hy
    return None


def distraction_move(state: GameState, mem: StrategyMemory) -> StrategyDecision:
    if mem.distraction is None:
        roles = infer_distraction_roles(state)
        if roles is None:
            raise _fail("no vertex triple satisfies the lure-loop preconditions")
        fam = family_of(state.target)
        c, hx, hy = roles
        if not _enter_distraction(state, mem, fam, c, [(hx, hy)]):
            raise _fail("no vertex triple satisfies the lure-loop preconditions")
        return _lure_move(state, mem)
    if has_threat(state, P1):
        raise _fail("opponent found a threat inside the lure loop")
    return _lure_move(state, mem)


# ---------------------------------------------------------------------------
# the P2 wrapper


class WrongTurnForStrategy(GameError):
    pass


class P2Player:
    """Pairs a strategy function with its memory and the universal rules.

    ``decide`` never mutates the game state; it does advance the
    strategy memory, so call it exactly once per position.
    """

    def __init__(self, name: str, fn, mem: StrategyMemory | None = None):
        self.name = name
        self._fn = fn
        self.mem = mem if mem is not None else StrategyMemory()

    def clone(self) -> "P2Player":
        return P2Player(self.name, self._fn, self.mem.clone())

    def decide(self, state: GameState) -> StrategyDecision:
        if state.to_move != P2:
            raise WrongTurnForStrategy("strategy asked to move out of turn")
        wins = threat_completions(state, P2)
        if wins:
            return StrategyDecision(wins[0], "win")
        dec = self._fn(state, self.mem)
        if state.is_claimed(dec.edge):
            raise _fail(f"strategy chose a claimed edge {dec.edge}")
        if has_threat(state, P1):
            comps = threat_completions(state, P1)
            if len(comps) > 1:
                raise _fail("opponent holds a double threat; position is lost")
            if dec.edge not in comps:
                raise _fail("strategy failed to block a live threat")
        return dec


def resume_player(name: str, state: GameState) -> P2Player:
    """Rebuild a strategy player from a game's move log.

    Replays the log from an empty board, checking that every recorded
    P2 move is exactly what the named strategy would have played.
    """
    player = get_p2_strategy(name)
    sim = new_game(state.target, horizon=state.horizon)
    for pl, e in state.move_log:
        if pl == P2:
            dec = player.decide(sim)
            if dec.edge != e:
                raise _fail(
                    f"log deviates from {name}: expected {dec.edge}, saw {e}"
                )
        sim = apply_move(sim, pl, e)
    return player


# ---------------------------------------------------------------------------
# first-player adversaries


class RandomP1:
    """Uniform over unclaimed edges with ids below pool size + arity."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def decide(self, state: GameState) -> Edge:
        k = state.target.k
        hi = state.pool_size + k
        if hi < k:
            hi = k
        while True:
            e = mk_edge(sorted(self._rng.sample(range(hi), k)))
            if not state.is_claimed(e):
                return e


class GreedyP1:
    """Win if possible, otherwise make the progress-maximising claim."""

    def decide(self, state: GameState) -> Edge:
        wins = threat_completions(state, P1)
        if wins:
            return wins[0]
        return lowest_increasing_edge(
            state.target, state.p1_edges, state.p2_edges, state.pool_size
        )


class ScriptedP1:
    """Plays a fixed list of edges, then raises ScriptExhausted."""

    def __init__(self, edges):
        self._queue = list(edges)
        self._at = 0

    @classmethod
    def from_file(cls, path: str) -> "ScriptedP1":
        with open(path, "r", encoding="utf-8") as fh:
            _, edges = parse_edge_text(fh.read())
        return cls(edges)

    def decide(self, state: GameState) -> Edge:
        if self._at >= len(self._queue):
            raise ScriptExhausted(f"script ended after {self._at} moves")
        e = self._queue[self._at]
        self._at += 1
        return e


# ---------------------------------------------------------------------------
# registries

_K2T_NAME = re.compile(r"^k2t:(\d+)$")
_RANDOM_NAME = re.compile(r"^p1-random:(-?\d+)$")


def get_p2_strategy(name: str) -> P2Player:
    if name == "k24":
        return P2Player(name, k24_move)
    m = _K2T_NAME.match(name)
    if m:
        t = int(m.group(1))
        if t < 3:
            raise ValueError(f"fan strategy needs t >= 3, got {t}")
        return P2Player(name, partial(k2t_move, t=t))
    if name == "distraction":
        return P2Player(name, distraction_move)
    raise ValueError(f"unknown P2 strategy {name!r}")


def get_p1_policy(name: str):
    m = _RANDOM_NAME.match(name)
    if m:
        return RandomP1(int(m.group(1)))
    if name == "p1-greedy":
        return GreedyP1()
    if name.startswith("p1-scripted:"):
        return ScriptedP1.from_file(name.split(":", 1)[1])
    raise ValueError(f"unknown P1 policy {name!r}")
