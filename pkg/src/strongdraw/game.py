"""Rules of the strong game: turns, legality, win/draw detection, threats.

A GameState is a value: apply_move returns a new state and never mutates.
The vertex pool is lazy — claiming an edge with ids beyond the current pool
grows it, so the infinite board never materializes.

Threat records are maintained incrementally.  A record is born only when its
owner claims an edge (any new almost-copy must pass through that edge) and
dies only when some player claims its completing edge.  Records whose
completing edge has a slot that no claimed vertex constrains (the missing
target edge had a vertex of degree 1) are stored once in symbolic form and
expanded on demand against the current pool.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .hypercore import TargetGraph, get_target, mk_edge

P1, P2 = 1, 2


class GameError(Exception):
    pass


class WrongTurn(GameError):
    pass


class EdgeAlreadyClaimed(GameError):
    pass


class ArityMismatch(GameError):
    pass


@dataclass(frozen=True)
class GameStatus:
    kind: str  # "ongoing" | "p1win" | "p2win" | "draw"
    embedding: tuple | None = None  # sorted (target_vertex, host_vertex) pairs

    @property
    def ongoing(self) -> bool:
        return self.kind == "ongoing"

    def winner(self):
        return {"p1win": P1, "p2win": P2}.get(self.kind)


ONGOING = GameStatus("ongoing")
DRAWN = GameStatus("draw")


@dataclass(frozen=True)
class ThreatRecord:
    owner: int
    edges: frozenset  # the claimed almost-copy, as edge images
    completing: tuple  # unclaimed edge that would finish the copy
    uses_fresh: bool  # completing edge contains the placeholder id pool_size

    def key(self):
        return (self.edges, self.completing)


class GameState:
    __slots__ = (
        "target", "pool_size", "p1_edges", "p2_edges", "move_log", "to_move",
        "horizon", "status", "_d1", "_d2", "_recs1", "_recs2",
    )

    def __init__(self, target: TargetGraph, horizon: int | None = None):
        self.target = target
        self.pool_size = 0
        self.p1_edges = frozenset()
        self.p2_edges = frozenset()
        self.move_log = ()
        self.to_move = P1
        self.horizon = horizon
        self.status = ONGOING
        self._d1 = ()
        self._d2 = ()
        # internal record stores: frozenset of (imgset, completing-template)
        # where a template is a sorted tuple with None marking free slots
        self._recs1 = frozenset()
        self._recs2 = frozenset()

    # -- queries ---------------------------------------------------------

    def edges_of(self, player: int) -> frozenset:
        return self.p1_edges if player == P1 else self.p2_edges

    def is_claimed(self, edge) -> bool:
        e = tuple(sorted(edge))
        return e in self.p1_edges or e in self.p2_edges

    def degree(self, player: int, v: int) -> int:
        d = self._d1 if player == P1 else self._d2
        return d[v] if 0 <= v < len(d) else 0

    def max_degree(self, player: int) -> int:
        d = self._d1 if player == P1 else self._d2
        return max(d) if d else 0

    def __repr__(self) -> str:
        return (f"<GameState {self.target.name} moves={len(self.move_log)} "
                f"status={self.status.kind}>")


def new_game(target: TargetGraph, horizon: int | None = None) -> GameState:
    return GameState(target, horizon)


def fresh_vertex(state: GameState) -> int:
    """Lowest vertex id no player has ever touched."""
    return state.pool_size


def _copy_state(s: GameState) -> GameState:
    t = GameState.__new__(GameState)
    for f in GameState.__slots__:
        setattr(t, f, getattr(s, f))
    return t


def apply_move(state: GameState, player: int, edge) -> GameState:
    """Claim an edge; returns the successor state."""
    if not state.status.ongoing:
        raise WrongTurn(f"game already over ({state.status.kind})")
    if player != state.to_move:
        raise WrongTurn(f"player {player} moved on player {state.to_move}'s turn")
    e = mk_edge(edge)
    if len(e) != state.target.k:
        raise ArityMismatch(f"edge {e} is not {state.target.k}-uniform")
    if e in state.p1_edges or e in state.p2_edges:
        raise EdgeAlreadyClaimed(f"{e} is already claimed")

    nxt = _copy_state(state)
    nxt.pool_size = max(state.pool_size, e[-1] + 1)
    own = (state.p1_edges if player == P1 else state.p2_edges) | {e}
    if player == P1:
        nxt.p1_edges = own
    else:
        nxt.p2_edges = own
    nxt.move_log = state.move_log + ((player, e),)
    nxt.to_move = P2 if player == P1 else P1

    # degrees
    dmine = list(state._d1 if player == P1 else state._d2)
    if len(dmine) < nxt.pool_size:
        dmine.extend([0] * (nxt.pool_size - len(dmine)))
    for v in e:
        dmine[v] += 1
    dmine = tuple(dmine)
    if player == P1:
        nxt._d1 = dmine
        if len(state._d2) < nxt.pool_size:
            nxt._d2 = state._d2 + (0,) * (nxt.pool_size - len(state._d2))
    else:
        nxt._d2 = dmine
        if len(state._d1) < nxt.pool_size:
            nxt._d1 = state._d1 + (0,) * (nxt.pool_size - len(state._d1))

    # records of either player whose completing edge just got claimed die
    nxt._recs1 = frozenset(
        r for r in state._recs1 if None in r[1] or r[1] != e)
    nxt._recs2 = frozenset(
        r for r in state._recs2 if None in r[1] or r[1] != e)

    # win check: a new copy must pass through the new edge
    emb = _find_copy_through(state.target, own, dmine, e)
    if emb is not None:
        nxt.status = GameStatus(
            "p1win" if player == P1 else "p2win",
            tuple(sorted(emb.items())))
        return nxt

    # new threat records of the mover through the new edge
    born = _born_records(state.target, own, dmine, e,
                         nxt.p1_edges, nxt.p2_edges)
    if born:
        if player == P1:
            nxt._recs1 = nxt._recs1 | born
        else:
            nxt._recs2 = nxt._recs2 | born

    if nxt.horizon is not None and len(nxt.move_log) >= nxt.horizon:
        nxt.status = DRAWN
    return nxt


def status(state: GameState) -> GameStatus:
    return state.status


# ---------------------------------------------------------------------------
# anchored pattern search
# ---------------------------------------------------------------------------

def _swap_preserves(pset, u, v):
    """True if transposing pattern vertices u and v maps the edge set to
    itself (so the two vertices are interchangeable)."""
    def sw(x):
        return v if x == u else (u if x == v else x)
    return {tuple(sorted(map(sw, e))) for e in pset} == pset


_ORDER_CACHE: dict = {}


def _pattern_order(pattern_edges, anchor, guard=frozenset()):
    """Vertex order for DFS: anchor edge's vertices first, then greedily the
    vertex closing the most pattern edges.

    Returns (order, closes_at, prev_same) where prev_same[i] is the index
    of the most recent earlier non-anchor vertex interchangeable with
    order[i], or -1.  Interchangeable vertices are forced into increasing
    host images, which collapses pattern-automorphic duplicates.  ``guard``
    holds vertices whose images feed the completing-edge template: they may
    only be swapped with each other, never with unguarded vertices.
    """
    key = (tuple(pattern_edges), tuple(anchor), guard)
    hit = _ORDER_CACHE.get(key)
    if hit is not None:
        return hit
    verts = sorted({v for pe in pattern_edges for v in pe})
    order = list(anchor)
    placed = set(order)
    while len(order) < len(verts):
        best, bkey = None, None
        for v in verts:
            if v in placed:
                continue
            closing = 0
            touch = 0
            for pe in pattern_edges:
                if v in pe:
                    others = [u for u in pe if u != v]
                    if all(u in placed for u in others):
                        closing += 1
                    elif any(u in placed for u in others):
                        touch += 1
            k = (closing, touch)
            if bkey is None or k > bkey:
                best, bkey = v, k
        order.append(best)
        placed.add(best)
    pos = {v: i for i, v in enumerate(order)}
    closes_at = [[] for _ in order]
    for pe in pattern_edges:
        closes_at[max(pos[v] for v in pe)].append(pe)
    pset = set(pattern_edges)
    na = len(anchor)
    prev_same = [-1] * len(order)
    for i in range(na, len(order)):
        for j in range(i - 1, na - 1, -1):
            u, v = order[j], order[i]
            if (u in guard) == (v in guard) and _swap_preserves(pset, u, v):
                prev_same[i] = j
                break
    out = (order, closes_at, prev_same)
    _ORDER_CACHE[key] = out
    return out


def _anchored_embeddings(pattern_edges, anchor_edge, image_edge, host_edges,
                         host_deg, guard=frozenset()):
    """Embeddings of pattern_edges (a connected list of target-vertex edges)
    into host_edges with anchor_edge mapped onto image_edge.  Yields dicts.

    Embeddings that differ only by permuting interchangeable pattern
    vertices are yielded once (guarded vertices excepted; see
    _pattern_order)."""
    k = len(anchor_edge)
    pdeg: dict[int, int] = {}
    for pe in pattern_edges:
        for v in pe:
            pdeg[v] = pdeg.get(v, 0) + 1
    order, closes_at, prev_same = _pattern_order(
        pattern_edges, anchor_edge, guard)
    hosts = sorted(host_deg)

    import itertools as _it
    for perm in _it.permutations(image_edge, k):
        if any(host_deg.get(h, 0) < pdeg[a] for a, h in zip(anchor_edge, perm)):
            continue
        assign = dict(zip(anchor_edge, perm))
        used = set(perm)

        def extend(i):
            if i == len(order):
                yield dict(assign)
                return
            v = order[i]
            need = pdeg[v]
            j = prev_same[i]
            lo = assign[order[j]] if j >= 0 else -1
            for hv in hosts:
                if hv <= lo or hv in used or host_deg.get(hv, 0) < need:
                    continue
                assign[v] = hv
                ok = True
                for pe in closes_at[i]:
                    img = tuple(sorted(assign[u] for u in pe))
                    if img not in host_edges:
                        ok = False
                        break
                if ok:
                    used.add(hv)
                    yield from extend(i + 1)
                    used.discard(hv)
            assign.pop(v, None)

        # the anchor edge itself may close at position k-1 boundary: check
        ok = True
        for i in range(k):
            for pe in closes_at[i]:
                img = tuple(sorted(assign[u] for u in pe))
                if img not in host_edges:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield from extend(k)


def _find_copy_through(target, own_edges, own_deg_tuple, new_edge):
    """An embedding of the full target inside own_edges using new_edge,
    or None.  Gated by degrees so it is O(k) for almost every move."""
    m = len(target.edges)
    if target.universal_center is not None:
        if max(own_deg_tuple[v] for v in new_edge) < m:
            return None
    elif max(own_deg_tuple) < target.max_degree:
        return None
    host_deg = {v: d for v, d in enumerate(own_deg_tuple) if d}
    for te in target.edges:
        for emb in _anchored_embeddings(
                target.edges, te, new_edge, own_edges, host_deg):
            return emb
    return None


def _born_records(target, own_edges, own_deg_tuple, new_edge, p1, p2):
    """All (imgset, completing-template) records created by new_edge."""
    m = len(target.edges)
    if target.universal_center is not None:
        if max(own_deg_tuple[v] for v in new_edge) < m - 1:
            return ()
    elif max(own_deg_tuple) < target.max_degree - 1:
        return ()
    host_deg = {v: d for v, d in enumerate(own_deg_tuple) if d}
    out = set()
    for miss in target.edges:
        spots = target.private_spots[miss]
        pattern = [e for e in target.edges if e != miss]
        fixed_miss = [v for v in miss if v not in spots]
        guard = frozenset(fixed_miss)
        for anchor in pattern:
            for emb in _anchored_embeddings(
                    pattern, anchor, new_edge, own_edges, host_deg, guard):
                imgset = frozenset(
                    tuple(sorted(emb[u] for u in pe)) for pe in pattern)
                if new_edge not in imgset:
                    continue
                placed = sorted(emb[v] for v in fixed_miss)
                if spots:
                    comp = tuple(placed) + (None,) * len(spots)
                    out.add((imgset, comp))
                else:
                    comp = tuple(placed)
                    if comp in p1 or comp in p2:
                        continue
                    out.add((imgset, comp))
    return frozenset(out)


# ---------------------------------------------------------------------------
# threats
# ---------------------------------------------------------------------------

def threats(state: GameState, player: int):
    """All current threat records for player, deduplicated and sorted.
    Symbolic records expand against every seen vertex plus one placeholder
    fresh id equal to pool_size.

    The record store is maintained move by move while the game is live; a
    finished state omits whatever the final move would have created, so
    this is only meaningful on ongoing states."""
    store = state._recs1 if player == P1 else state._recs2
    pool = state.pool_size
    p1, p2 = state.p1_edges, state.p2_edges
    out = {}
    for imgset, comp in store:
        if None not in comp:
            if comp in p1 or comp in p2:
                continue  # killed; kept only defensively
            out[(imgset, comp)] = ThreatRecord(player, imgset, comp, False)
            continue
        fixed = [v for v in comp if v is not None]
        nslots = len(comp) - len(fixed)
        used = {v for e in imgset for v in e}
        cands = [w for w in range(pool) if w not in used]
        cands.append(pool)
        for fill in _injective_fills(cands, nslots):
            full = tuple(sorted(fixed + list(fill)))
            if full in p1 or full in p2:
                continue
            key = (imgset, full)
            if key not in out:
                out[key] = ThreatRecord(player, imgset, full, pool in fill)
    return tuple(sorted(out.values(),
                        key=lambda r: (r.completing, sorted(r.edges))))


def _injective_fills(cands, n):
    if n == 1:
        for c in cands:
            yield (c,)
        return
    import itertools as _it
    yield from _it.permutations(cands, n)


def has_threat(state: GameState, player: int) -> bool:
    """Cheap emptiness test (symbolic records always instantiate: the
    placeholder completing edge is never claimed)."""
    store = state._recs1 if player == P1 else state._recs2
    for imgset, comp in store:
        if None in comp:
            return True
        if comp not in state.p1_edges and comp not in state.p2_edges:
            return True
    return False


def threat_completions(state: GameState, player: int):
    """Sorted distinct completing edges over the player's current threats."""
    return sorted({r.completing for r in threats(state, player)})


# ---------------------------------------------------------------------------
# trace round-trip (JSONL)
# ---------------------------------------------------------------------------

def trace_dump(state: GameState) -> str:
    """Serialize header + move list; bit-exact round-trip with trace_load."""
    lines = [json.dumps(
        {"k": state.target.k, "target": state.target.name,
         "horizon": state.horizon},
        separators=(",", ":"))]
    for i, (p, e) in enumerate(state.move_log, start=1):
        lines.append(json.dumps(
            {"i": i, "p": p, "e": list(e)}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def trace_load(text: str, target: TargetGraph | None = None) -> GameState:
    """Replay a trace dump; the target is resolved by registry name unless
    one is supplied."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty trace")
    head = json.loads(lines[0])
    tgt = target if target is not None else get_target(head["target"])
    if tgt.k != head["k"]:
        raise ArityMismatch(
            f"trace arity {head['k']} != target arity {tgt.k}")
    state = new_game(tgt, head.get("horizon"))
    for ln in lines[1:]:
        obj = json.loads(ln)
        state = apply_move(state, obj["p"], obj["e"])
    return state
