"""Canonical position keys, exhaustive adversarial search, playout suites,
and an exact solver for tiny complete boards.

The canonical key makes "the same position up to renaming vertices"
computable: iterated color refinement splits the vertices by structure,
then a backtracking pass over the remaining symmetric cells picks the
relabeling with the lexicographically smallest encoding.  Strategy memory
is folded into the key as extra colored structure so that two positions
merge only when the scripted player would be in the same situation in
both.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from math import comb

from .game import (
    P1,
    P2,
    GameState,
    apply_move,
    has_threat,
    new_game,
    trace_dump,
)
from .hypercore import TargetGraph, lowest_increasing_edge, mk_edge
from .oracles import (  # noqa: F401  (re-exported verification oracles)
    oracle_copies,
    oracle_max_overlap,
    oracle_threats,
)
from .strategy import (
    InapplicableState,
    P2Player,
    RandomP1,
    ScriptedP1,
    StrategyDecision,
    StrategyMemory,
    get_p1_policy,
    get_p2_strategy,
)

CanonKey = bytes


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _refine(n, inc, colors):
    """Iterate (color, sorted incident signatures) until the partition is
    stable.  Colors are dense ints; incidence is per-vertex (family, co-
    members) pairs."""
    while True:
        sigs = []
        for v in range(n):
            local = sorted(
                (fi, tuple(sorted(colors[u] for u in rest)))
                for fi, rest in inc[v]
            )
            sigs.append((colors[v], tuple(local)))
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        fresh = [rank[s] for s in sigs]
        if fresh == colors:
            return colors
        colors = fresh


def _twins(fam_sets, u, v):
    """True when transposing u and v maps every edge family to itself."""
    def sw(x):
        return v if x == u else (u if x == v else x)
    for es in fam_sets:
        if {tuple(sorted(map(sw, e))) for e in es} != es:
            return False
    return True


def canonical_form(state: GameState, extra=()) -> CanonKey:
    """Canonical byte key of (arity, claimed edges, side to move) plus any
    extra labeled edge families; equal exactly for positions related by a
    color-preserving vertex bijection."""
    fams = [
        (("claim", P1), tuple(sorted(state.p1_edges))),
        (("claim", P2), tuple(sorted(state.p2_edges))),
    ]
    fams.extend(extra)
    fams.sort(key=lambda f: repr(f[0]))
    return _canon_families(state.target.k, state.to_move, fams)


def _canon_families(k, to_move, fams) -> CanonKey:
    support = sorted({v for _, edges in fams for e in edges for v in e})
    n = len(support)
    idx = {v: i for i, v in enumerate(support)}
    fam_ix = [
        (lbl, tuple(sorted(tuple(sorted(idx[v] for v in e)) for e in edges)))
        for lbl, edges in fams
    ]
    inc = [[] for _ in range(n)]
    for fi, (_, edges) in enumerate(fam_ix):
        for e in edges:
            for v in e:
                inc[v].append((fi, tuple(u for u in e if u != v)))
    fam_sets = [set(edges) for _, edges in fam_ix]

    def encode(colors):
        label = [0] * n
        for r, v in enumerate(sorted(range(n), key=lambda u: colors[u])):
            label[v] = r
        body = tuple(
            (lbl, tuple(sorted(tuple(sorted(label[v] for v in e))
                               for e in edges)))
            for lbl, edges in fam_ix
        )
        return repr((k, to_move, n, body)).encode()

    def search(colors):
        colors = _refine(n, inc, colors)
        cells: dict[int, list] = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        cell = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                cell = cells[c]
                break
        if cell is None:
            return encode(colors)
        # branch once per twin class: transposing twins is an automorphism,
        # so their branches produce identical minima
        reps = []
        for v in cell:
            if not any(_twins(fam_sets, r, v) for r in reps):
                reps.append(v)
        best = None
        bump = n
        for v in reps:
            branched = list(colors)
            branched[v] = bump
            enc = search(branched)
            if best is None or enc < best:
                best = enc
        return best

    if n == 0:
        return repr((k, to_move, 0, tuple(lbl for lbl, _ in fam_ix))).encode()
    return search([0] * n)


def memory_overlay(mem: StrategyMemory):
    """Strategy memory as (extra edge families, residual byte tail) so a
    canonical key can cover the full (position, memory) pair."""
    fams = []
    for name in sorted(mem.reg):
        fams.append((("reg", name), ((mem.reg[name],),)))
    for name in sorted(mem.seq):
        for i, item in enumerate(mem.seq[name]):
            e = (item,) if isinstance(item, int) else tuple(item)
            fams.append((("seq", name, i), (e,)))
    for name in sorted(mem.sets):
        fams.append((("set", name), tuple(sorted(mem.sets[name]))))
    tail = [mem.phase, sorted(mem.scal.items()), tuple(mem.audit)]
    if mem.distraction is not None:
        d = mem.distraction
        for role in ("c", "x", "y"):
            fams.append((("dx", role), ((d[role],),)))
        fams.append(
            (("dx", "pending"), tuple(sorted(map(tuple, d["pending"])))))
        fam = d.get("family")
        tail.append(("dx", getattr(fam, "kind", None), getattr(fam, "t", None)))
    return tuple(fams), repr(tail).encode()


def position_key(state: GameState, player=None) -> CanonKey:
    """Canonical key of a position, including the player's memory when one
    is supplied."""
    if player is None:
        return canonical_form(state)
    fams, tail = memory_overlay(player.mem)
    return canonical_form(state, fams) + b"|" + tail


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    strategy: str
    target: str
    depth: int
    states_expanded: int = 0
    orbit_reductions: int = 0
    transposition_hits: int = 0
    outcome: dict = field(default_factory=lambda: {"kind": "NoP1WinFound"})
    violations: list = field(default_factory=list)
    wall_time: float = 0.0
    games: int = 0
    distraction_entries: int = 0

    @property
    def no_p1_win(self) -> bool:
        return self.outcome.get("kind") == "NoP1WinFound"

    def to_json(self) -> str:
        return json.dumps(
            {
                "strategy": self.strategy,
                "target": self.target,
                "depth": self.depth,
                "states_expanded": self.states_expanded,
                "orbit_reductions": self.orbit_reductions,
                "transposition_hits": self.transposition_hits,
                "outcome": self.outcome,
                "violations": self.violations,
                "wall_time": round(self.wall_time, 3),
                "games": self.games,
                "distraction_entries": self.distraction_entries,
            },
            indent=2,
        )


# ---------------------------------------------------------------------------
# players and invariants
# ---------------------------------------------------------------------------

class _WeakP2:
    """Claims the lowest free edge and nothing else; exists so the searches
    can be shown to find wins against a player that deserves to lose."""

    name = "p2-weak"

    def __init__(self):
        self.mem = StrategyMemory(phase="weak")

    def clone(self) -> "_WeakP2":
        return _WeakP2()

    def decide(self, state: GameState) -> StrategyDecision:
        k = state.target.k
        for e in itertools.combinations(range(state.pool_size + k), k):
            if not state.is_claimed(e):
                return StrategyDecision(mk_edge(e), "weak")
        raise InapplicableState("no free edge in pool")


def _make_player(strategy: str):
    if strategy == "p2-weak":
        return _WeakP2()
    return get_p2_strategy(strategy)


def strategy_invariants(state: GameState, player) -> list:
    """Checks run after every scripted reply; returns violation strings."""
    out = []
    mem = getattr(player, "mem", None)
    if mem is None:
        return out
    if mem.phase == "exchange-play":
        exch = mem.sets.get("exchange")
        if exch is not None:
            rem = sum(
                1 for e in exch
                if e not in state.p1_edges and e not in state.p2_edges
            )
            if rem % 2 == 1:
                out.append(
                    f"exchange-parity: {rem} unclaimed exchange edges")
    if mem.phase == "distraction" and has_threat(state, P1):
        out.append("lure-loop: opponent holds a threat inside the loop")
    return out


# ---------------------------------------------------------------------------
# exhaustive bounded search
# ---------------------------------------------------------------------------

def _candidate_edges(state: GameState, budget: int) -> list:
    k = state.target.k
    hi = max(state.pool_size + budget, k)
    return [
        e for e in itertools.combinations(range(hi), k)
        if not state.is_claimed(e)
    ]


def _orbit_reps(state, player, budget, report):
    groups = {}
    for e in _candidate_edges(state, budget):
        key = position_key(apply_move(state, P1, e), player)
        if key in groups:
            report.orbit_reductions += 1
        else:
            groups[key] = e
    return list(groups.values())


def _replay_p1_line(strategy: str, target: TargetGraph, p1_moves):
    """Replay a P1 move list with scripted replies; returns the final state
    or None when the line is not playable."""
    state = new_game(target)
    player = _make_player(strategy)
    for e in p1_moves:
        if not state.status.ongoing or state.is_claimed(e):
            return None
        state = apply_move(state, P1, e)
        if not state.status.ongoing:
            return state
        try:
            dec = player.decide(state)
        except InapplicableState:
            return None
        state = apply_move(state, P2, dec.edge)
        if not state.status.ongoing:
            return state
    return state


def _minimize_counterexample(strategy, target, p1_moves):
    moves = list(p1_moves)
    changed = True
    while changed and len(moves) > 1:
        changed = False
        for i in range(len(moves)):
            trial = moves[:i] + moves[i + 1:]
            final = _replay_p1_line(strategy, target, trial)
            if final is not None and final.status.kind == "p1win":
                moves = trial
                changed = True
                break
    return moves


def exhaustive_verify(strategy: str, target: TargetGraph, p1_depth: int,
                      fresh_budget: int | None = None, *,
                      reduce_orbits: bool = True,
                      use_table: bool = True) -> VerifyReport:
    """Search every first-player line of at most p1_depth moves, where each
    move ranges over the current pool plus a few placeholder fresh ids,
    collapsed to one representative per relabeling orbit.  The scripted
    player answers every move; any win it concedes becomes a minimized
    counterexample trace."""
    k = target.k
    budget = k if fresh_budget is None else min(k, fresh_budget)
    report = VerifyReport(strategy, target.name, p1_depth)
    t0 = time.perf_counter()
    table: dict[CanonKey, int] = {}
    found: list | None = None

    def walk(state, player, depth_left, prefix):
        nonlocal found
        if reduce_orbits:
            moves = _orbit_reps(state, player, budget, report)
        else:
            moves = _candidate_edges(state, budget)
        for e in moves:
            if found is not None:
                return
            s1 = apply_move(state, P1, e)
            report.states_expanded += 1
            if s1.status.kind == "p1win":
                found = prefix + [e]
                return
            if not s1.status.ongoing:
                continue
            pl = player.clone()
            try:
                dec = pl.decide(s1)
            except InapplicableState as ex:
                report.violations.append(
                    {"line": [list(m) for m in prefix + [e]],
                     "error": str(ex)})
                continue
            s2 = apply_move(s1, P2, dec.edge)
            for msg in strategy_invariants(s2, pl):
                report.violations.append(
                    {"line": [list(m) for m in prefix + [e]], "error": msg})
            if not s2.status.ongoing or depth_left <= 1:
                continue
            if use_table:
                key = position_key(s2, pl)
                if table.get(key, -1) >= depth_left - 1:
                    report.transposition_hits += 1
                    continue
                table[key] = depth_left - 1
            walk(s2, pl, depth_left - 1, prefix + [e])

    walk(new_game(target), _make_player(strategy), p1_depth, [])
    if found is not None:
        moves = _minimize_counterexample(strategy, target, found)
        final = _replay_p1_line(strategy, target, moves)
        report.outcome = {
            "kind": "CounterexampleTrace",
            "p1_moves": [list(e) for e in moves],
            "trace": trace_dump(final),
        }
    report.wall_time = time.perf_counter() - t0
    return report


def naive_orbit_count(state: GameState, player, wide_pool: int = 12) -> int:
    """Independent check value: enumerate every unclaimed edge over a fixed
    wide pool and count distinct canonical successor keys."""
    k = state.target.k
    hi = max(wide_pool, state.pool_size + k)
    seen = set()
    for e in itertools.combinations(range(hi), k):
        if state.is_claimed(e):
            continue
        seen.add(position_key(apply_move(state, P1, e), player))
    return len(seen)


def validate_orbit_reduction(strategy: str, target: TargetGraph,
                             depth: int = 2, wide_pool: int = 12) -> dict:
    """Compare, node by node to the given depth, the reduced search's
    branch count against the naive wide-pool orbit count.  Returns counts;
    raises AssertionError on any disagreement."""
    budget = target.k
    report = VerifyReport(strategy, target.name, depth)
    stats = {"nodes": 0, "branches": []}

    def walk(state, player, depth_left):
        reps = _orbit_reps(state, player, budget, report)
        naive = naive_orbit_count(state, player, wide_pool)
        if len(reps) != naive:
            raise AssertionError(
                f"orbit mismatch at depth {depth - depth_left + 1}: "
                f"reduced {len(reps)} vs naive {naive}")
        stats["nodes"] += 1
        stats["branches"].append(len(reps))
        if depth_left <= 1:
            return
        for e in reps:
            s1 = apply_move(state, P1, e)
            if not s1.status.ongoing:
                continue
            pl = player.clone()
            dec = pl.decide(s1)
            s2 = apply_move(s1, P2, dec.edge)
            if s2.status.ongoing:
                walk(s2, pl, depth_left - 1)

    walk(new_game(target), _make_player(strategy), depth)
    return stats


# ---------------------------------------------------------------------------
# playouts
# ---------------------------------------------------------------------------

def _adversary_factory(name: str, seed: int):
    if name.startswith("p1-random"):
        base = int(name.split(":", 1)[1]) if ":" in name else 0
        return lambda g: RandomP1(base + seed + 1_000_003 * g)
    if name.startswith("p1-scripted:"):
        proto = get_p1_policy(name)
        edges = list(proto._queue)
        return lambda g: ScriptedP1(edges)
    policy = get_p1_policy(name)
    return lambda g: policy


def playout_suite(strategy: str, target: TargetGraph, adversary: str,
                  games: int, plies: int, seed: int = 0) -> VerifyReport:
    """Run independent games against an adversary policy, asserting after
    every scripted reply that the invariants hold and the first player has
    not won."""
    report = VerifyReport(strategy, target.name, plies)
    report.games = games
    t0 = time.perf_counter()
    make_p1 = _adversary_factory(adversary, seed)
    for g in range(games):
        p1 = make_p1(g)
        player = _make_player(strategy)
        state = new_game(target)
        entered = False
        for _ in range(plies):
            if not state.status.ongoing:
                break
            if state.to_move == P1:
                state = apply_move(state, P1, p1.decide(state))
                report.states_expanded += 1
                if state.status.kind == "p1win":
                    report.outcome = {
                        "kind": "CounterexampleTrace",
                        "game": g,
                        "p1_moves": [
                            list(e) for p, e in state.move_log if p == P1],
                        "trace": trace_dump(state),
                    }
                    report.wall_time = time.perf_counter() - t0
                    return report
                continue
            try:
                dec = player.decide(state)
            except InapplicableState as ex:
                report.violations.append({"game": g, "error": str(ex)})
                break
            state = apply_move(state, P2, dec.edge)
            report.states_expanded += 1
            for msg in strategy_invariants(state, player):
                report.violations.append({"game": g, "error": msg})
            if not entered and player.mem.phase == "distraction":
                entered = True
                report.distraction_entries += 1
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# exact solver for tiny complete boards
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GameValue:
    kind: str  # "p1win" | "p2win" | "draw"
    depth: int | None = None  # plies to the end under optimal play


def _board_copies(target: TargetGraph, n: int, edge_index) -> list:
    """All copies of the target inside the complete board, as edge-index
    bitmasks."""
    tverts = sorted({v for e in target.edges for v in e})
    if len(tverts) > n:
        return []
    masks = set()
    for image in itertools.permutations(range(n), len(tverts)):
        phi = dict(zip(tverts, image))
        mask = 0
        for e in target.edges:
            mask |= 1 << edge_index[tuple(sorted(phi[v] for v in e))]
        masks.add(mask)
    return sorted(masks)


def _perm_edge_tables(n: int, edges, edge_index):
    """For every vertex permutation, a pair of half-mask lookup tables that
    remap a claimed-edge bitmask in two chunks."""
    ne = len(edges)
    lo_bits = (ne + 1) // 2
    tables = []
    for perm in itertools.permutations(range(n)):
        emap = [
            edge_index[tuple(sorted(perm[v] for v in e))] for e in edges]
        lo = [0] * (1 << lo_bits)
        hi = [0] * (1 << (ne - lo_bits))
        for i in range(ne):
            if i < lo_bits:
                step = 1 << i
                for m in range(step, 1 << lo_bits):
                    if m & step:
                        lo[m] = lo[m & ~step] | (1 << emap[i])
            else:
                step = 1 << (i - lo_bits)
                for m in range(step, 1 << (ne - lo_bits)):
                    if m & step:
                        hi[m] = hi[m & ~step] | (1 << emap[i])
        tables.append((lo, hi))
    return tables, lo_bits


def exact_solve(board_vertices: int, target: TargetGraph,
                cap: int = 35) -> GameValue:
    """Perfect-play value of the strong game on the complete board with
    both players chasing the same target.  Memoized on canonical keys;
    refuses boards with more than cap edges."""
    k = target.k
    if board_vertices < k:
        return GameValue("draw")
    if comb(board_vertices, k) > cap:
        raise ValueError(
            f"board has {comb(board_vertices, k)} edges; cap is {cap}")
    edges = list(itertools.combinations(range(board_vertices), k))
    edge_index = {e: i for i, e in enumerate(edges)}
    copies = _board_copies(target, board_vertices, edge_index)
    if not copies:
        return GameValue("draw")
    ne = len(edges)
    full = (1 << ne) - 1
    copies_with = [
        [c for c in copies if c & (1 << i)] for i in range(ne)]
    tables, lo_bits = _perm_edge_tables(board_vertices, edges, edge_index)
    lo_mask = (1 << lo_bits) - 1

    def canon(p1m, p2m):
        best = None
        for lo, hi in tables:
            a = lo[p1m & lo_mask] | hi[p1m >> lo_bits]
            b = lo[p2m & lo_mask] | hi[p2m >> lo_bits]
            pair = (a << ne) | b
            if best is None or pair < best:
                best = pair
        return best

    memo: dict[int, tuple] = {}

    def search(p1m, p2m, mover):
        key = canon(p1m, p2m)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best_score, best_val = None, None
        taken = p1m | p2m
        for i in range(ne):
            bit = 1 << i
            if taken & bit:
                continue
            mine = (p1m | bit) if mover == P1 else (p2m | bit)
            if any((c & mine) == c for c in copies_with[i]):
                val = ("p1win" if mover == P1 else "p2win", 1)
            elif (taken | bit) == full:
                val = ("draw", None)
            else:
                if mover == P1:
                    sub = search(p1m | bit, p2m, P2)
                else:
                    sub = search(p1m, p2m | bit, P1)
                val = (sub[0], sub[1] + 1 if sub[1] is not None else None)
            score = _mover_score(val, mover)
            if best_score is None or score > best_score:
                best_score, best_val = score, val
                if score == (2, -1):
                    break  # a win in one ply is unbeatable
        memo[key] = best_val
        return best_val

    kind, depth = search(0, 0, P1)
    return GameValue(kind, depth)


def _mover_score(val, mover):
    """Orderable preference of an outcome for the player about to benefit:
    win beats draw beats loss; fast wins and slow losses are better."""
    kind, depth = val
    if kind == "draw":
        return (1, 0)
    if kind == ("p1win" if mover == P1 else "p2win"):
        return (2, -depth)
    return (0, depth)


def naive_solve(board_vertices: int, target: TargetGraph) -> GameValue:
    """Reference minimax with no memo and no canonicalization; only viable
    on the smallest boards."""
    k = target.k
    edges = list(itertools.combinations(range(board_vertices), k))
    edge_index = {e: i for i, e in enumerate(edges)}
    copies = _board_copies(target, board_vertices, edge_index)
    if not copies:
        return GameValue("draw")
    ne = len(edges)
    full = (1 << ne) - 1

    def search(p1m, p2m, mover):
        best_score, best_val = None, None
        taken = p1m | p2m
        for i in range(ne):
            bit = 1 << i
            if taken & bit:
                continue
            mine = (p1m | bit) if mover == P1 else (p2m | bit)
            if any((c & mine) == c for c in copies):
                val = ("p1win" if mover == P1 else "p2win", 1)
            elif (taken | bit) == full:
                val = ("draw", None)
            else:
                nxt = P2 if mover == P1 else P1
                sub = search(
                    p1m | bit if mover == P1 else p1m,
                    p2m | bit if mover == P2 else p2m, nxt)
                val = (sub[0], None if sub[1] is None else sub[1] + 1)
            score = _mover_score(val, mover)
            if best_score is None or score > best_score:
                best_score, best_val = score, val
        return best_val

    kind, depth = search(0, 0, P1)
    return GameValue(kind, depth)


# ---------------------------------------------------------------------------
# random corpus
# ---------------------------------------------------------------------------

def random_states(target: TargetGraph, count: int, seed: int,
                  max_pool: int = 12, max_edges: int = 15):
    """Seeded legal positions small enough for the brute-force oracles.
    Half the positions let the first player chase the target greedily so
    heavy overlaps and live threats actually occur."""
    k = target.k
    for i in range(count):
        # string seeds hash stably across processes; tuples do not
        rng = random.Random(f"{seed}:{i}")
        nv = rng.randint(max(k + 2, 5), min(9, max_pool))
        pool_edges = list(itertools.combinations(range(nv), k))
        greedy_p1 = rng.random() < 0.5
        state = new_game(target)
        want = rng.randint(2, max_edges)
        for _ in range(want):
            if not state.status.ongoing:
                break
            free = [e for e in pool_edges if not state.is_claimed(e)]
            if not free:
                break
            if greedy_p1 and state.to_move == P1:
                e = lowest_increasing_edge(
                    target, state.p1_edges, state.p2_edges, state.pool_size)
                if e is None or e not in pool_edges or state.is_claimed(e):
                    e = rng.choice(free)
            else:
                e = rng.choice(free)
            state = apply_move(state, state.to_move, e)
        yield state
