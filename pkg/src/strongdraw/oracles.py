"""Independent reference implementations used only for cross-checking.

Everything here is deliberately written against different algorithmic ideas
than the main engine (edge-order search instead of vertex-order search,
subset enumeration instead of branch-and-bound) and shares no search code
with it.  The oracles assume small inputs: at most 12 distinct vertices on
the board and at most 15 claimed edges in total.
"""

from __future__ import annotations

import itertools

ORACLE_MAX_POOL = 12
ORACLE_MAX_EDGES = 15


def _norm(edges):
    return frozenset(tuple(sorted(e)) for e in edges)


def _check_limits(p1, p2):
    verts = {v for e in (p1 | p2) for v in e}
    if len(verts) > ORACLE_MAX_POOL:
        raise ValueError("oracle limit: more than 12 board vertices")
    if len(p1) + len(p2) > ORACLE_MAX_EDGES:
        raise ValueError("oracle limit: more than 15 claimed edges")


# ---------------------------------------------------------------------------
# copy enumeration, edge-order
# ---------------------------------------------------------------------------

def _edge_order_embeddings(pattern_edges, pattern_vertices, host_edges):
    """Yield injective maps (dict pattern-vertex -> host-vertex) sending every
    pattern edge onto a host edge.  Vertices in pattern_vertices that lie in
    no pattern edge are left out of the map.  Picks pattern edges one at a
    time and tries every host edge under every endpoint pairing."""
    pattern = [tuple(sorted(e)) for e in pattern_edges]
    host = sorted(_norm(host_edges))
    placed_vs = {v for e in pattern for v in e}

    def go(idx, amap, used):
        if idx == len(pattern):
            yield dict(amap)
            return
        pe = pattern[idx]
        for he in host:
            hset = set(he)
            # endpoints already mapped must land inside he, injectively
            ok = True
            fixed = {}
            for v in pe:
                if v in amap:
                    if amap[v] not in hset:
                        ok = False
                        break
                    fixed[v] = amap[v]
            if not ok:
                continue
            if len(set(fixed.values())) != len(fixed):
                continue
            free_pv = [v for v in pe if v not in amap]
            free_hv = [h for h in he if h not in fixed.values()]
            if len(free_pv) != len(free_hv):
                continue
            for perm in itertools.permutations(free_hv):
                if any(h in used for h in perm):
                    continue
                if len(set(perm)) != len(perm):
                    continue
                amap2 = dict(amap)
                used2 = set(used)
                clash = False
                for v, h in zip(free_pv, perm):
                    if h in used2:
                        clash = True
                        break
                    amap2[v] = h
                    used2.add(h)
                if clash:
                    continue
                yield from go(idx + 1, amap2, used2)

    yield from go(0, {}, set())
    _ = placed_vs  # documented: unplaced pattern vertices stay unmapped


def oracle_copies(target, allowed_edges):
    """All embeddings of the full target into allowed_edges (list of dicts).
    Automorphic duplicates appear separately, as in the engine."""
    allowed = _norm(allowed_edges)
    _check_limits(allowed, frozenset())
    out = []
    for emb in _edge_order_embeddings(target.edges, target.vertices, allowed):
        out.append(emb)
    return out


# ---------------------------------------------------------------------------
# progress measure by subset enumeration
# ---------------------------------------------------------------------------

def _subset_realizable(target, subset, p1, p2):
    """Can the p1 edges in `subset` all lie in one copy of the target that
    avoids p2?  Realized iff the subset embeds into the target (edges onto
    edges) such that every target edge falling entirely inside the placed
    vertices pulls back to a host edge not claimed by p2.  The rest of the
    copy can always be routed through fresh vertices."""
    sub = sorted(subset)
    tverts = target.vertices
    tedges = set(target.edges)

    def pullback_ok(phi):
        # phi: host vertex -> target vertex (injective); invert it
        inv = {tv: hv for hv, tv in phi.items()}
        placed = set(phi.values())
        for f in tedges:
            if all(v in placed for v in f):
                back = tuple(sorted(inv[v] for v in f))
                if back in p2:
                    return False
        return True

    def go(idx, phi, taken):
        if idx == len(sub):
            return pullback_ok(phi)
        he = sub[idx]
        for te in tedges:
            tset = set(te)
            fixed = {}
            ok = True
            for hv in he:
                if hv in phi:
                    if phi[hv] not in tset:
                        ok = False
                        break
                    fixed[hv] = phi[hv]
            if not ok:
                continue
            if len(set(fixed.values())) != len(fixed):
                continue
            free_hv = [v for v in he if v not in phi]
            free_tv = [v for v in te if v not in fixed.values()]
            if len(free_hv) != len(free_tv):
                continue
            for perm in itertools.permutations(free_tv):
                if any(tv in taken for tv in perm):
                    continue
                phi2 = dict(phi)
                taken2 = set(taken)
                bad = False
                for hv, tv in zip(free_hv, perm):
                    if tv in taken2:
                        bad = True
                        break
                    phi2[hv] = tv
                    taken2.add(tv)
                if bad:
                    continue
                if go(idx + 1, phi2, taken2):
                    return True
        return False

    _ = tverts
    return go(0, {}, set())


def oracle_max_overlap(target, p1_edges, p2_edges) -> int:
    """Progress measure by brute force over subsets of p1.

    A set S of p1 edges lies in a common p2-avoiding copy iff S embeds into
    the target edge-onto-edge with a p2-safe pullback; the best |S| over all
    realizable S is the measure.  When the target has a vertex common to all
    its edges (every lifted target does), any S with two or more edges must
    share a host vertex, so only per-vertex edge clusters need enumerating.
    """
    p1 = _norm(p1_edges)
    p2 = _norm(p2_edges)
    _check_limits(p1, p2)
    if not p1:
        return 0
    best = 1  # singletons are always realizable on an unbounded board
    seen: set[frozenset] = set()

    def try_subset(S):
        nonlocal best
        fs = frozenset(S)
        if len(S) <= best or fs in seen:
            return
        seen.add(fs)
        if _subset_realizable(target, S, p1, p2):
            best = len(S)

    has_universal = any(
        target.degree[v] == len(target.edges) for v in target.vertices)
    if has_universal and target.k >= 3:
        by_vertex: dict[int, list] = {}
        for e in p1:
            for v in e:
                by_vertex.setdefault(v, []).append(e)
        for v, cluster in sorted(by_vertex.items()):
            for r in range(len(cluster), 1, -1):
                for S in itertools.combinations(cluster, r):
                    try_subset(S)
    else:
        edges = sorted(p1)
        for r in range(len(edges), 1, -1):
            for S in itertools.combinations(edges, r):
                try_subset(S)
    return best


# ---------------------------------------------------------------------------
# threat records by omitted-edge enumeration
# ---------------------------------------------------------------------------

def oracle_threats(target, p1_edges, p2_edges, pool_size: int):
    """All threat records for the player holding p1_edges, as a set of
    (frozenset_of_copy_edges, completing_edge, uses_fresh) triples.

    For each target edge f, embeddings of target-minus-f into p1 are
    enumerated; vertices incident only to f stay unplaced and are filled
    with every seen vertex and with one placeholder fresh id (= pool_size).
    The completing edge must be unclaimed.
    """
    p1 = _norm(p1_edges)
    p2 = _norm(p2_edges)
    _check_limits(p1, p2)
    claimed = p1 | p2
    out = set()
    for f in target.edges:
        rest = [e for e in target.edges if e != f]
        if not rest:
            continue
        placed_in_rest = {v for e in rest for v in e}
        open_spots = [v for v in f if v not in placed_in_rest]
        for emb in _edge_order_embeddings(rest, target.vertices, p1):
            imgset = frozenset(
                tuple(sorted(emb[v] for v in e)) for e in rest)
            fixed = [emb[v] for v in f if v in emb]
            if len(open_spots) == 0:
                comp = tuple(sorted(fixed))
                if comp in claimed:
                    continue
                out.add((imgset, comp, False))
                continue
            used = set(emb.values())
            pool = [u for u in range(pool_size) if u not in used]
            pool.append(pool_size)  # single fresh placeholder
            for fill in itertools.permutations(pool, len(open_spots)):
                comp = tuple(sorted(fixed + list(fill)))
                if comp in claimed:
                    continue
                uses_fresh = pool_size in fill
                out.add((imgset, comp, uses_fresh))
    return out
