"""Hypergraph targets, boards, copy enumeration, and the progress measure.

Vertices are nonnegative ints.  An edge is a sorted tuple of k distinct
vertex ids.  Target graphs carry a role partition of their vertices
(centers / mains / minors) that the builders compute from degrees:
a *center* sits in every edge of a lifted target, a *main* has degree
at least 3, and a *minor* has degree at most 2.
"""

from __future__ import annotations

import heapq
import itertools
import os
import re

Edge = tuple  # sorted tuple of ints, length k

# sentinel candidate meaning "some vertex the opponent has never touched";
# negative so it can never collide with a real vertex id
FRESH = -1


def mk_edge(vs) -> Edge:
    """Normalize an iterable of vertex ids into a sorted edge tuple."""
    e = tuple(sorted(vs))
    if len(set(e)) != len(e):
        raise ValueError(f"edge has repeated vertices: {vs!r}")
    if any((not isinstance(v, int)) or v < 0 for v in e):
        raise ValueError(f"edge vertices must be nonnegative ints: {vs!r}")
    return e


class TargetGraph:
    """An isomorphism type to be claimed, with its vertex role partition."""

    __slots__ = (
        "name", "k", "edges", "vertices", "degree", "centers", "mains",
        "minors", "incident", "universal_center", "private_spots",
        "max_degree", "_copy_order", "_link", "_bf",
    )

    def __init__(self, name: str, k: int, edges) -> None:
        if k < 2:
            raise ValueError("uniformity k must be >= 2")
        edges = tuple(sorted(mk_edge(e) for e in edges))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges in target")
        if not edges:
            raise ValueError("target must have at least one edge")
        for e in edges:
            if len(e) != k:
                raise ValueError(f"edge {e} is not {k}-uniform")
        self.name = name
        self.k = k
        self.edges = edges
        verts = sorted({v for e in edges for v in e})
        self.vertices = tuple(verts)
        deg: dict[int, int] = {v: 0 for v in verts}
        inc: dict[int, list[Edge]] = {v: [] for v in verts}
        for e in edges:
            for v in e:
                deg[v] += 1
                inc[v].append(e)
        self.degree = deg
        self.incident = {v: tuple(es) for v, es in inc.items()}
        self.max_degree = max(deg.values())
        m = len(edges)
        universal = [v for v in verts if deg[v] == m]
        # lift centers: vertices lying in every edge (only meaningful for k>=3)
        self.centers = frozenset(universal) if k >= 3 else frozenset()
        self.mains = frozenset(
            v for v in verts if v not in self.centers and deg[v] >= 3)
        self.minors = frozenset(
            v for v in verts if v not in self.centers and deg[v] <= 2)
        # vertices whose only incident edge is e: claiming a copy of
        # (target - e) leaves these spots entirely free
        self.private_spots = {
            e: tuple(v for v in e if deg[v] == 1) for e in edges}
        self.universal_center = universal[0] if (k >= 3 and universal) else None
        self._copy_order = None
        self._link = None
        self._bf = False  # False = not probed yet; None = not biflower
        self._validate()

    def _validate(self) -> None:
        roles = [self.centers, self.mains, self.minors]
        for a, b in itertools.combinations(roles, 2):
            if a & b:
                raise ValueError("vertex roles must be disjoint")
        if frozenset(self.vertices) != self.centers | self.mains | self.minors:
            raise ValueError("vertex roles must cover all vertices")
        for v in self.mains:
            if self.degree[v] < 3:
                raise ValueError(f"main vertex {v} has degree < 3")
        for v in self.minors:
            if self.degree[v] > 2:
                raise ValueError(f"minor vertex {v} has degree > 2")
        for c in self.centers:
            if self.degree[c] != len(self.edges):
                raise ValueError(f"center {c} missing from some edge")

    # -- derived helpers -------------------------------------------------

    def n_vertices(self) -> int:
        return len(self.vertices)

    def n_edges(self) -> int:
        return len(self.edges)

    def copy_order(self):
        """Vertex elimination order for embedding search (most constrained
        first, then each subsequent vertex closing as many edges as possible)."""
        if self._copy_order is not None:
            return self._copy_order
        verts = list(self.vertices)
        order: list[int] = []
        placed: set[int] = set()
        while len(order) < len(verts):
            best, best_key = None, None
            for v in verts:
                if v in placed:
                    continue
                closing = sum(
                    1 for e in self.incident[v]
                    if all(u in placed or u == v for u in e))
                key = (closing, self.degree[v], -v)
                if best_key is None or key > best_key:
                    best, best_key = v, key
            order.append(best)
            placed.add(best)
        # positions at which each edge becomes fully assigned
        pos = {v: i for i, v in enumerate(order)}
        closes_at: list[list[Edge]] = [[] for _ in order]
        for e in self.edges:
            closes_at[max(pos[v] for v in e)].append(e)
        self._copy_order = (tuple(order), tuple(tuple(c) for c in closes_at))
        return self._copy_order

    def link_target(self):
        """The (k-1)-uniform target obtained by deleting the universal
        center from every edge.  Copies of self through a host vertex x
        correspond exactly to copies of the link inside the x-board."""
        if self.universal_center is None:
            raise ValueError(f"{self.name} has no universal center")
        if self._link is None:
            pairs = [tuple(u for u in e if u != self.universal_center)
                     for e in self.edges]
            self._link = TargetGraph(self.name + "-link", self.k - 1, pairs)
        return self._link

    def biflower(self):
        """For a 2-uniform target of the two-hubs shape (two mains, each
        other vertex adjacent only to mains, optional main-main edge): the
        closed-form evaluator.  None for any other shape."""
        if self._bf is False:
            self._bf = _Biflower.of(self)
        return self._bf

    def __repr__(self) -> str:
        return (f"TargetGraph({self.name!r}, k={self.k}, "
                f"edges={len(self.edges)}, vertices={len(self.vertices)})")


def _pair(a, b):
    """Sorted pair, or None when either endpoint is fresh."""
    if a is None or b is None:
        return None
    return (a, b) if a < b else (b, a)


class _Biflower:
    """Closed-form progress evaluation for 2-uniform targets shaped as two
    hub ('main') vertices with every other vertex adjacent only to hubs:
    n_common vertices see both hubs, pend0/pend1 see one, and the hubs may
    or may not be joined directly.  Copies of such a target inside a claimed
    pair-board reduce to choosing the two hub images and then solving a tiny
    role-assignment problem over board vertices (anything else is dominated
    by a fresh vertex)."""

    __slots__ = ("has_main_edge", "n_common", "pend0", "pend1", "full")

    def __init__(self, has_main_edge, n_common, pend0, pend1, full):
        self.has_main_edge = has_main_edge
        self.n_common = n_common
        self.pend0 = pend0
        self.pend1 = pend1
        self.full = full

    @classmethod
    def of(cls, t: "TargetGraph"):
        if t.k != 2 or len(t.mains) != 2:
            return None
        m0, m1 = sorted(t.mains)
        eset = set(t.edges)
        has_me = (m0, m1) in eset
        n_c = p0 = p1 = 0
        for v in t.vertices:
            if v in (m0, m1):
                continue
            nb = {u for e in t.incident[v] for u in e} - {v}
            if not nb <= {m0, m1}:
                return None
            if nb == {m0, m1}:
                n_c += 1
            elif nb == {m0}:
                p0 += 1
            else:
                p1 += 1
        if int(has_me) + 2 * n_c + p0 + p1 != len(t.edges):
            return None
        return cls(has_me, n_c, p0, p1, len(t.edges))

    # -- internals --------------------------------------------------------

    def _assign(self, rows, n_c, n_a, n_b):
        """Max total value assigning rows to role slots (fresh pads free)."""
        if not rows:
            return 0
        n_c = min(n_c, len(rows))
        if n_a == 0 and n_b == 0:
            vals = sorted((r[0] for r in rows if r[1]), reverse=True)
            return sum(vals[:n_c])
        if n_a == 0 or n_b == 0:
            # fold the live pendant side into a dense 2-dim table
            n_p = min(n_a or n_b, len(rows))
            vi, oi = (2, 3) if n_b == 0 else (4, 5)
            width = n_p + 1
            cur = [-1] * ((n_c + 1) * width)
            cur[0] = 0
            for r in rows:
                vc, okc = r[0], r[1]
                hit = r[vi] and r[oi]
                nxt = cur[:]
                idx = 0
                for c in range(n_c + 1):
                    for x in range(width):
                        val = cur[idx]
                        if val >= 0:
                            if okc and c < n_c and nxt[idx + width] < val + vc:
                                nxt[idx + width] = val + vc
                            if hit and x < n_p and nxt[idx + 1] < val + 1:
                                nxt[idx + 1] = val + 1
                        idx += 1
                cur = nxt
            return max(cur)
        n_a = min(n_a, len(rows))
        n_b = min(n_b, len(rows))
        cur = {(0, 0, 0): 0}
        for vc, okc, va, oka, vb, okb in rows:
            new = dict(cur)
            for (c, x, y), val in cur.items():
                if okc and c < n_c:
                    k2 = (c + 1, x, y)
                    w = val + vc
                    if new.get(k2, -1) < w:
                        new[k2] = w
                if oka and va and x < n_a:
                    k2 = (c, x + 1, y)
                    w = val + va
                    if new.get(k2, -1) < w:
                        new[k2] = w
                if okb and vb and y < n_b:
                    k2 = (c, x, y + 1)
                    w = val + vb
                    if new.get(k2, -1) < w:
                        new[k2] = w
            cur = new
        return max(cur.values())

    def _score(self, bd, a, b):
        """Best copy score with hub images (a, b); either may be None
        (fresh).  -1 when the hub pair is unusable."""
        adjP, adjQ = bd.adjP, bd.adjQ
        na = adjP.get(a, _NO_NBRS)
        nb = adjP.get(b, _NO_NBRS)
        qa = adjQ.get(a, _NO_NBRS)
        qb = adjQ.get(b, _NO_NBRS)
        s0 = 0
        if self.has_main_edge and a is not None and b is not None:
            if b in qa:
                return -1
            if b in na:
                s0 = 1
        rows = []
        for u in na | nb:
            if u == a or u == b:
                continue
            va = 1 if u in na else 0
            vb = 1 if u in nb else 0
            oka = u not in qa
            okb = u not in qb
            rows.append((va + vb, oka and okb, va, oka, vb, okb))
        best = -1
        for pa, pb in {(self.pend0, self.pend1), (self.pend1, self.pend0)}:
            got = self._assign(rows, self.n_common, pa, pb)
            if got > best:
                best = got
        return s0 + best

    def _hub_pairs(self, sup):
        opts = sup + [None]
        for i, a in enumerate(opts):
            for b in opts[i + 1:]:
                yield a, b
        yield None, None

    # -- public -----------------------------------------------------------

    def value_on(self, bd, floor=0):
        """Best number of own pairs inside one opponent-avoiding copy."""
        deg = bd.deg
        best = floor
        me = 1 if self.has_main_edge else 0
        for a, b in self._hub_pairs(bd.sup):
            cap = deg.get(a, 0) + deg.get(b, 0) + me
            if cap <= best:
                continue
            got = self._score(bd, a, b)
            if got > best:
                best = got
                if best == self.full:
                    break
        return best

    def value(self, P, Q, floor=0):
        if not P:
            return 0
        return self.value_on(_BFBoard(P, Q), floor)

    def roles_on(self, bd, value):
        """Hub-image sets (None = fresh) of the value-attaining copies."""
        out = set()
        if value <= 0:
            return out
        deg = bd.deg
        me = 1 if self.has_main_edge else 0
        for a, b in self._hub_pairs(bd.sup):
            if deg.get(a, 0) + deg.get(b, 0) + me < value:
                continue
            if self._score(bd, a, b) == value:
                out.add(frozenset((a, b)))
        return out

    def roles(self, P, Q, value):
        if not P:
            return set()
        return self.roles_on(_BFBoard(P, Q), value)

    def raise_with(self, bd, pr, value) -> bool:
        """Whether adding the unclaimed pair `pr` lifts the board score to
        value+1.  Only hub pairs meeting pr matter: a copy not using pr
        scores what it scored before, and pr can only sit in a copy as a
        hub-to-something pair."""
        bd2 = bd.plus_pair(pr)
        deg2 = bd2.deg
        me = 1 if self.has_main_edge else 0
        want = value + 1
        x, y = pr
        for hub, skip in ((x, None), (y, x)):
            for other in bd2.sup + [None]:
                if other == hub or other == skip:
                    continue
                if deg2[hub] + deg2.get(other, 0) + me < want:
                    continue
                if self._score(bd2, hub, other) >= want:
                    return True
        return False


_NO_NBRS: frozenset = frozenset()


class _BFBoard:
    """Adjacency view of one claimed pair-board: own pairs P against the
    opponent's pairs Q.  Only what the biflower evaluation reads."""

    __slots__ = ("adjP", "adjQ", "deg", "sup")

    def __init__(self, P, Q):
        adjP: dict[int, set] = {}
        for (u, v) in P:
            adjP.setdefault(u, set()).add(v)
            adjP.setdefault(v, set()).add(u)
        adjQ: dict[int, set] = {}
        for (u, v) in Q:
            adjQ.setdefault(u, set()).add(v)
            adjQ.setdefault(v, set()).add(u)
        self.adjP = adjP
        self.adjQ = adjQ
        self.deg = {v: len(s) for v, s in adjP.items()}
        self.sup = sorted(adjP)

    def plus_pair(self, pr):
        """A view with one extra own pair (self stays untouched)."""
        x, y = pr
        other = _BFBoard.__new__(_BFBoard)
        adjP = dict(self.adjP)
        adjP[x] = adjP.get(x, _NO_NBRS) | {y}
        adjP[y] = adjP.get(y, _NO_NBRS) | {x}
        other.adjP = adjP
        other.adjQ = self.adjQ
        other.deg = {v: len(s) for v, s in adjP.items()}
        other.sup = sorted(adjP)
        return other


def make_hat_k2l(l: int) -> TargetGraph:
    """Complete bipartite K_{2,l} plus the edge joining the two high-degree
    vertices (0 and 1).  2-uniform; l+2 vertices, 2l+1 edges."""
    if l < 2:
        raise ValueError("need l >= 2")
    edges = [(0, 1)]
    for i in range(l):
        w = 2 + i
        edges.append((0, w))
        edges.append((1, w))
    return TargetGraph(f"hatK2{l}", 2, edges)


def make_k2t_s(t: int, s: int) -> TargetGraph:
    """K_{2,t} with an s-leaf star glued at high-degree vertex 0.
    2-uniform; 2+t+s vertices, 2t+s edges.  No edge joins 0 and 1."""
    if t < 2 or s < 0:
        raise ValueError("need t >= 2 and s >= 0")
    edges = []
    for i in range(t):
        w = 2 + i
        edges.append((0, w))
        edges.append((1, w))
    for j in range(s):
        edges.append((0, 2 + t + j))
    return TargetGraph(f"k2{t}star{s}", 2, edges)


def lift(base: TargetGraph, k: int) -> TargetGraph:
    """Add the same k-2 new vertices to every edge of a 2-uniform base.
    Edge count is preserved; the new vertices become centers."""
    if base.k != 2:
        raise ValueError("lift expects a 2-uniform base")
    if k < 2:
        raise ValueError("need k >= 2")
    if k == 2:
        return TargetGraph(base.name, 2, base.edges)
    top = max(base.vertices) + 1
    extra = tuple(range(top, top + (k - 2)))
    edges = [e + extra for e in base.edges]
    return TargetGraph(f"{base.name}-{k}", k, edges)


def make_g_minus() -> TargetGraph:
    """The 8-edge subgraph of the lifted hat target obtained by dropping one
    bipartite edge at vertex 1; keeps the joining edge (0,1,center) and has a
    degree-1 vertex, so it is not a lifted K_{2,4}."""
    g = lift(make_hat_k2l(4), 3)
    c = g.universal_center
    drop = mk_edge((1, 5, c))
    edges = [e for e in g.edges if e != drop]
    return TargetGraph("gminus", 3, edges)


# ---------------------------------------------------------------------------
# registry and edge-list text format
# ---------------------------------------------------------------------------

def format_edge_text(k: int, edges) -> str:
    """Serialize edges as a text block: header 'k <k>' then one edge per
    line as space-separated ids."""
    lines = [f"k {k}"]
    for e in sorted(mk_edge(x) for x in edges):
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def parse_edge_text(text: str):
    """Inverse of format_edge_text.  Returns (k, tuple-of-edges)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("k "):
        raise ValueError("edge text must start with a 'k <uniformity>' line")
    k = int(lines[0].split()[1])
    edges = []
    for ln in lines[1:]:
        edges.append(mk_edge(int(tok) for tok in ln.split()))
    return k, tuple(edges)


_K2T_RE = re.compile(r"^k2t(\d+)$")


def get_target(name: str) -> TargetGraph:
    """Resolve a target by registry name.

    hatK24-3   lifted hat K_{2,4} (3-uniform, 9 edges)
    k2t<t>     lifted K_{2,t+1} with a (t-2)-star (3-uniform, 3t edges)
    gminus     8-edge subtarget of hatK24-3
    k3         triangle (2-uniform), for the small exact solver
    path2-3    lifted two-edge path (3-uniform), for the small exact solver
    file:<p>   edge-list text file
    """
    if name == "hatK24-3":
        return lift(make_hat_k2l(4), 3)
    m = _K2T_RE.match(name)
    if m:
        t = int(m.group(1))
        if t < 3:
            raise ValueError("k2t targets need t >= 3")
        g = lift(make_k2t_s(t + 1, t - 2), 3)
        return TargetGraph(f"k2t{t}", 3, g.edges)
    if name == "gminus":
        return make_g_minus()
    if name == "k3":
        return TargetGraph("k3", 2, [(0, 1), (0, 2), (1, 2)])
    if name == "path2-3":
        return lift(TargetGraph("path2", 2, [(0, 1), (1, 2)]), 3)
    if name.startswith("file:"):
        path = name[5:]
        with open(path, "r", encoding="utf-8") as fh:
            k, edges = parse_edge_text(fh.read())
        base = os.path.basename(path)
        return TargetGraph(base, k, edges)
    raise KeyError(f"unknown target {name!r}")


# ---------------------------------------------------------------------------
# boards and projections
# ---------------------------------------------------------------------------

def x_board(edges, x: int) -> frozenset:
    """Link of vertex x: the (k-1)-uniform edges {e - x : x in e}."""
    out = set()
    for e in edges:
        if x in e:
            out.add(tuple(v for v in e if v != x))
    return frozenset(out)


# ---------------------------------------------------------------------------
# copy enumeration
# ---------------------------------------------------------------------------

def enumerate_copies(target: TargetGraph, allowed_edges, cap: int | None = None):
    """Yield embeddings (dicts target-vertex -> host-vertex) whose edge images
    all lie in allowed_edges.  Automorphic duplicates are yielded separately.
    cap bounds the number of embeddings yielded (None = all)."""
    allowed = frozenset(mk_edge(e) for e in allowed_edges)
    if not allowed:
        return
    host_deg: dict[int, int] = {}
    host_inc: dict[int, set] = {}
    for e in allowed:
        for v in e:
            host_deg[v] = host_deg.get(v, 0) + 1
            host_inc.setdefault(v, set()).add(e)
    order, closes_at = target.copy_order()
    hosts = sorted(host_deg)
    n = 0
    assign: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int):
        nonlocal n
        if i == len(order):
            n += 1
            yield dict(assign)
            return
        tv = order[i]
        need = target.degree[tv]
        for hv in hosts:
            if hv in used or host_deg[hv] < need:
                continue
            assign[tv] = hv
            ok = True
            for te in closes_at[i]:
                img = mk_edge(assign[u] for u in te)
                if img not in allowed:
                    ok = False
                    break
            if ok:
                used.add(hv)
                yield from extend(i + 1)
                used.discard(hv)
            del assign[tv]

    for emb in extend(0):
        yield emb
        if cap is not None and n >= cap:
            return


def has_copy(target: TargetGraph, allowed_edges) -> bool:
    for _ in enumerate_copies(target, allowed_edges, cap=1):
        return True
    return False


def has_copy_through(target: TargetGraph, allowed_edges, through: Edge) -> bool:
    """True iff some copy inside allowed_edges uses the edge `through`."""
    through = mk_edge(through)
    allowed = frozenset(mk_edge(e) for e in allowed_edges)
    if through not in allowed:
        return False
    for emb in enumerate_copies(target, allowed):
        imgs = {mk_edge(emb[u] for u in te) for te in target.edges}
        if through in imgs:
            return True
    return False


# ---------------------------------------------------------------------------
# progress measure (branch and bound)
# ---------------------------------------------------------------------------

class _SearchDone(Exception):
    pass


def _overlap_search(target: TargetGraph, p1_edges, p2_edges, collect,
                    pin=None, stop_at=None, floor=0):
    """Shared search: the best number of p1 edges inside a single copy of
    `target` that avoids p2 entirely.  Copies may place any target vertex on
    a never-seen host vertex (FRESH); an edge with a fresh endpoint can be
    neither a p1 hit nor a p2 conflict.

    collect="roles": also gather {(center_image, frozenset(main_images))}
    over the value-attaining copies; fresh images appear as None.

    pin: optional {target_vertex: host_vertex} preassignment; only copies
    honoring it are searched.  stop_at: return as soon as the value is known
    to reach this score (the returned value may understate the optimum).
    floor: prune as if a copy of this score were already known; the result
    is only meaningful when it exceeds the floor (collect=None only).

    Bound: an unclosed target edge is *dead* once no p1 edge is compatible
    with the host vertices assigned to it so far (a fresh endpoint kills all
    compatibility at once).  At depth i the score can still grow by at most
    the number of unclosed, still-alive edges.
    """
    p1 = frozenset(mk_edge(e) for e in p1_edges)
    p2 = frozenset(mk_edge(e) for e in p2_edges)
    if not p1:
        return 0, frozenset()
    sup_deg: dict[int, int] = {}
    for e in p1:
        for v in e:
            sup_deg[v] = sup_deg.get(v, 0) + 1
    hosts = sorted(sup_deg)
    order, closes_at = target.copy_order()
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    edge_idx = {e: j for j, e in enumerate(target.edges)}
    close_pos = [max(pos[v] for v in e) for e in target.edges]
    closes_idx = [tuple(edge_idx[e] for e in closes_at[i]) for i in range(n)]
    # edge indices through order[i] that close strictly after position i
    later_inc = [
        tuple(edge_idx[e] for e in target.incident[order[i]]
              if close_pos[edge_idx[e]] > i)
        for i in range(n)
    ]
    remaining = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        remaining[i] = remaining[i + 1] + len(closes_idx[i])
    full = len(target.edges)
    p1_list = tuple(p1)

    best = floor
    gathered: set = set()
    assign: dict[int, int] = {}
    used: set[int] = set()
    # cand[j]: p1 edges still compatible with edge j's assigned endpoints;
    # () marks a dead edge (no p1 hit possible any more)
    cand: list = [p1_list] * full
    center = target.universal_center
    mains = tuple(sorted(target.mains))
    tedges = target.edges

    def leaf(score: int):
        nonlocal best
        if collect is None:
            if score > best:
                best = score
                if stop_at is not None and best >= stop_at:
                    raise _SearchDone
            return
        if score > best:
            gathered.clear()
            best = score
        if score == best and collect == "roles":
            ci = assign.get(center)
            ci = None if (ci is None or ci < 0) else ci
            ms = frozenset(
                (None if assign[m] < 0 else assign[m]) for m in mains)
            gathered.add((ci, ms))

    def close(i: int, score: int):
        """Score edges completing at position i; None on a p2 conflict."""
        for j in closes_idx[i]:
            img = sorted(assign[u] for u in tedges[j])
            if img[0] < 0:
                continue  # touches a fresh vertex: cannot hit p1 or p2
            e = tuple(img)
            if e in p2:
                return None
            if e in p1:
                score += 1
        return score

    fresh_ctr = itertools.count(1)

    def refine(i: int, hv):
        """Narrow candidate sets of unclosed edges through order[i] after
        assigning it to hv (None = fresh).  Returns (undo list, newly dead
        count)."""
        saved = []
        newly = 0
        for j in later_inc[i]:
            old = cand[j]
            if not old:
                continue
            new = () if hv is None else tuple(e for e in old if hv in e)
            if new is old or new == old:
                continue
            saved.append((j, old))
            cand[j] = new
            if not new:
                newly += 1
        return saved, newly

    def extend(i: int, score: int, dead: int):
        # dead = unclosed edges that can no longer contribute a p1 hit
        ceiling = score + remaining[i] - dead
        if collect is not None:
            if ceiling < best:
                return
        elif ceiling <= best or (stop_at is None and best == full):
            return
        if i == n:
            leaf(score)
            return
        v = order[i]
        if v in assign:  # pinned vertex: close its edges and move on
            saved, newly = refine(i, assign[v])
            s2 = close(i, score)
            if s2 is not None:
                d2 = dead + newly - sum(
                    1 for j in closes_idx[i] if not cand[j])
                extend(i + 1, s2, d2)
            for j, old in saved:
                cand[j] = old
            return
        for hv in hosts:
            if hv in used:
                continue
            assign[v] = hv
            used.add(hv)
            saved, newly = refine(i, hv)
            s2 = close(i, score)
            if s2 is not None:
                # edges closed at i leave the unclosed pool; dead ones among
                # them leave the dead count with them
                d2 = dead + newly - sum(
                    1 for j in closes_idx[i] if not cand[j])
                extend(i + 1, s2, d2)
            for j, old in saved:
                cand[j] = old
            used.discard(hv)
        # one fresh branch: fresh host vertices are interchangeable
        assign[v] = -next(fresh_ctr)
        saved, newly = refine(i, None)
        s2 = close(i, score)
        if s2 is not None:
            d2 = dead + newly - sum(1 for j in closes_idx[i] if not cand[j])
            extend(i + 1, s2, d2)
        for j, old in saved:
            cand[j] = old
        del assign[v]

    try:
        if pin:
            pinned = dict(pin)
            if len(set(pinned.values())) != len(pinned):
                return 0, frozenset()
            assign.update(pinned)
            used.update(pinned.values())
        extend(0, 0, 0)
    except _SearchDone:
        pass
    return best, frozenset(gathered)


def max_overlap(target: TargetGraph, p1_edges, p2_edges) -> int:
    """Best p1 score over copies of `target` avoiding p2 (the progress
    measure of the player holding p1_edges against p2_edges).

    For targets with a universal center every copy's edges share the center
    image, so the search decomposes into one small (k-1)-uniform search per
    candidate center on that vertex's projected board."""
    p1 = frozenset(mk_edge(e) for e in p1_edges)
    if not p1:
        return 0
    p2 = frozenset(mk_edge(e) for e in p2_edges)
    if target.universal_center is None:
        if target.k == 2:
            bf = target.biflower()
            if bf is not None:
                return bf.value(p1, p2)
        value, _ = _overlap_search(target, p1, p2, None)
        return value
    link = target.link_target()
    bf = link.biflower() if link.k == 2 else None
    full = len(target.edges)
    best = 0
    per_v: dict[int, list] = {}
    for e in p1:
        for v in e:
            per_v.setdefault(v, []).append(e)
    for v in sorted(per_v, key=lambda u: -len(per_v[u])):
        if len(per_v[v]) <= best:
            continue  # score through v is capped by v's p1 degree
        bd1 = frozenset(tuple(u for u in e if u != v) for e in per_v[v])
        bd2 = x_board(p2, v)
        if bf is not None:
            got = bf.value(bd1, bd2, floor=best)
        elif link.universal_center is None:
            got, _ = _overlap_search(link, bd1, bd2, None, floor=best)
        else:
            got = max_overlap(link, bd1, bd2)
        best = max(best, got)
        if best == full:
            break
    return best


def overlap_reaches_through(target: TargetGraph, p1_edges, p2_edges, edge,
                            score: int) -> bool:
    """True iff some copy of `target` avoiding p2 uses `edge` as an image
    edge and carries at least `score` p1 edges.  Used to test whether
    claiming an unclaimed edge would raise the claimant's measure."""
    e = mk_edge(edge)
    if score <= 0:
        return True
    p1 = frozenset(mk_edge(x) for x in p1_edges)
    p2 = frozenset(mk_edge(x) for x in p2_edges)
    if target.universal_center is not None and target.k == 3:
        link = target.link_target()
        for v in e:
            bd1 = x_board(p1, v)
            if len(bd1) < score:
                continue
            bd2 = x_board(p2, v)
            pair = tuple(u for u in e if u != v)
            rev = (pair[1], pair[0])
            for te in link.edges:
                for pr in (pair, rev):
                    got, _ = _overlap_search(link, bd1, bd2, None,
                                             pin=dict(zip(te, pr)),
                                             stop_at=score)
                    if got >= score:
                        return True
        return False
    seen = set()
    for te in target.edges:
        for perm in itertools.permutations(e):
            pin = dict(zip(te, perm))
            key = tuple(sorted(pin.items()))
            if key in seen:
                continue
            seen.add(key)
            got, _ = _overlap_search(target, p1, p2, None,
                                     pin=pin, stop_at=score)
            if got >= score:
                return True
    return False


def max_overlap_roles(target: TargetGraph, p1_edges, p2_edges):
    """(value, role triples of the attaining copies).  Each triple is
    (center_image, frozenset of main images); None marks a fresh image."""
    p1 = frozenset(mk_edge(e) for e in p1_edges)
    if not p1:
        return 0, frozenset()
    p2 = frozenset(mk_edge(e) for e in p2_edges)
    if target.universal_center is None or target.k != 3:
        return _overlap_search(target, p1, p2, "roles")
    link = target.link_target()
    bf = link.biflower()
    value = max_overlap(target, p1, p2)
    roles: set = set()
    if value == 0:
        return 0, roles
    support = sorted({v for e in p1 for v in e})
    for v in support:
        bd1 = x_board(p1, v)
        if len(bd1) < value:
            continue
        bd2 = x_board(p2, v)
        if bf is not None:
            if bf.value(bd1, bd2, floor=value - 1) == value:
                roles.update((v, ms) for ms in bf.roles(bd1, bd2, value))
        else:
            got, link_roles = _overlap_search(link, bd1, bd2, "roles")
            if got == value:
                roles.update((v, ms) for _, ms in link_roles)
    return value, frozenset(roles)


def _triples_with(v: int, n: int):
    """Sorted triples from range(n) containing v, in lexicographic order."""
    s1 = ((v, y, z) for y in range(v + 1, n) for z in range(y + 1, n))
    s2 = ((x, v, z) for x in range(v) for z in range(v + 1, n))
    s3 = ((x, y, v) for x in range(v) for y in range(x + 1, v))
    return heapq.merge(s1, s2, s3)


def lowest_increasing_edge(target: TargetGraph, p1_edges, p2_edges,
                           pool_size: int) -> Edge:
    """Lexicographically least unclaimed edge whose claim raises
    max_overlap of the p1 side by one.  When nothing can raise it (p1 is
    empty, so anything scores, or p1 already fills a whole copy) the least
    unclaimed edge overall is returned.  Ids beyond pool_size + k are never
    needed: renaming an untouched id down to the first untouched id keeps
    any copy intact and only lowers the edge.

    Exact for 3-uniform targets whose link is a two-hub shape; other
    targets take a plain scan with per-edge searches (small boards only).
    """
    k = target.k
    p1 = frozenset(mk_edge(e) for e in p1_edges)
    p2 = frozenset(mk_edge(e) for e in p2_edges)
    claimed = p1 | p2
    base = max(pool_size, max((e[-1] + 1 for e in claimed), default=0))
    n = base + k

    def first_unclaimed():
        for e in itertools.combinations(range(n), k):
            if e not in claimed:
                return e
        raise RuntimeError("padded pool exhausted")  # unreachable

    if not p1:
        return first_unclaimed()
    bf = None
    if target.universal_center is not None and k == 3:
        bf = target.link_target().biflower()
    if bf is None:
        m = max_overlap(target, p1, p2)
        if m >= len(target.edges):
            return first_unclaimed()
        for e in itertools.combinations(range(n), k):
            if e in claimed:
                continue
            if overlap_reaches_through(target, p1 | {e}, p2, e, m + 1):
                return e
        return first_unclaimed()

    # Universal-center fast path.  A raising claim completes a copy whose
    # center image already attains the measure on its projected board, so
    # only those centers can host one.
    per_v: dict[int, list] = {}
    for e in p1:
        for u in e:
            per_v.setdefault(u, []).append(e)
    boards: dict[int, _BFBoard] = {}

    def board(v):
        bd = boards.get(v)
        if bd is None:
            pairs = frozenset(tuple(u for u in e if u != v)
                              for e in per_v.get(v, ()))
            bd = boards[v] = _BFBoard(pairs, x_board(p2, v))
        return bd

    # measure and attaining centers in one degree-ordered sweep; pruned
    # evaluations (result == floor) are repeated exactly in pass two
    order = sorted(per_v, key=lambda u: (-len(per_v[u]), u))
    vals: dict[int, tuple] = {}
    m = 0
    for v in order:
        if len(per_v[v]) <= m:
            break
        got = bf.value_on(board(v), floor=m)
        vals[v] = (got, m)
        if got > m:
            m = got
    if m >= len(target.edges):
        return first_unclaimed()
    centers = []
    for v in order:
        if len(per_v[v]) < m:
            break
        got, fl = vals.get(v, (None, None))
        if got is None or got == fl == m:
            got = bf.value_on(board(v), floor=m - 1)
        if got == m:
            centers.append(v)
    centers.sort()
    cset = set(centers)

    def raises(e):
        for v in e:
            if v not in cset:
                continue
            pr = tuple(u for u in e if u != v)
            if bf.raise_with(board(v), pr, m):
                return True
        return False

    # Seed an upper bound from the attaining hub images: any raising edge
    # either contains one of them, or substitutes fresh ids into a copy
    # whose occupied images all sit in the projected board's support.
    seeds = set()
    for v in centers:
        bd = board(v)
        for S in bf.roles_on(bd, m):
            hubs = sorted(h for h in S if h is not None)
            if bf.has_main_edge:
                pr = (hubs + [base, base + 1])[:2]
                seeds.add(mk_edge((v, pr[0], pr[1])))
            hub_opts = list(hubs)
            if None in S:
                hub_opts.append(base)
            for h in hub_opts:
                for w in bd.sup:
                    if w != h:
                        seeds.add(mk_edge((v, h, w)))
                seeds.add(mk_edge((v, h, base if h != base else base + 1)))
    best = None
    for e in sorted(seeds):
        if e not in claimed and raises(e):
            best = e
            break

    # Sweep every edge below the bound through an attaining center; this
    # catches claims whose two non-center ids are both off the hub list.
    for v in centers:
        least = (0, 1, v) if v >= 2 else (0, 1, 2)
        if best is not None and least >= best:
            continue
        for e in _triples_with(v, n):
            if best is not None and e >= best:
                break
            if e in claimed:
                continue
            if raises(e):
                best = e
                break
    return best if best is not None else first_unclaimed()
