"""Constructive search for cycles covering prescribed X-vertices.

The solvers here come in two flavours:

* exact backtracking (find_cycle_covering, find_disjoint_cycle_cover),
  which decides existence outright and is meant for small instances, and

* theorem-shaped pipelines (solve_high_degree, solve_degree_split) that
  assemble a covering cycle from structured pieces: path systems through
  the low-degree part, endpoint-pivot rotations that close a Y-to-Y path
  into a cycle, and absorption of helper edges that were never really
  there.  Under their documented degree preconditions these pipelines
  cannot fail; a failure is reported as None plus a diagnostics entry and
  means either the preconditions were not checked or there is a bug.

Every witness returned by any function in this module has been validated
against the input graph.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Any

from .budget import NODE_BUDGET_DEFAULT, WorkBudget, as_budget
from .core import (
    Bigraph,
    CycleWitness,
    PathWitness,
    VertexSet,
    X_SIDE,
    Y_SIDE,
    bit_list,
    bits,
    is_two_connected,
    mask_of,
)
from .errors import (
    ContractViolationError,
    DomainError,
    GraphInputError,
    WitnessError,
)

logger = logging.getLogger(__name__)

__all__ = [
    "MatchingInstance",
    "max_matching",
    "hall_violator",
    "find_cycle_covering",
    "find_disjoint_cycle_cover",
    "rotate_path_to_cycle",
    "absorb_virtual_edge",
    "solve_high_degree",
    "solve_degree_split",
]


# -- bipartite matching -------------------------------------------------------


@dataclass(frozen=True)
class MatchingInstance:
    """A small bipartite matching problem: abstract left vertices against a
    chosen subset of Y, with adjacency rows as masks over the right side."""

    left_labels: tuple[Any, ...]
    right_ys: tuple[int, ...]
    adj: tuple[int, ...]

    @classmethod
    def for_pairs(
        cls, g: Bigraph, pairs: list[tuple[int, int]], y_indices: list[int]
    ) -> "MatchingInstance":
        """Left vertices are X-pairs; a pair is adjacent to y when y is a
        common neighbour of both pair members."""
        ys = tuple(sorted(y_indices))
        rows = []
        for a, b in pairs:
            common = g.adj_x[a] & g.adj_x[b]
            row = 0
            for p, y in enumerate(ys):
                if (common >> y) & 1:
                    row |= 1 << p
            rows.append(row)
        return cls(tuple(tuple(p) for p in pairs), ys, tuple(rows))

    @property
    def n_left(self) -> int:
        return len(self.adj)


def _kuhn(inst: MatchingInstance) -> tuple[list[int | None], dict[int, int]]:
    left_right: list[int | None] = [None] * inst.n_left
    right_left: dict[int, int] = {}

    def try_assign(s: int, visited: list[int]) -> bool:
        for r in bits(inst.adj[s] & ~visited[0]):
            visited[0] |= 1 << r
            holder = right_left.get(r)
            if holder is None or try_assign(holder, visited):
                right_left[r] = s
                left_right[s] = r
                return True
        return False

    for s in range(inst.n_left):
        try_assign(s, [0])
    return left_right, right_left


def max_matching(inst: MatchingInstance) -> dict[int, int]:
    """Maximum matching as {left index: matched Y index}."""
    left_right, _ = _kuhn(inst)
    return {
        s: inst.right_ys[r] for s, r in enumerate(left_right) if r is not None
    }


def hall_violator(inst: MatchingInstance) -> tuple[int, ...] | None:
    """A set of left indices S with fewer than |S| joint right neighbours,
    extracted from the alternating-reachability structure of a maximum
    matching.  None when the matching saturates the left side."""
    left_right, right_left = _kuhn(inst)
    exposed = [s for s, r in enumerate(left_right) if r is None]
    if not exposed:
        return None
    reach_left = set(exposed)
    frontier = list(exposed)
    seen_right = 0
    while frontier:
        s = frontier.pop()
        for r in bits(inst.adj[s] & ~seen_right):
            seen_right |= 1 << r
            t = right_left.get(r)
            if t is not None and t not in reach_left:
                reach_left.add(t)
                frontier.append(t)
    return tuple(sorted(reach_left))


# -- exact covering-cycle search ----------------------------------------------


def _search_exact_cycle(
    g: Bigraph, targets: list[int], budget: WorkBudget
) -> CycleWitness | None:
    """Backtracking over cyclic orderings of ``targets``, with one distinct
    Y-vertex per consecutive pair maintained as an incremental matching.

    Canonical order: the smallest target anchors the cycle, candidates are
    tried in increasing index order, and the anchor's successor is kept
    smaller than its predecessor so each cycle is visited in one direction
    only.
    """
    m = len(targets)
    adj = g.adj_x
    if any(adj[x].bit_count() < 2 for x in targets):
        return None
    if g.ny == m:
        # such a cycle would pass through every Y-vertex
        if any(row.bit_count() < 2 for row in g.adj_y):
            return None
        if m == g.nx and not is_two_connected(g):
            return None

    order = [targets[0]]
    rest = targets[1:]
    used = [False] * len(rest)
    slot_y: list[int | None] = [None] * m
    y_slot: dict[int, int] = {}
    avail: list[int] = [0] * m

    def augment(s: int, visited: list[int]) -> bool:
        for y in bits(avail[s] & ~visited[0]):
            visited[0] |= 1 << y
            holder = y_slot.get(y)
            if holder is None or augment(holder, visited):
                y_slot[y] = s
                slot_y[s] = y
                return True
        return False

    def restore(snapshot: tuple[list[int | None], dict[int, int]]) -> None:
        slot_y[:] = snapshot[0]
        y_slot.clear()
        y_slot.update(snapshot[1])

    result: list[CycleWitness] = []

    def extend(depth: int) -> bool:
        budget.spend()
        if depth == m:
            mask = adj[order[-1]] & adj[order[0]]
            if mask == 0:
                return False
            snapshot = (slot_y[:], dict(y_slot))
            avail[m - 1] = mask
            if augment(m - 1, [0]):
                result.append(CycleWitness(tuple(order), tuple(slot_y)))
                return True
            restore(snapshot)
            return False
        for idx in range(len(rest)):
            if used[idx]:
                continue
            cand = rest[idx]
            if depth == m - 1 and m >= 3 and cand < order[1]:
                continue  # mirror image of an ordering already tried
            mask = adj[order[-1]] & adj[cand]
            if mask == 0:
                continue
            snapshot = (slot_y[:], dict(y_slot))
            avail[depth - 1] = mask
            if augment(depth - 1, [0]):
                used[idx] = True
                order.append(cand)
                if extend(depth + 1):
                    return True
                order.pop()
                used[idx] = False
            restore(snapshot)
        return False

    if extend(1):
        return result[0].canonical()
    return None


def find_cycle_covering(
    g: Bigraph,
    xs: VertexSet,
    exact_x: bool = True,
    *,
    budget: int | WorkBudget | None = None,
) -> CycleWitness | None:
    """A cycle whose X-vertices are exactly ``xs`` (exact_x=True) or a
    superset of it (exact_x=False); None when no such cycle exists.

    Cover mode tries candidate X-supersets by increasing size, then
    lexicographically, so the returned cycle is the first the canonical
    order finds.
    """
    if xs.side != X_SIDE:
        raise GraphInputError("find_cycle_covering expects an X-set")
    if xs.mask >> g.nx:
        raise GraphInputError("xs mentions vertices outside X")
    targets = list(xs.indices)
    if len(targets) < 2:
        raise DomainError("a covering cycle needs at least two X-vertices")
    b = as_budget(budget, NODE_BUDGET_DEFAULT, "node")
    if exact_x:
        return _search_exact_cycle(g, targets, b)
    others = [x for x in range(g.nx) if x not in set(targets)]
    for extra in range(len(others) + 1):
        for added in itertools.combinations(others, extra):
            cyc = _search_exact_cycle(g, sorted(targets + list(added)), b)
            if cyc is not None:
                return cyc
    return None


def find_disjoint_cycle_cover(
    g: Bigraph, *, budget: int | WorkBudget | None = None
) -> list[CycleWitness] | None:
    """Vertex-disjoint cycles covering every X-vertex, or None.

    Such a cover is exactly a spanning subgraph where every x has degree 2
    and every y degree 0 or 2, so the search assigns each x an unordered
    pair of Y-slots (capacity 2 per y) and rejects leftover degree-1 y's.
    """
    b = as_budget(budget, NODE_BUDGET_DEFAULT, "node")
    n = g.nx
    if n == 0:
        return []
    adj = g.adj_x
    if any(row.bit_count() < 2 for row in adj):
        return None

    futures = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        futures[i] = futures[i + 1] | adj[i]

    cap = [2] * g.ny
    avail_mask = (1 << g.ny) - 1
    half_mask = 0  # y's used exactly once so far
    choice: list[tuple[int, int]] = [(0, 0)] * n

    def take(j: int) -> None:
        nonlocal avail_mask, half_mask
        cap[j] -= 1
        if cap[j] == 1:
            half_mask |= 1 << j
        else:
            half_mask &= ~(1 << j)
            avail_mask &= ~(1 << j)

    def release(j: int) -> None:
        nonlocal avail_mask, half_mask
        cap[j] += 1
        if cap[j] == 1:
            half_mask |= 1 << j
            avail_mask |= 1 << j
        else:
            half_mask &= ~(1 << j)

    def assign(i: int) -> bool:
        b.spend()
        if i == n:
            return half_mask == 0
        if half_mask & ~futures[i]:
            return False  # a half-used y can never reach degree 2 again
        cands = bit_list(adj[i] & avail_mask)
        for ai in range(len(cands)):
            for bi in range(ai + 1, len(cands)):
                j1, j2 = cands[ai], cands[bi]
                choice[i] = (j1, j2)
                take(j1)
                take(j2)
                if assign(i + 1):
                    return True
                release(j2)
                release(j1)
        return False

    if not assign(0):
        return None

    y_to_x: dict[int, list[int]] = defaultdict(list)
    for i, (j1, j2) in enumerate(choice):
        y_to_x[j1].append(i)
        y_to_x[j2].append(i)
    visited = [False] * n
    cycles: list[CycleWitness] = []
    for start in range(n):
        if visited[start]:
            continue
        visited[start] = True
        xs_seq = [start]
        ys_seq: list[int] = []
        cur_x = start
        cur_y = min(choice[start])
        while True:
            ys_seq.append(cur_y)
            a, c = y_to_x[cur_y]
            nxt_x = c if a == cur_x else a
            if nxt_x == start:
                break
            visited[nxt_x] = True
            xs_seq.append(nxt_x)
            j1, j2 = choice[nxt_x]
            cur_y = j2 if j1 == cur_y else j1
            cur_x = nxt_x
        cycles.append(CycleWitness(tuple(xs_seq), tuple(ys_seq)).canonical())
    return cycles


# -- endpoint-pivot rotation and edge absorption ------------------------------


def _cycle_from_ring(ring: list[tuple[str, int]]) -> CycleWitness:
    if ring[0][0] != X_SIDE:
        ring = ring[1:] + ring[:1]
    return CycleWitness(
        tuple(v for _, v in ring[0::2]), tuple(v for _, v in ring[1::2])
    )


def _close_yy_path(g: Bigraph, verts: list[tuple[str, int]]) -> CycleWitness | None:
    """Close an alternating Y..Y path covering all of X into a cycle on the
    same X-vertices, by the endpoint pivot rule: find a path position whose
    X-vertex sees the far endpoint while its successor X-vertex sees the
    near endpoint, then reroute, dropping one interior Y-vertex.

    Whenever the endpoint degrees sum to at least (number of X's) + 2 such
    a pivot must exist by counting; the search runs regardless and simply
    reports None when there is no pivot.
    """
    n = (len(verts) - 1) // 2
    y_first = verts[0][1]
    y_last = verts[-1][1]
    adj_yf = g.adj_y[y_first]
    adj_yl = g.adj_y[y_last]
    for i in range(2, n + 1):
        x_i = verts[2 * i - 1][1]
        x_prev = verts[2 * i - 3][1]
        if (adj_yf >> x_i) & 1 and (adj_yl >> x_prev) & 1:
            combined = list(verts[: 2 * i - 2]) + list(reversed(verts[2 * i - 1 :]))
            return _cycle_from_ring(combined).canonical()
    return None


def rotate_path_to_cycle(g: Bigraph, p: PathWitness) -> CycleWitness | None:
    """Turn a Y-to-Y path covering all of X into a cycle covering all of X
    using the endpoint pivot rule; the cycle keeps every X-vertex and all
    but one Y-vertex of the path.

    Guaranteed to succeed when deg(y_start) + deg(y_end) >= |X| + 2; the
    pivot search is attempted regardless of degrees.
    """
    p.validate(g)
    if p.endpoint_sides() != (Y_SIDE, Y_SIDE):
        raise GraphInputError("rotation needs a path with two Y endpoints")
    covered = set(p.x_indices())
    if covered != set(range(g.nx)):
        raise GraphInputError("rotation needs a path covering every X-vertex")
    cyc = _close_yy_path(g, list(p.vertices))
    if cyc is not None:
        try:
            cyc.validate(g)
        except WitnessError as exc:  # pragma: no cover - construction bug guard
            raise ContractViolationError(f"rotated cycle failed validation: {exc}")
    return cyc


def absorb_virtual_edge(
    g: Bigraph,
    x: int,
    y: int,
    c: CycleWitness,
    *,
    diagnostics: dict | None = None,
) -> CycleWitness | None:
    """Rewrite a cycle that is valid in g plus the helper edge (x, y) into a
    cycle covering all of X that is valid in g itself.

    If the cycle never uses the helper edge it is returned unchanged.
    Otherwise the cycle is cut at the helper edge, giving a path from y to
    x through every X-vertex, and one of two reroutes applies: extend the
    path by an off-path neighbour of x and close it with the endpoint
    pivot rule, or pivot on an on-path Y-vertex seen by x whose successor
    X-vertex is seen by y.  Both reroutes exist whenever
    deg(x) + deg(y) >= |X| + 1 and every Y-degree exceeds (|X| + 1) / 2;
    outside those hypotheses None is possible.
    """
    if not (0 <= x < g.nx and 0 <= y < g.ny):
        raise GraphInputError(f"vertex pair ({x}, {y}) out of range")
    if g.has_edge(x, y):
        raise DomainError(f"edge ({x}, {y}) is already present; nothing to absorb")
    aug = g.with_edge(x, y)
    c.validate(aug)
    if c.x_set().mask != (1 << g.nx) - 1:
        raise GraphInputError("absorption needs a cycle covering every X-vertex")
    n = g.nx
    if diagnostics is not None:
        diagnostics["degree_pair_ok"] = g.degree_x(x) + g.degree_y(y) >= n + 1
        diagnostics["y_degrees_ok"] = all(
            2 * g.degree_y(j) > n + 1 for j in range(g.ny)
        )

    ring = c.vertices()
    two_m = len(ring)
    cut = None
    for a in range(two_m):
        va, vb = ring[a], ring[(a + 1) % two_m]
        if {va, vb} == {(X_SIDE, x), (Y_SIDE, y)}:
            cut = a
            break
    if cut is None:
        if diagnostics is not None:
            diagnostics["case"] = "unused"
        c.validate(g)
        return c

    if ring[cut][0] == Y_SIDE:
        path = [ring[(cut - t) % two_m] for t in range(two_m)]
    else:
        path = [ring[(cut + 1 + t) % two_m] for t in range(two_m)]
    # path now runs y, x_1, y_2, ..., y_n, x with every X-vertex on it

    path_y_mask = mask_of(v for s, v in path if s == Y_SIDE)
    for y2 in bits(g.adj_x[x] & ~path_y_mask):
        cyc = _close_yy_path(g, path + [(Y_SIDE, y2)])
        if cyc is not None:
            if diagnostics is not None:
                diagnostics["case"] = "off-path"
                diagnostics["pivot_y"] = y2
            cyc.validate(g)
            return cyc

    adj_y_end = g.adj_y[y]
    adj_x_end = g.adj_x[x]
    for i in range(2, n):
        x_i = path[2 * i - 1][1]
        y_i = path[2 * (i - 1)][1]
        if (adj_y_end >> x_i) & 1 and (adj_x_end >> y_i) & 1:
            combined = list(path[: 2 * i - 1]) + list(reversed(path[2 * i - 1 :]))
            cyc = _cycle_from_ring(combined).canonical()
            if diagnostics is not None:
                diagnostics["case"] = "on-path"
                diagnostics["pivot_y"] = y_i
            cyc.validate(g)
            return cyc
    if diagnostics is not None:
        diagnostics["case"] = "failed"
    return None


# -- high-minimum-Y-degree pipeline -------------------------------------------


def _yy_path_system(
    g: Bigraph, xs_list: list[int], budget: WorkBudget
) -> list[list[tuple[str, int]]] | None:
    """Disjoint nontrivial Y..Y paths covering exactly ``xs_list``, using
    only those X-vertices and their neighbours.

    Viewing each x as an edge between its two chosen Y-vertices, a path
    system is a forest over Y with maximum degree 2, so the search keeps a
    capacity per y and a union-find over Y-components.
    """
    t = len(xs_list)
    choices: list[tuple[int, int]] = [(0, 0)] * t

    def find(par: dict[int, int], a: int) -> int:
        while par[a] != a:
            a = par[a]
        return a

    def assign(i: int, par: dict[int, int], cap: dict[int, int]) -> bool:
        budget.spend()
        if i == t:
            return True
        x = xs_list[i]
        avail = [j for j in bits(g.adj_x[x]) if cap.get(j, 2) > 0]
        for ai in range(len(avail)):
            for bi in range(ai + 1, len(avail)):
                y1, y2 = avail[ai], avail[bi]
                par2 = dict(par)
                par2.setdefault(y1, y1)
                par2.setdefault(y2, y2)
                r1, r2 = find(par2, y1), find(par2, y2)
                if r1 == r2:
                    continue  # would close a cycle instead of a path
                par2[r1] = r2
                cap2 = dict(cap)
                cap2[y1] = cap2.get(y1, 2) - 1
                cap2[y2] = cap2.get(y2, 2) - 1
                choices[i] = (y1, y2)
                if assign(i + 1, par2, cap2):
                    return True
        return False

    if not assign(0, {}, {}):
        return None

    inc: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, (y1, y2) in enumerate(choices):
        x = xs_list[i]
        inc[y1].append((x, y2))
        inc[y2].append((x, y1))
    paths: list[list[tuple[str, int]]] = []
    used_x: set[int] = set()
    for y_start in sorted(j for j in inc if len(inc[j]) == 1):
        if all(xv in used_x for xv, _ in inc[y_start]):
            continue
        verts: list[tuple[str, int]] = [(Y_SIDE, y_start)]
        cur = y_start
        while True:
            step = [(xv, oy) for xv, oy in inc[cur] if xv not in used_x]
            if not step:
                break
            xv, oy = step[0]
            used_x.add(xv)
            verts.append((X_SIDE, xv))
            verts.append((Y_SIDE, oy))
            cur = oy
        paths.append(verts)
    return paths


def solve_high_degree(
    g: Bigraph,
    k: int,
    *,
    verify: bool = True,
    budget: int | WorkBudget | None = None,
    diagnostics: dict | None = None,
) -> CycleWitness | None:
    """Covering cycle for a dHp graph whose Y-degrees are all at least
    |X| - k, with |X| > max(2k+1, k(k+1)).

    Pipeline: split X into the (at most k) vertices of degree at most k and
    the rest; complete the high-degree part against Y to get a helper
    graph; cover the low-degree part by disjoint Y-to-Y paths found
    exactly; join the paths through distinct high-degree X-vertices and
    close the cycle through the remaining ones; then absorb the helper
    edges one at a time.  Each absorption is guaranteed by the degree
    hypotheses, so with ``verify`` on, a None return signals a bug rather
    than a bad input.
    """
    from .checkers import check_dhp  # deferred to avoid an import cycle

    n = g.nx
    if k < 0:
        raise DomainError("k must be non-negative")
    floor = max(2 * k + 1, k * (k + 1))
    if n <= floor:
        raise DomainError(f"need |X| > max(2k+1, k(k+1)) = {floor}, got {n}")
    for j in range(g.ny):
        dj = g.degree_y(j)
        if dj < n - k:
            raise DomainError(f"Y-vertex {j} has degree {dj} < |X| - k = {n - k}")
    if g.ny < n:
        raise DomainError(f"|Y| = {g.ny} < |X| = {n}; the graph cannot be dHp")
    if verify:
        v = check_dhp(g, budget=budget if isinstance(budget, int) else None)
        if not v.holds:
            raise DomainError(f"graph is not dHp; violating S = {v.witness['S']}")
    b = as_budget(budget, NODE_BUDGET_DEFAULT, "node")

    xs_small = [xv for xv in range(n) if g.degree_x(xv) <= k]
    xl = [xv for xv in range(n) if g.degree_x(xv) > k]
    if len(xs_small) > k:
        raise (ContractViolationError if verify else DomainError)(
            f"{len(xs_small)} X-vertices of degree <= {k}; a dHp graph meeting "
            "the degree preconditions has at most k of them"
        )

    full_y = (1 << g.ny) - 1
    helper_rows = list(g.adj_x)
    for xv in xl:
        helper_rows[xv] = full_y
    helper = Bigraph(n, g.ny, tuple(helper_rows))

    if not xs_small:
        ring: list[tuple[str, int]] = []
        for i in range(n):
            ring.append((X_SIDE, i))
            ring.append((Y_SIDE, i))
        cyc = _cycle_from_ring(ring)
    else:
        paths = _yy_path_system(g, xs_small, b)
        if paths is None:
            if diagnostics is not None:
                diagnostics["stage"] = "path-system"
            logger.warning(
                "no disjoint Y..Y path system covers the low-degree side; "
                "for k <= 7 this contradicts the covering theorem"
            )
            return None
        m = len(paths)
        if len(xl) < m + 1:
            raise ContractViolationError(
                "too few high-degree X-vertices to join and close the paths"
            )
        joiners = xl[: m - 1]
        rest = xl[m - 1 :]
        big: list[tuple[str, int]] = list(paths[0])
        for t in range(1, m):
            big.append((X_SIDE, joiners[t - 1]))
            big.extend(paths[t])
        path_y = {v for s, v in big if s == Y_SIDE}
        unused_ys = [j for j in range(g.ny) if j not in path_y]
        if len(unused_ys) < len(rest) - 1:
            raise ContractViolationError("not enough spare Y-vertices to close the cycle")
        cross: list[tuple[str, int]] = [(X_SIDE, rest[0])]
        for idx in range(1, len(rest)):
            cross.append((Y_SIDE, unused_ys[idx - 1]))
            cross.append((X_SIDE, rest[idx]))
        cyc = _cycle_from_ring(cross + big)

    cyc = cyc.canonical()
    try:
        cyc.validate(helper)
    except WitnessError as exc:  # pragma: no cover - construction bug guard
        raise ContractViolationError(f"helper-graph cycle invalid: {exc}")

    current = helper
    while True:
        virtual_used = sorted(
            (xv, yv)
            for t in range(cyc.m)
            for xv, yv in (
                (cyc.xs[t], cyc.ys[t]),
                (cyc.xs[(t + 1) % cyc.m], cyc.ys[t]),
            )
            if not (g.adj_x[xv] >> yv) & 1
        )
        if not virtual_used:
            break
        xv, yv = virtual_used[0]
        current = current.without_edge(xv, yv)
        nxt = absorb_virtual_edge(current, xv, yv, cyc)
        if nxt is None:
            if diagnostics is not None:
                diagnostics["stage"] = "absorption"
                diagnostics["edge"] = (xv, yv)
            logger.warning("absorption of helper edge (%d, %d) failed", xv, yv)
            return None
        cyc = nxt
    cyc.validate(g)
    return cyc


# -- split-Y-degree pipeline ----------------------------------------------------


def _min_path_cover_exact(n: int, xadj: list[int]) -> list[list[int]]:
    """Minimum number of vertex-disjoint paths covering all n vertices of a
    graph given by adjacency masks, via subset DP.  Exponential in n; the
    caller gates on size."""
    size = 1 << n
    end = [0] * size
    for v in range(n):
        end[1 << v] = 1 << v
    for mask in range(1, size):
        e = end[mask]
        if not e:
            continue
        for v in bits(e):
            for u in bits(xadj[v] & ~mask):
                end[mask | (1 << u)] |= 1 << u

    inf = n + 1
    best = [inf] * size
    parent = [0] * size
    best[0] = 0
    for mask in range(1, size):
        low = mask & -mask
        sub = mask
        choice = 0
        while sub:
            if sub & low and end[sub] and best[mask ^ sub] < inf:
                cand = best[mask ^ sub] + 1
                if cand < best[mask] or (cand == best[mask] and sub < choice):
                    best[mask] = cand
                    choice = sub
            sub = (sub - 1) & mask
        parent[mask] = choice

    full = size - 1
    pieces = []
    mask = full
    while mask:
        piece = parent[mask]
        pieces.append(piece)
        mask ^= piece

    paths = []
    for piece in pieces:
        v = (end[piece] & -end[piece]).bit_length() - 1
        seq = [v]
        rest = piece ^ (1 << v)
        while rest:
            prev = end[rest] & xadj[seq[-1]]
            u = (prev & -prev).bit_length() - 1
            seq.append(u)
            rest ^= 1 << u
        seq.reverse()
        paths.append(seq)
    return sorted(paths, key=lambda p: min(p))


def _min_path_cover_greedy(n: int, xadj: list[int]) -> list[list[int]]:
    """Greedy merge heuristic for larger instances: start from singletons and
    splice paths whose endpoints are adjacent until stuck.  Not guaranteed
    minimal."""
    paths = [[v] for v in range(n)]
    merged = True
    while merged:
        merged = False
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                a, bp = paths[i], paths[j]
                if (xadj[a[-1]] >> bp[0]) & 1:
                    paths[i] = a + bp
                elif (xadj[a[-1]] >> bp[-1]) & 1:
                    paths[i] = a + bp[::-1]
                elif (xadj[a[0]] >> bp[-1]) & 1:
                    paths[i] = bp + a
                elif (xadj[a[0]] >> bp[0]) & 1:
                    paths[i] = bp[::-1] + a
                else:
                    continue
                del paths[j]
                merged = True
                break
            if merged:
                break
    return sorted(paths, key=lambda p: min(p))


def solve_degree_split(
    g: Bigraph,
    *,
    verify: bool = True,
    exact_paths: bool | None = None,
    budget: int | WorkBudget | None = None,
    diagnostics: dict | None = None,
) -> CycleWitness | None:
    """Covering cycle for a dHp graph whose Y-degrees all lie in
    {2, |X|-2, |X|-1, |X|}.

    The degree-2 Y-vertices act as edges of a multigraph on X; a minimum
    collection of disjoint X-to-X paths covering X is lifted back to the
    bigraph.  One path closes directly through two common neighbours of
    its endpoints.  Several paths are arranged in a ring, the arrangement
    is improved by segment reversals while the count of (endpoint pair,
    high-degree common neighbour) incidences grows, and a matching that
    assigns a distinct high-degree Y-vertex to every junction splices the
    ring into one cycle.  A Hall violation after the reversal search stops
    would contradict the covering theorem; it is reported via
    ``diagnostics`` and None.

    Path-count minimisation is exact for |X| <= 12 (or with
    ``exact_paths=True``); beyond that a greedy merge is used and the
    result is best-effort.
    """
    from .checkers import check_dhp  # deferred to avoid an import cycle

    n = g.nx
    if n < 2:
        raise DomainError("need |X| >= 2")
    allowed = {2, n - 2, n - 1, n}
    for j in range(g.ny):
        if g.degree_y(j) not in allowed:
            raise DomainError(
                f"Y-vertex {j} has degree {g.degree_y(j)}, outside {{2, n-2, n-1, n}}"
            )
    if verify:
        v = check_dhp(g, budget=budget if isinstance(budget, int) else None)
        if not v.holds:
            raise DomainError(f"graph is not dHp; violating S = {v.witness['S']}")
    b = as_budget(budget, NODE_BUDGET_DEFAULT, "node")

    ys_small = [j for j in range(g.ny) if g.degree_y(j) == 2]
    yl_mask = ((1 << g.ny) - 1) & ~mask_of(ys_small)

    xadj = [0] * n
    pair_ys: dict[tuple[int, int], list[int]] = defaultdict(list)
    for j in ys_small:
        a, c = bit_list(g.adj_y[j])
        xadj[a] |= 1 << c
        xadj[c] |= 1 << a
        pair_ys[(a, c)].append(j)

    use_exact = exact_paths if exact_paths is not None else n <= 12
    if use_exact and n > 20:
        raise DomainError("exact path minimisation is limited to |X| <= 20")
    if use_exact:
        paths_x = _min_path_cover_exact(n, xadj)
    else:
        paths_x = _min_path_cover_greedy(n, xadj)
        if diagnostics is not None:
            diagnostics["paths_best_effort"] = True

    used_ys: set[int] = set()
    paths: list[tuple[list[int], list[int]]] = []
    for p in paths_x:
        ylist = []
        for u, w in zip(p, p[1:]):
            key = (u, w) if u < w else (w, u)
            j = next(jj for jj in pair_ys[key] if jj not in used_ys)
            used_ys.add(j)
            ylist.append(j)
        paths.append((p, ylist))
    m = len(paths)

    if m == 1:
        xs_list, ys_list = paths[0]
        closers = (
            g.adj_x[xs_list[0]] & g.adj_x[xs_list[-1]] & ~mask_of(ys_list)
        )
        if closers == 0:
            if diagnostics is not None:
                diagnostics["stage"] = "close-single-path"
            logger.warning(
                "single covering path has no off-path common neighbour to "
                "close on; contradicts the covering theorem for dHp inputs"
            )
            return None
        y_close = (closers & -closers).bit_length() - 1
        cyc = CycleWitness(tuple(xs_list), tuple(ys_list + [y_close])).canonical()
        cyc.validate(g)
        return cyc

    arrangement = list(range(m))
    flipped = [False] * m

    def left(t: int) -> int:
        xs_list, _ = paths[arrangement[t]]
        return xs_list[-1] if flipped[t] else xs_list[0]

    def right(t: int) -> int:
        xs_list, _ = paths[arrangement[t]]
        return xs_list[0] if flipped[t] else xs_list[-1]

    def common_yl(a: int, c: int) -> int:
        return (g.adj_x[a] & g.adj_x[c] & yl_mask).bit_count()

    improved = True
    while improved:
        improved = False
        for i in range(m):
            for j in range(i, m):
                if i == 0 and j == m - 1:
                    continue  # reversing everything changes no junction
                b.spend()
                pi, nj = (i - 1) % m, (j + 1) % m
                old = common_yl(right(pi), left(i)) + common_yl(right(j), left(nj))
                new = common_yl(right(pi), right(j)) + common_yl(left(i), left(nj))
                if new > old:
                    arrangement[i : j + 1] = arrangement[i : j + 1][::-1]
                    flipped[i : j + 1] = [not f for f in flipped[i : j + 1]][::-1]
                    improved = True
                    break
            if improved:
                break

    junctions = [(right(t), left((t + 1) % m)) for t in range(m)]
    inst = MatchingInstance.for_pairs(g, junctions, bit_list(yl_mask))
    assignment = max_matching(inst)
    if len(assignment) < m:
        violator = hall_violator(inst)
        if diagnostics is not None:
            diagnostics["stage"] = "hall-matching"
            diagnostics["violating_junctions"] = [
                junctions[t] for t in (violator or ())
            ]
        logger.warning(
            "junction matching is not saturating after reversal search; "
            "violating junction set %s (research-interest instance)",
            violator,
        )
        return None

    ring: list[tuple[str, int]] = []
    for t in range(m):
        xs_list, ys_list = paths[arrangement[t]]
        if flipped[t]:
            xs_list, ys_list = xs_list[::-1], ys_list[::-1]
        for pos, xv in enumerate(xs_list):
            ring.append((X_SIDE, xv))
            if pos < len(ys_list):
                ring.append((Y_SIDE, ys_list[pos]))
        ring.append((Y_SIDE, assignment[t]))
    cyc = _cycle_from_ring(ring).canonical()
    cyc.validate(g)
    return cyc
