"""Decision procedures for the double Hall property and its relatives.

All checkers share the same shape: enumerate X-subsets by increasing
cardinality and lexicographically within a cardinality, stop at the first
violation, and return a Verdict whose witness is that first violation.
That makes failure reports deterministic and as small as possible.

The scans are exact brute force by design; the only speedups used are ones
that provably cannot change the verdict or the witness (saturating bitmask
counters, and skipping subtrees that can no longer produce a violation).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from .budget import NODE_BUDGET_DEFAULT, SUBSET_BUDGET_DEFAULT, WorkBudget, as_budget
from .core import (
    Bigraph,
    VertexSet,
    X_SIDE,
    Y_SIDE,
    bit_list,
    bits,
    induced_subgraph,
    is_two_connected,
    neighborhood_at_least,
)
from .errors import ContractViolationError, DomainError

__all__ = [
    "Verdict",
    "Obstacle",
    "DegreeBoundReport",
    "check_dhp",
    "check_snp",
    "check_supercyclic",
    "check_critical",
    "check_saturated_critical",
    "check_snp_minimal",
    "find_minimal_obstacle",
    "is_obstacle",
    "obstacle_is_minimal",
    "check_degree_bound",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a property check, with a certificate on failure.

    ``witness`` is a small JSON-friendly mapping whose keys depend on the
    property; the X-subset at fault is always under "S".
    """

    prop: str
    holds: bool
    witness: Mapping[str, Any] | None = None

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "property": self.prop,
            "holds": self.holds,
            "witness": dict(self.witness) if self.witness is not None else None,
            "budget_exhausted": False,
        }


@dataclass(frozen=True)
class Obstacle:
    """A certificate (S, T) that the double Hall property fails:
    S is an X-set with |S| >= 2 whose twice-seen neighbourhood fits inside
    T with |T| < |S|."""

    s: VertexSet
    t: VertexSet
    minimal: bool

    def validate(self, g: Bigraph) -> None:
        if self.s.side != X_SIDE or self.t.side != Y_SIDE:
            raise DomainError("obstacle sides are (X-set, Y-set)")
        if len(self.s) < 2:
            raise DomainError("obstacle needs |S| >= 2")
        if len(self.s) <= len(self.t):
            raise DomainError("obstacle needs |S| > |T|")
        lam2 = neighborhood_at_least(g, self.s, 2)
        if not lam2.issubset(self.t):
            raise DomainError("obstacle needs T to contain the twice-seen neighbourhood of S")
        if self.minimal and not obstacle_is_minimal(g, self.s, self.t):
            raise DomainError("obstacle marked minimal is not minimal")

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "S": list(self.s.indices),
            "T": list(self.t.indices),
            "minimal": self.minimal,
        }


@dataclass(frozen=True)
class DegreeBoundReport:
    """How a graph sits relative to the bound n <= d(d-1)/2 + 1 that the
    double Hall property forces on |X| in terms of the maximum degree d."""

    n: int
    max_degree: int
    bound: int
    within_bound: bool
    tight: bool
    dhp_verified: bool

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "max_degree": self.max_degree,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "tight": self.tight,
            "dhp_verified": self.dhp_verified,
        }


# -- subset scans ------------------------------------------------------------


def _first_deficient_subset(
    adj: tuple[int, ...], n: int, k: int, budget: WorkBudget
) -> tuple[tuple[int, ...], int] | None:
    """Lexicographically first size-k X-subset S with |twice-seen(S)| < k.

    Carries saturating one-seen/twice-seen accumulators down a prefix tree.
    A prefix whose twice-seen count already reaches k is skipped: adding
    vertices can only grow the accumulator, so no completion can violate.
    Budget is charged per prefix visited.
    """
    found: list[tuple[tuple[int, ...], int]] = []

    def descend(start: int, depth: int, chosen: list[int], u1: int, u2: int) -> bool:
        if depth == k:
            found.append((tuple(chosen), u2))
            return True
        # leave room for the remaining k - depth picks
        for i in range(start, n - (k - depth) + 1):
            budget.spend()
            row = adj[i]
            nu2 = u2 | (u1 & row)
            if depth + 1 == k:
                if nu2.bit_count() < k:
                    found.append((tuple(chosen) + (i,), nu2))
                    return True
                continue
            if nu2.bit_count() >= k:
                continue  # no superset of this prefix can violate
            chosen.append(i)
            if descend(i + 1, depth + 1, chosen, u1 | row, nu2):
                return True
            chosen.pop()
        return False

    if descend(0, 0, [], 0, 0):
        return found[0]
    return None


def check_dhp(g: Bigraph, *, budget: int | WorkBudget | None = None) -> Verdict:
    """Decide the double Hall property: every S within X with |S| >= 2 sees
    at least |S| Y-vertices at least twice.

    On failure the witness "S" is the smallest violating set, ties broken
    by lexicographically least index tuple.
    """
    if g.nx < 2:
        raise DomainError(f"double Hall property needs |X| >= 2, got {g.nx}")
    b = as_budget(budget, SUBSET_BUDGET_DEFAULT, "subset")
    for k in range(2, g.nx + 1):
        hit = _first_deficient_subset(g.adj_x, g.nx, k, b)
        if hit is not None:
            return Verdict("dhp", False, {"S": list(hit[0])})
    return Verdict("dhp", True)


def _snp_leaf_violation(g: Bigraph, chosen: tuple[int, ...], u2: int) -> str | None:
    k = len(chosen)
    if u2.bit_count() < k:
        return "cardinality"
    sub, _, _ = induced_subgraph(
        g, VertexSet.xs(chosen), VertexSet(Y_SIDE, u2)
    )
    if not is_two_connected(sub):
        return "connectivity"
    return None


def check_snp(g: Bigraph, *, budget: int | WorkBudget | None = None) -> Verdict:
    """Decide the super neighbourhood property: every S with |S| >= 3 has
    |twice-seen(S)| >= |S| and the subgraph induced by S together with its
    twice-seen neighbourhood is 2-connected.

    The witness carries a "reason" flag: cardinality or connectivity.
    """
    if g.nx < 3:
        raise DomainError(f"super neighbourhood property needs |X| >= 3, got {g.nx}")
    b = as_budget(budget, SUBSET_BUDGET_DEFAULT, "subset")
    adj = g.adj_x
    n = g.nx

    for k in range(3, n + 1):
        result: list[tuple[tuple[int, ...], str]] = []

        def descend(start: int, depth: int, chosen: list[int], u1: int, u2: int) -> bool:
            if depth == k:
                reason = _snp_leaf_violation(g, tuple(chosen), u2)
                if reason is not None:
                    result.append((tuple(chosen), reason))
                    return True
                return False
            for i in range(start, n - (k - depth) + 1):
                b.spend()
                row = adj[i]
                chosen.append(i)
                if descend(i + 1, depth + 1, chosen, u1 | row, u2 | (u1 & row)):
                    return True
                chosen.pop()
            return False

        if descend(0, 0, [], 0, 0):
            s, reason = result[0]
            return Verdict("snp", False, {"S": list(s), "reason": reason})
    return Verdict("snp", True)


def check_supercyclic(
    g: Bigraph,
    *,
    budget_subsets: int | WorkBudget | None = None,
    budget_nodes: int | WorkBudget | None = None,
) -> Verdict:
    """Decide supercyclicity: for every X' within X with |X'| >= 3 there is a
    cycle whose X-vertices are exactly X'.

    Delegates each existence question to the cycle engine; all searches
    share one node budget.
    """
    from .cycles import find_cycle_covering  # deferred to avoid an import cycle

    if g.nx < 3:
        raise DomainError(f"supercyclicity needs |X| >= 3, got {g.nx}")
    bs = as_budget(budget_subsets, SUBSET_BUDGET_DEFAULT, "subset")
    bn = as_budget(budget_nodes, NODE_BUDGET_DEFAULT, "node")
    for k in range(3, g.nx + 1):
        for combo in itertools.combinations(range(g.nx), k):
            bs.spend()
            cyc = find_cycle_covering(g, VertexSet.xs(combo), exact_x=True, budget=bn)
            if cyc is None:
                return Verdict("supercyclic", False, {"S": list(combo)})
    return Verdict("supercyclic", True)


def check_critical(
    g: Bigraph,
    *,
    budget_subsets: int | WorkBudget | None = None,
    budget_nodes: int | WorkBudget | None = None,
) -> Verdict:
    """Decide criticality, reporting the first violated clause:

    1. the graph is snp but not supercyclic,
    2. every Y-vertex is seen twice from X,
    3. dropping any X-vertices (keeping at least 3) leaves a supercyclic graph.
    """
    if g.nx < 3:
        raise DomainError(f"criticality needs |X| >= 3, got {g.nx}")
    bs = as_budget(budget_subsets, SUBSET_BUDGET_DEFAULT, "subset")
    bn = as_budget(budget_nodes, NODE_BUDGET_DEFAULT, "node")

    snp_v = check_snp(g, budget=bs)
    if not snp_v.holds:
        return Verdict(
            "critical", False, {"clause": 1, "detail": "not snp", "S": snp_v.witness["S"]}
        )
    sc_v = check_supercyclic(g, budget_subsets=bs, budget_nodes=bn)
    if sc_v.holds:
        return Verdict("critical", False, {"clause": 1, "detail": "graph is supercyclic"})

    lam2_all = neighborhood_at_least(g, g.full_x(), 2)
    if lam2_all.mask != g.full_y().mask:
        missing = bit_list(g.full_y().mask & ~lam2_all.mask)
        return Verdict(
            "critical", False, {"clause": 2, "detail": "Y not fully seen twice", "T": missing}
        )

    for k in range(3, g.nx):
        for combo in itertools.combinations(range(g.nx), k):
            bs.spend()
            sub, _, _ = induced_subgraph(g, VertexSet.xs(combo), g.full_y())
            v = check_supercyclic(sub, budget_subsets=bs, budget_nodes=bn)
            if not v.holds:
                return Verdict(
                    "critical",
                    False,
                    {"clause": 3, "detail": "proper restriction not supercyclic", "S": list(combo)},
                )
    return Verdict("critical", True)


def check_saturated_critical(
    g: Bigraph,
    *,
    budget_subsets: int | WorkBudget | None = None,
    budget_nodes: int | WorkBudget | None = None,
) -> Verdict:
    """Critical, and adding any single missing X-Y edge makes the graph
    supercyclic."""
    bs = as_budget(budget_subsets, SUBSET_BUDGET_DEFAULT, "subset")
    bn = as_budget(budget_nodes, NODE_BUDGET_DEFAULT, "node")
    crit = check_critical(g, budget_subsets=bs, budget_nodes=bn)
    if not crit.holds:
        return Verdict(
            "saturated-critical", False, {"clause": "critical", "inner": dict(crit.witness or {})}
        )
    for x in range(g.nx):
        for y in bits(((1 << g.ny) - 1) & ~g.adj_x[x]):
            v = check_supercyclic(g.with_edge(x, y), budget_subsets=bs, budget_nodes=bn)
            if not v.holds:
                return Verdict(
                    "saturated-critical",
                    False,
                    {"clause": "augmentation", "x": x, "y": y, "S": v.witness["S"]},
                )
    return Verdict("saturated-critical", True)


def check_snp_minimal(
    g: Bigraph, *, budget: int | WorkBudget | None = None
) -> Verdict:
    """snp holds, but removing any one Y-vertex destroys it."""
    b = as_budget(budget, SUBSET_BUDGET_DEFAULT, "subset")
    snp_v = check_snp(g, budget=b)
    if not snp_v.holds:
        return Verdict("snp-minimal", False, {"clause": "snp", "S": snp_v.witness["S"]})
    full_y_mask = (1 << g.ny) - 1
    for y in range(g.ny):
        sub, _, _ = induced_subgraph(
            g, g.full_x(), VertexSet(Y_SIDE, full_y_mask & ~(1 << y))
        )
        v = check_snp(sub, budget=b)
        if v.holds:
            return Verdict("snp-minimal", False, {"clause": "redundant-y", "y": y})
    return Verdict("snp-minimal", True)


# -- obstacles ---------------------------------------------------------------


def _lambda2_mask(adj: tuple[int, ...], members: Iterator[int] | tuple[int, ...]) -> int:
    u1 = 0
    u2 = 0
    for i in members:
        row = adj[i]
        u2 |= u1 & row
        u1 |= row
    return u2


def is_obstacle(g: Bigraph, s: VertexSet, t: VertexSet) -> bool:
    if s.side != X_SIDE or t.side != Y_SIDE:
        raise DomainError("an obstacle pairs an X-set with a Y-set")
    if len(s) < 2 or len(s) <= len(t):
        return False
    lam2 = _lambda2_mask(g.adj_x, bits(s.mask))
    return lam2 & ~t.mask == 0


def obstacle_is_minimal(g: Bigraph, s: VertexSet, t: VertexSet) -> bool:
    """No obstacle (S' within S, T' within T) has strictly smaller |S'|+|T'|.

    For a candidate S' the cheapest companion is T' = twice-seen(S'), which
    is automatically inside T, so only S' needs enumerating.
    """
    if not is_obstacle(g, s, t):
        return False
    total = len(s) + len(t)
    s_mask = s.mask
    sub = s_mask
    while sub:
        if sub != s_mask and sub.bit_count() >= 2:
            lam2 = _lambda2_mask(g.adj_x, bits(sub))
            if lam2.bit_count() < sub.bit_count():
                if sub.bit_count() + lam2.bit_count() < total:
                    return False
        sub = (sub - 1) & s_mask
    # Keeping S' = S, the only smaller companion would be T' = twice-seen(S)
    # itself, so T larger than that neighbourhood is non-minimal.
    return len(t) == _lambda2_mask(g.adj_x, bits(s_mask)).bit_count()


def find_minimal_obstacle(
    g: Bigraph, s_max: int, *, budget: int | WorkBudget | None = None
) -> Obstacle | None:
    """First obstacle in (increasing |S|, then lexicographic) order, with
    T = twice-seen(S), capped at |S| <= s_max.

    The first hit is automatically minimal: every proper subset of S was
    enumerated earlier (smaller cardinality) and found non-violating, so no
    sub-obstacle with a smaller total exists, and T cannot shrink below the
    twice-seen neighbourhood.
    """
    if g.nx < 2:
        raise DomainError("obstacles need |X| >= 2")
    if not (2 <= s_max <= g.nx):
        raise DomainError(f"s_max must be in 2..{g.nx}, got {s_max}")
    b = as_budget(budget, SUBSET_BUDGET_DEFAULT, "subset")
    for k in range(2, s_max + 1):
        hit = _first_deficient_subset(g.adj_x, g.nx, k, b)
        if hit is not None:
            chosen, lam2 = hit
            return Obstacle(
                s=VertexSet.xs(chosen), t=VertexSet(Y_SIDE, lam2), minimal=True
            )
    return None


def check_degree_bound(
    g: Bigraph, *, verify_dhp: bool = False, budget: int | WorkBudget | None = None
) -> DegreeBoundReport:
    """Report n = |X| against the bound d(d-1)/2 + 1 where d is the maximum
    degree.  With ``verify_dhp`` the graph is first checked to be dHp, and a
    verified dHp graph exceeding the bound raises ContractViolationError
    (it would contradict the bound theorem)."""
    verified = False
    if verify_dhp:
        v = check_dhp(g, budget=budget)
        if not v.holds:
            raise DomainError(
                f"degree bound applies to dHp graphs; this one fails at S={v.witness['S']}"
            )
        verified = True
    n = g.nx
    d = g.max_degree()
    bound = d * (d - 1) // 2 + 1
    within = n <= bound
    if verified and not within:
        raise ContractViolationError(
            f"verified dHp graph has n={n} above the degree bound {bound} for d={d}"
        )
    return DegreeBoundReport(
        n=n,
        max_degree=d,
        bound=bound,
        within_bound=within,
        tight=n == bound,
        dhp_verified=verified,
    )
