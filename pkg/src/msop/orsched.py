"""Ordering under OR-precedence constraints given by a DAG.

A set of jobs is *OR-initial* when every member with predecessors contains
at least one of its direct predecessors; these sets form the (union-closed)
feasible family.  For inforests the inclusion-minimal maximum-density sets
are stems (paths starting at a source and following successor arcs), so the
exact density step enumerates all O(n^2) stems.  For multitrees they are
rooted subtrees of a source's successor outtree, solved by a parametric
ratio DP.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from .core import (
    Density,
    DensityResult,
    DensitySolver,
    INF,
    MsopInstance,
    Permutation,
    Rational,
    StructuralFlags,
    order_of,
)
from .errors import (
    CyclicInput,
    InfeasibleOrder,
    NoFeasibleSuperset,
    NonMonotone,
    NotInforest,
    NotInitial,
    NotMultitree,
    ValidationError,
)

WeightOracle = Callable[[frozenset[int]], Rational]


@dataclass(frozen=True)
class OrDag:
    """Jobs with processing times, weights, and OR-precedence arcs.

    An arc (i, j) makes i a direct OR-predecessor of j: j may run once at
    least one of its predecessors has run.
    """

    jobs: tuple[int, ...]
    times: tuple[Rational, ...]
    weights: tuple[Rational, ...]
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(set(self.jobs)) != len(self.jobs):
            raise ValidationError("job ids must be distinct")
        if len(self.times) != len(self.jobs) or len(self.weights) != len(self.jobs):
            raise ValidationError("exactly one time and one weight per job")
        known = set(self.jobs)
        for p in self.times:
            if p < 0:
                raise ValidationError("processing times must be nonnegative")
        for w in self.weights:
            if w < 0:
                raise ValidationError("job weights must be nonnegative")
        for i, j in self.arcs:
            if i not in known or j not in known:
                raise ValidationError(f"arc ({i}, {j}) references an unknown job")
            if i == j:
                raise CyclicInput(f"self-loop at job {i}")
        self._assert_acyclic()

    def _assert_acyclic(self) -> None:
        indeg = {j: 0 for j in self.jobs}
        for _, j in self.arcs:
            indeg[j] += 1
        queue = deque(j for j in self.jobs if indeg[j] == 0)
        seen = 0
        succs = {j: [] for j in self.jobs}
        for i, j in self.arcs:
            succs[i].append(j)
        while queue:
            v = queue.popleft()
            seen += 1
            for w in succs[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if seen != len(self.jobs):
            raise CyclicInput("precedence graph contains a cycle")

    @cached_property
    def _index(self) -> dict[int, int]:
        return {j: i for i, j in enumerate(self.jobs)}

    @cached_property
    def preds(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {j: [] for j in self.jobs}
        for i, j in self.arcs:
            out[j].append(i)
        return {j: tuple(sorted(ps)) for j, ps in out.items()}

    @cached_property
    def succs(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {j: [] for j in self.jobs}
        for i, j in self.arcs:
            out[i].append(j)
        return {j: tuple(sorted(ss)) for j, ss in out.items()}

    @cached_property
    def sources(self) -> tuple[int, ...]:
        return tuple(j for j in sorted(self.jobs) if not self.preds[j])

    def time_of(self, job: int) -> Rational:
        return self.times[self._index[job]]

    def weight_of(self, job: int) -> Rational:
        return self.weights[self._index[job]]


def is_inforest(dag: OrDag) -> bool:
    """Every vertex has at most one successor."""
    return all(len(dag.succs[j]) <= 1 for j in dag.jobs)


def _weakly_connected(dag: OrDag) -> bool:
    if not dag.jobs:
        return True
    adj: dict[int, set[int]] = {j: set() for j in dag.jobs}
    for i, j in dag.arcs:
        adj[i].add(j)
        adj[j].add(i)
    seen = {dag.jobs[0]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(dag.jobs)


def is_multitree(dag: OrDag) -> bool:
    """At most one directed path between any ordered pair of vertices."""
    topo = _topological(dag)
    for start in dag.jobs:
        paths = {start: 1}
        for v in topo:
            count = paths.get(v)
            if not count:
                continue
            for w in dag.succs[v]:
                paths[w] = paths.get(w, 0) + count
                if paths[w] > 1:
                    return False
    return True


def is_bipartite(dag: OrDag) -> bool:
    """All arcs go from one side of a partition to the other."""
    has_in = {j for _, j in dag.arcs}
    has_out = {i for i, _ in dag.arcs}
    return not (has_in & has_out)


def _topological(dag: OrDag) -> list[int]:
    indeg = {j: len(dag.preds[j]) for j in dag.jobs}
    queue = deque(j for j in sorted(dag.jobs) if indeg[j] == 0)
    out = []
    while queue:
        v = queue.popleft()
        out.append(v)
        for w in dag.succs[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return out


def classify_dag(dag: OrDag) -> str:
    """Most specific shape label among outtree, intree, inforest, bipartite,
    multitree, general."""
    if not dag.jobs:
        return "outtree"
    connected = _weakly_connected(dag)
    if connected and all(len(dag.preds[j]) <= 1 for j in dag.jobs):
        return "outtree"
    if connected and all(len(dag.succs[j]) <= 1 for j in dag.jobs):
        return "intree"
    if is_inforest(dag):
        return "inforest"
    if is_bipartite(dag):
        return "bipartite"
    if is_multitree(dag):
        return "multitree"
    return "general"


def or_initial_membership(dag: OrDag, s: frozenset[int]) -> bool:
    """True iff every member with predecessors has one inside ``s``."""
    for j in s:
        ps = dag.preds[j]
        if ps and not any(p in s for p in ps):
            return False
    return True


def residual(dag: OrDag, s: frozenset[int]) -> OrDag:
    """Remove an OR-initial set; jobs with a predecessor in it become free."""
    s = frozenset(s)
    if not or_initial_membership(dag, s):
        raise NotInitial(f"{sorted(s)} is not an OR-initial set")
    keep = [j for j in dag.jobs if j not in s]
    satisfied = {j for j in keep if any(p in s for p in dag.preds[j])}
    arcs = tuple(
        (i, j) for i, j in dag.arcs if i not in s and j not in s and j not in satisfied
    )
    kept = tuple(keep)
    return OrDag(
        kept,
        tuple(dag.time_of(j) for j in kept),
        tuple(dag.weight_of(j) for j in kept),
        arcs,
    )


def modular_weight_oracle(dag: OrDag) -> WeightOracle:
    def total(s: frozenset[int]) -> Rational:
        return sum(dag.weight_of(j) for j in s)

    return total


def _better_density(
    cand: tuple[Rational, Rational, int, int],
    best: tuple[Rational, Rational, int, int],
) -> bool:
    # entries are (weight gain, time sum, stem length, start id);
    # time sum 0 encodes the +inf sentinel
    dg, df, length, start = cand
    b_dg, b_df, b_length, b_start = best
    if df == 0 and b_df != 0:
        return True
    if df != 0 and b_df == 0:
        return False
    if df != 0:
        lhs = dg * b_df
        rhs = b_dg * df
        if lhs != rhs:
            return lhs > rhs
    if length != b_length:
        return length < b_length
    return start < b_start


def max_density_stem(
    dag: OrDag, g_oracle: WeightOracle, base: frozenset[int]
) -> DensityResult:
    """Exact density step on an inforest: best stem of the residual DAG.

    A stem starts at a residual source and follows the (unique) successor
    arc, so there are O(n^2) of them; inclusion-minimal maximum-density
    OR-initial sets are stems whenever the weight oracle is submodular and
    the cost is the sum of processing times.  Ties prefer the shortest stem,
    then the smallest start id.
    """
    base = frozenset(base)
    res = residual(dag, base)
    if not res.jobs:
        raise NoFeasibleSuperset("base already contains every job")
    if not is_inforest(res):
        raise NotInforest("residual graph has a vertex with two successors")
    g_base = g_oracle(base)
    best: tuple[Rational, Rational, int, int] | None = None
    best_members: frozenset[int] | None = None
    for start in res.sources:
        members = set(base)
        time_sum: Rational = 0
        v: int | None = start
        length = 0
        while v is not None:
            members.add(v)
            time_sum += res.time_of(v)
            length += 1
            frozen = frozenset(members)
            dg = g_oracle(frozen) - g_base
            if dg < 0:
                raise NonMonotone(f"weight decreased when adding stem through {v}")
            cand = (dg, time_sum, length, start)
            if best is None or _better_density(cand, best):
                best = cand
                best_members = frozen
            nxt = res.succs[v]
            v = nxt[0] if nxt else None
    assert best is not None and best_members is not None
    rho: Density = INF if best[1] == 0 else Fraction(best[0], best[1])
    return DensityResult(base, best_members, rho, 1)


def _best_ratio_subtree(dag: OrDag, root: int) -> tuple[frozenset[int], Rational, Rational]:
    """Maximum weight/time rooted subtree of ``root``'s successor outtree.

    Parametric iteration: for a ratio guess, a linear pass maximises
    weight - guess * time over rooted subtrees (keep a child's subtree iff
    its value is strictly positive); the guess then moves to the achieved
    ratio.  The guess strictly increases through the finite set of subtree
    ratios, so this terminates at the exact optimum, and the strict
    inclusion rule makes the winning subtree inclusion-minimal.
    """
    reach = [root]
    seen = {root}
    for v in reach:
        for w in dag.succs[v]:
            if w in seen:  # pragma: no cover - impossible in a multitree
                raise NotMultitree("two paths meet inside a successor tree")
            seen.add(w)
            reach.append(w)
    order = list(reversed(reach))  # children before parents

    guess = Fraction(dag.weight_of(root), dag.time_of(root))
    while True:
        value: dict[int, Rational] = {}
        for v in order:
            acc = dag.weight_of(v) - guess * dag.time_of(v)
            for w in dag.succs[v]:
                if value[w] > 0:
                    acc += value[w]
            value[v] = acc
        chosen = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in dag.succs[v]:
                if value[w] > 0:
                    chosen.add(w)
                    stack.append(w)
        w_sum: Rational = sum(dag.weight_of(v) for v in chosen)
        t_sum: Rational = sum(dag.time_of(v) for v in chosen)
        if value[root] == 0:
            return frozenset(chosen), w_sum, t_sum
        guess = Fraction(w_sum, t_sum)


def max_density_outtree(dag: OrDag, base: frozenset[int]) -> DensityResult:
    """Exact density step on a multitree with modular weights.

    For each residual source the candidate is the best-ratio rooted subtree
    of its successor outtree; the best source wins, smaller id on ties.
    A zero-time source is a cost-flat step and returned alone immediately.
    """
    base = frozenset(base)
    res = residual(dag, base)
    if not res.jobs:
        raise NoFeasibleSuperset("base already contains every job")
    if not is_multitree(res):
        raise NotMultitree("residual graph has two paths between some pair of jobs")
    for v in res.sources:
        if res.time_of(v) == 0:
            return DensityResult(base, base | {v}, INF, 1)
    best: tuple[Fraction, int] | None = None
    best_set: frozenset[int] | None = None
    for start in res.sources:
        subtree, w_sum, t_sum = _best_ratio_subtree(res, start)
        rho = Fraction(w_sum, t_sum)
        if best is None or rho > best[0]:
            best = (rho, start)
            best_set = subtree
    assert best is not None and best_set is not None
    return DensityResult(base, base | best_set, best[0], 1)


def schedule_cost(dag: OrDag, permutation: Permutation | Sequence[int]) -> Rational:
    """Weighted sum of completion times of a feasible one-machine order."""
    order = order_of(permutation)
    if sorted(order) != sorted(dag.jobs):
        raise ValidationError("order must schedule every job exactly once")
    done: set[int] = set()
    clock: Rational = 0
    total: Rational = 0
    for j in order:
        ps = dag.preds[j]
        if ps and not any(p in done for p in ps):
            raise InfeasibleOrder(f"job {j} scheduled before any of its predecessors")
        clock += dag.time_of(j)
        total += dag.weight_of(j) * clock
        done.add(j)
    return total


def to_msop(dag: OrDag) -> MsopInstance:
    """OR-scheduling as a min-sum ordering instance (both oracles modular)."""
    weight = modular_weight_oracle(dag)

    def cost(s: frozenset[int]) -> Rational:
        return sum(dag.time_of(j) for j in s)

    # a unique predecessor per job makes the family intersection-closed
    unique_preds = all(len(dag.preds[j]) <= 1 for j in dag.jobs)
    return MsopInstance(
        tuple(sorted(dag.jobs)),
        lambda s: or_initial_membership(dag, s),
        cost,
        weight,
        StructuralFlags(
            union_closed=True,
            intersection_closed=unique_preds,
            f_modular=True,
            g_modular=True,
        ),
        name="orsched",
    )


def pipelined_to_msop(
    dag: OrDag, edges: Sequence[tuple[Rational, frozenset[int]]]
) -> MsopInstance:
    """Covering variant: job times are element costs, hyperedge coverage is
    the weight, and the OR-DAG constrains the order."""
    for w, members in edges:
        if w < 0 or not members or not members <= set(dag.jobs):
            raise ValidationError("bad hyperedge over the job set")
    frozen_edges = tuple((w, frozenset(m)) for w, m in edges)

    def weight(s: frozenset[int]) -> Rational:
        return sum(w for w, members in frozen_edges if members & s)

    def cost(s: frozenset[int]) -> Rational:
        return sum(dag.time_of(j) for j in s)

    return MsopInstance(
        tuple(sorted(dag.jobs)),
        lambda s: or_initial_membership(dag, s),
        cost,
        weight,
        StructuralFlags(union_closed=True, f_modular=True, g_submodular=True),
        name="or-pipelined",
    )


def stem_solver(dag: OrDag, g_oracle: WeightOracle | None = None) -> DensitySolver:
    oracle = g_oracle if g_oracle is not None else modular_weight_oracle(dag)

    def solve(base: frozenset[int]) -> DensityResult:
        return max_density_stem(dag, oracle, base)

    return solve


def outtree_solver(dag: OrDag) -> DensitySolver:
    def solve(base: frozenset[int]) -> DensityResult:
        return max_density_outtree(dag, base)

    return solve
