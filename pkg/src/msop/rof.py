"""Non-adaptive evaluation of Boolean read-once formulas.

A formula is a binary AND/OR tree whose leaves are distinct tests; test i
succeeds with probability p_i (a rational strictly between 0 and 1) and
costs a positive integer c_i.  The weight of a test set S is the
probability that the formula's value is already determined by the outcomes
in S; the cost is the total test cost.  An ordering is evaluated by running
tests until the value is determined.

The density step is a dynamic program over (gate, spent budget, target
value): for every gate G, budget t and target l it records a subset of G's
untested leaves of cost exactly t maximising the probability that G
evaluates to l.  Splitting the supplement search by target value loses at
most a factor two in density, giving a 2-approximate density step and hence
an 8-approximate ordering overall.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .core import (
    Chain,
    DensityResult,
    MsopInstance,
    Permutation,
    Rational,
    StructuralFlags,
    densest_consistent_permutation,
    greedy_chain,
    marginal_density,
    order_of,
)
from .errors import EmptyRemainder, ValidationError


@dataclass(frozen=True, eq=False)
class Leaf:
    var: int


@dataclass(frozen=True, eq=False)
class Gate:
    op: str  # "and" | "or"
    left: "Node"
    right: "Node"


Node = Leaf | Gate


@dataclass(frozen=True, eq=False)
class ReadOnceFormula:
    root: Node
    probs: dict[int, Fraction]
    costs: dict[int, int]

    def __post_init__(self):
        seen: list[int] = []

        def walk(node: Node) -> None:
            if isinstance(node, Leaf):
                seen.append(node.var)
                return
            if node.op not in ("and", "or"):
                raise ValidationError(f"unknown gate {node.op!r}")
            walk(node.left)
            walk(node.right)

        walk(self.root)
        if len(set(seen)) != len(seen):
            raise ValidationError("each variable may appear in exactly one leaf")
        if set(seen) != set(self.probs) or set(seen) != set(self.costs):
            raise ValidationError("probabilities and costs must cover exactly the leaves")
        for i, p in self.probs.items():
            if not 0 < p < 1:
                raise ValidationError(f"test {i} needs 0 < p < 1, got {p}")
        for i, c in self.costs.items():
            if not isinstance(c, int) or c < 1:
                raise ValidationError(f"test {i} needs a positive integer cost, got {c}")

    @cached_property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.probs))

    @cached_property
    def nodes(self) -> tuple[Node, ...]:
        """All nodes, children before parents."""
        out: list[Node] = []

        def walk(node: Node) -> None:
            if isinstance(node, Gate):
                walk(node.left)
                walk(node.right)
            out.append(node)

        walk(self.root)
        return tuple(out)

    @cached_property
    def tests_below(self) -> dict[Node, frozenset[int]]:
        out: dict[Node, frozenset[int]] = {}
        for node in self.nodes:
            if isinstance(node, Leaf):
                out[node] = frozenset((node.var,))
            else:
                out[node] = out[node.left] | out[node.right]
        return out


def eval_partial(formula: ReadOnceFormula, assignment: Mapping[int, int | None]):
    """Three-valued evaluation; missing or None entries are untested.

    Returns 0, 1, or None when the outcome is not yet determined.
    """

    def walk(node: Node):
        if isinstance(node, Leaf):
            return assignment.get(node.var)
        a = walk(node.left)
        b = walk(node.right)
        if node.op == "and":
            if a == 0 or b == 0:
                return 0
            if a == 1 and b == 1:
                return 1
            return None
        if a == 1 or b == 1:
            return 1
        if a == 0 and b == 0:
            return 0
        return None

    return walk(formula.root)


def _prob_tables(
    formula: ReadOnceFormula, s: frozenset[int]
) -> tuple[dict[Node, Fraction], dict[Node, Fraction]]:
    """Per gate: probability its value is determined 1 (resp. 0) by the
    outcomes of the tests in ``s``."""
    ones: dict[Node, Fraction] = {}
    zeros: dict[Node, Fraction] = {}
    for node in formula.nodes:
        if isinstance(node, Leaf):
            if node.var in s:
                p = formula.probs[node.var]
                ones[node] = p
                zeros[node] = 1 - p
            else:
                ones[node] = Fraction(0)
                zeros[node] = Fraction(0)
        else:
            pl, pr = ones[node.left], ones[node.right]
            ql, qr = zeros[node.left], zeros[node.right]
            if node.op == "and":
                ones[node] = pl * pr
                zeros[node] = ql + qr - ql * qr
            else:
                ones[node] = pl + pr - pl * pr
                zeros[node] = ql * qr
        p, q = ones[node], zeros[node]
        if p < 0 or q < 0 or p + q > 1:
            raise ValidationError("gate probabilities left [0, 1]")
    return ones, zeros


def gate_probabilities(
    formula: ReadOnceFormula, s: frozenset[int], outcome: int
) -> dict[Node, Fraction]:
    """Map each gate to the probability it is determined to ``outcome``."""
    ones, zeros = _prob_tables(formula, frozenset(s))
    return ones if outcome == 1 else zeros


def g_determined(formula: ReadOnceFormula, s: frozenset[int]) -> Fraction:
    """Probability that the formula value is determined by testing ``s``."""
    ones, zeros = _prob_tables(formula, frozenset(s))
    return ones[formula.root] + zeros[formula.root]


def determination_table(formula: ReadOnceFormula) -> list[Fraction]:
    """Determination probability for every subset, indexed by bitmask over
    the sorted variables.  Exponential in n; meant for small oracles."""
    variables = formula.variables
    bit = {v: i for i, v in enumerate(variables)}
    tables: dict[Node, dict[int, tuple[Fraction, Fraction]]] = {}
    zero = Fraction(0)
    for node in formula.nodes:
        if isinstance(node, Leaf):
            p = formula.probs[node.var]
            tables[node] = {0: (zero, zero), 1 << bit[node.var]: (p, 1 - p)}
        else:
            left, right = tables[node.left], tables[node.right]
            merged: dict[int, tuple[Fraction, Fraction]] = {}
            if node.op == "and":
                for ml, (pl, ql) in left.items():
                    for mr, (pr, qr) in right.items():
                        merged[ml | mr] = (pl * pr, ql + qr - ql * qr)
            else:
                for ml, (pl, ql) in left.items():
                    for mr, (pr, qr) in right.items():
                        merged[ml | mr] = (pl + pr - pl * pr, ql * qr)
            tables[node] = merged
            del tables[node.left], tables[node.right]
    root = tables[formula.root]
    return [root[m][0] + root[m][1] for m in range(1 << len(variables))]


def evaluate_order_cost(
    formula: ReadOnceFormula, permutation: Permutation | Sequence[int]
) -> Fraction:
    """Expected testing cost of an order, as the chain objective
    sum_j cost(S_j) * (weight gain at step j) over prefix sets."""
    order = order_of(permutation)
    if sorted(order) != list(formula.variables):
        raise ValidationError("order must test every variable exactly once")
    total = Fraction(0)
    prefix_cost = 0
    prev_g = Fraction(0)
    current: set[int] = set()
    for v in order:
        current.add(v)
        prefix_cost += formula.costs[v]
        g = g_determined(formula, frozenset(current))
        total += prefix_cost * (g - prev_g)
        prev_g = g
    return total


def expected_stop_cost(
    formula: ReadOnceFormula, permutation: Permutation | Sequence[int]
) -> Fraction:
    """Same expectation, summed test by test: each test is paid for exactly
    when the previous outcomes have not yet determined the value."""
    order = order_of(permutation)
    if sorted(order) != list(formula.variables):
        raise ValidationError("order must test every variable exactly once")
    total = Fraction(0)
    current: set[int] = set()
    for v in order:
        total += formula.costs[v] * (1 - g_determined(formula, frozenset(current)))
        current.add(v)
    return total


# entry: budget -> (probability, chosen tests)
GateTable = dict[int, tuple[Fraction, frozenset[int]]]


@dataclass(frozen=True)
class RpTables:
    """Per gate and target value: best exact-budget supplements.

    ``per_gate[node][l][t]`` holds the subset R of the gate's untested
    leaves with total cost exactly t that maximises the probability the
    gate is determined to l once R is tested on top of the fixed base set,
    together with that probability.
    """

    per_gate: dict[Node, dict[int, GateTable]]

    def root_table(self, formula: ReadOnceFormula, outcome: int) -> GateTable:
        return self.per_gate[formula.root][outcome]


def _combine(op: str, outcome: int, a: Fraction, b: Fraction) -> Fraction:
    if (op, outcome) in (("and", 1), ("or", 0)):
        return a * b
    return a + b - a * b


def compute_rp(formula: ReadOnceFormula, s: frozenset[int]) -> RpTables:
    """Bottom-up tables of best exact-cost supplements for every gate.

    At an internal gate the budget is split between the two children every
    feasible way and the combined probability maximised; budget-split ties
    keep the smallest left share.  Runtime O(n * C^2) for total cost C.
    """
    s = frozenset(s)
    empty = frozenset()
    per_gate: dict[Node, dict[int, GateTable]] = {}
    for node in formula.nodes:
        if isinstance(node, Leaf):
            p = formula.probs[node.var]
            zero = Fraction(0)
            if node.var in s:
                table = {1: {0: (p, empty)}, 0: {0: (1 - p, empty)}}
            else:
                c = formula.costs[node.var]
                only = frozenset((node.var,))
                table = {
                    1: {0: (zero, empty), c: (p, only)},
                    0: {0: (zero, empty), c: (1 - p, only)},
                }
            per_gate[node] = table
        else:
            left = per_gate[node.left]
            right = per_gate[node.right]
            table = {}
            for outcome in (0, 1):
                out: GateTable = {}
                for tl in sorted(left[outcome]):
                    pl, rl = left[outcome][tl]
                    for tr in sorted(right[outcome]):
                        pr, rr = right[outcome][tr]
                        t = tl + tr
                        value = _combine(node.op, outcome, pl, pr)
                        if t not in out or value > out[t][0]:
                            out[t] = (value, rl | rr)
                table[outcome] = out
            per_gate[node] = table
    return RpTables(per_gate)


def find_supp(formula: ReadOnceFormula, s: frozenset[int]) -> frozenset[int]:
    """A 2-approximate maximum-density supplement of ``s``.

    For each target value the best density over exact budgets is taken from
    the root tables; the larger of the two wins (the target-1 set on a tie).
    The winner's density is at least half the best over all supersets.
    """
    s = frozenset(s)
    if s >= set(formula.variables):
        raise EmptyRemainder("every test has already been taken")
    tables = compute_rp(formula, s)
    ones, zeros = _prob_tables(formula, s)
    baseline = {1: ones[formula.root], 0: zeros[formula.root]}
    best: dict[int, tuple[Fraction, frozenset[int]]] = {}
    for outcome in (0, 1):
        root = tables.root_table(formula, outcome)
        for t in sorted(root):
            if t == 0:
                continue
            prob, chosen = root[t]
            sigma = Fraction(prob - baseline[outcome], t)
            if outcome not in best or sigma > best[outcome][0]:
                best[outcome] = (sigma, chosen)
    if best[0][0] > best[1][0]:
        return best[0][1]
    return best[1][1]


def to_msop(formula: ReadOnceFormula, tabulate: bool = False) -> MsopInstance:
    """Free-family instance: modular test costs, determination probability
    as the weight.  ``tabulate`` precomputes the full weight table (2^n)."""
    variables = formula.variables

    def cost(subset: frozenset[int]) -> Rational:
        return sum(formula.costs[i] for i in subset)

    if tabulate:
        table = determination_table(formula)
        bit = {v: i for i, v in enumerate(variables)}

        def weight(subset: frozenset[int]) -> Rational:
            m = 0
            for v in subset:
                m |= 1 << bit[v]
            return table[m]

    else:

        def weight(subset: frozenset[int]) -> Rational:
            return g_determined(formula, subset)

    return MsopInstance(
        variables,
        lambda s: True,
        cost,
        weight,
        StructuralFlags(union_closed=True, intersection_closed=True, f_modular=True),
        name="rof",
    )


def supplement_solver(formula: ReadOnceFormula, instance: MsopInstance | None = None):
    """Density solver wrapping the supplement search (factor 2)."""
    inst = instance if instance is not None else to_msop(formula)

    def solve(base: frozenset[int]) -> DensityResult:
        chosen = find_supp(formula, base)
        candidate = base | chosen
        rho = marginal_density(inst, base, candidate).marginal_density
        return DensityResult(base, candidate, rho, 2)

    return solve


def rof_greedy(formula: ReadOnceFormula) -> tuple[Chain, Permutation, Fraction]:
    """2-greedy chain from the supplement search, refined to an order.

    Each chain increment is laid out by locally best single-test density,
    which keeps the order consistent with the chain (so its cost is no
    larger) and reproduces the classic best-ratio order on pure OR or pure
    AND formulas.  The expected cost is at most 8 times the optimum.
    """
    instance = to_msop(formula)
    chain = greedy_chain(instance, supplement_solver(formula, instance), alpha=2)
    permutation = densest_consistent_permutation(instance, chain)
    return chain, permutation, evaluate_order_cost(formula, permutation)
