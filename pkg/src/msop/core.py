"""Chains of feasible sets, marginal densities, and greedy chain construction.

An instance carries a finite ground set, a feasibility oracle over subsets,
and two monotone set-value oracles, both zero on the empty set: a *cost* and
a *weight*.  The quantity minimised over increasing chains
emptyset = S_0 < S_1 < ... < S_k = V of feasible sets is

    sum_j cost(S_j) * (weight(S_j) - weight(S_{j-1}))

Every value is an exact rational (int or Fraction); ``math.inf`` appears
only as the sentinel density of cost-flat steps and never enters arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    InfeasibleInitialSet,
    InvalidChain,
    NoFeasibleSuperset,
    NonMonotone,
    NotASuperset,
    NotInFamily,
    NotWellFounded,
    SolverStall,
    ValidationError,
)

Rational = int | Fraction
Density = int | Fraction | float  # float solely for the +inf sentinel
INF = math.inf

SetFn = Callable[[frozenset[int]], Rational]
FamilyFn = Callable[[frozenset[int]], bool]


@dataclass(frozen=True)
class StructuralFlags:
    """Declared structural properties of an instance.

    Flags are trusted inputs; ``spot_check_flags`` can probe them on random
    set pairs.  Modular implies sub- and supermodular; a monotone
    nonnegative submodular function is subadditive, so those implications
    are normalised on construction.
    """

    union_closed: bool = False
    intersection_closed: bool = False
    f_subadditive: bool = False
    f_submodular: bool = False
    f_supermodular: bool = False
    f_modular: bool = False
    g_subadditive: bool = False
    g_submodular: bool = False
    g_supermodular: bool = False
    g_modular: bool = False

    def __post_init__(self):
        if self.f_modular:
            object.__setattr__(self, "f_submodular", True)
            object.__setattr__(self, "f_supermodular", True)
        if self.g_modular:
            object.__setattr__(self, "g_submodular", True)
            object.__setattr__(self, "g_supermodular", True)
        if self.f_submodular:
            object.__setattr__(self, "f_subadditive", True)
        if self.g_submodular:
            object.__setattr__(self, "g_subadditive", True)


_NO_FLAGS = StructuralFlags()


@dataclass(frozen=True)
class MsopInstance:
    """Ground set plus feasibility, cost and weight oracles.

    ``permutations`` optionally lists an extensional feasible-permutation
    set for small instances; when present, ``chain_to_permutation`` searches
    it instead of extending greedily through the family oracle.
    """

    ground_set: tuple[int, ...]
    in_family: FamilyFn
    cost: SetFn
    weight: SetFn
    flags: StructuralFlags = _NO_FLAGS
    permutations: tuple[tuple[int, ...], ...] | None = None
    name: str = "msop"

    def __post_init__(self):
        if not self.ground_set:
            raise ValidationError("ground set is empty")
        if len(set(self.ground_set)) != len(self.ground_set):
            raise ValidationError("ground set has repeated elements")

    @property
    def n(self) -> int:
        return len(self.ground_set)

    def universe(self) -> frozenset[int]:
        return frozenset(self.ground_set)

    def validate(self) -> None:
        empty = frozenset()
        if not self.in_family(empty) or not self.in_family(self.universe()):
            raise ValidationError("family must contain the empty set and the full ground set")
        if self.cost(empty) != 0 or self.weight(empty) != 0:
            raise ValidationError("cost and weight must vanish on the empty set")


@dataclass(frozen=True)
class Chain:
    """Strictly increasing feasible sets from the empty set to the ground set.

    ``densities`` and ``alpha`` carry the greedy certificate (one achieved
    marginal density per step and the solver's approximation factor); they
    do not take part in equality comparisons.
    """

    sets: tuple[frozenset[int], ...]
    densities: tuple[Density, ...] | None = field(default=None, compare=False)
    alpha: Rational | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.sets) < 2:
            raise InvalidChain("a chain has at least two sets")
        if self.sets[0]:
            raise InvalidChain("chains start at the empty set")
        for a, b in zip(self.sets, self.sets[1:]):
            if not a < b:
                raise InvalidChain(
                    f"chain sets must strictly increase, got {sorted(a)} before {sorted(b)}"
                )
        if self.densities is not None and len(self.densities) != len(self.sets) - 1:
            raise InvalidChain("certificate length must match the number of steps")

    @property
    def steps(self) -> int:
        return len(self.sets) - 1


@dataclass(frozen=True)
class Permutation:
    order: tuple[int, ...]

    def __post_init__(self):
        if not self.order:
            raise ValidationError("permutation is empty")
        if len(set(self.order)) != len(self.order):
            raise ValidationError("permutation repeats an element")

    def prefix(self, j: int) -> frozenset[int]:
        return frozenset(self.order[:j])


@dataclass(frozen=True)
class DensityResult:
    """A feasible strict superset of ``base`` with its marginal density.

    ``marginal_density`` is (weight gain)/(cost gain), or the +inf sentinel
    exactly when the cost gain is zero.  ``alpha_certificate`` is the factor
    within which the producing solver claims to approximate the best
    feasible superset.
    """

    base: frozenset[int]
    candidate: frozenset[int]
    marginal_density: Density
    alpha_certificate: Rational = 1


def order_of(permutation: Permutation | Sequence[int]) -> tuple[int, ...]:
    if isinstance(permutation, Permutation):
        return permutation.order
    return tuple(permutation)


def validate_chain(instance: MsopInstance, chain: Chain) -> None:
    if chain.sets[-1] != instance.universe():
        raise InvalidChain("chain must end at the full ground set")
    for s in chain.sets:
        if not instance.in_family(s):
            raise InvalidChain(f"set {sorted(s)} is not in the family")


def chain_cost(instance: MsopInstance, chain: Chain) -> Rational:
    """Exact objective value of a chain; raises on any invariant breach."""
    validate_chain(instance, chain)
    fs = [instance.cost(s) for s in chain.sets]
    gs = [instance.weight(s) for s in chain.sets]
    if fs[0] != 0 or gs[0] != 0:
        raise InvalidChain("cost and weight must be zero on the empty set")
    total: Rational = 0
    for j in range(1, len(chain.sets)):
        df = fs[j] - fs[j - 1]
        dg = gs[j] - gs[j - 1]
        if df < 0 or dg < 0:
            raise NonMonotone(
                f"value decreased between {sorted(chain.sets[j - 1])} and {sorted(chain.sets[j])}"
            )
        total += fs[j] * dg
    return total


def marginal_density(
    instance: MsopInstance, base: frozenset[int], candidate: frozenset[int]
) -> DensityResult:
    """Marginal density of ``candidate`` with respect to ``base``.

    Returns the +inf sentinel exactly when the cost increment is zero.
    """
    base = frozenset(base)
    candidate = frozenset(candidate)
    if not base < candidate:
        raise NotASuperset(f"{sorted(candidate)} is not a strict superset of {sorted(base)}")
    if not instance.in_family(base):
        raise NotInFamily(f"base {sorted(base)} is not in the family")
    if not instance.in_family(candidate):
        raise NotInFamily(f"candidate {sorted(candidate)} is not in the family")
    df = instance.cost(candidate) - instance.cost(base)
    dg = instance.weight(candidate) - instance.weight(base)
    if df < 0 or dg < 0:
        raise NonMonotone(
            f"value decreased between {sorted(base)} and {sorted(candidate)}"
        )
    rho: Density = INF if df == 0 else Fraction(dg, df)
    return DensityResult(base, candidate, rho, 1)


DensitySolver = Callable[[frozenset[int]], DensityResult]


def greedy_chain(
    instance: MsopInstance, density_solver: DensitySolver, alpha: Rational = 1
) -> Chain:
    """Iterate a density solver from the empty set until the ground set.

    The solver's answer is taken verbatim each step; the achieved marginal
    density is recomputed from the oracles and recorded as the chain's
    certificate.  Cost-flat (+inf density) steps are expected to be offered
    by the solver before any finite-density step and are taken immediately;
    they never increase the objective.
    """
    instance.validate()
    universe = instance.universe()
    current: frozenset[int] = frozenset()
    sets = [current]
    densities: list[Density] = []
    while current != universe:
        step = density_solver(current)
        if step.candidate == current:
            raise SolverStall(f"density solver returned its base {sorted(current)}")
        checked = marginal_density(instance, current, step.candidate)
        if checked.marginal_density != step.marginal_density:
            raise ValidationError(
                "density solver reported density "
                f"{step.marginal_density} but the oracles give {checked.marginal_density}"
            )
        sets.append(step.candidate)
        densities.append(checked.marginal_density)
        current = step.candidate
    return Chain(tuple(sets), tuple(densities), alpha)


def permutation_to_chain(
    instance: MsopInstance, permutation: Permutation | Sequence[int]
) -> Chain:
    """Chain of all initial sets of a feasible permutation."""
    order = order_of(permutation)
    if frozenset(order) != instance.universe():
        raise ValidationError("permutation must arrange the full ground set")
    sets = [frozenset()]
    current: set[int] = set()
    for j, v in enumerate(order, start=1):
        current.add(v)
        s = frozenset(current)
        if not instance.in_family(s):
            raise InfeasibleInitialSet(j)
        sets.append(s)
    return Chain(tuple(sets))


def chain_to_permutation(instance: MsopInstance, chain: Chain) -> Permutation:
    """A permutation consistent with the chain (every chain set is one of its
    initial sets).

    With an extensional permutation list on the instance, scans it directly.
    Otherwise each increment is filled by repeatedly adding the smallest
    element that keeps the prefix feasible; for permutation families closed
    under splicing such an element always exists, so a stall means the
    family is not well-founded.
    """
    validate_chain(instance, chain)
    if instance.permutations is not None:
        for order in instance.permutations:
            prefixes = {frozenset(order[:j]) for j in range(len(order) + 1)}
            if all(s in prefixes for s in chain.sets):
                return Permutation(order)
        raise NotWellFounded(
            "no listed permutation is consistent with the chain; "
            "the permutation set is not well-founded"
        )
    order_out: list[int] = []
    current: frozenset[int] = frozenset()
    for target in chain.sets[1:]:
        while current != target:
            nxt = None
            for v in sorted(target - current):
                if instance.in_family(current | {v}):
                    nxt = v
                    break
            if nxt is None:
                raise NotWellFounded(
                    f"no feasible single-element extension of {sorted(current)} inside "
                    f"{sorted(target)}; the permutation family is not closed under splicing"
                )
            order_out.append(nxt)
            current = current | {nxt}
    return Permutation(tuple(order_out))


def densest_consistent_permutation(instance: MsopInstance, chain: Chain) -> Permutation:
    """Like ``chain_to_permutation`` but orders each increment by locally
    best single-element marginal density (ties to the smallest id).

    The result is still consistent with the chain, so its full-permutation
    chain costs no more than the input chain.
    """
    validate_chain(instance, chain)
    order_out: list[int] = []
    current: frozenset[int] = frozenset()
    for target in chain.sets[1:]:
        while current != target:
            best: tuple[Density, int] | None = None
            for v in sorted(target - current):
                s = current | {v}
                if not instance.in_family(s):
                    continue
                rho = marginal_density(instance, current, s).marginal_density
                if best is None or rho > best[0]:
                    best = (rho, v)
            if best is None:
                raise NotWellFounded(
                    f"no feasible single-element extension of {sorted(current)} inside "
                    f"{sorted(target)}"
                )
            order_out.append(best[1])
            current = current | {best[1]}
    return Permutation(tuple(order_out))


def splice(
    sigma: Permutation | Sequence[int], tau: Permutation | Sequence[int], j: int
) -> Permutation:
    """Follow ``sigma`` for ``j`` elements, then the rest in ``tau``'s order."""
    a = order_of(sigma)
    b = order_of(tau)
    if set(a) != set(b) or len(a) != len(b):
        raise ValidationError("splice needs two permutations of the same set")
    if not 1 <= j <= len(a):
        raise ValueError(f"splice index {j} out of range 1..{len(a)}")
    head = a[:j]
    seen = set(head)
    return Permutation(head + tuple(v for v in b if v not in seen))


def singleton_solver(instance: MsopInstance) -> DensitySolver:
    """Density step that adds the single element of best marginal density.

    Exact (factor 1) whenever the cost is modular, the weight submodular and
    every subset is feasible; usable as a heuristic elsewhere.
    """

    ground = sorted(instance.ground_set)

    def solve(base: frozenset[int]) -> DensityResult:
        best: tuple[Density, int, frozenset[int]] | None = None
        for v in ground:
            if v in base:
                continue
            s = base | {v}
            if not instance.in_family(s):
                continue
            rho = marginal_density(instance, base, s).marginal_density
            if best is None or rho > best[0]:
                best = (rho, v, s)
        if best is None:
            raise NoFeasibleSuperset(f"no feasible singleton extension of {sorted(base)}")
        return DensityResult(base, best[2], best[0], 1)

    return solve


def spot_check_flags(instance: MsopInstance, rng, rounds: int = 64) -> None:
    """Probe declared structural flags on random set pairs; raise on a lie.

    Property checks are skipped whenever a required set is outside the
    family, since the declared properties only speak about feasible sets.
    """
    flags = instance.flags
    elems = list(instance.ground_set)

    def rand_set() -> frozenset[int]:
        return frozenset(v for v in elems if rng.random() < 0.5)

    for _ in range(rounds):
        s, t = rand_set(), rand_set()
        s_ok, t_ok = instance.in_family(s), instance.in_family(t)
        u, i = s | t, s & t
        if flags.union_closed and s_ok and t_ok and not instance.in_family(u):
            raise ValidationError(f"family not closed under union at {sorted(s)}, {sorted(t)}")
        if flags.intersection_closed and s_ok and t_ok and not instance.in_family(i):
            raise ValidationError(
                f"family not closed under intersection at {sorted(s)}, {sorted(t)}"
            )
        if not (s_ok and t_ok):
            continue
        for fn, mod, sub, sup, adds, label in (
            (instance.cost, flags.f_modular, flags.f_submodular, flags.f_supermodular,
             flags.f_subadditive, "cost"),
            (instance.weight, flags.g_modular, flags.g_submodular, flags.g_supermodular,
             flags.g_subadditive, "weight"),
        ):
            if (mod or sub or sup) and instance.in_family(u) and instance.in_family(i):
                lhs = fn(u) + fn(i)
                rhs = fn(s) + fn(t)
                if mod and lhs != rhs:
                    raise ValidationError(f"{label} is not modular at {sorted(s)}, {sorted(t)}")
                if sub and lhs > rhs:
                    raise ValidationError(f"{label} is not submodular at {sorted(s)}, {sorted(t)}")
                if sup and lhs < rhs:
                    raise ValidationError(
                        f"{label} is not supermodular at {sorted(s)}, {sorted(t)}"
                    )
            if adds and not i and instance.in_family(u) and fn(u) > fn(s) + fn(t):
                raise ValidationError(f"{label} is not subadditive at {sorted(s)}, {sorted(t)}")
