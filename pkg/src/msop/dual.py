"""Dual instances, dual chains, and the backward greedy algorithm.

The dual of an instance swaps the roles of cost and weight through
complementation: dual cost(S) = weight(V) - weight(V \\ S), dual weight(S) =
cost(V) - cost(V \\ S), and S is dual-feasible iff V \\ S is feasible.
Running the forward greedy on the dual and mapping the chain back yields the
backward greedy chain, so there is a single greedy code path.
"""

from __future__ import annotations

from typing import Callable

from .core import (
    Chain,
    DensitySolver,
    MsopInstance,
    Rational,
    StructuralFlags,
    greedy_chain,
    marginal_density,
)

SolverFactory = Callable[[MsopInstance], DensitySolver]

# on the dual instance the old weight plays the cost role and vice versa,
# so the sub/super qualifiers mirror accordingly
def _dual_flags(flags: StructuralFlags) -> StructuralFlags:
    return StructuralFlags(
        union_closed=flags.intersection_closed,
        intersection_closed=flags.union_closed,
        f_modular=flags.g_modular,
        f_submodular=flags.g_supermodular,
        f_supermodular=flags.g_submodular,
        g_modular=flags.f_modular,
        g_submodular=flags.f_supermodular,
        g_supermodular=flags.f_submodular,
    )


def dualize(instance: MsopInstance) -> MsopInstance:
    """Dual instance; dualizing twice is extensionally the identity."""
    universe = instance.universe()
    cost_fn, weight_fn, family = instance.cost, instance.weight, instance.in_family
    total_cost = cost_fn(universe)
    total_weight = weight_fn(universe)

    def dual_cost(s: frozenset[int]) -> Rational:
        return total_weight - weight_fn(universe - s)

    def dual_weight(s: frozenset[int]) -> Rational:
        return total_cost - cost_fn(universe - s)

    def dual_family(s: frozenset[int]) -> bool:
        return family(universe - s)

    perms = instance.permutations
    dual_perms = None if perms is None else tuple(tuple(reversed(p)) for p in perms)
    return MsopInstance(
        instance.ground_set,
        dual_family,
        dual_cost,
        dual_weight,
        _dual_flags(instance.flags),
        permutations=dual_perms,
        name=f"dual({instance.name})",
    )


def dual_chain(chain: Chain) -> Chain:
    """Complement every set and reverse; an involution on chains."""
    universe = chain.sets[-1]
    return Chain(tuple(universe - s for s in reversed(chain.sets)))


def backward_greedy_chain(
    instance: MsopInstance, solver_factory: SolverFactory, alpha: Rational = 1
) -> Chain:
    """Backward greedy: forward greedy on the dual, mapped back.

    ``solver_factory`` receives the dual instance and must return a density
    solver for it.  The returned chain's certificate stores, per step, the
    marginal density between the consecutive primal sets (the quantity the
    backward greedy condition bounds by alpha times the minimum removal
    density).
    """
    dual_instance = dualize(instance)
    forward = greedy_chain(dual_instance, solver_factory(dual_instance), alpha)
    primal = dual_chain(forward)
    densities = tuple(
        marginal_density(instance, a, b).marginal_density
        for a, b in zip(primal.sets, primal.sets[1:])
    )
    return Chain(primal.sets, densities, alpha)
