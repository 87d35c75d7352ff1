"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the library's lattice DPs: permutations are
enumerated with itertools, chains by recursive descent, densities by
looping over combinations, so every dual-route check really runs two
different algorithms.
"""

from fractions import Fraction
from itertools import combinations, permutations

from msop.core import INF, MsopInstance


def eq2_cost(instance: MsopInstance, order) -> Fraction:
    total = 0
    prev_g = 0
    current = set()
    for v in order:
        current.add(v)
        s = frozenset(current)
        g = instance.weight(s)
        total += instance.cost(s) * (g - prev_g)
        prev_g = g
    return total


def feasible_order(instance: MsopInstance, order) -> bool:
    current = set()
    for v in order:
        current.add(v)
        if not instance.in_family(frozenset(current)):
            return False
    return True


def brute_opt_permutation(instance: MsopInstance):
    best = None
    for order in permutations(sorted(instance.ground_set)):
        if not feasible_order(instance, order):
            continue
        cost = eq2_cost(instance, order)
        if best is None or cost < best[0]:
            best = (cost, order)
    return best  # None when the family rejects every ordering


def brute_opt_chain(instance: MsopInstance):
    universe = instance.universe()
    elements = sorted(universe)
    n = len(elements)
    feasible = []
    for r in range(n + 1):
        for combo in combinations(elements, r):
            s = frozenset(combo)
            if instance.in_family(s):
                feasible.append(s)
    best = [None]

    def descend(current, cost):
        if current == universe:
            if best[0] is None or cost < best[0]:
                best[0] = cost
            return
        for s in feasible:
            if current < s:
                descend(s, cost + instance.cost(s) * (instance.weight(s) - instance.weight(current)))

    descend(frozenset(), 0)
    return best[0]


def brute_max_density(instance: MsopInstance, base):
    base = frozenset(base)
    rest = sorted(instance.universe() - base)
    f0 = instance.cost(base)
    g0 = instance.weight(base)
    best = None
    for r in range(1, len(rest) + 1):
        for combo in combinations(rest, r):
            s = base | frozenset(combo)
            if not instance.in_family(s):
                continue
            df = instance.cost(s) - f0
            dg = instance.weight(s) - g0
            rho = INF if df == 0 else Fraction(dg, df)
            if best is None or rho > best:
                best = rho
    return best
