"""Seeded instance generators.

Every generator is a pure function of (kind, parameters, seed): the RNG is
seeded from those alone, so identical calls produce identical instances.
Generated instances satisfy the structural hypotheses of the guarantee they
are meant to exercise (inforests really are inforests, multitree candidates
are re-checked, families are union-closed by construction, ...).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .core import Chain, MsopInstance, Rational, StructuralFlags
from .errors import BadParams
from .mssc import MsscInstance
from .orsched import OrDag, is_multitree
from .rof import Gate, Leaf, Node, ReadOnceFormula
from .xsearch import SearchGraph

KINDS = ("mssc", "pipelined", "inforest", "multitree", "bipartite-or", "rof", "xsearch")


def _rng(kind: str, n: int, seed: int) -> random.Random:
    return random.Random(f"msop:{kind}:{n}:{seed}")


def gen_instance(kind: str, n: int, seed: int, **params):
    """Deterministic random instance of the requested kind and size."""
    if kind not in KINDS:
        raise BadParams(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if n < 1:
        raise BadParams("n must be at least 1")
    if kind == "mssc":
        return _gen_mssc(n, seed, unit=True, **params)
    if kind == "pipelined":
        return _gen_mssc(n, seed, unit=False, **params)
    if kind in ("inforest", "multitree", "bipartite-or"):
        return _gen_ordag(n, seed, kind, **params)
    if kind == "rof":
        return _gen_rof(n, seed, **params)
    return _gen_xsearch(n, seed, **params)


def _gen_mssc(
    n: int, seed: int, unit: bool, edges: int | None = None, max_edge: int = 3,
    max_value: int = 5,
) -> MsscInstance:
    rng = _rng("mssc" if unit else "pipelined", n, seed)
    m = edges if edges is not None else rng.randint(1, max(1, 2 * n))
    if m < 1:
        raise BadParams("need at least one hyperedge")
    built = []
    for _ in range(m):
        size = rng.randint(1, min(max_edge, n))
        members = frozenset(rng.sample(range(n), size))
        weight = 1 if unit else rng.randint(0, max_value)
        built.append((weight, members))
    costs = tuple(1 if unit else rng.randint(1, max_value) for _ in range(n))
    return MsscInstance(n, costs, tuple(built))


def _gen_ordag(n: int, seed: int, kind: str, arc_chance: float | None = None) -> OrDag:
    rng = _rng(kind, n, seed)
    jobs = tuple(range(n))
    arcs: list[tuple[int, int]] = []
    if kind == "inforest":
        for v in range(n - 1):
            if rng.random() < 0.75:
                arcs.append((v, rng.randrange(v + 1, n)))
        times = tuple(rng.choice((0, 1, 1, 2, 3)) for _ in range(n))
        weights = tuple(rng.choice((0, 1, 2, 3, 4)) for _ in range(n))
    elif kind == "multitree":
        chance = arc_chance if arc_chance is not None else min(0.9, 2.5 / max(1, n))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < chance:
                    trial = OrDag(
                        jobs, (0,) * n, (0,) * n, tuple(arcs) + ((i, j),)
                    )
                    if is_multitree(trial):
                        arcs.append((i, j))
        times = tuple(rng.choice((0, 1, 1, 2, 3)) for _ in range(n))
        weights = tuple(rng.choice((0, 1, 2, 3, 4)) for _ in range(n))
    else:  # bipartite-or
        k = max(1, n // 2)
        for b in range(k, n):
            for a in rng.sample(range(k), rng.randint(0, min(3, k))):
                arcs.append((a, b))
        times = tuple(
            rng.randint(1, 4) if v < k else rng.choice((0, 0, 1)) for v in range(n)
        )
        weights = tuple(
            rng.choice((0, 0, 0, 1)) if v < k else rng.randint(1, 5) for v in range(n)
        )
    return OrDag(jobs, times, weights, tuple(sorted(arcs)))


def _gen_rof(n: int, seed: int, max_cost: int = 3, max_denominator: int = 8) -> ReadOnceFormula:
    rng = _rng("rof", n, seed)
    variables = list(range(1, n + 1))
    rng.shuffle(variables)

    def build(leaves: list[int]) -> Node:
        if len(leaves) == 1:
            return Leaf(leaves[0])
        split = rng.randint(1, len(leaves) - 1)
        return Gate(rng.choice(("and", "or")), build(leaves[:split]), build(leaves[split:]))

    root = build(variables)
    probs = {}
    costs = {}
    for v in range(1, n + 1):
        den = rng.randint(2, max_denominator)
        probs[v] = Fraction(rng.randint(1, den - 1), den)
        costs[v] = rng.randint(1, max_cost)
    return ReadOnceFormula(root, probs, costs)


def _gen_xsearch(n: int, seed: int, extra: int | None = None, max_cost: int = 4) -> SearchGraph:
    if n < 2:
        raise BadParams("expanding search needs at least two vertices")
    rng = _rng("xsearch", n, seed)
    edges: list[tuple[int, int, Rational]] = []
    present = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, rng.randint(1, max_cost)))
        present.add((u, v))
    want_extra = extra if extra is not None else rng.randint(0, max(0, n - 2))
    candidates = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present
    ]
    for u, v in rng.sample(candidates, min(want_extra, len(candidates))):
        edges.append((u, v, rng.randint(1, max_cost)))
    mass = [rng.randint(0, 5) for _ in range(n)]
    if not any(mass):
        mass[rng.randrange(n)] = 1
    total = sum(mass)
    probs = {v: Fraction(mass[v], total) for v in range(n)}
    return SearchGraph(tuple(range(n)), 0, tuple(edges), probs)


# ---------------------------------------------------------------------------
# table-backed generic instances for the certification suites


def table_instance(
    n: int,
    feasible_masks: frozenset[int],
    f_table: Sequence[Rational],
    g_table: Sequence[Rational],
    flags: StructuralFlags,
    name: str,
) -> MsopInstance:
    """Instance over {0..n-1} whose oracles read precomputed mask tables."""

    def mask_of(s: frozenset[int]) -> int:
        m = 0
        for v in s:
            m |= 1 << v
        return m

    return MsopInstance(
        tuple(range(n)),
        lambda s: mask_of(s) in feasible_masks,
        lambda s: f_table[mask_of(s)],
        lambda s: g_table[mask_of(s)],
        flags,
        name=name,
    )


def _union_closure(seeds: set[int]) -> frozenset[int]:
    members = set(seeds)
    queue = list(members)
    while queue:
        x = queue.pop()
        for m in list(members):
            u = m | x
            if u not in members:
                members.add(u)
                queue.append(u)
    return frozenset(members)


def _coverage_table(rng: random.Random, n: int, max_weight: int = 3) -> list[int]:
    full = (1 << n) - 1
    k = rng.randint(1, 2 * n)
    edges = []
    for _ in range(k):
        mask = rng.getrandbits(n) & full
        if mask == 0:
            mask = 1 << rng.randrange(n)
        edges.append((mask, rng.randint(1, max_weight)))
    return [sum(w for mask, w in edges if mask & s) for s in range(full + 1)]


def _modular_table(rng: random.Random, n: int, lo: int, hi: int) -> list[int]:
    per = [rng.randint(lo, hi) for _ in range(n)]
    table = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        table[s] = table[s ^ low] + per[low.bit_length() - 1]
    return table


def _milestone_table(rng: random.Random, n: int, min_size: int = 1) -> list[int]:
    full = (1 << n) - 1
    marks = []
    for _ in range(rng.randint(1, 3)):
        mask = rng.getrandbits(n) & full
        while bin(mask).count("1") < min_size:
            mask |= 1 << rng.randrange(n)
        marks.append((mask, rng.randint(1, 4)))
    return [sum(u for mask, u in marks if mask & s == mask) for s in range(full + 1)]


def gen_generic_msop(n: int, seed: int) -> MsopInstance:
    """Random instance with a union-closed family, subadditive monotone cost
    and monotone weight; weights range over modular, coverage, milestone and
    mixed shapes so the certification suite sees unstructured instances."""
    if n < 1:
        raise BadParams("n must be at least 1")
    rng = _rng("generic", n, seed)
    full = (1 << n) - 1
    seeds = {0, full}
    for _ in range(rng.randint(0, n)):
        seeds.add(rng.getrandbits(n) & full)
    family = _union_closure(seeds)

    f_style = rng.choice(("modular", "truncated", "coverage"))
    if f_style == "modular":
        f_table: list[int] = _modular_table(rng, n, 0, 4)
    elif f_style == "truncated":
        raw = _modular_table(rng, n, 1, 5)
        per_max = max(raw[1 << i] for i in range(n))
        lid = rng.randint(per_max, max(per_max, raw[full]))
        f_table = [min(v, lid) for v in raw]
    else:
        f_table = _coverage_table(rng, n)

    g_style = rng.choice(("modular", "coverage", "milestones", "mixed"))
    if g_style == "modular":
        g_table: list[int] = _modular_table(rng, n, 0, 4)
    elif g_style == "coverage":
        g_table = _coverage_table(rng, n)
    elif g_style == "milestones":
        g_table = _milestone_table(rng, n)
    else:
        mod = _modular_table(rng, n, 0, 2)
        mile = _milestone_table(rng, n)
        g_table = [a + b for a, b in zip(mod, mile)]

    flags = StructuralFlags(
        union_closed=True,
        f_subadditive=True,
        f_modular=f_style == "modular",
        f_submodular=f_style in ("truncated", "coverage"),
        g_modular=g_style == "modular",
        g_submodular=g_style == "coverage",
        g_supermodular=g_style in ("milestones", "mixed"),
    )
    return table_instance(n, family, f_table, g_table, flags, f"generic-{n}-{seed}")


def gen_supermodular_cost_msop(n: int, seed: int) -> MsopInstance:
    """Free family, supermodular monotone cost, modular positive weight:
    the shape on which the backward greedy is exact in polynomial time."""
    if n < 1:
        raise BadParams("n must be at least 1")
    rng = _rng("supercost", n, seed)
    full = (1 << n) - 1
    base = _modular_table(rng, n, 0, 3)
    mile = _milestone_table(rng, n, min_size=2)
    f_table = [a + b for a, b in zip(base, mile)]
    g_table = _modular_table(rng, n, 1, 4)
    flags = StructuralFlags(
        union_closed=True,
        intersection_closed=True,
        f_supermodular=True,
        g_modular=True,
    )
    return table_instance(
        n, frozenset(range(full + 1)), f_table, g_table, flags, f"supercost-{n}-{seed}"
    )


def gen_or_pipelined(n: int, seed: int) -> tuple[OrDag, tuple[tuple[int, frozenset[int]], ...]]:
    """Inforest over n jobs with positive times plus weighted hyperedges."""
    rng = _rng("or-pipelined", n, seed)
    jobs = tuple(range(n))
    arcs = []
    for v in range(n - 1):
        if rng.random() < 0.75:
            arcs.append((v, rng.randrange(v + 1, n)))
    dag = OrDag(
        jobs,
        tuple(rng.randint(1, 4) for _ in range(n)),
        tuple(0 for _ in range(n)),
        tuple(sorted(arcs)),
    )
    edges = []
    for _ in range(rng.randint(1, 2 * n)):
        size = rng.randint(1, min(3, n))
        edges.append((rng.randint(1, 5), frozenset(rng.sample(range(n), size))))
    return dag, tuple(edges)


def random_chain(instance: MsopInstance, rng: random.Random) -> Chain:
    """Uniform-ish random feasible chain built by random superset jumps."""
    n = instance.n
    ground = sorted(instance.ground_set)
    subsets = [
        frozenset(ground[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)
    ]
    feasible = [s for s in subsets if instance.in_family(s)]
    current = frozenset()
    sets = [current]
    universe = instance.universe()
    while current != universe:
        ups = [s for s in feasible if current < s]
        current = rng.choice(sorted(ups, key=lambda s: (len(s), tuple(sorted(s)))))
        sets.append(current)
    return Chain(tuple(sets))
