"""Exhaustive oracles for desk-scale instances, plus the histogram checker.

The optimal-permutation and optimal-chain oracles run dynamic programs over
the subset lattice: every feasible permutation is a path through feasible
prefix sets and every chain is a path through nested feasible sets, so the
lattice DP minimises over exactly the stated search space with no sampling.
Caps are hard errors, never silent truncation; they can be overridden with
the MSOP_EXACT_CAPS environment variable, e.g. ``perm=10,chain=8,density=22``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    Chain,
    Density,
    DensityResult,
    DensitySolver,
    INF,
    MsopInstance,
    Permutation,
    Rational,
    validate_chain,
)
from .errors import (
    MissingCertificate,
    NoFeasiblePermutation,
    NoFeasibleSuperset,
    NonMonotone,
    NotInFamily,
    TooLarge,
    ValidationError,
)

_DEFAULT_CAPS = {"perm": 9, "chain": 7, "density": 20}


def exhaustive_caps() -> dict[str, int]:
    caps = dict(_DEFAULT_CAPS)
    raw = os.environ.get("MSOP_EXACT_CAPS", "")
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in caps or not val.strip().isdigit():
            raise ValidationError(f"bad MSOP_EXACT_CAPS entry: {part!r}")
        caps[key] = int(val.strip())
    return caps


def _cap_for(what: str, n: int, cap: int | None) -> None:
    limit = cap if cap is not None else exhaustive_caps()[what]
    if n > limit:
        raise TooLarge(what, n, limit)


@lru_cache(maxsize=64)
def _subsets_of(ground: tuple[int, ...]) -> tuple[frozenset[int], ...]:
    n = len(ground)
    out = []
    for mask in range(1 << n):
        out.append(frozenset(ground[i] for i in range(n) if mask >> i & 1))
    return tuple(out)


def _tabulate(instance: MsopInstance):
    subsets = _subsets_of(instance.ground_set)
    feasible = [instance.in_family(s) for s in subsets]
    f = [instance.cost(s) for s in subsets]
    g = [instance.weight(s) for s in subsets]
    if not feasible[0] or not feasible[-1]:
        raise ValidationError("family must contain the empty set and the full ground set")
    if f[0] != 0 or g[0] != 0:
        raise ValidationError("cost and weight must vanish on the empty set")
    return subsets, feasible, f, g


def exact_opt_permutation(
    instance: MsopInstance, cap: int | None = None
) -> tuple[Permutation, Rational]:
    """Global minimum over feasible permutations (every initial set feasible).

    Ties break to the lexicographically smallest optimal permutation.
    """
    n = instance.n
    _cap_for("perm", n, cap)
    subsets, feasible, f, g = _tabulate(instance)
    full = (1 << n) - 1
    # best[S] = cheapest completion cost from prefix set S to the full set
    best: list[Rational | None] = [None] * (full + 1)
    best[full] = 0
    for s in range(full - 1, -1, -1):
        if not feasible[s]:
            continue
        gs = g[s]
        acc: Rational | None = None
        rem = full & ~s
        m = rem
        while m:
            bit = m & -m
            m ^= bit
            t = s | bit
            if feasible[t] and best[t] is not None:
                cand = f[t] * (g[t] - gs) + best[t]
                if acc is None or cand < acc:
                    acc = cand
        best[s] = acc
    if best[0] is None:
        raise NoFeasiblePermutation("the family rejects every ordering")
    ground = instance.ground_set
    by_id = sorted(range(n), key=lambda i: ground[i])
    order: list[int] = []
    s = 0
    while s != full:
        for i in by_id:
            bit = 1 << i
            if s & bit:
                continue
            t = s | bit
            if feasible[t] and best[t] is not None and f[t] * (g[t] - g[s]) + best[t] == best[s]:
                order.append(ground[i])
                s = t
                break
        else:  # pragma: no cover - best[s] finite guarantees an extension
            raise AssertionError("optimal extension must exist")
    return Permutation(tuple(order)), best[0]


def exact_opt_chain(instance: MsopInstance, cap: int | None = None) -> tuple[Chain, Rational]:
    """Global minimum over all feasible chains of any length."""
    n = instance.n
    _cap_for("chain", n, cap)
    subsets, feasible, f, g = _tabulate(instance)
    full = (1 << n) - 1
    best: list[Rational | None] = [None] * (full + 1)
    best[0] = 0
    parent = [0] * (full + 1)
    for s in range(1, full + 1):
        if not feasible[s]:
            continue
        fs = f[s]
        gs = g[s]
        acc: Rational | None = None
        arg = 0
        a = (s - 1) & s
        while True:
            if feasible[a] and best[a] is not None:
                cand = best[a] + fs * (gs - g[a])
                if acc is None or cand < acc:
                    acc = cand
                    arg = a
            if a == 0:
                break
            a = (a - 1) & s
        best[s] = acc
        parent[s] = arg
    cost = best[full]
    assert cost is not None  # the empty set is always a feasible predecessor
    masks = [full]
    while masks[-1] != 0:
        masks.append(parent[masks[-1]])
    sets = tuple(subsets[m] for m in reversed(masks))
    return Chain(sets), cost


def _superset_beats(
    dg: Rational, df: Rational, size: int, ids: tuple[int, ...],
    best: tuple[Rational, Rational, int, tuple[int, ...]],
) -> bool:
    # densities compared by cross-multiplication; df == 0 encodes +inf
    b_dg, b_df, b_size, b_ids = best
    if df == 0 and b_df != 0:
        return True
    if df != 0 and b_df == 0:
        return False
    if df != 0:
        lhs = dg * b_df
        rhs = b_dg * df
        if lhs != rhs:
            return lhs > rhs
    if size != b_size:
        return size < b_size
    return ids < b_ids


def exact_max_density(
    instance: MsopInstance, base: frozenset[int], cap: int | None = None
) -> DensityResult:
    """Maximum marginal density over feasible strict supersets of ``base``.

    The +inf sentinel beats every finite density; ties break to the smallest
    cardinality and then lexicographically on the sorted element ids.
    """
    base = frozenset(base)
    n = instance.n
    _cap_for("density", n, cap)
    if not instance.in_family(base):
        raise NotInFamily(f"base {sorted(base)} is not in the family")
    ground = instance.ground_set
    index = {v: i for i, v in enumerate(ground)}
    base_mask = 0
    for v in base:
        base_mask |= 1 << index[v]
    comp = ((1 << n) - 1) & ~base_mask
    f_base = instance.cost(base)
    g_base = instance.weight(base)
    best: tuple[Rational, Rational, int, tuple[int, ...]] | None = None
    best_set: frozenset[int] | None = None
    x = comp
    while x:
        extra = [ground[i] for i in range(n) if x >> i & 1]
        candidate = base | frozenset(extra)
        if instance.in_family(candidate):
            df = instance.cost(candidate) - f_base
            dg = instance.weight(candidate) - g_base
            if df < 0 or dg < 0:
                raise NonMonotone(
                    f"value decreased between {sorted(base)} and {sorted(candidate)}"
                )
            key = (dg, df, len(candidate), tuple(sorted(candidate)))
            if best is None or _superset_beats(dg, df, key[2], key[3], best):
                best = key
                best_set = candidate
        x = (x - 1) & comp
    if best is None or best_set is None:
        raise NoFeasibleSuperset(f"no feasible strict superset of {sorted(base)}")
    rho: Density = INF if best[1] == 0 else Fraction(best[0], best[1])
    return DensityResult(base, best_set, rho, 1)


def exact_density_solver(instance: MsopInstance, cap: int | None = None) -> DensitySolver:
    """Exhaustive density solver (factor 1) for use with the greedy loop."""

    def solve(base: frozenset[int]) -> DensityResult:
        return exact_max_density(instance, base, cap)

    return solve


Column = tuple[Rational, Rational, Density]  # (left, right, height) over the weight axis


@dataclass(frozen=True)
class HistogramReport:
    """Outcome of the shrunken-histogram containment check.

    ``opt_columns`` has one column per step of the optimal chain (height =
    cost of the step's set); ``greedy_columns`` one per greedy step, height
    (weight(V) - weight(S_{i-1})) / rho_i, unshrunk.  The check shrinks the
    greedy histogram by 2 horizontally (flush right) and 2*alpha vertically
    and verifies it fits under the optimal one.  Both raw areas equal the
    respective chain costs exactly.
    """

    opt_columns: tuple[Column, ...]
    greedy_columns: tuple[Column, ...]
    alpha: Rational
    contained: bool
    first_violation: tuple[Rational, Density, Rational] | None
    opt_area: Rational
    greedy_area: Density


def _height_at(columns: list[Column], x: Rational) -> Density:
    for left, right, height in columns:
        if left < x < right:
            return height
    return 0


def histogram_containment_check(
    instance: MsopInstance,
    greedy: Chain,
    opt: Chain,
    alpha: Rational,
) -> HistogramReport:
    if greedy.densities is None:
        raise MissingCertificate("greedy chain carries no per-step density certificate")
    if alpha < 1:
        raise ValidationError("alpha must be at least 1")
    validate_chain(instance, greedy)
    validate_chain(instance, opt)
    g_total = instance.weight(instance.universe())

    opt_columns: list[Column] = []
    opt_area: Rational = 0
    prev_w: Rational = 0
    prev_h: Rational = 0
    for s in opt.sets[1:]:
        w = instance.weight(s)
        h = instance.cost(s)
        if h < prev_h or w < prev_w:
            raise NonMonotone(f"optimal chain is not monotone at {sorted(s)}")
        opt_columns.append((prev_w, w, h))
        opt_area += h * (w - prev_w)
        prev_w, prev_h = w, h

    greedy_columns: list[Column] = []
    greedy_area: Density = 0
    prev_w = 0
    for s, rho in zip(greedy.sets[1:], greedy.densities):
        w = instance.weight(s)
        remaining = g_total - prev_w
        if remaining == 0 or rho == INF:
            height: Density = 0
        elif rho == 0:
            height = INF  # only reachable through a corrupted certificate
        else:
            height = Fraction(remaining, rho)
        greedy_columns.append((prev_w, w, height))
        if height == INF and w > prev_w:
            greedy_area = INF
        elif greedy_area != INF:
            greedy_area += height * (w - prev_w)
        prev_w = w

    two_alpha = 2 * alpha
    shrunk: list[Column] = []
    for left, right, height in greedy_columns:
        s_left = Fraction(g_total + left, 2)
        s_right = Fraction(g_total + right, 2)
        s_height = INF if height == INF else Fraction(height, two_alpha)
        if s_left < s_right:
            shrunk.append((s_left, s_right, s_height))
    solid_opt = [c for c in opt_columns if c[0] < c[1]]

    breakpoints: set[Rational] = set()
    for left, right, _ in shrunk:
        breakpoints.add(left)
        breakpoints.add(right)
    if shrunk:
        lo = shrunk[0][0]
        hi = shrunk[-1][1]
        for left, right, _ in solid_opt:
            if lo <= left <= hi:
                breakpoints.add(left)
            if lo <= right <= hi:
                breakpoints.add(right)
    xs = sorted(breakpoints)

    contained = True
    first_violation: tuple[Rational, Density, Rational] | None = None
    for a, b in zip(xs, xs[1:]):
        if a == b:
            continue
        mid = Fraction(a + b, 2)
        shrunk_height = _height_at(shrunk, mid)
        opt_height = _height_at(solid_opt, mid)
        if shrunk_height > opt_height:
            contained = False
            first_violation = (mid, shrunk_height, opt_height)
            break

    return HistogramReport(
        tuple(opt_columns),
        tuple(greedy_columns),
        alpha,
        contained,
        first_violation,
        opt_area,
        greedy_area,
    )
