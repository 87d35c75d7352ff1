"""Command-line driver: solve, density, exact, check-ratio, gen.

Reports are line-oriented ``key=value`` records on stdout.  Exit codes:
0 success, 1 error, 2 a certified bound was violated by check-ratio (which
would falsify a hypothesis or reveal a bug, so it is distinguished).
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import dual, exact, mssc, orsched, rof, xsearch
from .core import (
    Chain,
    DensityResult,
    INF,
    chain_cost,
    chain_to_permutation,
    greedy_chain,
    permutation_to_chain,
)
from .errors import MsopError
from .formats import (
    Instance,
    file_kind,
    format_rational,
    parse_instance,
    serialize_instance,
)
from .generators import KINDS, gen_instance


def _format_density(value) -> str:
    return "inf" if value == INF else format_rational(value)


def _format_set(s) -> str:
    return ",".join(str(v) for v in sorted(s)) if s else "-"


def _format_chain(chain: Chain) -> str:
    return ";".join(_format_set(s) for s in chain.sets[1:])


def _parse_base(text: str) -> frozenset[int]:
    text = text.strip()
    if not text or text == "-":
        return frozenset()
    return frozenset(int(tok) for tok in text.replace(",", " ").split())


class Toolchain:
    """Greedy machinery appropriate to a parsed instance."""

    def __init__(self, parsed: Instance):
        self.parsed = parsed
        self.kind = file_kind(parsed)
        self.detail = self.kind
        if isinstance(parsed, mssc.MsscInstance):
            self.instance = mssc.to_msop(parsed)
            self.solver = mssc.singleton_solver(parsed)
            self.alpha = 1
        elif isinstance(parsed, orsched.OrDag):
            self.instance = orsched.to_msop(parsed)
            shape = orsched.classify_dag(parsed)
            self.detail = f"orsched/{shape}"
            if orsched.is_inforest(parsed):
                self.solver = orsched.stem_solver(parsed)
            elif orsched.is_multitree(parsed):
                self.solver = orsched.outtree_solver(parsed)
            else:
                # no polynomial density step is known beyond multitrees;
                # fall back to the exhaustive one at desk scale
                self.solver = exact.exact_density_solver(self.instance)
            self.alpha = 1
        elif isinstance(parsed, rof.ReadOnceFormula):
            self.instance = rof.to_msop(parsed)
            self.solver = rof.supplement_solver(parsed, self.instance)
            self.alpha = 2
        else:
            self.instance = xsearch.xsearch_to_msop(parsed)
            self.solver = exact.exact_density_solver(self.instance)
            self.alpha = 1
        self.bound = 4 * self.alpha

    def greedy(self, backward: bool = False, alpha=None) -> Chain:
        claimed = self.alpha if alpha is None else alpha
        if backward:
            return dual.backward_greedy_chain(
                self.instance, exact.exact_density_solver, claimed
            )
        return greedy_chain(self.instance, self.solver, claimed)

    def density(self, base: frozenset[int]) -> DensityResult:
        return self.solver(base)


def _emit(key: str, value) -> None:
    print(f"{key}={value}")


def _cmd_gen(args) -> int:
    instance = gen_instance(args.kind, args.n, args.seed)
    text = serialize_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        _emit("wrote", args.out)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_solve(args) -> int:
    chain_tools = Toolchain(parse_instance(args.file))
    alpha = chain_tools.alpha if args.alpha is None else args.alpha
    chain = chain_tools.greedy(backward=args.backward, alpha=alpha)
    cost = chain_cost(chain_tools.instance, chain)
    permutation = chain_to_permutation(chain_tools.instance, chain)
    _emit("kind", chain_tools.detail)
    _emit("n", chain_tools.instance.n)
    _emit("mode", "backward" if args.backward else "forward")
    _emit("alpha", format_rational(alpha))
    _emit("chain", _format_chain(chain))
    _emit("densities", ",".join(_format_density(d) for d in chain.densities or ()))
    _emit("permutation", ",".join(str(v) for v in permutation.order))
    _emit("greedy_cost", format_rational(cost))
    return 0


def _cmd_density(args) -> int:
    chain_tools = Toolchain(parse_instance(args.file))
    base = _parse_base(args.base)
    result = chain_tools.density(base)
    _emit("kind", chain_tools.detail)
    _emit("base", _format_set(result.base))
    _emit("candidate", _format_set(result.candidate))
    _emit("density", _format_density(result.marginal_density))
    _emit("alpha", format_rational(result.alpha_certificate))
    return 0


def _cmd_exact(args) -> int:
    chain_tools = Toolchain(parse_instance(args.file))
    instance = chain_tools.instance
    _emit("kind", chain_tools.detail)
    if args.mode == "perm":
        permutation, cost = exact.exact_opt_permutation(instance)
        _emit("permutation", ",".join(str(v) for v in permutation.order))
        _emit("cost", format_rational(cost))
    elif args.mode == "chain":
        chain, cost = exact.exact_opt_chain(instance)
        _emit("chain", _format_chain(chain))
        _emit("cost", format_rational(cost))
    else:
        result = exact.exact_max_density(instance, _parse_base(args.base))
        _emit("base", _format_set(result.base))
        _emit("candidate", _format_set(result.candidate))
        _emit("density", _format_density(result.marginal_density))
    return 0


def _cmd_check_ratio(args) -> int:
    started = time.perf_counter()
    chain_tools = Toolchain(parse_instance(args.file))
    instance = chain_tools.instance
    chain = chain_tools.greedy()
    greedy_cost = chain_cost(instance, chain)
    _emit("instance", args.file)
    _emit("kind", chain_tools.detail)
    _emit("n", instance.n)
    _emit("greedy_cost", format_rational(greedy_cost))
    _emit("bound", format_rational(chain_tools.bound))
    _emit(
        "certificate",
        ",".join(_format_density(d) for d in chain.densities or ()),
    )
    try:
        opt_perm, opt_cost = exact.exact_opt_permutation(instance)
    except MsopError as exc:
        _emit("exact_cost", "skipped")
        _emit("skip_reason", exc)
        _emit("wall_time_s", f"{time.perf_counter() - started:.3f}")
        return 0
    violated = greedy_cost > chain_tools.bound * opt_cost
    _emit("exact_cost", format_rational(opt_cost))
    if opt_cost > 0:
        _emit("ratio", format_rational(Fraction(greedy_cost, opt_cost)))
    else:
        _emit("ratio", "0" if greedy_cost == 0 else "inf")
        violated = violated or greedy_cost > 0
    report = exact.histogram_containment_check(
        instance,
        chain,
        permutation_to_chain(instance, opt_perm),
        chain_tools.alpha,
    )
    _emit("histogram_contained", "true" if report.contained else "false")
    if report.first_violation is not None:
        x, got, allowed = report.first_violation
        _emit(
            "histogram_violation",
            f"x={format_rational(x)} height={_format_density(got)} "
            f"limit={format_rational(allowed)}",
        )
    _emit("wall_time_s", f"{time.perf_counter() - started:.3f}")
    if violated or not report.contained:
        _emit("verdict", "BOUND VIOLATED")
        return 2
    _emit("verdict", "ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msop", description="min-sum ordering solver toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="greedy chain plus consistent permutation")
    solve.add_argument("file")
    solve.add_argument("--alpha", type=int, default=None)
    solve.add_argument("--backward", action="store_true")
    solve.set_defaults(run=_cmd_solve)

    density = sub.add_parser("density", help="one density step from a base set")
    density.add_argument("file")
    density.add_argument("--base", default="")
    density.set_defaults(run=_cmd_density)

    exact_cmd = sub.add_parser("exact", help="exhaustive oracle")
    exact_cmd.add_argument("file")
    exact_cmd.add_argument("--mode", choices=("perm", "chain", "density"), default="perm")
    exact_cmd.add_argument("--base", default="")
    exact_cmd.set_defaults(run=_cmd_exact)

    check = sub.add_parser("check-ratio", help="greedy vs exact plus histogram check")
    check.add_argument("file")
    check.set_defaults(run=_cmd_check_ratio)

    gen = sub.add_parser("gen", help="deterministic random instance")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", default=None)
    gen.set_defaults(run=_cmd_gen)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except MsopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
