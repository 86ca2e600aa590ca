"""Command-line frontend.

Exit codes: 0 pass, 1 verification failed, 2 invalid input, 3 infeasible
parameters, 4 node budget exceeded, 5 search inconclusive, 6 definitively absent.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import chains, oracle
from .alg import AlgReal, parse
from .spectra import OutOfScope, check_bounds, check_eigen_exact, spectral_radius_numeric
from .treekit import (DEFAULT_NODE_BUDGET, Tree, WeightedDiTree, phi_from_omega, to_dot,
                      to_undirected, unfolded_size)
from .wset import (Certificate, CertificateStructureError, SearchLimits, WContext,
                   check_certificate, closure_search)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4
EXIT_INCONCLUSIVE = 5
EXIT_ABSENT = 6

NUMERIC_TOL = Fraction(1, 10**9)


class InvalidInput(Exception):
    pass


def _out(text: str = "") -> None:
    print(text)


def _fmt(x: AlgReal, show_float: bool) -> str:
    return f"{x}    (~{float(x):.12g})" if show_float else str(x)


def _alpha(text: str) -> AlgReal:
    try:
        a = parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(str(exc)) from None
    if a.sign() <= 0:
        raise InvalidInput(f"alpha must be positive, got {a}")
    return a


def _r(text: str):
    if text in ("inf", "infinity"):
        return None
    try:
        r = int(text)
    except ValueError:
        raise InvalidInput(f"r must be a positive integer or 'inf', got {text!r}") from None
    if r < 1:
        raise InvalidInput(f"r must be positive, got {r}")
    return r


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def _numeric_agrees(tree: Tree, alpha: AlgReal, tol=NUMERIC_TOL) -> tuple[bool, tuple[Fraction, Fraction]]:
    lo, hi = spectral_radius_numeric(tree, tol)
    a_lo, a_hi = alpha.approx(tol)
    return (lo - tol <= a_hi and a_lo <= hi + tol), (lo, hi)


# synth / halfsum

def _emit_synthesis(args, out: chains.Synthesis, expected_delta: int) -> int:
    tree, w, alpha = out.tree, out.ditree, out.context.alpha
    verdict = check_eigen_exact(tree, alpha, out.phi)
    agrees, (lo, hi) = _numeric_agrees(tree, alpha)
    _out(f"n: {tree.n}")
    _out(f"delta: {tree.max_degree}")
    _out(f"alpha: {_fmt(alpha, args.float)}")
    _out(f"exact eigen-check: {'pass' if verdict.ok else 'FAIL ' + verdict.reason}")
    _out(f"numeric rho in [{float(lo):.12f}, {float(hi):.12f}]: {'agrees' if agrees else 'DISAGREES'}")
    if args.out:
        _write_json(args.out, tree.to_json())
    if args.ditree:
        _write_json(args.ditree, w.to_json())
    if args.dot:
        Path(args.dot).write_text(to_dot(w))
    ok = verdict.ok and agrees and tree.max_degree == expected_delta
    return EXIT_OK if ok else EXIT_FAIL


def _budget_exceeded(args, exc: chains.SynthesisBudgetExceeded) -> int:
    verdict = check_certificate(exc.context, exc.certificate)
    _out(f"unfolded size {exc.size} exceeds the node budget {exc.budget}")
    _out(f"certificate: {verdict.summary()}")
    return EXIT_BUDGET if verdict.ok else EXIT_FAIL


def cmd_synth(args) -> int:
    k, r = args.k, args.delta
    if k < 2:
        raise InvalidInput("k must be >= 2")
    lo = chains.r_min(k)
    if not lo <= r <= k:
        _out(f"infeasible: need k/4 + 1 < delta <= k, i.e. {lo} <= delta <= {k} for k={k}")
        return EXIT_INFEASIBLE
    cert, ctx = chains.zero_certificate(k, r)
    if args.cert:
        _write_json(args.cert, cert.to_json(ctx))
    _out(f"certificate: {len(cert.nodes)} nodes, unfolds to {unfolded_size(cert)} vertices")
    try:
        out = chains.sqrt_tree(k, r, node_budget=args.max_nodes, verify=False)
    except chains.SynthesisBudgetExceeded as exc:
        return _budget_exceeded(args, exc)
    return _emit_synthesis(args, out, r)


def cmd_halfsum(args) -> int:
    try:
        cert, ctx = chains.half_sum_certificate(args.p, args.q)
    except (chains.DivisibilityError, chains.OrderingError, chains.DegenerateError, ValueError) as exc:
        raise InvalidInput(str(exc)) from None
    if args.cert:
        _write_json(args.cert, cert.to_json(ctx))
    try:
        out = chains.half_sum_tree(args.p, args.q, node_budget=args.max_nodes, verify=False)
    except chains.SynthesisBudgetExceeded as exc:
        return _budget_exceeded(args, exc)
    return _emit_synthesis(args, out, ctx.r)


# verify / bounds

def _load_tree(path: str) -> tuple[Tree, WeightedDiTree | None]:
    obj = _read_json(path)
    try:
        if "omega" in obj:
            w = WeightedDiTree.from_json(obj)
            return to_undirected(w), w
        return Tree.from_json(obj), None
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad tree file {path}: {exc}") from None


def _load_phi(path: str, n: int) -> list[AlgReal]:
    obj = _read_json(path)
    if isinstance(obj, dict) and "phi" in obj:
        obj = obj["phi"]
    try:
        if isinstance(obj, dict):
            phi = [AlgReal.from_json(obj[str(v)]) for v in range(n)]
        else:
            phi = [AlgReal.from_json(x) for x in obj]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad phi file {path}: {exc}") from None
    if len(phi) != n:
        raise InvalidInput(f"phi has {len(phi)} entries, tree has {n} vertices")
    return phi


def cmd_verify(args) -> int:
    tree, w = _load_tree(args.tree)
    alpha = _alpha(args.alpha)
    if args.numeric:
        try:
            tol = Fraction(args.tol)
        except ValueError:
            raise InvalidInput(f"bad tolerance {args.tol!r}") from None
        if tol <= 0:
            raise InvalidInput("tol must be positive")
        agrees, (lo, hi) = _numeric_agrees(tree, alpha, tol)
        _out(f"rho in [{float(lo):.12f}, {float(hi):.12f}], alpha ~ {float(alpha):.12f}")
        _out("pass" if agrees else "FAIL")
        return EXIT_OK if agrees else EXIT_FAIL
    if args.phi:
        phi = _load_phi(args.phi, tree.n)
    elif w is not None:
        phi = phi_from_omega(w)
    else:
        raise InvalidInput("exact mode needs --phi or a weighted directed tree file")
    verdict = check_eigen_exact(tree, alpha, phi)
    _out(json.dumps(verdict.to_json()))
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    tree, _ = _load_tree(args.tree)
    try:
        v = check_bounds(tree)
    except OutOfScope as exc:
        raise InvalidInput(str(exc)) from None
    lo, hi = v.rho_interval
    _out(f"delta: {v.delta}, rho in [{float(lo):.9f}, {float(hi):.9f}]")
    _out(f"delta <= rho^2: {v.upper_ok}; rho^2/4 + 1 < delta: {v.lower_ok}")
    return EXIT_OK if v.ok else EXIT_FAIL


# wset

def cmd_wset(args) -> int:
    if args.check:
        try:
            ctx, cert = Certificate.from_json(_read_json(args.check))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CertificateStructureError):
                _out(f"structural error: {exc}")
                return EXIT_FAIL
            raise InvalidInput(f"bad certificate file: {exc}") from None
        if args.r is not None:
            ctx = ctx.with_r(_r(args.r))
        verdict = check_certificate(ctx, cert)
        _out(verdict.summary())
        return EXIT_OK if verdict.ok else EXIT_FAIL
    if args.alpha is None or args.r is None:
        raise InvalidInput("--alpha and --r are required unless --check is given")
    ctx = WContext(_alpha(args.alpha), _r(args.r))
    try:
        limits = SearchLimits(max_rounds=args.rounds, max_children=args.max_children,
                              max_values=args.max_values)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    zero = AlgReal.rational(0)
    result = closure_search(ctx, limits, targets=[zero] if args.find_zero else ())
    _out(f"rounds: {result.rounds}, values: {len(result.explored)}, saturated: {result.saturated}")
    if not args.find_zero:
        for v in result.explored:
            _out("  " + _fmt(v, args.float))
        return EXIT_OK
    if zero in result.found:
        cert = result.found[zero]
        _out(f"0 found: {len(cert.nodes)} certificate nodes")
        if args.out:
            _write_json(args.out, cert.to_json(ctx))
        return EXIT_OK
    if result.definitive_absent(zero):
        _out("0 is not a member: the closure saturated")
        return EXIT_ABSENT
    _out("0 not found within the limits (inconclusive)")
    return EXIT_INCONCLUSIVE


# oracle

def cmd_oracle(args) -> int:
    if not 1 <= args.max_n <= oracle.MAX_N:
        raise InvalidInput(f"--max-n must be in [1, {oracle.MAX_N}]")
    if args.k_max < 2:
        raise InvalidInput("--k-max must be >= 2")
    sq = oracle.scan_sqrt_k(args.max_n, args.k_max)
    report = {"n_max": args.max_n, "counts": sq["counts"], "violations": list(sq["violations"]),
              "hits": sq["hits"], "realized": sq["realized"]}
    if args.max_n >= 3:
        b = oracle.scan_bounds(args.max_n)
        report["bounds_checked"] = b["total"]
        report["violations"] += [dict(v, kind="bounds") for v in b["violations"]]
    _out(f"trees per order: {report['counts']}")
    _out(f"sqrt(k) hits: {len(report['hits'])}, realized (k, delta): {report['realized']}")
    _out(f"violations: {len(report['violations'])}")
    if args.report:
        _write_json(args.report, report)
    return EXIT_OK if not report["violations"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectree", description="Trees with prescribed degree and spectral radius.")
    sub = p.add_subparsers(dest="command", required=True)

    def artifacts(sp):
        sp.add_argument("--out", help="write the tree as JSON")
        sp.add_argument("--ditree", help="write the weighted directed tree as JSON")
        sp.add_argument("--dot", help="write a Graphviz rendering")
        sp.add_argument("--cert", help="write the certificate as JSON")
        sp.add_argument("--max-nodes", type=int, default=DEFAULT_NODE_BUDGET)
        sp.add_argument("--float", action="store_true", help="also print decimal approximations")

    sp = sub.add_parser("synth", help="tree with spectral radius sqrt(k) and max degree delta")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--delta", type=int, required=True)
    artifacts(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("halfsum", help="tree with spectral radius (sqrt(p)+sqrt(q))/2")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    artifacts(sp)
    sp.set_defaults(func=cmd_halfsum)

    sp = sub.add_parser("verify", help="check a tree against a spectral radius")
    sp.add_argument("--tree", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--phi")
    sp.add_argument("--numeric", action="store_true")
    sp.add_argument("--tol", default="1e-9")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("wset", help="closure search and certificate checking")
    sp.add_argument("--alpha")
    sp.add_argument("--r")
    sp.add_argument("--rounds", type=int, default=SearchLimits.max_rounds)
    sp.add_argument("--max-values", type=int, default=SearchLimits.max_values)
    sp.add_argument("--max-children", type=int, default=SearchLimits.max_children)
    sp.add_argument("--find-zero", action="store_true")
    sp.add_argument("--check")
    sp.add_argument("--out", help="write the certificate for 0 when found")
    sp.add_argument("--float", action="store_true")
    sp.set_defaults(func=cmd_wset)

    sp = sub.add_parser("oracle", help="sweep all small trees")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--k-max", type=int, default=9)
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bounds", help="check rho^2/4 + 1 < delta <= rho^2 on one tree")
    sp.add_argument("--tree", required=True)
    sp.set_defaults(func=cmd_bounds)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except chains.ChainError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
