"""Command line: affine-cc {ccmap, cheb, mutate, express, count, verify, catalog}.

Exit status 0 on success, 1 when a computation fails or a check does not
pass, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fp
from .catalog import CatalogEntry, load_quiver
from .ccmap import cc_by_dimension, cc_module
from .cheb import cheb_F, tube_variable, x_ndelta
from .errors import ClusterError
from .laurent import LaurentPoly, default_variables, parse
from .quiver import express_in_cluster, initial_seed, mutate_word
from .rep import RepFamily, count_subreps, counting_polynomial, load_module
from . import verify


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    primes: tuple[int, ...] | None = None
    seed: int = 0
    depth: int = 2
    fmt: str = "text"
    jobs: int = 1


def _primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--primes expects a comma-separated list, got {text!r}") from None
    if not ps or any(not fp.is_prime(p) for p in ps) or any(a >= b for a, b in zip(ps, ps[1:])):
        raise argparse.ArgumentTypeError("--primes must be a strictly increasing list of primes")
    return ps


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _word(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) - 1 for x in re.split(r"[,\s]+", text.strip()) if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"a mutation word is a comma-separated list of vertices, got {text!r}") from None


def _config(args) -> RunConfig:
    return RunConfig(args.primes, args.seed, args.depth, "json" if args.json else "text", args.jobs)


# ----------------------------------------------------------------------------
# objects named on the command line


def _object(entry: CatalogEntry, spec: str, cfg: RunConfig) -> tuple[str, LaurentPoly]:
    """delta, ndelta:n, FAMILY:n or FAMILY(n), E1 or E1[L], P2/I2/S2, dim:a,b,..., or a module file."""
    q = entry.quiver
    s = spec.strip()
    if s == "delta":
        return "M(delta)", cc_module(entry.homogeneous(1), cfg.primes, cfg.jobs)
    m = re.fullmatch(r"ndelta:(\d+)", s)
    if m:
        n = int(m.group(1))
        return f"M({n}delta)", cc_module(entry.homogeneous(n), cfg.primes, cfg.jobs)
    if s.startswith("dim:"):
        v = tuple(int(x) for x in s[4:].split(","))
        return f"M{v}", cc_by_dimension(q, v, cfg.seed, cfg.primes, cfg.jobs)
    m = re.fullmatch(r"([PIS])(\d+)", s)
    if m:
        kind, i = m.group(1), int(m.group(2)) - 1
        if not 0 <= i < q.n:
            raise UsageError(f"vertex {i + 1} outside 1..{q.n}")
        d = {"P": q.projective_dim, "I": q.injective_dim, "S": q.simple}[kind](i)
        return f"{kind}{i + 1}", cc_by_dimension(q, d, cfg.seed, cfg.primes, cfg.jobs)
    m = re.fullmatch(r"(E\d+)(?:\[(\d+)\])?", s)
    if m and m.group(1) in entry.quasi_simple_names:
        tube, i = entry.quasi_simple_names[m.group(1)]
        length = int(m.group(2) or 1)
        fam = tube.presentation(i, length)
        return s, cc_module(fam, cfg.primes, cfg.jobs) if fam is not None else LaurentPoly.one(entry.variables)
    m = re.fullmatch(r"([A-Za-z]['p′]?\d*'?)(?::(\d+)|\((\d+)\))", s)
    if m:
        n = int(m.group(2) or m.group(3))
        fam = entry.presentation(m.group(1), n)
        return fam.name, cc_module(fam, cfg.primes, cfg.jobs)
    path = Path(s)
    if path.exists():
        fam = load_module(path, entry.quiver)
        return fam.name or str(fam.dims), cc_module(fam, cfg.primes, cfg.jobs)
    raise UsageError(f"cannot interpret object {spec!r}")


def _emit(cfg: RunConfig, text: str, payload) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _poly_payload(p: LaurentPoly) -> dict:
    return {"variables": list(p.variables), "text": p.render_fraction(), "terms": p.to_json()}


# ----------------------------------------------------------------------------
# subcommands


def cmd_ccmap(args, cfg: RunConfig) -> int:
    if args.module:
        fam = load_module(args.module)
        name, value = fam.name or str(fam.dims), cc_module(fam, cfg.primes, cfg.jobs)
    else:
        if not args.quiver or not args.object:
            raise UsageError("ccmap needs QUIVER OBJECT or --module FILE")
        name, value = _object(load_quiver(args.quiver), args.object, cfg)
    _emit(cfg, value.render_fraction(), {"object": name, "value": _poly_payload(value)})
    return 0


def cmd_cheb(args, cfg: RunConfig) -> int:
    rest = args.args
    if args.what == "F":
        if len(rest) != 1:
            raise UsageError("usage: cheb F n")
        f = cheb_F(int(rest[0]))
        _emit(cfg, f.render(), {"n": int(rest[0]), "coefficients": list(f.coeffs)})
        return 0
    if args.what == "ndelta":
        if len(rest) != 2:
            raise UsageError("usage: cheb ndelta QUIVER n")
        value = x_ndelta(load_quiver(rest[0]), int(rest[1]))
    else:
        if len(rest) != 4:
            raise UsageError("usage: cheb tube QUIVER TUBE i L")
        entry = load_quiver(rest[0])
        value = tube_variable(entry.tube(rest[1]), int(rest[2]), int(rest[3]))
    _emit(cfg, value.render_fraction(), _poly_payload(value))
    return 0


def cmd_mutate(args, cfg: RunConfig) -> int:
    q = load_quiver(args.quiver).quiver
    s = mutate_word(initial_seed(q), args.word)
    lines = [f"word: {' '.join(str(k + 1) for k in s.word) or '(empty)'}"]
    lines += [f"B[{i + 1}] = {list(row)}" for i, row in enumerate(s.B)]
    lines += [f"y{i + 1} = {v.render_fraction()}" for i, v in enumerate(s.cluster)]
    payload = {
        "word": [k + 1 for k in s.word],
        "B": [list(r) for r in s.B],
        "cluster": [_poly_payload(v) for v in s.cluster],
    }
    _emit(cfg, "\n".join(lines), payload)
    return 0


def cmd_express(args, cfg: RunConfig) -> int:
    entry = load_quiver(args.quiver)
    variables = default_variables(entry.quiver.n)
    try:
        z = parse(args.expr, variables)
    except ValueError:
        if ":" not in args.expr:
            raise
        z = verify.element(entry, args.expr, cfg.seed)[1]
    s = mutate_word(initial_seed(entry.quiver), args.word)
    value = express_in_cluster(z, s)
    _emit(cfg, value.render_fraction(), {"word": [k + 1 for k in s.word], "value": _poly_payload(value)})
    return 0


def _module_arg(args) -> RepFamily:
    path = Path(args.module)
    if path.exists():
        return load_module(path)
    if not args.quiver:
        raise UsageError("count needs a module file, or --quiver with a catalog family like M1:3")
    entry = load_quiver(args.quiver)
    m = re.fullmatch(r"(.+?)(?::(\d+)|\((\d+)\))", args.module)
    if m:
        return entry.presentation(m.group(1), int(m.group(2) or m.group(3)))
    if args.module == "delta":
        return entry.homogeneous(1)
    raise UsageError(f"cannot interpret module {args.module!r}")


def cmd_count(args, cfg: RunConfig) -> int:
    fam = _module_arg(args)
    e = tuple(int(x) for x in args.e.split(","))
    if args.prime:
        n = count_subreps(fam.at(args.prime), e)
        _emit(cfg, str(n), {"module": fam.name or list(fam.dims), "e": list(e), "prime": args.prime, "count": n})
        return 0
    poly = counting_polynomial(fam, e, cfg.primes)
    chi = sum(poly)
    text = f"counting polynomial {poly or [0]}; chi = {chi}"
    _emit(cfg, text, {"module": fam.name or list(fam.dims), "e": list(e), "polynomial": poly, "chi": chi})
    return 0


def _report_out(cfg: RunConfig, reports, payload_extra=None) -> int:
    ok = all(r.ok for r in reports)
    if cfg.fmt == "json":
        payload = {"ok": ok, "reports": [r.to_json() for r in reports]}
        if payload_extra:
            payload.update(payload_extra)
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for r in reports:
            print(r.line())
        print(f"{sum(r.ok for r in reports)}/{len(reports)} passed")
    return 0 if ok else 1


def cmd_verify(args, cfg: RunConfig) -> int:
    entry = load_quiver(args.quiver)
    suite = args.suite
    if suite == "prop41":
        return _report_out(cfg, verify.suite_prop41(entry, args.n or 5, cfg.jobs))
    if suite == "prop42":
        return _report_out(cfg, verify.suite_prop42(entry, args.n or 3, cfg.jobs))
    if suite == "prop43":
        return _report_out(cfg, verify.suite_prop43(entry, args.n or 3, cfg.jobs))
    if suite == "difference":
        return _report_out(cfg, verify.suite_difference(entry, args.n if args.n is not None else 2, cfg.jobs))
    if suite == "ladder":
        if not args.object:
            raise UsageError("verify ladder needs --object DIMS (e.g. 1,1,0,0,0)")
        dims = tuple(int(x) for x in args.object.split(","))
        reports = [verify.check_cheb_ladder(entry, dims, n, cfg.seed, cfg.jobs) for n in range(1, (args.n or 1) + 1)]
        return _report_out(cfg, reports)
    if suite == "positivity":
        if not args.element:
            raise UsageError("verify positivity needs --element (e.g. ndelta:2)")
        reports = []
        for spec in args.element:
            name, value = verify.element(entry, spec, cfg.seed)
            reports += verify.check_positivity(value, entry, cfg.depth, name, cfg.jobs)
        return _report_out(cfg, reports)
    if suite == "basis":
        reports = []
        for name, value in verify.gen_basis_elements(entry, args.kind, args.bound):
            reports += verify.check_positivity(value, entry, cfg.depth, name, cfg.jobs)
        return _report_out(cfg, reports)
    raise UsageError(f"unknown suite {suite!r}")


def cmd_catalog(args, cfg: RunConfig) -> int:
    entry = load_quiver(args.quiver)
    if args.family:
        if args.n is None:
            raise UsageError("--family needs --n")
        d = entry.dim_family(args.family, args.n)
        _emit(cfg, "(" + ",".join(str(x) for x in d) + ")", {"family": args.family, "n": args.n, "dim": list(d)})
        return 0
    data = entry.to_json()
    if cfg.fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
        return 0
    print(f"{entry.name}: {entry.quiver.n} vertices, arrows {[[s + 1, t + 1] for s, t in entry.quiver.arrows]}")
    print(f"delta = {entry.delta}")
    for t in data["tubes"]:
        print(f"tube {t['label']}: rank {t['rank']}, quasi-simples {[tuple(d) for d in t['quasi_simples']]}")
    for name, f in data["families"].items():
        sample = ", ".join(f"{n}:{tuple(d)}" for n, d in list(f["dims"].items())[:3])
        print(f"family {name} ({f['kind']}, parity {f['parity'] or 'any'}, n >= {f['min_n']}): {sample}, ...")
    return 0


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--primes", type=_primes, default=None, help="comma-separated increasing primes for point counts")
    common.add_argument("--seed", type=int, default=0, help="seed for generic matrices")
    common.add_argument("--depth", type=_nonneg, default=2, help="mutation depth for positivity checks")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="affine-cc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ccmap", parents=[common], help="Caldero-Chapoton value of an object")
    p.add_argument("quiver", nargs="?")
    p.add_argument("object", nargs="?")
    p.add_argument("--module", help="module JSON file")
    p.set_defaults(func=cmd_ccmap)

    p = sub.add_parser("cheb", parents=[common], help="Chebyshev polynomials and delta recursions")
    p.add_argument("what", choices=["F", "ndelta", "tube"])
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_cheb)

    p = sub.add_parser("mutate", parents=[common], help="mutate the initial seed along a word")
    p.add_argument("quiver")
    p.add_argument("word", type=_word, nargs="?", default=())
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("express", parents=[common], help="write a Laurent polynomial in a mutated cluster")
    p.add_argument("quiver")
    p.add_argument("expr", help="polynomial in x1..xn, or an element name such as cheb:2")
    p.add_argument("word", type=_word, nargs="?", default=())
    p.set_defaults(func=cmd_express)

    p = sub.add_parser("count", parents=[common], help="count subrepresentations or interpolate the counting polynomial")
    p.add_argument("module", help="module JSON file, or FAMILY:n / delta with --quiver")
    p.add_argument("e", help="sub-dimension vector, comma-separated")
    p.add_argument("--quiver")
    p.add_argument("--prime", type=int, help="count over this one prime")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[common], help="identity and positivity suites")
    p.add_argument("suite", choices=["prop41", "prop42", "prop43", "difference", "ladder", "positivity", "basis"])
    p.add_argument("--quiver", default="d4tilde")
    p.add_argument("--n", type=int)
    p.add_argument("--element", action="append")
    p.add_argument("--object")
    p.add_argument("--kind", default="B", choices=["B", "S", "G"])
    p.add_argument("--bound", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="built-in catalog data")
    p.add_argument("quiver")
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(args)
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ClusterError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, KeyError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
