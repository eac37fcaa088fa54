"""Command-line entry point: ``polysieve <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import random
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import coeffreduce, counting, dualgeom, expsum, sieve, verify
from .fixtures import resolve_instance
from .weights import SmoothWeightSpec

COMMANDS = ("count", "sieve", "expsum", "classify", "census", "reduce", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str | None = None
    instance: str = "F_A"
    B: int | None = None
    Q: float | None = None
    kappa: float | None = None
    m: int | None = None
    trunc: int | None = None
    k_max: int = 2
    alpha: float | None = None
    M: int = 6
    seed: int = 0
    output: str | None = None

    def validate(self):
        if self.Q is not None and self.kappa is not None:
            raise UsageError("give Q or kappa, not both")
        if self.B is not None and self.B < 0:
            raise UsageError("B must be non-negative")
        if self.k_max < 1:
            raise UsageError("k_max must be at least 1")


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config_file(path: str | Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = {"k-max": "k_max", "instance_path": "instance", "m_filter": "m"}.get(key, key)
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def _coerce(key: str, value: str):
    kind = _CONFIG_TYPES[key]
    try:
        if "int" in kind and "float" not in kind:
            return int(value)
        if "float" in kind:
            return float(value)
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None
    return value


def emit(report: dict, output: str | None) -> str:
    text = json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


# ---------------------------------------------------------------------------
# commands


def cmd_count(cfg: RunConfig, args) -> tuple[dict, bool]:
    if cfg.B is None:
        raise UsageError("count needs --B")
    F = resolve_instance(cfg.instance)
    w = SmoothWeightSpec(max(cfg.B, 1), args.bump, cfg.M) if cfg.B > 0 else SmoothWeightSpec(1, args.bump, cfg.M)
    N = counting.count_N(F, cfg.B)
    S = counting.count_S(F, cfg.B, w) if cfg.B > 0 else float(N)
    ok = N <= S
    return {"command": "count", "instance": str(F), "B": cfg.B, "N": N,
            "S": {"value": S, "bump": w.bump, "tolerance": "compensated sum"},
            "checks": {"N <= S": {"pass": ok, "tolerance": "exact"}}}, ok


def cmd_sieve(cfg: RunConfig, args) -> tuple[dict, bool]:
    if cfg.B is None:
        raise UsageError("sieve needs --B")
    F = resolve_instance(cfg.instance)
    if args.paper:
        params = sieve.SieveParameters(kappa=cfg.kappa, alpha=cfg.alpha, paper_mode=True)
    else:
        if cfg.Q is None:
            raise UsageError("desk mode needs --Q (or use --paper)")
        params = sieve.SieveParameters(Q=cfg.Q, alpha=cfg.alpha, trunc=cfg.trunc)
    w = SmoothWeightSpec(cfg.B, "smooth", cfg.M)
    rep = sieve.sieve_bound(F, cfg.B, params, w, cfg.k_max, poisson=not args.no_poisson,
                            threads=args.threads)
    d = rep.to_dict()
    d["command"] = "sieve"
    d["seed"] = cfg.seed
    return d, rep.all_pass


def _parse_u(values, n):
    if values is None:
        return None
    if len(values) != n:
        raise UsageError(f"--u needs {n} integers")
    return [int(v) for v in values]


def cmd_expsum(cfg: RunConfig, args) -> tuple[dict, bool]:
    F = resolve_instance(cfg.instance)
    if args.p is None:
        raise UsageError("expsum needs --p")
    table = expsum.g_table(F, args.p)
    out = {"command": "expsum", "instance": str(F), "p": args.p, "err_budget": table.err_budget,
           "g(0,p)": table[(0,) * F.n].real, "max |g|": table.max_abs()}
    if args.dump:
        table.dump(args.dump)
        out["dump"] = args.dump
    u = _parse_u(args.u, F.n)
    rng = random.Random(cfg.seed)
    sample = [u] if u else [[rng.randrange(args.p) for _ in range(F.n)] for _ in range(args.samples)]
    rows = expsum.weil_check(F, args.p, sample, cfg.k_max)
    ok = True
    for r in rows:
        r["g_direct"] = expsum.g_direct(F, r["u"], args.p)
        r["g_table"] = table[r["u"]]
        agree = abs(r["g_direct"] - r["g_table"]) <= 1e-6 * args.p ** (F.n / 2)
        r["agree"] = agree
        ok &= agree and not r["flag"]
    out["samples"] = rows
    return out, ok


def cmd_classify(cfg: RunConfig, args) -> tuple[dict, bool]:
    F = resolve_instance(cfg.instance)
    if args.p is None or args.u is None:
        raise UsageError("classify needs --p and --u")
    u = _parse_u(args.u, F.n)
    c = expsum.classify(F, u, args.p, cfg.k_max)
    out = {"command": "classify", "instance": str(F), "p": args.p, "u": u, "type": str(c),
           "k_max": cfg.k_max}
    ok = True
    if c.witness is not None:
        w = c.witness
        ok = dualgeom.witness_zeroes_tangency_polys(F, w)
        out["witness"] = {"k": w.k, "point": list(w.point), "verified": ok}
    return out, ok


def cmd_census(cfg: RunConfig, args) -> tuple[dict, bool]:
    F = resolve_instance(cfg.instance)
    if args.R is None:
        raise UsageError("census needs --R")
    probes = args.probes or dualgeom.census_probes(F, args.R, cfg.k_max)
    count = dualgeom.bad_locus_census(F, args.R, probes, cfg.k_max)
    expo = dualgeom.census_envelope_exponent(F.n)
    return {"command": "census", "instance": str(F), "R": args.R, "probes": probes, "count": count,
            "ratio to R^(n-2+1/3)": count / args.R**expo, "tolerance": "exact"}, True


def cmd_reduce(cfg: RunConfig, args) -> tuple[dict, bool]:
    if cfg.B is None:
        raise UsageError("reduce needs --B")
    F = resolve_instance(cfg.instance)
    d = coeffreduce.reduce_decision(F, cfg.B)
    out = {"command": "reduce", "instance": str(F), "B": cfg.B, "kind": d.kind, "N": d.N,
           "|E|": d.E_size, "rank": d.rank, "certificate": d.certificate}
    if d.b is not None:
        out["b"] = d.b
    if d.H is not None:
        out["H"] = str(d.H)
        out["R"] = str(d.R)
    return out, d.verified


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, bool]:
    try:
        results = verify.run_suites(args.only, args.fixtures, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    failed = [r.as_dict() for r in results if not r.passed]
    return {"command": "verify", "checks": [r.as_dict() for r in results], "failed": failed,
            "passed": len(results) - len(failed), "total": len(results)}, not failed


HANDLERS = {
    "count": cmd_count, "sieve": cmd_sieve, "expsum": cmd_expsum, "classify": cmd_classify,
    "census": cmd_census, "reduce": cmd_reduce, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value run configuration file")
    common.add_argument("--instance", help="fixture name (F_A..F_D) or instance file")
    common.add_argument("--B", type=int)
    common.add_argument("--Q", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--m", type=int, help="congruence filter for the sieving set")
    common.add_argument("--trunc", type=int)
    common.add_argument("--k-max", dest="k_max", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--M", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", "-o")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="polysieve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("count", parents=[common], help="N(F,B) and the smoothed count S(F,B)")
    p.add_argument("--bump", choices=("smooth", "indicator"), default="smooth")
    p = sub.add_parser("sieve", parents=[common], help="assembled sieve bound")
    p.add_argument("--paper", action="store_true", help="paper mode: symbolic term sizes only")
    p.add_argument("--no-poisson", action="store_true")
    for name in ("expsum", "classify"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--p", type=int)
        p.add_argument("--u", nargs="+")
        if name == "expsum":
            p.add_argument("--samples", type=int, default=5)
            p.add_argument("--dump", help="write the binary table here")
    p = sub.add_parser("census", parents=[common], help="bad-locus census")
    p.add_argument("--R", type=int)
    p.add_argument("--probes", type=int, nargs="+")
    sub.add_parser("reduce", parents=[common], help="coefficient-reduction dichotomy")
    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--only", help="comma-separated suite names")
    p.add_argument("--fixtures", help="alternative expected-values JSON")
    return parser


def make_config(args) -> RunConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    values["command"] = args.command
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        report, ok = HANDLERS[args.command](cfg, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polysieve: error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"polysieve: file error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"polysieve: error: {exc}", file=sys.stderr)
        return 2
    emit(report, cfg.output)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
