"""Command-line interface.

Every command prints one JSON envelope on stdout (or CSV rows with
``--format csv``); logs go to stderr.  Exit codes: 0 ok, 2 usage error,
3 precondition error, 4 internal fault.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from math import gcd
from typing import Optional

from . import __version__
from .arith import (
    cyclotomic_value,
    decompose_n,
    is_prime,
    is_regular,
    minkowski_bound,
    mult_order,
    primes_in,
)
from .cyc import format_word, int_embed, word
from .errors import CyclosplitError, InternalFault, OutOfRange, ParseError, PreconditionError, SemanticError
from .kummer import family_cj3, family_crit_m, family_thm1, is_totally_split, rank_profile
from .parser import parse_element
from .scenarios import (
    Policy,
    scan_p3,
    verify_corollary,
    verify_lemma_relation,
    verify_predicted_symbols,
    witness_search_cj2,
    witness_search_cj3,
    witness_search_crit,
)
from .symbols import build_context, build_context_free, residue_symbol

SCHEMA_VERSION = 1
DEFAULTS = {"q_max": 10_000, "p_max": 101, "factor_bound": 1_000_000}
# flags that must not change the report
NOT_ECHOED = {"jobs", "format", "timing", "config", "verbose", "command", "handler"}

log = logging.getLogger("cyclosplit")


class UsageError(Exception):
    pass


def load_config(path: Optional[str]) -> dict:
    """``key = value`` lines; ``#`` comments.  Unknown keys are rejected."""
    cfg = dict(DEFAULTS)
    if not path:
        return cfg
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: bad config line {raw.strip()!r}")
            try:
                cfg[key] = int(value.strip().replace("_", ""))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
    return cfg


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _check_p(args, cfg):
    p = args.p
    if p is None:
        return
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"p={p} is not an odd prime")
    if p > cfg["p_max"]:
        raise OutOfRange(f"p={p} exceeds p_max={cfg['p_max']}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _context(args):
    if args.u is not None or args.v is not None:
        _require(args, "p", "q", "u", "v")
        return build_context(args.p, args.q, args.u, args.v)
    _require(args, "p", "q", "n")
    return build_context_free(args.p, args.q, args.n, args.index)


def _family(ctx, name: str, m: Optional[int]):
    if name == "thm1":
        return family_thm1(ctx)
    if name == "cj3":
        return family_cj3(ctx)
    if name == "crit":
        if m is None:
            raise UsageError("--family crit needs --m")
        return family_crit_m(ctx, m)
    raise UsageError(f"unknown family {name!r}")


# -- commands ----------------------------------------------------------------

def cmd_phi(args, cfg):
    _require(args, "n", "u", "v")
    return {"value": str(cyclotomic_value(args.n, args.u, args.v))}


def cmd_order(args, cfg):
    _require(args, "q")
    if not is_prime(args.q):
        raise PreconditionError(f"q={args.q} is not prime")
    if args.a is not None:
        a = args.a % args.q
    else:
        _require(args, "u", "v")
        if args.u % args.q == 0:
            raise PreconditionError(f"q={args.q} divides u")
        a = args.v * pow(args.u, -1, args.q) % args.q
    n = mult_order(a, args.q)
    out = {"a": str(a), "n": n}
    if args.p is not None:
        pp = decompose_n(n, args.p)
        out.update(d=pp.d, r=pp.r)
    return out


def cmd_regular(args, cfg):
    _require(args, "p")
    rep = is_regular(args.p)
    return {
        "p": rep.p,
        "regular": rep.regular,
        "irregular_indices": list(rep.irregular_indices),
        "minkowski_bound": str(minkowski_bound(args.p, dps=20)),
    }


def cmd_context(args, cfg):
    return _context(args).summary()


def cmd_symbol(args, cfg):
    _require(args, "elem")
    ctx = _context(args)
    w = parse_element(args.elem, ctx.n, ctx.p)
    if args.times_u:
        if ctx.u is None:
            raise UsageError("--times-u needs --u")
        w = word((int_embed(ctx.ring, ctx.u), 1)) * w
    mus = [residue_symbol(ctx, i, w) for i in range(len(ctx.Q_list))]
    return {"word": format_word(w), "mu": mus, "context": ctx.summary()}


def cmd_split(args, cfg):
    ctx = _context(args)
    report = is_totally_split(ctx, _family(ctx, args.family, args.m))
    return report.to_dict()


def cmd_verify(args, cfg):
    _require(args, "case", "p", "q")
    if args.case in ("T32_i", "T32_ii", "T31"):
        _require(args, "x", "y")
        return verify_predicted_symbols(args.case, args.p, args.x, args.y, args.q).to_dict()
    _require(args, "u", "v")
    return verify_corollary(args.case, args.p, args.u, args.v, args.q, Policy.parse(args.policy)).to_dict()


def cmd_lemma(args, cfg):
    _require(args, "variant", "p", "x", "y", "q")
    return verify_lemma_relation(args.variant, args.p, args.x, args.y, args.q).to_dict()


def cmd_witness(args, cfg):
    _require(args, "kind", "p")
    q_max = args.qmax if args.qmax is not None else cfg["q_max"]
    policy = Policy.parse(args.policy)
    if args.kind == "cj2":
        _require(args, "u", "v")
        res = witness_search_cj2(args.p, args.u, args.v, q_max, policy, jobs=args.jobs)
    elif args.kind == "cj3":
        res = witness_search_cj3(args.p, q_max, policy, jobs=args.jobs)
    else:
        _require(args, "S")
        ms = list(range(1, args.p)) if args.m is None else [args.m]
        res = witness_search_crit(args.p, _int_list(args.S), ms, jobs=args.jobs)
    return res.to_dict()


def cmd_scan_p3(args, cfg):
    _require(args, "smax")
    q_max = args.qmax if args.qmax is not None else 200
    return scan_p3(args.smax, q_max, jobs=args.jobs)


def cmd_rank(args, cfg):
    _require(args, "p", "u", "v")
    if gcd(args.u, args.v) != 1:
        raise PreconditionError("gcd(u, v) must be 1")
    q_max = args.qmax if args.qmax is not None else cfg["q_max"]
    contexts = [
        build_context(args.p, q, args.u, args.v)
        for q in primes_in(2, q_max)
        if (args.p * args.u * args.v) % q
    ]
    if not contexts:
        raise PreconditionError("no eligible primes below --qmax")
    spec = args.family if args.family != "crit" else f"crit:{args.m}"
    profile = rank_profile(args.p, spec, contexts)
    final = profile[-1]
    stable_from = next(i for i, x in enumerate(profile) if x == final)
    return {
        "delta_lower_bound": final,
        "profile": profile,
        "contexts": len(contexts),
        "stable_from_context": stable_from,
        "stabilization_length": len(profile) - stable_from,
        "primes": [str(c.q) for c in contexts],
    }


COMMANDS = {
    "phi": cmd_phi,
    "order": cmd_order,
    "regular": cmd_regular,
    "context": cmd_context,
    "symbol": cmd_symbol,
    "split": cmd_split,
    "verify": cmd_verify,
    "lemma": cmd_lemma,
    "witness": cmd_witness,
    "scan-p3": cmd_scan_p3,
    "rank": cmd_rank,
}


# -- output ------------------------------------------------------------------

def _tabular(command: str, results) -> Optional[list[dict]]:
    if command == "split":
        return results["matrix"]
    if command == "symbol":
        return [{"Q": i, "mu": mu} for i, mu in enumerate(results["mu"])]
    if command in ("verify", "lemma"):
        return results["conditions"]
    if command == "scan-p3":
        return [{k: r[k] for k in ("s", "t", "u", "v", "contexts")} | {"failures": len(r["failures"])}
                for r in results["rows"]]
    if command == "rank":
        return [{"context": i, "prime": q, "rank": r}
                for i, (q, r) in enumerate(zip(results["primes"], results["profile"]))]
    if command == "witness":
        return results["primes_skipped"]
    return None


def _to_csv(command: str, results) -> str:
    rows = _tabular(command, results)
    if rows is None:
        rows = [{"key": k, "value": json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}
                for k, v in sorted(results.items())]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in NOT_ECHOED or v is None or v is False:
            continue
        out[k] = str(v) if isinstance(v, int) and not isinstance(v, bool) else v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag in ("--p", "--q", "--u", "--v", "--n", "--m", "--a", "--x", "--y", "--qmax", "--smax"):
        common.add_argument(flag, type=int)
    common.add_argument("--index", type=int, default=0, help="xi choice index for contexts without u, v")
    common.add_argument("--elem")
    common.add_argument("--times-u", action="store_true")
    common.add_argument("--policy", default="regular", help="regular | unknown | table:PATH")
    common.add_argument("--family", default="thm1", choices=["thm1", "cj3", "crit"])
    common.add_argument("--case", choices=["C2", "C3", "C4", "C6", "C5extra", "T32_i", "T32_ii", "T31"])
    common.add_argument("--variant", choices=["eps", "varpi", "eps_p_shift"])
    common.add_argument("--kind", choices=["cj2", "cj3", "crit"])
    common.add_argument("--S", help="comma-separated primes for the criterion search")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--config")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cyclosplit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.jobs < 1:
        print("cyclosplit: --jobs must be >= 1", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        cfg = load_config(args.config)
        _check_p(args, cfg)
        results = COMMANDS[args.command](args, cfg)
    except (UsageError, ParseError, SemanticError) as exc:
        print(f"cyclosplit {args.command}: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"cyclosplit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (InternalFault, CyclosplitError) as exc:
        print(f"cyclosplit {args.command}: internal fault: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"cyclosplit {args.command}: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - anything else is a broken invariant
        log.exception("unexpected failure")
        print(f"cyclosplit {args.command}: internal fault: {exc!r}", file=sys.stderr)
        return 4
    if results is None:
        print(f"cyclosplit {args.command}: no results", file=sys.stderr)
        return 4
    if args.format == "csv":
        sys.stdout.write(_to_csv(args.command, results))
        return 0
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": _echo(args),
        "results": results,
        "timing": {"seconds": round(time.perf_counter() - start, 6)} if args.timing else None,
        "version": __version__,
    }
    print(json.dumps(envelope, sort_keys=True, indent=2))
    return 0


def run(argv) -> int:
    return main(argv)
