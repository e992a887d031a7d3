"""Command-line front end.

Every flag can also come from a ``PRIMNORMAL_<FLAG>`` environment variable;
an explicit flag wins over the environment, which wins over the default.
Output is deterministic: JSON with sorted keys, no timestamps.

Exit codes: 0 existence established / all checks passed, 1 non-existence
established / mismatch, 2 undetermined (a cap was hit), 64 usage error,
66 missing fixture.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import charsum, intarith, search, sieve, structure
from .errors import CapExceeded, PrimNormalError
from .ffield import DEFAULT_FIELD_CAP, build_field
from .fqpoly import poly_phi

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 64
EXIT_NO_INPUT = 66

ENV_PREFIX = "PRIMNORMAL_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_range(text: str) -> tuple[int, int]:
    """'a:b' (inclusive) or a single integer."""
    parts = text.split(":")
    if len(parts) == 1:
        v = int(parts[0])
        return v, v
    if len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
        if lo > hi:
            raise ValueError(f"empty range {text!r}")
        return lo, hi
    raise ValueError(f"bad range {text!r}")


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise ValueError(f"{text} is not positive")
    return v


# dest -> (converter, default); None means the flag is required by the commands that use it
OPTIONS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "q": (int, None),
    "n": (int, None),
    "k": (int, 0),
    "mode": (str, None),
    "max_exhaustive": (_positive, search.DEFAULT_MAX_EXHAUSTIVE),
    "max_factor_bits": (_positive, 128),
    "max_field": (_positive, DEFAULT_FIELD_CAP),
    "workers": (_positive, 1),
    "format": (str, "json"),
    "fixtures": (str, None),
    "seed": (int, 0),
    "table": (str, None),
    "q_range": (_int_range, None),
    "n_range": (_int_range, None),
}

MODES = {m.value: m for m in sieve.Mode}
FORMATS = ("json", "csv")
TABLES = ("S0", "Table1", "Table2", "N2")


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: int | None
    n: int | None
    k: int
    mode: str | None
    max_exhaustive: int
    max_factor_bits: int
    max_field: int
    workers: int
    format: str
    fixtures: str | None
    seed: int
    table: str | None
    q_range: tuple[int, int] | None
    n_range: tuple[int, int] | None

    @property
    def factor_cap(self) -> int:
        return 1 << self.max_factor_bits

    def to_record(self) -> dict:
        rec = dict(self.__dict__)
        for key in ("q_range", "n_range"):
            if rec[key] is not None:
                rec[key] = list(rec[key])
        return rec


def resolve_config(ns: argparse.Namespace, environ=os.environ) -> RunConfig:
    values = {}
    for dest, (conv, default) in OPTIONS.items():
        raw = getattr(ns, dest, None)
        if raw is None:
            env = environ.get(ENV_PREFIX + dest.upper())
            if env is not None and env != "":
                try:
                    raw = conv(env)
                except ValueError as exc:
                    raise UsageError(f"{ENV_PREFIX}{dest.upper()}: {exc}") from None
        values[dest] = default if raw is None else raw
    if values["format"] not in FORMATS:
        raise UsageError(f"--format must be one of {FORMATS}")
    if values["mode"] is not None and values["mode"] not in MODES:
        raise UsageError(f"--mode must be one of {sorted(MODES)}")
    if values["table"] is not None and values["table"] not in TABLES + ("N2Lemma",):
        raise UsageError(f"--table must be one of {TABLES}")
    if values["k"] not in (0, 1):
        raise UsageError("--k must be 0 or 1")
    return RunConfig(command=ns.command, **values)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primnormal", description="Existence checks for 2-primitive k-normal elements.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-exhaustive", type=_positive, help="largest exponent scanned by searches")
        p.add_argument("--max-factor-bits", type=_positive, help="factorization cap, in bits")
        p.add_argument("--max-field", type=_positive, help="largest field built for explicit arithmetic")
        p.add_argument("--workers", type=_positive, help="worker processes for witness searches")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--fixtures", help="directory holding table fixtures")
        p.add_argument("--seed", type=int, help="recorded with the run; every computation is deterministic")

    def pair(p: argparse.ArgumentParser, with_k: bool = True, with_mode: bool = True) -> None:
        p.add_argument("--q", type=int)
        p.add_argument("--n", type=int)
        if with_k:
            p.add_argument("--k", type=int, choices=(0, 1))
        if with_mode:
            p.add_argument("--mode", choices=sorted(MODES))

    for name, help_text in (
        ("check-pair", "sieve, then search if the sieve is inconclusive"),
        ("sieve", "base inequality and prime sieve only"),
        ("search", "smallest-exponent witness search"),
    ):
        p = sub.add_parser(name, help=help_text)
        pair(p, with_mode=name != "search")
        common(p)
    p = sub.add_parser("trace-coverage", help="which traces 2-primitive elements attain")
    pair(p, with_k=False, with_mode=False)
    common(p)
    p = sub.add_parser("verify-identities", help="character-sum cross-checks on a small field")
    pair(p, with_k=False, with_mode=False)
    common(p)
    p = sub.add_parser("reproduce", help="reproduce a published table against its fixture")
    p.add_argument("--table", choices=TABLES + ("N2Lemma",))
    common(p)
    p = sub.add_parser("sweep", help="run the sieve over a grid of pairs")
    p.add_argument("--q-range", type=_int_range, help="lo:hi, inclusive")
    p.add_argument("--n-range", type=_int_range, help="lo:hi, inclusive")
    p.add_argument("--mode", choices=sorted(MODES))
    common(p)
    return parser


# -- commands ----------------------------------------------------------------


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _sieve_mode(cfg: RunConfig) -> sieve.Mode:
    if cfg.mode is not None:
        return MODES[cfg.mode]
    return sieve.Mode.NORMAL0 if cfg.k == 0 else sieve.Mode.ONE_NORMAL


def _search_exit(out: search.SearchOutcome) -> int:
    if out.found:
        return EXIT_OK if out.witness.ok else EXIT_UNDETERMINED
    if out.status is search.SearchStatus.EXHAUSTED_NO_WITNESS:
        return EXIT_NEGATIVE
    return EXIT_UNDETERMINED


def cmd_check_pair(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q", "n")
    rep = sieve.run_sieve(cfg.q, cfg.n, _sieve_mode(cfg), cfg.factor_cap)
    result: dict = {"sieve": rep.to_record()}
    if rep.success:
        result["established_by"] = "sieve"
        return result, EXIT_OK
    try:
        out = search.find_2primitive_knormal(cfg.q, cfg.n, cfg.k, cfg.max_exhaustive, cfg.workers, cfg.max_field)
    except CapExceeded as exc:
        result["search"] = {"status": "CapExceeded", "reason": str(exc)}
        return result, EXIT_UNDETERMINED
    result["search"] = out.to_record()
    result["established_by"] = "search" if out.status is not search.SearchStatus.CAP_REACHED else None
    return result, _search_exit(out)


def cmd_sieve(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q", "n")
    mode = _sieve_mode(cfg)
    base = sieve.base_inequality(cfg.q, cfg.n, mode, cfg.factor_cap)
    rep = sieve.run_sieve(cfg.q, cfg.n, mode, cfg.factor_cap)
    return {"base": base.to_record(), "sieve": rep.to_record()}, EXIT_OK if rep.success else EXIT_UNDETERMINED


def cmd_search(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q", "n")
    out = search.find_2primitive_knormal(cfg.q, cfg.n, cfg.k, cfg.max_exhaustive, cfg.workers, cfg.max_field)
    return out.to_record(), _search_exit(out)


def cmd_trace_coverage(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q", "n")
    cov = search.trace_coverage(cfg.q, cfg.n, cfg.max_exhaustive, cfg.max_field)
    code = {"Success": EXIT_OK, "Fail": EXIT_NEGATIVE}.get(cov.status, EXIT_UNDETERMINED)
    return cov.to_record(), code


def cmd_reproduce(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "table")
    rep = search.reproduce_table(cfg.table, cfg.max_exhaustive, cfg.workers, cfg.max_field, cfg.fixtures)
    return rep.to_record(), EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_sweep(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q_range", "n_range")
    mode = MODES[cfg.mode] if cfg.mode else sieve.Mode.NORMAL0
    pairs = []
    for q in range(cfg.q_range[0], cfg.q_range[1] + 1):
        pt = intarith.as_prime_power(q) if q > 2 else None
        if pt is None or pt[0] == 2:
            continue
        for n in range(cfg.n_range[0], cfg.n_range[1] + 1):
            if mode is sieve.Mode.CUBIC_ONE_NORMAL and n != 3:
                continue
            pairs.append((q, n))
    reports = sieve.sweep(pairs, mode, cfg.factor_cap)
    return {"mode": mode.value, "reports": [r.to_record() for r in reports]}, EXIT_OK


def cmd_verify_identities(cfg: RunConfig) -> tuple[dict, int]:
    _need(cfg, "q", "n")
    pt = intarith.as_prime_power(cfg.q)
    if pt is None:
        raise UsageError(f"{cfg.q} is not a prime power")
    F = build_field(pt[0], pt[1], cfg.n, cfg.max_field)
    checks = []
    sizes = charsum.delta_class_sizes(F)
    for D in structure.xn_minus_one_divisors(F):
        checks.append({"check": "delta_class_size", "D": D.to_list(), "ok": sizes.get(D, 0) == poly_phi(D)})
        for t in intarith.divisors(F.order):
            checks.append({"check": "char_indicator", "t": t, "D": D.to_list(),
                           "ok": charsum.char_indicator_cross_check(F, t, D)})
    for m in intarith.divisors(cfg.n):
        for beta in F.subfield_elements(m):
            checks.append({"check": "trace_indicator", "m": m, "beta": F.wrap(beta).to_nested(),
                           "ok": charsum.trace_indicator_cross_check(F, m, F.wrap(beta))})
    ok = all(c["ok"] for c in checks)
    return {"q": cfg.q, "n": cfg.n, "checks": checks, "all_pass": ok}, EXIT_OK if ok else EXIT_NEGATIVE


COMMANDS = {
    "check-pair": cmd_check_pair,
    "sieve": cmd_sieve,
    "search": cmd_search,
    "trace-coverage": cmd_trace_coverage,
    "reproduce": cmd_reproduce,
    "sweep": cmd_sweep,
    "verify-identities": cmd_verify_identities,
}


# -- output ------------------------------------------------------------------


def _flatten(rec: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, (list, tuple)):
            out[name] = json.dumps(val, separators=(",", ":"))
        else:
            out[name] = val
    return out


def _rows(result: dict) -> list[dict]:
    for key in ("reports", "entries", "checks"):
        if isinstance(result.get(key), list):
            return [_flatten(r) for r in result[key]]
    return [_flatten(result)]


def render(cfg: RunConfig, result: dict, code: int) -> str:
    if cfg.format == "json":
        doc = {"config": cfg.to_record(), "exit_code": code, "result": result}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    rows = _rows(result)
    columns = sorted({c for r in rows for c in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def main(argv: Sequence[str] | None = None, environ=None) -> int:
    environ = os.environ if environ is None else environ
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = resolve_config(ns, environ)
        result, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"primnormal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"primnormal: missing fixture: {exc.filename or exc}", file=sys.stderr)
        return EXIT_NO_INPUT
    except CapExceeded as exc:
        print(f"primnormal: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (PrimNormalError, ValueError) as exc:
        print(f"primnormal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(cfg, result, code))
    return code


if __name__ == "__main__":
    sys.exit(main())
