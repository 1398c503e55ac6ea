"""Command-line front end.

Subcommands
-----------
enum
    List all non-crossing partitions of a given size.
dist
    Occurrence-distribution polynomial of one pattern at a single size
    (``--n``) or the whole series up to an order (``--order``), computed
    by brute force, by closed form, or by the staircase recurrence.
series
    Closed-form generating series for a covered pattern family; with
    ``--v`` the staircase series additionally weights each partition by
    ``v_value`` raised to its smallest repeated letter.
total
    Total occurrence count over all partitions of one size.
verify
    Cross-check suites: every closed form against brute-force
    enumeration, equation residuals, recurrence agreement, totals, and
    bijection statistic exchanges.  Exit status 0 iff every cell passes.
bij
    Apply one of the bijections to a single partition.
equivclasses
    Group all patterns of a given length by their distribution vectors
    over a size range.

Pattern syntax: digit string (``1121``) or comma-separated letters
(``1,1,2,1``); alternatively describe a family member by flags, e.g.
``--family rho-tail --rho 12 --b 1``.

Output is UTF-8 text or JSON (``--format json``); all output is
deterministic (canonical term order, lexicographically sorted classes).

Caching: when the environment variable ``NCPART_CACHE`` names a
directory, brute-force distribution rows are stored there, one file per
(pattern, size), addressed by the SHA-256 of the canonical key.  The
cache is an optimization only — cached and fresh runs print identical
bytes — and ``--no-cache`` bypasses it entirely.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import formulas, stats
from .algebra import MultiPoly, TruncatedSeries
from .bijections import map_descent_code, map_equiv, map_f, map_g, map_runrev
from .core import (
    DEFAULT_ENUM_LIMIT,
    Generic,
    PatternFamily,
    RhoTail,
    Run,
    RunAscent,
    RunStaircase,
    Sandwich,
    StaircaseTail,
    SubwordPattern,
    as_pattern,
    classify_pattern,
    enumerate_nc,
    format_sequence,
    iter_nc,
    parse_sequence,
)
from .errors import LimitExceeded, NcpartError, UnsupportedFamily
from .recurrence import recurrence_table, staircase_series_by_recurrence
from .stats import count_subword

__all__ = ["RunConfig", "build_parser", "entry", "run_verify_target"]

#: Hard ceiling on requested series orders.
MAX_ORDER = 24

_FAMILY_NAMES = (
    "run",
    "run-ascent",
    "staircase-tail",
    "run-staircase",
    "sandwich",
    "rho-tail",
)

_FAMILY_FLAGS: dict[str, tuple[str, ...]] = {
    "run": ("a",),
    "run-ascent": ("a",),
    "staircase-tail": ("m", "a"),
    "run-staircase": ("a", "m"),
    "sandwich": ("a", "rho", "b"),
    "rho-tail": ("rho", "b"),
}

_VERIFY_TARGETS = (
    "table1",
    "thm2.1",
    "thm2.4",
    "thm2.7",
    "thm3.3",
    "thm3.3-joint",
    "lemma3.1",
    "totals",
    "thm3.5",
)

_VERIFY_DEFAULT_ORDER: dict[str, int] = {
    "table1": 13,
    "thm2.1": 11,
    "thm2.4": 13,
    "thm2.7": 13,
    "thm3.3": 13,
    "thm3.3-joint": 10,
    "lemma3.1": 11,
    "totals": 13,
    "thm3.5": 13,
}

_POOL_WORKERS = max(1, min(4, os.cpu_count() or 1))


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RunConfig:
    """One parsed invocation: subcommand plus every relevant option."""

    subcommand: str
    pattern: str | None = None
    family: str | None = None
    a: int | None = None
    b: int | None = None
    m: int | None = None
    rho: str | None = None
    n: int | None = None
    order: int | None = None
    method: str | None = None
    v_value: Fraction | None = None
    fmt: str = "text"
    cache_dir: str | None = None
    out: str | None = None
    target: str | None = None
    map_name: str | None = None
    pi: str | None = None
    tau: str | None = None
    tau2: str | None = None
    sigma: str | None = None
    length: int | None = None
    n_range: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.order is not None and not 1 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be between 1 and {MAX_ORDER}")
        if self.n is not None:
            if self.n < 0:
                raise ValueError("n must be >= 0")
            if self.n > DEFAULT_ENUM_LIMIT:
                raise LimitExceeded(
                    f"n = {self.n} exceeds the size limit {DEFAULT_ENUM_LIMIT}"
                )


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    no_cache = getattr(args, "no_cache", False)
    cache_dir = None if no_cache else os.environ.get("NCPART_CACHE") or None
    v_value = getattr(args, "v", None)
    n_range = getattr(args, "n_range", None)
    if n_range is not None:
        n_range = _parse_range(n_range)
    return RunConfig(
        subcommand=args.subcommand,
        pattern=getattr(args, "pattern", None),
        family=getattr(args, "family", None),
        a=getattr(args, "a", None),
        b=getattr(args, "b", None),
        m=getattr(args, "m", None),
        rho=getattr(args, "rho", None),
        n=getattr(args, "n", None),
        order=getattr(args, "order", None),
        method=getattr(args, "method", None),
        v_value=Fraction(v_value) if v_value is not None else None,
        fmt=getattr(args, "fmt", "text"),
        cache_dir=cache_dir,
        out=getattr(args, "out", None),
        target=getattr(args, "target", None),
        map_name=getattr(args, "map_name", None),
        pi=getattr(args, "pi", None),
        tau=getattr(args, "tau", None),
        tau2=getattr(args, "tau2", None),
        sigma=getattr(args, "sigma", None),
        length=getattr(args, "length", None),
        n_range=n_range,
    )


def _parse_range(text: str) -> tuple[int, int]:
    """Parse a size range: ``'2..9'`` or a single size ``'8'``."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 0 or hi < lo:
        raise ValueError(f"invalid size range {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# Pattern resolution
# ---------------------------------------------------------------------------


def _build_family(cfg: RunConfig) -> PatternFamily:
    name = cfg.family
    assert name is not None
    required = _FAMILY_FLAGS[name]
    missing = [flag for flag in required if getattr(cfg, flag) is None]
    if missing:
        flags = ", ".join(f"--{f}" for f in missing)
        raise ValueError(f"family {name!r} needs {flags}")
    if name == "run":
        return Run(cfg.a)
    if name == "run-ascent":
        return RunAscent(cfg.a)
    if name == "staircase-tail":
        return StaircaseTail(cfg.m, cfg.a)
    if name == "run-staircase":
        return RunStaircase(cfg.a, cfg.m)
    if name == "sandwich":
        return Sandwich(cfg.a, parse_sequence(cfg.rho), cfg.b)
    if name == "rho-tail":
        return RhoTail(parse_sequence(cfg.rho), cfg.b)
    raise ValueError(f"unknown family {name!r}")


def _resolve_pattern(cfg: RunConfig) -> tuple[SubwordPattern, PatternFamily]:
    if cfg.pattern is not None and cfg.family is not None:
        raise ValueError("give either --pattern or --family, not both")
    if cfg.pattern is not None:
        pat = as_pattern(cfg.pattern)
        return pat, classify_pattern(pat)
    if cfg.family is None:
        raise ValueError("a pattern is required: --pattern WORD or --family NAME")
    fam = _build_family(cfg)
    return fam.pattern(), fam


def _applicable_methods(family: PatternFamily) -> tuple[str, ...]:
    methods = ["brute"]
    if not isinstance(family, Generic):
        methods.append("closed")
    if isinstance(family, StaircaseTail):
        methods.append("recurrence")
    return tuple(methods)


def _require_method(family: PatternFamily, method: str) -> None:
    methods = _applicable_methods(family)
    if method not in methods:
        raise UnsupportedFamily(
            f"method {method!r} does not apply to this pattern; "
            f"applicable methods: {', '.join(methods)}"
        )


def _closed_series(family: PatternFamily, order: int) -> TruncatedSeries:
    if isinstance(family, Run):
        return formulas.gf_1m(family.a, order)
    if isinstance(family, RunAscent):
        return formulas.gf_1m2(family.a, order)
    if isinstance(family, StaircaseTail):
        return formulas.gf_staircase_tail(family.m, family.a, order)
    if isinstance(family, RunStaircase):
        # Shares its distribution with the mirrored staircase-tail pattern.
        return formulas.gf_staircase_tail(family.m, family.a, order)
    if isinstance(family, RhoTail):
        return formulas.gf_rho_1b(family.rho, family.b, order)
    if isinstance(family, Sandwich):
        return formulas.gf_1a_rho_1b(family.a, family.rho, family.b, order)
    raise UnsupportedFamily(
        "no closed form covers this pattern; applicable methods: brute"
    )


# ---------------------------------------------------------------------------
# On-disk cache (optimization only)
# ---------------------------------------------------------------------------


def _cache_path(root: str, key_obj: object) -> str:
    blob = json.dumps(key_obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    digest = hashlib.sha256(blob).hexdigest()
    return os.path.join(root, digest[:2], digest + ".json")


def _cache_get(root: str | None, key_obj: object) -> object | None:
    if root is None:
        return None
    try:
        with open(_cache_path(root, key_obj), encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    return payload.get("value")


def _cache_put(root: str | None, key_obj: object, value: object) -> None:
    if root is None:
        return
    path = _cache_path(root, key_obj)
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"key": key_obj, "value": value}, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        pass


def _row_key(word: tuple[int, ...], n: int) -> dict:
    return {"kind": "dist-row", "pattern": list(word), "n": n}


def _brute_rows(cfg: RunConfig, pattern: SubwordPattern, n_max: int) -> list[MultiPoly]:
    """Brute-force distribution rows 0..n_max, through the cache if enabled."""
    root = cfg.cache_dir
    if root is None:
        return stats.distribution_rows(n_max, pattern)
    rows: list[MultiPoly | None] = []
    for n in range(n_max + 1):
        value = _cache_get(root, _row_key(pattern.word, n))
        rows.append(MultiPoly.from_json_obj(value) if value is not None else None)
    if any(row is None for row in rows):
        fresh = stats.distribution_rows(n_max, pattern)
        for n, row in enumerate(rows):
            if row is None:
                _cache_put(root, _row_key(pattern.word, n), fresh[n].to_json_obj())
                rows[n] = fresh[n]
    return rows  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _output(cfg: RunConfig, lines: Sequence[str], obj: object) -> None:
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        for line in lines:
            print(line)


def _poly_total(poly: MultiPoly) -> int:
    """d/dq at q=1 of a one-marker distribution polynomial."""
    total = Fraction(0)
    for exps, coeff in poly.items():
        total += coeff * exps[0]
    assert total.denominator == 1
    return int(total)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_enum(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ValueError("enum needs --n")
    parts = [format_sequence(pi.letters) for pi in enumerate_nc(cfg.n)]
    obj = {"n": cfg.n, "count": len(parts), "partitions": parts}
    _output(cfg, parts, obj)
    return 0


def _single_or_series(cfg: RunConfig) -> tuple[int | None, int | None]:
    if (cfg.n is None) == (cfg.order is None):
        raise ValueError("give exactly one of --n and --order")
    return cfg.n, cfg.order


def _distribution_poly(
    cfg: RunConfig, pattern: SubwordPattern, family: PatternFamily, method: str, n: int
) -> MultiPoly:
    if method == "brute":
        return _brute_rows(cfg, pattern, n)[n]
    if method == "closed":
        return _closed_series(family, n + 1).coefficient(n)
    assert method == "recurrence"
    return staircase_series_by_recurrence(family.m, family.a, n + 1).coefficient(n)


def _distribution_series(
    cfg: RunConfig,
    pattern: SubwordPattern,
    family: PatternFamily,
    method: str,
    order: int,
) -> TruncatedSeries:
    if method == "brute":
        rows = _brute_rows(cfg, pattern, order - 1)
        return TruncatedSeries.from_x_poly(dict(enumerate(rows)), order)
    if method == "closed":
        return _closed_series(family, order)
    assert method == "recurrence"
    return staircase_series_by_recurrence(family.m, family.a, order)


def cmd_dist(cfg: RunConfig) -> int:
    pattern, family = _resolve_pattern(cfg)
    method = cfg.method or "brute"
    _require_method(family, method)
    n, order = _single_or_series(cfg)
    text = format_sequence(pattern.word)
    if n is not None:
        poly = _distribution_poly(cfg, pattern, family, method, n)
        obj = {
            "pattern": text,
            "n": n,
            "method": method,
            "distribution": poly.to_json_obj(),
        }
        _output(cfg, [str(poly)], obj)
    else:
        series = _distribution_series(cfg, pattern, family, method, order)
        obj = {
            "pattern": text,
            "order": order,
            "method": method,
            "series": series.to_json_obj(),
        }
        _output(cfg, [str(series)], obj)
    return 0


def cmd_series(cfg: RunConfig) -> int:
    pattern, family = _resolve_pattern(cfg)
    if cfg.order is None:
        raise ValueError("series needs --order")
    method = cfg.method or "closed"
    text = format_sequence(pattern.word)
    if cfg.v_value is not None:
        if method != "closed" or not isinstance(family, StaircaseTail):
            raise ValueError(
                "--v applies only to the closed staircase-tail series"
            )
        series = formulas.gf_staircase_joint_rep(
            family.m, family.a, cfg.order, v_value=cfg.v_value
        )
        obj = {
            "pattern": text,
            "order": cfg.order,
            "method": method,
            "v_value": str(cfg.v_value),
            "series": series.to_json_obj(),
        }
        _output(cfg, [str(series)], obj)
        return 0
    _require_method(family, method)
    series = _distribution_series(cfg, pattern, family, method, cfg.order)
    obj = {
        "pattern": text,
        "order": cfg.order,
        "method": method,
        "series": series.to_json_obj(),
    }
    _output(cfg, [str(series)], obj)
    return 0


def cmd_total(cfg: RunConfig) -> int:
    pattern, family = _resolve_pattern(cfg)
    if cfg.n is None:
        raise ValueError("total needs --n")
    method = cfg.method or "auto"
    if method == "auto":
        method = "closed" if "closed" in _applicable_methods(family) else "brute"
    if method == "closed":
        _require_method(family, "closed")
        total = formulas.total_occurrences(family, cfg.n)
    else:
        total = _poly_total(_brute_rows(cfg, pattern, cfg.n)[cfg.n])
    obj = {
        "pattern": format_sequence(pattern.word),
        "n": cfg.n,
        "method": method,
        "total": total,
    }
    _output(cfg, [str(total)], obj)
    return 0


def cmd_bij(cfg: RunConfig) -> int:
    if cfg.pi is None:
        raise ValueError("bij needs --pi")
    name = cfg.map_name
    params: dict[str, object] = {}
    if name in ("f", "equiv"):
        if cfg.tau is None or cfg.tau2 is None:
            raise ValueError(f"map {name!r} needs --tau and --tau2")
        apply = map_f if name == "f" else map_equiv
        result = apply(cfg.pi, cfg.tau, cfg.tau2)
        params = {"tau": cfg.tau, "tau2": cfg.tau2}
    elif name == "g":
        if cfg.sigma is None or cfg.b is None:
            raise ValueError("map 'g' needs --sigma and --b")
        result = map_g(cfg.pi, cfg.sigma, cfg.b)
        params = {"sigma": cfg.sigma, "b": cfg.b}
    elif name == "runrev":
        if cfg.a is None or cfg.rho is None or cfg.b is None:
            raise ValueError("map 'runrev' needs --a, --rho and --b")
        result = map_runrev(cfg.pi, cfg.a, cfg.rho, cfg.b)
        params = {"a": cfg.a, "rho": cfg.rho, "b": cfg.b}
    elif name == "descent-code":
        result = map_descent_code(cfg.pi)
    else:
        raise ValueError(f"unknown map {name!r}")
    text = format_sequence(result.letters)
    obj = {"map": name, "pi": cfg.pi, **params, "result": text}
    _output(cfg, [text], obj)
    return 0


def _all_patterns(length: int) -> list[tuple[int, ...]]:
    """Every valid pattern word of the given length, lexicographically.

    A valid pattern uses each letter 1..max at least once, in any order.
    """
    out: list[tuple[int, ...]] = []
    for word in itertools.product(range(1, length + 1), repeat=length):
        if set(word) == set(range(1, max(word) + 1)):
            out.append(word)
    return sorted(out)


def cmd_equivclasses(cfg: RunConfig) -> int:
    if cfg.length is None or cfg.n_range is None:
        raise ValueError("equivclasses needs --len and --n")
    lo, hi = cfg.n_range
    if not 1 <= cfg.length <= 5:
        raise ValueError("pattern length must be between 1 and 5")
    if hi > 10:
        raise LimitExceeded("equivalence classes are limited to sizes <= 10")
    words = _all_patterns(cfg.length)
    rows = stats.batch_distribution_rows(hi, words)
    groups: dict[tuple, list[str]] = {}
    for word, word_rows in zip(words, rows):
        key = tuple(tuple(sorted(word_rows[n].items())) for n in range(lo, hi + 1))
        groups.setdefault(key, []).append(format_sequence(word))
    classes = sorted(sorted(members) for members in groups.values())
    obj = {
        "length": cfg.length,
        "n_min": lo,
        "n_max": hi,
        "classes": classes,
    }
    _output(cfg, [" ".join(cls) for cls in classes], obj)
    return 0


# ---------------------------------------------------------------------------
# Verification targets
# ---------------------------------------------------------------------------


def _jsonable(value: object) -> object:
    if isinstance(value, MultiPoly):
        return value.to_json_obj()
    if isinstance(value, TruncatedSeries):
        return value.to_json_obj()
    return value


def _cell(params: dict, n: int | None, ok: bool, expected: object, actual: object) -> dict:
    return {
        "params": params,
        "n": n,
        "status": "pass" if ok else "fail",
        "expected": _jsonable(expected),
        "actual": _jsonable(actual),
    }


def _series_equal_cell(
    params: dict, first: TruncatedSeries, second: TruncatedSeries
) -> dict:
    diff = first - second
    val = diff.valuation()
    return _cell(
        params,
        None,
        val is None,
        [],
        [] if val is None else diff.coefficient(val),
    )


Group = Callable[[], list[dict]]


def _groups_table1(order: int) -> list[Group]:
    return [lambda: formulas.verify_table1(order)["cells"]]


_Q_MONO = MultiPoly({(1, 0, 0): Fraction(1)})


def _groups_joint(order: int) -> list[Group]:
    n_cap = min(order - 1, 10)
    groups: list[Group] = []

    def coefficient_group(a: int, b: int) -> Group:
        def run() -> list[dict]:
            series = formulas.gf_joint_1a_1b2(a, b, order)
            eq_a, eq_b, eq_c = formulas.joint_quadratic(a, b, order)
            residual = eq_a * series * series - eq_b * series + eq_c
            val = residual.valuation()
            cells = [
                _cell(
                    {"a": a, "b": b, "check": "equation"},
                    None,
                    val is None,
                    [],
                    [] if val is None else residual.coefficient(val),
                )
            ]
            rows = stats.joint_rows(n_cap, (1,) * a, (1,) * b + (2,))
            for n in range(n_cap + 1):
                actual = series.coefficient(n)
                cells.append(
                    _cell(
                        {"a": a, "b": b, "check": "coefficient"},
                        n,
                        rows[n] == actual,
                        rows[n],
                        actual,
                    )
                )
            return cells

        return run

    def specialization_group(m: int) -> Group:
        def run() -> list[dict]:
            run_side = formulas.gf_joint_1a_1b2(m, 1, order).substitute(
                q=Fraction(1), p=_Q_MONO
            )
            ascent_side = formulas.gf_joint_1a_1b2(1, m, order).substitute(
                p=Fraction(1)
            )
            return [
                _series_equal_cell(
                    {"m": m, "check": "specialize-to-run"},
                    formulas.gf_1m(m, order),
                    run_side,
                ),
                _series_equal_cell(
                    {"m": m, "check": "specialize-to-run-ascent"},
                    formulas.gf_1m2(m, order),
                    ascent_side,
                ),
            ]

        return run

    for a, b in ((1, 1), (2, 1), (2, 2), (3, 2), (2, 3)):
        groups.append(coefficient_group(a, b))
    for m in (1, 2, 3, 4):
        groups.append(specialization_group(m))
    return groups


def _groups_rho_tail(order: int) -> list[Group]:
    cases = (("1", 2), ("11", 1), ("12", 1), ("1", 3), ("12", 2))
    n_cap = min(order - 1, 12)
    groups: list[Group] = []

    def case_group(rho: str, b: int) -> Group:
        def run() -> list[dict]:
            fam = RhoTail(parse_sequence(rho), b)
            series = formulas.gf_rho_1b(rho, b, order)
            rows = stats.distribution_rows(n_cap, fam.pattern())
            text = format_sequence(fam.pattern().word)
            return [
                _cell(
                    {"pattern": text, "check": "coefficient"},
                    n,
                    rows[n] == series.coefficient(n),
                    rows[n],
                    series.coefficient(n),
                )
                for n in range(n_cap + 1)
            ]

        return run

    def invariance_group() -> list[dict]:
        by_len: dict[int, list[tuple[str, int]]] = {}
        for rho, b in cases:
            by_len.setdefault(len(parse_sequence(rho)) + b, []).append((rho, b))
        cells = []
        for _length, members in sorted(by_len.items()):
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    (rho1, b1), (rho2, b2) = members[i], members[j]
                    cells.append(
                        _series_equal_cell(
                            {
                                "first": {"rho": rho1, "b": b1},
                                "second": {"rho": rho2, "b": b2},
                                "check": "length-invariance",
                            },
                            formulas.gf_rho_1b(rho1, b1, order),
                            formulas.gf_rho_1b(rho2, b2, order),
                        )
                    )
        return cells

    for rho, b in cases:
        groups.append(case_group(rho, b))
    groups.append(invariance_group)
    return groups


def _groups_sandwich(order: int) -> list[Group]:
    taus = ("121", "1121", "1211", "1221", "1231")
    n_cap = min(order - 1, 12)
    groups: list[Group] = []

    def case_group(tau: str) -> Group:
        def run() -> list[dict]:
            fam = classify_pattern(tau)
            assert isinstance(fam, Sandwich)
            series = formulas.gf_1a_rho_1b(fam.a, fam.rho, fam.b, order)
            rows = stats.distribution_rows(n_cap, tau)
            return [
                _cell(
                    {"pattern": tau, "check": "coefficient"},
                    n,
                    rows[n] == series.coefficient(n),
                    rows[n],
                    series.coefficient(n),
                )
                for n in range(n_cap + 1)
            ]

        return run

    def symmetry_group() -> list[dict]:
        cells = []
        for a, rho, b in ((2, "1", 1), (3, "1", 1), (2, "11", 1), (2, "12", 1)):
            cells.append(
                _series_equal_cell(
                    {"a": a, "rho": rho, "b": b, "check": "symmetry"},
                    formulas.gf_1a_rho_1b(a, rho, b, order),
                    formulas.gf_1a_rho_1b(b, rho, a, order),
                )
            )
        return cells

    for tau in taus:
        groups.append(case_group(tau))
    groups.append(symmetry_group)
    return groups


def _groups_staircase(order: int) -> list[Group]:
    cases = ((2, 2), (3, 2), (2, 3), (3, 3))
    n_cap = min(order - 1, 12)

    def case_group(m: int, a: int) -> Group:
        def run() -> list[dict]:
            closed = formulas.gf_staircase_tail(m, a, order)
            by_recurrence = staircase_series_by_recurrence(m, a, order)
            rows = stats.distribution_rows(n_cap, StaircaseTail(m, a).pattern())
            cells = []
            for n in range(n_cap + 1):
                cells.append(
                    _cell(
                        {"m": m, "a": a, "check": "closed"},
                        n,
                        rows[n] == closed.coefficient(n),
                        rows[n],
                        closed.coefficient(n),
                    )
                )
                cells.append(
                    _cell(
                        {"m": m, "a": a, "check": "recurrence"},
                        n,
                        rows[n] == by_recurrence.coefficient(n),
                        rows[n],
                        by_recurrence.coefficient(n),
                    )
                )
            return cells

        return run

    return [case_group(m, a) for m, a in cases]


def _groups_staircase_joint(order: int) -> list[Group]:
    m, a = 2, 2
    n_cap = min(order - 1, 9)

    def value_group(v: Fraction) -> Group:
        def run() -> list[dict]:
            series = formulas.gf_staircase_joint_rep(m, a, order, v_value=v)
            rows = stats.rep_joint_rows(n_cap, StaircaseTail(m, a).pattern())
            cells = []
            for n in range(n_cap + 1):
                expected = rows[n].substitute(v=v)
                actual = series.coefficient(n)
                cells.append(
                    _cell(
                        {"m": m, "a": a, "v": str(v), "check": "coefficient"},
                        n,
                        expected == actual,
                        expected,
                        actual,
                    )
                )
            return cells

        return run

    def collapse_group() -> list[dict]:
        return [
            _series_equal_cell(
                {"m": m, "a": a, "check": "collapse-at-one"},
                formulas.gf_staircase_joint_rep(m, a, order, v_value=1),
                formulas.gf_staircase_tail(m, a, order),
            )
        ]

    groups: list[Group] = [
        value_group(Fraction(v)) for v in (0, 2, 3, 1)
    ]
    groups.append(collapse_group)
    return groups


def _groups_refined(order: int) -> list[Group]:
    cases = ((2, 2), (3, 2), (2, 3))
    n_cap = min(order - 1, 10)

    def case_group(m: int, a: int) -> Group:
        def run() -> list[dict]:
            table = recurrence_table(m, a)
            cells = []
            for n in range(a, n_cap + 1):
                report = table.refined_check(n)
                failing = [e for e in report["cells"] if e["status"] != "pass"]
                cells.append(
                    _cell(
                        {"m": m, "a": a, "check": "refined-cells"},
                        n,
                        report["status"] == "pass",
                        [],
                        failing,
                    )
                )
            return cells

        return run

    return [case_group(m, a) for m, a in cases]


def _totals_instances() -> list[PatternFamily]:
    instances: list[PatternFamily] = []
    for m in range(1, 5):
        instances.append(Run(m))
    for m in range(1, 5):
        instances.append(RunAscent(m))
    for length in range(1, 5):
        for rho in enumerate_nc(length):
            for b in range(1, 6 - length):
                try:
                    instances.append(RhoTail(rho.letters, b))
                except NcpartError:
                    continue
    for length in range(1, 4):
        for rho in enumerate_nc(length):
            for a in range(1, 5 - length):
                for b in range(1, 5 - length - a + 1):
                    instances.append(Sandwich(a, rho.letters, b))
    for m in range(2, 5):
        for a in range(2, 7 - m):
            instances.append(StaircaseTail(m, a))
    return instances


def _groups_totals(order: int) -> list[Group]:
    n_cap = min(order - 1, 12)
    instances = _totals_instances()
    patterns = [fam.pattern() for fam in instances]
    rows_all = stats.batch_distribution_rows(n_cap, patterns)

    def instance_group(index: int) -> Group:
        def run() -> list[dict]:
            fam = instances[index]
            text = format_sequence(patterns[index].word)
            cells = []
            for n in range(n_cap + 1):
                expected = formulas.total_occurrences(fam, n)
                actual = _poly_total(rows_all[index][n])
                cells.append(
                    _cell(
                        {"pattern": text, "check": "total"},
                        n,
                        expected == actual,
                        expected,
                        actual,
                    )
                )
            return cells

        return run

    return [instance_group(i) for i in range(len(instances))]


def _groups_equidistribution(order: int) -> list[Group]:
    cases = ((2, 2), (2, 3), (3, 2))
    n_cap = min(order - 1, 12)
    exchange_cap = min(n_cap, 8)

    def case_group(a: int, m: int) -> Group:
        def run() -> list[dict]:
            first = RunStaircase(a, m).pattern()
            second = StaircaseTail(m, a).pattern()
            rows = stats.batch_distribution_rows(n_cap, [first, second])
            cells = [
                _cell(
                    {"a": a, "m": m, "check": "equidistribution"},
                    n,
                    rows[0][n] == rows[1][n],
                    rows[0][n],
                    rows[1][n],
                )
                for n in range(n_cap + 1)
            ]
            mismatches = 0
            for n in range(1, exchange_cap + 1):
                for pi in iter_nc(n):
                    image = map_descent_code(pi)
                    if count_subword(pi, first) != count_subword(
                        image, second
                    ) or count_subword(pi, second) != count_subword(image, first):
                        mismatches += 1
            cells.append(
                _cell(
                    {"a": a, "m": m, "check": "code-reversal-exchange"},
                    None,
                    mismatches == 0,
                    0,
                    mismatches,
                )
            )
            return cells

        return run

    return [case_group(a, m) for a, m in cases]


_TARGET_BUILDERS: dict[str, Callable[[int], list[Group]]] = {
    "table1": _groups_table1,
    "thm2.1": _groups_joint,
    "thm2.4": _groups_rho_tail,
    "thm2.7": _groups_sandwich,
    "thm3.3": _groups_staircase,
    "thm3.3-joint": _groups_staircase_joint,
    "lemma3.1": _groups_refined,
    "totals": _groups_totals,
    "thm3.5": _groups_equidistribution,
}


def run_verify_target(target: str, order: int) -> dict:
    """Run one verification target; the report lists every checked cell."""
    if not 2 <= order <= 16:
        raise ValueError("order must be between 2 and 16")
    groups = _TARGET_BUILDERS[target](order)
    with ThreadPoolExecutor(max_workers=_POOL_WORKERS) as pool:
        cell_lists = list(pool.map(lambda group: group(), groups))
    cells = [cell for cell_list in cell_lists for cell in cell_list]
    status = "pass" if all(c["status"] == "pass" for c in cells) else "fail"
    return {"target": target, "order": order, "status": status, "cells": cells}


def _verify_text(report: dict) -> list[str]:
    cells = report["cells"]
    failed = [c for c in cells if c["status"] != "pass"]
    tag = "pass" if not failed else "FAIL"
    lines = [
        f"target {report['target']}: {tag} "
        f"({len(cells)} cells, {len(failed)} failed)"
    ]
    for cell in failed:
        params = json.dumps(cell["params"], sort_keys=True)
        lines.append(f"  fail {params} n={cell['n']}")
    return lines


def cmd_verify(cfg: RunConfig) -> int:
    target = cfg.target
    if target is None:
        raise ValueError("verify needs --target")
    if target == "all":
        reports = [
            run_verify_target(t, cfg.order or _VERIFY_DEFAULT_ORDER[t])
            for t in _VERIFY_TARGETS
        ]
        status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
        report = {
            "target": "all",
            "order": cfg.order,
            "status": status,
            "reports": reports,
        }
        lines = [line for r in reports for line in _verify_text(r)]
        lines.append(f"verification {'passed' if status == 'pass' else 'failed'}")
    else:
        report = run_verify_target(target, cfg.order or _VERIFY_DEFAULT_ORDER[target])
        status = report["status"]
        lines = _verify_text(report)
        lines.append(f"verification {'passed' if status == 'pass' else 'failed'}")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    _output(cfg, lines, report)
    return 0 if status == "pass" else 1


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncpart",
        description=(
            "Exact enumeration of non-crossing partitions and the "
            "distribution of subword patterns in their canonical sequences."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text", dest="fmt"
    )
    common.add_argument(
        "--no-cache",
        action="store_true",
        dest="no_cache",
        help="bypass the NCPART_CACHE directory",
    )

    pattern_flags = argparse.ArgumentParser(add_help=False)
    pattern_flags.add_argument("--pattern", help="pattern word, e.g. 112 or 1,1,2")
    pattern_flags.add_argument("--family", choices=_FAMILY_NAMES)
    pattern_flags.add_argument("--a", type=int)
    pattern_flags.add_argument("--b", type=int)
    pattern_flags.add_argument("--m", type=int)
    pattern_flags.add_argument("--rho")

    p_enum = sub.add_parser(
        "enum", parents=[common], help="list non-crossing partitions of size n"
    )
    p_enum.add_argument("--n", type=int, required=True)

    p_dist = sub.add_parser(
        "dist",
        parents=[common, pattern_flags],
        help="occurrence-distribution polynomial or series",
    )
    p_dist.add_argument("--n", type=int)
    p_dist.add_argument("--order", type=int)
    p_dist.add_argument(
        "--method", choices=("brute", "closed", "recurrence"), default="brute"
    )

    p_series = sub.add_parser(
        "series",
        parents=[common, pattern_flags],
        help="closed-form generating series of a covered family",
    )
    p_series.add_argument("--order", type=int, required=True)
    p_series.add_argument(
        "--method", choices=("brute", "closed", "recurrence"), default="closed"
    )
    p_series.add_argument(
        "--v",
        help="weight for the smallest repeated letter (staircase-tail only)",
    )

    p_total = sub.add_parser(
        "total",
        parents=[common, pattern_flags],
        help="total occurrences over all partitions of size n",
    )
    p_total.add_argument("--n", type=int, required=True)
    p_total.add_argument(
        "--method", choices=("auto", "closed", "brute"), default="auto"
    )

    p_verify = sub.add_parser(
        "verify", parents=[common], help="run a cross-check suite"
    )
    p_verify.add_argument(
        "--target", choices=_VERIFY_TARGETS + ("all",), required=True
    )
    p_verify.add_argument("--order", type=int)
    p_verify.add_argument("--out", help="write the JSON report to this file")

    p_bij = sub.add_parser(
        "bij", parents=[common], help="apply a bijection to one partition"
    )
    p_bij.add_argument(
        "--map",
        choices=("f", "g", "equiv", "runrev", "descent-code"),
        required=True,
        dest="map_name",
    )
    p_bij.add_argument("--pi", required=True)
    p_bij.add_argument("--tau")
    p_bij.add_argument("--tau2")
    p_bij.add_argument("--sigma")
    p_bij.add_argument("--a", type=int)
    p_bij.add_argument("--b", type=int)
    p_bij.add_argument("--rho")

    p_classes = sub.add_parser(
        "equivclasses",
        parents=[common],
        help="group patterns of one length by distribution vectors",
    )
    p_classes.add_argument("--len", type=int, required=True, dest="length")
    p_classes.add_argument(
        "--n", required=True, dest="n_range", help="size range, e.g. 2..9"
    )

    return parser


_HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "enum": cmd_enum,
    "dist": cmd_dist,
    "series": cmd_series,
    "total": cmd_total,
    "verify": cmd_verify,
    "bij": cmd_bij,
    "equivclasses": cmd_equivclasses,
}


def entry(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _HANDLERS[cfg.subcommand](cfg)
    except (NcpartError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(entry())
