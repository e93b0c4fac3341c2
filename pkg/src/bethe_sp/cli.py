"""
Command-line harness: seeded verification runs and machine-readable reports.

    bethe-sp verify --sites 4 --magnons 2 --checks all --seed 7
    bethe-sp verify --config run.json --format tsv --out report.tsv
    bethe-sp bae --sites 6 --magnons 2
    bethe-sp norm --sites 6 --magnons 2
    bethe-sp scalar-product --xi "0.1,0.2;-0.3,0.4;0.5,0;1,-1" --lambdas "0.2,0.1" --ts "1,1"
    bethe-sp report report.json --format tsv

Every random draw comes from the single ``--seed``; each check gets its own
generator derived from (seed, check name), so selecting a subset of checks
does not change the inputs of the others.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
import time
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import suite
from .bethe_oracle import BRUTE_FORCE_CAP, ScalarProductSpec, brute_force_scalar_product, solve_bae
from .determinants import gaudin_norm, scalar_product_sum
from .params import RATIONAL, TRIGONOMETRIC, ModelParams
from .sampling import random_params
from .tensor_core import DENSE_CAP

SCHEMA = "bethe-sp-report/1"
ORACLE_CAP = 12
SUBSET_CAP = 5


@dataclass(frozen=True)
class Check:
    func: object
    tol: float
    rational_only: bool = False
    site_cap: int | None = ORACLE_CAP   # None: the check does not use N
    magnon_cap: int | None = None
    hard_cap: bool = False              # not lifted by --unsafe-caps
    distinct_xi: bool = False


# Composite checks normalize each part by its own tolerance, so they pass at 1.
CHECKS = {
    "arbitrary-a": Check(suite.arbitrary_a_check, 1e-9, True, magnon_cap=SUBSET_CAP),
    "column-reduction": Check(suite.column_reduction_check, 1.0, True, site_cap=None),
    "commutation": Check(suite.commutation, 1e-11),
    "f-basis": Check(suite.f_basis, 1.0, distinct_xi=True),
    "factorizing": Check(suite.factorizing, 1.0, site_cap=DENSE_CAP, hard_cap=True,
                         distinct_xi=True),
    "gaudin": Check(suite.gaudin_check, 1.0, True),
    "orthogonality": Check(suite.orthogonality_check, 1e-8, True),
    "phi-m": Check(suite.phi_m_check, 1e-9, True, site_cap=None, magnon_cap=ORACLE_CAP),
    "residue": Check(suite.residue_check, 1e-6, True, site_cap=None, magnon_cap=SUBSET_CAP),
    "rtt": Check(suite.rtt, 1e-11),
    "scalar-sum": Check(suite.scalar_sum_check, 1e-9, True, magnon_cap=SUBSET_CAP),
    "slavnov": Check(suite.slavnov_check, 1.0, True, magnon_cap=SUBSET_CAP),
    "yang-baxter": Check(suite.yang_baxter, 1e-12, site_cap=None),
}


@dataclass
class RunConfig:
    variant: str = RATIONAL
    sites: int = 4
    magnons: int = 2
    eta: complex = 1.0
    xi: object = "random"           # "random", "homogeneous" or a list of complex
    seed: int = 0
    tol: dict = field(default_factory=dict)
    checks: list = field(default_factory=lambda: sorted(CHECKS))
    out: str | None = None
    format: str = "json"
    unsafe_caps: bool = False
    timing: bool = True

    def validate(self):
        if self.variant not in (RATIONAL, TRIGONOMETRIC):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.sites < 1 or self.magnons < 1:
            raise ValueError("sites and magnons must be positive")
        if self.eta == 0:
            raise ValueError("eta must be nonzero")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        unknown = [c for c in list(self.checks) + list(self.tol) if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        for name, tol in self.tol.items():
            if not tol > 0:
                raise ValueError(f"tolerance for {name} must be positive")
        if self.format not in ("json", "tsv"):
            raise ValueError(f"unknown format {self.format!r}")
        if not isinstance(self.xi, str) and len(self.xi) != self.sites:
            raise ValueError(f"{len(self.xi)} inhomogeneities given for {self.sites} sites")
        if isinstance(self.xi, str) and self.xi not in ("random", "homogeneous"):
            raise ValueError(f"unknown xi mode {self.xi!r}")

    def xi_values(self):
        if self.xi == "random":
            return None
        if self.xi == "homogeneous":
            return (0.0,) * self.sites
        return tuple(complex(x) for x in self.xi)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("timing")
        d["checks"] = sorted(set(self.checks))
        d["eta"] = complex(self.eta)
        return d


# ---------------------------------------------------------------------------
# serialization


def to_jsonable(x):
    """Complex numbers become [re, im]; numpy scalars and arrays become plain lists."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_finite(x.real), _finite(x.imag)]
    if isinstance(x, (float, np.floating)):
        return _finite(x)
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _finite(v):
    v = float(v)
    return v if math.isfinite(v) else None


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_complex(text) -> complex:
    """'re,im' pair, a bare real, or Python-style '0.5j' / '0.5i'."""
    if isinstance(text, (list, tuple)):
        return complex(*text)
    if isinstance(text, (int, float, complex)):
        return complex(text)
    text = text.strip()
    if "," in text:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    return complex(text.replace("i", "j"))


def parse_list(value) -> list:
    """'re,im;re,im;...' or an already split sequence."""
    if isinstance(value, str):
        value = [v for v in value.split(";") if v.strip()]
    return [parse_complex(v) for v in value]


def parse_xi(value):
    if isinstance(value, str) and value in ("random", "homogeneous"):
        return value
    return parse_list(value)


def parse_tol(items) -> dict:
    """NAME=VALUE pairs; a bare VALUE applies to every check."""
    if isinstance(items, dict):
        return {k: float(v) for k, v in items.items()}
    out = {}
    for item in items or ():
        if "=" in item:
            name, v = item.split("=", 1)
            out[name.strip()] = float(v)
        else:
            out.update({name: float(item) for name in CHECKS})
    return out


def parse_checks(value) -> list:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    value = [v.strip() for v in value]
    if value == ["all"]:
        return sorted(CHECKS)
    if value == ["none"]:
        return []
    return value


# ---------------------------------------------------------------------------
# running


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def inputs_digest(config: RunConfig, name: str) -> str:
    key = {"check": name, "variant": config.variant, "sites": config.sites, "magnons": config.magnons,
           "eta": config.eta, "xi": config.xi, "seed": config.seed}
    return hashlib.sha256(dumps(key).encode()).hexdigest()[:16]


def _skip_reason(config: RunConfig, check: Check):
    if check.rational_only and config.variant != RATIONAL:
        return "skipped: rational only"
    xi = config.xi_values()
    if check.distinct_xi and xi is not None and len(set(xi)) < len(xi):
        return "skipped: needs distinct xi"
    if config.unsafe_caps and not check.hard_cap:
        return None
    if check.site_cap is not None and config.sites > check.site_cap:
        return "skipped: cap"
    if check.magnon_cap is not None and config.magnons > check.magnon_cap:
        return "skipped: cap"
    return None


def run_check(config: RunConfig, name: str) -> dict:
    check = CHECKS[name]
    tol = config.tol.get(name, check.tol)
    record = {"name": name, "inputs_digest": inputs_digest(config, name), "tolerance": tol,
              "defect": None, "values": {}, "status": "skipped", "reason": "", "wall_time": 0.0}
    reason = _skip_reason(config, check)
    if reason:
        record["reason"] = reason
        return record
    start = time.perf_counter()
    try:
        result = check.func(check_rng(config.seed, name), n=config.sites, m=config.magnons,
                            variant=config.variant, eta=config.eta, xi=config.xi_values())
    except Exception as exc:  # noqa: BLE001  failures are reported, not raised
        record.update(status="fail", reason=f"error: {type(exc).__name__}: {exc}")
    else:
        defect = float(result.pop("defect"))
        record["values"] = result
        if not math.isfinite(defect):
            record.update(status="fail", reason="non-finite defect")
        else:
            record.update(defect=defect, status="pass" if defect < tol else "fail")
    if config.timing:
        record["wall_time"] = round(time.perf_counter() - start, 6)
    return record


def run_suite(config: RunConfig) -> dict:
    config.validate()
    records = [run_check(config, name) for name in sorted(set(config.checks))]
    counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "skipped")}
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "config": config.echo(),
        "checks": records,
        "summary": {"total": len(records), "passed": counts["pass"], "failed": counts["fail"],
                    "skipped": counts["skipped"]},
    }


def report_ok(report: dict) -> bool:
    return report["summary"]["failed"] == 0


TSV_COLUMNS = ("name", "status", "defect", "tolerance", "wall_time", "inputs_digest", "reason")


def emit_report(report: dict, fmt: str = "json", path=None) -> str:
    """Serialize a report as canonical JSON or TSV; write it to ``path`` if given."""
    if fmt == "json":
        text = dumps(report)
    elif fmt == "tsv":
        buf = io.StringIO()
        buf.write("\t".join(TSV_COLUMNS) + "\n")
        for r in report["checks"]:
            row = ["" if r[c] is None else (repr(r[c]) if isinstance(r[c], float) else str(r[c]))
                   for c in TSV_COLUMNS]
            buf.write("\t".join(row) + "\n")
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None and str(path) != "-":
        Path(path).write_text(text)
    return text


# ---------------------------------------------------------------------------
# argument handling

FLAG_KEYS = ("variant", "sites", "magnons", "eta", "xi", "seed", "tol", "checks", "out", "format",
             "unsafe_caps")


def _common(p):
    p.add_argument("--config", help="JSON file with any of the flag values")
    p.add_argument("--variant", choices=(RATIONAL, TRIGONOMETRIC))
    p.add_argument("--sites", "-N", type=int)
    p.add_argument("--magnons", "-M", type=int)
    p.add_argument("--eta", help="complex as 're,im' (default 1,0)")
    p.add_argument("--xi", help="'random', 'homogeneous' or 're,im;re,im;...'")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "tsv"))


def build_parser():
    parser = argparse.ArgumentParser(prog="bethe-sp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE")
    p.add_argument("--checks", help="comma separated check names, 'all' or 'none'")
    p.add_argument("--unsafe-caps", action="store_true", default=None,
                   help="run oracle checks beyond the size caps")
    p.add_argument("--no-timing", action="store_true", help="report zero wall times")

    p = sub.add_parser("scalar-product", help="brute-force and subset-sum scalar product")
    _common(p)
    p.add_argument("--lambdas", required=True, metavar="RE,IM;...")
    p.add_argument("--ts", required=True, metavar="RE,IM;...")

    p = sub.add_parser("bae", help="solve the Bethe equations")
    _common(p)

    p = sub.add_parser("norm", help="Gaudin norm of a Bethe state")
    _common(p)

    p = sub.add_parser("report", help="re-emit a saved JSON report")
    p.add_argument("path")
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    return parser


def config_from_args(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(json.loads(Path(args.config).read_text()))
        values = {k.replace("-", "_"): v for k, v in values.items()}
        bad = set(values) - set(FLAG_KEYS)
        if bad:
            raise ValueError(f"unknown config keys: {', '.join(sorted(bad))}")
    for key in FLAG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig()
    for key, v in values.items():
        if key == "eta":
            v = parse_complex(v)
        elif key == "xi":
            v = parse_xi(v)
        elif key == "tol":
            v = parse_tol(v)
        elif key == "checks":
            v = parse_checks(v)
        setattr(cfg, key, v)
    if "sites" not in values and not isinstance(cfg.xi, str):
        cfg.sites = len(cfg.xi)
    cfg.timing = not getattr(args, "no_timing", False)
    return cfg


def _model(cfg: RunConfig) -> ModelParams:
    xi = cfg.xi_values()
    if xi is None:
        return random_params(np.random.default_rng(cfg.seed), cfg.sites, cfg.variant, cfg.eta)
    return ModelParams(cfg.variant, cfg.eta, xi)


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "report":
        report = json.loads(Path(args.path).read_text())
        if report.get("schema") != SCHEMA:
            parser.error(f"unsupported report schema {report.get('schema')!r}")
        _write(emit_report(report, args.format), args.out)
        return 0 if report_ok(report) else 1

    try:
        cfg = config_from_args(args)
        cfg.validate()
    except (ValueError, TypeError, OSError) as exc:
        parser.error(str(exc))

    if args.command == "verify":
        report = run_suite(cfg)
        _write(emit_report(report, cfg.format), cfg.out)
        return 0 if report_ok(report) else 1

    if cfg.variant != RATIONAL:
        parser.error(f"{args.command} supports the rational variant only")
    params = _model(cfg)
    out = {"schema": SCHEMA, "command": args.command, "xi": params.xi, "eta": params.eta}
    if args.command == "scalar-product":
        lam, ts = parse_list(args.lambdas), parse_list(args.ts)
        if len(lam) != len(ts):
            parser.error("--lambdas and --ts need the same length")
        spec = ScalarProductSpec(tuple(lam), tuple(ts), params)
        out["lambdas"], out["ts"] = lam, ts
        if params.n_sites <= BRUTE_FORCE_CAP:
            out["brute_force"] = brute_force_scalar_product(spec)
        if len(lam) <= SUBSET_CAP and params.xi_distinct:
            out["subset_sum"] = scalar_product_sum(spec, params.eta)
    else:
        roots = solve_bae(params, cfg.magnons, seed=cfg.seed)
        out["roots"], out["residual"] = roots.roots, roots.residual
        if args.command == "norm":
            out["gaudin"] = gaudin_norm(roots, params.eta)
            if params.n_sites <= BRUTE_FORCE_CAP:
                out["brute_force"] = brute_force_scalar_product(
                    ScalarProductSpec(roots.roots, roots.roots, params))
    _write(dumps(out), cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
