"""Command-line front end.

    orbitlab <command> --input FILE [--out FILE] [--n N] [--lmax L] [--eps E]
             [--window W ...] [--budget DIGITS] [--format json|csv]

Commands: orbit, member, decompose, depend, torus, heights, certify.
Exit status is 0 on success, 2 when a certificate or model check fails, and 1
on errors (error reports are JSON with an ``error`` object).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import heights as hts
from . import structure as st
from .dynamics import INF, Completed, format_extended, orbit_sequence
from .errors import OrbitLabError, ParseError
from .exact import PrimeSet, format_rational, prime_support
from .holonomic import expand
from .parse import Document, parse_system

SCHEMA_VERSION = 1
DEFAULT_BUDGET = 100_000
MIN_BUDGET = 1_000
DEFAULT_N = 200
COMMANDS = ("orbit", "member", "decompose", "depend", "torus", "heights", "certify")

log = logging.getLogger("orbitlab")


class UsageError(OrbitLabError):
    pass


@dataclass
class RunConfig:
    command: str
    input: Path
    n: int = DEFAULT_N
    lmax: int = st.DEFAULT_LMAX
    eps: Fraction = st.DEFAULT_EPS
    windows: list[int] = field(default_factory=list)
    budget: int = DEFAULT_BUDGET
    out: Optional[Path] = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n < 1:
            raise UsageError("horizon --n must be at least 1")
        if self.budget < MIN_BUDGET:
            raise UsageError(f"--budget must be at least {MIN_BUDGET} digits")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")

    def params(self) -> dict:
        return {
            "n": self.n,
            "lmax": self.lmax,
            "eps": format_rational(self.eps),
            "tail_fraction": format_rational(st.DEFAULT_TAIL_FRACTION),
            "windows": list(self.windows),
            "budget": self.budget,
            "format": self.format,
        }


class _Outcome(Exception):
    """Carries a finished report plus a nonzero exit status out of a command."""

    def __init__(self, status: int, result: dict):
        self.status = status
        self.result = result


# -- value sources -------------------------------------------------------------------


def _values(doc: Document, cfg: RunConfig) -> tuple[list, dict]:
    """Sequence values ``a_0 .. a_N`` from whichever source the document has."""
    if doc.system is not None:
        sysm = doc.system
        rec = orbit_sequence(sysm.map, sysm.observable, sysm.start, cfg.n, budget=cfg.budget)
        source = {"kind": "system", "halt": rec.halt.to_json()}
        if not isinstance(rec.halt, Completed):
            raise _Outcome(1, {"error": {"type": type(rec.halt).__name__,
                                         "message": "orbit did not complete", **rec.halt.to_json()}})
        return rec.values, source
    if doc.recurrence is not None:
        return expand(doc.recurrence, cfg.n), {"kind": "recurrence", "shift": doc.recurrence.shift}
    if doc.ode is not None:
        return expand(doc.ode, cfg.n), {"kind": "ode"}
    if doc.values is not None:
        return doc.values[: cfg.n + 1], {"kind": "values"}
    raise UsageError("input provides no sequence (map, recurrence, ode or values)")


def _require_group(doc: Document):
    if doc.group is None:
        raise UsageError("this command needs \"generators\"")
    return doc.group


def _prime_set(doc: Document, values) -> PrimeSet:
    if doc.group is not None:
        return doc.group.support
    if doc.primes is not None:
        return PrimeSet.of(doc.primes)
    primes: set[int] = set()
    for v in values:
        if v is not INF and v != 0:
            primes.update(prime_support(v))
    return PrimeSet.of(primes)


def _windows(cfg: RunConfig, n_max: int) -> list[int]:
    if cfg.windows:
        return list(cfg.windows)
    size = n_max + 1
    return sorted({max(1, size // 8), max(1, size // 4), max(1, size // 2)})


# -- commands ---------------------------------------------------------------------------


def cmd_orbit(doc: Document, cfg: RunConfig):
    if doc.system is None:
        raise UsageError("orbit needs a system (\"map\", \"start\")")
    sysm = doc.system
    rec = orbit_sequence(sysm.map, sysm.observable, sysm.start, cfg.n, budget=cfg.budget)
    result = {
        "halt": rec.halt.to_json(),
        "points": [[format_rational(x) for x in p] for p in rec.points],
        "values": [format_extended(v) for v in (rec.values or [])],
    }
    if not isinstance(rec.halt, Completed):
        result["error"] = {"type": type(rec.halt).__name__, "message": "orbit did not complete"}
        raise _Outcome(1, result)
    rows = [[k, format_extended(v)] for k, v in enumerate(rec.values)]
    return result, (["n", "value"], rows)


def cmd_member(doc: Document, cfg: RunConfig):
    G = _require_group(doc)
    values, source = _values(doc, cfg)
    S = st.membership_set(values, G)
    dens = {str(w): format_rational(st.banach_density(S, w)) for w in _windows(cfg, S.n_max)}
    ap = st.ap_decompose(S, cfg.lmax, cfg.eps)
    ap0 = st.ap_decompose(S.with_zeros(), cfg.lmax, cfg.eps)
    result = {
        "source": source,
        "membership": {**S.to_json(), "members": S.members()[: st.LIST_CAP]},
        "window_density": dens,
        "decomposition": ap.to_json(),
        "decomposition_with_zeros": ap0.to_json(),
    }
    rows = [[n, int(b), int(z)] for n, (b, z) in enumerate(zip(S.bits, S.zero_bits))]
    return result, (["n", "member", "zero"], rows)


def cmd_decompose(doc: Document, cfg: RunConfig):
    G = _require_group(doc)
    values, source = _values(doc, cfg)
    traj = st.exponent_trajectories(values, G)
    return {
        "source": source,
        "generators": [format_rational(g) for g in G.generators],
        "exponents": [list(r) for r in traj.rows],
        "torsion": list(traj.torsion),
    }, None


def cmd_depend(doc: Document, cfg: RunConfig):
    values, source = _values(doc, cfg)
    S = _prime_set(doc, values)
    windows = cfg.windows or [doc.system.dim + 1 if doc.system is not None else 2]
    relations = []
    for w in windows:
        found = st.find_dependence(values, w, S)
        lattice = st.dependence_lattice(values, w, S)
        relations.append({
            "window": w,
            "relation": found.to_json() if isinstance(found, st.DependenceRelation) else None,
            "lattice": lattice,
        })
    return {"source": source, "primes": list(S.primes), "results": relations}, None


def cmd_torus(doc: Document, cfg: RunConfig):
    G = _require_group(doc)
    values, source = _values(doc, cfg)
    model = st.torus_model_from_values(values, G)
    if isinstance(model, st.NoFit):
        raise _Outcome(2, {"source": source, "model": None, "fail": {"stage": "fit",
                                                                      "detail": model.reason}})
    check = st.verify_torus_model(model, values, len(values) - 1)
    result = {"source": source, "model": model.to_json()}
    if isinstance(check, st.Verified):
        result["verification"] = {"status": "verified", "horizon": check.horizon}
        return result, None
    result["verification"] = {"status": "failed", "index": check.index,
                              "expected": format_rational(check.expected),
                              "actual": format_extended(check.actual)}
    raise _Outcome(2, result)


def cmd_heights(doc: Document, cfg: RunConfig):
    values, source = _values(doc, cfg)
    hs = hts.height_sequence(values)
    result = {
        "source": source,
        "heights": list(hs),
        "log_heights": [round(math.log(h), 12) for h in hs],
    }
    if len(hs) >= hts.MIN_ENTRIES:
        result["growth"] = hts.growth_classify(hs).to_json()
    if len(values) >= 4:
        S = _prime_set(doc, values)
        result["valuations"] = [hts.valuation_growth(values, p).to_json() for p in S]
    rows = [[n, str(h), repr(round(math.log(h), 12))] for n, h in enumerate(hs)]
    return result, (["n", "height", "log_height"], rows)


def cmd_certify(doc: Document, cfg: RunConfig):
    G = _require_group(doc)
    if doc.recurrence is None:
        raise UsageError("certify needs a recurrence")
    n = max(cfg.n, 4 * cfg.lmax + 8)
    out = st.certify_rational(doc.recurrence, G, n, cfg.lmax)
    if isinstance(out, st.CertificateFailure):
        raise _Outcome(2, {"certificate": None, "fail": out.to_json()})
    return {"certificate": out.to_json()}, None


HANDLERS = {
    "orbit": cmd_orbit,
    "member": cmd_member,
    "decompose": cmd_decompose,
    "depend": cmd_depend,
    "torus": cmd_torus,
    "heights": cmd_heights,
    "certify": cmd_certify,
}


# -- plumbing ---------------------------------------------------------------------------


def _render_json(cfg: RunConfig, status: int, result: dict) -> str:
    report = {"schema": SCHEMA_VERSION, "command": cfg.command, "params": cfg.params(),
              "status": status, **result}
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns the exit status and the report text."""
    table = None
    try:
        doc = parse_system(cfg.input.read_text(encoding="utf-8"))
        result, table = HANDLERS[cfg.command](doc, cfg)
        status = 0
    except _Outcome as out:
        status, result = out.status, out.result
    except ParseError as exc:
        status = 1
        result = {"error": {"type": exc.kind, "message": str(exc), "line": exc.line,
                            "column": exc.column, "token": exc.token, "field": exc.where}}
    except (OrbitLabError, ValueError, KeyError, OSError) as exc:
        status = 1
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if cfg.format == "csv" and status == 0:
        if table is None:
            raise UsageError(f"{cfg.command} has no CSV export")
        return status, _render_csv(*table)
    return status, _render_json(cfg, status, result)


class _ArgumentParser(argparse.ArgumentParser):
    # exit status 2 is reserved for failed certificates
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="orbitlab", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, type=Path)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--n", type=int, default=DEFAULT_N, help="horizon (largest index)")
    ap.add_argument("--lmax", type=int, default=st.DEFAULT_LMAX)
    ap.add_argument("--eps", type=Fraction, default=st.DEFAULT_EPS)
    ap.add_argument("--window", type=int, action="append", default=[],
                    help="density window (member) or dependence window (depend); repeatable")
    ap.add_argument("--budget", type=int, default=None,
                    help=f"digit budget for orbit values (default $ORBITLAB_BUDGET or {DEFAULT_BUDGET})")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--log", type=Path, help="sidecar log file (timestamps live only here)")
    return ap


def _usage_error(exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": {"type": "UsageError", "message": str(exc)}}) + "\n")
    return 1


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _usage_error(exc)
    handler = logging.FileHandler(args.log) if args.log else logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    budget = args.budget
    if budget is None:
        budget = int(os.environ.get("ORBITLAB_BUDGET", DEFAULT_BUDGET))
    try:
        cfg = RunConfig(args.command, args.input, args.n, args.lmax, args.eps, args.window,
                        budget, args.out, args.format)
        status, text = run(cfg)
    except UsageError as exc:
        log.removeHandler(handler)
        return _usage_error(exc)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    log.info("%s on %s finished with status %d", args.command, args.input, status)
    log.removeHandler(handler)
    return status


if __name__ == "__main__":
    sys.exit(main())
