"""Command-line entry point.

Each command reads a JSON config, writes ``report.json`` (schema version 1)
and, for tabular results, a CSV file into ``--out``.  Exit codes: 0 success,
2 violated hypothesis or invalid input, 3 numeric failure, 4 configuration
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import ellipticity, frames, ifs, reverse, transforms, two_translate
from .config import JobConfig, load_config
from .errors import AffineFramesError, ConfigError
from .geometry import Domain
from .kernel import TWO_PI, reduced_phase
from .surd import Surd

__all__ = ["main", "run", "load_report", "SCHEMA_VERSION", "COMMANDS"]

SCHEMA_VERSION = 1
CSV_COLUMNS = {
    "two-translate": ("lambda", "theta", "r_minus", "r_plus"),
    "iterate": ("j", "S_j", "trunc_err"),
    "muhat": ("lambda", "re", "im", "abs_err"),
}


def _enc(x):
    """JSON-ready form: exact numbers become strings, tuples lists."""
    if isinstance(x, (Fraction, Surd)):
        return str(x)
    if isinstance(x, complex):
        return {"re": _enc(x.real), "im": _enc(x.imag)}
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(format(x, ".17g"))
    if isinstance(x, (tuple, list)):
        return [_enc(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    return x


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (tuple, list)):
        return " ".join(_fmt(v) for v in x)
    return str(x)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _spectrum_dict(spec) -> dict:
    if hasattr(spec, "generators") and hasattr(spec, "offsets") and not hasattr(spec, "points"):
        return {"lattice": _enc(spec.generators), "offsets": _enc(spec.offsets)}
    return {"points": _enc(spec.points)}


# commands --------------------------------------------------------------------

def _elliptic(cfg: JobConfig, opts):
    rep = ellipticity.build_report(cfg.vectors("B"), cfg.vectors("L"))
    return rep.to_dict(), None


def _extend(cfg: JobConfig, opts):
    rep = ellipticity.build_report(cfg.vectors("B"), cfg.vectors("L"))
    consts = cfg.vector("constants")
    if len(consts) != 2:
        raise ConfigError("constants: expected [k, K]")
    k, K = consts
    spec = cfg.spectrum("spectrum", None)
    cert = ellipticity.propagate_constants(k, K, rep, spec)
    out = {"report": rep.to_dict(), "certificate": cert.to_dict()}
    if cfg.has("domain"):
        out["domain"] = {"translates": _enc(cfg.domain("domain").translate_by(rep.B).translates)}
    return out, None


def _two_translate(cfg: JobConfig, opts):
    problem = two_translate.TwoTranslateProblem(
        cfg.domain("domain"), cfg.spectrum("spectrum"), cfg.domain("domain2"),
        cfg.spectrum("spectrum2"), cfg.vector("a"), cfg.vector("beta", None))
    radius = opts.radius if opts.radius is not None else cfg.raw("radius", two_translate.DEFAULT_RADIUS)
    base = cfg.vector("constants", None)
    ext = cfg.vector("constants2", None)
    res = two_translate.spectral_resolution(problem, radius, base, ext)
    rows = []
    for lam, rm, rp in res.entries:
        theta = TWO_PI * reduced_phase(problem.phase(lam))
        rows.append((lam if len(lam) > 1 else lam[0], theta, rm, rp))
    out = {"decision": res.decision.to_dict(), "mode": res.mode, "alpha": str(res.alpha),
           "certificate": res.certificate.to_dict() if res.certificate else None,
           "union_disjoint": res.union_disjoint}
    return out, ("two-translate.csv", _csv_text(CSV_COLUMNS["two-translate"], rows))


def _iterate(cfg: JobConfig, opts):
    depth = opts.depth if opts.depth is not None else cfg.integer("depth", 8)
    state = ifs.start(cfg.matrix("R"), cfg.vectors("B"), cfg.vectors("L"), cfg.domain("domain", None))
    t = cfg.vector("t", (0,) * state.sigma.dim)
    lb = ifs.lower_bound_estimate(state, t, max(depth, 1))
    rows = [e for e in lb.series.entries if e[0] <= depth]
    out = {"depth": depth, "epsilon": lb.epsilon, "norm_sq": lb.norm_sq,
           "norm_exact": lb.norm_exact}
    return out, ("iterate.csv", _csv_text(CSV_COLUMNS["iterate"], rows))


def _muhat(cfg: JobConfig, opts):
    system = ifs.AffineSystem(cfg.matrix("R"), cfg.vectors("B"), "sigma")
    depth = opts.depth if opts.depth is not None else cfg.raw("depth", None)
    initial = cfg.domain("domain", None)
    if depth is not None and initial is None:
        initial = Domain((0,) * system.dim, (1,) * system.dim)
    rows = []
    for lam in cfg.vectors("lambdas"):
        v = transforms.mu_hat_n(system, initial, depth, lam)
        rows.append((lam if len(lam) > 1 else lam[0], v.value.real, v.value.imag, v.abs_error_bound))
    out = {"depth": depth if depth is not None else "limit", "count": len(rows)}
    return out, ("muhat.csv", _csv_text(CSV_COLUMNS["muhat"], rows))


def _reverse(cfg: JobConfig, opts):
    radius = opts.radius if opts.radius is not None else cfg.raw("radius", 32)
    res = reverse.reverse_spectrum(cfg.domain("domain"), cfg.vectors("B"), cfg.spectrum("spectrum"),
                                   cfg.vector("constants"), radius)
    return {"spectrum": _spectrum_dict(res.spectrum), "lattice_form": res.lattice_form,
            "certificate": res.certificate.to_dict(),
            "violations": [[m, _enc(w)] for m, w in res.violations],
            "zero_witness_count": len(res.zero_witnesses)}, None


def _classify1d(cfg: JobConfig, opts):
    radius = opts.radius if opts.radius is not None else cfg.raw("radius", 32)
    res = reverse.classify_1d(cfg.vectors("B"), cfg.spectrum("spectrum"), radius)
    return {"valid": res.valid, "L": _enc(res.L), "scope": res.scope,
            "violations": [{"code": v.code, "message": v.message, "witness": _enc(v.witness)}
                           for v in res.violations]}, None


def _search_l(cfg: JobConfig, opts):
    found = reverse.search_L(cfg.vectors("B"), cfg.integer("q"))
    return {"candidates": _enc(found), "count": len(found)}, None


def _framebounds(cfg: JobConfig, opts):
    radius = opts.radius if opts.radius is not None else cfg.raw("radius", 16)
    grid = opts.grid if opts.grid is not None else cfg.integer("grid", 64)
    est = frames.estimate_bounds(cfg.domain("domain"), cfg.spectrum("spectrum"), grid, radius,
                                 threads=opts.threads)
    return est.to_dict(), None


def _scalecheck(cfg: JobConfig, opts):
    radius = opts.radius if opts.radius is not None else cfg.raw("radius", 16)
    grid = opts.grid if opts.grid is not None else cfg.integer("grid", 64)
    chk = frames.scale_check(cfg.matrix("R"), cfg.domain("domain"), cfg.spectrum("spectrum"),
                             grid, radius, threads=opts.threads)
    return {"before": chk.before.to_dict(), "after": chk.after.to_dict(), "det": chk.det,
            "relative_difference": chk.relative_difference, "agrees_5pct": chk.agrees()}, None


COMMANDS = {
    "elliptic": _elliptic,
    "extend": _extend,
    "two-translate": _two_translate,
    "iterate": _iterate,
    "muhat": _muhat,
    "reverse": _reverse,
    "classify1d": _classify1d,
    "searchL": _search_l,
    "framebounds": _framebounds,
    "scalecheck": _scalecheck,
}


# driver ------------------------------------------------------------------------

def _write(out_dir: Path, command: str, status: int, result, error=None, csv_item=None):
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {"schema_version": SCHEMA_VERSION, "command": command, "exit_code": status,
              "result": _enc(result)}
    if error is not None:
        report["error"] = error
    if csv_item is not None:
        name, text = csv_item
        (out_dir / name).write_text(text, encoding="utf-8")
        report["csv"] = name
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                         encoding="utf-8")


def run(command: str, cfg: JobConfig, opts) -> int:
    out_dir = Path(opts.out)
    try:
        handler = COMMANDS.get(command)
        if handler is None:
            raise ConfigError(f"unknown command {command!r}")
        result, csv_item = handler(cfg, opts)
    except AffineFramesError as exc:
        kind = type(exc).__name__
        witness = getattr(exc, "witness", None)
        print(f"{command}: {kind}: {exc}", file=sys.stderr)
        try:
            _write(out_dir, command, exc.exit_code, None,
                   {"type": kind, "message": str(exc), "witness": _enc(witness)})
        except OSError:
            pass
        return exc.exit_code
    _write(out_dir, command, 0, result, csv_item=csv_item)
    return 0


def load_report(path) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported report schema {data.get('schema_version')!r}")
    for key in ("command", "exit_code", "result"):
        if key not in data:
            raise ConfigError(f"report lacks {key!r}")
    return data


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="affine-frames",
                                description="Frame certificates for affine fractal pairs.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON job description")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--radius", type=float, help="spectrum truncation radius")
    p.add_argument("--depth", type=int, help="iteration depth")
    p.add_argument("--grid", type=int, help="quadrature points per cell edge")
    p.add_argument("--seed", type=int, default=0, help="64-bit random seed")
    p.add_argument("--threads", type=int, help="worker threads (env AFFINE_FRAMES_THREADS)")
    return p


def main(argv=None) -> int:
    opts = _parser().parse_args(argv)
    if opts.radius is not None and opts.radius == int(opts.radius):
        opts.radius = int(opts.radius)
    if opts.threads is None:
        try:
            opts.threads = frames.default_threads()
        except AffineFramesError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return ConfigError.exit_code
    if opts.threads < 1 or not 0 <= opts.seed < 2**64:
        print("error: --threads must be >= 1 and --seed a 64-bit unsigned integer", file=sys.stderr)
        return ConfigError.exit_code
    try:
        cfg = load_config(opts.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return run(opts.command, cfg, opts)


if __name__ == "__main__":
    sys.exit(main())
