"""JSON job configuration.

Numbers are written so that exactness survives: integers, ``"num/den"`` or
decimal strings, JSON decimals (read as the exact decimal written), and
tagged square roots ``{"tag": "sqrt", "of": 2}`` with an optional rational
``"times"`` factor.  Scalars stand for 1-vectors.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .geometry import Domain, FiniteSpectrum, LatticeSpectrum
from .surd import sqrt

__all__ = [
    "load_config",
    "parse_number",
    "parse_vector",
    "parse_vectors",
    "parse_matrix",
    "parse_domain",
    "parse_spectrum",
    "JobConfig",
]


def parse_number(v, where: str = "value"):
    if isinstance(v, bool):
        raise ConfigError(f"{where}: booleans are not numbers")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{where}: cannot read {v!r} as a rational")
    if isinstance(v, dict):
        if v.get("tag") != "sqrt" or "of" not in v:
            raise ConfigError(f"{where}: tagged values must look like {{'tag': 'sqrt', 'of': n}}")
        root = sqrt(parse_number(v["of"], where))
        if "times" in v:
            root = root * parse_number(v["times"], where)
        return root
    raise ConfigError(f"{where}: unsupported number {v!r}")


def parse_vector(v, where: str = "vector", dim: int | None = None) -> tuple:
    vec = tuple(parse_number(c, where) for c in v) if isinstance(v, list) else (parse_number(v, where),)
    if dim is not None and len(vec) != dim:
        raise ConfigError(f"{where}: expected dimension {dim}, got {len(vec)}")
    return vec


def parse_vectors(v, where: str, dim: int | None = None) -> tuple:
    if not isinstance(v, list):
        raise ConfigError(f"{where}: expected a list")
    return tuple(parse_vector(x, f"{where}[{i}]", dim) for i, x in enumerate(v))


def parse_matrix(v, where: str = "R") -> tuple:
    if not isinstance(v, list):
        return ((parse_number(v, where),),)
    rows = tuple(parse_vector(r, f"{where} row") for r in v)
    if any(len(r) != len(rows) for r in rows):
        raise ConfigError(f"{where}: matrix must be square")
    return rows


def parse_domain(v, where: str = "domain") -> Domain:
    if not isinstance(v, dict):
        raise ConfigError(f"{where}: expected an object")
    if "interval" in v:
        lo, hi = (parse_number(x, where) for x in v["interval"])
        corner, edges = (lo,), (hi - lo,)
    else:
        try:
            corner = parse_vector(v["corner"], f"{where}.corner")
            edges = parse_vector(v["edges"], f"{where}.edges", len(corner))
        except KeyError as exc:
            raise ConfigError(f"{where}: missing {exc.args[0]!r}")
    translates = parse_vectors(v["translates"], f"{where}.translates", len(corner)) \
        if "translates" in v else None
    return Domain(corner, edges, translates)


def parse_spectrum(v, where: str = "spectrum"):
    if not isinstance(v, dict):
        raise ConfigError(f"{where}: expected an object")
    if "points" in v:
        return FiniteSpectrum(parse_vectors(v["points"], f"{where}.points"))
    if "lattice" in v:
        gens = parse_vectors(v["lattice"], f"{where}.lattice")
        offs = parse_vectors(v["offsets"], f"{where}.offsets", len(gens)) if "offsets" in v else None
        return LatticeSpectrum(gens, offs)
    raise ConfigError(f"{where}: needs 'points' or 'lattice'")


class JobConfig:
    """Parsed configuration with typed accessors; missing keys raise
    :class:`ConfigError` naming the key."""

    def __init__(self, data: dict, source: str = "<config>"):
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        self.data = data
        self.source = source
        dim = data.get("dimension")
        if dim is not None and (not isinstance(dim, int) or dim < 1):
            raise ConfigError("dimension must be a positive integer")
        self.dimension = dim

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default=...):
        if key in self.data:
            return self.data[key]
        if default is ...:
            raise ConfigError(f"missing required key {key!r} in {self.source}")
        return default

    def _dim_check(self, d: int, key: str):
        if self.dimension is not None and d != self.dimension:
            raise ConfigError(f"{key}: dimension {d} differs from declared {self.dimension}")

    def number(self, key, default=...):
        v = self.raw(key, default)
        return v if v is default else parse_number(v, key)

    def vector(self, key, default=...):
        v = self.raw(key, default)
        if v is default:
            return v
        vec = parse_vector(v, key)
        self._dim_check(len(vec), key)
        return vec

    def vectors(self, key, default=...):
        v = self.raw(key, default)
        if v is default:
            return v
        vecs = parse_vectors(v, key)
        if not vecs:
            raise ConfigError(f"{key}: must be nonempty")
        for x in vecs:
            self._dim_check(len(x), key)
        return vecs

    def matrix(self, key, default=...):
        v = self.raw(key, default)
        if v is default:
            return v
        m = parse_matrix(v, key)
        self._dim_check(len(m), key)
        return m

    def domain(self, key, default=...):
        v = self.raw(key, default)
        if v is default:
            return v
        dom = parse_domain(v, key)
        self._dim_check(dom.dim, key)
        return dom

    def spectrum(self, key, default=...):
        v = self.raw(key, default)
        if v is default:
            return v
        spec = parse_spectrum(v, key)
        self._dim_check(spec.dim, key)
        return spec

    def integer(self, key, default=...):
        v = self.raw(key, default)
        if v is default or v is None:
            return v
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{key}: expected an integer")
        return v


def load_config(path) -> JobConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {p} does not exist")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{p}: not valid UTF-8 JSON ({exc})")
    return JobConfig(data, str(p))
