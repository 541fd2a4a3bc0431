"""Flat-file formats: pencil/search/gap-params config and lattice instances.

Config files are INI-style ``key = value`` text::

    [pencil]
    coefficients = 0/1, -23040/1, 21312/1, -6368/1, 828/1, -48/1, 1/1

    [search]
    height = 100
    sieve_primes = 3, 5, 7, 11

    [gap-params]
    c = 1/1
    deg_C = 2

Coefficients are exact ``num/den`` strings, lowest degree first.

Lattice instances are JSON::

    {"rho": 2, "gram": [["2/1", "1/1"], ["1/1", "2/1"]],
     "vectors": [["1/1", "0/1"], ...], "stab_classes": [[0, 1], [2]],
     "params": {"c": "1/1", "deg_C": 2}}

``stab_classes`` and ``params`` are optional.
"""

from __future__ import annotations

import configparser
import json
from pathlib import Path
from typing import Optional

from hyperpencil.exact import RatPoly, format_fraction
from hyperpencil.gap import GapParams, GramLattice, Vector
from hyperpencil.pencil import PencilSpec, new_pencil, paper_example

PRESETS = {"paper-example": paper_example}


class LatticeFormatError(ValueError):
    pass


def parse_coefficients(text: str) -> RatPoly:
    parts = [p.strip() for p in text.replace("\n", ",").split(",") if p.strip()]
    return RatPoly(parts)


def format_coefficients(Q: RatPoly) -> str:
    return ", ".join(format_fraction(c) for c in Q.coeffs)


def read_config(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep deg_C case
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    return cp


def dump_pencil(spec: PencilSpec) -> str:
    return f"[pencil]\ncoefficients = {format_coefficients(spec.Q)}\n"


def load_pencil(source: str) -> PencilSpec:
    """A preset name or the path of a config file with a [pencil] section."""
    if source in PRESETS:
        return PRESETS[source]()
    cp = read_config(source)
    return new_pencil(parse_coefficients(cp["pencil"]["coefficients"]))


def gap_params_from_mapping(data) -> GapParams:
    kw = {}
    for key in ("c", "kappa", "c3", "c2_ball"):
        if key in data:
            kw[key] = str(data[key])
    if "deg_C" in data:
        kw["deg_C"] = int(data["deg_C"])
    return GapParams(**kw)


def load_gap_params(path) -> Optional[GapParams]:
    cp = read_config(path)
    if "gap-params" not in cp:
        return None
    return gap_params_from_mapping(cp["gap-params"])


def load_search_defaults(path) -> dict:
    cp = read_config(path)
    if "search" not in cp:
        return {}
    sec = cp["search"]
    out = {}
    if "height" in sec:
        out["height"] = int(sec["height"])
    if "sieve_primes" in sec:
        out["sieve_primes"] = tuple(int(p) for p in sec["sieve_primes"].split(",") if p.strip())
    if "use_sieve" in sec:
        out["use_sieve"] = sec.getboolean("use_sieve")
    if "count_negatives" in sec:
        out["count_negatives"] = sec.getboolean("count_negatives")
    return out


def load_lattice(path) -> tuple[GramLattice, list[Vector], Optional[list[list[int]]],
                                Optional[GapParams]]:
    """Read a lattice instance; any structural problem raises LatticeFormatError."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        rho = int(data["rho"])
        lat = GramLattice.from_rows(data["gram"])
        if lat.rho != rho:
            raise LatticeFormatError(f"rho = {rho} but gram is {lat.rho}x{lat.rho}")
        vectors = [lat.vector(v) for v in data.get("vectors", [])]
        classes = data.get("stab_classes")
        if classes is not None:
            classes = [[int(i) for i in cls] for cls in classes]
        params = gap_params_from_mapping(data["params"]) if "params" in data else None
    except LatticeFormatError:
        raise
    except (OSError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise LatticeFormatError(f"malformed lattice file {path}: {exc}") from exc
    return lat, vectors, classes, params


def dump_lattice(lat: GramLattice, vectors, stab_classes=None,
                 params: Optional[GapParams] = None) -> str:
    data = {
        "rho": lat.rho,
        "gram": [[format_fraction(v) for v in row] for row in lat.gram],
        "vectors": [[format_fraction(v) for v in lat.vector(vec)] for vec in vectors],
    }
    if stab_classes is not None:
        data["stab_classes"] = [list(cls) for cls in stab_classes]
    if params is not None:
        data["params"] = params.to_dict()
    return json.dumps(data, indent=1)
