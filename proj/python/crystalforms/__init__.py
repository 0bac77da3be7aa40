"""Exact decomposition of shift-invariant closed uniform forms on crystal lattices.

Thin dict-based wrappers over the compiled ``_core`` module, which speaks
the same JSON wire formats as the command line tool.
"""

import json

from ._core import (  # noqa: F401
    CapError,
    InconclusiveError,
    InputError,
    __version__,
)
from . import _core


def builtin_lattice(name, params=None):
    """Return the JSON presentation of a builtin lattice as a dict."""
    request = {"builtin": name}
    if params:
        request["params"] = list(params)
    report = json.loads(_core.lattice_build(json.dumps(request)))
    return report["report"]["lattice"]


def inspect_lattice(lattice):
    return json.loads(_core.lattice_inspect(json.dumps(lattice)))["report"]


def check_ee(lattice):
    """Essentially-Euclidean classification of a lattice presentation."""
    return json.loads(_core.lattice_check_ee(json.dumps(lattice)))["report"]


def abelian_cover(seed_graph):
    """Maximal abelian cover of a seed crystal graph."""
    return json.loads(_core.abelian_cover(json.dumps(seed_graph)))["report"]


def analyze_interaction(interaction, locale_max=4, cap=1_000_000, threads=1):
    return json.loads(
        _core.interaction_analyze(json.dumps(interaction), locale_max, cap, threads)
    )["report"]


def decompose(lattice, interaction, form, window=(), charge_sites=3, cap=2_000_000,
              expand_radius=-1, rng_seed=20240):
    """Run the decomposition and return the result report as a dict."""
    out = _core.decompose(
        json.dumps(lattice), json.dumps(interaction), json.dumps(form),
        list(window), charge_sites, cap, expand_radius, rng_seed,
    )
    return json.loads(out)["report"]


def verify(suites=(), scale="small", threads=1):
    """Run the verification criteria; returns the report dict."""
    return json.loads(_core.verify(list(suites), scale, threads))["report"]
