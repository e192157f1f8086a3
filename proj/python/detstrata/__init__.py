"""Determinantal strata: dimension formulas, Hom/Ext checks, verdicts and ghost terms."""

import json

from . import _core
from ._core import Error, InvalidInput

__all__ = [
    "Error",
    "InvalidInput",
    "spec",
    "lambda_",
    "lambda_c",
    "K_values",
    "nonempty",
    "stratum_info",
    "verify",
    "betti",
    "ghost",
    "registry_ids",
    "reproduce",
]


def spec(b, a, n=2, p=10007, seed=1, allow_constants=False, explicit_entries=None):
    """Degree-matrix spec as a dict; rows b and columns a as in the CLI."""
    s = {"n": n, "p": p, "b": list(b), "a": list(a), "seed": seed, "allow_constants": allow_constants}
    if explicit_entries is not None:
        s["explicit_entries"] = explicit_entries
    return s


def _text(s):
    return json.dumps(s)


def lambda_(s):
    return _core.lambda_(_text(s))


def lambda_c(s):
    return _core.lambda_c(_text(s))


def K_values(s):
    return _core.K_values(_text(s))


def nonempty(s):
    return _core.nonempty(_text(s))


def stratum_info(s):
    return json.loads(_core.stratum_info(_text(s)))


def verify(s, theorems=(), level=3):
    return json.loads(_core.verify(_text(s), list(theorems), level))


def betti(s):
    return json.loads(_core.betti(_text(s)))


def ghost(s, i, j, trials=10):
    return json.loads(_core.ghost(_text(s), i, j, trials))


def registry_ids():
    return list(_core.registry_ids())


def reproduce(example_id):
    return json.loads(_core.reproduce(example_id))
