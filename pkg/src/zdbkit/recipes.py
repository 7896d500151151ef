"""Recipe schema, recipe execution, and the built-in worked examples."""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Callable

import jsonschema
import numpy as np

from zdbkit.construct import (
    ConstructionParams,
    construct_vector_zdb,
    construct_vector_zdb_set,
    construct_zdb,
    construct_zdb_set,
    interleave,
    params_from_recipe,
)
from zdbkit.exceptions import PreconditionError
from zdbkit.fhs import zdb_set_to_fhs
from zdbkit.zdb import ZdbFunction, coincidence_counts, difference_spectrum, is_zdb, with_zero_adjoined

OUTPUTS = ("spectrum", "pdf", "fhs", "lc", "cwc", "bounds")
KINDS = ("single", "set", "vector", "vector_set")

_int_list = {"type": "array", "items": {"type": "integer", "minimum": 0}}

RECIPE_SCHEMA = {
    "type": "object",
    "required": ["field", "e", "r", "d_logs"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "field": {
            "type": "object",
            "required": ["p", "s"],
            "properties": {
                "p": {"type": "integer", "minimum": 2},
                "s": {"type": "integer", "minimum": 1},
                "k": {"type": "integer", "minimum": 1},
                "modulus": _int_list,
                "primitive_log_base_check": {"type": "boolean"},
            },
        },
        "e": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "u": {"type": "integer", "minimum": 1},
        "d_logs": {**_int_list, "minItems": 1},
        "g_logs": _int_list,
        "a_logs": {**_int_list, "minItems": 1},
        "v": {"type": "integer", "minimum": 1},
        "interleave_k": {"type": "integer", "minimum": 1},
        "outputs": {"type": "array", "items": {"enum": list(OUTPUTS)}},
    },
}


def validate_recipe(recipe: dict) -> None:
    """Raise jsonschema.ValidationError for malformed recipes."""
    jsonschema.validate(recipe, RECIPE_SCHEMA)


def recipe_kind(recipe: dict) -> str:
    return recipe.get("kind", "set" if "interleave_k" in recipe else "single")


def run_recipe(recipe: dict, force: bool = False) -> tuple[ConstructionParams, list[ZdbFunction]]:
    """Build the function (or set) a recipe describes; interleave_k folds a set into one function."""
    validate_recipe(recipe)
    params = params_from_recipe(recipe)
    kind = recipe_kind(recipe)
    if kind == "single":
        fs = [construct_zdb(params, force)]
    elif kind == "set":
        fs = construct_zdb_set(params, force)
    elif kind == "vector":
        fs = [construct_vector_zdb(params, force)]
    else:
        fs = construct_vector_zdb_set(params, force)
    if params.k is not None:
        if len(fs) < 2 and params.k > 1:
            raise PreconditionError("interleaving needs a set recipe")
        fs = [interleave(fs, params.k)]
    return params, fs


@dataclass(frozen=True)
class Check:
    quantity: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def _field(p, s, k, modulus):
    return {"p": p, "s": s, "k": k, "modulus": modulus}


EX1 = {"kind": "single", "field": _field(3, 3, 1, [1, 2, 0, 1]), "e": 2, "r": 1, "u": 1, "d_logs": [0, 2]}
EX2 = {"kind": "single", "field": _field(3, 6, 2, [2, 2, 1, 0, 2, 0, 1]), "e": 4, "r": 2, "u": 1, "d_logs": [4, 8]}
EX2_CONTROL = {**EX2, "d_logs": [0, 0]}
EX3 = {**EX2, "kind": "set", "g_logs": [0, 91]}

BUILTIN = {"ex1": EX1, "ex2": EX2, "ex2-control": EX2_CONTROL, "ex3": EX3}


def builtin_recipe(name: str) -> dict:
    return copy.deepcopy(BUILTIN[name])


def _ex1() -> list[Check]:
    _, (f,) = run_recipe(builtin_recipe("ex1"))
    spec = difference_spectrum(f)
    mult = with_zero_adjoined(spec)
    checks = [
        Check("lambda over Z_26 shifts", 8, spec.lam),
        Check("N_0(delta) with x over all of GF(27), every delta", {9}, set(mult.zero_counts().tolist())),
        Check("number of shifts delta", 25, len(mult.zero_counts())),
    ]
    for b in range(1, f.ell):
        dist = mult.distribution_for(b)
        checks.append(Check(f"distribution of N_{b}(delta)", {6: 4, 9: 17, 12: 4}, dist))
        checks.append(Check(f"weighted sum for b={b}", 225, sum(k * v for k, v in dist.items())))
    return checks


def _ex2() -> list[Check]:
    _, (f,) = run_recipe(builtin_recipe("ex2"))
    _, (g,) = run_recipe(builtin_recipe("ex2-control"))
    sf, sg = difference_spectrum(f), difference_spectrum(g)
    return [
        Check("lambda", 40, sf.lam),
        Check("N_b value set, b != 0", {36, 45, 54}, sf.nonzero_value_set()),
        Check("lambda, equal weights", 40, sg.lam),
        Check("N_b value set, equal weights", {36, 45}, sg.nonzero_value_set()),
    ]


def _ex3() -> list[Check]:
    _, fs = run_recipe(builtin_recipe("ex3"))
    checks = [Check(f"lambda of f_{i}", 40, is_zdb(f).lam) for i, f in enumerate(fs)]
    checks += [Check(f"(n, ell) of f_{i}", (364, 9), (f.n, f.ell)) for i, f in enumerate(fs)]
    for i, j in ((0, 1), (1, 0)):
        checks.append(Check(f"cross zero-counts f_{i} vs f_{j}", {40}, set(np.unique(coincidence_counts(fs[i], fs[j])).tolist())))
    _, rep = zdb_set_to_fhs(fs)
    checks += [
        Check("M(F)", 40, rep.M),
        Check("Peng-Fan bounds", (40, 40), rep.peng_fan),
        Check("optimal FH set", True, rep.optimal_set),
    ]
    return checks


REPRODUCTIONS: dict[str, Callable[[], list[Check]]] = {"ex1": _ex1, "ex2": _ex2, "ex3": _ex3}


def reproduce(name: str) -> list[Check]:
    if name not in REPRODUCTIONS:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(REPRODUCTIONS)}")
    return REPRODUCTIONS[name]()
