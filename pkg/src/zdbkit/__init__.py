"""Zero-difference-balanced functions over finite fields, with FH sequence and code analysis."""

from zdbkit.construct import (
    ConstructionParams,
    check_condition_i,
    check_condition_ii,
    construct_vector_zdb,
    construct_vector_zdb_set,
    construct_zdb,
    construct_zdb_set,
    interleave,
    params_from_recipe,
)
from zdbkit.cyclotomy import CosetSystem, build_cosets
from zdbkit.exceptions import PreconditionError, VerificationError, ZdbError
from zdbkit.field import FieldSpec, FieldTable, build_field, field_from_dict
from zdbkit.zdb import ZdbFunction, difference_spectrum, is_zdb, to_pdf, verify_pdf

__version__ = "0.1.0"

__all__ = [
    "ConstructionParams",
    "CosetSystem",
    "FieldSpec",
    "FieldTable",
    "PreconditionError",
    "VerificationError",
    "ZdbError",
    "ZdbFunction",
    "build_cosets",
    "build_field",
    "check_condition_i",
    "check_condition_ii",
    "construct_vector_zdb",
    "construct_vector_zdb_set",
    "construct_zdb",
    "construct_zdb_set",
    "difference_spectrum",
    "field_from_dict",
    "interleave",
    "is_zdb",
    "params_from_recipe",
    "to_pdf",
    "verify_pdf",
]
