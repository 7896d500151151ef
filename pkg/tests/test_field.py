import json

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zdbkit import _poly
from zdbkit.exceptions import PreconditionError
from zdbkit.field import build_field, field_from_dict, prime_factors


def sympy_mulmod(a, b, F):
    """Multiply two element codes as polynomials mod the field modulus, in sympy."""
    x = sympy.symbols("x")

    def poly(code):
        return sympy.Poly(list(reversed(_poly.from_code(code, F.p, F.s))), x, modulus=F.p)

    mod = sympy.Poly(list(reversed(F.spec.modulus)), x, modulus=F.p)
    prod = (poly(a) * poly(b)).rem(mod)
    coeffs = [int(c) % F.p for c in reversed(prod.all_coeffs())]
    return _poly.to_code(coeffs, F.p)


FIELDS = [(2, 4, 1), (2, 8, 2), (3, 3, 1), (3, 6, 2), (5, 3, 1), (7, 2, 1), (13, 1, 1)]


@pytest.mark.parametrize("p,s,k", FIELDS)
def test_default_modulus_irreducible_per_sympy(p, s, k):
    F = build_field(p, s, k)
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(F.spec.modulus)), x, modulus=p)
    assert poly.is_irreducible
    assert len(F.spec.modulus) == s + 1


@pytest.mark.parametrize("p,s,k", FIELDS)
def test_theta_generates_group(p, s, k):
    F = build_field(p, s, k)
    assert sorted(F.exp.tolist()) == list(range(1, p**s))
    assert F.log[0] == -1
    assert np.all(F.exp[F.log[1:]] == np.arange(1, p**s))


def test_example_modulus_root_is_primitive(gf27, gf729):
    assert gf27.theta == 3 and gf27.theta_is_root
    assert gf729.theta == 3 and gf729.theta_is_root


def test_non_primitive_modulus_picks_smallest_primitive():
    # x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) but its root has order 5
    F = build_field(2, 4, 1, [1, 1, 1, 1, 1])
    assert not F.theta_is_root
    assert F.theta == 3  # x + 1
    assert len(set(F.exp.tolist())) == 15


@pytest.mark.parametrize("p,s,k", [(3, 3, 1), (2, 8, 2), (5, 2, 1)])
def test_multiplication_matches_sympy(p, s, k):
    F = build_field(p, s, k)
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, p**s, size=(60, 2)):
        assert F.mul(int(a), int(b)) == sympy_mulmod(int(a), int(b), F)


def test_alpha_generates_subfield(gf729):
    F = gf729
    assert F.alpha_log == 91
    assert len(F.base_elements) == 9
    # GF(9) is closed under + and *
    B = set(F.base_elements.tolist())
    for a in B:
        for b in B:
            assert F.add(a, b) in B and F.mul(a, b) in B
    # every subfield element is fixed by x -> x^q
    assert np.all(F.pow(F.base_elements, 9) == F.base_elements)


elements27 = st.integers(0, 26)
elements256 = st.integers(0, 255)


@settings(max_examples=150, deadline=None)
@given(elements27, elements27, elements27)
def test_field_axioms_gf27(a, b, c):
    F = build_field(3, 3, 1, [1, 2, 0, 1])
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@settings(max_examples=150, deadline=None)
@given(elements256, elements256, elements256)
def test_field_axioms_char2(a, b, c):
    F = build_field(2, 8, 2)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, a) == 0
    if b:
        assert F.mul(F.div(a, b), b) == a


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 728), st.integers(0, 728), st.integers(0, 8))
def test_trace_is_linear_and_lands_in_base(x, y, ai):
    F = build_field(3, 6, 2, [2, 2, 1, 0, 2, 0, 1])
    a = int(F.base_elements[ai])
    tx, ty = F.trace(x), F.trace(y)
    assert F.in_base(tx)
    assert F.trace(F.add(F.mul(a, x), y)) == F.add(F.mul(a, tx), ty)
    assert F.trace(F.pow(x, 9)) == tx


def test_trace_matches_frobenius_sum(gf729):
    F = gf729
    xs = np.arange(F.size)
    acc = np.zeros_like(xs)
    for i in range(F.m):
        acc = F.add(acc, F.pow(xs, F.q**i))
    assert np.array_equal(acc, F.trace(xs))


def test_trace_is_onto_and_balanced(gf27, gf729):
    for F in (gf27, gf729):
        counts = np.bincount(F.base_index[F.trace(np.arange(F.size))], minlength=F.q)
        assert np.all(counts == F.size // F.q)


def test_round_trip_through_json(gf729):
    data = json.loads(gf729.to_json())
    assert data == {"p": 3, "s": 6, "k": 2, "modulus": [2, 2, 1, 0, 2, 0, 1], "primitive_log_base_check": True}
    G = field_from_dict(data)
    assert np.array_equal(G.exp, gf729.exp)


@pytest.mark.parametrize(
    "args,msg",
    [
        ((4, 2, 1), "not prime"),
        ((3, 6, 4), "does not divide"),
        ((3, 3, 1, [1, 0, 0, 1]), "reducible"),
        ((3, 3, 1, [1, 2, 1]), "degree"),
        ((3, 3, 1, [1, 2, 0, 2]), "monic"),
    ],
)
def test_bad_parameters_rejected(args, msg):
    with pytest.raises(PreconditionError, match=msg):
        build_field(*args)


def test_size_cap(monkeypatch):
    with pytest.raises(PreconditionError, match="exceeds cap"):
        build_field(2, 10, max_size=512)
    monkeypatch.setenv("ZDB_MAX_FIELD", "100")
    with pytest.raises(PreconditionError, match="ZDB_MAX_FIELD"):
        build_field(3, 5)
    monkeypatch.setenv("ZDB_MAX_FIELD", "1000")
    assert build_field(3, 6).size == 729


def test_zero_has_no_inverse_or_log(gf27):
    with pytest.raises(ZeroDivisionError):
        gf27.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf27.logs_of(0)


def test_prime_factors():
    assert prime_factors(728) == [2, 7, 13]
    assert prime_factors(1) == []


def test_rank_over_prime_field(gf729):
    F = gf729
    assert F.rank_over_prime_field([1, 3, 9]) == 3
    assert F.rank_over_prime_field([1, 2, 3, F.add(1, 3)]) == 2
