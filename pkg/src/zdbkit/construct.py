"""ZDB functions tr(rho(t) theta^(r u t)) built from coset-piecewise weights, and their relatives.

Weights, class representatives and linear-combination coefficients are all
given as discrete logs base theta.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from zdbkit.cyclotomy import CosetSystem, _check_exponent, build_cosets
from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.field import FieldTable, field_from_dict
from zdbkit.zdb import FieldCodomain, ZdbFunction, difference_spectrum, is_difference_balanced

EXHAUSTIVE_INDEPENDENCE_LIMIT = 10**4


@dataclass(frozen=True, eq=False)
class ConstructionParams:
    cosets: CosetSystem
    d_logs: tuple[int, ...]
    u: int = 1
    g_logs: tuple[int, ...] | None = None
    a_logs: tuple[int, ...] | None = None
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "d_logs", tuple(int(x) % self.field.order for x in self.d_logs))
        for name in ("g_logs", "a_logs"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, tuple(int(x) % self.field.order for x in val))
        if len(self.d_logs) != self.l:
            raise PreconditionError(f"need l={self.l} weights, got {len(self.d_logs)}")
        _check_exponent(self.field, self.u, "u")

    @property
    def field(self) -> FieldTable:
        return self.cosets.field

    @property
    def e(self) -> int:
        return self.cosets.e

    @property
    def l(self) -> int:  # noqa: E743
        return self.cosets.l

    @property
    def r(self) -> int:
        return self.cosets.r

    @property
    def n(self) -> int:
        return self.field.order // self.r

    @property
    def v(self) -> int:
        return len(self.a_logs) if self.a_logs else 1

    def replace(self, **changes) -> ConstructionParams:
        fields = dict(cosets=self.cosets, d_logs=self.d_logs, u=self.u, g_logs=self.g_logs, a_logs=self.a_logs, k=self.k)
        fields.update(changes)
        return ConstructionParams(**fields)

    def claimed(self, v: int | None = None, k: int = 1) -> tuple[int, int, int]:
        """(n, ell, lambda) promised for a v-component, k-fold interleaved construction."""
        v = self.v if v is None else v
        q, m = self.field.q, self.field.m
        return k * self.n, q**v, k * (q ** (m - v) - 1) // self.r

    def to_recipe(self, kind: str = "single") -> dict:
        rec = {
            "kind": kind,
            "field": self.field.spec.to_dict(),
            "e": self.e,
            "r": self.r,
            "u": self.u,
            "d_logs": list(self.d_logs),
        }
        if self.g_logs is not None:
            rec["g_logs"] = list(self.g_logs)
        if self.a_logs is not None:
            rec["a_logs"] = list(self.a_logs)
            rec["v"] = len(self.a_logs)
        if self.k is not None:
            rec["interleave_k"] = self.k
        return rec


def params_from_recipe(recipe: dict, field: FieldTable | None = None) -> ConstructionParams:
    F = field if field is not None else field_from_dict(recipe["field"])
    cosets = build_cosets(F, int(recipe["e"]), int(recipe["r"]))
    a_logs = recipe.get("a_logs")
    if a_logs is not None and "v" in recipe and int(recipe["v"]) != len(a_logs):
        raise PreconditionError(f"v={recipe['v']} but {len(a_logs)} a_logs given")
    return ConstructionParams(
        cosets,
        tuple(recipe["d_logs"]),
        u=int(recipe.get("u", 1)),
        g_logs=tuple(recipe["g_logs"]) if recipe.get("g_logs") is not None else None,
        a_logs=tuple(a_logs) if a_logs is not None else None,
        k=recipe.get("interleave_k"),
    )


# ---------------------------------------------------------------------------
# sufficient conditions
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ConditionCheck:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_condition_i(params: ConstructionParams) -> ConditionCheck:
    """No x != 1 in C_0 with x^u = 1, i.e. j e u != 0 mod (q^m - 1) for 1 <= j < |C_0|."""
    F, e, u = params.field, params.e, params.u
    N = F.order
    bad_j = next((j for j in range(1, N // e) if (j * e * u) % N == 0), None)
    c0 = F.exp[np.arange(0, N, e)]
    hits = c0[(F.pow(c0, u) == 1) & (c0 != 1)]
    if (bad_j is None) != (hits.size == 0):
        raise VerificationError("congruence test and enumeration of C_0 disagree")
    return ConditionCheck(bad_j is None, None if bad_j is None else (bad_j,))


def _condition_ii_witness(c_of_log: np.ndarray, N: int, l: int, u: int, d_logs: Sequence[int]):
    for k in range(1, l):
        target = (u * k) % l
        for j in range(l):
            if c_of_log[(d_logs[j] - d_logs[(k + j) % l]) % N] == target:
                return k, j
    return None


def check_condition_ii(params: ConstructionParams) -> ConditionCheck:
    """d_j / d_(k+j) must avoid C_(uk) for every k != 0 (indices mod l)."""
    cs = params.cosets
    N, l, u = params.field.order, params.l, params.u
    witness = _condition_ii_witness(cs.c_of_log, N, l, u, params.d_logs)
    if all(cs.d_of_log[d] == 0 for d in params.d_logs):
        # d_i in alpha^(-s_i r) C_0; the condition is that s_i - i u is a permutation mod l
        s = [(-int(cs.c_of_log[d])) % l for d in params.d_logs]
        perm = len({(s[i] - i * u) % l for i in range(l)}) == l
        if perm != (witness is None):
            raise VerificationError("direct condition (ii) check and permutation criterion disagree")
    return ConditionCheck(witness is None, witness)


def _require_conditions(params: ConstructionParams, force: bool) -> None:
    if force:
        return
    c1 = check_condition_i(params)
    if not c1:
        raise PreconditionError(f"condition (i) fails at j={c1.witness[0]}")
    c2 = check_condition_ii(params)
    if not c2:
        raise PreconditionError(f"condition (ii) fails at (k, j)={c2.witness}")


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------
def _inner_logs(params: ConstructionParams) -> np.ndarray:
    """log of rho(t) theta^(r u t) for t in Z_n."""
    F, cs, r = params.field, params.cosets, params.r
    t = np.arange(params.n, dtype=np.int64)
    c = cs.c_of_log[(r * t) % F.order]
    d = np.asarray(params.d_logs, dtype=np.int64)
    return (d[c] + r * params.u * t) % F.order


def _trace_component(params: ConstructionParams, extra_log: int) -> np.ndarray:
    F = params.field
    return F.trace(F.exp[(_inner_logs(params) + extra_log) % F.order])


def _function(params, components, provenance) -> ZdbFunction:
    cod = FieldCodomain(params.field, len(components))
    return ZdbFunction(cod.encode(np.stack(components)), cod, provenance)


def _provenance(params: ConstructionParams, kind: str, **extra) -> dict:
    return {"construction": kind, "recipe": params.to_recipe(), "r": params.r, **extra}


def construct_zdb(params: ConstructionParams, force: bool = False) -> ZdbFunction:
    """f(t) = tr(rho(t) theta^(r u t)) on Z_n, n = (q^m - 1)/r, with rho(t) = d_i on C_i."""
    _require_conditions(params, force)
    comp = _trace_component(params, 0)
    return _function(params, [comp], _provenance(params, "generic", claimed=params.claimed(v=1), forced=force))


def construct_sc1(field: FieldTable, d0_log: int, d1_log: int, force: bool = False) -> ZdbFunction:
    """t -> tr(rho(x) x), x = theta^t, with rho = d0 on squares and d1 on nonsquares."""
    if field.q % 2 == 0 or field.m % 2 == 0:
        raise PreconditionError("squares/nonsquares weighting needs q and m odd")
    if (d0_log + d1_log) % 2 and not force:
        raise PreconditionError("d0*d1 must be a square")
    params = ConstructionParams(build_cosets(field, 2, 1), (d0_log, d1_log), u=1)
    f = construct_zdb(params, force=force)
    balanced = is_difference_balanced(difference_spectrum(f))
    return ZdbFunction(f.values, f.codomain, {**f.provenance, "construction": "square_class_weights", "difference_balanced": balanced})


def construct_sc2(cosets: CosetSystem, d_logs: Sequence[int], force: bool = False) -> ZdbFunction:
    """The u = 1 instance of the generic construction (function on D_0)."""
    params = ConstructionParams(cosets, tuple(d_logs), u=1)
    f = construct_zdb(params, force=force)
    return ZdbFunction(f.values, f.codomain, {**f.provenance, "construction": "unit_exponent"})


def default_transversal(params: ConstructionParams) -> tuple[int, ...]:
    """(1, alpha, ..., alpha^(r-1)) as logs."""
    return tuple(i * params.field.alpha_log for i in range(params.r))


def _set_prechecks(params: ConstructionParams) -> tuple[int, ...]:
    cs = params.cosets
    if any(cs.d_of_log[d] != 0 for d in params.d_logs):
        raise PreconditionError("set constructions need every weight d_i in D_0")
    g = params.g_logs if params.g_logs is not None else default_transversal(params)
    if len(g) != params.r or sorted(int(cs.d_of_log[x]) for x in g) != list(range(params.r)):
        raise PreconditionError("g must contain exactly one element of each class D_i")
    return g


def construct_zdb_set(params: ConstructionParams, force: bool = False) -> list[ZdbFunction]:
    """f_i(t) = tr(g_i rho(t) theta^(r u t)) for a transversal g of the classes D_i."""
    g = _set_prechecks(params)
    _require_conditions(params, force)
    out = []
    for i, gl in enumerate(g):
        prov = _provenance(params, "set", member=i, g_log=gl, claimed=params.claimed(v=1), forced=force)
        out.append(_function(params, [_trace_component(params, gl)], prov))
    return out


def check_linear_independence(field: FieldTable, elements: Sequence[int], method: str = "auto") -> bool:
    """Whether ``elements`` of GF(q^m) are linearly independent over GF(q)."""
    elems = np.asarray(elements, dtype=np.int64)
    v = len(elems)
    if v == 0:
        return True
    if np.any(elems == 0):
        return False
    if v > field.m:
        return False
    if method == "auto":
        method = "scan" if field.q**v <= EXHAUSTIVE_INDEPENDENCE_LIMIT else "rank"
    if method == "scan":
        base = field.base_elements
        for coeffs in itertools.product(range(field.q), repeat=v):
            if not any(coeffs):
                continue
            total = field.sum(field.mul(base[list(coeffs)], elems))
            if total == 0:
                return False
        return True
    if method == "rank":
        # GF(q)-independence <=> the k*v products a_i * alpha^j (j < k) are GF(p)-independent
        k = field.spec.k
        basis = field.element(np.arange(k) * field.alpha_log)
        prods = field.mul(elems[:, None], basis[None, :]).ravel()
        return field.rank_over_prime_field(prods) == k * v
    raise ValueError(f"unknown method {method!r}")


def _vector_prechecks(params: ConstructionParams) -> tuple[int, ...]:
    a = params.a_logs
    if not a:
        raise PreconditionError("a_logs required for vector-valued constructions")
    if len(a) > params.field.m:
        raise PreconditionError(f"v={len(a)} exceeds m={params.field.m}")
    if not check_linear_independence(params.field, params.field.element(np.asarray(a))):
        raise PreconditionError("a_logs are linearly dependent over GF(q)")
    return a


def construct_vector_zdb(params: ConstructionParams, force: bool = False) -> ZdbFunction:
    """t -> (tr(a_0 rho(t) theta^(rut)), ..., tr(a_(v-1) rho(t) theta^(rut)))."""
    a = _vector_prechecks(params)
    _require_conditions(params, force)
    comps = [_trace_component(params, al) for al in a]
    return _function(params, comps, _provenance(params, "vector", claimed=params.claimed(), forced=force))


def construct_vector_zdb_set(params: ConstructionParams, force: bool = False) -> list[ZdbFunction]:
    a = _vector_prechecks(params)
    g = _set_prechecks(params)
    _require_conditions(params, force)
    out = []
    for i, gl in enumerate(g):
        comps = [_trace_component(params, al + gl) for al in a]
        prov = _provenance(params, "vector_set", member=i, g_log=gl, claimed=params.claimed(), forced=force)
        out.append(_function(params, comps, prov))
    return out


def interleave(functions: Sequence[ZdbFunction], k: int | None = None) -> ZdbFunction:
    """F(jk + i) = f_i(j) on Z_(kn), using the first k functions of a set."""
    k = len(functions) if k is None else k
    if k < 1 or k > len(functions):
        raise PreconditionError(f"need 1 <= k <= {len(functions)} functions")
    r = functions[0].provenance.get("r")
    if r is not None and k > r:
        raise PreconditionError(f"k={k} exceeds r={r}")
    n = functions[0].n
    if any(f.n != n or f.codomain.size != functions[0].codomain.size for f in functions[:k]):
        raise PreconditionError("functions must share domain and codomain")
    if gcd(k, n) != 1:
        raise PreconditionError(f"gcd(k, n) = gcd({k}, {n}) != 1")
    values = np.empty(k * n, dtype=np.int64)
    for i in range(k):
        values[i::k] = functions[i].values
    prov = dict(functions[0].provenance)
    claimed = prov.get("claimed")
    prov.update(construction="interleave", interleave_k=k, members=list(range(k)))
    if claimed:
        prov["claimed"] = (k * claimed[0], claimed[1], k * claimed[2])
    return ZdbFunction(values, functions[0].codomain, prov)


# ---------------------------------------------------------------------------
# weight-vector enumeration
# ---------------------------------------------------------------------------
def enumerate_valid_weight_vectors(
    cosets: CosetSystem, u: int = 1, strategy: str = "all_in_D0", limit: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Stream weight vectors (as logs) that pass condition (ii).

    ``all_in_D0`` scans D_0^l.  ``transversal_mix`` places r-1 entries in the
    classes D_1, ..., D_(r-1) (one each, in position order) and the remaining
    l-r+1 entries in D_0.
    """
    F, l, r = cosets.field, cosets.l, cosets.r
    N = F.order
    _check_exponent(F, u, "u")
    d0 = list(range(0, N, r))
    if strategy == "all_in_D0":
        slot_choices = [[d0] * l]
    elif strategy == "transversal_mix":
        if r < 2 or l < r - 1:
            raise PreconditionError("transversal_mix needs r >= 2 and l >= r - 1")
        classes = [[int(x) for x in np.flatnonzero(cosets.d_of_log == i)] for i in range(r)]
        slot_choices = []
        for positions in itertools.combinations(range(l), r - 1):
            slots = [d0] * l
            for cls, pos in enumerate(positions, start=1):
                slots = slots[:pos] + [classes[cls]] + slots[pos + 1 :]
            slot_choices.append(slots)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    emitted = 0
    for slots in slot_choices:
        for d in itertools.product(*slots):
            if _condition_ii_witness(cosets.c_of_log, N, l, u, d) is None:
                yield d
                emitted += 1
                if limit is not None and emitted >= limit:
                    return


def random_valid_weights(cosets: CosetSystem, u: int, rng: np.random.Generator, max_tries: int = 10_000) -> tuple[int, ...]:
    """Rejection-sample d in D_0^l passing condition (ii)."""
    N, l, r = cosets.field.order, cosets.l, cosets.r
    for _ in range(max_tries):
        d = tuple(int(x) for x in rng.integers(0, N // r, size=l) * r)
        if _condition_ii_witness(cosets.c_of_log, N, l, u, d) is None:
            return d
    raise RuntimeError("no valid weight vector found")
