"""Table-driven arithmetic in GF(p^s), viewed as the extension GF(q^m) of GF(q), q = p^k.

Elements are plain ints in ``range(p**s)``: the base-p digits of an element
are the coefficients (low degree first) of its residue modulo the defining
polynomial.  Zero is ``0`` and one is ``1``.  All operations accept either
ints or integer numpy arrays and return the same kind.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from zdbkit import _poly
from zdbkit.exceptions import PreconditionError

DEFAULT_MAX_FIELD = 2**24


def max_field_size() -> int:
    """Desk-scale cap on p^s; the ``ZDB_MAX_FIELD`` environment variable overrides it."""
    env = os.environ.get("ZDB_MAX_FIELD")
    return int(env) if env else DEFAULT_MAX_FIELD


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of GF(p^s) with base field GF(p^k)."""

    p: int
    s: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def m(self) -> int:
        return self.s // self.k

    def to_dict(self, primitive_log_base_check: bool | None = None) -> dict:
        out = {"p": self.p, "s": self.s, "k": self.k, "modulus": list(self.modulus)}
        if primitive_log_base_check is not None:
            out["primitive_log_base_check"] = primitive_log_base_check
        return out


@dataclass(frozen=True, eq=False)
class FieldTable:
    spec: FieldSpec
    exp: np.ndarray
    log: np.ndarray
    theta_is_root: bool
    _trace: np.ndarray = dc_field(repr=False)

    # -- sizes -----------------------------------------------------------
    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def size(self) -> int:
        return self.p**self.s

    @property
    def order(self) -> int:
        """Order of the multiplicative group, p^s - 1."""
        return self.size - 1

    @property
    def alpha_log(self) -> int:
        """Discrete log of alpha = theta^((q^m-1)/(q-1)), a primitive element of GF(q)."""
        return self.order // (self.q - 1)

    @property
    def theta(self) -> int:
        return int(self.exp[1 % self.order])

    @property
    def alpha(self) -> int:
        return self.element(self.alpha_log)

    def __repr__(self) -> str:
        return f"FieldTable(GF({self.p}^{self.s}) over GF({self.q}), modulus={list(self.spec.modulus)})"

    # -- element helpers -------------------------------------------------
    def element(self, log):
        """theta**log, for integer (array) exponents."""
        return _match(log, self.exp[np.asarray(log) % self.order])

    def logs_of(self, x):
        """Discrete logs base theta; raises on zero."""
        x = np.asarray(x)
        if np.any(x == 0):
            raise ZeroDivisionError("discrete log of zero")
        return _match(x, self.log[x])

    def digits(self, x) -> np.ndarray:
        """Coefficient vectors over GF(p), shape x.shape + (s,)."""
        x = np.asarray(x, dtype=np.int64)
        powers = self.p ** np.arange(self.s, dtype=np.int64)
        return (x[..., None] // powers) % self.p

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        if self.p == 2:
            return _match(a, np.bitwise_xor(np.asarray(a), np.asarray(b)))
        return self._digitwise(a, b, 1)

    def sub(self, a, b):
        if self.p == 2:
            return self.add(a, b)
        return self._digitwise(a, b, -1)

    def neg(self, a):
        return self.sub(np.zeros_like(np.asarray(a)), a) if np.ndim(a) else self.sub(0, a)

    def mul(self, a, b):
        a_arr, b_arr = np.asarray(a), np.asarray(b)
        zero = (a_arr == 0) | (b_arr == 0)
        la = np.where(a_arr == 0, 0, self.log[a_arr])
        lb = np.where(b_arr == 0, 0, self.log[b_arr])
        out = np.where(zero, 0, self.exp[(la + lb) % self.order])
        return _match(a if np.ndim(a) >= np.ndim(b) else b, out)

    def inv(self, a):
        a_arr = np.asarray(a)
        if np.any(a_arr == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return _match(a, self.exp[(-self.log[a_arr]) % self.order])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a_arr = np.asarray(a)
        if e == 0:
            return _match(a, np.ones_like(a_arr))
        if e < 0 and np.any(a_arr == 0):
            raise ZeroDivisionError("negative power of zero")
        la = np.where(a_arr == 0, 0, self.log[a_arr])
        out = np.where(a_arr == 0, 0, self.exp[(la * (e % self.order)) % self.order])
        return _match(a, out)

    def sum(self, values) -> int:
        """Field sum of a 1-D array of elements."""
        values = np.asarray(values, dtype=np.int64)
        if values.size == 0:
            return 0
        if self.p == 2:
            return int(np.bitwise_xor.reduce(values))
        digits = self.digits(values).sum(axis=0) % self.p
        return int(digits @ (self.p ** np.arange(self.s, dtype=np.int64)))

    def _digitwise(self, a, b, sign: int):
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a_arr, b_arr).shape, dtype=np.int64)
        place = 1
        for _ in range(self.s):
            out += (((a_arr // place) % self.p + sign * ((b_arr // place) % self.p)) % self.p) * place
            place *= self.p
        return _match(a if np.ndim(a) >= np.ndim(b) else b, out)

    # -- subfield and trace ---------------------------------------------
    def trace(self, x):
        """Trace from GF(q^m) down to GF(q); the result is a (big-field) element of GF(q)."""
        return _match(x, self._trace[np.asarray(x)])

    @property
    def trace_table(self) -> np.ndarray:
        return self._trace

    @cached_property
    def base_elements(self) -> np.ndarray:
        """Elements of the subfield GF(q), sorted by code."""
        step = self.alpha_log
        nonzero = self.exp[np.arange(self.q - 1) * step]
        return np.sort(np.concatenate([[0], nonzero])).astype(np.int64)

    @cached_property
    def base_index(self) -> np.ndarray:
        """Map element -> position in ``base_elements``, -1 outside GF(q)."""
        idx = np.full(self.size, -1, dtype=np.int64)
        idx[self.base_elements] = np.arange(self.q)
        return idx

    def in_base(self, x) -> bool:
        return bool(np.all(self.base_index[np.asarray(x)] >= 0))

    def base_log(self, x) -> int:
        """Log of a nonzero GF(q) element with respect to alpha."""
        lg = int(self.logs_of(x))
        if lg % self.alpha_log:
            raise ValueError(f"{x} is not in GF({self.q})")
        return lg // self.alpha_log

    def rank_over_prime_field(self, elements) -> int:
        """Rank over GF(p) of the coefficient vectors of ``elements``."""
        rows = [list(map(int, r)) for r in self.digits(np.asarray(elements, dtype=np.int64).reshape(-1))]
        return _rank_mod_p(rows, self.p)

    def to_dict(self) -> dict:
        return self.spec.to_dict(primitive_log_base_check=self.theta_is_root)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _match(like, arr):
    """Return a Python int when ``like`` is a scalar, else the array."""
    if np.ndim(like) == 0 and np.ndim(arr) == 0:
        return int(arr)
    return np.asarray(arr, dtype=np.int64)


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [c * inv % p for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _poly_mulmod_code(a: int, b: int, f: list[int], p: int, s: int) -> int:
    prod = _poly.mod(_poly.mul(_poly.from_code(a, p, s), _poly.from_code(b, p, s), p), f, p)
    return _poly.to_code(prod, p)


def _order_is_full(g: int, f: list[int], p: int, s: int) -> bool:
    order = p**s - 1
    for prime in prime_factors(order):
        acc, base, e = 1, g, order // prime
        while e:
            if e & 1:
                acc = _poly_mulmod_code(acc, base, f, p, s)
            base = _poly_mulmod_code(base, base, f, p, s)
            e >>= 1
        if acc == 1:
            return False
    return True


def build_field(p: int, s: int, k: int = 1, modulus=None, max_size: int | None = None) -> FieldTable:
    """Tabulate GF(p^s) as GF(q^m) with q = p^k.

    If ``modulus`` (coefficients low-to-high, monic, degree ``s``) is omitted,
    the irreducible polynomial with the smallest integer code is used.  When
    the root of the modulus is not primitive, theta is the primitive element
    with the smallest code instead.
    """
    if not is_prime(p):
        raise PreconditionError(f"p={p} is not prime")
    if s < 1 or k < 1:
        raise PreconditionError("degrees must be positive")
    if s % k:
        raise PreconditionError(f"base degree k={k} does not divide s={s}")
    cap = max_field_size() if max_size is None else max_size
    if p**s > cap:
        raise PreconditionError(f"field size {p}^{s} exceeds cap {cap} (set ZDB_MAX_FIELD to raise it)")

    if modulus is None:
        f = _poly.smallest_monic_irreducible(p, s)
    else:
        f = [int(c) % p for c in modulus]
        f = _poly.trim(f)
        if len(f) != s + 1:
            raise PreconditionError(f"modulus must have degree {s}")
        if f[-1] != 1:
            raise PreconditionError("modulus must be monic")
        if not _poly.is_irreducible(f, p):
            raise PreconditionError(f"modulus {f} is reducible over GF({p})")

    size = p**s
    order = size - 1
    spec = FieldSpec(p, s, k, tuple(f))

    if s == 1:
        # minimal polynomial x - g of a primitive root g of Z_p
        theta = next(g for g in range(1, p) if _order_is_full(g, f, p, s)) if p > 2 else 1
    else:
        theta = p if _order_is_full(p, f, p, s) else next(
            g for g in range(2, size) if _order_is_full(g, f, p, s)
        )
    # the companion root x has code p
    theta_is_root = theta == (p if s > 1 else (-f[0]) % p)

    exp = np.empty(order, dtype=np.int64)
    x = 1
    if theta == p and s > 1:
        tail = f[:s]
        for i in range(order):
            exp[i] = x
            digits = _poly.from_code(x, p, s)
            carry = digits[-1]
            digits = [0] + digits[:-1]
            if carry:
                digits = [(d - carry * c) % p for d, c in zip(digits, tail)]
            x = _poly.to_code(digits, p)
    else:
        for i in range(order):
            exp[i] = x
            x = _poly_mulmod_code(x, theta, f, p, s)
    log = np.full(size, -1, dtype=np.int64)
    log[exp] = np.arange(order)
    if np.any(log[1:] < 0):
        raise AssertionError("exp table is not a permutation of the nonzero elements")

    trace = _trace_table(exp, p, s, k)
    return FieldTable(spec=spec, exp=exp, log=log, theta_is_root=theta_is_root, _trace=trace)


def _trace_table(exp: np.ndarray, p: int, s: int, k: int) -> np.ndarray:
    size = p**s
    order = size - 1
    q, m = p**k, s // k
    logs = np.arange(order, dtype=np.int64)
    acc = np.zeros(order, dtype=np.int64)
    powers = p ** np.arange(s, dtype=np.int64)
    for i in range(m):
        term = exp[(logs * pow(q, i, order)) % order] if order > 1 else exp[np.zeros_like(logs)]
        if p == 2:
            acc ^= term
        else:
            acc = ((((acc[:, None] // powers) % p) + ((term[:, None] // powers) % p)) % p) @ powers
    table = np.zeros(size, dtype=np.int64)
    table[exp] = acc
    return table


def field_from_dict(data: dict) -> FieldTable:
    return build_field(int(data["p"]), int(data["s"]), int(data.get("k", 1)), data.get("modulus"))
