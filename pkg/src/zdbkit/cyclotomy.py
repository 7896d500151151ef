"""Cyclotomic classes D_i = alpha^i <theta^r> and their cosets C_i = alpha^(ir) <theta^e>."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Callable

import numpy as np

from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.field import FieldTable

HOMOGENEITY_FULL_SWEEP = 10**6
HOMOGENEITY_SAMPLES = 1000


@dataclass(frozen=True, eq=False)
class CosetSystem:
    """Labels every nonzero element theta^j by its D-class and (inside D_0) its C-coset.

    ``d_of_log[j]`` is the i with theta^j in D_i; ``c_of_log[j]`` is the i with
    theta^j in C_i, or -1 when theta^j is not in D_0.
    """

    field: FieldTable
    e: int
    r: int
    d_of_log: np.ndarray
    c_of_log: np.ndarray

    @property
    def l(self) -> int:  # noqa: E743
        return self.e // self.r

    @property
    def alpha_log(self) -> int:
        return self.field.alpha_log

    @property
    def d0_size(self) -> int:
        return self.field.order // self.r

    @property
    def c0_size(self) -> int:
        return self.field.order // self.e

    def d_class(self, x):
        """D-index of nonzero element(s) x."""
        return _match(x, self.d_of_log[self.field.log[np.asarray(x)]])

    def c_class(self, x):
        """C-index of element(s) x of D_0 (-1 elsewhere)."""
        return _match(x, self.c_of_log[self.field.log[np.asarray(x)]])

    def d_members(self, i: int) -> np.ndarray:
        return self.field.exp[np.flatnonzero(self.d_of_log == i)]

    def c_members(self, i: int) -> np.ndarray:
        return self.field.exp[np.flatnonzero(self.c_of_log == i)]

    def trace_root_counts(self, a: int, u: int) -> list[int]:
        """|{x in C_i : tr(a x^u) = 0}| for each coset C_i."""
        F = self.field
        if a == 0:
            raise PreconditionError("a must be nonzero")
        _check_exponent(F, u, "u")
        counts = []
        for i in range(self.l):
            xs = self.c_members(i)
            vals = F.trace(F.mul(a, F.pow(xs, u)))
            counts.append(int(np.count_nonzero(vals == 0)))
        return counts

    def homogeneous_root_count(self, h: Callable[[np.ndarray], np.ndarray], degree: int, seed: int = 0):
        """Count the roots of a ``degree``-homogeneous h in D_0 and in each C_i.

        ``h`` maps an array of nonzero elements to an array of elements.  The
        homogeneity hypothesis h(ax) = a^degree h(x), a in GF(q), is checked
        before counting: exhaustively when |GF(q)| * |D_0| is at most 10^6,
        otherwise on a seeded random sample.
        """
        F = self.field
        d0 = self.d_members(0)
        scalars = F.base_elements[1:]
        if len(scalars) * len(d0) <= HOMOGENEITY_FULL_SWEEP:
            a_grid, x_grid = np.meshgrid(scalars, d0, indexing="ij")
            a_s, x_s = a_grid.ravel(), x_grid.ravel()
        else:
            rng = np.random.default_rng(seed)
            a_s = rng.choice(scalars, HOMOGENEITY_SAMPLES)
            x_s = rng.choice(d0, HOMOGENEITY_SAMPLES)
        lhs = np.asarray(h(F.mul(a_s, x_s)))
        rhs = F.mul(F.pow(a_s, degree), np.asarray(h(x_s)))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = int(bad[0])
            raise PreconditionError(
                f"h is not {degree}-homogeneous: h({int(a_s[i])}*{int(x_s[i])}) != {int(a_s[i])}^{degree} h({int(x_s[i])})"
            )
        in_d0 = int(np.count_nonzero(np.asarray(h(d0)) == 0))
        per_coset = [int(np.count_nonzero(np.asarray(h(self.c_members(i))) == 0)) for i in range(self.l)]
        if any(c * self.l != in_d0 for c in per_coset):
            raise VerificationError(f"roots not evenly spread over cosets: D_0 has {in_d0}, cosets {per_coset}")
        return in_d0, per_coset

    def to_dict(self) -> dict:
        classes = []
        for di in range(self.r):
            classes.append({"d_index": di, "c_index": None, "member_logs_count": int(np.count_nonzero(self.d_of_log == di))})
        for ci in range(self.l):
            classes.append({"d_index": 0, "c_index": ci, "member_logs_count": int(np.count_nonzero(self.c_of_log == ci))})
        return {"e": self.e, "l": self.l, "r": self.r, "alpha_log": self.alpha_log, "classes": classes}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _match(like, arr):
    return int(arr) if np.ndim(like) == 0 else np.asarray(arr)


def _check_exponent(F: FieldTable, u: int, name: str) -> None:
    if u < 1 or (F.q - 1) % u:
        raise PreconditionError(f"{name}={u} does not divide q-1={F.q - 1}")
    if gcd(u, F.m) != 1:
        raise PreconditionError(f"gcd({name}, m) = gcd({u}, {F.m}) != 1")


def build_cosets(field: FieldTable, e: int, r: int) -> CosetSystem:
    """Tabulate the classes D_i (0 <= i < r) and cosets C_i (0 <= i < l), e = l*r.

    Labels are assigned by walking alpha^i D_0 and alpha^(ir) C_0 explicitly.
    """
    if r < 1 or e < 1:
        raise PreconditionError("e and r must be positive")
    if e % r:
        raise PreconditionError(f"r={r} does not divide e={e}")
    if (field.q - 1) % e:
        raise PreconditionError(f"e={e} does not divide q-1={field.q - 1}")
    if gcd(e, field.m) != 1:
        raise PreconditionError(f"gcd(e, m) = gcd({e}, {field.m}) != 1")
    N = field.order
    l = e // r
    a = field.alpha_log

    d_of_log = np.full(N, -1, dtype=np.int64)
    d0_logs = np.arange(0, N, r, dtype=np.int64)
    for i in range(r):
        logs = (i * a + d0_logs) % N
        if np.any(d_of_log[logs] >= 0):
            raise VerificationError(f"D_{i} overlaps an earlier class")
        d_of_log[logs] = i
    c_of_log = np.full(N, -1, dtype=np.int64)
    c0_logs = np.arange(0, N, e, dtype=np.int64)
    for i in range(l):
        logs = (i * r * a + c0_logs) % N
        if np.any(c_of_log[logs] >= 0):
            raise VerificationError(f"C_{i} overlaps an earlier coset")
        if np.any(d_of_log[logs] != 0):
            raise VerificationError(f"C_{i} is not inside D_0")
        c_of_log[logs] = i
    if np.any(d_of_log < 0) or np.any((d_of_log == 0) != (c_of_log >= 0)):
        raise VerificationError("classes do not partition the multiplicative group")
    return CosetSystem(field=field, e=e, r=r, d_of_log=d_of_log, c_of_log=c_of_log)
