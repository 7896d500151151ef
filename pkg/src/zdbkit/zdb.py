"""Zero-difference balanced functions on Z_n: exhaustive spectra, lower bounds, PDFs."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.field import FieldTable

_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# codomains
# ---------------------------------------------------------------------------
class Codomain:
    """An abelian group whose elements are encoded as indices 0..size-1; index 0 is zero."""

    size: int

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise TypeError(f"{type(self).__name__} has no group structure")

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class FieldCodomain(Codomain):
    """GF(q)^v, encoded as sum_j idx_j * q^j with idx_j a position in ``field.base_elements``."""

    field: FieldTable
    v: int = 1

    @property
    def size(self) -> int:  # type: ignore[override]
        return self.field.q**self.v

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def _sub_table(self) -> np.ndarray:
        cached = self.__dict__.get("_sub_cache")
        if cached is None:
            F, base = self.field, self.field.base_elements
            cached = F.base_index[F.sub(base[:, None], base[None, :])]
            object.__setattr__(self, "_sub_cache", cached)
        return cached

    def sub(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.v == 1:
            return self._sub_table[a, b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.v):
            out += self._sub_table[(a // place) % self.q, (b // place) % self.q] * place
            place *= self.q
        return out

    def encode(self, components) -> np.ndarray:
        """Big-field codes of shape (v, ...) -> codomain indices."""
        comps = np.asarray(components, dtype=np.int64).reshape((self.v,) + np.shape(components)[1:])
        idx = self.field.base_index[comps]
        if np.any(idx < 0):
            raise ValueError("component outside GF(q)")
        weights = (self.q ** np.arange(self.v, dtype=np.int64)).reshape((self.v,) + (1,) * (comps.ndim - 1))
        return (idx * weights).sum(axis=0)

    def decode(self, idx) -> np.ndarray:
        """Codomain indices -> big-field component codes, shape (v, ...)."""
        idx = np.asarray(idx, dtype=np.int64)
        return np.stack([self.field.base_elements[(idx // self.q**j) % self.q] for j in range(self.v)])

    def describe(self) -> dict:
        return {"kind": "field", "q": self.q, "v": self.v}


@dataclass(frozen=True)
class CyclicCodomain(Codomain):
    """Z_size under addition."""

    size: int

    def sub(self, a, b):
        return (np.asarray(a) - np.asarray(b)) % self.size

    def describe(self) -> dict:
        return {"kind": "cyclic", "size": self.size}


@dataclass(frozen=True)
class LabelCodomain(Codomain):
    """A bare label set; only coincidence (zero-difference) counts make sense."""

    size: int

    def describe(self) -> dict:
        return {"kind": "labels", "size": self.size}


# ---------------------------------------------------------------------------
# functions and spectra
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ZdbFunction:
    """A total map Z_n -> codomain, stored as a table of codomain indices."""

    values: np.ndarray
    codomain: Codomain
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("values must be a non-empty 1-D table")
        if vals.min() < 0 or vals.max() >= self.codomain.size:
            raise ValueError("value outside the codomain")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def ell(self) -> int:
        return self.codomain.size

    def preimage_sizes(self) -> np.ndarray:
        """tau_b = |f^-1(b)| for every codomain index b (zeros included)."""
        return np.bincount(self.values, minlength=self.ell)

    def is_onto(self) -> bool:
        return bool(np.all(self.preimage_sizes() > 0))

    def component(self, j: int) -> ZdbFunction:
        """The j-th coordinate function of a GF(q)^v valued function."""
        cod = self.codomain
        if not isinstance(cod, FieldCodomain):
            raise TypeError("component() needs a field codomain")
        vals = (self.values // cod.q**j) % cod.q
        return ZdbFunction(vals, FieldCodomain(cod.field, 1), {**self.provenance, "component": j})

    def field_values(self) -> np.ndarray:
        """Big-field codes of a GF(q)-valued function."""
        cod = self.codomain
        if not isinstance(cod, FieldCodomain) or cod.v != 1:
            raise TypeError("field_values() needs a GF(q) codomain")
        return cod.field.base_elements[self.values]


@dataclass(frozen=True, eq=False)
class DifferenceSpectrum:
    """counts[a, b] = N_b(a); row 0 is the trivial shift.

    ``domain_size`` is the number of points x counted per row (n for the
    additive presentation; n + 1 when the zero element is adjoined).
    """

    counts: np.ndarray
    domain_size: int
    presentation: str = "additive"

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def lam(self) -> int | None:
        zero = self.counts[1:, 0]
        if zero.size == 0:
            return 0
        return int(zero[0]) if np.all(zero == zero[0]) else None

    def zero_counts(self) -> np.ndarray:
        return self.counts[1:, 0]

    def row_sums_ok(self) -> bool:
        return bool(np.all(self.counts[1:].sum(axis=1) == self.domain_size))

    def nonzero_value_set(self) -> set[int]:
        """Distinct values of N_b(a) over a != 0, b != 0."""
        return set(np.unique(self.counts[1:, 1:]).tolist())

    def distribution_for(self, b: int) -> dict[int, int]:
        """How often each value of N_b(a) occurs over the nonzero shifts, b fixed."""
        return dict(sorted(Counter(self.counts[1:, b].tolist()).items()))

    def pair_distribution(self) -> dict[int, int]:
        """Distribution of N_b(a) over all pairs (a != 0, b != 0)."""
        return dict(sorted(Counter(self.counts[1:, 1:].ravel().tolist()).items()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["a"] + [f"b{b}" for b in range(self.counts.shape[1])])
        for a in range(1, self.n):
            w.writerow([a] + self.counts[a].tolist())
        return buf.getvalue()


def _shift_rows(f: ZdbFunction, shifts: np.ndarray) -> np.ndarray:
    t = np.arange(f.n)
    shifted = f.values[(t[None, :] + shifts[:, None]) % f.n]
    diff = f.codomain.sub(shifted, f.values[None, :])
    offs = (np.arange(len(shifts)) * f.ell)[:, None]
    return np.bincount((diff + offs).ravel(), minlength=len(shifts) * f.ell).reshape(len(shifts), f.ell)


def difference_spectrum(f: ZdbFunction, n_jobs: int = 1) -> DifferenceSpectrum:
    """Exact N_b(a) for every shift a and codomain value b (one row per shift)."""
    rows_per_chunk = max(1, _CHUNK // max(f.n, 1))
    chunks = [np.arange(s, min(s + rows_per_chunk, f.n)) for s in range(0, f.n, rows_per_chunk)]
    if n_jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            parts = list(pool.map(lambda c: _shift_rows(f, c), chunks))
    else:
        parts = [_shift_rows(f, c) for c in chunks]
    return DifferenceSpectrum(np.vstack(parts), domain_size=f.n)


def with_zero_adjoined(spec: DifferenceSpectrum) -> DifferenceSpectrum:
    """Counts when x also ranges over the zero element, taking f(0) = 0.

    This is the multiplicative reading N_b(delta) = |{x in GF(q^m) : f(delta x) - f(x) = b}|
    for a function on D_0 extended by f(0) = 0; zero only adds to N_0.
    """
    counts = spec.counts.copy()
    counts[:, 0] += 1
    return DifferenceSpectrum(counts, spec.domain_size + 1, presentation="multiplicative+zero")


def is_difference_balanced(spec: DifferenceSpectrum) -> bool:
    """N_0(a) = (n+1)/ell - 1 and N_b(a) = (n+1)/ell for all b != 0, a != 0."""
    n, ell = spec.domain_size, spec.counts.shape[1]
    if (n + 1) % ell:
        return False
    target = (n + 1) // ell
    rows = spec.counts[1:]
    return bool(np.all(rows[:, 0] == target - 1) and np.all(rows[:, 1:] == target))


@dataclass(frozen=True)
class ZdbCheck:
    lam: int | None
    witness: tuple[int, int] | None = None  # (shift, deviant N_0)
    reference: int | None = None

    def __bool__(self) -> bool:
        return self.lam is not None


def coincidence_counts(f: ZdbFunction, g: ZdbFunction) -> np.ndarray:
    """c[a] = |{t : f(t+a) = g(t)}| for every a in Z_n."""
    if f.n != g.n:
        raise ValueError("functions have different domains")
    t = np.arange(f.n)
    out = np.empty(f.n, dtype=np.int64)
    step = max(1, _CHUNK // f.n)
    for s in range(0, f.n, step):
        a = np.arange(s, min(s + step, f.n))
        out[a] = np.count_nonzero(f.values[(t[None, :] + a[:, None]) % f.n] == g.values[None, :], axis=1)
    return out


def is_zdb(f: ZdbFunction) -> ZdbCheck:
    """lambda when N_0(a) is constant over a != 0, else the first deviating shift."""
    zeros = coincidence_counts(f, f)[1:]
    if zeros.size == 0:
        return ZdbCheck(0)
    bad = np.flatnonzero(zeros != zeros[0])
    if bad.size:
        a = int(bad[0]) + 1
        return ZdbCheck(None, witness=(a, int(zeros[a - 1])), reference=int(zeros[0]))
    return ZdbCheck(int(zeros[0]))


def sum_identities_check(f: ZdbFunction, lam: int) -> tuple[int, int]:
    """Preimage sizes must satisfy sum tau = n and sum tau^2 = n + lam (n - 1)."""
    tau = f.preimage_sizes()
    s1, s2 = int(tau.sum()), int((tau**2).sum())
    if s1 != f.n or s2 != f.n + lam * (f.n - 1):
        raise VerificationError(f"sum identities fail: sum={s1}, sum of squares={s2}, expected {f.n + lam * (f.n - 1)}")
    return s1, s2


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------
def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lambda_lower_bound(n: int, ell: int) -> int:
    """Smallest lambda any (n, ell, lambda)-ZDB function can have."""
    if ell < 1 or n < ell:
        raise PreconditionError("need 1 <= ell <= n")
    if n == 1:
        return 0
    eps = n % ell
    return _ceil_div((n - eps) * (n + eps - ell), ell * (n - 1))


@dataclass(frozen=True)
class LambdaBound:
    value: int
    epsilon: int
    exact: Fraction
    tight_profile: dict[int, int]  # preimage size -> multiplicity forced at equality

    @property
    def integral(self) -> bool:
        return self.exact.denominator == 1


def lambda_bound_report(n: int, ell: int) -> LambdaBound:
    value = lambda_lower_bound(n, ell)
    eps = n % ell
    k = n // ell
    exact = Fraction((n - eps) * (n + eps - ell), ell * (n - 1)) if n > 1 else Fraction(0)
    profile = {k: ell - eps}
    if eps:
        profile[k + 1] = eps
    return LambdaBound(value, eps, exact, profile)


@dataclass(frozen=True)
class PreimageBounds:
    n: int
    ell: int
    lam: int
    delta: int
    special: str | None

    @property
    def lower(self) -> float:
        return (self.n - math.sqrt(self.delta)) / self.ell

    @property
    def upper(self) -> float:
        return (self.n + math.sqrt(self.delta)) / self.ell

    def contains(self, tau: int) -> bool:
        """Exact test of (n - sqrt(delta))/ell <= tau <= (n + sqrt(delta))/ell."""
        return (self.ell * tau - self.n) ** 2 <= self.delta

    def integer_range(self) -> tuple[int, int]:
        lo = next(t for t in range(0, self.n + 1) if self.contains(t))
        hi = max(t for t in range(lo, self.n + 1) if self.contains(t))
        return lo, hi


def preimage_size_bounds(n: int, ell: int, lam: int) -> PreimageBounds:
    delta = (n + lam * n - lam) * ell**2 - (n * n + n + lam * n - lam) * ell + n * n
    if delta < 0:
        raise PreconditionError(f"inconsistent parameters ({n}, {ell}, {lam}): delta = {delta} < 0")
    special = None
    if lam * ell == n:
        special = "perfect_nonlinear"  # delta = n (ell - 1)^2
    elif (lam + 1) * ell == n + 1:
        special = "difference_balanced"  # delta = (ell - 1)^2
    return PreimageBounds(n, ell, lam, delta, special)


# ---------------------------------------------------------------------------
# partitioned difference families
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PdfFamily:
    n: int
    blocks: tuple[tuple[int, ...], ...]
    lam: int | None = None

    @property
    def K(self) -> list[int]:
        return sorted(len(b) for b in self.blocks)

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "blocks": [list(b) for b in self.blocks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> PdfFamily:
        return cls(int(data["n"]), tuple(tuple(int(x) for x in b) for b in data["blocks"]), data.get("lambda"))


@dataclass(frozen=True)
class PdfCheck:
    lam: int | None
    witness: tuple[int, int] | None = None  # (g, deviant count)

    def __bool__(self) -> bool:
        return self.lam is not None


def to_pdf(f: ZdbFunction) -> PdfFamily:
    """Blocks are the nonempty preimage sets f^-1(b)."""
    order = np.argsort(f.values, kind="stable")
    sorted_vals = f.values[order]
    cuts = np.flatnonzero(np.diff(sorted_vals)) + 1
    blocks = tuple(tuple(sorted(int(x) for x in part)) for part in np.split(order, cuts))
    lam = is_zdb(f).lam
    return PdfFamily(f.n, blocks, lam)


def verify_pdf(pdf: PdfFamily) -> PdfCheck:
    """Check the blocks partition Z_n and count internal differences per nonzero g."""
    seen = np.zeros(pdf.n, dtype=np.int64)
    for b in pdf.blocks:
        arr = np.asarray(b, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= pdf.n):
            raise PreconditionError("block element outside Z_n")
        np.add.at(seen, arr, 1)
    if np.any(seen != 1):
        bad = int(np.flatnonzero(seen != 1)[0])
        raise PreconditionError(f"blocks do not partition Z_{pdf.n}: {bad} covered {int(seen[bad])} times")
    cover = np.zeros(pdf.n, dtype=np.int64)
    for b in pdf.blocks:
        arr = np.asarray(b, dtype=np.int64)
        if arr.size > 1:
            diffs = (arr[:, None] - arr[None, :]) % pdf.n
            cover += np.bincount(diffs.ravel(), minlength=pdf.n)
    rest = cover[1:]
    if rest.size == 0:
        return PdfCheck(0)
    bad = np.flatnonzero(rest != rest[0])
    if bad.size:
        g = int(bad[0]) + 1
        return PdfCheck(None, witness=(g, int(cover[g])))
    return PdfCheck(int(rest[0]))
