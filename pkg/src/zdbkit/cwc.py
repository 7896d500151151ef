"""Constant-weight codes from ZDB sets and the Fu-Vinck-Shen size bound."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.zdb import FieldCodomain, ZdbFunction

DEFAULT_MAX_PAIRS = 10**7
SAMPLED_PAIRS = 10**5


@dataclass(frozen=True, eq=False)
class ConstantWeightCode:
    """Codewords as rows of codomain indices; index 0 is the zero symbol."""

    codewords: np.ndarray
    ell: int
    codomain: FieldCodomain | None = None

    def __post_init__(self):
        words = np.asarray(self.codewords, dtype=np.int64)
        if words.ndim != 2:
            raise ValueError("codewords must form a 2-D table")
        object.__setattr__(self, "codewords", words)

    @property
    def n(self) -> int:
        return self.codewords.shape[1]

    @property
    def size(self) -> int:
        return self.codewords.shape[0]

    def weights(self) -> np.ndarray:
        return np.count_nonzero(self.codewords != 0, axis=1)

    @property
    def w(self) -> int:
        ws = np.unique(self.weights())
        if len(ws) != 1:
            raise VerificationError(f"codeword weights are not constant: {ws.tolist()}")
        return int(ws[0])

    def to_csv(self) -> str:
        """One codeword per row; each symbol is its components' base-field logs joined by ':' (z for zero)."""
        buf = io.StringIO()
        w = csv.writer(buf)
        cod = self.codomain
        if cod is None:
            for row in self.codewords:
                w.writerow(row.tolist())
            return buf.getvalue()
        F = cod.field
        cells = {}
        for idx in np.unique(self.codewords).tolist():
            comps = cod.decode(np.array([idx]))[:, 0]
            cells[idx] = ":".join("z" if c == 0 else str(F.base_log(int(c))) for c in comps)
        for row in self.codewords:
            w.writerow([cells[x] for x in row.tolist()])
        return buf.getvalue()


def build_cwc(functions: Sequence[ZdbFunction]) -> ConstantWeightCode:
    """Codewords c_j^i = (f_i(j), f_i(1 + j), ..., f_i(n - 1 + j)) for every member i and shift j."""
    if not functions:
        raise PreconditionError("empty function set")
    n, ell = functions[0].n, functions[0].ell
    if any(f.n != n or f.ell != ell for f in functions):
        raise PreconditionError("functions must share domain and codomain")
    idx = (np.arange(n)[None, :] + np.arange(n)[:, None]) % n
    words = np.vstack([f.values[idx] for f in functions])
    if len(np.unique(words, axis=0)) != len(words):
        raise VerificationError("duplicate codewords; the set violates the cross-coincidence property")
    cod = functions[0].codomain
    return ConstantWeightCode(words, ell, cod if isinstance(cod, FieldCodomain) else None)


@dataclass(frozen=True)
class DistanceScan:
    d: int
    exhaustive: bool
    pairs_checked: int


def _row_min(words: np.ndarray, i: int) -> int:
    rest = words[i + 1 :]
    return int(np.count_nonzero(rest != words[i], axis=1).min())


def min_distance_scan(
    code: ConstantWeightCode,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    allow_sampling: bool = False,
    seed: int = 0,
    n_jobs: int = 1,
) -> DistanceScan:
    words = code.codewords
    N = len(words)
    if N < 2:
        raise PreconditionError("need at least two codewords")
    pairs = N * (N - 1) // 2
    if pairs <= max_pairs:
        rows = range(N - 1)
        if n_jobs > 1:
            with ThreadPoolExecutor(n_jobs) as pool:
                d = min(pool.map(lambda i: _row_min(words, i), rows))
        else:
            d = min(_row_min(words, i) for i in rows)
        return DistanceScan(d, True, pairs)
    if not allow_sampling:
        raise PreconditionError(f"{pairs} pairs exceed the cap of {max_pairs}; pass allow_sampling for an estimate")
    rng = np.random.default_rng(seed)
    i = rng.integers(0, N, SAMPLED_PAIRS)
    j = (i + rng.integers(1, N, SAMPLED_PAIRS)) % N
    d = int(np.count_nonzero(words[i] != words[j], axis=1).min())
    return DistanceScan(d, False, SAMPLED_PAIRS)


def min_distance(code: ConstantWeightCode, max_pairs: int = DEFAULT_MAX_PAIRS) -> int:
    """Exact minimum Hamming distance over all unordered pairs."""
    return min_distance_scan(code, max_pairs).d


@dataclass(frozen=True)
class FvsBound:
    n: int
    d: int
    w: int
    ell: int
    value: Fraction | None

    @property
    def applicable(self) -> bool:
        return self.value is not None

    def optimal(self, size: int) -> bool | None:
        if self.value is None:
            return None
        return size >= self.value.numerator // self.value.denominator


def fvs_bound(n: int, d: int, w: int, ell: int) -> FvsBound:
    """A_ell(n, d, w) <= nd / (nd - 2nw + ell w^2/(ell - 1)), when the denominator is positive."""
    if ell < 2:
        raise PreconditionError("alphabet needs at least two symbols")
    denom = Fraction(n * d - 2 * n * w) + Fraction(ell * w * w, ell - 1)
    if denom <= 0:
        return FvsBound(n, d, w, ell, None)
    return FvsBound(n, d, w, ell, Fraction(n * d) / denom)


@dataclass(frozen=True)
class CodeReport:
    n: int
    N: int
    d: int
    w: int
    ell: int
    bound: FvsBound
    exhaustive: bool = True

    @property
    def optimal(self) -> bool | None:
        return self.bound.optimal(self.N)

    def to_dict(self) -> dict:
        v = self.bound.value
        return {
            "n": self.n,
            "N": self.N,
            "d": self.d,
            "w": self.w,
            "ell": self.ell,
            "fvs_bound_num": v.numerator if v is not None else None,
            "fvs_bound_den": v.denominator if v is not None else None,
            "optimal": self.optimal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def code_report(code: ConstantWeightCode, n_jobs: int = 1, **scan_kwargs) -> CodeReport:
    scan = min_distance_scan(code, n_jobs=n_jobs, **scan_kwargs)
    w = code.w
    return CodeReport(code.n, code.size, scan.d, w, code.ell, fvs_bound(code.n, scan.d, w, code.ell), scan.exhaustive)


__all__ = [
    "ConstantWeightCode",
    "DistanceScan",
    "FvsBound",
    "CodeReport",
    "build_cwc",
    "min_distance",
    "min_distance_scan",
    "fvs_bound",
    "code_report",
]
