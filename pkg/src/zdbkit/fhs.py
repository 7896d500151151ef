"""Frequency-hopping sequences: Hamming correlation, optimality bounds, linear complexity."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from zdbkit.construct import ConstructionParams
from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.field import FieldTable
from zdbkit.zdb import ZdbFunction, coincidence_counts, is_zdb, lambda_lower_bound


@dataclass(frozen=True, eq=False)
class FhSequence:
    symbols: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        sym = np.asarray(self.symbols, dtype=np.int64)
        if sym.ndim != 1 or sym.size == 0:
            raise ValueError("a sequence is a non-empty 1-D table")
        if sym.min() < 0 or sym.max() >= self.alphabet_size:
            raise ValueError("symbol outside the alphabet")
        object.__setattr__(self, "symbols", sym)

    @property
    def n(self) -> int:
        return len(self.symbols)


def _check_pair(x: FhSequence, y: FhSequence) -> None:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    if x.alphabet_size != y.alphabet_size:
        raise ValueError("alphabet mismatch")


def hamming_correlation(x: FhSequence, y: FhSequence, t: int) -> int:
    """H_{X,Y}(t) = #{i : x_i = y_(i+t)}, indices mod n."""
    _check_pair(x, y)
    return int(np.count_nonzero(x.symbols == np.roll(y.symbols, -t)))


def correlation_profile(x: FhSequence, y: FhSequence) -> np.ndarray:
    """H_{X,Y}(t) for t = 0..n-1."""
    _check_pair(x, y)
    return np.array([np.count_nonzero(x.symbols == np.roll(y.symbols, -t)) for t in range(x.n)], dtype=np.int64)


def h_max(x: FhSequence) -> int:
    """Largest out-of-phase autocorrelation, max over 1 <= t < n."""
    prof = correlation_profile(x, x)
    return int(prof[1:].max()) if x.n > 1 else 0


@dataclass(frozen=True, eq=False)
class FhSet:
    sequences: tuple[FhSequence, ...]

    def __post_init__(self):
        seqs = tuple(self.sequences)
        if not seqs:
            raise ValueError("empty sequence set")
        for s in seqs[1:]:
            _check_pair(seqs[0], s)
        object.__setattr__(self, "sequences", seqs)

    @property
    def n(self) -> int:
        return self.sequences[0].n

    @property
    def N(self) -> int:
        return len(self.sequences)

    @property
    def alphabet_size(self) -> int:
        return self.sequences[0].alphabet_size

    def to_text(self) -> str:
        return "".join(" ".join(map(str, s.symbols.tolist())) + "\n" for s in self.sequences)

    def correlation_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["i", "j", "t", "H"])
        for i, x in enumerate(self.sequences):
            for j, y in enumerate(self.sequences):
                for t, h in enumerate(correlation_profile(x, y).tolist()):
                    w.writerow([i, j, t, h])
        return buf.getvalue()


def m_max(fset: FhSet, n_jobs: int = 1) -> int:
    """M(F): max of out-of-phase auto and all-phase cross correlations."""
    seqs = fset.sequences
    pairs = [(i, j) for i in range(len(seqs)) for j in range(len(seqs))]

    def one(pair):
        i, j = pair
        prof = correlation_profile(seqs[i], seqs[j])
        if i == j:
            return int(prof[1:].max()) if len(prof) > 1 else 0
        return int(prof.max())

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            return max(pool.map(one, pairs))
    return max(map(one, pairs))


def lempel_greenberger_bound(n: int, ell: int) -> int:
    """Lower bound on H(X) for one sequence of length n over ell symbols."""
    if ell < 1:
        raise PreconditionError("alphabet size must be positive")
    if n <= 1:
        return 0
    eps = n % ell
    return -(-(n - eps) * (n + eps - ell) // (ell * (n - 1)))


def peng_fan_bounds(n: int, N: int, ell: int) -> tuple[int, int]:
    """The two lower bounds on M(F) for N sequences of length n over ell symbols."""
    if min(n, N, ell) < 1:
        raise PreconditionError("parameters must be positive")
    nN = n * N
    if nN == 1:
        return 0, 0
    I = nN // ell  # noqa: E741
    b1 = -(-(nN - ell) * n // ((nN - 1) * ell))
    b2 = -(-(2 * I * nN - (I + 1) * I * ell) // ((nN - 1) * N))
    return b1, b2


@dataclass(frozen=True)
class FhReport:
    n: int
    N: int
    ell: int
    lam: int
    M: int
    H: tuple[int, ...]
    lempel_greenberger: int
    peng_fan: tuple[int, int]

    @property
    def optimal_set(self) -> bool:
        return self.M in self.peng_fan

    @property
    def optimal_sequences(self) -> bool:
        return all(h == self.lempel_greenberger for h in self.H)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "ell": self.ell,
            "lambda": self.lam,
            "M": self.M,
            "H": list(self.H),
            "lempel_greenberger": self.lempel_greenberger,
            "peng_fan": list(self.peng_fan),
            "optimal_set": self.optimal_set,
            "optimal_sequences": self.optimal_sequences,
        }


def fhs_report(fset: FhSet, lam: int, n_jobs: int = 1) -> FhReport:
    H = tuple(h_max(s) for s in fset.sequences)
    return FhReport(
        fset.n,
        fset.N,
        fset.alphabet_size,
        lam,
        m_max(fset, n_jobs),
        H,
        lempel_greenberger_bound(fset.n, fset.alphabet_size),
        peng_fan_bounds(fset.n, fset.N, fset.alphabet_size),
    )


def zdb_set_to_fhs(functions: Sequence[ZdbFunction], n_jobs: int = 1) -> tuple[FhSet, FhReport]:
    """s_i(t) = f_i(t); the input must be ZDB with uniform cross coincidences at every shift."""
    lams = set()
    for f in functions:
        chk = is_zdb(f)
        if not chk:
            raise PreconditionError(f"input is not ZDB (shift {chk.witness[0]} has N_0 = {chk.witness[1]})")
        lams.add(chk.lam)
    if len(lams) != 1:
        raise PreconditionError(f"members have different lambda: {sorted(lams)}")
    lam = lams.pop()
    for i, f in enumerate(functions):
        for j, g in enumerate(functions):
            if i != j:
                cc = coincidence_counts(f, g)
                if np.any(cc != lam):
                    a = int(np.flatnonzero(cc != lam)[0])
                    raise PreconditionError(f"cross coincidence of ({i}, {j}) at shift {a} is {int(cc[a])}, not {lam}")
    fset = FhSet(tuple(FhSequence(f.values, f.ell) for f in functions))
    report = fhs_report(fset, lam, n_jobs)
    if report.M != lam or any(h != lam for h in report.H):
        raise VerificationError(f"correlations {report.M}, {report.H} disagree with lambda {lam}")
    return fset, report


# ---------------------------------------------------------------------------
# linear complexity
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LcReport:
    lc: int
    minimal_poly: tuple[int, ...]
    index_set_size: int | None = None
    index_set: tuple[int, ...] | None = field(default=None, repr=False)
    method: str = ""

    def to_dict(self) -> dict:
        return {"lc": self.lc, "minimal_poly": list(self.minimal_poly), "index_set_size": self.index_set_size}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _poly_mul(F: FieldTable, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _poly_mod(F: FieldTable, a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, y))
        while a and a[-1] == 0:
            a.pop()
    return a


def divides_x_power_minus_one(F: FieldTable, poly: Sequence[int], N: int) -> bool:
    """Whether the monic ``poly`` (low to high) divides x^N - 1."""
    poly = list(poly)
    if len(poly) == 1:
        return True
    result, base, e = [1], [0, 1], N
    while e:
        if e & 1:
            result = _poly_mod(F, _poly_mul(F, result, base), poly)
        base = _poly_mod(F, _poly_mul(F, base, base), poly)
        e >>= 1
    return result == [1]


def berlekamp_massey(seq, field: FieldTable, periodic: bool = True) -> LcReport:
    """Shortest LFSR generating ``seq`` (field element codes).

    The connection polynomial 1 + c_1 x + ... + c_L x^L is returned low to high.
    With ``periodic`` the sequence is treated as one period and the run and the
    replay check both cover two periods.
    """
    F = field
    s = np.asarray(seq, dtype=np.int64)
    if s.size == 0:
        raise PreconditionError("empty sequence")
    if periodic:
        s = np.concatenate([s, s])
    C = np.array([1], dtype=np.int64)
    B = np.array([1], dtype=np.int64)
    L, gap, b = 0, 1, 1
    for i in range(len(s)):
        window = s[i - L : i + 1][::-1] if L else s[i : i + 1]
        d = F.sum(F.mul(C[: L + 1], window))
        if d == 0:
            gap += 1
            continue
        coef = F.div(d, b)
        shifted = np.zeros(max(len(C), len(B) + gap), dtype=np.int64)
        shifted[gap : gap + len(B)] = F.mul(coef, B)
        newC = np.zeros_like(shifted)
        newC[: len(C)] = C
        newC = F.sub(newC, shifted)
        if 2 * L <= i:
            B, L, b, gap = C, i + 1 - L, d, 1
        else:
            gap += 1
        C = newC
    C = C[: L + 1] if len(C) > L + 1 else np.pad(C, (0, L + 1 - len(C)))
    # replay: s_i + c_1 s_(i-1) + ... + c_L s_(i-L) = 0 for i >= L
    acc = np.zeros(len(s) - L, dtype=np.int64)
    for j in range(L + 1):
        acc = F.add(acc, F.mul(int(C[j]), s[L - j : len(s) - j]))
    if np.any(acc != 0):
        raise VerificationError("LFSR replay failed")
    return LcReport(L, tuple(int(c) for c in C), method="berlekamp_massey")


def _tile_to_group_order(seq, F: FieldTable) -> np.ndarray:
    s = np.asarray(seq, dtype=np.int64)
    N = F.order
    if N % len(s):
        raise PreconditionError(f"sequence period {len(s)} does not divide q^m - 1 = {N}")
    return np.tile(s, N // len(s))


def expansion_coefficients(seq, field: FieldTable) -> np.ndarray:
    """c_i with s_t = sum_i c_i theta^(i t); inverse DFT c_i = -sum_t s_t theta^(-i t)."""
    F = field
    s = _tile_to_group_order(seq, F)
    N = F.order
    t = np.flatnonzero(s)
    ls = F.log[s[t]]
    coeffs = np.zeros(N, dtype=np.int64)
    for i in range(N):
        # sum over t of theta^(log s_t - i t), then scale by -1 = 1/N in characteristic p
        coeffs[i] = F.neg(F.sum(F.exp[(ls - i * t) % N]))
    return coeffs


def expansion_lc(seq, field: FieldTable) -> LcReport:
    """Linear complexity as the number of nonzero expansion coefficients, re-synthesis checked."""
    F = field
    s = _tile_to_group_order(seq, F)
    N = F.order
    coeffs = expansion_coefficients(s, F)
    I = np.flatnonzero(coeffs)  # noqa: E741
    t = np.arange(N)
    synth = np.zeros(N, dtype=np.int64)
    for i in I:
        synth = F.add(synth, F.mul(int(coeffs[i]), F.exp[(int(i) * t) % N]))
    if np.any(synth != s):
        raise VerificationError("character expansion does not re-synthesize the sequence")
    poly = [1]
    for i in I:
        poly = _poly_mul(F, poly, [F.neg(F.element(int(i))), 1])
    return LcReport(len(I), tuple(poly), len(I), tuple(int(i) for i in I), method="expansion")


# ---------------------------------------------------------------------------
# cyclotomic mapping polynomials
# ---------------------------------------------------------------------------
def cyclotomic_mapping_poly(weights: Sequence[int], field: FieldTable) -> list[int]:
    """Coefficients a_0..a_(e-1) with sum_i a_i x^(i (Q-1)/e) = weights[log(x) mod e] on GF(Q)^*.

    ``weights`` are element codes, one per residue class of the discrete log
    mod e; a_i = e^-1 sum_j d_j theta^(-i j (Q-1)/e).
    """
    F = field
    e = len(weights)
    N = F.order
    if N % e:
        raise PreconditionError(f"e={e} does not divide the group order {N}")
    if e % F.p == 0:
        raise PreconditionError(f"e={e} is not invertible in characteristic {F.p}")
    e_inv = F.inv(e % F.p)
    step = N // e
    d = np.asarray(weights, dtype=np.int64)
    j = np.arange(e)
    out = []
    for i in range(e):
        terms = F.mul(d, F.exp[(-i * j * step) % N])
        out.append(F.mul(e_inv, F.sum(terms)))
    return out


def evaluate_mapping_poly(coeffs: Sequence[int], x, u: int, field: FieldTable):
    """(sum_i a_i x^(i (Q-1)/e)) x^u for nonzero x."""
    F = field
    e = len(coeffs)
    step = F.order // e
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    for i, a in enumerate(coeffs):
        acc = F.add(acc, F.mul(int(a), F.pow(x, i * step)))
    return F.mul(acc, F.pow(x, u))


def construction_mapping_coefficients(params: ConstructionParams) -> list[int]:
    """a_0..a_(l-1) with rho(t) = sum_i a_i theta^(i t (Q-1)/l) for the construction's weights."""
    F, cs = params.field, params.cosets
    # rho(t) depends on t only through t mod l; weight for residue j is d at the C-index of theta^(rj)
    d_by_residue = [F.element(params.d_logs[cs.c_of_log[(params.r * j) % F.order]]) for j in range(params.l)]
    return cyclotomic_mapping_poly(d_by_residue, F)


def expansion_exponents_distinct(params: ConstructionParams) -> bool:
    """Whether q^k (j (Q-1)/l + r u) mod (Q-1) are pairwise distinct over k < m, j < l."""
    F = params.field
    N, l, q = F.order, params.l, F.q
    exps = {(pow(q, k, N) * (j * N // l + params.r * params.u)) % N for k in range(F.m) for j in range(l)}
    return len(exps) == F.m * l


def predicted_lc(params: ConstructionParams) -> int:
    """m times the number of nonzero mapping coefficients (valid when exponents are distinct)."""
    return params.field.m * sum(1 for a in construction_mapping_coefficients(params) if a)


@dataclass(frozen=True)
class LcBoundsReport:
    m: int
    l: int
    lcs: tuple[int, ...]
    predicted: int

    @property
    def within(self) -> bool:
        return all(self.m <= x <= self.l * self.m for x in self.lcs)

    @property
    def extreme(self) -> str | None:
        if all(x == self.m for x in self.lcs):
            return "lower"
        if all(x == self.l * self.m for x in self.lcs):
            return "upper"
        return None


def lc_bounds_check(functions: Sequence[ZdbFunction], params: ConstructionParams) -> LcBoundsReport:
    """Linear complexity of each member by both engines; they must agree and lie in [m, l m]."""
    F = params.field
    lcs = []
    for f in functions:
        seq = f.field_values()
        bm = berlekamp_massey(seq, F)
        ex = expansion_lc(seq, F)
        if bm.lc != ex.lc:
            raise VerificationError(f"Berlekamp-Massey LC {bm.lc} != expansion LC {ex.lc}")
        lcs.append(bm.lc)
    report = LcBoundsReport(F.m, params.l, tuple(lcs), predicted_lc(params))
    if not report.within:
        raise VerificationError(f"linear complexities {lcs} outside [{F.m}, {params.l * F.m}]")
    return report


__all__ = [
    "FhSequence",
    "FhSet",
    "FhReport",
    "LcReport",
    "LcBoundsReport",
    "hamming_correlation",
    "correlation_profile",
    "h_max",
    "m_max",
    "lempel_greenberger_bound",
    "peng_fan_bounds",
    "fhs_report",
    "zdb_set_to_fhs",
    "berlekamp_massey",
    "expansion_coefficients",
    "expansion_lc",
    "divides_x_power_minus_one",
    "cyclotomic_mapping_poly",
    "evaluate_mapping_poly",
    "construction_mapping_coefficients",
    "expansion_exponents_distinct",
    "predicted_lc",
    "lc_bounds_check",
    "lambda_lower_bound",
]
