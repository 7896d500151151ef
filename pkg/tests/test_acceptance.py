"""Acceptance suite: one PASS/FAIL line per criterion, with pinned time limits.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from zdbkit.construct import (
    ConstructionParams,
    construct_vector_zdb,
    construct_vector_zdb_set,
    construct_zdb,
    construct_zdb_set,
    interleave,
    random_valid_weights,
)
from zdbkit.cwc import build_cwc, code_report
from zdbkit.cyclotomy import build_cosets
from zdbkit.exceptions import PreconditionError
from zdbkit.fhs import (
    berlekamp_massey,
    expansion_lc,
    lc_bounds_check,
    lempel_greenberger_bound,
    m_max,
    peng_fan_bounds,
    zdb_set_to_fhs,
)
from zdbkit.field import build_field
from zdbkit.zdb import (
    coincidence_counts,
    difference_spectrum,
    is_zdb,
    lambda_lower_bound,
    preimage_size_bounds,
    to_pdf,
    verify_pdf,
    with_zero_adjoined,
)

GF27 = [1, 2, 0, 1]
GF729 = [2, 2, 1, 0, 2, 0, 1]

# time limits in seconds, one per criterion
LIMITS = {1: 1, 2: 10, 3: 10, 4: 120, 5: 60, 6: 30, 7: 10, 8: 60, 9: 120, 10: 120}

# (q, m, r, u, e) rows of the bound-concordance matrix
MATRIX = [(3, 3, 1, 1, 2), (3, 3, 2, 1, 2), (9, 3, 2, 1, 4), (5, 3, 2, 1, 4), (7, 3, 2, 1, 2), (7, 3, 3, 1, 3)]
RANDOM_WEIGHTS_PER_ROW = 4


ACCEPTANCE_LINES = []


def report(criterion, ok, detail, elapsed):
    limit = LIMITS[int(str(criterion).rstrip("ab"))]
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.2f}s, limit {limit}s)  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def field_for(q, m):
    p = next(c for c in range(2, q + 1) if q % c == 0)
    k = round(np.log(q) / np.log(p))
    if (q, m) == (3, 3):
        return build_field(3, 3, 1, GF27)
    if (q, m) == (9, 3):
        return build_field(3, 6, 2, GF729)
    return build_field(p, k * m, k)


def matrix_instances(rows=MATRIX):
    """Every row with a coset system: all-equal weights plus seeded random valid weights."""
    out = []
    for q, m, r, u, e in rows:
        F = field_for(q, m)
        try:
            cs = build_cosets(F, e, r)
        except PreconditionError:
            continue
        rng = np.random.default_rng(q * 1000 + e * 10 + r)
        weights = {tuple([0] * cs.l)}
        while len(weights) < 1 + RANDOM_WEIGHTS_PER_ROW:
            weights.add(random_valid_weights(cs, u, rng))
        for d in sorted(weights):
            out.append(((q, m, r, u, e), ConstructionParams(cs, d, u=u)))
    return out


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_1_example1():
    with Timer() as t:
        F = build_field(3, 3, 1, GF27)
        f = construct_zdb(ConstructionParams(build_cosets(F, 2, 1), (0, 2)))
        spec = difference_spectrum(f)
        mult = with_zero_adjoined(spec)
        zero_counts = set(mult.zero_counts().tolist())
        dists = [mult.distribution_for(b) for b in (1, 2)]
        sums = [sum(k * v for k, v in d.items()) for d in dists]
    ok = (
        zero_counts == {9}
        and len(mult.zero_counts()) == 25
        and spec.lam == 8
        and all(d == {6: 4, 9: 17, 12: 4} for d in dists)
        and sums == [225, 225]
        and t.elapsed < LIMITS[1]
    )
    report(1, ok, f"N_0(delta)={sorted(zero_counts)} over GF(27), lambda(Z_26)={spec.lam}, N_b distribution={dists[0]}, sum={sums}", t.elapsed)
    assert ok


def test_criterion_2_example2():
    with Timer() as t:
        F = build_field(3, 6, 2, GF729)
        cs = build_cosets(F, 4, 2)
        ex = difference_spectrum(construct_zdb(ConstructionParams(cs, (4, 8))))
        ctl = difference_spectrum(construct_zdb(ConstructionParams(cs, (0, 0))))
    ok = ex.lam == 40 and ex.nonzero_value_set() == {36, 45, 54} and ctl.nonzero_value_set() == {36, 45} and t.elapsed < LIMITS[2]
    report(2, ok, f"lambda={ex.lam}, values={sorted(ex.nonzero_value_set())}, control={sorted(ctl.nonzero_value_set())}", t.elapsed)
    assert ok


def test_criterion_3_example3():
    with Timer() as t:
        F = build_field(3, 6, 2, GF729)
        fs = construct_zdb_set(ConstructionParams(build_cosets(F, 4, 2), (4, 8), g_logs=(0, 91)))
        params = [(f.n, f.ell, is_zdb(f).lam) for f in fs]
        cross = set(coincidence_counts(fs[0], fs[1]).tolist()) | set(coincidence_counts(fs[1], fs[0]).tolist())
    ok = params == [(364, 9, 40)] * 2 and cross == {40} and t.elapsed < LIMITS[3]
    report(3, ok, f"members={params}, cross zero-counts={sorted(cross)}", t.elapsed)
    assert ok


def _concordance(instances):
    bad = []
    for row, P in instances:
        q, m, r, _, _ = row
        f = construct_zdb(P)
        lam = is_zdb(f).lam
        expected = (q ** (m - 1) - 1) // r
        bound = lambda_lower_bound(f.n, f.ell)
        pb = preimage_size_bounds(f.n, f.ell, expected)
        in_range = all(pb.contains(int(t)) for t in f.preimage_sizes())
        if not (lam == expected == bound == lempel_greenberger_bound(f.n, f.ell) and in_range):
            bad.append((row, P.d_logs, lam, expected, bound, in_range))
    return bad


def test_criterion_4_bound_concordance():
    with Timer() as t:
        instances = matrix_instances()
        bad = _concordance(instances)
        rows = sorted({row for row, _ in instances})
    ok = not bad and t.elapsed < LIMITS[4]
    report("4a", ok, f"{len(instances)} instances over rows {rows}; mismatches={bad}", t.elapsed)
    assert ok


def test_criterion_4_row_7_3_3_1_3():
    # The l = 1 construction needs no coset labels: f(t) = tr(d theta^(3t)) on Z_114.
    # Coset tabulation is refused here because gcd(e, m) = 3, so build the table directly.
    with Timer() as t:
        q, m, r, e = 7, 3, 3, 3
        F = field_for(q, m)
        refused = False
        try:
            build_cosets(F, e, r)
        except PreconditionError:
            refused = True
        n = F.order // r
        t_ = np.arange(n)
        observed = set()
        lams = []
        for d_log in range(0, F.order, 19):
            vals = F.trace(F.element(d_log + r * t_))
            zeros = [int(np.count_nonzero(vals[(t_ + a) % n] == vals)) for a in range(1, n)]
            observed |= set(zeros)
            lams.append(zeros[0] if len(set(zeros)) == 1 else None)
        expected = (q ** (m - 1) - 1) // r
    ok = all(lam == expected for lam in lams) and t.elapsed < LIMITS[4]
    report(
        "4b",
        ok,
        f"(7,3,3,1,3): coset tabulation refused={refused}; claimed lambda={expected}, "
        f"observed N_0 values {sorted(observed)} over {len(lams)} choices of d",
        t.elapsed,
    )
    assert ok


def _verify_family(fs, n, ell, lam):
    for f in fs:
        if (f.n, f.ell) != (n, ell) or is_zdb(f).lam != lam or difference_spectrum(f).lam != lam:
            return False
    for i, f in enumerate(fs):
        for j, g in enumerate(fs):
            if i != j and set(coincidence_counts(f, g).tolist()) != {lam}:
                return False
    return True


def vector_cases():
    F27 = build_field(3, 3, 1, GF27)
    F729 = build_field(3, 6, 2, GF729)
    return [
        (F27, 2, 1, (0, 0)),
        (F27, 2, 2, (0,)),
        (F729, 4, 2, (4, 8)),
    ]


def test_criterion_5_vector_families():
    with Timer() as t:
        results = []
        for F, e, r, d in vector_cases():
            cs = build_cosets(F, e, r)
            for v in (1, 2):
                P = ConstructionParams(cs, d, a_logs=tuple(range(v)))
                fs = construct_vector_zdb_set(P)
                n, ell, lam = (F.order // r, F.q**v, (F.q ** (F.m - v) - 1) // r)
                results.append(((F.q, F.m, r, v), (n, ell, lam), len(fs), _verify_family(fs, n, ell, lam)))
    ok = all(r[-1] for r in results) and t.elapsed < LIMITS[5]
    report(5, ok, "; ".join(f"{k}->{p} x{c} {'ok' if g else 'BAD'}" for k, p, c, g in results), t.elapsed)
    assert ok


def test_criterion_6_interleaving():
    with Timer() as t:
        F = build_field(3, 3, 1, GF27)
        cs = build_cosets(F, 2, 2)
        got = []
        for v in (1, 2):
            fs = construct_vector_zdb_set(ConstructionParams(cs, (0,), a_logs=tuple(range(v))))
            g = interleave(fs, 2)
            lam = difference_spectrum(g).lam
            got.append((v, g.n, lam, 2 * (F.q ** (F.m - v) - 1) // 2))
        F729 = build_field(3, 6, 2, GF729)
        pair = construct_zdb_set(ConstructionParams(build_cosets(F729, 4, 2), (4, 8)))
        try:
            interleave(pair, 2)
            rejected = False
        except PreconditionError:
            rejected = True
    ok = all(lam == want for _, _, lam, want in got) and rejected and t.elapsed < LIMITS[6]
    report(6, ok, f"(v, kn, lambda, k(q^(m-v)-1)/r)={got}; gcd(2,364) instance rejected={rejected}", t.elapsed)
    assert ok


def test_criterion_7_peng_fan():
    with Timer() as t:
        F = build_field(3, 6, 2, GF729)
        fs = construct_zdb_set(ConstructionParams(build_cosets(F, 4, 2), (4, 8)))
        fset, rep = zdb_set_to_fhs(fs)
        M = m_max(fset)
        pf = peng_fan_bounds(364, 2, 9)
    ok = M == 40 and pf == (40, 40) and rep.optimal_set and t.elapsed < LIMITS[7]
    report(7, ok, f"M(F)={M}, Peng-Fan={pf}", t.elapsed)
    assert ok


def _lc(P, fs):
    rows = []
    for f in fs:
        s = f.field_values()
        rows.append((berlekamp_massey(s, P.field).lc, expansion_lc(s, P.field).lc))
    return rows


def test_criterion_8_linear_complexity():
    with Timer() as t:
        F729 = build_field(3, 6, 2, GF729)
        cs = build_cosets(F729, 4, 2)
        lines = []
        ok = True
        # all-equal weights: lower extreme m
        for F, e, r in ((F729, 4, 2), (build_field(3, 3, 1, GF27), 2, 1)):
            c = build_cosets(F, e, r)
            P = ConstructionParams(c, (0,) * c.l)
            rows = _lc(P, construct_zdb_set(P))
            ok &= all(a == b == F.m for a, b in rows)
            lines.append(f"equal d on GF({F.q}^{F.m}): {rows}")
        # d_j = theta^(rj), u = 1: upper extreme l m
        upper = [
            ConstructionParams(build_cosets(build_field(2, 8, 2), 3, 1), (0, 1, 2)),
            ConstructionParams(build_cosets(build_field(7, 4, 1), 3, 1), (0, 1, 2)),
            ConstructionParams(cs, (0, 2)),
        ]
        for P in upper:
            fs = construct_zdb_set(P, force=True)
            rows = _lc(P, fs)
            ok &= all(a == b == P.l * P.field.m for a, b in rows)
            lines.append(f"d_j=theta^(rj) on GF({P.field.q}^{P.field.m}) l={P.l}: {rows}")
        # random valid weights
        rng = np.random.default_rng(0)
        seen = []
        for _ in range(20):
            P = ConstructionParams(cs, random_valid_weights(cs, 1, rng))
            fs = construct_zdb_set(P)
            rows = _lc(P, fs)
            ok &= all(a == b and 3 <= a <= 6 for a, b in rows)
            lc_bounds_check(fs, P)
            seen += [a for a, _ in rows]
        lines.append(f"20 random valid d: LC values {sorted(set(seen))}")
    ok = ok and t.elapsed < LIMITS[8]
    report(8, ok, "; ".join(lines), t.elapsed)
    assert ok


def test_criterion_9_constant_weight_codes():
    with Timer() as t:
        F729 = build_field(3, 6, 2, GF729)
        big = build_cwc(construct_zdb_set(ConstructionParams(build_cosets(F729, 4, 2), (4, 8))))
        F27 = build_field(3, 3, 1, GF27)
        small = build_cwc([construct_zdb(ConstructionParams(build_cosets(F27, 1, 1), (0,)))])
        reps = [code_report(big, n_jobs=2), code_report(small)]
    got = [(r.n, r.N, r.d, r.w, r.ell, r.bound.value, r.exhaustive) for r in reps]
    ok = (
        got[0][:5] == (364, 728, 324, 324, 9)
        and got[1][:5] == (26, 26, 18, 18, 3)
        and reps[0].bound.value == Fraction(728)
        and reps[1].bound.value == Fraction(26)
        and all(r.exhaustive for r in reps)
        and t.elapsed < LIMITS[9]
    )
    report(9, ok, f"(n, N, d, w, ell, FVS, full scan)={got}", t.elapsed)
    assert ok


def test_criterion_10_pdf_equivalence():
    with Timer() as t:
        functions = []
        for _, P in matrix_instances():
            functions.append(construct_zdb(P))
            if P.r > 1 and all(P.cosets.d_of_log[d] == 0 for d in P.d_logs):
                functions += construct_zdb_set(P)
        for F, e, r, d in vector_cases():
            cs = build_cosets(F, e, r)
            for v in (1, 2):
                functions += construct_vector_zdb_set(ConstructionParams(cs, d, a_logs=tuple(range(v))))
                functions.append(construct_vector_zdb(ConstructionParams(cs, d, a_logs=tuple(range(v)))))
        F27 = build_field(3, 3, 1, GF27)
        functions.append(interleave(construct_zdb_set(ConstructionParams(build_cosets(F27, 2, 2), (0,))), 2))
        mismatches = []
        for f in functions:
            a, b = is_zdb(f).lam, verify_pdf(to_pdf(f)).lam
            if a is None or a != b:
                mismatches.append((f.n, f.ell, a, b))
    ok = not mismatches and t.elapsed < LIMITS[10]
    report(10, ok, f"{len(functions)} functions, mismatches={mismatches}", t.elapsed)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
