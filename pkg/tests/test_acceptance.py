"""Acceptance criteria, each checked at its stated tolerance.

Every test records one ``Criterion N PASS/FAIL`` line, printed in the
terminal summary, then asserts.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import min_pair_distance, truth_values
from singpencil.applications import (DeterminantalRep, double_eig_spectrum, evaluate_poly,
                                     solve_bivariate, transmission_spectrum)
from singpencil.classify import classify_spectrum
from singpencil.fixtures import (bivariate_coefficients, bivariate_rep_matrices,
                                 control_system, pencil_5x5, pencil_7x7)
from singpencil.kcf import KcfSpec, kcf_18x18_spec, generate
from singpencil.nrank import Verdict, diagnose_rank, estimate_normal_rank
from singpencil.pencil import Pencil, match_multisets, norm2, to_tall
from singpencil.backend import eig_triplets
from singpencil.solvers import (EigClass, Method, SolverConfig, augment_solve, perturb_solve,
                                project_solve, random_perturbation, untranspose)


def record(n, checks):
    """``checks`` maps a short label to ``(ok, detail)``."""
    failed = [f"{k} ({d})" for k, (ok, d) in checks.items() if not ok]
    if failed:
        line = f"Criterion {n} FAIL: " + "; ".join(failed)
    else:
        line = f"Criterion {n} PASS: " + "; ".join(f"{k} ({d})" for k, (_, d) in checks.items())
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def finite_values(split):
    return [v.value for v in split.finite]


def close_set(got, want, tol):
    got = sorted(got, key=lambda z: (z.real, z.imag))
    want = sorted(want, key=lambda z: (z.real, z.imag))
    if len(got) != len(want):
        return False, float("inf")
    err = max((abs(a - b) for a, b in zip(got, want)), default=0.0)
    return err <= tol, err


def gap_of(split, target):
    for rep in split.per_entry:
        v = rep.value
        if target is None and v.is_infinite:
            return rep.gap
        if target is not None and not v.is_infinite and abs(v.value - target) < 1e-8:
            return rep.gap
    return float("nan")


@pytest.fixture(scope="module")
def pencil_18():
    return generate(kcf_18x18_spec(), np.random.default_rng(0)).pencil


def test_criterion_1_projection_on_7x7():
    p = pencil_7x7()
    spec = project_solve(p, 1, SolverConfig(seed=0))
    split = classify_spectrum(spec)
    true = spec.true_entries
    scale = norm2(p.A) + norm2(p.B)
    ok_f, err_f = close_set(finite_values(split), [0.5, 1 / 3], 1e-10)
    true_res = max(max(e.alpha_i, e.beta_i) for e in true)
    rand = [e for e in spec.entries if e.kind is not EigClass.TRUE]
    rand_res = min(max(e.alpha_i, e.beta_i) for e in rand)
    gaps = [gap_of(split, 0.5), gap_of(split, 1 / 3), gap_of(split, None)]
    gaps_ok = all(abs(g - w) <= 0.05 for g, w in zip(gaps, (0.15, 0.16, 1.00)))
    record(1, {
        "3 true": (len(true) == 3, len(true)),
        "finite {1/2,1/3}": (ok_f, f"err {err_f:.1e}"),
        "1 infinite": (split.infinite_count == 1, split.infinite_count),
        "true residual": (true_res <= 1e-12 * scale, f"{true_res:.1e}"),
        "random residual": (rand_res >= 1e-5, f"{rand_res:.1e}"),
        "gaps": (gaps_ok, "/".join(f"{g:.2f}" for g in gaps)),
    })


def test_criterion_2_augmentation_on_7x7():
    p = pencil_7x7()
    full = augment_solve(p, 1, SolverConfig(seed=0, method=Method.AUGMENT))
    pres = full.of_kind(EigClass.PRESCRIBED)
    near_one = all(min(abs(e.alpha_i - 1), abs(e.beta_i - 1)) <= 1e-6 for e in pres)
    simple = augment_solve(p, 1, SolverConfig(seed=0, method=Method.AUGMENT_SIMPLE),
                           simple=True)
    spres = simple.of_kind(EigClass.PRESCRIBED)
    ok_f, err_f = close_set(finite_values(classify_spectrum(simple)), [0.5, 1 / 3], 1e-10)
    record(2, {
        "8 eigenvalues": (len(full.entries) == 8, len(full.entries)),
        "2 prescribed at alpha or beta 1": (len(pres) == 2 and near_one, len(pres)),
        "simple prescribed infinite": (len(spres) == 2 and all(e.value.is_infinite
                                                               for e in spres), len(spres)),
        "simple finite {1/2,1/3}": (ok_f, f"err {err_f:.1e}"),
    })


def test_criterion_3_kcf_18x18(pencil_18):
    spec = project_solve(pencil_18, 2, SolverConfig(seed=0))
    split = classify_spectrum(spec)
    true = spec.true_entries
    tmax = max(max(e.alpha_i, e.beta_i) for e in true)
    rmin = min(max(e.alpha_i, e.beta_i) for e in spec.entries if e.kind is not EigClass.TRUE)
    errs = sorted(abs(z - 1) for z in finite_values(split))
    tiers = (len(errs) == 7 and errs[0] <= 1e-12 and errs[2] <= 1e-6 and errs[6] <= 1e-3)
    record(3, {
        "10 true": (len(true) == 10, len(true)),
        "separation": (tmax <= 1e-12 and rmin >= 1e-6, f"{tmax:.1e} vs {rmin:.1e}"),
        "accuracy tiers": (tiers, "/".join(f"{e:.1e}" for e in errs[:1] + errs[2:3] + errs[-1:])),
        "7 finite": (len(split.finite) == 7, len(split.finite)),
    })


def test_criterion_4_5x5_pencil():
    spec = project_solve(pencil_5x5(), 1, SolverConfig(seed=0))
    ok, err = close_set(finite_values(classify_spectrum(spec)), [1.0, 2.0], 1e-10)
    record(4, {"finite {1,2}": (ok, f"err {err:.1e}")})


def test_criterion_5_bivariate_cubics():
    p1, p2 = bivariate_coefficients()
    roots, spec = solve_bivariate(DeterminantalRep(**bivariate_rep_matrices(), degree=3))
    split = classify_spectrum(spec)
    lams = [r.lam for r in roots]
    refs = [-1.133090 + 0.3011559j, -0.5608503 + 2.035545j]
    refs += [z.conjugate() for z in refs]
    ref_err = max(min(abs(l - z) for l in lams) for z in refs)
    res = max(max(abs(evaluate_poly(p1, r.lam, r.mu)), abs(evaluate_poly(p2, r.lam, r.mu)))
              for r in roots)
    n_inf = split.infinite_count
    record(5, {
        "9 finite": (len(split.finite) == 9 and len(roots) == 9, len(roots)),
        "printed roots": (ref_err <= 1e-5, f"{ref_err:.1e}"),
        "polynomial residuals": (res <= 1e-6, f"{res:.1e}"),
        "12 infinite": (n_inf == 12 and spec.regular_count == 21, n_inf),
    })


def test_criterion_6_transmission_zeros():
    cs = control_system()
    zeros, spec = transmission_spectrum(cs["A"], cs["B"], cs["C"], cs["D"])
    split = classify_spectrum(spec)
    ok, err = close_set(zeros, [3.0, -4.0], 1e-8)
    got = ", ".join(f"{z.real:.6g}" for z in sorted(zeros, key=lambda z: z.real))
    record(6, {
        "zeros {3,-4}": (ok, f"got {got}"),
        "2 finite true": (len(split.finite) == 2, len(split.finite)),
        "3 infinite true": (split.infinite_count == 3, split.infinite_count),
        "1 random left": (spec.count(EigClass.RANDOM_LEFT) == 1,
                          spec.count(EigClass.RANDOM_LEFT)),
    })


def test_criterion_7_rank_misestimates(pencil_18):
    under = project_solve(pencil_18, 18 - 15, SolverConfig(seed=0))
    usplit = classify_spectrum(under)
    ones = sum(abs(z - 1) <= 1e-6 for z in finite_values(usplit))
    over = project_solve(pencil_18, 18 - 17, SolverConfig(seed=0))
    omax = max(max(e.alpha_i, e.beta_i) for e in over.entries)
    dv_u, dv_o = diagnose_rank(under).verdict, diagnose_rank(over).verdict
    record(7, {
        "15: prescribed": (under.count(EigClass.PRESCRIBED) >= 1,
                           under.count(EigClass.PRESCRIBED)),
        "15: three ones": (ones == 3, ones),
        "15: one infinite": (usplit.infinite_count == 1, usplit.infinite_count),
        "15: underestimate": (dv_u is Verdict.LIKELY_UNDERESTIMATE, dv_u.value),
        "17: residuals": (omax <= 1e-12, f"{omax:.1e}"),
        "17: overestimate": (dv_o is Verdict.POSSIBLE_OVERESTIMATE, dv_o.value),
    })


def test_criterion_8_double_eigenvalues():
    rng = np.random.default_rng(0)
    n = 6
    A, B = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    lams, spec = double_eig_spectrum(A, B)
    dist = max(min_pair_distance(A + l * B) for l in lams)
    record(8, {
        "30 finite true": (len(lams) == 30, len(lams)),
        "coalescence": (dist <= 1e-6, f"worst pair distance {dist:.1e}"),
    })


@pytest.mark.slow
def test_criterion_8_double_eigenvalues_n20():
    rng = np.random.default_rng(0)
    n = 20
    A, B = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    t0 = time.perf_counter()
    lams, _ = double_eig_spectrum(A, B)
    dt = time.perf_counter() - t0
    record("8 (n=20)", {
        "380 finite": (len(lams) == 380, len(lams)),
        "runtime": (dt < 60, f"{dt:.1f} s"),
    })


def random_spec(rng, max_size=14):
    """Random KCF structure with singular blocks and simple finite/infinite values."""
    while True:
        right = tuple(int(i) for i in rng.integers(0, 3, rng.integers(0, 3)))
        left = tuple(int(i) for i in rng.integers(0, 3, rng.integers(0, 3)))
        nj = int(rng.integers(1, 5))
        ev = rng.uniform(-3, 3, nj) + 1j * rng.uniform(-3, 3, nj) * (rng.random(nj) < 0.5)
        jordan = tuple((complex(e), 1) for e in ev)
        inf = (1,) * int(rng.integers(0, 3))
        s = KcfSpec(right, left, jordan, inf)
        if s.n_rows <= max_size and s.n_cols <= max_size and (right or left):
            return s


def _cross_method(rng):
    failures = 0
    for i in range(50):
        s = random_spec(rng)
        tall, transposed = to_tall(generate(s, rng).pencil)
        k = tall.n - s.nrank
        runs = [project_solve(tall, k, SolverConfig(seed=i)),
                augment_solve(tall, k, SolverConfig(seed=i, method=Method.AUGMENT)),
                perturb_solve(tall, k, SolverConfig(seed=i, method=Method.PERTURB))]
        if transposed:
            runs = [untranspose(r) for r in runs]
        sets = [[e.value for e in r.true_entries] for r in runs]
        truth = truth_values(s)
        ok = all(match_multisets(x, truth, 1e-7) for x in sets)
        ok = ok and all(match_multisets(sets[0], x, 1e-7) for x in sets[1:])
        failures += not ok
    return failures


def _tau_invariance(rng):
    ok = True
    for _ in range(10):
        s = random_spec(rng)
        p = generate(s, rng).pencil
        n = max(p.shape)
        k = n - s.nrank
        base = random_perturbation(n, k, rng)
        sets = [[e.value for e in perturb_solve(p, k, data=replace(base, tau=t)).true_entries]
                for t in (1e-3, 1e-2, 1e-1)]
        ok &= all(match_multisets(sets[0], x, 1e-8) for x in sets[1:])
    return ok


def _d_a_invariance(rng):
    ok = True
    for _ in range(10):
        s = random_spec(rng)
        p = generate(s, rng).pencil
        n = max(p.shape)
        k = n - s.nrank
        base = random_perturbation(n, k, rng)
        other = replace(base, D_A=np.diag(rng.uniform(3.0, 5.0, k)))
        sets = []
        for data in (base, other):
            spec = perturb_solve(p, k, data=data)
            sets.append([e.value for e in spec.entries if e.kind is not EigClass.PRESCRIBED])
        ok &= match_multisets(sets[0], sets[1], 1e-8)
    return ok


def _nrank_hits(rng):
    hits = 0
    for _ in range(500):
        s = random_spec(rng)
        p = generate(s, rng).pencil
        hits += estimate_normal_rank(p, rng=rng).nrank == s.nrank
    return hits


def _k0_direct(rng):
    ok = True
    for _ in range(20):
        n = int(rng.integers(2, 12))
        p = Pencil(rng.standard_normal((n, n)), rng.standard_normal((n, n)))
        got = [e.value for e in project_solve(p, 0, SolverConfig(seed=1)).entries]
        want = [t.value for t in eig_triplets(p).triplets]
        ok &= match_multisets(got, want, 1e-10)
    return ok


def test_criterion_9_property_suites():
    rng = np.random.default_rng(2024)
    cross = _cross_method(rng)
    tau_ok = _tau_invariance(rng)
    da_ok = _d_a_invariance(rng)
    hits = _nrank_hits(rng)
    k0 = _k0_direct(rng)
    record(9, {
        "cross-method": (cross == 0, f"{cross}/50 disagree"),
        "tau invariance": (tau_ok, "3 values of tau"),
        "D_A invariance": (da_ok, "random set fixed"),
        "normal rank": (hits >= 495, f"{hits}/500 exact"),
        "k=0 projection": (k0, "equals direct eig"),
    })
