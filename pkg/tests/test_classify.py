import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singpencil.classify import (ClassifierConfig, FlagReason, classify_spectrum, compute_gaps,
                                 extract_finite)
from singpencil.fixtures import pencil_7x7
from singpencil.pencil import ProjectiveValue
from singpencil.solvers import project_solve

pv = ProjectiveValue.from_value
INF = ProjectiveValue.infinity()


def test_gap_formula():
    gaps = compute_gaps([pv(0.0), pv(1.0), pv(3.0)])
    assert gaps == pytest.approx([1.0, 1 / np.sqrt(2), 2 / np.sqrt(10)])


def test_gap_infinity_conventions():
    assert compute_gaps([INF, pv(1.0)]) == [1.0, 1.0]
    assert compute_gaps([INF, INF, pv(2.0)])[:2] == [0.0, 0.0]
    assert compute_gaps([pv(5.0)]) == [1.0]
    assert compute_gaps([]) == []


def test_line2_and_line3():
    cfg = ClassifierConfig()
    rep = extract_finite([
        (pv(1e9), 1e-10),       # tiny gamma, isolated -> line 2
        (pv(0.0), 1e-15),       # below delta2, gap 1e-3 < xi2 -> stays finite
        (pv(0.001), 1e-15),     # same
        (pv(2.0), 0.5),         # healthy finite
        (INF, 0.0),
    ], cfg)
    reasons = [e.reason for e in rep.per_entry]
    assert reasons[0] is FlagReason.LINE2
    assert reasons[1] is reasons[2] is FlagReason.NONE
    assert reasons[3] is FlagReason.NONE
    assert reasons[4] is FlagReason.EXACT_INFINITY
    assert rep.infinite_count == sum(not e.finite for e in rep.per_entry)


def test_line3_only():
    # gap between xi2 and xi1 with gamma below delta2
    rep = extract_finite([(pv(0.0), 1e-15), (pv(0.5), 1.0)])
    assert rep.per_entry[0].reason is FlagReason.LINE3


def test_config_validation():
    with pytest.raises(ValueError):
        ClassifierConfig(delta1=1e-20, delta2=1e-10)
    with pytest.raises(ValueError):
        ClassifierConfig(xi1=0.001, xi2=0.01)


def test_negative_gamma_rejected():
    with pytest.raises(ValueError):
        extract_finite([(pv(1.0), -1.0)])


def test_classify_7x7():
    rep = classify_spectrum(project_solve(pencil_7x7(), 1))
    finite = sorted(v.value.real for v in rep.finite)
    assert finite == pytest.approx([1 / 3, 0.5], abs=1e-10)
    assert rep.infinite_count == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1e8, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=12))
def test_gaps_nonnegative_and_zero_only_for_duplicates(values):
    gaps = compute_gaps([pv(z) for z in values])
    assert all(g >= 0 for g in gaps)
    for z, g in zip(values, gaps):
        if g == 0:
            assert values.count(z) > 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=10), min_size=1, max_size=10))
def test_large_gamma_never_flagged(gammas):
    vals = [pv(float(i)) for i in range(len(gammas))]
    rep = extract_finite([(v, g + 1e-3) for v, g in zip(vals, gammas)])
    assert rep.infinite_count == 0
