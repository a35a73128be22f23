import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfrepair import codes, kernels
from selfrepair.codes import DiskPosition as DP


def dense_rank_gf2(matrix: np.ndarray) -> int:
    """Independent oracle: Gaussian elimination on a dense 0/1 matrix."""
    m = matrix.copy() % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def dense_h(scheme):
    h = np.zeros((scheme.n, scheme.size), dtype=np.uint8)
    for i, row in enumerate(scheme.parity_check_rows()):
        for c in range(scheme.size):
            h[i, c] = row >> c & 1
    return h


def oracle_recoverable(h, pattern):
    return dense_rank_gf2(h[:, list(pattern)]) == len(pattern)


def test_build_twod_examples():
    s = codes.build_scheme("twod", 4)
    assert (s.size, s.data_count, s.parity_count) == (10, 6, 4)
    s = codes.build_scheme("twod", 10)
    assert (s.size, s.data_count, s.parity_count) == (55, 45, 10)


def test_build_group_examples():
    s = codes.build_scheme("raid6", 12, 1)
    assert (s.size, s.parity_equiv, s.data_count) == (12, 2, 10)
    s = codes.build_scheme("tp", 15, 3)
    assert (s.size, s.parity_count, s.data_count) == (45, 9, 36)


@pytest.mark.parametrize("args", [("twod", 2), ("raid6", 3, 1), ("tp", 4, 2), ("raid6", 12, 0), ("x", 5)])
def test_build_rejects(args):
    with pytest.raises(ValueError):
        codes.build_scheme(*args)


@pytest.mark.parametrize("n", range(3, 13))
def test_twod_counts_and_structure(n):
    s = codes.build_scheme("twod", n)
    assert s.size == n * (n + 1) // 2
    assert s.data_count == n * (n - 1) // 2
    h = dense_h(s)
    col_weights = h.sum(axis=0)
    assert all(col_weights[: s.data_count] == 2)
    assert all(col_weights[s.data_count:] == 1)
    assert all(h.sum(axis=1) == n)
    assert len(set(s.positions)) == s.size


def test_canonical_ordering_and_data_symmetry():
    s = codes.build_scheme("twod", 4)
    assert [str(p) for p in s.positions] == [
        "D1_2", "D1_3", "D1_4", "D2_3", "D2_4", "D3_4", "P1", "P2", "P3", "P4"]
    assert DP.data(3, 1) == DP.data(1, 3)
    with pytest.raises(ValueError):
        DP.data(2, 2)


def test_parse_scheme():
    assert codes.parse_scheme("twod:10").size == 55
    assert codes.parse_scheme("raid6:2x12").size == 24
    assert codes.parse_scheme("TP:3x15").size == 45
    with pytest.raises(ValueError):
        codes.parse_scheme("raid6:12")


def test_fig2_fatal_triples():
    s = codes.build_scheme("twod", 4)
    assert not codes.is_recoverable(s, [DP.data(1, 2), DP.parity(1), DP.parity(2)])
    assert not codes.is_recoverable(s, [DP.data(1, 2), DP.data(1, 3), DP.data(2, 3)])
    assert codes.is_recoverable(s, [DP.data(1, 2), DP.data(1, 3), DP.data(1, 4)])
    assert codes.is_recoverable(s, [])
    for p in s.positions:
        assert codes.is_recoverable(s, [p])


def test_foreign_position_rejected():
    s = codes.build_scheme("twod", 4)
    with pytest.raises(ValueError):
        codes.is_recoverable(s, [DP.parity(5)])


def test_group_recoverability():
    s = codes.build_scheme("raid6", 12, 2)
    assert not codes.is_recoverable(s, [DP.member(0, 0), DP.member(0, 1), DP.member(0, 2)])
    assert codes.is_recoverable(s, [DP.member(0, 0), DP.member(0, 1), DP.member(1, 2)])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank_test_matches_dense_oracle_exhaustively(n):
    s = codes.build_scheme("twod", n)
    h = dense_h(s)
    for k in range(0, min(s.size, 6) + 1):
        for combo in itertools.combinations(range(s.size), k):
            assert codes.is_recoverable(s, combo) == oracle_recoverable(h, combo)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 12), st.data())
def test_rank_test_matches_dense_oracle_random(n, data):
    s = codes.build_scheme("twod", n)
    pattern = data.draw(st.sets(st.integers(0, s.size - 1), max_size=min(s.size, n + 2)))
    assert codes.is_recoverable(s, pattern) == oracle_recoverable(dense_h(s), sorted(pattern))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["twod:5", "twod:7", "raid6:3x6", "tp:2x7"]), st.data())
def test_erasure_monotonicity(desc, data):
    s = codes.parse_scheme(desc)
    k = s.tolerance + 1
    fatal = list(itertools.islice(codes.fatal_patterns(s, k), 50))
    assert fatal
    base = data.draw(st.sampled_from(fatal))
    extra = data.draw(st.sets(st.integers(0, s.size - 1), max_size=6))
    assert not codes.is_recoverable(s, set(base) | extra)


@pytest.mark.parametrize("desc", ["twod:3", "twod:4", "twod:6", "raid6:2x5", "tp:2x6"])
def test_guaranteed_tolerance(desc):
    s = codes.parse_scheme(desc)
    for k in range(s.tolerance + 1):
        for combo in itertools.combinations(range(s.size), k):
            assert codes.is_recoverable(s, combo)


@pytest.mark.parametrize("n", range(3, 13))
def test_parity_only_patterns_recoverable(n):
    s = codes.build_scheme("twod", n)
    parity = range(s.data_count, s.size)
    for k in range(1, n + 1):
        assert codes.is_recoverable(s, list(parity)[:k])


def test_survival_profile_twod4():
    prof = codes.survival_profile(codes.build_scheme("twod", 4))
    assert prof.f1 == Fraction(110, 120)
    assert (prof.size, prof.n_f) == (10, 2)
    # rank is at most 4, so every quintuple is fatal
    assert prof.f3 == 0


def test_survival_profile_trivial_groups():
    assert codes.survival_profile(codes.build_scheme("raid6", 12, 1)).f1 == 0
    assert codes.survival_profile(codes.build_scheme("tp", 15, 1)).f1 == 0


@pytest.mark.parametrize("desc", ["twod:3", "twod:4", "twod:5", "raid6:2x5", "raid6:3x4", "tp:2x6"])
def test_kernel_counts_match_brute_force(desc):
    s = codes.parse_scheme(desc)
    kmax = min(s.size, s.tolerance + 3)
    counts = codes.recoverable_counts(s, kmax)
    for k in range(kmax + 1):
        brute = sum(codes.is_recoverable(s, c) for c in itertools.combinations(range(s.size), k))
        assert counts[k] == brute


@pytest.mark.parametrize("desc", ["twod:6", "twod:9", "raid6:3x8", "tp:3x8"])
def test_backends_agree_on_counts(desc):
    s = codes.parse_scheme(desc)
    args = ((0, s.columns(), 0, 0) if s.variant == "twod" else (1, [], s.n, s.parity_equiv))
    kmax = s.tolerance + 3
    assert (kernels.python.count_recoverable(*args, s.size, kmax)
            == kernels.backend.count_recoverable(*args, s.size, kmax))


@pytest.mark.parametrize("n", range(3, 13))
def test_fatal_triple_closed_form_matches_enumeration(n):
    s = codes.build_scheme("twod", n)
    counts = codes.recoverable_counts(s, 3)
    assert math.comb(s.size, 3) - counts[3] == codes.fatal_triple_count_closed(n)


def test_fatal_triple_examples():
    assert codes.fatal_triple_count_closed(4) == 10
    assert codes.fatal_triple_count_closed(3) == 4
    assert codes.fatal_triple_count_closed(10) == 165
    with pytest.raises(ValueError):
        codes.fatal_triple_count_closed(2)


@pytest.mark.parametrize("desc", ["twod:5", "twod:8", "twod:12", "raid6:3x12", "tp:3x15"])
def test_profile_fractions_monotone(desc):
    p = codes.survival_profile(codes.parse_scheme(desc))
    assert 1 >= p.f1 >= p.f2 >= p.f3 >= 0


def test_budget_refusal_and_sampling():
    s = codes.build_scheme("twod", 8)
    with pytest.raises(codes.EnumerationBudgetExceeded) as info:
        codes.survival_profile(s, budget=10_000)
    assert info.value.subsets == math.comb(36, 5)
    exact = codes.survival_profile(s)
    est = codes.survival_profile(s, budget=10_000, allow_sampling=True, samples=20_000, seed=1)
    assert est.method == "sampling"
    assert est.f1 == exact.f1  # C(36,3) = 7140 fits the budget
    for j in (1, 2):
        se = est.stderr[j]
        assert se > 0
        assert abs(est.fractions[j] - float(exact.fractions[j])) < 4 * se


def test_peeling_never_beats_rank():
    for n in range(3, 9):
        s = codes.build_scheme("twod", n)
        bad = codes.peeling_disagreements(s, 5)
        assert all(codes.is_recoverable(s, c) and not codes.peel_recoverable(s, c) for c in bad)
        assert bad == []


def test_conditional_ratios():
    p = codes.SurvivalProfile(10, 2, (Fraction(1, 2), Fraction(1, 4), Fraction(0)))
    assert p.conditional_ratios() == (0.5, 0.5, 0.0)
    q = codes.SurvivalProfile(10, 2, (Fraction(0), Fraction(0), Fraction(0)))
    assert q.conditional_ratios() == (0.0, 0.0, 0.0)
