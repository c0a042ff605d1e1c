from fractions import Fraction

import pytest

from superpreamble import (
    all_user_bounds,
    bound_table,
    enumerate_solvable_probabilities,
    single_user_bounds,
)
from superpreamble.bounds import all_user_upper, single_user_lower, single_user_upper


class TestSingleUser:
    def test_n1_exact_one(self):
        for K, L in ((2, 1), (16, 2), (48, 6)):
            assert single_user_bounds(K, L, 1).exact == 1.0

    def test_exact_4_2_3(self):
        b = single_user_bounds(4, 2, 3)
        assert b.exact == pytest.approx(float(Fraction(15, 16) ** 2), abs=1e-15)
        assert b.upper == b.lower == b.exact

    def test_bounds_8_2_5(self):
        b = single_user_bounds(8, 2, 5)
        assert b.exact is None
        assert b.upper == pytest.approx(float(Fraction(63, 64) ** 4), rel=1e-12)
        assert b.lower == pytest.approx(0.9375, abs=1e-15)


class TestAllUser:
    def test_exact_4_2_3(self):
        b = all_user_bounds(4, 2, 3)
        assert b.exact == pytest.approx(0.8203125, abs=1e-15)

    def test_upper_8_2_5(self):
        b = all_user_bounds(8, 2, 5)
        assert b.upper == pytest.approx(
            float(Fraction(63 * 62 * 61 * 60, 64 ** 4)), rel=1e-12)

    def test_lower_clamped_2_1_5(self):
        assert all_user_bounds(2, 1, 5).lower == 0.0

    def test_upper_zero_when_pool_exhausted(self):
        # more users than distinct super preambles
        assert all_user_bounds(2, 1, 4).upper == 0.0


class TestBoundTable:
    def test_exact_non_increasing(self):
        table = bound_table(16, 2, 3)
        exacts = [sb.exact for sb, _ in table]
        assert all(a >= b for a, b in zip(exacts, exacts[1:]))

    def test_single_upper_48_1_20(self):
        table = bound_table(48, 1, 20)
        assert table[19][0].upper == pytest.approx(
            float(Fraction(47, 48) ** 19), rel=1e-12)

    def test_single_lower_16_3_10(self):
        table = bound_table(16, 3, 10)
        assert table[9][0].lower == pytest.approx(
            float(1 - Fraction(125, 4096)), rel=1e-12)

    def test_rejects_bad_nmax(self):
        with pytest.raises(ValueError):
            bound_table(4, 2, 0)


class TestProperties:
    def test_lower_bounds_increase_in_l(self):
        # K >> ceil((N-1)/2): both lower bounds rise towards 1 with L
        K, N = 16, 8
        singles = [single_user_bounds(K, L, N).lower for L in range(1, 7)]
        alls = [all_user_bounds(K, L, N).lower for L in range(1, 7)]
        assert all(a < b for a, b in zip(singles, singles[1:]))
        assert all(a < b for a, b in zip(alls, alls[1:]))
        assert singles[-1] > 0.999
        assert alls[-1] > 0.99

    @pytest.mark.parametrize("K,L,N", [(2, 2, 4), (3, 2, 4), (2, 2, 5)])
    def test_bracket_against_enumeration(self, K, L, N):
        # exhaustive truth between lower and upper (L >= 2; the span-count
        # lower bound is not valid for L = 1 beyond N = 3)
        single, both = enumerate_solvable_probabilities(K, L, N)
        sb = single_user_bounds(K, L, N)
        ab = all_user_bounds(K, L, N)
        assert sb.lower <= float(single) <= sb.upper + 1e-15
        assert ab.lower <= float(both) <= ab.upper + 1e-15

    def test_exact_matches_enumeration_n_le_3(self):
        for K, L in ((2, 1), (2, 2), (3, 1), (3, 2), (4, 1)):
            for N in (1, 2, 3):
                single, both = enumerate_solvable_probabilities(K, L, N)
                assert float(single) == pytest.approx(
                    single_user_bounds(K, L, N).exact, abs=1e-12)
                assert float(both) == pytest.approx(
                    all_user_bounds(K, L, N).exact, abs=1e-12)

    def test_upper_formulas_match_exact_at_n2_n3(self):
        # the N >= 4 upper-bound formulas, evaluated at N = 2 and 3, must
        # reproduce the exact rates (distinctness is exactly solvability
        # there); the span-count lower bound already fails at N = 3, which
        # is why it is only reported for N >= 4
        for K, L in ((4, 2), (16, 2), (16, 3)):
            for N in (2, 3):
                assert single_user_upper(K, L, N) == pytest.approx(
                    single_user_bounds(K, L, N).exact, rel=1e-12)
                assert all_user_upper(K, L, N) == pytest.approx(
                    all_user_bounds(K, L, N).exact, rel=1e-12)
        assert single_user_lower(4, 2, 2) == pytest.approx(
            single_user_bounds(4, 2, 2).exact, rel=1e-12)

    def test_all_outputs_in_unit_interval(self):
        for K in (2, 8, 48):
            for L in (1, 2, 6):
                for N in (1, 2, 3, 4, 10, 20):
                    for b in (single_user_bounds(K, L, N), all_user_bounds(K, L, N)):
                        assert 0.0 <= b.lower <= b.upper <= 1.0
                        if b.exact is not None:
                            assert 0.0 <= b.exact <= 1.0
