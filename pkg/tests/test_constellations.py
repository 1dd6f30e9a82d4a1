"""Integer-shell and PAM-product constellation construction."""
from fractions import Fraction

import numpy as np
import pytest

from owccover.constellations import (
    Constellation,
    constellation_csv,
    diophantine_constellation,
    even_bit_split,
    pam_product_constellation,
)

REFERENCE_S24 = {
    (0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (3, 0), (0, 3),
    (1, 2), (2, 1), (4, 0), (0, 4), (1, 3), (3, 1), (2, 2), (5, 0),
}


class TestDiophantine:
    def test_one_dimensional_is_pam(self):
        for K in (1, 3, 5):
            s = diophantine_constellation(1, K)
            assert {p[0] for p in s.points} == {Fraction(v) for v in range(2**K)}

    def test_reference_set_2_4(self):
        s = diophantine_constellation(2, 4)
        assert {tuple(int(c) for c in p) for p in s.points} == REFERENCE_S24
        assert s.mean_power == Fraction(45, 16)

    def test_reference_set_3_5_boundary(self):
        s = diophantine_constellation(3, 5)
        pts = {tuple(float(c) for c in p) for p in s.points}
        assert len(pts) == 32
        # the inner q=4 points are the ones the boundary heuristic drops
        for perm in [(2.0, 1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 1.0, 2.0)]:
            assert perm not in pts
        for corner in [(4.0, 0.0, 0.0), (0.0, 4.0, 0.0), (0.0, 0.0, 4.0)]:
            assert corner in pts

    def test_reference_set_4_6_half_shift(self):
        s = diophantine_constellation(4, 6)
        assert s.size == 64
        assert tuple(Fraction(1, 2) for _ in range(4)) in s.points

    @pytest.mark.parametrize("L", [1, 2, 3, 4])
    @pytest.mark.parametrize("K", [1, 2, 3, 4, 5, 6, 7])
    def test_cardinality_distance_power(self, L, K):
        s = diophantine_constellation(L, K)
        p = pam_product_constellation(L, K)
        assert s.size == 2**K
        assert s.min_distance == pytest.approx(1.0, abs=1e-12)
        assert s.mean_power <= p.mean_power

    def test_caps(self):
        with pytest.raises(ValueError):
            diophantine_constellation(9, 2)
        with pytest.raises(ValueError):
            diophantine_constellation(2, 13)


class TestPamProduct:
    def test_2_4_grid(self):
        p = pam_product_constellation(2, 4)
        assert {tuple(int(c) for c in q) for q in p.points} == {
            (a, b) for a in range(4) for b in range(4)
        }
        assert float(p.mean_power) == pytest.approx(3.0)
        assert p.min_distance == pytest.approx(1.0)

    def test_1_3_pam(self):
        p = pam_product_constellation(1, 3)
        assert float(p.mean_power) == pytest.approx(3.5)

    def test_3_5_split(self):
        assert even_bit_split(3, 5) == (2, 2, 1)
        p = pam_product_constellation(3, 5)
        assert float(p.mean_power) == pytest.approx(3.5)

    def test_split_minimizes_power(self):
        # (2,2,1) beats e.g. (3,1,1): 3.5 < 4.5
        worse = pam_product_constellation(3, 5, split=(3, 1, 1))
        best = pam_product_constellation(3, 5)
        assert best.mean_power < worse.mean_power


class TestConstellationType:
    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            Constellation(
                dimension=1,
                points=((Fraction(0),), (Fraction(0),)),
                min_distance=1.0,
                mean_power=Fraction(0),
            )

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Constellation(
                dimension=1,
                points=((Fraction(0),), (Fraction(-1),)),
                min_distance=1.0,
                mean_power=Fraction(0),
            )

    def test_csv_shape(self):
        s = diophantine_constellation(2, 2)
        text = constellation_csv(s)
        lines = text.strip().splitlines()
        assert lines[0] == "index,label,s0,s1"
        assert len(lines) == 1 + 4
