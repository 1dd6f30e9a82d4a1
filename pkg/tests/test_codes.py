"""Codebook constructors: worked reference values and invariants."""
import math

import numpy as np
import pytest

from owccover.codes import (
    GOLDEN_RATIO,
    codebook_csv,
    cstbc_from_constellation,
    golden_code,
    golden_design_matrices,
    load_codebook_csv,
    optimal_linear_code,
    repetition_code,
    strc_code,
    validate_codebook,
    zcc_code,
)
from owccover.constellations import diophantine_constellation, pam_product_constellation
from owccover.cover import cover_order


class TestRepetitionCode:
    def test_ook_two_apertures(self):
        book = repetition_code(1, 1, 2)
        got = sorted(tuple(cw.ravel()) for cw in book.codewords)
        assert got == [(0.0, 0.0), (1.0, 1.0)]
        assert book.mean_power() == pytest.approx(1.0)

    def test_scalar_ook(self):
        book = repetition_code(1, 1, 1)
        got = sorted(cw.ravel()[0] for cw in book.codewords)
        assert got == [0.0, 2.0]
        assert book.mean_power() == pytest.approx(1.0)

    def test_two_slots(self):
        book = repetition_code(2, (1, 1), 2)
        assert book.size == 4
        assert book.mean_power() == pytest.approx(2.0)
        for cw in book.codewords:
            assert np.allclose(cw[:, 0], cw[:, 1])  # equal columns per slot

    def test_total_bits_split(self):
        book = repetition_code(2, 3, 2)
        assert book.linear_profile.levels == (4, 2)

    def test_bad_split(self):
        with pytest.raises(ValueError):
            repetition_code(2, (1, 0), 2)
        with pytest.raises(ValueError):
            repetition_code(3, 2, 2)


class TestOptimalLinear:
    def test_weighted_ook(self):
        book = optimal_linear_code(1, 1, (1.0, 3.0))
        got = sorted(tuple(cw.ravel()) for cw in book.codewords)
        assert got == [(0.0, 0.0), (0.5, 1.5)]
        assert book.mean_power() == pytest.approx(1.0)

    def test_uniform_reduces_to_rc(self):
        a = optimal_linear_code(1, 1, (1.0, 1.0))
        b = repetition_code(1, 1, 2)
        assert np.allclose(a.codewords, b.codewords)

    def test_full_cover_differences(self):
        book = optimal_linear_code(1, 2, (1.0, 3.0))
        for _, _, gram in book.pairwise_grams():
            order, _ = cover_order(gram)
            assert order == 2

    def test_rejects_bad_omega(self):
        with pytest.raises(ValueError):
            optimal_linear_code(1, 1, (1.0, 0.0))


class TestZcc:
    def test_structure_and_grams(self):
        book = zcc_code()
        assert book.size == 4 and book.mean_power() == pytest.approx(2.0)
        by_label = {book.labels[i]: i for i in range(4)}
        # e = (1, -1): zero cover
        d = book.difference(by_label[(1, 0)], by_label[(0, 1)])
        assert cover_order(d.T @ d)[0] == 0
        # e = (1, 1): full cover
        d = book.difference(by_label[(1, 1)], by_label[(0, 0)])
        assert cover_order(d.T @ d)[0] == 2
        # e = (1, 0): single coordinate covered
        d = book.difference(by_label[(1, 0)], by_label[(0, 0)])
        assert cover_order(d.T @ d)[0] == 1


class TestCstbc:
    def test_scale_s24(self):
        s = diophantine_constellation(2, 4)
        book = cstbc_from_constellation(s, 1, (1.0,))
        assert book.mean_power() == pytest.approx(2.0, rel=1e-13)
        # scale = L 2^K / (Omega sum) = 2*16/45; smallest nonzero coord is 1
        nz = book.codewords[np.nonzero(book.codewords)]
        assert np.min(nz) == pytest.approx(2 * 16 / 45)

    def test_ook_degenerates_to_rc(self):
        s = pam_product_constellation(1, 1)
        book = cstbc_from_constellation(s, 2, (1.0, 1.0))
        rc = repetition_code(1, 1, 2)
        got = sorted(tuple(cw.ravel()) for cw in book.codewords)
        expect = sorted(tuple(cw.ravel()) for cw in rc.codewords)
        assert np.allclose(got, expect)

    def test_equivalent_channel_factorizes(self):
        s = diophantine_constellation(3, 5)
        omega = np.array([2.0, 5.0])
        book = cstbc_from_constellation(s, 2, omega)
        rng = np.random.default_rng(1)
        H = rng.lognormal(size=(2, 4))
        scale = 3 * 32 / (7.0 * sum(float(sum(p)) for p in s.points))
        g = scale * (omega @ H)
        for idx in range(0, book.size, 7):
            prod = book.codewords[idx] @ H
            s_vec = np.array([float(v) for v in book.labels[idx]])
            assert np.allclose(prod, np.outer(s_vec, g))


class TestGolden:
    def test_scale_and_power(self):
        book = golden_code(1, 1, 1, (1.0,))
        assert book.mean_power() == pytest.approx(2.0, rel=1e-13)
        scale = 4.0 / ((2 * GOLDEN_RATIO - 1) * 2)
        assert scale == pytest.approx(2.0 / math.sqrt(5.0))
        vals = sorted(v for cw in book.codewords for v in cw.ravel())
        assert vals[0] == 0.0
        assert vals[-1] == pytest.approx(scale * (2 * GOLDEN_RATIO - 1))

    def test_design_matrices(self):
        F, G = golden_design_matrices(1, (1.0,))
        expect = math.sqrt(5) / 10 * np.array([GOLDEN_RATIO - 1, GOLDEN_RATIO])
        assert np.allclose(F[0], expect)
        assert np.allclose(G[0], expect[::-1])
        assert F.sum() + G.sum() == pytest.approx(1.0)

    def test_design_matrices_weighted(self):
        F, G = golden_design_matrices(2, (1.0, 3.0))
        assert F.sum() + G.sum() == pytest.approx(1.0)
        assert np.allclose(F[1] / F[0], 3.0)

    def test_mean_power_all_rates(self):
        for k1 in (1, 2):
            for k2 in (1, 2, 3):
                book = golden_code(k1, k2, 2, (1.0, 2.0))
                assert book.mean_power() == pytest.approx(2.0, rel=1e-12)
                assert book.fast_fading


class TestStrc:
    def test_values_1_1(self):
        book = strc_code(1, 1)
        vals = sorted({round(float(cw[0, 0]), 12) for cw in book.codewords})
        assert vals == pytest.approx([0.0, 1 / 3, 2 / 3, 1.0])
        for cw in book.codewords:
            assert np.ptp(cw) == 0  # all entries equal
        assert book.mean_power() == pytest.approx(2.0, rel=1e-13)

    def test_rank_one_grams(self):
        book = strc_code(1, 1)
        for _, _, gram in book.pairwise_grams():
            assert np.linalg.matrix_rank(gram) == 1
            assert np.all(gram >= 0)

    def test_mean_power_exact(self):
        assert strc_code(2, 3).mean_power() == pytest.approx(2.0, rel=1e-13)


class TestValidation:
    def test_optimal_linear_clean(self):
        book = optimal_linear_code(1, 1, (1.0, 3.0))
        rep = validate_codebook(book, check_cover=True)
        assert rep.ok and not rep.zero_cover_pairs

    def test_zcc_flags_zero_cover(self):
        rep = validate_codebook(zcc_code(), check_cover=True)
        assert rep.ok  # power/unipolarity fine
        assert len(rep.zero_cover_pairs) >= 1

    def test_power_violation_flagged(self):
        book = repetition_code(1, 1, 2)
        doubled = np.array(book.codewords) * 2.0
        bad = type(book)(
            slots=1, apertures=2, codewords=doubled, bits=1,
            labels=book.labels, power_target=1.0, family="rc",
        )
        rep = validate_codebook(bad)
        assert not rep.ok
        assert any("power" in v for v in rep.violations)


def test_all_families_unipolar_and_power_normalized():
    s = diophantine_constellation(2, 3)
    books = [
        repetition_code(2, (1, 2), 3),
        optimal_linear_code(2, (1, 1), (1.0, 4.0)),
        zcc_code(),
        cstbc_from_constellation(s, 2, (1.0, 2.0)),
        golden_code(2, 1, 2, (0.5, 1.5)),
        strc_code(1, 2),
    ]
    for book in books:
        assert np.all(book.codewords >= 0), book.family
        assert book.mean_power() == pytest.approx(
            book.power_target, rel=1e-12), book.family
        assert book.size == 2**book.bits


def test_csv_roundtrip():
    book = optimal_linear_code(2, (1, 1), (1.0, 2.0))
    text = codebook_csv(book)
    back = load_codebook_csv(text, slots=2, apertures=2)
    assert np.allclose(back.codewords, book.codewords)
    assert back.size == book.size
