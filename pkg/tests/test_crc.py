import numpy as np
import pytest

from nrpolar.config import CrcPoly
from nrpolar.crc import (crc_affine, crc_attach, crc_check, crc_check_batch, crc_remainder,
                         poly_coefficients, rnti_bits, rnti_mask)
from nrpolar.errors import LengthMismatch

POLYS = [CrcPoly.G6, CrcPoly.G11, CrcPoly.G24]


def long_division(bits, coeffs):
    """Textbook GF(2) division of bits * x^L by the generator; returns the remainder."""
    L = len(coeffs) - 1
    work = list(bits) + [0] * L
    for i in range(len(bits)):
        if work[i]:
            for j, c in enumerate(coeffs):
                work[i + j] ^= c
    return work[-L:]


def test_coefficients():
    assert poly_coefficients(CrcPoly.G6) == [1, 1, 0, 0, 0, 0, 1]
    g11 = poly_coefficients(CrcPoly.G11)
    assert len(g11) == 12 and [11 - k for k, c in enumerate(g11) if c] == [11, 10, 9, 5, 0]
    g24 = poly_coefficients(CrcPoly.G24)
    assert [24 - k for k, c in enumerate(g24) if c] == [24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0]


def test_g6_small_message():
    # [1,0,1,0,1] * x^6 mod (x^6 + x^5 + 1), reduced by hand: x^5 + x^4 + x^3 + 1
    r = crc_remainder([1, 0, 1, 0, 1], CrcPoly.G6)
    assert r.tolist() == long_division([1, 0, 1, 0, 1], poly_coefficients(CrcPoly.G6))
    assert r.tolist() == [1, 1, 1, 0, 0, 1]


@pytest.mark.parametrize("poly", POLYS)
def test_zero_message(poly):
    assert not crc_remainder(np.zeros(40, np.uint8), poly).any()


def test_ones_init_equals_prepended_ones():
    r = crc_remainder(np.zeros(20, np.uint8), CrcPoly.G24, init_ones=True)
    assert r.any()
    oracle = long_division([1] * 24 + [0] * 20, poly_coefficients(CrcPoly.G24))
    assert r.tolist() == oracle


@pytest.mark.parametrize("poly", POLYS)
def test_register_matches_long_division(poly):
    rng = np.random.default_rng(11)
    coeffs = poly_coefficients(poly)
    for _ in range(1000):
        m = rng.integers(0, 2, int(rng.integers(1, 200)), dtype=np.uint8)
        assert crc_remainder(m, poly).tolist() == long_division(m.tolist(), coeffs)
        ones = crc_remainder(m, poly, init_ones=True).tolist()
        assert ones == long_division([1] * poly.length + m.tolist(), coeffs)


@pytest.mark.parametrize("poly", POLYS)
def test_round_trip_and_single_errors(poly):
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        c = crc_attach(rng.integers(0, 2, 30, dtype=np.uint8), poly)
        assert crc_check(c, poly)
    c = crc_attach(rng.integers(0, 2, 30, dtype=np.uint8), poly)
    for i in range(len(c)):
        bad = c.copy()
        bad[i] ^= 1
        assert not crc_check(bad, poly)


@pytest.mark.parametrize("poly", POLYS)
def test_linearity(poly):
    rng = np.random.default_rng(5)
    for _ in range(200):
        a, b = rng.integers(0, 2, (2, 57), dtype=np.uint8)
        assert np.array_equal(crc_remainder(a ^ b, poly),
                              crc_remainder(a, poly) ^ crc_remainder(b, poly))


def test_rnti_mask():
    rng = np.random.default_rng(1)
    c = crc_attach(rng.integers(0, 2, 20, dtype=np.uint8), CrcPoly.G24, True)
    assert np.array_equal(rnti_mask(c, 0, 20), c)
    flipped = rnti_mask(c, 0xFFFF, 20)
    assert np.array_equal(flipped[:28], c[:28])
    assert np.array_equal(flipped[28:], 1 - c[28:])
    assert np.array_equal(rnti_mask(rnti_mask(c, 0x5A3C, 20), 0x5A3C, 20), c)
    assert rnti_bits(0x8001).tolist() == [1] + [0] * 14 + [1]
    with pytest.raises(LengthMismatch):
        rnti_mask(c[:-1], 1, 20)


def test_wrong_rnti_rejected():
    rnti = 0x4B1D
    c = rnti_mask(crc_attach(np.arange(30) % 2, CrcPoly.G24, True), rnti, 30)
    assert crc_check(c, CrcPoly.G24, True, rnti)
    for k in range(16):
        assert not crc_check(c, CrcPoly.G24, True, rnti ^ (1 << k))


@pytest.mark.parametrize("init_ones,rnti", [(False, None), (True, None), (True, 0xBEEF)])
def test_affine_form(init_ones, rnti):
    rng = np.random.default_rng(8)
    A = 40
    M, c0 = crc_affine(A, CrcPoly.G24, init_ones, rnti)
    for _ in range(100):
        m = rng.integers(0, 2, A, dtype=np.uint8)
        c = crc_attach(m, CrcPoly.G24, init_ones)
        if rnti is not None:
            c = rnti_mask(c, rnti, A)
        assert np.array_equal((M.astype(int) @ m + c0) % 2, c[A:])


def test_batch_check_matches_scalar():
    rng = np.random.default_rng(2)
    rows = [crc_attach(rng.integers(0, 2, 25, dtype=np.uint8), CrcPoly.G11) for _ in range(20)]
    rows = np.array(rows)
    rows[::3, 4] ^= 1
    expect = [crc_check(r, CrcPoly.G11) for r in rows]
    assert crc_check_batch(rows, CrcPoly.G11).tolist() == expect


def test_check_too_short():
    with pytest.raises(LengthMismatch):
        crc_check([1, 0, 1], CrcPoly.G6)
