import math

import numpy as np
import pytest

from waverep import fixtures
from waverep.cascade import (
    LineSamples,
    cascade_limit_residual,
    mother_hat,
    per_residual,
    scaling_hat,
    symmetric_grid,
    truncated_product,
)
from waverep.laurent import LaurentPoly

TWO_PI = 2.0 * math.pi
TARGET0 = 1.0 / math.sqrt(TWO_PI)


def wide_samples(bank, lattice_max, depth=20, per_spacing=math.pi / 32):
    t_max = (2 * lattice_max + 1) * math.pi
    n = 2 * int(round(t_max / per_spacing)) + 1
    return scaling_hat(bank.filters[0], bank.scale, t_max=t_max, samples=n, depth=depth)


# ---------------------------------------------------------------------------
# scaling function


@pytest.mark.parametrize("name", ["haar2", "haar3", "db4"])
def test_value_at_zero(name):
    bank = fixtures.fixture_bank(name)
    phi = scaling_hat(bank.filters[0], bank.scale)
    assert abs(phi.value_at_zero() - TARGET0) < 1e-12


def test_haar_zero_at_lattice():
    m0 = fixtures.haar(2).filters[0]
    vals = TARGET0 * truncated_product(m0, 2, np.array([TWO_PI, -TWO_PI, 2 * TWO_PI, -2 * TWO_PI]), 20)
    assert np.max(np.abs(vals)) < 1e-12


def test_haar_matches_closed_form():
    # oracle: the infinite product for the two-tap filter telescopes to
    # (2 pi)^(-1/2) |sin(t/2) / (t/2)| in modulus
    phi = scaling_hat(fixtures.haar(2).filters[0], 2, t_max=8 * math.pi, samples=4097, depth=20)
    t = phi.t_values
    ref = np.where(t == 0, 1.0, np.sin(t / 2) / np.where(t == 0, 1.0, t / 2))
    assert np.max(np.abs(np.abs(phi.values) - TARGET0 * np.abs(ref))) < 1e-6


def test_depth_recursion_exact():
    m0 = fixtures.haar(2).filters[0]
    t = symmetric_grid(4 * math.pi, 257)
    p5 = truncated_product(m0, 2, t, 5)
    p6 = truncated_product(m0, 2, t, 6)
    factor = m0.values_at_t(t / 2**6) / math.sqrt(2)
    assert np.max(np.abs(p6 - factor * p5)) < 1e-15


def test_depth_stability():
    # the truncation tail is a phase of size ~ c * t * 2^(-depth-1), so the
    # doubling gap shrinks by 2^(-10) per 10 extra layers
    m0 = fixtures.db4().filters[0]
    gap20 = np.max(np.abs(scaling_hat(m0, 2, depth=20).values
                          - scaling_hat(m0, 2, depth=40).values))
    gap30 = np.max(np.abs(scaling_hat(m0, 2, depth=30).values
                          - scaling_hat(m0, 2, depth=60).values))
    assert gap20 < 1e-5
    assert gap30 < 1e-8
    assert gap30 < gap20 / 500


def test_fail_fast_on_bad_lowpass():
    with pytest.raises(ValueError):
        scaling_hat(LaurentPoly.one(), 2)
    with pytest.raises(ValueError):
        scaling_hat(LaurentPoly([math.sqrt(2.0)]), 2)  # no zero at t = pi


def test_grid_contains_zero():
    phi = scaling_hat(fixtures.haar(2).filters[0], 2, samples=4096)  # even gets bumped
    assert phi.value_at_zero() == pytest.approx(TARGET0, abs=1e-12)


# ---------------------------------------------------------------------------
# mother functions


def test_mother_vanishes_at_zero(haar_bank):
    phi = scaling_hat(haar_bank.filters[0], 2)
    psi = mother_hat(haar_bank, 1, phi)
    assert abs(psi.value_at_zero()) < 1e-14


def test_mother_index_validation(haar_bank):
    phi = scaling_hat(haar_bank.filters[0], 2)
    with pytest.raises(ValueError):
        mother_hat(haar_bank, 0, phi)
    with pytest.raises(IndexError):
        mother_hat(haar_bank, 2, phi)


def test_mother_periodization(haar_bank):
    # orthonormal translates of the mother function: same lattice identity.
    # The band filter doubles the algebraic tail relative to the father
    # (|m_1|^2 reaches 2), so the K = 64 truncation sits near 1.0e-3.
    wide = wide_samples(haar_bank, 128)
    psi = mother_hat(haar_bank, 1, wide)
    assert per_residual(psi, 64).residual < 2.1e-3
    assert per_residual(psi, 128).residual < 1.1e-3


def test_shannon_mother_support(shannon_bank):
    phi = scaling_hat(shannon_bank.filters[0], 2, t_max=8 * math.pi, samples=4097, depth=20)
    psi = mother_hat(shannon_bank, 1, phi)
    t, v = psi.t_values, np.abs(psi.values)
    # oracle by direct evaluation of the half-open band indicators:
    # support is [pi, 2 pi) on the right and [-2 pi, -pi) on the left
    support = ((t >= math.pi) & (t < TWO_PI)) | ((t >= -TWO_PI) & (t < -math.pi))
    assert np.allclose(v[support], TARGET0, atol=1e-12)
    assert np.max(v[~support]) == 0.0


# ---------------------------------------------------------------------------
# periodization residual


def test_per_shannon_exact(shannon_bank):
    wide = wide_samples(shannon_bank, 64)
    pr = per_residual(wide, 64)
    assert pr.residual < 1e-6


def test_per_haar(haar_bank):
    pr = per_residual(wide_samples(haar_bank, 64), 64)
    assert pr.residual < 1e-3
    assert pr.tail_estimate > 0


def test_per_scaled_failure(haar_bank):
    wide = wide_samples(haar_bank, 64)
    doubled = LineSamples(wide.t_values, 2.0 * wide.values, wide.depth)
    # oracle: the sum quadruples, so the deviation is 3/(2 pi) up to the tail
    assert per_residual(doubled, 64).residual == pytest.approx(3 / TWO_PI, abs=1e-3)


def test_per_monotone_in_lattice(haar_bank):
    wide = wide_samples(haar_bank, 64)
    r16 = per_residual(wide, 16).residual
    r32 = per_residual(wide, 32).residual
    r64 = per_residual(wide, 64).residual
    assert r64 <= r32 + 1e-12 <= r16 + 2e-12


def test_per_requires_range(haar_bank):
    phi = scaling_hat(haar_bank.filters[0], 2, t_max=4 * math.pi, samples=257)
    with pytest.raises(ValueError):
        per_residual(phi, 64)


def test_per_requires_aligned_spacing(haar_bank):
    phi = scaling_hat(haar_bank.filters[0], 2, t_max=10.0, samples=401)
    with pytest.raises(ValueError):
        per_residual(phi, 1)


# ---------------------------------------------------------------------------
# cascade limits


def test_limit_gap_decays_geometrically(haar_bank):
    m0 = haar_bank.filters[0]
    one = LaurentPoly.one()
    r10 = cascade_limit_residual(m0, 2, one, 10)
    r14 = cascade_limit_residual(m0, 2, one, 14)
    # the truncation gap carries a phase of size ~ t 2^(-n-1); at |t| <= 2 pi
    # that is 2^(-n) at worst
    assert r10 < 2.0 ** (-10) * 1.05
    assert r14 < 2.0 ** (-14) * 1.05
    assert r14 < r10 / 8


def test_limit_zero_vector(haar_bank):
    assert cascade_limit_residual(haar_bank.filters[0], 2, LaurentPoly.zero(), 10) == 0.0


def test_limit_mother_variant(haar_bank):
    m0, m1 = haar_bank.filters
    one = LaurentPoly.one()
    r10 = cascade_limit_residual(m0, 2, one, 10, band=m1)
    r14 = cascade_limit_residual(m0, 2, one, 14, band=m1)
    assert r10 < 2.0 ** (-9) * 1.05
    assert r14 < r10 / 8


def test_limit_with_nontrivial_xi(haar_bank):
    xi = LaurentPoly([0.5, 0.0, 0.5j], min_degree=-1)
    r = cascade_limit_residual(haar_bank.filters[0], 2, xi, 12)
    assert r < 2.0 ** (-12) * xi.norm2() * 4
