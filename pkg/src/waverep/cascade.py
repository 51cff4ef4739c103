"""Frequency-side scaling and mother functions by truncated infinite products.

The scaling function is computed on the Fourier side as

    phihat(t) = (2*pi)^(-1/2) * prod_{k=1..depth} N^(-1/2) m_0(t / N^k),

which converges uniformly on compacts for Lipschitz low-pass filters.  The
mother functions follow from the band split, and the periodization residual
checks the lattice-sum identity sum_k |phihat(t + 2*pi*k)|^2 = 1/(2*pi) that
encodes orthonormality of the integer translates.

Everything here stays on the frequency side; no time-domain rendering is
provided.  Grid-kind filters are evaluated by nearest-grid lookup, which is
honest only for smooth data; such runs carry an `approximate` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filterbank import AngleFunction, Filter, FilterBank, check_lowpass
from .laurent import GridFunction, LaurentPoly

TWO_PI = 2.0 * math.pi
INV_SQRT_2PI = 1.0 / math.sqrt(TWO_PI)

DEFAULT_DEPTH = 20
DEFAULT_T_MAX = 8.0 * math.pi
DEFAULT_SAMPLES = 4097


@dataclass(frozen=True)
class LineSamples:
    """Complex samples of a function of the real angle t on [-T, T].

    The grid is uniform, symmetric about 0 and contains 0 (the constructor
    bumps an even requested count to the next odd one).
    """

    t_values: np.ndarray
    values: np.ndarray
    depth: int
    approximate: bool = False

    def value_at_zero(self) -> complex:
        j = int(np.argmin(np.abs(self.t_values)))
        if abs(self.t_values[j]) > 1e-12:
            raise ValueError("sample grid does not contain t = 0")
        return complex(self.values[j])

    @property
    def spacing(self) -> float:
        return float(self.t_values[1] - self.t_values[0])


def symmetric_grid(t_max: float, samples: int) -> np.ndarray:
    if samples < 3:
        raise ValueError("need at least 3 samples")
    if samples % 2 == 0:
        samples += 1
    return np.linspace(-t_max, t_max, samples)


def _filter_at_angles(f: Filter, t: np.ndarray) -> tuple[np.ndarray, bool]:
    """Filter values at real angles t; flags nearest-grid approximation."""
    if isinstance(f, LaurentPoly):
        return f.values_at_t(t), False
    if isinstance(f, AngleFunction):
        return f.values_at_t(t), False
    if isinstance(f, GridFunction):
        m = f.grid.M
        # z = exp(-i t) sits at grid angle -t; round to the nearest index
        j = np.round(np.mod(-t, TWO_PI) / TWO_PI * m).astype(np.int64) % m
        return f.values[j], True
    raise TypeError(f"not a filter: {type(f).__name__}")


def truncated_product(lowpass: Filter, scale: int, t, depth: int) -> np.ndarray:
    """prod_{k=1..depth} scale^(-1/2) * m_0(t / scale^k) at the angles t."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    acc = np.ones(t.shape, dtype=np.complex128)
    root = math.sqrt(scale)
    for k in range(1, depth + 1):
        vals, _ = _filter_at_angles(lowpass, t / scale**k)
        acc *= vals / root
    return acc


def scaling_hat(lowpass: Filter, scale: int, t_max: float = DEFAULT_T_MAX,
                samples: int = DEFAULT_SAMPLES, depth: int = DEFAULT_DEPTH) -> LineSamples:
    """Truncated-product samples of the scaling function's Fourier transform.

    Fails fast unless m_0(t=0) equals sqrt(N) (phase included): otherwise
    the product does not converge to the right normalization.  The value at
    t = 0 is (2*pi)^(-1/2) up to roundoff in the depth factors.
    """
    v0, _ = _filter_at_angles(lowpass, np.zeros(1))
    if abs(complex(v0[0]) - math.sqrt(scale)) > 1e-8:
        raise ValueError(
            f"low-pass value at t=0 is {complex(v0[0]):.6g}, expected sqrt({scale}); "
            "the infinite product would not converge to the right normalization"
        )
    report = check_lowpass(lowpass, scale)
    if not report.ok:
        raise ValueError("filter fails the low-pass conditions (value sqrt(N) at 0, zeros at 2*pi*k/N)")
    t = symmetric_grid(t_max, samples)
    vals = INV_SQRT_2PI * truncated_product(lowpass, scale, t, depth)
    return LineSamples(t_values=t, values=vals, depth=depth,
                       approximate=isinstance(lowpass, GridFunction))


def mother_hat(fb: FilterBank, i: int, phihat: LineSamples) -> LineSamples:
    """Samples of the i-th mother function's Fourier transform.

    psihat_i(t) = N^(-1/2) m_i(t/N) phihat(t/N), with phihat re-evaluated at
    t/N through the truncated product at the same depth (no interpolation).
    """
    n = fb.scale
    if i < 1:
        raise ValueError("index 0 is the scaling filter; mother indices start at 1")
    if i >= n:
        raise IndexError("filter index out of range")
    t = phihat.t_values
    band, approx1 = _filter_at_angles(fb.filters[i], t / n)
    base = INV_SQRT_2PI * truncated_product(fb.filters[0], n, t / n, phihat.depth)
    vals = band * base / math.sqrt(n)
    return LineSamples(t_values=t, values=vals, depth=phihat.depth,
                       approximate=phihat.approximate or approx1 or fb.kind == "grid")


@dataclass
class PerResidual:
    """Deviation of the truncated lattice sum from 1/(2*pi) on [-pi, pi]."""

    residual: float
    tail_estimate: float
    lattice_terms: int


def per_residual(samples: LineSamples, lattice_max: int) -> PerResidual:
    """Max over t in [-pi, pi] of |sum_{|k|<=K} |f(t + 2*pi*k)|^2 - 1/(2*pi)|.

    The sample grid must contain the shifted points exactly: the spacing has
    to divide 2*pi and the grid must reach 2*pi*K + pi.  The truncation tail
    is estimated from the outermost ring and reported separately.
    """
    t = samples.t_values
    dt = samples.spacing
    step = TWO_PI / dt
    if abs(step - round(step)) > 1e-9 * step:
        raise ValueError("sample spacing must divide 2*pi so lattice shifts stay on the grid")
    step = int(round(step))
    center = int(np.argmin(np.abs(t)))
    half = int(round(math.pi / dt))
    lo = center - half - lattice_max * step
    hi = center + half + lattice_max * step
    if lo < 0 or hi >= len(t):
        raise ValueError("insufficient t range: need T_max >= 2*pi*K + pi")
    window = np.arange(center - half, center + half + 1)
    sq = np.abs(samples.values) ** 2
    total = np.zeros(window.shape)
    for k in range(-lattice_max, lattice_max + 1):
        total += sq[window + k * step]
    residual = float(np.max(np.abs(total - 1.0 / TWO_PI)))
    last_ring = sq[window + lattice_max * step] + sq[window - lattice_max * step]
    tail = float(np.max(last_ring)) * lattice_max
    return PerResidual(residual=residual, tail_estimate=tail, lattice_terms=lattice_max)


def cascade_limit_residual(lowpass: Filter, scale: int, xi: LaurentPoly, depth: int,
                           t_max: float = 2.0 * math.pi, samples: int = 1025,
                           band: Filter | None = None, extra_depth: int = 20) -> float:
    """Sup-norm gap between the depth-n cascade image of xi and its limit.

    With band=None this compares the n-fold low-pass image
    chi(t/N^n) * prod_{k=1..n} N^(-1/2) m_0(t/N^k) * xi(t) against the
    deeper product (depth n + extra_depth) times xi.  Passing a band filter
    compares the mother-function variant, which applies the band at t/N and
    the low-pass product above it.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    t = symmetric_grid(t_max, samples)
    xi_vals = xi.values_at_t(t)
    chi = (np.abs(t / scale**depth) <= math.pi).astype(np.float64)
    if band is None:
        lhs = chi * truncated_product(lowpass, scale, t, depth) * xi_vals
        rhs = truncated_product(lowpass, scale, t, depth + extra_depth) * xi_vals
    else:
        band_vals, _ = _filter_at_angles(band, t / scale)
        upper = truncated_product(lowpass, scale, t / scale, depth - 1) if depth > 1 else np.ones_like(t, dtype=np.complex128)
        lhs = chi * band_vals / math.sqrt(scale) * upper * xi_vals
        deep = truncated_product(lowpass, scale, t / scale, depth - 1 + extra_depth)
        rhs = band_vals / math.sqrt(scale) * deep * xi_vals
    return float(np.max(np.abs(lhs - rhs)))
