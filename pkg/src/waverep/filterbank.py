"""Scale-N filter banks and their unitarity / quadrature-mirror checks.

A bank holds a scale N >= 2 and N filters m_0 .. m_{N-1}.  Filters come in
three kinds, uniform within a bank:

* ``LaurentPoly`` -- trigonometric polynomials, evaluable anywhere (exact);
* ``GridFunction`` -- samples bound to one grid (checks need M % N == 0 so
  that rotation by the N-th root of unity is an index shift);
* ``AngleFunction`` -- an explicit rule t -> value, for filters like sharp
  band indicators that no polynomial represents.

The central object is the N x N modulation matrix with entries
N^(-1/2) m_i(rho^k z), rho = exp(2*pi*i/N); a bank is "verified" when that
matrix is unitary, up to tolerance, at every point of the check grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .laurent import CircleGrid, GridFunction, LaurentPoly

# Residual below which a bank counts as verified.
VERIFY_TOL = 1e-10

# Default number of points for check grids (rounded up to a multiple of N).
DEFAULT_CHECK_POINTS = 4096


class AngleFunction:
    """A filter given as a callable of the angle t (2*pi-periodic).

    The callable must accept a float ndarray and return a complex ndarray of
    the same shape.  Not JSON-serializable; export samples it onto a grid.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], label: str = "callable"):
        self.fn = fn
        self.label = label

    def values_at_t(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return np.asarray(self.fn(t), dtype=np.complex128)

    def __repr__(self):
        return f"AngleFunction({self.label})"


Filter = Union[LaurentPoly, GridFunction, AngleFunction]


def filter_kind(f: Filter) -> str:
    if isinstance(f, LaurentPoly):
        return "poly"
    if isinstance(f, GridFunction):
        return "grid"
    if isinstance(f, AngleFunction):
        return "callable"
    raise TypeError(f"not a filter: {type(f).__name__}")


@dataclass(frozen=True)
class FilterBank:
    scale: int
    filters: tuple

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        if self.scale < 2:
            raise ValueError("scale must be >= 2")
        if len(self.filters) != self.scale:
            raise ValueError(f"expected {self.scale} filters, got {len(self.filters)}")
        kinds = {filter_kind(f) for f in self.filters}
        if len(kinds) != 1:
            raise ValueError("filters must all be of the same kind")
        if kinds == {"grid"}:
            grids = {f.grid for f in self.filters}
            if len(grids) != 1:
                raise ValueError("grid filters must share one grid")

    @property
    def kind(self) -> str:
        return filter_kind(self.filters[0])


@dataclass
class CheckReport:
    """Residuals of the quadrature-mirror and unitarity conditions."""

    qmf_residuals: list
    pairwise_residuals: np.ndarray
    unitarity_residual: float
    lowpass_ok: bool
    grid_size: int
    worst_point: complex  # grid point where the unitarity deviation peaks

    @property
    def verified(self) -> bool:
        return self.unitarity_residual <= VERIFY_TOL


def default_check_grid(scale: int, points: int = DEFAULT_CHECK_POINTS) -> CircleGrid:
    """A grid whose size is a multiple of the scale (rotation = index shift)."""
    m = scale * math.ceil(points / scale)
    return CircleGrid(m)


# ---------------------------------------------------------------------------
# pointwise evaluation helpers


def filter_values_at_angles(f: Filter, theta: np.ndarray) -> np.ndarray:
    """Values of a filter at the circle points exp(i*theta).

    theta is a z-space angle; the package's t-convention (z = exp(-i t))
    makes this f evaluated at t = -theta for callable filters.
    """
    if isinstance(f, LaurentPoly):
        return f._evaluate_unchecked(np.exp(1j * theta))
    if isinstance(f, AngleFunction):
        return f.values_at_t(-theta)
    raise TypeError("grid filters cannot be evaluated at arbitrary angles")


def values_on_coset(f: Filter, scale: int, grid: CircleGrid) -> np.ndarray:
    """Array V[k, j] = m(rho^k z_j) over the whole grid, k = 0..N-1.

    For grid-kind filters the grid must be the filter's own grid and its size
    must be divisible by the scale, so rho-rotation is an exact index roll.
    Polynomials and angle callables are evaluated exactly at the offset
    angles.
    """
    n = scale
    if isinstance(f, GridFunction):
        if f.grid != grid:
            raise ValueError("grid filter is bound to a different grid")
        if grid.M % n != 0:
            raise ValueError("coset sweep of a grid filter needs M divisible by the scale")
        step = grid.M // n
        return np.stack([np.roll(f.values, -k * step) for k in range(n)])
    theta = grid.angles()
    rows = [filter_values_at_angles(f, theta + 2.0 * np.pi * k / n) for k in range(n)]
    return np.stack(rows)


# ---------------------------------------------------------------------------
# residuals


def qmf_residual(f: Filter, scale: int, grid: CircleGrid | None = None) -> float:
    """Max over the grid of |sum_k |m(rho^k z)|^2 - N|."""
    if grid is None:
        grid = f.grid if isinstance(f, GridFunction) else default_check_grid(scale)
    v = values_on_coset(f, scale, grid)
    s = np.sum(np.abs(v) ** 2, axis=0)
    return float(np.max(np.abs(s - scale)))


def pairwise_residual(fb: FilterBank, i: int, j: int, grid: CircleGrid | None = None) -> float:
    """Max over the grid of |sum_k conj(m_i) m_j over a coset - delta_ij N|."""
    n = fb.scale
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("filter index out of range")
    if grid is None:
        grid = fb.filters[0].grid if fb.kind == "grid" else default_check_grid(n)
    vi = values_on_coset(fb.filters[i], n, grid)
    vj = values_on_coset(fb.filters[j], n, grid)
    s = np.sum(np.conj(vi) * vj, axis=0)
    target = n if i == j else 0.0
    return float(np.max(np.abs(s - target)))


def modulation_matrix(fb: FilterBank, z: complex) -> np.ndarray:
    """The N x N matrix with entries N^(-1/2) m_i(rho^k z) at one point z."""
    n = fb.scale
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError("z must lie on the unit circle")
    rho = np.exp(2j * np.pi / n)
    pts = np.array([z * rho**k for k in range(n)])
    rows = []
    for f in fb.filters:
        if isinstance(f, GridFunction):
            rows.append(np.array([_grid_value_at(f, w) for w in pts]))
        else:
            theta = np.angle(pts)
            rows.append(filter_values_at_angles(f, theta))
    return np.stack(rows) / np.sqrt(n)


def _grid_value_at(f: GridFunction, z: complex) -> complex:
    m = f.grid.M
    j = int(round(np.angle(z) / (2.0 * np.pi) * m)) % m
    if abs(f.grid.points()[j] - z) > 1e-9:
        raise ValueError("grid filter has no value at this point")
    return complex(f.values[j])


def _modulation_stack(fb: FilterBank, grid: CircleGrid) -> np.ndarray:
    n = fb.scale
    vals = np.stack([values_on_coset(f, n, grid) for f in fb.filters])  # (i, k, j)
    return vals.transpose(2, 0, 1) / np.sqrt(n)  # (j, i, k)


def unitarity_residual(fb: FilterBank, grid: CircleGrid | None = None) -> float:
    """Max over the grid of the spectral norm of C(z) C(z)* - I."""
    res, _ = unitarity_residual_with_argmax(fb, grid)
    return res


def unitarity_residual_with_argmax(fb: FilterBank, grid: CircleGrid | None = None):
    if grid is None:
        grid = fb.filters[0].grid if fb.kind == "grid" else default_check_grid(fb.scale)
    c = _modulation_stack(fb, grid)
    gram = c @ np.conj(c.transpose(0, 2, 1)) - np.eye(fb.scale)
    norms = np.linalg.norm(gram, ord=2, axis=(1, 2))
    j = int(np.argmax(norms))
    return float(norms[j]), complex(grid.points()[j])


@dataclass
class LowpassReport:
    ok: bool
    value_at_zero: complex
    phase_aligned: bool
    zero_residuals: np.ndarray

    def __bool__(self):
        return self.ok


def check_lowpass(f: Filter, scale: int, tol: float = 1e-8) -> LowpassReport:
    """Whether m takes the value sqrt(N) at t=0 and vanishes at t = 2*pi*k/N.

    The pass verdict compares |m(0)| against sqrt(N), accepting a unimodular
    phase; whether the phase is exactly +sqrt(N) is reported separately,
    since the cascade product needs the aligned value.
    """
    n = scale
    theta = -2.0 * np.pi * np.arange(n) / n  # z-angles of t = 2*pi*k/N
    if isinstance(f, GridFunction):
        vals = np.array([_grid_value_at(f, z) for z in np.exp(1j * theta)])
    else:
        vals = filter_values_at_angles(f, theta)
    v0 = complex(vals[0])
    zeros = np.abs(vals[1:])
    ok = abs(abs(v0) - math.sqrt(n)) <= tol and bool(np.all(zeros <= tol))
    return LowpassReport(
        ok=ok,
        value_at_zero=v0,
        phase_aligned=abs(v0 - math.sqrt(n)) <= tol,
        zero_residuals=zeros,
    )


def check_bank(fb: FilterBank, grid: CircleGrid | None = None) -> CheckReport:
    """Run the full condition suite on a bank and collect residuals."""
    n = fb.scale
    if grid is None:
        grid = fb.filters[0].grid if fb.kind == "grid" else default_check_grid(n)
    qmf = [qmf_residual(f, n, grid) for f in fb.filters]
    pw = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            pw[i, j] = pairwise_residual(fb, i, j, grid)
    uni, worst = unitarity_residual_with_argmax(fb, grid)
    return CheckReport(
        qmf_residuals=qmf,
        pairwise_residuals=pw,
        unitarity_residual=uni,
        lowpass_ok=check_lowpass(fb.filters[0], n).ok,
        grid_size=grid.M,
        worst_point=worst,
    )


# ---------------------------------------------------------------------------
# completion: extend a quadrature-mirror m_0 to a full unitary bank


def complete_filterbank(lowpass: Filter, scale: int, tol: float = VERIFY_TOL,
                        grid: CircleGrid | None = None) -> FilterBank:
    """Extend a single filter satisfying the QMF identity to a verified bank.

    Polynomial input at scale 2 stays polynomial via the conjugate-mirror
    rule m_1(z) = -z^(2K-1) * conj-reflect(m_0)(-z), K the top degree; the
    sign fixes a canonical phase.  Polynomial input at scale > 2 falls back
    to a grid-kind bank (pointwise Householder completion on a fundamental
    domain), as does grid input.
    """
    n = scale
    res = qmf_residual(lowpass, n, grid)
    if res > tol:
        raise ValueError(f"filter violates the quadrature-mirror identity (residual {res:.3g})")
    if isinstance(lowpass, LaurentPoly) and n == 2:
        k_top = lowpass.max_degree
        mirror = -(LaurentPoly.monomial(2 * k_top - 1) * lowpass.conj_reflect().compose_negate())
        return FilterBank(2, (lowpass, mirror))
    if isinstance(lowpass, GridFunction):
        if grid is not None and grid != lowpass.grid:
            raise ValueError("grid filter is bound to its own grid")
        grid = lowpass.grid
        m0_vals = lowpass.values
    else:
        if grid is None:
            grid = default_check_grid(n)
        m0_vals = filter_values_at_angles(lowpass, grid.angles())
    if grid.M % n != 0:
        raise ValueError("completion grid size must be divisible by the scale")
    filters = _householder_completion(m0_vals, n, grid)
    return FilterBank(n, filters)


def _householder_completion(m0_vals: np.ndarray, n: int, grid: CircleGrid) -> tuple:
    """Grid completion on a fundamental domain of the rho-rotation.

    Each rotation orbit {z, rho z, ..., rho^(N-1) z} receives its filter
    values from one unitary matrix whose first row is the normalized coset
    vector of m_0, so the modulation matrix at every grid point is a column
    permutation of an exactly unitary matrix.
    """
    m = grid.M
    step = m // n
    out = np.zeros((n, m), dtype=np.complex128)
    out[0] = m0_vals
    root_n = math.sqrt(n)
    for j in range(step):
        idx = (j + step * np.arange(n)) % m
        v = m0_vals[idx] / root_n
        q = householder_rows(v)
        out[1:, idx] = root_n * q[1:, :]
    return tuple(GridFunction(grid, row) for row in out)


def householder_rows(v: np.ndarray) -> np.ndarray:
    """A unitary matrix whose first row is the unit vector v.

    Deterministic: built from the Householder reflector sending conj(v) to a
    unimodular multiple of the first basis vector, phase chosen to avoid
    cancellation, then phase-corrected so row 0 is exactly v.
    """
    v = np.asarray(v, dtype=np.complex128)
    n = len(v)
    x = np.conj(v)
    if abs(x[0]) > 0:
        beta = -x[0] / abs(x[0])
    else:
        beta = 1.0 + 0.0j
    u = x - beta * np.eye(n, dtype=np.complex128)[0]
    nu = np.vdot(u, u).real
    if nu < 1e-30:
        h = np.eye(n, dtype=np.complex128)
        beta = x[0] if abs(x[0]) > 0 else 1.0
    else:
        h = np.eye(n, dtype=np.complex128) - 2.0 * np.outer(u, np.conj(u)) / nu
    # U = H diag(beta, 1, ..) has first column conj(v); its adjoint has row 0 = v.
    d = np.ones(n, dtype=np.complex128)
    d[0] = np.conj(beta)
    return d[:, None] * h
