"""Isometry families S_i xi = m_i(z) xi(z^N) on the circle, with exact adjoints.

For polynomial filters both S_i and S_i* are computed purely on coefficient
arrays, so the defining relations

    S_j* S_i = delta_ij,   sum_i S_i S_i* = identity

hold to machine precision whenever the bank's modulation matrix is unitary.
The adjoint is digit extraction: the coefficient of z^k in S_i* xi gathers
the coefficients of xi at indices N*k + a over the support a of m_i,
weighted by conj(m_i)_a.  No grid quadrature is involved.

Grid-kind banks get parallel operations through the permutation model
(z -> z^N permutes a grid of coprime size).  Those are exact adjoint pairs
for the *grid* inner product, but a finite grid cannot carry the relations
themselves (the completeness sum comes out N, not 1), so grid results are
screening diagnostics only; every relation test in this package runs on
polynomial banks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank, unitarity_residual, VERIFY_TOL
from .laurent import GridFunction, LaurentPoly


# ---------------------------------------------------------------------------
# single-filter operations (polynomial, exact)


def apply_filter_isometry(m: LaurentPoly, scale: int, xi: LaurentPoly) -> LaurentPoly:
    """S xi = m(z) xi(z^scale) on coefficients."""
    return m * xi.compose_power(scale)


def apply_filter_adjoint(m: LaurentPoly, scale: int, xi: LaurentPoly) -> LaurentPoly:
    """S* xi by digit extraction over the support of m.

    (S* xi)(z) = (1/N) sum over the N-th roots w of z of conj(m(w)) xi(w);
    on coefficients this keeps exactly the modes of conj(m) xi whose index
    is divisible by N.
    """
    if m.is_zero() or xi.is_zero():
        return LaurentPoly.zero()
    n = scale
    k_lo = -(-(xi.min_degree - m.max_degree) // n)  # ceil division
    k_hi = (xi.max_degree - m.min_degree) // n
    if k_lo > k_hi:
        return LaurentPoly.zero()
    out = np.zeros(k_hi - k_lo + 1, dtype=np.complex128)
    xlo, xhi = xi.min_degree, xi.max_degree
    for j, c in enumerate(m.coeffs):
        a = m.min_degree + j
        # contributions conj(c) * xi_{n*k + a} for k in [k_lo, k_hi]
        idx = n * np.arange(k_lo, k_hi + 1) + a
        valid = (idx >= xlo) & (idx <= xhi)
        if not np.any(valid):
            continue
        out[valid] += np.conj(c) * xi.coeffs[idx[valid] - xlo]
    return LaurentPoly(out, min_degree=k_lo)


def apply_grid_isometry(m: GridFunction, scale: int, xi: GridFunction) -> GridFunction:
    """Permutation-model S on a grid coprime to the scale (screening only)."""
    return m * xi.compose_dynamics(scale)


def apply_grid_adjoint(m: GridFunction, scale: int, xi: GridFunction) -> GridFunction:
    """Adjoint of apply_grid_isometry for the grid inner product."""
    if m.grid != xi.grid:
        raise ValueError("grids differ")
    sigma = m.grid.multiply_map(scale)
    inv = np.empty_like(sigma)
    inv[sigma] = np.arange(m.grid.M)
    return GridFunction(m.grid, np.conj(m.values[inv]) * xi.values[inv])


# ---------------------------------------------------------------------------
# representations built from a verified bank


class CuntzRep:
    """The isometries of a verified filter bank, acting on L2 of the circle."""

    def __init__(self, bank: FilterBank, tol: float = VERIFY_TOL, validate: bool = True):
        if validate:
            res = unitarity_residual(bank)
            if res > tol:
                raise ValueError(f"bank is not verified (unitarity residual {res:.3g})")
        self.bank = bank
        self.scale = bank.scale

    def _check_index(self, i: int):
        if not (0 <= i < self.scale):
            raise IndexError(f"isometry index {i} out of range for scale {self.scale}")

    def apply_isometry(self, i: int, xi):
        self._check_index(i)
        f = self.bank.filters[i]
        if isinstance(f, LaurentPoly):
            return apply_filter_isometry(f, self.scale, xi)
        if isinstance(f, GridFunction):
            return apply_grid_isometry(f, self.scale, xi)
        raise TypeError("callable-kind banks have no coefficient action; sample them first")

    def apply_adjoint(self, i: int, xi):
        self._check_index(i)
        f = self.bank.filters[i]
        if isinstance(f, LaurentPoly):
            return apply_filter_adjoint(f, self.scale, xi)
        if isinstance(f, GridFunction):
            return apply_grid_adjoint(f, self.scale, xi)
        raise TypeError("callable-kind banks have no coefficient action; sample them first")


def cuntz_residuals(rep: CuntzRep, samples) -> tuple[float, float]:
    """Worst-case defect of the two defining relations over sample vectors.

    Returns (max ||S_j* S_i xi - delta_ij xi||, max ||sum_i S_i S_i* xi - xi||).
    """
    n = rep.scale
    ortho = 0.0
    complete = 0.0
    for xi in samples:
        images = [rep.apply_isometry(i, xi) for i in range(n)]
        acc = None
        for i in range(n):
            for j in range(n):
                d = rep.apply_adjoint(j, images[i])
                if i == j:
                    d = d - xi
                ortho = max(ortho, d.norm2())
            term = rep.apply_isometry(i, rep.apply_adjoint(i, xi))
            acc = term if acc is None else acc + term
        complete = max(complete, (acc - xi).norm2())
    return ortho, complete


def endomorphism_residual(rep: CuntzRep, f: LaurentPoly, samples) -> float:
    """Defect of sum_i S_i (f * S_i* xi) = f(z^N) * xi over sample vectors.

    This is the compatibility of the bank's isometries with the shift
    endomorphism on multiplication operators; it vanishes exactly when the
    modulation matrix is unitary.
    """
    n = rep.scale
    worst = 0.0
    for xi in samples:
        acc = None
        for i in range(n):
            term = rep.apply_isometry(i, f * rep.apply_adjoint(i, xi))
            acc = term if acc is None else acc + term
        target = f.compose_power(n) * xi
        worst = max(worst, (acc - target).norm2())
    return worst


@dataclass
class ShiftCoefficients:
    """Layer coefficients of a vector in the shift realization of S_0.

    blocks[(k, j)] = S_j* (S_0*)^(k-1) xi for layers k = 1..depth and
    channels j = 1..N-1; residual_norm is the part of xi left in the range
    of S_0^depth, which decays to 0 exactly when S_0 is a pure shift.
    """

    depth: int
    blocks: dict
    residual_norm: float
    reconstruction_error: float


def shift_realization(rep: CuntzRep, xi: LaurentPoly, depth: int) -> ShiftCoefficients:
    """Peel xi into shift layers along S_0 with channel coefficients.

    Iterating the completeness relation gives
    xi = sum_{k<=depth} sum_{j>=1} S_0^(k-1) S_j psi_k^(j) + S_0^depth S_0*^depth xi,
    and the reconstruction is re-assembled to confirm the identity.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = rep.scale
    blocks = {}
    tail = xi
    for k in range(1, depth + 1):
        for j in range(1, n):
            blocks[(k, j)] = rep.apply_adjoint(j, tail)
        tail = rep.apply_adjoint(0, tail)
    # tail is now (S_0*)^depth xi
    remainder = tail
    for _ in range(depth):
        remainder = rep.apply_isometry(0, remainder)
    recon = remainder
    for k in range(1, depth + 1):
        for j in range(1, n):
            term = rep.apply_isometry(j, blocks[(k, j)])
            for _ in range(k - 1):
                term = rep.apply_isometry(0, term)
            recon = recon + term
    return ShiftCoefficients(
        depth=depth,
        blocks=blocks,
        residual_norm=remainder.norm2(),
        reconstruction_error=(recon - xi).norm2(),
    )
