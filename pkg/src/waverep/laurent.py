"""Bilateral (Laurent) trigonometric polynomials and circle-grid samples.

Everything downstream (filter banks, isometries, spectral problems) is built
on two value types: ``LaurentPoly``, a finite two-sided complex coefficient
sequence evaluated on the unit circle, and ``GridFunction``, complex samples
on the M-th roots of unity.  Both are immutable after construction, so they
are safe to share between threads; every operation returns a new object.

Convention used throughout the package: a polynomial, viewed as a
2*pi-periodic function of the angle t, is evaluated at z = exp(-i*t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Edge coefficients with modulus below this are trimmed, so the leading and
# trailing coefficients of a normalized polynomial are nonzero.
TRIM_TOL = 1e-14

# Maximum allowed deviation of |z| from 1 in evaluate().
UNIT_CIRCLE_TOL = 1e-12


class LaurentPoly:
    """A finite sum of c_k z^k over a contiguous integer window of k.

    ``coeffs[j]`` is the coefficient of ``z**(min_degree + j)``.  The zero
    polynomial is represented by an empty coefficient array and
    ``min_degree == 0``.
    """

    __slots__ = ("min_degree", "coeffs")

    def __init__(self, coeffs, min_degree: int = 0):
        c = np.asarray(coeffs, dtype=np.complex128)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        lo, hi = 0, len(c)
        while lo < hi and abs(c[lo]) < TRIM_TOL:
            lo += 1
        while hi > lo and abs(c[hi - 1]) < TRIM_TOL:
            hi -= 1
        if lo == hi:
            object.__setattr__(self, "coeffs", np.zeros(0, dtype=np.complex128))
            object.__setattr__(self, "min_degree", 0)
        else:
            trimmed = c[lo:hi].copy()
            trimmed.setflags(write=False)
            object.__setattr__(self, "coeffs", trimmed)
            object.__setattr__(self, "min_degree", int(min_degree) + lo)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(np.zeros(0))

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls([1.0])

    @classmethod
    def monomial(cls, degree: int, coeff: complex = 1.0) -> "LaurentPoly":
        return cls([coeff], min_degree=degree)

    # -- structure ---------------------------------------------------------

    @property
    def max_degree(self) -> int:
        if self.is_zero():
            return 0
        return self.min_degree + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, k: int) -> complex:
        """Coefficient of z**k (0 for k outside the stored window)."""
        j = k - self.min_degree
        if 0 <= j < len(self.coeffs):
            return complex(self.coeffs[j])
        return 0.0 + 0.0j

    def coeff_window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of z^lo .. z^hi inclusive, as a dense vector."""
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        if self.is_zero():
            return out
        a = max(lo, self.min_degree)
        b = min(hi, self.max_degree)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs[a - self.min_degree : b - self.min_degree + 1]
        return out

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_degree, other.min_degree)
        hi = max(self.max_degree, other.max_degree)
        acc = np.zeros(hi - lo + 1, dtype=np.complex128)
        acc[self.min_degree - lo : self.min_degree - lo + len(self.coeffs)] += self.coeffs
        acc[other.min_degree - lo : other.min_degree - lo + len(other.coeffs)] += other.coeffs
        return LaurentPoly(acc, min_degree=lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self.coeffs, min_degree=self.min_degree)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if np.isscalar(other):
            if other == 0:
                return LaurentPoly.zero()
            return LaurentPoly(self.coeffs * other, min_degree=self.min_degree)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero()
        # Direct convolution; degrees stay small enough that FFT never pays off.
        return LaurentPoly(
            np.convolve(self.coeffs, other.coeffs),
            min_degree=self.min_degree + other.min_degree,
        )

    __rmul__ = __mul__

    # -- circle operations ---------------------------------------------------

    def evaluate(self, z):
        """Evaluate at z with |z| = 1 (scalar or array).

        Uses two-sided Horner: nonnegative powers are evaluated ascending in
        z, strictly negative powers ascending in 1/z, which keeps every
        intermediate on the unit circle scale.
        """
        z = np.asarray(z, dtype=np.complex128)
        if np.any(np.abs(np.abs(z) - 1.0) > UNIT_CIRCLE_TOL):
            raise ValueError("evaluation point is off the unit circle")
        return self._evaluate_unchecked(z)

    def _evaluate_unchecked(self, z):
        scalar = np.isscalar(z) or getattr(z, "ndim", 0) == 0
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        if self.is_zero():
            out = np.zeros_like(z)
            return out[0] if scalar else out
        out = np.zeros_like(z)
        lo, hi = self.min_degree, self.max_degree
        if hi >= 0:
            # ascending Horner over degrees max(lo,0)..hi
            acc = np.zeros_like(z)
            for k in range(hi, max(lo, 0) - 1, -1):
                acc = acc * z + self.coefficient(k)
            if max(lo, 0) > 0:
                acc = acc * z ** max(lo, 0)
            out += acc
        if lo < 0:
            w = 1.0 / z
            acc = np.zeros_like(z)
            for k in range(lo, 0):  # through -1, with zeros above max_degree
                acc = acc * w + self.coefficient(k)
            out += acc * w  # degrees -1 .. lo correspond to w^1 .. w^-lo
        return out[0] if scalar else out

    def values_at_t(self, t) -> np.ndarray:
        """Values as a function of the angle t, at z = exp(-i t)."""
        t = np.asarray(t, dtype=np.float64)
        return self._evaluate_unchecked(np.exp(-1j * t))

    def compose_power(self, n: int) -> "LaurentPoly":
        """The polynomial p(z^n): coefficient of z^(n*k) is that of z^k."""
        if n < 1:
            raise ValueError("compose_power requires n >= 1")
        if self.is_zero() or n == 1:
            return self
        out = np.zeros((len(self.coeffs) - 1) * n + 1, dtype=np.complex128)
        out[::n] = self.coeffs
        return LaurentPoly(out, min_degree=self.min_degree * n)

    def compose_negate(self) -> "LaurentPoly":
        """The polynomial p(-z)."""
        if self.is_zero():
            return self
        ks = self.min_degree + np.arange(len(self.coeffs))
        signs = np.where(ks % 2 == 0, 1.0, -1.0)
        return LaurentPoly(self.coeffs * signs, min_degree=self.min_degree)

    def conj_reflect(self) -> "LaurentPoly":
        """On-circle complex conjugate: sum of conj(c_k) z^(-k)."""
        if self.is_zero():
            return self
        return LaurentPoly(np.conj(self.coeffs[::-1]), min_degree=-self.max_degree)

    def norm2(self) -> float:
        """L2(T) norm with normalized Haar measure, i.e. l2 of coefficients."""
        return float(np.linalg.norm(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.min_degree == other.min_degree and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.min_degree, self.coeffs.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = []
        for j, c in enumerate(self.coeffs[:6]):
            terms.append(f"({c:.4g})z^{self.min_degree + j}")
        tail = " + ..." if len(self.coeffs) > 6 else ""
        return "LaurentPoly(" + " + ".join(terms) + tail + ")"


def _as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if np.isscalar(x):
        return LaurentPoly([x])
    raise TypeError(f"cannot interpret {type(x).__name__} as LaurentPoly")


def inner(p: LaurentPoly, q: LaurentPoly) -> complex:
    """L2(T) inner product, conjugate-linear in the first argument."""
    if p.is_zero() or q.is_zero():
        return 0.0 + 0.0j
    lo = max(p.min_degree, q.min_degree)
    hi = min(p.max_degree, q.max_degree)
    if lo > hi:
        return 0.0 + 0.0j
    a = p.coeffs[lo - p.min_degree : hi - p.min_degree + 1]
    b = q.coeffs[lo - q.min_degree : hi - q.min_degree + 1]
    return complex(np.vdot(a, b))


def allclose(p: LaurentPoly, q: LaurentPoly, tol: float = 1e-12) -> bool:
    """Whether ||p - q|| <= tol * max(1, ||p||, ||q||)."""
    return (p - q).norm2() <= tol * max(1.0, p.norm2(), q.norm2())


# ---------------------------------------------------------------------------
# circle grids


@lru_cache(maxsize=64)
def _grid_points(m: int) -> np.ndarray:
    pts = np.exp(2j * np.pi * np.arange(m) / m)
    pts.setflags(write=False)
    return pts


@lru_cache(maxsize=64)
def _grid_angles(m: int) -> np.ndarray:
    ang = 2.0 * np.pi * np.arange(m) / m
    ang.setflags(write=False)
    return ang


@dataclass(frozen=True)
class CircleGrid:
    """The M-th roots of unity exp(2*pi*i*j/M), j = 0..M-1."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("grid size must be positive")

    def points(self) -> np.ndarray:
        return _grid_points(self.M)

    def angles(self) -> np.ndarray:
        """Angles theta_j = 2*pi*j/M of the grid points (z-convention)."""
        return _grid_angles(self.M)

    @classmethod
    def dynamics_grid(cls, scale: int, lo: int = 4095, hi: int = 65535, level: int | None = None) -> "CircleGrid":
        """Canonical grid for the dynamics z -> z^scale.

        Sizes of the form scale**L - 1 are always coprime to the scale, so
        j -> scale*j mod M permutes the grid.  L is picked so the grid lands
        in [lo, hi] when possible; callers can pin L explicitly to get a
        second, coprime grid for cross-checks.
        """
        if scale < 2:
            raise ValueError("scale must be >= 2")
        if level is not None:
            m = scale**level - 1
        else:
            L = 2
            while scale**L - 1 < lo:
                L += 1
            m = scale**L - 1
            while m > hi and L > 2:
                L -= 1
                m = scale**L - 1
        if math.gcd(m, scale) != 1:
            raise ValueError("dynamics grid size must be coprime to the scale")
        return cls(m)

    def multiply_map(self, scale: int) -> np.ndarray:
        """Index map of z -> z^scale, i.e. j -> scale*j mod M."""
        if math.gcd(self.M, scale) != 1:
            raise ValueError("z -> z^scale permutes the grid only when gcd(M, scale) = 1")
        return (np.arange(self.M) * scale) % self.M

    def cycles(self, scale: int) -> list[np.ndarray]:
        """Cycles of j -> scale*j mod M, each listed starting at its minimum."""
        sigma = self.multiply_map(scale)
        seen = np.zeros(self.M, dtype=bool)
        out = []
        for start in range(self.M):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = int(sigma[j])
            out.append(np.array(cyc, dtype=np.int64))
        return out


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on a CircleGrid, one value per grid point."""

    grid: CircleGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.M,):
            raise ValueError("values length must equal the grid size")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def norm2(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.values) ** 2)))

    def conj(self) -> "GridFunction":
        return GridFunction(self.grid, np.conj(self.values))

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise ValueError("grids differ")
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def compose_dynamics(self, scale: int) -> "GridFunction":
        """Samples of f(z^scale); requires gcd(M, scale) = 1."""
        sigma = self.grid.multiply_map(scale)
        return GridFunction(self.grid, self.values[sigma])


def grid_inner(f: GridFunction, g: GridFunction) -> complex:
    """Grid inner product (1/M) sum conj(f) g, conjugate-linear in f."""
    if f.grid != g.grid:
        raise ValueError("grids differ")
    return complex(np.vdot(f.values, g.values) / f.grid.M)


def sample(p: LaurentPoly, grid: CircleGrid) -> GridFunction:
    """Sample a polynomial on a grid: values[j] = p(exp(2*pi*i*j/M))."""
    return GridFunction(grid, p._evaluate_unchecked(grid.points()))
