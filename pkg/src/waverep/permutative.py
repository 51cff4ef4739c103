"""Orbit decomposition of monomial isometry families and cocycle equivalence.

A monomial family (filters z^{d_i} with digits mutually incongruent mod N)
permutes the Fourier modes: the i-th isometry sends the mode k to N*k + d_i,
and the adjoints funnel every integer down the unique branch
k -> (k - d_i)/N with d_i matching k mod N.  The invariant subspaces are
spanned by the monomials they contain, so decomposing the family is pure
integer dynamics: find the cycles of the backward map (all of which live in
the ball |k| <= max|d_i| / (N-1)) and close each cycle under the forward
maps.

Characteristic-function families are handled through their unimodular
cocycle u: two of them are unitarily equivalent exactly when
Delta(z) u1(z) = u2(z) Delta(z^N) has a unimodular solution Delta, which on
a grid of size coprime to N is an explicit per-cycle telescoping product
with one obstruction per cycle.  The finite grid cannot see ergodicity, so
grid verdicts are flagged as a screen; the monomial special cases are
cross-checked symbolically in the tests.  Irreducibility of these families
is a structural fact taken as an assumption, not re-verified numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laurent import CircleGrid, GridFunction

CYCLE_ARC_TOL = 1e-8


# ---------------------------------------------------------------------------
# monomial families: integer orbit decomposition


@dataclass(frozen=True)
class MonomialRep:
    """Scale N and digits d_0..d_{N-1}, mutually incongruent modulo N."""

    scale: int
    digits: tuple

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if self.scale < 2:
            raise ValueError("scale must be >= 2")
        if len(self.digits) != self.scale:
            raise ValueError(f"expected {self.scale} digits")
        if len({d % self.scale for d in self.digits}) != self.scale:
            raise ValueError("digits must be mutually incongruent modulo the scale")

    def branch_back(self, k: int) -> int:
        """The unique preimage (k - d_i)/N with d_i = k mod N."""
        d = self._digit_for(k)
        return (k - d) // self.scale

    def _digit_for(self, k: int) -> int:
        r = k % self.scale
        for d in self.digits:
            if d % self.scale == r:
                return d
        raise AssertionError("digit classes cover all residues")

    def cycle_radius(self) -> int:
        """All cycle points satisfy |c| <= max|d| / (N-1)."""
        return max(abs(d) for d in self.digits) // (self.scale - 1)


@dataclass
class Component:
    """One invariant family of Fourier modes: a cycle plus its forward closure."""

    cycle: tuple
    members: np.ndarray  # sorted modes inside the enumerated window
    description: str


@dataclass
class ComponentReport:
    cycles: list
    components: list
    window: tuple

    def component_index(self, k: int) -> int:
        """Index of the component containing mode k."""
        return component_of(self, k)


def _find_cycles(rep: MonomialRep) -> list[tuple]:
    """All cycles of the backward map, via funnel walks from a safe ball."""
    radius = 2 * rep.cycle_radius() + 2
    cycles = []
    seen_cycles: set = set()
    for start in range(-radius, radius + 1):
        trail = {}
        k = start
        step = 0
        while k not in trail:
            trail[k] = step
            step += 1
            k = rep.branch_back(k)
            if abs(k) > 16 * max(radius, 8):
                raise AssertionError("backward orbit escaped; digit system inconsistent")
        # k closed a loop: extract it
        loop_start = trail[k]
        loop = [q for q, s in trail.items() if s >= loop_start]
        anchor = min(loop)
        rot = loop.index(anchor)
        canon = tuple(loop[rot:] + loop[:rot])
        if canon not in seen_cycles:
            seen_cycles.add(canon)
            cycles.append(canon)
    return sorted(cycles, key=lambda c: c[0])


def decompose_monomial(rep: MonomialRep, window: int | tuple = 64) -> ComponentReport:
    """Split the integer modes in a window into the invariant components.

    Each component is the closure of one backward-map cycle under the
    forward maps k -> N k + d_i, enumerated inside the window; the
    components partition the window (this is asserted).
    """
    if isinstance(window, tuple):
        lo, hi = window
    else:
        lo, hi = -abs(window), abs(window)
    radius = max(abs(lo), abs(hi), rep.cycle_radius() + 1)
    cycles = _find_cycles(rep)
    components = []
    claimed = {}
    for cyc in cycles:
        members = set(cyc)
        frontier = list(cyc)
        while frontier:
            k = frontier.pop()
            for d in rep.digits:
                nxt = rep.scale * k + d
                if abs(nxt) <= radius and nxt not in members:
                    members.add(nxt)
                    frontier.append(nxt)
        in_window = np.array(sorted(m for m in members if lo <= m <= hi), dtype=np.int64)
        for m in in_window:
            if int(m) in claimed:
                raise AssertionError(f"mode {m} claimed by two components")
            claimed[int(m)] = cyc
        components.append(Component(
            cycle=cyc,
            members=in_window,
            description=f"closure of cycle {cyc} under k -> {rep.scale}k + d, d in {rep.digits}",
        ))
    missing = [k for k in range(lo, hi + 1) if k not in claimed]
    if missing:
        raise AssertionError(f"modes not covered by any component: {missing[:5]} ...")
    report = ComponentReport(cycles=list(cycles), components=components, window=(lo, hi))
    report._rep = rep
    return report


def component_of(report: ComponentReport, k: int) -> int:
    """Component index of an arbitrary mode, by walking the backward funnel.

    Works outside the enumerated window: every backward orbit reaches some
    cycle, which identifies the component.
    """
    rep = report._rep
    cycle_sets = [set(c.cycle) for c in report.components]
    seen = set()
    while True:
        for idx, cs in enumerate(cycle_sets):
            if k in cs:
                return idx
        if k in seen:
            raise AssertionError("walk cycled outside the known cycles")
        seen.add(k)
        k = rep.branch_back(k)


# ---------------------------------------------------------------------------
# partitions of the circle under rotation


def check_partition(masks, scale: int) -> bool:
    """Whether N boolean grid masks tile every rotation orbit exactly once.

    Masks must share a grid whose size is divisible by N, so multiplication
    by the N-th root of unity is an index shift.  True iff for every grid
    point z the points z, rho z, ..., rho^(N-1) z meet each set once.
    """
    masks = [np.asarray(m, dtype=bool) for m in masks]
    if len(masks) != scale:
        raise ValueError(f"expected {scale} masks")
    m = len(masks[0])
    if any(len(a) != m for a in masks):
        raise ValueError("masks must share one grid")
    if m % scale != 0:
        raise ValueError("grid size must be divisible by the scale")
    step = m // scale
    cover = np.zeros(m, dtype=np.int64)
    for a in masks:
        cover += a
    if np.any(cover != 1):
        return False
    for a in masks:
        hits = np.zeros(m, dtype=np.int64)
        for k in range(scale):
            hits += np.roll(a, -k * step)
        if np.any(hits != 1):
            return False
    return True


def standard_arc_masks(grid: CircleGrid, scale: int) -> list[np.ndarray]:
    """Masks of the arcs between consecutive N-th roots of unity.

    Membership is decided by angle, so the masks exist on any grid; only
    check_partition needs the divisibility that makes rotation an index
    shift.
    """
    js = np.arange(grid.M)
    k = (js * scale) // grid.M  # floor(angle / (2 pi / N))
    return [(k == i) for i in range(scale)]


# ---------------------------------------------------------------------------
# characteristic-function families and cocycle equivalence


@dataclass(frozen=True)
class CharRep:
    """A characteristic-function family: scale N and unimodular cocycle u.

    The filters are sqrt(N) * chi_k(z) * u(z) with chi_k the indicator of
    the standard arc between the k-th and (k+1)-th roots of unity; all the
    equivalence data sits in u.
    """

    scale: int
    u: GridFunction

    def __post_init__(self):
        if self.scale < 2:
            raise ValueError("scale must be >= 2")
        dev = np.max(np.abs(np.abs(self.u.values) - 1.0))
        if dev > 1e-12:
            raise ValueError(f"cocycle is not unimodular (deviation {dev:.3g})")
        if math.gcd(self.u.grid.M, self.scale) != 1:
            raise ValueError("cocycle grid must be coprime to the scale")


def solve_coboundary(u1: GridFunction, u2: GridFunction, scale: int,
                     tol: float = CYCLE_ARC_TOL) -> GridFunction | None:
    """Solve Delta(z) u1(z) = u2(z) Delta(z^N) on the grid, or report none.

    Along each cycle of j -> N j mod M the relation telescopes, determining
    Delta up to one unimodular scalar per cycle (fixed to 1 at the cycle
    minimum); a solution exists iff every cycle product of u1/u2 is 1 within
    arc distance tol * cycle length.
    """
    if u1.grid != u2.grid:
        raise ValueError("cocycles must share one grid")
    for u in (u1, u2):
        if np.max(np.abs(np.abs(u.values) - 1.0)) > 1e-10:
            raise ValueError("cocycles must be unimodular")
    grid = u1.grid
    q = u1.values / u2.values
    delta = np.zeros(grid.M, dtype=np.complex128)
    for cyc in grid.cycles(scale):
        prod = complex(np.prod(q[cyc]))
        if abs(np.angle(prod)) > tol * len(cyc):
            return None
        walk = np.concatenate([[1.0 + 0j], np.cumprod(q[cyc[:-1]])])
        delta[cyc] = walk / np.abs(walk)
    return GridFunction(grid, delta)


@dataclass
class EquivalenceReport:
    equivalent: bool
    delta: GridFunction | None
    intertwining_residual: float | None
    grid_screen: bool = True  # finite-grid necessary-condition verdict


def equivalence_check(rep1: CharRep, rep2: CharRep,
                      probes: list | None = None) -> EquivalenceReport:
    """Decide unitary equivalence of two characteristic-function families.

    Equivalent iff the cocycles cobound; on success the candidate
    multiplication intertwiner is applied to probe vectors through both
    families and the residual of the exchange relation is reported.
    """
    if rep1.scale != rep2.scale:
        raise ValueError("scales differ")
    if rep1.u.grid != rep2.u.grid:
        raise ValueError("grids differ")
    n = rep1.scale
    grid = rep1.u.grid
    delta = solve_coboundary(rep1.u, rep2.u, n)
    if delta is None:
        return EquivalenceReport(equivalent=False, delta=None, intertwining_residual=None)
    if probes is None:
        pts = grid.points()
        probes = [np.ones(grid.M), pts, np.conj(pts)]
    sigma = grid.multiply_map(n)
    arcs = np.stack([m.astype(float) for m in standard_arc_masks(grid, n)])
    root = math.sqrt(n)
    worst = 0.0
    for xi in probes:
        xi = np.asarray(xi, dtype=np.complex128)
        for k in range(n):
            s1 = root * arcs[k] * rep1.u.values * xi[sigma]
            s2k_delta = root * arcs[k] * rep2.u.values * (delta.values * xi)[sigma]
            diff = delta.values * s1 - s2k_delta
            worst = max(worst, float(np.max(np.abs(diff))))
    return EquivalenceReport(equivalent=True, delta=delta, intertwining_residual=worst)
