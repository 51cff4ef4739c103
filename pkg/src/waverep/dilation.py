"""Finite coisometry families, their dilated states, and purity diagnostics.

A family V_0..V_{N-1} on a dim-dimensional space with sum V_i V_i* = I and a
unit vector Omega cyclic under polynomials in the V_i* determines a state of
the N-isometry relations through word moments

    <V*_{i_n} .. V*_{i_1} Omega | V*_{j_m} .. V*_{j_1} Omega>,

and conversely every such family dilates to a genuine isometry family.  The
dilation is realized concretely on a truncated Fock space: the embedding

    W_lam phi = sqrt(1-|lam|^2) (+)_k lam^k sum_words |word> (x) V*_word phi

is an isometry up to an exactly computable truncation defect |lam|^(2(K+1)),
and intertwines annihilation with lam V_i* on the interior levels.  Finite
Gram matrices of the down-word vectors certify positivity of the state, and
the ergodicity of the transfer map sigma(X) = sum V_k X V_k* decides purity.

The trace-tail diagnostic (iterates of sigma converging to scalars) is a
finite surrogate for a weak-* limit statement; it is reported as such, not
claimed to be a proof.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

COISOMETRY_TOL = 1e-12
CYCLIC_RANK_TOL = 1e-10
WORD_CAP = 10_000


@dataclass(frozen=True)
class Word:
    """The element s_{i_1}..s_{i_n} s*_{j_m}..s*_{j_1} of the word algebra.

    ``up`` lists i_1..i_n, ``down`` lists j_1..j_m; the empty word is the
    identity.
    """

    up: tuple = ()
    down: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "up", tuple(int(i) for i in self.up))
        object.__setattr__(self, "down", tuple(int(j) for j in self.down))

    def validate(self, n_ops: int):
        for i in (*self.up, *self.down):
            if not (0 <= i < n_ops):
                raise IndexError(f"letter {i} out of range for {n_ops} operators")


class CoisometryFamily:
    """N matrices V_i on C^dim with sum V_i V_i* = I and a cyclic unit Omega."""

    def __init__(self, v: np.ndarray, omega: np.ndarray):
        v = np.asarray(v, dtype=np.complex128)
        if v.ndim != 3 or v.shape[1] != v.shape[2]:
            raise ValueError("V must have shape (N, dim, dim)")
        omega = np.asarray(omega, dtype=np.complex128).reshape(-1)
        n, dim, _ = v.shape
        if omega.shape != (dim,):
            raise ValueError("Omega must be a dim vector")
        gram = sum(v[i] @ v[i].conj().T for i in range(n))
        defect = np.linalg.norm(gram - np.eye(dim), ord=2)
        if defect > COISOMETRY_TOL:
            raise ValueError(f"sum V_i V_i* differs from the identity by {defect:.3g}")
        if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
            raise ValueError("Omega must be a unit vector")
        if not _is_cyclic(v, omega):
            raise ValueError("Omega is not cyclic under polynomials in the adjoints")
        self.v = v
        self.v.setflags(write=False)
        self.omega = omega
        self.omega.setflags(write=False)
        self.n_ops = n
        self.dim = dim

    @property
    def vstar(self) -> np.ndarray:
        return np.conj(np.swapaxes(self.v, 1, 2))


def _is_cyclic(v: np.ndarray, omega: np.ndarray) -> bool:
    """Krylov check: do adjoint words applied to Omega span the whole space?"""
    n, dim, _ = v.shape
    vstar = np.conj(np.swapaxes(v, 1, 2))
    basis = [omega / np.linalg.norm(omega)]
    fresh = [basis[0]]
    while fresh and len(basis) < dim:
        nxt = []
        for x in fresh:
            for i in range(n):
                y = vstar[i] @ x
                for b in basis:
                    y = y - np.vdot(b, y) * b
                nrm = np.linalg.norm(y)
                if nrm > CYCLIC_RANK_TOL:
                    y = y / nrm
                    basis.append(y)
                    nxt.append(y)
                    if len(basis) == dim:
                        return True
        fresh = nxt
    return len(basis) == dim


def random_coisometry(n_ops: int, dim: int, rng: np.random.Generator) -> CoisometryFamily:
    """A random valid family: orthonormalized Gaussian blocks, random Omega."""
    for _ in range(64):
        g = rng.normal(size=(n_ops * dim, dim)) + 1j * rng.normal(size=(n_ops * dim, dim))
        q, _ = np.linalg.qr(g)
        blocks = q.reshape(n_ops, dim, dim)
        v = np.conj(np.swapaxes(blocks, 1, 2))  # sum V_i V_i* = sum Q_i^* Q_i = I
        omega = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        omega /= np.linalg.norm(omega)
        try:
            return CoisometryFamily(v, omega)
        except ValueError:
            continue
    raise RuntimeError("could not draw a cyclic family")


# ---------------------------------------------------------------------------
# word moments and Gram positivity


def _down_vector(fam: CoisometryFamily, letters: tuple) -> np.ndarray:
    """V*_{j_m} .. V*_{j_1} Omega, applying V*_{j_1} first."""
    x = fam.omega
    for j in letters:
        x = fam.vstar[j] @ x
    return x


def state_value(fam: CoisometryFamily, w: Word) -> complex:
    """Word moment of the dilated state (conjugate-linear in the first slot)."""
    w.validate(fam.n_ops)
    left = _down_vector(fam, w.up)
    right = _down_vector(fam, w.down)
    return complex(np.vdot(left, right))


@dataclass
class GramReport:
    min_eigenvalue: float
    psd: bool
    n_words: int


def gram_matrix(fam: CoisometryFamily, max_len: int, psd_tol: float = 1e-9) -> GramReport:
    """Gram matrix of all down-word vectors up to a length; must be PSD.

    The number of words 1 + N + .. + N^L is capped to keep this a quick
    certificate rather than an enumeration trap.
    """
    if max_len < 1:
        raise ValueError("word length must be >= 1")
    words = []
    for length in range(max_len + 1):
        words.extend(itertools.product(range(fam.n_ops), repeat=length))
    if len(words) > WORD_CAP:
        raise ValueError(f"word count {len(words)} exceeds the cap {WORD_CAP}")
    vecs = np.stack([_down_vector(fam, w) for w in words])
    gram = vecs.conj() @ vecs.T
    eigs = np.linalg.eigvalsh(gram)
    lo = float(eigs[0])
    return GramReport(min_eigenvalue=lo, psd=lo >= -psd_tol * len(words), n_words=len(words))


# ---------------------------------------------------------------------------
# truncated Fock-space dilation


@dataclass
class FockEmbeddingReport:
    isometry_defect: float
    predicted_defect: float
    intertwining_residual: float
    fock_dim: int
    levels: int


def fock_embedding(fam: CoisometryFamily, lam: complex, depth: int) -> FockEmbeddingReport:
    """Build the Fock-space isometry up to a level cap and measure its defects.

    The defect of W*W = I equals |lam|^(2(depth+1)) exactly, because the
    level-k block contributes (1-|lam|^2)|lam|^(2k) sigma^k(I) = that scalar
    times I.  The annihilation intertwining (a_i (x) I) W = lam W V_i* holds
    level by level strictly below the truncation edge; the reported residual
    is over those interior levels.
    """
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise ValueError("the embedding needs |lambda| < 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n, dim = fam.n_ops, fam.dim
    scale = math.sqrt(1.0 - abs(lam) ** 2)
    vstar = fam.vstar
    products = [np.eye(dim, dtype=np.complex128)[None, :, :]]
    for _ in range(depth):
        prev = products[-1]
        nxt = np.concatenate([prev @ vstar[i] for i in range(n)], axis=0)
        products.append(nxt)
    levels = [scale * lam**k * products[k] for k in range(depth + 1)]

    gram = sum(
        np.einsum("wia,wib->ab", np.conj(level), level) for level in levels
    )
    defect = float(np.linalg.norm(gram - np.eye(dim), ord=2))

    # annihilation reads digit i of level k and lands on level k-1; every
    # output level below the truncation edge must match lam * W V_i* exactly
    worst = 0.0
    for i in range(n):
        diffs = []
        for k in range(1, depth + 1):
            block = n ** (k - 1)
            lhs = levels[k][i * block : (i + 1) * block]
            rhs = lam * (levels[k - 1] @ vstar[i])
            diffs.append((lhs - rhs).reshape(-1, dim))
        worst = max(worst, float(np.linalg.norm(np.concatenate(diffs), ord=2)))
    fock_dim = dim * sum(n**k for k in range(depth + 1))
    return FockEmbeddingReport(
        isometry_defect=defect,
        predicted_defect=abs(lam) ** (2 * (depth + 1)),
        intertwining_residual=worst,
        fock_dim=fock_dim,
        levels=depth + 1,
    )


def scaled_word_value(fam: CoisometryFamily, lam: complex, w: Word) -> complex:
    """Compression of a word through the Fock embedding at parameter lam.

    Equals conj(lam)^n lam^m <Omega, V_{i_1}..V_{i_n} V*_{j_m}..V*_{j_1} Omega>;
    at lam = 1 this is the plain word moment.
    """
    w.validate(fam.n_ops)
    lam = complex(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError("|lambda| must be <= 1")
    x = _down_vector(fam, w.down)
    for i in reversed(w.up):
        x = fam.v[i] @ x
    return complex(np.conj(lam) ** len(w.up) * lam ** len(w.down) * np.vdot(fam.omega, x))


# ---------------------------------------------------------------------------
# ergodicity of the transfer map


@dataclass
class PurityReport:
    fixed_dim: int
    pure: bool
    tail_trivial: bool


def transfer_matrix(fam: CoisometryFamily) -> np.ndarray:
    """sigma(X) = sum V_k X V_k* as a dim^2 x dim^2 matrix (column stacking)."""
    return sum(np.kron(np.conj(fam.v[i]), fam.v[i]) for i in range(fam.n_ops))


def purity_diagnostics(fam: CoisometryFamily, tail_span: tuple = (50, 100),
                       tail_tol: float = 1e-9) -> PurityReport:
    """Fixed-point dimension of the transfer map and a tail-triviality probe.

    fixed_dim counts the kernel of (sigma - id) on matrices; the state is
    pure iff that space is the scalars alone.  tail_trivial iterates sigma
    on a matrix-unit basis and asks whether the iterates settle (Cauchy and
    close to a scalar multiple of the identity) across the given span.
    """
    dim = fam.dim
    t = transfer_matrix(fam)
    s = np.linalg.svd(t - np.eye(dim * dim), compute_uv=False)
    fixed_dim = int(np.sum(s < 1e-9 * max(1.0, s[0])))

    lo, hi = tail_span
    tail_ok = True
    eye = np.eye(dim, dtype=np.complex128)
    for a in range(dim):
        for b in range(dim):
            x = np.zeros((dim, dim), dtype=np.complex128)
            x[a, b] = 1.0
            vec = x.reshape(-1, order="F")
            prev = None
            for step in range(1, hi + 1):
                vec = t @ vec
                if step < lo:
                    continue
                mat = vec.reshape(dim, dim, order="F")
                scalar = np.trace(mat) / dim
                if np.linalg.norm(mat - scalar * eye) > tail_tol:
                    tail_ok = False
                if prev is not None and np.linalg.norm(mat - prev) > tail_tol:
                    tail_ok = False
                prev = mat
            if not tail_ok:
                break
        if not tail_ok:
            break
    return PurityReport(fixed_dim=fixed_dim, pure=fixed_dim == 1, tail_trivial=tail_ok)
