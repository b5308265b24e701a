"""Dense numerical kernels.

Norms, Takagi factorization, suprema of ``|h^T S h|`` over the unit sphere,
orthonormal bases of matrix subspaces, and a seeded search for low-rank
elements inside a matrix subspace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.optimize

from .errors import DimensionMismatch, NotSymmetric, NumericalFailure

__all__ = [
    "matrix_norms",
    "TakagiFactorization",
    "takagi",
    "quad_form_sup",
    "SubspaceBasis",
    "orthonormalize",
    "RankOneCandidate",
    "rank_one_search",
    "low_rank_search",
    "restart_rng",
]


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for restart/trial ``index`` under ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(index)]))


def _svdvals(M) -> np.ndarray:
    try:
        return np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def matrix_norms(M) -> tuple[float, float]:
    """Return ``(operator_norm, trace_norm)`` from the singular values of ``M``."""
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise NumericalFailure("matrix has non-finite entries")
    if M.size == 0:
        return 0.0, 0.0
    s = _svdvals(M)
    return float(s[0]), float(s.sum())


# ---------------------------------------------------------------------------
# Takagi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TakagiFactorization:
    """``S = Q diag(sigma) Q^T`` with unitary ``Q`` and ``sigma`` nonincreasing."""

    Q: np.ndarray
    sigma: np.ndarray
    residual: float

    def reconstruct(self) -> np.ndarray:
        return (self.Q * self.sigma) @ self.Q.T


def _symmetric_unitary_sqrt(Z: np.ndarray) -> np.ndarray:
    """Unitary ``W`` with ``W W^T = Z`` for a symmetric unitary ``Z``.

    ``Z = X + iY`` with commuting real symmetric ``X, Y``; a real orthogonal
    ``O`` diagonalizing both gives ``Z = O diag(e^{i t}) O^T`` and
    ``W = O diag(e^{i t/2})``.
    """
    m = Z.shape[0]
    if m == 1:
        return np.sqrt(Z.astype(complex))
    X, Y = Z.real, Z.imag
    X = 0.5 * (X + X.T)
    Y = 0.5 * (Y + Y.T)
    best = None
    # Any generic mix separates the joint eigenspaces; try a few fixed ones.
    for c in (0.5772156649, 1.6180339887, -0.7071067812, 2.7182818285):
        _, O = np.linalg.eigh(X + c * Y)
        D = O.T @ Z @ O
        off = np.linalg.norm(D - np.diag(np.diagonal(D)))
        if best is None or off < best[0]:
            best = (off, O, np.diagonal(D))
        if off <= 1e-12:
            break
    _, O, d = best
    return O * np.exp(0.5j * np.angle(d))


def takagi(S, tol: float = 1e-9, cluster_tol: float = 1e-9) -> TakagiFactorization:
    """Takagi factorization of a complex symmetric matrix.

    SVD based: with ``S = U diag(s) V^H`` each cluster of equal nonzero
    singular values satisfies ``conj(V_J) = U_J Z_J`` for a symmetric unitary
    ``Z_J``; then ``Q_J = U_J sqrt(Z_J)``.  Singular values closer than
    ``cluster_tol * s[0]`` are treated as one cluster.
    """
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {S.shape}")
    n = S.shape[0]
    scale = max(np.linalg.norm(S, 2), np.finfo(float).tiny) if n else 1.0
    asym = np.linalg.norm(S - S.T, 2) if n else 0.0
    if asym > tol * scale:
        raise NotSymmetric(f"||S - S^T|| = {asym:.3e} exceeds {tol:g}*||S||")
    if n == 0:
        return TakagiFactorization(np.zeros((0, 0), complex), np.zeros(0), 0.0)
    S = 0.5 * (S + S.T)
    try:
        U, s, Vh = np.linalg.svd(S)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    Vc = Vh.T  # conj(V)
    Q = np.array(U, dtype=complex)
    zero_cut = max(s[0], np.finfo(float).tiny) * n * np.finfo(float).eps
    i = 0
    while i < n:
        j = i + 1
        while j < n and s[i] - s[j] <= cluster_tol * s[0]:
            j += 1
        if s[i] > zero_cut:
            Uj = U[:, i:j]
            Z = Uj.conj().T @ Vc[:, i:j]
            Z = 0.5 * (Z + Z.T)
            Q[:, i:j] = Uj @ _symmetric_unitary_sqrt(Z)
        i = j
    # Columns of a cluster share one singular value up to cluster_tol.
    fact = TakagiFactorization(Q, s, 0.0)
    residual = float(np.linalg.norm(fact.reconstruct() - S, 2))
    return TakagiFactorization(Q, s, residual)


# ---------------------------------------------------------------------------
# sup |h^T S h| over the unit sphere
# ---------------------------------------------------------------------------


def _sphere_ascent(
    S: np.ndarray,
    restarts: int,
    seed: int,
    max_iter: int,
    gtol: float,
) -> tuple[float, np.ndarray]:
    """Projected gradient ascent of ``|h^T S h|`` on the unit sphere.

    All restarts advance together as columns of ``H``; each column keeps its
    own step length (doubled on success, halved on failure).
    """
    n = S.shape[0]
    H = np.empty((n, restarts), dtype=complex)
    for r in range(restarts):
        g = restart_rng(seed, r)
        h = g.standard_normal(n) + 1j * g.standard_normal(n)
        H[:, r] = h / np.linalg.norm(h)

    def value(H):
        return np.abs(np.einsum("ir,ir->r", H, S @ H))

    f = value(H)
    step = np.ones(restarts)
    active = np.ones(restarts, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        SH = S @ H
        q = np.einsum("ir,ir->r", H, SH)
        phase = np.where(np.abs(q) > 0, q / np.where(np.abs(q) > 0, np.abs(q), 1.0), 1.0)
        G = 2.0 * phase * SH.conj()
        # Riemannian projection: remove the radial component.
        G = G - np.real(np.einsum("ir,ir->r", H.conj(), G)) * H
        gnorm = np.linalg.norm(G, axis=0)
        active &= gnorm > gtol
        pending = active.copy()
        while pending.any():
            trial = H + step * G
            trial /= np.linalg.norm(trial, axis=0)
            ft = value(trial)
            ok = (ft >= f) & pending
            H[:, ok] = trial[:, ok]
            f[ok] = ft[ok]
            step[ok] *= 2.0
            pending &= ~ok
            step[pending] *= 0.5
            # A column whose step underflowed has converged to roundoff.
            stalled = pending & (step < 1e-14)
            active &= ~stalled
            pending &= ~stalled
    best = int(np.argmax(f))
    h = _sphere_polish(S, H[:, best])
    return float(abs(h @ S @ h)), h


def _sphere_polish(S: np.ndarray, h0: np.ndarray) -> np.ndarray:
    """BFGS refinement of ``-|h^T S h| / ||h||^2`` from an ascent endpoint.

    The ascent converges linearly and can stall short of full precision
    when the top values are close; the scale-invariant form needs no
    sphere constraint.
    """
    n = S.shape[0]

    def fun(x):
        h = x[:n] + 1j * x[n:]
        nn = np.vdot(h, h).real
        Sh = S @ h
        q = h @ Sh
        aq = abs(q)
        if aq == 0:
            return 0.0, np.zeros_like(x)
        # d|q| = Re(conj(q)/|q| * 2 (Sh)^T dh)
        a = 2.0 * (np.conj(q) / aq) * Sh
        gq = np.concatenate([a.real, -a.imag])
        gn = 2.0 * np.concatenate([h.real, h.imag])
        val = aq / nn
        grad = (gq * nn - aq * gn) / nn**2
        return -val, -grad

    x0 = np.concatenate([h0.real, h0.imag])
    res = scipy.optimize.minimize(fun, x0, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 1000})
    h = res.x[:n] + 1j * res.x[n:]
    h = h / np.linalg.norm(h)
    if abs(h @ S @ h) < abs(h0 @ S @ h0):
        return h0
    return h


def quad_form_sup(
    S,
    method: str = "takagi",
    seed: int = 0,
    restarts: int = 20,
    max_iter: int = 500,
    gtol: float = 1e-10,
) -> tuple[float, np.ndarray]:
    """``sup { |h^T S h| : ||h|| = 1 }`` and a maximizing unit vector.

    ``method="takagi"`` returns the top Takagi value of ``(S + S^T)/2``;
    ``method="search"`` runs the sphere ascent, independent of Takagi.
    """
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {S.shape}")
    S = 0.5 * (S + S.T)
    n = S.shape[0]
    if method == "takagi":
        if not np.any(S):
            w = np.zeros(n, complex)
            if n:
                w[0] = 1.0
            return 0.0, w
        fac = takagi(S)
        w = fac.Q[:, 0].conj()
        return float(abs(w @ S @ w)), w
    if method == "search":
        return _sphere_ascent(S, restarts, seed, max_iter, gtol)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# matrix subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceBasis:
    """Frobenius-orthonormal basis of a subspace of ``n x n`` matrices.

    ``elements`` has shape ``(d, n, n)``.
    """

    elements: np.ndarray
    n: int

    @property
    def subspace_dim(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.subspace_dim

    def __iter__(self):
        return iter(self.elements)

    def vectors(self) -> np.ndarray:
        """Row-wise vectorized elements, shape ``(d, n*n)``."""
        return self.elements.reshape(self.subspace_dim, self.n * self.n)

    def coefficients(self, M) -> np.ndarray:
        return self.vectors().conj() @ np.asarray(M, dtype=complex).ravel()

    def combine(self, coef) -> np.ndarray:
        return np.tensordot(np.asarray(coef, dtype=complex), self.elements, axes=1)

    def project(self, M) -> np.ndarray:
        return self.combine(self.coefficients(M))

    def projection_residual(self, M) -> float:
        """Frobenius distance from ``M`` to the subspace."""
        M = np.asarray(M, dtype=complex)
        return float(np.linalg.norm(M - self.project(M)))

    def contains(self, M, tol: float = 1e-10) -> bool:
        M = np.asarray(M, dtype=complex)
        return self.projection_residual(M) <= tol * max(np.linalg.norm(M), 1.0)


def orthonormalize(mats: Sequence[np.ndarray] | np.ndarray, tol: float = 1e-10, n: int | None = None) -> SubspaceBasis:
    """Orthonormal basis of ``span(mats)`` with relative rank cutoff ``tol``."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        if n is None:
            raise ValueError("empty input needs an explicit matrix size n")
        return SubspaceBasis(np.zeros((0, n, n), complex), n)
    shape = mats[0].shape
    if any(m.shape != shape for m in mats) or len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch("all matrices must share one square shape")
    size = shape[0]
    A = np.stack([m.ravel() for m in mats])
    if not np.any(A):
        return SubspaceBasis(np.zeros((0, size, size), complex), size)
    _, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = int(np.sum(s > tol * s[0]))
    # A = U diag(s) Vh, so the leading rows of Vh span the rows of A.
    basis = Vh[:r]
    return SubspaceBasis(basis.reshape(r, size, size), size)


# ---------------------------------------------------------------------------
# low-rank search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankOneCandidate:
    """Low-rank element found inside a subspace (unit Frobenius norm)."""

    coefficients: np.ndarray
    matrix: np.ndarray = field(repr=False)
    ratio: float  # sigma_{k+1} / sigma_1
    rank: int = 1

    def factors(self) -> tuple[np.ndarray, np.ndarray]:
        """``(x, y)`` with ``matrix ~ x (x) y``, i.e. ``x y^H``."""
        U, s, Vh = np.linalg.svd(self.matrix)
        return U[:, 0] * s[0], Vh[0].conj()


def _tail_ratio(s: np.ndarray, k: int) -> float:
    return float(np.sqrt(np.sum(s[k:] ** 2)) / s[0]) if s[0] > 0 else 1.0


def _objective(Bv: np.ndarray, n: int, k: int):
    """Scale-invariant ``sum_{i>k} s_i^2 / sum_{i<=k} s_i^2`` of ``M(c)``."""
    d = Bv.shape[0]

    def fun(x):
        c = x[:d] + 1j * x[d:]
        M = (c @ Bv).reshape(n, n)
        U, s, Vh = np.linalg.svd(M)
        head = np.sum(s[:k] ** 2)
        if head <= 0:
            return 1.0, np.zeros_like(x)
        tail = np.sum(s[k:] ** 2)
        Mk = (U[:, :k] * s[:k]) @ Vh[:k]
        R = M - Mk
        # d tail = 2 Re<R, dM>,  d head = 2 Re<Mk, dM>  (Frobenius).
        gR = Bv.conj() @ R.ravel()
        gK = Bv.conj() @ Mk.ravel()
        gR, gK = gR.conj(), gK.conj()
        # For dM = sum dc_j B_j, Re<X, dM> = Re(sum conj(<B_j, X>) dc_j).
        gtail = 2.0 * np.concatenate([gR.real, -gR.imag])
        ghead = 2.0 * np.concatenate([gK.real, -gK.imag])
        val = tail / head
        grad = (gtail * head - tail * ghead) / head**2
        return val, grad

    return fun


def _polish(basis: SubspaceBasis, c: np.ndarray, k: int, iters: int = 200) -> np.ndarray:
    """Alternating projections between rank-k matrices and the subspace."""
    best_c = c / np.linalg.norm(c)
    M = basis.combine(best_c)
    best = _tail_ratio(np.linalg.svd(M, compute_uv=False), k)
    for _ in range(iters):
        U, s, Vh = np.linalg.svd(M)
        Mk = (U[:, :k] * s[:k]) @ Vh[:k]
        c = basis.coefficients(Mk)
        nrm = np.linalg.norm(c)
        if nrm == 0:
            break
        c = c / nrm
        M = basis.combine(c)
        r = _tail_ratio(np.linalg.svd(M, compute_uv=False), k)
        if r < best:
            improved = best - r
            best, best_c = r, c
            if improved <= 1e-3 * best and best < 1e-13:
                break
        else:
            break
    return best_c


def _canonical_phase(c: np.ndarray) -> np.ndarray:
    """Fix the scalar freedom: unit norm, largest entry real positive."""
    c = c / np.linalg.norm(c)
    j = int(np.argmax(np.abs(c)))
    return c * (abs(c[j]) / c[j])


def low_rank_search(
    basis: SubspaceBasis,
    rank: int = 1,
    restarts: int = 20,
    seed: int = 0,
    tol: float = 1e-10,
    dedup: float = 1e-6,
) -> list[RankOneCandidate]:
    """Seeded search for elements of rank at most ``rank`` in a subspace.

    Each restart minimizes ``sum_{i>rank} s_i^2 / sum_{i<=rank} s_i^2`` over
    coefficient vectors with BFGS, then polishes by alternating projection.
    Minima with ``s_{rank+1}/s_1 <= tol`` are returned, deduplicated up to a
    scalar multiple and sorted by ratio.  An empty result means nothing was
    found, not that nothing exists.
    """
    d = basis.subspace_dim
    n = basis.n
    if d == 0:
        return []
    Bv = basis.vectors()
    fun = _objective(Bv, n, rank)
    found: list[RankOneCandidate] = []
    for r in range(restarts):
        g = restart_rng(seed, r)
        x0 = g.standard_normal(2 * d)
        res = scipy.optimize.minimize(fun, x0, jac=True, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        c = res.x[:d] + 1j * res.x[d:]
        if not np.all(np.isfinite(c)) or np.linalg.norm(c) == 0:
            continue
        c = _polish(basis, c, rank)
        M = basis.combine(c)
        s = np.linalg.svd(M, compute_uv=False)
        ratio = float(s[rank] / s[0]) if s.size > rank else 0.0
        if ratio <= tol:
            c = _canonical_phase(c)
            found.append(RankOneCandidate(c, basis.combine(c), ratio, rank))
    found.sort(key=lambda cand: (cand.ratio, tuple(np.round(np.concatenate([cand.coefficients.real, cand.coefficients.imag]), 12))))
    unique: list[RankOneCandidate] = []
    for cand in found:
        if all(abs(np.vdot(u.coefficients, cand.coefficients)) < 1 - dedup for u in unique):
            unique.append(cand)
    return unique


def rank_one_search(
    basis: SubspaceBasis,
    restarts: int = 20,
    seed: int = 0,
    tol: float = 1e-10,
) -> list[RankOneCandidate]:
    """Rank-one elements of a matrix subspace; see :func:`low_rank_search`."""
    return low_rank_search(basis, rank=1, restarts=restarts, seed=seed, tol=tol)
