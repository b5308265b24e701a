"""Trace duality for the skew-C symmetric subspace.

The pairing is bilinear, ``<T, t> = tr(T t)``.  For a conjugation with
kernel ``K`` put ``M = conj(K) T``.  Then

* ``tr(T (h (x) Ch)) = h^T M h``, so ``alpha_1`` is the top Takagi value of
  ``(M + M^T)/2``;
* ``alpha_2 = ||T + C T^* C|| / 2`` with witnesses from the top singular pair;
* ``dist(T, C^s) = ||T + C T^* C|| / 2``, attained at the skew part of ``T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conjugation import (
    Conjugation,
    _as_square,
    apply_conjugation,
    conjugate_operator,
    opnorm,
    rank_one,
    split_parts,
)
from .errors import DegenerateInput, DimensionMismatch, MissingArgument, NumericalFailure
from .numerics import (
    RankOneCandidate,
    SubspaceBasis,
    low_rank_search,
    orthonormalize,
    quad_form_sup,
    restart_rng,
)

__all__ = [
    "AlphaReport",
    "DistanceReport",
    "ReflexivityReport",
    "trace_pair",
    "structured_basis",
    "preannihilator",
    "annihilator_element",
    "alpha",
    "distance_to_skew",
    "hyperreflexivity_ratios",
    "reflexivity_check",
    "algebra_generated",
    "sin_angle",
    "conjugate_alignment",
]


def trace_pair(T, t) -> complex:
    T = np.asarray(T, dtype=complex)
    t = np.asarray(t, dtype=complex)
    if T.shape != t.shape[::-1] or T.ndim != 2:
        raise DimensionMismatch(f"cannot pair shapes {T.shape} and {t.shape}")
    # tr(T t) without forming the product.
    return complex(np.sum(T * t.T))


def structured_basis(C: Conjugation, which: str = "skew") -> SubspaceBasis:
    """Orthonormal basis of the skew-C symmetric (or C-symmetric) operators.

    Members are ``K A`` with ``A`` antisymmetric (resp. symmetric); ``K`` is
    unitary so orthonormal ``A`` give orthonormal ``K A``.
    """
    n = C.dim
    K = C.kernel
    elems = []
    if which == "skew":
        for i in range(n):
            for j in range(i + 1, n):
                A = np.zeros((n, n), complex)
                A[i, j], A[j, i] = 1 / np.sqrt(2), -1 / np.sqrt(2)
                elems.append(K @ A)
    elif which == "symmetric":
        for i in range(n):
            A = np.zeros((n, n), complex)
            A[i, i] = 1.0
            elems.append(K @ A)
            for j in range(i + 1, n):
                A = np.zeros((n, n), complex)
                A[i, j] = A[j, i] = 1 / np.sqrt(2)
                elems.append(K @ A)
    else:
        raise ValueError(f"which must be 'skew' or 'symmetric', got {which!r}")
    if not elems:
        return SubspaceBasis(np.zeros((0, n, n), complex), n)
    return SubspaceBasis(np.stack(elems), n)


def preannihilator(S: SubspaceBasis, tol: float = 1e-10) -> SubspaceBasis:
    """Orthonormal basis of ``{t : tr(S t) = 0 for all S}``.

    ``tr(S t) = vec(S^T) . vec(t)`` with no conjugation, so the answer is the
    null space of the stacked ``vec(S^T)`` rows.
    """
    n = S.n
    if S.subspace_dim == 0:
        eye = np.eye(n * n, dtype=complex)
        return SubspaceBasis(eye.reshape(n * n, n, n), n)
    rows = np.stack([E.T.ravel() for E in S.elements])
    _, s, Vh = np.linalg.svd(rows, full_matrices=True)
    r = int(np.sum(s > tol * s[0]))
    null = Vh[r:].conj()
    return SubspaceBasis(null.reshape(-1, n, n), n)


def annihilator_element(C: Conjugation, h, g=None, rank: int = 1) -> np.ndarray:
    """``h (x) Ch`` (rank 1) or ``h (x) g + Cg (x) Ch`` (rank 2)."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (C.dim,):
        raise DimensionMismatch(f"h has shape {h.shape}, conjugation has dim {C.dim}")
    Ch = apply_conjugation(C, h)
    if rank == 1:
        return rank_one(h, Ch)
    if rank == 2:
        if g is None:
            raise MissingArgument("rank-2 annihilator element needs g")
        g = np.asarray(g, dtype=complex)
        if g.shape != (C.dim,):
            raise DimensionMismatch(f"g has shape {g.shape}, conjugation has dim {C.dim}")
        return rank_one(h, g) + rank_one(apply_conjugation(C, g), Ch)
    raise ValueError(f"rank must be 1 or 2, got {rank}")


# ---------------------------------------------------------------------------
# alpha, dist, ratios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaReport:
    k: int
    value: float
    witness: tuple  # (h,) for k=1, (h, g) for k=2
    method: str  # "closed_form" | "sampled"

    def witness_value(self, C: Conjugation, T) -> float:
        """Re-evaluate the pairing at the witness (normalized to trace norm <= 1)."""
        if self.k == 1:
            (h,) = self.witness
            return abs(trace_pair(T, annihilator_element(C, h)))
        h, g = self.witness
        return 0.5 * abs(trace_pair(T, annihilator_element(C, h, g, rank=2)))


@dataclass(frozen=True)
class DistanceReport:
    dist: float
    nearest: np.ndarray = field(repr=False)
    certificate_gap: float


def _pair_operator(C: Conjugation, T) -> np.ndarray:
    """``conj(K) T``; ``tr(T (h (x) Ch)) = h^T (conj(K) T) h``."""
    return C.kernel.conj() @ T


def _unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def alpha(
    C: Conjugation,
    T,
    k: int = 1,
    method: str = "closed_form",
    samples: int = 10_000,
    seed: int = 0,
) -> AlphaReport:
    """``alpha_k(T, C^s)``: sup of ``|tr(T t)|`` over unit trace-norm ``t`` of
    rank <= k in the preannihilator.

    ``method="sampled"`` evaluates random members of the rank-one family
    ``h (x) Ch`` (k=1) or ``(h (x) g + Cg (x) Ch)/2`` (k=2); it can only
    undershoot the closed form.
    """
    T = _as_square(T, C.dim)
    n = C.dim
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k}")
    if method == "closed_form":
        if k == 1:
            value, h = quad_form_sup(_pair_operator(C, T), method="takagi")
            return AlphaReport(1, value, (h,), method)
        N = T + conjugate_operator(C, T, adjoint=True)
        U, s, Vh = np.linalg.svd(N)
        # g^H N h = tr(T (h (x) g + Cg (x) Ch)); top singular pair maximizes it.
        return AlphaReport(2, 0.5 * float(s[0]), (Vh[0].conj(), U[:, 0]), method)
    if method == "sampled":
        rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
        if k == 1:
            M = _pair_operator(C, T)
            H = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
            H /= np.linalg.norm(H, axis=1, keepdims=True)
            vals = np.abs(np.einsum("si,ij,sj->s", H, M, H))
            i = int(np.argmax(vals))
            return AlphaReport(1, float(vals[i]), (H[i],), method)
        N = T + conjugate_operator(C, T, adjoint=True)
        H = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        G = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        H /= np.linalg.norm(H, axis=1, keepdims=True)
        G /= np.linalg.norm(G, axis=1, keepdims=True)
        vals = 0.5 * np.abs(np.einsum("si,ij,sj->s", G.conj(), N, H))
        i = int(np.argmax(vals))
        return AlphaReport(2, float(vals[i]), (H[i], G[i]), method)
    raise ValueError(f"unknown method {method!r}")


def distance_to_skew(C: Conjugation, T) -> DistanceReport:
    """Operator-norm distance from ``T`` to the skew-C symmetric operators.

    Equal to ``||T + C T^* C|| / 2``: the skew part attains it and
    ``alpha_2`` bounds it from below with the same value.
    """
    T = _as_square(T, C.dim)
    A, B = split_parts(C, T)
    dist = opnorm(A)
    a2 = alpha(C, T, 2).value
    return DistanceReport(dist, B, dist - a2)


def hyperreflexivity_ratios(C: Conjugation, T, tol: float = 1e-12) -> tuple[float, float]:
    """``(dist / alpha_1, dist / alpha_2)``; ``(1, 1)`` when ``T`` is skew.

    ``T`` counts as skew when ``dist <= tol * ||T||``.
    """
    T = _as_square(T, C.dim)
    d = distance_to_skew(C, T).dist
    nrm = opnorm(T)
    if d <= tol * nrm:
        return 1.0, 1.0
    a1 = alpha(C, T, 1).value
    a2 = alpha(C, T, 2).value
    if a1 <= tol * nrm or a2 <= tol * nrm:
        raise DegenerateInput(f"alpha vanishes (a1={a1:.3e}, a2={a2:.3e}) while dist={d:.3e}")
    return d / a1, d / a2


# ---------------------------------------------------------------------------
# reflexivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReflexivityReport:
    k: int
    preannihilator_dim: int
    rank_k_span_dim: int
    verdict: str  # "reflexive" | "not_certified"
    evidence: list[RankOneCandidate] = field(default_factory=list, repr=False)


def _candidate(M: np.ndarray, basis: SubspaceBasis, rank: int) -> RankOneCandidate:
    nrm = np.linalg.norm(M)
    M = M / nrm
    s = np.linalg.svd(M, compute_uv=False)
    ratio = float(s[rank] / s[0]) if s.size > rank else 0.0
    return RankOneCandidate(basis.coefficients(M), M, ratio, rank)


def reflexivity_check(
    S: SubspaceBasis,
    k: int = 1,
    C: Conjugation | None = None,
    trials: int = 50,
    seed: int = 0,
    tol: float = 1e-8,
    restarts: int = 20,
) -> ReflexivityReport:
    """Compare ``dim S_perp`` with the span of its rank <= k elements.

    With a conjugation ``C`` (``S`` taken to be its skew subspace) the exact
    families ``h (x) Ch`` / ``h (x) g + Cg (x) Ch`` are sampled; otherwise a
    low-rank search is used.  A shortfall is reported as ``not_certified``.
    """
    pre = preannihilator(S)
    d = pre.subspace_dim
    n = S.n
    if d == 0:
        return ReflexivityReport(k, 0, 0, "reflexive", [])
    if C is not None:
        if C.dim != n:
            raise DimensionMismatch(f"conjugation dim {C.dim} vs subspace matrices {n}x{n}")
        elems = []
        for i in range(trials):
            rng = restart_rng(seed, i)
            h = _unit(rng, n)
            if k == 1:
                elems.append(annihilator_element(C, h))
            else:
                elems.append(annihilator_element(C, h, _unit(rng, n), rank=2))
        evidence = [_candidate(M, pre, k) for M in elems]
    else:
        evidence = low_rank_search(pre, rank=k, restarts=restarts, seed=seed, tol=1e-10)
        elems = [c.matrix for c in evidence]
    span = orthonormalize(elems, tol=tol, n=n).subspace_dim if elems else 0
    verdict = "reflexive" if span == d else "not_certified"
    return ReflexivityReport(k, d, span, verdict, evidence)


def sin_angle(x, y) -> float:
    """Sine of the angle between complex lines ``span(x)`` and ``span(y)``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    # Norm of the rejection avoids the sqrt(1 - cos^2) cancellation.
    return float(np.linalg.norm(y - np.vdot(x, y) * x))


def conjugate_alignment(C: Conjugation, cand: RankOneCandidate) -> float:
    """For a rank-one ``x (x) y``, the sine of the angle between ``y`` and ``Cx``."""
    x, y = cand.factors()
    return sin_angle(apply_conjugation(C, x), y)


def algebra_generated(T, tol: float = 1e-10) -> SubspaceBasis:
    """Orthonormal basis of the unital algebra ``span{I, T, T^2, ...}``.

    Powers are normalized at every step; the loop stops once a power falls
    in the span of its predecessors, which happens by degree ``n``.
    """
    T = _as_square(T)
    n = T.shape[0]
    mats = [np.eye(n, dtype=complex)]
    basis = orthonormalize(mats, tol=tol)
    P = mats[0]
    for _ in range(n * n - 1):
        P = T @ P
        nrm = np.linalg.norm(P)
        if not np.isfinite(nrm):
            raise NumericalFailure("overflow while forming powers")
        if nrm == 0:
            break
        P = P / nrm
        if basis.projection_residual(P) <= tol:
            break
        mats.append(P)
        basis = orthonormalize(mats, tol=tol)
    return basis
