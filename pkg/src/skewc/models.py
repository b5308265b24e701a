"""Worked examples: two conjugations on C^3, block conjugations, the model
space for ``z^k``, and the rotation generator on C^2.

Model-space conventions: coefficient vectors are indexed by the monomials
``z^0 .. z^{k-1}``; ``<f, g> = sum f_j conj(g_j)``.  Matrices act on
columns.  Entries ``a_{n,m}`` written in the "<A z^n, z^m>" convention are
computed through inner products, never by transposing indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .conjugation import (
    DEFAULT_TOL,
    Conjugation,
    block_conjugation,
    conjugate_operator,
    flip_conjugation,
    make_conjugation,
    plain_conjugation,
    symmetry_class,
)
from .duality import algebra_generated, preannihilator
from .errors import DimensionMismatch, IndexOutOfRange, InvalidK, InvalidVariant, NotSkew
from .numerics import RankOneCandidate, SubspaceBasis, rank_one_search

__all__ = [
    "ExampleBundle",
    "KernelVector",
    "ModelSpaceZk",
    "c3_example",
    "model_space",
    "model_pairings",
    "model_identity_residuals",
    "model_identities_check",
    "paper_entry",
    "antidiagonal_check",
    "block_operator",
    "block_skew_check",
    "nonreflexive_example",
    "NONREFLEXIVE_NOTE",
]


@dataclass
class ExampleBundle:
    name: str
    conjugation: Conjugation
    skew_template: Callable[..., np.ndarray] | None = None
    symmetric_template: Callable[..., np.ndarray] | None = None
    rank_one_template: Callable[[np.ndarray], np.ndarray] | None = None
    matrices: dict[str, np.ndarray] = field(default_factory=dict)
    subspaces: dict[str, SubspaceBasis] = field(default_factory=dict)
    evidence: list[RankOneCandidate] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def skew_generators(self) -> list[np.ndarray]:
        """Template instances at the unit parameter vectors."""
        return [self.skew_template(*row) for row in np.eye(3)]


def c3_example(variant: int) -> ExampleBundle:
    """Conjugations on C^3 reversing (variant 1) or swapping the first two
    (variant 2) coordinates, with their skew and symmetric families.

    In the symmetric templates the entries left free are passed as ``d, e, f``
    in reading order.
    """
    if variant == 1:
        C = flip_conjugation(3)

        def skew(a, b, c):
            return np.array([[a, b, 0], [c, 0, -b], [0, -c, -a]], dtype=complex)

        def sym(a, b, c, d=0, e=0, f=0):
            return np.array([[a, b, d], [c, e, b], [f, c, a]], dtype=complex)

        def rank1(x):
            x = np.asarray(x, dtype=complex)
            return np.outer(x, np.array([x[2], x[1], x[0]]))

    elif variant == 2:
        C = make_conjugation(np.eye(3)[[1, 0, 2]])

        def skew(a, b, c):
            return np.array([[a, 0, b], [0, -a, c], [-c, -b, 0]], dtype=complex)

        def sym(a, b, c, d=0, e=0, f=0):
            return np.array([[a, d, b], [e, a, c], [c, b, f]], dtype=complex)

        def rank1(x):
            x = np.asarray(x, dtype=complex)
            # x (x) (conj x2, conj x1, conj x3) as x y^H
            return np.outer(x, np.array([x[1], x[0], x[2]]))

    else:
        raise InvalidVariant(f"variant must be 1 or 2, got {variant!r}")
    return ExampleBundle(
        name=f"c3-variant-{variant}",
        conjugation=C,
        skew_template=skew,
        symmetric_template=sym,
        rank_one_template=rank1,
        matrices={"kernel": C.kernel.copy(), "skew_123": skew(1, 2, 3)},
    )


# ---------------------------------------------------------------------------
# model space for z^k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelVector:
    lam: complex
    vector: np.ndarray
    tilde: np.ndarray


@dataclass(frozen=True)
class ModelSpaceZk:
    """Polynomials of degree < k with the flip conjugation and truncated shift."""

    k: int
    conjugation: Conjugation
    shift: np.ndarray

    @property
    def labels(self) -> list[str]:
        return [f"z^{j}" for j in range(self.k)]

    @property
    def backward_shift(self) -> np.ndarray:
        return self.shift.conj().T

    def kernel(self, lam: complex) -> KernelVector:
        """Reproducing kernel at ``lam``: ``<p, k_lam> = p(lam)``.

        ``k_lam - conj(lam^k) z^k k_lam`` cut to degree < k leaves the
        coefficients ``conj(lam)^j``.
        """
        lam = complex(lam)
        if abs(lam) >= 1:
            raise ValueError(f"|lambda| must be < 1, got {abs(lam)}")
        v = np.conj(lam) ** np.arange(self.k)
        v = v.astype(complex)
        return KernelVector(lam, v, self.conjugation(v))


def model_space(k: int) -> ModelSpaceZk:
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise InvalidK(f"k must be an integer >= 2, got {k!r}")
    S = np.eye(k, k=-1, dtype=complex)
    return ModelSpaceZk(int(k), flip_conjugation(int(k)), S)


def model_pairings(ms: ModelSpaceZk, A, lam: complex) -> np.ndarray:
    """Table ``G[n, m] = <A S^n k_lam, (S^*)^m k~_lam>`` for ``n, m < k``."""
    k = ms.k
    kv = ms.kernel(lam)
    S, Sb = ms.shift, ms.backward_shift
    u = np.empty((k, k), complex)  # columns A S^n k
    w = np.empty((k, k), complex)  # columns (S^*)^m k~
    x, y = kv.vector.copy(), kv.tilde.copy()
    for j in range(k):
        u[:, j] = A @ x
        w[:, j] = y
        x, y = S @ x, Sb @ y
    return w.conj().T @ u  # [m, n]


def model_identity_residuals(ms: ModelSpaceZk, A, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """``(r4, rt)``: ``r4[n, m] = |G[n,m] + G[m,n]|``, ``rt[n] = |G[n,n]|``.

    No precondition on ``A``; used for both directions of the check.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape != (ms.k, ms.k):
        raise DimensionMismatch(f"A must be {ms.k}x{ms.k}, got {A.shape}")
    Gt = model_pairings(ms, A, lam)  # indexed [m, n]
    G = Gt.T
    return np.abs(G + G.T), np.abs(np.diagonal(G))


def model_identities_check(
    ms: ModelSpaceZk, A, lam: complex, n: int, m: int, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """Residuals of the shift identities for a skew ``A`` at indices ``(n, m)``.

    Returns ``(|<A S^n k, S*^m k~> + <A S^m k, S*^n k~>|, |<A S^n k, S*^n k~>|)``.
    Indices ``>= k`` give zero on both sides and are rejected here.
    """
    A = np.asarray(A, dtype=complex)
    cls = symmetry_class(ms.conjugation, A, tol)
    if not cls.is_skew:
        raise NotSkew(f"A is not skew for the flip conjugation (residual {cls.skew_residual:.3e})")
    if not (0 <= n < ms.k and 0 <= m < ms.k):
        raise IndexOutOfRange(f"need 0 <= n, m < {ms.k}, got n={n}, m={m}")
    r4, rt = model_identity_residuals(ms, A, lam)
    return float(r4[n, m]), float(rt[n])


def paper_entry(A, n: int, m: int) -> complex:
    """``a_{n,m} = <A z^n, z^m>``."""
    A = np.asarray(A, dtype=complex)
    e_n = np.zeros(A.shape[0], complex)
    e_m = np.zeros(A.shape[0], complex)
    e_n[n] = 1.0
    e_m[m] = 1.0
    return complex(np.vdot(e_m, A @ e_n))


def antidiagonal_check(ms: ModelSpaceZk, A) -> float:
    """``max_{n,m} |a_{n,k-m-1} + a_{m,k-n-1}|``; zero iff ``A`` is flip-skew."""
    A = np.asarray(A, dtype=complex)
    k = ms.k
    if A.shape != (k, k):
        raise DimensionMismatch(f"A must be {k}x{k}, got {A.shape}")
    worst = 0.0
    for n in range(k):
        for m in range(k):
            worst = max(worst, abs(paper_entry(A, n, k - m - 1) + paper_entry(A, m, k - n - 1)))
    return worst


# ---------------------------------------------------------------------------
# block conjugation on H + H
# ---------------------------------------------------------------------------


def block_operator(A, B, D, corner) -> np.ndarray:
    return np.block([[A, B], [D, corner]]).astype(complex)


def block_skew_check(C: Conjugation, A, B, D, corner) -> float:
    """Skew residual ``||C~ T C~ + T^*||`` of ``[[A, B], [D, corner]]``."""
    mats = [np.asarray(X, dtype=complex) for X in (A, B, D, corner)]
    n = C.dim
    if any(X.shape != (n, n) for X in mats):
        raise DimensionMismatch(f"all blocks must be {n}x{n}")
    Cb = block_conjugation(C)
    T = block_operator(*mats)
    return symmetry_class(Cb, T).skew_residual


def block_corner(C: Conjugation, A) -> np.ndarray:
    """The corner ``-C A^* C`` forced by skewness."""
    return -conjugate_operator(C, A, adjoint=True)


# ---------------------------------------------------------------------------
# rotation on C^2
# ---------------------------------------------------------------------------

NONREFLEXIVE_NOTE = (
    "Claimed in the source: the rotation T = [[0, 1], [-1, 0]] generates an "
    "algebra whose preannihilator contains no nonzero rank-one operator, so T "
    "is not reflexive. Computed here over the complex field: "
    "det [[t, s], [s, -t]] = -(t^2 + s^2) vanishes at s = +/- i t, giving rank-one "
    "elements proportional to [[1, i], [i, -1]] and [[1, -i], [-i, -1]] that "
    "span the whole preannihilator; T is also normal. The numbers are reported "
    "as computed; the claim is not asserted."
)


def nonreflexive_example(restarts: int = 20, seed: int = 0) -> ExampleBundle:
    C = plain_conjugation(2)
    T = np.array([[0, 1], [-1, 0]], dtype=complex)
    alg = algebra_generated(T)
    pre = preannihilator(alg)
    evidence = rank_one_search(pre, restarts=restarts, seed=seed, tol=1e-10)
    return ExampleBundle(
        name="rotation-c2",
        conjugation=C,
        matrices={"T": T},
        subspaces={"algebra": alg, "preannihilator": pre},
        evidence=evidence,
        notes=[NONREFLEXIVE_NOTE],
    )
