"""Conjugations on C^n and the antilinear algebra built on them.

A conjugation is stored through its kernel: a symmetric unitary matrix ``K``
with action ``x -> K @ conj(x)``.  Every conjugation on C^n has this form.
From the kernel realization one gets

    C T C    = K conj(T) conj(K)
    C T^* C  = K T^T conj(K)

and ``T`` is skew-C symmetric exactly when ``conj(K) @ T`` is antisymmetric
(C-symmetric when it is symmetric).  Those identities are tested against the
definitional action on vectors in the test-suite.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotSquare, NotSymmetric, NotUnitary, NumericalFailure

DEFAULT_TOL = 1e-9
VALIDATION_TOL = 1e-10

__all__ = [
    "Conjugation",
    "RealFormBasis",
    "BlockDecomposition",
    "SymmetryClass",
    "make_conjugation",
    "plain_conjugation",
    "flip_conjugation",
    "apply_conjugation",
    "conjugate_operator",
    "symmetry_class",
    "split_parts",
    "real_form_basis",
    "block_decompose",
    "block_conjugation",
    "random_unitary",
    "random_conjugation",
    "rank_one",
    "opnorm",
]


def opnorm(M) -> float:
    """Spectral norm (largest singular value)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def rank_one(x, y) -> np.ndarray:
    """Matrix of ``x (x) y``, i.e. ``z -> <z, y> x`` = ``x y^H``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return np.outer(x, y.conj())


def _as_square(T, n: int | None = None) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {T.shape}")
    if n is not None and T.shape[0] != n:
        raise DimensionMismatch(f"operator is {T.shape[0]}x{T.shape[0]}, conjugation has dim {n}")
    return T


@dataclass(frozen=True)
class Conjugation:
    """Antilinear isometric involution ``x -> kernel @ conj(x)``.

    Build through :func:`make_conjugation`, which validates the kernel.
    """

    kernel: np.ndarray = field(repr=False)
    tol: float = VALIDATION_TOL

    @property
    def dim(self) -> int:
        return self.kernel.shape[0]

    def __call__(self, x) -> np.ndarray:
        return apply_conjugation(self, x)

    def __eq__(self, other):
        if not isinstance(other, Conjugation):
            return NotImplemented
        return self.kernel.shape == other.kernel.shape and np.array_equal(self.kernel, other.kernel)

    def __hash__(self):
        return hash((self.kernel.shape, self.kernel.tobytes()))


def kernel_residuals(K) -> tuple[float, float]:
    """Return ``(||K - K^T||, ||K^H K - I||)``."""
    K = np.asarray(K, dtype=complex)
    n = K.shape[0]
    return opnorm(K - K.T), opnorm(K.conj().T @ K - np.eye(n))


def make_conjugation(K, tol: float = VALIDATION_TOL) -> Conjugation:
    K = np.array(K, dtype=complex)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise NotSquare(f"kernel must be square, got shape {K.shape}")
    if not np.all(np.isfinite(K)):
        raise NumericalFailure("kernel has non-finite entries")
    sym, unit = kernel_residuals(K)
    if sym > tol:
        raise NotSymmetric(f"kernel is not symmetric: ||K - K^T|| = {sym:.3e} > {tol:g}")
    if unit > tol:
        raise NotUnitary(f"kernel is not unitary: ||K^H K - I|| = {unit:.3e} > {tol:g}")
    K.setflags(write=False)
    return Conjugation(K, tol)


def plain_conjugation(n: int) -> Conjugation:
    """Entrywise complex conjugation on C^n."""
    return make_conjugation(np.eye(n))


def flip_conjugation(n: int) -> Conjugation:
    """Conjugate and reverse coordinates; kernel is the exchange matrix."""
    return make_conjugation(np.eye(n)[::-1])


def apply_conjugation(C: Conjugation, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != C.dim:
        raise DimensionMismatch(f"vector has dim {x.shape[0]}, conjugation has dim {C.dim}")
    return C.kernel @ x.conj()


def conjugate_operator(C: Conjugation, T, adjoint: bool = False) -> np.ndarray:
    """``C T C`` (or ``C T^* C`` when ``adjoint`` is set) as a matrix."""
    T = _as_square(T, C.dim)
    K = C.kernel
    if adjoint:
        return K @ T.T @ K.conj()
    return K @ T.conj() @ K.conj()


@dataclass(frozen=True)
class SymmetryClass:
    label: str  # "symmetric" | "skew" | "neither" | "zero"
    symmetric_residual: float
    skew_residual: float
    norm: float

    @property
    def is_skew(self) -> bool:
        return self.label in ("skew", "zero")

    @property
    def is_symmetric(self) -> bool:
        return self.label in ("symmetric", "zero")


def symmetry_class(C: Conjugation, T, tol: float = DEFAULT_TOL) -> SymmetryClass:
    """Classify ``T`` against ``CTC = T^*`` and ``CTC = -T^*``.

    Residuals are absolute spectral norms; the label compares them with
    ``tol * ||T||``.
    """
    T = _as_square(T, C.dim)
    ctc = conjugate_operator(C, T)
    Th = T.conj().T
    r_sym = opnorm(ctc - Th)
    r_skew = opnorm(ctc + Th)
    nrm = opnorm(T)
    cutoff = tol * nrm
    if nrm == 0.0:
        label = "zero"
    elif r_skew <= cutoff and r_sym <= cutoff:
        label = "zero"
    elif r_skew <= cutoff:
        label = "skew"
    elif r_sym <= cutoff:
        label = "symmetric"
    else:
        label = "neither"
    return SymmetryClass(label, r_sym, r_skew, nrm)


def split_parts(C: Conjugation, T) -> tuple[np.ndarray, np.ndarray]:
    """Split ``T = A + B`` with ``A`` C-symmetric and ``B`` skew-C symmetric."""
    T = _as_square(T, C.dim)
    ctsc = conjugate_operator(C, T, adjoint=True)
    A = 0.5 * (T + ctsc)
    # B = T - A keeps the reassembly exact up to one rounding per entry.
    B = T - A
    return A, B


@dataclass(frozen=True)
class RealFormBasis:
    """Orthonormal vectors fixed by ``C``; columns of ``basis``.

    Every ``h`` splits as ``h_R + i h_I`` with ``h_R, h_I`` real combinations
    of the columns.
    """

    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, h) -> tuple[np.ndarray, np.ndarray]:
        """Real coordinates ``(a, b)`` of ``h_R`` and ``h_I``."""
        z = self.basis.conj().T @ np.asarray(h, dtype=complex)
        return z.real.copy(), z.imag.copy()

    def assemble(self, a, b) -> np.ndarray:
        return self.basis @ (np.asarray(a) + 1j * np.asarray(b))


def real_form_basis(C: Conjugation, tol: float = 1e-8) -> RealFormBasis:
    # Realify x = a + ib:  K conj(x) = (Pa + Qb) + i(Qa - Pb)  for K = P + iQ.
    n = C.dim
    P, Q = C.kernel.real, C.kernel.imag
    R = np.block([[P, Q], [Q, -P]])
    R = 0.5 * (R + R.T)
    w, v = np.linalg.eigh(R)
    plus = np.abs(w - 1.0) <= tol
    if plus.sum() != n:
        raise NumericalFailure(
            f"fixed space of the conjugation has real dimension {plus.sum()}, expected {n}"
        )
    vec = v[:, plus]
    basis = vec[:n] + 1j * vec[n:]
    # Fixed vectors have real pairwise products; a QR over the reals of the
    # stacked form keeps that while cleaning orthonormality.
    q, _ = np.linalg.qr(np.vstack([basis.real, basis.imag]))
    basis = q[:n] + 1j * q[n:]
    return RealFormBasis(basis)


@dataclass(frozen=True)
class BlockDecomposition:
    """Real blocks of ``T`` acting on ``(h_R, h_I)`` coordinates.

    ``[[W, X], [Y, Z]]`` maps ``(a, b)`` to the coordinates of
    ``((T h)_R, (T h)_I)``.
    """

    W: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    frame: RealFormBasis
    residual_W: float  # ||W + W^T||
    residual_Z: float  # ||Z + Z^T||
    residual_YX: float  # ||Y - X^T||

    @property
    def residuals(self) -> tuple[float, float, float]:
        return self.residual_W, self.residual_Z, self.residual_YX

    def real_matrix(self) -> np.ndarray:
        return np.block([[self.W, self.X], [self.Y, self.Z]])

    def reassemble(self) -> np.ndarray:
        """Complex operator represented by the blocks.

        Uses the complex-linear reading ``T' = W + iY``; valid because a
        complex-linear ``T`` always has ``Z = W`` and ``X = -Y``.
        """
        R = self.frame.basis
        return R @ (self.W + 1j * self.Y) @ R.conj().T

    def is_skew(self, norm: float, tol: float = DEFAULT_TOL) -> bool:
        return max(self.residuals) <= tol * norm


def block_decompose(C: Conjugation, T, frame: RealFormBasis | None = None) -> BlockDecomposition:
    T = _as_square(T, C.dim)
    if frame is None:
        frame = real_form_basis(C)
    R = frame.basis
    Tp = R.conj().T @ T @ R
    P, Q = Tp.real, Tp.imag
    W, X, Y, Z = P, -Q, Q, P.copy()
    return BlockDecomposition(
        W=W,
        X=X,
        Y=Y,
        Z=Z,
        frame=frame,
        residual_W=opnorm(W + W.T),
        residual_Z=opnorm(Z + Z.T),
        residual_YX=opnorm(Y - X.T),
    )


def block_conjugation(C: Conjugation) -> Conjugation:
    """Conjugation ``f (+) g -> Cg (+) Cf`` on C^n (+) C^n."""
    K = C.kernel
    Z = np.zeros_like(K)
    return make_conjugation(np.block([[Z, K], [K, Z]]))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase-fixed R."""
    rng = _rng(seed)
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    ph = d / np.where(np.abs(d) == 0, 1.0, np.abs(d))
    return Q * ph


def random_conjugation(n: int, seed=None) -> Conjugation:
    """Conjugation with kernel ``U U^T`` for a Haar unitary ``U``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    U = random_unitary(n, seed)
    K = U @ U.T
    K = 0.5 * (K + K.T)
    return make_conjugation(K)
