"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import DimensionError, PreconditionError, SingularityError

__all__ = [
    "as_matrix",
    "adjoint",
    "spectral_norm",
    "HermitianSpectrum",
    "herm_eig",
    "mat_exp",
    "kron",
    "Contour",
    "resolvent_contour_sum",
    "resolvent_bound",
]

ThetaLike = Union[complex, Callable[[np.ndarray], np.ndarray], Sequence[complex], np.ndarray]


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a 2-d complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    return A


def adjoint(M) -> np.ndarray:
    return as_matrix(M).conj().T


def _require_square(A: np.ndarray, what: str = "matrix") -> None:
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {A.shape}")


def spectral_norm(M) -> float:
    """Largest singular value, via the top eigenvalue of M*M."""
    A = as_matrix(M)
    if A.size == 0:
        raise DimensionError("spectral norm of an empty matrix")
    # eigvalsh on the smaller Gram matrix
    G = A.conj().T @ A if A.shape[1] <= A.shape[0] else A @ A.conj().T
    top = np.linalg.eigvalsh(G)[-1]
    return float(np.sqrt(max(top, 0.0)))


@dataclass(frozen=True)
class HermitianSpectrum:
    """Ascending eigenvalues and the unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def spectral_projection(self, mask) -> np.ndarray:
        V = self.eigenvectors[:, np.asarray(mask, dtype=bool)]
        return V @ V.conj().T


def hermitian_defect(A: np.ndarray) -> float:
    return spectral_norm(A - A.conj().T) if A.size else 0.0


def herm_eig(M, rtol: float = 1e-10) -> HermitianSpectrum:
    A = as_matrix(M)
    _require_square(A)
    if A.size == 0:
        raise DimensionError("eigendecomposition of an empty matrix")
    scale = 1.0 + spectral_norm(A)
    if hermitian_defect(A) >= rtol * scale:
        raise PreconditionError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    for arr in (w, V):
        arr.setflags(write=False)
    return HermitianSpectrum(w, V)


def mat_exp(M) -> np.ndarray:
    A = as_matrix(M)
    _require_square(A)
    return scipy.linalg.expm(A)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


@dataclass(frozen=True)
class Contour:
    """A positively oriented circle with uniformly spaced quadrature nodes."""

    center: complex
    radius: float
    points: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise PreconditionError(f"contour radius must be positive, got {self.radius}")
        p = int(self.points)
        if p < 16 or p & (p - 1):
            raise PreconditionError(f"contour points must be a power of two >= 16, got {self.points}")

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.points) / self.points

    def nodes(self) -> np.ndarray:
        return self.center + self.radius * np.exp(1j * self.angles())

    @property
    def arc(self) -> float:
        """Arc length carried by each node."""
        return 2.0 * np.pi * self.radius / self.points

    def encloses(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) < self.radius


def _theta_samples(theta: ThetaLike, nodes: np.ndarray) -> np.ndarray:
    if callable(theta):
        vals = np.asarray(theta(nodes), dtype=complex)
        if vals.ndim == 0:
            vals = np.full(nodes.shape, complex(vals))
    elif np.isscalar(theta):
        vals = np.full(nodes.shape, complex(theta))
    else:
        vals = np.asarray(theta, dtype=complex)
    if vals.shape != nodes.shape:
        raise DimensionError(f"theta has {vals.shape} samples for {nodes.shape} nodes")
    return vals


def _check_clear_of_spectrum(A: np.ndarray, contour: Contour) -> None:
    ev = np.linalg.eigvals(A)
    gap = np.abs(np.abs(ev - contour.center) - contour.radius)
    i = int(np.argmin(gap))
    if gap[i] < contour.radius * 1e-6:
        raise SingularityError(
            f"eigenvalue {ev[i]} lies on the contour |z - {contour.center}| = {contour.radius}",
            eigenvalue=complex(ev[i]),
        )


def resolvent_contour_sum(M, theta: ThetaLike, contour: Contour | Sequence[Contour]) -> np.ndarray:
    """Riemann-sum approximation of (1/2 pi i) \\oint theta(z) (z - M)^{-1} dz.

    ``theta`` is a scalar, a callable evaluated at the nodes, or an array of
    samples.  A list of contours sums the integrals; ``theta`` must then be a
    scalar/callable or a list with one entry per contour.
    """
    A = as_matrix(M)
    _require_square(A)
    if isinstance(contour, Contour):
        return _single_contour_sum(A, theta, contour)
    contours = list(contour)
    thetas = theta if isinstance(theta, (list, tuple)) and len(theta) == len(contours) else [theta] * len(contours)
    total = np.zeros_like(A)
    for th, gamma in zip(thetas, contours):
        total += _single_contour_sum(A, th, gamma)
    return total


def _single_contour_sum(A: np.ndarray, theta: ThetaLike, contour: Contour) -> np.ndarray:
    _check_clear_of_spectrum(A, contour)
    nodes = contour.nodes()
    vals = _theta_samples(theta, nodes)
    eye = np.eye(A.shape[0], dtype=complex)
    # dz = i r e^{i phi} dphi, so the 1/(2 pi i) prefactor leaves r e^{i phi} / N
    weights = vals * (nodes - contour.center) / contour.points
    out = np.zeros_like(A)
    for z, wgt in zip(nodes, weights):
        if wgt != 0:
            out += wgt * np.linalg.solve(z * eye - A, eye)
    return out


def resolvent_bound(M, contour: Contour | Sequence[Contour]) -> float:
    """max ||(z - M)^{-1}|| over all contour nodes."""
    A = as_matrix(M)
    contours = [contour] if isinstance(contour, Contour) else list(contour)
    eye = np.eye(A.shape[0], dtype=complex)
    best = 0.0
    for gamma in contours:
        _check_clear_of_spectrum(A, gamma)
        for z in gamma.nodes():
            best = max(best, spectral_norm(np.linalg.solve(z * eye - A, eye)))
    return best
