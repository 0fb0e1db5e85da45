"""Projections for the monopole modules on the sphere and their matrix analogues.

Tensor basis convention: ``e_i (x) f_j`` of H^{|k|} (x) H^n sits at index
``i * (n + 1) + j`` (numpy.kron ordering), with ``i``/``j`` counting lowering
steps from the highest weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.stats

from .errors import DomainError, PreconditionError
from .operator_core import kron
from .su2 import GroupElement, lift, make_irrep

__all__ = [
    "HighestWeightData",
    "highest_weight_vector",
    "highest_weight_coefficients",
    "tensor_generators",
    "ModuleProjection",
    "module_projection",
    "weight_line_projection",
    "SphereProjectionField",
    "sphere_projection",
    "frame_sections",
    "clutching_matrix",
    "clutching_inverse",
    "clutching_apply",
    "clutching_unapply",
    "section_equivariance_residual",
    "s3_grid",
]


def _check_kn(k: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if k + n < 0:
        raise DomainError(f"need k + n >= 0, got k={k}, n={n}")


def highest_weight_coefficients(k: int, n: int) -> tuple:
    """alpha_b = (-1)^b (n+k+b)! / ((n+k)! b!) for b = 0..max(0, -k)."""
    _check_kn(k, n)
    if k >= 0:
        return (1,)
    m = n + k
    return tuple((-1) ** b * math.comb(m + b, b) for b in range(-k + 1))


@dataclass(frozen=True, eq=False)
class HighestWeightData:
    """The highest weight vector of weight k+n and its F-descendants.

    ``coeffs[a]`` maps ``(i, j)`` to the exact integer coefficient of
    ``F^a v_{k+n}`` on the unnormalised product vector ``F^i e (x) F^j f``.
    """

    k: int
    n: int
    alpha: tuple
    coeffs: tuple
    norm_sq: tuple
    unnorm_k: tuple = field(repr=False)
    unnorm_n: tuple = field(repr=False)

    @property
    def d(self) -> int:
        return abs(self.k) + 1

    @property
    def dim(self) -> int:
        return self.d * (self.n + 1)

    @property
    def rank(self) -> int:
        return self.k + self.n + 1

    def vector(self, a: int) -> np.ndarray:
        """F^a v_{k+n} in the orthonormal tensor basis (unnormalised length)."""
        out = np.zeros(self.dim, dtype=complex)
        for (i, j), c in self.coeffs[a].items():
            out[i * (self.n + 1) + j] = c * math.sqrt(self.unnorm_k[i] * self.unnorm_n[j])
        return out

    def unit_vector(self, a: int) -> np.ndarray:
        # c^2 * u / N is formed exactly; the float conversion happens once
        out = np.zeros(self.dim, dtype=complex)
        N = self.norm_sq[a]
        for (i, j), c in self.coeffs[a].items():
            mag = math.sqrt(Fraction(c * c * self.unnorm_k[i] * self.unnorm_n[j], N))
            out[i * (self.n + 1) + j] = math.copysign(mag, c)
        return out

    def frame(self) -> np.ndarray:
        """Orthonormal columns spanning the copy of H^{k+n}."""
        return np.column_stack([self.unit_vector(a) for a in range(self.rank)])


@lru_cache(maxsize=None)
def highest_weight_vector(k: int, n: int) -> HighestWeightData:
    _check_kn(k, n)
    K = abs(k)
    uk, un = make_irrep(K).unnorm_sq, make_irrep(n).unnorm_sq
    alpha = highest_weight_coefficients(k, n)
    if k >= 0:
        top = {(0, 0): 1}
    else:
        # alpha_b multiplies e_{-k-2b} (x) f_{n+2k+2b} = F^b e (x) F^{K-b} f
        top = {(b, K - b): alpha[b] for b in range(K + 1)}

    # F on the unnormalised basis moves F^i e -> F^{i+1} e with coefficient 1
    coeffs = [top]
    for _ in range(k + n):
        nxt: dict = {}
        for (i, j), c in coeffs[-1].items():
            if i < K:
                nxt[(i + 1, j)] = nxt.get((i + 1, j), 0) + c
            if j < n:
                nxt[(i, j + 1)] = nxt.get((i, j + 1), 0) + c
        coeffs.append({key: c for key, c in nxt.items() if c != 0})
    norm_sq = tuple(sum(c * c * uk[i] * un[j] for (i, j), c in vec.items()) for vec in coeffs)
    return HighestWeightData(k, n, alpha, tuple(coeffs), norm_sq, uk, un)


def tensor_generators(k: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(E, F, H) of U^{|k|} (x) U^n acting on the tensor product."""
    rk, rn = make_irrep(abs(k)), make_irrep(n)
    Ik, In = np.eye(rk.dim), np.eye(rn.dim)
    return tuple(kron(getattr(rk, g), In) + kron(Ik, getattr(rn, g)) for g in "EFH")


@dataclass(frozen=True, eq=False)
class ModuleProjection:
    k: int
    n: int
    matrix: np.ndarray

    @property
    def rank(self) -> int:
        return self.k + self.n + 1

    @property
    def d(self) -> int:
        return abs(self.k) + 1


@lru_cache(maxsize=None)
def module_projection(k: int, n: int) -> ModuleProjection:
    """p^n_k: the projection of H^{|k|} (x) H^n onto its copy of H^{k+n}."""
    Q = highest_weight_vector(k, n).frame()
    P = Q @ Q.conj().T
    P.setflags(write=False)
    return ModuleProjection(k, n, P)


def weight_line_projection(m: int, index: int) -> np.ndarray:
    """Rank-one projection of H^m onto the weight line of the given basis index."""
    P = np.zeros((m + 1, m + 1), dtype=complex)
    P[index, index] = 1.0
    return P


@dataclass(frozen=True)
class SphereProjectionField:
    """x -> p_k(x) = U^{|k|}_x P^k U^{|k|*}_x on G, constant on H-cosets."""

    k: int

    @property
    def d(self) -> int:
        return abs(self.k) + 1

    @property
    def base(self) -> np.ndarray:
        """P^k: highest weight line for k >= 0, lowest for k < 0."""
        K = abs(self.k)
        return weight_line_projection(K, 0 if self.k >= 0 else K)

    def __call__(self, x: GroupElement) -> np.ndarray:
        return sphere_projection(self, x)


def sphere_projection(field: SphereProjectionField, x: GroupElement) -> np.ndarray:
    U = lift(x, abs(field.k))
    return U @ field.base @ U.conj().T


def frame_sections(k: int, x: GroupElement) -> np.ndarray:
    """Columns g_j(x) = P^k U^{|k|*}_x e_j, j = 0..|k|."""
    field = SphereProjectionField(k)
    U = lift(x, abs(k))
    return field.base @ U.conj().T


def _check_on_sphere(z, w, tol=1e-10) -> None:
    r = np.abs(np.asarray(z)) ** 2 + np.abs(np.asarray(w)) ** 2
    if np.any(np.abs(r - 1.0) > tol):
        raise PreconditionError("clutching input is off the unit 3-sphere")


def _check_jk(j: int, k: int) -> None:
    if j < 0 or k < 0:
        raise DomainError("clutching is implemented for nonnegative j, k only")


def clutching_matrix(j: int, k: int, z, w) -> np.ndarray:
    """M(z, w) = [[conj(z)^k, -conj(w)^j], [w^j, z^k]].

    Scalar ``z, w`` give a 2x2 matrix; arrays give shape ``z.shape + (2, 2)``.
    """
    _check_jk(j, k)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_on_sphere(z, w)
    M = np.empty(z.shape + (2, 2), dtype=complex)
    M[..., 0, 0] = np.conj(z) ** k
    M[..., 0, 1] = -np.conj(w) ** j
    M[..., 1, 0] = w ** j
    M[..., 1, 1] = z ** k
    return M


def clutching_inverse(j: int, k: int, z, w) -> np.ndarray:
    M = clutching_matrix(j, k, z, w)
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    inv = np.empty_like(M)
    inv[..., 0, 0] = M[..., 1, 1] / det
    inv[..., 0, 1] = -M[..., 0, 1] / det
    inv[..., 1, 0] = -M[..., 1, 0] / det
    inv[..., 1, 1] = M[..., 0, 0] / det
    return inv


Section = Callable[[np.ndarray, np.ndarray], np.ndarray]


def section_equivariance_residual(xi: Section, charge: int, z, w, ts=(0.1, 0.25, 0.4, 0.7)) -> float:
    """max |xi(z e_t, w e_t) - conj(e(charge t)) xi(z, w)| over the grid and phases."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    base = np.asarray(xi(z, w), dtype=complex)
    worst = 0.0
    for t in ts:
        e = np.exp(2j * np.pi * t)
        moved = np.asarray(xi(z * e, w * e), dtype=complex)
        worst = max(worst, float(np.max(np.abs(moved - np.conj(e) ** charge * base), initial=0.0)))
    return worst


def clutching_apply(j: int, k: int, f: Section, g: Section, z, w, tol: float = 1e-8):
    """Apply M to a section pair (f, g) of charges (j, k).

    Returns the image pair as callables, of charges (j + k, 0).  Inputs are
    checked for equivariance on the supplied grid.
    """
    _check_jk(j, k)
    _check_on_sphere(z, w)
    for xi, q, name in ((f, j, "f"), (g, k, "g")):
        res = section_equivariance_residual(xi, q, z, w)
        if res > tol:
            raise PreconditionError(f"section {name} is not charge-{q} equivariant (residual {res:.3g})")

    def first(zz, ww):
        zz, ww = np.asarray(zz, dtype=complex), np.asarray(ww, dtype=complex)
        return np.conj(zz) ** k * f(zz, ww) - np.conj(ww) ** j * g(zz, ww)

    def second(zz, ww):
        zz, ww = np.asarray(zz, dtype=complex), np.asarray(ww, dtype=complex)
        return ww ** j * f(zz, ww) + zz ** k * g(zz, ww)

    return first, second


def clutching_unapply(j: int, k: int, F: Section, G: Section):
    """Apply M^{-1} pointwise, inverting :func:`clutching_apply`."""
    _check_jk(j, k)

    def pick(r, c):
        def entry(zz, ww):
            return clutching_inverse(j, k, zz, ww)[..., r, c]
        return entry

    def first(zz, ww):
        return pick(0, 0)(zz, ww) * F(zz, ww) + pick(0, 1)(zz, ww) * G(zz, ww)

    def second(zz, ww):
        return pick(1, 0)(zz, ww) * F(zz, ww) + pick(1, 1)(zz, ww) * G(zz, ww)

    return first, second


def s3_grid(size: int = 10_000, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic scrambled-Halton points on S^3, returned as (z, w)."""
    u = scipy.stats.qmc.Halton(d=4, scramble=True, seed=seed).random(size)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    g = scipy.stats.norm.ppf(u)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3]
