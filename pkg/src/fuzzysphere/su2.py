"""SU(2): group elements, the length function, coset distance and irreps.

A group element ``(a, b)`` stands for the matrix ``[[a, -conj(b)], [b, conj(a)]]``.
Irreps use the orthonormal weight basis ``e_0, ..., e_n`` where ``e_j`` has
weight ``n - 2j`` (index 0 is the highest weight).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
import scipy.optimize

from .errors import DomainError, PreconditionError
from .operator_core import mat_exp

__all__ = [
    "GroupElement",
    "identity",
    "torus",
    "haar_sample",
    "haar_samples",
    "from_algebra",
    "length",
    "quotient_metric",
    "Irrep",
    "make_irrep",
    "unnormalized_norm_sq",
    "lift",
    "lift_algebra",
    "log_algebra",
]

_UNIT_TOL = 1e-10


@dataclass(frozen=True)
class GroupElement:
    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > _UNIT_TOL:
            raise PreconditionError(f"({a}, {b}) is not on the unit 3-sphere")

    def as_matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=complex)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.a.conjugate(), -self.b)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        a, b, c, d = self.a, self.b, other.a, other.b
        return GroupElement(a * c - b.conjugate() * d, b * c + a.conjugate() * d)

    def conjugate_by(self, x: "GroupElement") -> "GroupElement":
        """x * self * x^{-1}"""
        return x * self * x.inverse()

    @classmethod
    def from_matrix(cls, m) -> "GroupElement":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[1, 0])


def identity() -> GroupElement:
    return GroupElement(1.0, 0.0)


def torus(t: float) -> GroupElement:
    """s_t = diag(e(t), conj(e(t))) with e(t) = exp(2 pi i t)."""
    return GroupElement(np.exp(2j * np.pi * t), 0.0)


def haar_sample(rng: np.random.Generator) -> GroupElement:
    """Haar-uniform element: four standard Gaussians normalised onto S^3."""
    g = rng.standard_normal(4)
    g /= np.linalg.norm(g)
    return GroupElement(complex(g[0], g[1]), complex(g[2], g[3]))


def haar_samples(rng: np.random.Generator, count: int) -> list[GroupElement]:
    return [haar_sample(rng) for _ in range(count)]


def length(x: GroupElement) -> float:
    """ell(x) = ||x - I|| in the 2x2 operator norm.

    x - I is normal with both eigenvalues of equal modulus, so the operator
    norm is half the Frobenius norm squared, rooted.
    """
    return math.sqrt(abs(x.a - 1.0) ** 2 + abs(x.b) ** 2)


def _coset_length(g: GroupElement, t):
    # ell(g s_t) for g = (a, b): g s_t = (a e(t), b e(t))
    e = np.exp(2j * np.pi * np.asarray(t))
    return np.sqrt(np.abs(g.a * e - 1.0) ** 2 + abs(g.b) ** 2)


def quotient_metric(x: GroupElement, y: GroupElement, grid: int = 256, tol: float = 1e-10) -> float:
    """inf over t of ell(x^{-1} y s_t): grid scan followed by golden-section refinement."""
    g = x.inverse() * y
    ts = np.arange(grid) / grid
    vals = _coset_length(g, ts)
    i = int(np.argmin(vals))
    h = 1.0 / grid
    f = lambda t: float(_coset_length(g, t))
    try:
        t_min = scipy.optimize.golden(f, brack=(ts[i] - h, ts[i], ts[i] + h), tol=tol)
    except ValueError:
        # flat profile (a == 0): no strict bracket, every t is a minimiser
        return float(vals[i])
    return min(float(vals[i]), f(t_min))


def from_algebra(c: float, z: complex) -> GroupElement:
    """exp(i c H + z E - conj(z) F) in the defining representation."""
    z = complex(z)
    theta = math.sqrt(c * c + abs(z) ** 2)
    if theta == 0.0:
        return identity()
    s = math.sin(theta) / theta
    return GroupElement(complex(math.cos(theta), c * s), -z.conjugate() * s)


def log_algebra(x: GroupElement) -> tuple[float, complex]:
    """Principal logarithm of ``x`` as chart coordinates ``(c, z)``.

    At x = -I the branch is fixed to i*pi*diag(1, -1), i.e. (c, z) = (pi, 0).
    """
    cos_t = x.a.real
    sin_t = math.sqrt(x.a.imag ** 2 + abs(x.b) ** 2)
    if sin_t == 0.0:
        return (0.0, 0j) if cos_t > 0 else (math.pi, 0j)
    theta = math.atan2(sin_t, cos_t)
    scale = theta / sin_t
    return scale * x.a.imag, -scale * x.b.conjugate()


@dataclass(frozen=True, eq=False)
class Irrep:
    """Generators of the (n+1)-dimensional irrep in the orthonormal weight basis."""

    n: int
    E: np.ndarray
    F: np.ndarray
    H: np.ndarray
    unnorm_sq: tuple

    @property
    def dim(self) -> int:
        return self.n + 1


def unnormalized_norm_sq(m: int) -> tuple:
    """||F^a e_m||^2 = a! m! / (m - a)! for a = 0..m, as exact integers."""
    out = [1]
    for a in range(1, m + 1):
        out.append(out[-1] * a * (m - a + 1))
    return tuple(out)


@lru_cache(maxsize=None)
def make_irrep(n: int) -> Irrep:
    if n < 0:
        raise DomainError(f"highest weight must be nonnegative, got {n}")
    a = np.arange(n)
    # F e_a = sqrt((a+1)(n-a)) e_{a+1}
    F = np.diag(np.sqrt((a + 1.0) * (n - a)), -1).astype(complex)
    E = F.conj().T.copy()
    H = np.diag(n - 2.0 * np.arange(n + 1)).astype(complex)
    for arr in (E, F, H):
        arr.setflags(write=False)
    return Irrep(n, E, F, H, unnormalized_norm_sq(n))


def lift_algebra(c: float, z: complex, n: int) -> np.ndarray:
    """U^n of exp(i c H + z E - conj(z) F)."""
    rep = make_irrep(n)
    if n == 0:
        return np.ones((1, 1), dtype=complex)
    z = complex(z)
    return mat_exp(1j * c * rep.H + z * rep.E - z.conjugate() * rep.F)


def lift(x: GroupElement, n: int) -> np.ndarray:
    """U^n_x, via the principal logarithm of x pushed through the derived representation."""
    c, z = log_algebra(x)
    return lift_algebra(c, z, n)


def lift_many(xs: Iterable[GroupElement], n: int) -> list[np.ndarray]:
    return [lift(x, n) for x in xs]
