"""The coherent-state bridge between C(S^2) and the matrix algebras.

Everything lives on H^{|k|} (x) H^n.  The sphere projection p_k(x) is
embedded as ``p_k(x) (x) I_n`` and the pivot as ``I_d (x) omega(x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, DimensionError, DomainError
from .modules import (
    ModuleProjection,
    SphereProjectionField,
    highest_weight_coefficients,
    module_projection,
    weight_line_projection,
)
from .operator_core import as_matrix, kron, spectral_norm
from .su2 import GroupElement, haar_samples, identity, lift, make_irrep

__all__ = [
    "BridgeInstance",
    "bridge_instance",
    "BridgeBounds",
    "defect_operator",
    "defect_norm_at",
    "defect_norm_closed",
    "analytic_defect_ratio",
    "analytic_defect",
    "expected_defect",
    "pivot_defect",
    "NhatValue",
    "nhat",
    "combined_seminorm",
    "Decision",
    "decision_quantity",
    "InequalityCheck",
    "quotient_inequality_check",
    "key_lemma_check",
]


@dataclass(frozen=True, eq=False)
class BridgeInstance:
    k: int
    n: int
    projection: ModuleProjection
    P_k: np.ndarray
    P_n: np.ndarray

    @property
    def d(self) -> int:
        return abs(self.k) + 1

    @property
    def dim(self) -> int:
        return self.d * (self.n + 1)

    @property
    def sphere_field(self) -> SphereProjectionField:
        return SphereProjectionField(self.k)

    def omega(self, x: GroupElement) -> np.ndarray:
        """Pivot omega(x) = U^n_x P^n U^{n*}_x."""
        U = lift(x, self.n)
        return U @ self.P_n @ U.conj().T

    def omega_d(self, x: GroupElement) -> np.ndarray:
        return kron(np.eye(self.d), self.omega(x))

    def sphere_embedded(self, x: GroupElement) -> np.ndarray:
        return kron(self.sphere_field(x), np.eye(self.n + 1))


@lru_cache(maxsize=None)
def bridge_instance(k: int, n: int) -> BridgeInstance:
    proj = module_projection(k, n)
    K = abs(k)
    P_k = weight_line_projection(K, 0 if k >= 0 else K)
    P_n = weight_line_projection(n, 0)
    return BridgeInstance(k, n, proj, P_k, P_n)


@dataclass(frozen=True)
class BridgeBounds:
    """Height and reach surrogates for the matricial bridge (imported, never computed)."""

    h: Optional[float]
    r: Optional[float]
    source: str = "config-supplied"

    def __post_init__(self):
        if self.source not in ("config-supplied", "placeholder"):
            raise ConfigError(f"unknown bounds source {self.source!r}")
        if self.h is not None and self.h < 0:
            raise ConfigError(f"height must be nonnegative, got {self.h}")
        if self.r is not None and not self.r > 0:
            raise ConfigError(f"reach must be positive, got {self.r}")

    @classmethod
    def placeholder(cls) -> "BridgeBounds":
        return cls(1.0, 1.0, "placeholder")

    @property
    def populated(self) -> bool:
        return self.h is not None and self.r is not None

    @property
    def length(self) -> float:
        return max(self.h, self.r)


def defect_operator(k: int, n: int) -> np.ndarray:
    """T = P^k (x) P^n - (I_d (x) P^n) p^n_k."""
    inst = bridge_instance(k, n)
    return kron(inst.P_k, inst.P_n) - kron(np.eye(inst.d), inst.P_n) @ inst.projection.matrix


def defect_norm_closed(k: int, n: int) -> float:
    return spectral_norm(defect_operator(k, n))


def defect_norm_at(inst: BridgeInstance, x: GroupElement) -> float:
    """||p_k(x) omega_d(x) - omega_d(x) p^n_k|| at a single point."""
    W = inst.omega_d(x)
    return spectral_norm(inst.sphere_embedded(x) @ W - W @ inst.projection.matrix)


def analytic_defect_ratio(k: int, n: int) -> Fraction:
    """||v'||^2 / ||v||^2 for k <= -1, where v' drops the e_k (x) f_n term."""
    if k > -1:
        raise DomainError(f"analytic_defect_ratio needs k <= -1, got {k}")
    if n < 1 or k + n < 0:
        raise DomainError(f"need n >= 1 and k + n >= 0, got k={k}, n={n}")
    K = -k
    alpha = highest_weight_coefficients(k, n)
    uk, un = make_irrep(K).unnorm_sq, make_irrep(n).unnorm_sq
    terms = [alpha[b] ** 2 * uk[b] * un[K - b] for b in range(K + 1)]
    return Fraction(sum(terms[:-1]), sum(terms))


def analytic_defect(k: int, n: int) -> float:
    """sqrt(k / (k + n)) for k >= 0."""
    if k < 0:
        raise DomainError(f"analytic_defect needs k >= 0, got {k}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return math.sqrt(k / (k + n))


def expected_defect(k: int, n: int) -> float:
    """Closed-form defect norm for any k: the square root of the exact ratio when k < 0."""
    if k >= 0:
        return analytic_defect(k, n)
    return math.sqrt(analytic_defect_ratio(k, n))


Field = Union[np.ndarray, Callable[[GroupElement], np.ndarray]]


def _at(a: Field, x: GroupElement) -> np.ndarray:
    return as_matrix(a(x)) if callable(a) else as_matrix(a)


def pivot_defect(a: Field, b, n: int, xs: Sequence[GroupElement]) -> float:
    """sup over ``xs`` of ||a(x) omega_d(x) - omega_d(x) b|| for the pivot of H^n."""
    b = as_matrix(b)
    D = b.shape[0]
    if D % (n + 1):
        raise DimensionError(f"size {D} is not a multiple of {n + 1}")
    d = D // (n + 1)
    P_n = weight_line_projection(n, 0)
    best = 0.0
    for x in xs:
        A = _at(a, x)
        if A.shape != b.shape:
            raise DimensionError(f"shape mismatch {A.shape} vs {b.shape}")
        U = lift(x, n)
        W = kron(np.eye(d), U @ P_n @ U.conj().T)
        best = max(best, spectral_norm(A @ W - W @ b))
    return best


class NhatValue(NamedTuple):
    value: float
    lower_bound: bool


def nhat(a: Field, b, inst: BridgeInstance, rng: Optional[np.random.Generator] = None,
         samples: int = 50) -> NhatValue:
    """max(N(a, b), N(a*, b*)) for the bridge of ``inst``.

    ``a`` may be the instance's SphereProjectionField (embedded automatically),
    a constant matrix, or a callable field.  The concrete pair (p_k, p^n_k)
    uses the closed form; everything else is a sampled sup, flagged as a
    lower bound.
    """
    b = as_matrix(b)
    if b.shape != (inst.dim, inst.dim):
        raise DimensionError(f"b has shape {b.shape}, expected {(inst.dim, inst.dim)}")
    if isinstance(a, SphereProjectionField):
        if a.k == inst.k and np.array_equal(b, inst.projection.matrix):
            # both sides self-adjoint, defect independent of x
            return NhatValue(defect_norm_closed(inst.k, inst.n), False)
        field = a
        a = lambda x: kron(field(x), np.eye(inst.n + 1))
    rng = rng if rng is not None else np.random.default_rng(0)
    xs = [identity()] + haar_samples(rng, samples - 1)
    a_adj = (lambda x: _at(a, x).conj().T) if callable(a) else as_matrix(a).conj().T
    value = max(pivot_defect(a, b, inst.n, xs), pivot_defect(a_adj, b.conj().T, inst.n, xs))
    return NhatValue(value, True)


def combined_seminorm(LA: float, LB: float, nhat_val: float, r: float) -> float:
    """L^r(a, b) = max(L^A(a), L^B(b), N^(a, b) / r)."""
    if not r > 0:
        raise DomainError(f"reach parameter must be positive, got {r}")
    return max(LA, LB, nhat_val / r)


class Decision(NamedTuple):
    value: float
    defect: float
    defect_bound: float
    passes: bool


def decision_quantity(k: int, n: int, bounds: BridgeBounds, LA: float, LB: float) -> Decision:
    """(h + r) L^r(p_k, p^n_k), with r = bounds.r, compared against 1/2.

    ``defect_bound`` is twice the defect norm, the value the third term is
    bounded by once r is taken to be the bridge length.
    """
    if bounds is None or not bounds.populated:
        raise ConfigError("bridge bounds (h, r) are not populated")
    defect = defect_norm_closed(k, n)
    value = (bounds.h + bounds.r) * combined_seminorm(LA, LB, defect, bounds.r)
    return Decision(value, defect, 2.0 * defect, value < 0.5)


class InequalityCheck(NamedTuple):
    holds: bool
    slack: float


def quotient_inequality_check(c_norm: float, pic_norm: float, eps: float, L: float) -> InequalityCheck:
    """||c|| <= ||pi(c)|| + eps L(c), evaluated only."""
    slack = pic_norm + eps * L - c_norm
    return InequalityCheck(slack >= 0, slack)


def key_lemma_check(pair_norm: float, a_norm: float, h: float, r: float, Lr: float) -> InequalityCheck:
    """||(a, b)|| <= ||a|| + (h + r) L^r(a, b), evaluated only."""
    slack = a_norm + (h + r) * Lr - pair_norm
    return InequalityCheck(slack >= 0, slack)
