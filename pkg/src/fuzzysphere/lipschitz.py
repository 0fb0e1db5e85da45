"""Lower-bound estimates of the Lipschitz seminorms induced by SU(2) actions.

Every value returned here is a quotient actually evaluated at some group
element (or pair of points), hence a certified lower bound for the supremum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.optimize

from .bridge import InequalityCheck
from .errors import DimensionError, PreconditionError
from .modules import SphereProjectionField, highest_weight_vector, module_projection
from .operator_core import as_matrix, kron, spectral_norm
from .su2 import (
    GroupElement,
    from_algebra,
    haar_sample,
    haar_samples,
    length,
    lift,
    quotient_metric,
    torus,
)

__all__ = [
    "Action",
    "SeminormEstimate",
    "action_quotient",
    "lip_action_estimate",
    "lip_projection_estimate",
    "lip_sphere_estimate",
    "beta_gamma_identity_check",
    "SharedWitnessSeminorm",
    "SlipReport",
    "slip_axiom_check",
    "leibniz_spotcheck",
]

EXCLUSION = 1e-6


@dataclass(frozen=True)
class Action:
    """Conjugation by a tensor product of irreps, some factors acting trivially.

    ``weights`` are the highest weights of the tensor factors; factor ``i``
    is conjugated by U^{weights[i]} when ``acting[i]`` and left alone
    otherwise.  ``inverse`` evaluates the action at x^{-1}.
    """

    weights: tuple
    acting: tuple
    inverse: bool = False

    def __post_init__(self):
        if len(self.weights) != len(self.acting):
            raise DimensionError("weights and acting flags differ in length")

    @classmethod
    def conjugation(cls, n: int) -> "Action":
        return cls((n,), (True,))

    @classmethod
    def amplified(cls, d: int, n: int) -> "Action":
        """iota_d (x) alpha on M_d(B^n)."""
        return cls((d - 1, n), (False, True))

    @classmethod
    def beta(cls, k: int, n: int) -> "Action":
        return cls((abs(k), n), (False, True))

    @classmethod
    def gamma(cls, k: int, n: int, inverse: bool = False) -> "Action":
        return cls((abs(k), n), (True, False), inverse)

    @property
    def dims(self) -> tuple:
        return tuple(w + 1 for w in self.weights)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def factors(self, x: GroupElement) -> list:
        if self.inverse:
            x = x.inverse()
        return [lift(x, w) if on else None for w, on in zip(self.weights, self.acting)]

    def unitary(self, x: GroupElement) -> np.ndarray:
        U = np.ones((1, 1), dtype=complex)
        for dim, f in zip(self.dims, self.factors(x)):
            U = kron(U, f if f is not None else np.eye(dim))
        return U

    def apply_vectors(self, factors: list, Q: np.ndarray) -> np.ndarray:
        """U Q for a block of column vectors, factor by factor."""
        r = Q.shape[1]
        Y = Q.reshape(self.dims + (r,))
        for axis, f in enumerate(factors):
            if f is not None:
                Y = np.moveaxis(np.tensordot(f, Y, axes=([1], [axis])), 0, axis)
        return Y.reshape(self.dim, r)

    def conjugate(self, factors: list, T: np.ndarray) -> np.ndarray:
        """U T U*, factor by factor."""
        m = len(self.dims)
        Y = T.reshape(self.dims + self.dims)
        for axis, f in enumerate(factors):
            if f is not None:
                Y = np.moveaxis(np.tensordot(f, Y, axes=([1], [axis])), 0, axis)
                Y = np.moveaxis(np.tensordot(f.conj(), Y, axes=([1], [m + axis])), 0, m + axis)
        return Y.reshape(self.dim, self.dim)


@dataclass(frozen=True)
class SeminormEstimate:
    value: float
    witness: Union[GroupElement, tuple, None]
    starts: int
    iterations: int
    converged: bool


def _clip(params: np.ndarray) -> np.ndarray:
    r = float(np.linalg.norm(params))
    return params * (np.pi / r) if r > np.pi else params


def _chart(params: np.ndarray) -> GroupElement:
    p = _clip(np.asarray(params, dtype=float))
    return from_algebra(p[0], complex(p[1], p[2]))


def _ball_starts(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * (np.pi * rng.random((count, 1)) ** (1.0 / 3.0))


def _increment_norm(T: np.ndarray, action: Action, x: GroupElement, frame: Optional[np.ndarray]) -> float:
    factors = action.factors(x)
    if frame is None:
        return spectral_norm(action.conjugate(factors, T) - T)
    # T = Q Q*: for equal-rank projections ||U T U* - T|| = ||(I - T) U Q||
    Y = action.apply_vectors(factors, frame)
    return spectral_norm(Y - frame @ (frame.conj().T @ Y))


def action_quotient(T, action: Action, x: GroupElement, frame: Optional[np.ndarray] = None) -> float:
    """||alpha_x(T) - T|| / ell(x); 0 inside the exclusion radius."""
    ell = length(x)
    if ell < EXCLUSION:
        return 0.0
    return _increment_norm(as_matrix(T), action, x, frame) / ell


def _multistart_max(objective: Callable[[np.ndarray], float], starts: np.ndarray,
                    iterations: int, tol: float):
    best = (-np.inf, None, False)
    nit = 0
    for p0 in starts:
        res = scipy.optimize.minimize(
            lambda p: -objective(p), p0, method="Nelder-Mead",
            options={"maxiter": iterations, "xatol": tol, "fatol": tol},
        )
        nit += int(res.nit)
        for p, val, ok in ((res.x, -res.fun, res.success), (p0, objective(p0), False)):
            if val > best[0]:
                best = (val, np.array(p, dtype=float), ok)
    return best, nit


def lip_action_estimate(T, action: Action, starts: int = 64, seed: int = 0,
                        iterations: int = 200, tol: float = 1e-9,
                        frame: Optional[np.ndarray] = None) -> SeminormEstimate:
    """Multi-start simplex search for sup_x ||alpha_x(T) - T|| / ell(x).

    Passing ``frame`` (orthonormal columns with T = frame frame*) switches
    to the cheaper projection formula; results agree with the dense path.
    """
    T = as_matrix(T)
    if T.shape != (action.dim, action.dim):
        raise DimensionError(f"operator of shape {T.shape} does not match action dimension {action.dim}")
    rng = np.random.default_rng(seed)
    objective = lambda p: action_quotient(T, action, _chart(p), frame)
    (val, p, ok), nit = _multistart_max(objective, _ball_starts(rng, starts), iterations, tol)
    witness = _chart(p)
    value = action_quotient(T, action, witness, frame)
    return SeminormEstimate(value, witness, starts, nit, bool(ok))


def lip_projection_estimate(k: int, n: int, which: str = "beta", **kwargs) -> SeminormEstimate:
    """Seminorm estimate of p^n_k under the beta action or the reparametrised gamma action."""
    P = module_projection(k, n).matrix
    Q = highest_weight_vector(k, n).frame()
    if which == "beta":
        action = Action.beta(k, n)
    elif which == "gamma":
        action = Action.gamma(k, n, inverse=True)
    else:
        raise ValueError(f"unknown action {which!r}")
    return lip_action_estimate(P, action, frame=Q, **kwargs)


Field = Callable[[GroupElement], np.ndarray]


def _check_coset_invariant(F: Field, rng: np.random.Generator, tol: float = 1e-8) -> None:
    for _ in range(3):
        x = haar_sample(rng)
        t = rng.random()
        if spectral_norm(as_matrix(F(x * torus(t))) - as_matrix(F(x))) > tol:
            raise PreconditionError("field is not constant on H-cosets")


def lip_sphere_estimate(field: Field, pairs: int = 64, seed: int = 0, iterations: int = 200,
                        tol: float = 1e-9) -> SeminormEstimate:
    """Search for sup ||F(x) - F(y)|| / rho(xH, yH) over coset pairs.

    Each start fixes a Haar point x and refines y = x exp(X) over the
    three-parameter chart.
    """
    rng = np.random.default_rng(seed)
    _check_coset_invariant(field, rng)

    def ratio(x: GroupElement, y: GroupElement) -> float:
        dist = quotient_metric(x, y)
        if dist < EXCLUSION:
            return 0.0
        return spectral_norm(as_matrix(field(x)) - as_matrix(field(y))) / dist

    best = (-np.inf, None, False)
    nit = 0
    for x, p0 in zip(haar_samples(rng, pairs), _ball_starts(rng, pairs)):
        objective = lambda p, x=x: ratio(x, x * _chart(p))
        (val, p, ok), it = _multistart_max(objective, p0[None, :], iterations, tol)
        nit += it
        if val > best[0]:
            best = (val, (x, x * _chart(p)), ok)
    x, y = best[1]
    return SeminormEstimate(ratio(x, y), (x, y), pairs, nit, bool(best[2]))


def beta_gamma_identity_check(k: int, n: int, x: GroupElement) -> float:
    """||beta_x(p^n_k) - gamma_{x^{-1}}(p^n_k)||."""
    P = module_projection(k, n).matrix
    d = abs(k) + 1
    B = kron(np.eye(d), lift(x, n))
    C = kron(lift(x.inverse(), abs(k)), np.eye(n + 1))
    return spectral_norm(B @ P @ B.conj().T - C @ P @ C.conj().T)


@dataclass(eq=False)
class SharedWitnessSeminorm:
    """max over a fixed witness set of ||(I_d (x) U_x) T (I_d (x) U_x)* - T|| / ell(x).

    Works on M_d(B^n) for every d, so the same witnesses serve all sizes.
    """

    n: int
    witnesses: Sequence[GroupElement]

    @classmethod
    def sampled(cls, n: int, count: int = 64, seed: int = 0) -> "SharedWitnessSeminorm":
        rng = np.random.default_rng(seed)
        xs = [x for x in haar_samples(rng, count) if length(x) >= EXCLUSION]
        return cls(n, xs)

    @cached_property
    def _lifts(self):
        return [(lift(x, self.n), length(x)) for x in self.witnesses]

    def quotients(self, T) -> np.ndarray:
        T = as_matrix(T)
        D = T.shape[0]
        if T.shape[1] != D or D % (self.n + 1):
            raise DimensionError(f"shape {T.shape} is not square over H^{self.n}")
        action = Action.amplified(D // (self.n + 1), self.n)
        return np.array([
            spectral_norm(action.conjugate([None, U], T) - T) / ell for U, ell in self._lifts
        ])

    def __call__(self, T) -> float:
        q = self.quotients(T)
        return float(q.max()) if q.size else 0.0


@dataclass(frozen=True)
class SlipReport:
    compression_slack: float
    block_deviation: float
    unit_value: float
    star_deviation: float
    samples: int

    @property
    def passed(self) -> bool:
        return (self.compression_slack >= -1e-6 and self.block_deviation <= 1e-9
                and self.unit_value <= 1e-9 and self.star_deviation <= 1e-9)


def _random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def slip_axiom_check(L: SharedWitnessSeminorm, rng: np.random.Generator, samples: int = 100,
                     max_d: int = 4) -> SlipReport:
    """Compression, block-diagonal, unit and *-invariance checks on random data.

    Both sides of every comparison use the same witnesses, so the checks are
    exact statements about the sampled supremum.
    """
    m1 = L.n + 1
    worst_slack, worst_block, worst_star, unit = np.inf, 0.0, 0.0, 0.0
    for _ in range(samples):
        d = int(rng.integers(1, max_d + 1))
        m = int(rng.integers(1, max_d + 1))
        A = _random_complex(rng, (d * m1, d * m1))
        alpha = _random_complex(rng, (m, d))
        beta = _random_complex(rng, (d, m))
        lhs = L(kron(alpha, np.eye(m1)) @ A @ kron(beta, np.eye(m1)))
        rhs = spectral_norm(alpha) * L(A) * spectral_norm(beta)
        worst_slack = min(worst_slack, rhs - lhs)

        e = int(rng.integers(1, max_d + 1))
        C = _random_complex(rng, (e * m1, e * m1))
        block = np.zeros(((d + e) * m1,) * 2, dtype=complex)
        block[: d * m1, : d * m1] = A
        block[d * m1:, d * m1:] = C
        worst_block = max(worst_block, abs(L(block) - max(L(A), L(C))))
        worst_star = max(worst_star, abs(L(A.conj().T) - L(A)))
        unit = max(unit, L(np.eye(d * m1)))
    return SlipReport(float(worst_slack), float(worst_block), float(unit), float(worst_star), samples)


def leibniz_spotcheck(T1, T2, L: Callable[[np.ndarray], float]):
    """Slack of L(T1 T2) <= L(T1)||T2|| + ||T1|| L(T2); holds when slack >= -1e-9."""
    T1, T2 = as_matrix(T1), as_matrix(T2)
    slack = L(T1) * spectral_norm(T2) + spectral_norm(T1) * L(T2) - L(T1 @ T2)
    return InequalityCheck(bool(slack >= -1e-9), float(slack))
