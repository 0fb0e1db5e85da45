"""Projection calculus: spectral cuts, projection paths and their seminorm bounds."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import NoPathError, PreconditionError, SingularityError
from .operator_core import (
    Contour,
    as_matrix,
    hermitian_defect,
    resolvent_bound,
    resolvent_contour_sum,
    spectral_norm,
)

__all__ = [
    "nearest_projection",
    "ProjectionPath",
    "projection_path",
    "concatenate_paths",
    "PathProfile",
    "path_seminorm_profile",
    "Verdict",
    "HomotopyDecision",
    "homotopy_decision",
    "bridge_homotopy_decision",
    "HoloBoundCheck",
    "holo_seminorm_bound_check",
]

Seminorm = Callable[[np.ndarray], float]


def nearest_projection(c, gap_tol: float = 1e-3) -> np.ndarray:
    """Spectral projection of a self-adjoint ``c`` onto its eigenvalues above 1/2."""
    C = as_matrix(c)
    if hermitian_defect(C) > 1e-8:
        raise PreconditionError("nearest_projection needs a self-adjoint input")
    w, V = np.linalg.eigh(0.5 * (C + C.conj().T))
    close = np.abs(w - 0.5) < gap_tol
    if np.any(close):
        lam = float(w[close][0])
        raise SingularityError(f"eigenvalue {lam} is within {gap_tol} of 1/2", eigenvalue=lam)
    V = V[:, w > 0.5]
    return V @ V.conj().T


@dataclass(frozen=True, eq=False)
class ProjectionPath:
    p0: np.ndarray
    p1: np.ndarray
    t_grid: np.ndarray
    path: tuple
    delta: float

    def __len__(self):
        return len(self.path)

    def max_step(self) -> float:
        return max((spectral_norm(b - a) for a, b in zip(self.path, self.path[1:])), default=0.0)

    def ranks(self) -> np.ndarray:
        return np.array([np.trace(p).real for p in self.path])


def projection_path(p0, p1, t_grid: Optional[Sequence[float]] = None, gap_tol: float = 1e-3) -> ProjectionPath:
    """Spectral cut of the affine segment (1 - t) p0 + t p1."""
    p0, p1 = as_matrix(p0), as_matrix(p1)
    delta = spectral_norm(p0 - p1)
    if delta >= 1.0 - 1e-12:
        raise NoPathError(f"||p0 - p1|| = {delta:.6g} is not below 1", delta=delta)
    ts = np.linspace(0.0, 1.0, 101) if t_grid is None else np.asarray(t_grid, dtype=float)
    path = tuple(nearest_projection((1.0 - t) * p0 + t * p1, gap_tol) for t in ts)
    return ProjectionPath(p0, p1, ts, path, delta)


def concatenate_paths(first: ProjectionPath, second: ProjectionPath) -> ProjectionPath:
    """Join two paths sharing an endpoint; the time grid is rescaled onto [0, 1]."""
    if spectral_norm(first.p1 - second.p0) > 1e-10:
        raise PreconditionError("paths do not share an endpoint")
    ts = np.concatenate([0.5 * first.t_grid, 0.5 + 0.5 * second.t_grid[1:]])
    path = first.path + second.path[1:]
    return ProjectionPath(first.p0, second.p1, ts, path, max(first.delta, second.delta))


class PathProfile(NamedTuple):
    values: np.ndarray
    bound: float
    holds: bool


def path_seminorm_profile(path: ProjectionPath, L: Seminorm, headroom: float = 0.05) -> PathProfile:
    """L(p_t) along the path against max(L(p0), L(p1)) / (1 - delta)."""
    values = np.array([L(p) for p in path.path])
    bound = max(L(path.p0), L(path.p1)) / (1.0 - path.delta)
    holds = bool(values.max() <= bound * (1.0 + headroom) + 1e-12)
    return PathProfile(values, bound, holds)


class Verdict(enum.Enum):
    GUARANTEED = "PATH-GUARANTEED"
    NOT_GUARANTEED = "NOT-GUARANTEED"


class HomotopyDecision(NamedTuple):
    delta: float
    verdict: Verdict


def homotopy_decision(norm_diff: float, eps: float, L_q0: float, L_q1: float) -> HomotopyDecision:
    """delta = ||p0 - p1|| + eps (L(q0) + L(q1)); a path is guaranteed when delta < 1."""
    if min(norm_diff, eps, L_q0, L_q1) < 0:
        raise PreconditionError("homotopy inputs must be nonnegative")
    delta = norm_diff + eps * (L_q0 + L_q1)
    return HomotopyDecision(delta, Verdict.GUARANTEED if delta < 1 else Verdict.NOT_GUARANTEED)


def bridge_homotopy_decision(h: float, r: float, Lr: float) -> HomotopyDecision:
    """Bridge form: (h + r) L^r(p, q) < 1/2."""
    value = (h + r) * Lr
    return HomotopyDecision(value, Verdict.GUARANTEED if value < 0.5 else Verdict.NOT_GUARANTEED)


class HoloBoundCheck(NamedTuple):
    left: float
    right: float
    holds: bool
    theta_c: np.ndarray


def holo_seminorm_bound_check(c, theta, contours, L: Seminorm) -> HoloBoundCheck:
    """Check L(theta(c)) <= (1/2pi) (sum |theta| arc) M(c)^2 L(c) on discretised contours."""
    C = as_matrix(c)
    contours = [contours] if isinstance(contours, Contour) else list(contours)
    thetas = theta if isinstance(theta, (list, tuple)) and len(theta) == len(contours) else [theta] * len(contours)
    theta_c = resolvent_contour_sum(C, list(thetas), contours)
    integral = 0.0
    for th, gamma in zip(thetas, contours):
        nodes = gamma.nodes()
        vals = np.asarray(th(nodes) if callable(th) else np.broadcast_to(th, nodes.shape), dtype=complex)
        integral += float(np.sum(np.abs(vals)) * gamma.arc)
    M = resolvent_bound(C, contours)
    left = L(theta_c)
    right = integral / (2.0 * np.pi) * M ** 2 * L(C)
    return HoloBoundCheck(left, right, bool(left <= right + 1e-6), theta_c)
