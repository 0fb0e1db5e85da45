"""Runnable invariant suites behind ``fuzzysphere verify``.

Each check returns ``(passed, detail)`` and sizes itself from the config.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bridge, lipschitz, modules, projcalc, su2
from .config import SweepConfig
from .operator_core import Contour, herm_eig, kron, resolvent_contour_sum, spectral_norm

Check = Callable[[SweepConfig], tuple]


def _rng(cfg: SweepConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _crandn(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _kn_pairs(cfg: SweepConfig, n_cap: int):
    for k in sorted(set(cfg.k_list)):
        for n in range(max(1, -k), min(cfg.n_max, n_cap) + 1):
            yield k, n


def _result(worst: float, tol: float, what: str):
    return worst < tol, f"max {what} {worst:.3e} (tol {tol:g})"


def check_submultiplicative(cfg):
    rng = _rng(cfg, 1)
    worst = -np.inf
    for _ in range(20):
        A, B = _crandn(rng, (6, 6)), _crandn(rng, (6, 6))
        worst = max(worst, spectral_norm(A @ B) - spectral_norm(A) * spectral_norm(B))
    return worst <= 1e-9, f"max excess {worst:.3e}"


def check_kron_norm(cfg):
    rng = _rng(cfg, 2)
    worst = 0.0
    for _ in range(20):
        A, B = _crandn(rng, (3, 4)), _crandn(rng, (2, 5))
        worst = max(worst, abs(spectral_norm(kron(A, B)) - spectral_norm(A) * spectral_norm(B)))
    return _result(worst, 1e-9, "deviation")


def check_resolvent_identity(cfg):
    rng = _rng(cfg, 3)
    X = _crandn(rng, (8, 8))
    M = X + X.conj().T
    R = spectral_norm(M) + 1.0
    total = resolvent_contour_sum(M, 1.0, Contour(0.0, R, 256))
    return _result(spectral_norm(total - np.eye(8)), 1e-8, "deviation from identity")


def check_projection_spectrum(cfg):
    worst = 0.0
    for k, n in _kn_pairs(cfg, 10):
        w = herm_eig(modules.module_projection(k, n).matrix).eigenvalues
        worst = max(worst, float(np.max(np.minimum(np.abs(w), np.abs(w - 1)))))
    return _result(worst, 1e-10, "distance to {0,1}")


def check_casimir(cfg):
    worst = 0.0
    for n in range(0, min(cfg.n_max, 30) + 1):
        r = su2.make_irrep(n)
        C = r.E @ r.F + r.F @ r.E + r.H @ r.H / 2
        worst = max(worst, spectral_norm(C - C[0, 0] * np.eye(r.dim)))
    return _result(worst, 1e-10, "non-scalar part")


def check_lift_unitarity(cfg):
    rng = _rng(cfg, 4)
    xs = su2.haar_samples(rng, 20)
    worst = 0.0
    for n in range(0, min(cfg.n_max, 60) + 1, 3):
        for x in xs:
            U = su2.lift(x, n)
            worst = max(worst, spectral_norm(U.conj().T @ U - np.eye(n + 1)))
    return _result(worst, cfg.tolerances["unitarity"], "||U*U - I||")


def check_length_conjugation(cfg):
    rng = _rng(cfg, 5)
    worst = 0.0
    for _ in range(1000):
        x, y = su2.haar_sample(rng), su2.haar_sample(rng)
        worst = max(worst, abs(su2.length(y.conjugate_by(x)) - su2.length(y)))
    return _result(worst, 1e-12, "conjugation deviation")


def check_weight_covariance(cfg):
    rng = _rng(cfg, 6)
    worst = 0.0
    for n in range(1, min(cfg.n_max, 20) + 1):
        S = su2.lift(su2.torus(rng.random()), n)
        H = su2.make_irrep(n).H
        worst = max(worst, spectral_norm(S @ H - H @ S))
    return _result(worst, 1e-12, "[U(s_t), H]")


def check_idempotence(cfg):
    rng = _rng(cfg, 7)
    worst = 0.0
    tol = cfg.tolerances["idempotence"]
    for k, n in _kn_pairs(cfg, cfg.n_max):
        P = np.array(modules.module_projection(k, n).matrix)
        if cfg.inject_fault == "idempotence":
            X = _crandn(rng, P.shape)
            P = P + 1e-3 * (X + X.conj().T) / spectral_norm(X + X.conj().T)
        worst = max(worst, spectral_norm(P @ P - P), spectral_norm(P - P.conj().T))
    return _result(worst, tol, "idempotence/self-adjointness residual")


def check_trace(cfg):
    worst = 0.0
    for k, n in _kn_pairs(cfg, cfg.n_max):
        P = modules.module_projection(k, n).matrix
        worst = max(worst, abs(np.trace(P).real - (k + n + 1)))
    return _result(worst, cfg.tolerances["trace"], "trace deviation")


def check_equivariance(cfg):
    rng = _rng(cfg, 8)
    xs = su2.haar_samples(rng, 5)
    worst = 0.0
    for k, n in _kn_pairs(cfg, 20):
        P = modules.module_projection(k, n).matrix
        for x in xs:
            U = kron(su2.lift(x, abs(k)), su2.lift(x, n))
            worst = max(worst, spectral_norm(U @ P - P @ U))
    return _result(worst, cfg.tolerances["equivariance"], "commutator")


def check_highest_weight(cfg):
    worst = 0.0
    for k, n in _kn_pairs(cfg, cfg.n_max):
        v = modules.highest_weight_vector(k, n).vector(0)
        E = modules.tensor_generators(k, n)[0]
        worst = max(worst, np.linalg.norm(E @ v) / np.linalg.norm(v))
    return _result(worst, cfg.tolerances["highest_weight"], "||E v|| / ||v||")


def check_descended_norms(cfg):
    bad = []
    for k, n in _kn_pairs(cfg, cfg.n_max):
        if k < 0:
            continue
        h = modules.highest_weight_vector(k, n)
        m = k + n
        expect = [math.factorial(a) * math.factorial(m) // math.factorial(m - a) for a in range(m + 1)]
        if list(h.norm_sq) != expect:
            bad.append((k, n))
    return not bad, f"mismatches {bad}" if bad else "exact big-integer agreement"


def check_clutching_det(cfg):
    z, w = modules.s3_grid(cfg.grid_size, cfg.seed)
    worst, smallest = 0.0, np.inf
    for j in range(4):
        for k in range(4):
            M = modules.clutching_matrix(j, k, z, w)
            det = np.linalg.det(M)
            expect = np.abs(z) ** (2 * k) + np.abs(w) ** (2 * j)
            worst = max(worst, float(np.max(np.abs(det - expect))))
            smallest = min(smallest, float(np.min(np.abs(det))))
    ok = worst < cfg.tolerances["clutching_det"] and smallest > 0
    return ok, f"max det deviation {worst:.3e}, min |det| {smallest:.3e}"


def check_defect_law(cfg):
    worst = 0.0
    for k, n in _kn_pairs(cfg, cfg.n_max):
        worst = max(worst, abs(bridge.defect_norm_closed(k, n) - bridge.expected_defect(k, n)))
    return _result(worst, cfg.tolerances["defect_law"], "closed-form deviation")


def check_decay(cfg):
    bad = [(k, n) for k, n in _kn_pairs(cfg, cfg.n_max)
           if k < 0 and n * bridge.analytic_defect_ratio(k, n) > abs(k) ** 3]
    return not bad, f"violations {bad}" if bad else "n * ratio <= |k|^3 everywhere"


def check_monotone(cfg):
    bad = []
    for k in sorted(set(cfg.k_list)):
        if k == 0:
            continue
        ns = range(max(1, -k), cfg.n_max + 1)
        vals = [bridge.defect_norm_closed(k, n) for n in ns]
        bad += [(k, n) for n, a, b in zip(ns, vals, vals[1:]) if not b < a]
    return not bad, f"non-decreasing at {bad}" if bad else "strictly decreasing in n"


def check_x_independence(cfg):
    rng = _rng(cfg, 9)
    xs = su2.haar_samples(rng, cfg.haar_samples)
    worst = 0.0
    for k, n in _kn_pairs(cfg, 10):
        inst = bridge.bridge_instance(k, n)
        worst = max(worst, float(np.std([bridge.defect_norm_at(inst, x) for x in xs], ddof=1)))
    return _result(worst, cfg.tolerances["x_independence"], "std over Haar samples")


def check_direct_sum(cfg):
    rng = _rng(cfg, 10)
    n = 3
    worst = 0.0
    xs = su2.haar_samples(rng, 3)
    for _ in range(20):
        d, e = rng.integers(1, 4, size=2)
        a1, b1 = _crandn(rng, (d * (n + 1),) * 2), _crandn(rng, (d * (n + 1),) * 2)
        a2, b2 = _crandn(rng, (e * (n + 1),) * 2), _crandn(rng, (e * (n + 1),) * 2)
        big_a = np.block([[a1, np.zeros((a1.shape[0], a2.shape[1]))], [np.zeros((a2.shape[0], a1.shape[1])), a2]])
        big_b = np.block([[b1, np.zeros((b1.shape[0], b2.shape[1]))], [np.zeros((b2.shape[0], b1.shape[1])), b2]])
        lhs = bridge.pivot_defect(big_a, big_b, n, xs)
        rhs = max(bridge.pivot_defect(a1, b1, n, xs), bridge.pivot_defect(a2, b2, n, xs))
        worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
    return _result(worst, cfg.tolerances["direct_sum"], "relative max-law deviation")


def check_beta_gamma(cfg):
    rng = _rng(cfg, 11)
    xs = su2.haar_samples(rng, 5)
    worst = 0.0
    for k, n in _kn_pairs(cfg, 15):
        for x in xs:
            worst = max(worst, lipschitz.beta_gamma_identity_check(k, n, x))
    return _result(worst, cfg.tolerances["beta_gamma"], "residual")


def check_gamma_estimate(cfg):
    worst = 0.0
    for k, n in _kn_pairs(cfg, 8):
        if k == 0:
            continue
        kw = dict(starts=2, iterations=30, seed=cfg.seed)
        b = lipschitz.lip_projection_estimate(k, n, "beta", **kw).value
        g = lipschitz.lip_projection_estimate(k, n, "gamma", **kw).value
        worst = max(worst, abs(b - g))
    return _result(worst, cfg.tolerances["gamma_estimate"], "|beta - gamma| estimate gap")


def check_retraction(cfg):
    rng = _rng(cfg, 12)
    worst = 0.0
    for _ in range(10):
        X = _crandn(rng, (6, 6))
        c = (X + X.conj().T) / (2 * spectral_norm(X)) + 0.5 * np.eye(6)
        try:
            p = projcalc.nearest_projection(c)
        except Exception:
            continue
        worst = max(worst, spectral_norm(projcalc.nearest_projection(p) - p))
    return _result(worst, 1e-12, "||cut(cut(c)) - cut(c)||")


def check_path_rank(cfg):
    p0 = np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex)
    th = math.asin(0.6)
    R = np.eye(4, dtype=complex)
    R[:2, :2] = [[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]]
    path = projcalc.projection_path(p0, R @ p0 @ R.conj().T)
    ranks = path.ranks()
    return _result(float(np.ptp(ranks)), 1e-8, "trace variation")


CHECKS: dict = {
    "operator_core.submultiplicative": check_submultiplicative,
    "operator_core.kron_norm": check_kron_norm,
    "operator_core.resolvent_identity": check_resolvent_identity,
    "operator_core.projection_spectrum": check_projection_spectrum,
    "su2.casimir": check_casimir,
    "su2.lift_unitarity": check_lift_unitarity,
    "su2.length_conjugation": check_length_conjugation,
    "su2.weight_covariance": check_weight_covariance,
    "module_projection.idempotence": check_idempotence,
    "module_projection.trace": check_trace,
    "module_projection.equivariance": check_equivariance,
    "highest_weight.residual": check_highest_weight,
    "highest_weight.descended_norms": check_descended_norms,
    "clutching.determinant": check_clutching_det,
    "bridge.defect_law": check_defect_law,
    "bridge.decay": check_decay,
    "bridge.monotone": check_monotone,
    "bridge.x_independence": check_x_independence,
    "bridge.direct_sum": check_direct_sum,
    "lipschitz.beta_gamma_identity": check_beta_gamma,
    "lipschitz.beta_gamma_estimate": check_gamma_estimate,
    "projcalc.retraction": check_retraction,
    "projcalc.path_rank": check_path_rank,
}


def run_checks(cfg: SweepConfig):
    results = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
