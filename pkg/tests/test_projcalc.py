import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fuzzysphere import projcalc as pc
from fuzzysphere.errors import NoPathError, PreconditionError, SingularityError
from fuzzysphere.lipschitz import SharedWitnessSeminorm
from fuzzysphere.modules import module_projection
from fuzzysphere.operator_core import Contour, spectral_norm


def rotated(dim, s, rank=1):
    p0 = np.diag([1.0] * rank + [0.0] * (dim - rank)).astype(complex)
    th = math.asin(s)
    R = np.eye(dim, dtype=complex)
    i, j = rank - 1, rank
    R[[i, i, j, j], [i, j, i, j]] = [math.cos(th), -math.sin(th), math.sin(th), math.cos(th)]
    return p0, R @ p0 @ R.conj().T


def assert_valid_path(path):
    for p in path.path:
        assert spectral_norm(p @ p - p) < 1e-9
        assert spectral_norm(p - p.conj().T) < 1e-9
    assert spectral_norm(path.path[0] - path.p0) < 1e-10
    assert spectral_norm(path.path[-1] - path.p1) < 1e-10
    steps = np.diff(path.t_grid)
    for a, b, h in zip(path.path, path.path[1:], steps):
        assert spectral_norm(b - a) <= 2 * h / (1 - path.delta) + 1e-8
    assert np.ptp(path.ranks()) < 1e-8


def test_nearest_projection_examples():
    p, _ = rotated(4, 0.3, rank=2)
    assert spectral_norm(pc.nearest_projection(p) - p) < 1e-12
    assert np.allclose(pc.nearest_projection(np.diag([0.9, 0.1])), np.diag([1, 0]))
    rng = np.random.default_rng(0)
    p = np.diag([1.0] * 4 + [0.0] * 7)
    X = rng.standard_normal((11, 11))
    X = (X + X.T) / (2 * spectral_norm(X))
    q = pc.nearest_projection(p + 0.2 * X)
    assert round(np.trace(q).real) == 4


def test_nearest_projection_gap_error():
    with pytest.raises(SingularityError) as info:
        pc.nearest_projection(np.diag([0.5, 1.0]))
    assert info.value.eigenvalue == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        pc.nearest_projection(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_nearest_projection_is_retraction(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    c = (X + X.conj().T) / 4
    try:
        p = pc.nearest_projection(c)
    except SingularityError:
        return
    assert spectral_norm(pc.nearest_projection(p) - p) < 1e-12


def test_path_examples():
    p0, _ = rotated(3, 0.5)
    const = pc.projection_path(p0, p0)
    assert const.delta == 0 and const.max_step() == 0
    p0, p1 = rotated(2, 0.5)
    path = pc.projection_path(p0, p1)
    assert path.delta == pytest.approx(0.5, abs=1e-12)
    assert_valid_path(path)
    with pytest.raises(NoPathError) as info:
        pc.projection_path(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert info.value.delta == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8), st.floats(0.0, 0.9))
def test_path_invariants(dim, s):
    p0, p1 = rotated(dim, s, rank=1 + dim // 3)
    assert_valid_path(pc.projection_path(p0, p1, np.linspace(0, 1, 21)))


def test_concatenation():
    p0, p1 = rotated(4, 0.4)
    _, p2 = rotated(4, 0.7)
    a, b = pc.projection_path(p0, p1), pc.projection_path(p1, p2)
    joined = pc.concatenate_paths(a, b)
    assert len(joined) == len(a) + len(b) - 1
    assert joined.t_grid[0] == 0 and joined.t_grid[-1] == 1
    assert np.all(np.diff(joined.t_grid) > 0)
    assert spectral_norm(joined.path[0] - p0) < 1e-10 and spectral_norm(joined.path[-1] - p2) < 1e-10
    with pytest.raises(PreconditionError):
        pc.concatenate_paths(b, a)


@pytest.mark.parametrize("s", [0.0, 0.5, 0.9])
def test_path_seminorm_profile(s):
    L = SharedWitnessSeminorm.sampled(1, count=32)
    p0, p1 = rotated(2, s)
    prof = pc.path_seminorm_profile(pc.projection_path(p0, p1), L)
    assert prof.holds
    if s == 0:
        assert np.ptp(prof.values) == 0


def test_homotopy_decision_examples():
    d = pc.homotopy_decision(0, 0, 7, 9)
    assert d.delta == 0 and d.verdict is pc.Verdict.GUARANTEED
    d = pc.homotopy_decision(0.5, 0.1, 2, 2)
    assert d.delta == pytest.approx(0.9) and d.verdict is pc.Verdict.GUARANTEED
    d = pc.homotopy_decision(0.5, 0.2, 2, 2)
    assert d.delta == pytest.approx(1.3) and d.verdict is pc.Verdict.NOT_GUARANTEED
    assert pc.bridge_homotopy_decision(0.1, 0.1, 1.0).verdict is pc.Verdict.GUARANTEED
    assert pc.bridge_homotopy_decision(1, 1, 1.0).verdict is pc.Verdict.NOT_GUARANTEED
    with pytest.raises(PreconditionError):
        pc.homotopy_decision(-1, 0, 0, 0)


def test_holo_bound_examples():
    L = SharedWitnessSeminorm.sampled(2, count=16)
    rng = np.random.default_rng(2)
    X = rng.standard_normal((3, 3))
    c = (X + X.T) / 2
    R = spectral_norm(c) + 1
    chk = pc.holo_seminorm_bound_check(c, 1.0, Contour(0.0, R), L)
    assert chk.holds and chk.left < 1e-8
    chk = pc.holo_seminorm_bound_check(2.0 * np.eye(3), 1.0, Contour(2.0, 0.5), L)
    assert chk.left < 1e-12 and chk.right < 1e-12 and chk.holds
    P = module_projection(1, 2).matrix
    L6 = SharedWitnessSeminorm.sampled(2, count=16)
    chk = pc.holo_seminorm_bound_check(P, 1.0, Contour(1.0, 0.5), L6)
    assert chk.holds and spectral_norm(chk.theta_c - P) < 1e-8
