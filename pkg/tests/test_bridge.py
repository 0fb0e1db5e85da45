import math
from fractions import Fraction

import numpy as np
import pytest

from fuzzysphere import bridge, modules, su2
from fuzzysphere.errors import ConfigError, DomainError
from fuzzysphere.operator_core import kron, spectral_norm


def test_defect_examples():
    rng = np.random.default_rng(0)
    for n in (1, 4, 7):
        inst = bridge.bridge_instance(0, n)
        for x in su2.haar_samples(rng, 3):
            assert bridge.defect_norm_at(inst, x) < 1e-12
    inst = bridge.bridge_instance(1, 3)
    vals = [bridge.defect_norm_at(inst, x) for x in su2.haar_samples(rng, 50)]
    assert max(vals) - min(vals) < 1e-8
    assert vals[0] == pytest.approx(0.5, abs=1e-12)


def test_defect_closed_examples():
    assert bridge.defect_norm_closed(2, 2) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert bridge.defect_norm_closed(-1, 1) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert bridge.defect_norm_closed(0, 7) == pytest.approx(0.0, abs=1e-12)


def brute_force_k_minus1_n1():
    """T in the basis e_a (x) f_b built by hand, without the package's highest weight code."""
    # the weight-0 copy of H^0 is the singlet (e0 f1 - e1 f0)/sqrt 2
    s = np.array([0, 1, -1, 0]) / math.sqrt(2)
    p = np.outer(s, s)
    Pk = np.diag([0.0, 1.0])  # lowest weight line of H^1
    Pn = np.diag([1.0, 0.0])  # highest weight line of H^1
    return np.kron(Pk, Pn) - np.kron(np.eye(2), Pn) @ p


def test_brute_force_oracle():
    T = brute_force_k_minus1_n1()
    assert spectral_norm(T) == pytest.approx(math.sqrt(2) / 2, abs=1e-14)
    assert spectral_norm(bridge.defect_operator(-1, 1) - T) < 1e-14


def test_analytic_ratio_examples():
    for n in range(1, 30):
        assert bridge.analytic_defect_ratio(-1, n) == Fraction(1, n + 1)
    for n in range(2, 30):
        assert bridge.analytic_defect_ratio(-2, n) == Fraction(2, n + 1)
    assert bridge.analytic_defect_ratio(-1, 1) == Fraction(1, 2)
    with pytest.raises(DomainError):
        bridge.analytic_defect_ratio(1, 3)
    with pytest.raises(DomainError):
        bridge.analytic_defect_ratio(-3, 2)


def test_ratio_general_formula():
    # an independent closed form: ratio = |k| / (n + 1)
    for k in range(-6, 0):
        for n in range(max(1, -k), 25):
            assert bridge.analytic_defect_ratio(k, n) == Fraction(-k, n + 1)


def test_analytic_defect_examples():
    assert bridge.analytic_defect(0, 5) == 0
    assert bridge.analytic_defect(1, 3) == pytest.approx(0.5)
    assert bridge.analytic_defect(4, 60) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        bridge.analytic_defect(-1, 3)


def test_negative_k_is_square_root_of_ratio():
    for k in (-1, -2, -3):
        for n in range(1 - k, 15):
            num = bridge.defect_norm_closed(k, n)
            ratio = float(bridge.analytic_defect_ratio(k, n))
            assert num ** 2 == pytest.approx(ratio, abs=1e-12)
            assert abs(num - ratio) > 1e-3  # the ratio itself is not the norm


def test_nhat_examples():
    inst = bridge.bridge_instance(2, 3)
    val = bridge.nhat(inst.sphere_field, inst.projection.matrix, inst)
    assert val.value == pytest.approx(bridge.defect_norm_closed(2, 3)) and not val.lower_bound
    I = np.eye(inst.dim)
    assert bridge.nhat(I, I, inst).value < 1e-12
    Z = np.zeros((inst.dim, inst.dim))
    assert bridge.nhat(Z, Z, inst).value == 0
    # the sampled path agrees with the closed form on the concrete pair
    field = inst.sphere_field
    sampled = bridge.nhat(lambda x: kron(field(x), np.eye(4)), inst.projection.matrix, inst, samples=10)
    assert sampled.value == pytest.approx(val.value, abs=1e-10)


def test_direct_sum_max_law():
    rng = np.random.default_rng(3)
    n = 2
    xs = su2.haar_samples(rng, 4)
    a1 = rng.standard_normal((3, 3)); b1 = rng.standard_normal((3, 3))
    a2 = rng.standard_normal((6, 6)); b2 = rng.standard_normal((6, 6))
    A = np.zeros((9, 9)); B = np.zeros((9, 9))
    A[:3, :3], A[3:, 3:], B[:3, :3], B[3:, 3:] = a1, a2, b1, b2
    lhs = bridge.pivot_defect(A, B, n, xs)
    rhs = max(bridge.pivot_defect(a1, b1, n, xs), bridge.pivot_defect(a2, b2, n, xs))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_combined_seminorm():
    assert bridge.combined_seminorm(0.3, 0.4, 0.5, 1) == 0.5
    assert bridge.combined_seminorm(0, 0, 0, 2.0) == 0
    with pytest.raises(DomainError):
        bridge.combined_seminorm(0, 0, 0, 0)


def test_decision_quantity():
    with pytest.raises(ConfigError):
        bridge.decision_quantity(1, 3, bridge.BridgeBounds(None, None, "placeholder"), 0, 0)
    d = bridge.decision_quantity(1, 3, bridge.BridgeBounds.placeholder(), 0.0, 0.0)
    assert d.value == pytest.approx(1.0) and d.defect == pytest.approx(0.5) and not d.passes
    d = bridge.decision_quantity(1, 60, bridge.BridgeBounds(0.1, 0.1, "config-supplied"), 0.0, 0.0)
    assert d.passes


def test_inequality_evaluators():
    assert bridge.quotient_inequality_check(1, 1, 5, 5).holds
    chk = bridge.quotient_inequality_check(2, 1, 0.5, 2)
    assert chk.holds and chk.slack == 0
    assert not bridge.quotient_inequality_check(2, 1, 0.1, 2).holds
    assert bridge.key_lemma_check(1, 1, 0.3, 0.2, 0).holds
    chk = bridge.key_lemma_check(1.5, 1, 0.25, 0.25, 1)
    assert chk.holds and chk.slack == 0
    assert not bridge.key_lemma_check(2, 1, 0.1, 0.1, 1).holds
