import math

import numpy as np
import pytest

from lindosc import (
    DiffusionSpec,
    LindbladOps,
    OscillatorSpec,
    ParameterError,
    UnitSystem,
    coefficients_from_ops,
    preset_gibbs,
    preset_pure_state,
    validate,
)
from lindosc.model import determinant_margin, pure_state_op

from conftest import random_oscillator


def test_unit_system_defaults_and_positivity():
    units = UnitSystem()
    assert units.hbar == 1.0 and units.boltzmann == 1.0
    with pytest.raises(ParameterError):
        UnitSystem(hbar=0.0)
    with pytest.raises(ParameterError):
        UnitSystem(boltzmann=-1.0)


def test_overdamped_rejected():
    with pytest.raises(ParameterError, match="underdamped"):
        OscillatorSpec(mass=1, omega=1, lam=0.1, mu=1.5)
    with pytest.raises(ParameterError, match="underdamped"):
        OscillatorSpec(mass=1, omega=1, lam=0.1, mu=-1.0)


def test_big_omega():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.1, mu=0.6)
    assert osc.big_omega == pytest.approx(math.sqrt(1 - 0.36), rel=1e-15)


def test_strong_coupling_warns():
    with pytest.warns(UserWarning, match="weak-coupling"):
        OscillatorSpec(mass=1, omega=1, lam=1.5, mu=0.0)


def test_lindblad_ops_count():
    with pytest.raises(ParameterError):
        LindbladOps(ops=())
    with pytest.raises(ParameterError):
        LindbladOps(ops=((1, 0), (0, 1), (1, 1)))


def test_coefficients_zero_ops():
    diff, lam = coefficients_from_ops(LindbladOps(ops=((0, 0),)))
    assert diff == DiffusionSpec(0.0, 0.0, 0.0)
    assert lam == 0.0
    report = validate(diff, OscillatorSpec(mass=1, omega=1, lam=0.0))
    assert not report.all_passed
    failed = {c.name for c in report.failed()}
    assert {"d_pp_positive", "d_qq_positive"} <= failed


def test_coefficients_brownian_single_op():
    # single operator (2D)^{-1/2}(q + 2i gamma D p / hbar) with D = hbar^2/(8 m gamma k T)
    gamma, temp, m = 0.1, 2.0, 1.0
    d = 1.0 / (8 * m * gamma * temp)
    a = 2j * gamma * d / math.sqrt(2 * d)
    b = 1.0 / math.sqrt(2 * d)
    diff, lam = coefficients_from_ops(LindbladOps(ops=((a, b),)))
    assert lam == pytest.approx(gamma, rel=1e-14)
    # expand |a|^2, |b|^2 by hand: D_qq = gamma^2 D, D_pp = 1/(4D) = 2 m gamma k T
    assert diff.d_qq == pytest.approx(gamma**2 * d, rel=1e-14)
    assert diff.d_pp == pytest.approx(2 * m * gamma * temp, rel=1e-14)
    assert diff.d_pq == pytest.approx(0.0, abs=1e-16)
    # this operator saturates the determinant constraint
    margin = determinant_margin(diff, lam, 1.0)
    assert abs(margin) < 1e-14 * diff.d_pp * diff.d_qq


def test_coefficients_pure_state_op_roundtrip():
    osc = OscillatorSpec(mass=1.3, omega=1.1, lam=0.2, mu=0.3)
    ops = pure_state_op(osc)
    diff, lam = coefficients_from_ops(ops, osc.units)
    preset = preset_pure_state(osc)
    assert lam == pytest.approx(osc.lam, rel=1e-12)
    assert diff.d_qq == pytest.approx(preset.d_qq, rel=1e-12)
    assert diff.d_pp == pytest.approx(preset.d_pp, rel=1e-12)
    assert diff.d_pq == pytest.approx(preset.d_pq, rel=1e-12)
    # [V, V+] = i hbar (a* b - a b*) = 2 hbar lambda
    (a, b), = ops.ops
    comm = 1j * osc.hbar * (a.conjugate() * b - a * b.conjugate())
    assert comm.imag == pytest.approx(0.0, abs=1e-14)
    assert comm.real == pytest.approx(2 * osc.hbar * osc.lam, rel=1e-12)


def test_coefficients_random_ops_satisfy_determinant(rng):
    for _ in range(1000):
        n_ops = rng.integers(1, 3)
        ops = LindbladOps(
            ops=tuple(
                (complex(*rng.standard_normal(2) * 3), complex(*rng.standard_normal(2) * 3))
                for _ in range(n_ops)
            )
        )
        diff, lam = coefficients_from_ops(ops)
        scale = max(diff.d_pp * diff.d_qq, (lam / 2) ** 2, 1e-30)
        assert determinant_margin(diff, lam, 1.0) >= -1e-12 * scale


def test_validate_gibbs_passes():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.2, mu=0.1)
    diff = preset_gibbs(osc, temperature=1.0)
    assert validate(diff, osc).all_passed


def test_validate_determinant_failure():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.1)
    d = osc.hbar * osc.lam / 2 * 0.9
    report = validate(DiffusionSpec(d_qq=d, d_pp=d, d_pq=0.0), osc)
    assert not report.all_passed
    assert report.margin("determinant") < 0


def test_preset_gibbs_limits():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.2, mu=0.0)
    hot = preset_gibbs(osc, temperature=1e6)
    coth = 1 / math.tanh(5e-7)
    assert hot.d_pp == pytest.approx(0.1 * coth, rel=1e-12)
    assert hot.d_qq == pytest.approx(0.1 * coth, rel=1e-12)
    assert hot.d_pq == 0.0
    cold = preset_gibbs(osc, temperature=1e-6)
    assert cold.d_pp == pytest.approx(osc.lam * 0.5, rel=1e-12)
    assert cold.d_qq == pytest.approx(osc.lam * 0.5, rel=1e-12)


def test_preset_gibbs_rejects_weak_friction():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.1, mu=0.2)
    with pytest.raises(ParameterError, match=r"lam > \|mu\|"):
        preset_gibbs(osc, temperature=1.0)
    with pytest.raises(ParameterError):
        preset_gibbs(OscillatorSpec(mass=1, omega=1, lam=0.2, mu=0.1), temperature=0.0)


def test_preset_gibbs_variance_ratio(rng):
    for _ in range(50):
        osc = OscillatorSpec(
            mass=rng.uniform(0.3, 3.0), omega=rng.uniform(0.3, 3.0),
            lam=rng.uniform(0.05, 0.3), mu=0.0,
        )
        temp = 10 ** rng.uniform(-2, 2)
        diff = preset_gibbs(osc, temp)
        assert diff.d_pp / diff.d_qq == pytest.approx((osc.mass * osc.omega) ** 2, rel=1e-12)


def test_preset_pure_state_values():
    osc = OscillatorSpec(mass=1, omega=1, lam=0.1, mu=0.0)
    diff = preset_pure_state(osc)
    assert diff.d_qq == pytest.approx(0.05, rel=1e-15)
    assert diff.d_pp == pytest.approx(0.05, rel=1e-15)
    assert diff.d_pq == 0.0


def test_preset_pure_state_saturates_determinant(rng):
    for _ in range(1000):
        osc = random_oscillator(rng, lam_range=(0.01, 0.5), mu_frac=0.9)
        diff = preset_pure_state(osc)
        margin = determinant_margin(diff, osc.lam, osc.hbar)
        assert abs(margin) <= 1e-14 * diff.d_pp * diff.d_qq
