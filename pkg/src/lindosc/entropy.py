"""Scalar diagnostics of a Gaussian state.

von Neumann entropy, effective temperature, Wehrl entropy (closed form and
quadrature oracle), linear entropy and its near-pure production rate, the
uncertainty-entropy bound and the fluctuation energy.  The 0*ln(0) := 0
convention applies throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import DiffusionSpec, InvalidStateError, OscillatorSpec, ParameterError
from .phasespace import CoherentWindow, husimi_grid, smoothed_covariance_det
from .propagator import GaussianState


@dataclass(frozen=True)
class DerivedScalars:
    """Scalar diagnostics attached to one trajectory sample."""

    sigma_det: float
    nu: float
    s_vn: float
    gamma: float
    s_lin: float
    wehrl: float
    energy: float
    t_eff: float | None = None
    s_lin_rate: float | None = None


def occupation_nu(state: GaussianState, hbar: float = 1.0) -> float:
    """Effective occupation number: sqrt(sigma)/hbar - 1/2."""
    det = state.uncertainty_det
    floor = hbar**2 / 4
    if det < floor * (1 - 1e-10):
        raise InvalidStateError(
            f"uncertainty determinant {det} below hbar^2/4={floor}"
        )
    return max(0.0, math.sqrt(det) / hbar - 0.5)


def von_neumann_entropy(state: GaussianState, hbar: float = 1.0) -> float:
    """(nu+1)ln(nu+1) - nu*ln(nu); zero exactly for minimum-uncertainty states."""
    nu = occupation_nu(state, hbar)
    if nu == 0.0:
        return 0.0
    return (nu + 1) * math.log(nu + 1) - nu * math.log(nu)


def effective_temperature(osc: OscillatorSpec, state: GaussianState) -> float:
    """Temperature of the thermal state with the same occupation number.

    Returns 0 (with a warning) for minimum-uncertainty states; meaningful
    primarily in a thermal-bath context.
    """
    nu = occupation_nu(state, osc.hbar)
    if nu == 0.0:
        warnings.warn("effective temperature of a pure state returned as 0")
        return 0.0
    return osc.hbar * osc.omega / (osc.boltzmann * (math.log(nu + 1) - math.log(nu)))


def entropy_from_temperature(osc: OscillatorSpec, t_eff: float) -> float:
    """von Neumann entropy re-expressed through the effective temperature."""
    if t_eff <= 0:
        return 0.0
    x = osc.hbar * osc.omega / (osc.boltzmann * t_eff)
    return x / (math.exp(x) - 1) - math.log(1 - math.exp(-x))


def wehrl_entropy_closed(
    state: GaussianState, window: CoherentWindow, hbar: float = 1.0
) -> float:
    """Closed-form Wehrl entropy of the Gaussian smoothed distribution:
    1 + ln(sqrt(det) / hbar) with det the smoothed covariance determinant."""
    det = smoothed_covariance_det(state, window)
    return 1.0 + 0.5 * math.log(det / hbar**2)


def wehrl_entropy_quadrature(
    state: GaussianState,
    window: CoherentWindow,
    hbar: float = 1.0,
    n: int = 512,
    width_sigmas: float = 8.0,
) -> float:
    """Trapezoid quadrature of -integral (dq dp / 2 pi hbar) Q ln Q."""
    if width_sigmas < 8.0:
        raise ParameterError("quadrature box must cover at least 8 sigmas")
    grid = husimi_grid(state, window, n_q=n, n_p=n, width_sigmas=width_sigmas)
    q_vals = grid.values
    integrand = np.where(q_vals > 0, -q_vals * np.log(np.where(q_vals > 0, q_vals, 1.0)), 0.0)
    total = np.trapezoid(np.trapezoid(integrand, grid.p_axis, axis=1), grid.q_axis)
    return float(total / (2 * math.pi * hbar))


def minimized_uncertainty_bound(state: GaussianState, hbar: float = 1.0) -> float:
    """Slack of the window-minimized uncertainty-entropy inequality:
    (sqrt(sigma_qq*sigma_pp) + hbar/2)**2 - sigma_pq**2 - hbar**2 e^{2(S-1)}.
    Non-negative for every physical Gaussian state."""
    s = von_neumann_entropy(state, hbar)
    lhs = (math.sqrt(state.sigma_qq * state.sigma_pp) + hbar / 2) ** 2 - state.sigma_pq**2
    return lhs - hbar**2 * math.exp(2 * (s - 1))


def purity_gamma(state: GaussianState, hbar: float = 1.0) -> float:
    """Purity Tr rho^2 = hbar / (2 sqrt(sigma)) for a Gaussian state."""
    occupation_nu(state, hbar)  # validates the uncertainty bound
    return min(1.0, hbar / (2 * math.sqrt(state.uncertainty_det)))


def linear_entropy(state: GaussianState, hbar: float = 1.0) -> float:
    """1 - Tr rho^2, in [0, 1)."""
    return 1.0 - purity_gamma(state, hbar)


def linear_entropy_rate(
    osc: OscillatorSpec, diff: DiffusionSpec, state: GaussianState
) -> float:
    """Linear-entropy production rate in the near-pure regime:
    (4/hbar^2)(D_pp s_qq + D_qq s_pp - 2 D_pq s_pq - hbar^2 lam / 2).

    Computable for any state; the identification with d(1 - gamma)/dt is
    only claimed near purity.
    """
    hbar = osc.hbar
    return (
        4
        / hbar**2
        * (
            diff.d_pp * state.sigma_qq
            + diff.d_qq * state.sigma_pp
            - 2 * diff.d_pq * state.sigma_pq
            - hbar**2 * osc.lam / 2
        )
    )


def fluctuation_energy(osc: OscillatorSpec, state: GaussianState) -> float:
    """sigma_pp / 2m + m omega^2 sigma_qq / 2 + mu sigma_pq."""
    return (
        state.sigma_pp / (2 * osc.mass)
        + osc.mass * osc.omega**2 * state.sigma_qq / 2
        + osc.mu * state.sigma_pq
    )


def derived_scalars(
    osc: OscillatorSpec,
    state: GaussianState,
    diff: DiffusionSpec | None = None,
    window: CoherentWindow | None = None,
    thermal_temperature: float | None = None,
) -> DerivedScalars:
    """Bundle of all scalar diagnostics for one state.

    t_eff is populated only in a thermal-bath context (thermal_temperature
    given); the rate needs the diffusion coefficients.
    """
    hbar = osc.hbar
    window = window or CoherentWindow.matched(osc)
    nu = occupation_nu(state, hbar)
    t_eff = None
    if thermal_temperature is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t_eff = effective_temperature(osc, state)
    return DerivedScalars(
        sigma_det=state.uncertainty_det,
        nu=nu,
        s_vn=von_neumann_entropy(state, hbar),
        gamma=purity_gamma(state, hbar),
        s_lin=linear_entropy(state, hbar),
        wehrl=wehrl_entropy_closed(state, window, hbar),
        energy=fluctuation_energy(osc, state),
        t_eff=t_eff,
        s_lin_rate=None if diff is None else linear_entropy_rate(osc, diff, state),
    )
