"""Physical parameters, diffusion coefficients and the named presets.

Everything here is an immutable value object.  Validation of the
diffusion-coefficient constraints is report-only (``validate``); the
oscillator itself rejects overdamped parameters at construction.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field


class ParameterError(ValueError):
    """Invalid physical parameters at construction time."""


class InvalidStateError(ValueError):
    """A Gaussian state that violates the uncertainty relation."""


class ConsistencyError(RuntimeError):
    """Internal numerical consistency check failed (e.g. imaginary residue)."""


@dataclass(frozen=True)
class UnitSystem:
    """Unit constants: reduced Planck constant and Boltzmann constant."""

    hbar: float = 1.0
    boltzmann: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ParameterError(f"hbar must be > 0, got {self.hbar}")
        if not self.boltzmann > 0:
            raise ParameterError(f"boltzmann must be > 0, got {self.boltzmann}")


@dataclass(frozen=True)
class OscillatorSpec:
    """Damped oscillator parameters: mass, frequency, friction and the
    mixing rate ``mu`` entering the Hamiltonian's symmetrized q-p term.

    Only the underdamped regime ``omega > |mu|`` is supported; the shifted
    frequency ``big_omega = sqrt(omega**2 - mu**2)`` is exposed as a property.
    """

    mass: float
    omega: float
    lam: float
    mu: float = 0.0
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        if not self.mass > 0:
            raise ParameterError(f"mass must be > 0, got {self.mass}")
        if not self.omega > 0:
            raise ParameterError(f"omega must be > 0, got {self.omega}")
        if not self.lam >= 0:
            raise ParameterError(f"lam must be >= 0, got {self.lam}")
        if not self.omega > abs(self.mu):
            raise ParameterError(
                f"underdamped regime required: omega={self.omega} must exceed "
                f"|mu|={abs(self.mu)}"
            )
        if self.lam >= self.omega:
            warnings.warn(
                f"weak-coupling assumption strained: lam={self.lam} >= "
                f"omega={self.omega}",
                stacklevel=3,
            )

    @property
    def big_omega(self) -> float:
        return math.sqrt(self.omega**2 - self.mu**2)

    @property
    def hbar(self) -> float:
        return self.units.hbar

    @property
    def boltzmann(self) -> float:
        return self.units.boltzmann


@dataclass(frozen=True)
class LindbladOps:
    """Environment operators, each a linear combination ``a*p + b*q``.

    At most two linearly independent such operators exist.
    """

    ops: tuple[tuple[complex, complex], ...]

    def __post_init__(self):
        if not 1 <= len(self.ops) <= 2:
            raise ParameterError(
                f"between 1 and 2 operators required, got {len(self.ops)}"
            )
        object.__setattr__(
            self, "ops", tuple((complex(a), complex(b)) for a, b in self.ops)
        )


@dataclass(frozen=True)
class DiffusionSpec:
    """Momentum/position diffusion coefficients of the environment.

    Construction is unchecked; use :func:`validate` for the constraint report.
    """

    d_qq: float
    d_pp: float
    d_pq: float = 0.0


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool
    margin: float


@dataclass(frozen=True)
class ConstraintReport:
    checks: tuple[ConstraintCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def margin(self, name: str) -> float:
        for c in self.checks:
            if c.name == name:
                return c.margin
        raise KeyError(name)

    def failed(self) -> list[ConstraintCheck]:
        return [c for c in self.checks if not c.passed]


# Relative tolerance absorbing rounding in presets that saturate the
# determinant inequality.
_DET_RTOL = 1e-12


def determinant_margin(diff: DiffusionSpec, lam: float, hbar: float) -> float:
    """d_pp*d_qq - d_pq**2 - (lam*hbar/2)**2; >= 0 for admissible coefficients."""
    return diff.d_pp * diff.d_qq - diff.d_pq**2 - (lam * hbar) ** 2 / 4


def validate(diff: DiffusionSpec, osc: OscillatorSpec) -> ConstraintReport:
    """Check the three admissibility constraints on the diffusion coefficients."""
    det = determinant_margin(diff, osc.lam, osc.hbar)
    scale = max(
        abs(diff.d_pp * diff.d_qq), diff.d_pq**2, (osc.lam * osc.hbar) ** 2 / 4
    )
    checks = (
        ConstraintCheck("d_pp_positive", diff.d_pp > 0, diff.d_pp),
        ConstraintCheck("d_qq_positive", diff.d_qq > 0, diff.d_qq),
        ConstraintCheck("determinant", det >= -_DET_RTOL * scale, det),
    )
    return ConstraintReport(checks)


def coefficients_from_ops(
    ops: LindbladOps, units: UnitSystem | None = None
) -> tuple[DiffusionSpec, float]:
    """Diffusion coefficients and friction rate induced by the environment
    operators.  The determinant constraint holds automatically
    (Cauchy-Schwarz) and is asserted numerically.
    """
    units = units or UnitSystem()
    hbar = units.hbar
    d_qq = hbar / 2 * sum(abs(a) ** 2 for a, _ in ops.ops)
    d_pp = hbar / 2 * sum(abs(b) ** 2 for _, b in ops.ops)
    cross = sum(a.conjugate() * b for a, b in ops.ops)
    d_pq = -hbar / 2 * cross.real
    lam = -cross.imag
    diff = DiffusionSpec(d_qq=d_qq, d_pp=d_pp, d_pq=d_pq)
    det = determinant_margin(diff, lam, hbar)
    scale = max(d_pp * d_qq, d_pq**2, (lam * hbar) ** 2 / 4, 1e-300)
    if det < -1e-10 * scale:
        raise ConsistencyError(
            f"determinant constraint violated beyond rounding: margin={det}"
        )
    return diff, lam


def preset_gibbs(osc: OscillatorSpec, temperature: float) -> DiffusionSpec:
    """Coefficients driving the oscillator to a thermal (Gibbs) state at the
    given bath temperature.  Requires lam > |mu|.
    """
    if not temperature > 0:
        raise ParameterError(f"temperature must be > 0, got {temperature}")
    if not osc.lam > abs(osc.mu):
        raise ParameterError(
            f"thermal preset requires lam > |mu| (lam={osc.lam}, mu={osc.mu})"
        )
    hbar, k = osc.hbar, osc.boltzmann
    c = 1.0 / math.tanh(hbar * osc.omega / (2 * k * temperature))
    return DiffusionSpec(
        d_qq=(osc.lam - osc.mu) / 2 * hbar / (osc.mass * osc.omega) * c,
        d_pp=(osc.lam + osc.mu) / 2 * hbar * osc.mass * osc.omega * c,
        d_pq=0.0,
    )


def preset_pure_state(osc: OscillatorSpec) -> DiffusionSpec:
    """Purity-preserving coefficients (generalized Einstein relations).

    These saturate the determinant constraint exactly: the margin is zero up
    to rounding.
    """
    hbar = osc.hbar
    big = osc.big_omega
    return DiffusionSpec(
        d_qq=hbar * osc.lam / (2 * osc.mass * big),
        d_pp=hbar * osc.lam * osc.mass * osc.omega**2 / (2 * big),
        d_pq=-hbar * osc.lam * osc.mu / (2 * big),
    )


def pure_state_op(osc: OscillatorSpec) -> LindbladOps:
    """The single environment operator realizing the purity-preserving
    coefficients (fixed phase convention)."""
    diff = preset_pure_state(osc)
    hbar = osc.hbar
    if diff.d_qq <= 0:
        raise ParameterError("pure-state operator undefined for lam = 0")
    root = cmath.sqrt(2 / (hbar * diff.d_qq))
    a = root * 1j * diff.d_qq
    b = root * (osc.lam * hbar / 2 - 1j * diff.d_pq)
    return LindbladOps(ops=((a, b),))
