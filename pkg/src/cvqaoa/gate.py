"""CV-QAOA gate for the quadratic cost f(x) = (x - a)^2.

Three routes to the same output quadrature:

* ``apply_ideal``: noiseless cost+mixer map (infinite squeezing).
* ``apply_noisy`` / ``apply_symplectic``: the same map plus the finite-squeezing
  ancilla term.
* ``simulate_circuit``: beam splitter, two homodyne detectors and classical
  feedforward, driven by ``settings_from``.

All functions broadcast over numpy arrays of quadrature samples.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadraturePair


class SingularMapError(ValueError):
    pass


@dataclass(frozen=True)
class GateParams:
    eta: float
    gamma: float
    a: float = 0.0

    def __post_init__(self):
        if not (self.eta > 0 and self.gamma > 0):
            raise ValueError(f"eta and gamma must be positive, got ({self.eta}, {self.gamma})")
        if not math.isfinite(self.a):
            raise ValueError("a must be finite")

    @classmethod
    def unchecked(cls, eta: float, gamma: float, a: float = 0.0) -> GateParams:
        """Build params without the positivity check (limits such as eta=0)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "eta", float(eta))
        object.__setattr__(obj, "gamma", float(gamma))
        object.__setattr__(obj, "a", float(a))
        return obj

    @property
    def matrix(self) -> np.ndarray:
        e, g = self.eta, self.gamma
        return np.array([[1.0 - 2.0 * e * g, g], [-2.0 * e, 1.0]])

    @property
    def displacement(self) -> np.ndarray:
        return np.array([2.0 * self.a * self.eta * self.gamma, 2.0 * self.a * self.eta])


@dataclass(frozen=True)
class CircuitSettings:
    transmissivity: float
    theta: float
    phi: float
    gain: float
    x_d: float


@dataclass(frozen=True)
class GateOutcome:
    x1_theta: float | np.ndarray
    x2_phi: float | np.ndarray
    x_out: float | np.ndarray


def settings_from(params: GateParams) -> CircuitSettings:
    """Optical settings (T, theta, phi, g, x_d) that realize ``params``."""
    e, g = params.eta, params.gamma
    T = 1.0 / (1.0 + g * g)
    # atan2 with a positive first argument already lands in (0, pi); a zero
    # denominator gives exactly pi/2.
    theta = math.atan2(g * g, g - 2.0 * e * (1.0 + g * g))
    phi = math.atan(g)
    gain = math.sqrt((g - 2.0 * e) ** 2 + 4.0 * e * e * g * g)
    return CircuitSettings(T, theta, phi, gain, 2.0 * params.a * e * g)


def apply_ideal(params: GateParams, inp: QuadraturePair):
    e, g = params.eta, params.gamma
    return (1.0 - 2.0 * e * g) * inp.x + g * inp.p + 2.0 * params.a * e * g


def apply_noisy(params: GateParams, inp: QuadraturePair, ancilla_x):
    return apply_ideal(params, inp) - 2.0 * params.eta * ancilla_x


def apply_symplectic(params: GateParams, inp: QuadraturePair, ancilla_x) -> QuadraturePair:
    """Full two-quadrature output including the ancilla noise in both rows."""
    e, g = params.eta, params.gamma
    if g == 0:
        raise SingularMapError("gamma = 0: the momentum noise coefficient diverges")
    x_out = apply_noisy(params, inp, ancilla_x)
    p_out = -2.0 * e * inp.x + inp.p + 2.0 * params.a * e + (g - 2.0 * e) / g * ancilla_x
    return QuadraturePair(x_out, p_out)


def apply_chain(steps: Sequence[GateParams], inp: QuadraturePair, ancillas: Sequence) -> QuadraturePair:
    """Apply P gate layers in order, one ancilla x-quadrature per layer."""
    if len(steps) != len(ancillas):
        raise ValueError("need exactly one ancilla value per step")
    if steps and len({s.a for s in steps}) > 1:
        raise ValueError("all steps must share the same cost constant a")
    state = inp
    for params, anc in zip(steps, ancillas):
        state = apply_symplectic(params, state, anc)
    return state


def _rotate(x, p, angle: float):
    c, s = math.cos(angle), math.sin(angle)
    return x * c + p * s, -x * s + p * c


def simulate_circuit(settings: CircuitSettings, inp: QuadraturePair, ancilla: QuadraturePair) -> GateOutcome:
    """Measurement-induced gate: beam splitter, homodyne at theta/phi, feedforward."""
    t = math.sqrt(settings.transmissivity)
    r = math.sqrt(1.0 - settings.transmissivity)
    x1 = r * inp.x + t * ancilla.x
    p1 = r * inp.p + t * ancilla.p
    x2 = t * inp.x - r * ancilla.x
    p2 = t * inp.p - r * ancilla.p
    x1_theta, _ = _rotate(x1, p1, settings.theta)
    x2_phi, _ = _rotate(x2, p2, settings.phi)
    x_out = x2_phi + settings.gain * x1_theta + settings.x_d
    return GateOutcome(x1_theta, x2_phi, x_out)


def cost_value(a, x):
    return (x - a) ** 2
