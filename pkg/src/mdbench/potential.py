"""Lennard-Jones pair potential, bare or cutoff-with-energy-shift.

The shifted form subtracts the bare potential's value at the cutoff so the
pair energy goes to zero continuously at r_cut:

    u(r) = 4 eps [ (sigma/r)^12 - (sigma/r)^6 ] + energy_shift   for r < r_cut
    u(r) = 0                                                     for r >= r_cut

Forces are untouched by the shift. force_over_r is the scalar
24 eps (2 (sigma/r)^12 - (sigma/r)^6) / r^2; multiplying it by the
displacement vector gives the force on particle i from j, positive values
meaning repulsion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LJParams:
    epsilon: float
    sigma: float
    r_cut: float
    energy_shift: float

    def __post_init__(self):
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be positive and finite")
        if math.isfinite(self.r_cut) and self.r_cut <= self.sigma:
            raise ValueError("finite r_cut must exceed sigma")

    @property
    def truncated(self) -> bool:
        return math.isfinite(self.r_cut)

    @property
    def r_cut_sq(self) -> float:
        return self.r_cut * self.r_cut


def _bare_energy(r_squared, epsilon, sigma):
    s2 = (sigma * sigma) / r_squared
    s6 = s2 * s2 * s2
    return 4.0 * epsilon * (s6 * s6 - s6)


def make_shifted(epsilon: float, sigma: float,
                 r_cut: float = math.inf) -> LJParams:
    """Build LJ parameters whose energy_shift zeroes u exactly at r_cut.

    An infinite r_cut gives the bare potential (shift 0). The shift scales
    linearly in epsilon and is positive for any cutoff beyond the potential
    minimum.
    """
    if math.isinf(r_cut):
        shift = 0.0
    else:
        probe = LJParams(epsilon, sigma, r_cut, 0.0)  # runs the validations
        shift = -_bare_energy(probe.r_cut_sq, epsilon, sigma)
    return LJParams(epsilon, sigma, r_cut, shift)


def lj_eval(r_squared, params: LJParams):
    """Evaluate (energy, force_over_r) at squared separations.

    Accepts a scalar or an ndarray; beyond the cutoff both outputs are
    exactly zero. Raises for non-positive separations, where the pair
    interaction is singular.
    """
    r2 = np.asarray(r_squared, dtype=np.float64)
    if np.any(r2 <= 0.0):
        raise ValueError("r_squared must be strictly positive")
    s2 = (params.sigma * params.sigma) / r2
    s6 = s2 * s2 * s2
    s12 = s6 * s6
    inside = r2 < params.r_cut_sq
    energy = np.where(inside,
                      4.0 * params.epsilon * (s12 - s6) + params.energy_shift,
                      0.0)
    force_over_r = np.where(inside,
                            24.0 * params.epsilon * (2.0 * s12 - s6) / r2,
                            0.0)
    if energy.ndim == 0:
        return float(energy), float(force_over_r)
    return energy, force_over_r
