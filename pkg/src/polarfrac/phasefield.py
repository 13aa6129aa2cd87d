"""
Phase-field machinery
=====================

Quasi-quadratic degradation function family, crack surface density with
linear local dissipation, nondimensional driving force and the irreversible
history field.

The degradation function is

    g(d) = (1-d)^2 / ((1-d)^2 + m*d*(1+p*d)),

with m = 3/(8*F_crit) so that the damage equation is stationary at d = 0
whenever the driving force sits at the threshold: g'(0)*F_crit + 3/8 = 0.
The crack surface density for the linear dissipation function w(d) = d is

    Gamma_d(d, grad d) = 3*d/(8*l_c) + (3*l_c/8) * |grad d|^2,

whose normalization constant c0 = 4*int_0^1 sqrt(s) ds = 8/3.
"""

from dataclasses import dataclass, field

import numpy as np

from .material import FractureParams, degradation_m

__all__ = [
    "DegradationConfig",
    "HistoryField",
    "g_value",
    "g_prime",
    "g_prime2",
    "crack_density",
    "driving_force",
    "update_history",
    "crack_surface_total",
]

_VALID_PARTS = frozenset("BCR")


@dataclass(frozen=True)
class DegradationConfig:
    """Degradation shape parameters and the set of degraded energy parts.

    degrade_set is a subset of {"B", "C", "R"}: Boltzmann (symmetric strain),
    micro-continuum coupling, and pure rotational parts.  Parts outside the
    set keep their full stiffness.
    """
    p: float
    m: float
    degrade_set: frozenset = field(default_factory=lambda: frozenset("BCR"))

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"shape parameter p must be >= 1, got {self.p}")
        parts = frozenset(self.degrade_set)
        if not parts <= _VALID_PARTS:
            bad = ",".join(sorted(parts - _VALID_PARTS))
            raise ValueError(f"invalid degradation parts {{{bad}}}; allowed: B, C, R")
        object.__setattr__(self, "degrade_set", parts)

    @classmethod
    def from_fracture(cls, fp: FractureParams, degrade_set="BCR") -> "DegradationConfig":
        """Build the config with m derived from the fracture parameters."""
        return cls(p=fp.p, m=degradation_m(fp), degrade_set=frozenset(degrade_set))

    def degrades(self, part: str) -> bool:
        return part in self.degrade_set


def g_value(d, m, p):
    """Quasi-quadratic degradation function; g(0) = 1, g(1) = 0."""
    d = np.asarray(d, dtype=float)
    one_md = (1.0 - d) ** 2
    return one_md / (one_md + m * d * (1.0 + p * d))


def g_prime(d, m, p):
    """First derivative; g'(d) = -m*(1-d)*(1+d+2*p*d) / h(d)^2."""
    d = np.asarray(d, dtype=float)
    h = (1.0 - d) ** 2 + m * d * (1.0 + p * d)
    return -m * (1.0 - d) * (1.0 + d + 2.0 * p * d) / h**2


def g_prime2(d, m, p):
    """Second derivative, used in the Newton solve of the damage equation."""
    d = np.asarray(d, dtype=float)
    h = (1.0 - d) ** 2 + m * d * (1.0 + p * d)
    hp = -2.0 * (1.0 - d) + m * (1.0 + 2.0 * p * d)
    a = (1.0 - d) * (1.0 + d + 2.0 * p * d)
    return 2.0 * m * (a * hp - (p - d - 2.0 * p * d) * h) / h**3


def crack_density(d, grad_d, l_c):
    """Crack surface density [1/mm] for the linear dissipation function.

    grad_d carries the gradient components in its last axis.
    """
    d = np.asarray(d, dtype=float)
    grad_d = np.asarray(grad_d, dtype=float)
    grad_sq = np.sum(grad_d**2, axis=-1)
    return 3.0 * d / (8.0 * l_c) + (3.0 * l_c / 8.0) * grad_sq


def driving_force(psi_B_pos, psi_C, psi_R, cfg: DegradationConfig, fp: FractureParams):
    """Nondimensional driving force F = sum of degraded energy parts / (Gc/l_c).

    Only the positive Boltzmann part drives damage; the negative part is
    never degraded.  Parts outside the degradation set do not contribute.
    """
    scale = fp.l_c / fp.Gc
    total = 0.0
    if cfg.degrades("B"):
        total = total + np.asarray(psi_B_pos, dtype=float)
    if cfg.degrades("C"):
        total = total + np.asarray(psi_C, dtype=float)
    if cfg.degrades("R"):
        total = total + np.asarray(psi_R, dtype=float)
    return total * scale


def update_history(H_old, F, fp: FractureParams):
    """Irreversible history update H_new = max(H_old, F, F_crit)."""
    return np.maximum(np.maximum(H_old, F), fp.F_crit)


@dataclass
class HistoryField:
    """Per-quadrature-point history of the nondimensional driving force.

    H is initialized at F_crit and never decreases; below the threshold no
    damage can evolve.
    """
    H: np.ndarray
    F_crit: float

    @classmethod
    def initial(cls, shape, fp: FractureParams) -> "HistoryField":
        return cls(H=np.full(shape, fp.F_crit, dtype=float), F_crit=fp.F_crit)

    def update(self, F) -> None:
        np.maximum(self.H, F, out=self.H)
        np.maximum(self.H, self.F_crit, out=self.H)


def crack_surface_total(d, grad_d, weights, l_c):
    """Quadrature integral of the crack surface density over the domain.

    Args:
        d: damage at quadrature points, shape (..., )
        grad_d: damage gradient at quadrature points, shape (..., 2)
        weights: quadrature weights times Jacobian determinants, same shape as d
        l_c: regularization length

    Returns the diffuse crack surface measure [mm in 2D].
    """
    return float(np.sum(weights * crack_density(d, grad_d, l_c)))
