"""
Material parameters
===================

Engineering parameters for isotropic micropolar elasticity, their conversion
to constitutive constants, and the fracture parameter set for the cohesive
phase-field model.

Everything is expressed in a consistent MPa-mm-N unit system
(1 MPa * mm^2 = 1 N); unit conversion happens at the configuration layer.
"""

import warnings
from dataclasses import dataclass

__all__ = [
    "EngineeringParams",
    "MaterialConstants",
    "FractureParams",
    "derive_constants",
    "check_admissibility",
    "max_regularization_length",
    "degradation_m",
]


@dataclass(frozen=True)
class EngineeringParams:
    """Experimentally identifiable micropolar parameters.

    Attributes:
        E: Young's modulus [MPa]
        nu: Poisson's ratio [-]
        N: coupling number in [0, 1); N=0 recovers classical elasticity
        l_b: characteristic length in bending [mm]
        l_t: characteristic length in torsion [mm] (stored only; unused in 2D)
        chi: polar ratio [-] (stored only; unused in 2D)
    """
    E: float
    nu: float
    N: float = 0.0
    l_b: float = 0.0
    l_t: float = 0.0
    chi: float = 0.0

    def __post_init__(self):
        if self.E <= 0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"Poisson's ratio must be in (-1, 0.5), got {self.nu}")
        if not 0.0 <= self.N < 1.0:
            raise ValueError(f"coupling number must be in [0, 1), got {self.N}")
        if self.l_b < 0:
            raise ValueError(f"bending length must be non-negative, got {self.l_b}")


@dataclass(frozen=True)
class MaterialConstants:
    """Constitutive constants of the isotropic micropolar solid.

    lambda_, mu, kappa are the force-stress constants [MPa]; alpha, beta,
    gamma are the couple-stress constants [N].  In plane strain with a single
    out-of-plane micro-rotation only gamma enters the couple-stress relation,
    so alpha and beta are kept for completeness but set to zero by
    :func:`derive_constants`.
    """
    lambda_: float
    mu: float
    kappa: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0


@dataclass(frozen=True)
class FractureParams:
    """Cohesive phase-field fracture parameters.

    Attributes:
        Gc: critical energy release rate [N/mm]
        psi_crit: threshold energy density [MPa]
        l_c: phase-field regularization length [mm]
        p: shape parameter of the quasi-quadratic degradation family
    """
    Gc: float
    psi_crit: float
    l_c: float
    p: float = 10.0

    def __post_init__(self):
        if self.Gc <= 0:
            raise ValueError(f"Gc must be positive, got {self.Gc}")
        if self.psi_crit <= 0:
            raise ValueError(f"psi_crit must be positive, got {self.psi_crit}")
        if self.l_c <= 0:
            raise ValueError(f"l_c must be positive, got {self.l_c}")
        if self.p < 1:
            raise ValueError(f"shape parameter p must be >= 1, got {self.p}")
        l_max = max_regularization_length(self)
        if self.l_c > l_max * (1.0 + 1e-12):
            raise ValueError(
                f"l_c = {self.l_c} exceeds the admissible bound "
                f"3*Gc/(8*(p+2)*psi_crit) = {l_max}"
            )

    @property
    def F_crit(self) -> float:
        """Nondimensional threshold energy psi_crit * l_c / Gc."""
        return self.psi_crit * self.l_c / self.Gc


def derive_constants(ep: EngineeringParams) -> MaterialConstants:
    """Convert engineering parameters (E, nu, N, l_b) to constitutive constants.

    Uses the 2D plane-strain convention: with mu_star = E/(2(1+nu)),

        lambda = E*nu / ((1+nu)(1-2*nu))
        kappa  = 2*mu_star*N^2 / (1-N^2)
        mu     = mu_star - kappa/2
        gamma  = 4*mu_star*l_b^2
        alpha  = beta = 0   (do not enter the 2D problem)

    The resulting constants reproduce E, nu, N and l_b exactly when the
    standard micropolar identities are evaluated on them, and they always
    satisfy the admissibility inequalities.

    Raises:
        ValueError: if N = 1 (couple-stress limit) or the result is
            inadmissible.
    """
    mu_star = ep.E / (2.0 * (1.0 + ep.nu))
    lam = ep.E * ep.nu / ((1.0 + ep.nu) * (1.0 - 2.0 * ep.nu))
    if ep.N >= 1.0:
        raise ValueError("coupling number N = 1 (couple-stress limit) is not supported")
    kappa = 2.0 * mu_star * ep.N**2 / (1.0 - ep.N**2)
    mu = mu_star - 0.5 * kappa
    gamma = 4.0 * mu_star * ep.l_b**2
    mc = MaterialConstants(lambda_=lam, mu=mu, kappa=kappa, alpha=0.0, beta=0.0,
                           gamma=gamma)
    ok, violations = check_admissibility(mc)
    if not ok:
        raise ValueError("derived constants are inadmissible: " + "; ".join(violations))
    return mc


def check_admissibility(mc: MaterialConstants) -> tuple[bool, list[str]]:
    """Check the six strong-ellipticity inequalities.

    Returns (passed, violations) where violations lists every inequality
    that fails, e.g. ["kappa >= 0"].
    """
    checks = [
        (3.0 * mc.lambda_ + 2.0 * mc.mu + mc.kappa, "3*lambda + 2*mu + kappa >= 0"),
        (2.0 * mc.mu + mc.kappa, "2*mu + kappa >= 0"),
        (mc.kappa, "kappa >= 0"),
        (3.0 * mc.alpha + mc.beta + mc.gamma, "3*alpha + beta + gamma >= 0"),
        (mc.gamma + mc.beta, "gamma + beta >= 0"),
        (mc.gamma - mc.beta, "gamma - beta >= 0"),
    ]
    violations = [name for value, name in checks if value < 0.0]
    return (not violations, violations)


def max_regularization_length(fp: FractureParams) -> float:
    """Upper bound on l_c for the quasi-quadratic degradation family.

    l_max = 3*Gc / (8*(p+2)*psi_crit).  Decreasing in p and psi_crit,
    increasing in Gc.
    """
    return 3.0 * fp.Gc / (8.0 * (fp.p + 2.0) * fp.psi_crit)


def degradation_m(fp: FractureParams) -> float:
    """Constant m of the degradation function, m = 3/(8*F_crit).

    This choice makes the damage equation stationary at d = 0 for driving
    forces at the threshold, so the elastic phase is exact.  The family
    formally requires m >= 1; parameter sets that yield m < 1 are accepted
    with a warning since m is fully determined by (Gc, psi_crit, l_c).
    """
    F_crit = fp.F_crit
    if F_crit == 0.0:
        raise ValueError("F_crit = 0: threshold energy or l_c vanishes")
    m = 3.0 / (8.0 * F_crit)
    if m < 1.0:
        warnings.warn(
            f"degradation constant m = {m:.4g} < 1 for the given "
            f"(Gc, psi_crit, l_c); the degradation family expects m >= 1",
            stacklevel=2,
        )
    return m
