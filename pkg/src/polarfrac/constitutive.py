"""
Constitutive kernel
===================

Micropolar kinematics, tension/compression energy split, degraded stresses
and consistent tangents at a quadrature point.  All core routines are
vectorized over leading axes so the assembly can evaluate every quadrature
point of the mesh in one call; the dataclass API wraps the same math for a
single state.

Conventions (plane strain, out-of-plane micro-rotation theta3):

* displacement gradient G[i, j] = du_i/dx_j
* symmetric strain in Voigt form  e = [eps_11, eps_22, gamma_12]  with the
  engineering shear gamma_12 = u1,2 + u2,1
* stress in Voigt form  s = [sig_11, sig_22, sig_12]  (tensor component,
  not doubled), so s . e is the double contraction sig : eps
* the skew strain scalar  eps_skew = 0.5*(u2,1 - u1,2) - theta3  measures
  the mismatch between the macro-rotation and the micro-rotation; its
  energy-conjugate generalized stress is 2*kappa*eps_skew
* curvature = grad theta3 (2-vector), conjugate couple stress gamma*grad theta3

The tension/compression split of the symmetric part follows the spectral
decomposition of Miehe et al. (2010): only the positive part is ever
degraded, so compressed material keeps its full stiffness.
"""

from dataclasses import dataclass

import numpy as np

from .material import MaterialConstants
from .phasefield import DegradationConfig, g_value

__all__ = [
    "KinematicState",
    "EnergySplit",
    "StressState",
    "compute_kinematics",
    "spectral_split",
    "energy_split",
    "degraded_stresses",
    "consistent_tangent",
    "kinematics_batch",
    "eigen_decompose_voigt",
    "energy_parts_batch",
    "stress_batch",
    "tangent_batch",
]

# Relative eigenvalue-coalescence tolerance for the split tangent.
_COALESCE_RTOL = 1e-12


# ---------------------------------------------------------------------------
# Dataclass state containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KinematicState:
    """Strain measures at a point: symmetric strain, skew scalar, curvature."""
    eps_sym: np.ndarray      # (2, 2), symmetric
    eps_skew: float          # scalar component eps_bar_12^skew
    curvature: np.ndarray    # (2,), grad theta3

    @property
    def eps_voigt(self) -> np.ndarray:
        e = self.eps_sym
        return np.array([e[0, 0], e[1, 1], e[0, 1] + e[1, 0]])


@dataclass(frozen=True)
class EnergySplit:
    """The four undegraded energy density parts [MPa]."""
    psi_B_pos: float
    psi_B_neg: float
    psi_C: float
    psi_R: float

    @property
    def total(self) -> float:
        return self.psi_B_pos + self.psi_B_neg + self.psi_C + self.psi_R


@dataclass(frozen=True)
class StressState:
    """Degraded stresses: symmetric force stress, skew component, couple stress."""
    sigma_B: np.ndarray   # (2, 2) symmetric force stress
    sigma_C: float        # scalar skew force-stress component (the 12-entry)
    m_R: np.ndarray       # (2,) couple-stress vector


# ---------------------------------------------------------------------------
# Kinematics
# ---------------------------------------------------------------------------

def kinematics_batch(grad_u, theta3, grad_theta3):
    """Strain measures from field gradients, vectorized over leading axes.

    Args:
        grad_u: (..., 2, 2) with grad_u[..., i, j] = du_i/dx_j
        theta3: (...,) micro-rotation
        grad_theta3: (..., 2)

    Returns:
        eps_voigt (..., 3), eps_skew (...,), curvature (..., 2)
    """
    grad_u = np.asarray(grad_u, dtype=float)
    theta3 = np.asarray(theta3, dtype=float)
    eps_voigt = np.stack(
        [grad_u[..., 0, 0],
         grad_u[..., 1, 1],
         grad_u[..., 0, 1] + grad_u[..., 1, 0]], axis=-1)
    eps_skew = 0.5 * (grad_u[..., 1, 0] - grad_u[..., 0, 1]) - theta3
    return eps_voigt, eps_skew, np.asarray(grad_theta3, dtype=float)


def compute_kinematics(grad_u, theta3, grad_theta3) -> KinematicState:
    """Single-point kinematics; see :func:`kinematics_batch` for conventions."""
    grad_u = np.asarray(grad_u, dtype=float)
    eps_sym = 0.5 * (grad_u + grad_u.T)
    eps_skew = 0.5 * (grad_u[1, 0] - grad_u[0, 1]) - float(theta3)
    return KinematicState(eps_sym=eps_sym, eps_skew=float(eps_skew),
                          curvature=np.asarray(grad_theta3, dtype=float))


# ---------------------------------------------------------------------------
# Spectral decomposition (closed form for symmetric 2x2 tensors)
# ---------------------------------------------------------------------------

def eigen_decompose_voigt(eps_voigt):
    """Eigenvalues and principal direction of symmetric 2x2 strains.

    Args:
        eps_voigt: (..., 3) strains [eps11, eps22, gamma12]

    Returns:
        lam1, lam2: (...,) eigenvalues with lam1 >= lam2
        c, s: (...,) cosine/sine of the first principal direction
    """
    e = np.asarray(eps_voigt, dtype=float)
    a, b, g = e[..., 0], e[..., 1], e[..., 2]
    mean = 0.5 * (a + b)
    dd = 0.5 * (a - b)
    r = np.hypot(dd, 0.5 * g)
    lam1 = mean + r
    lam2 = mean - r
    phi = 0.5 * np.arctan2(g, a - b)
    return lam1, lam2, np.cos(phi), np.sin(phi)


def spectral_split(eps_sym):
    """Split a symmetric 2x2 tensor into positive/negative semidefinite parts.

    eps_pos + eps_neg reproduces the input exactly; repeated eigenvalues are
    handled by the closed-form decomposition.
    """
    eps_sym = np.asarray(eps_sym, dtype=float)
    ev = np.array([eps_sym[0, 0], eps_sym[1, 1], eps_sym[0, 1] + eps_sym[1, 0]])
    lam1, lam2, c, s = eigen_decompose_voigt(ev)
    n1 = np.array([c, s])
    n2 = np.array([-s, c])
    M1 = np.outer(n1, n1)
    M2 = np.outer(n2, n2)
    eps_pos = max(lam1, 0.0) * M1 + max(lam2, 0.0) * M2
    eps_neg = min(lam1, 0.0) * M1 + min(lam2, 0.0) * M2
    return eps_pos, eps_neg


# ---------------------------------------------------------------------------
# Energy split
# ---------------------------------------------------------------------------

def energy_parts_batch(eps_voigt, eps_skew, curvature, mc: MaterialConstants):
    """Undegraded energy densities, vectorized.

    Returns psi_B_pos, psi_B_neg, psi_C, psi_R with the same leading shape
    as the inputs.
    """
    lam1, lam2, _, _ = eigen_decompose_voigt(eps_voigt)
    tr = lam1 + lam2
    tr_p = np.maximum(tr, 0.0)
    tr_n = np.minimum(tr, 0.0)
    l1p, l2p = np.maximum(lam1, 0.0), np.maximum(lam2, 0.0)
    l1n, l2n = np.minimum(lam1, 0.0), np.minimum(lam2, 0.0)
    two_mu_k = 2.0 * mc.mu + mc.kappa
    psi_B_pos = 0.5 * (mc.lambda_ * tr_p**2 + two_mu_k * (l1p**2 + l2p**2))
    psi_B_neg = 0.5 * (mc.lambda_ * tr_n**2 + two_mu_k * (l1n**2 + l2n**2))
    eps_skew = np.asarray(eps_skew, dtype=float)
    psi_C = mc.kappa * eps_skew**2
    curvature = np.asarray(curvature, dtype=float)
    psi_R = 0.5 * mc.gamma * np.sum(curvature**2, axis=-1)
    return psi_B_pos, psi_B_neg, psi_C, psi_R


def energy_split(ks: KinematicState, mc: MaterialConstants) -> EnergySplit:
    """Energy split at a single state."""
    pBp, pBn, pC, pR = energy_parts_batch(ks.eps_voigt, ks.eps_skew,
                                          ks.curvature, mc)
    return EnergySplit(float(pBp), float(pBn), float(pC), float(pR))


# ---------------------------------------------------------------------------
# Degraded stresses
# ---------------------------------------------------------------------------

def stress_batch(eps_voigt, eps_skew, curvature, mc: MaterialConstants,
                 g_B=1.0, g_C=1.0, g_R=1.0):
    """Degraded stresses, vectorized.

    Only the positive Boltzmann part is multiplied by g_B; the negative part
    always keeps full stiffness.

    Returns:
        sigma_B_voigt (..., 3): [sig11, sig22, sig12]
        sigma_C (...,): skew force-stress component g_C*kappa*eps_skew
        m_R (..., 2): couple stress g_R*gamma*curvature
    """
    lam1, lam2, c, s = eigen_decompose_voigt(eps_voigt)
    tr = lam1 + lam2
    two_mu_k = 2.0 * mc.mu + mc.kappa
    c2, s2, cs = c * c, s * s, c * s
    # stress-type Voigt dyads of the eigenprojections
    m1 = np.stack([c2, s2, cs], axis=-1)
    m2 = np.stack([s2, c2, -cs], axis=-1)
    ident = np.array([1.0, 1.0, 0.0])

    def _branch(lp1, lp2, trp):
        return (mc.lambda_ * trp[..., None] * ident
                + two_mu_k * (lp1[..., None] * m1 + lp2[..., None] * m2))

    sig_pos = _branch(np.maximum(lam1, 0.0), np.maximum(lam2, 0.0),
                      np.maximum(tr, 0.0))
    sig_neg = _branch(np.minimum(lam1, 0.0), np.minimum(lam2, 0.0),
                      np.minimum(tr, 0.0))
    g_B = np.asarray(g_B, dtype=float)
    sigma_B = g_B[..., None] * sig_pos + sig_neg if g_B.ndim else g_B * sig_pos + sig_neg
    sigma_C = np.asarray(g_C, dtype=float) * mc.kappa * np.asarray(eps_skew, dtype=float)
    g_R = np.asarray(g_R, dtype=float)
    curvature = np.asarray(curvature, dtype=float)
    m_R = (g_R[..., None] if g_R.ndim else g_R) * mc.gamma * curvature
    return sigma_B, sigma_C, m_R


def _g_factors(d, cfg: DegradationConfig):
    g = g_value(d, cfg.m, cfg.p)
    one = np.ones_like(np.asarray(d, dtype=float))
    return (g if cfg.degrades("B") else one,
            g if cfg.degrades("C") else one,
            g if cfg.degrades("R") else one)


def degraded_stresses(ks: KinematicState, mc: MaterialConstants, d: float,
                      cfg: DegradationConfig) -> StressState:
    """Degraded stresses at a single state (0 <= d <= 1)."""
    gB, gC, gR = _g_factors(d, cfg)
    sB, sC, mR = stress_batch(ks.eps_voigt, ks.eps_skew, ks.curvature, mc,
                              g_B=gB, g_C=gC, g_R=gR)
    sigma_B = np.array([[sB[0], sB[2]], [sB[2], sB[1]]])
    return StressState(sigma_B=sigma_B, sigma_C=float(sC), m_R=np.asarray(mR))


# ---------------------------------------------------------------------------
# Consistent tangent
# ---------------------------------------------------------------------------

def tangent_batch(eps_voigt, mc: MaterialConstants, g_B=1.0):
    """Algorithmic tangent dsigma_B/deps of the split stress, vectorized.

    Voigt 3x3 blocks mapping [eps11, eps22, gamma12] -> [sig11, sig22, sig12].
    The eigenprojection derivative is used away from eigenvalue coalescence;
    within |lam1 - lam2| < 1e-12*||eps|| the isotropic tangent scaled by the
    shared Macaulay sign is substituted.
    """
    e = np.asarray(eps_voigt, dtype=float)
    lam1, lam2, c, s = eigen_decompose_voigt(e)
    tr = lam1 + lam2
    two_mu_k = 2.0 * mc.mu + mc.kappa

    h1 = (lam1 > 0.0).astype(float)
    h2 = (lam2 > 0.0).astype(float)
    htr = (tr > 0.0).astype(float)

    norm = np.sqrt(lam1**2 + lam2**2)
    gap = lam1 - lam2
    coalesced = gap <= _COALESCE_RTOL * np.maximum(norm, 1.0e-300)
    l1p, l2p = np.maximum(lam1, 0.0), np.maximum(lam2, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        s_shear = np.where(coalesced, h1, (l1p - l2p) / np.where(gap == 0.0, 1.0, gap))

    c2, s2, cs = c * c, s * s, c * s
    m1 = np.stack([c2, s2, cs], axis=-1)
    m2 = np.stack([s2, c2, -cs], axis=-1)
    sq2 = np.sqrt(2.0)
    n12 = np.stack([-sq2 * cs, sq2 * cs, (c2 - s2) / sq2], axis=-1)

    def _outer(v):
        return v[..., :, None] * v[..., None, :]

    P_pos = (h1[..., None, None] * _outer(m1)
             + h2[..., None, None] * _outer(m2)
             + s_shear[..., None, None] * _outer(n12))
    ident = np.array([1.0, 1.0, 0.0])
    J = np.outer(ident, ident)
    I_sym = np.diag([1.0, 1.0, 0.5])

    g_B = np.asarray(g_B, dtype=float)[..., None, None]
    htr_ = htr[..., None, None]
    C = (g_B * (mc.lambda_ * htr_ * J + two_mu_k * P_pos)
         + mc.lambda_ * (1.0 - htr_) * J + two_mu_k * (I_sym - P_pos))
    return C


def consistent_tangent(ks: KinematicState, mc: MaterialConstants, d: float,
                       cfg: DegradationConfig):
    """Tangent blocks of the degraded stresses at a single state.

    Returns:
        C_B: (3, 3) Voigt block dsigma_B/deps  ([e11, e22, gamma] in,
             [s11, s22, s12] out)
        c_C: scalar dsigma_C/deps_skew = g_C*kappa
        C_R: (2, 2) block dm_R/dcurvature = g_R*gamma*I
    """
    gB, gC, gR = _g_factors(d, cfg)
    C_B = tangent_batch(ks.eps_voigt, mc, g_B=gB)
    return np.asarray(C_B), float(gC * mc.kappa), float(gR) * mc.gamma * np.eye(2)
