"""Energies and hypothesis integrals evaluated on a SurfaceGeometry.

Covers the Hawking energy and functional, the charged and
cosmological-constant variants, the Brown-York energy restricted to
constant-curvature (round-embedding) boundaries, and the positivity
hypothesis integrands f, f_beta, f_tilde.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import surface as sf
from .ambient import constraint_data_at, nabla_k_at
from .errors import ConfigError, EmbeddingError, HypothesisError

FOUR_PI = 4.0 * np.pi
SIXTEEN_PI = 16.0 * np.pi

# Weyl embedding of a constant-curvature sphere is round; beyond this
# relative spread in K the general embedding problem is out of scope.
ROUND_K_TOL = 1e-3


def hawking_functional(geom):
    """H-functional: quarter integral of H^2 - P^2."""
    return 0.25 * sf.integrate(geom, geom.H ** 2 - geom.P ** 2)


def willmore_functional(geom):
    return 0.25 * sf.integrate(geom, geom.H ** 2)


def hawking_energy(geom):
    """sqrt(|S|/16pi) (1 - (1/16pi) int (H^2 - P^2) dmu)."""
    hp = sf.integrate(geom, geom.H ** 2 - geom.P ** 2)
    return np.sqrt(geom.area / SIXTEEN_PI) * (1.0 - hp / SIXTEEN_PI)


def charge_flux(geom, space=None):
    space = space if space is not None else geom.space
    E = space.efield(geom.X)
    if E is None:
        raise ConfigError(f"space '{space.name}' carries no electric field")
    flux = np.einsum("...ab,...a,...b->...", geom.g_amb, E, geom.nu)
    return sf.integrate(geom, flux) / FOUR_PI


def charged_hawking_energy(geom, space=None, extra_charge_sq=0.0):
    """Charge Q and energy E_Q.

    Time-symmetric data uses the H^2 form; for k != 0 the same expression
    with H^2 - P^2 is used and flagged in the returned convention string.
    extra_charge_sq adds a magnetic-charge Q_B^2 to the Q^2 term.
    """
    space = space if space is not None else geom.space
    Q = charge_flux(geom, space)
    if space.time_symmetric:
        integrand = geom.H ** 2
        convention = "H2"
    else:
        integrand = geom.H ** 2 - geom.P ** 2
        convention = "H2-P2"
    val = np.sqrt(geom.area / SIXTEEN_PI) * (
        1.0 + FOUR_PI * (Q ** 2 + extra_charge_sq) / geom.area
        - sf.integrate(geom, integrand) / SIXTEEN_PI)
    return Q, float(val), convention


def lambda_hawking_energy(geom, Lambda):
    """Hawking energy with cosmological constant (time-symmetric form)."""
    val = sf.integrate(geom, geom.H ** 2 + (4.0 / 3.0) * Lambda)
    return np.sqrt(geom.area / SIXTEEN_PI) * (1.0 - val / SIXTEEN_PI)


def _pointwise_k_data(space, geom):
    """|k|^2, nabla_nu tr k, (nabla_nu k)(nu,nu), |J| and mu at the nodes."""
    k = geom.k_amb
    ginv = geom.ginv_amb
    ksq = np.einsum("...ab,...cd,...ac,...bd->...", k, k, ginv, ginv)
    nk = nabla_k_at(space, geom.X)
    dnu_trk = np.einsum("...a,...bc,...abc->...", geom.nu, ginv, nk)
    dnu_knn = np.einsum("...a,...b,...c,...abc->...", geom.nu, geom.nu, geom.nu, nk)
    cons = constraint_data_at(space, geom.X)
    jnorm = np.sqrt(np.einsum("...ab,...a,...b->...", ginv, cons.J, cons.J))
    return ksq, dnu_trk, dnu_knn, jnorm, cons.mu, cons.dec_margin


def f_integrals(space, geom, beta=0.25, lam=0.0):
    """Integrals of f - lambda, f_beta - lambda and f_tilde - lambda.

    f divides by H, so every node must have H > 0.
    """
    if np.any(geom.H <= 0.0):
        raise HypothesisError("f requires positive mean curvature at every node")
    ksq, dnu_trk, dnu_knn, jnorm, _, _ = _pointwise_k_data(space, geom)
    H, P, trk = geom.H, geom.P, geom.trk
    ring = geom.traceless_sq
    core = 0.5 * trk ** 2 - 0.75 * P ** 2 - (P / H) * (dnu_trk - dnu_knn)
    f = (P / H) ** 2 * ksq + core - 0.5 * ksq - 0.5 * ring - jnorm
    f_beta = (P / H) ** 2 * ksq + core - beta * (ksq + ring + 2.0 * jnorm)
    grad_logH = sf.gradient_ambient(geom, np.log(H))
    k_gradlogH_nu = np.einsum("...ab,...a,...b->...", geom.k_amb, grad_logH, geom.nu)
    f_tilde = (2.0 * P / H) * k_gradlogH_nu + core - 0.5 * ksq - 0.5 * ring - jnorm
    lam_area = lam * geom.area
    return {
        "f": sf.integrate(geom, f) - lam_area,
        "f_beta": sf.integrate(geom, f_beta) - lam_area,
        "f_tilde": sf.integrate(geom, f_tilde) - lam_area,
        "beta": beta,
        "lam": lam,
    }


def brown_york_round(geom):
    """(1/8pi) int (H0 - H) dmu with H0 from the round reference embedding.

    Only surfaces whose intrinsic Gauss curvature is constant (to relative
    tolerance ROUND_K_TOL) are supported; their Weyl embedding into flat
    space is a round sphere with H0 = 2 sqrt(mean K).
    """
    K = geom.gauss_curvature
    kbar = sf.integrate(geom, K) / geom.area
    if kbar <= 0.0:
        raise EmbeddingError("mean Gauss curvature must be positive for a round embedding")
    spread = float(np.max(np.abs(K - kbar))) / kbar
    if spread > ROUND_K_TOL:
        raise EmbeddingError(
            f"Gauss curvature varies by {spread:.2e} (> {ROUND_K_TOL:.0e}); "
            "general isometric embedding is not supported")
    if not geom.space.time_symmetric and float(np.max(np.abs(geom.P))) > 1e-12:
        warnings.warn("Brown-York comparison on k != 0 data: the positivity "
                      "hypotheses do not apply", stacklevel=2)
    H0 = 2.0 * np.sqrt(kbar)
    return sf.integrate(geom, H0 - geom.H) / (8.0 * np.pi)


@dataclass
class EnergyReport:
    """Every functional/energy value for one surface, with provenance."""

    space_name: str
    space_params: dict
    grid_resolution: tuple
    area: float
    willmore_integral: float
    p_integral: float
    hawking_functional: float
    hawking_energy: float
    gauss_bonnet_defect: float
    dec_min: float
    charge: float = None
    charged_energy: float = None
    charged_convention: str = None
    Lambda: float = None
    lambda_energy: float = None
    brown_york: float = None
    f_integral: float = None
    f_beta_integral: float = None
    f_tilde_integral: float = None
    beta: float = None
    lam: float = None

    FIELD_ORDER = (
        "space_name", "space_params", "grid_resolution", "area",
        "willmore_integral", "p_integral", "hawking_functional",
        "hawking_energy", "gauss_bonnet_defect", "dec_min",
        "charge", "charged_energy", "charged_convention",
        "Lambda", "lambda_energy", "brown_york",
        "f_integral", "f_beta_integral", "f_tilde_integral", "beta", "lam",
    )

    def as_dict(self):
        return {name: getattr(self, name) for name in self.FIELD_ORDER}


def energy_report(space, geom, Lambda=None, beta=0.25, lam=0.0, extra_charge_sq=0.0):
    """Assemble an EnergyReport; optional pieces are skipped when not applicable."""
    w2 = sf.integrate(geom, geom.H ** 2)
    p2 = sf.integrate(geom, geom.P ** 2)
    hf = 0.25 * (w2 - p2)
    energy = np.sqrt(geom.area / SIXTEEN_PI) * (1.0 - (w2 - p2) / SIXTEEN_PI)
    gb = abs(sf.integrate(geom, geom.gauss_curvature) - FOUR_PI)
    _, _, _, _, _, dec = _pointwise_k_data(space, geom)
    report = EnergyReport(
        space_name=space.name,
        space_params=dict(space.params),
        grid_resolution=geom.mesh.grid_resolution,
        area=geom.area,
        willmore_integral=w2,
        p_integral=p2,
        hawking_functional=hf,
        hawking_energy=float(energy),
        gauss_bonnet_defect=float(gb),
        dec_min=float(np.min(dec)),
    )
    if space.efield_fn is not None:
        Q, eq, conv = charged_hawking_energy(geom, space, extra_charge_sq)
        report.charge, report.charged_energy, report.charged_convention = float(Q), eq, conv
    if Lambda is not None:
        report.Lambda = float(Lambda)
        report.lambda_energy = float(lambda_hawking_energy(geom, Lambda))
    try:
        report.brown_york = float(brown_york_round(geom))
    except EmbeddingError:
        pass
    if np.all(geom.H > 0.0):
        fints = f_integrals(space, geom, beta=beta, lam=lam)
        report.f_integral = float(fints["f"])
        report.f_beta_integral = float(fints["f_beta"])
        report.f_tilde_integral = float(fints["f_tilde"])
        report.beta = float(beta)
        report.lam = float(lam)
    return report
