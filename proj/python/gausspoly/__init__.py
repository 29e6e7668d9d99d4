"""Expected facet counts of Gaussian polytopes."""

from gausspoly._core import (
    Band,
    ConvergenceError,
    DegenerateError,
    DomainError,
    FacetExpectation,
    GuardExceeded,
    InvalidParams,
    McEstimate,
    PreconditionError,
    QuadConfig,
    beta_cdf,
    cor12_leading,
    delta_of,
    e_g_quadrature,
    ef_mc,
    ef_quad_smalldiff,
    ef_quad_u,
    ef_quad_y,
    erfc,
    facet_count,
    lemma5_sandwich,
    log_beta_cdf,
    log_binomial,
    log_erfc,
    log_g,
    log_gamma,
    log_phi_cap,
    log_phi_lower,
    mills_theta,
    onedim_identity_mc,
    phi_cap,
    phi_cap_inv,
    phi_cap_inv_log,
    thm11_band,
    thm13_leading,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
