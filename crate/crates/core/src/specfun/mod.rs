//! Special functions needed by the scale-function catalog.

mod bessel;
mod erfc;
mod gamma;
mod incgamma;
mod integrals;
mod mittag_leffler;

pub use bessel::{bessel_i, bessel_i_scaled};
pub(crate) use bessel::bessel_i_scaled_unchecked;
pub use erfc::{erfcx, eta};
pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub use incgamma::{exp_int_e1, gamma_p, gamma_q, upper_gamma};
pub use integrals::{
    bessel_order_moment, bessel_order_moment_scaled, ml_laplace_residual, volterra_nu, volterra_nu_truncated,
    Truncated,
};
pub(crate) use integrals::{breaks_to, choose_truncation};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_scaled, MlParams};
