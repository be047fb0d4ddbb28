//! Special functions: Γ and relatives, Laguerre polynomials, ₁F₁ and ₂F₁,
//! Tricomi's Ψ at integer second parameter, and Legendre functions.

mod gamma;
mod hypergeometric;
mod laguerre;
mod legendre;
mod tricomi;

pub use gamma::{
    digamma, digamma_complex, gamma, gamma_complex, ln_gamma, log_gamma, recip_gamma,
    recip_gamma_complex,
};
pub use hypergeometric::{hyp1f1, hyp2f1};
pub use laguerre::{
    laguerre, laguerre_at_zero, laguerre_iter, laguerre_sequence, laguerre_series, LaguerreIter,
};
pub use legendre::legendre_p;
pub use tricomi::{gamma_tricomi_integral, tricomi_psi, tricomi_psi_log_series};
