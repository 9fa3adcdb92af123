//! Essential spectra of Dirac operators with slowly oscillating potentials.
//!
//! For a real potential `Φ` whose gradient vanishes at infinity, every limit
//! operator is a free Dirac operator shifted by a constant `Φʰ`, with spectrum
//! `(−∞, Φʰ − |m|] ∪ [Φʰ + |m|, ∞)`. Taking the union over all limit values
//! `Φʰ ∈ [M_inf, M_sup]` gives
//!
//! ```text
//! sp_ess = (−∞, M_sup − |m|] ∪ [M_inf + |m|, ∞),
//! ```
//!
//! which is the whole line once `M_sup − M_inf ≥ 2|m|`. The magnetic potential
//! drops out after a gauge transformation and does not enter any formula here.
//!
//! On a domain with a conic exit and MIT boundary condition the half-space limit
//! operators add the branches `λ± = ±|ξ′|`, so for `m < 0` the essential
//! spectrum is the whole line.

mod asymptotics;
mod set;

pub use asymptotics::{
    default_schedule, estimate_asymptotics, AsymptoticEstimate, AsymptoticsOptions, DirectionalExtrema, PotentialFamily,
    PotentialField, ShellRecord, VectorField, DEFAULT_DIRECTIONS, DEFAULT_N_SHELLS, DEFAULT_RADII_PER_SHELL,
    DEFAULT_SO1_THRESHOLD,
};
pub use set::{union, Bound, Interval, SpectrumSet};

use crate::scalar::Real;

/// `(−∞, −|m|] ∪ [|m|, ∞)`.
pub fn free_dirac_spectrum<T: Real>(m: T) -> SpectrumSet<T> {
    limit_constant_spectrum(T::zero(), m)
}

/// Spectrum of the free operator shifted by the constant `Φʰ`.
pub fn limit_constant_spectrum<T: Real>(phi_h: T, m: T) -> SpectrumSet<T> {
    let m = m.abs();
    SpectrumSet::from_intervals(vec![Interval::at_most(phi_h - m), Interval::at_least(phi_h + m)])
}

pub fn essential_spectrum_exterior<T: Real>(est: &AsymptoticEstimate<T>, m: T) -> SpectrumSet<T> {
    let m = m.abs();
    SpectrumSet::from_intervals(vec![
        Interval::at_most(est.m_sup - m),
        Interval::at_least(est.m_inf + m),
    ])
}

/// MIT bag model on a domain with a conic exit at infinity.
pub fn essential_spectrum_conic_mit<T: Real>(est: &AsymptoticEstimate<T>, m: T) -> SpectrumSet<T> {
    if m < T::zero() {
        SpectrumSet::real_line()
    } else {
        essential_spectrum_exterior(est, m)
    }
}

/// The open interval `(M_sup − |m|, M_inf + |m|)` free of essential spectrum,
/// if it is nonempty.
pub fn spectral_gap<T: Real>(est: &AsymptoticEstimate<T>, m: T) -> Option<(T, T)> {
    let m = m.abs();
    if est.m_sup - est.m_inf < m + m {
        Some((est.m_sup - m, est.m_inf + m))
    } else {
        None
    }
}
