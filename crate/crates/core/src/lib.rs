//! Boundary value problems for the Dirac operator: Clifford algebra,
//! boundary conditions, Lopatinsky–Shapiro checks, half-line model problems,
//! essential spectra and numerical oracles.

pub mod boundary;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod geometry;
pub mod halfline;
pub mod lopatinsky;
pub mod oracle;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};

pub type CMat2f = clifford::CMat2<f64>;
pub type CMat4f = clifford::CMat4<f64>;
pub type CVec2f = clifford::CVec2<f64>;
pub type CVec4f = clifford::CVec4<f64>;
pub type Sampler = boundary::SurfaceSampler<f64>;
pub type Condition = boundary::BoundaryCondition<f64>;
pub type Spectrum = spectrum::SpectrumSet<f64>;
pub type Model = halfline::ModelProblem<f64>;
