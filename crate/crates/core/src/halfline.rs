//! The one-dimensional model operator
//!
//! ```text
//! α′·ξ′ + iα₃ d/dz + α₀m   on z > 0,   v¹(0) + iσ₃v²(0) = 0,
//! ```
//!
//! obtained from the MIT bag model on a half-space after a partial Fourier
//! transform in the tangential variables.
//!
//! Its essential spectrum is `|λ| ≥ √(|ξ′|² + m²)`. Inside the gap the
//! decaying solutions are `(C₁h₁ + C₂h₂)e^{−ρz}` with
//! `ρ = √(|ξ′|² + m² − λ²)`, and the boundary condition reduces to a 2×2
//! system whose determinant is `2iρ(ρ + m)`. Bound states therefore exist
//! only for `m < 0`, where `ρ = |m|` forces `λ = ±|ξ′|`.

use num_complex::Complex;
use serde::Serialize;

use crate::clifford::{dirac_alpha, CMat2, CMat4, CVec2, CVec4};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectrum::{Interval, SpectrumSet};

/// Decay rates below this are treated as the gap edge, not as bound states.
pub const RHO_MIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelProblem<T> {
    pub xi: [T; 2],
    pub m: T,
}

impl<T: Real> ModelProblem<T> {
    pub fn new(xi: [T; 2], m: T) -> Self {
        Self { xi, m }
    }

    pub fn xi_norm(&self) -> T {
        self.xi[0].hypot(self.xi[1])
    }

    /// `√(|ξ′|² + m²)`, the edge of the essential spectrum.
    pub fn gap_edge(&self) -> T {
        self.xi_norm().hypot(self.m)
    }

    pub fn varsigma(&self) -> Complex<T> {
        Complex::new(self.xi[0], self.xi[1])
    }

    /// `ρ = +√(|ξ′|² + m² − λ²)` for `|λ|` up to the gap edge.
    pub fn rho(&self, lambda: T) -> Option<T> {
        let r2 = self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1] + self.m * self.m - lambda * lambda;
        (r2 >= T::zero()).then(|| r2.sqrt())
    }

    fn rho_in_gap(&self, lambda: T) -> Result<T> {
        let edge = self.gap_edge();
        match self.rho(lambda) {
            Some(r) if lambda.abs() < edge && r > T::zero() => Ok(r),
            _ => Err(Error::OutsideGap {
                lambda: lambda.as_f64(),
                edge: edge.as_f64(),
            }),
        }
    }

    /// `α′·ξ′ + α₀m`, the part of the symbol not involving `d/dz`.
    pub fn tangential_symbol(&self) -> CMat4<T> {
        let a = |j| dirac_alpha::<T>(j).expect("valid index");
        a(1).scale_real(self.xi[0]) + a(2).scale_real(self.xi[1]) + a(0).scale_real(self.m)
    }
}

pub fn model_essential_spectrum<T: Real>(p: &ModelProblem<T>) -> SpectrumSet<T> {
    let e = p.gap_edge();
    SpectrumSet::from_intervals(vec![Interval::at_most(-e), Interval::at_least(e)])
}

/// Amplitudes `h₁ = ((λ+m)e₁, Λe₁)`, `h₂ = (Λe₂, (λ−m)e₂)` of the solutions
/// `h e^{−ρz}`, with `Λ = [[−iρ, ς̄], [ς, iρ]]`.
pub fn model_h_vectors<T: Real>(p: &ModelProblem<T>, lambda: T, rho: T) -> (CVec4<T>, CVec4<T>) {
    let z = Complex::new(T::zero(), T::zero());
    let s = p.varsigma();
    let irho = Complex::new(T::zero(), rho);
    let h1 = CVec4([Complex::from(lambda + p.m), z, -irho, s]);
    let h2 = CVec4([s.conj(), irho, z, Complex::from(lambda - p.m)]);
    (h1, h2)
}

/// The boundary system: columns `hⱼ¹ + iσ₃hⱼ²`.
pub fn dispersion_matrix<T: Real>(p: &ModelProblem<T>, lambda: T) -> Result<CMat2<T>> {
    let rho = p.rho_in_gap(lambda)?;
    Ok(boundary_matrix(p, lambda, rho))
}

fn boundary_matrix<T: Real>(p: &ModelProblem<T>, lambda: T, rho: T) -> CMat2<T> {
    let (h1, h2) = model_h_vectors(p, lambda, rho);
    CMat2::from_columns(mit_trace(&h1), mit_trace(&h2))
}

/// `v¹ + iσ₃v²` for a 4-spinor `v = (v¹, v²)`.
pub fn mit_trace<T: Real>(v: &CVec4<T>) -> CVec2<T> {
    let i = Complex::new(T::zero(), T::one());
    CVec2([v.0[0] + i * v.0[2], v.0[1] - i * v.0[3]])
}

/// `2iρ(ρ + m)`.
pub fn dispersion_det<T: Real>(p: &ModelProblem<T>, lambda: T) -> Result<Complex<T>> {
    let rho = p.rho_in_gap(lambda)?;
    Ok(Complex::new(T::zero(), T::lit(2.0) * rho * (rho + p.m)))
}

/// Bound states in the gap: `±|ξ′|` when `m < 0`, nothing otherwise.
pub fn model_discrete_spectrum<T: Real>(p: &ModelProblem<T>) -> Vec<T> {
    if !(p.m < T::zero()) || p.m.abs() < T::lit(RHO_MIN) {
        return Vec::new();
    }
    let k = p.xi_norm();
    if k == T::zero() {
        vec![T::zero()]
    } else {
        vec![-k, k]
    }
}

/// Dimension of the solution space of the boundary system at `λ`.
pub fn nullity<T: Real>(p: &ModelProblem<T>, lambda: T) -> Result<usize> {
    let rho = p.rho_in_gap(lambda)?;
    if rho < T::lit(RHO_MIN) {
        return Ok(0);
    }
    let l = boundary_matrix(p, lambda, rho);
    let scale = T::one() + p.gap_edge();
    let tol = T::lit(1e-10) * scale;
    if l.max_abs() <= tol {
        Ok(2)
    } else if l.det().norm() <= tol * scale {
        Ok(1)
    } else {
        Ok(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayingSolution<T> {
    pub lambda: T,
    pub rho: T,
    /// Null vector `(C₁, C₂)` of the boundary system, scaled so `|v(0)| = 1`.
    pub coefficients: [Complex<T>; 2],
    pub nullity: usize,
    /// `v(0)`; the profile is `amplitude·e^{−ρz}`.
    pub amplitude: CVec4<T>,
    pub z: Vec<T>,
    pub profile: Vec<CVec4<T>>,
}

/// A decaying eigenfunction sampled on `z`.
pub fn decaying_solution<T: Real>(p: &ModelProblem<T>, lambda: T, z: &[T]) -> Result<DecayingSolution<T>> {
    let rho = p.rho_in_gap(lambda)?;
    let n = nullity(p, lambda)?;
    if n == 0 {
        return Err(Error::NotAnEigenvalue { lambda: lambda.as_f64() });
    }
    let l = boundary_matrix(p, lambda, rho);
    let (h1, h2) = model_h_vectors(p, lambda, rho);
    let c = if n == 2 {
        // Any combination works; prefer the amplitude with the larger norm.
        if h1.norm() >= h2.norm() {
            [Complex::from(T::one()), Complex::from(T::zero())]
        } else {
            [Complex::from(T::zero()), Complex::from(T::one())]
        }
    } else {
        let row = |r: usize| [l[(r, 0)], l[(r, 1)]];
        let (r0, r1) = (row(0), row(1));
        let w = |r: &[Complex<T>; 2]| r[0].norm_sqr() + r[1].norm_sqr();
        let r = if w(&r0) >= w(&r1) { r0 } else { r1 };
        [r[1], -r[0]]
    };
    let v0 = h1.scale(c[0]) + h2.scale(c[1]);
    let norm = v0.norm();
    let c = [c[0] / norm, c[1] / norm];
    let amp = h1.scale(c[0]) + h2.scale(c[1]);
    let profile = z.iter().map(|&zz| amp.scale(Complex::from((-rho * zz).exp()))).collect();
    Ok(DecayingSolution {
        lambda,
        rho,
        coefficients: c,
        nullity: n,
        amplitude: amp,
        z: z.to_vec(),
        profile,
    })
}

/// Largest `|(α′·ξ′ + iα₃ d/dz + α₀m − λ)v(z)|` over the samples, with the
/// derivative of `e^{−ρz}` taken exactly.
pub fn ode_residual<T: Real>(p: &ModelProblem<T>, sol: &DecayingSolution<T>) -> T {
    let a3: CMat4<T> = dirac_alpha(3).expect("valid index");
    let op = p.tangential_symbol() - a3.scale(Complex::new(T::zero(), sol.rho))
        - CMat4::identity().scale_real(sol.lambda);
    sol.profile
        .iter()
        .map(|v| (op * *v).max_abs())
        .fold(T::zero(), T::max)
}

/// `|v¹(0) + iσ₃v²(0)|`.
pub fn boundary_residual<T: Real>(sol: &DecayingSolution<T>) -> T {
    mit_trace(&sol.amplitude).max_abs()
}
