//! Boundary symbols of the Dirac operator and Lopatinsky–Shapiro checks.
//!
//! For a boundary point with local coordinates `(y′, z)`, `z` along the
//! inward normal, the half-line problem `(α′·ξ′ + iα₃ d/dz − iμ)ψ = 0` has the
//! decaying solutions `h₁e^{−ρz}, h₂e^{−ρz}` with `ρ = √(|ξ′|² + μ²)`.
//! Applying the boundary coefficients to them gives the 2×2 matrix `L`, and
//! the Lopatinsky–Shapiro condition asks that `|det L|` stays away from zero
//! on the unit sphere `|ξ′|² + μ² = 1` (or the unit circle with `μ = 0` for
//! the standard condition).
//!
//! Certification is numerical: `|det L|` is scanned on a deterministic grid
//! (Fibonacci lattice on the sphere, equispaced circle points) for every
//! boundary sample, the best node is polished by a local Nelder–Mead search,
//! and the smallest value found is reported together with the grid used. A
//! `Certified` verdict is evidence, not a proof.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, SamplePoint, SurfaceSampler};
use crate::clifford::{dirac_alpha, CMat2, CMat4, CVec2, CVec4};
use crate::error::{Error, Result};
use crate::geometry::{self, fibonacci_sphere, normalize, unit_circle, Vec3};
use crate::scalar::Real;

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_SPHERE_NODES: usize = 2048;
pub const DEFAULT_CIRCLE_NODES: usize = 720;
pub const MIN_GRID_NODES: usize = 8;

/// A tangential frequency `ξ′` together with the spectral parameter `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamCovector<T> {
    pub xi: [T; 2],
    pub mu: T,
}

impl<T: Real> ParamCovector<T> {
    pub fn new(xi: [T; 2], mu: T) -> Self {
        Self { xi, mu }
    }

    /// `ρ = +√(|ξ′|² + μ²)`.
    pub fn rho(&self) -> T {
        (self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1] + self.mu * self.mu).sqrt()
    }

    /// `ς = ξ₁ + iξ₂`.
    pub fn varsigma(&self) -> Complex<T> {
        Complex::new(self.xi[0], self.xi[1])
    }

    pub fn scaled(&self, t: T) -> Self {
        Self::new([self.xi[0] * t, self.xi[1] * t], self.mu * t)
    }

    fn from_point(p: &Vec3<T>) -> Self {
        Self::new([p[0], p[1]], p[2])
    }
}

fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `Λ = σ′·ξ′ − iρσ₃ = [[−iρ, ς̄], [ς, iρ]]`.
pub fn lambda_matrix<T: Real>(pc: &ParamCovector<T>) -> CMat2<T> {
    let irho = i::<T>() * pc.rho();
    let s = pc.varsigma();
    CMat2::new(-irho, s.conj(), s, irho)
}

/// `Θ = α′·ξ′ − iρα₃ + iμI₄ = [[iμI₂, Λ], [Λ, iμI₂]]`.
pub fn theta_matrix<T: Real>(pc: &ParamCovector<T>) -> CMat4<T> {
    let lam = lambda_matrix(pc);
    let imu = CMat2::identity().scale(i::<T>() * pc.mu);
    CMat4::from_blocks(imu, lam, lam, imu)
}

/// `α′·ξ′ − iρα₃ − iμI₄`, whose kernel holds the amplitudes of decaying
/// solutions.
pub fn decay_symbol<T: Real>(pc: &ParamCovector<T>) -> CMat4<T> {
    let a1: CMat4<T> = dirac_alpha(1).expect("valid index");
    let a2: CMat4<T> = dirac_alpha(2).expect("valid index");
    let a3: CMat4<T> = dirac_alpha(3).expect("valid index");
    a1.scale_real(pc.xi[0]) + a2.scale_real(pc.xi[1])
        - a3.scale(i::<T>() * pc.rho())
        - CMat4::identity().scale(i::<T>() * pc.mu)
}

/// The first and fourth columns of `Θ`: `h₁ = (iμe₁, Λe₁)`, `h₂ = (Λe₂, iμe₂)`.
pub fn h_vectors<T: Real>(pc: &ParamCovector<T>) -> (CVec4<T>, CVec4<T>) {
    let th = theta_matrix(pc);
    (th.column(0), th.column(3))
}

/// `L` from explicit local-frame coefficients: columns `b₁hⱼ¹ + b₂hⱼ²`.
pub fn ls_matrix_from<T: Real>(b1: &CMat2<T>, b2: &CMat2<T>, pc: &ParamCovector<T>) -> CMat2<T> {
    let (h1, h2) = h_vectors(pc);
    let col = |h: CVec4<T>| -> CVec2<T> { (*b1 * h.upper()) + (*b2 * h.lower()) };
    CMat2::from_columns(col(h1), col(h2))
}

pub fn ls_matrix<T: Real>(
    bc: &BoundaryCondition<T>,
    point: &SamplePoint<T>,
    pc: &ParamCovector<T>,
) -> CMat2<T> {
    let (b1, b2) = bc.coefficients(point);
    ls_matrix_from(&b1, &b2, pc)
}

/// `det L = μρ(a² − 1) + 2iaρ²` for the MIT condition with parameter `a`.
pub fn mit_det_closed_form<T: Real>(a: T, pc: &ParamCovector<T>) -> Complex<T> {
    let rho = pc.rho();
    Complex::new(pc.mu * rho * (a * a - T::one()), T::lit(2.0) * a * rho * rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LsMode {
    /// Parameter-dependent condition on `|ξ′|² + μ² = 1`.
    Parameter,
    /// Standard condition on `|ξ′| = 1`, `μ = 0`.
    Standard,
}

impl LsMode {
    pub fn default_nodes(self) -> usize {
        match self {
            LsMode::Parameter => DEFAULT_SPHERE_NODES,
            LsMode::Standard => DEFAULT_CIRCLE_NODES,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Certified,
    Failed,
}

/// The covector grid used by [`certify_ls`], in node order.
pub fn covector_grid<T: Real>(mode: LsMode, n: usize) -> Vec<ParamCovector<T>> {
    match mode {
        LsMode::Parameter => fibonacci_sphere::<T>(n)
            .iter()
            .map(ParamCovector::from_point)
            .collect(),
        LsMode::Standard => unit_circle::<T>(n)
            .into_iter()
            .map(|xi| ParamCovector::new(xi, T::zero()))
            .collect(),
    }
}

/// Typical distance between neighbouring grid nodes.
pub fn grid_spacing(mode: LsMode, n: usize) -> f64 {
    let n = n as f64;
    match mode {
        LsMode::Parameter => (4.0 * std::f64::consts::PI / n).sqrt(),
        LsMode::Standard => std::f64::consts::TAU / n,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point_id: usize,
    pub xi: [f64; 2],
    pub mu: f64,
    /// Grid node the search started from.
    pub grid_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LSCertificate {
    /// Smallest `|det L|` found (grid scan plus local refinement).
    pub inf_estimate: f64,
    /// Smallest `|det L|` over the grid nodes alone.
    pub grid_min: f64,
    pub witness: Witness,
    pub n_boundary_samples: usize,
    pub n_sphere_samples: usize,
    pub grid_spacing: f64,
    pub mode: LsMode,
    pub epsilon: f64,
    pub verdict: Verdict,
}

impl LSCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub mode: LsMode,
    pub n_nodes: usize,
    pub epsilon: f64,
    /// Polish the best grid node with a local search.
    pub refine: bool,
}

impl CertifyOptions {
    pub fn new(mode: LsMode) -> Self {
        Self {
            mode,
            n_nodes: mode.default_nodes(),
            epsilon: DEFAULT_EPSILON,
            refine: true,
        }
    }

    pub fn with_nodes(mut self, n: usize) -> Self {
        self.n_nodes = n;
        self
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn without_refinement(mut self) -> Self {
        self.refine = false;
        self
    }
}

struct LocalMin<T> {
    value: T,
    grid_min: T,
    grid_index: usize,
    at: ParamCovector<T>,
}

fn abs_det<T: Real>(b1: &CMat2<T>, b2: &CMat2<T>, pc: &ParamCovector<T>) -> T {
    ls_matrix_from(b1, b2, pc).det().norm()
}

fn local_minimum<T: Real>(
    b1: &CMat2<T>,
    b2: &CMat2<T>,
    grid: &[ParamCovector<T>],
    opts: &CertifyOptions,
) -> LocalMin<T> {
    let mut best = (T::infinity(), 0usize);
    for (k, pc) in grid.iter().enumerate() {
        let v = abs_det(b1, b2, pc);
        // NaN never wins; first index wins ties.
        if v < best.0 {
            best = (v, k);
        }
    }
    let (grid_min, grid_index) = best;
    let seed = grid[grid_index];
    let mut out = LocalMin {
        value: grid_min,
        grid_min,
        grid_index,
        at: seed,
    };
    if opts.refine && grid_min > T::zero() {
        let step = T::lit(grid_spacing(opts.mode, grid.len()));
        let (pc, v) = match opts.mode {
            LsMode::Parameter => refine_on_sphere(|pc| abs_det(b1, b2, pc), seed, step),
            LsMode::Standard => refine_on_circle(|pc| abs_det(b1, b2, pc), seed, step),
        };
        if v < out.value {
            out.value = v;
            out.at = pc;
        }
    }
    out
}

/// Nelder–Mead in the tangent plane at `seed`, mapped back to the sphere by
/// normalization.
fn refine_on_sphere<T: Real>(
    f: impl Fn(&ParamCovector<T>) -> T,
    seed: ParamCovector<T>,
    step: T,
) -> (ParamCovector<T>, T) {
    let p: Vec3<T> = [seed.xi[0], seed.xi[1], seed.mu];
    let frame = crate::boundary::BoundaryPointFrame::from_normal(p).expect("unit seed");
    let (e1, e2) = (frame.tangent1, frame.tangent2);
    let lift = |s: [T; 2]| -> ParamCovector<T> {
        let q = geometry::add(
            &p,
            &geometry::add(&geometry::scale(&e1, s[0]), &geometry::scale(&e2, s[1])),
        );
        ParamCovector::from_point(&normalize(&q).unwrap_or(p))
    };
    let (s, v) = nelder_mead_2d(|s| f(&lift(s)), step, 600);
    (lift(s), v)
}

fn refine_on_circle<T: Real>(
    f: impl Fn(&ParamCovector<T>) -> T,
    seed: ParamCovector<T>,
    step: T,
) -> (ParamCovector<T>, T) {
    let phi0 = seed.xi[1].atan2(seed.xi[0]);
    let at = |phi: T| ParamCovector::new([phi.cos(), phi.sin()], T::zero());
    let (phi, v) = golden_section(|phi| f(&at(phi)), phi0 - step, phi0 + step, 200);
    (at(phi), v)
}

fn golden_section<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, iters: usize) -> (T, T) {
    let g = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if (hi - lo).abs() <= T::epsilon() * (T::one() + lo.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Plain Nelder–Mead on `R²` starting from the simplex `{0, step·e₁, step·e₂}`.
pub(crate) fn nelder_mead_2d<T: Real>(f: impl Fn([T; 2]) -> T, step: T, max_iter: usize) -> ([T; 2], T) {
    let z = T::zero();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut simplex = [[z, z], [step, z], [z, step]].map(|x| (x, f(x)));
    let comb = |a: [T; 2], b: [T; 2], t: T| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let size = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| (x[0] - simplex[0].0[0]).abs().max((x[1] - simplex[0].0[1]).abs()))
            .fold(z, T::max);
        if size <= T::epsilon() * T::lit(4.0) || simplex[0].1 == z {
            break;
        }
        let centroid = comb(simplex[0].0, simplex[1].0, half);
        let worst = simplex[2];
        let refl = comb(worst.0, centroid, two);
        let fr = f(refl);
        if fr < simplex[0].1 {
            let exp = comb(worst.0, centroid, T::lit(3.0));
            let fe = f(exp);
            simplex[2] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (refl, fr);
        } else {
            let (target, ft) = if fr < worst.1 { (refl, fr) } else { (worst.0, worst.1) };
            let con = comb(target, centroid, half);
            let fc = f(con);
            if fc < ft {
                simplex[2] = (con, fc);
            } else {
                let best = simplex[0].0;
                for k in 1..3 {
                    let x = comb(best, simplex[k].0, half);
                    simplex[k] = (x, f(x));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}

/// Local condition at a single boundary sample.
pub fn certify_ls_local<T: Real>(
    bc: &BoundaryCondition<T>,
    point: &SamplePoint<T>,
    opts: &CertifyOptions,
) -> Result<LSCertificate> {
    check_nodes(opts)?;
    let grid = covector_grid::<T>(opts.mode, opts.n_nodes);
    let (b1, b2) = bc.coefficients(point);
    let m = local_minimum(&b1, &b2, &grid, opts);
    Ok(certificate(point.id, &m, 1, opts))
}

fn check_nodes(opts: &CertifyOptions) -> Result<()> {
    if opts.n_nodes < MIN_GRID_NODES {
        return Err(Error::GridTooSmall {
            n: opts.n_nodes,
            min: MIN_GRID_NODES,
        });
    }
    Ok(())
}

fn certificate<T: Real>(point_id: usize, m: &LocalMin<T>, n_points: usize, opts: &CertifyOptions) -> LSCertificate {
    let inf = m.value.as_f64();
    LSCertificate {
        inf_estimate: inf,
        grid_min: m.grid_min.as_f64(),
        witness: Witness {
            point_id,
            xi: [m.at.xi[0].as_f64(), m.at.xi[1].as_f64()],
            mu: m.at.mu.as_f64(),
            grid_index: m.grid_index,
        },
        n_boundary_samples: n_points,
        n_sphere_samples: opts.n_nodes,
        grid_spacing: grid_spacing(opts.mode, opts.n_nodes),
        mode: opts.mode,
        epsilon: opts.epsilon,
        verdict: if inf > opts.epsilon {
            Verdict::Certified
        } else {
            Verdict::Failed
        },
    }
}

/// Uniform condition over every sample of `sampler`: the minimum of the local
/// infima, ties resolved by sample order.
pub fn certify_ls<T: Real>(
    bc: &BoundaryCondition<T>,
    sampler: &SurfaceSampler<T>,
    opts: &CertifyOptions,
) -> Result<LSCertificate> {
    check_nodes(opts)?;
    if sampler.is_empty() {
        return Err(Error::EmptySampler);
    }
    let grid = covector_grid::<T>(opts.mode, opts.n_nodes);
    let locals: Vec<LocalMin<T>> = sampler
        .points()
        .par_iter()
        .map(|p| {
            let (b1, b2) = bc.coefficients(p);
            local_minimum(&b1, &b2, &grid, opts)
        })
        .collect();
    let mut best = 0;
    for (k, m) in locals.iter().enumerate() {
        if m.value < locals[best].value {
            best = k;
        }
    }
    Ok(certificate(sampler.points()[best].id, &locals[best], sampler.len(), opts))
}

/// Re-evaluate `|det L|` at a certificate's witness.
pub fn witness_value<T: Real>(bc: &BoundaryCondition<T>, sampler: &SurfaceSampler<T>, cert: &LSCertificate) -> Option<f64> {
    let p = sampler.points().iter().find(|p| p.id == cert.witness.point_id)?;
    let pc = ParamCovector::new([T::lit(cert.witness.xi[0]), T::lit(cert.witness.xi[1])], T::lit(cert.witness.mu));
    Some(ls_matrix(bc, p, &pc).det().norm().as_f64())
}

/// One grid node of an LS scan, as written to the CSV dump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub point_id: usize,
    pub xi1: f64,
    pub xi2: f64,
    pub mu: f64,
    pub re_det: f64,
    pub im_det: f64,
    pub abs_det: f64,
}

/// `det L` at every (sample, grid node) pair, point-major.
pub fn grid_rows<T: Real>(
    bc: &BoundaryCondition<T>,
    sampler: &SurfaceSampler<T>,
    mode: LsMode,
    n_nodes: usize,
) -> Vec<GridRow> {
    let grid = covector_grid::<T>(mode, n_nodes);
    let mut rows = Vec::with_capacity(sampler.len() * grid.len());
    for p in sampler.points() {
        let (b1, b2) = bc.coefficients(p);
        for pc in &grid {
            let d = ls_matrix_from(&b1, &b2, pc).det();
            rows.push(GridRow {
                point_id: p.id,
                xi1: pc.xi[0].as_f64(),
                xi2: pc.xi[1].as_f64(),
                mu: pc.mu.as_f64(),
                re_det: d.re.as_f64(),
                im_det: d.im.as_f64(),
                abs_det: d.norm().as_f64(),
            });
        }
    }
    rows
}
