//! Sampling estimates of `limsup Φ` and `liminf Φ` at infinity.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{fibonacci_sphere, scale, Vec3};
use crate::scalar::Real;

pub const DEFAULT_N_SHELLS: usize = 3;
pub const DEFAULT_DIRECTIONS: usize = 256;
pub const DEFAULT_RADII_PER_SHELL: usize = 48;
pub const DEFAULT_SO1_THRESHOLD: f64 = 1e-3;

pub type VectorField<T> = Arc<dyn Fn(&Vec3<T>) -> Vec3<T> + Send + Sync>;
type ScalarField<T> = Arc<dyn Fn(&Vec3<T>) -> T + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PotentialFamily<T> {
    Const { c: T },
    RadialTable { radii: Vec<T>, values: Vec<T> },
    SoOscillating { c: T, d: T, beta: T },
    Custom,
}

/// Electric potential `Φ` and optional magnetic potential `A`.
#[derive(Clone)]
pub struct PotentialField<T> {
    family: PotentialFamily<T>,
    phi: ScalarField<T>,
    magnetic: Option<VectorField<T>>,
}

impl<T: fmt::Debug> fmt::Debug for PotentialField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialField")
            .field("family", &self.family)
            .field("magnetic", &self.magnetic.is_some())
            .finish()
    }
}

impl<T: Real> PotentialField<T> {
    pub fn constant(c: T) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite("constant potential"));
        }
        Ok(Self {
            family: PotentialFamily::Const { c },
            phi: Arc::new(move |_| c),
            magnetic: None,
        })
    }

    /// Complex constants are accepted only when the imaginary part vanishes.
    pub fn constant_complex(c: Complex<T>) -> Result<Self> {
        if c.im != T::zero() {
            return Err(Error::ComplexPotential);
        }
        Self::constant(c.re)
    }

    /// `Φ(x) = c + d·sin(β·log(1 + |x|))`.
    pub fn so_oscillating(c: T, d: T, beta: T) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && beta.is_finite()) {
            return Err(Error::NonFinite("so-oscillating parameters"));
        }
        Ok(Self {
            family: PotentialFamily::SoOscillating { c, d, beta },
            phi: Arc::new(move |x| c + d * (beta * (T::one() + crate::geometry::norm(x)).ln()).sin()),
            magnetic: None,
        })
    }

    /// Radial profile, linear between nodes and constant beyond the ends.
    pub fn radial_table(radii: Vec<T>, values: Vec<T>) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidTable(format!(
                "{} radii for {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("radial table"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] < T::zero() {
            return Err(Error::InvalidTable("radii must be nonnegative and increasing".into()));
        }
        let (r, v) = (radii.clone(), values.clone());
        Ok(Self {
            family: PotentialFamily::RadialTable { radii, values },
            phi: Arc::new(move |x| interpolate(&r, &v, crate::geometry::norm(x))),
            magnetic: None,
        })
    }

    pub fn custom(phi: impl Fn(&Vec3<T>) -> T + Send + Sync + 'static) -> Self {
        Self {
            family: PotentialFamily::Custom,
            phi: Arc::new(phi),
            magnetic: None,
        }
    }

    pub fn with_magnetic(mut self, a: impl Fn(&Vec3<T>) -> Vec3<T> + Send + Sync + 'static) -> Self {
        self.magnetic = Some(Arc::new(a));
        self
    }

    pub fn family(&self) -> &PotentialFamily<T> {
        &self.family
    }

    pub fn phi(&self, x: &Vec3<T>) -> T {
        (self.phi)(x)
    }

    pub fn magnetic(&self, x: &Vec3<T>) -> Option<Vec3<T>> {
        self.magnetic.as_ref().map(|a| a(x))
    }
}

fn interpolate<T: Real>(r: &[T], v: &[T], x: T) -> T {
    if x <= r[0] {
        return v[0];
    }
    let last = r.len() - 1;
    if x >= r[last] {
        return v[last];
    }
    let k = r.partition_point(|&ri| ri <= x);
    let (r0, r1, v0, v1) = (r[k - 1], r[k], v[k - 1], v[k]);
    v0 + (v1 - v0) * (x - r0) / (r1 - r0)
}

#[derive(Clone, Copy, Debug)]
pub struct AsymptoticsOptions<'a, T> {
    /// Increasing radii `R₁ < … < R_K`; shell `k` is `[R_{k−1}, R_k]`.
    pub schedule: &'a [T],
    pub n_shells: usize,
    pub n_directions: usize,
    pub radii_per_shell: usize,
}

/// `R_k = 10^k`, `k = 1..6`.
pub fn default_schedule<T: Real>() -> Vec<T> {
    (1..=6).map(|k| T::lit(10f64.powi(k))).collect()
}

impl<'a, T: Real> AsymptoticsOptions<'a, T> {
    pub fn new(schedule: &'a [T]) -> Self {
        Self {
            schedule,
            n_shells: DEFAULT_N_SHELLS,
            n_directions: DEFAULT_DIRECTIONS,
            radii_per_shell: DEFAULT_RADII_PER_SHELL,
        }
    }
}

/// Extrema and gradient bound over one shell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellRecord<T> {
    pub r_inner: T,
    pub r_outer: T,
    pub sup: T,
    pub inf: T,
    pub max_gradient: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectionalExtrema<T> {
    pub direction: Vec3<T>,
    pub sup: T,
    pub inf: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticEstimate<T> {
    pub m_sup: T,
    pub m_inf: T,
    pub schedule: Vec<T>,
    pub n_directions: usize,
    pub n_shells: usize,
    pub radii_per_shell: usize,
    /// Largest sampled `|∇Φ|` over the shells used.
    pub so1_residual: T,
    /// Largest sampled Frobenius norm of `∇A`, when `A` is present.
    pub magnetic_so1_residual: Option<T>,
    /// Shells in increasing radius.
    pub shells: Vec<ShellRecord<T>>,
    pub directional: Vec<DirectionalExtrema<T>>,
}

impl<T: Real> AsymptoticEstimate<T> {
    /// An estimate given directly by its limit values.
    pub fn from_bounds(m_sup: T, m_inf: T) -> Result<Self> {
        if !(m_sup.is_finite() && m_inf.is_finite()) {
            return Err(Error::NonFinite("asymptotic bounds"));
        }
        if m_inf > m_sup {
            return Err(Error::InvalidBounds {
                sup: m_sup.as_f64(),
                inf: m_inf.as_f64(),
            });
        }
        Ok(Self {
            m_sup,
            m_inf,
            schedule: Vec::new(),
            n_directions: 0,
            n_shells: 0,
            radii_per_shell: 0,
            so1_residual: T::zero(),
            magnetic_so1_residual: None,
            shells: Vec::new(),
            directional: Vec::new(),
        })
    }

    /// Warnings for gradients that have not decayed below `threshold`.
    pub fn warnings(&self, threshold: T) -> Vec<String> {
        let mut w = Vec::new();
        if self.so1_residual > threshold {
            w.push(format!(
                "potential gradient {:e} on the outer shells exceeds {:e}; limit values may be unreliable",
                self.so1_residual.as_f64(),
                threshold.as_f64()
            ));
        }
        if let Some(g) = self.magnetic_so1_residual {
            if g > threshold {
                w.push(format!(
                    "magnetic potential gradient {:e} on the outer shells exceeds {:e}",
                    g.as_f64(),
                    threshold.as_f64()
                ));
            }
        }
        w
    }
}

struct Sample<T> {
    phi: T,
    grad: T,
    mag_grad: Option<T>,
}

fn sample<T: Real>(p: &PotentialField<T>, x: &Vec3<T>) -> Sample<T> {
    let r = crate::geometry::norm(x);
    let h = T::lit(1e-4) * (T::one() + r);
    let two_h = h + h;
    let shifted = |k: usize, s: T| {
        let mut y = *x;
        y[k] = y[k] + s;
        y
    };
    let mut g2 = T::zero();
    let mut a2 = T::zero();
    for k in 0..3 {
        let (xp, xm) = (shifted(k, h), shifted(k, -h));
        let d = (p.phi(&xp) - p.phi(&xm)) / two_h;
        g2 = g2 + d * d;
        if let (Some(ap), Some(am)) = (p.magnetic(&xp), p.magnetic(&xm)) {
            for j in 0..3 {
                let d = (ap[j] - am[j]) / two_h;
                a2 = a2 + d * d;
            }
        }
    }
    Sample {
        phi: p.phi(x),
        grad: g2.sqrt(),
        mag_grad: p.magnetic.as_ref().map(|_| a2.sqrt()),
    }
}

/// Extrema of `Φ` over the outermost `n_shells` shells of the schedule.
///
/// Each shell is sampled on `radii_per_shell` log-spaced radii times a
/// Fibonacci set of directions.
pub fn estimate_asymptotics<T: Real>(p: &PotentialField<T>, opts: &AsymptoticsOptions<'_, T>) -> Result<AsymptoticEstimate<T>> {
    let sched = opts.schedule;
    if opts.n_shells == 0 || sched.len() < opts.n_shells {
        return Err(Error::ScheduleTooShort {
            have: sched.len(),
            need: opts.n_shells.max(1),
        });
    }
    if sched.iter().any(|r| !r.is_finite() || *r <= T::zero()) || sched.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ScheduleNotIncreasing);
    }
    if opts.n_directions == 0 || opts.radii_per_shell == 0 {
        return Err(Error::InvalidGrid("direction and radius counts must be positive".into()));
    }
    let dirs = fibonacci_sphere::<T>(opts.n_directions);
    let first = sched.len() - opts.n_shells;

    let mut shells = Vec::with_capacity(opts.n_shells);
    let mut directional: Vec<DirectionalExtrema<T>> = dirs
        .iter()
        .map(|d| DirectionalExtrema {
            direction: *d,
            sup: T::neg_infinity(),
            inf: T::infinity(),
        })
        .collect();
    let mut mag_max: Option<T> = None;
    for k in first..sched.len() {
        let r_outer = sched[k];
        let r_inner = if k == 0 { r_outer } else { sched[k - 1] };
        let radii = log_spaced(r_inner, r_outer, opts.radii_per_shell);
        // Row-major over (direction, radius); reductions below run in order.
        let samples: Vec<Sample<T>> = (0..dirs.len() * radii.len())
            .into_par_iter()
            .map(|idx| {
                let (d, j) = (idx / radii.len(), idx % radii.len());
                sample(p, &scale(&dirs[d], radii[j]))
            })
            .collect();
        let mut rec = ShellRecord {
            r_inner,
            r_outer,
            sup: T::neg_infinity(),
            inf: T::infinity(),
            max_gradient: T::zero(),
        };
        for (idx, s) in samples.iter().enumerate() {
            if !s.phi.is_finite() {
                return Err(Error::NonFinite("potential sample"));
            }
            rec.sup = rec.sup.max(s.phi);
            rec.inf = rec.inf.min(s.phi);
            rec.max_gradient = rec.max_gradient.max(s.grad);
            let de = &mut directional[idx / radii.len()];
            de.sup = de.sup.max(s.phi);
            de.inf = de.inf.min(s.phi);
            if let Some(g) = s.mag_grad {
                mag_max = Some(mag_max.map_or(g, |m: T| m.max(g)));
            }
        }
        shells.push(rec);
    }
    let m_sup = shells.iter().map(|s| s.sup).fold(T::neg_infinity(), T::max);
    let m_inf = shells.iter().map(|s| s.inf).fold(T::infinity(), T::min);
    let so1 = shells.iter().map(|s| s.max_gradient).fold(T::zero(), T::max);
    Ok(AsymptoticEstimate {
        m_sup,
        m_inf,
        schedule: sched.to_vec(),
        n_directions: opts.n_directions,
        n_shells: opts.n_shells,
        radii_per_shell: opts.radii_per_shell,
        so1_residual: so1,
        magnetic_so1_residual: mag_max,
        shells,
        directional,
    })
}

fn log_spaced<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    if n == 1 || a == b {
        return vec![b];
    }
    let (la, lb) = (a.ln(), b.ln());
    let den = T::lit((n - 1) as f64);
    (0..n)
        .map(|j| {
            if j == n - 1 {
                b
            } else {
                (la + (lb - la) * T::lit(j as f64) / den).exp()
            }
        })
        .collect()
}
