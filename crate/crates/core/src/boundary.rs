//! Boundary conditions `b₁u¹ + b₂u² = 0` on sampled surfaces.
//!
//! A surface is represented only by point samples carrying an orthonormal
//! frame `(t₁, t₂, ν)`. The normal `ν` is the one that enters the MIT
//! condition and also the `z` axis of the local half-space problem, pointing
//! into the domain. Coefficients are reported in the local frame, where
//! `σ·ν` becomes `σ₃`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::clifford::{sigma_dot, CMat2};
use crate::error::{Error, Result};
use crate::geometry::{self, cross, dot, fibonacci_sphere, norm, normalize, Vec3};
use crate::scalar::Real;

pub const DEFAULT_SPHERE_POINTS: usize = 512;
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-10;
const FRAME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPointFrame<T> {
    pub normal: Vec3<T>,
    pub tangent1: Vec3<T>,
    pub tangent2: Vec3<T>,
}

impl<T: Real> BoundaryPointFrame<T> {
    /// Validate a user supplied triad: orthonormal and `t₁ × t₂ = ν`.
    pub fn new(normal: Vec3<T>, tangent1: Vec3<T>, tangent2: Vec3<T>) -> Result<Self> {
        let f = Self {
            normal,
            tangent1,
            tangent2,
        };
        f.validate()?;
        Ok(f)
    }

    /// Complete a unit normal to a right-handed triad.
    pub fn from_normal(normal: Vec3<T>) -> Result<Self> {
        let nu = normalize(&normal).ok_or_else(|| Error::InvalidFrame("zero normal".into()))?;
        // Seed with the coordinate axis least aligned with ν.
        let mut k = 0;
        for j in 1..3 {
            if nu[j].abs() < nu[k].abs() {
                k = j;
            }
        }
        let mut seed = [T::zero(); 3];
        seed[k] = T::one();
        let t1 = normalize(&geometry::sub(&seed, &geometry::scale(&nu, dot(&seed, &nu))))
            .ok_or_else(|| Error::InvalidFrame("degenerate tangent".into()))?;
        let t2 = cross(&nu, &t1);
        Self::new(nu, t1, t2)
    }

    fn tol() -> T {
        T::lit(FRAME_TOL).max(T::epsilon() * T::lit(64.0))
    }

    pub fn validate(&self) -> Result<()> {
        let tol = Self::tol();
        let vs = [&self.tangent1, &self.tangent2, &self.normal];
        if vs.iter().flat_map(|v| v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("boundary frame"));
        }
        for v in vs {
            if (norm(v) - T::one()).abs() > tol {
                return Err(Error::InvalidFrame(format!("vector {v:?} is not unit")));
            }
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            if dot(vs[a], vs[b]).abs() > tol {
                return Err(Error::InvalidFrame("vectors are not orthogonal".into()));
            }
        }
        if dot(&cross(&self.tangent1, &self.tangent2), &self.normal) < T::zero() {
            return Err(Error::InvalidFrame("triad is left-handed".into()));
        }
        Ok(())
    }

    /// Coordinates of an ambient vector in the local frame `(t₁, t₂, ν)`.
    pub fn to_local(&self, v: &Vec3<T>) -> Vec3<T> {
        [dot(&self.tangent1, v), dot(&self.tangent2, v), dot(&self.normal, v)]
    }

    /// The SU(2) matrix `U` with `U (σ·v) U† = σ·(Rv)`, where `R` has columns
    /// `t₁, t₂, ν` (local to ambient rotation).
    pub fn spinor_rotation(&self) -> CMat2<T> {
        let r = |i: usize, j: usize| -> T {
            let col = match j {
                0 => &self.tangent1,
                1 => &self.tangent2,
                _ => &self.normal,
            };
            col[i]
        };
        let quarter = T::lit(0.25);
        let (m00, m11, m22) = (r(0, 0), r(1, 1), r(2, 2));
        let trace = m00 + m11 + m22;
        // Quaternion (w, x, y, z) of R, branch chosen for numerical stability.
        let (w, x, y, z) = if trace > T::zero() {
            let s = (trace + T::one()).sqrt() * T::lit(2.0);
            (quarter * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s)
        } else if m00 > m11 && m00 > m22 {
            let s = (T::one() + m00 - m11 - m22).sqrt() * T::lit(2.0);
            ((r(2, 1) - r(1, 2)) / s, quarter * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s)
        } else if m11 > m22 {
            let s = (T::one() + m11 - m00 - m22).sqrt() * T::lit(2.0);
            ((r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, quarter * s, (r(1, 2) + r(2, 1)) / s)
        } else {
            let s = (T::one() + m22 - m00 - m11).sqrt() * T::lit(2.0);
            ((r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, quarter * s)
        };
        // U = w·I − i(xσ₁ + yσ₂ + zσ₃)
        let axis = sigma_dot([x, y, z]).scale(Complex::new(T::zero(), -T::one()));
        CMat2::identity().scale_real(w) + axis
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint<T> {
    pub id: usize,
    pub position: Vec3<T>,
    pub frame: BoundaryPointFrame<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceKind {
    ExteriorOfBall { radius: f64 },
    HalfSpace,
    Cone { half_angle: f64 },
    UserList,
}

#[derive(Clone, Debug)]
pub struct SurfaceSampler<T> {
    points: Vec<SamplePoint<T>>,
    kind: SurfaceKind,
}

impl<T: Real> SurfaceSampler<T> {
    fn build(points: Vec<SamplePoint<T>>, kind: SurfaceKind) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySampler);
        }
        for p in &points {
            p.frame.validate()?;
        }
        Ok(Self { points, kind })
    }

    /// Boundary of the exterior of a ball: Fibonacci points on the sphere of
    /// radius `radius`, normal pointing away from the centre (into the domain).
    pub fn sphere(radius: T, n: usize) -> Result<Self> {
        let points = fibonacci_sphere::<T>(n)
            .into_iter()
            .enumerate()
            .map(|(id, u)| {
                Ok(SamplePoint {
                    id,
                    position: geometry::scale(&u, radius),
                    frame: BoundaryPointFrame::from_normal(u)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(
            points,
            SurfaceKind::ExteriorOfBall {
                radius: radius.as_f64(),
            },
        )
    }

    /// The plane `z = 0` bounding `z > 0`, sampled on an `n_side × n_side`
    /// grid over `[−extent, extent]²`.
    pub fn half_space(n_side: usize, extent: T) -> Result<Self> {
        let z = T::zero();
        let o = T::one();
        let frame = BoundaryPointFrame::new([z, z, o], [o, z, z], [z, o, z])?;
        let step = if n_side > 1 {
            T::lit(2.0) * extent / T::from_usize(n_side - 1).expect("size")
        } else {
            T::zero()
        };
        let start = if n_side > 1 { -extent } else { T::zero() };
        let mut points = Vec::with_capacity(n_side * n_side);
        for i in 0..n_side {
            for j in 0..n_side {
                let x = start + step * T::from_usize(i).expect("index");
                let y = start + step * T::from_usize(j).expect("index");
                points.push(SamplePoint {
                    id: points.len(),
                    position: [x, y, z],
                    frame,
                });
            }
        }
        Self::build(points, SurfaceKind::HalfSpace)
    }

    /// Lateral surface of the cone `{x : ∠(x, e₃) < γ}` at the given radii.
    /// The normal points towards the axis, into the cone.
    pub fn cone(half_angle: T, radii: &[T], n_azimuth: usize) -> Result<Self> {
        if !(half_angle > T::zero() && half_angle < T::PI()) {
            return Err(Error::InvalidFrame(format!(
                "cone half-angle {half_angle:?} outside (0, π)"
            )));
        }
        let (sg, cg) = half_angle.sin_cos();
        let mut points = Vec::with_capacity(radii.len() * n_azimuth);
        for &r in radii {
            for [c, s] in geometry::unit_circle::<T>(n_azimuth) {
                let e_r = [sg * c, sg * s, cg];
                let e_phi = [-s, c, T::zero()];
                let e_theta = [cg * c, cg * s, -sg];
                let frame = BoundaryPointFrame::new(geometry::scale(&e_theta, -T::one()), e_r, e_phi)?;
                points.push(SamplePoint {
                    id: points.len(),
                    position: geometry::scale(&e_r, r),
                    frame,
                });
            }
        }
        Self::build(
            points,
            SurfaceKind::Cone {
                half_angle: half_angle.as_f64(),
            },
        )
    }

    /// User supplied `(position, normal)` pairs; tangents are completed
    /// automatically.
    pub fn from_points(list: &[(Vec3<T>, Vec3<T>)]) -> Result<Self> {
        let points = list
            .iter()
            .enumerate()
            .map(|(id, (position, normal))| {
                Ok(SamplePoint {
                    id,
                    position: *position,
                    frame: BoundaryPointFrame::from_normal(*normal)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(points, SurfaceKind::UserList)
    }

    pub fn from_samples(points: Vec<SamplePoint<T>>, kind: SurfaceKind) -> Result<Self> {
        Self::build(points, kind)
    }

    pub fn points(&self) -> &[SamplePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }
}

/// A coefficient defined on the boundary: constant, a table with
/// nearest-sample lookup, or an arbitrary function of position.
#[derive(Clone)]
pub enum Field<T, V> {
    Const(V),
    Table { points: Vec<Vec3<T>>, values: Vec<V> },
    Func(Arc<dyn Fn(&Vec3<T>) -> V + Send + Sync>),
}

pub type Coefficient<T> = Field<T, T>;
pub type MatrixField<T> = Field<T, CMat2<T>>;

impl<T: fmt::Debug, V: fmt::Debug> fmt::Debug for Field<T, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Const(v) => f.debug_tuple("Const").field(v).finish(),
            Field::Table { points, values } => f
                .debug_struct("Table")
                .field("points", points)
                .field("values", values)
                .finish(),
            Field::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl<T: Real, V: Clone + Send + Sync + 'static> Field<T, V> {
    pub fn table(points: Vec<Vec3<T>>, values: Vec<V>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidTable("no points".into()));
        }
        if points.len() != values.len() {
            return Err(Error::InvalidTable(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        Ok(Field::Table { points, values })
    }

    pub fn func(f: impl Fn(&Vec3<T>) -> V + Send + Sync + 'static) -> Self {
        Field::Func(Arc::new(f))
    }

    pub fn eval(&self, x: &Vec3<T>) -> V {
        match self {
            Field::Const(v) => v.clone(),
            Field::Table { points, values } => {
                let mut best = 0;
                let mut best_d = T::infinity();
                for (k, p) in points.iter().enumerate() {
                    let d = dot(&geometry::sub(p, x), &geometry::sub(p, x));
                    if d < best_d {
                        best_d = d;
                        best = k;
                    }
                }
                values[best].clone()
            }
            Field::Func(f) => f(x),
        }
    }

    /// Pointwise image under `g`, preserving the representation.
    pub fn map<W: Clone + Send + Sync + 'static>(
        &self,
        g: impl Fn(V) -> W + Send + Sync + 'static,
    ) -> Field<T, W> {
        match self {
            Field::Const(v) => Field::Const(g(v.clone())),
            Field::Table { points, values } => Field::Table {
                points: points.clone(),
                values: values.iter().cloned().map(g).collect(),
            },
            Field::Func(f) => {
                let f = Arc::clone(f);
                Field::Func(Arc::new(move |x| g(f(x))))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum BoundaryCondition<T> {
    /// `u¹ + i a (σ·ν) u² = 0`.
    Mit { a: Coefficient<T> },
    /// `θ(I + iα₀(α·ν))u = (I + iα₀(α·ν))α₀u`, kept in its first-row form
    /// `(θ−1)u¹ + i(θ+1)(σ·ν)u² = 0`.
    Behrndt { theta: Coefficient<T> },
    /// Arbitrary coefficient pair, given directly in the local frame.
    Generic {
        b1: MatrixField<T>,
        b2: MatrixField<T>,
    },
}

pub fn mit_condition<T: Real>(a: Coefficient<T>) -> BoundaryCondition<T> {
    BoundaryCondition::Mit { a }
}

impl<T: Real> BoundaryCondition<T> {
    pub fn family(&self) -> &'static str {
        match self {
            BoundaryCondition::Mit { .. } => "mit",
            BoundaryCondition::Behrndt { .. } => "behrndt",
            BoundaryCondition::Generic { .. } => "generic",
        }
    }

    /// `(b₁, b₂)` at a sample, in the sample's local frame (`σ·ν → σ₃`).
    pub fn coefficients(&self, p: &SamplePoint<T>) -> (CMat2<T>, CMat2<T>) {
        let i = Complex::new(T::zero(), T::one());
        let s3 = sigma_dot([T::zero(), T::zero(), T::one()]);
        match self {
            BoundaryCondition::Mit { a } => {
                let a = a.eval(&p.position);
                (CMat2::identity(), s3.scale(i * a))
            }
            BoundaryCondition::Behrndt { theta } => {
                let t = theta.eval(&p.position);
                (
                    CMat2::identity().scale_real(t - T::one()),
                    s3.scale(i * (t + T::one())),
                )
            }
            BoundaryCondition::Generic { b1, b2 } => (b1.eval(&p.position), b2.eval(&p.position)),
        }
    }

    /// `(b₁, b₂)` in ambient coordinates: `U bⱼ U†` with `U` the frame's
    /// spinor rotation.
    pub fn coefficients_ambient(&self, p: &SamplePoint<T>) -> (CMat2<T>, CMat2<T>) {
        let (b1, b2) = self.coefficients(p);
        let u = p.frame.spinor_rotation();
        let ud = u.adjoint();
        (u * b1 * ud, u * b2 * ud)
    }

    /// The normalized coefficient `𝔟 = b₁⁻¹b₂` (local frame), if `b₁` is invertible.
    pub fn normalized(&self, p: &SamplePoint<T>) -> Result<CMat2<T>> {
        let (b1, b2) = self.coefficients(p);
        let inv = b1.inverse().ok_or(Error::NonNormalizable { point: p.id })?;
        Ok(inv * b2)
    }
}

/// Convert a Behrndt parameter `θ` into the MIT parameter `a = (θ+1)/(θ−1)`.
///
/// Requires `|θ − 1|` bounded away from zero on every sample; a table is
/// additionally checked at each of its own nodes.
// The form (1+θ)/(1−θ) also appears in the literature; it is the negative of
// this one and has the same modulus.
pub fn behrndt_to_mit<T: Real>(
    theta: &Coefficient<T>,
    sampler: &SurfaceSampler<T>,
) -> Result<Coefficient<T>> {
    let min_gap = T::lit(1e-12);
    for p in sampler.points() {
        let t = theta.eval(&p.position);
        if !t.is_finite() || (t - T::one()).abs() <= min_gap {
            return Err(Error::DegenerateTheta {
                point: p.id,
                theta: t.as_f64(),
            });
        }
    }
    if let Field::Table { values, .. } = theta {
        if let Some((k, t)) = values
            .iter()
            .enumerate()
            .find(|(_, t)| (**t - T::one()).abs() <= min_gap)
        {
            return Err(Error::DegenerateTheta {
                point: k,
                theta: t.as_f64(),
            });
        }
    }
    Ok(theta.map(|t: T| (t + T::one()) / (t - T::one())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub max_residual: f64,
    pub worst_point: usize,
    pub tol: f64,
    pub passed: bool,
    pub n_points: usize,
}

/// `‖𝔟*(σ·ν) + (σ·ν)𝔟‖` in ambient coordinates (spectral norm).
pub fn symmetry_residual<T: Real>(b: &CMat2<T>, normal: &Vec3<T>) -> T {
    let s = sigma_dot(*normal);
    (b.adjoint() * s + s * *b).op_norm()
}

/// Check `𝔟*(σ·ν) + (σ·ν)𝔟 = 0` at every sample, with `𝔟 = b₁⁻¹b₂`.
pub fn check_symmetry_condition<T: Real>(
    bc: &BoundaryCondition<T>,
    sampler: &SurfaceSampler<T>,
    tol: T,
) -> Result<SymmetryReport> {
    if sampler.is_empty() {
        return Err(Error::EmptySampler);
    }
    let mut worst = (T::zero(), sampler.points()[0].id);
    for p in sampler.points() {
        let b = bc.normalized(p)?;
        let u = p.frame.spinor_rotation();
        let b_amb = u * b * u.adjoint();
        let r = symmetry_residual(&b_amb, &p.frame.normal);
        if !(r <= worst.0) {
            worst = (r, p.id);
        }
    }
    Ok(SymmetryReport {
        max_residual: worst.0.as_f64(),
        worst_point: worst.1,
        tol: tol.as_f64(),
        passed: worst.0 <= tol,
        n_points: sampler.len(),
    })
}
