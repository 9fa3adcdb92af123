//! Pauli and Dirac matrices in the standard representation.
//!
//! Everything here is generic over [`Scalar`], so the same constructors
//! produce exact Gaussian-integer matrices (`T = i64`) and floating point
//! ones (`T = f64`). 4×4 matrices and vectors split into 2-blocks as
//! `u = (u¹, u²)`: rows/columns 0..2 are the upper block, 2..4 the lower.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn c_one<T: Scalar>() -> Complex<T> {
    c(T::one(), T::zero())
}

fn c_i<T: Scalar>() -> Complex<T> {
    c(T::zero(), T::one())
}

fn c_zero<T: Scalar>() -> Complex<T> {
    c(T::zero(), T::zero())
}

fn lift<T: Scalar>(x: T) -> Complex<T> {
    c(x, T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4<T> {
    pub m: [[Complex<T>; 4]; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CVec2<T>(pub [Complex<T>; 2]);

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CVec4<T>(pub [Complex<T>; 4]);

macro_rules! square_matrix {
    ($mat:ident, $vec:ident, $n:expr) => {
        impl<T: Scalar> $mat<T> {
            pub fn zero() -> Self {
                Self { m: [[c_zero(); $n]; $n] }
            }

            pub fn identity() -> Self {
                let mut out = Self::zero();
                for k in 0..$n {
                    out.m[k][k] = c_one();
                }
                out
            }

            pub fn from_rows(m: [[Complex<T>; $n]; $n]) -> Self {
                Self { m }
            }

            pub fn scale(&self, s: Complex<T>) -> Self {
                let mut out = *self;
                for row in out.m.iter_mut() {
                    for x in row.iter_mut() {
                        *x = *x * s;
                    }
                }
                out
            }

            pub fn scale_real(&self, s: T) -> Self {
                self.scale(lift(s))
            }

            /// Conjugate transpose.
            pub fn adjoint(&self) -> Self {
                let mut out = Self::zero();
                for r in 0..$n {
                    for k in 0..$n {
                        out.m[r][k] = self.m[k][r].conj();
                    }
                }
                out
            }

            pub fn column(&self, k: usize) -> $vec<T> {
                let mut v = [c_zero(); $n];
                for r in 0..$n {
                    v[r] = self.m[r][k];
                }
                $vec(v)
            }

            pub fn trace(&self) -> Complex<T> {
                (0..$n).fold(c_zero(), |acc, k| acc + self.m[k][k])
            }

            /// Largest squared modulus over all entries. Exact for integer `T`.
            pub fn max_norm_sqr(&self) -> T {
                let mut best = T::zero();
                for row in self.m.iter() {
                    for x in row.iter() {
                        let n = x.norm_sqr();
                        if n > best {
                            best = n;
                        }
                    }
                }
                best
            }

            pub fn is_zero(&self) -> bool {
                self.m.iter().flatten().all(|x| x.is_zero())
            }

            /// Anticommutator `AB + BA`.
            pub fn anticommutator(&self, other: &Self) -> Self {
                *self * *other + *other * *self
            }
        }

        impl<T: Real> $mat<T> {
            /// Largest entrywise modulus.
            pub fn max_abs(&self) -> T {
                self.max_norm_sqr().sqrt()
            }

            pub fn max_abs_diff(&self, other: &Self) -> T {
                (*self - *other).max_abs()
            }

            pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
                self.max_abs_diff(other) <= tol
            }

            pub fn is_finite(&self) -> bool {
                self.m.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
            }

            pub fn is_hermitian(&self, tol: T) -> bool {
                self.approx_eq(&self.adjoint(), tol)
            }

            pub fn cast<U: Real>(&self) -> $mat<U> {
                let mut out = $mat::<U>::zero();
                for r in 0..$n {
                    for k in 0..$n {
                        let x = self.m[r][k];
                        out.m[r][k] = Complex::new(
                            U::lit(x.re.as_f64()),
                            U::lit(x.im.as_f64()),
                        );
                    }
                }
                out
            }
        }

        impl<T: Scalar> Index<(usize, usize)> for $mat<T> {
            type Output = Complex<T>;
            fn index(&self, (r, k): (usize, usize)) -> &Complex<T> {
                &self.m[r][k]
            }
        }

        impl<T: Scalar> IndexMut<(usize, usize)> for $mat<T> {
            fn index_mut(&mut self, (r, k): (usize, usize)) -> &mut Complex<T> {
                &mut self.m[r][k]
            }
        }

        impl<T: Scalar> Add for $mat<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut out = self;
                for r in 0..$n {
                    for k in 0..$n {
                        out.m[r][k] = out.m[r][k] + rhs.m[r][k];
                    }
                }
                out
            }
        }

        impl<T: Scalar> Sub for $mat<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut out = self;
                for r in 0..$n {
                    for k in 0..$n {
                        out.m[r][k] = out.m[r][k] - rhs.m[r][k];
                    }
                }
                out
            }
        }

        impl<T: Scalar> Neg for $mat<T> {
            type Output = Self;
            fn neg(self) -> Self {
                self.scale(-c_one::<T>())
            }
        }

        impl<T: Scalar> Mul for $mat<T> {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                let mut out = Self::zero();
                for r in 0..$n {
                    for k in 0..$n {
                        let mut acc = c_zero();
                        for j in 0..$n {
                            acc = acc + self.m[r][j] * rhs.m[j][k];
                        }
                        out.m[r][k] = acc;
                    }
                }
                out
            }
        }

        impl<T: Scalar> Mul<$vec<T>> for $mat<T> {
            type Output = $vec<T>;
            fn mul(self, rhs: $vec<T>) -> $vec<T> {
                let mut out = [c_zero(); $n];
                for r in 0..$n {
                    let mut acc = c_zero();
                    for j in 0..$n {
                        acc = acc + self.m[r][j] * rhs.0[j];
                    }
                    out[r] = acc;
                }
                $vec(out)
            }
        }

        impl<T: Scalar> $vec<T> {
            pub fn zero() -> Self {
                $vec([c_zero(); $n])
            }

            /// Hermitian inner product `⟨self, other⟩ = Σ conj(selfᵢ)·otherᵢ`.
            pub fn dot(&self, other: &Self) -> Complex<T> {
                self.0
                    .iter()
                    .zip(other.0.iter())
                    .fold(c_zero(), |acc, (a, b)| acc + a.conj() * *b)
            }

            pub fn scale(&self, s: Complex<T>) -> Self {
                let mut out = *self;
                for x in out.0.iter_mut() {
                    *x = *x * s;
                }
                out
            }
        }

        impl<T: Real> $vec<T> {
            pub fn norm(&self) -> T {
                self.dot(self).re.sqrt()
            }

            pub fn max_abs(&self) -> T {
                self.0.iter().map(|x| x.norm()).fold(T::zero(), T::max)
            }
        }

        impl<T: Scalar> Add for $vec<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut out = self;
                for k in 0..$n {
                    out.0[k] = out.0[k] + rhs.0[k];
                }
                out
            }
        }

        impl<T: Scalar> Sub for $vec<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut out = self;
                for k in 0..$n {
                    out.0[k] = out.0[k] - rhs.0[k];
                }
                out
            }
        }
    };
}

square_matrix!(CMat2, CVec2, 2);
square_matrix!(CMat4, CVec4, 4);

impl<T: Scalar> CMat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn from_columns(c0: CVec2<T>, c1: CVec2<T>) -> Self {
        Self::new(c0.0[0], c1.0[0], c0.0[1], c1.0[1])
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
}

impl<T: Real> CMat2<T> {
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() <= T::epsilon() * self.max_abs() * self.max_abs() {
            return None;
        }
        let inv = d.inv();
        Some(
            Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0]).scale(inv),
        )
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> T {
        // Eigenvalues of the Hermitian matrix A*A in closed form.
        let g = self.adjoint() * *self;
        let a = g.m[0][0].re;
        let d = g.m[1][1].re;
        let b = g.m[0][1].norm();
        let half = T::lit(0.5);
        let mean = half * (a + d);
        let rad = (half * (a - d)).hypot(b);
        (mean + rad).max(T::zero()).sqrt()
    }
}

impl<T: Scalar> CMat4<T> {
    /// Assemble from 2×2 blocks `[[b00, b01], [b10, b11]]`.
    pub fn from_blocks(b00: CMat2<T>, b01: CMat2<T>, b10: CMat2<T>, b11: CMat2<T>) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for k in 0..2 {
                out.m[r][k] = b00.m[r][k];
                out.m[r][k + 2] = b01.m[r][k];
                out.m[r + 2][k] = b10.m[r][k];
                out.m[r + 2][k + 2] = b11.m[r][k];
            }
        }
        out
    }

    /// The 2×2 block at block-row `br`, block-column `bc` (each 0 or 1).
    pub fn block(&self, br: usize, bc: usize) -> CMat2<T> {
        let mut out = CMat2::zero();
        for r in 0..2 {
            for k in 0..2 {
                out.m[r][k] = self.m[2 * br + r][2 * bc + k];
            }
        }
        out
    }

    pub fn blocks(&self) -> [[CMat2<T>; 2]; 2] {
        [
            [self.block(0, 0), self.block(0, 1)],
            [self.block(1, 0), self.block(1, 1)],
        ]
    }
}

impl<T: Scalar> CVec2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        CVec2([a, b])
    }
}

impl<T: Scalar> CVec4<T> {
    pub fn from_halves(upper: CVec2<T>, lower: CVec2<T>) -> Self {
        CVec4([upper.0[0], upper.0[1], lower.0[0], lower.0[1]])
    }

    pub fn upper(&self) -> CVec2<T> {
        CVec2([self.0[0], self.0[1]])
    }

    pub fn lower(&self) -> CVec2<T> {
        CVec2([self.0[2], self.0[3]])
    }
}

/// Pauli matrix σⱼ for `j` in 1..=3.
pub fn pauli<T: Scalar>(j: usize) -> Result<CMat2<T>> {
    let (o, z, i) = (c_one::<T>(), c_zero::<T>(), c_i::<T>());
    match j {
        1 => Ok(CMat2::new(z, o, o, z)),
        2 => Ok(CMat2::new(z, -i, i, z)),
        3 => Ok(CMat2::new(o, z, z, -o)),
        _ => Err(Error::IndexOutOfRange {
            what: "Pauli",
            index: j,
            lo: 1,
            hi: 3,
        }),
    }
}

/// Dirac matrix αⱼ for `j` in 0..=3: α₀ = diag(I₂, −I₂), αⱼ = offdiag(σⱼ, σⱼ).
pub fn dirac_alpha<T: Scalar>(j: usize) -> Result<CMat4<T>> {
    let id = CMat2::<T>::identity();
    let zero = CMat2::<T>::zero();
    match j {
        0 => Ok(CMat4::from_blocks(id, zero, zero, -id)),
        1..=3 => {
            let s = pauli(j)?;
            Ok(CMat4::from_blocks(zero, s, s, zero))
        }
        _ => Err(Error::IndexOutOfRange {
            what: "Dirac alpha",
            index: j,
            lo: 0,
            hi: 3,
        }),
    }
}

fn pauli_triple<T: Scalar>() -> [CMat2<T>; 3] {
    [1, 2, 3].map(|j| pauli(j).expect("valid index"))
}

fn alpha_triple<T: Scalar>() -> [CMat4<T>; 3] {
    [1, 2, 3].map(|j| dirac_alpha(j).expect("valid index"))
}

/// σ·v for a complex 3-vector.
pub fn sigma_dot_complex<T: Scalar>(v: [Complex<T>; 3]) -> CMat2<T> {
    pauli_triple()
        .iter()
        .zip(v.iter())
        .fold(CMat2::zero(), |acc, (s, x)| acc + s.scale(*x))
}

/// σ·v for a real 3-vector.
pub fn sigma_dot<T: Scalar>(v: [T; 3]) -> CMat2<T> {
    sigma_dot_complex(v.map(lift))
}

/// α·v = α₁v₁ + α₂v₂ + α₃v₃ for a complex 3-vector.
pub fn alpha_dot_complex<T: Scalar>(v: [Complex<T>; 3]) -> CMat4<T> {
    alpha_triple()
        .iter()
        .zip(v.iter())
        .fold(CMat4::zero(), |acc, (a, x)| acc + a.scale(*x))
}

pub fn alpha_dot<T: Scalar>(v: [T; 3]) -> CMat4<T> {
    alpha_dot_complex(v.map(lift))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CliffordReport {
    /// Max entry modulus of σⱼσₖ+σₖσⱼ−2δⱼₖI₂ and αⱼαₖ+αₖαⱼ−2δⱼₖI₄ in exact
    /// integer arithmetic.
    pub exact_max_deviation: f64,
    /// Same quantity evaluated in `f64`.
    pub float_max_deviation: f64,
    pub pauli_identities: usize,
    pub dirac_identities: usize,
}

impl CliffordReport {
    pub fn max_deviation(&self) -> f64 {
        self.exact_max_deviation.max(self.float_max_deviation)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() == 0.0
    }
}

/// Squared deviation of every anticommutator from `2δⱼₖ·I`, over a generic scalar.
fn clifford_deviations<T: Scalar>() -> (Vec<T>, Vec<T>) {
    let two = T::one() + T::one();
    let sig = pauli_triple::<T>();
    let mut pauli_dev = Vec::with_capacity(9);
    for (j, sj) in sig.iter().enumerate() {
        for (k, sk) in sig.iter().enumerate() {
            let target = if j == k { CMat2::identity().scale_real(two) } else { CMat2::zero() };
            pauli_dev.push((sj.anticommutator(sk) - target).max_norm_sqr());
        }
    }
    let alphas: Vec<CMat4<T>> = (0..4).map(|j| dirac_alpha(j).expect("valid index")).collect();
    let mut dirac_dev = Vec::with_capacity(16);
    for (j, aj) in alphas.iter().enumerate() {
        for (k, ak) in alphas.iter().enumerate() {
            let target = if j == k { CMat4::identity().scale_real(two) } else { CMat4::zero() };
            dirac_dev.push((aj.anticommutator(ak) - target).max_norm_sqr());
        }
    }
    (pauli_dev, dirac_dev)
}

fn max_sqrt<T: ToPrimitive>(xs: &[T]) -> f64 {
    xs.iter()
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY).sqrt())
        .fold(0.0, f64::max)
}

/// Check every Pauli and Dirac anticommutation relation, both exactly (over
/// Gaussian integers) and in double precision.
pub fn verify_clifford() -> CliffordReport {
    let (pe, de) = clifford_deviations::<i64>();
    let (pf, df) = clifford_deviations::<f64>();
    CliffordReport {
        exact_max_deviation: max_sqrt(&pe).max(max_sqrt(&de)),
        float_max_deviation: max_sqrt(&pf).max(max_sqrt(&df)),
        pauli_identities: pe.len(),
        dirac_identities: de.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ci(re: i64, im: i64) -> Complex<i64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_matrices_exact() {
        assert_eq!(pauli::<i64>(1).unwrap(), CMat2::new(ci(0, 0), ci(1, 0), ci(1, 0), ci(0, 0)));
        assert_eq!(pauli::<i64>(3).unwrap(), CMat2::new(ci(1, 0), ci(0, 0), ci(0, 0), ci(-1, 0)));
        let s2 = pauli::<i64>(2).unwrap();
        assert_eq!(s2 * s2, CMat2::identity());
        assert!(pauli::<i64>(0).is_err());
        assert!(pauli::<i64>(4).is_err());
    }

    #[test]
    fn dirac_alpha_exact() {
        let a0 = dirac_alpha::<i64>(0).unwrap();
        let id = CMat2::<i64>::identity();
        assert_eq!(a0, CMat4::from_blocks(id, CMat2::zero(), CMat2::zero(), -id));
        let a1 = dirac_alpha::<i64>(1).unwrap();
        let a2 = dirac_alpha::<i64>(2).unwrap();
        assert_eq!(a1 * a1, CMat4::identity());
        assert!(a1.anticommutator(&a2).is_zero());
        assert!(matches!(
            dirac_alpha::<i64>(4),
            Err(Error::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn contractions() {
        assert_eq!(sigma_dot::<i64>([0, 0, 1]), pauli(3).unwrap());
        let s = sigma_dot::<i64>([1, 0, 0]);
        assert_eq!(s * s, CMat2::identity());
        assert_eq!(
            sigma_dot::<i64>([1, 1, 0]),
            CMat2::new(ci(0, 0), ci(1, -1), ci(1, 1), ci(0, 0))
        );
        assert_eq!(alpha_dot::<i64>([0, 0, 1]), dirac_alpha(3).unwrap());
        let a = alpha_dot::<i64>([1, 2, 2]);
        assert_eq!(a * a, CMat4::identity().scale_real(9));

        // (α·ξ + iμ)(α·ξ − iμ) = (|ξ|² + μ²) I₄ at ξ = (1,0,0), μ = 1
        let a = alpha_dot::<i64>([1, 0, 0]);
        let imu = CMat4::<i64>::identity().scale(ci(0, 1));
        assert_eq!((a + imu) * (a - imu), CMat4::identity().scale_real(2));
    }

    #[test]
    fn clifford_relations_vanish() {
        let r = verify_clifford();
        assert_eq!(r.exact_max_deviation, 0.0);
        assert_eq!(r.float_max_deviation, 0.0);
        assert_eq!(r.dirac_identities, 16);
        assert_eq!(r.pauli_identities, 9);
        assert!(r.passed());

        let s1 = pauli::<i64>(1).unwrap();
        let s2 = pauli::<i64>(2).unwrap();
        assert!(s1.anticommutator(&s2).is_zero());
        let a0 = dirac_alpha::<i64>(0).unwrap();
        let a3 = dirac_alpha::<i64>(3).unwrap();
        assert!(a0.anticommutator(&a3).is_zero());
    }

    #[test]
    fn block_view_round_trips() {
        let m = alpha_dot::<f64>([0.3, -1.2, 2.0]) + dirac_alpha(0).unwrap();
        let [[a, b], [c, d]] = m.blocks();
        assert_eq!(CMat4::from_blocks(a, b, c, d), m);
        let v = CVec4([1.0, 2.0, 3.0, 4.0].map(|x| Complex::new(x, -x)));
        assert_eq!(CVec4::from_halves(v.upper(), v.lower()), v);
    }

    #[test]
    fn op_norm_and_inverse() {
        let s = sigma_dot::<f64>([0.0, 0.0, 2.0]);
        assert!((s.op_norm() - 2.0).abs() < 1e-15);
        let inv = s.inverse().unwrap();
        assert!((inv * s).approx_eq(&CMat2::identity(), 1e-15));
        assert!(CMat2::<f64>::zero().inverse().is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let v = [0.6f32, 0.0, 0.8];
        let a = alpha_dot(v);
        assert!((a * a).approx_eq(&CMat4::identity(), 1e-6));
    }

    fn vec3() -> impl Strategy<Value = [f64; 3]> {
        prop::array::uniform3(-10.0f64..10.0)
    }

    proptest! {
        #[test]
        fn squares_are_scalar(v in vec3()) {
            let n2: f64 = v.iter().map(|x| x * x).sum();
            let s = sigma_dot(v);
            let a = alpha_dot(v);
            let tol = 1e-14 * n2.max(1.0);
            prop_assert!((s * s).approx_eq(&CMat2::identity().scale_real(n2), tol));
            prop_assert!((a * a).approx_eq(&CMat4::identity().scale_real(n2), tol));
        }

        #[test]
        fn contractions_are_linear(u in vec3(), v in vec3(), t in -5.0f64..5.0) {
            let w = [u[0] + t * v[0], u[1] + t * v[1], u[2] + t * v[2]];
            let lhs = sigma_dot(w);
            let rhs = sigma_dot(u) + sigma_dot(v).scale_real(t);
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
            let lhs = alpha_dot(w);
            let rhs = alpha_dot(u) + alpha_dot(v).scale_real(t);
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }

        #[test]
        fn contractions_are_hermitian(v in vec3()) {
            prop_assert!(sigma_dot(v).is_hermitian(0.0));
            prop_assert!(alpha_dot(v).is_hermitian(0.0));
        }
    }
}
