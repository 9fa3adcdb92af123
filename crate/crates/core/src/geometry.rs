//! Small 3-vector helpers and deterministic point sets on spheres.

use crate::scalar::Real;

pub type Vec3<T> = [T; 3];

pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

pub fn scale<T: Real>(a: &Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Unit vector along `a`; `None` for the zero vector.
pub fn normalize<T: Real>(a: &Vec3<T>) -> Option<Vec3<T>> {
    let n = norm(a);
    if n > T::zero() && n.is_finite() {
        Some(scale(a, n.recip()))
    } else {
        None
    }
}

/// Fibonacci lattice with `n` points on the unit sphere.
///
/// Heights are `1 − (2i+1)/n`, so the lattice is symmetric under z → −z and
/// never hits the poles.
pub fn fibonacci_sphere<T: Real>(n: usize) -> Vec<Vec3<T>> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let nf = T::from_usize(n).expect("count representable");
    (0..n)
        .map(|i| {
            let fi = T::from_usize(i).expect("index representable");
            let z = T::one() - (T::lit(2.0) * fi + T::one()) / nf;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let phi = golden * fi;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// `n` equally spaced points on the unit circle, starting at angle 0.
pub fn unit_circle<T: Real>(n: usize) -> Vec<[T; 2]> {
    let nf = T::from_usize(n).expect("count representable");
    (0..n)
        .map(|k| {
            let t = T::TAU() * T::from_usize(k).expect("index representable") / nf;
            [t.cos(), t.sin()]
        })
        .collect()
}
