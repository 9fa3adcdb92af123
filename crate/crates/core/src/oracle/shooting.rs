//! Shooting for the half-line model problem.
//!
//! Writing the eigenvalue equation as `u′ = Mu` with
//! `M = iα₃(α′·ξ′ + α₀m − λ)`, the decaying solutions span the `−ρ`
//! eigenspace of `M`. That subspace is seeded at `z = Z`, carried back to `z = 0`
//! with classical Runge–Kutta steps (re-orthonormalized after every step), and
//! tested against the boundary operator `[I₂ | iσ₃]`. Because the basis is
//! orthonormal, `|det|` does not depend on the basis chosen.

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::HalflineGrid;
use crate::clifford::{dirac_alpha, CMat2, CMat4, CVec4};
use crate::error::{Error, Result};
use crate::halfline::{mit_trace, ModelProblem};

pub const SCAN_POINTS: usize = 2001;
pub const ROOT_TOL: f64 = 1e-10;
pub const ROOT_ACCEPT: f64 = 1e-6;

fn generator(p: &ModelProblem<f64>, lambda: f64) -> CMat4<f64> {
    let a3: CMat4<f64> = dirac_alpha(3).expect("valid index");
    let inner = p.tangential_symbol() - CMat4::identity().scale_real(lambda);
    (a3 * inner).scale(C::new(0.0, 1.0))
}

/// Orthonormalize two vectors in place (Gram–Schmidt, twice for stability).
fn orthonormalize(q: &mut [CVec4<f64>; 2]) {
    for _ in 0..2 {
        let n0 = q[0].norm();
        q[0] = q[0].scale(C::from(1.0 / n0));
        let proj = q[0].dot(&q[1]);
        q[1] = q[1] - q[0].scale(proj);
        let n1 = q[1].norm();
        q[1] = q[1].scale(C::from(1.0 / n1));
    }
}

/// Two orthonormal columns spanning the range of `ρI − M`.
fn stable_basis(m: &CMat4<f64>, rho: f64) -> [CVec4<f64>; 2] {
    let r = CMat4::identity().scale_real(rho) - *m;
    let mut cols: Vec<CVec4<f64>> = (0..4).map(|j| r.column(j)).collect();
    let pick = |cols: &Vec<CVec4<f64>>| -> usize {
        let mut best = 0;
        for j in 1..cols.len() {
            if cols[j].norm() > cols[best].norm() {
                best = j;
            }
        }
        best
    };
    let i0 = pick(&cols);
    let q0 = cols.remove(i0);
    let q0 = q0.scale(C::from(1.0 / q0.norm()));
    for c in cols.iter_mut() {
        *c = *c - q0.scale(q0.dot(c));
    }
    let q1 = cols[pick(&cols)];
    let mut q = [q0, q1];
    orthonormalize(&mut q);
    q
}

/// `|det [I₂ | iσ₃]Q|` for the decaying subspace carried from `Z` to `0`.
pub fn shooting_det(p: &ModelProblem<f64>, lambda: f64, g: &HalflineGrid) -> Result<f64> {
    let rho = p.rho(lambda).filter(|r| *r > 0.0 && lambda.abs() < p.gap_edge());
    let Some(rho) = rho else {
        return Err(Error::OutsideGap {
            lambda,
            edge: p.gap_edge(),
        });
    };
    let m = generator(p, lambda);
    let mut q = stable_basis(&m, rho);
    // One RK4 step of length −h for the constant system u′ = Mu.
    let hm = m.scale_real(-g.step());
    let hm2 = hm * hm;
    let hm3 = hm2 * hm;
    let hm4 = hm3 * hm;
    let step = CMat4::identity() + hm + hm2.scale_real(0.5) + hm3.scale_real(1.0 / 6.0) + hm4.scale_real(1.0 / 24.0);
    for _ in 0..g.n {
        q = [step * q[0], step * q[1]];
        orthonormalize(&mut q);
    }
    let b = CMat2::from_columns(mit_trace(&q[0]), mit_trace(&q[1]));
    Ok(b.det().norm())
}

/// Zeros of [`shooting_det`] in `(lo, hi)`: local minima of a uniform scan,
/// polished by golden-section search and kept when `|det| ≤ ROOT_ACCEPT`.
pub fn shooting_roots(p: &ModelProblem<f64>, g: &HalflineGrid, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let n = SCAN_POINTS;
    let lam: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let d: Vec<f64> = lam
        .par_iter()
        .map(|&l| shooting_det(p, l, g))
        .collect::<Result<_>>()?;
    let candidates: Vec<usize> = (1..n - 1)
        .filter(|&i| d[i] <= d[i - 1] && d[i] <= d[i + 1] && !(d[i] == d[i - 1] && d[i] == d[i + 1]))
        .collect();
    let polished: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&i| {
            let f = |x: f64| shooting_det(p, x, g).unwrap_or(f64::INFINITY);
            golden(f, lam[i - 1], lam[i + 1])
        })
        .collect();
    let mut roots: Vec<f64> = polished
        .into_iter()
        .filter(|(_, v)| *v <= ROOT_ACCEPT)
        .map(|(x, _)| x)
        .collect();
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * ROOT_TOL);
    Ok(roots)
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > ROOT_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x1, f1), (x2, f2), (x, fx)]
        .into_iter()
        .fold((x, fx), |acc, c| if c.1 < acc.1 { c } else { acc })
}
