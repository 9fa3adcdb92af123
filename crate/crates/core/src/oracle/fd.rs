//! Staggered finite-volume discretization of the half-line model operator.
//!
//! With `ς = k e^{iφ}` the substitution
//! `ũ₁ = u₁, ũ₄ = e^{−iφ}u₄, ũ₃ = −iu₃, ũ₂ = −ie^{−iφ}u₂` is unitary and turns
//! the operator into a real symmetric one acting on `a = (ũ₁, ũ₄)` and
//! `b = (ũ₃, ũ₂)`:
//!
//! ```text
//! A a + T b′ = λa,   B b − T a′ = λb,   a(0) = b(0),
//! A = [[m, k], [k, −m]],  B = [[−m, k], [k, m]],  T = diag(−1, 1).
//! ```
//!
//! `a` lives on the nodes `jh`, `b` on the midpoints `(j+½)h`, and `a` vanishes
//! at `z = Z`. The boundary condition enters the half cell at `z = 0` through the
//! flux `T b(0) = T a(0)`. The result is a symmetric pencil `K − λW` with
//! bandwidth 2 and positive diagonal `W`, whose eigenvalues are located by
//! inertia counts and bisection.

use super::HalflineGrid;
use crate::halfline::ModelProblem;

/// Lower band of a symmetric matrix with bandwidth 2, plus a diagonal weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedPencil {
    pub diag: Vec<f64>,
    /// `K[i][i−1]`; entry 0 unused.
    pub sub1: Vec<f64>,
    /// `K[i][i−2]`; entries 0 and 1 unused.
    pub sub2: Vec<f64>,
    pub weight: Vec<f64>,
}

const T: [f64; 2] = [-1.0, 1.0];

pub fn assemble(p: &ModelProblem<f64>, g: &HalflineGrid) -> BandedPencil {
    let n = g.n;
    let h = g.step();
    let k = p.xi_norm();
    let m = p.m;
    let dim = 4 * n;
    let mut diag = vec![0.0; dim];
    let mut sub1 = vec![0.0; dim];
    let mut sub2 = vec![0.0; dim];
    let mut weight = vec![0.0; dim];
    for j in 0..n {
        let (a, b) = (4 * j, 4 * j + 2);
        let wa = if j == 0 { 0.5 * h } else { h };
        diag[a] = wa * m;
        diag[a + 1] = -wa * m;
        sub1[a + 1] = wa * k;
        diag[b] = -h * m;
        diag[b + 1] = h * m;
        sub1[b + 1] = h * k;
        for c in 0..2 {
            sub2[b + c] = T[c];
            if j > 0 {
                sub2[a + c] = -T[c];
            }
            weight[a + c] = wa;
            weight[b + c] = h;
        }
    }
    diag[0] -= T[0];
    diag[1] -= T[1];
    BandedPencil {
        diag,
        sub1,
        sub2,
        weight,
    }
}

impl BandedPencil {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues of `Kv = λWv` below `x`: the count of negative
    /// pivots in the `LDLᵀ` factorization of `K − xW`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let (mut d2, mut d1) = (0.0f64, 0.0f64);
        let mut l_prev = 0.0; // L[i−1][i−2]
        let mut neg = 0;
        for i in 0..n {
            let mii = self.diag[i] - x * self.weight[i];
            let l2 = if i >= 2 { self.sub2[i] / d2 } else { 0.0 };
            let l1 = if i >= 1 {
                (self.sub1[i] - l2 * l_prev * d2) / d1
            } else {
                0.0
            };
            let mut d = mii - l2 * l2 * d2 - l1 * l1 * d1;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                neg += 1;
            }
            d2 = d1;
            d1 = d;
            l_prev = l1;
        }
        neg
    }

    /// All eigenvalues in `(lo, hi)`, ascending.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let c_lo = self.count_below(lo);
        let c_hi = self.count_below(hi);
        (c_lo..c_hi).map(|idx| self.bisect(idx, lo, hi)).collect()
    }

    /// The eigenvalue with 0-based index `idx`, known to lie in `[lo, hi]`.
    fn bisect(&self, idx: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-3) {
                break;
            }
            if self.count_below(mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Dense `(K, W)`, row-major.
    pub fn to_dense(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.dim();
        let mut k = vec![vec![0.0; n]; n];
        for i in 0..n {
            k[i][i] = self.diag[i];
            if i >= 1 {
                k[i][i - 1] = self.sub1[i];
                k[i - 1][i] = self.sub1[i];
            }
            if i >= 2 {
                k[i][i - 2] = self.sub2[i];
                k[i - 2][i] = self.sub2[i];
            }
        }
        (k, self.weight.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Scheme;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn grid(z: f64, n: usize) -> HalflineGrid {
        HalflineGrid::new(z, n, Scheme::StaggeredFd).unwrap()
    }

    fn dense_eigenvalues(pencil: &BandedPencil) -> Vec<f64> {
        let (k, w) = pencil.to_dense();
        let n = w.len();
        let s: Vec<f64> = w.iter().map(|x| 1.0 / x.sqrt()).collect();
        let m = DMatrix::from_fn(n, n, |i, j| k[i][j] * s[i] * s[j]);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    #[test]
    fn sturm_counts_match_dense_solver() {
        for &(x, y, m) in &[(1.0, 0.0, -1.0), (0.6, 0.8, 1.0), (0.0, 0.0, -1.0), (3.0, 4.0, -1.0)] {
            let p = ModelProblem::new([x, y], m);
            let pencil = assemble(&p, &grid(8.0, 64));
            let dense = dense_eigenvalues(&pencil);
            for &t in &[-7.3, -1.2, -0.3, 0.0, 0.41, 1.0001, 2.5, 6.0] {
                let c = dense.iter().filter(|&&e| e < t).count();
                assert_eq!(pencil.count_below(t), c, "x={t}");
            }
            let edge = p.gap_edge() * 0.999;
            let ours = pencil.eigenvalues_in(-edge, edge);
            let theirs: Vec<f64> = dense.iter().cloned().filter(|e| e.abs() < edge).collect();
            assert_eq!(ours.len(), theirs.len());
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pencil_is_symmetric_positive_weight() {
        let p = ModelProblem::new([0.3, -0.2], 0.7);
        let pencil = assemble(&p, &grid(5.0, 64));
        let (k, w) = pencil.to_dense();
        for i in 0..k.len() {
            assert!(w[i] > 0.0);
            for j in 0..k.len() {
                assert_eq!(k[i][j], k[j][i]);
            }
        }
    }

    #[test]
    fn spectrum_is_phase_invariant() {
        // Only |ξ′| enters the real form; rotating ξ′ leaves the spectrum fixed.
        let a = assemble(&ModelProblem::new([1.0, 0.0], -1.0), &grid(10.0, 128));
        let b = assemble(&ModelProblem::new([0.0, -1.0], -1.0), &grid(10.0, 128));
        assert_eq!(a, b);
    }
}
