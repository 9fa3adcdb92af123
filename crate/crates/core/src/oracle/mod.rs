//! Numerical cross-checks for the half-line model problem.
//!
//! Two independent methods locate the bound states of the model operator
//! inside its spectral gap: a staggered finite-volume discretization
//! ([`fd_eigenvalues`]) and a shooting determinant ([`shooting_det`]). The
//! [`compare`] report measures both against the closed form.

mod fd;
mod shooting;

use serde::{Serialize, Serializer};

pub use fd::{assemble, BandedPencil};
pub use shooting::{shooting_det, shooting_roots, ROOT_ACCEPT, ROOT_TOL, SCAN_POINTS};

use crate::error::{Error, Result};
use crate::halfline::{model_discrete_spectrum, ModelProblem};

pub const MIN_NODES: usize = 64;
pub const DEFAULT_Z: f64 = 40.0;
pub const DEFAULT_NODES: usize = 4096;
pub const DEFAULT_COMPARE_TOL: f64 = 5e-3;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-5;
/// Default windows stop this fraction short of the gap edges.
pub const WINDOW_MARGIN: f64 = 1e-3;
/// Errors below this are treated as resolved to rounding when estimating
/// convergence orders.
pub const ERROR_FLOOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    StaggeredFd,
    TransferShooting,
}

/// Truncated half-line `[0, Z]` with `N` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalflineGrid {
    pub z_max: f64,
    pub n: usize,
    pub scheme: Scheme,
}

impl HalflineGrid {
    pub fn new(z_max: f64, n: usize, scheme: Scheme) -> Result<Self> {
        if !(z_max.is_finite() && z_max > 0.0) {
            return Err(Error::InvalidGrid(format!("truncation length must be positive, got {z_max}")));
        }
        if n < MIN_NODES {
            return Err(Error::GridTooSmall { n, min: MIN_NODES });
        }
        Ok(Self { z_max, n, scheme })
    }

    pub fn step(&self) -> f64 {
        self.z_max / self.n as f64
    }

    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n,
            ..*self
        }
    }
}

/// Default open window inside the gap.
pub fn default_window(p: &ModelProblem<f64>) -> (f64, f64) {
    let e = p.gap_edge() * (1.0 - WINDOW_MARGIN);
    (-e, e)
}

fn check_window(p: &ModelProblem<f64>, (lo, hi): (f64, f64)) -> Result<()> {
    let edge = p.gap_edge();
    if !(lo.is_finite() && hi.is_finite() && -edge < lo && lo < hi && hi < edge) {
        return Err(Error::WindowOutsideGap { lo, hi, edge });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdEigenvalues {
    pub eigenvalues: Vec<f64>,
    /// The same window on the grid with `2N` cells.
    pub refined: Vec<f64>,
    pub n: usize,
    /// Largest move of an eigenvalue under `N → 2N`; `None` if the count changed.
    pub max_shift: Option<f64>,
    pub convergence_tol: f64,
    pub convergence_suspect: bool,
}

/// Eigenvalues of the discretized model operator inside `window`, with a
/// grid-doubling check.
pub fn fd_eigenvalues(p: &ModelProblem<f64>, g: &HalflineGrid, window: (f64, f64), convergence_tol: f64) -> Result<FdEigenvalues> {
    check_window(p, window)?;
    let coarse = assemble(p, g).eigenvalues_in(window.0, window.1);
    let fine = assemble(p, &g.refined()).eigenvalues_in(window.0, window.1);
    let max_shift = (coarse.len() == fine.len()).then(|| {
        coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    });
    let suspect = max_shift.is_none_or(|s| s > 10.0 * convergence_tol);
    Ok(FdEigenvalues {
        eigenvalues: coarse,
        refined: fine,
        n: g.n,
        max_shift,
        convergence_tol,
        convergence_suspect: suspect,
    })
}

/// Symmetric Hausdorff distance; `0` for two empty sets and `∞` if exactly one
/// is empty.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => {
            let d = |x: &[f64], y: &[f64]| {
                x.iter()
                    .map(|u| y.iter().map(|v| (u - v).abs()).fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max)
            };
            d(a, b).max(d(b, a))
        }
    }
}

fn nearest(x: f64, ys: &[f64]) -> Option<f64> {
    ys.iter()
        .copied()
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
}

/// Least-squares slope of `log(error)` against `log(h)` for the closed-form
/// eigenvalues, over grids with the given cell counts. Points whose error is
/// below [`ERROR_FLOOR`] are dropped. Returns the smallest slope over the
/// eigenvalues, or `None` if no eigenvalue has two usable points.
pub fn convergence_order(p: &ModelProblem<f64>, z_max: f64, ns: &[usize], window: (f64, f64)) -> Result<Option<f64>> {
    check_window(p, window)?;
    let exact = model_discrete_spectrum(p);
    let exact: Vec<f64> = exact.into_iter().filter(|l| window.0 < *l && *l < window.1).collect();
    let runs: Vec<(f64, Vec<f64>)> = ns
        .iter()
        .map(|&n| {
            let g = HalflineGrid::new(z_max, n, Scheme::StaggeredFd)?;
            Ok((g.step(), assemble(p, &g).eigenvalues_in(window.0, window.1)))
        })
        .collect::<Result<_>>()?;
    let mut worst: Option<f64> = None;
    for &l in &exact {
        let pts: Vec<(f64, f64)> = runs
            .iter()
            .filter_map(|(h, ev)| nearest(l, ev).map(|x| (h.ln(), (x - l).abs())))
            .filter(|(_, e)| *e > ERROR_FLOOR)
            .map(|(lh, e)| (lh, e.ln()))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        worst = Some(worst.map_or(slope, |w: f64| w.min(slope)));
    }
    Ok(worst)
}

fn ext_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else if *x < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenMatch {
    pub exact: f64,
    pub fd: Option<f64>,
    pub fd_deviation: Option<f64>,
    pub shooting: Option<f64>,
    pub shooting_deviation: Option<f64>,
    /// `log₂(e_N / e_{2N})` for the discretization, when both errors are
    /// above rounding level.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub problem: ModelProblem<f64>,
    pub grid: HalflineGrid,
    pub window: (f64, f64),
    pub tol: f64,
    pub exact: Vec<f64>,
    pub fd: FdEigenvalues,
    pub shooting: Vec<f64>,
    #[serde(serialize_with = "ext_f64")]
    pub hausdorff_fd: f64,
    #[serde(serialize_with = "ext_f64")]
    pub hausdorff_shooting: f64,
    pub matches: Vec<EigenMatch>,
    pub unmatched_fd: Vec<f64>,
    pub unmatched_shooting: Vec<f64>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CompareOptions {
    pub window: Option<(f64, f64)>,
    pub convergence_tol: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            window: None,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
        }
    }
}

pub fn compare(p: &ModelProblem<f64>, g: &HalflineGrid, tol: f64) -> Result<CompareReport> {
    compare_with(p, g, tol, &CompareOptions::default())
}

/// Closed form against both oracles. Passes when each oracle's eigenvalues in
/// the window are within Hausdorff distance `tol` of the closed form.
pub fn compare_with(p: &ModelProblem<f64>, g: &HalflineGrid, tol: f64, opts: &CompareOptions) -> Result<CompareReport> {
    let window = opts.window.unwrap_or_else(|| default_window(p));
    check_window(p, window)?;
    let exact: Vec<f64> = model_discrete_spectrum(p)
        .into_iter()
        .filter(|l| window.0 < *l && *l < window.1)
        .collect();
    let fd = fd_eigenvalues(p, g, window, opts.convergence_tol)?;
    let shoot = shooting_roots(p, g, window.0, window.1)?;
    let hausdorff_fd = hausdorff(&exact, &fd.eigenvalues);
    let hausdorff_shooting = hausdorff(&exact, &shoot);
    let matches = exact
        .iter()
        .map(|&l| {
            let f = nearest(l, &fd.eigenvalues);
            let s = nearest(l, &shoot);
            let order = match (f, nearest(l, &fd.refined)) {
                (Some(a), Some(b)) => {
                    let (ea, eb) = ((a - l).abs(), (b - l).abs());
                    (ea > ERROR_FLOOR && eb > ERROR_FLOOR).then(|| (ea / eb).log2())
                }
                _ => None,
            };
            EigenMatch {
                exact: l,
                fd: f,
                fd_deviation: f.map(|x| (x - l).abs()),
                shooting: s,
                shooting_deviation: s.map(|x| (x - l).abs()),
                order,
            }
        })
        .collect();
    let unmatched = |xs: &[f64]| -> Vec<f64> {
        xs.iter()
            .copied()
            .filter(|x| exact.iter().all(|l| (x - l).abs() > tol))
            .collect()
    };
    let unmatched_fd = unmatched(&fd.eigenvalues);
    let unmatched_shooting = unmatched(&shoot);
    Ok(CompareReport {
        problem: *p,
        grid: *g,
        window,
        tol,
        passed: hausdorff_fd <= tol && hausdorff_shooting <= tol,
        exact,
        fd,
        shooting: shoot,
        hausdorff_fd,
        hausdorff_shooting,
        matches,
        unmatched_fd,
        unmatched_shooting,
    })
}

impl CompareReport {
    /// Plain-text summary table.
    pub fn table(&self) -> String {
        let mut s = format!(
            "xi' = ({}, {}), m = {}, Z = {}, N = {}, window = ({:.6}, {:.6})\n",
            self.problem.xi[0], self.problem.xi[1], self.problem.m, self.grid.z_max, self.grid.n, self.window.0, self.window.1
        );
        s.push_str(&format!(
            "{:>14} {:>14} {:>11} {:>14} {:>11} {:>7}\n",
            "exact", "fd", "fd dev", "shooting", "shoot dev", "order"
        ));
        let opt = |x: Option<f64>, w: usize| x.map_or(format!("{:>w$}", "-"), |v| format!("{v:>w$.9}"));
        let dev = |x: Option<f64>| x.map_or(format!("{:>11}", "-"), |v| format!("{v:>11.3e}"));
        for m in &self.matches {
            s.push_str(&format!(
                "{:>14.9} {} {} {} {} {}\n",
                m.exact,
                opt(m.fd, 14),
                dev(m.fd_deviation),
                opt(m.shooting, 14),
                dev(m.shooting_deviation),
                m.order.map_or(format!("{:>7}", "-"), |o| format!("{o:>7.2}"))
            ));
        }
        for x in &self.unmatched_fd {
            s.push_str(&format!("unmatched fd eigenvalue {x:.9}\n"));
        }
        for x in &self.unmatched_shooting {
            s.push_str(&format!("unmatched shooting root {x:.9}\n"));
        }
        s.push_str(&format!(
            "hausdorff fd = {:e}, shooting = {:e}, tol = {:e}{}\n{}\n",
            self.hausdorff_fd,
            self.hausdorff_shooting,
            self.tol,
            if self.fd.convergence_suspect { ", convergence suspect" } else { "" },
            if self.passed { "PASS" } else { "FAIL" }
        ));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(x: f64, y: f64, m: f64) -> ModelProblem<f64> {
        ModelProblem::new([x, y], m)
    }

    fn grid(n: usize) -> HalflineGrid {
        HalflineGrid::new(40.0, n, Scheme::StaggeredFd).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(HalflineGrid::new(40.0, 63, Scheme::StaggeredFd), Err(Error::GridTooSmall { n: 63, min: 64 })));
        assert!(HalflineGrid::new(0.0, 64, Scheme::StaggeredFd).is_err());
        assert!(HalflineGrid::new(f64::NAN, 64, Scheme::StaggeredFd).is_err());
        assert_eq!(grid(4096).step(), 40.0 / 4096.0);
    }

    #[test]
    fn fd_examples() {
        let r = fd_eigenvalues(&mp(1.0, 0.0, -1.0), &grid(4096), (-1.41, 1.41), DEFAULT_CONVERGENCE_TOL).unwrap();
        assert_eq!(r.eigenvalues.len(), 2);
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-3 && (r.eigenvalues[1] - 1.0).abs() < 1e-3);
        assert!(!r.convergence_suspect);

        let r = fd_eigenvalues(&mp(0.0, 0.0, 1.0), &grid(4096), (-0.99, 0.99), DEFAULT_CONVERGENCE_TOL).unwrap();
        assert!(r.eigenvalues.is_empty());

        let p = mp(0.0, 0.0, -1.0);
        let r = fd_eigenvalues(&p, &grid(4096), default_window(&p), DEFAULT_CONVERGENCE_TOL).unwrap();
        assert!(!r.eigenvalues.is_empty());
        assert!(r.eigenvalues.iter().all(|e| e.abs() < 1e-3));

        assert!(matches!(
            fd_eigenvalues(&mp(1.0, 0.0, -1.0), &grid(64), (-1.5, 1.0), 1e-5),
            Err(Error::WindowOutsideGap { .. })
        ));
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let p = mp(1.0, 0.0, -1.0);
        let r = compare(&p, &grid(64), DEFAULT_COMPARE_TOL).unwrap();
        assert!(r.fd.convergence_suspect);
    }

    #[test]
    fn compare_examples() {
        let r = compare(&mp(1.0, 0.0, -1.0), &grid(1024), DEFAULT_COMPARE_TOL).unwrap();
        assert!(r.passed, "{}", r.table());
        assert_eq!(r.matches.len(), 2);
        assert!(r.matches.iter().all(|m| m.fd_deviation.unwrap() < 1e-6));
        let r = compare(&mp(2.0, 0.0, 3.0), &grid(1024), DEFAULT_COMPARE_TOL).unwrap();
        assert!(r.passed);
        assert!(r.exact.is_empty() && r.fd.eigenvalues.is_empty() && r.shooting.is_empty());
        assert_eq!(r.hausdorff_fd, 0.0);
    }

    #[test]
    fn no_spurious_eigenvalues_for_nonnegative_mass() {
        for &(x, y, m) in &[(1.0, 0.0, 1.0), (0.0, 0.0, 2.0), (2.0, 0.0, 3.0), (0.3, 0.4, 0.5), (1.0, 1.0, 0.0)] {
            let p = mp(x, y, m);
            for n in [64, 256, 1024] {
                let ev = assemble(&p, &grid(n)).eigenvalues_in(default_window(&p).0, default_window(&p).1);
                assert!(ev.is_empty(), "{x} {y} {m} N={n}: {ev:?}");
            }
        }
    }

    #[test]
    fn truncation_robustness() {
        for &(x, y, m) in &[(1.0, 0.0, -1.0), (3.0, 4.0, -1.0), (0.0, 0.0, -1.0)] {
            let p = mp(x, y, m);
            let w = default_window(&p);
            let a = assemble(&p, &HalflineGrid::new(40.0, 1024, Scheme::StaggeredFd).unwrap()).eigenvalues_in(w.0, w.1);
            let b = assemble(&p, &HalflineGrid::new(80.0, 2048, Scheme::StaggeredFd).unwrap()).eigenvalues_in(w.0, w.1);
            assert_eq!(a.len(), b.len());
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() <= 1e-6, "{u} {v}");
            }
        }
    }

    #[test]
    fn first_order_convergence_or_better() {
        for &(x, y) in &[(1.0, 0.0), (3.0, 4.0), (0.0, 0.0)] {
            let p = mp(x, y, -1.0);
            let order = convergence_order(&p, 40.0, &[512, 1024, 2048, 4096], default_window(&p)).unwrap().unwrap();
            assert!(order >= 0.9, "{order}");
        }
    }

    #[test]
    fn hausdorff_cases() {
        assert_eq!(hausdorff(&[], &[]), 0.0);
        assert_eq!(hausdorff(&[1.0], &[]), f64::INFINITY);
        assert!((hausdorff(&[-1.0, 1.0], &[-1.1, 0.95]) - 0.1).abs() < 1e-15);
        assert!((hausdorff(&[0.0], &[-1e-4, 2e-4]) - 2e-4).abs() < 1e-18);
    }

    #[test]
    fn report_serializes_infinite_distance() {
        let p = mp(1.0, 0.0, -1.0);
        let mut r = compare(&p, &grid(256), DEFAULT_COMPARE_TOL).unwrap();
        r.hausdorff_fd = f64::INFINITY;
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["hausdorff_fd"], "inf");
    }
}
