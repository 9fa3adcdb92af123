//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dirac_bvp::boundary::{check_symmetry_condition, mit_condition, BoundaryCondition, Coefficient, Field, SurfaceSampler};
use dirac_bvp::cli::{run_text, RunOptions};
use dirac_bvp::clifford::{verify_clifford, CMat2};
use dirac_bvp::halfline::{dispersion_det, model_discrete_spectrum, ModelProblem};
use dirac_bvp::lopatinsky::{ls_matrix, mit_det_closed_form, ParamCovector};
use dirac_bvp::oracle::{compare, convergence_order, default_window, HalflineGrid, Scheme};
use dirac_bvp::spectrum::{
    default_schedule, essential_spectrum_conic_mit, essential_spectrum_exterior, estimate_asymptotics,
    limit_constant_spectrum, union, AsymptoticEstimate, AsymptoticsOptions, Bound, Interval, PotentialField,
    SpectrumSet,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn unit_vector(rng: &mut StdRng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = verify_clifford();
    check(r.pauli_identities + r.dirac_identities == 25, "wrong identity count")?;
    check(
        r.exact_max_deviation == 0.0,
        format!("integer deviation {}", r.exact_max_deviation),
    )?;
    check(r.float_max_deviation == 0.0, format!("f64 deviation {}", r.float_max_deviation))?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("16 Dirac + 9 Pauli relations exact ({t:.2?})"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let a = rng.gen_range(-3.0..=3.0);
        let normal = unit_vector(&mut rng);
        let s = SurfaceSampler::from_points(&[(normal, normal)]).map_err(|e| e.to_string())?;
        let c = unit_vector(&mut rng);
        let pc = ParamCovector::new([c[0], c[1]], c[2]);
        let bc = mit_condition(Coefficient::Const(a));
        let d = ls_matrix(&bc, &s.points()[0], &pc).det();
        // Closed form written out independently of the library helper.
        let rho = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let expected = Complex64::new(c[2] * rho * (a * a - 1.0), 2.0 * a * rho * rho);
        worst = worst
            .max((d - mit_det_closed_form(a, &pc)).norm())
            .max((d - expected).norm());
    }
    check(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("10^4 samples, max |det L - closed form| = {worst:.1e} ({t:.2?})"))
}

fn check_ls_job(a: &str) -> String {
    format!(
        r#"{{"schema": 1, "command": "check-ls",
            "domain": {{"kind": "exterior-of-ball", "radius": 1.0}},
            "boundary": {{"family": "mit", "a": {{"kind": "const", "value": {a}}}}}}}"#
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let one = run_text(&check_ls_job("1.0"), &RunOptions::default()).map_err(|e| e.to_string())?;
    let c = &one.result["certificate"];
    let inf = c["inf_estimate"].as_f64().unwrap_or(f64::NAN);
    check((inf - 2.0).abs() <= 1e-9, format!("a=1 inf_estimate {inf}"))?;
    check(c["verdict"] == "CERTIFIED" && one.exit_code() == 0, "a=1 not certified")?;
    check(c["n_sphere_samples"] == 2048 && c["n_boundary_samples"] == 512, "not at default grids")?;

    let zero = run_text(&check_ls_job("0.0"), &RunOptions::default()).map_err(|e| e.to_string())?;
    let c = &zero.result["certificate"];
    let mu = c["witness"]["mu"].as_f64().unwrap_or(f64::NAN);
    let h = c["grid_spacing"].as_f64().unwrap_or(0.0);
    check(c["verdict"] == "FAILED" && zero.exit_code() == 1, "a=0 not failed")?;
    check(mu.abs() <= h, format!("witness mu {mu} beyond grid spacing {h}"))?;
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("a=1 inf {inf:.12}, a=0 FAILED with witness mu = {mu:.1e} <= {h:.3} ({t:.2?})"))
}

fn random_sampler(rng: &mut StdRng) -> Result<SurfaceSampler<f64>, String> {
    let s = match rng.gen_range(0..4) {
        0 => SurfaceSampler::sphere(rng.gen_range(0.1..50.0), rng.gen_range(8..200)),
        1 => SurfaceSampler::half_space(rng.gen_range(1..8), rng.gen_range(0.5..20.0)),
        2 => {
            let radii: Vec<f64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0.5..100.0)).collect();
            SurfaceSampler::cone(rng.gen_range(0.1..3.0), &radii, rng.gen_range(3..40))
        }
        _ => {
            let pts: Vec<_> = (0..rng.gen_range(1..60))
                .map(|_| {
                    let x = unit_vector(rng);
                    let p = [x[0] * 3.0, x[1] * 3.0, x[2] * 3.0];
                    (p, unit_vector(rng))
                })
                .collect();
            SurfaceSampler::from_points(&pts)
        }
    };
    s.map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let sampler = random_sampler(&mut rng)?;
        let (c0, c1, c2): (f64, f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-3.0..3.0));
        let k = unit_vector(&mut rng);
        let a: Coefficient<f64> = Field::func(move |x: &[f64; 3]| c0 + c1 * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).sin() + c2 * x[2].tanh());
        let r = check_symmetry_condition(&mit_condition(a), &sampler, 1e-13).map_err(|e| e.to_string())?;
        check(r.passed, format!("residual {:e}", r.max_residual))?;
        worst = worst.max(r.max_residual);
    }
    let id = CMat2::<f64>::identity();
    let generic = BoundaryCondition::Generic {
        b1: Field::Const(id),
        b2: Field::Const(id),
    };
    let sampler = SurfaceSampler::sphere(1.0, 64).map_err(|e| e.to_string())?;
    let g = check_symmetry_condition(&generic, &sampler, 1e-10).map_err(|e| e.to_string())?;
    check(!g.passed, "identity condition passed")?;
    check((g.max_residual - 2.0).abs() <= 1e-12, format!("identity residual {}", g.max_residual))?;
    Ok(format!("100 MIT cases, max residual {worst:.1e}; identity residual {:.12}", g.max_residual))
}

fn criterion_5() -> Outcome {
    let xis: [[f64; 2]; 10] = [
        [0.0, 0.0],
        [1.0, 0.0],
        [0.0, -1.0],
        [3.0, 4.0],
        [0.25, 0.5],
        [-2.0, 1.5],
        [1e-3, 0.0],
        [7.0, -7.0],
        [-0.6, -0.8],
        [10.0, 0.1],
    ];
    let ms = [-2.0, -1.0, -0.3, 0.0, 1.5];
    let mut checked = 0;
    for xi in xis {
        for m in ms {
            let p = ModelProblem::new(xi, m);
            let k = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            let expected: Vec<f64> = if m < 0.0 {
                if k == 0.0 {
                    vec![0.0]
                } else {
                    vec![-k, k]
                }
            } else {
                vec![]
            };
            let got = model_discrete_spectrum(&p);
            check(
                got.len() == expected.len() && got.iter().zip(&expected).all(|(a, b)| (a - b).abs() <= 1e-12),
                format!("xi={xi:?} m={m}: {got:?} vs {expected:?}"),
            )?;
            let edge = (k * k + m * m).sqrt();
            for &l in &got {
                check(l.abs() < edge, format!("xi={xi:?} m={m}: {l} outside gap"))?;
                let d = dispersion_det(&p, l).map_err(|e| e.to_string())?;
                check(d.norm() <= 1e-12, format!("xi={xi:?} m={m}: |det| {:e}", d.norm()))?;
                let det = independent_dispersion(xi, m, l);
                check(det.norm() <= 1e-12 * (1.0 + edge * edge), format!("xi={xi:?} m={m}: direct |det| {:e}", det.norm()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("50 cases, {checked} eigenvalues with vanishing dispersion determinant"))
}

/// The boundary determinant assembled by hand from the decaying amplitudes.
fn independent_dispersion(xi: [f64; 2], m: f64, l: f64) -> Complex64 {
    let i = Complex64::i();
    let rho = (xi[0] * xi[0] + xi[1] * xi[1] + m * m - l * l).sqrt();
    let s = Complex64::new(xi[0], xi[1]);
    // Λ = [[−iρ, ς̄], [ς, iρ]]; h₁ = ((λ+m)e₁, Λe₁), h₂ = (Λe₂, (λ−m)e₂).
    let lam = [[-i * rho, s.conj()], [s, i * rho]];
    let h1 = [Complex64::from(l + m), 0.0.into(), lam[0][0], lam[1][0]];
    let h2 = [lam[0][1], lam[1][1], 0.0.into(), Complex64::from(l - m)];
    let tr = |h: [Complex64; 4]| [h[0] + i * h[2], h[1] - i * h[3]];
    let (c1, c2) = (tr(h1), tr(h2));
    c1[0] * c2[1] - c2[0] * c1[1]
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cases: [([f64; 2], f64); 5] = [([1.0, 0.0], -1.0), ([3.0, 4.0], -1.0), ([0.0, 0.0], -1.0), ([1.0, 0.0], 1.0), ([0.0, 0.0], 2.0)];
    let mut parts = Vec::new();
    for (xi, m) in cases {
        let p = ModelProblem::new(xi, m);
        let g = HalflineGrid::new(40.0, 4096, Scheme::StaggeredFd).map_err(|e| e.to_string())?;
        let r = compare(&p, &g, 5e-3).map_err(|e| e.to_string())?;
        check(
            r.passed,
            format!("xi={xi:?} m={m}: hausdorff fd {:e}, shooting {:e}", r.hausdorff_fd, r.hausdorff_shooting),
        )?;
        if m >= 0.0 {
            check(
                r.exact.is_empty() && r.fd.eigenvalues.is_empty() && r.shooting.is_empty(),
                format!("xi={xi:?} m={m}: spurious eigenvalues"),
            )?;
        }
        let order = convergence_order(&p, 40.0, &[512, 1024, 2048, 4096], default_window(&p)).map_err(|e| e.to_string())?;
        match order {
            Some(o) => {
                check(o >= 0.9, format!("xi={xi:?} m={m}: order {o:.2}"))?;
                parts.push(format!(
                    "({},{}),{}: dev {:.1e}/{:.1e} order {:.2}",
                    xi[0], xi[1], m, r.hausdorff_fd, r.hausdorff_shooting, o
                ));
            }
            None => {
                check(m >= 0.0, format!("xi={xi:?} m={m}: no convergence data"))?;
                parts.push(format!("({},{}),{}: empty", xi[0], xi[1], m));
            }
        }
    }
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("{} ({t:.2?})", parts.join("; ")))
}

fn closed_form_exterior(sup: f64, inf: f64, m: f64) -> SpectrumSet<f64> {
    let m = m.abs();
    if sup - inf >= 2.0 * m {
        SpectrumSet::real_line()
    } else {
        SpectrumSet::from_intervals(vec![Interval::at_most(sup - m), Interval::at_least(inf + m)])
    }
}

fn finite_endpoints(s: &SpectrumSet<f64>) -> Vec<f64> {
    s.intervals()
        .iter()
        .flat_map(|i| [i.lo, i.hi])
        .filter_map(|b| b.finite())
        .collect()
}

fn criterion_7() -> Outcome {
    let exact_cases = [
        (0.5, -0.5, 1.0),
        (0.5, -0.5, -1.0),
        (1.0, -1.0, 0.5),
        (1.0, -1.0, 1.0),
        (0.0, 0.0, 0.0),
        (0.3, 0.1, -2.0),
        (2.0, 1.5, 0.25),
    ];
    for (sup, inf, m) in exact_cases {
        let est = AsymptoticEstimate::from_bounds(sup, inf).map_err(|e| e.to_string())?;
        let got = essential_spectrum_exterior(&est, m);
        let want = closed_form_exterior(sup, inf, m);
        check(got == want, format!("({sup}, {inf}, {m}): {got:?} vs {want:?}"))?;
        if sup - inf >= 2.0 * m.abs() {
            check(
                got.intervals().len() == 1 && got.intervals()[0].lo == Bound::NegInf && got.intervals()[0].hi == Bound::PosInf,
                format!("({sup}, {inf}, {m}) did not collapse"),
            )?;
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for (sup, inf, m) in [(0.5, -0.5, 1.0), (0.3, 0.1, -2.0), (2.0, 1.5, 0.75)] {
        let sets: Vec<SpectrumSet<f64>> = (0..10_000)
            .map(|_| limit_constant_spectrum(rng.gen_range(inf..=sup), m))
            .collect();
        let sampled = union(&sets);
        let est = AsymptoticEstimate::from_bounds(sup, inf).map_err(|e| e.to_string())?;
        let formula = essential_spectrum_exterior(&est, m);
        let (a, b) = (finite_endpoints(&sampled), finite_endpoints(&formula));
        check(
            a.len() == b.len() && sampled.intervals().len() == formula.intervals().len(),
            format!("({sup}, {inf}, {m}): shape {sampled:?} vs {formula:?}"),
        )?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    check(worst <= 1e-3, format!("sampled endpoint error {worst:e}"))?;
    Ok(format!("{} closed-form cases exact; sampled union endpoint error {worst:.1e}", exact_cases.len()))
}

fn criterion_8() -> Outcome {
    for (sup, inf) in [(0.5, -0.5), (0.0, 0.0), (3.0, -1.0)] {
        let est = AsymptoticEstimate::from_bounds(sup, inf).map_err(|e| e.to_string())?;
        for m in [0.0, 0.5, 2.0, 10.0] {
            let conic = essential_spectrum_conic_mit(&est, m);
            check(
                conic == closed_form_exterior(sup, inf, m),
                format!("m={m}: conic {conic:?} differs from the exterior form"),
            )?;
            // No half-line bound states feed extra branches when m ≥ 0.
            check(model_discrete_spectrum(&ModelProblem::new([1.0, 2.0], m)).is_empty(), "bound states for m >= 0")?;
        }
        for m in [-0.1, -1.0, -5.0] {
            let conic = essential_spectrum_conic_mit(&est, m);
            check(conic.is_real_line(), format!("m={m}: {conic:?}"))?;
            // Every real λ is a branch value λ± = ±|ξ′| for some ξ′.
            for l in [-7.5f64, -1.0, -0.2, 0.0, 0.3, 2.0, 40.0] {
                let p = ModelProblem::new([l.abs() * 0.6, l.abs() * 0.8], m);
                let ev = model_discrete_spectrum(&p);
                check(ev.iter().any(|e| (e - l).abs() <= 1e-12), format!("m={m}: {l} not on a branch"))?;
            }
        }
    }
    Ok("m >= 0 gives the exterior form; m < 0 gives the whole line, swept by the +-|xi'| branches".into())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let (c, d, beta) = (0.0, 0.5, 1.0);
    let field = PotentialField::so_oscillating(c, d, beta).map_err(|e| e.to_string())?;
    let schedule: Vec<f64> = default_schedule();
    let opts = AsymptoticsOptions::new(&schedule);
    let est = estimate_asymptotics(&field, &opts).map_err(|e| e.to_string())?;

    // Dense radial scan over the same shells.
    let k = schedule.len();
    let (r0, r1) = (schedule[k - 1 - opts.n_shells], schedule[k - 1]);
    let n = 200_000;
    let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut outer_grad: f64 = 0.0;
    for j in 0..=n {
        let r = r0 * (r1 / r0).powf(j as f64 / n as f64);
        let v = c + d * (beta * (1.0 + r).ln()).sin();
        sup = sup.max(v);
        inf = inf.min(v);
        if r >= schedule[k - 2] {
            outer_grad = outer_grad.max((d * beta * (beta * (1.0 + r).ln()).cos() / (1.0 + r)).abs());
        }
    }
    check((est.m_sup - 0.5).abs() <= 1e-2, format!("m_sup {}", est.m_sup))?;
    check((est.m_inf + 0.5).abs() <= 1e-2, format!("m_inf {}", est.m_inf))?;
    check((est.m_sup - sup).abs() <= 1e-2 && (est.m_inf - inf).abs() <= 1e-2, format!("radial scan [{inf}, {sup}]"))?;
    let shell = est.shells.last().ok_or("no shells")?;
    check(shell.max_gradient <= 1e-3, format!("outer shell gradient {:e}", shell.max_gradient))?;
    check(
        (shell.max_gradient - outer_grad).abs() <= 1e-2 * outer_grad,
        format!("outer gradient {:e} vs radial scan {:e}", shell.max_gradient, outer_grad),
    )?;
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "M_sup {:.5}, M_inf {:.5} (scan {sup:.5}, {inf:.5}); outer gradient {:.2e} ({t:.2?})",
        est.m_sup, est.m_inf, shell.max_gradient
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let jobs = [
        check_ls_job("0.7"),
        r#"{"schema": 1, "command": "spectrum", "spectrum": {"m": 1.0},
            "potential": {"phi": {"family": "so-oscillating", "c": 0, "d": 0.5, "beta": 1}}}"#
            .to_string(),
        r#"{"schema": 1, "command": "asymptotics",
            "potential": {"phi": {"family": "radial-table", "radii": [0, 10, 100], "values": [1, 0.2, 0.3]}}}"#
            .to_string(),
        r#"{"schema": 1, "command": "model-eigen", "model": {"xi": [1, 2], "m": -1}}"#.to_string(),
        r#"{"schema": 1, "command": "oracle-compare", "model": {"xi": [1, 0], "m": -1}, "oracle": {"n": 512}}"#
            .to_string(),
        r#"{"schema": 1, "command": "verify-clifford"}"#.to_string(),
    ];
    for (k, job) in jobs.iter().enumerate() {
        let path = dir.path().join(format!("job{k}.json"));
        std::fs::write(&path, job).map_err(|e| e.to_string())?;
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                Command::new(env!("CARGO_BIN_EXE_dirac-bvp"))
                    .arg("--job")
                    .arg(&path)
                    .output()
                    .map(|o| o.stdout)
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        check(!outputs[0].is_empty(), format!("job {k} produced no report"))?;
        check(outputs[0] == outputs[1], format!("job {k} reports differ"))?;
    }
    Ok(format!("{} jobs, byte-identical reports", jobs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("clifford relations", criterion_1),
        ("LS determinant equivalence", criterion_2),
        ("MIT certification", criterion_3),
        ("symmetry condition", criterion_4),
        ("half-line spectra", criterion_5),
        ("oracle agreement", criterion_6),
        ("essential spectrum formulas", criterion_7),
        ("conic MIT dichotomy", criterion_8),
        ("asymptotic estimation", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
