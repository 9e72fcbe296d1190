//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured margins (run with `--nocapture` to see them).

mod common;

use rand::Rng;
use ring_eq::contact;
use ring_eq::curvature::CurvatureSolution;
use ring_eq::elliptic::{self, EllipticModulus};
use ring_eq::geometry::{self, CurveState};
use ring_eq::solver::{self, SolveOptions};
use ring_eq::{Error, RootSet};
use std::f64::consts::PI;
use std::time::Instant;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

/// Contact pressures for modes 2..15 reproduce the published table to 1e-3.
#[test]
fn criterion_1_contact_pressure_table() {
    let expected = [
        (2u32, 5.247),
        (3, 21.650),
        (4, 51.844),
        (5, 97.834),
        (6, 161.077),
        (7, 242.682),
        (8, 343.517),
        (9, 464.276),
        (10, 605.522),
        (11, 767.719),
        (12, 951.253),
        (13, 1156.450),
        (14, 1383.580),
        (15, 1632.890),
    ];
    let start = Instant::now();
    let options = opts();
    let solved: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = expected
            .iter()
            .map(|&(n, _)| scope.spawn(move || solver::solve_contact_pressure(n, &options)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut last = 0.0;
    for ((n, table), result) in expected.iter().zip(solved) {
        let c = result.unwrap_or_else(|e| panic!("mode {n} failed: {e}"));
        let rel = (c.sigma_cn - table).abs() / table;
        assert!(
            rel <= 1e-3,
            "mode {n}: sigma_c = {} vs table {table} (rel {rel:.2e})",
            c.sigma_cn
        );
        assert!(c.sigma_cn > (n * n - 1) as f64, "sigma_cn above buckling");
        assert!(c.sigma_cn > last, "table must increase in n");
        last = c.sigma_cn;
        assert!(c.residuals.0 <= 1e-10 && c.residuals.1 <= 1e-10 && c.residuals.2 <= 1e-9);
        assert!(0.0 <= c.s1_minus && c.s1_minus < c.s1_plus && c.s1_plus <= 0.5 * c.state.period());
    }
    println!(
        "ACCEPTANCE 1 PASS: 14 contact pressures match the table within 1e-3 ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

/// Buckling thresholds reject sigma <= n^2 - 1 and admit sigma just above.
#[test]
fn criterion_2_buckling_thresholds() {
    for n in 2..=6u32 {
        let threshold = (n * n - 1) as f64;
        for sigma in [threshold, 0.5 * threshold] {
            assert!(
                matches!(
                    solver::solve_equilibrium(n, sigma, &opts()),
                    Err(Error::BelowBuckling { .. })
                ),
                "mode {n} at sigma {sigma} must be below buckling"
            );
        }
        let state = solver::solve_equilibrium(n, threshold + 0.1, &opts())
            .unwrap_or_else(|e| panic!("mode {n} just above buckling: {e}"));
        assert!(state.residuals.0.abs() <= 1e-10);
        assert!(state.residuals.1.abs() <= 1e-10);
    }
    println!("ACCEPTANCE 2 PASS: buckling thresholds n^2 - 1 enforced for n = 2..6");
}

/// Simple shapes below the contact pressure; self-intersecting ones above it.
#[test]
fn criterion_3_figure_regimes() {
    let start = Instant::now();
    let simple = [(2u32, 4.75), (3, 16.25), (4, 35.25)];
    let crossing = [
        (2u32, 6.48),
        (2, 9.24),
        (2, 10.34),
        (3, 28.56),
        (3, 56.09),
        (3, 81.81),
        (4, 70.7),
        (4, 140.0),
        (4, 207.2),
    ];
    let options = opts();
    std::thread::scope(|scope| {
        for &(n, sigma) in &simple {
            let options = &options;
            scope.spawn(move || {
                let state = solver::solve_equilibrium(n, sigma, options).unwrap();
                let poly = state.sample(3000).unwrap();
                assert!(
                    poly.diagnostics.closure_error <= 1e-6,
                    "({n}, {sigma}) closure {}",
                    poly.diagnostics.closure_error
                );
                assert!(state.length_error() <= 1e-9, "({n}, {sigma}) length");
                assert!(
                    !poly.diagnostics.self_intersecting,
                    "({n}, {sigma}) must be simple"
                );
            });
        }
        for &(n, sigma) in &crossing {
            let options = &options;
            scope.spawn(move || {
                let state = solver::solve_equilibrium(n, sigma, options).unwrap();
                let poly = state.sample(3000).unwrap();
                assert!(poly.diagnostics.closure_error <= 1e-6, "({n}, {sigma})");
                assert!(
                    poly.diagnostics.self_intersecting,
                    "({n}, {sigma}) must self-intersect"
                );
            });
        }
    });
    println!(
        "ACCEPTANCE 3 PASS: 3 simple + 9 self-intersecting shapes verified ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

/// First integral and curvature ODE hold on random parameter sets.
#[test]
fn criterion_4_first_integral_and_ode() {
    let mut rng = common::rng(0x5eed_0004);
    let mut worst_fi = 0.0f64;
    let mut worst_ode = 0.0f64;
    for i in 0..1000 {
        let sol = if i % 2 == 0 {
            CurvatureSolution::k1(common::random_case_i(&mut rng))
                .expect("positive-chart Case I is non-degenerate")
        } else {
            let roots = common::random_case_ii(&mut rng);
            if i % 4 == 1 {
                CurvatureSolution::k3(roots).unwrap()
            } else {
                CurvatureSolution::k4(roots).unwrap()
            }
        };
        let p = sol.params();
        let t = sol.period();
        // keep clear of the half-period extrema for the differencing stencil
        let mut s = rng.gen_range(0.01..0.49) * t;
        if rng.gen_bool(0.5) {
            s += 0.5 * t;
        }
        let kp = sol.kappa_prime(s);
        let kappa = sol.kappa(s);
        let fi = (kp * kp - p.eval_p(kappa)).abs() / p.term_scale(kappa);
        assert!(fi <= 1e-8, "first integral: {fi:.2e} at set {i}");
        worst_fi = worst_fi.max(fi);

        let ode = sol.ode_residual(s).abs() / p.sigma.abs().max(1.0);
        assert!(ode <= 1e-5, "ODE residual {ode:.2e} at set {i}");
        worst_ode = worst_ode.max(ode);
    }
    println!(
        "ACCEPTANCE 4 PASS: 1000 parameter sets, worst first-integral {worst_fi:.2e}, worst ODE {worst_ode:.2e}"
    );
}

/// Special functions agree with the quadrature/root-refinement oracle.
#[test]
fn criterion_5_special_function_oracles() {
    let mut rng = common::rng(0x5eed_0005);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs()));
    let mut count = 0;
    // complete first kind
    for _ in 0..150 {
        let k = rng.gen_range(0.0..0.995);
        let m = EllipticModulus::new(k).unwrap();
        assert!(close(elliptic::complete_k(m), common::oracle_k(k)), "K({k})");
        count += 1;
    }
    // incomplete first kind with quasi-periodic arguments
    for _ in 0..150 {
        let k = rng.gen_range(0.0..0.99);
        let phi = rng.gen_range(-3.0 * PI..3.0 * PI);
        let m = EllipticModulus::new(k).unwrap();
        assert!(
            close(elliptic::incomplete_f(phi, m), common::oracle_f(phi, k)),
            "F({phi}, {k})"
        );
        count += 1;
    }
    // incomplete third kind
    for _ in 0..100 {
        let k = rng.gen_range(0.0..0.99);
        let n = rng.gen_range(-4.0..0.9);
        let phi = rng.gen_range(-2.5 * PI..2.5 * PI);
        let m = EllipticModulus::new(k).unwrap();
        assert!(
            close(
                elliptic::incomplete_pi(n, phi, m).unwrap(),
                common::oracle_pi(n, phi, k)
            ),
            "Pi({n}, {phi}, {k})"
        );
        count += 1;
    }
    // amplitude and the Jacobi triple
    for _ in 0..100 {
        let k = rng.gen_range(0.05..0.99);
        let m = EllipticModulus::new(k).unwrap();
        let big_k = elliptic::complete_k(m);
        let u = rng.gen_range(-6.0 * big_k..6.0 * big_k);
        let j = elliptic::jacobi(u, m);
        let am = common::oracle_am(u, k);
        assert!(close(j.am, am), "am({u}, {k}): {} vs {am}", j.am);
        assert!((j.sn - am.sin()).abs() <= 1e-10);
        assert!((j.cn - am.cos()).abs() <= 1e-10);
        assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12);
        assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() <= 1e-12);
        count += 1;
    }
    println!("ACCEPTANCE 5 PASS: {count} oracle comparisons at 1e-10, identities at 1e-12");
}

/// Geometric identities on solved shapes.
#[test]
fn criterion_6_geometric_identities() {
    for (n, sigma) in [(2u32, 4.75), (3, 16.25), (4, 35.25), (5, 30.0)] {
        let state = solver::solve_equilibrium(n, sigma, &opts()).unwrap();
        let sol = state.solution();
        let p = state.params;
        let length = n as f64 * state.period();
        let h = 1e-5;
        for i in 0..200 {
            let s = (i as f64 + 0.37) / 200.0 * length;
            let (x, y) = geometry::shape_point(sol, s).unwrap();
            // radius identity
            let rhs = 0.5 * p.sigma * (x * x + y * y) - (p.mu * p.mu + p.epsilon) / (2.0 * p.sigma);
            assert!((sol.kappa(s) - rhs).abs() <= 1e-8, "radius identity ({n},{sigma})");
            // force magnitude
            let (_, tension, shear) = geometry::forces_moment(sol, s, 1.0, 1.0);
            assert!(
                (tension.hypot(shear) - p.sigma * x.hypot(y)).abs() <= 1e-8,
                "|F| = sigma r ({n},{sigma})"
            );
            // unit speed and phi' = kappa
            let (x1, y1) = geometry::shape_point(sol, s - h).unwrap();
            let (x2, y2) = geometry::shape_point(sol, s + h).unwrap();
            let (dx, dy) = ((x2 - x1) / (2.0 * h), (y2 - y1) / (2.0 * h));
            assert!((dx.hypot(dy) - 1.0).abs() <= 1e-6, "unit speed");
            assert!((dx - sol.phi(s).cos()).abs() <= 1e-6);
            assert!((dy - sol.phi(s).sin()).abs() <= 1e-6);
            let dphi = (sol.phi(s + h) - sol.phi(s - h)) / (2.0 * h);
            assert!((dphi - sol.kappa(s)).abs() <= 1e-6, "phi' = kappa");
        }
    }
    println!("ACCEPTANCE 6 PASS: unit speed, phi' = kappa, radius and |F| identities on 4 shapes");
}

/// Similarity transformation scales shapes by 1/l and the conductivity law holds.
#[test]
fn criterion_7_similarity_law() {
    let state = solver::solve_equilibrium(3, 16.25, &opts()).unwrap();
    let sol = state.solution();
    for l in [0.5, 2.0, 3.7] {
        let scaled = sol.rescaled(l).unwrap();
        for i in 0..30 {
            let s = i as f64 / 30.0 * 3.0 * state.period();
            let (x, y) = geometry::shape_point(sol, s).unwrap();
            let (xs, ys) = geometry::shape_point(&scaled, s / l).unwrap();
            assert!(
                (xs - x / l).abs() <= 1e-9 && (ys - y / l).abs() <= 1e-9,
                "pointwise scaling at l = {l}"
            );
        }
        let poly = geometry::sample_shape(sol, 3, 3000).unwrap();
        let poly_scaled = geometry::sample_shape(&scaled, 3, 3000).unwrap();
        let ratio = poly_scaled.area() / poly.area();
        assert!(
            (ratio - 1.0 / (l * l)).abs() <= 1e-6,
            "area ratio {ratio} vs {}",
            1.0 / (l * l)
        );
    }
    // conductivity law against the solved contact pressure of mode 3
    let c = solver::solve_contact_pressure(3, &opts()).unwrap();
    assert_eq!(c.conductivity_ratio(c.sigma_cn).unwrap(), 1.0);
    for factor in [1.5, 2.7, 10.0] {
        let sigma = factor * c.sigma_cn;
        let expect = (1.0 / factor as f64).powf(4.0 / 3.0);
        assert!((c.conductivity_ratio(sigma).unwrap() - expect).abs() <= 1e-15);
    }
    println!("ACCEPTANCE 7 PASS: similarity scaling 1/l (pointwise 1e-9, area 1/l^2) and (sigma_cn/sigma)^(4/3)");
}

/// Composite lines-of-contact shapes close, stay tangent-continuous and balance.
#[test]
fn criterion_8_lines_of_contact_balance() {
    let start = Instant::now();
    let cases = [
        (2u32, 10.34),
        (3, 81.81),
        (4, 207.2),
        (6, 400.0),
        (9, 800.0),
        (12, 1500.0),
    ];
    let options = opts();
    std::thread::scope(|scope| {
        for &(n, sigma_hat) in &cases {
            let options = &options;
            scope.spawn(move || {
                let shape = contact::build_contact_line_shape(n, sigma_hat, 4096, options)
                    .unwrap_or_else(|e| panic!("({n}, {sigma_hat}): {e}"));
                assert!(
                    shape.polyline.diagnostics.length_error <= 1e-6,
                    "({n}, {sigma_hat}) length error {}",
                    shape.polyline.diagnostics.length_error
                );
                assert!(
                    shape.junction_angle_error <= 1e-5,
                    "({n}, {sigma_hat}) junction angle {}",
                    shape.junction_angle_error
                );
                let balance = contact::total_balance_check(&shape);
                assert!(
                    balance.force_residual <= 1e-5,
                    "({n}, {sigma_hat}) force residual {}",
                    balance.force_residual
                );
                assert!(
                    balance.moment_residual <= 1e-5,
                    "({n}, {sigma_hat}) moment residual {}",
                    balance.moment_residual
                );
            });
        }
    });
    println!(
        "ACCEPTANCE 8 PASS: 6 composite shapes: length 2pi, tangents continuous, balances <= 1e-5 ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

/// The alternative contact system phi1(s1+) = -pi/2 has no root for n = 2..15.
#[test]
fn criterion_9_alternative_contact_system() {
    let start = Instant::now();
    let options = opts();
    let reports: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = (2..=15u32)
            .map(|n| scope.spawn(move || solver::alternative_contact_report(n, &options)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for report in reports {
        let r = report.expect("scan must complete");
        assert!(
            !r.root_found,
            "mode {}: unexpected root of the alternative system",
            r.n
        );
        assert_eq!(r.sign_changes, 0, "mode {}", r.n);
        assert!(r.min_abs_residual > 1e-3, "mode {}", r.n);
        println!(
            "  mode {:>2}: no root over sigma in [{:.3}, {:.3}], min |phi1(s1+) + pi/2| = {:.4}",
            r.n, r.sigma_lo, r.sigma_hi, r.min_abs_residual
        );
    }
    println!(
        "ACCEPTANCE 9 PASS: alternative contact system has no solution for n = 2..15 ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}
