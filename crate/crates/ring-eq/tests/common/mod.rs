//! Shared test support: an adaptive-quadrature oracle for the elliptic
//! integrals, a root-refinement oracle for the Jacobi amplitude, and seeded
//! random generators. Everything here evaluates the defining integrals
//! directly and never calls into the library's elliptic kernel.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adaptive Simpson quadrature to the requested absolute tolerance.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(f, a, fa, m, fm, flm);
        let right = simpson(f, m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(f, a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// `K(k)` by quadrature of its defining integral.
pub fn oracle_k(k: f64) -> f64 {
    oracle_f(FRAC_PI_2, k)
}

/// `F(phi, k)` by quadrature over `[0, phi]` (any real `phi`).
pub fn oracle_f(phi: f64, k: f64) -> f64 {
    let f = move |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    integrate(&f, 0.0, phi, 1e-13)
}

/// `Pi(n, phi, k)` by quadrature over `[0, phi]`.
pub fn oracle_pi(n: f64, phi: f64, k: f64) -> f64 {
    let f = move |t: f64| {
        let s2 = t.sin().powi(2);
        1.0 / ((1.0 - n * s2) * (1.0 - k * k * s2).sqrt())
    };
    integrate(&f, 0.0, phi, 1e-13)
}

/// Amplitude `am(u, k)` by safeguarded Newton refinement of `F(phi) = u`
/// against the quadrature oracle.
pub fn oracle_am(u: f64, k: f64) -> f64 {
    let big_k = oracle_k(k);
    let mut phi = u * FRAC_PI_2 / big_k;
    // F' ranges in [1, 1/k']: bracket generously around the linear estimate
    let (mut lo, mut hi) = (phi - FRAC_PI_2, phi + FRAC_PI_2);
    while oracle_f(lo, k) > u {
        lo -= FRAC_PI_2;
    }
    while oracle_f(hi, k) < u {
        hi += FRAC_PI_2;
    }
    for _ in 0..80 {
        let fv = oracle_f(phi, k) - u;
        if fv.abs() < 1e-13 * (1.0 + u.abs()) {
            break;
        }
        if fv > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let slope = 1.0 / (1.0 - k * k * phi.sin().powi(2)).sqrt();
        let next = phi - fv / slope;
        phi = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * (1.0 + phi.abs()) {
            break;
        }
    }
    phi
}

/// Random Case I root set through the positive `(sigma, eta, q)` chart.
pub fn random_case_i(rng: &mut ChaCha8Rng) -> ring_eq::RootSet {
    let sigma = rng.gen_range(0.5..40.0);
    let eta = rng.gen_range(0.1..6.0);
    let q = rng.gen_range(0.1..6.0);
    ring_eq::RootSet::from_sigma_eta_q(sigma, eta, q)
}

/// Random strictly ordered Case II root set with zero sum.
pub fn random_case_ii(rng: &mut ChaCha8Rng) -> ring_eq::RootSet {
    loop {
        let mut r = [0.0f64; 4];
        for v in r.iter_mut().take(3) {
            *v = rng.gen_range(-5.0..5.0);
        }
        r[3] = -(r[0] + r[1] + r[2]);
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if r.windows(2).all(|w| w[1] - w[0] > 0.05) {
            return ring_eq::RootSet::CaseII {
                alpha: r[0],
                beta: r[1],
                gamma: r[2],
                delta: r[3],
            };
        }
    }
}
