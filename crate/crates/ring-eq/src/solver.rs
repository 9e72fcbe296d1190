//! Transcendental systems selecting closed equilibrium rings.
//!
//! For a mode `n >= 2` and pressure `sigma` above the buckling threshold
//! `sigma_bn = n^2 - 1`, the closure and length conditions
//!
//! ```text
//! (A+B)(a-b)/(2 l1 (A-B)) Pi(-C, k1) + (A b - B a)/(l1 (A-B)) K(k1) = +- pi/(2n)
//! K(k1)/l1 = pi/(2n)
//! ```
//!
//! determine the root parameters `(eta, q)`. Both equations depend on `eta`
//! only through `t = eta^2`, and the solver works in `(t, q)`: the branch of a
//! mode drives `t` to zero at `sigma = (2n-1)(3n-1)(n-1)` (where the shape is
//! the elementary degenerate profile) and continues smoothly into `t < 0`,
//! where the conjugate root pair splits and the curvature follows the upper
//! Case II family. The residuals are normalized per quarter period so they are
//! continuous across `t = 0`.
//!
//! Contact pressures: along the solved branch the curvature minimum deepens
//! until `alpha = -sqrt(2 mu)`. The arclengths with `kappa = -+sqrt(2 mu)`
//! exist below that edge pressure, and the contact condition
//! `phi1(s1-) = pi/n - pi/2` picks the unique pressure `sigma_cn` at which the
//! shape touches itself. For `n = 2` the contact sits exactly at the edge,
//! which reduces to the algebraic relation `sigma = (eta^2+q^2)^2/(16 q)`.

use crate::curvature::CurvatureSolution;
use crate::elliptic::{self, EllipticModulus};
use crate::geometry::{self, ShapePolyline};
use crate::quartic::{PolyParams, RootSet};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Residual tolerance of the equilibrium solve.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
/// Residual tolerance of the contact condition.
pub const CONTACT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Convergence threshold on the closure/length residuals.
    pub tol: f64,
    /// Newton iteration cap per candidate.
    pub max_iter: usize,
    /// Nodes per axis of the coarse rectangular scan.
    pub scan_grid: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_RESIDUAL_TOL,
            max_iter: 100,
            scan_grid: 48,
        }
    }
}

/// Buckling pressure `sigma_bn = n^2 - 1` of mode `n >= 2`.
pub fn buckling_pressure(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "mode n = {n} below 2 (four-vertex theorem)"
        )));
    }
    Ok((n * n - 1) as f64)
}

/// Closure and length residuals `(f1, f2)` at `(eta, q)` for the given mode,
/// pressure and closure sign. Normalized per quarter period.
pub fn closure_residuals(eta: f64, q: f64, n: u32, sigma: f64, sign: i8) -> Result<(f64, f64)> {
    residuals_t(eta * eta, q, n, sigma, sign)
}

/// Residuals in the continued parametrization `t = eta^2` (any sign of `t`).
fn residuals_t(t: f64, q: f64, n: u32, sigma: f64, sign: i8) -> Result<(f64, f64)> {
    let roots = RootSet::from_sigma_eta_sq_q(sigma, t, q)?;
    let target_quarter = PI / (2.0 * n as f64);
    let sgn = sign as f64;
    match roots {
        RootSet::CaseI { alpha, beta, eta } => {
            let m = crate::curvature::CaseIModuli::from_roots(alpha, beta, eta)?;
            if (m.a - m.b).abs() <= 1e-12 * (m.a + m.b) {
                return Err(Error::DegenerateModuli("A = B in closure residual".into()));
            }
            let k = elliptic::complete_k(m.modulus);
            let pi_c = elliptic::complete_pi(-m.c, m.modulus)?;
            let f1 = (m.a + m.b) * (alpha - beta) / (2.0 * m.lambda * (m.a - m.b)) * pi_c
                + (m.a * beta - m.b * alpha) / (m.lambda * (m.a - m.b)) * k
                - sgn * target_quarter;
            let f2 = k / m.lambda - target_quarter;
            Ok((f1, f2))
        }
        RootSet::CaseII {
            alpha,
            beta,
            gamma,
            delta,
        } => {
            let m = crate::curvature::CaseIIModuli::from_roots(alpha, beta, gamma, delta)?;
            let k = elliptic::complete_k(m.modulus);
            let n4 = (delta - gamma) / (delta - beta);
            let pi_c = elliptic::complete_pi(n4, m.modulus)?;
            let period = 2.0 * k / m.lambda;
            // slope angle of the upper family over one period
            let phi_period = beta * period - 2.0 * (beta - gamma) / m.lambda * pi_c;
            let f1 = 0.25 * (phi_period - sgn * 4.0 * target_quarter);
            let f2 = 0.25 * (period - 4.0 * target_quarter);
            Ok((f1, f2))
        }
    }
}

/// A solved closed equilibrium of mode `n` at pressure `sigma`.
#[derive(Debug, Clone)]
pub struct EquilibriumState {
    pub n: u32,
    pub sigma: f64,
    /// Continued parameter `t = eta^2`; negative past the degenerate pressure
    /// `(2n-1)(3n-1)(n-1)` where the root pair has split (Case II regime).
    pub eta_sq: f64,
    pub q: f64,
    /// Sign of the closure branch that converged (`+1` for all known shapes).
    pub rotation_sign: i8,
    pub roots: RootSet,
    pub params: PolyParams,
    /// Final `(closure, length)` residuals.
    pub residuals: (f64, f64),
    solution: CurvatureSolution,
}

impl EquilibriumState {
    /// `eta` when the state is in the Case I regime.
    pub fn eta(&self) -> Option<f64> {
        (self.eta_sq >= 0.0).then(|| self.eta_sq.sqrt())
    }

    pub fn solution(&self) -> &CurvatureSolution {
        &self.solution
    }

    /// Least period of the curvature.
    pub fn period(&self) -> f64 {
        self.solution.period()
    }

    /// `|n T - 2 pi|`.
    pub fn length_error(&self) -> f64 {
        (self.n as f64 * self.period() - 2.0 * PI).abs()
    }

    /// Sample the shape over one full ring length.
    pub fn sample(&self, n_samples: usize) -> Result<ShapePolyline> {
        geometry::sample_shape(&self.solution, self.n, n_samples)
    }
}

fn build_state(n: u32, sigma: f64, t: f64, q: f64, sign: i8, res: (f64, f64)) -> Result<EquilibriumState> {
    let roots = RootSet::from_sigma_eta_sq_q(sigma, t, q)?;
    let solution = match roots {
        RootSet::CaseI { eta, .. } if eta > 0.0 => CurvatureSolution::k1(roots)?,
        RootSet::CaseI { .. } => CurvatureSolution::k2(roots)?,
        RootSet::CaseII { .. } => CurvatureSolution::k4(roots)?,
    };
    Ok(EquilibriumState {
        n,
        sigma,
        eta_sq: t,
        q,
        rotation_sign: sign,
        roots,
        params: solution.params(),
        residuals: res,
        solution,
    })
}

/// Damped Newton refinement in `(t, q)` from one starting point.
fn newton_refine(
    n: u32,
    sigma: f64,
    sign: i8,
    mut t: f64,
    mut q: f64,
    opts: &SolveOptions,
) -> Option<(f64, f64, (f64, f64))> {
    let mut f = residuals_t(t, q, n, sigma, sign).ok()?;
    let mut polish_left = 3;
    for _ in 0..opts.max_iter {
        let norm = f.0.abs().max(f.1.abs());
        if norm <= opts.tol {
            // a couple of extra steps push the residual to machine precision
            if polish_left == 0 || norm == 0.0 {
                return Some((t, q, f));
            }
            polish_left -= 1;
        }
        let ht = 1e-7 * t.abs().max(1e-2);
        let hq = 1e-7 * q.abs().max(1e-2);
        let ft = residuals_t(t + ht, q, n, sigma, sign).ok()?;
        let fq = residuals_t(t, q + hq, n, sigma, sign).ok()?;
        let j = [
            [(ft.0 - f.0) / ht, (fq.0 - f.0) / hq],
            [(ft.1 - f.1) / ht, (fq.1 - f.1) / hq],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dt = -(f.0 * j[1][1] - f.1 * j[0][1]) / det;
        let dq = -(j[0][0] * f.1 - j[1][0] * f.0) / det;
        let f_sq = f.0 * f.0 + f.1 * f.1;
        let mut fac = 1.0;
        let mut improved = false;
        while fac >= 1e-4 {
            let (tn, qn) = (t + fac * dt, q + fac * dq);
            if qn > 0.0 && qn * qn + tn > 0.0 {
                if let Ok(fn_) = residuals_t(tn, qn, n, sigma, sign) {
                    if fn_.0 * fn_.0 + fn_.1 * fn_.1 < f_sq {
                        t = tn;
                        q = qn;
                        f = fn_;
                        improved = true;
                        break;
                    }
                }
            }
            fac *= 0.5;
        }
        if !improved {
            let norm = f.0.abs().max(f.1.abs());
            return (norm <= opts.tol).then_some((t, q, f));
        }
    }
    let norm = f.0.abs().max(f.1.abs());
    (norm <= opts.tol).then_some((t, q, f))
}

/// Coarse rectangular scan: cells of the `(u, q)` grid (with `t = dir u^2`)
/// where both residuals change sign across the corners.
fn scan_candidates(
    n: u32,
    sigma: f64,
    sign: i8,
    dir: f64,
    grid: usize,
    u_hi: f64,
) -> Vec<(f64, f64)> {
    let lo = 1e-3;
    let coord = |i: usize| lo + (u_hi - lo) * i as f64 / grid as f64;
    let mut values = vec![None; (grid + 1) * (grid + 1)];
    for (iu, value_row) in values.chunks_mut(grid + 1).enumerate() {
        let u = coord(iu);
        for (iq, slot) in value_row.iter_mut().enumerate() {
            let q = coord(iq);
            *slot = residuals_t(dir * u * u, q, n, sigma, sign)
                .ok()
                .filter(|f| f.0.is_finite() && f.1.is_finite());
        }
    }
    let at = |iu: usize, iq: usize| values[iu * (grid + 1) + iq];
    let mut cells = Vec::new();
    for iu in 0..grid {
        for iq in 0..grid {
            let corners = [
                at(iu, iq),
                at(iu + 1, iq),
                at(iu, iq + 1),
                at(iu + 1, iq + 1),
            ];
            if corners.iter().any(|c| c.is_none()) {
                continue;
            }
            let c: Vec<(f64, f64)> = corners.into_iter().map(Option::unwrap).collect();
            let change =
                |pick: fn(&(f64, f64)) -> f64| c.iter().any(|v| pick(v) > 0.0) && c.iter().any(|v| pick(v) < 0.0);
            if change(|v| v.0) && change(|v| v.1) {
                let u = 0.5 * (coord(iu) + coord(iu + 1));
                let q = 0.5 * (coord(iq) + coord(iq + 1));
                cells.push((dir * u * u, q));
            }
        }
    }
    cells
}

/// Solve the closure/length system for one closure sign.
pub fn solve_equilibrium_signed(
    n: u32,
    sigma: f64,
    sign: i8,
    opts: &SolveOptions,
) -> Result<EquilibriumState> {
    let threshold = buckling_pressure(n)?;
    if sigma <= threshold {
        return Err(Error::BelowBuckling {
            n,
            sigma,
            threshold,
        });
    }
    let u0 = 2.0 * sigma.sqrt() * 1.05;
    let mut best_fail: Option<(f64, f64)> = None;
    let stages = [
        (opts.scan_grid, u0),
        (opts.scan_grid * 2, u0),
        (opts.scan_grid * 2, 2.0 * u0),
        (opts.scan_grid * 3, 4.0 * u0),
    ];
    for (grid, u_hi) in stages {
        // the spec's positive-eta quadrant first, the split-root half if empty
        for dir in [1.0, -1.0] {
            let mut found: Vec<(f64, f64, (f64, f64))> = Vec::new();
            for (t0, q0) in scan_candidates(n, sigma, sign, dir, grid, u_hi) {
                match newton_refine(n, sigma, sign, t0, q0, opts) {
                    Some(hit) => {
                        if !found
                            .iter()
                            .any(|h| (h.0 - hit.0).abs() + (h.1 - hit.1).abs() < 1e-6 * (1.0 + hit.1.abs()))
                        {
                            found.push(hit);
                        }
                    }
                    None => {
                        if let Ok(f) = residuals_t(t0, q0, n, sigma, sign) {
                            let norm = f.0.abs().max(f.1.abs());
                            if best_fail.map_or(true, |b| norm < b.0.abs().max(b.1.abs())) {
                                best_fail = Some(f);
                            }
                        }
                    }
                }
            }
            if let Some(hit) = found
                .into_iter()
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            {
                return build_state(n, sigma, hit.0, hit.1, sign, hit.2);
            }
        }
    }
    let (context, residual) = match best_fail {
        Some(f) if f.0.abs() >= f.1.abs() => ("closure equation stalled".to_string(), f.0.abs()),
        Some(f) => ("ring-length equation stalled".to_string(), f.1.abs()),
        None => (
            format!("no sign-change cell found for mode {n} at sigma = {sigma}"),
            f64::INFINITY,
        ),
    };
    Err(Error::NoConvergence { context, residual })
}

/// Solve the closure/length system, preferring the plus closure branch.
pub fn solve_equilibrium(n: u32, sigma: f64, opts: &SolveOptions) -> Result<EquilibriumState> {
    match solve_equilibrium_signed(n, sigma, 1, opts) {
        Ok(state) => Ok(state),
        Err(Error::BelowBuckling { n, sigma, threshold }) => {
            Err(Error::BelowBuckling { n, sigma, threshold })
        }
        Err(first) => solve_equilibrium_signed(n, sigma, -1, opts).map_err(|_| first),
    }
}

/// Warm-started solve used by marching loops; falls back to the full scan.
fn solve_warm(
    n: u32,
    sigma: f64,
    guess: Option<(f64, f64)>,
    opts: &SolveOptions,
) -> Result<EquilibriumState> {
    if let Some((t0, q0)) = guess {
        if let Some((t, q, f)) = newton_refine(n, sigma, 1, t0, q0, opts) {
            return build_state(n, sigma, t, q, 1, f);
        }
    }
    solve_equilibrium_signed(n, sigma, 1, opts)
}

/// Arclengths `s1- < s1+` in `[0, T/2]` where the curvature reaches
/// `-sqrt(2 mu)` and `+sqrt(2 mu)`.
pub fn contact_arclengths(state: &EquilibriumState) -> Result<(f64, f64)> {
    let RootSet::CaseI { alpha, beta, .. } = state.roots else {
        return Err(Error::NoContactCandidates);
    };
    let mu = state.params.mu;
    if mu <= 0.0 {
        return Err(Error::NoContactCandidates);
    }
    let r = (2.0 * mu).sqrt();
    let slack = 1e-9 * (1.0 + alpha.abs().max(beta));
    if !(alpha <= -r + slack && beta >= r - slack) {
        return Err(Error::NoContactCandidates);
    }
    let m = state
        .solution
        .case_i_moduli()
        .expect("Case I state has Case I moduli");
    let invert = |kappa: f64| -> f64 {
        let c = (m.a * beta + m.b * alpha - kappa * (m.a + m.b))
            / (m.a * beta - m.b * alpha - kappa * (m.a - m.b));
        if c >= 1.0 - 1e-12 {
            return 0.0;
        }
        elliptic::incomplete_f(c.clamp(-1.0, 1.0).acos(), m.modulus) / m.lambda
    };
    Ok((invert(-r), invert(r)))
}

/// A solved contact state: the pressure at which mode `n` first touches itself.
#[derive(Debug, Clone)]
pub struct ContactSolution {
    pub n: u32,
    pub sigma_cn: f64,
    pub eta: f64,
    pub q: f64,
    pub s1_minus: f64,
    pub s1_plus: f64,
    /// `(closure, length, contact)` residuals.
    pub residuals: (f64, f64, f64),
    pub state: EquilibriumState,
}

impl ContactSolution {
    /// Conductivity multiplier `(sigma_cn / sigma)^(4/3)` of the collapsed tube.
    pub fn conductivity_ratio(&self, sigma: f64) -> Result<f64> {
        crate::contact::conductivity_ratio(self.n, self.sigma_cn, sigma)
    }
}

/// Marching state shared by the contact solvers: tracks the latest `(t, q)`.
struct BranchWalker {
    n: u32,
    opts: SolveOptions,
    guess: Option<(f64, f64)>,
}

impl BranchWalker {
    fn new(n: u32, opts: &SolveOptions) -> Self {
        BranchWalker {
            n,
            opts: *opts,
            guess: None,
        }
    }

    fn solve(&mut self, sigma: f64) -> Result<EquilibriumState> {
        let state = solve_warm(self.n, sigma, self.guess, &self.opts)?;
        self.guess = Some((state.eta_sq, state.q));
        Ok(state)
    }

    /// `alpha + sqrt(2 mu)`: negative while contact candidates exist, zero at
    /// the edge pressure. `None` while `mu <= 0`.
    fn edge(&mut self, sigma: f64) -> Result<Option<f64>> {
        let state = self.solve(sigma)?;
        let RootSet::CaseI { alpha, .. } = state.roots else {
            return Ok(None);
        };
        let mu = state.params.mu;
        Ok((mu > 0.0).then(|| alpha + (2.0 * mu).sqrt()))
    }
}

/// Pressure at which `alpha = -sqrt(2 mu)` on the mode-`n` branch, plus the
/// last pressure below it where candidates were still defined.
fn edge_pressure(walker: &mut BranchWalker, n: u32) -> Result<(f64, f64)> {
    let sigma_b = buckling_pressure(n)?;
    let mut sigma = 1.2 * sigma_b + 0.2;
    let mut prev = sigma;
    let mut below: Option<(f64, f64)> = None;
    let mut above: Option<(f64, f64)> = None;
    for _ in 0..200 {
        match walker.edge(sigma)? {
            Some(e) if e < 0.0 => below = Some((sigma, e)),
            Some(e) => {
                above = Some((sigma, e));
                break;
            }
            None => {}
        }
        prev = sigma;
        sigma *= 1.2;
        if sigma > 1e4 * sigma_b {
            break;
        }
    }
    if below.is_none() && above.is_some() {
        // the march jumped over the whole candidate window: near the lower end
        // of the window mu -> 0+ while alpha < 0, so e < 0 exists inside
        let (mut a, mut b) = (prev, above.unwrap().0);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            match walker.edge(mid)? {
                Some(e) if e < 0.0 => {
                    below = Some((mid, e));
                    break;
                }
                Some(_) => b = mid,
                None => a = mid,
            }
        }
    }
    let (Some((mut lo, _)), Some((mut hi, _))) = (below, above) else {
        return Err(Error::NoConvergence {
            context: format!("no contact-candidate window found for mode {n}"),
            residual: f64::INFINITY,
        });
    };
    // bisect the edge function
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        match walker.edge(mid)? {
            Some(e) if e < 0.0 => lo = mid,
            _ => hi = mid,
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok((0.5 * (lo + hi), lo))
}

/// Contact-condition residual `phi1(s1-) - (pi/n - pi/2)` on the branch.
fn contact_gap(walker: &mut BranchWalker, sigma: f64) -> Result<f64> {
    let state = walker.solve(sigma)?;
    let (s1m, _) = contact_arclengths(&state)?;
    Ok(state.solution().phi(s1m) - (PI / walker.n as f64 - 0.5 * PI))
}

/// Solve for the contact pressure `sigma_cn` of mode `n`.
pub fn solve_contact_pressure(n: u32, opts: &SolveOptions) -> Result<ContactSolution> {
    buckling_pressure(n)?;
    let mut walker = BranchWalker::new(n, opts);
    let (sigma_edge, _) = edge_pressure(&mut walker, n)?;

    let sigma_cn = if n == 2 {
        // phi1(s1-) = 0 forces s1- = 0, i.e. the edge itself; equivalently the
        // algebraic relation sigma = (eta^2 + q^2)^2 / (16 q)
        sigma_edge
    } else {
        // g is negative below sigma_cn and rises to pi/2 - pi/n at the edge
        let mut hi = sigma_edge * (1.0 - 1e-9);
        let mut g_hi = contact_gap(&mut walker, hi)?;
        let mut lo = hi;
        let mut g_lo = g_hi;
        let mut step = 0.02;
        while g_lo > 0.0 {
            lo *= 1.0 - step;
            step = (step * 1.6).min(0.3);
            g_lo = match contact_gap(&mut walker, lo) {
                Ok(g) => g,
                Err(Error::NoContactCandidates) => {
                    return Err(Error::NoConvergence {
                        context: format!("contact residual stayed positive over mode-{n} window"),
                        residual: g_hi,
                    })
                }
                Err(e) => return Err(e),
            };
        }
        // bisection with a secant accelerant on [lo, hi]
        let mut root = 0.5 * (lo + hi);
        for _ in 0..200 {
            let secant = lo - g_lo * (hi - lo) / (g_hi - g_lo);
            root = if (lo..=hi).contains(&secant) && (hi - lo) < 0.2 * hi {
                secant
            } else {
                0.5 * (lo + hi)
            };
            let g = contact_gap(&mut walker, root)?;
            if g.abs() <= CONTACT_RESIDUAL_TOL || (hi - lo) <= 1e-14 * hi {
                break;
            }
            if g < 0.0 {
                lo = root;
                g_lo = g;
            } else {
                hi = root;
                g_hi = g;
            }
        }
        root
    };

    let state = walker.solve(sigma_cn)?;
    let (s1m, s1p) = contact_arclengths(&state)?;
    let g = state.solution().phi(s1m) - (PI / n as f64 - 0.5 * PI);
    let eta = state.eta().ok_or_else(|| Error::NoConvergence {
        context: "contact state left the Case I regime".into(),
        residual: f64::INFINITY,
    })?;
    let contact_residual = if n == 2 {
        // report the algebraic-relation residual; s1- sits at the domain edge
        let algebraic = (eta * eta + state.q * state.q).powi(2) / (16.0 * state.q);
        (state.sigma - algebraic).abs() / state.sigma
    } else {
        g.abs()
    };
    Ok(ContactSolution {
        n,
        sigma_cn,
        eta,
        q: state.q,
        s1_minus: s1m,
        s1_plus: s1p,
        residuals: (state.residuals.0.abs(), state.residuals.1.abs(), contact_residual),
        state,
    })
}

/// Scan record for the alternative contact system `phi1(s1+) = -pi/2`.
#[derive(Debug, Clone)]
pub struct AlternativeContactReport {
    pub n: u32,
    /// Scanned pressure window (where contact candidates exist).
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub samples: usize,
    /// Smallest `|phi1(s1+) + pi/2|` seen.
    pub min_abs_residual: f64,
    /// Sign changes of the residual across the window (zero: no root).
    pub sign_changes: usize,
    pub root_found: bool,
}

/// Attempt the alternative contact system over the full candidate window.
pub fn alternative_contact_report(n: u32, opts: &SolveOptions) -> Result<AlternativeContactReport> {
    let mut walker = BranchWalker::new(n, opts);
    let (sigma_edge, mut sigma_lo) = edge_pressure(&mut walker, n)?;
    // extend downward to the lower end of the candidate window
    loop {
        let probe = sigma_lo * 0.97;
        let state = walker.solve(probe)?;
        if contact_arclengths(&state).is_err() {
            break;
        }
        sigma_lo = probe;
        if sigma_lo < 1.01 * buckling_pressure(n)? {
            break;
        }
    }
    let hi = sigma_edge * (1.0 - 1e-9);
    let samples = 25;
    let mut min_abs = f64::INFINITY;
    let mut sign_changes = 0;
    let mut last_sign = 0i8;
    let mut seen = 0;
    for i in 0..samples {
        let sigma = sigma_lo + (hi - sigma_lo) * (i as f64 + 0.5) / samples as f64;
        let state = walker.solve(sigma)?;
        let Ok((_, s1p)) = contact_arclengths(&state) else {
            continue;
        };
        let g = state.solution().phi(s1p) + 0.5 * PI;
        min_abs = min_abs.min(g.abs());
        let s = if g > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            sign_changes += 1;
        }
        last_sign = s;
        seen += 1;
    }
    Ok(AlternativeContactReport {
        n,
        sigma_lo,
        sigma_hi: hi,
        samples: seen,
        min_abs_residual: min_abs,
        sign_changes,
        root_found: sign_changes > 0 || min_abs <= CONTACT_RESIDUAL_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn buckling_pressures() {
        assert_eq!(buckling_pressure(2).unwrap(), 3.0);
        assert_eq!(buckling_pressure(3).unwrap(), 8.0);
        assert_eq!(buckling_pressure(10).unwrap(), 99.0);
        assert!(buckling_pressure(1).is_err());
    }

    #[test]
    fn below_buckling_is_rejected() {
        assert!(matches!(
            solve_equilibrium(3, 8.0, &opts()),
            Err(Error::BelowBuckling { .. })
        ));
        assert!(matches!(
            solve_equilibrium(2, 2.5, &opts()),
            Err(Error::BelowBuckling { .. })
        ));
    }

    #[test]
    fn solve_mode2_reference() {
        let state = solve_equilibrium(2, 4.75, &opts()).unwrap();
        // cross-checked with an independent solve of the same system
        assert!((state.eta().unwrap() - 2.995717834217364).abs() < 1e-8);
        assert!((state.q - 2.225826091222595).abs() < 1e-8);
        assert_eq!(state.rotation_sign, 1);
        assert!(state.residuals.0.abs() <= 1e-10);
        assert!(state.residuals.1.abs() <= 1e-10);
        assert!(state.length_error() <= 1e-9);
        // slope angle closes to 2 pi / n over one period
        let phi_t = state.solution().phi(state.period());
        assert!((phi_t - PI).abs() <= 1e-9);
    }

    #[test]
    fn solve_mode3_and_mode4_references() {
        let s3 = solve_equilibrium(3, 16.25, &opts()).unwrap();
        assert!((s3.eta().unwrap() - 4.813230832247045).abs() < 1e-8);
        assert!((s3.q - 4.105514668560347).abs() < 1e-8);
        let s4 = solve_equilibrium(4, 35.25, &opts()).unwrap();
        assert!((s4.eta().unwrap() - 6.528589276726211).abs() < 1e-8);
        assert!((s4.q - 5.963656554412204).abs() < 1e-8);
    }

    #[test]
    fn closure_residual_smoothness_near_solution() {
        let state = solve_equilibrium(2, 4.75, &opts()).unwrap();
        let eta = state.eta().unwrap();
        let (f1, f2) = closure_residuals(eta, state.q, 2, 4.75, 1).unwrap();
        assert!(f1.abs() <= 1e-10 && f2.abs() <= 1e-10);
        // perturbing q grows the residual smoothly
        let (g1, g2) = closure_residuals(eta, state.q + 1e-3, 2, 4.75, 1).unwrap();
        let norm = g1.abs().max(g2.abs());
        assert!(norm > 1e-6 && norm < 1e-1);
    }

    #[test]
    fn residual_continuity_across_split() {
        // the residuals must be smooth through t = 0
        let (n, sigma) = (3, 80.5);
        let below = residuals_t(-1e-8, 8.0, n, sigma, 1).unwrap();
        let above = residuals_t(1e-8, 8.0, n, sigma, 1).unwrap();
        assert!((below.0 - above.0).abs() < 1e-6, "{below:?} vs {above:?}");
        assert!((below.1 - above.1).abs() < 1e-6);
    }

    #[test]
    fn solve_past_the_degenerate_pressure() {
        // mode 3 leaves the Case I regime at sigma = 80
        let state = solve_equilibrium(3, 81.81, &opts()).unwrap();
        assert!(state.eta_sq < 0.0);
        assert!((state.eta_sq + 0.5434744270).abs() < 1e-6);
        assert!((state.q - 8.0637549992).abs() < 1e-6);
        assert!(state.length_error() <= 1e-9);
        assert!(matches!(state.roots, RootSet::CaseII { .. }));
    }

    #[test]
    fn solve_near_buckling_threshold() {
        for n in 2..=6u32 {
            let sigma = (n * n - 1) as f64 + 0.1;
            let state = solve_equilibrium(n, sigma, &opts()).unwrap();
            assert!(state.residuals.0.abs() <= 1e-10, "mode {n}");
            assert!(state.length_error() <= 1e-9, "mode {n}");
        }
    }

    #[test]
    fn warm_restart_converges_immediately() {
        let opts = opts();
        let state = solve_equilibrium(2, 4.75, &opts).unwrap();
        let again = newton_refine(2, 4.75, 1, state.eta_sq, state.q, &opts).unwrap();
        assert!((again.0 - state.eta_sq).abs() < 1e-9);
        assert!((again.1 - state.q).abs() < 1e-9);
    }

    #[test]
    fn contact_arclengths_bracketing() {
        // at sigma = 4.75 mode 2 still has mu < 0: no candidates
        let state = solve_equilibrium(2, 4.75, &opts()).unwrap();
        assert!(matches!(
            contact_arclengths(&state),
            Err(Error::NoContactCandidates)
        ));
        // close to the contact pressure the arclengths exist and invert kappa
        let state = solve_equilibrium(2, 5.1, &opts()).unwrap();
        let (s1m, s1p) = contact_arclengths(&state).unwrap();
        let mu = state.params.mu;
        let r = (2.0 * mu).sqrt();
        assert!(0.0 <= s1m && s1m < s1p && s1p <= 0.5 * state.period());
        assert!((state.solution().kappa(s1m) + r).abs() < 1e-9);
        assert!((state.solution().kappa(s1p) - r).abs() < 1e-9);
    }

    #[test]
    fn contact_pressure_mode2() {
        let c = solve_contact_pressure(2, &opts()).unwrap();
        assert!(
            (c.sigma_cn - 5.247).abs() / 5.247 <= 1e-3,
            "sigma_c2 = {}",
            c.sigma_cn
        );
        assert!(c.s1_minus.abs() < 1e-6);
        assert!(c.residuals.2 <= CONTACT_RESIDUAL_TOL);
        // independently solved reference for the contact parameters
        assert!((c.eta - 2.8841704994).abs() < 1e-6);
        assert!((c.q - 2.4603382088).abs() < 1e-6);
    }

    #[test]
    fn contact_pressure_mode3() {
        let c = solve_contact_pressure(3, &opts()).unwrap();
        assert!(
            (c.sigma_cn - 21.650).abs() / 21.650 <= 1e-3,
            "sigma_c3 = {}",
            c.sigma_cn
        );
        assert!(c.s1_minus > 0.0 && c.s1_minus < c.s1_plus);
        assert!(c.residuals.0 <= 1e-10 && c.residuals.1 <= 1e-10);
        assert!(c.residuals.2 <= CONTACT_RESIDUAL_TOL);
    }

    #[test]
    fn mode2_algebraic_relation_consistency() {
        let c = solve_contact_pressure(2, &opts()).unwrap();
        let algebraic = (c.eta * c.eta + c.q * c.q).powi(2) / (16.0 * c.q);
        assert!((c.sigma_cn - algebraic).abs() < 1e-8 * c.sigma_cn);
        // alpha^2 = 2 mu at the contact state
        let RootSet::CaseI { alpha, .. } = c.state.roots else {
            unreachable!()
        };
        assert!((alpha * alpha - 2.0 * c.state.params.mu).abs() < 1e-7);
        assert!(alpha < 0.0);
    }

    #[test]
    fn alternative_system_has_no_root_mode2() {
        let report = alternative_contact_report(2, &opts()).unwrap();
        assert!(!report.root_found);
        assert_eq!(report.sign_changes, 0);
        assert!(report.min_abs_residual > 0.1);
        assert!(report.samples > 10);
    }
}
