//! The curvature quartic `P(kappa) = -kappa^4/4 + mu kappa^2 + 2 sigma kappa + eps`,
//! the correspondence between its coefficients and roots (both directions), and the
//! `(sigma, eta, q)` parametrization used by the closure solver.
//!
//! Because `P` has no cubic term the four roots always sum to zero. Two patterns
//! admit real curvature profiles:
//!
//! * Case I — real pair `alpha < beta` plus a conjugate pair `-(alpha+beta)/2 +- i eta`,
//! * Case II — four real roots `alpha < beta < gamma < delta`.
//!
//! Root extraction uses a Ferrari resolvent factorization with a Newton polish
//! rather than the closed-form nested radicals; the contract is the root set
//! itself, validated by Vieta round trips.

use crate::{Error, Result};

/// Tolerance (scaled by root magnitude) below which two roots count as coincident.
pub const ROOT_COINCIDENCE_TOL: f64 = 1e-10;

/// Coefficients of `P(kappa)`; `sigma` is the normalized pressure `p/D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyParams {
    pub mu: f64,
    pub sigma: f64,
    pub epsilon: f64,
}

impl PolyParams {
    /// `P(kappa) = -kappa^4/4 + mu kappa^2 + 2 sigma kappa + epsilon`.
    pub fn eval_p(&self, kappa: f64) -> f64 {
        ((-0.25 * kappa * kappa + self.mu) * kappa + 2.0 * self.sigma) * kappa + self.epsilon
    }

    /// `P'(kappa) = -kappa^3 + 2 mu kappa + 2 sigma`.
    pub fn eval_p_prime(&self, kappa: f64) -> f64 {
        (-kappa * kappa + 2.0 * self.mu) * kappa + 2.0 * self.sigma
    }

    /// Magnitude scale of the terms of `P` at `kappa`, for relative comparisons.
    pub fn term_scale(&self, kappa: f64) -> f64 {
        let k2 = kappa * kappa;
        1.0 + 0.25 * k2 * k2
            + (self.mu * k2).abs()
            + (2.0 * self.sigma * kappa).abs()
            + self.epsilon.abs()
    }

    /// Similarity image `(mu, sigma, eps) -> (l^2 mu, l^3 sigma, l^4 eps)`.
    pub fn scaled(&self, l: f64) -> PolyParams {
        PolyParams {
            mu: l * l * self.mu,
            sigma: l * l * l * self.sigma,
            epsilon: l * l * l * l * self.epsilon,
        }
    }
}

/// Classified roots of `P(kappa)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootSet {
    /// Real pair `alpha < beta`; the complex pair is `-(alpha+beta)/2 +- i eta`.
    CaseI { alpha: f64, beta: f64, eta: f64 },
    /// Four real roots in strictly increasing order.
    CaseII {
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
    },
}

impl RootSet {
    /// Case I roots from the positive parameters of the closure system:
    /// `alpha, beta = 4 sigma / (eta^2 + q^2) -+ q`.
    pub fn from_sigma_eta_q(sigma: f64, eta: f64, q: f64) -> RootSet {
        debug_assert!(sigma > 0.0 && eta > 0.0 && q > 0.0);
        let mid = 4.0 * sigma / (eta * eta + q * q);
        RootSet::CaseI {
            alpha: mid - q,
            beta: mid + q,
            eta,
        }
    }

    /// Extension of [`RootSet::from_sigma_eta_q`] in `t = eta^2`: positive `t` is
    /// Case I, negative `t` splits the conjugate pair into two real roots, turning
    /// the set into Case II with the oscillation interval carried by the upper pair.
    /// Requires `q^2 + t > 0`.
    pub fn from_sigma_eta_sq_q(sigma: f64, t: f64, q: f64) -> Result<RootSet> {
        if q <= 0.0 || q * q + t <= 0.0 {
            return Err(Error::Domain(format!(
                "(t, q) = ({t}, {q}) outside the parametrization domain"
            )));
        }
        let mid = 4.0 * sigma / (q * q + t);
        if t >= 0.0 {
            Ok(RootSet::CaseI {
                alpha: mid - q,
                beta: mid + q,
                eta: t.sqrt(),
            })
        } else {
            let split = (-t).sqrt();
            let mut r = [-mid - split, -mid + split, mid - q, mid + q];
            r.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if r[0] >= r[1] || r[1] >= r[2] || r[2] >= r[3] {
                return Err(Error::Domain("split roots are not distinct".into()));
            }
            Ok(RootSet::CaseII {
                alpha: r[0],
                beta: r[1],
                gamma: r[2],
                delta: r[3],
            })
        }
    }

    /// Coefficients from the roots by Vieta's formulas (real-valued for both cases).
    ///
    /// The four roots (real parts) must sum to zero; `P` has no cubic term.
    pub fn params(&self) -> PolyParams {
        debug_assert!(
            self.real_part_sum().abs()
                <= 1e-6
                    * match *self {
                        RootSet::CaseI { alpha, beta, .. } => alpha.abs().max(beta.abs()).max(1.0),
                        RootSet::CaseII { alpha, delta, .. } => alpha.abs().max(delta.abs()).max(1.0),
                    },
            "roots must sum to zero"
        );
        let (e2, e3, e4) = match *self {
            RootSet::CaseI { alpha, beta, eta } => {
                let s = alpha + beta;
                let p = alpha * beta;
                let c = -0.5 * s;
                let g = c * c + eta * eta;
                (p + 2.0 * c * s + g, 2.0 * c * p + g * s, p * g)
            }
            RootSet::CaseII {
                alpha,
                beta,
                gamma,
                delta,
            } => {
                let e2 = alpha * beta
                    + alpha * gamma
                    + alpha * delta
                    + beta * gamma
                    + beta * delta
                    + gamma * delta;
                let e3 = alpha * beta * gamma
                    + alpha * beta * delta
                    + alpha * gamma * delta
                    + beta * gamma * delta;
                (e2, e3, alpha * beta * gamma * delta)
            }
        };
        PolyParams {
            mu: -0.25 * e2,
            sigma: 0.125 * e3,
            epsilon: -0.25 * e4,
        }
    }

    /// Classify the roots of `P(kappa)` for the given coefficients.
    pub fn classify(p: &PolyParams) -> Result<RootSet> {
        classify_roots(p)
    }

    /// True when any two roots (counting the complex pair) lie within
    /// [`ROOT_COINCIDENCE_TOL`] of each other after magnitude scaling.
    pub fn is_degenerate(&self) -> bool {
        let pts: Vec<(f64, f64)> = match *self {
            RootSet::CaseI { alpha, beta, eta } => {
                let c = -0.5 * (alpha + beta);
                vec![(alpha, 0.0), (beta, 0.0), (c, eta), (c, -eta)]
            }
            RootSet::CaseII {
                alpha,
                beta,
                gamma,
                delta,
            } => vec![(alpha, 0.0), (beta, 0.0), (gamma, 0.0), (delta, 0.0)],
        };
        let scale = pts
            .iter()
            .map(|p| p.0.abs().max(p.1.abs()))
            .fold(1.0f64, f64::max);
        for i in 0..4 {
            for j in i + 1..4 {
                let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
                if d <= ROOT_COINCIDENCE_TOL * scale {
                    return true;
                }
            }
        }
        false
    }

    /// Sum of the real parts of all four roots (zero by Vieta).
    pub fn real_part_sum(&self) -> f64 {
        match *self {
            RootSet::CaseI { alpha, beta, .. } => alpha + beta - (alpha + beta),
            RootSet::CaseII {
                alpha,
                beta,
                gamma,
                delta,
            } => alpha + beta + gamma + delta,
        }
    }

    /// Similarity image: every root scales by `l`.
    pub fn scaled(&self, l: f64) -> RootSet {
        match *self {
            RootSet::CaseI { alpha, beta, eta } => RootSet::CaseI {
                alpha: l * alpha,
                beta: l * beta,
                eta: l * eta,
            },
            RootSet::CaseII {
                alpha,
                beta,
                gamma,
                delta,
            } => RootSet::CaseII {
                alpha: l * alpha,
                beta: l * beta,
                gamma: l * gamma,
                delta: l * delta,
            },
        }
    }
}

/// Largest real root of `z^3 + b2 z^2 + b1 z + b0`.
fn cubic_largest_root(b2: f64, b1: f64, b0: f64) -> f64 {
    // depressed: y^3 + py + q, z = y - b2/3
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    let shift = -b2 / 3.0;
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        let s = disc.sqrt();
        (-0.5 * q + s).cbrt() + (-0.5 * q - s).cbrt() + shift
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        if m == 0.0 {
            return shift;
        }
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        m * (arg.acos() / 3.0).cos() + shift
    }
}

/// Real roots of the monic quadratic `x^2 + b x + c`, or the conjugate pair.
enum QuadRoots {
    Real(f64, f64),
    Complex { re: f64, im: f64 },
}

fn quadratic_roots(b: f64, c: f64) -> QuadRoots {
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        QuadRoots::Complex {
            re: -0.5 * b,
            im: 0.5 * (-disc).sqrt(),
        }
    } else {
        let s = disc.sqrt();
        let t = -0.5 * (b + b.signum() * s);
        if t == 0.0 {
            QuadRoots::Real(0.0, 0.0)
        } else {
            let (r1, r2) = (t, c / t);
            QuadRoots::Real(r1.min(r2), r1.max(r2))
        }
    }
}

fn polish(p: &PolyParams, mut x: f64) -> f64 {
    // Newton on the monic quartic x^4 - 4 mu x^2 - 8 sigma x - 4 eps
    for _ in 0..3 {
        let f = -4.0 * p.eval_p(x);
        let df = -4.0 * p.eval_p_prime(x);
        if df.abs() < 1e-300 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

fn classify_roots(par: &PolyParams) -> Result<RootSet> {
    // monic depressed quartic x^4 + p x^2 + q x + r
    let p = -4.0 * par.mu;
    let q = -8.0 * par.sigma;
    let r = -4.0 * par.epsilon;

    let scale = par.mu.abs().sqrt().max(par.sigma.abs().cbrt());
    let scale = scale.max(par.epsilon.abs().powf(0.25)).max(1.0);

    let mut reals: Vec<f64> = Vec::with_capacity(4);
    let mut pair: Option<(f64, f64)> = None;
    let push = |roots: QuadRoots, pair: &mut Option<(f64, f64)>, reals: &mut Vec<f64>| {
        match roots {
            QuadRoots::Real(a, b) => {
                reals.push(a);
                reals.push(b);
            }
            QuadRoots::Complex { re, im } => *pair = Some((re, im)),
        }
    };

    if q.abs() <= 1e-14 * scale * scale * scale {
        // biquadratic: y^2 + p y + r in y = x^2
        match quadratic_roots(p, r) {
            QuadRoots::Complex { .. } => return Err(Error::NoRealRoots),
            QuadRoots::Real(y1, y2) => {
                for y in [y1, y2] {
                    if y >= 0.0 {
                        reals.push(-y.sqrt());
                        reals.push(y.sqrt());
                    } else {
                        pair = Some((0.0, (-y).sqrt()));
                    }
                }
            }
        }
        if reals.is_empty() {
            return Err(Error::NoRealRoots);
        }
    } else {
        // Ferrari: largest root of the resolvent z^3 + 2p z^2 + (p^2 - 4r) z - q^2
        let z0 = cubic_largest_root(2.0 * p, p * p - 4.0 * r, -q * q).max(1e-300);
        let w = z0.sqrt();
        let half = 0.5 * (z0 + p);
        let shift = 0.5 * q / w;
        push(quadratic_roots(w, half - shift), &mut pair, &mut reals);
        push(quadratic_roots(-w, half + shift), &mut pair, &mut reals);
        if reals.is_empty() {
            return Err(Error::NoRealRoots);
        }
    }

    let mut reals: Vec<f64> = reals.into_iter().map(|x| polish(par, x)).collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());

    if reals.len() == 4 {
        Ok(RootSet::CaseII {
            alpha: reals[0],
            beta: reals[1],
            gamma: reals[2],
            delta: reals[3],
        })
    } else {
        let (alpha, beta) = (reals[0], reals[1]);
        // eta from Vieta on the x^2 coefficient: more consistent than the raw factor
        let eta_sq = p - alpha * beta + 0.75 * (alpha + beta) * (alpha + beta);
        let eta = eta_sq.max(0.0).sqrt();
        let eta = if eta_sq <= 0.0 {
            pair.map(|(_, im)| im).unwrap_or(0.0).min(eta)
        } else {
            eta
        };
        Ok(RootSet::CaseI { alpha, beta, eta })
    }
}
