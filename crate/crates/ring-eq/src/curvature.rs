//! Periodic solutions of the first integral `kappa'^2 = P(kappa)` and their
//! slope angles `phi = integral kappa ds`.
//!
//! Four families cover every periodic solution:
//!
//! * `K1` — Case I, `eta != 0`: a Jacobi-cn Moebius profile with least period
//!   `T1 = 4 K(k1) / lambda1`,
//! * `K2` — Case I, `eta = 0` with `(3a+b)(a+3b) > 0`: the same profile in
//!   elementary functions, period `2 pi / lambda1`,
//! * `K3`, `K4` — Case II: sn^2 profiles oscillating in `[alpha, beta]` and
//!   `[gamma, delta]` respectively, period `T2 = 2 K(k2) / lambda2`.
//!
//! Every family starts at a curvature minimum of its oscillation interval:
//! `kappa(0)` is a root of `P`, `kappa'(0) = 0`, `phi(0) = 0`, and `kappa`
//! increases strictly on `[0, T/2]`. Slope angles are evaluated on their
//! globally continuous branch so closure conditions can be read off at
//! arbitrary multiples of the period.

use crate::elliptic::{self, EllipticModulus};
use crate::quartic::{PolyParams, RootSet};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Relative gap below which the amplitude combinations A and B count as equal
/// (equivalently `alpha + beta = 0`), which kills the slope-angle denominators.
const MODULI_DEGENERACY_TOL: f64 = 1e-12;

/// Derived quantities of the Case I family.
#[derive(Debug, Clone, Copy)]
pub struct CaseIModuli {
    /// `A = sqrt(4 eta^2 + (3 alpha + beta)^2)`.
    pub a: f64,
    /// `B = sqrt(4 eta^2 + (alpha + 3 beta)^2)`.
    pub b: f64,
    /// `lambda1 = sqrt(A B) / 4`.
    pub lambda: f64,
    /// Modulus `k1` of the cn profile (zero in the degenerate family).
    pub modulus: EllipticModulus,
    /// Characteristic offset `C = (A - B)^2 / (4 A B) >= 0`.
    pub c: f64,
    /// Least period: `4 K(k1) / lambda1` for K1, `2 pi / lambda1` for K2.
    pub period: f64,
}

impl CaseIModuli {
    /// Build the moduli for Case I roots (`eta >= 0`).
    pub fn from_roots(alpha: f64, beta: f64, eta: f64) -> Result<Self> {
        if beta <= alpha || eta < 0.0 {
            return Err(Error::Domain(format!(
                "invalid Case I roots alpha={alpha}, beta={beta}, eta={eta}"
            )));
        }
        let u1 = 3.0 * alpha + beta;
        let u2 = alpha + 3.0 * beta;
        let a = (2.0 * eta).hypot(u1);
        let b = (2.0 * eta).hypot(u2);
        let ab = a * b;
        let lambda = 0.25 * ab.sqrt();
        let v = 4.0 * eta * eta + u1 * u2;
        // AB - v = 16 eta^2 (beta - alpha)^2 / (AB + v); rationalized when v > 0
        let k_sq = if v > 0.0 {
            let d = beta - alpha;
            16.0 * eta * eta * d * d / ((ab + v) * 2.0 * ab)
        } else {
            (ab - v) / (2.0 * ab)
        };
        let modulus = EllipticModulus::new(k_sq.clamp(0.0, 1.0 - 1e-16).sqrt())?;
        let c = (a - b) * (a - b) / (4.0 * ab);
        let period = if eta > 0.0 {
            4.0 * elliptic::complete_k(modulus) / lambda
        } else {
            2.0 * PI / lambda
        };
        Ok(CaseIModuli {
            a,
            b,
            lambda,
            modulus,
            c,
            period,
        })
    }

    fn a_minus_b_is_degenerate(&self) -> bool {
        (self.a - self.b).abs() <= MODULI_DEGENERACY_TOL * (self.a + self.b)
    }
}

/// Derived quantities of the Case II families.
#[derive(Debug, Clone, Copy)]
pub struct CaseIIModuli {
    /// `lambda2 = sqrt((gamma - alpha)(delta - beta)) / 4`.
    pub lambda: f64,
    /// Modulus `k2`.
    pub modulus: EllipticModulus,
    /// Least period `T2 = 2 K(k2) / lambda2`.
    pub period: f64,
}

impl CaseIIModuli {
    pub fn from_roots(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(alpha < beta && beta < gamma && gamma < delta) {
            return Err(Error::Domain(format!(
                "Case II roots not strictly ordered: {alpha}, {beta}, {gamma}, {delta}"
            )));
        }
        let ga = gamma - alpha;
        let db = delta - beta;
        let lambda = 0.25 * (ga * db).sqrt();
        let k_sq = (beta - alpha) * (delta - gamma) / (ga * db);
        let modulus = EllipticModulus::new(k_sq.clamp(0.0, 1.0 - 1e-16).sqrt())?;
        let period = 2.0 * elliptic::complete_k(modulus) / lambda;
        Ok(CaseIIModuli {
            lambda,
            modulus,
            period,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    K1,
    K2,
    K3,
    K4,
}

#[derive(Debug, Clone, Copy)]
enum Moduli {
    CaseI(CaseIModuli),
    CaseII(CaseIIModuli),
}

/// One periodic curvature solution, ready for pointwise evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSolution {
    family: Family,
    roots: RootSet,
    params: PolyParams,
    moduli: Moduli,
}

impl CurvatureSolution {
    /// Case I family with `eta != 0` (the cn Moebius profile).
    pub fn k1(roots: RootSet) -> Result<Self> {
        let RootSet::CaseI { alpha, beta, eta } = roots else {
            return Err(Error::Domain("K1 needs Case I roots".into()));
        };
        if eta == 0.0 {
            return Err(Error::DegenerateModuli(
                "eta = 0: use the elementary K2 family".into(),
            ));
        }
        let m = CaseIModuli::from_roots(alpha, beta, eta)?;
        if m.a_minus_b_is_degenerate() {
            return Err(Error::DegenerateModuli(
                "A = B (alpha + beta = 0): slope angle undefined".into(),
            ));
        }
        Ok(Self {
            family: Family::K1,
            roots,
            params: roots.params(),
            moduli: Moduli::CaseI(m),
        })
    }

    /// Degenerate Case I family (`eta = 0`), elementary functions.
    pub fn k2(roots: RootSet) -> Result<Self> {
        let RootSet::CaseI { alpha, beta, eta } = roots else {
            return Err(Error::Domain("K2 needs Case I roots".into()));
        };
        if eta != 0.0 {
            return Err(Error::Domain("K2 requires eta = 0".into()));
        }
        if (3.0 * alpha + beta) * (alpha + 3.0 * beta) <= 0.0 {
            return Err(Error::NonPeriodic);
        }
        let m = CaseIModuli::from_roots(alpha, beta, 0.0)?;
        if m.a_minus_b_is_degenerate() {
            return Err(Error::DegenerateModuli(
                "A = B (alpha + beta = 0): slope angle undefined".into(),
            ));
        }
        Ok(Self {
            family: Family::K2,
            roots,
            params: roots.params(),
            moduli: Moduli::CaseI(m),
        })
    }

    /// Case II family oscillating in `[alpha, beta]`.
    pub fn k3(roots: RootSet) -> Result<Self> {
        Self::case_ii(roots, Family::K3)
    }

    /// Case II family oscillating in `[gamma, delta]`.
    pub fn k4(roots: RootSet) -> Result<Self> {
        Self::case_ii(roots, Family::K4)
    }

    fn case_ii(roots: RootSet, family: Family) -> Result<Self> {
        let RootSet::CaseII {
            alpha,
            beta,
            gamma,
            delta,
        } = roots
        else {
            return Err(Error::Domain("K3/K4 need Case II roots".into()));
        };
        let m = CaseIIModuli::from_roots(alpha, beta, gamma, delta)?;
        Ok(Self {
            family,
            roots,
            params: roots.params(),
            moduli: Moduli::CaseII(m),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn roots(&self) -> RootSet {
        self.roots
    }

    pub fn params(&self) -> PolyParams {
        self.params
    }

    pub fn case_i_moduli(&self) -> Option<&CaseIModuli> {
        match &self.moduli {
            Moduli::CaseI(m) => Some(m),
            Moduli::CaseII(_) => None,
        }
    }

    pub fn case_ii_moduli(&self) -> Option<&CaseIIModuli> {
        match &self.moduli {
            Moduli::CaseI(_) => None,
            Moduli::CaseII(m) => Some(m),
        }
    }

    /// Least period of the curvature.
    pub fn period(&self) -> f64 {
        match &self.moduli {
            Moduli::CaseI(m) => m.period,
            Moduli::CaseII(m) => m.period,
        }
    }

    pub fn kappa(&self, s: f64) -> f64 {
        match (self.family, &self.moduli, self.roots) {
            (Family::K1, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                let j = elliptic::jacobi(m.lambda * s, m.modulus);
                moebius_cn(m, alpha, beta, j.cn)
            }
            (Family::K2, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                moebius_cn(m, alpha, beta, (m.lambda * s).cos())
            }
            (
                Family::K3,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    alpha, beta, delta, ..
                },
            ) => {
                let sn = elliptic::jacobi(m.lambda * s, m.modulus).sn;
                delta
                    - (delta - alpha) * (delta - beta) / ((delta - beta) + (beta - alpha) * sn * sn)
            }
            (
                Family::K4,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    beta, gamma, delta, ..
                },
            ) => {
                let sn = elliptic::jacobi(m.lambda * s, m.modulus).sn;
                beta + (gamma - beta) * (delta - beta) / ((delta - beta) - (delta - gamma) * sn * sn)
            }
            _ => unreachable!("family/moduli mismatch"),
        }
    }

    /// Analytic arclength derivative of the curvature (chain rule on the
    /// Jacobi functions, so it keeps its sign through the extrema).
    pub fn kappa_prime(&self, s: f64) -> f64 {
        match (self.family, &self.moduli, self.roots) {
            (Family::K1, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                let j = elliptic::jacobi(m.lambda * s, m.modulus);
                let den = (m.a + m.b) - (m.a - m.b) * j.cn;
                2.0 * m.a * m.b * m.lambda * (beta - alpha) * j.sn * j.dn / (den * den)
            }
            (Family::K2, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                let (sin, cos) = (m.lambda * s).sin_cos();
                let den = (m.a + m.b) - (m.a - m.b) * cos;
                2.0 * m.a * m.b * m.lambda * (beta - alpha) * sin / (den * den)
            }
            (
                Family::K3,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    alpha, beta, delta, ..
                },
            ) => {
                let j = elliptic::jacobi(m.lambda * s, m.modulus);
                let w = (delta - beta) + (beta - alpha) * j.sn * j.sn;
                (delta - alpha) * (delta - beta) * (beta - alpha) * 2.0 * m.lambda * j.sn * j.cn
                    * j.dn
                    / (w * w)
            }
            (
                Family::K4,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    beta, gamma, delta, ..
                },
            ) => {
                let j = elliptic::jacobi(m.lambda * s, m.modulus);
                let w = (delta - beta) - (delta - gamma) * j.sn * j.sn;
                (gamma - beta) * (delta - beta) * (delta - gamma) * 2.0 * m.lambda * j.sn * j.cn
                    * j.dn
                    / (w * w)
            }
            _ => unreachable!(),
        }
    }

    /// Slope angle `phi(s) = integral_0^s kappa`, on its continuous branch.
    pub fn phi(&self, s: f64) -> f64 {
        match (self.family, &self.moduli, self.roots) {
            (Family::K1, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                let j = elliptic::jacobi(m.lambda * s, m.modulus);
                let k_sq = m.modulus.k() * m.modulus.k();
                let root = (k_sq + m.c).sqrt();
                let lin = (m.a * beta - m.b * alpha) / (m.a - m.b) * s;
                let arc = (alpha - beta) / (2.0 * m.lambda * root) * (root * j.sn / j.dn).atan();
                let pi_term = (m.a + m.b) * (alpha - beta) / (2.0 * m.lambda * (m.a - m.b))
                    * elliptic::incomplete_pi(-m.c, j.am, m.modulus)
                        .expect("characteristic -C <= 0 is always pole-free");
                lin + arc + pi_term
            }
            (Family::K2, Moduli::CaseI(m), RootSet::CaseI { alpha, beta, .. }) => {
                let lin = (m.a * beta - m.b * alpha) / (m.a - m.b) * s;
                let w = (m.a / m.b).sqrt();
                lin + 8.0 * (alpha - beta) / (m.a - m.b) * atan_continued(w, 0.5 * m.lambda * s)
            }
            (
                Family::K3,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    alpha, beta, delta, ..
                },
            ) => {
                let am = elliptic::jacobi(m.lambda * s, m.modulus).am;
                let n_char = (beta - alpha) / (beta - delta);
                delta * s
                    - (delta - alpha) / m.lambda
                        * elliptic::incomplete_pi(n_char, am, m.modulus)
                            .expect("negative characteristic is pole-free")
            }
            (
                Family::K4,
                Moduli::CaseII(m),
                RootSet::CaseII {
                    beta, gamma, delta, ..
                },
            ) => {
                let am = elliptic::jacobi(m.lambda * s, m.modulus).am;
                let n_char = (delta - gamma) / (delta - beta);
                beta * s
                    - (beta - gamma) / m.lambda
                        * elliptic::incomplete_pi(n_char, am, m.modulus)
                            .expect("characteristic below 1 is pole-free")
            }
            _ => unreachable!(),
        }
    }

    /// Finite-difference residual of `kappa'' + kappa^3/2 - mu kappa - sigma`,
    /// using a 4th-order central stencil with `h = 1e-4 T`.
    pub fn ode_residual(&self, s: f64) -> f64 {
        ode_residual_of(|x| self.kappa(x), &self.params, s, self.period())
    }

    /// Similarity image `(s, kappa) -> (s / l, l kappa)` of this solution.
    pub fn rescaled(&self, l: f64) -> Result<Self> {
        let roots = self.roots.scaled(l);
        match self.family {
            Family::K1 => Self::k1(roots),
            Family::K2 => Self::k2(roots),
            Family::K3 => Self::k3(roots),
            Family::K4 => Self::k4(roots),
        }
    }
}

/// The shared Moebius-in-cn profile of the Case I families.
#[inline]
fn moebius_cn(m: &CaseIModuli, alpha: f64, beta: f64, cn: f64) -> f64 {
    ((m.a * beta + m.b * alpha) - (m.a * beta - m.b * alpha) * cn)
        / ((m.a + m.b) - (m.a - m.b) * cn)
}

/// Continuous branch of `atan(w tan(theta))`, increasing by `pi` per period.
fn atan_continued(w: f64, theta: f64) -> f64 {
    let j = (theta / PI).round();
    let psi = theta - j * PI;
    j * PI + (w * psi.tan()).atan()
}

/// ODE residual for an arbitrary curvature profile with the given parameters.
/// `span` sets the differencing step `h = 1e-4 span`.
pub fn ode_residual_of(kappa: impl Fn(f64) -> f64, p: &PolyParams, s: f64, span: f64) -> f64 {
    let h = 1e-4 * span;
    let k2 = (-kappa(s - 2.0 * h) + 16.0 * kappa(s - h) - 30.0 * kappa(s) + 16.0 * kappa(s + h)
        - kappa(s + 2.0 * h))
        / (12.0 * h * h);
    let k = kappa(s);
    k2 + 0.5 * k * k * k - p.mu * k - p.sigma
}
