//! Equilibrium shapes of an inextensible elastic ring (or the cross-section of a
//! cylindrical tube) loaded by a uniform hydrostatic pressure.
//!
//! The curvature of an equilibrium shape satisfies the first integral
//! `kappa'^2 = P(kappa)` with `P` a quartic polynomial, so every shape is given in
//! closed form through Jacobi elliptic functions and elliptic integrals. This crate
//! evaluates those closed forms and solves the transcendental systems that pick out
//! closed rings:
//!
//! * [`elliptic`] — complete/incomplete elliptic integrals and Jacobi functions,
//! * [`quartic`] — the polynomial `P`, its roots and the `(sigma, eta, q)` parametrization,
//! * [`curvature`] — the periodic curvature families and their slope angles,
//! * [`geometry`] — plane-curve samples, forces, moments and shape diagnostics,
//! * [`solver`] — buckled equilibria for a given mode and pressure, plus the
//!   contact pressures at which a mode first touches itself,
//! * [`contact`] — shapes with straight lines of contact above the contact pressure
//!   and the tube-conductivity similarity law,
//! * [`cli`] — the `ring-eq` command-line front end (CSV/SVG/record output).
//!
//! Lengths are normalized so the undeformed ring is the unit circle: `L = 2*pi`,
//! bending rigidity `D = 1`, stress-free curvature `kappa0 = 1`. Pressures are the
//! normalized `sigma = p/D`.

pub mod cli;
pub mod contact;
pub mod curvature;
pub mod elliptic;
pub mod geometry;
pub mod quartic;
pub mod solver;

pub use quartic::{PolyParams, RootSet};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The characteristic of a third-kind elliptic integral has a pole in range.
    #[error("characteristic {0} >= 1 puts a pole inside the integration range")]
    Characteristic(f64),

    /// The quartic P(kappa) is negative everywhere; no real curvature exists.
    #[error("P(kappa) has no real roots; no real-valued curvature solutions")]
    NoRealRoots,

    /// A curvature family was requested with moduli degenerate for that family.
    #[error("degenerate moduli: {0}")]
    DegenerateModuli(String),

    /// Case I with a double root whose neighbours do not allow periodic solutions.
    #[error("(3a+b)(a+3b) <= 0: the degenerate family has no periodic solutions")]
    NonPeriodic,

    /// Pressure at or below the buckling threshold for the requested mode.
    #[error("sigma = {sigma} is at or below the buckling pressure {threshold} of mode {n}")]
    BelowBuckling { n: u32, sigma: f64, threshold: f64 },

    /// Iterative solve failed; carries the best residual seen and which equation stalled.
    #[error("no convergence: {context} (best residual {residual:.3e})")]
    NoConvergence { context: String, residual: f64 },

    /// The curvature never reaches +/- sqrt(2 mu), so contact arclengths do not exist.
    #[error("no contact candidates: mu <= 0 or curvature range excludes +/-sqrt(2 mu)")]
    NoContactCandidates,

    /// Pressure below the contact pressure of the requested mode.
    #[error("sigma = {sigma} is below the contact pressure {sigma_cn} of mode {n}")]
    BelowContact { n: u32, sigma: f64, sigma_cn: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
