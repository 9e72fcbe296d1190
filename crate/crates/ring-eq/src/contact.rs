//! Shapes with straight lines of contact, built for pressures above the
//! contact pressure `sigma_cn` of a mode.
//!
//! The first integral is invariant under the similarity
//! `(s, kappa; mu, sigma, eps) -> (s/l, l kappa; l^2 mu, l^3 sigma, l^4 eps)`,
//! which scales shape coordinates by `1/l`. A pressure `sigma_hat > sigma_cn`
//! therefore owns a shrunk copy of the contact shape (factor
//! `scale = (sigma_cn/sigma_hat)^(1/3)`), and the missing ring length
//! `2 pi (1 - scale)` is restored by flattening each of the `n` contact points
//! into a doubled straight segment along its symmetry axis: each petal slides
//! outward by `pi (1 - scale)/n` and two overlapping walls join it back to the
//! inner arcs. Tangents stay continuous; curvature, moment and force jump at
//! the junctions by the amounts reported in [`JumpReport`].
//!
//! Along the walls the two tube walls press together, the resultant pressure
//! vanishes and the stress is zero, so only the bent arcs carry pressure in the
//! total force/moment balances checked by [`total_balance_check`].

use crate::curvature::CurvatureSolution;
use crate::geometry::{self, ShapeDiagnostics, ShapePolyline, ShapeSample, KAPPA0, RIGIDITY};
use crate::solver::ContactSolution;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Limit values at the junctions between bent arcs and contact lines.
#[derive(Debug, Clone, Copy)]
pub struct JumpReport {
    /// Moment limit from the bent side, `-D (sqrt(2 mu) + kappa0)`.
    pub moment_bent: f64,
    /// Tangential stress limit from the bent side (identically zero).
    pub tension_bent: f64,
    /// The two shear limits from the bent side, `+-D sqrt(P(-sqrt(2 mu)))`.
    pub shear_bent: (f64, f64),
    /// Moment along a contact line, `-D kappa0`.
    pub moment_line: f64,
    pub tension_line: f64,
    pub shear_line: f64,
}

/// Force/moment closure residuals of a composite shape.
///
/// Each bent arc must satisfy the integrated local balances
/// `F(b) - F(a) = -sigma integral n ds` and `M(b) - M(a) = -integral Q ds`,
/// while the straight walls carry no pressure and no stress. The residuals
/// accumulate the per-arc defects by norm, so a composite whose arcs do not
/// correspond to the claimed pressure (a mis-scaled construction) shows up
/// even though its symmetric total would cancel.
#[derive(Debug, Clone, Copy)]
pub struct BalanceReport {
    /// Sum over arcs of `|F(b) - F(a) + sigma integral n ds|`.
    pub force_residual: f64,
    /// Sum over arcs of `|M(b) - M(a) + integral Q ds|`.
    pub moment_residual: f64,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Bent arc of the scaled solution over `[s_lo, s_hi]`, rigidly translated.
    Arc {
        s_lo: f64,
        s_hi: f64,
        offset: [f64; 2],
    },
    /// Straight contact-line wall with the tangent angle it must continue.
    Wall {
        from: [f64; 2],
        to: [f64; 2],
        phi: f64,
    },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Arc { s_lo, s_hi, .. } => s_hi - s_lo,
            Piece::Wall { from, to, .. } => (to[0] - from[0]).hypot(to[1] - from[1]),
        }
    }
}

/// A composite shape with `n` lines of contact at pressure `sigma_hat`.
#[derive(Debug, Clone)]
pub struct ContactLineShape {
    pub n: u32,
    pub sigma_hat: f64,
    /// Coordinate shrink factor `(sigma_cn / sigma_hat)^(1/3)`, in `(0, 1]`.
    pub scale: f64,
    /// Straight length inserted per contact point, `2 pi (1 - scale)/n`
    /// (each line of contact is walked twice, half out and half back).
    pub segment_length: f64,
    pub base: ContactSolution,
    pub polyline: ShapePolyline,
    pub jump_report: JumpReport,
    /// Worst tangent mismatch across arc/wall junctions, radians.
    pub junction_angle_error: f64,
    scaled: CurvatureSolution,
    pieces: Vec<Piece>,
}

/// Build the mode-`n` lines-of-contact shape at `sigma_hat`, solving for the
/// contact base first. `samples` controls the polyline resolution.
pub fn build_contact_line_shape(
    n: u32,
    sigma_hat: f64,
    samples: usize,
    opts: &crate::solver::SolveOptions,
) -> Result<ContactLineShape> {
    let base = crate::solver::solve_contact_pressure(n, opts)?;
    build_with_base(&base, sigma_hat, samples)
}

/// Build the composite shape from an already-solved contact base.
pub fn build_with_base(
    base: &ContactSolution,
    sigma_hat: f64,
    samples: usize,
) -> Result<ContactLineShape> {
    let n = base.n;
    let sigma_cn = base.sigma_cn;
    if sigma_hat < sigma_cn * (1.0 - 1e-12) {
        return Err(Error::BelowContact {
            n,
            sigma: sigma_hat,
            sigma_cn,
        });
    }
    let lambda = (sigma_hat / sigma_cn).cbrt();
    let scale = 1.0 / lambda;
    let scaled = base.state.solution().rescaled(lambda)?;
    let period = scaled.period();
    let s1m = base.s1_minus / lambda;
    let stem = PI * (1.0 - scale) / n as f64;

    let nn = n as usize;
    let mut axes = Vec::with_capacity(nn);
    let mut anchors = Vec::with_capacity(nn);
    for j in 0..nn {
        let (tx, ty) = geometry::shape_point(&scaled, (j as f64 + 0.5) * period)?;
        let len = tx.hypot(ty);
        axes.push([tx / len, ty / len]);
        let (ax, ay) = geometry::shape_point(&scaled, j as f64 * period + s1m)?;
        let (bx, by) = geometry::shape_point(&scaled, (j as f64 + 1.0) * period - s1m)?;
        anchors.push([0.5 * (ax + bx), 0.5 * (ay + by)]);
    }

    let mut pieces = Vec::new();
    let mut junction_angle_error = 0.0f64;
    for j in 0..nn {
        let c = anchors[j];
        let a = axes[j];
        let outer = [c[0] + stem * a[0], c[1] + stem * a[1]];
        let s_in = j as f64 * period + s1m;
        let s_out = (j as f64 + 1.0) * period - s1m;
        if stem > 1e-12 {
            let phi_in = scaled.phi(s_in);
            junction_angle_error =
                junction_angle_error.max(wrap_angle(phi_in - a[1].atan2(a[0])).abs());
            pieces.push(Piece::Wall {
                from: c,
                to: outer,
                phi: phi_in,
            });
        }
        pieces.push(Piece::Arc {
            s_lo: s_in,
            s_hi: s_out,
            offset: [stem * a[0], stem * a[1]],
        });
        if stem > 1e-12 {
            let phi_out = scaled.phi(s_out);
            junction_angle_error =
                junction_angle_error.max(wrap_angle(phi_out - (-a[1]).atan2(-a[0])).abs());
            pieces.push(Piece::Wall {
                from: outer,
                to: c,
                phi: phi_out,
            });
        }
        let s_next = (j as f64 + 1.0) * period + s1m;
        if s_next - s_out > 1e-12 {
            pieces.push(Piece::Arc {
                s_lo: s_out,
                s_hi: s_next,
                offset: [0.0, 0.0],
            });
        }
    }

    let polyline = sample_composite(&scaled, &pieces, n, samples)?;
    let jump_report = jump_values_of(&scaled);
    Ok(ContactLineShape {
        n,
        sigma_hat,
        scale,
        segment_length: 2.0 * stem,
        base: base.clone(),
        polyline,
        jump_report,
        junction_angle_error,
        scaled,
        pieces,
    })
}

impl ContactLineShape {
    /// The scaled (shrunk) curvature solution carrying the bent arcs.
    pub fn scaled_solution(&self) -> &CurvatureSolution {
        &self.scaled
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a < -PI {
        a += 2.0 * PI;
    }
    a
}

fn sample_composite(
    scaled: &CurvatureSolution,
    pieces: &[Piece],
    n: u32,
    samples: usize,
) -> Result<ShapePolyline> {
    let total: f64 = pieces.iter().map(Piece::length).sum();
    let p = scaled.params();
    let mut out: Vec<ShapeSample> = Vec::with_capacity(samples + pieces.len() + 1);
    let mut s_acc = 0.0;
    for (pi, piece) in pieces.iter().enumerate() {
        let len = piece.length();
        let m = ((samples as f64 * len / total).ceil() as usize).max(1);
        let start = if pi == 0 { 0 } else { 1 };
        for i in start..=m {
            let frac = i as f64 / m as f64;
            let sample = match *piece {
                Piece::Arc { s_lo, s_hi, offset } => {
                    let s = s_lo + frac * (s_hi - s_lo);
                    let (x, y) = geometry::shape_point(scaled, s)?;
                    let kappa = scaled.kappa(s);
                    ShapeSample {
                        s: s_acc + frac * len,
                        x: x + offset[0],
                        y: y + offset[1],
                        kappa,
                        phi: scaled.phi(s),
                        moment: RIGIDITY * (kappa - KAPPA0),
                        tension: -0.5 * RIGIDITY * (kappa * kappa - 2.0 * p.mu),
                        shear: -RIGIDITY * scaled.kappa_prime(s),
                    }
                }
                Piece::Wall { from, to, phi } => ShapeSample {
                    s: s_acc + frac * len,
                    x: from[0] + frac * (to[0] - from[0]),
                    y: from[1] + frac * (to[1] - from[1]),
                    kappa: 0.0,
                    phi,
                    moment: -RIGIDITY * KAPPA0,
                    tension: 0.0,
                    shear: 0.0,
                },
            };
            out.push(sample);
        }
        s_acc += len;
    }
    let first = out[0];
    let last = *out.last().unwrap();
    let interior: Vec<[f64; 2]> = out[..out.len() - 1].iter().map(|q| [q.x, q.y]).collect();
    let diagnostics = ShapeDiagnostics {
        closure_error: (last.x - first.x).hypot(last.y - first.y),
        slope_closure_error: ((last.phi - first.phi).abs() - 2.0 * PI).abs(),
        length_error: (s_acc - 2.0 * PI).abs(),
        self_intersecting: geometry::polyline_self_intersects(&interior),
        mode_n: n,
    };
    Ok(ShapePolyline {
        samples: out,
        diagnostics,
    })
}

/// Moment/shear limit values at the arc/line junctions of a built shape.
pub fn jump_values(shape: &ContactLineShape) -> JumpReport {
    shape.jump_report
}

fn jump_values_of(scaled: &CurvatureSolution) -> JumpReport {
    let p = scaled.params();
    let root = (2.0 * p.mu).max(0.0).sqrt();
    let shear = RIGIDITY * p.eval_p(-root).max(0.0).sqrt();
    // the tangential stress at kappa = -sqrt(2 mu) vanishes identically
    let tension_bent = -0.5 * RIGIDITY * (root * root - 2.0 * p.mu);
    JumpReport {
        moment_bent: -RIGIDITY * (root + KAPPA0),
        tension_bent,
        shear_bent: (shear, -shear),
        moment_line: -RIGIDITY * KAPPA0,
        tension_line: 0.0,
        shear_line: 0.0,
    }
}

/// Total force and moment balance over the composite curve; pressure acts on
/// the bent arcs only, and the walls carry no stress at all.
pub fn total_balance_check(shape: &ContactLineShape) -> BalanceReport {
    let arcs: Vec<(f64, f64)> = shape
        .pieces
        .iter()
        .filter_map(|p| match *p {
            Piece::Arc { s_lo, s_hi, .. } => Some((s_lo, s_hi)),
            Piece::Wall { .. } => None,
        })
        .collect();
    arc_balance(&shape.scaled, &arcs, shape.sigma_hat, 4096)
}

/// Balance residuals from the arc list alone (translation-invariant data).
fn arc_balance(
    scaled: &CurvatureSolution,
    arcs: &[(f64, f64)],
    sigma: f64,
    resolution: usize,
) -> BalanceReport {
    let p = scaled.params();
    let total: f64 = arcs.iter().map(|(a, b)| b - a).sum();
    let force = |s: f64| -> [f64; 2] {
        let kappa = scaled.kappa(s);
        let n = -0.5 * RIGIDITY * (kappa * kappa - 2.0 * p.mu);
        let q = -RIGIDITY * scaled.kappa_prime(s);
        let (sin, cos) = scaled.phi(s).sin_cos();
        [n * cos - q * sin, n * sin + q * cos]
    };
    let mut force_sum = 0.0f64;
    let mut moment_sum = 0.0f64;
    for &(a, b) in arcs {
        let m = (((resolution as f64) * (b - a) / total).ceil() as usize).max(32);
        let m = m + m % 2;
        let h = (b - a) / m as f64;
        let mut normal_int = [0.0f64; 2];
        let mut shear_int = 0.0f64;
        for i in 0..=m {
            let s = a + i as f64 * h;
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let (sin, cos) = scaled.phi(s).sin_cos();
            normal_int[0] += w * -sin;
            normal_int[1] += w * cos;
            shear_int += w * -RIGIDITY * scaled.kappa_prime(s);
        }
        normal_int[0] *= h / 3.0;
        normal_int[1] *= h / 3.0;
        shear_int *= h / 3.0;

        let fa = force(a);
        let fb = force(b);
        force_sum += (fb[0] - fa[0] + sigma * normal_int[0])
            .hypot(fb[1] - fa[1] + sigma * normal_int[1]);
        // M' = -F.n = -Q
        moment_sum += (RIGIDITY * (scaled.kappa(b) - scaled.kappa(a)) + shear_int).abs();
    }
    BalanceReport {
        force_residual: force_sum,
        moment_residual: moment_sum,
    }
}

/// Conductivity multiplier `(sigma_cn / sigma)^(4/3)` relative to the tube at
/// its contact pressure.
pub fn conductivity_ratio(n: u32, sigma_cn: f64, sigma: f64) -> Result<f64> {
    if sigma < sigma_cn * (1.0 - 1e-12) {
        return Err(Error::BelowContact {
            n,
            sigma,
            sigma_cn,
        });
    }
    Ok((sigma_cn / sigma).powf(4.0 / 3.0))
}
