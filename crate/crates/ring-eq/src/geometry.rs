//! Plane-curve realization of a curvature solution: the closed-form position
//! vector, the moment and stress components along the curve, and geometric
//! diagnostics (closure, length, radius identity, self-intersection, symmetry).
//!
//! The canonical frame puts the centre of the elastic forces at the origin, so
//! the parametric equations need no integration:
//!
//! ```text
//! x =  kappa'/sigma cos(phi) + (kappa^2 - 2 mu)/(2 sigma) sin(phi)
//! y =  kappa'/sigma sin(phi) - (kappa^2 - 2 mu)/(2 sigma) cos(phi)
//! ```
//!
//! All defaults follow the normalization `D = 1`, `kappa0 = 1`, `L = 2 pi`.

use crate::curvature::CurvatureSolution;
use crate::quartic::PolyParams;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Default bending rigidity.
pub const RIGIDITY: f64 = 1.0;
/// Default stress-free curvature (unit circle).
pub const KAPPA0: f64 = 1.0;
/// Fraction of the coordinate scale within which a crossing counts as touching.
pub const TOUCH_TOL: f64 = 1e-5;

/// Pointwise curvature data a shape evaluation needs.
pub trait CurveState {
    fn kappa(&self, s: f64) -> f64;
    fn kappa_prime(&self, s: f64) -> f64;
    fn phi(&self, s: f64) -> f64;
    fn params(&self) -> PolyParams;
    /// Least period of the curvature.
    fn period(&self) -> f64;
}

impl CurveState for CurvatureSolution {
    fn kappa(&self, s: f64) -> f64 {
        CurvatureSolution::kappa(self, s)
    }
    fn kappa_prime(&self, s: f64) -> f64 {
        CurvatureSolution::kappa_prime(self, s)
    }
    fn phi(&self, s: f64) -> f64 {
        CurvatureSolution::phi(self, s)
    }
    fn params(&self) -> PolyParams {
        CurvatureSolution::params(self)
    }
    fn period(&self) -> f64 {
        CurvatureSolution::period(self)
    }
}

/// Position of the curve point at arclength `s` in the canonical frame.
pub fn shape_point(state: &impl CurveState, s: f64) -> Result<(f64, f64)> {
    let p = state.params();
    if p.sigma == 0.0 {
        return Err(Error::Domain(
            "sigma = 0: the canonical frame is undefined without pressure".into(),
        ));
    }
    let kappa = state.kappa(s);
    let kp = state.kappa_prime(s);
    let phi = state.phi(s);
    let (sin, cos) = phi.sin_cos();
    let radial = (kappa * kappa - 2.0 * p.mu) / (2.0 * p.sigma);
    Ok((
        kp / p.sigma * cos + radial * sin,
        kp / p.sigma * sin - radial * cos,
    ))
}

/// Bending moment and tangential/normal stress components `(M, N, Q)` at `s`.
pub fn forces_moment(
    state: &impl CurveState,
    s: f64,
    rigidity: f64,
    kappa0: f64,
) -> (f64, f64, f64) {
    let kappa = state.kappa(s);
    let m = rigidity * (kappa - kappa0);
    let n = -0.5 * rigidity * (kappa * kappa - 2.0 * state.params().mu);
    let q = -rigidity * state.kappa_prime(s);
    (m, n, q)
}

/// One sampled point of a shape.
#[derive(Debug, Clone, Copy)]
pub struct ShapeSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub kappa: f64,
    pub phi: f64,
    /// Bending moment `M = D (kappa - kappa0)`.
    pub moment: f64,
    /// Tangential stress component `N`.
    pub tension: f64,
    /// Normal stress component `Q`.
    pub shear: f64,
}

/// Quality measures of a sampled shape.
#[derive(Debug, Clone, Copy)]
pub struct ShapeDiagnostics {
    /// `|r(L) - r(0)|` from the first and last samples.
    pub closure_error: f64,
    /// Deviation of the tangent turning `|phi(L) - phi(0)|` from one full turn.
    pub slope_closure_error: f64,
    /// `|n T - 2 pi|`.
    pub length_error: f64,
    pub self_intersecting: bool,
    pub mode_n: u32,
}

/// Arclength-ordered samples of one closed shape plus its diagnostics.
#[derive(Debug, Clone)]
pub struct ShapePolyline {
    pub samples: Vec<ShapeSample>,
    pub diagnostics: ShapeDiagnostics,
}

impl ShapePolyline {
    /// Sampled points as coordinate pairs.
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|p| [p.x, p.y]).collect()
    }

    /// Total arclength span of the samples.
    pub fn length(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.s - a.s,
            _ => 0.0,
        }
    }

    /// Signed enclosed area by the shoelace rule over the closed polygon.
    pub fn area(&self) -> f64 {
        let n = self.samples.len();
        if n < 3 {
            return 0.0;
        }
        // drop the duplicated closing point if present
        let closed = {
            let (a, b) = (&self.samples[0], &self.samples[n - 1]);
            (a.x - b.x).hypot(a.y - b.y) < 1e-9
        };
        let m = if closed { n - 1 } else { n };
        let mut acc = 0.0;
        for i in 0..m {
            let a = &self.samples[i];
            let b = &self.samples[(i + 1) % m];
            acc += a.x * b.y - b.x * a.y;
        }
        0.5 * acc
    }
}

/// Sample a solved mode-`n` shape uniformly over `[0, n T]` (inclusive), with
/// per-point forces at the default normalization and full diagnostics.
pub fn sample_shape(
    state: &impl CurveState,
    mode_n: u32,
    n_samples: usize,
) -> Result<ShapePolyline> {
    if n_samples < 16 * mode_n as usize {
        return Err(Error::Domain(format!(
            "n_samples = {n_samples} too coarse for mode {mode_n} (need >= {})",
            16 * mode_n
        )));
    }
    let length = mode_n as f64 * state.period();
    let mut samples = Vec::with_capacity(n_samples + 1);
    for i in 0..=n_samples {
        let s = i as f64 * length / n_samples as f64;
        let (x, y) = shape_point(state, s)?;
        let (moment, tension, shear) = forces_moment(state, s, RIGIDITY, KAPPA0);
        samples.push(ShapeSample {
            s,
            x,
            y,
            kappa: state.kappa(s),
            phi: state.phi(s),
            moment,
            tension,
            shear,
        });
    }
    let first = samples[0];
    let last = samples[n_samples];
    let turning = (last.phi - first.phi).abs();
    let diagnostics = ShapeDiagnostics {
        closure_error: (last.x - first.x).hypot(last.y - first.y),
        slope_closure_error: (turning - 2.0 * PI).abs(),
        length_error: (length - 2.0 * PI).abs(),
        self_intersecting: {
            let pts: Vec<[f64; 2]> = samples[..n_samples].iter().map(|p| [p.x, p.y]).collect();
            polyline_self_intersects(&pts)
        },
        mode_n,
    };
    Ok(ShapePolyline {
        samples,
        diagnostics,
    })
}

/// Proper self-intersection test of a closed polyline.
pub fn self_intersects(poly: &ShapePolyline) -> bool {
    let n = poly.samples.len();
    if n < 4 {
        return false;
    }
    // drop the duplicated closing point if present
    let closed = {
        let (a, b) = (&poly.samples[0], &poly.samples[n - 1]);
        (a.x - b.x).hypot(a.y - b.y) < 1e-9
    };
    let m = if closed { n - 1 } else { n };
    let pts: Vec<[f64; 2]> = poly.samples[..m].iter().map(|p| [p.x, p.y]).collect();
    polyline_self_intersects(&pts)
}

/// True iff two non-adjacent segments of the closed polyline through `pts`
/// cross transversally deeper than [`TOUCH_TOL`] of the coordinate scale.
/// Tangential contacts and exactly overlapping segments count as touching.
pub fn polyline_self_intersects(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    if n < 4 {
        return false;
    }
    let scale = pts
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0f64, f64::max)
        .max(1e-30);
    let tol = TOUCH_TOL * scale;

    // segments sorted by min-x for an interval sweep
    struct Seg {
        lo: f64,
        hi: f64,
        i: usize,
    }
    let mut segs: Vec<Seg> = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            Seg {
                lo: a[0].min(b[0]),
                hi: a[0].max(b[0]),
                i,
            }
        })
        .collect();
    segs.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());

    for si in 0..n {
        for sj in si + 1..n {
            if segs[sj].lo > segs[si].hi {
                break;
            }
            let (i, j) = (segs[si].i.min(segs[sj].i), segs[si].i.max(segs[sj].i));
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], tol) {
                return true;
            }
        }
    }
    false
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Transversal crossing test with a touching tolerance: both segments must
/// strictly straddle the other's line, and at least one endpoint of each must
/// clear the other's line by more than `tol`.
fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], tol: f64) -> bool {
    let d1 = cross(a, b, c);
    let d2 = cross(a, b, d);
    let d3 = cross(c, d, a);
    let d4 = cross(c, d, b);
    if !(d1 * d2 < 0.0 && d3 * d4 < 0.0) {
        return false;
    }
    let len_ab = (b[0] - a[0]).hypot(b[1] - a[1]).max(1e-300);
    let len_cd = (d[0] - c[0]).hypot(d[1] - c[1]).max(1e-300);
    // distances of endpoints to the other segment's line
    let depth_cd = d1.abs().max(d2.abs()) / len_ab;
    let depth_ab = d3.abs().max(d4.abs()) / len_cd;
    depth_cd.min(depth_ab) > tol
}

/// Maximum distance from any reflected sample to the nearest original sample,
/// over the `n` symmetry axes (directed by the normals at the half-period
/// points, all through the origin of the canonical frame).
pub fn symmetry_check(poly: &ShapePolyline, state: &impl CurveState, mode_n: u32) -> f64 {
    let pts = poly.points();
    if pts.is_empty() {
        return 0.0;
    }
    let grid = NearestGrid::build(&pts);
    let half = 0.5 * state.period();
    let mut worst = 0.0f64;
    for i in 0..mode_n {
        let phi_axis = state.phi(i as f64 * half) + 0.5 * PI;
        let (uy, ux) = phi_axis.sin_cos();
        for p in &pts {
            let dot = p[0] * ux + p[1] * uy;
            let refl = [2.0 * dot * ux - p[0], 2.0 * dot * uy - p[1]];
            worst = worst.max(grid.nearest_distance(refl));
        }
    }
    worst
}

/// Uniform bucket grid for nearest-sample queries.
struct NearestGrid {
    cell: f64,
    min: [f64; 2],
    dims: [usize; 2],
    buckets: Vec<Vec<[f64; 2]>>,
}

impl NearestGrid {
    fn build(pts: &[[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let target = (pts.len() as f64).sqrt().ceil() as usize;
        let dims = [target.max(1), target.max(1)];
        let cell = span / target as f64;
        let mut buckets = vec![Vec::new(); dims[0] * dims[1]];
        let index = |cell: f64, lo: &[f64; 2], dims: &[usize; 2], p: &[f64; 2]| {
            let ix = (((p[0] - lo[0]) / cell) as usize).min(dims[0] - 1);
            let iy = (((p[1] - lo[1]) / cell) as usize).min(dims[1] - 1);
            iy * dims[0] + ix
        };
        for p in pts {
            buckets[index(cell, &lo, &dims, p)].push(*p);
        }
        NearestGrid {
            cell,
            min: lo,
            dims,
            buckets,
        }
    }

    fn nearest_distance(&self, p: [f64; 2]) -> f64 {
        let ix =
            (((p[0] - self.min[0]) / self.cell).floor() as i64).clamp(0, self.dims[0] as i64 - 1);
        let iy =
            (((p[1] - self.min[1]) / self.cell).floor() as i64).clamp(0, self.dims[1] as i64 - 1);
        let mut best = f64::MAX;
        // widen the ring search until a hit cannot be beaten
        for radius in 0..self.dims[0].max(self.dims[1]) as i64 {
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    if dx.abs().max(dy.abs()) != radius {
                        continue;
                    }
                    let (cx, cy) = (ix + dx, iy + dy);
                    if cx < 0 || cy < 0 || cx >= self.dims[0] as i64 || cy >= self.dims[1] as i64 {
                        continue;
                    }
                    for q in &self.buckets[cy as usize * self.dims[0] + cx as usize] {
                        best = best.min((p[0] - q[0]).hypot(p[1] - q[1]));
                    }
                }
            }
            if best < (radius as f64) * self.cell {
                break;
            }
        }
        best
    }
}
