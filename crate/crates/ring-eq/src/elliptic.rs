//! Elliptic integrals and Jacobi elliptic functions.
//!
//! Conventions use the modulus `k` (not the parameter `m = k^2`):
//!
//! ```text
//! K(k)        = F(pi/2, k)
//! F(phi, k)   = integral_0^phi dt / sqrt(1 - k^2 sin^2 t)
//! Pi(n,phi,k) = integral_0^phi dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t))
//! ```
//!
//! Incomplete integrals and the amplitude accept any real argument through the
//! quasi-periodic extensions `F(phi + pi) = F(phi) + 2K`,
//! `Pi(n, phi + pi) = Pi(n, phi) + 2 Pi(n)` and `am(u + 2K) = am(u) + pi`, which the
//! slope-angle formulas rely on when evaluated across several curvature periods.
//!
//! Complete integrals go through the arithmetic-geometric mean, incomplete ones
//! through Carlson's symmetric forms, and the amplitude through the descending
//! Landen (AGM) ladder. `k = 1` is rejected: it corresponds to non-periodic
//! solitary curvature profiles that never close into a ring.

use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Elliptic modulus restricted to `0 <= k < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!("modulus k = {k} outside [0, 1)")));
        }
        Ok(Self { k })
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.k
    }

    /// Squared complementary modulus `1 - k^2`, formed without cancellation.
    #[inline]
    pub fn comp_sq(self) -> f64 {
        (1.0 - self.k) * (1.0 + self.k)
    }
}

/// Amplitude and the three Jacobi functions at one argument.
#[derive(Debug, Clone, Copy)]
pub struct JacobiValues {
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complete elliptic integral of the first kind, `K(k) = pi / (2 agm(1, k'))`.
pub fn complete_k(k: EllipticModulus) -> f64 {
    if k.k() == 0.0 {
        return FRAC_PI_2;
    }
    let mut a = 1.0f64;
    let mut b = k.comp_sq().sqrt();
    for _ in 0..40 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    PI / (a + b)
}

/// Complete elliptic integral of the third kind with characteristic `n < 1`.
pub fn complete_pi(n_char: f64, k: EllipticModulus) -> Result<f64> {
    if n_char >= 1.0 {
        return Err(Error::Characteristic(n_char));
    }
    let kp2 = k.comp_sq();
    Ok(carlson_rf(0.0, kp2, 1.0) + n_char / 3.0 * carlson_rj(0.0, kp2, 1.0, 1.0 - n_char))
}

/// Incomplete elliptic integral of the first kind, any real amplitude.
pub fn incomplete_f(phi: f64, k: EllipticModulus) -> f64 {
    if k.k() == 0.0 {
        return phi;
    }
    let j = (phi / PI).round();
    let psi = phi - j * PI;
    let base = if j == 0.0 { 0.0 } else { 2.0 * j * complete_k(k) };
    base + f_half(psi, k)
}

/// `F` on the principal range `|psi| <= pi/2`.
fn f_half(psi: f64, k: EllipticModulus) -> f64 {
    let s = psi.sin();
    if s == 0.0 {
        return 0.0;
    }
    let c = psi.cos();
    let ks = k.k() * s;
    s * carlson_rf(c * c, (1.0 - ks) * (1.0 + ks), 1.0)
}

/// Incomplete elliptic integral of the third kind, any real amplitude, `n < 1`.
pub fn incomplete_pi(n_char: f64, phi: f64, k: EllipticModulus) -> Result<f64> {
    if n_char >= 1.0 {
        return Err(Error::Characteristic(n_char));
    }
    let j = (phi / PI).round();
    let psi = phi - j * PI;
    let base = if j == 0.0 {
        0.0
    } else {
        2.0 * j * complete_pi(n_char, k)?
    };
    Ok(base + pi_half(n_char, psi, k))
}

/// `Pi` on the principal range `|psi| <= pi/2`.
fn pi_half(n_char: f64, psi: f64, k: EllipticModulus) -> f64 {
    let s = psi.sin();
    if s == 0.0 {
        return 0.0;
    }
    let c = psi.cos();
    let ks = k.k() * s;
    let q = (1.0 - ks) * (1.0 + ks);
    let f = s * carlson_rf(c * c, q, 1.0);
    if n_char == 0.0 {
        return f;
    }
    f + n_char / 3.0 * s * s * s * carlson_rj(c * c, q, 1.0, 1.0 - n_char * s * s)
}

/// Amplitude and Jacobi `sn`, `cn`, `dn` for any real argument.
///
/// The amplitude is the continuous, strictly increasing branch with
/// `am(u + 2K) = am(u) + pi`, so `sn = sin(am)` and `cn = cos(am)` hold globally.
pub fn jacobi(u: f64, k: EllipticModulus) -> JacobiValues {
    if k.k() == 0.0 {
        return JacobiValues {
            am: u,
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        };
    }
    let big_k = complete_k(k);
    let j = (u / (2.0 * big_k)).round();
    let v = u - 2.0 * j * big_k;
    let phi0 = am_agm(v, k);
    let parity = if (j as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let sn = parity * phi0.sin();
    let cn = parity * phi0.cos();
    // dn = sqrt(1 - k^2 sn^2) written as cn^2 + k'^2 sn^2 to avoid cancellation
    let dn = (cn * cn + k.comp_sq() * sn * sn).sqrt();
    JacobiValues {
        am: j * PI + phi0,
        sn,
        cn,
        dn,
    }
}

/// Amplitude on the reduced range `|v| <= K(k)` via the AGM ladder (A&S 16.4).
fn am_agm(v: f64, k: EllipticModulus) -> f64 {
    const MAX_STAGES: usize = 40;
    let mut a = [0.0f64; MAX_STAGES];
    let mut c = [0.0f64; MAX_STAGES];
    a[0] = 1.0;
    c[0] = k.k();
    let mut b = k.comp_sq().sqrt();
    let mut n = 0;
    while c[n].abs() > 1e-17 * a[n] && n + 1 < MAX_STAGES {
        let (an, bn, cn) = (0.5 * (a[n] + b), (a[n] * b).sqrt(), 0.5 * (a[n] - b));
        n += 1;
        a[n] = an;
        c[n] = cn;
        b = bn;
    }
    let mut phi = (2.0f64).powi(n as i32) * a[n] * v;
    for i in (1..=n).rev() {
        let t = (c[i] / a[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + t.asin());
    }
    phi
}

/// Carlson symmetric integral R_F(x, y, z); arguments non-negative, at most one zero.
fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (mut x, mut y, mut z) = (x, y, z);
    let (mut ave, mut dx, mut dy, mut dz);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1.2e-3 {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt()
}

/// Carlson degenerate integral R_C(x, y) for y > 0.
fn carlson_rc(x: f64, y: f64) -> f64 {
    debug_assert!(x >= 0.0 && y > 0.0);
    let (mut x, mut y) = (x, y);
    let (mut ave, mut s);
    loop {
        let lam = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        ave = (x + 2.0 * y) / 3.0;
        s = (y - ave) / ave;
        if s.abs() < 6.5e-4 {
            break;
        }
    }
    (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt()
}

/// Carlson symmetric integral R_J(x, y, z, p) for p > 0.
fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0 && p > 0.0);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut ave, mut dx, mut dy, mut dz, mut dp);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lam) * (p + lam);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        ave = 0.2 * (x + y + z + 2.0 * p);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        dp = (ave - p) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < 1.2e-3 {
            break;
        }
    }
    let ea = dx * (dy + dz) + dy * dz;
    let eb = dx * dy * dz;
    let ec = dp * dp;
    let ed = ea - 3.0 * ec;
    let ee = eb + 2.0 * dp * (ea - ec);
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    let tail = 1.0
        + ed * (-C1 + 0.75 * C3 * ed - 1.5 * C4 * ee)
        + eb * (0.5 * C2 + dp * (-C3 - C3 + dp * C4))
        + dp * ea * (C2 - dp * C3)
        - C2 * dp * ec;
    3.0 * sum + fac * tail / (ave * ave.sqrt())
}
