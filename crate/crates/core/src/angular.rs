//! Polar and azimuthal factors of the spherical harmonics,
//! `Y_{l,m}(θ, φ) = S_{l,m}(θ) T_m(φ)`.
//!
//! `S_{l,m}` is normalized on `[0, π]` with weight `sin θ` and
//! `T_m = e^{imφ}/√(2π)`, so `|Y_{l,m}|² = S_{l,m}²/2π`. Associated Legendre
//! functions carry no Condon–Shortley phase; only `|m|` enters `S`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_lm(l: u32, m: i32) -> Result<u32> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::Validation(format!("|m| = {am} exceeds l = {l}")));
    }
    Ok(am)
}

/// Associated Legendre function `P_l^m(cos θ)` without the `(−1)^m` phase.
pub fn legendre(l: u32, m: u32, theta: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let (x, s) = (theta.cos(), theta.sin());
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= (2 * i - 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * cur - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `dP_l^m(cos θ)/dθ`.
pub fn legendre_dtheta(l: u32, m: u32, theta: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    if m == 0 {
        return -legendre(l, 1, theta);
    }
    let lower = ((l + m) * (l - m + 1)) as f64 * legendre(l, m - 1, theta);
    0.5 * (lower - legendre(l, m + 1, theta))
}

fn s_norm(l: u32, m: u32) -> f64 {
    let ratio: f64 = ((l - m + 1)..=(l + m))
        .map(|j| j as f64)
        .product::<f64>()
        .recip();
    ((2 * l + 1) as f64 / 2.0 * ratio).sqrt()
}

/// Polar factor `S_{l,m}(θ)`, e.g. `S_{1,0} = ½√6 cos θ`, `S_{1,±1} = ½√3 sin θ`.
pub fn polar(l: u32, m: i32, theta: f64) -> Result<f64> {
    let am = check_lm(l, m)?;
    Ok(s_norm(l, am) * legendre(l, am, theta))
}

/// `dS_{l,m}/dθ`.
pub fn polar_dtheta(l: u32, m: i32, theta: f64) -> Result<f64> {
    let am = check_lm(l, m)?;
    Ok(s_norm(l, am) * legendre_dtheta(l, am, theta))
}

/// Azimuthal factor `T_m(φ) = e^{imφ}/√(2π)`.
pub fn azimuthal(m: i32, phi: f64) -> Complex64 {
    Complex64::from_polar((2.0 * PI).sqrt().recip(), m as f64 * phi)
}

/// `|Y_{l,m}(θ, φ)|²`, independent of φ.
pub fn ylm_sq(l: u32, m: i32, theta: f64) -> Result<f64> {
    Ok(polar(l, m, theta)?.powi(2) / (2.0 * PI))
}
