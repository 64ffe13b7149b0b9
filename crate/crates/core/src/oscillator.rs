//! Two-body isotropic harmonic oscillator in relative coordinates.
//!
//! The μ-particle oscillates radially, `r̄ = r − r_eq = L cos(ω₀t + ϑ)`, and
//! the field energy is `E_{n,F} = (ħω₀/2)(2n + 1 − αL²)` with `α = μω₀/ħ`.
//! It vanishes at the classical threshold `L² = (2n+1)/α`.
//!
//! Trajectory kinematics use the scaled radial field
//!
//! ```text
//! χ̂_n(r̄) = (A/√2) (H_n(u)/2ⁿ) e^{−u²/2},   u = √α r̄
//! ```
//!
//! which reproduces the closed-form trajectory series for `n = 0, 1`.
//! [`radial_field`] returns the plain closed forms `A e^{−αr̄²/2}` and
//! `A r̄ e^{−αr̄²/2}` (Hermite form for `n ≥ 2`).

use std::f64::consts::PI;

use serde::Serialize;

use crate::angular;
use crate::constants::SI;
use crate::error::{ensure_finite, Error, Result};
use crate::oracle::solve_root;

/// Relative slack allowed on the `|r̄| ≤ L` domain check.
const DOMAIN_SLACK: f64 = 1e-12;

/// Target ratio `q₁(1/√α)·√α` of the amplitude calibration rule.
pub const CALIBRATION_TARGET: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscSystem {
    /// Reduced mass, kg.
    pub mu: f64,
    /// Angular frequency, 1/s.
    pub omega0: f64,
    /// `μω₀/ħ`, 1/m².
    pub alpha: f64,
    /// Oscillation amplitude `L`, m.
    pub cap_l: f64,
    /// Equilibrium separation, m.
    pub r_eq: f64,
}

impl OscSystem {
    pub fn new(mu: f64, omega0: f64, cap_l: f64, r_eq: f64) -> Result<Self> {
        for (name, v) in [
            ("mu", mu),
            ("omega0", omega0),
            ("cap_l", cap_l),
            ("r_eq", r_eq),
        ] {
            ensure_finite(name, v)?;
        }
        if mu <= 0.0 || omega0 <= 0.0 || cap_l <= 0.0 || r_eq < 0.0 {
            return Err(Error::Validation(format!(
                "need mu, omega0, cap_l > 0 and r_eq ≥ 0 (got {mu}, {omega0}, {cap_l}, {r_eq})"
            )));
        }
        Ok(Self {
            mu,
            omega0,
            alpha: mu * omega0 / SI.hbar,
            cap_l,
            r_eq,
        })
    }

    /// System specified through `α` instead of `ω₀`.
    pub fn with_alpha(mu: f64, alpha: f64, cap_l: f64, r_eq: f64) -> Result<Self> {
        ensure_finite("alpha", alpha)?;
        if alpha <= 0.0 {
            return Err(Error::Validation(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        let mut sys = Self::new(mu, alpha * SI.hbar / mu, cap_l, r_eq)?;
        sys.alpha = alpha;
        Ok(sys)
    }

    /// Hydrogen molecule with `μ = m_p/2` and `α = 10²⁰ m⁻²`. `L` sits at the
    /// threshold of `n_max = 50`.
    pub fn hydrogen_molecule() -> Self {
        let alpha = 1e20;
        let cap_l = threshold_length(alpha, 50);
        Self::with_alpha(SI.proton_mass / 2.0, alpha, cap_l, 0.74e-10)
            .expect("static parameters are valid")
    }

    /// `√α r̄`.
    pub fn scaled(&self, r_bar: f64) -> f64 {
        self.alpha.sqrt() * r_bar
    }

    /// Copy of the system with a different amplitude `L`.
    pub fn with_amplitude(&self, cap_l: f64) -> Result<Self> {
        let mut sys = Self::new(self.mu, self.omega0, cap_l, self.r_eq)?;
        sys.alpha = self.alpha;
        Ok(sys)
    }

    fn check_inside(&self, r_bar: f64) -> Result<()> {
        ensure_finite("r_bar", r_bar)?;
        if r_bar.abs() > self.cap_l * (1.0 + DOMAIN_SLACK) {
            return Err(Error::Domain(format!(
                "|r̄| = {:e} m exceeds L = {:e} m",
                r_bar.abs(),
                self.cap_l
            )));
        }
        Ok(())
    }
}

fn threshold_length(alpha: f64, n: u32) -> f64 {
    ((2 * n + 1) as f64 / alpha).sqrt()
}

/// `L = √((2n+1)/α)`: the amplitude at which the field energy of level `n` vanishes.
pub fn classical_threshold(sys: &OscSystem, n: u32) -> f64 {
    threshold_length(sys.alpha, n)
}

/// Gaussian suppression `e^{−αL²}` of the probability field at the turning points.
pub fn boundary_suppression(sys: &OscSystem) -> f64 {
    (-sys.alpha * sys.cap_l * sys.cap_l).exp()
}

/// Classical radial motion `(r̄, p_μ)` at time `t` with phase `ϑ`.
pub fn classical_motion(sys: &OscSystem, phase: f64, t: f64) -> (f64, f64) {
    let arg = sys.omega0 * t + phase;
    (
        sys.cap_l * arg.cos(),
        -sys.mu * sys.omega0 * sys.cap_l * arg.sin(),
    )
}

/// Radial kinetic energy `½μṙ²` at `r̄`, from energy conservation.
pub fn radial_kinetic(sys: &OscSystem, r_bar: f64) -> f64 {
    let w2 = sys.omega0 * sys.omega0;
    (0.5 * sys.mu * w2 * (sys.cap_l * sys.cap_l - r_bar * r_bar)).max(0.0)
}

/// Physicists' Hermite polynomial `H_n(u)`.
pub fn hermite(n: u32, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * u);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesOrder {
    TwoTerm,
    ThreeTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscMode {
    pub n: u32,
    pub l: u32,
    pub m_l: i32,
    /// Field amplitude `A_n^{osc}`, m.
    pub a_osc: f64,
    pub e_n: f64,
    pub e_mu: f64,
    pub e_field: f64,
}

impl OscMode {
    pub fn new(sys: &OscSystem, n: u32, l: u32, m_l: i32, a_osc: f64) -> Result<Self> {
        ensure_finite("a_osc", a_osc)?;
        if m_l.unsigned_abs() > l {
            return Err(Error::Validation(format!(
                "|m_l| = {} exceeds l = {l}",
                m_l.unsigned_abs()
            )));
        }
        let hw = SI.hbar * sys.omega0;
        let e_n = hw * (n as f64 + 0.5);
        let e_mu = 0.5 * sys.mu * sys.omega0 * sys.omega0 * sys.cap_l * sys.cap_l;
        let e_field = 0.5 * hw * ((2 * n + 1) as f64 - sys.alpha * sys.cap_l * sys.cap_l);
        Ok(Self {
            n,
            l,
            m_l,
            a_osc,
            e_n,
            e_mu,
            e_field,
        })
    }

    /// Closed-form radial field: `A e^{−αr̄²/2}` (n = 0), `A r̄ e^{−αr̄²/2}`
    /// (n = 1), `A (H_n(u)/2ⁿ) e^{−u²/2}` otherwise.
    pub fn radial_field(&self, sys: &OscSystem, r_bar: f64) -> f64 {
        let u = sys.scaled(r_bar);
        let gauss = (-0.5 * u * u).exp();
        match self.n {
            0 => self.a_osc * gauss,
            1 => self.a_osc * r_bar * gauss,
            n => self.a_osc * hermite(n, u) / 2f64.powi(n as i32) * gauss,
        }
    }

    /// Slope `χ̂_n'(r̄)` of the scaled field that enters `(1 + χ̂'²/4π)^{1/2}`.
    pub fn field_slope(&self, sys: &OscSystem, r_bar: f64) -> f64 {
        let u = sys.scaled(r_bar);
        let n = self.n;
        let shape = (u * hermite(n, u) - hermite(n + 1, u)) / 2f64.powi(n as i32);
        self.a_osc / 2f64.sqrt() * sys.alpha.sqrt() * shape * (-0.5 * u * u).exp()
    }

    /// `K_μ χ̂_n'² |Y_{l,m}(θ)|²`, with `K_μ = ½μṙ²` from the classical motion.
    pub fn kinetic_field(&self, sys: &OscSystem, r_bar: f64, theta: f64, _phi: f64) -> Result<f64> {
        sys.check_inside(r_bar)?;
        let y2 = angular::ylm_sq(self.l, self.m_l, theta)?;
        Ok(radial_kinetic(sys, r_bar) * self.field_slope(sys, r_bar).powi(2) * y2)
    }

    /// Resummed trajectory series with `q(0) = 0`.
    pub fn trajectory(&self, sys: &OscSystem, r_bar: f64, order: SeriesOrder) -> Result<f64> {
        Ok(r_bar + self.trajectory_correction(sys, r_bar, order)?)
    }

    /// `q(r̄) − r̄`. Near the turning points it is far below the rounding
    /// error of `r̄`.
    pub fn trajectory_correction(
        &self,
        sys: &OscSystem,
        r_bar: f64,
        order: SeriesOrder,
    ) -> Result<f64> {
        sys.check_inside(r_bar)?;
        let (alpha, a2) = (sys.alpha, self.a_osc * self.a_osc);
        let gauss = (-alpha * r_bar * r_bar).exp();
        let r3 = r_bar.powi(3);
        let r5 = r_bar.powi(5);
        let correction = match (self.n, order) {
            (0, SeriesOrder::TwoTerm) => alpha * alpha * a2 * r3 / (48.0 * PI),
            (0, SeriesOrder::ThreeTerm) => {
                alpha * alpha * a2 * r3 / (48.0 * PI) + alpha.powi(3) * a2 * r5 / (120.0 * PI)
            }
            (1, _) => alpha * a2 * r_bar / (16.0 * PI) + alpha.powi(3) * a2 * r5 / (80.0 * PI),
            (n, _) => {
                return Err(Error::Unsupported(format!(
                    "no closed-form trajectory for n = {n}"
                )))
            }
        };
        Ok(correction * gauss)
    }

    /// PF radial velocity `v_μ (1 + χ̂'²/8π)`.
    pub fn velocity(&self, sys: &OscSystem, r_bar: f64, v_mu: f64) -> Result<f64> {
        sys.check_inside(r_bar)?;
        Ok(v_mu * (1.0 + self.field_slope(sys, r_bar).powi(2) / (8.0 * PI)))
    }

    /// PF radial kinetic energy `K_μ (1 + χ̂'²/4π)`.
    pub fn kinetic_pf_radial(&self, sys: &OscSystem, r_bar: f64, k_mu: f64) -> Result<f64> {
        sys.check_inside(r_bar)?;
        Ok(k_mu * (1.0 + self.field_slope(sys, r_bar).powi(2) / (4.0 * PI)))
    }
}

/// Calibrated amplitude and its order of magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeEstimate {
    pub calibrated: f64,
    pub magnitude: f64,
}

/// Amplitude fixed by the calibration rule.
///
/// `n = 1` solves `q₁(1/√α) = 1.01/√α`. `n = 0` then matches the relative
/// correction `q₀(L)/L − 1` to that of the calibrated `n = 1` field.
pub fn amplitude_estimate(sys: &OscSystem, n: u32) -> Result<AmplitudeEstimate> {
    let inv = 1.0 / sys.alpha.sqrt();
    let probe = |mode_n: u32, a: f64, r: f64| -> Result<f64> {
        let mode = OscMode::new(sys, mode_n, 0, 0, a)?;
        Ok(mode.trajectory_correction(sys, r, SeriesOrder::TwoTerm)? / r)
    };
    // The two-term corrections are exactly quadratic in A.
    let unit = 1e-10;
    let c1 = probe(1, unit, inv.min(sys.cap_l))? / (unit * unit);
    let a1 = solve_root(|a| c1 * a * a - (CALIBRATION_TARGET - 1.0), 0.0, 1.0, 1e-24)?;
    let calibrated = match n {
        1 => a1,
        0 => {
            let target = probe(1, a1, sys.cap_l)?;
            let c0 = probe(0, unit, sys.cap_l)? / (unit * unit);
            if !(c0 > 0.0 && target > 0.0) {
                return Err(Error::Domain(
                    "boundary corrections underflow for this system".into(),
                ));
            }
            (target / c0).sqrt()
        }
        n => {
            return Err(Error::Unsupported(format!(
                "no amplitude calibration for n = {n}"
            )))
        }
    };
    Ok(AmplitudeEstimate {
        calibrated,
        magnitude: 10f64.powf(calibrated.log10().round()),
    })
}
