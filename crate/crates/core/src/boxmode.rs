//! Particle in a one-dimensional box `0 ≤ x ≤ a` with no interior force.
//!
//! The field of mode `n` is `χ_n = A_n sin(k_n x)`, `k_n = nπ/a`. The
//! amplitude follows from splitting the eigenvalue `E_n` into the particle
//! energy `p_P²/2m` and the field energy `½ m ω̄_n² A_n²`:
//!
//! ```text
//! A_n = (ħ/p_P) (1 − p_P²/p_n²)^{1/2}
//! ```
//!
//! With `b_n² = p_n²/p_P² − 1 = (A_n k_n)²` the PF trajectory integrand is
//! `(1 + b_n² cos²(k_n x))^{1/2}`, which is expanded to eighth order in `b_n`
//! for the closed-form trajectories. The expansion only converges for
//! `b_n² < 1`, so modes are restricted to `1 ≤ p_n²/p_P² < 2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::SI;
use crate::error::{ensure_finite, Error, Result};
use crate::pf::{pf_force_stationary, EnergyBudget};

/// Default number of samples for gridded outputs.
pub const DEFAULT_GRID_POINTS: usize = 1000;

const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxSystem {
    /// Particle mass, kg.
    pub m: f64,
    /// Box width, m.
    pub a: f64,
    /// Particle momentum `p_P`, kg·m/s.
    pub p_particle: f64,
}

impl BoxSystem {
    pub fn new(m: f64, a: f64, p_particle: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("a", a), ("p_particle", p_particle)] {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { m, a, p_particle })
    }

    /// System whose particle momentum satisfies `p_n²/p_P² = ratio` for mode `n`.
    pub fn with_momentum_ratio(m: f64, a: f64, n: u32, ratio: f64) -> Result<Self> {
        ensure_finite("ratio", ratio)?;
        if ratio <= 0.0 || n == 0 {
            return Err(Error::Validation(format!(
                "need n ≥ 1 and ratio > 0, got n = {n}, ratio = {ratio}"
            )));
        }
        let p_n = SI.hbar * wavenumber(n, a);
        Self::new(m, a, p_n / ratio.sqrt())
    }

    /// Electron in a box of width `a`.
    pub fn electron(a: f64, n: u32, ratio: f64) -> Result<Self> {
        Self::with_momentum_ratio(SI.electron_mass, a, n, ratio)
    }

    /// `E_P = p_P²/2m`.
    pub fn e_particle(&self) -> f64 {
        self.p_particle * self.p_particle / (2.0 * self.m)
    }

    pub fn v_particle(&self) -> f64 {
        self.p_particle / self.m
    }
}

/// `k_n = nπ/a`.
pub fn wavenumber(n: u32, a: f64) -> f64 {
    n as f64 * PI / a
}

/// Linear eigenvalue `n²h²/(8ma²)`. Every module that needs the box level
/// goes through this function so the values agree bit for bit.
pub fn linear_level(m: f64, a: f64, n: u32) -> f64 {
    let n = n as f64;
    n * n * SI.planck_h * SI.planck_h / (8.0 * m * a * a)
}

/// Which closed-form trajectory to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesVariant {
    /// Second-order expansion with `g = 4p_P²/(p_n² + 3p_P²)`.
    SecondOrder,
    /// Eighth-order expansion with `g = 1/b⁽¹⁾`.
    EighthOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxMode {
    pub n: u32,
    /// Box width the mode lives in, m.
    pub width: f64,
    pub k_n: f64,
    pub p_n: f64,
    pub e_n: f64,
    /// Field amplitude (positive root), m.
    pub a_n: f64,
    pub b_n_sq: f64,
    pub g_npf: f64,
}

impl BoxMode {
    pub fn new(sys: &BoxSystem, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("box quantum number must be ≥ 1".into()));
        }
        let k_n = wavenumber(n, sys.a);
        let p_n = SI.hbar * k_n;
        let ratio = (p_n / sys.p_particle).powi(2);
        if ratio < 1.0 {
            return Err(Error::Domain(format!(
                "superclassical momentum: p_P exceeds p_{n} (p_n²/p_P² = {ratio})"
            )));
        }
        if ratio >= 2.0 {
            return Err(Error::Domain(format!(
                "series divergence (b² ≥ 1): p_{n}²/p_P² = {ratio}"
            )));
        }
        Ok(Self {
            n,
            width: sys.a,
            k_n,
            p_n,
            e_n: linear_level(sys.m, sys.a, n),
            a_n: SI.hbar / sys.p_particle * (1.0 - 1.0 / ratio).sqrt(),
            b_n_sq: ratio - 1.0,
            g_npf: 4.0 / (ratio + 3.0),
        })
    }

    /// `p_n²/p_P²`.
    pub fn momentum_ratio(&self) -> f64 {
        self.b_n_sq + 1.0
    }

    pub fn check_inside(&self, x: f64) -> Result<()> {
        ensure_finite("x", x)?;
        let slack = DOMAIN_SLACK * self.width;
        if x < -slack || x > self.width + slack {
            return Err(Error::Domain(format!(
                "x = {x:e} m outside the box [0, {:e}]",
                self.width
            )));
        }
        Ok(())
    }

    pub fn chi(&self, x: f64) -> Result<f64> {
        self.check_inside(x)?;
        Ok(self.a_n * (self.k_n * x).sin())
    }

    /// Normalized wave function `(2/a)^{1/2} sin(k_n x)`, in m^{-1/2}.
    pub fn psi(&self, x: f64) -> Result<f64> {
        self.check_inside(x)?;
        Ok((2.0 / self.width).sqrt() * (self.k_n * x).sin())
    }

    /// `χ'(x) = A_n k_n cos(k_n x)` (dimensionless). No domain check.
    pub fn chi_prime(&self, x: f64) -> f64 {
        self.a_n * self.k_n * (self.k_n * x).cos()
    }

    /// `χ''(x) = −k_n² χ(x)`, in 1/m. No domain check.
    pub fn chi_second(&self, x: f64) -> f64 {
        -self.a_n * self.k_n * self.k_n * (self.k_n * x).sin()
    }

    /// `ω̄_n = k_n p_P/m`.
    pub fn omega_bar(&self, sys: &BoxSystem) -> f64 {
        self.k_n * sys.v_particle()
    }

    /// `E_F = ½ m ω̄_n² A_n²`.
    pub fn field_energy_total(&self, sys: &BoxSystem) -> f64 {
        let w = self.omega_bar(sys);
        0.5 * sys.m * w * w * self.a_n * self.a_n
    }

    /// Energy ledger at position `x`: the field's kinetic part is
    /// `E_F cos²(k_n x)`, its potential part `E_F sin²(k_n x)`.
    pub fn field_energy(&self, sys: &BoxSystem, x: f64) -> Result<EnergyBudget> {
        self.check_inside(x)?;
        let e_field = self.field_energy_total(sys);
        let phase = self.k_n * x;
        Ok(EnergyBudget::from_splits(
            sys.e_particle(),
            0.0,
            e_field * phase.cos().powi(2),
            e_field * phase.sin().powi(2),
        ))
    }

    /// The eigenvalue recovered from the amplitude: `E_P / (1 − p_P² A_n²/ħ²)`.
    pub fn energy_from_amplitude(&self, sys: &BoxSystem) -> f64 {
        let s = sys.p_particle * self.a_n / SI.hbar;
        sys.e_particle() / (1.0 - s * s)
    }

    pub fn eighth_order(&self) -> Result<SeriesCoeffs> {
        eighth_order_coeffs(self.b_n_sq)
    }

    /// Trajectory scale factor matching a series variant.
    pub fn gauge(&self, variant: SeriesVariant) -> Result<f64> {
        Ok(match variant {
            SeriesVariant::SecondOrder => self.g_npf,
            SeriesVariant::EighthOrder => 1.0 / self.eighth_order()?.b1,
        })
    }

    /// Dimensionless coefficient `c` of the leading oscillation `(c/k_n) sin(2k_n x)`.
    pub fn sine_coefficient(&self, variant: SeriesVariant) -> Result<f64> {
        Ok(match variant {
            SeriesVariant::SecondOrder => 0.5 * self.b_n_sq / (self.b_n_sq + 4.0),
            SeriesVariant::EighthOrder => {
                let c = self.eighth_order()?;
                c.b2 / c.b1
            }
        })
    }

    /// Closed-form PF trajectory with `q(0) = 0`; both variants give `q(a) = a`.
    pub fn trajectory_series(&self, x: f64, variant: SeriesVariant) -> Result<f64> {
        self.check_inside(x)?;
        let k = self.k_n;
        Ok(match variant {
            SeriesVariant::SecondOrder => {
                let p = self.momentum_ratio();
                x + self.width / (2.0 * self.n as f64 * PI)
                    * ((p - 1.0) / (p + 3.0))
                    * (2.0 * k * x).sin()
            }
            SeriesVariant::EighthOrder => {
                let c = self.eighth_order()?;
                x + c.b2 / (c.b1 * k) * (2.0 * k * x).sin()
                    - c.b3 / (c.b1 * k) * (4.0 * k * x).sin()
            }
        })
    }

    /// `dq/dx` of [`trajectory_series`](Self::trajectory_series); at `x = 0`
    /// this is the limit of `q/x`.
    pub fn trajectory_slope(&self, x: f64, variant: SeriesVariant) -> Result<f64> {
        self.check_inside(x)?;
        let k = self.k_n;
        Ok(match variant {
            SeriesVariant::SecondOrder => {
                let p = self.momentum_ratio();
                1.0 + ((p - 1.0) / (p + 3.0)) * (2.0 * k * x).cos()
            }
            SeriesVariant::EighthOrder => {
                let c = self.eighth_order()?;
                1.0 + 2.0 * c.b2 / c.b1 * (2.0 * k * x).cos()
                    - 4.0 * c.b3 / c.b1 * (4.0 * k * x).cos()
            }
        })
    }

    /// PF velocity `g v_P (1 + χ'²)^{1/2}`.
    pub fn velocity(&self, x: f64, v_p: f64) -> f64 {
        let s = self.chi_prime(x);
        self.g_npf * v_p * (1.0 + s * s).sqrt()
    }

    /// PF acceleration `g v_P² χ'χ''/(1 + χ'²)^{1/2}` (no particle force).
    pub fn pf_acceleration(&self, x: f64, v_p: f64) -> f64 {
        let s = self.chi_prime(x);
        self.g_npf * v_p * v_p * s * self.chi_second(x) / (1.0 + s * s).sqrt()
    }

    /// `m q̈` at `x`, through the generic stationary PF force with `f_P = 0`.
    pub fn pf_force(&self, sys: &BoxSystem, x: f64) -> f64 {
        pf_force_stationary(
            self.g_npf,
            0.0,
            self.chi_prime(x),
            self.chi_second(x),
            sys.m,
            sys.v_particle(),
        )
    }

    /// Nodes and antinodes strictly inside the box, `j a/(2n)`.
    pub fn inflection_points(&self) -> Vec<f64> {
        let n = self.n as f64;
        (1..2 * self.n)
            .map(|j| j as f64 * self.width / (2.0 * n))
            .collect()
    }
}

/// Uniform particle motion `x(t) = v_P t + x₀`, for reparametrizing
/// trajectories in time. Wall reflections are not modelled.
pub fn position_at_time(v_p: f64, x0: f64, t: f64) -> f64 {
    v_p * t + x0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// Coefficients of the eighth-order trajectory series
/// `b⁽¹⁾x + (b⁽²⁾/k) sin 2kx − (b⁽³⁾/k) sin 4kx`.
pub fn eighth_order_coeffs(b_sq: f64) -> Result<SeriesCoeffs> {
    check_b_sq(b_sq)?;
    let (b2, b4, b6, b8) = (b_sq, b_sq.powi(2), b_sq.powi(3), b_sq.powi(4));
    Ok(SeriesCoeffs {
        b1: 1.0 + b2 / 4.0 - 3.0 * b4 / 64.0 + 5.0 * b6 / 256.0 - 175.0 * b8 / 16384.0,
        b2: b2 / 8.0 - b4 / 32.0 + 15.0 * b6 / 1024.0 - 35.0 * b8 / 4096.0,
        b3: b4 / 256.0 - 3.0 * b6 / 1024.0 + 35.0 * b8 / 16384.0,
    })
}

fn check_b_sq(b_sq: f64) -> Result<()> {
    ensure_finite("b_sq", b_sq)?;
    if !(0.0..1.0).contains(&b_sq) {
        return Err(Error::Domain(format!("b² = {b_sq} outside [0, 1)")));
    }
    Ok(())
}

/// Eighth-order truncation of `(1 + b² cos²)^{1/2}`.
pub fn truncated_integrand(b_sq: f64, cos_sq: f64) -> Result<f64> {
    check_b_sq(b_sq)?;
    let y = b_sq * cos_sq;
    Ok(1.0 + y / 2.0 - y * y / 8.0 + y.powi(3) / 16.0 - 5.0 * y.powi(4) / 128.0)
}

pub fn exact_integrand(b_sq: f64, cos_sq: f64) -> f64 {
    (1.0 + b_sq * cos_sq).sqrt()
}
