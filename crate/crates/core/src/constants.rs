//! Physical constants (SI, CODATA 2018 exact/recommended values).
//!
//! Coulomb interactions use the single combination `e'² = e²/(4πε₀)`.

use std::f64::consts::PI;

const PLANCK_H: f64 = 6.626_070_15e-34;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
const PROTON_MASS: f64 = 1.672_621_923_69e-27;
const HBAR: f64 = PLANCK_H / (2.0 * PI);
const GAUSSIAN_CHARGE_SQ: f64 =
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (4.0 * PI * VACUUM_PERMITTIVITY);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Planck constant, J·s.
    pub planck_h: f64,
    /// kg.
    pub electron_mass: f64,
    /// kg.
    pub proton_mass: f64,
    /// `e²/(4πε₀)` in J·m.
    pub gaussian_charge_sq: f64,
    /// `ħ²/(m_e e'²)` in m.
    pub bohr_radius: f64,
    /// J per eV.
    pub electron_volt: f64,
}

pub const SI: PhysConstants = PhysConstants {
    hbar: HBAR,
    planck_h: PLANCK_H,
    electron_mass: ELECTRON_MASS,
    proton_mass: PROTON_MASS,
    gaussian_charge_sq: GAUSSIAN_CHARGE_SQ,
    bohr_radius: HBAR * HBAR / (ELECTRON_MASS * GAUSSIAN_CHARGE_SQ),
    electron_volt: ELEMENTARY_CHARGE,
};

impl Default for PhysConstants {
    fn default() -> Self {
        SI
    }
}

impl PhysConstants {
    /// `h = 2πħ` to relative 1e-12 and Bohr radius within 0.01% of 0.52918 Å.
    pub fn is_consistent(&self) -> bool {
        let h_ok = (self.planck_h - 2.0 * PI * self.hbar).abs() <= 1e-12 * self.planck_h;
        let a0 = self.hbar * self.hbar / (self.electron_mass * self.gaussian_charge_sq);
        let a0_ok = (a0 - self.bohr_radius).abs() <= 1e-12 * a0
            && (a0 - 0.52918e-10).abs() <= 1e-4 * 0.52918e-10;
        h_ok && a0_ok
    }
}

/// De Broglie triple `p = ħk`, `λ = h/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeBroglie {
    pub p: f64,
    pub k: f64,
    pub lambda: f64,
}

impl DeBroglie {
    pub fn from_momentum(p: f64) -> Self {
        Self {
            p,
            k: p / SI.hbar,
            lambda: SI.planck_h / p,
        }
    }

    pub fn from_wavenumber(k: f64) -> Self {
        let p = SI.hbar * k;
        Self {
            p,
            k,
            lambda: SI.planck_h / p,
        }
    }

    pub fn from_wavelength(lambda: f64) -> Self {
        let p = SI.planck_h / lambda;
        Self {
            p,
            k: p / SI.hbar,
            lambda,
        }
    }

    pub fn is_consistent(&self, rel_tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * a.abs().max(b.abs());
        close(self.p, SI.hbar * self.k) && close(self.lambda, SI.planck_h / self.p)
    }
}
