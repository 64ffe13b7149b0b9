//! Generic one-particle PF bookkeeping: energy ledger, region classification,
//! and the stationary field / PF forces.

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

/// Relative tolerance for algebraic identities.
pub const IDENTITY_REL_TOL: f64 = 1e-12;

/// Default classical-limit threshold as a fraction of `|E_P|`.
pub const CLASSICAL_LIMIT_FRACTION: f64 = 1e-6;

/// `E = E_P + E_F` with kinetic/potential splits of each part.
///
/// `e_field` may be negative; both kinetic terms are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBudget {
    pub e_total: f64,
    pub e_particle: f64,
    pub e_field: f64,
    pub k_particle: f64,
    pub v_particle: f64,
    pub k_field: f64,
    pub v_field: f64,
}

impl EnergyBudget {
    /// Builds a ledger whose totals are sums of the given splits.
    pub fn from_splits(k_particle: f64, v_particle: f64, k_field: f64, v_field: f64) -> Self {
        let e_particle = k_particle + v_particle;
        let e_field = k_field + v_field;
        Self {
            e_total: e_particle + e_field,
            e_particle,
            e_field,
            k_particle,
            v_particle,
            k_field,
            v_field,
        }
    }

    fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("e_total", self.e_total),
            ("e_particle", self.e_particle),
            ("e_field", self.e_field),
            ("k_particle", self.k_particle),
            ("v_particle", self.v_particle),
            ("k_field", self.k_field),
            ("v_field", self.v_field),
        ]
    }
}

/// `|a - b| <= tol * scale`, where `scale` is the largest magnitude in the
/// identity. Handles sums whose terms cancel.
fn identity_holds(lhs: f64, terms: &[f64], tol: f64) -> bool {
    let rhs: f64 = terms.iter().sum();
    let scale = terms.iter().fold(lhs.abs(), |m, t| m.max(t.abs()));
    (lhs - rhs).abs() <= tol * scale
}

/// Checks additivity of all three sums and non-negativity of the kinetic
/// terms.
pub fn energy_budget_check(b: &EnergyBudget) -> Result<bool> {
    energy_budget_check_with(b, IDENTITY_REL_TOL)
}

pub fn energy_budget_check_with(b: &EnergyBudget, rel_tol: f64) -> Result<bool> {
    for (name, value) in b.fields() {
        ensure_finite(name, value)?;
    }
    Ok(
        identity_holds(b.e_total, &[b.e_particle, b.e_field], rel_tol)
            && identity_holds(b.e_particle, &[b.k_particle, b.v_particle], rel_tol)
            && identity_holds(b.e_field, &[b.k_field, b.v_field], rel_tol)
            && b.k_particle >= 0.0
            && b.k_field >= 0.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionClass {
    /// The de Broglie momentum is real and the field carries energy.
    Allowed,
    /// `E_F + K_P < 0`: the de Broglie momentum would be imaginary.
    Forbidden,
    /// `|E_F|` below the configured threshold.
    ClassicalLimit,
}

pub fn classify_region(e_field: f64, k_particle: f64, eps: f64) -> Result<RegionClass> {
    ensure_finite("e_field", e_field)?;
    ensure_finite("k_particle", k_particle)?;
    ensure_finite("eps", eps)?;
    if eps <= 0.0 {
        return Err(Error::Validation(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(if e_field + k_particle < 0.0 {
        RegionClass::Forbidden
    } else if e_field.abs() <= eps {
        RegionClass::ClassicalLimit
    } else {
        RegionClass::Allowed
    })
}

/// Threshold for [`RegionClass::ClassicalLimit`] scaled to the particle energy.
pub fn classical_limit_eps(e_particle: f64) -> f64 {
    CLASSICAL_LIMIT_FRACTION * e_particle.abs()
}

/// Field force for a conservative particle force:
/// `f_F = m v_P² d|χ'|/dx + f_P |χ'|`.
pub fn field_force_1d(m: f64, v_p: f64, chi_prime: f64, d_abs_chi_prime_dx: f64, f_p: f64) -> f64 {
    m * v_p * v_p * d_abs_chi_prime_dx + f_p * chi_prime.abs()
}

/// Oscillator-like form of the field force for a real stationary field with
/// `χ'' = -k²χ`: `-m ω̄² χ + f_P χ'`, `ω̄ = v_P k`.
///
/// Equals [`field_force_1d`] wherever `χ' > 0` (and its negative where `χ' < 0`).
pub fn field_force_oscillator_form(
    m: f64,
    v_p: f64,
    k: f64,
    chi: f64,
    chi_prime: f64,
    f_p: f64,
) -> f64 {
    let omega_bar = v_p * k;
    -m * omega_bar * omega_bar * chi + f_p * chi_prime
}

/// `K_PF = g² K_P (1 + χ'²)`.
pub fn kinetic_pf(k_particle: f64, chi_prime_sq: f64, g: f64) -> f64 {
    g * g * k_particle * (1.0 + chi_prime_sq)
}

/// Stationary PF force
/// `g [f_P (1+χ'²)^{1/2} + m v² χ' χ'' / (1+χ'²)^{1/2}]`.
pub fn pf_force_stationary(
    g: f64,
    f_p: f64,
    chi_prime: f64,
    chi_second: f64,
    m: f64,
    v: f64,
) -> f64 {
    let stretch = (1.0 + chi_prime * chi_prime).sqrt();
    g * (f_p * stretch + m * v * v * chi_prime * chi_second / stretch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn budget_examples() {
        let ok = EnergyBudget {
            e_total: 2.0,
            e_particle: 1.5,
            e_field: 0.5,
            k_particle: 1.0,
            v_particle: 0.5,
            k_field: 0.75,
            v_field: -0.25,
        };
        assert!(energy_budget_check(&ok).unwrap());

        let bad = EnergyBudget {
            e_total: 1.0,
            e_particle: 1.0,
            e_field: 0.1,
            ..ok
        };
        assert!(!energy_budget_check(&bad).unwrap());

        let negative_kinetic = EnergyBudget::from_splits(-1.0, 2.0, 0.0, 0.0);
        assert!(!energy_budget_check(&negative_kinetic).unwrap());

        let nan = EnergyBudget {
            e_field: f64::NAN,
            ..ok
        };
        assert!(matches!(
            energy_budget_check(&nan),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn negative_field_energy_is_allowed() {
        let b = EnergyBudget::from_splits(1.0, 0.0, 0.2, -0.7);
        assert!(b.e_field < 0.0);
        assert!(energy_budget_check(&b).unwrap());
    }

    #[test]
    fn region_examples() {
        assert_eq!(
            classify_region(-2.0, 1.0, 1e-6).unwrap(),
            RegionClass::Forbidden
        );
        assert_eq!(
            classify_region(0.0, 1.0, 1e-30).unwrap(),
            RegionClass::ClassicalLimit
        );
        assert_eq!(
            classify_region(-1.0, 3.0, 1e-6).unwrap(),
            RegionClass::Allowed
        );
        assert!(classify_region(1.0, 1.0, 0.0).is_err());
        assert!(classify_region(f64::INFINITY, 1.0, 1.0).is_err());
        assert_eq!(classical_limit_eps(-4.0), 4e-6);
    }

    #[test]
    fn field_force_examples() {
        assert_eq!(field_force_1d(2.0, 3.0, 0.4, 0.0, 0.0), 0.0);
        // Free particle: only the kinetic term survives.
        assert_eq!(field_force_1d(2.0, 3.0, 0.4, 0.5, 0.0), 2.0 * 9.0 * 0.5);
    }

    #[test]
    fn kinetic_pf_examples() {
        assert_eq!(kinetic_pf(1.0, 0.0, 1.0), 1.0);
        assert_eq!(kinetic_pf(0.0, 7.3, 1.0), 0.0);
        assert_eq!(kinetic_pf(2.0, 0.5, 1.0), 3.0);
    }

    #[test]
    fn pf_force_examples() {
        assert_eq!(pf_force_stationary(0.8, 3.0, 0.0, 5.0, 1.0, 2.0), 0.8 * 3.0);
        assert_eq!(pf_force_stationary(0.8, 0.0, 0.3, 0.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn field_force_matches_oscillator_form_for_real_stationary_field() {
        let (m, v_p, k, amp, f_p) = (1.3, 0.7, 2.1, 0.4, -0.25);
        for i in 0..200 {
            let x = 0.013 + i as f64 * 0.031;
            let chi = amp * (k * x).sin();
            let chi_p = amp * k * (k * x).cos();
            let chi_pp = -k * k * chi;
            let d_abs = chi_p.signum() * chi_pp;
            let direct = field_force_1d(m, v_p, chi_p, d_abs, f_p);
            let osc = field_force_oscillator_form(m, v_p, k, chi, chi_p, f_p);
            let expected = chi_p.signum() * osc;
            assert!(
                (direct - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
                "x = {x}"
            );
        }
    }

    proptest! {
        #[test]
        fn kinetic_pf_is_monotone(k in 0.0f64..10.0, dk in 0.0f64..5.0, c in 0.0f64..10.0, dc in 0.0f64..5.0, g in 0.1f64..3.0) {
            prop_assert!(kinetic_pf(k, c + dc, g) >= kinetic_pf(k, c, g));
            prop_assert!(kinetic_pf(k + dk, c, g) >= kinetic_pf(k, c, g));
        }

        #[test]
        fn classify_region_is_total(e in -1e3f64..1e3, k in 0.0f64..1e3, eps in 1e-9f64..10.0) {
            let tag = classify_region(e, k, eps).unwrap();
            let forbidden = e + k < 0.0;
            let classical = !forbidden && e.abs() <= eps;
            let expected = if forbidden { RegionClass::Forbidden } else if classical { RegionClass::ClassicalLimit } else { RegionClass::Allowed };
            prop_assert_eq!(tag, expected);
        }

        #[test]
        fn budgets_from_splits_always_balance(kp in 0.0f64..1e3, vp in -1e3f64..1e3, kf in 0.0f64..1e3, vf in -1e3f64..1e3) {
            prop_assert!(energy_budget_check(&EnergyBudget::from_splits(kp, vp, kf, vf)).unwrap());
        }
    }
}
