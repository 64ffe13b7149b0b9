//! Box field with a weak cubic self-interaction.
//!
//! In `u = kx` the field obeys `χ_uu + χ − (ε/k²)χ³ = 0`. The first-order
//! scaled-parameters solution is
//!
//! ```text
//! χ̃ = Ã cos(ωkx + B) − (εÃ³/32k²) cos(3ωkx + 3B),   ω = 1 − 3εÃ²/8k²
//! ```
//!
//! and `χ̃(0) = 0` forces `B = ±π/2`. Requiring `χ̃(a) = 0` quantizes `k`,
//! which shifts the box levels to
//! `E_n = (n²h²/8ma²)[½ + (¼ + 3εA_n²a²/8n²π²)^{1/2}]²`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::boxmode::{linear_level, wavenumber, BoxMode, BoxSystem};
use crate::constants::SI;
use crate::error::{ensure_finite, Error, Result};

/// Largest admissible `|εÃ²/k²|`.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// `B = +π/2`.
    Plus,
    /// `B = −π/2`, the sine branch `Ã sin(ωkx) + …`.
    Minus,
}

impl Phase {
    pub fn radians(self) -> f64 {
        match self {
            Phase::Plus => FRAC_PI_2,
            Phase::Minus => -FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlinearParams {
    /// Coupling `ε'` of the anharmonic force, as supplied.
    pub eps_prime: f64,
    /// `ε = ε'/(m v_P²)`, 1/m².
    pub eps: f64,
    /// Amplitude `Ã`, m.
    pub a_tilde: f64,
}

impl NonlinearParams {
    /// Parameters from the raw coupling `ε'` and the particle's `m v_P²`.
    pub fn new(eps_prime: f64, m: f64, v_p: f64, a_tilde: f64) -> Result<Self> {
        for (name, v) in [
            ("eps_prime", eps_prime),
            ("m", m),
            ("v_p", v_p),
            ("a_tilde", a_tilde),
        ] {
            ensure_finite(name, v)?;
        }
        if m <= 0.0 || v_p == 0.0 {
            return Err(Error::Validation("need m > 0 and v_p ≠ 0".into()));
        }
        Ok(Self {
            eps_prime,
            eps: eps_prime / (m * v_p * v_p),
            a_tilde,
        })
    }

    /// Parameters given `ε` directly; `ε'` is left at zero.
    pub fn from_eps(eps: f64, a_tilde: f64) -> Result<Self> {
        ensure_finite("eps", eps)?;
        ensure_finite("a_tilde", a_tilde)?;
        Ok(Self {
            eps_prime: 0.0,
            eps,
            a_tilde,
        })
    }

    /// `Ã_n ≃ A_n` taken from the linear box mode.
    pub fn for_box_mode(eps: f64, sys: &BoxSystem, n: u32) -> Result<Self> {
        let mode = BoxMode::new(sys, n)?;
        let mut p = Self::from_eps(eps, mode.a_n)?;
        p.eps_prime = eps * sys.m * sys.v_particle().powi(2);
        Ok(p)
    }

    /// `εÃ²/k²`.
    pub fn strength(&self, k: f64) -> f64 {
        self.eps * self.a_tilde * self.a_tilde / (k * k)
    }

    pub fn check_validity(&self, k: f64) -> Result<()> {
        ensure_finite("k", k)?;
        let s = self.strength(k);
        if s.is_nan() || s.abs() > VALIDITY_THRESHOLD {
            return Err(Error::Validation(format!(
                "|εÃ²/k²| = {s:e} exceeds the validity threshold {VALIDITY_THRESHOLD}"
            )));
        }
        Ok(())
    }

    /// Frequency factor `ω = 1 − 3εÃ²/8k²`.
    pub fn frequency_factor(&self, k: f64) -> f64 {
        1.0 - 3.0 * self.strength(k) / 8.0
    }
}

/// Third-harmonic amplitude relative to `Ã`: `εÃ²/(32k²)`.
pub fn cubic_term_negligibility(params: &NonlinearParams, k: f64) -> f64 {
    params.strength(k) / 32.0
}

/// Value and first two `x`-derivatives of the first-order solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuffingValue {
    pub chi: f64,
    pub chi_x: f64,
    pub chi_xx: f64,
}

pub fn duffing_eval(
    params: &NonlinearParams,
    k: f64,
    x: f64,
    phase: Phase,
) -> Result<DuffingValue> {
    params.check_validity(k)?;
    ensure_finite("x", x)?;
    let a = params.a_tilde;
    let w = params.frequency_factor(k) * k;
    let b = phase.radians();
    let c3 = a * cubic_term_negligibility(params, k);
    let (t1, t3) = (w * x + b, 3.0 * (w * x + b));
    Ok(DuffingValue {
        chi: a * t1.cos() - c3 * t3.cos(),
        chi_x: -a * w * t1.sin() + 3.0 * w * c3 * t3.sin(),
        chi_xx: -a * w * w * t1.cos() + 9.0 * w * w * c3 * t3.cos(),
    })
}

/// `χ̃(x)` from the scaled-parameters solution.
pub fn duffing_solution(params: &NonlinearParams, k: f64, x: f64, phase: Phase) -> Result<f64> {
    Ok(duffing_eval(params, k, x, phase)?.chi)
}

/// Residual `χ''/k² + χ − (ε/k²)χ³` of the scaled equation, using analytic
/// derivatives.
pub fn duffing_residual(params: &NonlinearParams, k: f64, x: f64, phase: Phase) -> Result<f64> {
    let v = duffing_eval(params, k, x, phase)?;
    Ok(v.chi_xx / (k * k) + v.chi - params.eps / (k * k) * v.chi.powi(3))
}

/// Radial residual `χ_rr + (2/r)χ_r + k²χ − εχ³` of the three-dimensional
/// form, for caller-supplied field values.
pub fn radial_residual(
    params: &NonlinearParams,
    k: f64,
    r: f64,
    chi: f64,
    chi_r: f64,
    chi_rr: f64,
) -> Result<f64> {
    ensure_finite("r", r)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(chi_rr + 2.0 * chi_r / r + k * k * chi - params.eps * chi.powi(3))
}

/// Quantized wave number `(nπ/2a)[1 + (1 + 3εÃ²a²/2n²π²)^{1/2}]`, the root of
/// `(1 − 3εÃ²/8k²) k a = nπ`.
pub fn quantized_k(params: &NonlinearParams, sys: &BoxSystem, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Validation("box quantum number must be ≥ 1".into()));
    }
    let npi = n as f64 * PI;
    let disc = 1.0 + 3.0 * params.eps * params.a_tilde.powi(2) * sys.a * sys.a / (2.0 * npi * npi);
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "negative discriminant {disc} in the quantization condition"
        )));
    }
    let k = npi / (2.0 * sys.a) * (1.0 + disc.sqrt());
    params.check_validity(k)?;
    Ok(k)
}

/// Quantization residual `(1 − 3εÃ²/8k²) k a − nπ`.
pub fn quantization_residual(params: &NonlinearParams, sys: &BoxSystem, n: u32, k: f64) -> f64 {
    params.frequency_factor(k) * k * sys.a - n as f64 * PI
}

/// Shifted box level; equals the linear level bit for bit at `ε = 0`.
pub fn energy_levels(params: &NonlinearParams, sys: &BoxSystem, n: u32) -> Result<f64> {
    quantized_k(params, sys, n)?;
    let npi = n as f64 * PI;
    let inner =
        0.25 + 3.0 * params.eps * params.a_tilde.powi(2) * sys.a * sys.a / (8.0 * npi * npi);
    let bracket = (0.5 + inner.sqrt()).powi(2);
    Ok(linear_level(sys.m, sys.a, n) * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlinearSpectrum {
    pub n: u32,
    pub k_n: f64,
    pub e_n: f64,
    pub phase_b: f64,
}

pub fn spectrum(
    params: &NonlinearParams,
    sys: &BoxSystem,
    n: u32,
    phase: Phase,
) -> Result<NonlinearSpectrum> {
    Ok(NonlinearSpectrum {
        n,
        k_n: quantized_k(params, sys, n)?,
        e_n: energy_levels(params, sys, n)?,
        phase_b: phase.radians(),
    })
}

/// `ħ²k²/2m`.
pub fn kinetic_level(m: f64, k: f64) -> f64 {
    SI.hbar * SI.hbar * k * k / (2.0 * m)
}

/// Linear wave number `nπ/a` of the same box.
pub fn linear_k(sys: &BoxSystem, n: u32) -> f64 {
    wavenumber(n, sys.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linspace;
    use crate::oracle::{finite_diff, solve_root, DiffOrder};
    use proptest::prelude::*;

    const A: f64 = 2e-9;

    fn sys() -> BoxSystem {
        BoxSystem::electron(A, 1, 1.5).unwrap()
    }

    fn params_at(strength: f64, n: u32) -> NonlinearParams {
        let s = BoxSystem::electron(A, n, 1.5).unwrap();
        let base = NonlinearParams::for_box_mode(0.0, &s, n).unwrap();
        let k = linear_k(&s, n);
        NonlinearParams::from_eps(strength * k * k / base.a_tilde.powi(2), base.a_tilde).unwrap()
    }

    #[test]
    fn linear_limit() {
        let p = params_at(0.0, 1);
        let k = linear_k(&sys(), 1);
        for x in linspace(0.0, A, 11) {
            let chi = duffing_solution(&p, k, x, Phase::Minus).unwrap();
            assert!((chi - p.a_tilde * (k * x).sin()).abs() <= 1e-15 * p.a_tilde);
        }
        assert!(duffing_solution(&p, k, 0.0, Phase::Plus).unwrap().abs() < 1e-16 * p.a_tilde);
        let q = params_at(0.05, 1);
        for phase in [Phase::Plus, Phase::Minus] {
            assert!(duffing_solution(&q, k, 0.0, phase).unwrap().abs() < 1e-15 * q.a_tilde);
        }
    }

    #[test]
    fn residual_is_second_order() {
        let k = linear_k(&sys(), 1);
        let xs = linspace(0.0, A, 41);
        let mut logs = Vec::new();
        for s in [1e-6, 1e-5, 1e-4, 1e-3] {
            let p = params_at(s, 1);
            let r = xs
                .iter()
                .map(|&x| duffing_residual(&p, k, x, Phase::Minus).unwrap().abs())
                .fold(0.0, f64::max);
            logs.push((s.log10(), (r / p.a_tilde).log10()));
        }
        let n = logs.len() as f64;
        let (sx, sy) = logs
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / n, sy / n);
        let num: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let slope = num / den;
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn analytic_second_derivative_matches_finite_differences() {
        let p = params_at(0.05, 2);
        let k = linear_k(&sys(), 2);
        let x = 0.37 * A;
        let exact = duffing_eval(&p, k, x, Phase::Minus).unwrap().chi_xx;
        let err = |h: f64| {
            (finite_diff(
                |t| duffing_solution(&p, k, t, Phase::Minus).unwrap(),
                x,
                h,
                DiffOrder::Second,
            ) - exact)
                .abs()
        };
        let ratio = err(A * 1e-3) / err(A * 5e-4);
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn quantization_examples() {
        let s = sys();
        assert_eq!(quantized_k(&params_at(0.0, 1), &s, 1).unwrap(), PI / A);
        let p = params_at(1e-3, 1);
        let k = quantized_k(&p, &s, 1).unwrap();
        assert!(quantization_residual(&p, &s, 1, k).abs() < 1e-12);
        let root = solve_root(
            |k| quantization_residual(&p, &s, 1, k),
            0.9 * PI / A,
            1.1 * PI / A,
            1e-6,
        )
        .unwrap();
        assert!((root - k).abs() <= 1e-12 * k);
        let neg = NonlinearParams::from_eps(-1e30, 1.0).unwrap();
        assert!(matches!(quantized_k(&neg, &s, 1), Err(Error::Domain(_))));
        assert!(quantized_k(&params_at(0.5, 1), &s, 1).is_err());
    }

    #[test]
    fn boundary_conditions_at_quantized_k() {
        let s = sys();
        for strength in [1e-4, 1e-3, 1e-2] {
            let p = params_at(strength, 1);
            let k = quantized_k(&p, &s, 1).unwrap();
            let end = duffing_solution(&p, k, A, Phase::Minus).unwrap();
            assert!(end.abs() <= 10.0 * strength * strength * p.a_tilde + 1e-14 * p.a_tilde);
        }
    }

    #[test]
    fn energy_examples() {
        let s = sys();
        for n in 1..=5 {
            let p = NonlinearParams::for_box_mode(0.0, &BoxSystem::electron(A, n, 1.3).unwrap(), n)
                .unwrap();
            let e = energy_levels(&p, &s, n).unwrap();
            assert_eq!(e, linear_level(s.m, A, n));
            assert_eq!(
                e,
                BoxMode::new(&BoxSystem::electron(A, n, 1.3).unwrap(), n)
                    .unwrap()
                    .e_n
            );
        }
        let p = params_at(1e-3, 1);
        let e = energy_levels(&p, &s, 1).unwrap();
        assert!(e > linear_level(s.m, A, 1));
        let k = quantized_k(&p, &s, 1).unwrap();
        assert!((kinetic_level(s.m, k) - e).abs() <= 1e-12 * e);
        let bigger = NonlinearParams {
            a_tilde: 1.2 * p.a_tilde,
            ..p
        };
        assert!(energy_levels(&bigger, &s, 1).unwrap() > e);
    }

    #[test]
    fn negligibility_examples() {
        let k = 3.0;
        assert_eq!(
            cubic_term_negligibility(&NonlinearParams::from_eps(0.0, 1.0).unwrap(), k),
            0.0
        );
        let p = NonlinearParams::from_eps(0.1 * k * k, 1.0).unwrap();
        assert!((cubic_term_negligibility(&p, k) - 3.125e-3).abs() < 1e-15);
    }

    #[test]
    fn densities_close_to_linear() {
        let s = sys();
        for strength in [1e-3, 1e-2, 0.1] {
            let p = params_at(strength, 1);
            let k = quantized_k(&p, &s, 1).unwrap();
            let r = cubic_term_negligibility(&p, k);
            let xs = linspace(0.0, A, 2001);
            let nl: Vec<f64> = xs
                .iter()
                .map(|&x| duffing_solution(&p, k, x, Phase::Minus).unwrap().powi(2))
                .collect();
            let lin: Vec<f64> = xs
                .iter()
                .map(|&x| (k * p.frequency_factor(k) * x).sin().powi(2))
                .collect();
            let peak = nl.iter().cloned().fold(0.0, f64::max);
            let dev = nl
                .iter()
                .zip(&lin)
                .map(|(a, b)| (a / peak - b).abs())
                .fold(0.0, f64::max);
            assert!(
                dev <= 2.0 * r + 10.0 * r * r,
                "strength {strength}: {dev} vs {r}"
            );
        }
    }

    #[test]
    fn radial_residual_linear_case() {
        let p = NonlinearParams::from_eps(0.0, 1.0).unwrap();
        let k = 2.0;
        for r in [0.3f64, 1.0, 2.2] {
            let chi = (k * r).sin() / r;
            let chi_r = k * (k * r).cos() / r - (k * r).sin() / (r * r);
            let chi_rr = -k * k * (k * r).sin() / r - 2.0 * k * (k * r).cos() / (r * r)
                + 2.0 * (k * r).sin() / r.powi(3);
            assert!(radial_residual(&p, k, r, chi, chi_r, chi_rr).unwrap().abs() < 1e-12);
        }
        assert!(radial_residual(&p, k, 0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_from_raw_coupling() {
        let p = NonlinearParams::new(2.0, 4.0, 0.5, 1e-10).unwrap();
        assert_eq!(p.eps, 2.0);
        assert!(NonlinearParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        let s = sys();
        let q = NonlinearParams::for_box_mode(3.0, &s, 1).unwrap();
        assert!((q.eps_prime / (s.m * s.v_particle().powi(2)) - 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn k_and_energy_increase_with_eps(a in 0.0f64..0.09, da in 1e-4f64..0.01) {
            let s = sys();
            let (p, q) = (params_at(a, 1), params_at(a + da * 0.5, 1));
            prop_assert!(quantized_k(&q, &s, 1).unwrap() > quantized_k(&p, &s, 1).unwrap());
            prop_assert!(energy_levels(&q, &s, 1).unwrap() > energy_levels(&p, &s, 1).unwrap());
        }
    }
}
