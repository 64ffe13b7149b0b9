//! Probability flux and momentum expectation values for superpositions of
//! box eigenmodes.
//!
//! `Ψ(x, t) = Σ c_j ψ_j(x) e^{−iE_j t/ħ}` with `ψ_j = (2/a)^{1/2} sin(k_j x)`.
//! Every derivative of `Ψ` is analytic; only [`continuity_residual`] uses
//! finite differences, as an independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::boxmode::{linear_level, wavenumber};
use crate::constants::SI;
use crate::error::{ensure_finite, Error, Result};
use crate::oracle::CompositeGaussLegendre;

/// Tolerance on `Σ|c_j|² = 1`.
pub const NORM_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A complex field on an interval with analytic derivatives.
pub trait WaveField {
    fn value(&self, x: f64, t: f64) -> Complex64;
    fn d_x(&self, x: f64, t: f64) -> Complex64;
    fn d_xx(&self, x: f64, t: f64) -> Complex64;
    fn d_t(&self, x: f64, t: f64) -> Complex64;
    fn mass(&self) -> f64;
    fn domain(&self) -> (f64, f64);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub n: u32,
    pub coeff: Complex64,
    /// Phase energy `E_j`, J.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub mass: f64,
    /// Box width, m.
    pub width: f64,
    pub terms: Vec<Term>,
}

impl Superposition {
    /// Normalized superposition of box modes with their linear energies.
    pub fn new(mass: f64, width: f64, modes: &[(u32, Complex64)]) -> Result<Self> {
        let terms = modes
            .iter()
            .map(|&(n, coeff)| Term {
                n,
                coeff,
                energy: linear_level(mass, width, n),
            })
            .collect();
        let s = Self::raw(mass, width, terms)?;
        let norm = s.coefficient_norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("Σ|c_j|² = {norm}, expected 1")));
        }
        Ok(s)
    }

    /// Equal-weight superposition `(ψ_{n1} + ψ_{n2})/√2` of an electron.
    pub fn equal_pair(width: f64, n1: u32, n2: u32) -> Result<Self> {
        let c = Complex64::new(0.5f64.sqrt(), 0.0);
        Self::new(SI.electron_mass, width, &[(n1, c), (n2, c)])
    }

    /// Unchecked construction: coefficients need not be normalized and
    /// energies are taken as given.
    pub fn raw(mass: f64, width: f64, terms: Vec<Term>) -> Result<Self> {
        ensure_finite("mass", mass)?;
        ensure_finite("width", width)?;
        if mass <= 0.0 || width <= 0.0 {
            return Err(Error::Validation("mass and width must be positive".into()));
        }
        if terms.is_empty() || terms.iter().any(|t| t.n == 0) {
            return Err(Error::Validation(
                "need at least one mode, all with n ≥ 1".into(),
            ));
        }
        Ok(Self { mass, width, terms })
    }

    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm_sqr()).sum()
    }

    /// Beat period `2πħ/|E_j − E_i|` of the first two modes.
    pub fn beat_period(&self) -> Option<f64> {
        let (a, b) = (self.terms.first()?, self.terms.get(1)?);
        let de = (b.energy - a.energy).abs();
        (de > 0.0).then(|| 2.0 * PI * SI.hbar / de)
    }

    fn sum<F: Fn(f64, f64) -> f64>(
        &self,
        x: f64,
        t: f64,
        shape: F,
        factor: impl Fn(&Term) -> Complex64,
    ) -> Complex64 {
        let amp = (2.0 / self.width).sqrt();
        self.terms
            .iter()
            .map(|term| {
                let k = wavenumber(term.n, self.width);
                let phase = Complex64::from_polar(1.0, -term.energy * t / SI.hbar);
                term.coeff * phase * factor(term) * amp * shape(k, x)
            })
            .sum()
    }
}

impl WaveField for Superposition {
    fn value(&self, x: f64, t: f64) -> Complex64 {
        self.sum(x, t, |k, x| (k * x).sin(), |_| Complex64::new(1.0, 0.0))
    }

    fn d_x(&self, x: f64, t: f64) -> Complex64 {
        self.sum(x, t, |k, x| k * (k * x).cos(), |_| Complex64::new(1.0, 0.0))
    }

    fn d_xx(&self, x: f64, t: f64) -> Complex64 {
        self.sum(
            x,
            t,
            |k, x| -k * k * (k * x).sin(),
            |_| Complex64::new(1.0, 0.0),
        )
    }

    fn d_t(&self, x: f64, t: f64) -> Complex64 {
        self.sum(
            x,
            t,
            |k, x| (k * x).sin(),
            |term| -I * term.energy / SI.hbar,
        )
    }

    fn mass(&self) -> f64 {
        self.mass
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.width)
    }
}

/// Free plane wave `A e^{i(kx − ωt)}` with `ħω = ħ²k²/2m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    pub mass: f64,
    pub amplitude: f64,
    pub extent: f64,
}

impl PlaneWave {
    fn omega(&self) -> f64 {
        SI.hbar * self.k * self.k / (2.0 * self.mass)
    }
}

impl WaveField for PlaneWave {
    fn value(&self, x: f64, t: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.k * x - self.omega() * t)
    }

    fn d_x(&self, x: f64, t: f64) -> Complex64 {
        I * self.k * self.value(x, t)
    }

    fn d_xx(&self, x: f64, t: f64) -> Complex64 {
        -self.k * self.k * self.value(x, t)
    }

    fn d_t(&self, x: f64, t: f64) -> Complex64 {
        -I * self.omega() * self.value(x, t)
    }

    fn mass(&self) -> f64 {
        self.mass
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.extent)
    }
}

/// `ρ = |Ψ|²`.
pub fn density<W: WaveField + ?Sized>(field: &W, x: f64, t: f64) -> f64 {
    field.value(x, t).norm_sqr()
}

/// Probability flux `(ħ/m) Im(Ψ*∂ₓΨ)`, which equals `(−iħ/2m)(Ψ*Ψ' − ΨΨ*')`.
pub fn flux<W: WaveField + ?Sized>(field: &W, x: f64, t: f64) -> f64 {
    SI.hbar / field.mass() * (field.value(x, t).conj() * field.d_x(x, t)).im
}

/// Central-difference estimate of `∂ρ/∂t + ∂j/∂x`.
pub fn continuity_residual<W: WaveField + ?Sized>(
    field: &W,
    x: f64,
    t: f64,
    h_x: f64,
    h_t: f64,
) -> Result<f64> {
    ensure_finite("x", x)?;
    if !(h_x > 0.0 && h_t > 0.0) {
        return Err(Error::Validation("grid steps must be positive".into()));
    }
    let (lo, hi) = field.domain();
    if x - h_x < lo || x + h_x > hi {
        return Err(Error::Domain(format!(
            "x = {x:e} is not interior for step {h_x:e}"
        )));
    }
    let drho_dt = (density(field, x, t + h_t) - density(field, x, t - h_t)) / (2.0 * h_t);
    let dj_dx = (flux(field, x + h_x, t) - flux(field, x - h_x, t)) / (2.0 * h_x);
    Ok(drho_dt + dj_dx)
}

/// Analytic `∂ρ/∂t = 2 Re(Ψ* ∂ₜΨ)`.
pub fn density_rate<W: WaveField + ?Sized>(field: &W, x: f64, t: f64) -> f64 {
    2.0 * (field.value(x, t).conj() * field.d_t(x, t)).re
}

/// `∫ρ dx` over the field's domain.
pub fn total_probability<W: WaveField + ?Sized>(
    field: &W,
    t: f64,
    rule: &CompositeGaussLegendre,
) -> f64 {
    let (lo, hi) = field.domain();
    rule.integrate(lo, hi, |x| density(field, x, t))
}

/// `⟨p⟩ = −iħ ∫Ψ*∂ₓΨ dx`. The imaginary part is kept for Hermiticity checks.
pub fn expectation_p<W: WaveField + ?Sized>(
    field: &W,
    t: f64,
    rule: &CompositeGaussLegendre,
) -> Complex64 {
    let (lo, hi) = field.domain();
    -I * SI.hbar * rule.integrate_complex(lo, hi, |x| field.value(x, t).conj() * field.d_x(x, t))
}

/// `⟨p²⟩ = −ħ² ∫Ψ*∂ₓ²Ψ dx`.
pub fn expectation_p2<W: WaveField + ?Sized>(
    field: &W,
    t: f64,
    rule: &CompositeGaussLegendre,
) -> Complex64 {
    let (lo, hi) = field.domain();
    -SI.hbar
        * SI.hbar
        * rule.integrate_complex(lo, hi, |x| field.value(x, t).conj() * field.d_xx(x, t))
}

/// `∫ j dx`.
pub fn integrated_flux<W: WaveField + ?Sized>(
    field: &W,
    t: f64,
    rule: &CompositeGaussLegendre,
) -> f64 {
    let (lo, hi) = field.domain();
    rule.integrate(lo, hi, |x| flux(field, x, t))
}

/// `iħ∂ₜΨ + (ħ²/2m)∂ₓ²Ψ` for a force-free interior.
pub fn tdse_residual<W: WaveField + ?Sized>(field: &W, x: f64, t: f64) -> Complex64 {
    I * SI.hbar * field.d_t(x, t) + SI.hbar * SI.hbar / (2.0 * field.mass()) * field.d_xx(x, t)
}

/// Mean of `⟨p⟩` over one period sampled at `samples` uniform phases.
pub fn time_average_p<W: WaveField + ?Sized>(
    field: &W,
    period: f64,
    samples: usize,
    rule: &CompositeGaussLegendre,
) -> f64 {
    let dt = period / samples as f64;
    (0..samples)
        .map(|i| expectation_p(field, i as f64 * dt, rule).re)
        .sum::<f64>()
        / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linspace;
    use proptest::prelude::*;

    const A: f64 = 2e-9;

    fn pair() -> Superposition {
        Superposition::equal_pair(A, 1, 2).unwrap()
    }

    fn single(n: u32) -> Superposition {
        Superposition::new(SI.electron_mass, A, &[(n, Complex64::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Superposition::new(SI.electron_mass, A, &[(1, Complex64::new(0.9, 0.0))]).is_err());
        assert!(Superposition::new(SI.electron_mass, A, &[(0, Complex64::new(1.0, 0.0))]).is_err());
        assert!(Superposition::raw(SI.electron_mass, A, vec![]).is_err());
        assert!(pair().beat_period().unwrap() > 0.0);
        assert!(single(1).beat_period().is_none());
    }

    #[test]
    fn single_mode_has_no_flux() {
        for n in 1..=4 {
            let s = single(n);
            let scale = SI.hbar / s.mass * 2.0 / A * n as f64 * PI / A;
            for x in linspace(0.0, A, 21) {
                for t in [0.0, 1e-16, 3.3e-15] {
                    assert!(flux(&s, x, t).abs() <= 1e-14 * scale);
                }
            }
        }
    }

    #[test]
    fn flux_vanishes_at_walls() {
        let s = pair();
        let scale = SI.hbar / s.mass * 2.0 / A * PI / A;
        for t in linspace(0.0, 1e-14, 11) {
            assert!(flux(&s, 0.0, t).abs() <= 1e-14 * scale);
            assert!(flux(&s, A, t).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn plane_wave_flux() {
        let w = PlaneWave {
            k: 3e9,
            mass: SI.electron_mass,
            amplitude: 0.7,
            extent: 1e-9,
        };
        let j = flux(&w, 0.3e-9, 1e-15);
        let expected = SI.hbar * w.k / w.mass * 0.49;
        assert!((j - expected).abs() <= 1e-12 * expected);
        assert!(
            tdse_residual(&w, 0.2e-9, 1e-16).norm() <= 1e-12 * SI.hbar * w.omega() * w.amplitude
        );
    }

    #[test]
    fn integrated_flux_is_mean_momentum() {
        let s = pair();
        let rule = CompositeGaussLegendre::default();
        for t in [0.0, 1.3e-16, 7.7e-16] {
            let lhs = integrated_flux(&s, t, &rule);
            let rhs = expectation_p(&s, t, &rule).re / s.mass;
            let scale = SI.hbar / s.mass * PI / A;
            assert!((lhs - rhs).abs() <= 1e-10 * scale, "t = {t}");
        }
    }

    #[test]
    fn continuity_holds_to_second_order() {
        let s = pair();
        let t = 0.37 * s.beat_period().unwrap();
        let x = 0.41 * A;
        let period = s.beat_period().unwrap();
        let r1 = continuity_residual(&s, x, t, A / 1e3, period / 1e3).unwrap();
        let r2 = continuity_residual(&s, x, t, A / 2e3, period / 2e3).unwrap();
        let ratio = r1.abs() / r2.abs();
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
        assert!(continuity_residual(&s, 0.0, t, A / 1e3, 1e-18).is_err());
        assert!(continuity_residual(&s, x, t, 0.0, 1e-18).is_err());
    }

    #[test]
    fn stationary_mode_continuity() {
        let s = single(3);
        let r = continuity_residual(&s, 0.3 * A, 1e-15, A / 1e4, 1e-19).unwrap();
        let scale = density(&s, 0.3 * A, 0.0) * linear_level(s.mass, A, 3) / SI.hbar;
        assert!(r.abs() <= 1e-9 * scale);
    }

    #[test]
    fn single_mode_momenta() {
        let rule = CompositeGaussLegendre::default();
        for n in 1..=5u32 {
            let s = single(n);
            let p = expectation_p(&s, 2e-16, &rule);
            let p_scale = SI.hbar * PI / A;
            assert!(p.norm() <= 1e-12 * p_scale);
            let p2 = expectation_p2(&s, 0.0, &rule);
            let expected = (n as f64 * PI * SI.hbar / A).powi(2);
            assert!((p2.re / expected - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn norm_is_conserved() {
        let s = pair();
        let rule = CompositeGaussLegendre::default();
        for t in linspace(0.0, 2.0 * s.beat_period().unwrap(), 9) {
            assert!((total_probability(&s, t, &rule) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_momentum_averages_to_zero() {
        let s = pair();
        let rule = CompositeGaussLegendre::default();
        let period = s.beat_period().unwrap();
        let peak = linspace(0.0, period, 64)
            .into_iter()
            .map(|t| expectation_p(&s, t, &rule).re.abs())
            .fold(0.0, f64::max);
        assert!(peak > 0.0);
        assert!(time_average_p(&s, period, 64, &rule).abs() < 1e-8 * peak);
    }

    #[test]
    fn tdse_residuals() {
        let s = pair();
        let scale = linear_level(s.mass, A, 2) * (2.0 / A).sqrt();
        for x in linspace(0.05 * A, 0.95 * A, 7) {
            assert!(tdse_residual(&s, x, 3e-16).norm() <= 1e-12 * scale);
        }
        let unnormalized = Superposition::raw(
            s.mass,
            A,
            s.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * 3.0,
                    ..*t
                })
                .collect(),
        )
        .unwrap();
        assert!(tdse_residual(&unnormalized, 0.3 * A, 1e-16).norm() <= 3e-12 * scale);

        let delta = 1e-3 * s.terms[0].energy;
        let mut wrong = s.terms.clone();
        wrong[0].energy += delta;
        let w = Superposition::raw(s.mass, A, wrong).unwrap();
        let x = 0.3 * A;
        let r = tdse_residual(&w, x, 0.0).norm();
        let expected = delta * 0.5f64.sqrt() * (2.0 / A).sqrt() * (PI * x / A).sin();
        assert!((r / expected - 1.0).abs() < 1e-6, "{r} vs {expected}");
    }

    proptest! {
        #[test]
        fn variance_nonnegative_and_p_real(c1 in 0.05f64..1.0, phase in 0.0f64..std::f64::consts::TAU, t in 0.0f64..1e-14, n2 in 2u32..6) {
            let c2 = (1.0 - c1 * c1).sqrt();
            let s = Superposition::new(SI.electron_mass, A, &[(1, Complex64::new(c1, 0.0)), (n2, Complex64::from_polar(c2, phase))]).unwrap();
            let rule = CompositeGaussLegendre::default();
            let p = expectation_p(&s, t, &rule);
            let p2 = expectation_p2(&s, t, &rule);
            prop_assert!(p.im.abs() <= 1e-12 * (p.re.abs() + SI.hbar * PI / A));
            prop_assert!(p2.re >= p.re * p.re * (1.0 - 1e-12));
        }
    }
}
