//! Brute-force verification engines.
//!
//! Trajectories come from integrating the unexpanded integrand
//! `(1 + χ'²)^{1/2}` numerically. Derivatives use central differences and
//! roots use bracketing.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use crate::boxmode::{BoxMode, SeriesVariant};
use crate::error::{ensure_finite, Error, Result};
use crate::oscillator::{OscMode, OscSystem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 50,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) {
            return Err(Error::Validation(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if max_depth < 10 {
            return Err(Error::Validation(format!(
                "max_depth must be at least 10, got {max_depth}"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_depth,
        })
    }
}

// Kronrod 15-point abscissae/weights with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod estimate, |K − G|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Adaptive<'a, F> {
    f: &'a F,
    tol_density: f64,
    max_depth: u32,
    converged: bool,
    err_sum: f64,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn refine(&mut self, a: f64, b: f64, estimate: f64, err: f64, depth: u32) -> f64 {
        if err <= self.tol_density * (b - a) {
            self.err_sum += err;
            return estimate;
        }
        if depth >= self.max_depth {
            self.converged = false;
            self.err_sum += err;
            return estimate;
        }
        let mid = 0.5 * (a + b);
        let (left, left_err) = gk15(self.f, a, mid);
        let (right, right_err) = gk15(self.f, mid, b);
        // Left before right keeps the summation order fixed.
        let l = self.refine(a, mid, left, left_err, depth + 1);
        let r = self.refine(mid, b, right, right_err, depth + 1);
        l + r
    }
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[lo, hi]`.
///
/// A panel is accepted once its error share drops below
/// `max(abs_tol, rel_tol·|I₀|)·width/(hi−lo)`, where `I₀` is the first
/// whole-interval estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    ensure_finite("lo", lo)?;
    ensure_finite("hi", hi)?;
    if lo > hi {
        return Err(Error::Validation(format!(
            "integration bounds reversed: {lo} > {hi}"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let (whole, err) = gk15(&f, lo, hi);
    let target = spec.abs_tol.max(spec.rel_tol * whole.abs());
    let mut state = Adaptive {
        f: &f,
        tol_density: target / (hi - lo),
        max_depth: spec.max_depth,
        converged: true,
        err_sum: 0.0,
    };
    let value = state.refine(lo, hi, whole, err, 0);
    if !value.is_finite() {
        return Err(Error::Validation(
            "integrand produced a non-finite value".into(),
        ));
    }
    if state.converged {
        Ok(value)
    } else {
        Err(Error::Convergence {
            estimate: value,
            error: state.err_sum,
        })
    }
}

/// Composite Gauss–Legendre rule with a fixed number of equal panels.
#[derive(Debug, Clone)]
pub struct CompositeGaussLegendre {
    rule: GaussLegendre,
    panels: usize,
}

impl CompositeGaussLegendre {
    pub fn new(degree: usize, panels: usize) -> Result<Self> {
        let degree = NonZeroUsize::new(degree)
            .ok_or_else(|| Error::Validation("Gauss-Legendre degree must be positive".into()))?;
        if panels == 0 {
            return Err(Error::Validation("panel count must be positive".into()));
        }
        Ok(Self {
            rule: GaussLegendre::new(degree),
            panels,
        })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let width = (hi - lo) / self.panels as f64;
        (0..self.panels)
            .map(|i| {
                let a = lo + i as f64 * width;
                let b = if i + 1 == self.panels { hi } else { a + width };
                self.rule.integrate(a, b, &f)
            })
            .sum()
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, lo: f64, hi: f64, f: F) -> Complex64 {
        let re = self.integrate(lo, hi, |x| f(x).re);
        let im = self.integrate(lo, hi, |x| f(x).im);
        Complex64::new(re, im)
    }
}

impl Default for CompositeGaussLegendre {
    /// 20-point rule on 16 panels: exact to ~1e-14 for the smooth
    /// trigonometric integrands of low-lying box modes.
    fn default() -> Self {
        Self::new(20, 16).expect("static rule parameters are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// Central difference with O(h²) truncation error.
pub fn finite_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, order: DiffOrder) -> f64 {
    match order {
        DiffOrder::First => (f(x + h) - f(x - h)) / (2.0 * h),
        DiffOrder::Second => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
    }
}

const ROOT_MAX_ITER: usize = 400;

/// Bracketing root finder: false-position steps, falling back to bisection
/// whenever a step fails to halve the bracket.
pub fn solve_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Validation(
            "function is not finite at the bracket ends".into(),
        ));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let mut bisect = false;
    for _ in 0..ROOT_MAX_ITER {
        let width = b - a;
        if width <= tol {
            break;
        }
        let mid = a + 0.5 * width;
        let mut c = if bisect {
            mid
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(c > a && c < b) {
            c = mid;
        }
        let fc = f(c);
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
        bisect = b - a > 0.5 * width;
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Integrand used for the exact box trajectory: `(1 + χ'²)^{1/2} − 1`.
fn box_excess(mode: &BoxMode, x: f64) -> f64 {
    let s = mode.chi_prime(x);
    let s2 = s * s;
    // (1+s²)^{1/2} − 1 without cancellation.
    s2 / ((1.0 + s2).sqrt() + 1.0)
}

/// `g ∫₀ˣ (1 + χ'²)^{1/2} dx` by adaptive quadrature, with `g` matching the
/// chosen series variant (`g_{n,PF}` for the closed form, `1/b⁽¹⁾` for the
/// truncated-series form).
pub fn exact_box_trajectory(
    mode: &BoxMode,
    x: f64,
    variant: SeriesVariant,
    spec: &QuadratureSpec,
) -> Result<f64> {
    mode.check_inside(x)?;
    let g = mode.gauge(variant)?;
    // Integrate over the phase k_n x so tolerances are dimensionless.
    let k = mode.k_n;
    let excess = integrate(|phase| box_excess(mode, phase / k), 0.0, k * x, spec)? / k;
    Ok(g * (x + excess))
}

/// `∫₀^r̄ (1 + χ̂'²/4π)^{1/2} dr̄` by adaptive quadrature (odd in `r̄`).
pub fn exact_osc_trajectory(
    mode: &OscMode,
    sys: &OscSystem,
    r_bar: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    ensure_finite("r_bar", r_bar)?;
    let excess = |r: f64| {
        let s2 = mode.field_slope(sys, r).powi(2) / (4.0 * std::f64::consts::PI);
        s2 / ((1.0 + s2).sqrt() + 1.0)
    };
    let upper = r_bar.abs();
    // Integrate in the dimensionless coordinate u = √α r̄ for well-scaled panels.
    let scale = sys.alpha.sqrt();
    let integral = integrate(|u| excess(u / scale), 0.0, upper * scale, spec)? / scale;
    Ok(r_bar.signum() * (upper + integral))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TolerancePolicy {
    Absolute,
    Relative,
    /// Pass if either deviation is within tolerance.
    Either,
}

/// One series-vs-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub label: String,
    pub series_value: f64,
    pub oracle_value: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub policy: TolerancePolicy,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn new(
        label: impl Into<String>,
        series_value: f64,
        oracle_value: f64,
        tolerance: f64,
        policy: TolerancePolicy,
    ) -> Self {
        let abs_dev = (series_value - oracle_value).abs();
        let rel_dev = if oracle_value != 0.0 {
            abs_dev / oracle_value.abs()
        } else if abs_dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = match policy {
            TolerancePolicy::Absolute => abs_dev <= tolerance,
            TolerancePolicy::Relative => rel_dev <= tolerance,
            TolerancePolicy::Either => abs_dev <= tolerance || rel_dev <= tolerance,
        };
        Self {
            label: label.into(),
            series_value,
            oracle_value,
            abs_dev,
            rel_dev,
            tolerance,
            policy,
            pass,
        }
    }

    pub fn absolute(label: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(
            label,
            value,
            reference,
            tolerance,
            TolerancePolicy::Absolute,
        )
    }

    pub fn relative(label: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(
            label,
            value,
            reference,
            tolerance,
            TolerancePolicy::Relative,
        )
    }

    /// Pass/fail on a boolean condition, recorded as 1.0 vs expected 1.0.
    pub fn condition(label: impl Into<String>, holds: bool) -> Self {
        Self::absolute(label, if holds { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    /// `value ≤ bound`, recorded as an absolute deviation from zero.
    pub fn upper_bound(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::absolute(label, value, 0.0, bound)
    }
}
