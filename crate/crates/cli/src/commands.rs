//! Subcommand implementations. Each one turns a [`RunConfig`] into tables.

use std::f64::consts::PI;

use pfield::boxmode::{BoxMode, BoxSystem, SeriesVariant};
use pfield::hydrogen::{self, HydrogenSystem, PState};
use pfield::nonlinear::{self, NonlinearParams, Phase};
use pfield::oracle::{exact_osc_trajectory, CompositeGaussLegendre, QuadratureSpec};
use pfield::oscillator::{self, OscMode, OscSystem, SeriesOrder};
use pfield::timedep::{self, Superposition};
use pfield::{linspace, SI};

use crate::config::{parse_modes, RunConfig};
use crate::error::CliError;
use crate::output::{join, Table};

pub const BOX_KEYS: &[&str] = &["a", "mass", "modes", "variant"];
pub const OSC_KEYS: &[&str] = &[
    "alpha",
    "mu",
    "n",
    "amplitude",
    "n_max",
    "cap_l",
    "r_eq",
    "quad_rel_tol",
    "quad_abs_tol",
];
pub const HYDROGEN_KEYS: &[&str] = &["z", "amplitude", "radius"];
pub const SPECTRUM_KEYS: &[&str] = &["a", "ratio", "strength", "levels", "phase"];
pub const FLUX_KEYS: &[&str] = &["a", "n1", "n2", "time", "step"];

const DEFAULT_WIDTH: &str = "2e-9";
const DEFAULT_MODES: &str = "1:1.5,2:1.45,3:1.40";

fn sci(v: f64) -> String {
    format!("{v:e}")
}

fn with_echo(table: &mut Table, cfg: &RunConfig) {
    table.meta("version", pfield::VERSION);
    for (k, v) in cfg.echo() {
        table.meta(format!("config.{k}"), v);
    }
}

fn parse_variant(text: &str) -> Result<SeriesVariant, CliError> {
    match text {
        "second" => Ok(SeriesVariant::SecondOrder),
        "eighth" => Ok(SeriesVariant::EighthOrder),
        other => Err(CliError::Usage(format!(
            "variant must be second or eighth, got {other:?}"
        ))),
    }
}

fn parse_phase(text: &str) -> Result<Phase, CliError> {
    match text {
        "plus" => Ok(Phase::Plus),
        "minus" => Ok(Phase::Minus),
        other => Err(CliError::Usage(format!(
            "phase must be plus or minus, got {other:?}"
        ))),
    }
}

/// One table per `(n, p_n²/p_P²)` mode, sampled on `[0, a]`.
pub fn box_figure(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let width_text = cfg.raw("a").unwrap_or(DEFAULT_WIDTH).to_string();
    let a: f64 = cfg.get("a", 2e-9)?;
    let mass = cfg.get("mass", SI.electron_mass)?;
    let variant_text = cfg.raw("variant").unwrap_or("second");
    let variant = parse_variant(variant_text)?;
    let modes_text = cfg.raw("modes").unwrap_or(DEFAULT_MODES);
    let raw_ratios: Vec<&str> = modes_text
        .split(',')
        .map(|m| m.split(':').nth(1).unwrap_or("").trim())
        .collect();

    let mut tables = Vec::new();
    for ((n, ratio), ratio_text) in parse_modes(modes_text)?.into_iter().zip(raw_ratios) {
        if !(1.0..2.0).contains(&ratio) {
            return Err(CliError::Usage(format!(
                "mode {n}: ratio {ratio} must satisfy 1 ≤ p_n²/p_P² < 2"
            )));
        }
        let sys = BoxSystem::with_momentum_ratio(mass, a, n, ratio)?;
        let mode = BoxMode::new(&sys, n)?;
        let xs = linspace(0.0, a, cfg.grid_points);
        let mut q = Vec::with_capacity(xs.len());
        let mut q_over_x = Vec::with_capacity(xs.len());
        let mut chi = Vec::with_capacity(xs.len());
        let mut density = Vec::with_capacity(xs.len());
        for &x in &xs {
            let qx = mode.trajectory_series(x, variant)?;
            q.push(qx);
            q_over_x.push(if x == 0.0 {
                mode.trajectory_slope(0.0, variant)?
            } else {
                qx / x
            });
            chi.push(mode.chi(x)?);
            density.push(mode.psi(x)?.powi(2));
        }
        let extremes: Vec<f64> = (0..2 * n)
            .map(|j| (2 * j + 1) as f64 * a / (4 * n) as f64)
            .collect();

        let mut t = Table::new(format!("box_n{n}"));
        t.meta("width_m", &width_text)
            .meta("n", n)
            .meta("momentum_ratio", ratio_text)
            .meta("variant", variant_text)
            .meta("amplitude_m", sci(mode.a_n))
            .meta("gauge", sci(mode.gauge(variant)?))
            .meta("energy_j", sci(mode.e_n))
            .meta("field_energy_j", sci(mode.field_energy_total(&sys)))
            .meta("inflection_points_m", join(&mode.inflection_points()))
            .meta("max_deviation_points_m", join(&extremes));
        with_echo(&mut t, cfg);
        t.column("x", "m", xs.clone())
            .column("q", "m", q)
            .column("q_over_x", "1", q_over_x)
            .column("chi", "m", chi)
            .column("psi_density", "1/m", density)
            .column("straight_line", "m", xs);
        tables.push(t);
    }
    Ok(tables)
}

/// Oscillator trajectory over `[−L, L]` with both series orders and the
/// quadrature oracle.
pub fn osc_trajectory(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let base = OscSystem::hydrogen_molecule();
    let alpha = cfg.get("alpha", base.alpha)?;
    let mu = cfg.get("mu", base.mu)?;
    let n: u32 = cfg.get("n", 1)?;
    let n_max: u32 = cfg.get("n_max", 50)?;
    let r_eq = cfg.get("r_eq", base.r_eq)?;
    let probe = OscSystem::with_alpha(mu, alpha, 1.0 / alpha.sqrt(), r_eq)?;
    let cap_l = cfg.get("cap_l", oscillator::classical_threshold(&probe, n_max))?;
    let sys = OscSystem::with_alpha(mu, alpha, cap_l, r_eq)?;
    let default_spec = QuadratureSpec::default();
    let spec = QuadratureSpec::new(
        cfg.get("quad_rel_tol", default_spec.rel_tol)?,
        cfg.get("quad_abs_tol", default_spec.abs_tol)?,
        default_spec.max_depth,
    )?;
    let amplitude = match cfg.get_opt::<f64>("amplitude")? {
        Some(a) => a,
        None => oscillator::amplitude_estimate(&sys, n)?.magnitude,
    };
    let mode = OscMode::new(&sys, n, 0, 0, amplitude)?;

    let rs = linspace(-cap_l, cap_l, cfg.grid_points);
    let mut two = Vec::with_capacity(rs.len());
    let mut three = Vec::with_capacity(rs.len());
    let mut exact = Vec::with_capacity(rs.len());
    let mut correction = Vec::with_capacity(rs.len());
    let mut field = Vec::with_capacity(rs.len());
    for &r in &rs {
        two.push(mode.trajectory(&sys, r, SeriesOrder::TwoTerm)?);
        three.push(mode.trajectory(&sys, r, SeriesOrder::ThreeTerm)?);
        exact.push(exact_osc_trajectory(&mode, &sys, r, &spec)?);
        correction.push(mode.trajectory_correction(&sys, r, SeriesOrder::TwoTerm)?);
        field.push(mode.radial_field(&sys, r));
    }
    let inv = 1.0 / alpha.sqrt();
    let probe_ratio = if inv <= cap_l {
        mode.trajectory(&sys, inv, SeriesOrder::TwoTerm)? / inv
    } else {
        f64::NAN
    };

    let mut t = Table::new(format!("osc_n{n}"));
    t.meta("n", n)
        .meta("alpha_per_m2", sci(alpha))
        .meta("mu_kg", sci(mu))
        .meta("amplitude_l_m", sci(cap_l))
        .meta("field_amplitude_m", sci(amplitude))
        .meta(
            "boundary_suppression",
            sci(oscillator::boundary_suppression(&sys)),
        )
        .meta("q_at_inverse_sqrt_alpha_scaled", sci(probe_ratio))
        .meta("quad_rel_tol", sci(spec.rel_tol))
        .meta("quad_abs_tol", sci(spec.abs_tol));
    with_echo(&mut t, cfg);
    t.column("r_bar", "m", rs)
        .column("q_two_term", "m", two)
        .column("q_three_term", "m", three)
        .column("q_oracle", "m", exact)
        .column("q_minus_r_two_term", "m", correction)
        .column("chi", "m", field);
    Ok(vec![t])
}

/// Polar 2p orbits `q/r` against `θ`, with the diameters in the header.
pub fn hydrogen_figure(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let sys = HydrogenSystem::with_charge(cfg.get("z", 1u32)?)?;
    let amplitude = cfg.get("amplitude", hydrogen::FIGURE_AMPLITUDE)?;
    let r = cfg.get("radius", sys.a0)?;
    let thetas = linspace(0.0, 2.0 * PI, cfg.grid_points);
    let ratio = |which| -> Result<Vec<f64>, CliError> {
        thetas
            .iter()
            .map(|&th| Ok(hydrogen::orbit_2p(&sys, amplitude, r, th, which)? / r))
            .collect()
    };
    let p0 = ratio(PState::P0)?;
    let p1 = ratio(PState::PPlusMinus1)?;
    let d0 = hydrogen::diameters(&sys, amplitude, r, PState::P0)?;
    let d1 = hydrogen::diameters(&sys, amplitude, r, PState::PPlusMinus1)?;

    let mut t = Table::new("hydrogen_2p");
    t.meta("z", sys.z)
        .meta("radius_m", sci(r))
        .meta("amplitude_m", sci(amplitude))
        .meta("diameter_major_2p0", format!("{:.6}", d0.major))
        .meta("diameter_minor_2p0", format!("{:.6}", d0.minor))
        .meta("diameter_major_2p1", format!("{:.6}", d1.major))
        .meta("diameter_minor_2p1", format!("{:.6}", d1.minor));
    with_echo(&mut t, cfg);
    t.column("theta_rad", "rad", thetas.clone())
        .column("q_over_r_2p0", "1", p0)
        .column("q_over_r_2p1", "1", p1);
    Ok(vec![t])
}

/// Linear and nonlinear box levels. `strength` is `εÃ²/k₁²`, with `Ã` the
/// ground-mode amplitude at the given momentum ratio.
pub fn spectrum(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let a = cfg.get("a", 2e-9)?;
    let ratio = cfg.get("ratio", 1.5)?;
    let strength = cfg.get("strength", 0.01)?;
    let levels: u32 = cfg.get("levels", 5)?;
    let phase = parse_phase(cfg.raw("phase").unwrap_or("minus"))?;
    if levels == 0 {
        return Err(CliError::Usage("levels must be at least 1".into()));
    }
    let sys = BoxSystem::electron(a, 1, ratio)?;
    let a_tilde = BoxMode::new(&sys, 1)?.a_n;
    let k1 = nonlinear::linear_k(&sys, 1);
    let params = NonlinearParams::from_eps(strength * k1 * k1 / (a_tilde * a_tilde), a_tilde)?;

    let mut cols: [Vec<f64>; 6] = Default::default();
    for n in 1..=levels {
        let s = nonlinear::spectrum(&params, &sys, n, phase)?;
        let linear = pfield::boxmode::linear_level(sys.m, a, n);
        let row = [
            n as f64,
            nonlinear::linear_k(&sys, n),
            s.k_n,
            linear,
            s.e_n,
            s.e_n - linear,
        ];
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let [n, k_lin, k_nl, e_lin, e_nl, shift] = cols;
    let mut t = Table::new("spectrum");
    t.meta("width_m", sci(a))
        .meta("strength", sci(strength))
        .meta("eps_per_m2", sci(params.eps))
        .meta("a_tilde_m", sci(a_tilde))
        .meta("phase_rad", sci(phase.radians()));
    with_echo(&mut t, cfg);
    t.column("n", "1", n)
        .column("k_linear", "1/m", k_lin)
        .column("k_nonlinear", "1/m", k_nl)
        .column("e_linear", "J", e_lin)
        .column("e_nonlinear", "J", e_nl)
        .column("shift", "J", shift);
    Ok(vec![t])
}

/// Human-readable spectrum table for stdout.
pub fn spectrum_text(t: &Table) -> String {
    let col = |h: &str| t.column_values(h).unwrap_or(&[]);
    let (n, e_lin, e_nl, shift) = (
        col("n:1"),
        col("e_linear:J"),
        col("e_nonlinear:J"),
        col("shift:J"),
    );
    let mut s = format!(
        "{:>4}  {:>24}  {:>24}  {:>24}\n",
        "n", "E_linear [J]", "E_nonlinear [J]", "shift [J]"
    );
    for i in 0..t.rows() {
        s.push_str(&format!(
            "{:>4}  {:>24e}  {:>24e}  {:>24e}\n",
            n[i], e_lin[i], e_nl[i], shift[i]
        ));
    }
    s
}

/// Outcome of the continuity check, reported on stdout.
pub struct FluxSummary {
    pub residual_ratio: f64,
    pub pass: bool,
}

/// Continuity check for an equal two-mode superposition.
pub fn flux_check(cfg: &RunConfig) -> Result<(Vec<Table>, FluxSummary), CliError> {
    let a = cfg.get("a", 2e-9)?;
    let n1: u32 = cfg.get("n1", 1)?;
    let n2: u32 = cfg.get("n2", 2)?;
    if n1 == n2 {
        return Err(CliError::Usage("n1 and n2 must differ".into()));
    }
    let s = Superposition::equal_pair(a, n1, n2)?;
    let period = s
        .beat_period()
        .ok_or_else(|| CliError::Usage("degenerate superposition".into()))?;
    let t = cfg.get("time", 0.37 * period)?;
    let h = cfg.get("step", a / 1e4)?;
    let ht = period * h / a;
    let xs = linspace(h, a - h, cfg.grid_points);
    let mut rho = Vec::with_capacity(xs.len());
    let mut j = Vec::with_capacity(xs.len());
    let mut rate = Vec::with_capacity(xs.len());
    let mut residual = Vec::with_capacity(xs.len());
    for &x in &xs {
        rho.push(timedep::density(&s, x, t));
        j.push(timedep::flux(&s, x, t));
        rate.push(timedep::density_rate(&s, x, t));
        residual.push(timedep::continuity_residual(&s, x, t, h, ht)?);
    }
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let residual_ratio = max_abs(&residual) / max_abs(&rate);
    let pass = residual_ratio < 1e-6;
    let rule = CompositeGaussLegendre::default();

    let mut table = Table::new("flux_check");
    table
        .meta("width_m", sci(a))
        .meta("modes", format!("{n1} {n2}"))
        .meta("time_s", sci(t))
        .meta("beat_period_s", sci(period))
        .meta("step_m", sci(h))
        .meta("step_s", sci(ht))
        .meta(
            "total_probability",
            sci(timedep::total_probability(&s, t, &rule)),
        )
        .meta(
            "mean_momentum_kg_m_per_s",
            sci(timedep::expectation_p(&s, t, &rule).re),
        )
        .meta("residual_ratio", sci(residual_ratio))
        .meta("pass", pass);
    with_echo(&mut table, cfg);
    table
        .column("x", "m", xs)
        .column("density", "1/m", rho)
        .column("flux", "1/s", j)
        .column("density_rate", "1/(m s)", rate)
        .column("continuity_residual", "1/(m s)", residual);
    Ok((
        vec![table],
        FluxSummary {
            residual_ratio,
            pass,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cfg(command: &'static str, keys: &[&str], pairs: &[(&str, &str)]) -> RunConfig {
        let map: BTreeMap<String, String> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        RunConfig::build(command, None, map, keys).unwrap()
    }

    #[test]
    fn box_boundaries_exact() {
        let tables = box_figure(&cfg("box-figure", BOX_KEYS, &[("grid", "11")])).unwrap();
        assert_eq!(tables.len(), 3);
        for t in &tables {
            let q = t.column_values("q:m").unwrap();
            let x = t.column_values("x:m").unwrap();
            assert_eq!(q[0], 0.0);
            assert!((q[10] - x[10]).abs() <= 1e-12 * x[10]);
        }
    }

    #[test]
    fn box_rejects_bad_ratio() {
        assert!(box_figure(&cfg("box-figure", BOX_KEYS, &[("modes", "1:2.0")])).is_err());
        assert!(box_figure(&cfg("box-figure", BOX_KEYS, &[("modes", "1:0.9")])).is_err());
    }

    #[test]
    fn hydrogen_zero_amplitude() {
        let t = &hydrogen_figure(&cfg(
            "hydrogen-figure",
            HYDROGEN_KEYS,
            &[("amplitude", "0"), ("grid", "17")],
        ))
        .unwrap()[0];
        assert!(t
            .column_values("q_over_r_2p0:1")
            .unwrap()
            .iter()
            .all(|&v| v == 1.0));
        assert!(t
            .column_values("q_over_r_2p1:1")
            .unwrap()
            .iter()
            .all(|&v| v == 1.0));
    }

    #[test]
    fn spectrum_linear_limit() {
        let t = &spectrum(&cfg("spectrum", SPECTRUM_KEYS, &[("strength", "0")])).unwrap()[0];
        assert!(t
            .column_values("shift:J")
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
        assert!(spectrum_text(t).lines().count() == 6);
    }

    #[test]
    fn spectrum_shift_positive_for_positive_strength() {
        let t = &spectrum(&cfg("spectrum", SPECTRUM_KEYS, &[("strength", "0.05")])).unwrap()[0];
        assert!(t.column_values("shift:J").unwrap().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn flux_check_passes() {
        let (_, summary) = flux_check(&cfg("flux-check", FLUX_KEYS, &[("grid", "50")])).unwrap();
        assert!(summary.pass, "{}", summary.residual_ratio);
    }
}
