//! Hydrogen-like atom: circular classical orbits of the μ-particle and the
//! deformed 2p PF orbits.
//!
//! The classical orbit is fixed by the hidden parameter `θ̇` through
//! `θ̇² = Ze'²/(μr³)`. The field energy
//!
//! ```text
//! E_{n,F} = −½μ(Ze'²/ħ)² [1/n² − (a₀/Z)/r]
//! ```
//!
//! vanishes on average over `|ψ_{n,l,m}|²` because `⟨1/r⟩ = Z/(a₀n²)`.
//! The PF speed on the orbit is `rθ̇ (1 + χ²S_θ²/(2πr²))^{1/2}`, where
//! `S_θ = dS_{l,m}/dθ`, so s-states move exactly on the classical orbit.

use std::f64::consts::PI;

use serde::Serialize;

use crate::angular;
use crate::constants::SI;
use crate::error::{ensure_finite, Error, Result};
use crate::oracle::{integrate, QuadratureSpec};

/// Default figure amplitude `A^{HA}`, m.
pub const FIGURE_AMPLITUDE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydrogenSystem {
    pub z: u32,
    /// Reduced mass, kg.
    pub mu: f64,
    /// `ħ²/(μe'²)`, m.
    pub a0: f64,
}

impl HydrogenSystem {
    pub fn new(z: u32, mu: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        if z == 0 || mu <= 0.0 {
            return Err(Error::Validation(format!(
                "need Z ≥ 1 and mu > 0, got Z = {z}, mu = {mu}"
            )));
        }
        Ok(Self {
            z,
            mu,
            a0: SI.hbar * SI.hbar / (mu * SI.gaussian_charge_sq),
        })
    }

    /// Hydrogen-like ion with `μ ≃ m_e`, so `a₀` is the Bohr radius.
    pub fn with_charge(z: u32) -> Result<Self> {
        Self::new(z, SI.electron_mass)
    }

    pub fn hydrogen() -> Self {
        Self::with_charge(1).expect("static parameters are valid")
    }

    /// `Ze'²`, J·m.
    pub fn coupling(&self) -> f64 {
        self.z as f64 * SI.gaussian_charge_sq
    }

    /// `½μ(Ze'²/ħ)²`, J.
    fn rydberg_scale(&self) -> f64 {
        0.5 * self.mu * (self.coupling() / SI.hbar).powi(2)
    }

    /// `a₀/Z`, m.
    pub fn scaled_radius(&self) -> f64 {
        self.a0 / self.z as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydrogenOrbit {
    pub r: f64,
    pub theta_dot: f64,
    pub v: f64,
    pub l_c: f64,
    pub e_mu: f64,
}

/// Circular orbit of radius `r`, balanced by the centrifugal force.
pub fn circular_orbit(sys: &HydrogenSystem, r: f64) -> Result<HydrogenOrbit> {
    ensure_finite("r", r)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!(
            "orbit radius must be positive, got {r}"
        )));
    }
    let ke2 = sys.coupling();
    let theta_dot = (ke2 / (sys.mu * r.powi(3))).sqrt();
    let v = r * theta_dot;
    Ok(HydrogenOrbit {
        r,
        theta_dot,
        v,
        l_c: sys.mu * r * v,
        e_mu: -0.5 * ke2 / r,
    })
}

/// Circular orbit fixed by the angular velocity `θ̇` instead of the radius.
pub fn orbit_from_angular_velocity(sys: &HydrogenSystem, theta_dot: f64) -> Result<HydrogenOrbit> {
    ensure_finite("theta_dot", theta_dot)?;
    if theta_dot <= 0.0 {
        return Err(Error::Domain(format!(
            "angular velocity must be positive, got {theta_dot}"
        )));
    }
    circular_orbit(
        sys,
        (sys.coupling() / (sys.mu * theta_dot * theta_dot)).cbrt(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HState {
    pub n: u32,
    pub l: u32,
    pub m_l: i32,
    /// Radial-field amplitude `A^{HA}`, m.
    pub a_ha: f64,
    pub e_n: f64,
}

impl HState {
    pub fn new(sys: &HydrogenSystem, n: u32, l: u32, m_l: i32, a_ha: f64) -> Result<Self> {
        ensure_finite("a_ha", a_ha)?;
        if n == 0 || l >= n || m_l.unsigned_abs() > l {
            return Err(Error::Validation(format!(
                "invalid quantum numbers (n, l, m) = ({n}, {l}, {m_l})"
            )));
        }
        Ok(Self {
            n,
            l,
            m_l,
            a_ha,
            e_n: -sys.rydberg_scale() / (n * n) as f64,
        })
    }
}

/// `E_{n,F} = E_n − E_μ(r)`.
pub fn field_energy(sys: &HydrogenSystem, state: &HState, r: f64) -> f64 {
    let n2 = (state.n * state.n) as f64;
    -sys.rydberg_scale() * (1.0 / n2 - sys.scaled_radius() / r)
}

/// Radius `n²a₀/Z` at which the field carries no energy.
pub fn balance_radius(sys: &HydrogenSystem, n: u32) -> f64 {
    (n * n) as f64 * sys.scaled_radius()
}

fn check_supported(n: u32, l: u32) -> Result<()> {
    if n == 0 || n > 3 || l >= n {
        return Err(Error::Unsupported(format!(
            "radial function for (n, l) = ({n}, {l})"
        )));
    }
    Ok(())
}

/// Unnormalized radial shape `r^l P(ρ) e^{−ρ/n}`, `ρ = Zr/a₀`, with `P(0) = 1`.
pub fn radial_shape(sys: &HydrogenSystem, n: u32, l: u32, r: f64) -> Result<f64> {
    check_supported(n, l)?;
    let rho = r / sys.scaled_radius();
    let poly = match (n, l) {
        (2, 0) => 1.0 - rho / 2.0,
        (3, 0) => 1.0 - 2.0 * rho / 3.0 + 2.0 * rho * rho / 27.0,
        (3, 1) => 1.0 - rho / 6.0,
        _ => 1.0,
    };
    Ok(r.powi(l as i32) * poly * (-rho / n as f64).exp())
}

/// Normalization `N_{n,l}` with `R_{n,l} = N_{n,l} · radial_shape`, so that
/// `∫ R² r² dr = 1`.
pub fn radial_norm(sys: &HydrogenSystem, n: u32, l: u32) -> Result<f64> {
    check_supported(n, l)?;
    let za = 1.0 / sys.scaled_radius();
    let c = match (n, l) {
        (1, 0) => 2.0,
        (2, 0) => 0.5f64.sqrt(),
        (2, 1) => 1.0 / (2.0 * 6f64.sqrt()),
        (3, 0) => 2.0 / 27f64.sqrt(),
        (3, 1) => 8.0 / (27.0 * 6f64.sqrt()),
        _ => 4.0 / (81.0 * 30f64.sqrt()),
    };
    Ok(c * za.powf(1.5 + l as f64))
}

/// Normalized radial wave function `R_{n,l}(r)`, m^{−3/2}.
pub fn radial_wavefunction(sys: &HydrogenSystem, n: u32, l: u32, r: f64) -> Result<f64> {
    Ok(radial_norm(sys, n, l)? * radial_shape(sys, n, l, r)?)
}

/// Radial field `χ_{n,l} = A^{HA} R_{n,l}/N`, e.g. `A r e^{−Zr/2a₀}` for 2p.
pub fn radial_field(sys: &HydrogenSystem, state: &HState, r: f64) -> Result<f64> {
    ensure_finite("r", r)?;
    if r < 0.0 {
        return Err(Error::Domain(format!(
            "radius must be non-negative, got {r}"
        )));
    }
    Ok(state.a_ha * radial_shape(sys, state.n, state.l, r)?)
}

/// Expectation of `r^power` over `R_{n,l}² r² dr`, by adaptive quadrature in
/// `ρ = Zr/a₀`.
pub fn radial_moment(
    sys: &HydrogenSystem,
    n: u32,
    l: u32,
    power: i32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_supported(n, l)?;
    let s = sys.scaled_radius();
    let unit = sys.clone_with_unit_radius();
    let rho_max = 80.0 * n as f64;
    let value = integrate(
        |rho| {
            let r = radial_wavefunction(&unit, n, l, rho).unwrap_or(0.0);
            r * r * rho.powi(2 + power)
        },
        0.0,
        rho_max,
        spec,
    )?;
    Ok(value * s.powi(power))
}

impl HydrogenSystem {
    /// Same geometry in units where `a₀/Z = 1`.
    fn clone_with_unit_radius(&self) -> Self {
        Self {
            z: 1,
            mu: self.mu,
            a0: 1.0,
        }
    }
}

/// `⟨E_μ⟩ = −½Ze'²⟨1/r⟩` for state `(n, l)`.
pub fn mean_particle_energy(
    sys: &HydrogenSystem,
    n: u32,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(-0.5 * sys.coupling() * radial_moment(sys, n, l, -1, spec)?)
}

fn field_term(sys: &HydrogenSystem, state: &HState, r: f64, theta: f64) -> Result<f64> {
    let chi = radial_field(sys, state, r)?;
    let s_theta = angular::polar_dtheta(state.l, state.m_l, theta)?;
    Ok(chi * chi * s_theta * s_theta / (r * r))
}

/// Linearized PF speed `rθ̇ (1 + χ²S_θ²/(4πr²))`.
pub fn pf_velocity(
    sys: &HydrogenSystem,
    state: &HState,
    r: f64,
    theta: f64,
    theta_dot: f64,
) -> Result<f64> {
    Ok(r * theta_dot * (1.0 + field_term(sys, state, r, theta)? / (4.0 * PI)))
}

/// Unexpanded PF speed `rθ̇ (1 + χ²S_θ²/(2πr²))^{1/2}`.
pub fn pf_velocity_exact(
    sys: &HydrogenSystem,
    state: &HState,
    r: f64,
    theta: f64,
    theta_dot: f64,
) -> Result<f64> {
    Ok(r * theta_dot * (1.0 + field_term(sys, state, r, theta)? / (2.0 * PI)).sqrt())
}

/// PF orbit radius for an s-state: the classical radius.
pub fn orbit_s(state: &HState, r: f64) -> Result<f64> {
    if state.l != 0 {
        return Err(Error::Validation(format!(
            "l = {} is not an s-state",
            state.l
        )));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PState {
    P0,
    PPlusMinus1,
}

/// 2p PF orbit radius to second order in `A`.
pub fn orbit_2p(sys: &HydrogenSystem, a_ha: f64, r: f64, theta: f64, which: PState) -> Result<f64> {
    ensure_finite("r", r)?;
    if r <= 0.0 || a_ha < 0.0 {
        return Err(Error::Domain(format!(
            "need r > 0 and A ≥ 0, got r = {r}, A = {a_ha}"
        )));
    }
    let decay = a_ha * a_ha * (-r / sys.scaled_radius()).exp();
    let correction = match which {
        PState::P0 => decay / (8.0 * PI) * (1.0 + theta.cos().powi(2)),
        PState::PPlusMinus1 => decay / (16.0 * PI) * (1.0 + theta.sin().powi(2)),
    };
    Ok(r * (1.0 + correction))
}

/// Cartesian components of the 2p₀ orbit.
pub fn cartesian_components_2p0(
    sys: &HydrogenSystem,
    a_ha: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<[f64; 3]> {
    orbit_2p(sys, a_ha, r, theta, PState::P0)?;
    let base = a_ha * a_ha * (-r / sys.scaled_radius()).exp() / (8.0 * PI);
    let s2 = theta.sin().powi(2);
    let (x, y, z) = (
        r * theta.sin() * phi.cos(),
        r * theta.sin() * phi.sin(),
        r * theta.cos(),
    );
    Ok([
        x * (1.0 + base * s2),
        y * (1.0 + base * s2),
        z * (1.0 + base * (2.0 + s2)),
    ])
}

/// Gap between the linearized and exact 2p₀ speed at its largest field
/// term, `(1 + 3A²/8π) − (1 + 3A²/4π)^{1/2}`.
pub fn approximation_gap(a_ha: f64) -> f64 {
    let y = 3.0 * a_ha * a_ha / (4.0 * PI);
    0.25 * y * y / (1.0 + 0.5 * y + (1.0 + y).sqrt())
}

/// Major and minor diameters of the 2p orbits in units of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diameters {
    pub major: f64,
    pub minor: f64,
}

pub fn diameters(sys: &HydrogenSystem, a_ha: f64, r: f64, which: PState) -> Result<Diameters> {
    let along_z = orbit_2p(sys, a_ha, r, 0.0, which)? / r;
    let in_plane = orbit_2p(sys, a_ha, r, PI / 2.0, which)? / r;
    Ok(Diameters {
        major: along_z.max(in_plane),
        minor: along_z.min(in_plane),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linspace;
    use proptest::prelude::*;

    fn h() -> HydrogenSystem {
        HydrogenSystem::hydrogen()
    }

    #[test]
    fn bohr_radius() {
        let s = h();
        assert!((s.a0 - 0.52918e-10).abs() < 1e-4 * 0.52918e-10);
        assert!((s.a0 - SI.hbar.powi(2) / (s.mu * SI.gaussian_charge_sq)).abs() <= 1e-6 * s.a0);
        assert!(HydrogenSystem::new(0, 1.0).is_err());
    }

    #[test]
    fn orbit_at_bohr_radius() {
        let s = h();
        let o = circular_orbit(&s, s.a0).unwrap();
        assert!((o.v - SI.gaussian_charge_sq / SI.hbar).abs() <= 1e-12 * o.v);
        assert!((o.v - 2.19e6).abs() < 0.01e6);
        assert!((o.e_mu / SI.electron_volt + 13.6).abs() < 0.01);
        assert!((o.e_mu + 0.5 * s.mu * o.v * o.v).abs() <= 1e-12 * o.e_mu.abs());
        assert!((o.l_c - s.mu * o.r * o.r * o.theta_dot).abs() <= 1e-12 * o.l_c);
        let o2 = circular_orbit(&s, 2.0 * s.a0).unwrap();
        assert!((o2.e_mu / o.e_mu - 0.5).abs() < 1e-12);
        assert!(circular_orbit(&s, 0.0).is_err());
    }

    #[test]
    fn angular_velocity_parametrization() {
        let s = HydrogenSystem::with_charge(3).unwrap();
        for r in [0.3e-10, 1e-10, 5e-10] {
            let o = circular_orbit(&s, r).unwrap();
            assert!(
                (o.theta_dot.powi(2) * s.mu * r.powi(3) - s.coupling()).abs()
                    <= 1e-12 * s.coupling()
            );
            let back = orbit_from_angular_velocity(&s, o.theta_dot).unwrap();
            assert!((back.r - r).abs() <= 1e-12 * r);
        }
    }

    #[test]
    fn field_energy_sign_and_balance() {
        let s = h();
        for n in 1..=3u32 {
            let st = HState::new(&s, n, 0, 0, 0.1).unwrap();
            let rb = balance_radius(&s, n);
            assert!(field_energy(&s, &st, rb).abs() <= 1e-12 * st.e_n.abs());
            assert!(field_energy(&s, &st, 0.5 * rb) > 0.0);
            assert!(field_energy(&s, &st, 2.0 * rb) < 0.0);
            let o = circular_orbit(&s, 0.7 * rb).unwrap();
            assert!((st.e_n - o.e_mu - field_energy(&s, &st, o.r)).abs() <= 1e-12 * st.e_n.abs());
        }
        assert!(HState::new(&s, 2, 2, 0, 0.1).is_err());
        assert!(HState::new(&s, 2, 1, 2, 0.1).is_err());
    }

    #[test]
    fn radial_functions_are_normalized() {
        let spec = QuadratureSpec::default();
        for s in [h(), HydrogenSystem::with_charge(2).unwrap()] {
            for (n, l) in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
                let norm = radial_moment(&s, n, l, 0, &spec).unwrap();
                assert!((norm - 1.0).abs() < 1e-10, "({n}, {l}): {norm}");
                let inv = radial_moment(&s, n, l, -1, &spec).unwrap();
                let expected = s.z as f64 / (s.a0 * (n * n) as f64);
                assert!((inv / expected - 1.0).abs() < 1e-9);
            }
        }
        assert!(matches!(
            radial_shape(&h(), 4, 0, 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn radial_field_examples() {
        let s = h();
        let p = HState::new(&s, 2, 1, 0, 0.1).unwrap();
        assert_eq!(radial_field(&s, &p, 0.0).unwrap(), 0.0);
        let r = 1.3 * s.a0;
        let expected = 0.1 * r * (-r / (2.0 * s.a0)).exp();
        assert!((radial_field(&s, &p, r).unwrap() - expected).abs() <= 1e-15 * expected);
        let one_s = HState::new(&s, 1, 0, 0, 0.1).unwrap();
        for r in linspace(0.0, 20.0 * s.a0, 50) {
            assert!(radial_field(&s, &one_s, r).unwrap() > 0.0);
        }
    }

    #[test]
    fn s_states_keep_classical_orbit() {
        let s = h();
        for n in 1..=3 {
            let st = HState::new(&s, n, 0, 0, 0.1).unwrap();
            for theta in [0.0, 0.4, 1.9] {
                let o = circular_orbit(&s, 1.7 * s.a0).unwrap();
                assert_eq!(
                    pf_velocity(&s, &st, o.r, theta, o.theta_dot).unwrap(),
                    o.r * o.theta_dot
                );
                assert_eq!(orbit_s(&st, o.r).unwrap(), o.r);
            }
        }
    }

    #[test]
    fn p_state_velocity_minima() {
        let s = h();
        let o = circular_orbit(&s, s.a0).unwrap();
        let p0 = HState::new(&s, 2, 1, 0, 0.1).unwrap();
        let p1 = HState::new(&s, 2, 1, 1, 0.1).unwrap();
        let v = |st: &HState, t: f64| pf_velocity(&s, st, o.r, t, o.theta_dot).unwrap();
        assert_eq!(v(&p0, 0.0), o.v);
        assert!((v(&p1, PI / 2.0) - o.v).abs() <= 1e-15 * o.v);
        for t in linspace(0.0, PI, 37) {
            assert!(v(&p0, t) >= o.v && v(&p1, t) >= o.v * (1.0 - 1e-15));
        }
        let e = (-1.0f64).exp();
        let lin = v(&p0, PI / 2.0) / o.v - 1.0;
        assert!((lin - 3.0 / (8.0 * PI) * 0.01 * e).abs() < 1e-15);
        let lin1 = v(&p1, 0.0) / o.v - 1.0;
        assert!((lin1 - 3.0 / (16.0 * PI) * 0.01 * e).abs() < 1e-15);
        let exact = pf_velocity_exact(&s, &p0, o.r, PI / 2.0, o.theta_dot).unwrap();
        assert!(exact < v(&p0, PI / 2.0));
    }

    #[test]
    fn figure_diameters() {
        let s = h();
        let d0 = diameters(&s, 0.1, s.a0, PState::P0).unwrap();
        assert!((d0.major - 1.00029).abs() < 1e-5 && (d0.minor - 1.00015).abs() < 1e-5);
        let d1 = diameters(&s, 0.1, s.a0, PState::PPlusMinus1).unwrap();
        assert!((d1.major - 1.00015).abs() < 1e-5 && (d1.minor - 1.000073).abs() < 1e-5);
        for t in linspace(0.0, 2.0 * PI, 13) {
            assert_eq!(orbit_2p(&s, 0.0, s.a0, t, PState::P0).unwrap(), s.a0);
        }
    }

    #[test]
    fn orbit_extrema_orientation() {
        let s = h();
        let q = |t: f64, w| orbit_2p(&s, 0.1, s.a0, t, w).unwrap();
        for t in linspace(0.0, PI, 91) {
            assert!(
                q(t, PState::P0) <= q(0.0, PState::P0)
                    && q(t, PState::P0) >= q(PI / 2.0, PState::P0)
            );
            assert!(q(t, PState::PPlusMinus1) >= q(0.0, PState::PPlusMinus1));
            assert!(q(t, PState::PPlusMinus1) <= q(PI / 2.0, PState::PPlusMinus1));
        }
    }

    #[test]
    fn cartesian_norm_matches_orbit() {
        let s = h();
        for a in [0.0, 0.05, 0.1] {
            for (theta, phi) in [(0.3, 0.2), (1.2, 2.5), (PI / 2.0, 1.0), (2.8, 4.0)] {
                let [qx, qy, qz] = cartesian_components_2p0(&s, a, s.a0, theta, phi).unwrap();
                let norm = (qx * qx + qy * qy + qz * qz).sqrt();
                let q = orbit_2p(&s, a, s.a0, theta, PState::P0).unwrap();
                let c = a * a / (8.0 * PI) * (-1.0f64).exp();
                assert!((norm - q).abs() <= 4.0 * c * c * s.a0 + 1e-15 * s.a0);
                if theta == PI / 2.0 {
                    assert!(qz.abs() < 1e-15 * s.a0);
                }
            }
        }
        let [x, y, z] = cartesian_components_2p0(&s, 0.0, s.a0, 0.7, 0.4).unwrap();
        assert_eq!(
            [x, y, z],
            [
                s.a0 * 0.7f64.sin() * 0.4f64.cos(),
                s.a0 * 0.7f64.sin() * 0.4f64.sin(),
                s.a0 * 0.7f64.cos()
            ]
        );
    }

    #[test]
    fn gap_examples() {
        assert!((approximation_gap(0.1) - 7.1e-7).abs() < 1e-8);
        assert_eq!(approximation_gap(0.0), 0.0);
        for a in [0.01, 0.05] {
            let quartic = (3.0 * a * a / (8.0 * PI)).powi(2) / 2.0;
            assert!((approximation_gap(a) / quartic - 1.0).abs() < 0.01);
        }
    }

    proptest! {
        #[test]
        fn gap_bounded_and_monotone(a in 0.0f64..0.1, da in 0.0f64..0.01) {
            prop_assert!(approximation_gap(a) <= 7.2e-7);
            let b = (a + da).min(0.1);
            prop_assert!(approximation_gap(b) >= approximation_gap(a));
        }

        #[test]
        fn orbit_symmetries(t in 0.0f64..PI, r_scale in 0.2f64..5.0) {
            let s = h();
            let r = r_scale * s.a0;
            for w in [PState::P0, PState::PPlusMinus1] {
                let q = orbit_2p(&s, 0.1, r, t, w).unwrap();
                prop_assert!((orbit_2p(&s, 0.1, r, PI - t, w).unwrap() - q).abs() <= 1e-15 * r);
                prop_assert_eq!(orbit_2p(&s, 0.1, r, -t, w).unwrap(), q);
            }
        }
    }
}
