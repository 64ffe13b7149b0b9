//! Particle-field (PF) kinematics for stationary quantum systems.
//!
//! A particle is paired with a length-dimensioned field χ obeying the
//! stationary Schrödinger equation. The total energy splits into a particle
//! part and a field part, and the composite system follows a trajectory
//! `q(x) = g ∫ (1 + χ'²)^{1/2} dx` that bends away from the classical path
//! wherever the field slope is large.
//!
//! Worked systems:
//!
//! * [`boxmode`]: particle in a one-dimensional box, including the truncated
//!   series used for closed-form trajectories.
//! * [`oscillator`]: two-body isotropic harmonic oscillator in relative
//!   coordinates.
//! * [`hydrogen`]: hydrogen-like atom on circular orbits, with 2p orbit
//!   deformation.
//! * [`nonlinear`]: Duffing-like cubic extension of the box problem.
//! * [`timedep`]: probability flux and momentum expectations for
//!   superpositions of box eigenmodes.
//!
//! [`oracle`] holds the brute-force routines used to check every closed
//! form, and [`verify`] bundles those checks into the acceptance suite.

pub mod angular;
pub mod boxmode;
pub mod constants;
pub mod error;
pub mod hydrogen;
pub mod nonlinear;
pub mod oracle;
pub mod oscillator;
pub mod pf;
pub mod timedep;
pub mod verify;

pub use constants::{PhysConstants, SI};
pub use error::{Error, Result};

/// Library version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `n` uniformly spaced points on `[lo, hi]` with both endpoints exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}
