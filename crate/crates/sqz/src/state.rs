//! Named initial states selectable from the command line.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqz_core::metrology::{ghz_y, sss_state};
use sqz_core::twist::OatStates;
use sqz_core::{css, dicke, SymmetricState};

use crate::error::{CliError, CliResult};
use crate::params::{ParamKind, ParamSpec, Params};

pub const STATE_NAMES: &[&str] = &["css", "dicke", "oat", "ghz", "ghz-y", "sss", "superposition", "random"];

/// Flags shared by every command that builds a state.
pub const STATE_PARAMS: [ParamSpec; 6] = [
    ParamSpec::with_default("state", ParamKind::Choice(STATE_NAMES), "css", "initial state family"),
    ParamSpec::required("n", ParamKind::Int, "number of spin-1/2 particles"),
    ParamSpec::with_default("theta", ParamKind::Float, "1.5707963267948966", "polar angle (css), twist angle (oat) or mixing angle (superposition)"),
    ParamSpec::with_default("phi", ParamKind::Float, "0", "azimuth (css) or relative phase (superposition)"),
    ParamSpec::optional("m", ParamKind::Float, "magnetic number for dicke and superposition; default -N/2"),
    ParamSpec::with_default("seed", ParamKind::Int, "0", "seed for the random state"),
];

pub fn build_state(p: &Params) -> CliResult<SymmetricState> {
    let n = p.count("n")?;
    let theta = p.float("theta")?;
    let phi = p.float("phi")?;
    let m = p.opt_float("m")?.unwrap_or(-(n as f64) / 2.0);
    let state = match p.text("state")? {
        "css" => css(n, theta, phi)?,
        "dicke" => dicke(n, m)?,
        "oat" => OatStates::new(n)?.at(theta)?,
        "ghz" => {
            let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
            amps[0] = Complex64::new(1.0, 0.0);
            amps[n] = Complex64::new(1.0, 0.0);
            SymmetricState::normalized(n, amps)?
        }
        "ghz-y" => ghz_y(n)?,
        "sss" => sss_state(n)?,
        "superposition" => {
            let lower = dicke(n, m)?;
            let upper = dicke(n, m + 2.0)?;
            let w = Complex64::from_polar(theta.sin(), phi);
            let amps = lower.amplitudes().iter().zip(upper.amplitudes()).map(|(a, b)| a * theta.cos() + b * w).collect();
            SymmetricState::normalized(n, amps)?
        }
        "random" => SymmetricState::random(n, &mut ChaCha8Rng::seed_from_u64(p.seed("seed")?))?,
        other => return Err(CliError::usage(format!("unknown state {other:?}"))),
    };
    Ok(state)
}
