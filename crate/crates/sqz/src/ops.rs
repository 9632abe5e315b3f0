//! Operation registry: each subcommand (and each sweep target) is a pure
//! function from a parameter set to an [`Output`].

use rayon::prelude::*;
use serde_json::{Map, Value};
use sqz_core::decoherence::{decohered_general, decohered_squeezing, dephased_ramsey_optimum, sudden_death, ChannelKind, ChannelSpec};
use sqz_core::dicke::husimi_total;
use sqz_core::entanglement::{concurrence_general, concurrence_symmetric, evaluate_criteria, pair_density_matrix, rdm_from_local};
use sqz_core::metrology::{optimal_ramsey, ramsey_sensitivity, Readout};
use sqz_core::models::{
    lmg_coherent_field, lmg_ground, lmg_thermo_xi, qnd_chunks, qnd_conditional, qnd_monte_carlo_chunk, LMGSpec,
    QNDMonteCarlo, QNDSpec, ResidualSums,
};
use sqz_core::twist::{
    first_unsqueezed_step, kicked_top_trajectory, oat_closed_form, oat_concurrence, oat_xi_s2, vanishing_step,
    windowed_minimum, Evolver, HamiltonianSpec, KickedTopSpec,
};
use sqz_core::{compute_report, css, husimi_q, moments, twist, SymmetricState};

use crate::error::{CliError, CliResult};
use crate::format::{to_value, Output};
use crate::params::{ParamKind, ParamSpec, Params};
use crate::state::{build_state, STATE_PARAMS};

use ParamKind::{Choice, Float, Int};

pub struct OpSpec {
    pub name: &'static str,
    pub about: &'static str,
    /// Whether the shared state flags apply.
    pub takes_state: bool,
    pub params: &'static [ParamSpec],
    pub run: fn(&Params) -> CliResult<Output>,
}

impl OpSpec {
    pub fn all_params(&self) -> Vec<ParamSpec> {
        let mut v = if self.takes_state { STATE_PARAMS.to_vec() } else { Vec::new() };
        v.extend_from_slice(self.params);
        v
    }
}

pub const CHANNELS: &[&str] = &["adc", "pdc", "dpc"];
pub const HAMILTONIANS: &[&str] = &["tat", "oat-x", "oat-z", "driven"];
pub const READOUTS: &[&str] = &["jz", "parity"];

pub static OPERATIONS: &[OpSpec] = &[
    OpSpec {
        name: "oat",
        about: "One-axis twisted state exp(-iθJx²/2)|j,-j⟩ from closed-form moments: squeezing report and concurrence",
        takes_state: false,
        params: &[
            ParamSpec::required("n", Int, "number of particles"),
            ParamSpec::required("theta", Float, "twist angle θ = 2χt"),
        ],
        run: run_oat,
    },
    OpSpec {
        name: "tat",
        about: "Best squeezing over a time window for a twisting Hamiltonian started from |j,-j⟩",
        takes_state: false,
        params: &[
            ParamSpec::required("n", Int, "number of particles"),
            ParamSpec::with_default("hamiltonian", Choice(HAMILTONIANS), "tat", "twisting Hamiltonian"),
            ParamSpec::with_default("chi", Float, "1", "twisting strength"),
            ParamSpec::with_default("field", Float, "0", "transverse field B (driven only)"),
            ParamSpec::optional("t", Float, "evaluate at this time instead of minimizing"),
            ParamSpec::with_default("t-max", Float, "1.5707963267948966", "end of the search window"),
            ParamSpec::with_default("samples", Int, "200", "coarse samples before refinement"),
        ],
        run: run_twist,
    },
    OpSpec {
        name: "kicked-top",
        about: "Quantum kicked top from a coherent state: squeezing per kick",
        takes_state: false,
        params: &[
            ParamSpec::with_default("j", Float, "25", "spin length (N = 2j)"),
            ParamSpec::with_default("kappa", Float, "3", "kick strength κ"),
            ParamSpec::with_default("theta0", Float, "2.25", "initial polar angle"),
            ParamSpec::required("phi0", Float, "initial azimuth"),
            ParamSpec::with_default("kicks", Int, "400", "number of kicks"),
        ],
        run: run_kicked_top,
    },
    OpSpec {
        name: "lmg",
        about: "Lipkin-Meshkov-Glick ground state and its squeezing",
        takes_state: false,
        params: &[
            ParamSpec::required("n", Int, "number of particles"),
            ParamSpec::required("h", Float, "field strength"),
            ParamSpec::required("gamma", Float, "anisotropy"),
        ],
        run: run_lmg,
    },
    OpSpec {
        name: "channel",
        about: "Decoherence of a one-axis twisted state: squeezing, concurrence and critical strengths",
        takes_state: false,
        params: &[
            ParamSpec::required("n", Int, "number of particles"),
            ParamSpec::required("theta", Float, "twist angle of the initial state"),
            ParamSpec::required("kind", Choice(CHANNELS), "channel"),
            ParamSpec::required("p", Float, "decoherence strength in [0, 1]"),
        ],
        run: run_channel,
    },
    OpSpec {
        name: "ramsey",
        about: "Ramsey phase sensitivity, optionally with dephasing",
        takes_state: true,
        params: &[
            ParamSpec::with_default("readout", Choice(READOUTS), "jz", "measured observable"),
            ParamSpec::optional("phase", Float, "operating phase; optimized when absent"),
            ParamSpec::with_default("repeats", Int, "1", "repetitions of the experiment"),
            ParamSpec::optional("gamma-dephasing", Float, "dephasing rate for the optimal-time analysis"),
            ParamSpec::with_default("total-time", Float, "1", "total experiment time T"),
        ],
        run: run_ramsey,
    },
    OpSpec {
        name: "qnd",
        about: "Conditional squeezing by a QND measurement: closed form and Monte Carlo",
        takes_state: false,
        params: &[
            ParamSpec::required("n", Int, "number of atoms"),
            ParamSpec::required("photons", Float, "probe photon number"),
            ParamSpec::required("chi", Float, "interaction angle per unit Jz"),
            ParamSpec::with_default("eta", Float, "0", "loss fraction"),
            ParamSpec::with_default("trials", Int, "0", "Monte Carlo trials (0 skips)"),
            ParamSpec::with_default("seed", Int, "0", "Monte Carlo seed"),
        ],
        run: run_qnd,
    },
    OpSpec {
        name: "metrics",
        about: "Every squeezing parameter, pairwise concurrence and entanglement criteria of a state",
        takes_state: true,
        params: &[],
        run: run_metrics,
    },
    OpSpec {
        name: "husimi",
        about: "Husimi Q function on a (θ, φ) grid",
        takes_state: true,
        params: &[
            ParamSpec::with_default("n-theta", Int, "32", "polar grid points"),
            ParamSpec::with_default("n-phi", Int, "64", "azimuthal grid points"),
        ],
        run: run_husimi,
    },
];

pub fn lookup(name: &str) -> Option<&'static OpSpec> {
    OPERATIONS.iter().find(|o| o.name == name)
}

fn report_with_concurrence(out: &mut Output, state: &SymmetricState) -> CliResult<()> {
    out.merge_ser(&compute_report(&moments(state)));
    if state.n_particles() >= 2 {
        out.put("concurrence", concurrence_general(&pair_density_matrix(state)?)?);
    }
    Ok(())
}

/// Closed-form moments: exact for every N and O(1) in N.
fn run_oat(p: &Params) -> CliResult<Output> {
    let n = p.count("n")?;
    let theta = p.float("theta")?;
    let lm = oat_closed_form(n, theta)?;
    let mut out = Output::default();
    out.merge_ser(&compute_report(&lm.to_parity_moments()));
    out.put("concurrence", concurrence_symmetric(&rdm_from_local(&lm)?));
    out.put("closed_form_concurrence", oat_concurrence(n, theta));
    out.put("closed_form_xi_S2", oat_xi_s2(n, theta));
    Ok(out)
}

fn hamiltonian(p: &Params) -> CliResult<HamiltonianSpec> {
    let chi = p.float("chi")?;
    let field = p.float("field")?;
    let h = match p.text("hamiltonian")? {
        "tat" => HamiltonianSpec::tat(chi),
        "oat-x" => HamiltonianSpec::oat_x(chi),
        "oat-z" => HamiltonianSpec::oat_z(chi),
        _ => HamiltonianSpec::driven(chi, field),
    };
    if field != 0.0 && p.text("hamiltonian")? != "driven" {
        return Err(CliError::usage("--field applies to --hamiltonian driven only"));
    }
    Ok(h)
}

fn run_twist(p: &Params) -> CliResult<Output> {
    let n = p.count("n")?;
    let h = hamiltonian(p)?;
    let mut out = Output::default();
    if let Some(t) = p.opt_float("t")? {
        let state = Evolver::new(n, &h)?.evolve(&twist::all_down(n)?, t)?;
        out.put("t", t);
        report_with_concurrence(&mut out, &state)?;
    } else {
        let samples = p.count("samples")?;
        if samples == 0 {
            return Err(CliError::usage("--samples must be positive"));
        }
        let best = windowed_minimum(n, &h, p.float("t-max")?, samples)?;
        out.put("t_star", best.t_star);
        out.put("xi_S2_star", best.xi_s2_star);
    }
    Ok(out)
}

fn run_kicked_top(p: &Params) -> CliResult<Output> {
    let j = p.float("j")?;
    let two_j = 2.0 * j;
    if !(two_j >= 1.0 && two_j.fract() == 0.0) {
        return Err(CliError::usage(format!("--j must be a positive multiple of 1/2, got {j}")));
    }
    let n = two_j as usize;
    let spec = KickedTopSpec::new(p.float("kappa")?, j);
    let initial = css(n, p.float("theta0")?, p.float("phi0")?)?;
    let traj = kicked_top_trajectory(&initial, &spec, p.count("kicks")?)?;
    let mut out = Output::default();
    out.put("vanishing_step", vanishing_step(&traj));
    out.put("first_unsqueezed_step", first_unsqueezed_step(&traj));
    out.rows = traj
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut row = Map::new();
            row.insert("kick".into(), Value::from(k));
            row.insert("xi_S2".into(), to_value(&r.xi_s2));
            row.insert("xi_R2".into(), to_value(&r.xi_r2));
            row.insert("mean_spin_length".into(), Value::from(r.mean_spin_length));
            row
        })
        .collect();
    Ok(out)
}

fn run_lmg(p: &Params) -> CliResult<Output> {
    let n = p.count("n")?;
    let gamma = p.float("gamma")?;
    let h = p.float("h")?;
    let g = lmg_ground(&LMGSpec::new(n, h, gamma)?)?;
    let mut out = Output::default();
    out.merge_ser(&g.report);
    out.put("energy", g.energy);
    out.put("parity", g.parity);
    out.put("parity_gap", g.parity_gap);
    out.put("coherent_field", lmg_coherent_field(n, gamma));
    out.put("symmetry_broken_xi_S2", g.symmetry_broken.as_ref().and_then(|(_, r)| r.xi_s2));
    out.put("thermodynamic_xi_S2", lmg_thermo_xi(h, gamma).ok());
    Ok(out)
}

fn channel_kind(name: &str) -> ChannelKind {
    match name {
        "adc" => ChannelKind::Adc,
        "pdc" => ChannelKind::Pdc,
        _ => ChannelKind::Dpc,
    }
}

fn run_channel(p: &Params) -> CliResult<Output> {
    let n = p.count("n")?;
    let lm0 = oat_closed_form(n, p.float("theta")?)?;
    let kind = channel_kind(p.text("kind")?);
    let spec = ChannelSpec::new(kind, p.float("p")?)?;
    let mut out = Output::default();
    out.merge_ser(&decohered_squeezing(&lm0, &spec));
    let sd = sudden_death(&lm0, kind);
    out.put("p_c1", sd.p_c1);
    out.put("p_c2", sd.p_c2);
    out.put("p_c3", sd.p_c3);
    let (general, _) = decohered_general(&lm0, &spec);
    out.put("varsigma2", general.varsigma2);
    Ok(out)
}

fn run_ramsey(p: &Params) -> CliResult<Output> {
    let state = build_state(p)?;
    let readout = if p.text("readout")? == "parity" { Readout::Parity } else { Readout::Jz };
    let repeats = p.count("repeats")?;
    let est = match p.opt_float("phase")? {
        Some(phase) => ramsey_sensitivity(&state, phase, readout, repeats)?,
        None => optimal_ramsey(&state, readout, repeats)?,
    };
    let mut out = Output::default();
    out.merge_ser(&est);
    if let Some(gamma) = p.opt_float("gamma-dephasing")? {
        out.put_ser("dephased", &dephased_ramsey_optimum(&moments(&state), gamma, p.float("total-time")?)?);
    }
    Ok(out)
}

/// Chunks run in parallel; sums are merged in chunk order, so the result
/// does not depend on the worker count.
pub fn qnd_parallel(spec: &QNDSpec, trials: u64, seed: u64) -> CliResult<QNDMonteCarlo> {
    let parts: Vec<sqz_core::Result<ResidualSums>> =
        qnd_chunks(trials).into_par_iter().map(|(c, t)| qnd_monte_carlo_chunk(spec, seed, c, t)).collect();
    let mut total = ResidualSums::default();
    for part in parts {
        total = total.merge(part?);
    }
    Ok(QNDMonteCarlo::from_sums(spec, &total))
}

fn run_qnd(p: &Params) -> CliResult<Output> {
    let spec = QNDSpec::new(p.count("n")?, p.float("photons")?, p.float("chi")?, p.float("eta")?)?;
    let r = qnd_conditional(&spec);
    let mut out = Output::default();
    out.merge_ser(&r);
    out.put("xi_R2_dB", 10.0 * r.xi_r2.log10());
    out.put("xi_R2_with_loss_dB", 10.0 * r.xi_r2_with_loss.log10());
    let trials = p.count("trials")? as u64;
    if trials > 0 {
        out.put_ser("monte_carlo", &qnd_parallel(&spec, trials, p.seed("seed")?)?);
    }
    Ok(out)
}

fn run_metrics(p: &Params) -> CliResult<Output> {
    let state = build_state(p)?;
    let mut out = Output::default();
    report_with_concurrence(&mut out, &state)?;
    if state.n_particles() >= 2 {
        out.put_ser("criteria", &evaluate_criteria(&state, None)?);
    }
    out.put("parity", state.parity());
    Ok(out)
}

fn run_husimi(p: &Params) -> CliResult<Output> {
    let state = build_state(p)?;
    let (nt, np) = (p.count("n-theta")?, p.count("n-phi")?);
    if nt < 2 || np < 1 {
        return Err(CliError::usage("--n-theta must be >= 2 and --n-phi >= 1"));
    }
    let pi = std::f64::consts::PI;
    let grid: Vec<(f64, f64)> = (0..nt)
        .flat_map(|i| (0..np).map(move |k| (pi * i as f64 / (nt - 1) as f64, 2.0 * pi * k as f64 / np as f64)))
        .collect();
    let q = husimi_q(&state, &grid);
    let mut out = Output::default();
    out.put("normalization", husimi_total(&state, 64, 128));
    out.rows = grid
        .iter()
        .zip(q)
        .map(|(&(theta, phi), q)| {
            let mut row = Map::new();
            row.insert("theta".into(), Value::from(theta));
            row.insert("phi".into(), Value::from(phi));
            row.insert("q".into(), Value::from(q));
            row
        })
        .collect();
    Ok(out)
}
