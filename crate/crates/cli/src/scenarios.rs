//! One table per scenario command.

use std::f64::consts::PI;

use qtherm::correlations::{witness_sweep, WITNESS_COLUMNS};
use qtherm::engines::{logspace, power_sweep, run_machine, signature_check, SWEEP_COLUMNS};
use qtherm::exchangers::{exchanger_sweep, EXCHANGER_COLUMNS};
use qtherm::friction::{analyze, DriveProtocol};
use qtherm::otto::{
    cycle_heats, efficiency_map_2dbox, efficiency_map_classical_limit, efficiency_map_ideal_gas, linspace, Map2dSpec,
};
use qtherm::wigner::{analytic_powerlaw_correction, corrected_work, PowerLawParams};
use qtherm::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::*;
use crate::table::{Cell, Table};

pub fn run(cfg: &ScenarioConfig) -> Result<Table> {
    let missing = || Error::InvalidInput("parameter table missing".into());
    match cfg.command {
        Command::Otto => otto(cfg.otto.as_ref().ok_or_else(missing)?),
        Command::Map2d => map2d(cfg.map2d.as_ref().ok_or_else(missing)?),
        Command::Wigner => wigner(cfg.wigner.as_ref().ok_or_else(missing)?),
        Command::Engine => engine(cfg.engine.as_ref().ok_or_else(missing)?),
        Command::Signature => signature(cfg.signature.as_ref().ok_or_else(missing)?),
        Command::Exchanger => exchanger(cfg.exchanger.as_ref().ok_or_else(missing)?),
        Command::Friction => friction(cfg.friction.as_ref().ok_or_else(missing)?),
        Command::Corr => corr(cfg.corr.as_ref().ok_or_else(missing)?),
    }
}

fn otto(spec: &qtherm::otto::OttoCycleSpec) -> Result<Table> {
    spec.validate()?;
    let r = cycle_heats(spec)?;
    let mut t = Table::new(&["W", "Q_h", "Q_c", "eta", "mode"], "energies in units of the spectrum (hbar = k_B = 1)");
    t.push(vec![r.work.into(), r.heat_hot.into(), r.heat_cold.into(), r.efficiency().into(), r.mode.as_str().into()]);
    Ok(t)
}

pub fn map2d_spec(p: &Map2dParams) -> Result<Map2dSpec> {
    if p.n < 1 {
        return Err(Error::InvalidInput("map2d.n must be at least 1".into()));
    }
    Ok(Map2dSpec {
        lx_c: p.lx_c,
        ly_c: p.ly_c,
        t_h: p.t_h,
        t_c: p.t_c,
        mass: p.mass,
        hbar: p.hbar,
        lx_h: linspace(p.lx_range.0, p.lx_range.1, p.n),
        ly_h: linspace(p.ly_range.0, p.ly_range.1, p.n),
    })
}

/// Long-format table of the three efficiency maps over the same grid.
pub fn map2d_table(spec: &Map2dSpec) -> Result<Table> {
    let q = efficiency_map_2dbox(spec)?;
    let c = efficiency_map_classical_limit(spec)?;
    let g = efficiency_map_ideal_gas(spec)?;
    let mut t = Table::new(
        &["lx_h", "ly_h", "eta_ratio_quantum", "eta_ratio_classical_limit", "eta_ratio_ideal_gas"],
        "lengths in units of the cold x length; eta / eta_Carnot, NA where the cycle is not an engine",
    );
    for (j, y) in spec.ly_h.iter().enumerate() {
        for (i, x) in spec.lx_h.iter().enumerate() {
            t.push(vec![
                (*x).into(),
                (*y).into(),
                q.cells[j][i].ratio().into(),
                c.cells[j][i].ratio().into(),
                g.cells[j][i].ratio().into(),
            ]);
        }
    }
    Ok(t)
}

fn map2d(p: &Map2dParams) -> Result<Table> {
    map2d_table(&map2d_spec(p)?)
}

fn wigner(p: &WignerParams) -> Result<Table> {
    let pl = PowerLawParams { n: p.n, a_c: p.a_c, a_h: p.a_h, m: p.mass };
    pl.validate()?;
    let (hot, cold) = (pl.hot()?, pl.cold()?);
    let mut t = Table::new(
        &["hbar", "q", "W_classical", "dW_quadrature", "dW_analytic", "W_corrected"],
        "work in units of k_B T (hbar scanned, mass and stiffness as configured)",
    );
    for &h in &p.hbar {
        let c = corrected_work(&hot, &cold, pl.q(), p.t_h, p.t_c, h)?;
        let a = analytic_powerlaw_correction(&pl, p.t_h, p.t_c, h)?;
        t.push(vec![h.into(), pl.q().into(), c.classical.into(), c.correction.into(), a.into(), c.total.into()]);
    }
    Ok(t)
}

fn engine(p: &EngineParams) -> Result<Table> {
    p.params.validate()?;
    let mut t = Table::new(
        &["machine", "dephased", "tau_cyc", "s_bar", "W", "Q_h", "Q_c", "power", "eta"],
        "time in microseconds, energies in rad (hbar = 1), power in rad/us",
    );
    for kind in &p.machines {
        for &deph in &p.dephased {
            let r = run_machine(*kind, &p.params, deph)?;
            let eta = if r.heat_hot.abs() > 0.0 { Some(r.efficiency()) } else { None };
            t.push(vec![
                kind.as_str().into(),
                deph.into(),
                p.params.tau_cyc.into(),
                r.s_bar.into(),
                r.work.into(),
                r.heat_hot.into(),
                r.heat_cold.into(),
                r.power.into(),
                eta.into(),
            ]);
        }
    }
    Ok(t)
}

fn taus(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && n >= 1) {
        return Err(Error::InvalidInput(format!(
            "tau sweep needs 0 < tau_min <= tau_max and points >= 1, got ({min}, {max}, {n})"
        )));
    }
    Ok(logspace(min, max, n))
}

/// Coherent sweep columns plus the dephased two-stroke power and its flag.
pub fn signature_table(p: &SweepParams) -> Result<Table> {
    let taus = taus(p.tau_min, p.tau_max, p.points)?;
    let rows = power_sweep(&p.params, &taus)?;
    let deph = signature_check(&p.params, &taus, true)?;
    let mut cols: Vec<&str> = SWEEP_COLUMNS.to_vec();
    cols.extend(["P_2st_dephased", "dephased_violation_flag"]);
    let mut t = Table::new(&cols, "tau_cyc in microseconds, s_bar dimensionless, power in rad/us (hbar = 1)");
    for (r, d) in rows.iter().zip(&deph.points) {
        let (_, _, p_d, bound) = *d;
        t.push(vec![
            r.tau_cyc.into(),
            r.s_bar.into(),
            r.p_cont.into(),
            r.p_2st.into(),
            r.p_4st.into(),
            r.p_stoch_bound.into(),
            r.violation.into(),
            p_d.into(),
            (p_d.abs() > bound).into(),
        ]);
    }
    Ok(t)
}

fn signature(p: &SweepParams) -> Result<Table> {
    signature_table(p)
}

fn exchanger(p: &ExchangerParams) -> Result<Table> {
    p.setup.validate()?;
    let rows = exchanger_sweep(&p.setup, &taus(p.tau_min, p.tau_max, p.points)?)?;
    let mut t = Table::new(&EXCHANGER_COLUMNS, "energies in units of the configured frequencies (hbar = 1)");
    for r in rows {
        let mut cells: Vec<Cell> = vec![r.tau_cyc.into(), r.s_bar.into()];
        cells.extend(r.w.iter().chain(&r.q_h).chain(&r.q_c).map(|x| Cell::Num(*x)));
        t.push(cells);
    }
    Ok(t)
}

fn friction(p: &FrictionParams) -> Result<Table> {
    let protocols: Vec<DriveProtocol> = match p {
        FrictionParams::RotatingQubit { omega_i, omega_f, theta_f, t_f, beta_i } => {
            vec![DriveProtocol::rotating_qubit(*omega_i, *omega_f, *theta_f, *t_f, *beta_i)?]
        }
        FrictionParams::Random { dim, count, seed, t_f, beta_i, ratio } => {
            if *dim < 2 {
                return Err(Error::InvalidInput("friction.dim must be at least 2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| DriveProtocol::random(&mut rng, *dim, *t_f, *beta_i, *ratio)).collect::<Result<_>>()?
        }
    };
    let mut t = Table::new(
        &["index", "dim", "W_fric", "entropy_form", "bures_bound", "W_real", "W_adiabatic"],
        "energies in units of the Hamiltonian (hbar = k_B = 1)",
    );
    for (k, pr) in protocols.iter().enumerate() {
        let r = analyze(pr)?;
        t.push(vec![
            (k as f64).into(),
            (pr.dim() as f64).into(),
            r.w_fric.into(),
            r.entropy_form.into(),
            r.bures_bound.into(),
            r.w_real.into(),
            r.w_adiabatic.into(),
        ]);
    }
    Ok(t)
}

fn corr(p: &CorrParams) -> Result<Table> {
    p.pair.validate()?;
    if p.theta_points < 1 || p.chi_points < 1 {
        return Err(Error::InvalidInput("corr.theta_points and corr.chi_points must be at least 1".into()));
    }
    let c = match p.shift {
        Some(c) => c,
        None => p.pair.max_shift()?,
    };
    let thetas = linspace(0.0, PI / 2.0, p.theta_points);
    let chis = linspace(0.0, p.pair.chi_max_shifted(c)?, p.chi_points);
    let rows = witness_sweep(&p.pair, c, &thetas, &chis)?;
    let mut t = Table::new(&WITNESS_COLUMNS, "energies in units of the qubit gap, theta in radians, I in nats");
    for r in rows {
        t.push(vec![
            r.theta.into(),
            r.chi.into(),
            r.q_a.into(),
            r.i_q_initial.into(),
            r.q_clas.into(),
            r.verdict.as_str().into(),
        ]);
    }
    Ok(t)
}
