//! Three-level Markovian heat engines.
//!
//! Levels `|0⟩, |1⟩, |2⟩` carry energies `0, ω, ω_h` with `ω = ω_h − ω_c`.
//! The hot bath couples `|0⟩ ↔ |2⟩`, the cold bath `|1⟩ ↔ |2⟩`, and a
//! resonant drive couples `|0⟩ ↔ |1⟩`. In the frame rotating with the
//! drive the work generator is `H̃_w = ε(|0⟩⟨1| + |1⟩⟨0|)`.
//!
//! Three machines share these generators and differ only in how a cycle of
//! length `τ` is split:
//!
//! * continuous: `exp(−i(𝓛_h + 𝓛_c + 𝓗_w)τ)`
//! * two-stroke: bath `(3/2)(𝓛_h + 𝓛_c)` for `τ/3`, work `3𝓗_w` for `τ/3`,
//!   bath for `τ/3`
//! * four-stroke: cold `3𝓛_c` for `τ/6`, work `3𝓗_w` for `τ/6`, hot `3𝓛_h`
//!   for `τ/3`, work for `τ/6`, cold for `τ/6`
//!
//! Configurations store the continuous-machine parameters; stroke amplitudes
//! follow from the fixed factors above.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{DensityMatrix, Operator};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::liouville::{
    self, dissipator_superop, hamiltonian_superop, population_projector, vec, vec_matrix, StateVectorL, Superoperator,
};
use crate::otto::fmt17;

/// Fraction of the two-stroke cycle spent on the work stroke in the
/// propagator. The configurable `d` only enters the action and the bound.
pub const WORK_STROKE_FRACTION: f64 = 1.0 / 3.0;
/// Work-stroke amplitude over the continuous drive amplitude.
pub const WORK_STROKE_SCALE: f64 = 3.0;
/// Two-stroke bath rates over the continuous rates.
pub const BATH_STROKE_SCALE: f64 = 1.5;

fn default_d() -> f64 {
    1.0 / 3.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub omega_h: f64,
    pub omega_c: f64,
    /// Continuous-machine drive amplitude.
    pub epsilon: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub tau_cyc: f64,
    #[serde(default = "default_d")]
    pub d: f64,
}

/// NV-center transition frequency in rad/μs (time unit: μs).
pub const NV_OMEGA: f64 = 2.0 * PI * 2600.0;
/// NV work-stroke drive amplitude in rad/μs.
pub const NV_EPSILON_STROKE: f64 = 3.2;
/// NV total bath coupling in 1/μs.
pub const NV_GAMMA_TOTAL: f64 = 0.41;

impl EngineConfig {
    /// Builds a configuration from the amplitudes seen during the strokes of
    /// the two-stroke machine: `ε_s` on the work stroke, and the total
    /// coupling `γ_s` on the bath stroke, split evenly between the baths.
    #[allow(clippy::too_many_arguments)]
    pub fn from_stroke_parameters(
        omega_h: f64,
        omega_c: f64,
        epsilon_stroke: f64,
        gamma_stroke_total: f64,
        beta_h: f64,
        beta_c: f64,
        tau_cyc: f64,
        d: f64,
    ) -> Self {
        let gamma = gamma_stroke_total / BATH_STROKE_SCALE / 2.0;
        EngineConfig {
            omega_h,
            omega_c,
            epsilon: epsilon_stroke / WORK_STROKE_SCALE,
            gamma_h: gamma,
            gamma_c: gamma,
            beta_h,
            beta_c,
            tau_cyc,
            d,
        }
    }

    /// NV-like engine: `ω = 2π·2600` rad/μs, `ε_s = 3.2` rad/μs,
    /// `γ_s = 0.41` /μs, `d = 1/3`. The hot manifold gap is `2ω` and the
    /// bath temperatures give Boltzmann factors ½ (hot) and 1/20 (cold), an
    /// inverted configuration.
    pub fn nv_center(tau_cyc: f64) -> Self {
        let omega_c = NV_OMEGA;
        let omega_h = 2.0 * NV_OMEGA;
        EngineConfig::from_stroke_parameters(
            omega_h,
            omega_c,
            NV_EPSILON_STROKE,
            NV_GAMMA_TOTAL,
            2f64.ln() / omega_h,
            20f64.ln() / omega_c,
            tau_cyc,
            1.0 / 3.0,
        )
    }

    pub fn with_tau(&self, tau_cyc: f64) -> Self {
        EngineConfig { tau_cyc, ..*self }
    }

    /// `ω = ω_h − ω_c`
    pub fn omega(&self) -> f64 {
        self.omega_h - self.omega_c
    }

    pub fn epsilon_stroke(&self) -> f64 {
        WORK_STROKE_SCALE * self.epsilon
    }

    pub fn gamma_stroke_total(&self) -> f64 {
        BATH_STROKE_SCALE * (self.gamma_h + self.gamma_c)
    }

    /// `p_1 > p_0` in the undriven steady state, i.e. `β_c ω_c < β_h ω_h`
    /// read as `T_h/T_c > ω_h/ω_c`.
    pub fn inverted(&self) -> bool {
        self.beta_c * self.omega_c > self.beta_h * self.omega_h
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_h,
            self.omega_c,
            self.epsilon,
            self.gamma_h,
            self.gamma_c,
            self.beta_h,
            self.beta_c,
            self.tau_cyc,
            self.d,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return invalid("engine parameters must be finite");
        }
        if !(self.omega_h > self.omega_c && self.omega_c > 0.0) {
            return invalid(format!("need omega_h > omega_c > 0, got {} and {}", self.omega_h, self.omega_c));
        }
        if self.gamma_h < 0.0 || self.gamma_c < 0.0 {
            return invalid("bath rates must be non-negative");
        }
        if !(self.d > 0.0 && self.d < 1.0) {
            return invalid(format!("d must lie in (0, 1), got {}", self.d));
        }
        if !(self.beta_h >= 0.0 && self.beta_h < self.beta_c) {
            return invalid(format!("need 0 <= beta_h < beta_c, got {} and {}", self.beta_h, self.beta_c));
        }
        if self.tau_cyc < 0.0 {
            return invalid("tau_cyc must be non-negative");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Generators {
    pub h_o: Operator,
    pub h_w: Operator,
    pub hot: Superoperator,
    pub cold: Superoperator,
    /// `𝓗_w`, the superoperator of the rotating-frame drive.
    pub drive: Superoperator,
}

pub fn build_generators(cfg: &EngineConfig) -> Result<Generators> {
    cfg.validate()?;
    let h_o = Operator::from_real_diagonal(&[0.0, cfg.omega(), cfg.omega_h])?;
    let h_w = Operator::hermitian((linalg::ket_bra(3, 0, 1) + linalg::ket_bra(3, 1, 0)).scale(cfg.epsilon))?;
    let jump = |rate: f64, i: usize, j: usize| -> Result<Operator> {
        Operator::new(linalg::ket_bra(3, i, j).scale(rate.sqrt()))
    };
    let boltz_h = (-cfg.omega_h * cfg.beta_h).exp();
    let boltz_c = (-cfg.omega_c * cfg.beta_c).exp();
    let hot = dissipator_superop(&[jump(cfg.gamma_h * boltz_h, 2, 0)?, jump(cfg.gamma_h, 0, 2)?])?;
    let cold = dissipator_superop(&[jump(cfg.gamma_c * boltz_c, 2, 1)?, jump(cfg.gamma_c, 1, 2)?])?;
    let drive = hamiltonian_superop(&h_w)?;
    Ok(Generators { h_o, h_w, hot, cold, drive })
}

impl Generators {
    /// `w_h 𝓛_h + w_c 𝓛_c + w_d 𝓗_w`
    pub fn combine(&self, w_hot: f64, w_cold: f64, w_drive: f64) -> Superoperator {
        let mut out = self.hot.scale(w_hot);
        out = out.add(&self.cold.scale(w_cold)).expect("same dimension");
        out.add(&self.drive.scale(w_drive)).expect("same dimension")
    }

    /// `𝓛̃ = 𝓛_h + 𝓛_c + 𝓗_w`
    pub fn total(&self) -> Superoperator {
        self.combine(1.0, 1.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachineKind {
    Continuous,
    TwoStroke,
    FourStroke,
}

impl MachineKind {
    pub const ALL: [MachineKind; 3] = [MachineKind::Continuous, MachineKind::TwoStroke, MachineKind::FourStroke];

    pub fn as_str(&self) -> &'static str {
        match self {
            MachineKind::Continuous => "continuous",
            MachineKind::TwoStroke => "two_stroke",
            MachineKind::FourStroke => "four_stroke",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrokeKind {
    Continuous,
    Bath,
    Hot,
    Cold,
    Work,
}

/// One piece of the schedule: `exp(−i(w_h 𝓛_h + w_c 𝓛_c + w_d 𝓗_w)Δt)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stroke {
    pub kind: StrokeKind,
    pub duration: f64,
    pub w_hot: f64,
    pub w_cold: f64,
    pub w_drive: f64,
}

impl Stroke {
    fn new(kind: StrokeKind, duration: f64, w: (f64, f64, f64)) -> Self {
        Stroke { kind, duration, w_hot: w.0, w_cold: w.1, w_drive: w.2 }
    }
}

pub fn schedule(kind: MachineKind, tau: f64) -> Vec<Stroke> {
    use StrokeKind::*;
    let b = BATH_STROKE_SCALE;
    let w = WORK_STROKE_SCALE;
    match kind {
        MachineKind::Continuous => vec![Stroke::new(Continuous, tau, (1.0, 1.0, 1.0))],
        MachineKind::TwoStroke => vec![
            Stroke::new(Bath, tau / 3.0, (b, b, 0.0)),
            Stroke::new(Work, tau / 3.0, (0.0, 0.0, w)),
            Stroke::new(Bath, tau / 3.0, (b, b, 0.0)),
        ],
        MachineKind::FourStroke => vec![
            Stroke::new(Cold, tau / 6.0, (0.0, 3.0, 0.0)),
            Stroke::new(Work, tau / 6.0, (0.0, 0.0, 3.0)),
            Stroke::new(Hot, tau / 3.0, (3.0, 0.0, 0.0)),
            Stroke::new(Work, tau / 6.0, (0.0, 0.0, 3.0)),
            Stroke::new(Cold, tau / 6.0, (0.0, 3.0, 0.0)),
        ],
    }
}

#[derive(Clone, Debug)]
pub struct CycleMachine {
    pub kind: MachineKind,
    /// Whether populations and coherences are decoupled by full dephasing.
    pub dephased: bool,
    pub generators: Generators,
    pub strokes: Vec<Stroke>,
    /// One-cycle map, strokes applied in schedule order.
    pub lambda: Superoperator,
    pub tau_cyc: f64,
}

impl CycleMachine {
    pub fn new(kind: MachineKind, cfg: &EngineConfig, dephased: bool) -> Result<Self> {
        let generators = build_generators(cfg)?;
        let strokes = schedule(kind, cfg.tau_cyc);
        let mut lambda = Superoperator::identity(3);
        for s in &strokes {
            lambda = stroke_map(&generators, s, dephased)?.compose(&lambda)?;
        }
        Ok(CycleMachine { kind, dephased, generators, strokes, lambda, tau_cyc: cfg.tau_cyc })
    }

    /// Generator of a stroke. Under dephasing the continuous machine runs
    /// with the projected generator `𝓓𝓛𝓓`.
    pub fn stroke_generator(&self, s: &Stroke) -> Superoperator {
        stroke_generator(&self.generators, s, self.dephased)
    }

    /// `(generator, duration)` pairs for the action norm.
    pub fn action_schedule(&self) -> Vec<(Superoperator, f64)> {
        self.strokes.iter().map(|s| (self.stroke_generator(s), s.duration)).collect()
    }
}

fn stroke_generator(g: &Generators, s: &Stroke, dephased: bool) -> Superoperator {
    let gen = g.combine(s.w_hot, s.w_cold, s.w_drive);
    if dephased && s.kind == StrokeKind::Continuous {
        let d = population_projector(3);
        d.compose(&gen).and_then(|x| x.compose(&d)).expect("same dimension")
    } else {
        gen
    }
}

fn stroke_map(g: &Generators, s: &Stroke, dephased: bool) -> Result<Superoperator> {
    let map = liouville::propagate(&stroke_generator(g, s, dephased), s.duration)?;
    if dephased && s.kind != StrokeKind::Continuous {
        let d = population_projector(3);
        return d.compose(&map)?.compose(&d);
    }
    Ok(map)
}

pub fn continuous_map(cfg: &EngineConfig) -> Result<CycleMachine> {
    CycleMachine::new(MachineKind::Continuous, cfg, false)
}

pub fn two_stroke_map(cfg: &EngineConfig) -> Result<CycleMachine> {
    CycleMachine::new(MachineKind::TwoStroke, cfg, false)
}

pub fn four_stroke_map(cfg: &EngineConfig) -> Result<CycleMachine> {
    CycleMachine::new(MachineKind::FourStroke, cfg, false)
}

/// `𝓓`, the projector onto the population space of `H_o`.
pub fn dephase_superop(cfg: &EngineConfig) -> Result<Superoperator> {
    cfg.validate()?;
    Ok(population_projector(3))
}

/// The machine with `𝓓` applied at the start and end of every stroke.
pub fn stochastic_machine(kind: MachineKind, cfg: &EngineConfig) -> Result<CycleMachine> {
    CycleMachine::new(kind, cfg, true)
}

/// Residual `‖Λ vec(ρ) − vec(ρ)‖` accepted for a limit cycle.
pub const LIMIT_CYCLE_TOL: f64 = 1e-10;
const POWER_ITERATION_CAP: usize = 200_000;

/// The state reproduced by one cycle.
pub fn limit_cycle(m: &CycleMachine) -> Result<DensityMatrix> {
    let lam = m.lambda.matrix();
    let shifted = lam - linalg::identity(9);
    let rho = match liouville::unique_null_vector_scaled(&shifted, 1.0) {
        Ok(v) => liouville::kernel_to_state(3, v)?,
        Err(_) => power_iteration(m)?,
    };
    let r = residual(m, &rho);
    if r > LIMIT_CYCLE_TOL {
        return Err(Error::NonUniqueFixedPoint(format!("fixed-point residual {r:e}")));
    }
    Ok(rho)
}

fn residual(m: &CycleMachine, rho: &DensityMatrix) -> f64 {
    let v = vec(rho);
    let out = m.lambda.apply(&v).expect("dimension 3");
    (out.entries() - v.entries()).norm()
}

/// Iterates the map from the maximally mixed state.
pub fn power_iteration(m: &CycleMachine) -> Result<DensityMatrix> {
    let mut v = vec(&DensityMatrix::maximally_mixed(3)).entries().clone();
    for _ in 0..POWER_ITERATION_CAP {
        let next = m.lambda.matrix() * &v;
        let delta = (&next - &v).norm();
        v = next;
        if delta < 1e-14 {
            let sv = StateVectorL::from_entries(v.iter().cloned().collect())?;
            return liouville::unvec_state(&sv);
        }
    }
    Err(Error::NonUniqueFixedPoint("power iteration did not settle".into()))
}

#[derive(Clone, Debug)]
pub struct EngineReport {
    pub kind: MachineKind,
    pub dephased: bool,
    pub work: f64,
    pub heat_hot: f64,
    pub heat_cold: f64,
    pub power: f64,
    pub flux_hot: f64,
    pub flux_cold: f64,
    /// Spectral-norm action of the machine's schedule.
    pub s_bar: f64,
    pub limit_cycle_state: DensityMatrix,
}

impl EngineReport {
    /// `−W/Q_h`
    pub fn efficiency(&self) -> f64 {
        -self.work / self.heat_hot
    }
}

/// `Re(−i⟨A|𝓖|ρ⟩)`
fn flow(a: &CMatrix, g: &Superoperator, rho: &CVector) -> f64 {
    let row = g.left_apply(a);
    let z: C64 = row.iter().zip(rho.iter()).map(|(x, y)| x * y).sum();
    (z * C64::new(0.0, -1.0)).re
}

/// `∫_0^t exp(−iGs) ds` via the exponential of the block matrix
/// `[[−iG, I], [0, 0]]`.
fn integrated_propagator(g: &CMatrix, t: f64) -> CMatrix {
    let n = g.nrows();
    let mut big = CMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&(g * C64::new(0.0, -t)));
    for i in 0..n {
        big[(i, n + i)] = C64::new(t, 0.0);
    }
    linalg::expm(&big).view((0, n), (n, n)).into_owned()
}

/// Work and heats per cycle at the limit cycle.
///
/// The continuous machine uses the steady-state flows
/// `W = −i⟨H_o|𝓗_w|ρ_s⟩τ` and `Q_{h,c} = −i⟨H_o|𝓛_{h,c}|ρ_s⟩τ`. Stroke
/// machines integrate the same flows over each stroke, which for a pure
/// work stroke equals the energy difference across it.
pub fn cycle_energetics(m: &CycleMachine, cfg: &EngineConfig) -> Result<EngineReport> {
    if cfg.tau_cyc != m.tau_cyc {
        return invalid("machine was built for a different cycle time");
    }
    let rho = limit_cycle(m)?;
    let g = &m.generators;
    let h = g.h_o.matrix();
    let tau = m.tau_cyc;
    let (work, heat_hot, heat_cold) = if m.kind == MachineKind::Continuous {
        let v = vec(&rho).entries().clone();
        // Split the (possibly projected) generator back into its three parts.
        let parts = if m.dephased {
            let d = population_projector(3);
            let proj = |x: &Superoperator| d.compose(x).and_then(|y| y.compose(&d));
            (proj(&g.drive)?, proj(&g.hot)?, proj(&g.cold)?)
        } else {
            (g.drive.clone(), g.hot.clone(), g.cold.clone())
        };
        (flow(h, &parts.0, &v) * tau, flow(h, &parts.1, &v) * tau, flow(h, &parts.2, &v) * tau)
    } else {
        let d = population_projector(3);
        let mut state = vec(&rho).entries().clone();
        let (mut w, mut qh, mut qc) = (0.0, 0.0, 0.0);
        for s in &m.strokes {
            if m.dephased {
                state = d.matrix() * &state;
            }
            let gen = m.stroke_generator(s);
            let integrated = integrated_propagator(gen.matrix(), s.duration) * &state;
            w += s.w_drive * flow(h, &g.drive, &integrated);
            qh += s.w_hot * flow(h, &g.hot, &integrated);
            qc += s.w_cold * flow(h, &g.cold, &integrated);
            state = liouville::exp_minus_i(gen.matrix(), s.duration) * &state;
            if m.dephased {
                state = d.matrix() * &state;
            }
        }
        (w, qh, qc)
    };
    let s_bar = liouville::action_norm(&m.action_schedule())?;
    let per = |x: f64| if tau > 0.0 { x / tau } else { 0.0 };
    Ok(EngineReport {
        kind: m.kind,
        dephased: m.dephased,
        work,
        heat_hot,
        heat_cold,
        power: per(work),
        flux_hot: per(heat_hot),
        flux_cold: per(heat_cold),
        s_bar,
        limit_cycle_state: rho,
    })
}

/// Convenience: build the machine and evaluate it.
pub fn run_machine(kind: MachineKind, cfg: &EngineConfig, dephased: bool) -> Result<EngineReport> {
    let m = CycleMachine::new(kind, cfg, dephased)?;
    cycle_energetics(&m, cfg)
}

/// `s̄ = [ε_s d/2 + γ_s (1 − d)] τ` with the stroke amplitudes of the
/// two-stroke machine.
pub fn action_of(cfg: &EngineConfig) -> f64 {
    (0.5 * cfg.epsilon_stroke() * cfg.d + cfg.gamma_stroke_total() * (1.0 - cfg.d)) * cfg.tau_cyc
}

/// `|P^stoch| ≤ ω ε_s² d² τ`
pub fn stochastic_power_bound(cfg: &EngineConfig) -> f64 {
    cfg.omega() * cfg.epsilon_stroke().powi(2) * cfg.d * cfg.d * cfg.tau_cyc
}

/// `(d²τ/2)‖⟨H_o|𝓗_s²‖_∞` with `𝓗_s` the work-stroke drive superoperator.
pub fn general_stochastic_bound(cfg: &EngineConfig) -> Result<f64> {
    let g = build_generators(cfg)?;
    let hs = g.drive.scale(WORK_STROKE_SCALE);
    let h2 = hs.compose(&hs)?;
    let row = h2.left_apply(g.h_o.matrix());
    let pops = liouville::population_indices(3);
    // Acting on the population sector, the dual of the trace norm is the max entry.
    let norm = pops.iter().map(|&a| row[a].norm()).fold(0.0, f64::max);
    Ok(0.5 * cfg.d * cfg.d * cfg.tau_cyc * norm)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau_cyc: f64,
    pub s_bar: f64,
    pub p_cont: f64,
    pub p_2st: f64,
    pub p_4st: f64,
    pub p_stoch_bound: f64,
    pub violation: bool,
}

pub const SWEEP_COLUMNS: [&str; 7] =
    ["tau_cyc", "s_bar", "P_cont", "P_2st", "P_4st", "P_stoch_bound", "violation_flag"];

/// Powers of the three coherent machines over a `τ_cyc` sweep, parallel per point.
pub fn power_sweep(cfg: &EngineConfig, taus: &[f64]) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    taus.par_iter()
        .map(|&tau| {
            let c = cfg.with_tau(tau);
            let p = |k| run_machine(k, &c, false).map(|r| r.power);
            let p_2st = p(MachineKind::TwoStroke)?;
            let bound = stochastic_power_bound(&c);
            Ok(SweepRow {
                tau_cyc: tau,
                s_bar: action_of(&c),
                p_cont: p(MachineKind::Continuous)?,
                p_2st,
                p_4st: p(MachineKind::FourStroke)?,
                p_stoch_bound: bound,
                violation: p_2st.abs() > bound,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = SWEEP_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let cells = [r.tau_cyc, r.s_bar, r.p_cont, r.p_2st, r.p_4st, r.p_stoch_bound];
        let mut line: Vec<String> = cells.iter().map(|x| fmt17(*x)).collect();
        line.push(if r.violation { "1".into() } else { "0".into() });
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub tau_cyc: f64,
    pub power: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub dephased: bool,
    /// Every sweep point as `(τ, s̄, P, bound)`.
    pub points: Vec<(f64, f64, f64, f64)>,
    pub violations: Vec<Violation>,
}

/// Flags the sweep points where the two-stroke power exceeds the
/// stochastic bound. `dephased` selects the stochastic machine.
pub fn signature_check(cfg: &EngineConfig, taus: &[f64], dephased: bool) -> Result<SignatureReport> {
    cfg.validate()?;
    if !cfg.inverted() {
        return invalid("signature check needs the population-inverted engine regime");
    }
    let points: Result<Vec<(f64, f64, f64, f64)>> = taus
        .par_iter()
        .map(|&tau| {
            let c = cfg.with_tau(tau);
            let p = run_machine(MachineKind::TwoStroke, &c, dephased)?.power;
            Ok((tau, action_of(&c), p, stochastic_power_bound(&c)))
        })
        .collect();
    let points = points?;
    let violations = points
        .iter()
        .filter(|(_, _, p, b)| p.abs() > *b)
        .map(|&(tau_cyc, _, power, bound)| Violation { tau_cyc, power, bound })
        .collect();
    Ok(SignatureReport { dephased, points, violations })
}

/// Log-spaced values from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Populations of `ρ` as a Liouville vector restricted to the diagonal.
pub fn population_vector(rho: &DensityMatrix) -> StateVectorL {
    let d = population_projector(rho.dim());
    d.apply(&vec_matrix(rho.matrix())).expect("same dimension")
}
