//! Strong-coupling heat exchangers.
//!
//! The three-level engine of [`crate::engines`] is coupled to one hot qubit,
//! one cold qubit and one battery qubit through energy-conserving partial
//! swaps. A cycle is a single unitary on the 24-dimensional composite
//! `engine ⊗ hot ⊗ cold ⊗ battery` (index `e·8 + h·4 + c·2 + w`). Each cycle
//! starts with fresh, uncorrelated qubits.
//!
//! Heat and work are the energy changes of the exchangers and the battery:
//! `W = tr[(UρU† − ρ) H_w]`, `Q_k = tr[(UρU† − ρ) H_k]`. With this sign a
//! working engine has `W > 0` (energy deposited in the battery) and
//! `Q_h < 0` (energy drawn from the hot particle).
//!
//! Everything is computed in the frame rotating with `H_o + Σ H_k`, where
//! only the interaction survives.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engines::MachineKind;
use crate::error::{invalid, Error, Result};
use crate::hilbert::{partial_trace, thermal_state, BipartiteState, DensityMatrix, Operator, Subsystem};
use crate::linalg::{self, CMatrix, C64};
use crate::liouville::{self, Superoperator};
use crate::otto::fmt17;

pub const ENGINE_DIM: usize = 3;
pub const ENV_DIM: usize = 8;
pub const TOTAL_DIM: usize = ENGINE_DIM * ENV_DIM;

/// Relative tolerance on gap matching.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangerSetup {
    pub omega_h: f64,
    pub omega_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    /// Battery inverse temperature; absent means a ground-state battery.
    #[serde(default)]
    pub beta_w: Option<f64>,
    pub g_h: f64,
    pub g_c: f64,
    pub g_w: f64,
    pub tau_cyc: f64,
    /// Qubit gaps, when they differ from the engine manifolds they couple to.
    #[serde(default)]
    pub gap_h: Option<f64>,
    #[serde(default)]
    pub gap_c: Option<f64>,
    #[serde(default)]
    pub gap_w: Option<f64>,
}

impl ExchangerSetup {
    pub fn resonant(omega_h: f64, omega_c: f64, beta_h: f64, beta_c: f64, g: f64, tau_cyc: f64) -> Self {
        ExchangerSetup {
            omega_h,
            omega_c,
            beta_h,
            beta_c,
            beta_w: None,
            g_h: g,
            g_c: g,
            g_w: g,
            tau_cyc,
            gap_h: None,
            gap_c: None,
            gap_w: None,
        }
    }

    pub fn with_tau(&self, tau_cyc: f64) -> Self {
        ExchangerSetup { tau_cyc, ..*self }
    }

    pub fn omega(&self) -> f64 {
        self.omega_h - self.omega_c
    }

    /// Qubit gaps `(hot, cold, battery)`.
    pub fn gaps(&self) -> (f64, f64, f64) {
        (self.gap_h.unwrap_or(self.omega_h), self.gap_c.unwrap_or(self.omega_c), self.gap_w.unwrap_or(self.omega()))
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.omega_h, self.omega_c, self.beta_h, self.beta_c, self.g_h, self.g_c, self.g_w, self.tau_cyc];
        if vals.iter().any(|x| !x.is_finite()) {
            return invalid("exchanger parameters must be finite");
        }
        if !(self.omega_h > self.omega_c && self.omega_c > 0.0) {
            return invalid("need omega_h > omega_c > 0");
        }
        if self.beta_h < 0.0 || self.beta_c < 0.0 || self.beta_w.is_some_and(|b| b.is_nan() || b < 0.0) {
            return invalid("inverse temperatures must be non-negative");
        }
        if self.tau_cyc < 0.0 {
            return invalid("tau_cyc must be non-negative");
        }
        let (gh, gc, gw) = self.gaps();
        let scale = self.omega_h;
        for (name, gap, target) in
            [("hot", gh, self.omega_h), ("cold", gc, self.omega_c), ("battery", gw, self.omega())]
        {
            if (gap - target).abs() > RESONANCE_TOL * scale {
                return Err(Error::OffResonance(format!(
                    "{name} qubit gap {gap} does not match its engine manifold gap {target}"
                )));
            }
        }
        Ok(())
    }
}

/// `e ⊗ h ⊗ c ⊗ w`
pub fn embed(e: &CMatrix, h: &CMatrix, c: &CMatrix, w: &CMatrix) -> CMatrix {
    linalg::kron(&linalg::kron(&linalg::kron(e, h), c), w)
}

fn id(n: usize) -> CMatrix {
    linalg::identity(n)
}

/// Local Hamiltonians on the composite.
#[derive(Clone, Debug)]
pub struct LocalHamiltonians {
    pub h_o: Operator,
    pub h_h: Operator,
    pub h_c: Operator,
    pub h_w: Operator,
}

impl LocalHamiltonians {
    pub fn total(&self) -> Operator {
        self.h_o.add(&self.h_h).and_then(|x| x.add(&self.h_c)).and_then(|x| x.add(&self.h_w)).expect("same dimension")
    }
}

pub fn local_hamiltonians(s: &ExchangerSetup) -> Result<LocalHamiltonians> {
    s.validate()?;
    let (gh, gc, gw) = s.gaps();
    let engine = linalg::from_real_diagonal(&[0.0, s.omega(), s.omega_h]);
    let q = |gap: f64| linalg::from_real_diagonal(&[0.0, gap]);
    Ok(LocalHamiltonians {
        h_o: Operator::hermitian(embed(&engine, &id(2), &id(2), &id(2)))?,
        h_h: Operator::hermitian(embed(&id(3), &q(gh), &id(2), &id(2)))?,
        h_c: Operator::hermitian(embed(&id(3), &id(2), &q(gc), &id(2)))?,
        h_w: Operator::hermitian(embed(&id(3), &id(2), &id(2), &q(gw)))?,
    })
}

#[derive(Clone, Debug)]
pub struct Interactions {
    pub h_oh: Operator,
    pub h_oc: Operator,
    pub h_ow: Operator,
}

impl Interactions {
    pub fn total(&self) -> Operator {
        self.h_oh.add(&self.h_oc).and_then(|x| x.add(&self.h_ow)).expect("same dimension")
    }
}

/// `H_ok = g_k (a_k† a_ok + a_k a_ok†)` with engine lowering operators
/// `a_oh = |0⟩⟨2|`, `a_oc = |1⟩⟨2|`, `a_ow = |0⟩⟨1|`.
pub fn build_interactions(s: &ExchangerSetup) -> Result<Interactions> {
    s.validate()?;
    let lower = linalg::ket_bra(2, 0, 1);
    let raise = linalg::ket_bra(2, 1, 0);
    let i2 = id(2);
    let swap = |g: f64, a_o: CMatrix, slot: usize| -> Result<Operator> {
        let a_o_dag = a_o.adjoint();
        let place = |q: &CMatrix| match slot {
            0 => (q.clone(), i2.clone(), i2.clone()),
            1 => (i2.clone(), q.clone(), i2.clone()),
            _ => (i2.clone(), i2.clone(), q.clone()),
        };
        let (h1, c1, w1) = place(&raise);
        let (h2, c2, w2) = place(&lower);
        let m = embed(&a_o, &h1, &c1, &w1) + embed(&a_o_dag, &h2, &c2, &w2);
        Operator::hermitian(m.scale(g))
    };
    let ints = Interactions {
        h_oh: swap(s.g_h, linalg::ket_bra(3, 0, 2), 0)?,
        h_oc: swap(s.g_c, linalg::ket_bra(3, 1, 2), 1)?,
        h_ow: swap(s.g_w, linalg::ket_bra(3, 0, 1), 2)?,
    };
    Ok(ints)
}

/// `(generator, duration)` factors of a cycle, applied left to right in time.
pub fn unitary_schedule(kind: MachineKind, s: &ExchangerSetup) -> Result<Vec<(Operator, f64)>> {
    let i = build_interactions(s)?;
    let t = s.tau_cyc;
    Ok(match kind {
        MachineKind::Continuous => vec![(i.total(), t)],
        MachineKind::TwoStroke => {
            let bath = i.h_oh.add(&i.h_oc)?.scale(3.0);
            let work = i.h_ow.scale(1.5);
            vec![(work.clone(), t / 3.0), (bath, t / 3.0), (work, t / 3.0)]
        }
        MachineKind::FourStroke => {
            let c = i.h_oc.scale(3.0);
            let w = i.h_ow.scale(3.0);
            let h = i.h_oh.scale(3.0);
            vec![(c.clone(), t / 6.0), (w.clone(), t / 6.0), (h, t / 3.0), (w, t / 6.0), (c, t / 6.0)]
        }
    })
}

/// One-cycle unitary on the composite.
pub fn unitary_cycle(kind: MachineKind, s: &ExchangerSetup) -> Result<Operator> {
    let mut u = id(TOTAL_DIM);
    for (h, dt) in unitary_schedule(kind, s)? {
        u = linalg::unitary_exp(h.matrix(), dt) * u;
    }
    Operator::new(u)
}

/// `Σ ‖H_i‖ Δt_i` over the cycle factors.
pub fn action(kind: MachineKind, s: &ExchangerSetup) -> Result<f64> {
    Ok(unitary_schedule(kind, s)?.iter().map(|(h, dt)| linalg::spectral_norm(h.matrix()) * dt).sum())
}

/// Fresh `hot ⊗ cold ⊗ battery` state for one cycle.
pub fn fresh_environment(s: &ExchangerSetup) -> Result<DensityMatrix> {
    s.validate()?;
    let (gh, gc, gw) = s.gaps();
    let q = |gap: f64, beta: f64| thermal_state(&Operator::from_real_diagonal(&[0.0, gap])?, beta);
    let battery = match s.beta_w {
        Some(b) => q(gw, b)?,
        None => DensityMatrix::basis(2, 0),
    };
    Ok(q(gh, s.beta_h)?.kron(&q(gc, s.beta_c)?).kron(&battery))
}

#[derive(Clone, Debug)]
pub struct StrongReport {
    pub work: f64,
    pub heat_hot: f64,
    pub heat_cold: f64,
    /// Energy change of the engine itself.
    pub delta_engine: f64,
    pub rho_engine: DensityMatrix,
    pub rho_total: DensityMatrix,
}

impl StrongReport {
    /// `W + Q_h + Q_c + ΔE_engine`, zero for an energy-conserving cycle.
    pub fn closure(&self) -> f64 {
        self.work + self.heat_hot + self.heat_cold + self.delta_engine
    }
}

/// One cycle from `rho_engine ⊗ fresh qubits`.
pub fn cycle_energetics_strong(
    kind: MachineKind,
    s: &ExchangerSetup,
    rho_engine: &DensityMatrix,
) -> Result<StrongReport> {
    if rho_engine.dim() != ENGINE_DIM {
        return Err(Error::DimensionMismatch(format!("engine state has dimension {}", rho_engine.dim())));
    }
    let u = unitary_cycle(kind, s)?;
    let hs = local_hamiltonians(s)?;
    let rho0 = rho_engine.kron(&fresh_environment(s)?);
    let rho1 = rho0.conjugate_by(u.matrix())?;
    let delta = |h: &Operator| h.expectation(&rho1) - h.expectation(&rho0);
    let reduced = partial_trace(&BipartiteState::new((ENGINE_DIM, ENV_DIM), rho1.clone())?, Subsystem::A);
    Ok(StrongReport {
        work: delta(&hs.h_w),
        heat_hot: delta(&hs.h_h),
        heat_cold: delta(&hs.h_c),
        delta_engine: delta(&hs.h_o),
        rho_engine: reduced,
        rho_total: rho1,
    })
}

/// The engine-only map `ρ ↦ tr_env[U(ρ ⊗ ρ_env)U†]` as a superoperator.
pub fn reduced_engine_map(kind: MachineKind, s: &ExchangerSetup) -> Result<Superoperator> {
    let u = unitary_cycle(kind, s)?;
    let env = fresh_environment(s)?;
    let n = ENGINE_DIM;
    let mut mat = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let input = linalg::kron(&linalg::ket_bra(n, i, j), env.matrix());
            let out = u.matrix() * input * u.matrix().adjoint();
            // Partial trace over the environment by index contraction.
            for a in 0..n {
                for b in 0..n {
                    let mut z = C64::new(0.0, 0.0);
                    for k in 0..ENV_DIM {
                        z += out[(a * ENV_DIM + k, b * ENV_DIM + k)];
                    }
                    mat[(b + n * a, j + n * i)] = z;
                }
            }
        }
    }
    Superoperator::from_matrix(n, mat, liouville::SuperKind::Composite)
}

/// Fixed point of the reduced engine map.
pub fn engine_limit_cycle(kind: MachineKind, s: &ExchangerSetup) -> Result<DensityMatrix> {
    let map = reduced_engine_map(kind, s)?;
    let shifted = map.matrix() - linalg::identity(ENGINE_DIM * ENGINE_DIM);
    let v = liouville::unique_null_vector_scaled(&shifted, 1.0).map_err(|ratio| {
        Error::NonUniqueFixedPoint(format!("reduced engine map has a degenerate fixed space (ratio {ratio:e})"))
    })?;
    liouville::kernel_to_state(ENGINE_DIM, v)
}

/// Norms of the diagonal and off-diagonal parts of `a − b` in the product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorNorms {
    pub diagonal: f64,
    pub off_diagonal: f64,
}

pub fn sector_difference(a: &DensityMatrix, b: &DensityMatrix) -> Result<SectorNorms> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("states of different dimension".into()));
    }
    let d = a.matrix() - b.matrix();
    let (mut diag, mut off) = (0.0, 0.0);
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            let v = d[(i, j)].norm_sqr();
            if i == j {
                diag += v;
            } else {
                off += v;
            }
        }
    }
    Ok(SectorNorms { diagonal: diag.sqrt(), off_diagonal: off.sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangerRow {
    pub tau_cyc: f64,
    pub s_bar: f64,
    pub w: [f64; 3],
    pub q_h: [f64; 3],
    pub q_c: [f64; 3],
}

pub const EXCHANGER_COLUMNS: [&str; 11] = [
    "tau_cyc", "s_bar", "W_cont", "W_2st", "W_4st", "Q_h_cont", "Q_h_2st", "Q_h_4st", "Q_c_cont", "Q_c_2st", "Q_c_4st",
];

/// Per-cycle work and heats of the three machines, each at its own limit cycle.
pub fn exchanger_sweep(s: &ExchangerSetup, taus: &[f64]) -> Result<Vec<ExchangerRow>> {
    s.validate()?;
    taus.par_iter()
        .map(|&tau| {
            let c = s.with_tau(tau);
            let mut row = ExchangerRow {
                tau_cyc: tau,
                s_bar: action(MachineKind::Continuous, &c)?,
                w: [0.0; 3],
                q_h: [0.0; 3],
                q_c: [0.0; 3],
            };
            for (k, kind) in MachineKind::ALL.iter().enumerate() {
                let rho = engine_limit_cycle(*kind, &c)?;
                let r = cycle_energetics_strong(*kind, &c, &rho)?;
                row.w[k] = r.work;
                row.q_h[k] = r.heat_hot;
                row.q_c[k] = r.heat_cold;
            }
            Ok(row)
        })
        .collect()
}

pub fn exchanger_csv(rows: &[ExchangerRow]) -> String {
    let mut out = EXCHANGER_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![r.tau_cyc, r.s_bar];
        cells.extend(r.w);
        cells.extend(r.q_h);
        cells.extend(r.q_c);
        out.push_str(&cells.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
