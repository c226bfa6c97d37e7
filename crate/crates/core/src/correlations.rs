//! Heat exchange between two locally thermal systems that share correlations.
//!
//! Two systems `A` and `B` start with thermal marginals at `β_A` and `β_B`
//! and exchange energy through a joint unitary that commutes with
//! `H_A + H_B`. No work is done, so `Q_A = −Q_B`. Correlations can reverse
//! the direction of the flow. Classical correlations can push at most
//! `ln D/|β_A − β_B|` against the gradient, so a larger anomalous flow
//! certifies that the initial state was entangled.
//!
//! Index convention for `A ⊗ B`: `a·d_B + b`, so for two qubits the basis is
//! `|00⟩, |01⟩, |10⟩, |11⟩` with the first label belonging to `A`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{
    self, partial_trace, thermal_state, von_neumann_entropy, BipartiteState, DensityMatrix, Operator, Subsystem,
};
use crate::linalg::{self, CMatrix, C64};
use crate::otto::fmt17;

/// `‖ρ_X − ρ_X^th‖_max` allowed for a marginal to count as thermal.
pub const MARGINAL_TOL: f64 = 1e-9;
/// `‖[U, H_A + H_B]‖_max` allowed, relative to the energy scale.
pub const CONSERVATION_TOL: f64 = 1e-10;

/// `S_A + S_B − S_AB`
pub fn mutual_information(s: &BipartiteState) -> f64 {
    let a = partial_trace(s, Subsystem::A);
    let b = partial_trace(s, Subsystem::B);
    von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(s.state())
}

fn check_orthonormal(basis: &CMatrix, d: usize, name: &str) -> Result<()> {
    if basis.nrows() != d || basis.ncols() != d {
        return Err(Error::DimensionMismatch(format!("basis {name} must be {d}×{d}")));
    }
    let g = basis.adjoint() * basis;
    if linalg::max_abs_diff(&g, &linalg::identity(d)) > 1e-10 {
        return invalid(format!("basis {name} is not orthonormal"));
    }
    Ok(())
}

/// `(1/D) Σ_k |e_k⟩⟨e_k| ⊗ |f_k⟩⟨f_k|` with the bases given as columns.
pub fn perfectly_correlated_state(d: usize, basis_a: &CMatrix, basis_b: &CMatrix) -> Result<BipartiteState> {
    if d == 0 {
        return invalid("dimension must be positive");
    }
    check_orthonormal(basis_a, d, "A")?;
    check_orthonormal(basis_b, d, "B")?;
    let mut m = CMatrix::zeros(d * d, d * d);
    for k in 0..d {
        let ea = basis_a.column(k) * basis_a.column(k).adjoint();
        let fb = basis_b.column(k) * basis_b.column(k).adjoint();
        m += linalg::kron(&ea, &fb).unscale(d as f64);
    }
    BipartiteState::new((d, d), DensityMatrix::from_numerical(m)?)
}

/// Energy-conserving rotation by `θ` inside the `{|01⟩, |10⟩}` doublet of
/// two qubits with equal gaps: `|01⟩ → cos θ|01⟩ + sin θ|10⟩`.
/// `θ = π/2` swaps the doublet.
pub fn partial_swap(theta: f64, gap_a: f64, gap_b: f64) -> Result<CMatrix> {
    let scale = gap_a.abs().max(gap_b.abs()).max(f64::MIN_POSITIVE);
    if (gap_a - gap_b).abs() > 1e-12 * scale {
        return Err(Error::OffResonance(format!("qubit gaps differ: {gap_a} vs {gap_b}")));
    }
    let (s, c) = theta.sin_cos();
    let mut u = linalg::identity(4);
    u[(1, 1)] = C64::new(c, 0.0);
    u[(2, 2)] = C64::new(c, 0.0);
    u[(2, 1)] = C64::new(s, 0.0);
    u[(1, 2)] = C64::new(-s, 0.0);
    Ok(u)
}

#[derive(Clone, Debug)]
pub struct ExchangeScenario {
    pub h_a: Operator,
    pub h_b: Operator,
    pub beta_a: f64,
    pub beta_b: f64,
    pub rho_ab: BipartiteState,
    pub u: CMatrix,
}

impl ExchangeScenario {
    pub fn new(
        h_a: Operator,
        h_b: Operator,
        beta_a: f64,
        beta_b: f64,
        rho_ab: BipartiteState,
        u: CMatrix,
    ) -> Result<Self> {
        let (da, db) = rho_ab.dims();
        if h_a.dim() != da || h_b.dim() != db || u.nrows() != da * db || u.ncols() != da * db {
            return Err(Error::DimensionMismatch("scenario parts have inconsistent dimensions".into()));
        }
        for (name, h, beta, keep) in [("A", &h_a, beta_a, Subsystem::A), ("B", &h_b, beta_b, Subsystem::B)] {
            let th = thermal_state(h, beta)?;
            let marginal = partial_trace(&rho_ab, keep);
            let dev = linalg::max_abs_diff(th.matrix(), marginal.matrix());
            if dev > MARGINAL_TOL {
                return invalid(format!("marginal {name} deviates from its thermal state by {dev:e}"));
            }
        }
        if linalg::max_abs_diff(&(u.adjoint() * &u), &linalg::identity(da * db)) > 1e-10 {
            return invalid("joint evolution is not unitary");
        }
        let h_tot = total_hamiltonian(&h_a, &h_b);
        let scale = linalg::max_abs(&h_tot).max(f64::MIN_POSITIVE);
        if linalg::max_abs(&linalg::commutator(&u, &h_tot)) > CONSERVATION_TOL * scale {
            return invalid("joint unitary does not conserve H_A + H_B");
        }
        Ok(ExchangeScenario { h_a, h_b, beta_a, beta_b, rho_ab, u })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.rho_ab.dims()
    }
}

fn total_hamiltonian(h_a: &Operator, h_b: &Operator) -> CMatrix {
    linalg::kron(h_a.matrix(), &linalg::identity(h_b.dim())) + linalg::kron(&linalg::identity(h_a.dim()), h_b.matrix())
}

#[derive(Clone, Debug)]
pub struct HeatExchange {
    pub q_a: f64,
    pub q_b: f64,
    pub i_initial: f64,
    pub i_final: f64,
    pub delta_s_a: f64,
    pub delta_s_b: f64,
    pub rho_final: BipartiteState,
}

impl HeatExchange {
    /// `I_final − I_initial`
    pub fn delta_i(&self) -> f64 {
        self.i_final - self.i_initial
    }
}

pub fn heat_exchange(s: &ExchangeScenario) -> Result<HeatExchange> {
    let fin = s.rho_ab.evolve(&s.u)?;
    let (a0, b0) = (partial_trace(&s.rho_ab, Subsystem::A), partial_trace(&s.rho_ab, Subsystem::B));
    let (a1, b1) = (partial_trace(&fin, Subsystem::A), partial_trace(&fin, Subsystem::B));
    Ok(HeatExchange {
        q_a: s.h_a.expectation(&a1) - s.h_a.expectation(&a0),
        q_b: s.h_b.expectation(&b1) - s.h_b.expectation(&b0),
        i_initial: mutual_information(&s.rho_ab),
        i_final: mutual_information(&fin),
        delta_s_a: von_neumann_entropy(&a1) - von_neumann_entropy(&a0),
        delta_s_b: von_neumann_entropy(&b1) - von_neumann_entropy(&b0),
        rho_final: fin,
    })
}

/// `β_A Q_A + β_B Q_B − ΔI`, non-negative for thermal marginals.
pub fn clausius_slack(s: &ExchangeScenario, h: &HeatExchange) -> f64 {
    s.beta_a * h.q_a + s.beta_b * h.q_b - h.delta_i()
}

/// Heat gained by the hotter of the two systems; positive means the flow
/// ran against the temperature gradient.
pub fn anomalous_heat(s: &ExchangeScenario, h: &HeatExchange) -> f64 {
    if s.beta_a < s.beta_b {
        h.q_a
    } else {
        h.q_b
    }
}

/// `ln D/|β_A − β_B|`
pub fn q_clas_bound(d: usize, beta_a: f64, beta_b: f64) -> Result<f64> {
    if d < 2 {
        return invalid("dimension must be at least 2");
    }
    let gap = (beta_a - beta_b).abs();
    if gap == 0.0 || !gap.is_finite() {
        return Err(Error::Divergence("equal temperatures leave the classical bound undefined".into()));
    }
    Ok((d as f64).ln() / gap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Entangled => "entangled",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `measured_q` is the anomalous heat (cold to hot). Only a flow beyond
/// the classical bound is conclusive.
pub fn entanglement_witness(measured_q: f64, d: usize, beta_a: f64, beta_b: f64) -> Result<Verdict> {
    let bound = q_clas_bound(d, beta_a, beta_b)?;
    Ok(if measured_q > bound { Verdict::Entangled } else { Verdict::Inconclusive })
}

/// Thermal populations `[p_0, p_1]` of a qubit with gap `gap`.
pub fn qubit_populations(gap: f64, beta: f64) -> Result<[f64; 2]> {
    let p = hilbert::boltzmann_populations(&[0.0, gap], beta)?;
    Ok([p[0], p[1]])
}

/// Two equal-gap qubits with thermal marginals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitPair {
    pub gap: f64,
    pub beta_a: f64,
    pub beta_b: f64,
}

impl QubitPair {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap.is_finite() && self.gap > 0.0) {
            return invalid("qubit gap must be positive");
        }
        for b in [self.beta_a, self.beta_b] {
            if !(b.is_finite() && b >= 0.0) {
                return invalid("inverse temperatures must be finite and non-negative");
            }
        }
        if self.beta_a == self.beta_b {
            return invalid("the two qubits need different temperatures");
        }
        Ok(())
    }

    fn pops(&self) -> Result<([f64; 2], [f64; 2])> {
        Ok((qubit_populations(self.gap, self.beta_a)?, qubit_populations(self.gap, self.beta_b)?))
    }

    pub fn hamiltonian(&self) -> Operator {
        Operator::from_real_diagonal(&[0.0, self.gap]).expect("diagonal")
    }

    /// Largest `|χ|` that keeps the χ-family positive: `√(a_0 b_1 a_1 b_0)`.
    pub fn chi_max(&self) -> Result<f64> {
        self.chi_max_shifted(0.0)
    }

    /// Positivity limit on `|χ|` for the shifted family [`Self::x_state`]:
    /// `√((a_0b_1 + c)(a_1b_0 + c))`.
    pub fn chi_max_shifted(&self, c: f64) -> Result<f64> {
        let (a, b) = self.pops()?;
        Ok(((a[0] * b[1] + c) * (a[1] * b[0] + c)).max(0.0).sqrt())
    }

    /// `|χ|` above which [`Self::x_state`] is entangled (partial-transpose
    /// test): `√((a_0b_0 − c)(a_1b_1 − c))`. At `c = 0` this equals
    /// [`Self::chi_max`], so the unshifted χ-family is never entangled.
    pub fn chi_entanglement_threshold(&self, c: f64) -> Result<f64> {
        let (a, b) = self.pops()?;
        Ok(((a[0] * b[0] - c) * (a[1] * b[1] - c)).max(0.0).sqrt())
    }

    /// `ρ_A ⊗ ρ_B + χ(|01⟩⟨10| + |10⟩⟨01|)`
    pub fn chi_state(&self, chi: f64) -> Result<BipartiteState> {
        self.x_state(0.0, chi)
    }

    /// Zero-discord diagonal shifted by `c` plus the doublet coherence `χ`.
    /// The marginals stay thermal for every `(c, χ)`.
    pub fn x_state(&self, c: f64, chi: f64) -> Result<BipartiteState> {
        let (a, b) = self.pops()?;
        let mut m = linalg::from_real_diagonal(&[a[0] * b[0] - c, a[0] * b[1] + c, a[1] * b[0] + c, a[1] * b[1] - c]);
        m[(1, 2)] = C64::new(chi, 0.0);
        m[(2, 1)] = C64::new(chi, 0.0);
        BipartiteState::new((2, 2), DensityMatrix::new(m)?)
    }

    /// Whether [`Self::x_state`] is entangled.
    pub fn x_state_entangled(&self, c: f64, chi: f64) -> Result<bool> {
        Ok(chi.abs() > self.chi_entanglement_threshold(c)?)
    }

    /// Largest diagonal shift, `min(a_0b_0, a_1b_1)`; it leaves the most
    /// room for entanglement.
    pub fn max_shift(&self) -> Result<f64> {
        Ok(self.zero_discord_range()?.1)
    }

    /// Range of `c` that keeps [`Self::zero_discord_state`] positive.
    pub fn zero_discord_range(&self) -> Result<(f64, f64)> {
        let (a, b) = self.pops()?;
        Ok((-(a[0] * b[1]).min(a[1] * b[0]), (a[0] * b[0]).min(a[1] * b[1])))
    }

    /// Diagonal (zero-discord) state with the same marginals:
    /// `diag(a_0b_0 − c, a_0b_1 + c, a_1b_0 + c, a_1b_1 − c)`.
    pub fn zero_discord_state(&self, c: f64) -> Result<BipartiteState> {
        self.x_state(c, 0.0)
    }

    pub fn scenario(&self, rho: BipartiteState, theta: f64) -> Result<ExchangeScenario> {
        self.validate()?;
        let h = self.hamiltonian();
        ExchangeScenario::new(h.clone(), h, self.beta_a, self.beta_b, rho, partial_swap(theta, self.gap, self.gap)?)
    }

    pub fn q_clas(&self) -> Result<f64> {
        q_clas_bound(2, self.beta_a, self.beta_b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub theta: f64,
    pub chi: f64,
    pub q_a: f64,
    pub i_q_initial: f64,
    pub q_clas: f64,
    pub verdict: Verdict,
}

pub const WITNESS_COLUMNS: [&str; 6] = ["theta", "chi", "Q_A", "I_q_initial", "Q_clas", "witness_verdict"];

/// [`QubitPair::x_state`] with a fixed shift `c` over a `θ × χ` grid; rows
/// ordered by `χ`, then `θ`.
pub fn witness_sweep(pair: &QubitPair, c: f64, thetas: &[f64], chis: &[f64]) -> Result<Vec<WitnessRow>> {
    pair.validate()?;
    let q_clas = pair.q_clas()?;
    let rows: Result<Vec<Vec<WitnessRow>>> = chis
        .par_iter()
        .map(|&chi| {
            let rho = pair.x_state(c, chi)?;
            let i0 = mutual_information(&rho);
            thetas
                .iter()
                .map(|&theta| {
                    let sc = pair.scenario(rho.clone(), theta)?;
                    let h = heat_exchange(&sc)?;
                    let q = anomalous_heat(&sc, &h);
                    Ok(WitnessRow {
                        theta,
                        chi,
                        q_a: h.q_a,
                        i_q_initial: i0,
                        q_clas,
                        verdict: entanglement_witness(q, 2, pair.beta_a, pair.beta_b)?,
                    })
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

pub fn witness_csv(rows: &[WitnessRow]) -> String {
    let mut out = WITNESS_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let nums: Vec<String> = [r.theta, r.chi, r.q_a, r.i_q_initial, r.q_clas].iter().map(|x| fmt17(*x)).collect();
        out.push_str(&nums.join(","));
        out.push(',');
        out.push_str(r.verdict.as_str());
        out.push('\n');
    }
    out
}

/// Largest anomalous heat over `θ` grid and a family of states.
pub fn best_anomalous_heat(pair: &QubitPair, states: &[BipartiteState], thetas: &[f64]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for rho in states {
        for &theta in thetas {
            let sc = pair.scenario(rho.clone(), theta)?;
            let h = heat_exchange(&sc)?;
            best = best.max(anomalous_heat(&sc, &h));
        }
    }
    Ok(best)
}
