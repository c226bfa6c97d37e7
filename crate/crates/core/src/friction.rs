//! Quantum friction from non-adiabatic driving.
//!
//! A protocol drives `H_i = H(0)` to `H_f = H(t_f)` unitarily, starting from
//! the Gibbs state at `β_i`. The frictional work is the energy that is
//! dissipated when the driven state `ρ_τ` is then thermalized at `β_f`:
//!
//! `W_fric = Σ_n ε_n^f (⟨ε_n^f|ρ_τ|ε_n^f⟩ − P_n^f) = S(ρ_τ‖ρ_f)/β_f`.
//!
//! The identity only holds when every level is compressed by the same
//! ratio, `ε_n^f/ε_n^i = β_i/β_f`, so the module refuses other protocols.
//! The thermalization stage itself is never simulated.

use rand::Rng;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{self, bures_length, relative_entropy, thermal_state, DensityMatrix, Operator};
use crate::linalg::{self, CMatrix, Eigh, C64};

/// Halving the step must change `ρ_τ` by less than this (max entry).
pub const EVOLUTION_TOL: f64 = 1e-8;
/// Largest number of time steps tried before giving up.
pub const MAX_STEPS: usize = 1 << 20;
const START_STEPS: usize = 64;
/// Relative tolerance of the compression check.
pub const COMPRESSION_TOL: f64 = 1e-9;
/// Relative gap below which the instantaneous spectrum counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Prefactor `c` of the Bures bound `W_fric ≥ c L²/β_f`.
///
/// `8/π` fails on simple qubit protocols (see the tests); `8/π²` follows
/// from `S(ρ‖σ) ≥ −2 ln F ≥ (8/π²) L²` and holds everywhere we looked.
pub const BURES_BOUND_PREFACTOR: f64 = 8.0 / (PI * PI);

type HamiltonianFn = dyn Fn(f64) -> CMatrix + Send + Sync;

#[derive(Clone)]
pub struct DriveProtocol {
    dim: usize,
    t_f: f64,
    beta_i: f64,
    beta_f: f64,
    h: Arc<HamiltonianFn>,
}

impl std::fmt::Debug for DriveProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DriveProtocol")
            .field("dim", &self.dim)
            .field("t_f", &self.t_f)
            .field("beta_i", &self.beta_i)
            .field("beta_f", &self.beta_f)
            .finish()
    }
}

impl DriveProtocol {
    /// `h` must return a Hermitian `dim × dim` matrix for every `t`,
    /// including slightly outside `[0, t_f]` (finite differences peek there).
    pub fn new(
        dim: usize,
        t_f: f64,
        beta_i: f64,
        beta_f: f64,
        h: impl Fn(f64) -> CMatrix + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return invalid("protocol dimension must be positive");
        }
        if !(t_f.is_finite() && t_f >= 0.0) {
            return invalid(format!("t_f must be finite and non-negative, got {t_f}"));
        }
        for (name, b) in [("beta_i", beta_i), ("beta_f", beta_f)] {
            if !(b.is_finite() && b > 0.0) {
                return invalid(format!("{name} must be positive and finite, got {b}"));
            }
        }
        let p = DriveProtocol { dim, t_f, beta_i, beta_f, h: Arc::new(h) };
        for t in [0.0, 0.5 * t_f, t_f] {
            let m = (p.h)(t);
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch(format!("H({t}) is {}×{}", m.nrows(), m.ncols())));
            }
            if !linalg::is_hermitian(&m, hilbert::HERMITIAN_TOL) {
                return invalid(format!("H({t}) is not hermitian"));
            }
        }
        Ok(p)
    }

    /// `H(t) = (1 − t/t_f) H_i + (t/t_f) H_f`
    pub fn linear(h_i: &Operator, h_f: &Operator, t_f: f64, beta_i: f64, beta_f: f64) -> Result<Self> {
        if h_i.dim() != h_f.dim() {
            return Err(Error::DimensionMismatch("H_i and H_f differ in dimension".into()));
        }
        let (a, b) = (h_i.matrix().clone(), h_f.matrix().clone());
        DriveProtocol::new(h_i.dim(), t_f, beta_i, beta_f, move |t| {
            let s = if t_f > 0.0 { t / t_f } else { 1.0 };
            a.scale(1.0 - s) + b.scale(s)
        })
    }

    /// Qubit in a field whose magnitude goes linearly from `omega_i` to
    /// `omega_f` while its direction turns by `theta_f` in the x–z plane:
    /// `H = (ω(t)/2)(cos θ(t) σ_z + sin θ(t) σ_x)`. `β_f` is set by the
    /// compression condition.
    pub fn rotating_qubit(omega_i: f64, omega_f: f64, theta_f: f64, t_f: f64, beta_i: f64) -> Result<Self> {
        if !(omega_i > 0.0 && omega_f > 0.0) {
            return invalid("field magnitudes must be positive");
        }
        let beta_f = beta_i * omega_i / omega_f;
        DriveProtocol::new(2, t_f, beta_i, beta_f, move |t| {
            let s = if t_f > 0.0 { t / t_f } else { 1.0 };
            let w = omega_i + (omega_f - omega_i) * s;
            let th = theta_f * s;
            let (c, sn) = (th.cos(), th.sin());
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(0.5 * w * c, 0.0),
                    C64::new(0.5 * w * sn, 0.0),
                    C64::new(0.5 * w * sn, 0.0),
                    C64::new(-0.5 * w * c, 0.0),
                ],
            )
        })
    }

    /// `H(t) = f(t) H_0` with `f(0) = 1`; all Hamiltonians commute.
    pub fn scaled(
        h0: &Operator,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_f: f64,
        beta_i: f64,
    ) -> Result<Self> {
        let ratio = f(t_f) / f(0.0);
        if !(ratio.is_finite() && ratio > 0.0) {
            return invalid("scaling function must stay positive");
        }
        let m = h0.matrix().clone();
        DriveProtocol::new(h0.dim(), t_f, beta_i, beta_i / ratio, move |t| m.scale(f(t)))
    }

    /// Random protocol satisfying the compression condition: a random
    /// positive spectrum for `H_i`, `H_f = r V H_i V†` with a Haar unitary
    /// `V`, linear interpolation in between.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, t_f: f64, beta_i: f64, ratio: f64) -> Result<Self> {
        let levels: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..2.0)).collect();
        let h_i = Operator::from_real_diagonal(&levels)?;
        let w = hilbert::random::unitary(rng, dim);
        let h_f = Operator::hermitian(&w * h_i.matrix() * w.adjoint())?.scale(ratio);
        let u = hilbert::random::unitary(rng, dim);
        let rot = |h: &Operator| Operator::hermitian(&u * h.matrix() * u.adjoint());
        DriveProtocol::linear(&rot(&h_i)?, &rot(&h_f)?, t_f, beta_i, beta_i / ratio)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn beta_i(&self) -> f64 {
        self.beta_i
    }

    pub fn beta_f(&self) -> f64 {
        self.beta_f
    }

    pub fn hamiltonian_matrix(&self, t: f64) -> CMatrix {
        linalg::hermitize(&(self.h)(t))
    }

    pub fn hamiltonian(&self, t: f64) -> Operator {
        Operator::hermitian(self.hamiltonian_matrix(t)).expect("square by construction")
    }

    /// `ρ_i`, the Gibbs state of `H_i` at `β_i`.
    pub fn initial_state(&self) -> Result<DensityMatrix> {
        thermal_state(&self.hamiltonian(0.0), self.beta_i)
    }

    /// `ρ_f`, the Gibbs state of `H_f` at `β_f`.
    pub fn final_thermal_state(&self) -> Result<DensityMatrix> {
        thermal_state(&self.hamiltonian(self.t_f), self.beta_f)
    }

    /// `Ḣ(t)` by second-order finite differences.
    pub fn hamiltonian_derivative(&self, t: f64) -> CMatrix {
        let d = 1e-5 * self.t_f.max(1e-300);
        (self.hamiltonian_matrix(t + d) - self.hamiltonian_matrix(t - d)).unscale(2.0 * d)
    }

    /// Checks `ε_n^f/ε_n^i = β_i/β_f` level by level.
    pub fn check_compression(&self) -> Result<()> {
        let ei = Eigh::new(&self.hamiltonian_matrix(0.0)).values;
        let ef = Eigh::new(&self.hamiltonian_matrix(self.t_f)).values;
        let r = self.beta_i / self.beta_f;
        let scale = ef.iter().chain(&ei).fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        for (n, (a, b)) in ei.iter().zip(&ef).enumerate() {
            if (b - r * a).abs() > COMPRESSION_TOL * scale {
                return Err(Error::Unsupported(format!(
                    "level {n} is compressed by {} but beta_i/beta_f = {r}",
                    b / a
                )));
            }
        }
        Ok(())
    }
}

fn propagator(p: &DriveProtocol, steps: usize) -> CMatrix {
    let dt = p.t_f / steps as f64;
    let mut u = linalg::identity(p.dim);
    for k in 0..steps {
        let mid = (k as f64 + 0.5) * dt;
        u = linalg::unitary_exp(&p.hamiltonian_matrix(mid), dt) * u;
    }
    u
}

/// Result of the step-doubling loop.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub rho_tau: DensityMatrix,
    pub steps: usize,
    /// Max-entry change of `ρ_τ` in the last halving.
    pub change: f64,
}

/// `ρ_τ` by a product of midpoint exponentials, doubling the step count
/// until the state stops moving.
pub fn evolve(p: &DriveProtocol) -> Result<Evolution> {
    let rho_i = p.initial_state()?;
    if p.t_f == 0.0 {
        return Ok(Evolution { rho_tau: rho_i, steps: 0, change: 0.0 });
    }
    let mut steps = START_STEPS;
    let mut prev = rho_i.conjugate_by(&propagator(p, steps))?;
    while steps < MAX_STEPS {
        steps *= 2;
        let next = rho_i.conjugate_by(&propagator(p, steps))?;
        let change = linalg::max_abs_diff(next.matrix(), prev.matrix());
        if change < EVOLUTION_TOL {
            return Ok(Evolution { rho_tau: next, steps, change });
        }
        prev = next;
    }
    Err(Error::Convergence(format!("time stepping did not settle within {MAX_STEPS} steps")))
}

pub fn evolve_unitary(p: &DriveProtocol) -> Result<DensityMatrix> {
    evolve(p).map(|e| e.rho_tau)
}

#[derive(Clone, Debug)]
pub struct FrictionReport {
    pub w_fric: f64,
    /// `S(ρ_τ‖ρ_f)/β_f`
    pub entropy_form: f64,
    pub bures_bound: f64,
    pub w_real: f64,
    pub w_adiabatic: f64,
    pub rho_tau: DensityMatrix,
    pub rho_f: DensityMatrix,
}

/// `Σ_n ε_n^f(⟨ε_n^f|ρ_τ|ε_n^f⟩ − P_n^f)` for a given driven state.
pub fn friction_work_of(p: &DriveProtocol, rho_tau: &DensityMatrix) -> Result<f64> {
    p.check_compression()?;
    let eig = Eigh::new(&p.hamiltonian_matrix(p.t_f));
    let pf = hilbert::boltzmann_populations(&eig.values, p.beta_f)?;
    let v = &eig.vectors;
    let w = (0..p.dim)
        .map(|n| {
            let col = v.column(n);
            let pop = (col.adjoint() * rho_tau.matrix() * col)[(0, 0)].re;
            eig.values[n] * (pop - pf[n])
        })
        .sum();
    Ok(w)
}

pub fn friction_work(p: &DriveProtocol) -> Result<f64> {
    p.check_compression()?;
    friction_work_of(p, &evolve_unitary(p)?)
}

/// `c L²(ρ_τ, ρ_f)/β_f` with `c = BURES_BOUND_PREFACTOR`.
pub fn bures_bound(p: &DriveProtocol) -> Result<f64> {
    p.check_compression()?;
    bures_bound_with(p, &evolve_unitary(p)?, BURES_BOUND_PREFACTOR)
}

/// Bures bound with an explicit prefactor, for a given driven state.
pub fn bures_bound_with(p: &DriveProtocol, rho_tau: &DensityMatrix, prefactor: f64) -> Result<f64> {
    let l = bures_length(rho_tau, &p.final_thermal_state()?)?;
    Ok(prefactor * l * l / p.beta_f)
}

/// Every friction quantity from a single evolution.
pub fn analyze(p: &DriveProtocol) -> Result<FrictionReport> {
    p.check_compression()?;
    let rho_tau = evolve_unitary(p)?;
    let rho_f = p.final_thermal_state()?;
    let rho_i = p.initial_state()?;
    let h_i = p.hamiltonian(0.0);
    let h_f = p.hamiltonian(p.t_f);
    let w_fric = friction_work_of(p, &rho_tau)?;
    let entropy_form = relative_entropy(&rho_tau, &rho_f)? / p.beta_f;
    let bures_bound = bures_bound_with(p, &rho_tau, BURES_BOUND_PREFACTOR)?;
    let e_i = h_i.expectation(&rho_i);
    Ok(FrictionReport {
        w_fric,
        entropy_form,
        bures_bound,
        w_real: h_f.expectation(&rho_tau) - e_i,
        w_adiabatic: h_f.expectation(&rho_f) - e_i,
        rho_tau,
        rho_f,
    })
}

/// Instantaneous power split along a protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSplit {
    pub times: Vec<f64>,
    pub p_clas: Vec<f64>,
    pub p_coh: Vec<f64>,
    /// `tr(Ḣρ)`, computed independently of the split.
    pub p_total: Vec<f64>,
}

impl PowerSplit {
    /// Trapezoidal `∫(P_clas + P_coh) dt`.
    pub fn integrated_work(&self) -> f64 {
        self.times
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let a = self.p_clas[k] + self.p_coh[k];
                let b = self.p_clas[k + 1] + self.p_coh[k + 1];
                0.5 * (a + b) * (w[1] - w[0])
            })
            .sum()
    }
}

/// `ρ(t_k)` on `steps + 1` equally spaced points, midpoint propagation.
pub fn trajectory(p: &DriveProtocol, steps: usize) -> Result<Vec<(f64, DensityMatrix)>> {
    let mut rho = p.initial_state()?;
    let dt = p.t_f / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, rho.clone()));
    for k in 0..steps {
        let mid = (k as f64 + 0.5) * dt;
        rho = rho.conjugate_by(&linalg::unitary_exp(&p.hamiltonian_matrix(mid), dt))?;
        out.push(((k + 1) as f64 * dt, rho.clone()));
    }
    Ok(out)
}

fn check_gaps(values: &[f64], t: f64) -> Result<()> {
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    for w in values.windows(2) {
        let gap = w[1] - w[0];
        if gap < DEGENERACY_TOL * scale {
            return Err(Error::Degeneracy { time: t, gap });
        }
    }
    Ok(())
}

/// `⟨ε_l|ε̇_n⟩ = ⟨ε_l|Ḣ|ε_n⟩/(ε_n − ε_l)` for `l ≠ n`, zero on the diagonal
/// (parallel-transport gauge).
pub fn eigvec_derivative(p: &DriveProtocol, t: f64) -> Result<CMatrix> {
    let eig = Eigh::new(&p.hamiltonian_matrix(t));
    check_gaps(&eig.values, t)?;
    let hd = eig.vectors.adjoint() * p.hamiltonian_derivative(t) * &eig.vectors;
    Ok(CMatrix::from_fn(p.dim, p.dim, |l, n| {
        if l == n {
            C64::new(0.0, 0.0)
        } else {
            hd[(l, n)] / (eig.values[n] - eig.values[l])
        }
    }))
}

/// The same matrix from finite differences of eigenvectors, with each
/// neighbouring eigenvector phase-aligned to the one at `t`.
pub fn eigvec_derivative_fd(p: &DriveProtocol, t: f64, dt: f64) -> Result<CMatrix> {
    let e0 = Eigh::new(&p.hamiltonian_matrix(t));
    check_gaps(&e0.values, t)?;
    let aligned = |s: f64| -> CMatrix {
        let mut v = Eigh::new(&p.hamiltonian_matrix(s)).vectors;
        for n in 0..p.dim {
            let ov: C64 = (e0.vectors.column(n).adjoint() * v.column(n))[(0, 0)];
            if ov.norm() > 0.0 {
                let phase = ov.conj() / ov.norm();
                for r in 0..p.dim {
                    v[(r, n)] *= phase;
                }
            }
        }
        v
    };
    let dv = (aligned(t + dt) - aligned(t - dt)).unscale(2.0 * dt);
    Ok(e0.vectors.adjoint() * dv)
}

/// `P_clas = Σ ε̇_n ρ_nn`, `P_coh = Σ (ε_n − ε_l)⟨ε_l|ε̇_n⟩ρ_nl` in the
/// instantaneous eigenbasis, on the given trajectory.
pub fn power_split_on(p: &DriveProtocol, traj: &[(f64, DensityMatrix)]) -> Result<PowerSplit> {
    let mut out = PowerSplit { times: vec![], p_clas: vec![], p_coh: vec![], p_total: vec![] };
    for (t, rho) in traj {
        let eig = Eigh::new(&p.hamiltonian_matrix(*t));
        check_gaps(&eig.values, *t)?;
        let hdot = p.hamiltonian_derivative(*t);
        let v = &eig.vectors;
        let hd = v.adjoint() * &hdot * v;
        let r = v.adjoint() * rho.matrix() * v;
        let d = eigvec_derivative(p, *t)?;
        let mut clas = 0.0;
        let mut coh = C64::new(0.0, 0.0);
        for n in 0..p.dim {
            clas += hd[(n, n)].re * r[(n, n)].re;
            for l in 0..p.dim {
                if l != n {
                    coh += (eig.values[n] - eig.values[l]) * d[(l, n)] * r[(n, l)];
                }
            }
        }
        out.times.push(*t);
        out.p_clas.push(clas);
        out.p_coh.push(coh.re);
        out.p_total.push((hdot * rho.matrix()).trace().re);
    }
    Ok(out)
}

/// Power split along the converged trajectory of `p`.
pub fn power_split(p: &DriveProtocol) -> Result<PowerSplit> {
    let steps = evolve(p)?.steps.max(START_STEPS);
    power_split_on(p, &trajectory(p, steps)?)
}
