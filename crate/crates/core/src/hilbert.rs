//! Operators, density matrices and the state functionals built on them.
//!
//! Matrix functions (exponential, logarithm, square root) are evaluated in
//! the eigenbasis. Eigenvalues of a density matrix that fall below zero by
//! no more than [`CLIP_TOL`] are clipped and the state renormalized.

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix, CVector, Eigh, C64};

/// Relative tolerance on `max|A - A†|` for the Hermitian flag.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Negative eigenvalues of at most this size are clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Support tolerance for the relative entropy.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: CMatrix,
    hermitian: bool,
}

impl Operator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let hermitian = linalg::is_hermitian(&mat, HERMITIAN_TOL);
        Ok(Operator { mat, hermitian })
    }

    /// Builds an operator that must be Hermitian. The stored matrix is
    /// symmetrized so that downstream eigensolvers see exact Hermiticity.
    pub fn hermitian(mat: CMatrix) -> Result<Self> {
        let op = Operator::new(mat)?;
        if !op.hermitian {
            return invalid("operator is not hermitian");
        }
        Ok(Operator { mat: linalg::hermitize(&op.mat), hermitian: true })
    }

    pub fn from_real_diagonal(d: &[f64]) -> Result<Self> {
        Operator::hermitian(linalg::from_real_diagonal(d))
    }

    pub fn identity(n: usize) -> Self {
        Operator { mat: linalg::identity(n), hermitian: true }
    }

    pub fn zeros(n: usize) -> Self {
        Operator { mat: CMatrix::zeros(n, n), hermitian: true }
    }

    /// `|i⟩⟨j|`
    pub fn ket_bra(n: usize, i: usize, j: usize) -> Self {
        Operator { mat: linalg::ket_bra(n, i, j), hermitian: i == j }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dagger(&self) -> Operator {
        Operator { mat: self.mat.adjoint(), hermitian: self.hermitian }
    }

    pub fn scale(&self, s: f64) -> Operator {
        Operator { mat: self.mat.scale(s), hermitian: self.hermitian }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Operator::new(&self.mat + &other.mat)
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Operator::new(&self.mat * &other.mat)
    }

    pub fn kron(&self, other: &Operator) -> Operator {
        Operator { mat: linalg::kron(&self.mat, &other.mat), hermitian: self.hermitian && other.hermitian }
    }

    pub fn commutator(&self, other: &Operator) -> Result<CMatrix> {
        self.check_dim(other)?;
        Ok(linalg::commutator(&self.mat, &other.mat))
    }

    /// `Re tr(ρ A)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        (self.mat.component_mul(&rho.mat.transpose())).sum().re
    }

    pub fn eigh(&self) -> Result<Eigh> {
        if !self.hermitian {
            return invalid("eigendecomposition requires a hermitian operator");
        }
        Ok(Eigh::new(&self.mat))
    }

    fn check_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }
}

/// A trace-one positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity. Small negative
    /// eigenvalues within [`CLIP_TOL`] are accepted as they are.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let op = Operator::new(mat)?;
        if !op.hermitian {
            return invalid("density matrix is not hermitian");
        }
        let mat = linalg::hermitize(&op.mat);
        let tr = linalg::trace(&mat).re;
        if (tr - 1.0).abs() > STATE_TOL {
            return invalid(format!("density matrix trace is {tr}"));
        }
        let min = Eigh::new(&mat).values[0];
        if min < -STATE_TOL {
            return invalid(format!("density matrix has eigenvalue {min:e}"));
        }
        Ok(DensityMatrix { mat })
    }

    /// Hermitizes, divides by the trace, and clips eigenvalues in
    /// `[-CLIP_TOL, 0)` to zero before renormalizing. Used on the output of
    /// numerical propagation, where round-off leaves tiny violations.
    pub fn from_numerical(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch("state must be square".into()));
        }
        let h = linalg::hermitize(&mat);
        let tr = linalg::trace(&h).re;
        if !(tr.is_finite() && tr > 0.0) {
            return invalid(format!("state has non-positive trace {tr}"));
        }
        let h = h.unscale(tr);
        let eig = Eigh::new(&h);
        if eig.values[0] < -CLIP_TOL.max(1e-9) {
            return invalid(format!("state has eigenvalue {:e}", eig.values[0]));
        }
        if eig.values[0] >= 0.0 {
            return Ok(DensityMatrix { mat: h });
        }
        let clipped = eig.map_real(|x| x.max(0.0));
        let tr = linalg::trace(&clipped).re;
        Ok(DensityMatrix { mat: clipped.unscale(tr) })
    }

    pub fn pure(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return invalid("zero ket");
        }
        let k = ket.unscale(norm);
        Ok(DensityMatrix { mat: &k * k.adjoint() })
    }

    pub fn basis(n: usize, i: usize) -> Self {
        DensityMatrix { mat: linalg::ket_bra(n, i, i) }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix { mat: linalg::identity(n).unscale(n as f64) }
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        DensityMatrix::new(linalg::from_real_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn as_operator(&self) -> Operator {
        Operator { mat: self.mat.clone(), hermitian: true }
    }

    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        Eigh::new(&self.mat).values
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || !u.is_square() {
            return Err(Error::DimensionMismatch("unitary and state differ".into()));
        }
        DensityMatrix::from_numerical(u * &self.mat * u.adjoint())
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { mat: linalg::kron(&self.mat, &other.mat) }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 {
        return invalid(format!("inverse temperature must be >= 0, got {beta}"));
    }
    Ok(())
}

/// Gibbs weights `e^{-β(E_n - E_0)}` normalized to one, with `β = +∞`
/// giving the uniform distribution over the ground space.
pub fn boltzmann_populations(levels: &[f64], beta: f64) -> Result<Vec<f64>> {
    check_beta(beta)?;
    if levels.is_empty() {
        return invalid("empty spectrum");
    }
    let e0 = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = levels.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(1.0);
    let weights: Vec<f64> = if beta.is_infinite() {
        levels.iter().map(|&e| if e - e0 <= 1e-12 * scale { 1.0 } else { 0.0 }).collect()
    } else {
        levels.iter().map(|&e| (-beta * (e - e0)).exp()).collect()
    };
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// `ln Z` for `Z = tr e^{-βH}` at finite β.
pub fn log_partition_function(h: &Operator, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta.is_infinite() {
        return invalid("partition function diverges in log at beta = inf");
    }
    let vals = h.eigh()?.values;
    let e0 = vals[0];
    let z: f64 = vals.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
    Ok(z.ln() - beta * e0)
}

/// `e^{-βH}/Z` evaluated in the eigenbasis of `H`.
pub fn thermal_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    let eig = h.eigh()?;
    let p = boltzmann_populations(&eig.values, beta)?;
    Ok(DensityMatrix { mat: linalg::hermitize(&eig.reconstruct(&p)) })
}

fn entropy_of(values: &[f64]) -> f64 {
    values.iter().filter(|&&p| p > ENTROPY_CUTOFF).map(|&p| -p * p.ln()).sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(&rho.eigenvalues()).max(0.0)
}

/// `S(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch("relative entropy arguments".into()));
    }
    let es = Eigh::new(&sigma.mat);
    let mut cross = 0.0;
    for (k, &s) in es.values.iter().enumerate() {
        let v = es.vectors.column(k);
        let w = (v.adjoint() * &rho.mat * v)[(0, 0)].re;
        if s <= SUPPORT_TOL {
            if w > SUPPORT_TOL {
                return Err(Error::Divergence(format!("rho has weight {w:e} outside the support of sigma")));
            }
            continue;
        }
        cross += w * s.ln();
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch("fidelity arguments".into()));
    }
    // tr √(√ρ σ √ρ) is the trace norm of √ρ √σ. Eigenvalues inside the
    // support tolerance are dropped first; their square roots would
    // otherwise add noise of order √ε.
    let root = |m: &CMatrix| Eigh::new(m).map_real(|x| if x > SUPPORT_TOL { x.sqrt() } else { 0.0 });
    let prod = root(&rho.mat) * root(&sigma.mat);
    let root_trace: f64 = prod.singular_values().iter().sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `L = arccos √F`.
pub fn bures_length(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(fidelity(rho, sigma)?.sqrt().clamp(0.0, 1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A state on `C^{d_A} ⊗ C^{d_B}`; basis index of `|a b⟩` is `a·d_B + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dims: (usize, usize),
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(dims: (usize, usize), state: DensityMatrix) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != state.dim() {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} do not factor a {}-dimensional state",
                dims,
                state.dim()
            )));
        }
        Ok(BipartiteState { dims, state })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        BipartiteState { dims: (a.dim(), b.dim()), state: a.kron(b) }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self, keep)
    }

    pub fn evolve(&self, u: &CMatrix) -> Result<BipartiteState> {
        Ok(BipartiteState { dims: self.dims, state: self.state.conjugate_by(u)? })
    }
}

pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let (da, db) = s.dims;
    let m = s.state.matrix();
    let out = match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum::<C64>()),
        Subsystem::B => CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum::<C64>()),
    };
    DensityMatrix { mat: linalg::hermitize(&out) }
}

/// Random states and unitaries for tests, examples and benchmarks.
pub mod random {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    /// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
    pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
        let qr = ginibre(rng, n, n).qr();
        let (q, r) = qr.unpack();
        let mut q = q;
        for j in 0..n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        q
    }

    pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Operator {
        let g = ginibre(rng, n, n);
        Operator::hermitian(linalg::hermitize(&g)).expect("hermitized")
    }

    /// Mixed state `G G† / tr(G G†)` with Ginibre `G` of the given rank.
    pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityMatrix {
        let g = ginibre(rng, n, rank.max(1));
        let m = &g * g.adjoint();
        let tr = linalg::trace(&m).re;
        DensityMatrix::from_numerical(m.unscale(tr)).expect("ginibre state")
    }

    pub fn pure<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
        let g = ginibre(rng, n, 1);
        DensityMatrix::pure(&g.column(0).into_owned()).expect("nonzero ket")
    }
}
