//! Liouville space: row-major vectorization and superoperators.
//!
//! Convention: the generator `𝓛` enters as `i d|ρ⟩/dt = 𝓛|ρ⟩` (ħ = 1), so
//! the Hamiltonian part `𝓗 = H⊗I − I⊗Hᵀ` is Hermitian and a dissipator
//! carries an explicit factor `i`. The propagator over time `t` is
//! `Λ = exp(−i𝓛t)`. With this choice every trace-preserving generator
//! satisfies `⟨vec(I)|𝓛 = 0`.

use crate::error::{invalid, Error, Result};
use crate::hilbert::{DensityMatrix, Operator};
use crate::linalg::{self, CMatrix, CVector, Eigh, C64, I, ONE};

/// A vectorized operator. Entry `α = col + N·row` (zero-based) holds `ρ[row, col]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVectorL {
    dim: usize,
    entries: CVector,
}

impl StateVectorL {
    pub fn from_entries(entries: Vec<C64>) -> Result<Self> {
        let len = entries.len();
        let dim = (len as f64).sqrt().round() as usize;
        if dim * dim != len || dim == 0 {
            return Err(Error::DimensionMismatch(format!("length {len} is not a positive perfect square")));
        }
        Ok(StateVectorL { dim, entries: CVector::from_vec(entries) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    /// `⟨self|other⟩ = Σ conj(a_α) b_α`, which equals `tr(A†B)`.
    pub fn inner(&self, other: &StateVectorL) -> C64 {
        self.entries.dotc(&other.entries)
    }

    /// `⟨ρ|ρ⟩`; for a density matrix this is the purity.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.norm_squared()
    }
}

pub fn vec_matrix(m: &CMatrix) -> StateVectorL {
    let n = m.nrows();
    let mut v = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            v.push(m[(row, col)]);
        }
    }
    StateVectorL { dim: n, entries: CVector::from_vec(v) }
}

pub fn vec(rho: &DensityMatrix) -> StateVectorL {
    vec_matrix(rho.matrix())
}

pub fn vec_op(op: &Operator) -> StateVectorL {
    vec_matrix(op.matrix())
}

pub fn unvec(v: &StateVectorL) -> CMatrix {
    let n = v.dim;
    CMatrix::from_fn(n, n, |row, col| v.entries[col + n * row])
}

/// Interprets a Liouville vector as a state (hermitized, renormalized).
pub fn unvec_state(v: &StateVectorL) -> Result<DensityMatrix> {
    DensityMatrix::from_numerical(unvec(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperKind {
    Hamiltonian,
    Dissipative,
    Dephasing,
    Composite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMatrix,
    kind: SuperKind,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, mat: CMatrix, kind: SuperKind) -> Result<Self> {
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on dim {dim} needs {0}x{0} entries",
                dim * dim
            )));
        }
        Ok(Superoperator { dim, mat, kind })
    }

    pub fn zero(dim: usize) -> Self {
        let n2 = dim * dim;
        Superoperator { dim, mat: CMatrix::zeros(n2, n2), kind: SuperKind::Composite }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator { dim, mat: linalg::identity(dim * dim), kind: SuperKind::Composite }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn kind(&self) -> SuperKind {
        self.kind
    }

    pub fn apply(&self, v: &StateVectorL) -> Result<StateVectorL> {
        if v.dim != self.dim {
            return Err(Error::DimensionMismatch("superoperator and vector".into()));
        }
        Ok(StateVectorL { dim: self.dim, entries: &self.mat * &v.entries })
    }

    /// Applies the superoperator to a matrix and returns the unvectorized result.
    pub fn apply_matrix(&self, m: &CMatrix) -> Result<CMatrix> {
        Ok(unvec(&self.apply(&vec_matrix(m))?))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check(other)?;
        Ok(Superoperator { dim: self.dim, mat: &self.mat * &other.mat, kind: SuperKind::Composite })
    }

    pub fn add(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check(other)?;
        let kind = if self.kind == other.kind { self.kind } else { SuperKind::Composite };
        Ok(Superoperator { dim: self.dim, mat: &self.mat + &other.mat, kind })
    }

    pub fn sub(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check(other)?;
        Ok(Superoperator { dim: self.dim, mat: &self.mat - &other.mat, kind: SuperKind::Composite })
    }

    pub fn scale(&self, s: f64) -> Superoperator {
        Superoperator { dim: self.dim, mat: self.mat.scale(s), kind: self.kind }
    }

    /// `⟨vec(A)|𝓛` as a row, i.e. the Heisenberg-picture image of `A`.
    pub fn left_apply(&self, a: &CMatrix) -> CVector {
        let v = vec_matrix(a);
        self.mat.ad_mul(&v.entries).map(|z| z.conj())
    }

    /// Largest `|⟨vec(I)|𝓛|α⟩|` over basis vectors. Zero for trace-preserving
    /// generators.
    pub fn trace_defect_generator(&self) -> f64 {
        self.left_apply(&linalg::identity(self.dim)).iter().fold(0.0_f64, |a, z| a.max(z.norm()))
    }

    /// Largest deviation of `⟨vec(I)|Λ` from `⟨vec(I)|`. Zero for
    /// trace-preserving maps.
    pub fn trace_defect_map(&self) -> f64 {
        let row = self.left_apply(&linalg::identity(self.dim));
        let id = vec_matrix(&linalg::identity(self.dim)).entries;
        row.iter().zip(id.iter()).fold(0.0_f64, |a, (x, y)| a.max((x - y).norm()))
    }

    fn check(&self, other: &Superoperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("superoperators on dims {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }
}

/// `A ρ B → (A ⊗ Bᵀ)|ρ⟩` for the row-major vectorization.
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    linalg::kron(a, &b.transpose())
}

/// `𝓗 = H⊗I − I⊗Hᵀ`, the superoperator of `[H, ·]`.
pub fn hamiltonian_superop(h: &Operator) -> Result<Superoperator> {
    if !h.is_hermitian() {
        return invalid("hamiltonian superoperator needs a hermitian operator");
    }
    let n = h.dim();
    let id = linalg::identity(n);
    let mat = sandwich(h.matrix(), &id) - sandwich(&id, h.matrix());
    Ok(Superoperator { dim: n, mat: linalg::hermitize(&mat), kind: SuperKind::Hamiltonian })
}

/// `i Σ_k (S⊗S* − ½ S†S⊗I − ½ I⊗(S†S)ᵀ)`.
pub fn dissipator_superop(ops: &[Operator]) -> Result<Superoperator> {
    let Some(first) = ops.first() else {
        return invalid("dissipator needs at least one operator; use Superoperator::zero for none");
    };
    let n = first.dim();
    if ops.iter().any(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch("jump operators differ in dimension".into()));
    }
    let id = linalg::identity(n);
    let mut mat = CMatrix::zeros(n * n, n * n);
    for s in ops {
        let s = s.matrix();
        let sds = s.adjoint() * s;
        mat += sandwich(s, &s.adjoint());
        mat -= sandwich(&sds, &id).scale(0.5);
        mat -= sandwich(&id, &sds).scale(0.5);
    }
    Ok(Superoperator { dim: n, mat: mat * I, kind: SuperKind::Dissipative })
}

/// Dissipator for a possibly empty list of jump operators on dimension `dim`.
pub fn dissipator_or_zero(dim: usize, ops: &[Operator]) -> Result<Superoperator> {
    if ops.is_empty() {
        let mut z = Superoperator::zero(dim);
        z.kind = SuperKind::Dissipative;
        return Ok(z);
    }
    if ops[0].dim() != dim {
        return Err(Error::DimensionMismatch("jump operator dimension".into()));
    }
    dissipator_superop(ops)
}

/// Relative tolerance used to decide that a generator is normal.
const NORMAL_TOL: f64 = 1e-12;

fn is_normal(m: &CMatrix) -> bool {
    let scale = linalg::max_abs(m);
    if scale == 0.0 {
        return true;
    }
    let c = m * m.adjoint() - m.adjoint() * m;
    linalg::max_abs(&c) <= NORMAL_TOL * scale * scale * m.nrows() as f64
}

/// `exp(−i M t)` for a square matrix `M`.
///
/// Normal matrices split as `A + iB` with commuting Hermitian parts and are
/// exponentiated through two eigendecompositions. Everything else goes to
/// the Padé routine.
pub fn exp_minus_i(m: &CMatrix, t: f64) -> CMatrix {
    if linalg::is_hermitian(m, 1e-14) {
        return linalg::unitary_exp(m, t);
    }
    if is_normal(m) {
        let a = linalg::hermitize(m);
        let b = (m - m.adjoint()) * C64::new(0.0, -0.5);
        let ua = Eigh::new(&a).map_complex(|x| C64::from_polar(1.0, -x * t));
        let ub = Eigh::new(&b).map_real(|x| (x * t).exp());
        return ua * ub;
    }
    linalg::expm(&(m * C64::new(0.0, -t)))
}

/// `Λ = exp(−i𝓛t)`.
pub fn propagate(l: &Superoperator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0) || !t.is_finite() {
        return invalid(format!("propagation time must be finite and >= 0, got {t}"));
    }
    Ok(Superoperator { dim: l.dim, mat: exp_minus_i(&l.mat, t), kind: SuperKind::Composite })
}

pub fn spectral_norm(l: &Superoperator) -> f64 {
    linalg::spectral_norm(&l.mat)
}

/// `s = Σ ‖𝓛_i‖ Δt_i` over a piecewise-constant schedule (ħ = 1, so `s̄ = s`).
pub fn action_norm(schedule: &[(Superoperator, f64)]) -> Result<f64> {
    let mut s = 0.0;
    for (l, dt) in schedule {
        if *dt < 0.0 || dt.is_nan() {
            return invalid(format!("negative stroke duration {dt}"));
        }
        s += spectral_norm(l) * dt;
    }
    Ok(s)
}

/// Relative threshold on the second-smallest singular value below which a
/// kernel is called degenerate.
pub const KERNEL_DEGENERACY_TOL: f64 = 1e-8;

/// Normalized null vector of a square matrix, refusing degenerate kernels.
pub(crate) fn unique_null_vector(m: &CMatrix) -> std::result::Result<CVector, f64> {
    unique_null_vector_scaled(m, f64::MIN_POSITIVE)
}

/// As [`unique_null_vector`], but singular values are judged against at
/// least `scale`. For `Λ − I` with `Λ` a channel the natural scale is 1;
/// otherwise an identity map leaves only roundoff and passes as rank deficient
/// by one.
pub(crate) fn unique_null_vector_scaled(m: &CMatrix, scale: f64) -> std::result::Result<CVector, f64> {
    let sv = linalg::right_singular_ascending(m);
    let smax = sv.last().map(|x| x.0).unwrap_or(0.0).max(scale);
    if sv.len() > 1 && sv[1].0 <= KERNEL_DEGENERACY_TOL * smax.max(f64::MIN_POSITIVE) {
        return Err(sv[1].0 / smax.max(f64::MIN_POSITIVE));
    }
    Ok(sv[0].1.clone())
}

/// Turns a kernel vector into a density matrix: fix the global phase through
/// the trace, hermitize and renormalize.
pub(crate) fn kernel_to_state(dim: usize, v: CVector) -> Result<DensityMatrix> {
    let m = unvec(&StateVectorL { dim, entries: v });
    let tr = linalg::trace(&m);
    if tr.norm() < 1e-300 {
        return invalid("kernel vector is traceless");
    }
    DensityMatrix::from_numerical(m.map(|z| z / tr))
}

/// The state annihilated by a trace-preserving generator.
pub fn stationary_state(l: &Superoperator) -> Result<DensityMatrix> {
    match unique_null_vector(&l.mat) {
        Ok(v) => kernel_to_state(l.dim, v),
        Err(ratio) => Err(Error::AmbiguousStationary(format!(
            "kernel dimension exceeds one (second singular value ratio {ratio:e})"
        ))),
    }
}

/// Projector onto the population sector: keeps `ρ_ii`, deletes coherences.
pub fn population_projector(dim: usize) -> Superoperator {
    let n2 = dim * dim;
    let mut mat = CMatrix::zeros(n2, n2);
    for i in 0..dim {
        let a = i + dim * i;
        mat[(a, a)] = ONE;
    }
    Superoperator { dim, mat, kind: SuperKind::Dephasing }
}

/// Liouville indices of populations (`ρ_ii`) for dimension `dim`.
pub fn population_indices(dim: usize) -> Vec<usize> {
    (0..dim).map(|i| i + dim * i).collect()
}

/// Liouville indices of coherences (`ρ_ij`, `i ≠ j`).
pub fn coherence_indices(dim: usize) -> Vec<usize> {
    let pop = population_indices(dim);
    (0..dim * dim).filter(|a| !pop.contains(a)).collect()
}

/// Sub-block `M[rows, cols]`.
pub fn block(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}
