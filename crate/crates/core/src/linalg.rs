//! Dense complex linear algebra used by the rest of the crate.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Hermitian
//! matrix functions go through an eigendecomposition; general exponentials
//! use nalgebra's scaling-and-squaring Padé routine.

use faer::complex_native::c64 as FC64;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_hermitian(m: &CMatrix, rel_tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return true;
    }
    max_abs_diff(m, &m.adjoint()) <= rel_tol * scale
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `a ⊗ b`, with `a` carrying the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, ordered like `values`.
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        let h = hermitize(m);
        let fm = faer::Mat::<FC64>::from_fn(n, n, |i, j| {
            let z = h[(i, j)];
            FC64::new(z.re, z.im)
        });
        let evd = fm.selfadjoint_eigendecomposition(faer::Side::Lower);
        let s = evd.s().column_vector();
        let u = evd.u();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| s.read(i).re.total_cmp(&s.read(j).re));
        let values = order.iter().map(|&i| s.read(i).re).collect();
        let vectors = CMatrix::from_fn(n, n, |r, k| {
            let z = u.read(r, order[k]);
            C64::new(z.re, z.im)
        });
        Eigh { values, vectors }
    }

    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.map_complex(|x| C64::new(f(x), 0.0))
    }

    /// `V diag(d) V†` for explicit eigenvalue replacements `d`.
    pub fn reconstruct(&self, d: &[f64]) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            for r in 0..n {
                scaled[(r, k)] *= d[k];
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let fk = f(self.values[k]);
            for r in 0..n {
                scaled[(r, k)] *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn unitary_exp(h: &CMatrix, t: f64) -> CMatrix {
    Eigh::new(h).map_complex(|e| C64::from_polar(1.0, -e * t))
}

/// General matrix exponential (scaling and squaring with a Padé approximant).
pub fn expm(m: &CMatrix) -> CMatrix {
    if m.nrows() == 0 {
        return m.clone();
    }
    m.exp()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().fold(0.0_f64, |a, &s| a.max(s))
}

/// Singular values in ascending order, paired with right singular vectors.
pub fn right_singular_ascending(m: &CMatrix) -> Vec<(f64, CVector)> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut out: Vec<(f64, CVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let row = v_t.row(k);
            let v = CVector::from_iterator(row.len(), row.iter().map(|z| z.conj()));
            (s, v)
        })
        .collect();
    // SVD may return fewer right vectors than columns for wide matrices; the
    // callers only pass square matrices.
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_diagonal(d: &[f64]) -> CMatrix {
    let n = d.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &x) in d.iter().enumerate() {
        m[(i, i)] = C64::new(x, 0.0);
    }
    m
}

/// `|i⟩⟨j|` in dimension `n`.
pub fn ket_bra(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Trace norm `tr|A|` for Hermitian `A`.
pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    Eigh::new(m).values.iter().map(|x| x.abs()).sum()
}
