//! Semiclassical (Wigner–Kirkwood) corrections to thermal energies and to
//! Otto-cycle work.
//!
//! For a potential `V(x)` in `M ≤ 3` dimensions the position density is
//! `P = P_clas + ħ² P_2 + O(ħ⁴)` with `P_clas = e^{−V/T}` and
//!
//! ```text
//! P_2 = e^{−V/T} [ −1/(12T²) Σ V''_k/m_k + 1/(24T³) Σ (V'_k)²/m_k ]
//! ```
//!
//! The energy correction `E_2` follows from the three integrals
//! `∫ΣV''/m·P`, `∫V P_2` and `∫V P ∫P_2 / ∫P`. Integrals run over a box
//! that is grown until the Boltzmann factor at its faces is below `1e-12`
//! of the peak, unless the model is confined to a fixed box.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::quad::{self, QuadOptions};

pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// Boltzmann factor at the domain faces must be below this fraction of the peak.
pub const TAIL_TOL: f64 = 1e-12;
const MAX_DOMAIN_GROWTH: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Hard walls: integrate over exactly this box.
    Confined(Vec<(f64, f64)>),
    /// Open potential: start from this box and grow it until the tails are negligible.
    Open(Vec<(f64, f64)>),
}

impl Domain {
    fn bounds(&self) -> &[(f64, f64)] {
        match self {
            Domain::Confined(b) | Domain::Open(b) => b,
        }
    }
}

#[derive(Clone)]
pub struct PotentialModel {
    masses: Vec<f64>,
    v: ScalarField,
    grad: Option<VectorField>,
    curv: Option<VectorField>,
    domain: Domain,
    label: String,
}

impl std::fmt::Debug for PotentialModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialModel")
            .field("label", &self.label)
            .field("masses", &self.masses)
            .field("domain", &self.domain)
            .finish()
    }
}

impl PotentialModel {
    /// A user potential without derivatives. Attach them with
    /// [`with_derivatives`](Self::with_derivatives) or
    /// [`with_finite_differences`](Self::with_finite_differences) before
    /// asking for the correction.
    pub fn custom(masses: Vec<f64>, v: ScalarField, domain: Domain) -> Result<Self> {
        if masses.is_empty() || masses.len() > 3 {
            return invalid("between one and three dimensions are supported");
        }
        if domain.bounds().len() != masses.len() {
            return Err(Error::DimensionMismatch("domain and masses".into()));
        }
        if masses.iter().any(|m| !(*m > 0.0)) {
            return invalid("masses must be positive");
        }
        if domain.bounds().iter().any(|(a, b)| !(b > a)) {
            return invalid("domain bounds must satisfy lo < hi");
        }
        Ok(PotentialModel { masses, v, grad: None, curv: None, domain, label: "custom".into() })
    }

    pub fn with_derivatives(mut self, grad: VectorField, curv: VectorField) -> Self {
        self.grad = Some(grad);
        self.curv = Some(curv);
        self
    }

    /// Central differences. The gradient uses the step `ε^{1/3}·max(1, |x_k|)`,
    /// the second derivative `ε^{1/4}·max(1, |x_k|)`.
    pub fn with_finite_differences(mut self) -> Self {
        let h0 = f64::EPSILON.cbrt();
        let v = self.v.clone();
        self.grad = Some(Arc::new(move |x: &[f64], out: &mut [f64]| {
            let mut y = x.to_vec();
            for k in 0..x.len() {
                let h = h0 * x[k].abs().max(1.0);
                y[k] = x[k] + h;
                let fp = v(&y);
                y[k] = x[k] - h;
                let fm = v(&y);
                y[k] = x[k];
                out[k] = (fp - fm) / (2.0 * h);
            }
        }));
        let v = self.v.clone();
        let h1 = f64::EPSILON.powf(0.25);
        self.curv = Some(Arc::new(move |x: &[f64], out: &mut [f64]| {
            let mut y = x.to_vec();
            let f0 = v(x);
            for k in 0..x.len() {
                let h = h1 * x[k].abs().max(1.0);
                y[k] = x[k] + h;
                let fp = v(&y);
                y[k] = x[k] - h;
                let fm = v(&y);
                y[k] = x[k];
                out[k] = (fp - 2.0 * f0 + fm) / (h * h);
            }
        }));
        self
    }

    /// `½ m ω² x²`
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        if !(mass > 0.0 && omega > 0.0) {
            return invalid("harmonic potential needs positive mass and frequency");
        }
        let k = mass * omega * omega;
        let b = 1.0 / omega;
        let mut p = PotentialModel::custom(
            vec![mass],
            Arc::new(move |x: &[f64]| 0.5 * k * x[0] * x[0]),
            Domain::Open(vec![(-b, b)]),
        )?
        .with_derivatives(
            Arc::new(move |x: &[f64], g: &mut [f64]| g[0] = k * x[0]),
            Arc::new(move |_: &[f64], c: &mut [f64]| c[0] = k),
        );
        p.label = format!("harmonic(m={mass}, omega={omega})");
        Ok(p)
    }

    /// `a x^{2n}`
    pub fn power_law(mass: f64, a: f64, n: u32) -> Result<Self> {
        if !(mass > 0.0 && a > 0.0) || n == 0 {
            return invalid("power law needs positive mass, positive stiffness and n >= 1");
        }
        let e = 2 * n as i32;
        let b = a.powf(-1.0 / e as f64);
        let mut p = PotentialModel::custom(
            vec![mass],
            Arc::new(move |x: &[f64]| a * x[0].powi(e)),
            Domain::Open(vec![(-b, b)]),
        )?
        .with_derivatives(
            Arc::new(move |x: &[f64], g: &mut [f64]| g[0] = e as f64 * a * x[0].powi(e - 1)),
            Arc::new(move |x: &[f64], c: &mut [f64]| c[0] = (e * (e - 1)) as f64 * a * x[0].powi(e - 2)),
        );
        p.label = format!("power_law(m={mass}, a={a}, n={n})");
        Ok(p)
    }

    /// Constant potential inside hard walls: a free particle in a box.
    pub fn constant(masses: Vec<f64>, value: f64, bounds: Vec<(f64, f64)>) -> Result<Self> {
        let m = masses.len();
        let mut p = PotentialModel::custom(masses, Arc::new(move |_: &[f64]| value), Domain::Confined(bounds))?
            .with_derivatives(
                Arc::new(|_: &[f64], g: &mut [f64]| g.iter_mut().for_each(|x| *x = 0.0)),
                Arc::new(|_: &[f64], c: &mut [f64]| c.iter_mut().for_each(|x| *x = 0.0)),
            );
        p.label = format!("constant({value}) in {m}D");
        Ok(p)
    }

    /// Separable harmonic well `Σ ½ m_k ω_k² x_k²` in up to three dimensions.
    pub fn harmonic_nd(masses: Vec<f64>, omegas: Vec<f64>) -> Result<Self> {
        if masses.len() != omegas.len() {
            return Err(Error::DimensionMismatch("masses and frequencies".into()));
        }
        if omegas.iter().any(|w| !(*w > 0.0)) {
            return invalid("frequencies must be positive");
        }
        let k: Vec<f64> = masses.iter().zip(&omegas).map(|(m, w)| m * w * w).collect();
        let bounds = omegas.iter().map(|w| (-1.0 / w, 1.0 / w)).collect();
        let (k1, k2, k3) = (k.clone(), k.clone(), k);
        let mut p = PotentialModel::custom(
            masses,
            Arc::new(move |x: &[f64]| x.iter().zip(&k1).map(|(x, k)| 0.5 * k * x * x).sum()),
            Domain::Open(bounds),
        )?
        .with_derivatives(
            Arc::new(move |x: &[f64], g: &mut [f64]| {
                for i in 0..x.len() {
                    g[i] = k2[i] * x[i];
                }
            }),
            Arc::new(move |_: &[f64], c: &mut [f64]| c.copy_from_slice(&k3)),
        );
        p.label = "harmonic_nd".into();
        Ok(p)
    }

    pub fn dims(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        (self.v)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_derivatives(&self) -> bool {
        self.grad.is_some() && self.curv.is_some()
    }

    fn derivatives(&self) -> Result<(&VectorField, &VectorField)> {
        match (&self.grad, &self.curv) {
            (Some(g), Some(c)) => Ok((g, c)),
            _ => invalid("potential has no derivative evaluators"),
        }
    }

    /// Integration box at temperature `t` and the reference energy
    /// (smallest sampled `V`) used to keep `e^{−V/T}` in range.
    pub fn resolve_domain(&self, t: f64) -> Result<(Vec<(f64, f64)>, f64)> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("temperature must be positive, got {t}"));
        }
        match &self.domain {
            Domain::Confined(b) => Ok((b.clone(), self.sampled_min(b))),
            Domain::Open(initial) => {
                let mut b = initial.clone();
                for _ in 0..MAX_DOMAIN_GROWTH {
                    let v_ref = self.sampled_min(&b);
                    if self.face_max_weight(&b, v_ref, t) < TAIL_TOL {
                        return Ok((b, v_ref));
                    }
                    for (lo, hi) in b.iter_mut() {
                        let c = 0.5 * (*lo + *hi);
                        let h = 0.75 * (*hi - *lo);
                        *lo = c - h;
                        *hi = c + h;
                    }
                }
                Err(Error::Integrability(format!(
                    "e^(-V/T) at T = {t} does not decay below {TAIL_TOL:e} of the peak for {}",
                    self.label
                )))
            }
        }
    }

    fn grid_points(b: &[(f64, f64)], per_axis: usize) -> Vec<Vec<f64>> {
        let mut pts = vec![vec![]];
        for (lo, hi) in b {
            let mut next = Vec::with_capacity(pts.len() * per_axis);
            for p in &pts {
                for k in 0..per_axis {
                    let mut q: Vec<f64> = p.clone();
                    q.push(lo + (hi - lo) * k as f64 / (per_axis - 1) as f64);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts
    }

    fn sampled_min(&self, b: &[(f64, f64)]) -> f64 {
        let per = match b.len() {
            1 => 401,
            2 => 41,
            _ => 15,
        };
        Self::grid_points(b, per).iter().map(|p| self.potential(p)).fold(f64::INFINITY, f64::min)
    }

    fn face_max_weight(&self, b: &[(f64, f64)], v_ref: f64, t: f64) -> f64 {
        let per = match b.len() {
            1 => 2,
            2 => 33,
            _ => 9,
        };
        Self::grid_points(b, per)
            .iter()
            .filter(|p| p.iter().zip(b).any(|(x, (lo, hi))| x == lo || x == hi))
            .map(|p| (-(self.potential(p) - v_ref) / t).exp())
            .fold(0.0, f64::max)
    }
}

/// `e^{−(V − V_ref)/T}`; the shift cancels in every normalized quantity.
#[derive(Clone, Debug)]
pub struct ClassicalDensity {
    pot: PotentialModel,
    t: f64,
    v_ref: f64,
    bounds: Vec<(f64, f64)>,
}

impl ClassicalDensity {
    pub fn eval(&self, x: &[f64]) -> f64 {
        (-(self.pot.potential(x) - self.v_ref) / self.t).exp()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn v_ref(&self) -> f64 {
        self.v_ref
    }

    /// `∫ P_clas` over the resolved domain.
    pub fn integral(&self, opts: QuadOptions) -> Result<f64> {
        quad::integrate_box(
            &|x: &[f64], out: &mut [f64]| {
                out[0] = self.eval(x);
                Ok(())
            },
            &self.bounds,
            1,
            opts,
        )
        .map(|v| v[0])
    }
}

pub fn p_classical(pot: &PotentialModel, t: f64) -> Result<ClassicalDensity> {
    let (bounds, v_ref) = pot.resolve_domain(t)?;
    Ok(ClassicalDensity { pot: pot.clone(), t, v_ref, bounds })
}

/// The ħ² coefficient of the position density, sharing the shift of the
/// matching [`ClassicalDensity`].
#[derive(Clone, Debug)]
pub struct CorrectionDensity {
    clas: ClassicalDensity,
}

impl CorrectionDensity {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let pot = &self.clas.pot;
        let (g, c) = pot.derivatives().expect("checked at construction");
        let m = pot.dims();
        let mut grad = [0.0; 3];
        let mut curv = [0.0; 3];
        g(x, &mut grad[..m]);
        c(x, &mut curv[..m]);
        let t = self.clas.t;
        let mut bracket = 0.0;
        for k in 0..m {
            let mk = pot.masses[k];
            bracket += -curv[k] / (12.0 * t * t * mk) + grad[k] * grad[k] / (24.0 * t * t * t * mk);
        }
        self.clas.eval(x) * bracket
    }

    pub fn classical(&self) -> &ClassicalDensity {
        &self.clas
    }
}

pub fn p2_correction(pot: &PotentialModel, t: f64) -> Result<CorrectionDensity> {
    pot.derivatives()?;
    Ok(CorrectionDensity { clas: p_classical(pot, t)? })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerOptions {
    pub quad: QuadOptions,
}

impl Default for WignerOptions {
    fn default() -> Self {
        WignerOptions { quad: QuadOptions { rel_tol: 1e-9, abs_tol: 1e-300, max_intervals: 4000 } }
    }
}

impl WignerOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        WignerOptions { quad: QuadOptions { rel_tol, ..WignerOptions::default().quad } }
    }
}

/// The integrals entering the thermal energy to order ħ², all taken with
/// the shifted potential `V − V_ref`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalMoments {
    pub norm: f64,
    pub curvature: f64,
    pub v_p2: f64,
    pub v_p: f64,
    pub p2: f64,
    pub v_ref: f64,
}

pub fn thermal_moments(pot: &PotentialModel, t: f64, opts: WignerOptions) -> Result<ThermalMoments> {
    let corr = p2_correction(pot, t)?;
    let (_, c) = pot.derivatives()?;
    let m = pot.dims();
    let v_ref = corr.clas.v_ref;
    let f = |x: &[f64], out: &mut [f64]| -> Result<()> {
        let p = corr.clas.eval(x);
        let p2 = corr.eval(x);
        let v = pot.potential(x) - v_ref;
        let mut curv = [0.0; 3];
        c(x, &mut curv[..m]);
        let lap: f64 = (0..m).map(|k| curv[k] / pot.masses[k]).sum();
        out[0] = p;
        out[1] = lap * p;
        out[2] = v * p2;
        out[3] = v * p;
        out[4] = p2;
        Ok(())
    };
    let r = quad::integrate_box(&f, &corr.clas.bounds, 5, opts.quad)?;
    Ok(ThermalMoments { norm: r[0], curvature: r[1], v_p2: r[2], v_p: r[3], p2: r[4], v_ref })
}

/// `E_{2,QC}(V, T)`, the ħ² coefficient of the thermal energy.
pub fn e2_qc(pot: &PotentialModel, t: f64) -> Result<f64> {
    e2_qc_with(pot, t, WignerOptions::default())
}

pub fn e2_qc_with(pot: &PotentialModel, t: f64, opts: WignerOptions) -> Result<f64> {
    let mm = thermal_moments(pot, t, opts)?;
    Ok((mm.curvature / (24.0 * t) + mm.v_p2 - mm.v_p * mm.p2 / mm.norm) / mm.norm)
}

/// Classical thermal energy `⟨V⟩ + M T / 2`.
pub fn classical_energy(pot: &PotentialModel, t: f64) -> Result<f64> {
    classical_energy_with(pot, t, WignerOptions::default())
}

pub fn classical_energy_with(pot: &PotentialModel, t: f64, opts: WignerOptions) -> Result<f64> {
    let clas = p_classical(pot, t)?;
    let r = quad::integrate_box(
        &|x: &[f64], out: &mut [f64]| {
            let p = clas.eval(x);
            out[0] = p;
            out[1] = (pot.potential(x) - clas.v_ref) * p;
            Ok(())
        },
        &clas.bounds,
        2,
        opts.quad,
    )?;
    Ok(r[1] / r[0] + clas.v_ref + 0.5 * pot.dims() as f64 * t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectedCycle {
    pub classical: f64,
    /// The ħ² term, already multiplied by ħ².
    pub correction: f64,
    pub total: f64,
}

fn check_cycle(q: f64, t_h: f64, t_c: f64, hbar: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return invalid(format!("scaling factor must be positive, got {q}"));
    }
    if !(t_h > t_c && t_c > 0.0) {
        return invalid("need t_h > t_c > 0");
    }
    if !(hbar >= 0.0) {
        return invalid("hbar must be non-negative");
    }
    Ok(())
}

/// Cycle work to order ħ²:
/// `W = W_clas − ħ²(E_2(V_h,T_h) − E_2(V_h,T_c/q) + E_2(V_c,T_c) − E_2(V_c,qT_h))`.
pub fn corrected_work(
    pot_h: &PotentialModel,
    pot_c: &PotentialModel,
    q: f64,
    t_h: f64,
    t_c: f64,
    hbar: f64,
) -> Result<CorrectedCycle> {
    corrected_work_with(pot_h, pot_c, q, t_h, t_c, hbar, WignerOptions::default())
}

pub fn corrected_work_with(
    pot_h: &PotentialModel,
    pot_c: &PotentialModel,
    q: f64,
    t_h: f64,
    t_c: f64,
    hbar: f64,
    opts: WignerOptions,
) -> Result<CorrectedCycle> {
    check_cycle(q, t_h, t_c, hbar)?;
    let e = |p: &PotentialModel, t: f64| classical_energy_with(p, t, opts);
    let classical = -(e(pot_h, t_h)? - e(pot_h, t_c / q)? + e(pot_c, t_c)? - e(pot_c, q * t_h)?);
    let correction = if hbar == 0.0 {
        0.0
    } else {
        let e2 = |p: &PotentialModel, t: f64| e2_qc_with(p, t, opts);
        -hbar * hbar * (e2(pot_h, t_h)? - e2(pot_h, t_c / q)? + e2(pot_c, t_c)? - e2(pot_c, q * t_h)?)
    };
    Ok(CorrectedCycle { classical, correction, total: classical + correction })
}

/// Hot-bath heat to order ħ²:
/// `Q_h = Q_h^clas + ħ²(E_2(V_h,T_h) − E_2(V_h,T_c/q))`.
pub fn corrected_qh(pot_h: &PotentialModel, q: f64, t_h: f64, t_c: f64, hbar: f64) -> Result<CorrectedCycle> {
    check_cycle(q, t_h, t_c, hbar)?;
    let opts = WignerOptions::default();
    let classical = classical_energy_with(pot_h, t_h, opts)? - classical_energy_with(pot_h, t_c / q, opts)?;
    let correction = if hbar == 0.0 {
        0.0
    } else {
        hbar * hbar * (e2_qc_with(pot_h, t_h, opts)? - e2_qc_with(pot_h, t_c / q, opts)?)
    };
    Ok(CorrectedCycle { classical, correction, total: classical + correction })
}

fn one_f() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLawParams {
    pub n: u32,
    pub a_c: f64,
    pub a_h: f64,
    #[serde(default = "one_f")]
    pub m: f64,
}

impl PowerLawParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !(self.a_c > 0.0 && self.a_h > 0.0 && self.m > 0.0) {
            return invalid(format!("invalid power-law parameters {self:?}"));
        }
        Ok(())
    }

    /// `(a_c/a_h)^{1/(1+n)}`
    pub fn q(&self) -> f64 {
        (self.a_c / self.a_h).powf(1.0 / (1.0 + self.n as f64))
    }

    pub fn hot(&self) -> Result<PotentialModel> {
        PotentialModel::power_law(self.m, self.a_h, self.n)
    }

    pub fn cold(&self) -> Result<PotentialModel> {
        PotentialModel::power_law(self.m, self.a_c, self.n)
    }

    /// Stiffness pair with a prescribed `q`, keeping `a_c`.
    pub fn with_q(n: u32, a_c: f64, m: f64, q: f64) -> Self {
        PowerLawParams { n, a_c, a_h: a_c / q.powf(1.0 + n as f64), m }
    }
}

/// Closed-form ħ² work correction for `V = a x^{2n}` potentials.
pub fn analytic_powerlaw_correction(p: &PowerLawParams, t_h: f64, t_c: f64, hbar: f64) -> Result<f64> {
    p.validate()?;
    check_cycle(p.q(), t_h, t_c, hbar)?;
    let n = p.n as f64;
    let q = p.q();
    let csc = 1.0 / (PI / (2.0 * n)).sin();
    let g = gamma(1.0 / (2.0 * n));
    let pref = -(hbar * hbar * PI * (2.0 * n * n + n - 1.0) * csc) / (12.0 * p.m * g * g);
    Ok(pref * (p.a_c / t_c).powf(1.0 / n) * (1.0 - 1.0 / q) * (1.0 - (t_c / (q * t_h)).powf(1.0 / n)))
}

/// Exact x-marginal of the thermal Wigner function of an oscillator.
pub fn harmonic_quantum_marginal(x: f64, m: f64, omega: f64, t: f64, hbar: f64) -> f64 {
    let var = hbar / (2.0 * m * omega * (hbar * omega / (2.0 * t)).tanh());
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Classical x-marginal of the oscillator's thermal distribution.
pub fn harmonic_classical_marginal(x: f64, m: f64, omega: f64, t: f64) -> f64 {
    let var = t / (m * omega * omega);
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Exact oscillator energy `(ħω/2) coth(ħω/2T)`.
pub fn harmonic_exact_energy(omega: f64, t: f64, hbar: f64) -> f64 {
    if hbar == 0.0 {
        return t;
    }
    let y = hbar * omega / (2.0 * t);
    0.5 * hbar * omega / y.tanh()
}
