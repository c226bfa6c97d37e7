//! Quantized Otto cycles.
//!
//! The cycle has two isochores (thermalization with spectrum `E^h` at `T_h`
//! and `E^c` at `T_c`) joined by quantum-adiabatic strokes that carry the
//! populations over unchanged. Heats and work follow from Boltzmann sums:
//!
//! ```text
//! Q_h = Σ E_n^h (p_n^h − p_n^c)
//! Q_c = Σ E_n^c (p_n^c − p_n^h)
//! W   = −Q_h − Q_c
//! ```
//!
//! Energy flowing into the working medium is positive.
//!
//! Spectra are handled as independent ladders. A 2D box is two 1D ladders
//! (one per axis) and `N` identical oscillators are one ladder with
//! multiplicity `N`. Thermal sums factor exactly over independent ladders,
//! so the heats of the composite are the sums over ladders.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quad::{self, QuadOptions};

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumFamily {
    /// `N_osc` independent oscillators with levels `ħω(n + ½)`.
    Harmonic {
        omega: f64,
        #[serde(default = "one")]
        n_osc: usize,
        #[serde(default = "one_f")]
        hbar: f64,
    },
    /// Particle in a 1D box: `E_n = ħ²π²n²/(2mL²)`, `n ≥ 1`.
    Box1d {
        length: f64,
        #[serde(default = "one_f")]
        mass: f64,
        #[serde(default = "one_f")]
        hbar: f64,
    },
    /// Particle in a 2D box: `E = ħ²π²/(2m) (n_x²/L_x² + n_y²/L_y²)`.
    Box2d {
        lx: f64,
        ly: f64,
        #[serde(default = "one_f")]
        mass: f64,
        #[serde(default = "one_f")]
        hbar: f64,
    },
    /// An arbitrary finite, nondecreasing list of levels.
    Explicit { levels: Vec<f64> },
}

/// One independent degree of freedom.
#[derive(Clone, Debug, PartialEq)]
enum Ladder {
    /// `quantum·(n + ½)`
    Oscillator {
        quantum: f64,
    },
    /// `e1·(n + 1)²`
    Box {
        e1: f64,
    },
    Finite(Vec<f64>),
}

impl Ladder {
    fn level(&self, n: usize) -> f64 {
        match self {
            Ladder::Oscillator { quantum } => quantum * (n as f64 + 0.5),
            Ladder::Box { e1 } => e1 * ((n + 1) as f64).powi(2),
            Ladder::Finite(v) => v[n],
        }
    }

    fn finite_len(&self) -> Option<usize> {
        match self {
            Ladder::Finite(v) => Some(v.len()),
            _ => None,
        }
    }

    fn levels(&self, n: usize) -> Vec<f64> {
        (0..n).map(|k| self.level(k)).collect()
    }
}

fn box_e1(length: f64, mass: f64, hbar: f64) -> f64 {
    hbar * hbar * PI * PI / (2.0 * mass * length * length)
}

impl SpectrumFamily {
    pub fn harmonic(omega: f64) -> Self {
        SpectrumFamily::Harmonic { omega, n_osc: 1, hbar: 1.0 }
    }

    pub fn box1d(length: f64) -> Self {
        SpectrumFamily::Box1d { length, mass: 1.0, hbar: 1.0 }
    }

    pub fn box2d(lx: f64, ly: f64) -> Self {
        SpectrumFamily::Box2d { lx, ly, mass: 1.0, hbar: 1.0 }
    }

    /// Same family with `ħ` replaced (ignored for explicit spectra).
    pub fn with_hbar(&self, h: f64) -> Self {
        let mut s = self.clone();
        match &mut s {
            SpectrumFamily::Harmonic { hbar, .. }
            | SpectrumFamily::Box1d { hbar, .. }
            | SpectrumFamily::Box2d { hbar, .. } => *hbar = h,
            SpectrumFamily::Explicit { .. } => {}
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                invalid(format!("{name} must be positive and finite, got {x}"))
            }
        };
        match self {
            SpectrumFamily::Harmonic { omega, n_osc, hbar } => {
                pos("omega", *omega)?;
                pos("hbar", *hbar)?;
                if *n_osc == 0 {
                    return invalid("n_osc must be at least 1");
                }
            }
            SpectrumFamily::Box1d { length, mass, hbar } => {
                pos("length", *length)?;
                pos("mass", *mass)?;
                pos("hbar", *hbar)?;
            }
            SpectrumFamily::Box2d { lx, ly, mass, hbar } => {
                pos("lx", *lx)?;
                pos("ly", *ly)?;
                pos("mass", *mass)?;
                pos("hbar", *hbar)?;
            }
            SpectrumFamily::Explicit { levels } => {
                if levels.is_empty() {
                    return invalid("explicit spectrum is empty");
                }
                if levels.iter().any(|x| !x.is_finite()) {
                    return invalid("explicit spectrum has non-finite levels");
                }
                if levels.windows(2).any(|w| w[1] < w[0]) {
                    return invalid("explicit spectrum must be nondecreasing");
                }
            }
        }
        Ok(())
    }

    fn ladders(&self) -> Vec<(Ladder, usize)> {
        match self {
            SpectrumFamily::Harmonic { omega, n_osc, hbar } => {
                vec![(Ladder::Oscillator { quantum: hbar * omega }, *n_osc)]
            }
            SpectrumFamily::Box1d { length, mass, hbar } => {
                vec![(Ladder::Box { e1: box_e1(*length, *mass, *hbar) }, 1)]
            }
            SpectrumFamily::Box2d { lx, ly, mass, hbar } => vec![
                (Ladder::Box { e1: box_e1(*lx, *mass, *hbar) }, 1),
                (Ladder::Box { e1: box_e1(*ly, *mass, *hbar) }, 1),
            ],
            SpectrumFamily::Explicit { levels } => vec![(Ladder::Finite(levels.clone()), 1)],
        }
    }

    /// The lowest `count` levels of the full spectrum. For the 2D box the
    /// levels are enumerated by `(n_x, n_y)`, sorted by energy with ties in
    /// lexicographic order. Multi-oscillator spectra are not enumerated.
    pub fn levels(&self, count: usize) -> Result<Vec<f64>> {
        self.validate()?;
        match self {
            SpectrumFamily::Harmonic { n_osc, .. } if *n_osc > 1 => {
                Err(Error::Unsupported("level enumeration of several oscillators".into()))
            }
            SpectrumFamily::Box2d { .. } => Ok(self.box2d_levels(count)?.into_iter().map(|(_, _, e)| e).collect()),
            SpectrumFamily::Explicit { levels } => Ok(levels.iter().take(count).cloned().collect()),
            _ => Ok(self.ladders()[0].0.levels(count)),
        }
    }

    /// `(n_x, n_y, E)` for the lowest `count` 2D-box levels.
    pub fn box2d_levels(&self, count: usize) -> Result<Vec<(usize, usize, f64)>> {
        let SpectrumFamily::Box2d { lx, ly, mass, hbar } = self else {
            return invalid("not a 2D box");
        };
        let ex = box_e1(*lx, *mass, *hbar);
        let ey = box_e1(*ly, *mass, *hbar);
        // Every level among the lowest `count` has n_x, n_y ≤ count.
        let limit = count.max(1);
        let mut all = Vec::with_capacity(limit * limit);
        for nx in 1..=limit {
            for ny in 1..=limit {
                let e = ex * (nx * nx) as f64 + ey * (ny * ny) as f64;
                all.push((nx, ny, e));
            }
        }
        all.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        all.truncate(count);
        Ok(all)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    /// Largest tolerated Boltzmann tail mass.
    pub tail_tol: f64,
    pub max_levels: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { tail_tol: 1e-10, max_levels: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OttoCycleSpec {
    pub spec_h: SpectrumFamily,
    pub spec_c: SpectrumFamily,
    pub t_h: f64,
    pub t_c: f64,
    #[serde(default)]
    pub truncation: Truncation,
}

impl OttoCycleSpec {
    pub fn new(spec_h: SpectrumFamily, spec_c: SpectrumFamily, t_h: f64, t_c: f64) -> Self {
        OttoCycleSpec { spec_h, spec_c, t_h, t_c, truncation: Truncation::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec_h.validate()?;
        self.spec_c.validate()?;
        if !(self.t_c > 0.0 && self.t_h.is_finite()) {
            return invalid(format!("temperatures must be positive, got t_c = {}", self.t_c));
        }
        if !(self.t_h > self.t_c) {
            return invalid(format!("t_h = {} must exceed t_c = {}", self.t_h, self.t_c));
        }
        if !(self.truncation.tail_tol > 0.0) || self.truncation.max_levels < 2 {
            return invalid("truncation needs tail_tol > 0 and max_levels >= 2");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachineMode {
    Engine,
    Refrigerator,
    Heater,
    Accelerator,
}

impl MachineMode {
    pub fn classify(w: f64, q_h: f64, q_c: f64) -> MachineMode {
        if w < 0.0 && q_h > 0.0 {
            MachineMode::Engine
        } else if w > 0.0 && q_c > 0.0 {
            MachineMode::Refrigerator
        } else if q_h <= 0.0 && q_c <= 0.0 {
            MachineMode::Heater
        } else {
            MachineMode::Accelerator
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MachineMode::Engine => "engine",
            MachineMode::Refrigerator => "refrigerator",
            MachineMode::Heater => "heater",
            MachineMode::Accelerator => "accelerator",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub work: f64,
    pub heat_hot: f64,
    pub heat_cold: f64,
    pub mode: MachineMode,
    /// `η = −W/Q_h` for engines, `COP = Q_c/W` for refrigerators, absent otherwise.
    pub eta_or_cop: Option<f64>,
}

impl CycleReport {
    pub fn from_heats(heat_hot: f64, heat_cold: f64) -> Self {
        let work = -heat_hot - heat_cold;
        let mode = MachineMode::classify(work, heat_hot, heat_cold);
        let eta_or_cop = match mode {
            MachineMode::Engine => Some(-work / heat_hot),
            MachineMode::Refrigerator => Some(heat_cold / work),
            _ => None,
        };
        CycleReport { work, heat_hot, heat_cold, mode, eta_or_cop }
    }

    pub fn efficiency(&self) -> Option<f64> {
        match self.mode {
            MachineMode::Engine => self.eta_or_cop,
            _ => None,
        }
    }
}

/// Sums for one ladder pair: `(Σ E^h Δp, Σ E^c Δp)` with `Δp = p^h − p^c`.
fn ladder_pair_heats(lh: &Ladder, lc: &Ladder, t_h: f64, t_c: f64, trunc: &Truncation) -> Result<(f64, f64)> {
    let eval = |n: usize| -> (f64, f64, f64) {
        let eh = lh.levels(n);
        let ec = lc.levels(n);
        let ph = boltzmann(&eh, t_h);
        let pc = boltzmann(&ec, t_c);
        let mut qh = 0.0;
        let mut qc = 0.0;
        for k in 0..n {
            qh += eh[k] * (ph[k] - pc[k]);
            qc += ec[k] * (pc[k] - ph[k]);
        }
        let half = n / 2;
        let tail = |p: &[f64]| p[half..].iter().sum::<f64>();
        let etail = |e: &[f64], p: &[f64]| {
            let tot: f64 = e.iter().zip(p).map(|(x, y)| (x * y).abs()).sum();
            let t: f64 = e[half..].iter().zip(&p[half..]).map(|(x, y)| (x * y).abs()).sum();
            if tot > 0.0 {
                t / tot
            } else {
                0.0
            }
        };
        let worst = tail(&ph)
            .max(tail(&pc))
            .max(etail(&eh, &pc))
            .max(etail(&ec, &ph))
            .max(etail(&eh, &ph))
            .max(etail(&ec, &pc));
        (qh, -qc, worst)
    };

    let fixed = match (lh.finite_len(), lc.finite_len()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Truncation(format!("explicit spectra have different lengths {a} and {b}")))
        }
        (Some(a), _) | (_, Some(a)) => Some(a),
        _ => None,
    };
    if let Some(n) = fixed {
        // A finite list is summed completely; an infinite partner is cut at
        // the same length and must already be converged there.
        let (qh, mqc, _) = eval(n);
        if lh.finite_len().is_none() || lc.finite_len().is_none() {
            let t = ladder_tail(
                if lh.finite_len().is_none() { lh } else { lc },
                n,
                if lh.finite_len().is_none() { t_h } else { t_c },
            );
            if t > trunc.tail_tol {
                return Err(Error::Truncation(format!("infinite ladder cut at {n} levels leaves tail mass {t:e}")));
            }
        }
        return Ok((qh, -mqc));
    }
    let mut n = 64.min(trunc.max_levels);
    loop {
        let (qh, mqc, worst) = eval(n);
        if worst < trunc.tail_tol {
            return Ok((qh, -mqc));
        }
        if n >= trunc.max_levels {
            return Err(Error::Truncation(format!(
                "tail mass {worst:e} above {:e} at the cap of {} levels",
                trunc.tail_tol, trunc.max_levels
            )));
        }
        n = (2 * n).min(trunc.max_levels);
    }
}

fn ladder_tail(l: &Ladder, n: usize, t: f64) -> f64 {
    let e = l.levels(2 * n);
    let p = boltzmann(&e, t);
    p[n..].iter().sum()
}

fn boltzmann(levels: &[f64], t: f64) -> Vec<f64> {
    let e0 = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = levels.iter().map(|e| (-(e - e0) / t).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn paired_ladders(spec: &OttoCycleSpec) -> Result<Vec<(Ladder, Ladder, usize)>> {
    let h = spec.spec_h.ladders();
    let c = spec.spec_c.ladders();
    if h.len() != c.len() || h.iter().zip(&c).any(|(a, b)| a.1 != b.1) {
        return Err(Error::Unsupported("hot and cold spectra must have the same ladder structure".into()));
    }
    Ok(h.into_iter().zip(c).map(|((a, m), (b, _))| (a, b, m)).collect())
}

/// Heats and work of the quantized Otto cycle by direct Boltzmann sums.
pub fn cycle_heats(spec: &OttoCycleSpec) -> Result<CycleReport> {
    spec.validate()?;
    let mut q_h = 0.0;
    let mut q_c = 0.0;
    for (lh, lc, mult) in paired_ladders(spec)? {
        let (a, b) = ladder_pair_heats(&lh, &lc, spec.t_h, spec.t_c, &spec.truncation)?;
        q_h += mult as f64 * a;
        q_c += mult as f64 * b;
    }
    Ok(CycleReport::from_heats(q_h, q_c))
}

/// Number of levels compared by [`scaling_factor`].
const SCALING_CHECK_LEVELS: usize = 256;

/// The common ratio `q` with `E_n^c − E_0^c = q (E_n^h − E_0^h)` for every
/// level, if one exists within `1e-9`.
pub fn scaling_factor(spec_h: &SpectrumFamily, spec_c: &SpectrumFamily) -> Option<f64> {
    spec_h.validate().ok()?;
    spec_c.validate().ok()?;
    let h = spec_h.ladders();
    let c = spec_c.ladders();
    if h.len() != c.len() || h.iter().zip(&c).any(|(a, b)| a.1 != b.1) {
        return None;
    }
    let mut q: Option<f64> = None;
    for ((lh, _), (lc, _)) in h.iter().zip(&c) {
        let n = match (lh.finite_len(), lc.finite_len()) {
            (Some(a), Some(b)) if a == b => a,
            (None, None) => SCALING_CHECK_LEVELS,
            _ => return None,
        };
        let eh = lh.levels(n);
        let ec = lc.levels(n);
        for k in 1..n {
            let dh = eh[k] - eh[0];
            let dc = ec[k] - ec[0];
            let scale = eh[k].abs().max(1e-300);
            if dh.abs() <= 1e-14 * scale {
                if dc.abs() > 1e-14 * ec[k].abs().max(1e-300) {
                    return None;
                }
                continue;
            }
            let r = dc / dh;
            match q {
                None => q = Some(r),
                Some(q0) if (r - q0).abs() < 1e-9 => {}
                _ => return None,
            }
        }
    }
    q.filter(|x| *x > 0.0)
}

/// Heat capacity `Var(E)/T²` of the thermal state (k_B = 1).
pub fn cv_quantum(spec: &SpectrumFamily, t: f64) -> Result<f64> {
    cv_quantum_with(spec, t, &Truncation::default())
}

pub fn cv_quantum_with(spec: &SpectrumFamily, t: f64, trunc: &Truncation) -> Result<f64> {
    spec.validate()?;
    if !(t > 0.0) {
        return invalid(format!("temperature must be positive, got {t}"));
    }
    let mut cv = 0.0;
    for (ladder, mult) in spec.ladders() {
        cv += mult as f64 * ladder_cv(&ladder, t, trunc)?;
    }
    Ok(cv)
}

fn ladder_cv(l: &Ladder, t: f64, trunc: &Truncation) -> Result<f64> {
    let var = |n: usize| -> (f64, f64) {
        let e = l.levels(n);
        let p = boltzmann(&e, t);
        let mean: f64 = e.iter().zip(&p).map(|(a, b)| a * b).sum();
        let v: f64 = e.iter().zip(&p).map(|(a, b)| (a - mean).powi(2) * b).sum();
        let half = n / 2;
        let tail: f64 =
            e[half..].iter().zip(&p[half..]).map(|(a, b)| (a - mean).powi(2) * b).sum::<f64>() / v.max(1e-300);
        (v / (t * t), tail.max(p[half..].iter().sum()))
    };
    if let Some(n) = l.finite_len() {
        return Ok(var(n).0);
    }
    let mut n = 64.min(trunc.max_levels);
    loop {
        let (cv, tail) = var(n);
        if tail < trunc.tail_tol {
            return Ok(cv);
        }
        if n >= trunc.max_levels {
            return Err(Error::Truncation(format!("heat capacity tail {tail:e} at the level cap")));
        }
        n = (2 * n).min(trunc.max_levels);
    }
}

/// `N (x/2 · csch(x/2))²` with `x = ħω/T`.
pub fn cv_harmonic_closed_form(omega: f64, n_osc: usize, t: f64, hbar: f64) -> f64 {
    let y = hbar * omega / (2.0 * t);
    if y == 0.0 {
        return n_osc as f64;
    }
    let s = y / y.sinh();
    n_osc as f64 * s * s
}

/// Work and heats from the heat-capacity integral
/// `W = (q − 1)∫_{T_c/q}^{T_h} C_v dT`, `Q_h = ∫ C_v dT`, `Q_c = −q∫ C_v dT`.
pub fn work_via_cv(spec: &OttoCycleSpec) -> Result<(f64, f64, f64)> {
    spec.validate()?;
    let q = scaling_factor(&spec.spec_h, &spec.spec_c)
        .ok_or_else(|| Error::Unsupported("heat-capacity integral needs homogeneously scaled spectra".into()))?;
    let lo = spec.t_c / q;
    let hi = spec.t_h;
    let mut failure = None;
    let integral = quad::integrate(
        |t| match cv_quantum_with(&spec.spec_h, t, &spec.truncation) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        QuadOptions { rel_tol: 1e-11, abs_tol: 1e-300, max_intervals: 4000 },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(((q - 1.0) * integral, integral, -q * integral))
}

/// `(η, COP) = (1 − q, q/(1 − q))` for homogeneous scaling.
pub fn efficiency_homogeneous(q: f64) -> Result<(f64, f64)> {
    if !(q > 0.0 && q < 1.0) {
        return invalid(format!("scaling factor must lie in (0, 1), got {q}"));
    }
    Ok((1.0 - q, q / (1.0 - q)))
}

pub fn carnot_efficiency(t_h: f64, t_c: f64) -> f64 {
    1.0 - t_c / t_h
}

/// Errors if `eta` exceeds the Carnot value by more than `1e-9`.
pub fn check_carnot(eta: f64, t_h: f64, t_c: f64) -> Result<()> {
    let car = carnot_efficiency(t_h, t_c);
    if eta > car + 1e-9 {
        return invalid(format!("efficiency {eta} exceeds the Carnot bound {car}"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealGasParams {
    /// `C_p/C_v`
    pub gamma: f64,
    /// Compression ratio `Vol_c/Vol_h`.
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealGasReport {
    /// `None` at `r = 1` and at the Carnot ratio, where no net work flows.
    pub mode: Option<MachineMode>,
    pub eta: f64,
    pub r_carnot: f64,
}

/// Classical ideal-gas Otto cycle: `η = 1 − r^{1−γ}`.
pub fn ideal_gas_otto(p: IdealGasParams, t_h: f64, t_c: f64) -> Result<IdealGasReport> {
    if !(p.gamma > 1.0) || !(p.r >= 1.0) {
        return invalid(format!("need gamma > 1 and r >= 1, got {p:?}"));
    }
    if !(t_h > t_c && t_c > 0.0) {
        return invalid("need t_h > t_c > 0");
    }
    let eta = 1.0 - p.r.powf(1.0 - p.gamma);
    let r_carnot = (t_h / t_c).powf(1.0 / (p.gamma - 1.0));
    let rel = (p.r - r_carnot).abs() / r_carnot;
    let mode = if p.r == 1.0 || rel < 1e-12 {
        None
    } else if p.r < r_carnot {
        Some(MachineMode::Engine)
    } else {
        Some(MachineMode::Refrigerator)
    };
    Ok(IdealGasReport { mode, eta, r_carnot })
}

/// `μ = 2π m E A`, the adiabatic invariant of a classical particle in a 2D container.
pub fn classical_adiabatic_invariant_2d(m: f64, e: f64, a: f64) -> Result<f64> {
    if !(m > 0.0 && e > 0.0 && a > 0.0) {
        return invalid("mass, energy and area must be positive");
    }
    Ok(2.0 * PI * m * e * a)
}

/// Classical energy after an adiabatic area change at fixed `μ`.
pub fn classical_energy_after(e: f64, area_before: f64, area_after: f64) -> f64 {
    e * area_before / area_after
}

/// The `ħ → 0` limit of the 2D-box cycle. Each axis is a classical 1D box
/// with `C_v = ½` whose energy scales by `q_a = (L_a^h/L_a^c)²`.
pub fn classical_limit_box2d(lx_h: f64, ly_h: f64, lx_c: f64, ly_c: f64, t_h: f64, t_c: f64) -> CycleReport {
    let mut q_h = 0.0;
    let mut q_c = 0.0;
    for (lh, lc) in [(lx_h, lx_c), (ly_h, ly_c)] {
        let q = (lh / lc).powi(2);
        q_h += 0.5 * (t_h - t_c / q);
        q_c += 0.5 * (t_c - q * t_h);
    }
    CycleReport::from_heats(q_h, q_c)
}

/// Hot-length window `[(lx lo, lx hi), (ly lo, ly hi)]` of [`Map2dSpec::fig3`].
pub const FIG3_HOT_RANGE: [(f64, f64); 2] = [(0.2, 1.6), (0.05, 0.4)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Map2dSpec {
    pub lx_c: f64,
    pub ly_c: f64,
    pub t_h: f64,
    pub t_c: f64,
    #[serde(default = "one_f")]
    pub mass: f64,
    #[serde(default = "one_f")]
    pub hbar: f64,
    pub lx_h: Vec<f64>,
    pub ly_h: Vec<f64>,
}

impl Map2dSpec {
    /// Square grid over `[lo, hi]` on both axes.
    pub fn square_grid(lx_c: f64, ly_c: f64, t_h: f64, t_c: f64, n: usize, lo_hi: [(f64, f64); 2]) -> Self {
        Map2dSpec {
            lx_c,
            ly_c,
            t_h,
            t_c,
            mass: 1.0,
            hbar: 1.0,
            lx_h: linspace(lo_hi[0].0, lo_hi[0].1, n),
            ly_h: linspace(lo_hi[1].0, lo_hi[1].1, n),
        }
    }

    /// The desk-scale efficiency map: cold box `1 × 0.25`, `T_c` equal to
    /// the x-axis ground energy `π²/2` and `T_h = 2 T_c`, with an `n × n`
    /// grid of hot lengths.
    pub fn fig3(n: usize) -> Self {
        let t_c = box_e1(1.0, 1.0, 1.0);
        Map2dSpec::square_grid(1.0, 0.25, 2.0 * t_c, t_c, n, FIG3_HOT_RANGE)
    }

    /// Temperatures measured in units of the x-axis ground energy at the
    /// cold lengths.
    pub fn cold_energy_scale(&self) -> f64 {
        box_e1(self.lx_c, self.mass, self.hbar)
    }

    pub fn cycle(&self, lx_h: f64, ly_h: f64) -> OttoCycleSpec {
        OttoCycleSpec::new(
            SpectrumFamily::Box2d { lx: lx_h, ly: ly_h, mass: self.mass, hbar: self.hbar },
            SpectrumFamily::Box2d { lx: self.lx_c, ly: self.ly_c, mass: self.mass, hbar: self.hbar },
            self.t_h,
            self.t_c,
        )
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MapCell {
    /// `η/η_Car` at an engine point.
    Ratio(f64),
    NotEngine(MachineMode),
}

impl MapCell {
    pub fn ratio(&self) -> Option<f64> {
        match self {
            MapCell::Ratio(r) => Some(*r),
            MapCell::NotEngine(_) => None,
        }
    }

    fn from_report(r: &CycleReport, t_h: f64, t_c: f64) -> MapCell {
        match r.efficiency() {
            Some(eta) => MapCell::Ratio(eta / carnot_efficiency(t_h, t_c)),
            None => MapCell::NotEngine(r.mode),
        }
    }
}

/// `cells[j][i]` belongs to `(lx_h[i], ly_h[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyMap {
    pub lx_h: Vec<f64>,
    pub ly_h: Vec<f64>,
    pub cells: Vec<Vec<MapCell>>,
}

impl EfficiencyMap {
    /// Header row of `Lx_h` values, first column `Ly_h`, `NA` for non-engine cells.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("ly_h\\lx_h");
        for x in &self.lx_h {
            s.push(',');
            s.push_str(&fmt17(*x));
        }
        s.push('\n');
        for (j, y) in self.ly_h.iter().enumerate() {
            s.push_str(&fmt17(*y));
            for c in &self.cells[j] {
                s.push(',');
                match c.ratio() {
                    Some(r) => s.push_str(&fmt17(r)),
                    None => s.push_str("NA"),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.cells.iter().flatten().filter_map(|c| c.ratio()).reduce(f64::max)
    }
}

/// Floats printed with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid_map<F>(spec: &Map2dSpec, cell: F) -> Result<EfficiencyMap>
where
    F: Fn(f64, f64) -> Result<MapCell> + Sync,
{
    if spec.lx_h.is_empty() || spec.ly_h.is_empty() {
        return invalid("empty grid");
    }
    if spec.lx_h.iter().chain(&spec.ly_h).any(|x| !(*x > 0.0)) {
        return invalid("grid lengths must be positive");
    }
    let cells: Result<Vec<Vec<MapCell>>> =
        spec.ly_h.par_iter().map(|&y| spec.lx_h.iter().map(|&x| cell(x, y)).collect()).collect();
    Ok(EfficiencyMap { lx_h: spec.lx_h.clone(), ly_h: spec.ly_h.clone(), cells: cells? })
}

/// Quantum 2D-box map of `η/η_Car`, parallel over grid rows.
pub fn efficiency_map_2dbox(spec: &Map2dSpec) -> Result<EfficiencyMap> {
    grid_map(spec, |x, y| {
        let r = cycle_heats(&spec.cycle(x, y))?;
        Ok(MapCell::from_report(&r, spec.t_h, spec.t_c))
    })
}

/// Classical-limit counterpart of [`efficiency_map_2dbox`].
pub fn efficiency_map_classical_limit(spec: &Map2dSpec) -> Result<EfficiencyMap> {
    grid_map(spec, |x, y| {
        let r = classical_limit_box2d(x, y, spec.lx_c, spec.ly_c, spec.t_h, spec.t_c);
        Ok(MapCell::from_report(&r, spec.t_h, spec.t_c))
    })
}

/// Ideal-gas map with the area as volume (`γ = 2` in two dimensions).
pub fn efficiency_map_ideal_gas(spec: &Map2dSpec) -> Result<EfficiencyMap> {
    let a_c = spec.lx_c * spec.ly_c;
    grid_map(spec, |x, y| {
        let r = a_c / (x * y);
        if r < 1.0 {
            return Ok(MapCell::NotEngine(MachineMode::Refrigerator));
        }
        let rep = ideal_gas_otto(IdealGasParams { gamma: 2.0, r }, spec.t_h, spec.t_c)?;
        Ok(match rep.mode {
            Some(MachineMode::Engine) => MapCell::Ratio(rep.eta / carnot_efficiency(spec.t_h, spec.t_c)),
            Some(m) => MapCell::NotEngine(m),
            None => MapCell::NotEngine(MachineMode::Accelerator),
        })
    })
}

/// Point on the area-preserving line: `(L_x^h, L_y^h) = (j L_x^c, L_y^c / j)`.
pub fn area_preserving_point(spec: &Map2dSpec, j: f64) -> (f64, f64) {
    (j * spec.lx_c, spec.ly_c / j)
}

/// Point on the homogeneous line: both lengths scaled by `s`, so `q = s²`.
pub fn homogeneous_point(spec: &Map2dSpec, s: f64) -> (f64, f64) {
    (s * spec.lx_c, s * spec.ly_c)
}
