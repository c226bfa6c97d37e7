//! Plot data for the reproduced figures. Nothing here draws; each figure
//! becomes one or more CSV files with a header naming axes and units.

use std::f64::consts::PI;

use qtherm::engines::{logspace, power_sweep, EngineConfig};
use qtherm::otto::{
    area_preserving_point, carnot_efficiency, classical_limit_box2d, cv_quantum, cycle_heats, homogeneous_point,
    linspace, Map2dSpec, SpectrumFamily,
};
use qtherm::wigner::{harmonic_classical_marginal, harmonic_quantum_marginal};
use qtherm::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{hash_str, SweepParams};
use crate::scenarios::{map2d_table, signature_table};
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum FigureId {
    #[value(name = "fig1")]
    Fig1,
    #[value(name = "fig3")]
    Fig3,
    #[value(name = "fig4-hc")]
    Fig4Hc,
    #[value(name = "fig5a")]
    Fig5a,
    #[value(name = "fig5b")]
    Fig5b,
}

impl FigureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4Hc => "fig4-hc",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
        }
    }
}

/// One output file of a figure.
pub struct FigureFile {
    pub name: String,
    pub table: Table,
    /// The parameters that generated the table.
    pub config: Value,
}

impl FigureFile {
    pub fn config_hash(&self) -> String {
        hash_str(&serde_json::to_string(&self.config).expect("config serializes"))
    }

    pub fn csv(&self, figure: FigureId) -> String {
        let header = vec![
            format!("qtherm figure {} config_hash={}", figure.as_str(), self.config_hash()),
            format!("config: {}", serde_json::to_string(&self.config).expect("config serializes")),
        ];
        self.table.to_csv(&header)
    }
}

/// `grid` sets the side of the efficiency map; the other figures ignore it.
pub fn figure(id: FigureId, grid: usize) -> Result<Vec<FigureFile>> {
    match id {
        FigureId::Fig1 => fig1(),
        FigureId::Fig3 => fig3(grid),
        FigureId::Fig4Hc => fig4_hc(),
        FigureId::Fig5a => fig5a(),
        FigureId::Fig5b => fig5b(),
    }
}

fn fig1() -> Result<Vec<FigureFile>> {
    let (t_low, t_high) = (0.1, 5.0);
    let xs = linspace(-6.0, 6.0, 241);
    let mut t = Table::new(
        &["x", "P_classical_low_T", "P_quantum_low_T", "P_classical_high_T", "P_quantum_high_T"],
        "x in units of sqrt(hbar/(m omega)), densities per unit x; low T = 0.1 hbar omega, high T = 5 hbar omega",
    );
    for &x in &xs {
        t.push(vec![
            x.into(),
            harmonic_classical_marginal(x, 1.0, 1.0, t_low).into(),
            harmonic_quantum_marginal(x, 1.0, 1.0, t_low, 1.0).into(),
            harmonic_classical_marginal(x, 1.0, 1.0, t_high).into(),
            harmonic_quantum_marginal(x, 1.0, 1.0, t_high, 1.0).into(),
        ]);
    }
    let config =
        json!({ "mass": 1.0, "omega": 1.0, "hbar": 1.0, "t_low": t_low, "t_high": t_high, "x": [-6.0, 6.0, 241] });
    Ok(vec![FigureFile { name: "fig1.csv".into(), table: t, config }])
}

fn fig3(n: usize) -> Result<Vec<FigureFile>> {
    let spec = Map2dSpec::fig3(n);
    let base = json!({
        "lx_c": spec.lx_c, "ly_c": spec.ly_c, "t_h": spec.t_h, "t_c": spec.t_c,
        "lx_h": [spec.lx_h[0], spec.lx_h[n - 1], n], "ly_h": [spec.ly_h[0], spec.ly_h[n - 1], n],
    });
    let grid = map2d_table(&spec)?;

    let eta_car = carnot_efficiency(spec.t_h, spec.t_c);
    let mut lines = Table::new(
        &["line", "parameter", "lx_h", "ly_h", "eta_ratio_quantum", "eta_ratio_classical_limit"],
        "parameter is j on the area-preserving line (lx_h = j lx_c, ly_h = ly_c / j) and s on the homogeneous line (both lengths times s)",
    );
    let ratio = |r: qtherm::otto::CycleReport| r.efficiency().map(|e| e / eta_car);
    for (name, range) in [("area_preserving", (0.6, 1.0)), ("homogeneous", (0.5, 1.0))] {
        for v in linspace(range.0, range.1, 81) {
            let (x, y) =
                if name == "area_preserving" { area_preserving_point(&spec, v) } else { homogeneous_point(&spec, v) };
            let q = cycle_heats(&spec.cycle(x, y))?;
            let c = classical_limit_box2d(x, y, spec.lx_c, spec.ly_c, spec.t_h, spec.t_c);
            lines.push(vec![name.into(), v.into(), x.into(), y.into(), ratio(q).into(), ratio(c).into()]);
        }
    }
    let mut line_cfg = base.clone();
    line_cfg["lines"] = json!({ "area_preserving": [0.6, 1.0, 81], "homogeneous": [0.5, 1.0, 81] });
    Ok(vec![
        FigureFile { name: "fig3_maps.csv".into(), table: grid, config: base },
        FigureFile { name: "fig3_lines.csv".into(), table: lines, config: line_cfg },
    ])
}

fn fig4_hc() -> Result<Vec<FigureFile>> {
    // Box length chosen so that the ground energy is one.
    let length = PI / 2f64.sqrt();
    let ho = SpectrumFamily::harmonic(1.0);
    let bx = SpectrumFamily::box1d(length);
    let ts = linspace(0.02, 3.0, 150);
    let mut t = Table::new(
        &["T", "Cv_HO_quantum", "Cv_HO_classical", "Cv_box_quantum", "Cv_box_classical"],
        "T in units of hbar omega (oscillator) and of the box ground energy hbar^2 pi^2 / (2 m L^2); Cv in units of k_B",
    );
    for &temp in &ts {
        t.push(vec![temp.into(), cv_quantum(&ho, temp)?.into(), 1.0.into(), cv_quantum(&bx, temp)?.into(), 0.5.into()]);
    }
    let config = json!({ "omega": 1.0, "box_length": length, "mass": 1.0, "hbar": 1.0, "T": [0.02, 3.0, 150] });
    Ok(vec![FigureFile { name: "fig4_hc.csv".into(), table: t, config }])
}

fn nv_sweep() -> SweepParams {
    SweepParams::default()
}

fn fig5a() -> Result<Vec<FigureFile>> {
    let p = nv_sweep();
    let t = signature_table(&p)?;
    let config = serde_json::to_value(&p).expect("params serialize");
    Ok(vec![FigureFile { name: "fig5a.csv".into(), table: t, config }])
}

fn fig5b() -> Result<Vec<FigureFile>> {
    let p = nv_sweep();
    let cfg: EngineConfig = p.params;
    let rows = power_sweep(&cfg, &logspace(p.tau_min, p.tau_max, p.points))?;
    let mut t = Table::new(
        &["tau_cyc", "s_bar", "P_cont", "P_2st", "P_4st"],
        "tau_cyc in microseconds, s_bar dimensionless, power in rad/us (hbar = 1)",
    );
    for r in rows {
        t.push(vec![r.tau_cyc.into(), r.s_bar.into(), r.p_cont.into(), r.p_2st.into(), r.p_4st.into()]);
    }
    let config = serde_json::to_value(&p).expect("params serialize");
    Ok(vec![FigureFile { name: "fig5b.csv".into(), table: t, config }])
}
