//! Power beyond what any stochastic (fully dephased) engine can deliver.

use qtherm::engines::{logspace, signature_check, EngineConfig};

fn main() -> qtherm::Result<()> {
    let cfg = EngineConfig::nv_center(1.0);
    let taus = logspace(1e-3, 1.0, 16);
    for dephased in [false, true] {
        let report = signature_check(&cfg, &taus, dephased)?;
        let label = if dephased { "dephased" } else { "coherent" };
        println!("{label}: {} of {} points beat the bound", report.violations.len(), taus.len());
        for (tau, s, p, bound) in &report.points {
            let mark = if p.abs() > *bound { " <" } else { "" };
            println!("  tau = {tau:.3e}  s = {s:.3e}  |P| = {:.3e}  bound = {bound:.3e}{mark}", p.abs());
        }
    }
    Ok(())
}
