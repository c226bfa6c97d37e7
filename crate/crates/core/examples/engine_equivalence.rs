//! Continuous, two-stroke and four-stroke three-level engines with the same
//! action share their thermodynamics when the action is small.

use qtherm::engines::{logspace, power_sweep, run_machine, EngineConfig, MachineKind};

fn main() -> qtherm::Result<()> {
    let cfg = EngineConfig::nv_center(1.0);
    println!("NV-like engine, omega = {:.1} rad/us", cfg.omega());

    for kind in MachineKind::ALL {
        let r = run_machine(kind, &cfg, false)?;
        println!(
            "  {:<12} P = {:+.5e}  J_h = {:+.5e}  eta = {:.6}",
            kind.as_str(),
            r.power,
            r.flux_hot,
            r.efficiency()
        );
    }

    println!("\n{:>10} {:>10} {:>13} {:>13} {:>13}", "tau", "s_bar", "P_cont", "P_2st", "P_4st");
    for row in power_sweep(&cfg, &logspace(1e-3, 3.0, 10))? {
        println!(
            "{:>10.3e} {:>10.3e} {:>+13.5e} {:>+13.5e} {:>+13.5e}",
            row.tau_cyc, row.s_bar, row.p_cont, row.p_2st, row.p_4st
        );
    }
    Ok(())
}
