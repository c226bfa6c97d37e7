//! The three-level engine coupled unitarily to qubit heat exchangers and a
//! qubit battery, each refreshed every cycle.

use qtherm::engines::{logspace, MachineKind};
use qtherm::exchangers::{cycle_energetics_strong, engine_limit_cycle, exchanger_sweep, ExchangerSetup};

fn main() -> qtherm::Result<()> {
    let setup = ExchangerSetup::resonant(2.0, 1.0, 0.2, 2.0, 1.0, 0.5);

    for kind in MachineKind::ALL {
        let rho = engine_limit_cycle(kind, &setup)?;
        let r = cycle_energetics_strong(kind, &setup, &rho)?;
        println!(
            "{:<12} W = {:+.6e}  Q_h = {:+.6e}  Q_c = {:+.6e}  closure = {:.1e}",
            kind.as_str(),
            r.work,
            r.heat_hot,
            r.heat_cold,
            r.closure()
        );
    }

    println!("\nwork gap between stroke and continuous engines");
    for row in exchanger_sweep(&setup, &logspace(0.01, 1.0, 6))? {
        println!(
            "  tau = {:.3e}  |W_2st - W_cont| = {:.3e}  |W_4st - W_cont| = {:.3e}",
            row.tau_cyc,
            (row.w[1] - row.w[0]).abs(),
            (row.w[2] - row.w[0]).abs()
        );
    }
    Ok(())
}
