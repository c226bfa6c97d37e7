//! Efficiency of a 2D-box Otto engine over a grid of hot-side box shapes,
//! next to its classical limit and the ideal gas.
//!
//! `cargo run --release --example efficiency_map -- 60` sets the grid side
//! (default 40). The CSV goes to stdout when `--csv` is passed.

use qtherm::otto::{
    area_preserving_point, cycle_heats, efficiency_map_2dbox, efficiency_map_classical_limit, efficiency_map_ideal_gas,
    Map2dSpec,
};

fn main() -> qtherm::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.iter().find_map(|a| a.parse().ok()).unwrap_or(40);
    let spec = Map2dSpec::fig3(n);

    let quantum = efficiency_map_2dbox(&spec)?;
    if args.iter().any(|a| a == "--csv") {
        print!("{}", quantum.to_csv());
        return Ok(());
    }
    let classical = efficiency_map_classical_limit(&spec)?;
    let gas = efficiency_map_ideal_gas(&spec)?;
    println!("{n}x{n} grid, T_c = {:.4}, T_h = {:.4}", spec.t_c, spec.t_h);
    let show = |name: &str, m: Option<f64>| match m {
        Some(r) => println!("  {name:<16} max eta/eta_Car = {r:.4}"),
        None => println!("  {name:<16} no engine points"),
    };
    show("quantum", quantum.max_ratio());
    show("classical limit", classical.max_ratio());
    show("ideal gas", gas.max_ratio());

    let engines = quantum.cells.iter().flatten().filter(|c| c.ratio().is_some()).count();
    println!("  {engines} of {} quantum cells run as engines", n * n);

    // Walk the line that keeps the box area fixed.
    println!("\narea-preserving deformations (Lx_h, Ly_h) = (j Lx_c, Ly_c / j)");
    for j in [0.6, 0.7, 0.8, 0.9, 1.0] {
        let (x, y) = area_preserving_point(&spec, j);
        let r = cycle_heats(&spec.cycle(x, y))?;
        println!("  j = {j:.1}: W = {:+.5}  mode = {}", r.work, r.mode.as_str());
    }
    Ok(())
}
