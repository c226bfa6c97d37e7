//! Time the heavy kernels. Pass a substring to run a subset, e.g.
//! `cargo run --release --example benchmarks -- expm_dim`.

use qtherm::bench::{run_suite, BenchOptions};

fn main() -> qtherm::Result<()> {
    let filter = std::env::args().nth(1);
    let opts = BenchOptions { fig3_n: 50, ..BenchOptions::default() };
    let report = run_suite(filter.as_deref(), &opts, None)?;
    for c in &report.cases {
        println!("{:<20} median {:>10.3e} s   p95 {:>10.3e} s", c.name, c.median_s, c.p95_s);
    }
    if let Some(k) = report.scaling_exponent {
        println!("propagator cost ~ N^{k:.2}");
    }
    Ok(())
}
