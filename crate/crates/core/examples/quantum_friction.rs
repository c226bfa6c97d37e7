//! Extra work spent when a drive does not commute with itself at
//! different times, and where it goes.

use qtherm::friction::{analyze, power_split, DriveProtocol};
use qtherm::hilbert::Operator;

fn main() -> qtherm::Result<()> {
    // Field doubles in strength while turning by one radian.
    let p = DriveProtocol::rotating_qubit(1.0, 2.0, 1.0, 2.0, 1.0)?;
    let r = analyze(&p)?;
    println!("rotating qubit");
    println!("  W_real = {:+.6}  W_adiabatic = {:+.6}", r.w_real, r.w_adiabatic);
    println!("  W_fric = {:.6}  S(rho_tau||rho_f)/beta_f = {:.6}", r.w_fric, r.entropy_form);
    println!("  Bures lower bound = {:.6}", r.bures_bound);

    let split = power_split(&p)?;
    let coh: f64 = split.p_coh.iter().map(|x| x.abs()).fold(0.0, f64::max);
    println!("  max |P_coh| = {coh:.4}, integrated power = {:+.6}", split.integrated_work());

    let h0 = Operator::from_real_diagonal(&[0.0, 1.0, 2.5])?;
    let p = DriveProtocol::scaled(&h0, |t| 1.0 + t, 1.0, 1.0)?;
    println!("\ncommuting compression: W_fric = {:.2e}", analyze(&p)?.w_fric);
    Ok(())
}
