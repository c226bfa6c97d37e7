//! Converting lab numbers into the ħ = k_B = 1, microsecond units used by
//! the engine presets.

use qtherm::units::{beta_us_from_kelvin, mhz_to_rad_per_us, rad_per_us_to_kelvin};

fn main() {
    let omega = mhz_to_rad_per_us(2600.0);
    println!("2.6 GHz splitting = {omega:.1} rad/us = {:.4} K", rad_per_us_to_kelvin(omega));
    for t in [0.01, 0.1, 1.0, 300.0] {
        let beta = beta_us_from_kelvin(t);
        println!("T = {t:>6} K: beta = {beta:.4e} us, beta*omega = {:.4}", beta * omega);
    }
}
