//! Conversions between laboratory units and the internal ħ = k_B = 1 scale.
//!
//! A temperature `T` becomes the angular frequency `k_B T/ħ`, so a model
//! written in rad/s can take bath temperatures in kelvin. The engine presets
//! use microseconds, for which [`mhz_to_rad_per_us`] and
//! [`kelvin_to_rad_per_us`] give the matching scale.

use std::f64::consts::PI;

/// Reduced Planck constant in J·s (exact since the 2019 SI).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (exact).
pub const K_B_SI: f64 = 1.380_649e-23;

/// `k_B T/ħ` in rad/s.
pub fn kelvin_to_rad_per_s(t_kelvin: f64) -> f64 {
    K_B_SI * t_kelvin / HBAR_SI
}

pub fn rad_per_s_to_kelvin(omega: f64) -> f64 {
    HBAR_SI * omega / K_B_SI
}

/// `k_B T/ħ` in rad/μs.
pub fn kelvin_to_rad_per_us(t_kelvin: f64) -> f64 {
    kelvin_to_rad_per_s(t_kelvin) * 1e-6
}

pub fn rad_per_us_to_kelvin(omega: f64) -> f64 {
    rad_per_s_to_kelvin(omega * 1e6)
}

/// An ordinary frequency in MHz as an angular frequency in rad/μs.
pub fn mhz_to_rad_per_us(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz
}

pub fn rad_per_us_to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Inverse temperature `ħ/(k_B T)` in μs, the form the engine presets take.
pub fn beta_us_from_kelvin(t_kelvin: f64) -> f64 {
    1.0 / kelvin_to_rad_per_us(t_kelvin)
}
