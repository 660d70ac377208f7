//! Unit conventions.
//!
//! Time is measured in microseconds and angular frequencies in rad/us, with
//! hbar = 1. Reports also give multiples of 2*pi x MHz; since
//! 1 rad/us = 1e6 rad/s, a value `w` in rad/us equals `w / (2*pi)` in units
//! of 2*pi x MHz.

use std::f64::consts::PI;

/// Converts an angular frequency in rad/us into units of 2*pi x MHz.
pub fn to_two_pi_mhz(rad_per_us: f64) -> f64 {
    rad_per_us / (2.0 * PI)
}

/// Converts a value quoted in units of 2*pi x MHz into rad/us.
pub fn from_two_pi_mhz(two_pi_mhz: f64) -> f64 {
    two_pi_mhz * 2.0 * PI
}
