//! Phase arithmetic on the circle.

use std::f64::consts::{PI, TAU};

/// Maps an angle onto `(-π, π]`.
#[inline]
pub fn wrap_to_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Largest wrapped difference `max_i |wrap(a_i - b_i)|`.
pub fn max_wrapped_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "phase vectors differ in length");
    a.iter()
        .zip(b)
        .map(|(x, y)| wrap_to_pi(x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest wrapped difference after removing the best global phase shift
/// (the circular mean of `a - b`).
pub fn max_wrapped_distance_mod_shift(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "phase vectors differ in length");
    let (s, c) = a
        .iter()
        .zip(b)
        .fold((0.0, 0.0), |(s, c), (x, y)| ((s + (x - y).sin()), (c + (x - y).cos())));
    let shift = if s == 0.0 && c == 0.0 { 0.0 } else { s.atan2(c) };
    a.iter()
        .zip(b)
        .map(|(x, y)| wrap_to_pi(x - y - shift).abs())
        .fold(0.0, f64::max)
}
