//! Scalar helpers. Transcendentals go through `libm` so the crate builds
//! without `std`.

use core::f64::consts::PI;

pub type Complex64 = num_complex::Complex<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// `e^{2πi k/d}`, with `k` reduced mod `d` first so large exponents keep
/// full precision. Quarter turns are exact.
#[inline]
pub fn root_of_unity(k: usize, d: usize) -> Complex64 {
    let k = k % d;
    match (4 * k) % (4 * d) {
        0 => return ONE,
        q if q == d => return Complex64::new(0.0, 1.0),
        q if q == 2 * d => return Complex64::new(-1.0, 0.0),
        q if q == 3 * d => return Complex64::new(0.0, -1.0),
        _ => {}
    }
    cis(2.0 * PI * k as f64 / d as f64)
}

#[inline]
pub fn abs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Non-negative residue of `a` mod `d`.
#[inline]
pub fn modulo(a: i64, d: usize) -> usize {
    a.rem_euclid(d as i64) as usize
}
