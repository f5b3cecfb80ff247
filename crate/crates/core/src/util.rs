use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

/// `x mod m` in `[0, m)` for `m > 0`.
pub(crate) fn rem(x: f64, m: f64) -> f64 {
    let r = x - Float::floor(x / m) * m;
    if r >= m {
        0.0
    } else {
        r
    }
}

/// `e^{2πi r/n}`, with the residue reduced first so the angle stays in `[0, 2π)`.
pub(crate) fn root_of_unity(r: i64, n: usize) -> Complex64 {
    let r = r.rem_euclid(n as i64);
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    cis(TAU * r as f64 / n as f64)
}

pub(crate) fn cis(angle: f64) -> Complex64 {
    Complex64::new(Float::cos(angle), Float::sin(angle))
}

/// Argument in `[0, 2π)`.
pub(crate) fn arg_positive(z: Complex64) -> f64 {
    let a = Float::atan2(z.im, z.re);
    if a < 0.0 {
        let b = a + TAU;
        if b >= TAU {
            0.0
        } else {
            b
        }
    } else {
        a
    }
}
