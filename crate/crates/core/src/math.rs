//! Float helpers that work without `std`.

/// Base-2 logarithm.
#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
#[inline]
pub fn neg_xlogx(p: f64) -> f64 {
    if p > 0.0 {
        -p * log2(p)
    } else {
        0.0
    }
}

/// Shannon entropy in bits of a mass vector.
pub fn entropy_of(mass: &[f64]) -> f64 {
    mass.iter().map(|&p| neg_xlogx(p)).sum()
}

/// Message-set size `ceil(2^{n R})`, at least one.
pub fn message_count(n: usize, rate: f64) -> usize {
    let v = ceil(exp2(n as f64 * rate));
    if v < 1.0 {
        1
    } else {
        v as usize
    }
}
