//! Entropy primitives in bits, with `0 log 0 := 0`.

/// `F(x) = -x log2 x`, zero at `x <= 0`.
#[inline]
pub fn neg_x_log2_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h(p) = F(p) + F(1 - p)`.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    neg_x_log2_x(p) + neg_x_log2_x(1.0 - p)
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities.iter().map(|&p| neg_x_log2_x(p)).sum()
}

/// Entanglement entropy of a two-qubit pure state given `|det M|^2` of its
/// amplitude matrix, i.e. `det(rho_A)`.
#[inline]
pub fn entropy_from_reduced_det(det: f64) -> f64 {
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    binary_entropy(0.5 * (1.0 + disc))
}

/// Entanglement of formation as a function of the squared concurrence.
#[inline]
pub fn eof_from_concurrence_sqr(c2: f64) -> f64 {
    let c2 = c2.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c2).sqrt()))
}
