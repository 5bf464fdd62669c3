use rand::Rng;

use super::NeuralError;
use crate::scalar::Scalar;

/// Draws a token id from `probs` sharpened or flattened by `temperature`.
///
/// At temperature 0 this is the argmax, ties going to the lowest id. Above
/// 0 the draw is from `p_i^(1/τ)` renormalised, which is
/// `softmax(ln p / τ)`. Weights need not sum to exactly one; zero entries
/// are never drawn.
pub fn sample_next<T: Scalar, R: Rng + ?Sized>(
    probs: &[T],
    temperature: f64,
    rng: &mut R,
) -> Result<usize, NeuralError> {
    let probs: Vec<f64> = probs.iter().map(|p| p.as_f64()).collect();
    if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) || !(temperature >= 0.0) {
        return Err(NeuralError::DegenerateDistribution);
    }
    let Some(max) = probs.iter().copied().reduce(f64::max).filter(|&m| m > 0.0) else {
        return Err(NeuralError::DegenerateDistribution);
    };
    if temperature == 0.0 {
        return Ok(probs.iter().position(|&p| p == max).expect("max is present"));
    }
    let log_max = max.ln() / temperature;
    let weights: Vec<f64> = probs
        .iter()
        .map(|&p| {
            if p > 0.0 {
                (p.ln() / temperature - log_max).exp()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut draw = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if draw < w {
                return Ok(i);
            }
            draw -= w;
            last = i;
        }
    }
    Ok(last)
}
