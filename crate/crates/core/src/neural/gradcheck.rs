use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::backward::loss_and_backward;
use super::forward::forward;
use super::{init_params, ModelConfig, ModelParams};
use crate::scalar::Scalar;
use crate::smiles::PAD_ID;

/// Step used for central differences.
pub const FD_EPSILON: f64 = 1e-5;

/// Precision the finite-difference losses are evaluated in. In `f64` the
/// rounding noise of a loss difference is about 1e-11, which swamps the
/// relative-error test for gradients near 1e-8; binary128 removes it.
#[cfg(feature = "quad")]
pub type OracleScalar = f128::f128;
#[cfg(not(feature = "quad"))]
pub type OracleScalar = f64;

/// `|g − ĝ| / max(1e-8, |g| + |ĝ|)`
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-8)
}

/// Worst relative error between the analytic gradient and central finite
/// differences over every parameter coordinate, for `trials` random
/// (params, window, target) draws seeded from `config.rng_seed`.
pub fn grad_check(config: &ModelConfig, trials: usize) -> f64 {
    grad_check_with(config, trials, |_| {})
}

/// [`grad_check`] with a hook that may tamper with the analytic gradient
/// before comparison, for testing the checker itself.
pub fn grad_check_with(
    config: &ModelConfig,
    trials: usize,
    corrupt: impl Fn(&mut ModelParams<f64>),
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let mut params: ModelParams<f64> = init_params(config, &mut rng);
        // Non-zero biases so their gradients are exercised away from zero.
        for bias in [&mut params.b_a, &mut params.b_lstm, &mut params.b_out] {
            for b in bias.iter_mut() {
                *b = rng.gen_range(-0.5..0.5);
            }
        }
        let (window, target) = random_example(config, &mut rng);
        worst = worse(worst, grad_check_at(&params, &window, target, &corrupt));
    }
    worst
}

/// Running maximum that lets NaN through, so a broken evaluation can never
/// hide behind `f64::max`.
fn worse(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// A window with a random amount of left padding (at least one real token)
/// and a random non-PAD target.
pub fn random_example<R: Rng>(config: &ModelConfig, rng: &mut R) -> (Vec<usize>, usize) {
    let l = config.window_len;
    let v = config.vocab_size;
    let pad = rng.gen_range(0..l);
    let mut window = vec![PAD_ID; l];
    for id in &mut window[pad..] {
        *id = if v > 1 { rng.gen_range(1..v) } else { 0 };
    }
    let target = if v > 1 { rng.gen_range(1..v) } else { 0 };
    (window, target)
}

/// Worst relative error over every coordinate for one example.
pub fn grad_check_at(
    params: &ModelParams<f64>,
    window: &[usize],
    target: usize,
    corrupt: impl Fn(&mut ModelParams<f64>),
) -> f64 {
    let (_, mut grads) = loss_and_backward(window, target, params).expect("valid example");
    corrupt(&mut grads);
    let loss_at = |p: &ModelParams<OracleScalar>| {
        forward(window, p).expect("valid example").1.loss(target)
    };
    let eps = OracleScalar::of(FD_EPSILON);
    let two_eps = eps + eps;
    let mut probe: ModelParams<OracleScalar> = params.cast();
    let mut worst = 0.0f64;
    for (t, analytic) in grads.tensors().iter().enumerate() {
        for (i, &g) in analytic.iter().enumerate() {
            let original = probe.tensors()[t][i];
            probe.tensors_mut()[t][i] = original + eps;
            let up = loss_at(&probe);
            probe.tensors_mut()[t][i] = original - eps;
            let down = loss_at(&probe);
            probe.tensors_mut()[t][i] = original;
            let numeric = ((up - down) / two_eps).as_f64();
            worst = worse(worst, relative_error(g, numeric));
        }
    }
    worst
}
