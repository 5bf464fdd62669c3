use super::{ModelParams, NeuralError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: ModelParams<T>,
    pub v: ModelParams<T>,
    pub t: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(params: &ModelParams<T>) -> AdamState<T> {
        let mut m = params.clone();
        m.fill_zero();
        AdamState {
            v: m.clone(),
            m,
            t: 0,
        }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step<T: Scalar>(
    params: &mut ModelParams<T>,
    grads: &ModelParams<T>,
    state: &mut AdamState<T>,
    hp: &AdamConfig,
) -> Result<(), NeuralError> {
    let lens = params.tensors().map(<[T]>::len);
    if grads.tensors().map(<[T]>::len) != lens
        || state.m.tensors().map(<[T]>::len) != lens
        || state.v.tensors().map(<[T]>::len) != lens
    {
        return Err(NeuralError::ShapeMismatch);
    }
    state.t += 1;
    let coeffs = AdamCoefficients::new(hp, state.t);
    for (((p, g), m), v) in params
        .tensors_mut()
        .into_iter()
        .zip(grads.tensors())
        .zip(state.m.tensors_mut())
        .zip(state.v.tensors_mut())
    {
        coeffs.apply(p, g, m, v);
    }
    Ok(())
}

/// Per-step constants of the update, with bias correction folded in.
#[derive(Debug, Clone, Copy)]
pub struct AdamCoefficients<T> {
    beta1: T,
    beta2: T,
    step: T,
    correction2: T,
    eps: T,
}

impl<T: Scalar> AdamCoefficients<T> {
    /// Coefficients for step `t` (1-based).
    pub fn new(hp: &AdamConfig, t: u64) -> AdamCoefficients<T> {
        let t = t.min(i32::MAX as u64) as i32;
        let c1 = 1.0 - hp.beta1.powi(t);
        let c2 = 1.0 - hp.beta2.powi(t);
        AdamCoefficients {
            beta1: T::of(hp.beta1),
            beta2: T::of(hp.beta2),
            step: T::of(hp.lr / c1),
            correction2: T::of(c2),
            eps: T::of(hp.eps),
        }
    }

    /// `m ← β1 m + (1−β1) g`, `v ← β2 v + (1−β2) g²`,
    /// `p ← p − lr · m̂ / (sqrt(v̂) + ε)`.
    pub fn apply(&self, p: &mut [T], g: &[T], m: &mut [T], v: &mut [T]) {
        let one = T::one();
        for i in 0..p.len() {
            let gi = g[i];
            m[i] = self.beta1 * m[i] + (one - self.beta1) * gi;
            v[i] = self.beta2 * v[i] + (one - self.beta2) * gi * gi;
            let v_hat = v[i] / self.correction2;
            p[i] -= self.step * m[i] / (v_hat.sqrt() + self.eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::ModelConfig;

    fn config() -> ModelConfig {
        ModelConfig {
            vocab_size: 4,
            embed_dim: 2,
            attention_dim: 2,
            hidden_dim: 2,
            window_len: 3,
            rng_seed: 0,
        }
    }

    #[test]
    fn zero_gradient_leaves_params_alone() {
        let mut p = ModelParams::<f64>::zeros(&config());
        p.b_out[1] = 0.7;
        let before = p.clone();
        let g = ModelParams::zeros(&config());
        let mut s = AdamState::new(&p);
        adam_step(&mut p, &g, &mut s, &AdamConfig::default()).unwrap();
        assert_eq!(p, before);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn first_step_moves_by_lr_times_sign() {
        let mut p = ModelParams::<f64>::zeros(&config());
        let mut g = ModelParams::zeros(&config());
        g.b_out.copy_from_slice(&[3.0, -0.02, 1e-3, -50.0]);
        let mut s = AdamState::new(&p);
        adam_step(&mut p, &g, &mut s, &AdamConfig::default()).unwrap();
        for (&w, &gi) in p.b_out.iter().zip(&g.b_out) {
            assert!((w + 1e-3 * gi.signum()).abs() < 1e-7, "{w}");
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut p = ModelParams::<f64>::zeros(&config());
        let mut other = config();
        other.hidden_dim = 3;
        let g = ModelParams::zeros(&other);
        let mut s = AdamState::new(&p);
        assert!(matches!(
            adam_step(&mut p, &g, &mut s, &AdamConfig::default()),
            Err(NeuralError::ShapeMismatch)
        ));
    }

    #[test]
    fn descends_a_parabola() {
        // f(w) = w², f'(w) = 2w. At the default rate of 1e-3 Adam moves at
        // most about 0.1 in 100 steps, so the descent oracle uses 1e-2.
        let hp = AdamConfig {
            lr: 1e-2,
            ..AdamConfig::default()
        };
        let (mut w, mut m, mut v) = ([1.0f64], [0.0], [0.0]);
        for t in 1..=100 {
            let g = [2.0 * w[0]];
            AdamCoefficients::new(&hp, t).apply(&mut w, &g, &mut m, &mut v);
        }
        assert!(w[0].abs() < 0.5, "{}", w[0]);

        let (mut w, mut m, mut v) = ([1.0f64], [0.0], [0.0]);
        for t in 1..=100 {
            let g = [2.0 * w[0]];
            AdamCoefficients::new(&AdamConfig::default(), t).apply(&mut w, &g, &mut m, &mut v);
        }
        assert!(w[0] > 0.85 && w[0] < 0.95);
    }
}
