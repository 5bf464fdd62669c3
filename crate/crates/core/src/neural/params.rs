use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{Matrix, ModelConfig, NeuralError};
use crate::scalar::Scalar;

/// Standard deviation of the normal initialiser for attention weights.
pub const ATTENTION_INIT_STD: f64 = 0.05;

/// Tensor names in declaration (and checkpoint) order.
pub const TENSOR_NAMES: [&str; 10] = [
    "w_emb", "w_q", "w_k", "b_a", "v_a", "w_x", "w_h", "b_lstm", "w_out", "b_out",
];

/// All learned weights. LSTM row blocks are ordered input, forget,
/// cell-candidate, output.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    pub w_emb: Matrix<T>,
    pub w_q: Matrix<T>,
    pub w_k: Matrix<T>,
    pub b_a: Vec<T>,
    pub v_a: Vec<T>,
    pub w_x: Matrix<T>,
    pub w_h: Matrix<T>,
    pub b_lstm: Vec<T>,
    pub w_out: Matrix<T>,
    pub b_out: Vec<T>,
}

impl<T: Scalar> ModelParams<T> {
    pub fn zeros(config: &ModelConfig) -> ModelParams<T> {
        let (v, e, a, h) = (
            config.vocab_size,
            config.embed_dim,
            config.attention_dim,
            config.hidden_dim,
        );
        ModelParams {
            w_emb: Matrix::zeros(v, e),
            w_q: Matrix::zeros(a, e),
            w_k: Matrix::zeros(a, e),
            b_a: vec![T::zero(); a],
            v_a: vec![T::zero(); a],
            w_x: Matrix::zeros(4 * h, e),
            w_h: Matrix::zeros(4 * h, h),
            b_lstm: vec![T::zero(); 4 * h],
            w_out: Matrix::zeros(v, h),
            b_out: vec![T::zero(); v],
        }
    }

    /// Flat views of every tensor in declaration order.
    pub fn tensors(&self) -> [&[T]; 10] {
        [
            self.w_emb.data(),
            self.w_q.data(),
            self.w_k.data(),
            &self.b_a,
            &self.v_a,
            self.w_x.data(),
            self.w_h.data(),
            &self.b_lstm,
            self.w_out.data(),
            &self.b_out,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [T]; 10] {
        [
            self.w_emb.data_mut(),
            self.w_q.data_mut(),
            self.w_k.data_mut(),
            &mut self.b_a,
            &mut self.v_a,
            self.w_x.data_mut(),
            self.w_h.data_mut(),
            &mut self.b_lstm,
            self.w_out.data_mut(),
            &mut self.b_out,
        ]
    }

    pub fn param_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// Whether the tensor shapes are those implied by `config`.
    pub fn matches(&self, config: &ModelConfig) -> bool {
        let expected = ModelParams::<T>::zeros(config);
        let dims = |p: &ModelParams<T>| {
            [&p.w_emb, &p.w_q, &p.w_k, &p.w_x, &p.w_h, &p.w_out].map(|m| (m.rows(), m.cols()))
        };
        dims(self) == dims(&expected)
            && self.tensors().map(<[T]>::len) == expected.tensors().map(<[T]>::len)
    }

    pub fn check_shape(&self, config: &ModelConfig) -> Result<(), NeuralError> {
        if self.matches(config) {
            Ok(())
        } else {
            Err(NeuralError::ShapeMismatch)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }

    pub fn fill_zero(&mut self) {
        for t in self.tensors_mut() {
            t.fill(T::zero());
        }
    }

    /// `self *= factor`, element-wise.
    pub fn scale(&mut self, factor: T) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= factor);
        }
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> ModelParams<U> {
        let m = |x: &Matrix<T>| x.map(|v| U::of(v.as_f64()));
        let v = |x: &[T]| x.iter().map(|&v| U::of(v.as_f64())).collect();
        ModelParams {
            w_emb: m(&self.w_emb),
            w_q: m(&self.w_q),
            w_k: m(&self.w_k),
            b_a: v(&self.b_a),
            v_a: v(&self.v_a),
            w_x: m(&self.w_x),
            w_h: m(&self.w_h),
            b_lstm: v(&self.b_lstm),
            w_out: m(&self.w_out),
            b_out: v(&self.b_out),
        }
    }
}

/// Draws initial weights: attention weights from N(0, 0.05²), every bias
/// zero, and the remaining matrices uniform in ±sqrt(6 / (fan_in + fan_out)).
/// Tensors are filled in declaration order, so the result depends only on
/// the RNG state.
pub fn init_params<T: Scalar, R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> ModelParams<T> {
    let mut p = ModelParams::zeros(config);
    let normal = Normal::new(0.0, ATTENTION_INIT_STD).expect("positive std");
    let glorot = |m: &mut Matrix<T>, rng: &mut R| {
        let limit = (6.0 / (m.rows() + m.cols()) as f64).sqrt();
        for v in m.data_mut() {
            *v = T::of(rng.gen_range(-limit..limit));
        }
    };
    let gaussian = |values: &mut [T], rng: &mut R| {
        for v in values {
            *v = T::of(normal.sample(rng));
        }
    };
    glorot(&mut p.w_emb, rng);
    gaussian(p.w_q.data_mut(), rng);
    gaussian(p.w_k.data_mut(), rng);
    gaussian(&mut p.v_a, rng);
    glorot(&mut p.w_x, rng);
    glorot(&mut p.w_h, rng);
    glorot(&mut p.w_out, rng);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config() -> ModelConfig {
        ModelConfig {
            vocab_size: 7,
            embed_dim: 3,
            attention_dim: 4,
            hidden_dim: 5,
            window_len: 4,
            rng_seed: 9,
        }
    }

    #[test]
    fn biases_start_at_zero() {
        let p: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(1));
        assert!(p.b_a.iter().all(|&v| v == 0.0));
        assert!(p.b_lstm.iter().all(|&v| v == 0.0));
        assert!(p.b_out.iter().all(|&v| v == 0.0));
        assert!(p.w_q.data().iter().any(|&v| v != 0.0));
    }

    #[test]
    fn same_seed_same_params() {
        let a: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(3));
        let b: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(3));
        let bits = |p: &ModelParams<f64>| -> Vec<u64> {
            p.tensors().iter().flat_map(|t| t.iter().map(|v| v.to_bits())).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn glorot_bounds_hold() {
        let p: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(5));
        let limit = (6.0f64 / (20 + 3) as f64).sqrt();
        assert!(p.w_x.data().iter().all(|v| v.abs() < limit));
    }

    #[test]
    fn shapes_follow_config() {
        let p = ModelParams::<f32>::zeros(&config());
        assert_eq!(p.param_count(), 21 + 12 + 12 + 4 + 4 + 60 + 100 + 20 + 35 + 7);
        assert!(p.matches(&config()));
        let mut other = config();
        other.hidden_dim = 6;
        assert!(matches!(p.check_shape(&other), Err(NeuralError::ShapeMismatch)));
        assert_eq!(p.cast::<f64>().cast::<f32>(), p);
    }
}
