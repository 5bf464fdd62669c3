use super::{Matrix, ModelParams, NeuralError};
use crate::scalar::{dot, larger, sigmoid, Scalar};
use crate::smiles::PAD_ID;

/// Intermediate values of one forward pass, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardTrace<T> {
    pub(crate) ids: Vec<usize>,
    /// Embedded inputs, L × E.
    pub(crate) x: Matrix<T>,
    /// `W_q x_i + b_a`, L × A.
    pub(crate) qb: Matrix<T>,
    /// `W_k x_j`, L × A.
    pub(crate) k: Matrix<T>,
    /// `tanh(W_q x_i + W_k x_j + b_a)` for unmasked j, indexed `(i·L + j)·A`.
    pub(crate) u: Vec<T>,
    pub(crate) scores: Matrix<T>,
    pub(crate) alpha: Matrix<T>,
    /// Attended inputs, L × E.
    pub(crate) xt: Matrix<T>,
    /// Activated gates per step, L × 4H in i, f, g, o blocks.
    pub(crate) gates: Matrix<T>,
    /// Cell and hidden states, (L + 1) × H; row 0 is the zero start state.
    pub(crate) c: Matrix<T>,
    pub(crate) h: Matrix<T>,
    /// `tanh(c_t)` for steps 1..=L, L × H.
    pub(crate) tanh_c: Matrix<T>,
    pub(crate) logits: Vec<T>,
    pub(crate) probs: Vec<T>,
}

impl<T: Scalar> ForwardTrace<T> {
    pub fn new(params: &ModelParams<T>, window_len: usize) -> ForwardTrace<T> {
        let (v, e) = (params.w_emb.rows(), params.w_emb.cols());
        let a = params.w_q.rows();
        let h = params.w_h.cols();
        let l = window_len;
        ForwardTrace {
            ids: vec![PAD_ID; l],
            x: Matrix::zeros(l, e),
            qb: Matrix::zeros(l, a),
            k: Matrix::zeros(l, a),
            u: vec![T::zero(); l * l * a],
            scores: Matrix::zeros(l, l),
            alpha: Matrix::zeros(l, l),
            xt: Matrix::zeros(l, e),
            gates: Matrix::zeros(l, 4 * h),
            c: Matrix::zeros(l + 1, h),
            h: Matrix::zeros(l + 1, h),
            tanh_c: Matrix::zeros(l, h),
            logits: vec![T::zero(); v],
            probs: vec![T::zero(); v],
        }
    }

    pub fn window_len(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn embeddings(&self) -> &Matrix<T> {
        &self.x
    }

    pub fn scores(&self) -> &Matrix<T> {
        &self.scores
    }

    /// Attention weights, L × L; row i holds the mixture weights of position i.
    pub fn attention(&self) -> &Matrix<T> {
        &self.alpha
    }

    pub fn attended(&self) -> &Matrix<T> {
        &self.xt
    }

    pub fn gates(&self) -> &Matrix<T> {
        &self.gates
    }

    pub fn cell_states(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn hidden_states(&self) -> &Matrix<T> {
        &self.h
    }

    /// Final hidden state h_L.
    pub fn last_hidden(&self) -> &[T] {
        self.h.row(self.ids.len())
    }

    pub fn logits(&self) -> &[T] {
        &self.logits
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// `−ln p(target)`, computed from the logits for accuracy.
    pub fn loss(&self, target: usize) -> T {
        let max = self.logits.iter().copied().fold(T::neg_infinity(), larger);
        let sum = self
            .logits
            .iter()
            .fold(T::zero(), |acc, &z| acc + (z - max).exp());
        larger(max + sum.ln() - self.logits[target], T::zero())
    }
}

/// Runs the model on one window of exactly L token ids.
pub fn forward<T: Scalar>(
    window: &[usize],
    params: &ModelParams<T>,
) -> Result<(Vec<T>, ForwardTrace<T>), NeuralError> {
    let mut trace = ForwardTrace::new(params, window.len());
    forward_into(window, params, &mut trace)?;
    Ok((trace.probs.clone(), trace))
}

/// Like [`forward`], reusing the buffers of `trace`, whose window length
/// must equal `window.len()`.
pub fn forward_into<T: Scalar>(
    window: &[usize],
    params: &ModelParams<T>,
    trace: &mut ForwardTrace<T>,
) -> Result<(), NeuralError> {
    let l = trace.window_len();
    if window.len() != l {
        return Err(NeuralError::WindowLength {
            expected: l,
            found: window.len(),
        });
    }
    let vocab = params.w_emb.rows();
    if let Some(&id) = window.iter().find(|&&id| id >= vocab) {
        return Err(NeuralError::IdOutOfRange { id, vocab });
    }
    let a = params.w_q.rows();
    let hd = params.w_h.cols();
    trace.ids.copy_from_slice(window);

    for (i, &id) in window.iter().enumerate() {
        trace.x.row_mut(i).copy_from_slice(params.w_emb.row(id));
    }
    for i in 0..l {
        let x = trace.x.row(i);
        let qb = trace.qb.row_mut(i);
        params.w_q.matvec(x, qb);
        for (q, &b) in qb.iter_mut().zip(&params.b_a) {
            *q += b;
        }
        params.w_k.matvec(trace.x.row(i), trace.k.row_mut(i));
    }

    // Additive attention scores and masked softmax.
    let real: Vec<bool> = window.iter().map(|&id| id != PAD_ID).collect();
    for i in 0..l {
        let qb = trace.qb.row(i);
        let mut max = T::neg_infinity();
        for j in 0..l {
            if !real[j] {
                trace.scores.set(i, j, T::zero());
                continue;
            }
            let u = &mut trace.u[(i * l + j) * a..(i * l + j + 1) * a];
            for ((u, &q), &k) in u.iter_mut().zip(qb).zip(trace.k.row(j)) {
                *u = (q + k).tanh();
            }
            let e = dot(&params.v_a, u);
            trace.scores.set(i, j, e);
            max = larger(max, e);
        }
        let alpha = trace.alpha.row_mut(i);
        let mut sum = T::zero();
        for j in 0..l {
            alpha[j] = if real[j] {
                let w = (trace.scores.get(i, j) - max).exp();
                sum += w;
                w
            } else {
                T::zero()
            };
        }
        if sum > T::zero() {
            alpha.iter_mut().for_each(|w| *w /= sum);
        }
        let xt = trace.xt.row_mut(i);
        xt.fill(T::zero());
        for (j, &w) in alpha.iter().enumerate() {
            if w != T::zero() {
                for (o, &xv) in xt.iter_mut().zip(trace.x.row(j)) {
                    *o += w * xv;
                }
            }
        }
    }

    // LSTM from the zero state.
    trace.c.row_mut(0).fill(T::zero());
    trace.h.row_mut(0).fill(T::zero());
    for t in 0..l {
        let z = trace.gates.row_mut(t);
        z.copy_from_slice(&params.b_lstm);
        params.w_x.matvec_add(trace.xt.row(t), z);
        params.w_h.matvec_add(trace.h.row(t), z);
        for v in &mut z[..2 * hd] {
            *v = sigmoid(*v);
        }
        for v in &mut z[2 * hd..3 * hd] {
            *v = v.tanh();
        }
        for v in &mut z[3 * hd..] {
            *v = sigmoid(*v);
        }
        let (prev_c, next_c) = trace.c.data_mut().split_at_mut((t + 1) * hd);
        let prev_c = &prev_c[t * hd..];
        let next_c = &mut next_c[..hd];
        let z = trace.gates.row(t);
        let tanh_c = trace.tanh_c.row_mut(t);
        let next_h = &mut trace.h.data_mut()[(t + 1) * hd..(t + 2) * hd];
        for n in 0..hd {
            let (ig, fg, gg, og) = (z[n], z[hd + n], z[2 * hd + n], z[3 * hd + n]);
            let c = fg * prev_c[n] + ig * gg;
            next_c[n] = c;
            let tc = c.tanh();
            tanh_c[n] = tc;
            next_h[n] = og * tc;
        }
    }

    // Dense head and softmax.
    trace.logits.copy_from_slice(&params.b_out);
    params.w_out.matvec_add(trace.h.row(l), &mut trace.logits);
    let max = trace.logits.iter().copied().fold(T::neg_infinity(), larger);
    let mut sum = T::zero();
    for (p, &z) in trace.probs.iter_mut().zip(&trace.logits) {
        *p = (z - max).exp();
        sum += *p;
    }
    trace.probs.iter_mut().for_each(|p| *p /= sum);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{init_params, ModelConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config() -> ModelConfig {
        ModelConfig {
            vocab_size: 9,
            embed_dim: 4,
            attention_dim: 3,
            hidden_dim: 5,
            window_len: 5,
            rng_seed: 0,
        }
    }

    #[test]
    fn zero_params_give_uniform_probs() {
        let p = ModelParams::<f64>::zeros(&config());
        let (probs, _) = forward(&[0, 1, 3, 4, 5], &p).unwrap();
        for q in probs {
            assert!((q - 1.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn identical_embeddings_give_equal_weights() {
        let mut p: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(2));
        for r in 0..9 {
            p.w_emb.row_mut(r).copy_from_slice(&[0.3, -0.2, 0.1, 0.5]);
        }
        let (_, trace) = forward(&[0, 0, 1, 4, 6], &p).unwrap();
        for i in 0..5 {
            let row = trace.attention().row(i);
            assert_eq!(&row[..2], &[0.0, 0.0]);
            for &w in &row[2..] {
                assert!((w - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rows_normalised_and_pad_masked() {
        let p: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(4));
        let (probs, trace) = forward(&[0, 1, 8, 0, 3], &p).unwrap();
        for i in 0..5 {
            let row = trace.attention().row(i);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(row[0], 0.0);
            assert_eq!(row[3], 0.0);
        }
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_pad_window_attends_nowhere() {
        let p: ModelParams<f64> = init_params(&config(), &mut ChaCha8Rng::seed_from_u64(4));
        let (probs, trace) = forward(&[0; 5], &p).unwrap();
        assert!(trace.attention().data().iter().all(|&w| w == 0.0));
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_input_is_rejected() {
        let p = ModelParams::<f64>::zeros(&config());
        assert!(matches!(
            forward(&[0, 1, 9, 2, 2], &p),
            Err(NeuralError::IdOutOfRange { id: 9, vocab: 9 })
        ));
        let mut trace = ForwardTrace::new(&p, 5);
        assert!(matches!(
            forward_into(&[1, 2], &p, &mut trace),
            Err(NeuralError::WindowLength { expected: 5, found: 2 })
        ));
    }

    #[test]
    fn certain_target_has_zero_loss() {
        let mut p = ModelParams::<f64>::zeros(&config());
        p.b_out[3] = 1000.0;
        let (probs, trace) = forward(&[0, 0, 0, 1, 4], &p).unwrap();
        assert_eq!(probs[3], 1.0);
        assert_eq!(trace.loss(3), 0.0);
    }
}
