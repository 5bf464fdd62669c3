use super::forward::{forward_into, ForwardTrace};
use super::{Matrix, ModelParams, NeuralError};
use crate::scalar::{axpy, dot, Scalar};
use crate::smiles::PAD_ID;

/// Reusable buffers for a forward/backward pass over one window length.
#[derive(Debug, Clone)]
pub struct Workspace<T> {
    pub trace: ForwardTrace<T>,
    dh: Vec<T>,
    dh_prev: Vec<T>,
    dc: Vec<T>,
    dz: Vec<T>,
    dxt: Matrix<T>,
    dx: Matrix<T>,
    dq: Matrix<T>,
    dk: Matrix<T>,
    dalpha: Vec<T>,
    dpre: Vec<T>,
}

impl<T: Scalar> Workspace<T> {
    pub fn new(params: &ModelParams<T>, window_len: usize) -> Workspace<T> {
        let e = params.w_emb.cols();
        let a = params.w_q.rows();
        let h = params.w_h.cols();
        let l = window_len;
        Workspace {
            trace: ForwardTrace::new(params, l),
            dh: vec![T::zero(); h],
            dh_prev: vec![T::zero(); h],
            dc: vec![T::zero(); h],
            dz: vec![T::zero(); 4 * h],
            dxt: Matrix::zeros(l, e),
            dx: Matrix::zeros(l, e),
            dq: Matrix::zeros(l, a),
            dk: Matrix::zeros(l, a),
            dalpha: vec![T::zero(); l],
            dpre: vec![T::zero(); a],
        }
    }
}

/// Cross-entropy loss `−ln p(target)` and its exact gradient with respect
/// to every parameter.
pub fn loss_and_backward<T: Scalar>(
    window: &[usize],
    target: usize,
    params: &ModelParams<T>,
) -> Result<(T, ModelParams<T>), NeuralError> {
    let mut ws = Workspace::new(params, window.len());
    let mut grads = params.clone();
    grads.fill_zero();
    let loss = accumulate_gradient(window, target, params, &mut ws, &mut grads)?;
    Ok((loss, grads))
}

/// Runs forward and backward for one window and adds the gradient to
/// `grads`. Returns the loss.
pub fn accumulate_gradient<T: Scalar>(
    window: &[usize],
    target: usize,
    params: &ModelParams<T>,
    ws: &mut Workspace<T>,
    grads: &mut ModelParams<T>,
) -> Result<T, NeuralError> {
    let vocab = params.w_emb.rows();
    if target >= vocab {
        return Err(NeuralError::IdOutOfRange { id: target, vocab });
    }
    forward_into(window, params, &mut ws.trace)?;
    backward(target, params, ws, grads);
    Ok(ws.trace.loss(target))
}

fn backward<T: Scalar>(
    target: usize,
    params: &ModelParams<T>,
    ws: &mut Workspace<T>,
    grads: &mut ModelParams<T>,
) {
    let tr = &ws.trace;
    let l = tr.window_len();
    let hd = params.w_h.cols();
    let a = params.w_q.rows();
    let e = params.w_emb.cols();

    // Dense head: dlogits = probs − onehot(target).
    ws.dh.fill(T::zero());
    for (v, &p) in tr.probs.iter().enumerate() {
        let g = if v == target { p - T::one() } else { p };
        grads.b_out[v] += g;
        axpy(g, tr.h.row(l), grads.w_out.row_mut(v));
        axpy(g, params.w_out.row(v), &mut ws.dh);
    }

    // LSTM, backwards through time.
    ws.dc.fill(T::zero());
    for t in (0..l).rev() {
        let z = tr.gates.row(t);
        let tanh_c = tr.tanh_c.row(t);
        let prev_c = tr.c.row(t);
        for n in 0..hd {
            let (ig, fg, gg, og) = (z[n], z[hd + n], z[2 * hd + n], z[3 * hd + n]);
            let tc = tanh_c[n];
            let dh = ws.dh[n];
            let dc = ws.dc[n] + dh * og * (T::one() - tc * tc);
            ws.dz[n] = dc * gg * ig * (T::one() - ig);
            ws.dz[hd + n] = dc * prev_c[n] * fg * (T::one() - fg);
            ws.dz[2 * hd + n] = dc * ig * (T::one() - gg * gg);
            ws.dz[3 * hd + n] = dh * tc * og * (T::one() - og);
            ws.dc[n] = dc * fg;
        }
        axpy(T::one(), &ws.dz, &mut grads.b_lstm);
        grads.w_x.add_outer(&ws.dz, tr.xt.row(t));
        grads.w_h.add_outer(&ws.dz, tr.h.row(t));
        let dxt = ws.dxt.row_mut(t);
        dxt.fill(T::zero());
        params.w_x.tmatvec_add(&ws.dz, dxt);
        if t > 0 {
            ws.dh_prev.fill(T::zero());
            params.w_h.tmatvec_add(&ws.dz, &mut ws.dh_prev);
            std::mem::swap(&mut ws.dh, &mut ws.dh_prev);
        }
    }

    // Attention mixture x̃_i = Σ_j α_ij x_j and its scores.
    ws.dx.data_mut().fill(T::zero());
    ws.dq.data_mut().fill(T::zero());
    ws.dk.data_mut().fill(T::zero());
    for i in 0..l {
        let alpha = tr.alpha.row(i);
        let dxt = ws.dxt.row(i);
        let mut weighted = T::zero();
        for j in 0..l {
            if tr.ids[j] == PAD_ID {
                ws.dalpha[j] = T::zero();
                continue;
            }
            let da = dot(dxt, tr.x.row(j));
            ws.dalpha[j] = da;
            weighted += alpha[j] * da;
            axpy(alpha[j], dxt, ws.dx.row_mut(j));
        }
        for j in 0..l {
            if tr.ids[j] == PAD_ID {
                continue;
            }
            let de = alpha[j] * (ws.dalpha[j] - weighted);
            if de == T::zero() {
                continue;
            }
            let u = &tr.u[(i * l + j) * a..(i * l + j + 1) * a];
            axpy(de, u, &mut grads.v_a);
            for ((d, &uv), &vv) in ws.dpre.iter_mut().zip(u).zip(&params.v_a) {
                *d = de * vv * (T::one() - uv * uv);
            }
            axpy(T::one(), &ws.dpre, ws.dq.row_mut(i));
            axpy(T::one(), &ws.dpre, ws.dk.row_mut(j));
        }
    }
    for i in 0..l {
        let x = tr.x.row(i);
        let dq = ws.dq.row(i);
        axpy(T::one(), dq, &mut grads.b_a);
        grads.w_q.add_outer(dq, x);
        grads.w_k.add_outer(ws.dk.row(i), x);
        let dx = ws.dx.row_mut(i);
        params.w_q.tmatvec_add(dq, dx);
        params.w_k.tmatvec_add(ws.dk.row(i), dx);
        debug_assert_eq!(dx.len(), e);
        axpy(T::one(), dx, grads.w_emb.row_mut(tr.ids[i]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::ModelConfig;

    #[test]
    fn zero_params_output_bias_gradient() {
        let config = ModelConfig {
            vocab_size: 6,
            embed_dim: 3,
            attention_dim: 2,
            hidden_dim: 4,
            window_len: 4,
            rng_seed: 0,
        };
        let p = ModelParams::<f64>::zeros(&config);
        let (loss, g) = loss_and_backward(&[0, 1, 3, 4], 5, &p).unwrap();
        assert!((loss - 6f64.ln()).abs() < 1e-12);
        for (v, &d) in g.b_out.iter().enumerate() {
            let expected = 1.0 / 6.0 - if v == 5 { 1.0 } else { 0.0 };
            assert!((d - expected).abs() < 1e-15);
        }
        assert!(matches!(
            loss_and_backward(&[0, 1, 3, 4], 6, &p),
            Err(NeuralError::IdOutOfRange { id: 6, vocab: 6 })
        ));
    }
}
