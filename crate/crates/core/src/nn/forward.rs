//! Batched forward pass through embedding, two LSTM layers and the linear
//! sigmoid output, recording everything the backward pass needs.
//!
//! Sequences of different lengths are right-padded; a per-timestep valid
//! mask holds cell and hidden states fixed past each sequence's end, so
//! padding has exactly zero effect on the outputs.

use ndarray::{Array1, Array2, Axis};
use rand_chacha::ChaCha20Rng;

use super::init::dropout_mask;
use super::{LstmLayerParams, ModelParams};
use crate::corpus::Label;
use crate::encoder::IndexSeq;
use crate::error::Error;
use crate::Result;

/// Numerically stable logistic sigmoid.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Decision rule: phish iff the sigmoid output is at least 1/2
/// (equivalently, the linear output is non-negative).
pub fn predict_label(p: f64) -> Label {
    if p >= 0.5 {
        Label::Phish
    } else {
        Label::Ham
    }
}

/// Dropout behaviour of a forward pass.
pub enum DropoutMode<'a> {
    /// All masks are ones.
    Inference,
    /// Masks are sampled from the given stream at the model's rates.
    Train(&'a mut ChaCha20Rng),
}

/// Per-timestep activations of one LSTM layer (each `B x H`).
pub struct LayerTrace {
    pub gate_i: Vec<Array2<f64>>,
    pub gate_f: Vec<Array2<f64>>,
    pub gate_g: Vec<Array2<f64>>,
    pub gate_o: Vec<Array2<f64>>,
    /// Cell state after the validity mask is applied.
    pub cell: Vec<Array2<f64>>,
    /// Hidden state after the validity mask is applied.
    pub hidden: Vec<Array2<f64>>,
}

/// Everything recorded during a forward pass.
pub struct ForwardTrace {
    /// Right-padded index matrix, one row per sequence.
    pub indices: Vec<Vec<u32>>,
    pub lengths: Vec<usize>,
    pub max_len: usize,
    /// 1.0 where the timestep is inside the sequence, else 0.0 (`B x L`).
    pub step_mask: Array2<f64>,
    /// Embedding dropout masks, one `B x d` matrix per timestep.
    pub embed_masks: Vec<Array2<f64>>,
    /// Between-layer dropout mask, one per sequence, reused at every
    /// timestep (`B x H`).
    pub inter_mask: Array2<f64>,
    /// Dropout mask on the final hidden state (`B x H`).
    pub final_mask: Array2<f64>,
    pub layer1: LayerTrace,
    pub layer2: LayerTrace,
    /// Final layer-2 hidden state after dropout (`B x H`).
    pub h2_final: Array2<f64>,
    /// Linear outputs, one per sequence.
    pub z: Array1<f64>,
    /// Sigmoid outputs, one per sequence.
    pub p: Array1<f64>,
}

/// Run the model over a batch of index sequences.
pub fn forward(
    params: &ModelParams,
    seqs: &[&IndexSeq],
    mode: DropoutMode<'_>,
) -> Result<ForwardTrace> {
    assert!(!seqs.is_empty(), "forward needs at least one sequence");
    let v = params.config.vocab_size;
    for seq in seqs {
        if let Some(&bad) = seq.indices.iter().find(|&&i| i as usize >= v) {
            return Err(Error::IndexOutOfVocab { index: bad as usize, vocab_size: v });
        }
    }

    let batch = seqs.len();
    let d = params.config.embed_dim;
    let hidden = params.config.hidden;
    let lengths: Vec<usize> = seqs.iter().map(|s| s.indices.len()).collect();
    let max_len = *lengths.iter().max().expect("non-empty batch");
    assert!(max_len >= 1, "sequences must be non-empty");

    let indices: Vec<Vec<u32>> = seqs
        .iter()
        .map(|s| {
            let mut row = s.indices.clone();
            row.resize(max_len, 0);
            row
        })
        .collect();

    let mut step_mask = Array2::zeros((batch, max_len));
    for (k, &len) in lengths.iter().enumerate() {
        for t in 0..len {
            step_mask[[k, t]] = 1.0;
        }
    }

    // sample all dropout masks up front, in a fixed order
    let (embed_masks, inter_mask, final_mask) = match mode {
        DropoutMode::Inference => (
            vec![Array2::ones((batch, d)); max_len],
            Array2::ones((batch, hidden)),
            Array2::ones((batch, hidden)),
        ),
        DropoutMode::Train(rng) => {
            let rates = &params.config;
            let embed: Vec<Array2<f64>> = (0..max_len)
                .map(|_| mask_matrix(batch, d, rates.dropout_embed, rng))
                .collect();
            let inter = mask_matrix(batch, hidden, rates.dropout_inter, rng);
            let fin = mask_matrix(batch, hidden, rates.dropout_final, rng);
            (embed, inter, fin)
        }
    };

    // layer 1 over dropped embeddings
    let xs1: Vec<Array2<f64>> = (0..max_len)
        .map(|t| embed_at(params, &indices, t) * &embed_masks[t])
        .collect();
    let layer1 = run_layer(&params.lstm1, &xs1, &step_mask, hidden);

    // layer 2 over dropped layer-1 hidden states
    let xs2: Vec<Array2<f64>> = layer1.hidden.iter().map(|h| h * &inter_mask).collect();
    let layer2 = run_layer(&params.lstm2, &xs2, &step_mask, hidden);

    let h2_final = &layer2.hidden[max_len - 1] * &final_mask;
    let z: Array1<f64> = h2_final.dot(&params.w_out) + params.b_out;
    let p = z.mapv(sigmoid);

    Ok(ForwardTrace {
        indices,
        lengths,
        max_len,
        step_mask,
        embed_masks,
        inter_mask,
        final_mask,
        layer1,
        layer2,
        h2_final,
        z,
        p,
    })
}

fn mask_matrix(rows: usize, cols: usize, rate: f64, rng: &mut ChaCha20Rng) -> Array2<f64> {
    dropout_mask(rows * cols, rate, rng)
        .into_shape_with_order((rows, cols))
        .expect("shape matches length")
}

/// One LSTM cell step for a single sample:
/// i = sigmoid(W_i x + U_i h + b_i), f and o likewise,
/// g = tanh(W_g x + U_g h + b_g), c' = f*c + i*g, h' = o*tanh(c').
pub fn lstm_step(
    layer: &LstmLayerParams,
    x: &Array1<f64>,
    h: &Array1<f64>,
    c: &Array1<f64>,
) -> (Array1<f64>, Array1<f64>) {
    let gate_i = (layer.w_i.dot(x) + layer.u_i.dot(h) + &layer.b_i).mapv(sigmoid);
    let gate_f = (layer.w_f.dot(x) + layer.u_f.dot(h) + &layer.b_f).mapv(sigmoid);
    let gate_g = (layer.w_g.dot(x) + layer.u_g.dot(h) + &layer.b_g).mapv(f64::tanh);
    let gate_o = (layer.w_o.dot(x) + layer.u_o.dot(h) + &layer.b_o).mapv(sigmoid);
    let c_new = &gate_f * c + &gate_i * &gate_g;
    let h_new = &gate_o * &c_new.mapv(f64::tanh);
    (h_new, c_new)
}

/// Embedding lookup for timestep `t` (`B x d`). Padded positions read row
/// 0; the step mask keeps them out of every output.
pub(super) fn embed_at(params: &ModelParams, indices: &[Vec<u32>], t: usize) -> Array2<f64> {
    let d = params.config.embed_dim;
    let mut x = Array2::zeros((indices.len(), d));
    for (k, row) in indices.iter().enumerate() {
        x.row_mut(k).assign(&params.embedding.row(row[t] as usize));
    }
    x
}

/// Unrolled forget-gate LSTM over a padded batch:
/// i = sigmoid(W_i x + U_i h + b_i), f, o likewise, g = tanh(W_g x + U_g h + b_g),
/// c' = f*c + i*g, h' = o*tanh(c'), with masked positions holding their
/// previous cell and hidden state.
fn run_layer(
    layer: &LstmLayerParams,
    xs: &[Array2<f64>],
    step_mask: &Array2<f64>,
    hidden: usize,
) -> LayerTrace {
    let batch = xs[0].nrows();
    let steps = xs.len();
    let mut trace = LayerTrace {
        gate_i: Vec::with_capacity(steps),
        gate_f: Vec::with_capacity(steps),
        gate_g: Vec::with_capacity(steps),
        gate_o: Vec::with_capacity(steps),
        cell: Vec::with_capacity(steps),
        hidden: Vec::with_capacity(steps),
    };
    let mut h = Array2::zeros((batch, hidden));
    let mut c: Array2<f64> = Array2::zeros((batch, hidden));

    for (t, x) in xs.iter().enumerate() {
        let gate_i = (x.dot(&layer.w_i.t()) + h.dot(&layer.u_i.t()) + &layer.b_i).mapv(sigmoid);
        let gate_f = (x.dot(&layer.w_f.t()) + h.dot(&layer.u_f.t()) + &layer.b_f).mapv(sigmoid);
        let gate_g = (x.dot(&layer.w_g.t()) + h.dot(&layer.u_g.t()) + &layer.b_g).mapv(f64::tanh);
        let gate_o = (x.dot(&layer.w_o.t()) + h.dot(&layer.u_o.t()) + &layer.b_o).mapv(sigmoid);

        let c_new = &gate_f * &c + &gate_i * &gate_g;
        let h_new = &gate_o * &c_new.mapv(f64::tanh);

        let m = step_mask.column(t).insert_axis(Axis(1));
        c = &c_new * &m + &c * &(1.0 - &m);
        h = &h_new * &m + &h * &(1.0 - &m);

        trace.gate_i.push(gate_i);
        trace.gate_f.push(gate_f);
        trace.gate_g.push(gate_g);
        trace.gate_o.push(gate_o);
        trace.cell.push(c.clone());
        trace.hidden.push(h.clone());
    }
    trace
}
