//! Numeric core: the embedding + two-layer LSTM + linear/sigmoid model,
//! its initialization, the batched forward pass with dropout and padding
//! masks, reverse-mode gradients through the unrolled sequence, and the
//! binary model file format.
//!
//! Everything is 64-bit floating point.

mod backward;
mod forward;
mod init;
mod io;

pub use backward::backward;
pub use forward::{forward, lstm_step, predict_label, sigmoid, DropoutMode, ForwardTrace, LayerTrace};
pub use init::{dropout_mask, init_model, orthogonal_init};
pub use io::{read_model, write_model};

use ndarray::{Array1, Array2};

/// Architecture and preprocessing constants carried with the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    /// Vocabulary size V; embedding row count.
    pub vocab_size: usize,
    /// Embedding dimension d.
    pub embed_dim: usize,
    /// LSTM hidden state size (both layers).
    pub hidden: usize,
    /// Dropout rate on embedding outputs.
    pub dropout_embed: f64,
    /// Dropout rate between layer-1 output and layer-2 input.
    pub dropout_inter: f64,
    /// Dropout rate on the final hidden state.
    pub dropout_final: f64,
    /// Cutout pruning threshold the model was trained with.
    pub prune_threshold: usize,
}

impl ModelConfig {
    pub fn new(vocab_size: usize, embed_dim: usize, hidden: usize) -> Self {
        ModelConfig {
            vocab_size,
            embed_dim,
            hidden,
            dropout_embed: 0.2,
            dropout_inter: 0.5,
            dropout_final: 0.5,
            prune_threshold: crate::encoder::DEFAULT_PRUNE_THRESHOLD,
        }
    }
}

/// Parameters of one LSTM layer: input weights, recurrent weights and
/// biases for the input (i), forget (f), cell (g) and output (o) gates.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmLayerParams {
    pub w_i: Array2<f64>,
    pub w_f: Array2<f64>,
    pub w_g: Array2<f64>,
    pub w_o: Array2<f64>,
    pub u_i: Array2<f64>,
    pub u_f: Array2<f64>,
    pub u_g: Array2<f64>,
    pub u_o: Array2<f64>,
    pub b_i: Array1<f64>,
    pub b_f: Array1<f64>,
    pub b_g: Array1<f64>,
    pub b_o: Array1<f64>,
}

impl LstmLayerParams {
    pub fn zeros(hidden: usize, input_dim: usize) -> Self {
        LstmLayerParams {
            w_i: Array2::zeros((hidden, input_dim)),
            w_f: Array2::zeros((hidden, input_dim)),
            w_g: Array2::zeros((hidden, input_dim)),
            w_o: Array2::zeros((hidden, input_dim)),
            u_i: Array2::zeros((hidden, hidden)),
            u_f: Array2::zeros((hidden, hidden)),
            u_g: Array2::zeros((hidden, hidden)),
            u_o: Array2::zeros((hidden, hidden)),
            b_i: Array1::zeros(hidden),
            b_f: Array1::zeros(hidden),
            b_g: Array1::zeros(hidden),
            b_o: Array1::zeros(hidden),
        }
    }

    fn tensor_slices(&self) -> Vec<&[f64]> {
        vec![
            slice2(&self.w_i),
            slice2(&self.w_f),
            slice2(&self.w_g),
            slice2(&self.w_o),
            slice2(&self.u_i),
            slice2(&self.u_f),
            slice2(&self.u_g),
            slice2(&self.u_o),
            slice1(&self.b_i),
            slice1(&self.b_f),
            slice1(&self.b_g),
            slice1(&self.b_o),
        ]
    }

    fn tensor_slices_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            slice2_mut(&mut self.w_i),
            slice2_mut(&mut self.w_f),
            slice2_mut(&mut self.w_g),
            slice2_mut(&mut self.w_o),
            slice2_mut(&mut self.u_i),
            slice2_mut(&mut self.u_f),
            slice2_mut(&mut self.u_g),
            slice2_mut(&mut self.u_o),
            slice1_mut(&mut self.b_i),
            slice1_mut(&mut self.b_f),
            slice1_mut(&mut self.b_g),
            slice1_mut(&mut self.b_o),
        ]
    }
}

/// Full model: embedding table, two LSTM layers and the linear output.
/// Doubles as the container for gradients and optimizer moments, which
/// share these shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub config: ModelConfig,
    /// V x d embedding table.
    pub embedding: Array2<f64>,
    pub lstm1: LstmLayerParams,
    pub lstm2: LstmLayerParams,
    /// Output weight vector (hidden).
    pub w_out: Array1<f64>,
    /// Output bias scalar.
    pub b_out: f64,
}

impl ModelParams {
    /// All-zero parameters with the same shapes; used for gradients and
    /// Adam moments.
    pub fn zeros(config: &ModelConfig) -> Self {
        ModelParams {
            config: config.clone(),
            embedding: Array2::zeros((config.vocab_size, config.embed_dim)),
            lstm1: LstmLayerParams::zeros(config.hidden, config.embed_dim),
            lstm2: LstmLayerParams::zeros(config.hidden, config.hidden),
            w_out: Array1::zeros(config.hidden),
            b_out: 0.0,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(&self.config)
    }

    /// Every tensor as a flat slice, in the declared serialization order:
    /// embedding, layer 1, layer 2 (weights w then u then biases, each in
    /// i/f/g/o order), output weights, output bias.
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut v = vec![slice2(&self.embedding)];
        v.extend(self.lstm1.tensor_slices());
        v.extend(self.lstm2.tensor_slices());
        v.push(slice1(&self.w_out));
        v.push(std::slice::from_ref(&self.b_out));
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v = vec![slice2_mut(&mut self.embedding)];
        v.extend(self.lstm1.tensor_slices_mut());
        v.extend(self.lstm2.tensor_slices_mut());
        v.push(slice1_mut(&mut self.w_out));
        v.push(std::slice::from_mut(&mut self.b_out));
        v
    }

    /// Total parameter count.
    pub fn num_params(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}

fn slice2(a: &Array2<f64>) -> &[f64] {
    a.as_slice().expect("arrays stay in standard layout")
}

fn slice2_mut(a: &mut Array2<f64>) -> &mut [f64] {
    a.as_slice_mut().expect("arrays stay in standard layout")
}

fn slice1(a: &Array1<f64>) -> &[f64] {
    a.as_slice().expect("arrays stay in standard layout")
}

fn slice1_mut(a: &mut Array1<f64>) -> &mut [f64] {
    a.as_slice_mut().expect("arrays stay in standard layout")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_order_is_stable_and_complete() {
        let config = ModelConfig::new(7, 3, 2);
        let params = ModelParams::zeros(&config);
        let tensors = params.tensors();
        // embedding + 2 x 12 LSTM tensors + w_out + b_out
        assert_eq!(tensors.len(), 1 + 12 + 12 + 1 + 1);
        let expected = 7 * 3              // embedding
            + 4 * (2 * 3) + 4 * (2 * 2) + 4 * 2   // layer 1
            + 4 * (2 * 2) + 4 * (2 * 2) + 4 * 2   // layer 2
            + 2 + 1; // output
        assert_eq!(params.num_params(), expected);
    }
}
