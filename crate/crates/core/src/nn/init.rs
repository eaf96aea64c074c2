//! Parameter initialization: orthogonal recurrent-layer weights, Gaussian
//! embedding and output weights, forget bias 1, and dropout mask sampling.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::{LstmLayerParams, ModelConfig, ModelParams};

/// Gain for the cell (g) gate weights, which feed a tanh.
const GAIN_TANH: f64 = 5.0 / 3.0;
/// Gain for the sigmoid (i/f/o) gate weights.
const GAIN_SIGMOID: f64 = 1.0;
/// Standard deviation for weights outside the recurrent layers.
const GAUSSIAN_STD: f64 = 0.1;

/// One standard normal draw via Box-Muller; consumes exactly two uniform
/// draws so the stream stays reproducible.
fn standard_normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_matrix(rows: usize, cols: usize, std: f64, rng: &mut ChaCha20Rng) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| standard_normal(rng) * std)
}

/// A `gain`-scaled random orthogonal matrix from the QR decomposition of a
/// Gaussian matrix, with signs fixed so R's diagonal is positive. For
/// `rows >= cols` the columns are orthonormal (`M^T M = gain^2 I`); for
/// `rows < cols` the rows are.
pub fn orthogonal_init(rows: usize, cols: usize, gain: f64, rng: &mut ChaCha20Rng) -> Array2<f64> {
    assert!(rows >= 1 && cols >= 1);
    if rows < cols {
        let tall = orthogonal_init(cols, rows, gain, rng);
        let mut out = Array2::zeros((rows, cols));
        out.assign(&tall.t());
        return out;
    }
    let a = gaussian_matrix(rows, cols, 1.0, rng);
    let (mut q, r_diag) = householder_qr_thin(&a);
    for (j, d) in r_diag.iter().enumerate() {
        if *d < 0.0 {
            q.column_mut(j).mapv_inplace(|x| -x);
        }
    }
    q * gain
}

/// Thin QR via Householder reflections: returns Q (m x n, orthonormal
/// columns) and the diagonal of R. Requires m >= n.
fn householder_qr_thin(a: &Array2<f64>) -> (Array2<f64>, Vec<f64>) {
    let (m, n) = a.dim();
    assert!(m >= n);
    let mut r = a.clone();
    let mut reflectors: Vec<Array1<f64>> = Vec::with_capacity(n);

    for k in 0..n {
        let norm_x: f64 = (k..m).map(|i| r[[i, k]] * r[[i, k]]).sum::<f64>().sqrt();
        let mut v = Array1::zeros(m);
        if norm_x > 0.0 {
            let sign = if r[[k, k]] >= 0.0 { 1.0 } else { -1.0 };
            let alpha = -sign * norm_x;
            for i in k..m {
                v[i] = r[[i, k]];
            }
            v[k] -= alpha;
            let v_norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if v_norm > 0.0 {
                v.mapv_inplace(|x| x / v_norm);
                for j in k..n {
                    let dot: f64 = (k..m).map(|i| v[i] * r[[i, j]]).sum();
                    for i in k..m {
                        r[[i, j]] -= 2.0 * dot * v[i];
                    }
                }
            }
        }
        reflectors.push(v);
    }

    // q = H_0 H_1 ... H_{n-1} applied to the first n columns of I
    let mut q = Array2::zeros((m, n));
    for j in 0..n {
        q[[j, j]] = 1.0;
    }
    for k in (0..n).rev() {
        let v = &reflectors[k];
        for j in 0..n {
            let dot: f64 = (k..m).map(|i| v[i] * q[[i, j]]).sum();
            if dot != 0.0 {
                for i in k..m {
                    q[[i, j]] -= 2.0 * dot * v[i];
                }
            }
        }
    }
    let diag = (0..n).map(|j| r[[j, j]]).collect();
    (q, diag)
}

fn init_lstm_layer(hidden: usize, input_dim: usize, rng: &mut ChaCha20Rng) -> LstmLayerParams {
    let mut layer = LstmLayerParams::zeros(hidden, input_dim);
    layer.w_i = orthogonal_init(hidden, input_dim, GAIN_SIGMOID, rng);
    layer.w_f = orthogonal_init(hidden, input_dim, GAIN_SIGMOID, rng);
    layer.w_g = orthogonal_init(hidden, input_dim, GAIN_TANH, rng);
    layer.w_o = orthogonal_init(hidden, input_dim, GAIN_SIGMOID, rng);
    layer.u_i = orthogonal_init(hidden, hidden, GAIN_SIGMOID, rng);
    layer.u_f = orthogonal_init(hidden, hidden, GAIN_SIGMOID, rng);
    layer.u_g = orthogonal_init(hidden, hidden, GAIN_TANH, rng);
    layer.u_o = orthogonal_init(hidden, hidden, GAIN_SIGMOID, rng);
    // forget bias 1, all other biases 0
    layer.b_f.fill(1.0);
    layer
}

/// Initialize the full model. Deterministic for a given generator state;
/// consumption order: embedding, layer 1, layer 2, output weights.
pub fn init_model(config: &ModelConfig, rng: &mut ChaCha20Rng) -> ModelParams {
    let embedding = gaussian_matrix(config.vocab_size, config.embed_dim, GAUSSIAN_STD, rng);
    let lstm1 = init_lstm_layer(config.hidden, config.embed_dim, rng);
    let lstm2 = init_lstm_layer(config.hidden, config.hidden, rng);
    let w_out = Array1::from_shape_fn(config.hidden, |_| standard_normal(rng) * GAUSSIAN_STD);
    ModelParams {
        config: config.clone(),
        embedding,
        lstm1,
        lstm2,
        w_out,
        b_out: 0.0,
    }
}

/// Inverted dropout mask: each element is 0 with probability `rate`, else
/// `1 / (1 - rate)`, so expectations match at inference time.
pub fn dropout_mask(len: usize, rate: f64, rng: &mut ChaCha20Rng) -> Array1<f64> {
    assert!((0.0..1.0).contains(&rate));
    if rate == 0.0 {
        return Array1::ones(len);
    }
    let keep_scale = 1.0 / (1.0 - rate);
    Array1::from_shape_fn(len, |_| {
        if rng.gen::<f64>() < rate {
            0.0
        } else {
            keep_scale
        }
    })
}
