//! Multilayer perceptrons: forward pass, backpropagation, training and the
//! vanishing-gradient diagnostic.
//!
//! Layer `l` holds a `K_l × (K_{l-1} + 1)` weight matrix whose first column is
//! the bias. Hidden layers share one activation; the output layer is linear,
//! logistic or softmax. Flattened parameters concatenate the layer matrices
//! row by row, first layer first.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_inf, Matrix, Vector};
use crate::math;
use crate::optim::{gd_minimize, make_gradient_strategy, GdConfig, GdOutcome};
use crate::rng::Rng;

pub const DEFAULT_INIT_SCALE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Activation {
    Sigmoid,
    Tanh,
    Relu,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => math::sigmoid(z),
            Activation::Tanh => math::tanh(z),
            Activation::Relu => z.max(0.0),
            Activation::Identity => z,
        }
    }

    /// Derivative from the pre-activation `z` and the activation `h`; relu'(0) = 0.
    fn derivative(self, z: f64, h: f64) -> f64 {
        match self {
            Activation::Sigmoid => h * (1.0 - h),
            Activation::Tanh => 1.0 - h * h,
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum OutputKind {
    Linear,
    Logistic,
    Softmax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum LossKind {
    /// `½‖ŷ - y‖²` per sample; pairs with a linear output.
    Mse,
    /// Cross-entropy; pairs with a logistic or softmax output.
    Xent,
}

/// Checks that the output error of `loss` is exactly `ŷ - y`.
pub fn check_pairing(output: OutputKind, loss: LossKind) -> Result<()> {
    match (output, loss) {
        (OutputKind::Linear, LossKind::Mse)
        | (OutputKind::Logistic, LossKind::Xent)
        | (OutputKind::Softmax, LossKind::Xent) => Ok(()),
        (o, l) => Err(Error::Configuration(alloc::format!(
            "{l:?} loss cannot be paired with a {o:?} output"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MlpNet {
    layer_sizes: Vec<usize>,
    activation: Activation,
    output: OutputKind,
    weights: Vec<Matrix>,
}

fn validate_sizes(sizes: &[usize], output: OutputKind) -> Result<()> {
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(Error::param("layer sizes need an input and an output layer, all positive"));
    }
    let out = *sizes.last().unwrap();
    match output {
        OutputKind::Softmax if out < 2 => Err(Error::param("softmax output needs at least 2 units")),
        OutputKind::Logistic if out != 1 => Err(Error::param("logistic output has exactly 1 unit")),
        _ => Ok(()),
    }
}

/// Random network: weights `Uniform(-scale, scale)`, biases 0.
pub fn init_mlp(
    layer_sizes: &[usize],
    activation: Activation,
    output: OutputKind,
    rng: &mut Rng,
    scale: f64,
) -> Result<MlpNet> {
    validate_sizes(layer_sizes, output)?;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::param("init scale must be positive"));
    }
    let weights = layer_sizes
        .windows(2)
        .map(|w| {
            let (fan_in, units) = (w[0], w[1]);
            let mut m = Matrix::zeros(units, fan_in + 1);
            for k in 0..units {
                for j in 1..=fan_in {
                    m[(k, j)] = rng.uniform(-scale, scale);
                }
            }
            m
        })
        .collect();
    Ok(MlpNet {
        layer_sizes: layer_sizes.to_vec(),
        activation,
        output,
        weights,
    })
}

impl MlpNet {
    pub fn from_weights(
        layer_sizes: &[usize],
        activation: Activation,
        output: OutputKind,
        weights: Vec<Matrix>,
    ) -> Result<Self> {
        validate_sizes(layer_sizes, output)?;
        if weights.len() != layer_sizes.len() - 1 {
            return Err(Error::shape("mlp weights", layer_sizes.len() - 1, weights.len()));
        }
        for (w, s) in weights.iter().zip(layer_sizes.windows(2)) {
            if w.rows() != s[1] || w.cols() != s[0] + 1 {
                return Err(Error::shape("mlp layer", s[1] * (s[0] + 1), w.rows() * w.cols()));
            }
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            activation,
            output,
            weights,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn output_kind(&self) -> OutputKind {
        self.output
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn outputs(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    /// Number of hidden layers.
    pub fn hidden_layers(&self) -> usize {
        self.layer_sizes.len() - 2
    }

    /// Total number of weights and biases.
    pub fn param_count(&self) -> usize {
        self.weights.iter().map(|w| w.rows() * w.cols()).sum()
    }

    pub fn flat_params(&self) -> Vec<f64> {
        self.weights.iter().flat_map(|w| w.as_slice().iter().copied()).collect()
    }

    pub fn set_flat_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.param_count() {
            return Err(Error::shape("mlp parameters", self.param_count(), p.len()));
        }
        let mut off = 0;
        for w in self.weights.iter_mut() {
            let n = w.rows() * w.cols();
            *w = Matrix::new(w.rows(), w.cols(), p[off..off + n].to_vec())?;
            off += n;
        }
        Ok(())
    }

    fn with_params(&self, p: &[f64]) -> Result<MlpNet> {
        let mut n = self.clone();
        n.set_flat_params(p)?;
        Ok(n)
    }
}

/// Pre-activations and activations of one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardCache {
    /// `z[l]` for layers `1..=L+1` (index 0 is empty).
    pub z: Vec<Vec<f64>>,
    /// `h[l]` for layers `0..=L`; `h[0]` is the input.
    pub h: Vec<Vec<f64>>,
}

/// Counts multiplications, additions and activation evaluations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlopCounter {
    pub mul: u64,
    pub add: u64,
    pub act: u64,
}

impl FlopCounter {
    pub fn total(&self) -> u64 {
        self.mul + self.add + self.act
    }
}

fn affine(w: &Matrix, input: &[f64], flops: &mut FlopCounter) -> Vec<f64> {
    let n = input.len() as u64;
    flops.mul += w.rows() as u64 * n;
    flops.add += w.rows() as u64 * n;
    (0..w.rows())
        .map(|k| {
            let r = w.row(k);
            r[0] + dot(&r[1..], input)
        })
        .collect()
}

fn output_map(kind: OutputKind, z: &[f64]) -> Vec<f64> {
    match kind {
        OutputKind::Linear => z.to_vec(),
        OutputKind::Logistic => z.iter().map(|v| math::sigmoid(*v)).collect(),
        OutputKind::Softmax => crate::glm::softmax(z).into_vec(),
    }
}

fn forward_counted(net: &MlpNet, x: &[f64], flops: &mut FlopCounter) -> Result<(Vector, ForwardCache)> {
    if x.len() != net.inputs() {
        return Err(Error::shape("mlp forward", net.inputs(), x.len()));
    }
    let depth = net.weights.len();
    let mut z = Vec::with_capacity(depth + 1);
    let mut h = Vec::with_capacity(depth);
    z.push(Vec::new());
    h.push(x.to_vec());
    for (l, w) in net.weights.iter().enumerate() {
        let zl = affine(w, &h[l], flops);
        if l + 1 < depth {
            flops.act += zl.len() as u64;
            h.push(zl.iter().map(|v| net.activation.apply(*v)).collect());
        }
        z.push(zl);
    }
    let zo = z.last().unwrap();
    if net.output != OutputKind::Linear {
        flops.act += zo.len() as u64;
    }
    let yhat = output_map(net.output, zo);
    Ok((Vector::from_vec(yhat), ForwardCache { z, h }))
}

/// Network output for one input and the cache needed by [`backprop`].
pub fn forward(net: &MlpNet, x: &[f64]) -> Result<(Vector, ForwardCache)> {
    forward_counted(net, x, &mut FlopCounter::default())
}

/// Per-sample loss; cross-entropy is evaluated from the logits for stability.
pub fn sample_loss(net: &MlpNet, x: &[f64], y: &[f64], loss: LossKind) -> Result<f64> {
    check_pairing(net.output, loss)?;
    if y.len() != net.outputs() {
        return Err(Error::shape("mlp target", net.outputs(), y.len()));
    }
    let (yhat, cache) = forward(net, x)?;
    let z = cache.z.last().unwrap();
    Ok(match net.output {
        OutputKind::Linear => 0.5 * yhat.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        OutputKind::Logistic => math::softplus(z[0]) - y[0] * z[0],
        OutputKind::Softmax => {
            let mx = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = mx + math::ln(z.iter().map(|v| math::exp(v - mx)).sum::<f64>());
            lse - dot(z, y)
        }
    })
}

fn backprop_counted(
    net: &MlpNet,
    x: &[f64],
    y: &[f64],
    loss: LossKind,
    flops: &mut FlopCounter,
) -> Result<Vec<Matrix>> {
    check_pairing(net.output, loss)?;
    if y.len() != net.outputs() {
        return Err(Error::shape("mlp target", net.outputs(), y.len()));
    }
    let (yhat, cache) = forward_counted(net, x, flops)?;
    let depth = net.weights.len();
    let mut grads: Vec<Matrix> = net
        .weights
        .iter()
        .map(|w| Matrix::zeros(w.rows(), w.cols()))
        .collect();
    // Output error signal ŷ - y.
    let mut delta: Vec<f64> = yhat.iter().zip(y).map(|(a, b)| a - b).collect();
    flops.add += delta.len() as u64;
    for l in (0..depth).rev() {
        let input = &cache.h[l];
        let g = &mut grads[l];
        for (k, dk) in delta.iter().enumerate() {
            let row = g.row_mut(k);
            row[0] = *dk;
            for (gj, hj) in row[1..].iter_mut().zip(input) {
                *gj = dk * hj;
            }
        }
        flops.mul += (delta.len() * input.len()) as u64;
        if l == 0 {
            break;
        }
        // δ^(l)_k = σ'(z_k)·Σ_j θ_{j,k} δ^(l+1)_j
        let w = &net.weights[l];
        let zl = &cache.z[l];
        let hl = &cache.h[l];
        let mut next = vec![0.0; w.cols() - 1];
        for (j, dj) in delta.iter().enumerate() {
            let r = w.row(j);
            for (nk, wk) in next.iter_mut().zip(&r[1..]) {
                *nk += wk * dj;
            }
        }
        flops.mul += (delta.len() * next.len()) as u64;
        flops.add += (delta.len() * next.len()) as u64;
        for (k, nk) in next.iter_mut().enumerate() {
            *nk *= net.activation.derivative(zl[k], hl[k]);
        }
        flops.act += next.len() as u64;
        flops.mul += next.len() as u64;
        delta = next;
    }
    Ok(grads)
}

/// Per-layer weight gradients of the per-sample loss.
pub fn backprop(net: &MlpNet, x: &[f64], y: &[f64], loss: LossKind) -> Result<Vec<Matrix>> {
    backprop_counted(net, x, y, loss, &mut FlopCounter::default())
}

/// Backprop that also reports the arithmetic performed by forward and backward passes.
pub fn backprop_with_flops(
    net: &MlpNet,
    x: &[f64],
    y: &[f64],
    loss: LossKind,
) -> Result<(Vec<Matrix>, FlopCounter)> {
    let mut f = FlopCounter::default();
    let g = backprop_counted(net, x, y, loss, &mut f)?;
    Ok((g, f))
}

fn check_data(net: &MlpNet, x: &Matrix, y: &Matrix) -> Result<()> {
    if x.rows() != y.rows() {
        return Err(Error::shape("mlp data", x.rows(), y.rows()));
    }
    if x.cols() != net.inputs() {
        return Err(Error::shape("mlp inputs", net.inputs(), x.cols()));
    }
    if y.cols() != net.outputs() {
        return Err(Error::shape("mlp targets", net.outputs(), y.cols()));
    }
    if x.rows() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Mean per-sample loss over the rows in `idx`.
pub fn mean_loss(net: &MlpNet, x: &Matrix, y: &Matrix, loss: LossKind, idx: &[usize]) -> Result<f64> {
    check_data(net, x, y)?;
    let mut s = 0.0;
    for &i in idx {
        s += sample_loss(net, x.row(i), y.row(i), loss)?;
    }
    Ok(s / idx.len() as f64)
}

/// Mean of per-sample backprop gradients over `idx`, flattened, accumulated in index order.
pub fn mean_gradient(net: &MlpNet, x: &Matrix, y: &Matrix, loss: LossKind, idx: &[usize]) -> Result<Vector> {
    check_data(net, x, y)?;
    if idx.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut acc = vec![0.0; net.param_count()];
    for &i in idx {
        let g = backprop(net, x.row(i), y.row(i), loss)?;
        let mut off = 0;
        for m in &g {
            for v in m.as_slice() {
                acc[off] += v;
                off += 1;
            }
        }
    }
    let n = idx.len() as f64;
    for v in acc.iter_mut() {
        *v /= n;
    }
    Ok(Vector::from_vec(acc))
}

/// Target matrix for a network: `M×1` reals (linear/logistic) or one-hot rows (softmax).
pub fn targets_matrix(net: &MlpNet, labels: &crate::dataset::Labels) -> Result<Matrix> {
    use crate::dataset::Labels;
    match (net.output, labels) {
        (OutputKind::Softmax, Labels::Class(c)) => crate::dataset::one_hot_encode(c, net.outputs()),
        (OutputKind::Softmax, Labels::Real(_)) => {
            Err(Error::Configuration("softmax output needs class labels".into()))
        }
        (_, Labels::Real(v)) => Matrix::new(v.len(), 1, v.to_vec()),
        (_, Labels::Class(c)) => Matrix::new(c.len(), 1, c.iter().map(|&v| v as f64).collect()),
    }
}

/// Trains by gradient descent on the mean per-sample loss.
pub fn train_mlp(net: &MlpNet, x: &Matrix, y: &Matrix, cfg: &GdConfig, loss: LossKind) -> Result<(MlpNet, GdOutcome)> {
    check_pairing(net.output, loss)?;
    check_data(net, x, y)?;
    let all: Vec<usize> = (0..x.rows()).collect();
    let mut scratch = net.clone();
    let mut grad_src = make_gradient_strategy(cfg.strategy, x.rows(), cfg.seed, |p: &[f64], idx: &[usize]| {
        let n = net.with_params(p)?;
        mean_gradient(&n, x, y, loss, idx)
    })?;
    let out = gd_minimize(
        |p: &[f64]| {
            scratch.set_flat_params(p)?;
            mean_loss(&scratch, x, y, loss, &all)
        },
        |p| grad_src.next(p),
        &net.flat_params(),
        cfg,
    )?;
    let trained = net.with_params(&out.theta)?;
    Ok((trained, out))
}

/// Per-layer gradient sizes for one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingReport {
    /// `‖∂L/∂θ^(l)‖∞` for layers `1..=L+1`.
    pub layer_norms: Vec<f64>,
    /// First-layer norm over the last hidden layer's norm; `None` when that is 0.
    pub ratio: Option<f64>,
}

pub fn vanishing_diagnostic(net: &MlpNet, x: &[f64], y: &[f64], loss: LossKind) -> Result<VanishingReport> {
    if net.hidden_layers() < 2 {
        return Err(Error::param("vanishing diagnostic needs at least 2 hidden layers"));
    }
    let g = backprop(net, x, y, loss)?;
    let norms: Vec<f64> = g.iter().map(|m| norm_inf(m.as_slice())).collect();
    let last_hidden = norms[net.hidden_layers() - 1];
    let ratio = (last_hidden > 0.0).then(|| norms[0] / last_hidden);
    Ok(VanishingReport {
        layer_norms: norms,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glm::{gradient, ModelKind, Reduction, Targets};

    #[test]
    fn hand_evaluated_relu_net() {
        let w1 = Matrix::from_rows(&[vec![0.5, 2.0]]).unwrap();
        let w2 = Matrix::from_rows(&[vec![-1.0, 3.0]]).unwrap();
        let net = MlpNet::from_weights(&[1, 1, 1], Activation::Relu, OutputKind::Linear, vec![w1, w2]).unwrap();
        let (y, c) = forward(&net, &[1.5]).unwrap();
        assert_eq!(c.z[1], vec![3.5]);
        assert_eq!(y[0], -1.0 + 3.0 * 3.5);
    }

    #[test]
    fn zero_weights() {
        let mut rng = Rng::new(0);
        let mut net = init_mlp(&[2, 3, 1], Activation::Sigmoid, OutputKind::Linear, &mut rng, 0.5).unwrap();
        let zero = vec![0.0; net.param_count()];
        net.set_flat_params(&zero).unwrap();
        let mut w = net.weights.clone();
        w[1] = Matrix::from_rows(&[vec![0.7, 1.0, 2.0, 3.0]]).unwrap();
        let net = MlpNet::from_weights(&[2, 3, 1], Activation::Sigmoid, OutputKind::Linear, w).unwrap();
        let (y, c) = forward(&net, &[4.0, -2.0]).unwrap();
        assert_eq!(c.h[1], vec![0.5; 3]);
        assert_eq!(y[0], 0.7 + 0.5 * 6.0);

        let mut rng = Rng::new(0);
        let mut lg = init_mlp(&[2, 3, 1], Activation::Tanh, OutputKind::Logistic, &mut rng, 0.5).unwrap();
        let mut p = lg.flat_params();
        let n = p.len();
        for v in &mut p[n - 4..] {
            *v = 0.0;
        }
        lg.set_flat_params(&p).unwrap();
        assert_eq!(forward(&lg, &[0.3, 0.1]).unwrap().0[0], 0.5);
    }

    #[test]
    fn tiny_scale_gives_constant_output() {
        let mut rng = Rng::new(1);
        let net = init_mlp(&[1, 5, 1], Activation::Tanh, OutputKind::Linear, &mut rng, 1e-12).unwrap();
        for x in [-3.0, 0.0, 7.0] {
            assert!(forward(&net, &[x]).unwrap().0[0].abs() < 1e-20);
        }
        let a = init_mlp(&[2, 4, 3], Activation::Relu, OutputKind::Softmax, &mut Rng::new(9), 0.5).unwrap();
        let b = init_mlp(&[2, 4, 3], Activation::Relu, OutputKind::Softmax, &mut Rng::new(9), 0.5).unwrap();
        assert_eq!(a, b);
        assert!(init_mlp(&[2], Activation::Relu, OutputKind::Linear, &mut Rng::new(9), 0.5).is_err());
        assert!(init_mlp(&[2, 1], Activation::Relu, OutputKind::Softmax, &mut Rng::new(9), 0.5).is_err());
    }

    #[test]
    fn pairing_and_zero_residual() {
        let mut rng = Rng::new(2);
        let net = init_mlp(&[2, 3, 1], Activation::Tanh, OutputKind::Linear, &mut rng, 0.5).unwrap();
        assert!(matches!(backprop(&net, &[0.1, 0.2], &[0.0], LossKind::Xent), Err(Error::Configuration(_))));
        let (y, _) = forward(&net, &[0.1, 0.2]).unwrap();
        let g = backprop(&net, &[0.1, 0.2], &y, LossKind::Mse).unwrap();
        assert!(g.iter().all(|m| m.as_slice().iter().all(|v| *v == 0.0)));
        let r = vanishing_diagnostic(
            &init_mlp(&[1, 3, 3, 1], Activation::Tanh, OutputKind::Linear, &mut rng, 0.5).unwrap(),
            &[0.4],
            &[0.0],
            LossKind::Mse,
        )
        .unwrap();
        assert_eq!(r.layer_norms.len(), 3);
    }

    #[test]
    fn output_layer_gradient_is_residual_times_hidden() {
        let mut rng = Rng::new(4);
        let net = init_mlp(&[2, 4, 1], Activation::Sigmoid, OutputKind::Linear, &mut rng, 0.5).unwrap();
        let x = [0.3, -0.8];
        let (yhat, c) = forward(&net, &x).unwrap();
        let g = backprop(&net, &x, &[2.0], LossKind::Mse).unwrap();
        let r = yhat[0] - 2.0;
        assert_eq!(g[1][(0, 0)], r);
        for k in 0..4 {
            assert_eq!(g[1][(0, k + 1)], r * c.h[1][k]);
        }
    }

    #[test]
    fn zero_residual_vanishing_is_degenerate() {
        let mut rng = Rng::new(5);
        let net = init_mlp(&[1, 3, 3, 1], Activation::Sigmoid, OutputKind::Linear, &mut rng, 0.5).unwrap();
        let y = forward(&net, &[0.2]).unwrap().0;
        let r = vanishing_diagnostic(&net, &[0.2], &y, LossKind::Mse).unwrap();
        assert!(r.layer_norms.iter().all(|v| *v == 0.0));
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn identity_hidden_layer_matches_glm_gradient() {
        let mut rng = Rng::new(6);
        let net = init_mlp(&[3, 4, 1], Activation::Identity, OutputKind::Linear, &mut rng, 0.5).unwrap();
        let m = 7;
        let x = Matrix::new(m, 3, (0..3 * m).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap();
        let y = Matrix::new(m, 1, (0..m).map(|_| rng.normal()).collect()).unwrap();
        let all: Vec<usize> = (0..m).collect();
        let g = mean_gradient(&net, &x, &y, LossKind::Mse, &all).unwrap();
        let w1_len = net.weights[0].rows() * net.weights[0].cols();
        let mut feats = Vec::new();
        for i in 0..m {
            let (_, c) = forward(&net, x.row(i)).unwrap();
            feats.push(c.h[1].clone());
        }
        let phi = Matrix::from_rows(&feats).unwrap().with_bias();
        let glm_g = gradient(ModelKind::Linear, net.weights[1].as_slice(), &phi, Targets::Real(y.as_slice()), Reduction::Mean).unwrap();
        for (a, b) in g[w1_len..].iter().zip(glm_g.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn softmax_net_sums_to_one() {
        let mut rng = Rng::new(7);
        let net = init_mlp(&[2, 5, 4], Activation::Tanh, OutputKind::Softmax, &mut rng, 2.0).unwrap();
        for _ in 0..50 {
            let (y, _) = forward(&net, &[rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)]).unwrap();
            assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_learning_rate_is_noop() {
        let mut rng = Rng::new(8);
        let net = init_mlp(&[1, 3, 1], Activation::Tanh, OutputKind::Linear, &mut rng, 0.5).unwrap();
        let x = Matrix::new(4, 1, vec![0.0, 0.3, 0.6, 0.9]).unwrap();
        let y = Matrix::new(4, 1, vec![0.0, 1.0, 0.0, -1.0]).unwrap();
        let cfg = GdConfig { learning_rate: 0.0, ..GdConfig::default() };
        let (trained, _) = train_mlp(&net, &x, &y, &cfg, LossKind::Mse).unwrap();
        assert_eq!(trained, net);
    }
}
