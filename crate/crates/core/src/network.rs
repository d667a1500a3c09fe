//! Three-layer feedforward network, its backpropagation trainer, and the
//! flat real-valued chromosome codec used by the genetic search.
//!
//! Parameters are stored in codec order: hidden weights (row-major,
//! `n_hidden x n_in`), hidden thresholds, output weights (row-major,
//! `n_out x n_hidden`), output thresholds. Encoding and decoding are
//! therefore plain copies and round-trip bit-exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::math;

pub const DEFAULT_HIDDEN: usize = 10;
pub const DEFAULT_LR: f64 = 0.01;
pub const DEFAULT_EPOCHS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("layer sizes must all be at least 1, got {0:?}")]
    InvalidShape(NetShape),
    #[error("gene vector has length {got}, shape needs {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input has length {got}, network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gene bounds [{min}, {max}] are empty")]
    InvalidBounds { min: f64, max: f64 },
    #[error("gene {index} = {value} lies outside [{min}, {max}]")]
    GeneOutOfBounds { index: usize, value: f64, min: f64, max: f64 },
    #[error("training loss became non-finite at epoch {epoch}; learning rate too large?")]
    NonFiniteLoss { epoch: usize },
    #[error("invalid training setting: {0}")]
    InvalidTraining(&'static str),
    #[error("sample set is empty")]
    EmptySamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetShape {
    pub n_in: usize,
    pub n_hidden: usize,
    pub n_out: usize,
}

impl NetShape {
    pub fn new(n_in: usize, n_hidden: usize, n_out: usize) -> Result<Self, NetworkError> {
        let shape = Self { n_in, n_hidden, n_out };
        if n_in == 0 || n_hidden == 0 || n_out == 0 {
            return Err(NetworkError::InvalidShape(shape));
        }
        Ok(shape)
    }

    /// `n_in*n_hidden + n_hidden + n_hidden*n_out + n_out`.
    pub fn gene_len(&self) -> usize {
        self.n_in * self.n_hidden + self.n_hidden + self.n_hidden * self.n_out + self.n_out
    }

    fn offsets(&self) -> [usize; 4] {
        let b1 = self.n_in * self.n_hidden;
        let w2 = b1 + self.n_hidden;
        let b2 = w2 + self.n_hidden * self.n_out;
        [0, b1, w2, b2]
    }
}

/// Hidden-layer activation. The output layer is always linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Activation {
    #[default]
    Tanh,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => math::tanh(z),
            Activation::Sigmoid => 1.0 / (1.0 + math::exp(-z)),
        }
    }

    /// Derivative expressed through the activation's output.
    #[inline]
    fn slope(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Sigmoid => a * (1.0 - a),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            _ => Err("expected `tanh` or `sigmoid`"),
        }
    }
}

/// Closed interval every gene must lie in.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneBounds {
    pub min: f64,
    pub max: f64,
}

impl GeneBounds {
    pub fn new(min: f64, max: f64) -> Result<Self, NetworkError> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(NetworkError::InvalidBounds { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }
}

impl Default for GeneBounds {
    fn default() -> Self {
        Self { min: -3.0, max: 3.0 }
    }
}

/// Real-number encoding of every weight and threshold of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    genes: Vec<f64>,
    bounds: GeneBounds,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>, bounds: GeneBounds) -> Result<Self, NetworkError> {
        if let Some((index, &value)) = genes.iter().enumerate().find(|(_, g)| !bounds.contains(**g)) {
            return Err(NetworkError::GeneOutOfBounds {
                index,
                value,
                min: bounds.min,
                max: bounds.max,
            });
        }
        Ok(Self { genes, bounds })
    }

    pub fn random<R: Rng + ?Sized>(len: usize, bounds: GeneBounds, rng: &mut R) -> Self {
        let genes = (0..len).map(|_| rng.random_range(bounds.min..=bounds.max)).collect();
        Self { genes, bounds }
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn bounds(&self) -> GeneBounds {
        self.bounds
    }

    /// Sets a gene, clamping it into bounds.
    pub(crate) fn set_clamped(&mut self, index: usize, value: f64) {
        self.genes[index] = self.bounds.clamp(value);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    shape: NetShape,
    params: Vec<f64>,
    hidden: Activation,
}

impl Network {
    pub fn zeros(shape: NetShape, hidden: Activation) -> Self {
        Self {
            shape,
            params: vec![0.0; shape.gene_len()],
            hidden,
        }
    }

    pub fn from_genes(shape: NetShape, genes: &[f64], hidden: Activation) -> Result<Self, NetworkError> {
        if genes.len() != shape.gene_len() {
            return Err(NetworkError::LengthMismatch {
                expected: shape.gene_len(),
                got: genes.len(),
            });
        }
        Ok(Self {
            shape,
            params: genes.to_vec(),
            hidden,
        })
    }

    /// Parameters drawn uniformly from `bounds`.
    pub fn random<R: Rng + ?Sized>(shape: NetShape, bounds: GeneBounds, hidden: Activation, rng: &mut R) -> Self {
        let c = Chromosome::random(shape.gene_len(), bounds, rng);
        Self {
            shape,
            params: c.genes,
            hidden,
        }
    }

    pub fn shape(&self) -> NetShape {
        self.shape
    }

    pub fn activation(&self) -> Activation {
        self.hidden
    }

    /// All parameters in codec order.
    pub fn genes(&self) -> &[f64] {
        &self.params
    }

    pub fn hidden_weights(&self) -> &[f64] {
        let [w1, b1, _, _] = self.shape.offsets();
        &self.params[w1..b1]
    }

    pub fn hidden_thresholds(&self) -> &[f64] {
        let [_, b1, w2, _] = self.shape.offsets();
        &self.params[b1..w2]
    }

    pub fn output_weights(&self) -> &[f64] {
        let [_, _, w2, b2] = self.shape.offsets();
        &self.params[w2..b2]
    }

    pub fn output_thresholds(&self) -> &[f64] {
        let [_, _, _, b2] = self.shape.offsets();
        &self.params[b2..]
    }

    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, NetworkError> {
        if x.len() != self.shape.n_in {
            return Err(NetworkError::DimensionMismatch {
                expected: self.shape.n_in,
                got: x.len(),
            });
        }
        let mut hidden = vec![0.0; self.shape.n_hidden];
        let mut out = vec![0.0; self.shape.n_out];
        self.forward_into(x, &mut hidden, &mut out);
        Ok(out)
    }

    #[inline]
    fn forward_into(&self, x: &[f64], hidden: &mut [f64], out: &mut [f64]) {
        let NetShape { n_in, n_hidden, .. } = self.shape;
        let [_, b1, w2, b2] = self.shape.offsets();
        let p = &self.params;
        for (h, a) in hidden.iter_mut().enumerate() {
            let row = &p[h * n_in..(h + 1) * n_in];
            let z = p[b1 + h] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
            *a = self.hidden.apply(z);
        }
        for (j, o) in out.iter_mut().enumerate() {
            let row = &p[w2 + j * n_hidden..w2 + (j + 1) * n_hidden];
            *o = p[b2 + j] + row.iter().zip(hidden.iter()).map(|(w, a)| w * a).sum::<f64>();
        }
    }

    /// Outputs for every sample, row-major `len x n_out`.
    pub fn predict(&self, samples: &SampleSet) -> Result<Vec<f64>, NetworkError> {
        self.check(samples)?;
        let mut hidden = vec![0.0; self.shape.n_hidden];
        let mut out = vec![0.0; samples.len() * self.shape.n_out];
        for (s, o) in out.chunks_mut(self.shape.n_out).enumerate() {
            self.forward_into(samples.input(s), &mut hidden, o);
        }
        Ok(out)
    }

    fn check(&self, samples: &SampleSet) -> Result<(), NetworkError> {
        if samples.n_in != self.shape.n_in {
            return Err(NetworkError::DimensionMismatch {
                expected: self.shape.n_in,
                got: samples.n_in,
            });
        }
        if samples.n_out != self.shape.n_out {
            return Err(NetworkError::DimensionMismatch {
                expected: self.shape.n_out,
                got: samples.n_out,
            });
        }
        Ok(())
    }
}

pub fn encode(net: &Network, bounds: GeneBounds) -> Result<Chromosome, NetworkError> {
    Chromosome::new(net.params.clone(), bounds)
}

pub fn decode(c: &Chromosome, shape: NetShape, hidden: Activation) -> Result<Network, NetworkError> {
    Network::from_genes(shape, &c.genes, hidden)
}

/// Contiguous training or evaluation samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    inputs: Vec<f64>,
    targets: Vec<f64>,
    n_in: usize,
    n_out: usize,
}

impl SampleSet {
    pub fn new(inputs: Vec<f64>, targets: Vec<f64>, n_in: usize, n_out: usize) -> Result<Self, NetworkError> {
        if n_in == 0 || n_out == 0 {
            return Err(NetworkError::InvalidTraining("sample widths must be positive"));
        }
        let n = targets.len() / n_out;
        if targets.len() % n_out != 0 || inputs.len() != n * n_in {
            return Err(NetworkError::DimensionMismatch {
                expected: n * n_in,
                got: inputs.len(),
            });
        }
        Ok(Self {
            inputs,
            targets,
            n_in,
            n_out,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len() / self.n_out
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.n_in..(i + 1) * self.n_in]
    }

    pub fn target(&self, i: usize) -> &[f64] {
        &self.targets[i * self.n_out..(i + 1) * self.n_out]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }
}

/// Mean squared error over samples and output nodes.
pub fn mse(net: &Network, samples: &SampleSet) -> Result<f64, NetworkError> {
    let out = net.predict(samples)?;
    if samples.is_empty() {
        return Err(NetworkError::EmptySamples);
    }
    let sum: f64 = out.iter().zip(&samples.targets).map(|(o, y)| (o - y) * (o - y)).sum();
    Ok(sum / out.len() as f64)
}

/// MSE and its gradient with respect to every parameter, in codec order.
pub fn mse_gradient(net: &Network, samples: &SampleSet) -> Result<(f64, Vec<f64>), NetworkError> {
    net.check(samples)?;
    if samples.is_empty() {
        return Err(NetworkError::EmptySamples);
    }
    let mut grad = vec![0.0; net.params.len()];
    let loss = accumulate_gradient(net, samples, &mut grad);
    Ok((loss, grad))
}

fn accumulate_gradient(net: &Network, samples: &SampleSet, grad: &mut [f64]) -> f64 {
    let NetShape { n_in, n_hidden, n_out } = net.shape;
    let [_, b1, w2, b2] = net.shape.offsets();
    let p = &net.params;
    let scale = 1.0 / (samples.len() * n_out) as f64;
    let mut hidden = vec![0.0; n_hidden];
    let mut out = vec![0.0; n_out];
    let mut delta_h = vec![0.0; n_hidden];
    let mut loss = 0.0;
    grad.iter_mut().for_each(|g| *g = 0.0);

    for s in 0..samples.len() {
        let x = samples.input(s);
        let y = samples.target(s);
        net.forward_into(x, &mut hidden, &mut out);
        delta_h.iter_mut().for_each(|d| *d = 0.0);
        for j in 0..n_out {
            let err = out[j] - y[j];
            loss += err * err;
            let delta_o = 2.0 * err * scale;
            grad[b2 + j] += delta_o;
            let w_row = w2 + j * n_hidden;
            for h in 0..n_hidden {
                grad[w_row + h] += delta_o * hidden[h];
                delta_h[h] += delta_o * p[w_row + h];
            }
        }
        for h in 0..n_hidden {
            let dz = delta_h[h] * net.hidden.slope(hidden[h]);
            grad[b1 + h] += dz;
            let row = &mut grad[h * n_in..(h + 1) * n_in];
            for (g, v) in row.iter_mut().zip(x) {
                *g += dz * v;
            }
        }
    }
    loss * scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct BpConfig {
    pub lr: f64,
    pub epochs: usize,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            lr: DEFAULT_LR,
            epochs: DEFAULT_EPOCHS,
        }
    }
}

/// Full-batch gradient descent on MSE. The returned trace holds the loss
/// before each of the `epochs` updates.
pub fn train_bp(net: &Network, samples: &SampleSet, cfg: BpConfig) -> Result<(Network, Vec<f64>), NetworkError> {
    if !(cfg.lr > 0.0) || !cfg.lr.is_finite() {
        return Err(NetworkError::InvalidTraining("learning rate must be positive"));
    }
    if cfg.epochs == 0 {
        return Err(NetworkError::InvalidTraining("epochs must be at least 1"));
    }
    net.check(samples)?;
    if samples.is_empty() {
        return Err(NetworkError::EmptySamples);
    }
    let mut net = net.clone();
    let mut grad = vec![0.0; net.params.len()];
    let mut trace = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let loss = accumulate_gradient(&net, samples, &mut grad);
        if !loss.is_finite() {
            return Err(NetworkError::NonFiniteLoss { epoch });
        }
        trace.push(loss);
        for (p, g) in net.params.iter_mut().zip(&grad) {
            *p -= cfg.lr * g;
        }
    }
    if !net.is_finite() {
        return Err(NetworkError::NonFiniteLoss { epoch: cfg.epochs });
    }
    Ok((net, trace))
}

/// `G = k * sum |y - o|` over every sample and output node.
pub fn fitness_error(net: &Network, samples: &SampleSet, k: f64) -> Result<f64, NetworkError> {
    let out = net.predict(samples)?;
    let sum: f64 = out.iter().zip(&samples.targets).map(|(o, y)| (y - o).abs()).sum();
    Ok(k * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shape(i: usize, h: usize, o: usize) -> NetShape {
        NetShape::new(i, h, o).unwrap()
    }

    #[test]
    fn eight_ten_one_gene_length() {
        assert_eq!(shape(8, 10, 1).gene_len(), 101);
        assert!(NetShape::new(0, 1, 1).is_err());
    }

    #[test]
    fn zero_genes_give_zero_network() {
        let s = shape(8, 10, 1);
        let c = Chromosome::new(vec![0.0; 101], GeneBounds::default()).unwrap();
        let net = decode(&c, s, Activation::Tanh).unwrap();
        assert_eq!(net, Network::zeros(s, Activation::Tanh));
        assert_eq!(net.forward(&[0.7; 8]).unwrap(), vec![0.0]);
    }

    #[test]
    fn decode_rejects_wrong_length() {
        let c = Chromosome::new(vec![0.0; 100], GeneBounds::default()).unwrap();
        assert_eq!(
            decode(&c, shape(8, 10, 1), Activation::Tanh).unwrap_err(),
            NetworkError::LengthMismatch { expected: 101, got: 100 }
        );
    }

    #[test]
    fn encode_checks_bounds() {
        let net = Network::from_genes(shape(1, 1, 1), &[0.0, 0.0, 5.0, 0.0], Activation::Tanh).unwrap();
        assert!(matches!(
            encode(&net, GeneBounds::default()),
            Err(NetworkError::GeneOutOfBounds { index: 2, .. })
        ));
    }

    #[test]
    fn codec_layout() {
        let genes: Vec<f64> = (0..shape(2, 3, 1).gene_len()).map(|i| i as f64).collect();
        let net = Network::from_genes(shape(2, 3, 1), &genes, Activation::Tanh).unwrap();
        assert_eq!(net.hidden_weights(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(net.hidden_thresholds(), &[6.0, 7.0, 8.0]);
        assert_eq!(net.output_weights(), &[9.0, 10.0, 11.0]);
        assert_eq!(net.output_thresholds(), &[12.0]);
    }

    #[test]
    fn single_unit_forward() {
        let net = Network::from_genes(shape(1, 1, 1), &[1.0, 0.0, 1.0, 0.0], Activation::Tanh).unwrap();
        let o = net.forward(&[0.5]).unwrap();
        assert!((o[0] - 0.4621172).abs() < 1e-7);
    }

    #[test]
    fn symmetric_inputs_cancel() {
        let net = Network::from_genes(shape(2, 1, 1), &[1.0, -1.0, 0.0, 2.0, 1.0], Activation::Tanh).unwrap();
        assert_eq!(net.forward(&[0.3, 0.3]).unwrap(), vec![1.0]);
        assert_eq!(
            net.forward(&[0.3]).unwrap_err(),
            NetworkError::DimensionMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn fitness_examples() {
        // A zero network with a free output threshold predicts that threshold.
        let s = shape(1, 1, 1);
        let at = |b2: f64| Network::from_genes(s, &[0.0, 0.0, 0.0, b2], Activation::Tanh).unwrap();
        let two = SampleSet::new(vec![0.0, 0.0], vec![1.0, 2.0], 1, 1).unwrap();
        assert_eq!(fitness_error(&at(1.5), &two, 1.0).unwrap(), 1.0);
        let one = SampleSet::new(vec![0.0], vec![0.0], 1, 1).unwrap();
        assert_eq!(fitness_error(&at(3.0), &one, 2.0).unwrap(), 6.0);
        let exact = SampleSet::new(vec![0.0, 0.0], vec![0.5, 0.5], 1, 1).unwrap();
        assert_eq!(fitness_error(&at(0.5), &exact, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn tiny_step_barely_moves() {
        let mut rng = crate::seeded_rng(1);
        let s = shape(3, 4, 1);
        let net = Network::random(s, GeneBounds::default(), Activation::Tanh, &mut rng);
        let samples = SampleSet::new((0..30).map(|i| (i as f64 * 0.37).sin()).collect(), (0..10).map(|i| i as f64 * 0.1).collect(), 3, 1).unwrap();
        let (trained, trace) = train_bp(&net, &samples, BpConfig { lr: 1e-12, epochs: 20 }).unwrap();
        assert_eq!(trace.len(), 20);
        for (a, b) in trained.genes().iter().zip(net.genes()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((trace[0] - trace[19]).abs() < 1e-9 * trace[0].max(1.0));
    }

    #[test]
    fn rejects_bad_training_settings() {
        let net = Network::zeros(shape(1, 1, 1), Activation::Tanh);
        let samples = SampleSet::new(vec![0.0], vec![0.0], 1, 1).unwrap();
        assert!(train_bp(&net, &samples, BpConfig { lr: 0.0, epochs: 1 }).is_err());
        assert!(train_bp(&net, &samples, BpConfig { lr: 0.1, epochs: 0 }).is_err());
        let empty = SampleSet::new(vec![], vec![], 1, 1).unwrap();
        assert_eq!(train_bp(&net, &empty, BpConfig::default()).unwrap_err(), NetworkError::EmptySamples);
    }

    #[test]
    fn divergence_is_reported() {
        let net = Network::from_genes(shape(1, 2, 1), &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0], Activation::Tanh).unwrap();
        let samples = SampleSet::new(vec![1.0, -1.0], vec![1e3, -1e3], 1, 1).unwrap();
        let err = train_bp(&net, &samples, BpConfig { lr: 1e3, epochs: 500 }).unwrap_err();
        assert!(matches!(err, NetworkError::NonFiniteLoss { .. }));
    }

    #[test]
    fn learns_a_line() {
        let xs: Vec<f64> = (0..50).map(|i| -1.0 + 2.0 * i as f64 / 49.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let samples = SampleSet::new(xs, ys, 1, 1).unwrap();
        let mut rng = crate::seeded_rng(42);
        let net = Network::random(shape(1, 4, 1), GeneBounds::new(-0.5, 0.5).unwrap(), Activation::Tanh, &mut rng);
        let (trained, trace) = train_bp(&net, &samples, BpConfig { lr: 0.05, epochs: 5000 }).unwrap();
        let final_mse = mse(&trained, &samples).unwrap();
        assert!(final_mse < 1e-3, "final mse {final_mse}");
        assert!(trace[4999] < trace[0]);
    }

    #[test]
    fn training_is_deterministic() {
        let mut rng = crate::seeded_rng(9);
        let net = Network::random(shape(2, 3, 1), GeneBounds::default(), Activation::Sigmoid, &mut rng);
        let samples = SampleSet::new(vec![0.1, 0.2, -0.3, 0.4, 0.5, -0.6], vec![0.1, 0.2, 0.3], 2, 1).unwrap();
        let cfg = BpConfig { lr: 0.05, epochs: 200 };
        assert_eq!(train_bp(&net, &samples, cfg).unwrap(), train_bp(&net, &samples, cfg).unwrap());
    }

    proptest! {
        #[test]
        fn codec_round_trips(genes in proptest::collection::vec(-3.0f64..=3.0, 21)) {
            let s = shape(3, 4, 1);
            let c = Chromosome::new(genes.clone(), GeneBounds::default()).unwrap();
            let net = decode(&c, s, Activation::Tanh).unwrap();
            let back = encode(&net, GeneBounds::default()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(decode(&back, s, Activation::Tanh).unwrap(), net);
        }

        #[test]
        fn outputs_respect_weight_bound(
            genes in proptest::collection::vec(-3.0f64..=3.0, 2 * 3 + 3 + 3 * 2 + 2),
            x in proptest::collection::vec(-50.0f64..50.0, 2),
            sigmoid in any::<bool>(),
        ) {
            let act = if sigmoid { Activation::Sigmoid } else { Activation::Tanh };
            let net = Network::from_genes(shape(2, 3, 2), &genes, act).unwrap();
            let out = net.forward(&x).unwrap();
            for (j, o) in out.iter().enumerate() {
                let w: f64 = net.output_weights()[j * 3..(j + 1) * 3].iter().map(|v| v.abs()).sum();
                prop_assert!(o.abs() <= w + net.output_thresholds()[j].abs() + 1e-12);
            }
        }
    }
}
