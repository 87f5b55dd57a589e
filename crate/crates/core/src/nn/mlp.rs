use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{stream, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
}

impl MlpSpec {
    pub const DEFAULT_HIDDEN: [usize; 4] = [128, 256, 128, 64];

    pub fn new(input_dim: usize, hidden_dims: Vec<usize>, output_dim: usize) -> Self {
        MlpSpec {
            input_dim,
            hidden_dims,
            output_dim,
            activation: Activation::Relu,
        }
    }

    pub fn with_default_hidden(input_dim: usize, output_dim: usize) -> Self {
        Self::new(input_dim, Self::DEFAULT_HIDDEN.to_vec(), output_dim)
    }

    /// Layer widths from input to output.
    pub fn widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.hidden_dims.len() + 2);
        w.push(self.input_dim);
        w.extend_from_slice(&self.hidden_dims);
        w.push(self.output_dim);
        w
    }

    pub fn validate(&self) -> Result<()> {
        if self.widths().contains(&0) {
            return Err(Error::invalid("mlp", format!("every dimension must be >= 1, got {:?}", self.widths())));
        }
        Ok(())
    }
}

/// Dense layer `y = W x + b`, `W` stored row-major with one row per output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Layer {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    fn affine(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.cols)
            .zip(&self.bias)
            .map(|(row, b)| b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
            .collect()
    }

    fn same_shape(&self, other: &Layer) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

/// Multilayer perceptron: ReLU on hidden layers, linear output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub spec: MlpSpec,
    pub layers: Vec<Layer>,
    pub seed: u64,
    /// Bumped on every parameter change; forward caches remember it.
    #[serde(skip)]
    version: u64,
}

/// Activations recorded by a forward pass: `acts[0]` is the input and
/// `acts[l + 1]` the output of layer `l`.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    acts: Vec<Vec<f64>>,
    version: u64,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.acts.last().expect("cache holds at least the input")
    }
}

/// Parameter-shaped accumulator for gradients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gradients {
    pub layers: Vec<Layer>,
}

impl Gradients {
    pub fn zeros_like(net: &Mlp) -> Self {
        Gradients {
            layers: net.layers.iter().map(|l| Layer::zeros(l.rows, l.cols)).collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        for l in &mut self.layers {
            l.weights.fill(0.0);
            l.bias.fill(0.0);
        }
    }

    pub fn scale(&mut self, k: f64) {
        for v in self.values_mut() {
            *v *= k;
        }
    }

    pub fn norm(&self) -> f64 {
        self.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Rescales so the global L2 norm is at most `max_norm`.
    pub fn clip_norm(&mut self, max_norm: f64) -> f64 {
        let n = self.norm();
        if n > max_norm && n > 0.0 {
            self.scale(max_norm / n);
        }
        n
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }
}

impl Mlp {
    /// He-uniform weights (`U(-sqrt(6/fan_in), sqrt(6/fan_in))`), zero biases.
    pub fn new(spec: MlpSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = stream(seed, Domain::AgentInit, 0);
        let widths = spec.widths();
        let layers = widths
            .windows(2)
            .map(|w| {
                let (cols, rows) = (w[0], w[1]);
                let limit = (6.0 / cols as f64).sqrt();
                Layer {
                    rows,
                    cols,
                    weights: (0..rows * cols).map(|_| rng.random_range(-limit..limit)).collect(),
                    bias: vec![0.0; rows],
                }
            })
            .collect();
        Ok(Mlp {
            spec,
            layers,
            seed,
            version: 0,
        })
    }

    /// Builds a network from explicit layers (used by tests and checkpoints).
    pub fn from_layers(spec: MlpSpec, layers: Vec<Layer>, seed: u64) -> Result<Self> {
        spec.validate()?;
        let widths = spec.widths();
        if layers.len() != widths.len() - 1 {
            return Err(Error::Dimension {
                expected: widths.len() - 1,
                actual: layers.len(),
            });
        }
        for (l, w) in layers.iter().zip(widths.windows(2)) {
            if l.cols != w[0] || l.rows != w[1] || l.weights.len() != l.rows * l.cols || l.bias.len() != l.rows {
                return Err(Error::Dimension {
                    expected: w[0] * w[1],
                    actual: l.weights.len(),
                });
            }
        }
        Ok(Mlp {
            spec,
            layers,
            seed,
            version: 0,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.spec.output_dim
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    pub fn scale_layer(&mut self, index: usize, k: f64) {
        let l = &mut self.layers[index];
        l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|v| *v *= k);
        self.touch();
    }

    pub(crate) fn touch(&mut self) {
        self.version = self.version.wrapping_add(1);
    }

    /// Parameters in flat order: each layer's weights (row-major), then its bias.
    pub fn flat(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
            .collect()
    }

    pub fn set_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.param_count() {
            return Err(Error::Dimension {
                expected: self.param_count(),
                actual: values.len(),
            });
        }
        for (p, v) in self
            .layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
            .zip(values)
        {
            *p = *v;
        }
        self.touch();
        Ok(())
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.touch();
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    /// Copies parameters from a network of the same shape.
    pub fn copy_from(&mut self, other: &Mlp) -> Result<()> {
        if self.layers.len() != other.layers.len() || self.layers.iter().zip(&other.layers).any(|(a, b)| !a.same_shape(b)) {
            return Err(Error::Dimension {
                expected: self.param_count(),
                actual: other.param_count(),
            });
        }
        self.layers.clone_from(&other.layers);
        self.touch();
        Ok(())
    }

    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, ForwardCache)> {
        if input.len() != self.spec.input_dim {
            return Err(Error::Dimension {
                expected: self.spec.input_dim,
                actual: input.len(),
            });
        }
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(input.to_vec());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = layer.affine(acts.last().unwrap());
            if i < last {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(z);
        }
        let out = acts.last().unwrap().clone();
        Ok((
            out,
            ForwardCache {
                acts,
                version: self.version,
            },
        ))
    }

    /// Forward pass without keeping a cache.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.spec.input_dim {
            return Err(Error::Dimension {
                expected: self.spec.input_dim,
                actual: input.len(),
            });
        }
        let last = self.layers.len() - 1;
        let mut x = input.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            x = layer.affine(&x);
            if i < last {
                x.iter_mut().for_each(|v| *v = v.max(0.0));
            }
        }
        Ok(x)
    }

    pub fn backward(&self, cache: &ForwardCache, output_grad: &[f64]) -> Result<Gradients> {
        let mut grads = Gradients::zeros_like(self);
        self.backward_accumulate(cache, output_grad, &mut grads)?;
        Ok(grads)
    }

    /// Adds the parameter gradients of `output_grad . f(x)` into `grads` and
    /// returns the gradient with respect to the input.
    pub fn backward_accumulate(
        &self,
        cache: &ForwardCache,
        output_grad: &[f64],
        grads: &mut Gradients,
    ) -> Result<Vec<f64>> {
        if cache.version != self.version || cache.acts.len() != self.layers.len() + 1 {
            return Err(Error::invalid("cache", "stale forward cache: parameters changed since the forward pass"));
        }
        if output_grad.len() != self.spec.output_dim {
            return Err(Error::Dimension {
                expected: self.spec.output_dim,
                actual: output_grad.len(),
            });
        }
        let mut g = output_grad.to_vec();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            let x = &cache.acts[l];
            let gl = &mut grads.layers[l];
            let mut gx = vec![0.0; layer.cols];
            for (o, &go) in g.iter().enumerate() {
                if go == 0.0 {
                    continue;
                }
                gl.bias[o] += go;
                let row = o * layer.cols..(o + 1) * layer.cols;
                for ((gw, xi), (w, gxi)) in gl.weights[row.clone()]
                    .iter_mut()
                    .zip(x)
                    .zip(layer.weights[row].iter().zip(gx.iter_mut()))
                {
                    *gw += go * xi;
                    *gxi += go * w;
                }
            }
            if l > 0 {
                // ReLU: pass gradient only where the activation was positive.
                for (v, a) in gx.iter_mut().zip(x) {
                    if *a <= 0.0 {
                        *v = 0.0;
                    }
                }
            }
            g = gx;
        }
        Ok(g)
    }
}
