use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::activation::Activation;
use crate::error::NeuralError;
use crate::linalg::Mat;
use crate::spec::{LayerSpec, NetworkSpec};

/// Parameters of one layer. LSTM gate blocks are stacked in the row
/// dimension in the order input, forget, candidate, output.
#[derive(Debug, Clone, PartialEq)]
pub enum LayerParams {
    Dense { w: Mat, b: Vec<f64> },
    Lstm { w_ih: Mat, w_hh: Mat, b: Vec<f64> },
}

/// All weights and biases of a network, layer-ordered. The same shape
/// doubles as a gradient container.
#[derive(Debug, Clone, PartialEq)]
pub struct QNetworkParams {
    pub layers: Vec<LayerParams>,
}

fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    let r = (6.0 / (rows + cols) as f64).sqrt();
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-r..r))
}

impl QNetworkParams {
    /// Seeded uniform initialization in [-r, r], r = sqrt(6/(fan_in+fan_out));
    /// biases start at zero.
    pub fn init(spec: &NetworkSpec, seed: u64) -> Result<Self, NeuralError> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::new();
        for (layer, input_width) in spec.effective_layers() {
            layers.push(match layer {
                LayerSpec::Dense { width, .. } => LayerParams::Dense {
                    w: glorot(width, input_width, &mut rng),
                    b: vec![0.0; width],
                },
                LayerSpec::Lstm { width } => LayerParams::Lstm {
                    w_ih: glorot(4 * width, input_width, &mut rng),
                    w_hh: glorot(4 * width, width, &mut rng),
                    b: vec![0.0; 4 * width],
                },
            });
        }
        Ok(Self { layers })
    }

    /// All-zero parameters with the spec's shapes (gradient accumulator).
    pub fn zeros(spec: &NetworkSpec) -> Result<Self, NeuralError> {
        spec.validate()?;
        let mut layers = Vec::new();
        for (layer, input_width) in spec.effective_layers() {
            layers.push(match layer {
                LayerSpec::Dense { width, .. } => {
                    LayerParams::Dense { w: Mat::zeros(width, input_width), b: vec![0.0; width] }
                }
                LayerSpec::Lstm { width } => LayerParams::Lstm {
                    w_ih: Mat::zeros(4 * width, input_width),
                    w_hh: Mat::zeros(4 * width, width),
                    b: vec![0.0; 4 * width],
                },
            });
        }
        Ok(Self { layers })
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                LayerParams::Dense { w, b } => w.data().len() + b.len(),
                LayerParams::Lstm { w_ih, w_hh, b } => {
                    w_ih.data().len() + w_hh.data().len() + b.len()
                }
            })
            .sum()
    }

    /// Mutable references to every scalar, in a fixed layer-major,
    /// row-major order. Used for SGD, clipping and finite differences.
    pub fn flat_mut(&mut self) -> Vec<&mut f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &mut self.layers {
            match layer {
                LayerParams::Dense { w, b } => {
                    out.extend(w.data_mut().iter_mut());
                    out.extend(b.iter_mut());
                }
                LayerParams::Lstm { w_ih, w_hh, b } => {
                    out.extend(w_ih.data_mut().iter_mut());
                    out.extend(w_hh.data_mut().iter_mut());
                    out.extend(b.iter_mut());
                }
            }
        }
        out
    }

    /// Copies of every scalar in the same order as [`Self::flat_mut`].
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            match layer {
                LayerParams::Dense { w, b } => {
                    out.extend_from_slice(w.data());
                    out.extend_from_slice(b);
                }
                LayerParams::Lstm { w_ih, w_hh, b } => {
                    out.extend_from_slice(w_ih.data());
                    out.extend_from_slice(w_hh.data());
                    out.extend_from_slice(b);
                }
            }
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.flat().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// self += alpha * other, elementwise over identical shapes.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        let other_flat = other.flat();
        for (dst, src) in self.flat_mut().into_iter().zip(other_flat) {
            *dst += alpha * src;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for v in self.flat_mut() {
            *v *= factor;
        }
    }

    pub fn all_finite(&self) -> bool {
        self.flat().iter().all(|v| v.is_finite())
    }

    /// Writes a text snapshot: shape header lines followed by row-major
    /// values, one layer at a time. `f64` formatting is shortest
    /// round-trip, so save/load is exact.
    pub fn save<W: Write>(&self, spec: &NetworkSpec, mut w: W) -> Result<(), NeuralError> {
        writeln!(w, "qnet v1")?;
        writeln!(w, "input {} output {}", spec.input_dim, spec.output_dim)?;
        writeln!(w, "layers {}", self.layers.len())?;
        for (params, (layer, _)) in self.layers.iter().zip(spec.effective_layers()) {
            match (params, layer) {
                (LayerParams::Dense { w: wm, b }, LayerSpec::Dense { width, activation }) => {
                    writeln!(w, "dense {width} {activation}")?;
                    write_mat(&mut w, "w", wm)?;
                    write_vec(&mut w, "b", b)?;
                }
                (LayerParams::Lstm { w_ih, w_hh, b }, LayerSpec::Lstm { width }) => {
                    writeln!(w, "lstm {width}")?;
                    write_mat(&mut w, "w_ih", w_ih)?;
                    write_mat(&mut w, "w_hh", w_hh)?;
                    write_vec(&mut w, "b", b)?;
                }
                _ => return Err(NeuralError::InvalidSpec("params do not match spec".into())),
            }
        }
        Ok(())
    }

    /// Reads a snapshot produced by [`Self::save`], reconstructing the
    /// spec alongside the parameters.
    pub fn load<R: BufRead>(reader: R) -> Result<(NetworkSpec, Self), NeuralError> {
        let mut lines = reader.lines();
        let mut next_line = || -> Result<String, NeuralError> {
            lines
                .next()
                .ok_or_else(|| NeuralError::Parse("unexpected end of file".into()))?
                .map_err(NeuralError::from)
        };

        if next_line()?.trim() != "qnet v1" {
            return Err(NeuralError::Parse("missing qnet v1 header".into()));
        }
        let header = next_line()?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 4 || head[0] != "input" || head[2] != "output" {
            return Err(NeuralError::Parse(format!("bad dimension header {header:?}")));
        }
        let input_dim = parse_usize(head[1])?;
        let output_dim = parse_usize(head[3])?;
        let layers_line = next_line()?;
        let l: Vec<&str> = layers_line.split_whitespace().collect();
        if l.len() != 2 || l[0] != "layers" {
            return Err(NeuralError::Parse(format!("bad layers header {layers_line:?}")));
        }
        let n_layers = parse_usize(l[1])?;

        let mut hidden = Vec::new();
        let mut params = Vec::new();
        for i in 0..n_layers {
            let decl = next_line()?;
            let parts: Vec<&str> = decl.split_whitespace().collect();
            match parts.as_slice() {
                ["dense", width, activation] => {
                    let width = parse_usize(width)?;
                    let activation: Activation =
                        activation.parse().map_err(NeuralError::Parse)?;
                    let w = read_mat(&mut next_line, "w")?;
                    let b = read_vec(&mut next_line, "b")?;
                    if i + 1 < n_layers {
                        hidden.push(LayerSpec::Dense { width, activation });
                    }
                    params.push(LayerParams::Dense { w, b });
                }
                ["lstm", width] => {
                    let width = parse_usize(width)?;
                    let w_ih = read_mat(&mut next_line, "w_ih")?;
                    let w_hh = read_mat(&mut next_line, "w_hh")?;
                    let b = read_vec(&mut next_line, "b")?;
                    if i + 1 < n_layers {
                        hidden.push(LayerSpec::Lstm { width });
                    } else {
                        return Err(NeuralError::Parse("output layer cannot be lstm".into()));
                    }
                    params.push(LayerParams::Lstm { w_ih, w_hh, b });
                }
                _ => return Err(NeuralError::Parse(format!("bad layer declaration {decl:?}"))),
            }
        }
        let spec = NetworkSpec { input_dim, hidden, output_dim };
        spec.validate()?;
        Ok((spec, Self { layers: params }))
    }
}

fn write_mat<W: Write>(w: &mut W, name: &str, m: &Mat) -> Result<(), NeuralError> {
    writeln!(w, "{name} {} {}", m.rows(), m.cols())?;
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

fn write_vec<W: Write>(w: &mut W, name: &str, v: &[f64]) -> Result<(), NeuralError> {
    writeln!(w, "{name} {}", v.len())?;
    let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    writeln!(w, "{}", row.join(" "))?;
    Ok(())
}

fn parse_usize(s: &str) -> Result<usize, NeuralError> {
    s.parse().map_err(|_| NeuralError::Parse(format!("bad integer {s:?}")))
}

fn parse_f64(s: &str) -> Result<f64, NeuralError> {
    s.parse().map_err(|_| NeuralError::Parse(format!("bad float {s:?}")))
}

fn read_mat(
    next_line: &mut impl FnMut() -> Result<String, NeuralError>,
    expect: &str,
) -> Result<Mat, NeuralError> {
    let header = next_line()?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != expect {
        return Err(NeuralError::Parse(format!("expected {expect} header, got {header:?}")));
    }
    let rows = parse_usize(parts[1])?;
    let cols = parse_usize(parts[2])?;
    let mut m = Mat::zeros(rows, cols);
    for r in 0..rows {
        let line = next_line()?;
        let values: Vec<&str> = line.split_whitespace().collect();
        if values.len() != cols {
            return Err(NeuralError::Parse(format!(
                "row {r} of {expect} has {} values, expected {cols}",
                values.len()
            )));
        }
        for (c, v) in values.iter().enumerate() {
            m.set(r, c, parse_f64(v)?);
        }
    }
    Ok(m)
}

fn read_vec(
    next_line: &mut impl FnMut() -> Result<String, NeuralError>,
    expect: &str,
) -> Result<Vec<f64>, NeuralError> {
    let header = next_line()?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != expect {
        return Err(NeuralError::Parse(format!("expected {expect} header, got {header:?}")));
    }
    let len = parse_usize(parts[1])?;
    let line = next_line()?;
    let values: Vec<&str> = line.split_whitespace().collect();
    if values.len() != len {
        return Err(NeuralError::Parse(format!(
            "{expect} has {} values, expected {len}",
            values.len()
        )));
    }
    values.iter().map(|v| parse_f64(v)).collect()
}
