use crate::activation::Activation;
use crate::error::NeuralError;

/// One hidden layer.
#[derive(Debug, Clone, PartialEq)]
pub enum LayerSpec {
    Dense { width: usize, activation: Activation },
    Lstm { width: usize },
}

impl LayerSpec {
    pub fn width(&self) -> usize {
        match self {
            Self::Dense { width, .. } | Self::Lstm { width } => *width,
        }
    }
}

/// Architecture of a Q-network: hidden layers plus a linear output layer
/// producing one q-value per action.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden: Vec<LayerSpec>,
    pub output_dim: usize,
}

impl NetworkSpec {
    /// Feed-forward stack with ReLU hidden layers.
    pub fn mlp(input_dim: usize, hidden_widths: &[usize], output_dim: usize) -> Self {
        Self {
            input_dim,
            hidden: hidden_widths
                .iter()
                .map(|&width| LayerSpec::Dense { width, activation: Activation::Relu })
                .collect(),
            output_dim,
        }
    }

    /// Dense feature layer followed by an LSTM, for recurrent agents.
    pub fn recurrent(
        input_dim: usize,
        dense_width: usize,
        lstm_width: usize,
        output_dim: usize,
    ) -> Self {
        Self {
            input_dim,
            hidden: vec![
                LayerSpec::Dense { width: dense_width, activation: Activation::Relu },
                LayerSpec::Lstm { width: lstm_width },
            ],
            output_dim,
        }
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(NeuralError::InvalidSpec("input and output dims must be >= 1".into()));
        }
        let lstm_count =
            self.hidden.iter().filter(|l| matches!(l, LayerSpec::Lstm { .. })).count();
        if lstm_count > 1 {
            return Err(NeuralError::InvalidSpec("at most one lstm layer is supported".into()));
        }
        for layer in &self.hidden {
            if layer.width() == 0 {
                return Err(NeuralError::InvalidSpec("layer width must be >= 1".into()));
            }
        }
        Ok(())
    }

    pub fn has_lstm(&self) -> bool {
        self.hidden.iter().any(|l| matches!(l, LayerSpec::Lstm { .. }))
    }

    /// Width of the LSTM layer when present.
    pub fn lstm_width(&self) -> Option<usize> {
        self.hidden.iter().find_map(|l| match l {
            LayerSpec::Lstm { width } => Some(*width),
            _ => None,
        })
    }

    /// Full layer sequence including the identity output layer, as
    /// (layer, input_width) pairs.
    pub fn effective_layers(&self) -> Vec<(LayerSpec, usize)> {
        let mut layers = Vec::with_capacity(self.hidden.len() + 1);
        let mut width = self.input_dim;
        for layer in &self.hidden {
            layers.push((layer.clone(), width));
            width = layer.width();
        }
        layers.push((
            LayerSpec::Dense { width: self.output_dim, activation: Activation::Identity },
            width,
        ));
        layers
    }
}
