//! Model, training, and run configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Architecture hyperparameters of a toy decoder-only transformer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n_layers: u32,
    pub n_heads: u32,
    pub d_model: u32,
    pub d_mlp: u32,
    pub vocab_size: u32,
    pub max_seq_len: u32,
    pub seed: u64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_layers < 1
            || self.n_heads < 1
            || self.d_model < 1
            || self.d_mlp < 1
            || self.vocab_size < 1
        {
            return Err(Error::InvalidConfig("all dimensions must be >= 1".into()));
        }
        if self.max_seq_len < 2 {
            return Err(Error::InvalidConfig("max_seq_len must be >= 2".into()));
        }
        if self.d_model % self.n_heads != 0 {
            return Err(Error::InvalidConfig(format!(
                "d_model ({}) must be divisible by n_heads ({})",
                self.d_model, self.n_heads
            )));
        }
        Ok(())
    }

    pub fn d_head(&self) -> usize {
        (self.d_model / self.n_heads) as usize
    }
}

/// Training-loop hyperparameters. The optimizer is a momentum-free adaptive
/// step (second-moment EMA only) with a fixed learning rate after a linear
/// warmup over `warmup_steps` updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub warmup_steps: u64,
    pub batch_size: usize,
    pub beta2: f64,
    pub eps: f64,
    pub shuffle_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            warmup_steps: 10,
            batch_size: 16,
            beta2: 0.99,
            eps: 1e-8,
            shuffle_seed: 0,
        }
    }
}

/// Steps at which training writes a checkpoint file. Strictly increasing,
/// starting at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointSchedule(pub Vec<u64>);

impl CheckpointSchedule {
    pub fn new(steps: Vec<u64>) -> Result<Self> {
        if steps.is_empty() || steps[0] != 0 {
            return Err(Error::InvalidConfig("schedule must start at step 0".into()));
        }
        if !steps.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig("schedule must be strictly increasing".into()));
        }
        Ok(CheckpointSchedule(steps))
    }

    /// Desk-scale default: 0, 1, 2, 4, ..., 512, then every 500 steps up to
    /// 5000 (the first multiple of 500 above 512 is 1000).
    pub fn desk_default() -> Self {
        let mut steps = vec![0u64];
        let mut p = 1u64;
        while p <= 512 {
            steps.push(p);
            p *= 2;
        }
        let mut s = 1000u64;
        while s <= 5000 {
            steps.push(s);
            s += 500;
        }
        CheckpointSchedule(steps)
    }

    pub fn last_step(&self) -> u64 {
        *self.0.last().expect("schedule is nonempty")
    }

    pub fn contains(&self, step: u64) -> bool {
        self.0.binary_search(&step).is_ok()
    }
}

/// Analysis defaults shared by the circuit-finding and classification
/// pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Integrated-gradient steps for edge attribution.
    pub m: usize,
    /// Minimal-circuit faithfulness threshold.
    pub faithfulness_threshold: f64,
    /// Initial binary-search upper bound, as a fraction of total edges.
    pub edge_budget_fraction: f64,
    /// Decay factor of the smoothed Jaccard series.
    pub ewma_alpha: f64,
    /// Copy-score / CSPA cutoff for head classification.
    pub classification_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            m: 5,
            faithfulness_threshold: 0.8,
            edge_budget_fraction: 0.05,
            ewma_alpha: 0.5,
            classification_threshold: 0.10,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be >= 1".into()));
        }
        for (name, v) in [
            ("faithfulness_threshold", self.faithfulness_threshold),
            ("edge_budget_fraction", self.edge_budget_fraction),
            ("ewma_alpha", self.ewma_alpha),
            ("classification_threshold", self.classification_threshold),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Top-level run configuration consumed by the CLI `train` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub tasks: Vec<String>,
    pub schedule: Vec<u64>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub train: TrainConfig,
    pub output_dir: String,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.analysis.validate()?;
        CheckpointSchedule::new(self.schedule.clone())?;
        if self.tasks.is_empty() {
            return Err(Error::InvalidConfig("tasks list is empty".into()));
        }
        Ok(())
    }

    /// A ready-to-edit default configuration (printed by `--print-config`).
    pub fn example() -> Self {
        RunConfig {
            model: ModelConfig {
                n_layers: 4,
                n_heads: 4,
                d_model: 64,
                d_mlp: 256,
                vocab_size: crate::vocab::VOCAB_SIZE as u32,
                max_seq_len: 32,
                seed: 0,
            },
            tasks: vec![
                "ioi".into(),
                "greater-than".into(),
                "gendered-pronoun".into(),
                "sva".into(),
            ],
            schedule: CheckpointSchedule::desk_default().0,
            analysis: AnalysisConfig::default(),
            train: TrainConfig::default(),
            output_dir: "runs/default".into(),
            seed: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indivisible_heads() {
        let cfg = ModelConfig {
            n_layers: 1,
            n_heads: 3,
            d_model: 8,
            d_mlp: 16,
            vocab_size: 16,
            max_seq_len: 8,
            seed: 0,
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn desk_schedule_shape() {
        let s = CheckpointSchedule::desk_default();
        assert_eq!(&s.0[..11], &[0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(s.0[11], 1000);
        assert_eq!(s.last_step(), 5000);
        assert!(s.0.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn schedule_must_start_at_zero() {
        assert!(CheckpointSchedule::new(vec![1, 2]).is_err());
        assert!(CheckpointSchedule::new(vec![0, 2, 2]).is_err());
        assert!(CheckpointSchedule::new(vec![0]).is_ok());
    }
}
