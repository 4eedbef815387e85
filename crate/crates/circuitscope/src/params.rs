//! Flat parameter store with a declared, ordered layout.
//!
//! Parameters live in one `Vec<f64>` in the order below; the same walk
//! produces the layout table serialized into checkpoint headers. Offsets are
//! in elements, matrices are row-major.
//!
//! ```text
//! tok_embed   (vocab, d_model)
//! pos_embed   (max_seq_len, d_model)
//! per layer l:
//!   l{l}.ln1.g / l{l}.ln1.b          (1, d_model) each
//!   per head h:
//!     l{l}.h{h}.w_q  (d_head, d_model)   l{l}.h{h}.b_q  (1, d_head)
//!     l{l}.h{h}.w_k  (d_head, d_model)   l{l}.h{h}.b_k  (1, d_head)
//!     l{l}.h{h}.w_v  (d_head, d_model)   l{l}.h{h}.b_v  (1, d_head)
//!     l{l}.h{h}.w_o  (d_model, d_head)
//!   l{l}.ln2.g / l{l}.ln2.b          (1, d_model) each
//!   l{l}.mlp.w_in  (d_mlp, d_model)  l{l}.mlp.b_in  (1, d_mlp)
//!   l{l}.mlp.w_out (d_model, d_mlp)  l{l}.mlp.b_out (1, d_model)
//! ln_f.g / ln_f.b                    (1, d_model) each
//! unembed     (vocab, d_model)
//! ```
//!
//! Attention output projections carry no bias: a per-layer output bias would
//! be a stream contribution belonging to no node, breaking residual
//! additivity at edge granularity.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;

/// One named block of the flat parameter vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub name: String,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Clone, Debug)]
pub struct HeadSlots {
    pub w_q: Range<usize>,
    pub b_q: Range<usize>,
    pub w_k: Range<usize>,
    pub b_k: Range<usize>,
    pub w_v: Range<usize>,
    pub b_v: Range<usize>,
    pub w_o: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct LayerSlots {
    pub ln1_g: Range<usize>,
    pub ln1_b: Range<usize>,
    pub heads: Vec<HeadSlots>,
    pub ln2_g: Range<usize>,
    pub ln2_b: Range<usize>,
    pub w_in: Range<usize>,
    pub b_in: Range<usize>,
    pub w_out: Range<usize>,
    pub b_out: Range<usize>,
}

/// Resolved element ranges for every parameter block.
#[derive(Clone, Debug)]
pub struct ParamIndex {
    pub tok_embed: Range<usize>,
    pub pos_embed: Range<usize>,
    pub layers: Vec<LayerSlots>,
    pub ln_f_g: Range<usize>,
    pub ln_f_b: Range<usize>,
    pub unembed: Range<usize>,
    pub total: usize,
}

struct LayoutWalk {
    entries: Vec<LayoutEntry>,
    cursor: usize,
    /// Skip name formatting when the caller only needs ranges.
    with_names: bool,
}

impl LayoutWalk {
    fn new(with_names: bool) -> Self {
        LayoutWalk { entries: Vec::new(), cursor: 0, with_names }
    }

    fn block(&mut self, name: impl FnOnce() -> String, rows: usize, cols: usize) -> Range<usize> {
        let start = self.cursor;
        self.cursor += rows * cols;
        if self.with_names {
            self.entries.push(LayoutEntry { name: name(), offset: start, rows, cols });
        }
        start..self.cursor
    }
}

impl ParamIndex {
    pub fn new(config: &ModelConfig) -> ParamIndex {
        Self::build(config, false).0
    }

    /// The serializable layout table (same walk as the index).
    pub fn layout_table(config: &ModelConfig) -> Vec<LayoutEntry> {
        Self::build(config, true).1
    }

    fn build(config: &ModelConfig, with_names: bool) -> (ParamIndex, Vec<LayoutEntry>) {
        let d = config.d_model as usize;
        let dh = config.d_head();
        let d_mlp = config.d_mlp as usize;
        let vocab = config.vocab_size as usize;
        let max_seq = config.max_seq_len as usize;

        let mut w = LayoutWalk::new(with_names);
        let tok_embed = w.block(|| "tok_embed".into(), vocab, d);
        let pos_embed = w.block(|| "pos_embed".into(), max_seq, d);
        let mut layers = Vec::with_capacity(config.n_layers as usize);
        for l in 0..config.n_layers {
            let ln1_g = w.block(|| format!("l{l}.ln1.g"), 1, d);
            let ln1_b = w.block(|| format!("l{l}.ln1.b"), 1, d);
            let mut heads = Vec::with_capacity(config.n_heads as usize);
            for h in 0..config.n_heads {
                heads.push(HeadSlots {
                    w_q: w.block(|| format!("l{l}.h{h}.w_q"), dh, d),
                    b_q: w.block(|| format!("l{l}.h{h}.b_q"), 1, dh),
                    w_k: w.block(|| format!("l{l}.h{h}.w_k"), dh, d),
                    b_k: w.block(|| format!("l{l}.h{h}.b_k"), 1, dh),
                    w_v: w.block(|| format!("l{l}.h{h}.w_v"), dh, d),
                    b_v: w.block(|| format!("l{l}.h{h}.b_v"), 1, dh),
                    w_o: w.block(|| format!("l{l}.h{h}.w_o"), d, dh),
                });
            }
            let ln2_g = w.block(|| format!("l{l}.ln2.g"), 1, d);
            let ln2_b = w.block(|| format!("l{l}.ln2.b"), 1, d);
            let w_in = w.block(|| format!("l{l}.mlp.w_in"), d_mlp, d);
            let b_in = w.block(|| format!("l{l}.mlp.b_in"), 1, d_mlp);
            let w_out = w.block(|| format!("l{l}.mlp.w_out"), d, d_mlp);
            let b_out = w.block(|| format!("l{l}.mlp.b_out"), 1, d);
            layers.push(LayerSlots {
                ln1_g,
                ln1_b,
                heads,
                ln2_g,
                ln2_b,
                w_in,
                b_in,
                w_out,
                b_out,
            });
        }
        let ln_f_g = w.block("ln_f.g".into(), 1, d);
        let ln_f_b = w.block("ln_f.b".into(), 1, d);
        let unembed = w.block("unembed".into(), vocab, d);

        let index = ParamIndex {
            tok_embed,
            pos_embed,
            layers,
            ln_f_g,
            ln_f_b,
            unembed,
            total: w.cursor,
        };
        (index, w.entries)
    }
}

/// Number of parameters implied by a configuration.
pub fn param_count(config: &ModelConfig) -> usize {
    ParamIndex::new(config).total
}

/// Deterministic initialization from `config.seed`.
///
/// Weight matrices draw from a normal with std 1/sqrt(fan_in); output
/// projections (w_o, w_out) additionally shrink by 1/sqrt(2 * n_layers).
/// Embeddings use std 0.1, biases start at zero, norms at gamma=1 / beta=0.
pub fn init_params(config: &ModelConfig) -> Vec<f64> {
    let idx = ParamIndex::new(config);
    let mut params = vec![0.0f64; idx.total];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let d = config.d_model as usize;
    let dh = config.d_head();
    let d_mlp = config.d_mlp as usize;
    let depth_scale = 1.0 / (2.0 * config.n_layers as f64).sqrt();

    let mut fill = |params: &mut [f64], range: Range<usize>, std: f64| {
        let dist = Normal::new(0.0, std).expect("std is positive");
        for v in &mut params[range] {
            *v = dist.sample(&mut rng);
        }
    };

    fill(&mut params, idx.tok_embed.clone(), 0.1);
    fill(&mut params, idx.pos_embed.clone(), 0.1);
    for layer in &idx.layers {
        params[layer.ln1_g.clone()].fill(1.0);
        for head in &layer.heads {
            fill(&mut params, head.w_q.clone(), 1.0 / (d as f64).sqrt());
            fill(&mut params, head.w_k.clone(), 1.0 / (d as f64).sqrt());
            fill(&mut params, head.w_v.clone(), 1.0 / (d as f64).sqrt());
            fill(&mut params, head.w_o.clone(), depth_scale / (dh as f64).sqrt());
        }
        params[layer.ln2_g.clone()].fill(1.0);
        fill(&mut params, layer.w_in.clone(), 1.0 / (d as f64).sqrt());
        fill(&mut params, layer.w_out.clone(), depth_scale / (d_mlp as f64).sqrt());
    }
    params[idx.ln_f_g.clone()].fill(1.0);
    fill(&mut params, idx.unembed.clone(), 1.0 / (d as f64).sqrt());
    params
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_count_matches_hand_formula() {
        // Closed form computed independently from the layout table in the
        // module docs.
        let cfg = ModelConfig {
            n_layers: 2,
            n_heads: 4,
            d_model: 64,
            d_mlp: 256,
            vocab_size: 512,
            max_seq_len: 32,
            seed: 0,
        };
        let (l, h, d, dh, dm, v, s) = (2usize, 4usize, 64usize, 16usize, 256usize, 512usize, 32usize);
        let per_head = 3 * (dh * d + dh) + d * dh;
        let per_layer = 2 * d + h * per_head + 2 * d + dm * d + dm + d * dm + d;
        let expected = v * d + s * d + l * per_layer + 2 * d + v * d;
        assert_eq!(param_count(&cfg), expected);
        assert_eq!(init_params(&cfg).len(), expected);
    }

    #[test]
    fn same_seed_same_params() {
        let cfg = ModelConfig {
            n_layers: 1,
            n_heads: 2,
            d_model: 16,
            d_mlp: 32,
            vocab_size: 32,
            max_seq_len: 8,
            seed: 1234,
        };
        assert_eq!(init_params(&cfg), init_params(&cfg));
        let other = ModelConfig { seed: 1235, ..cfg };
        assert_ne!(init_params(&cfg), init_params(&other));
    }

    #[test]
    fn layout_table_is_contiguous() {
        let cfg = ModelConfig {
            n_layers: 3,
            n_heads: 2,
            d_model: 8,
            d_mlp: 16,
            vocab_size: 16,
            max_seq_len: 4,
            seed: 0,
        };
        let table = ParamIndex::layout_table(&cfg);
        let mut cursor = 0;
        for entry in &table {
            assert_eq!(entry.offset, cursor, "gap before {}", entry.name);
            cursor += entry.rows * entry.cols;
        }
        assert_eq!(cursor, param_count(&cfg));
    }
}
