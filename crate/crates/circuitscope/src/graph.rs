//! The factorized-residual-stream computational graph.
//!
//! Nodes are the components that write to (or read from) the residual
//! stream: the embedding (`Input`), every attention head, every MLP, and the
//! unembedding (`Logits`). An edge `(u, v, channel)` is the additive
//! contribution of `u`'s output to the input that `v` reads on `channel`.
//! Attention heads read three channels (Q, K, V); MLPs and the logits read
//! one each.
//!
//! Blocks are sequential: heads in layer `l` read everything strictly before
//! layer `l`; the MLP in layer `l` additionally reads that layer's heads.
//!
//! Edge count for `L` layers and `H` heads per layer:
//!
//! ```text
//! heads:  sum_l 3 H (1 + l H + l)
//! mlps:   sum_l (1 + (l+1) H + l)
//! logits: 1 + L H + L
//! ```

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};

/// A component of the model, identified structurally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeId {
    Input,
    Attn { layer: u32, head: u32 },
    Mlp { layer: u32 },
    Logits,
}

impl NodeId {
    /// Sort key giving the topological order of the residual stream:
    /// Input, then per layer all heads followed by the MLP, then Logits.
    fn sort_key(&self) -> (i64, u8, u32) {
        match *self {
            NodeId::Input => (-1, 0, 0),
            NodeId::Attn { layer, head } => (layer as i64, 0, head),
            NodeId::Mlp { layer } => (layer as i64, 1, 0),
            NodeId::Logits => (i64::MAX, 0, 0),
        }
    }

    pub fn is_attn(&self) -> bool {
        matches!(self, NodeId::Attn { .. })
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeId::Input => write!(f, "input"),
            NodeId::Attn { layer, head } => write!(f, "a{layer}.h{head}"),
            NodeId::Mlp { layer } => write!(f, "m{layer}"),
            NodeId::Logits => write!(f, "logits"),
        }
    }
}

impl std::str::FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "input" {
            return Ok(NodeId::Input);
        }
        if s == "logits" {
            return Ok(NodeId::Logits);
        }
        if let Some(rest) = s.strip_prefix('m') {
            let layer = rest
                .parse()
                .map_err(|_| Error::SchemaViolation(format!("bad node id {s:?}")))?;
            return Ok(NodeId::Mlp { layer });
        }
        if let Some(rest) = s.strip_prefix('a') {
            if let Some((l, h)) = rest.split_once(".h") {
                let layer =
                    l.parse().map_err(|_| Error::SchemaViolation(format!("bad node id {s:?}")))?;
                let head =
                    h.parse().map_err(|_| Error::SchemaViolation(format!("bad node id {s:?}")))?;
                return Ok(NodeId::Attn { layer, head });
            }
        }
        Err(Error::SchemaViolation(format!("bad node id {s:?}")))
    }
}

/// The receiving channel of an edge's destination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Channel {
    Q,
    K,
    V,
    MlpIn,
    LogitsIn,
}

impl Channel {
    pub fn valid_for(&self, dst: &NodeId) -> bool {
        match self {
            Channel::Q | Channel::K | Channel::V => matches!(dst, NodeId::Attn { .. }),
            Channel::MlpIn => matches!(dst, NodeId::Mlp { .. }),
            Channel::LogitsIn => matches!(dst, NodeId::Logits),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Channel::Q => "q",
            Channel::K => "k",
            Channel::V => "v",
            Channel::MlpIn => "mlp_in",
            Channel::LogitsIn => "logits_in",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Channel::Q),
            "k" => Ok(Channel::K),
            "v" => Ok(Channel::V),
            "mlp_in" => Ok(Channel::MlpIn),
            "logits_in" => Ok(Channel::LogitsIn),
            _ => Err(Error::SchemaViolation(format!("bad channel {s:?}"))),
        }
    }
}

/// One edge of the computational graph. Ordering is lexicographic
/// (src, dst, channel) over the topological node order; this is the
/// documented tie-break order for greedy selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub src: NodeId,
    pub dst: NodeId,
    pub channel: Channel,
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}:{}", self.src, self.dst, self.channel)
    }
}

/// The complete edge graph implied by a model configuration.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

/// All graph nodes in topological order.
pub fn node_order(config: &ModelConfig) -> Vec<NodeId> {
    let mut nodes = vec![NodeId::Input];
    for layer in 0..config.n_layers {
        for head in 0..config.n_heads {
            nodes.push(NodeId::Attn { layer, head });
        }
        nodes.push(NodeId::Mlp { layer });
    }
    nodes.push(NodeId::Logits);
    nodes
}

/// Writer nodes visible to `dst`, in topological order.
pub fn upstream_sources(config: &ModelConfig, dst: &NodeId) -> Vec<NodeId> {
    let mut sources = vec![NodeId::Input];
    let (attn_below, mlp_below) = match *dst {
        NodeId::Input => return Vec::new(),
        NodeId::Attn { layer, .. } => (layer, layer),
        NodeId::Mlp { layer } => (layer + 1, layer),
        NodeId::Logits => (config.n_layers, config.n_layers),
    };
    for layer in 0..config.n_layers {
        for head in 0..config.n_heads {
            if layer < attn_below {
                sources.push(NodeId::Attn { layer, head });
            }
        }
        if layer < mlp_below {
            sources.push(NodeId::Mlp { layer });
        }
    }
    sources.sort();
    sources
}

/// Receiving channels of a node.
pub fn channels_of(node: &NodeId) -> &'static [Channel] {
    match node {
        NodeId::Input => &[],
        NodeId::Attn { .. } => &[Channel::Q, Channel::K, Channel::V],
        NodeId::Mlp { .. } => &[Channel::MlpIn],
        NodeId::Logits => &[Channel::LogitsIn],
    }
}

/// Enumerate the complete, deduplicated edge set for a configuration.
pub fn enumerate_edges(config: &ModelConfig) -> Result<EdgeGraph> {
    config.validate()?;
    let nodes = node_order(config);
    let mut edges = Vec::with_capacity(expected_edge_count(config));
    for dst in &nodes {
        let sources = upstream_sources(config, dst);
        for channel in channels_of(dst) {
            for src in &sources {
                edges.push(EdgeId { src: *src, dst: *dst, channel: *channel });
            }
        }
    }
    edges.sort();
    edges.dedup();
    debug_assert_eq!(edges.len(), expected_edge_count(config));
    Ok(EdgeGraph { nodes, edges })
}

/// Closed-form edge count (see module docs for the derivation).
pub fn expected_edge_count(config: &ModelConfig) -> usize {
    let l = config.n_layers as usize;
    let h = config.n_heads as usize;
    let mut total = 0;
    for layer in 0..l {
        total += 3 * h * (1 + layer * h + layer); // heads at this layer
        total += 1 + (layer + 1) * h + layer; // the MLP at this layer
    }
    total + 1 + l * h + l // logits
}

impl EdgeGraph {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn total_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, edge: &EdgeId) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    /// All attention-head nodes, in order.
    pub fn heads(&self) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| n.is_attn()).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_layers: u32, n_heads: u32) -> ModelConfig {
        ModelConfig {
            n_layers,
            n_heads,
            d_model: 8 * n_heads,
            d_mlp: 16,
            vocab_size: 16,
            max_seq_len: 8,
            seed: 0,
        }
    }

    #[test]
    fn one_layer_one_head_has_eight_edges() {
        // Hand enumeration: input->{q,k,v,mlp_in,logits_in} (5),
        // head->{mlp_in,logits_in} (2), mlp->logits_in (1).
        let g = enumerate_edges(&cfg(1, 1)).unwrap();
        assert_eq!(g.total_edges(), 8);
        assert_eq!(expected_edge_count(&cfg(1, 1)), 8);
        let head = NodeId::Attn { layer: 0, head: 0 };
        let mlp = NodeId::Mlp { layer: 0 };
        for e in [
            EdgeId { src: NodeId::Input, dst: head, channel: Channel::Q },
            EdgeId { src: NodeId::Input, dst: head, channel: Channel::K },
            EdgeId { src: NodeId::Input, dst: head, channel: Channel::V },
            EdgeId { src: NodeId::Input, dst: mlp, channel: Channel::MlpIn },
            EdgeId { src: NodeId::Input, dst: NodeId::Logits, channel: Channel::LogitsIn },
            EdgeId { src: head, dst: mlp, channel: Channel::MlpIn },
            EdgeId { src: head, dst: NodeId::Logits, channel: Channel::LogitsIn },
            EdgeId { src: mlp, dst: NodeId::Logits, channel: Channel::LogitsIn },
        ] {
            assert!(g.contains(&e), "missing edge {e}");
        }
    }

    #[test]
    fn edge_count_matches_formula_and_grows_with_depth() {
        let mut prev = 0;
        for layers in 1..=5 {
            let g = enumerate_edges(&cfg(layers, 2)).unwrap();
            assert_eq!(g.total_edges(), expected_edge_count(&cfg(layers, 2)));
            assert!(g.total_edges() > prev, "edge count must grow with n_layers");
            prev = g.total_edges();
        }
    }

    #[test]
    fn no_edges_into_input_or_out_of_logits() {
        let g = enumerate_edges(&cfg(3, 2)).unwrap();
        for e in g.edges() {
            assert_ne!(e.dst, NodeId::Input);
            assert_ne!(e.src, NodeId::Logits);
            assert!(e.channel.valid_for(&e.dst));
            assert!(e.src < e.dst, "edges must respect topological order");
        }
    }

    #[test]
    fn node_order_is_topological() {
        let nodes = node_order(&cfg(2, 2));
        let mut sorted = nodes.clone();
        sorted.sort();
        assert_eq!(nodes, sorted);
        assert_eq!(nodes[0], NodeId::Input);
        assert_eq!(*nodes.last().unwrap(), NodeId::Logits);
    }

    #[test]
    fn node_id_roundtrips_through_display() {
        for n in node_order(&cfg(2, 3)) {
            let s = n.to_string();
            let back: NodeId = s.parse().unwrap();
            assert_eq!(n, back);
        }
    }
}
