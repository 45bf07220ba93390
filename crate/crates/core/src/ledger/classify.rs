use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::hash::BlockHash;

use super::block::Block;
use super::tx::Attachment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeClass {
    TheoryBlock,
    ProofBlock,
    TxOrBountyBlock,
    Missing,
    Invalid,
    Plain,
}

impl NodeClass {
    pub fn color(self) -> &'static str {
        match self {
            NodeClass::TheoryBlock => "green",
            NodeClass::ProofBlock => "blue",
            NodeClass::TxOrBountyBlock => "pink",
            NodeClass::Missing => "yellow",
            NodeClass::Invalid => "red",
            NodeClass::Plain => "gray",
        }
    }

    pub const ALL: [NodeClass; 6] = [
        NodeClass::TheoryBlock,
        NodeClass::ProofBlock,
        NodeClass::TxOrBountyBlock,
        NodeClass::Missing,
        NodeClass::Invalid,
        NodeClass::Plain,
    ];
}

/// Class by content alone. The coinbase (including any auto-bounty) does
/// not count as a transaction.
pub fn classify_block(b: &Block) -> NodeClass {
    let txs = b.txs.iter().filter(|t| t.coinbase.is_none());
    let mut class = NodeClass::Plain;
    for tx in txs {
        match &tx.attachment {
            Some(Attachment::Theory(_)) => return NodeClass::TheoryBlock,
            Some(Attachment::Doc(_)) => class = NodeClass::ProofBlock,
            None if class == NodeClass::Plain => class = NodeClass::TxOrBountyBlock,
            None => {}
        }
    }
    class
}

/// One block known to a node, as fed to [`classify_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEntry {
    pub hash: BlockHash,
    pub parent: BlockHash,
    pub height: u64,
    pub class: NodeClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: BlockHash,
    pub parent: Option<BlockHash>,
    pub height: u64,
    pub class: NodeClass,
    pub color: String,
}

/// Every entry keeps its class; each referenced parent that is not itself an
/// entry becomes one `Missing` placeholder. Ordered by (height, hash).
pub fn classify_graph(entries: &[GraphEntry]) -> Vec<GraphNode> {
    let known: HashSet<BlockHash> = entries.iter().map(|e| e.hash).collect();
    let mut missing: BTreeMap<BlockHash, u64> = BTreeMap::new();
    for e in entries {
        if e.height > 0 && !known.contains(&e.parent) {
            let h = missing.entry(e.parent).or_insert(e.height - 1);
            *h = (*h).min(e.height - 1);
        }
    }
    let mut nodes: Vec<GraphNode> = entries
        .iter()
        .map(|e| GraphNode {
            id: e.hash,
            parent: (e.height > 0).then_some(e.parent),
            height: e.height,
            class: e.class,
            color: e.class.color().into(),
        })
        .chain(missing.into_iter().map(|(id, height)| GraphNode {
            id,
            parent: None,
            height,
            class: NodeClass::Missing,
            color: NodeClass::Missing.color().into(),
        }))
        .collect();
    nodes.sort_by_key(|a| (a.height, a.id));
    nodes
}

/// Counts per class, in the fixed order of [`NodeClass::ALL`].
pub fn class_counts(nodes: &[GraphNode]) -> BTreeMap<NodeClass, usize> {
    let mut m: BTreeMap<NodeClass, usize> = NodeClass::ALL.iter().map(|c| (*c, 0)).collect();
    for n in nodes {
        *m.get_mut(&n.class).unwrap() += 1;
    }
    m
}

pub fn graph_dot(nodes: &[GraphNode]) -> String {
    let mut out = String::from("digraph chain {\n  rankdir=LR;\n  node [shape=box, style=filled];\n");
    for n in nodes {
        let id = n.id.to_hex();
        writeln!(
            out,
            "  \"{id}\" [label=\"{}:{}\", fillcolor={}, class=\"{}\"];",
            n.height,
            &id[..8],
            n.color,
            serde_json::to_value(n.class).unwrap().as_str().unwrap()
        )
        .unwrap();
    }
    for n in nodes {
        if let Some(p) = n.parent {
            writeln!(out, "  \"{}\" -> \"{}\";", p.to_hex(), n.id.to_hex()).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
