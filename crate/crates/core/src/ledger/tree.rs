use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::hash::BlockHash;

use super::block::Block;
use super::classify::{classify_block, GraphEntry, NodeClass};
use super::genesis::Genesis;
use super::state::{ChainState, Params};
use super::validate::{validate_block, BlockEffects, BlockError};

pub const ORPHAN_CAPACITY: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BlockStatus {
    Valid,
    Invalid { code: String, reason: String },
    Orphan,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub block: Arc<Block>,
    pub status: BlockStatus,
    pub state: Option<Arc<ChainState>>,
    pub effects: Option<Arc<BlockEffects>>,
}

impl TreeNode {
    pub fn class(&self) -> NodeClass {
        match self.status {
            BlockStatus::Invalid { .. } => NodeClass::Invalid,
            _ => classify_block(&self.block),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ChainEvent {
    Connect { block: Arc<Block>, effects: Arc<BlockEffects> },
    Disconnect { block: Arc<Block>, effects: Arc<BlockEffects> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Accept {
    Stored,
    Duplicate,
    Orphaned,
    Invalid(BlockError),
}

/// All blocks a node has seen, the best valid tip, and the tip state kept
/// current by disconnecting and connecting blocks.
#[derive(Clone, Debug)]
pub struct BlockTree {
    pub params: Params,
    pub genesis: BlockHash,
    nodes: HashMap<BlockHash, TreeNode>,
    orphans: VecDeque<Arc<Block>>,
    tip: BlockHash,
    state: ChainState,
    events: Vec<ChainEvent>,
}

impl BlockTree {
    pub fn new(g: &Genesis) -> BlockTree {
        let hash = g.block.hash();
        let block = Arc::new(g.block.clone());
        let effects = Arc::new(g.effects.clone());
        let node = TreeNode {
            block: block.clone(),
            status: BlockStatus::Valid,
            state: Some(Arc::new(g.state.clone())),
            effects: Some(effects.clone()),
        };
        BlockTree {
            params: g.params.clone(),
            genesis: hash,
            nodes: HashMap::from([(hash, node)]),
            orphans: VecDeque::new(),
            tip: hash,
            state: g.state.clone(),
            events: vec![ChainEvent::Connect { block, effects }],
        }
    }

    pub fn tip(&self) -> BlockHash {
        self.tip
    }

    pub fn tip_state(&self) -> &ChainState {
        &self.state
    }

    pub fn height(&self) -> u64 {
        self.state.height
    }

    pub fn get(&self, h: &BlockHash) -> Option<&TreeNode> {
        self.nodes.get(h)
    }

    pub fn contains(&self, h: &BlockHash) -> bool {
        self.nodes.contains_key(h) || self.orphans.iter().any(|b| b.hash() == *h)
    }

    pub fn orphans(&self) -> impl Iterator<Item = &Arc<Block>> {
        self.orphans.iter()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.values()
    }

    /// Events since the last call, oldest first.
    pub fn take_events(&mut self) -> Vec<ChainEvent> {
        std::mem::take(&mut self.events)
    }

    /// Hashes from genesis to the tip.
    pub fn main_chain(&self) -> Vec<BlockHash> {
        self.ancestry(self.tip)
    }

    fn ancestry(&self, mut h: BlockHash) -> Vec<BlockHash> {
        let mut out = vec![h];
        while h != self.genesis {
            h = self.nodes[&h].block.parent();
            out.push(h);
        }
        out.reverse();
        out
    }

    pub fn insert(&mut self, block: Block) -> Accept {
        let hash = block.hash();
        if self.contains(&hash) {
            return Accept::Duplicate;
        }
        if !self.nodes.contains_key(&block.parent()) {
            if self.orphans.len() == ORPHAN_CAPACITY {
                self.orphans.pop_front();
            }
            self.orphans.push_back(Arc::new(block));
            return Accept::Orphaned;
        }
        let result = self.attach(Arc::new(block));
        // adopt parked children, breadth first
        let mut work = vec![hash];
        while let Some(p) = work.pop() {
            let (ready, rest): (Vec<_>, Vec<_>) = self.orphans.drain(..).partition(|b| b.parent() == p);
            self.orphans = rest.into();
            for b in ready {
                work.push(b.hash());
                self.attach(b);
            }
        }
        result
    }

    fn attach(&mut self, block: Arc<Block>) -> Accept {
        let hash = block.hash();
        let parent = &self.nodes[&block.parent()];
        let outcome = match (&parent.status, &parent.state) {
            (BlockStatus::Valid, Some(st)) => validate_block(st, &self.params, &block),
            _ => Err(BlockError::InvalidAncestor(block.parent())),
        };
        let (node, accept) = match outcome {
            Ok((st, eff)) => (
                TreeNode {
                    block,
                    status: BlockStatus::Valid,
                    state: Some(Arc::new(st)),
                    effects: Some(Arc::new(eff)),
                },
                Accept::Stored,
            ),
            Err(e) => (
                TreeNode {
                    block,
                    status: BlockStatus::Invalid { code: e.code().into(), reason: e.label() },
                    state: None,
                    effects: None,
                },
                Accept::Invalid(e),
            ),
        };
        let better = node.status == BlockStatus::Valid && self.beats_tip(&node.block);
        self.nodes.insert(hash, node);
        if better {
            self.switch_tip(hash);
        }
        accept
    }

    fn beats_tip(&self, b: &Block) -> bool {
        let h = b.height();
        h > self.state.height || (h == self.state.height && b.hash() < self.tip)
    }

    fn switch_tip(&mut self, new_tip: BlockHash) {
        let old: HashSet<BlockHash> = self.ancestry(self.tip).into_iter().collect();
        let new_path = self.ancestry(new_tip);
        let fork = new_path.iter().rposition(|h| old.contains(h)).expect("chains share genesis");
        let fork_hash = new_path[fork];
        while self.tip != fork_hash {
            let n = &self.nodes[&self.tip];
            let eff = n.effects.clone().expect("valid block");
            self.state.disconnect(&eff);
            self.events.push(ChainEvent::Disconnect { block: n.block.clone(), effects: eff });
            self.tip = self.state.tip;
        }
        for h in &new_path[fork + 1..] {
            let n = &self.nodes[h];
            let eff = n.effects.clone().expect("valid block");
            self.state.connect(&eff);
            self.events.push(ChainEvent::Connect { block: n.block.clone(), effects: eff });
        }
        self.tip = new_tip;
    }

    /// Every stored block and parked orphan, classified.
    pub fn graph_entries(&self) -> Vec<GraphEntry> {
        let mut v: Vec<GraphEntry> = self
            .nodes
            .values()
            .map(|n| GraphEntry {
                hash: n.block.hash(),
                parent: n.block.parent(),
                height: n.block.height(),
                class: n.class(),
            })
            .collect();
        v.extend(self.orphans.iter().map(|b| GraphEntry {
            hash: b.hash(),
            parent: b.parent(),
            height: b.height(),
            class: classify_block(b),
        }));
        v
    }

    pub fn status(&self, h: &BlockHash) -> Option<BlockStatus> {
        if let Some(n) = self.nodes.get(h) {
            return Some(n.status.clone());
        }
        self.orphans.iter().any(|b| b.hash() == *h).then_some(BlockStatus::Orphan)
    }

    pub fn orphan(&self, h: &BlockHash) -> Option<&Arc<Block>> {
        self.orphans.iter().find(|b| b.hash() == *h)
    }
}
