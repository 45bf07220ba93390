//! Assets, transactions, blocks, consensus validation and the block tree.

mod addr;
mod asset;
mod block;
pub mod builder;
mod classify;
mod genesis;
mod keys;
pub mod randprop;
mod state;
mod store;
mod tree;
mod tx;
mod validate;

pub use addr::{Addr, KEY_ADDR, PROP_ADDR};
pub use asset::{read_addr, Asset, Output, Payload, BAR};
pub use block::{merkle_root, Block, Header};
pub use classify::{class_counts, classify_block, classify_graph, graph_dot, GraphEntry, GraphNode, NodeClass};
pub use genesis::{builtin_theories, Genesis, GenesisConfig};
pub use keys::{verify, Keypair, PubKey, Sig};
pub use randprop::gen_random_prop;
pub use state::{ChainState, Params};
pub use store::Store;
pub use tree::{Accept, BlockStatus, BlockTree, ChainEvent, TreeNode, ORPHAN_CAPACITY};
pub use tx::{Attachment, Input, Tx};
pub use validate::{
    auto_bounty_prop, check_header, expected_doc_outputs, marker_commitment, validate_block, validate_tx,
    AutoProp, BlockEffects, BlockError, Collection, DocRecord, TxEffect, TxError,
};

#[cfg(test)]
mod tests;
