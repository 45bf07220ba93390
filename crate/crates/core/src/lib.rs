//! A desk-scale blockchain for formal mathematics: an HOL proof kernel,
//! a document format, a UTXO-style ledger with proposition bounties, an
//! explorer index, an HTTP API and a deterministic network simulator.

pub mod hash;
pub mod docform;
pub mod kernel;
pub mod ledger;
pub mod indexer;
pub mod node;
pub mod api;
pub mod simnet;
