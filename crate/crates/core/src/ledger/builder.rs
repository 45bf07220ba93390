//! Helpers that assemble well-formed transactions and blocks against a state.

use crate::docform::{check_doc, DocError, Document, TheorySpec};
use crate::hash::{AssetId, PropId, TheoryId};
use crate::kernel::KernelError;

use super::addr::Addr;
use super::asset::{Asset, Output, Payload};
use super::block::Block;
use super::keys::{Keypair, PubKey};
use super::state::{ChainState, Params};
use super::tx::{Attachment, Tx};
use super::validate::{auto_bounty_prop, expected_doc_outputs, marker_commitment};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("insufficient funds: need {need}, have {have}")]
    InsufficientFunds { need: u64, have: u64 },
    #[error("no marker for this document at the publisher's address")]
    NoMarker,
    #[error("unknown theory {0}")]
    UnknownTheory(TheoryId),
    #[error("{0}")]
    Doc(DocError),
    #[error("{0}")]
    Theory(KernelError),
    #[error("asset {0} is not a bounty")]
    NotABounty(AssetId),
}

/// Live currency at `addr`, in asset-id order.
pub fn coins<'a>(st: &'a ChainState, addr: &Addr) -> Vec<&'a Asset> {
    st.live_at(addr).filter(|a| matches!(a.payload, Payload::Currency { .. })).collect()
}

/// Picks coins of `key` covering `need`; returns the inputs and the change.
/// At least one coin is always taken so every transaction has an input.
pub fn fund(st: &ChainState, key: &Keypair, need: u64) -> Result<(Vec<AssetId>, u64), BuildError> {
    fund_for(st, &key.public(), need)
}

pub fn fund_for(st: &ChainState, pk: &PubKey, need: u64) -> Result<(Vec<AssetId>, u64), BuildError> {
    let addr = Addr::pay_to_key(pk);
    let mut picked = Vec::new();
    let mut have = 0u64;
    for c in coins(st, &addr) {
        if have >= need && !picked.is_empty() {
            break;
        }
        picked.push(c.id);
        have += c.payload.value();
    }
    if have < need || picked.is_empty() {
        return Err(BuildError::InsufficientFunds { need, have });
    }
    Ok((picked, have - need))
}

fn unsigned(pk: PubKey, inputs: Vec<AssetId>, change: u64, mut outputs: Vec<Output>, attachment: Option<Attachment>) -> Tx {
    if change > 0 {
        outputs.push(Output::new(Addr::pay_to_key(&pk), Payload::Currency { amount: change }));
    }
    Tx::new(inputs.into_iter().map(|a| (a, pk)).collect(), outputs, attachment)
}

fn finish(
    key: &Keypair,
    inputs: Vec<AssetId>,
    change: u64,
    outputs: Vec<Output>,
    attachment: Option<Attachment>,
) -> Tx {
    let mut tx = unsigned(key.public(), inputs, change, outputs, attachment);
    tx.sign(&[key]);
    tx
}

/// An unsigned transfer spending coins of `pk`; sign it with [`Tx::sign`].
pub fn transfer_unsigned(st: &ChainState, pk: &PubKey, to: Addr, amount: u64, fee: u64) -> Result<Tx, BuildError> {
    let (inputs, change) = fund_for(st, pk, amount + fee)?;
    Ok(unsigned(*pk, inputs, change, vec![Output::new(to, Payload::Currency { amount })], None))
}

/// An unsigned bounty placement funded by `pk`.
pub fn bounty_unsigned(
    st: &ChainState,
    pk: &PubKey,
    th: &TheoryId,
    prop: &PropId,
    amount: u64,
    fee: u64,
) -> Result<Tx, BuildError> {
    let (inputs, change) = fund_for(st, pk, amount + fee)?;
    Ok(unsigned(*pk, inputs, change, vec![Output::new(Addr::prop(th, prop), Payload::Bounty { amount })], None))
}

pub fn transfer(st: &ChainState, key: &Keypair, to: Addr, amount: u64, fee: u64) -> Result<Tx, BuildError> {
    let (inputs, change) = fund(st, key, amount + fee)?;
    Ok(finish(key, inputs, change, vec![Output::new(to, Payload::Currency { amount })], None))
}

pub fn place_bounty(
    st: &ChainState,
    key: &Keypair,
    th: &TheoryId,
    prop: &PropId,
    amount: u64,
    fee: u64,
) -> Result<Tx, BuildError> {
    let (inputs, change) = fund(st, key, amount + fee)?;
    Ok(finish(key, inputs, change, vec![Output::new(Addr::prop(th, prop), Payload::Bounty { amount })], None))
}

/// Commits to `doc` ahead of publication.
pub fn marker(st: &ChainState, key: &Keypair, doc: &Document, fee: u64) -> Result<Tx, BuildError> {
    let (inputs, change) = fund(st, key, fee)?;
    let commitment = marker_commitment(&doc.to_bytes(), &key.public());
    let out = Output::new(Addr::pay_to_key(&key.public()), Payload::Marker { commitment });
    Ok(finish(key, inputs, change, vec![out], None))
}

pub fn publish_theory(st: &ChainState, key: &Keypair, spec: &TheorySpec, fee: u64) -> Result<Tx, BuildError> {
    let id = spec.id().map_err(BuildError::Theory)?;
    let (inputs, change) = fund(st, key, fee)?;
    let out = Output::new(Addr::theory(&id), Payload::TheoryPub { theory: id });
    Ok(finish(key, inputs, change, vec![out], Some(Attachment::Theory(spec.clone()))))
}

/// Publishes `doc`, consuming the matching marker held by `key`.
pub fn publish_doc(st: &ChainState, key: &Keypair, doc: &Document, fee: u64) -> Result<Tx, BuildError> {
    let sig = st.theories.get(&doc.theory).ok_or(BuildError::UnknownTheory(doc.theory))?;
    let deff = check_doc(sig, doc).map_err(BuildError::Doc)?;
    let publisher = Addr::pay_to_key(&key.public());
    let commitment = marker_commitment(&doc.to_bytes(), &key.public());
    let m = st
        .live_at(&publisher)
        .find(|a| a.payload.commitment() == Some(commitment))
        .ok_or(BuildError::NoMarker)?;
    let (mut inputs, change) = if fee > 0 { fund(st, key, fee)? } else { (Vec::new(), 0) };
    inputs.insert(0, m.id);
    let outputs = expected_doc_outputs(st, doc.theory, doc.id(), &deff, publisher);
    Ok(finish(key, inputs, change, outputs, Some(Attachment::Doc(doc.clone()))))
}

/// Spends bounties whose proposition `key` owns (or has refuted); pays the
/// total minus `fee` to `to`.
pub fn collect_bounty(
    st: &ChainState,
    key: &Keypair,
    bounties: &[AssetId],
    to: Addr,
    fee: u64,
) -> Result<Tx, BuildError> {
    let mut total = 0u64;
    for id in bounties {
        match st.assets.get(id).map(|a| &a.payload) {
            Some(Payload::Bounty { amount }) => total += amount,
            _ => return Err(BuildError::NotABounty(*id)),
        }
    }
    if total <= fee {
        return Err(BuildError::InsufficientFunds { need: fee + 1, have: total });
    }
    let outs = vec![Output::new(to, Payload::Currency { amount: total - fee })];
    Ok(finish(key, bounties.to_vec(), 0, outs, None))
}

/// The subsidy transaction for the block after `st`'s tip.
pub fn coinbase(params: &Params, st: &ChainState, pay_to: Addr) -> Tx {
    let height = st.height + 1;
    let mut outputs = Vec::new();
    let mut rest = params.subsidy;
    if params.has_auto_bounty(height) {
        let (_, _, addr) = auto_bounty_prop(params, st, &st.tip);
        outputs.push(Output::new(addr, Payload::Bounty { amount: params.auto_bounty_amount }));
        rest -= params.auto_bounty_amount;
    }
    if rest > 0 {
        outputs.push(Output::new(pay_to, Payload::Currency { amount: rest }));
    }
    Tx { coinbase: Some(height), inputs: Vec::new(), outputs, attachment: None }
}

/// Builds and signs the next block on top of `st` with the given transactions.
pub fn next_block(params: &Params, st: &ChainState, key: &Keypair, timestamp: u64, txs: Vec<Tx>) -> Block {
    let mut body = vec![coinbase(params, st, Addr::pay_to_key(&key.public()))];
    body.extend(txs);
    Block::assemble(st.tip, st.height + 1, timestamp, key, body)
}
