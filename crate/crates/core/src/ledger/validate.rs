use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::docform::{check_doc, DocEffect, DocError, NewConj, NewDef, NewThm, TheorySpec};
use crate::hash::{sha256_concat, AssetId, BlockHash, DocId, Hash32, ObjId, PropId, TheoryId, TxId};
use crate::kernel::{prop_id, Definition, KernelError, Term};

use super::addr::Addr;
use super::asset::{Asset, Output, Payload};
use super::block::{merkle_root, Block};
use super::keys::{verify, PubKey};
use super::randprop::gen_random_prop;
use super::state::{ChainState, Params};
use super::tx::{Attachment, Tx};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TxError {
    #[error("input {0} does not exist")]
    MissingInput(AssetId),
    #[error("input {0} is already spent")]
    DoubleSpend(AssetId),
    #[error("bad signature on input {0}")]
    BadSignature(usize),
    #[error("outputs exceed inputs by {0}")]
    ValueCreated(u64),
    #[error("document publication needs exactly one marker input, found {0}")]
    MarkerMissing(usize),
    #[error("marker born at {born} is not mature at height {height}")]
    MarkerImmature { born: u64, height: u64 },
    #[error("marker commitment does not match the document and publisher")]
    CommitmentMismatch,
    #[error("document check failed: {0}")]
    DocCheckFailed(DocError),
    #[error("theory check failed: {0}")]
    TheoryCheckFailed(KernelError),
    #[error("unknown theory {0}")]
    UnknownTheory(TheoryId),
    #[error("theory {0} is already published")]
    AlreadyPublished(TheoryId),
    #[error("ownership or publication outputs do not match the attachment")]
    OwnershipOutputsWrong,
    #[error("bounty input {0} has no matching ownership held by the signer")]
    BountyNotRedeemable(usize),
    #[error("input {0} is an ownership or publication asset and cannot be spent")]
    Unspendable(usize),
    #[error("output {index} is malformed: {reason}")]
    BadOutput { index: usize, reason: String },
    #[error("coinbase transaction outside the first block position")]
    UnexpectedCoinbase,
    #[error("transaction has no inputs")]
    NoInputs,
}

impl TxError {
    pub fn code(&self) -> &'static str {
        match self {
            TxError::MissingInput(_) => "MissingInput",
            TxError::DoubleSpend(_) => "DoubleSpend",
            TxError::BadSignature(_) => "BadSignature",
            TxError::ValueCreated(_) => "ValueCreated",
            TxError::MarkerMissing(_) => "MarkerMissing",
            TxError::MarkerImmature { .. } => "MarkerImmature",
            TxError::CommitmentMismatch => "CommitmentMismatch",
            TxError::DocCheckFailed(_) => "DocCheckFailed",
            TxError::TheoryCheckFailed(_) => "TheoryCheckFailed",
            TxError::UnknownTheory(_) => "UnknownTheory",
            TxError::AlreadyPublished(_) => "AlreadyPublished",
            TxError::OwnershipOutputsWrong => "OwnershipOutputsWrong",
            TxError::BountyNotRedeemable(_) => "BountyNotRedeemable",
            TxError::Unspendable(_) => "Unspendable",
            TxError::BadOutput { .. } => "BadOutput",
            TxError::UnexpectedCoinbase => "UnexpectedCoinbase",
            TxError::NoInputs => "NoInputs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("parent {0} is unknown")]
    UnknownParent(BlockHash),
    #[error("parent {0} is invalid")]
    InvalidAncestor(BlockHash),
    #[error("height {found} does not follow parent height {parent}")]
    BadHeight { parent: u64, found: u64 },
    #[error("producer is not scheduled at this height")]
    BadProducer,
    #[error("header signature does not verify")]
    BadHeaderSig,
    #[error("body hash does not match the transactions")]
    BadBody,
    #[error("bad coinbase: {0}")]
    BadCoinbase(String),
    #[error("auto-bounty output missing or wrong")]
    AutoBountyMissing,
    #[error("transaction {index} invalid: {error}")]
    TxInvalid { index: usize, error: TxError },
}

impl BlockError {
    pub fn code(&self) -> &'static str {
        match self {
            BlockError::UnknownParent(_) => "UnknownParent",
            BlockError::InvalidAncestor(_) => "InvalidAncestor",
            BlockError::BadHeight { .. } => "BadHeight",
            BlockError::BadProducer => "BadProducer",
            BlockError::BadHeaderSig => "BadHeaderSig",
            BlockError::BadBody => "BadBody",
            BlockError::BadCoinbase(_) => "BadCoinbase",
            BlockError::AutoBountyMissing => "AutoBountyMissing",
            BlockError::TxInvalid { .. } => "TxInvalid",
        }
    }

    /// A short human label for the explorer.
    pub fn label(&self) -> String {
        match self {
            BlockError::TxInvalid { error: TxError::DocCheckFailed(_), .. } => "invalid proof steps".into(),
            BlockError::TxInvalid { error: TxError::MissingInput(_) | TxError::DoubleSpend(_), .. } => {
                "spends non-existing assets".into()
            }
            other => other.to_string(),
        }
    }
}

/// A bounty spent by the holder of the proposition's (negated) ownership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collection {
    pub asset: AssetId,
    pub addr: Addr,
    pub amount: u64,
    pub collector: Addr,
    pub by_disproof: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocRecord {
    pub doc_id: DocId,
    pub theory: TheoryId,
    pub publisher: Addr,
    pub defs: Vec<NewDef>,
    pub thms: Vec<NewThm>,
    pub conjs: Vec<NewConj>,
    /// Signature additions: only objects and theorems not known before.
    pub added_defs: Vec<(ObjId, Definition)>,
    pub added_thms: Vec<(PropId, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoProp {
    pub theory: TheoryId,
    pub id: PropId,
    pub stmt: Term,
}

/// Everything a transaction changed; enough to undo it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxEffect {
    pub txid: TxId,
    pub spent: Vec<Asset>,
    pub created: Vec<Asset>,
    pub fee: u64,
    pub subsidy: u64,
    pub theory: Option<(TheoryId, TheorySpec)>,
    pub doc: Option<DocRecord>,
    pub collections: Vec<Collection>,
    /// For a coinbase with an auto-bounty: the proposition it is placed on.
    pub auto_prop: Option<AutoProp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEffects {
    pub hash: BlockHash,
    pub parent: BlockHash,
    pub height: u64,
    pub timestamp: u64,
    pub txs: Vec<TxEffect>,
}

/// Commitment a marker must carry before `doc` can be published by `publisher`.
pub fn marker_commitment(doc_bytes: &[u8], publisher: &PubKey) -> Hash32 {
    Hash32(sha256_concat(&[doc_bytes, &publisher.0]))
}

/// The proposition the auto-bounty of the block after `parent` sits on.
pub fn auto_bounty_prop(params: &Params, st: &ChainState, parent: &BlockHash) -> (PropId, Term, Addr) {
    let t = gen_random_prop(parent.as_bytes());
    let sig = &st.theories[&params.builtin_theory];
    let pid = prop_id(sig, &t).expect("generated propositions are well-typed");
    (pid, t, Addr::prop(&params.builtin_theory, &pid))
}

fn check_outputs(tx: &Tx) -> Result<u64, TxError> {
    let mut total: u64 = 0;
    for (index, o) in tx.outputs.iter().enumerate() {
        let bad = |reason: &str| TxError::BadOutput { index, reason: reason.into() };
        match &o.payload {
            Payload::Currency { amount } | Payload::Bounty { amount } if *amount == 0 => {
                return Err(bad("zero amount"))
            }
            Payload::Currency { .. } | Payload::Marker { .. } if !o.addr.is_key() => {
                return Err(bad("must sit at a key address"))
            }
            Payload::Bounty { .. } if !o.addr.is_prop() => return Err(bad("bounty must sit at a proposition address")),
            _ => {}
        }
        total = total.checked_add(o.payload.value()).ok_or_else(|| bad("overflow"))?;
    }
    Ok(total)
}

fn sorted_outputs(outs: impl IntoIterator<Item = Output>) -> Vec<Vec<u8>> {
    let mut v: Vec<Vec<u8>> = outs
        .into_iter()
        .map(|o| {
            let mut b = o.addr.0.to_vec();
            o.payload.encode(&mut b);
            b
        })
        .collect();
    v.sort();
    v
}

fn created_assets(tx: &Tx, height: u64) -> Vec<Asset> {
    tx.outputs
        .iter()
        .enumerate()
        .map(|(i, o)| Asset { id: tx.output_id(i), addr: o.addr, payload: o.payload.clone(), born: height })
        .collect()
}

/// The non-currency outputs a document transaction must carry: the
/// publication, and ownership of every fresh object, theorem and refutation.
pub fn expected_doc_outputs(st: &ChainState, th: TheoryId, doc_id: DocId, deff: &DocEffect, publisher: Addr) -> Vec<Output> {
    let mut expected = vec![Output::new(Addr::doc(&th, &doc_id), Payload::DocPub { doc: doc_id })];
    for d in deff.defs.iter().filter(|d| d.fresh) {
        expected.push(Output::new(Addr::obj(&th, &d.id), Payload::OwnsObj { holder: publisher }));
    }
    let mut neg_addrs = HashSet::new();
    for t in deff.thms.iter().filter(|t| t.fresh) {
        expected.push(Output::new(Addr::prop(&th, &t.id), Payload::OwnsProp { holder: publisher }));
        if let Some(q) = &t.refutes {
            let a = Addr::prop(&th, q);
            let exists = st.live_at(&a).any(|x| matches!(x.payload, Payload::OwnsNegProp { .. }));
            if !exists && neg_addrs.insert(a) {
                expected.push(Output::new(a, Payload::OwnsNegProp { holder: publisher }));
            }
        }
    }
    expected
}

/// Validates a non-coinbase transaction for inclusion at `height` on top of `st`.
pub fn validate_tx(st: &ChainState, params: &Params, tx: &Tx, height: u64) -> Result<TxEffect, TxError> {
    if tx.coinbase.is_some() {
        return Err(TxError::UnexpectedCoinbase);
    }
    // an input makes the txid, and so every output id, unique
    if tx.inputs.is_empty() {
        return Err(TxError::NoInputs);
    }
    let txid = tx.txid();
    let mut seen = HashSet::new();
    let mut spent = Vec::new();
    let mut collections = Vec::new();
    let mut markers = Vec::new();
    let mut in_value: u64 = 0;
    for (i, input) in tx.inputs.iter().enumerate() {
        if !seen.insert(input.asset) {
            return Err(TxError::DoubleSpend(input.asset));
        }
        let asset = match st.assets.get(&input.asset) {
            Some(a) => a,
            None if st.spent.contains(&input.asset) => return Err(TxError::DoubleSpend(input.asset)),
            None => return Err(TxError::MissingInput(input.asset)),
        };
        if !verify(&input.pubkey, txid.as_bytes(), &input.sig) {
            return Err(TxError::BadSignature(i));
        }
        let signer = Addr::pay_to_key(&input.pubkey);
        match &asset.payload {
            Payload::Currency { .. } | Payload::Marker { .. } => {
                if asset.addr != signer {
                    return Err(TxError::BadSignature(i));
                }
                if matches!(asset.payload, Payload::Marker { .. }) {
                    markers.push((asset, input.pubkey));
                }
            }
            Payload::Bounty { amount } => {
                let owner = st.live_at(&asset.addr).find_map(|a| match &a.payload {
                    Payload::OwnsProp { holder } if *holder == signer => Some(false),
                    Payload::OwnsNegProp { holder } if *holder == signer => Some(true),
                    _ => None,
                });
                let Some(by_disproof) = owner else { return Err(TxError::BountyNotRedeemable(i)) };
                collections.push(Collection {
                    asset: asset.id,
                    addr: asset.addr,
                    amount: *amount,
                    collector: signer,
                    by_disproof,
                });
            }
            _ => return Err(TxError::Unspendable(i)),
        }
        in_value = in_value.checked_add(asset.payload.value()).ok_or(TxError::ValueCreated(u64::MAX))?;
        spent.push(asset.clone());
    }
    let out_value = check_outputs(tx)?;
    if out_value > in_value {
        return Err(TxError::ValueCreated(out_value - in_value));
    }
    let fee = in_value - out_value;
    let value_outputs = |o: &&Output| matches!(o.payload, Payload::Currency { .. });
    let special: Vec<Output> = tx.outputs.iter().filter(|o| !value_outputs(o)).cloned().collect();

    let mut effect = TxEffect {
        txid,
        spent,
        created: created_assets(tx, height),
        fee,
        subsidy: 0,
        theory: None,
        doc: None,
        collections,
        auto_prop: None,
    };

    match &tx.attachment {
        None => {
            if special.iter().any(|o| o.payload.holder().is_some() || matches!(o.payload, Payload::TheoryPub { .. } | Payload::DocPub { .. })) {
                return Err(TxError::OwnershipOutputsWrong);
            }
        }
        Some(Attachment::Theory(spec)) => {
            let id = spec.id().map_err(TxError::TheoryCheckFailed)?;
            spec.signature().map_err(TxError::TheoryCheckFailed)?;
            if st.theories.contains_key(&id) {
                return Err(TxError::AlreadyPublished(id));
            }
            let expected = [Output::new(Addr::theory(&id), Payload::TheoryPub { theory: id })];
            if sorted_outputs(special) != sorted_outputs(expected) {
                return Err(TxError::OwnershipOutputsWrong);
            }
            effect.theory = Some((id, spec.clone()));
        }
        Some(Attachment::Doc(doc)) => {
            let sig = st.theories.get(&doc.theory).ok_or(TxError::UnknownTheory(doc.theory))?;
            let deff = check_doc(sig, doc).map_err(TxError::DocCheckFailed)?;
            if markers.len() != 1 {
                return Err(TxError::MarkerMissing(markers.len()));
            }
            let (marker, pubkey) = markers[0];
            let bytes = doc.to_bytes();
            if marker.payload.commitment() != Some(marker_commitment(&bytes, &pubkey)) {
                return Err(TxError::CommitmentMismatch);
            }
            if marker.born + params.marker_maturity > height {
                return Err(TxError::MarkerImmature { born: marker.born, height });
            }
            let publisher = Addr::pay_to_key(&pubkey);
            let th = doc.theory;
            let doc_id = doc.id();
            let expected = expected_doc_outputs(st, th, doc_id, &deff, publisher);
            if sorted_outputs(special) != sorted_outputs(expected) {
                return Err(TxError::OwnershipOutputsWrong);
            }
            let added_defs = deff
                .defs
                .iter()
                .filter(|d| d.fresh)
                .map(|d| (d.id, deff.sig.defs[&d.id].clone()))
                .collect();
            let added_thms = deff.thms.iter().filter(|t| t.fresh).map(|t| (t.id, t.stmt.clone())).collect();
            effect.doc = Some(DocRecord {
                doc_id,
                theory: th,
                publisher,
                defs: deff.defs,
                thms: deff.thms,
                conjs: deff.conjs,
                added_defs,
                added_thms,
            });
        }
    }
    Ok(effect)
}

fn validate_coinbase(st: &ChainState, params: &Params, b: &Block) -> Result<TxEffect, BlockError> {
    let height = b.height();
    let bad = |s: &str| BlockError::BadCoinbase(s.into());
    let tx = b.txs.first().ok_or_else(|| bad("missing"))?;
    if tx.coinbase != Some(height) || !tx.inputs.is_empty() || tx.attachment.is_some() {
        return Err(bad("malformed"));
    }
    let total = check_outputs(tx).map_err(|e| bad(&e.to_string()))?;
    if total != params.subsidy {
        return Err(bad("outputs must equal the subsidy"));
    }
    let bounties: Vec<&Output> = tx.outputs.iter().filter(|o| matches!(o.payload, Payload::Bounty { .. })).collect();
    if tx.outputs.iter().any(|o| !matches!(o.payload, Payload::Bounty { .. } | Payload::Currency { .. })) {
        return Err(bad("only currency and bounty outputs"));
    }
    let mut auto_prop = None;
    if params.has_auto_bounty(height) {
        let (pid, t, addr) = auto_bounty_prop(params, st, &b.parent());
        let ok = bounties.len() == 1
            && bounties[0].addr == addr
            && bounties[0].payload == Payload::Bounty { amount: params.auto_bounty_amount };
        if !ok {
            return Err(BlockError::AutoBountyMissing);
        }
        auto_prop = Some(AutoProp { theory: params.builtin_theory, id: pid, stmt: t });
    } else if !bounties.is_empty() {
        return Err(bad("bounty outside the auto-bounty window"));
    }
    Ok(TxEffect {
        txid: tx.txid(),
        spent: Vec::new(),
        created: created_assets(tx, height),
        fee: 0,
        subsidy: params.subsidy,
        theory: None,
        doc: None,
        collections: Vec::new(),
        auto_prop,
    })
}

/// Checks the header against the parent state and the schedule.
pub fn check_header(st: &ChainState, params: &Params, b: &Block) -> Result<(), BlockError> {
    if b.parent() != st.tip {
        return Err(BlockError::UnknownParent(b.parent()));
    }
    if b.height() != st.height + 1 {
        return Err(BlockError::BadHeight { parent: st.height, found: b.height() });
    }
    if b.header.producer != params.producer_at(b.height()) {
        return Err(BlockError::BadProducer);
    }
    if !b.header.sig_ok() {
        return Err(BlockError::BadHeaderSig);
    }
    if b.header.body_hash != merkle_root(&b.txs) {
        return Err(BlockError::BadBody);
    }
    Ok(())
}

/// Validates `b` as the child of the block whose state is `st`, returning
/// the new state and the effects needed to undo it.
pub fn validate_block(st: &ChainState, params: &Params, b: &Block) -> Result<(ChainState, BlockEffects), BlockError> {
    check_header(st, params, b)?;
    let mut next = st.clone();
    let mut effects = BlockEffects {
        hash: b.hash(),
        parent: b.parent(),
        height: b.height(),
        timestamp: b.header.timestamp,
        txs: Vec::new(),
    };
    let cb = validate_coinbase(st, params, b)?;
    next.apply_tx(&cb);
    effects.txs.push(cb);
    for (index, tx) in b.txs.iter().enumerate().skip(1) {
        let eff = validate_tx(&next, params, tx, b.height()).map_err(|error| BlockError::TxInvalid { index, error })?;
        next.apply_tx(&eff);
        effects.txs.push(eff);
    }
    next.height = b.height();
    next.tip = effects.hash;
    Ok((next, effects))
}

impl ChainState {
    pub fn apply_tx(&mut self, e: &TxEffect) {
        for a in &e.spent {
            self.remove_asset(&a.id);
            self.spent.insert(a.id);
        }
        for a in &e.created {
            self.insert_asset(a.clone());
        }
        self.fees += e.fee;
        self.subsidies += e.subsidy;
        if let Some((id, spec)) = &e.theory {
            self.theories.insert(*id, spec.signature().expect("validated theory"));
            self.specs.insert(*id, spec.clone());
        }
        if let Some(d) = &e.doc {
            let sig = self.theories.get_mut(&d.theory).expect("validated document theory");
            for (id, def) in &d.added_defs {
                sig.defs.insert(*id, def.clone());
            }
            for (id, t) in &d.added_thms {
                sig.thms.insert(*id, t.clone());
            }
        }
    }

    pub fn undo_tx(&mut self, e: &TxEffect) {
        if let Some(d) = &e.doc {
            let sig = self.theories.get_mut(&d.theory).expect("document theory present");
            for (id, _) in &d.added_defs {
                sig.defs.remove(id);
            }
            for (id, _) in &d.added_thms {
                sig.thms.remove(id);
            }
        }
        if let Some((id, _)) = &e.theory {
            self.theories.remove(id);
            self.specs.remove(id);
        }
        self.fees -= e.fee;
        self.subsidies -= e.subsidy;
        for a in &e.created {
            self.remove_asset(&a.id);
        }
        for a in &e.spent {
            self.spent.remove(&a.id);
            self.insert_asset(a.clone());
        }
    }

    /// Re-applies a block whose effects were computed earlier.
    pub fn connect(&mut self, e: &BlockEffects) {
        for t in &e.txs {
            self.apply_tx(t);
        }
        self.height = e.height;
        self.tip = e.hash;
    }

    pub fn disconnect(&mut self, e: &BlockEffects) {
        for t in e.txs.iter().rev() {
            self.undo_tx(t);
        }
        self.height = e.height - 1;
        self.tip = e.parent;
    }
}
