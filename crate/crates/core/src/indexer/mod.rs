//! The explorer cache: one snapshot value holding every derived index over
//! the main chain, updated by connect/disconnect and checked against a
//! full rebuild.

mod views;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Duration;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::docform::{Item, TheorySpec};
use crate::hash::{sha256, AssetId, BlockHash, DocId, ObjId, PropId, TheoryId, TxId};
use crate::kernel::{Term, Ty};
use crate::ledger::{
    builtin_theories, classify_graph, Addr, Asset, Attachment, Block, BlockEffects, BlockStatus, BlockTree,
    ChainEvent, GraphNode, Header, NodeClass, Payload, Tx, TxEffect,
};

pub use views::{bounty_views, BountyViews, CategorySums, CollectedView, OpenView};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("inconsistent event: {0}")]
    InconsistentEvent(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub height: u64,
    pub address_count: u64,
    pub tx_count: u64,
    /// Currency paid out by non-coinbase transactions.
    pub tx_volume: u64,
    /// Live currency plus live bounties.
    pub coin_circulation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropEvent {
    Axiom { name: String },
    Conjectured { name: String, tag: String, doc: DocId, tx: TxId, height: u64 },
    Proved { name: String, owner: Addr, doc: DocId, tx: TxId, height: u64, uses: Vec<Addr> },
    Refuted { owner: Addr, by: PropId, doc: DocId, tx: TxId, height: u64 },
    AutoBounty { height: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropEntry {
    pub theory: TheoryId,
    pub id: PropId,
    pub stmt: Term,
    pub events: Vec<PropEvent>,
}

impl PropEntry {
    pub fn status(&self) -> &'static str {
        let has = |f: fn(&PropEvent) -> bool| self.events.iter().any(f);
        if has(|e| matches!(e, PropEvent::Axiom { .. })) {
            "axiom"
        } else if has(|e| matches!(e, PropEvent::Refuted { .. })) {
            "disproven"
        } else if has(|e| matches!(e, PropEvent::Proved { .. })) {
            "proven"
        } else {
            "conjecture"
        }
    }

    pub fn owner(&self) -> Option<Addr> {
        self.events.iter().find_map(|e| match e {
            PropEvent::Proved { owner, .. } => Some(*owner),
            _ => None,
        })
    }

    pub fn neg_owner(&self) -> Option<Addr> {
        self.events.iter().find_map(|e| match e {
            PropEvent::Refuted { owner, .. } => Some(*owner),
            _ => None,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.events.iter().find_map(|e| match e {
            PropEvent::Axiom { name } | PropEvent::Conjectured { name, .. } | PropEvent::Proved { name, .. } => {
                Some(name.as_str())
            }
            _ => None,
        })
    }

    /// Category of the first conjecture statement, or "Other".
    pub fn tag(&self) -> &str {
        self.events
            .iter()
            .find_map(|e| match e {
                PropEvent::Conjectured { tag, .. } => Some(tag.as_str()),
                _ => None,
            })
            .unwrap_or(crate::docform::DEFAULT_TAG)
    }

    /// Addresses this proposition depends on: objects in its statement and
    /// whatever its proofs cite.
    pub fn deps(&self) -> BTreeSet<Addr> {
        let mut refs = Vec::new();
        self.stmt.refs(&mut refs);
        let mut out: BTreeSet<Addr> = refs.iter().map(|o| Addr::obj(&self.theory, o)).collect();
        for e in &self.events {
            if let PropEvent::Proved { uses, .. } = e {
                out.extend(uses.iter().copied());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BountyEvent {
    Placed { asset: AssetId, amount: u64, tx: TxId, height: u64 },
    Collected { asset: AssetId, amount: u64, tx: TxId, height: u64, collector: Addr, by_disproof: bool },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BountyEntry {
    pub events: Vec<BountyEvent>,
}

impl BountyEntry {
    fn collected_assets(&self) -> BTreeSet<AssetId> {
        self.events
            .iter()
            .filter_map(|e| match e {
                BountyEvent::Collected { asset, .. } => Some(*asset),
                _ => None,
            })
            .collect()
    }

    pub fn open_amount(&self) -> u64 {
        let done = self.collected_assets();
        self.events
            .iter()
            .map(|e| match e {
                BountyEvent::Placed { asset, amount, .. } if !done.contains(asset) => *amount,
                _ => 0,
            })
            .sum()
    }

    pub fn collected_amount(&self) -> u64 {
        self.events
            .iter()
            .map(|e| match e {
                BountyEvent::Collected { amount, .. } => *amount,
                _ => 0,
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjEntry {
    pub theory: TheoryId,
    pub id: ObjId,
    pub name: String,
    pub ty: Ty,
    pub owner: Addr,
    pub doc: DocId,
    pub tx: TxId,
    pub height: u64,
    pub uses: Vec<Addr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryEntry {
    pub spec: TheorySpec,
    pub publisher: Option<Addr>,
    pub tx: Option<TxId>,
    pub height: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocItem {
    pub index: usize,
    pub kind: String,
    pub name: String,
    pub id: Option<String>,
    pub fresh: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocEntry {
    pub theory: TheoryId,
    pub publisher: Addr,
    pub tx: TxId,
    pub height: u64,
    pub items: Vec<DocItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxEntry {
    pub block: BlockHash,
    pub height: u64,
    pub index: usize,
    pub fee: u64,
    pub tx: Tx,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub hash: BlockHash,
    pub header: Header,
    #[serde(flatten)]
    pub status: BlockStatus,
    pub class: NodeClass,
    pub main_chain: bool,
    pub txids: Vec<TxId>,
}

/// Every derived index at one tip.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSnapshot {
    pub tip: BlockHash,
    pub stats: Stats,
    pub chain: Vec<BlockHash>,
    pub theories: BTreeMap<TheoryId, TheoryEntry>,
    /// Keyed by object address (theory and id).
    pub objects: BTreeMap<Addr, ObjEntry>,
    /// Keyed by proposition address (theory and id).
    pub props: BTreeMap<Addr, PropEntry>,
    pub docs: BTreeMap<DocId, DocEntry>,
    pub bounties: BTreeMap<Addr, BountyEntry>,
    /// Publisher to the addresses of what they published.
    pub authorship: BTreeMap<Addr, Vec<Addr>>,
    pub assets: BTreeMap<AssetId, Asset>,
    pub by_addr: BTreeMap<Addr, BTreeSet<AssetId>>,
    pub addr_txs: BTreeMap<Addr, Vec<TxId>>,
    pub txs: BTreeMap<TxId, TxEntry>,
    /// Every block the node knows, including forks, invalid blocks and orphans.
    pub blocks: BTreeMap<BlockHash, BlockEntry>,
    pub graph: Vec<GraphNode>,
}

/// One reversible change; a block's changes are applied forwards on
/// connect and backwards on disconnect.
enum Op {
    Tx(TxId, TxEntry),
    AddrTx(Addr, TxId),
    Spend(Asset),
    Create(Asset),
    Theory(TheoryId, TheoryEntry),
    Doc(DocId, DocEntry),
    Obj(Addr, ObjEntry),
    Prop { addr: Addr, theory: TheoryId, id: PropId, stmt: Term, ev: PropEvent },
    Bounty(Addr, BountyEvent),
    Author(Addr, Addr),
    Stats { volume: u64, minted: u64, burned: u64 },
}

fn bad(s: impl Into<String>) -> IndexError {
    IndexError::InconsistentEvent(s.into())
}

fn theory_ops(ops: &mut Vec<Op>, id: TheoryId, spec: &TheorySpec, publisher: Option<Addr>, tx: Option<TxId>, height: u64) {
    ops.push(Op::Theory(id, TheoryEntry { spec: spec.clone(), publisher, tx, height }));
    let sig = spec.signature().expect("published theories check");
    for a in &spec.axioms {
        let stmt = crate::kernel::beta_eta(&a.stmt);
        let pid = crate::kernel::prop_id(&sig, &a.stmt).expect("axioms are propositions");
        ops.push(Op::Prop { addr: Addr::prop(&id, &pid), theory: id, id: pid, stmt, ev: PropEvent::Axiom { name: a.name.clone() } });
    }
    if let Some(p) = publisher {
        ops.push(Op::Author(p, Addr::theory(&id)));
    }
}

fn tx_ops(ops: &mut Vec<Op>, block: &Block, index: usize, tx: &Tx, eff: &TxEffect) {
    let height = block.height();
    ops.push(Op::Tx(eff.txid, TxEntry { block: block.hash(), height, index, fee: eff.fee, tx: tx.clone() }));
    let touched: BTreeSet<Addr> = eff.spent.iter().chain(&eff.created).map(|a| a.addr).collect();
    for a in touched {
        ops.push(Op::AddrTx(a, eff.txid));
    }
    for a in &eff.spent {
        ops.push(Op::Spend(a.clone()));
    }
    for a in &eff.created {
        ops.push(Op::Create(a.clone()));
    }
    let volume = if tx.coinbase.is_some() {
        0
    } else {
        tx.outputs.iter().filter(|o| matches!(o.payload, Payload::Currency { .. })).map(|o| o.payload.value()).sum()
    };
    ops.push(Op::Stats { volume, minted: eff.subsidy, burned: eff.fee });
    let signer = tx.inputs.first().map(|i| Addr::pay_to_key(&i.pubkey));
    if let Some((id, spec)) = &eff.theory {
        theory_ops(ops, *id, spec, signer, Some(eff.txid), height);
    }
    if let (Some(d), Some(Attachment::Doc(doc))) = (&eff.doc, &tx.attachment) {
        let th = d.theory;
        let mut items: Vec<DocItem> = Vec::new();
        for (index, item) in doc.items.iter().enumerate() {
            let (id, fresh) = match item {
                Item::Def { .. } => d.defs.iter().find(|x| x.index == index).map(|x| (Some(x.id.to_hex()), x.fresh)).unwrap(),
                Item::Thm { .. } => d.thms.iter().find(|x| x.index == index).map(|x| (Some(x.id.to_hex()), x.fresh)).unwrap(),
                Item::Conj { .. } => (d.conjs.iter().find(|x| x.index == index).map(|x| x.id.to_hex()), false),
                Item::Param { .. } => (None, false),
            };
            items.push(DocItem { index, kind: item.kind().into(), name: item.name().into(), id, fresh });
        }
        ops.push(Op::Doc(d.doc_id, DocEntry { theory: th, publisher: d.publisher, tx: eff.txid, height, items }));
        ops.push(Op::Author(d.publisher, Addr::doc(&th, &d.doc_id)));
        for def in d.defs.iter().filter(|x| x.fresh) {
            let addr = Addr::obj(&th, &def.id);
            ops.push(Op::Obj(
                addr,
                ObjEntry {
                    theory: th,
                    id: def.id,
                    name: def.name.clone(),
                    ty: def.ty.clone(),
                    owner: d.publisher,
                    doc: d.doc_id,
                    tx: eff.txid,
                    height,
                    uses: def.uses.iter().map(|o| Addr::obj(&th, o)).collect(),
                },
            ));
            ops.push(Op::Author(d.publisher, addr));
        }
        for t in d.thms.iter().filter(|x| x.fresh) {
            let addr = Addr::prop(&th, &t.id);
            let uses = t
                .uses_objs
                .iter()
                .map(|o| Addr::obj(&th, o))
                .chain(t.uses_props.iter().map(|p| Addr::prop(&th, p)))
                .collect();
            let ev = PropEvent::Proved { name: t.name.clone(), owner: d.publisher, doc: d.doc_id, tx: eff.txid, height, uses };
            ops.push(Op::Prop { addr, theory: th, id: t.id, stmt: t.stmt.clone(), ev });
            ops.push(Op::Author(d.publisher, addr));
        }
        for t in d.thms.iter().filter(|x| x.fresh) {
            let (Some(q), Some(qt)) = (t.refutes, &t.negated) else { continue };
            let addr = Addr::prop(&th, &q);
            let minted = eff.created.iter().any(|a| a.addr == addr && matches!(a.payload, Payload::OwnsNegProp { .. }));
            if minted {
                let ev = PropEvent::Refuted { owner: d.publisher, by: t.id, doc: d.doc_id, tx: eff.txid, height };
                ops.push(Op::Prop { addr, theory: th, id: q, stmt: qt.clone(), ev });
            }
        }
        for c in &d.conjs {
            let ev = PropEvent::Conjectured { name: c.name.clone(), tag: c.tag.clone(), doc: d.doc_id, tx: eff.txid, height };
            ops.push(Op::Prop { addr: Addr::prop(&th, &c.id), theory: th, id: c.id, stmt: c.stmt.clone(), ev });
        }
    }
    if let Some(ap) = &eff.auto_prop {
        let ev = PropEvent::AutoBounty { height };
        ops.push(Op::Prop { addr: Addr::prop(&ap.theory, &ap.id), theory: ap.theory, id: ap.id, stmt: ap.stmt.clone(), ev });
    }
    for a in &eff.created {
        if let Payload::Bounty { amount } = a.payload {
            ops.push(Op::Bounty(a.addr, BountyEvent::Placed { asset: a.id, amount, tx: eff.txid, height }));
        }
    }
    for c in &eff.collections {
        let ev = BountyEvent::Collected {
            asset: c.asset,
            amount: c.amount,
            tx: eff.txid,
            height,
            collector: c.collector,
            by_disproof: c.by_disproof,
        };
        ops.push(Op::Bounty(c.addr, ev));
    }
}

fn block_ops(block: &Block, effects: &BlockEffects) -> Result<Vec<Op>, IndexError> {
    if block.txs.len() != effects.txs.len() || block.hash() != effects.hash {
        return Err(bad("effects do not belong to the block"));
    }
    let mut ops = Vec::new();
    if effects.height == 0 {
        for spec in builtin_theories() {
            let id = spec.id().expect("builtin theory checks");
            theory_ops(&mut ops, id, &spec, None, None, 0);
        }
    }
    for (i, (tx, eff)) in block.txs.iter().zip(&effects.txs).enumerate() {
        tx_ops(&mut ops, block, i, tx, eff);
    }
    Ok(ops)
}

impl IndexSnapshot {
    pub fn empty() -> IndexSnapshot {
        IndexSnapshot::default()
    }

    /// SHA-256 of the JSON serialization.
    pub fn digest(&self) -> [u8; 32] {
        sha256(&serde_json::to_vec(self).expect("snapshot serializes"))
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest())
    }

    fn forward(&mut self, op: Op) -> Result<(), IndexError> {
        match op {
            Op::Tx(id, e) => {
                if self.txs.insert(id, e).is_some() {
                    return Err(bad(format!("tx {id} indexed twice")));
                }
            }
            Op::AddrTx(a, id) => self.addr_txs.entry(a).or_default().push(id),
            Op::Spend(a) => {
                self.assets.remove(&a.id).ok_or_else(|| bad(format!("spent asset {} unknown", a.id)))?;
                let set = self.by_addr.get_mut(&a.addr).ok_or_else(|| bad("address index"))?;
                set.remove(&a.id);
                if set.is_empty() {
                    self.by_addr.remove(&a.addr);
                }
            }
            Op::Create(a) => {
                self.by_addr.entry(a.addr).or_default().insert(a.id);
                self.assets.insert(a.id, a);
            }
            Op::Theory(id, e) => {
                self.theories.insert(id, e);
            }
            Op::Doc(id, e) => {
                self.docs.insert(id, e);
            }
            Op::Obj(a, e) => {
                if self.objects.insert(a, e).is_some() {
                    return Err(bad(format!("object {a} published twice")));
                }
            }
            Op::Prop { addr, theory, id, stmt, ev } => {
                self.props.entry(addr).or_insert_with(|| PropEntry { theory, id, stmt, events: Vec::new() }).events.push(ev)
            }
            Op::Bounty(a, ev) => self.bounties.entry(a).or_default().events.push(ev),
            Op::Author(p, a) => self.authorship.entry(p).or_default().push(a),
            Op::Stats { volume, minted, burned } => {
                self.stats.tx_count += 1;
                self.stats.tx_volume += volume;
                self.stats.coin_circulation = self.stats.coin_circulation + minted - burned;
            }
        }
        Ok(())
    }

    fn backward(&mut self, op: Op) -> Result<(), IndexError> {
        fn pop_vec<K: Ord, V>(m: &mut BTreeMap<K, Vec<V>>, k: &K) -> Result<(), IndexError> {
            let v = m.get_mut(k).ok_or_else(|| bad("missing entry on disconnect"))?;
            v.pop();
            if v.is_empty() {
                m.remove(k);
            }
            Ok(())
        }
        match op {
            Op::Tx(id, _) => {
                self.txs.remove(&id).ok_or_else(|| bad(format!("tx {id} not indexed")))?;
            }
            Op::AddrTx(a, _) => pop_vec(&mut self.addr_txs, &a)?,
            Op::Spend(a) => {
                self.by_addr.entry(a.addr).or_default().insert(a.id);
                self.assets.insert(a.id, a);
            }
            Op::Create(a) => self.forward(Op::Spend(a))?,
            Op::Theory(id, _) => {
                self.theories.remove(&id).ok_or_else(|| bad("theory missing"))?;
            }
            Op::Doc(id, _) => {
                self.docs.remove(&id).ok_or_else(|| bad("document missing"))?;
            }
            Op::Obj(a, _) => {
                self.objects.remove(&a).ok_or_else(|| bad("object missing"))?;
            }
            Op::Prop { addr, .. } => {
                let e = self.props.get_mut(&addr).ok_or_else(|| bad(format!("proposition {addr} missing")))?;
                e.events.pop();
                if e.events.is_empty() {
                    self.props.remove(&addr);
                }
            }
            Op::Bounty(a, _) => {
                let e = self.bounties.get_mut(&a).ok_or_else(|| bad("bounty missing"))?;
                e.events.pop();
                if e.events.is_empty() {
                    self.bounties.remove(&a);
                }
            }
            Op::Author(p, _) => pop_vec(&mut self.authorship, &p)?,
            Op::Stats { volume, minted, burned } => {
                self.stats.tx_count -= 1;
                self.stats.tx_volume -= volume;
                self.stats.coin_circulation = self.stats.coin_circulation + burned - minted;
            }
        }
        Ok(())
    }

    fn refresh_counts(&mut self) {
        self.stats.address_count = self.by_addr.len() as u64;
        self.stats.height = self.chain.len().saturating_sub(1) as u64;
    }

    pub fn apply_connect(&mut self, block: &Block, effects: &BlockEffects) -> Result<(), IndexError> {
        let expected_parent = self.chain.last().copied().unwrap_or(BlockHash::ZERO);
        if block.parent() != expected_parent || block.height() != self.chain.len() as u64 {
            return Err(bad(format!("block {} does not extend the indexed tip", block.hash())));
        }
        for op in block_ops(block, effects)? {
            self.forward(op)?;
        }
        self.chain.push(block.hash());
        self.tip = block.hash();
        self.refresh_counts();
        Ok(())
    }

    pub fn apply_disconnect(&mut self, block: &Block, effects: &BlockEffects) -> Result<(), IndexError> {
        if self.chain.last() != Some(&block.hash()) {
            return Err(bad(format!("block {} is not the indexed tip", block.hash())));
        }
        let ops = block_ops(block, effects)?;
        for op in ops.into_iter().rev() {
            self.backward(op)?;
        }
        self.chain.pop();
        self.tip = self.chain.last().copied().unwrap_or(BlockHash::ZERO);
        self.refresh_counts();
        Ok(())
    }

    pub fn apply_event(&mut self, ev: &ChainEvent) -> Result<(), IndexError> {
        match ev {
            ChainEvent::Connect { block, effects } => self.apply_connect(block, effects),
            ChainEvent::Disconnect { block, effects } => self.apply_disconnect(block, effects),
        }
    }

    /// Refreshes the parts that describe the whole block tree rather than
    /// the main chain: per-block status and the classified graph.
    pub fn observe_tree(&mut self, tree: &BlockTree) {
        let main: BTreeSet<BlockHash> = self.chain.iter().copied().collect();
        let mut blocks = BTreeMap::new();
        for n in tree.nodes() {
            let b = &n.block;
            blocks.insert(
                b.hash(),
                BlockEntry {
                    hash: b.hash(),
                    header: b.header.clone(),
                    status: n.status.clone(),
                    class: n.class(),
                    main_chain: main.contains(&b.hash()),
                    txids: b.txs.iter().map(Tx::txid).collect(),
                },
            );
        }
        for b in tree.orphans() {
            blocks.insert(
                b.hash(),
                BlockEntry {
                    hash: b.hash(),
                    header: b.header.clone(),
                    status: BlockStatus::Orphan,
                    class: crate::ledger::classify_block(b),
                    main_chain: false,
                    txids: b.txs.iter().map(Tx::txid).collect(),
                },
            );
        }
        self.blocks = blocks;
        self.graph = classify_graph(&tree.graph_entries());
    }

    /// Full scan of the tree's main chain from genesis: the reference result
    /// the incremental path must match.
    pub fn rebuild(tree: &BlockTree) -> Result<IndexSnapshot, IndexError> {
        let mut s = IndexSnapshot::empty();
        for h in tree.main_chain() {
            let n = tree.get(&h).ok_or_else(|| bad("main chain block missing"))?;
            let eff = n.effects.as_ref().ok_or_else(|| bad("main chain block without effects"))?;
            s.apply_connect(&n.block, eff)?;
        }
        s.observe_tree(tree);
        Ok(s)
    }

    pub fn live_at(&self, addr: &Addr) -> impl Iterator<Item = &Asset> {
        self.by_addr.get(addr).into_iter().flatten().map(|id| &self.assets[id])
    }

    /// Propositions with this id, in any theory.
    pub fn props_by_id(&self, id: &PropId) -> impl Iterator<Item = (&Addr, &PropEntry)> {
        let id = *id;
        self.props.iter().filter(move |(_, p)| p.id == id)
    }

    pub fn objects_by_id(&self, id: &ObjId) -> impl Iterator<Item = (&Addr, &ObjEntry)> {
        let id = *id;
        self.objects.iter().filter(move |(_, o)| o.id == id)
    }

    /// Checks the snapshot's internal laws: circulation equals live value,
    /// every bounty asset is exactly one of open or collected, and every
    /// dependency edge lands on a known entity.
    pub fn audit(&self) -> Result<(), String> {
        let live: u64 = self.assets.values().map(|a| a.payload.value()).sum();
        if live != self.stats.coin_circulation {
            return Err(format!("circulation {} but live value {live}", self.stats.coin_circulation));
        }
        if self.stats.address_count != self.by_addr.len() as u64 {
            return Err("address count".into());
        }
        for (addr, b) in &self.bounties {
            let collected = b.collected_assets();
            for e in &b.events {
                if let BountyEvent::Placed { asset, .. } = e {
                    if collected.contains(asset) == self.assets.contains_key(asset) {
                        return Err(format!("bounty {asset} at {addr} is neither or both open and collected"));
                    }
                }
            }
        }
        for (from, tos) in self.deps() {
            for to in tos {
                if !self.objects.contains_key(&to) && !self.props.contains_key(&to) {
                    return Err(format!("{from} depends on unknown {to}"));
                }
            }
        }
        Ok(())
    }

    /// Edges from each object or proposition to what it references.
    pub fn deps(&self) -> BTreeMap<Addr, BTreeSet<Addr>> {
        let mut out = BTreeMap::new();
        for (a, o) in &self.objects {
            out.insert(*a, o.uses.iter().copied().collect());
        }
        for (a, p) in &self.props {
            out.insert(*a, p.deps());
        }
        out
    }
}

/// Full-rebuild timer. Disabled by default; incremental updates run regardless.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefreshPolicy {
    pub rebuild_interval: Option<Duration>,
}

/// Readers take the current snapshot; writers build a new one and swap it in.
#[derive(Debug, Default)]
pub struct Indexer {
    current: RwLock<Arc<IndexSnapshot>>,
}

impl Indexer {
    pub fn new(snap: IndexSnapshot) -> Indexer {
        Indexer { current: RwLock::new(Arc::new(snap)) }
    }

    pub fn snapshot(&self) -> Arc<IndexSnapshot> {
        self.current.read().clone()
    }

    pub fn replace(&self, snap: IndexSnapshot) {
        *self.current.write() = Arc::new(snap);
    }

    /// Applies chain events and the tree view to a copy, then swaps it in.
    pub fn apply(&self, events: &[ChainEvent], tree: &BlockTree) -> Result<(), IndexError> {
        let mut next = (*self.snapshot()).clone();
        for ev in events {
            next.apply_event(ev)?;
        }
        next.observe_tree(tree);
        self.replace(next);
        Ok(())
    }
}
