//! Deterministic in-process network: several nodes, a virtual clock, seeded
//! message delays, and scripted or random block production.

mod random;
mod scenario;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::docform::{check_doc, corpus, parse_doc, Document, Item, TheorySpec};
use crate::hash::{sha256, BlockHash, PropId, TheoryId, TxId};
use crate::kernel::{Proof, Ty};
use crate::ledger::builder::{self, next_block, BuildError};
use crate::ledger::{
    class_counts, graph_dot, merkle_root, Accept, Addr, Attachment, Block, ChainState, Genesis, GraphNode, Keypair,
    NodeClass, Params, Payload, Tx,
};
use crate::node::Node;

pub use random::random_scenario;
pub use scenario::{Flags, Intent, PropRef, Scenario, Step};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("step {step}: unknown block label `{label}`")]
    UnknownLabel { step: usize, label: String },
    #[error("step {step}: label `{label}` used twice")]
    DuplicateLabel { step: usize, label: String },
    #[error("step {step}: node {node} does not have a valid block `{parent}` to build on")]
    ParentUnavailable { step: usize, node: usize, parent: String },
    #[error("step {step}: no node {node}")]
    BadNode { step: usize, node: usize },
    #[error("step {step}: unknown document `{name}`")]
    UnknownDoc { step: usize, name: String },
    #[error("step {step}: unknown theory `{name}`")]
    UnknownTheory { step: usize, name: String },
    #[error("step {step}: bad proposition reference: {reason}")]
    BadProp { step: usize, reason: String },
    #[error("step {step}: cannot build transaction: {reason}")]
    Build { step: usize, reason: String },
    #[error("step {step}: flag {flag} has nothing to act on")]
    FlagUnused { step: usize, flag: &'static str },
    #[error("step {step}: transaction rejected: {reason}")]
    Rejected { step: usize, reason: String },
    #[error("scenario needs at least one node")]
    NoNodes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ItemRef {
    Block(BlockHash),
    Tx(TxId),
}

#[derive(Clone, Debug)]
enum Wire {
    Inv(ItemRef),
    GetData(ItemRef),
    NotFound(ItemRef),
    Block(Arc<Block>),
    Tx(Tx),
}

#[derive(Clone, Debug)]
struct Msg {
    from: usize,
    to: usize,
    body: Wire,
}

#[derive(Clone, Debug)]
struct Cut {
    nodes: BTreeSet<usize>,
    until: u64,
}

/// Counters for what happened on the wire.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NetStats {
    pub sent: u64,
    pub delivered: u64,
    pub held: u64,
    pub duplicates: u64,
}

/// One node's end state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub node: usize,
    pub tip: BlockHash,
    pub height: u64,
    pub digest: String,
    pub graph: Vec<GraphNode>,
    pub counts: BTreeMap<NodeClass, usize>,
    pub dot: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioResult {
    pub name: String,
    pub seed: u64,
    pub nodes: Vec<NodeReport>,
    pub labels: BTreeMap<String, BlockHash>,
    pub converged: bool,
    pub net: NetStats,
    pub time: u64,
}

/// A running network.
pub struct Sim {
    pub nodes: Vec<Arc<Node>>,
    genesis: Genesis,
    seeds: Vec<u64>,
    params: Params,
    keys: BTreeMap<u64, Keypair>,
    docs: BTreeMap<String, Document>,
    theories: BTreeMap<String, TheorySpec>,
    labels: BTreeMap<String, BlockHash>,
    queue: BTreeMap<(u64, u64), Msg>,
    link_last: BTreeMap<(usize, usize), u64>,
    requested: HashSet<(usize, ItemRef)>,
    cuts: Vec<Cut>,
    rng: ChaCha8Rng,
    seq: u64,
    pub now: u64,
    base_delay: u64,
    jitter: u64,
    lenient: bool,
    pub net: NetStats,
}

/// The shipped corpus by name: every proof document plus "categories".
pub fn corpus_docs() -> BTreeMap<String, Document> {
    let lib = corpus::library();
    let mut out: BTreeMap<String, Document> = corpus::PROOF_DOCS
        .iter()
        .map(|(n, src)| (n.to_string(), parse_doc(src, &lib).expect("shipped document parses")))
        .collect();
    out.insert("categories".into(), parse_doc(corpus::CATEGORIES_SRC, &lib).expect("shipped document parses"));
    out
}

fn corpus_theories() -> BTreeMap<String, TheorySpec> {
    [corpus::mini_hf(), corpus::mini_hotg()].into_iter().map(|t| (t.name.clone(), t)).collect()
}

impl Sim {
    pub fn new(sc: &Scenario) -> Result<Sim, ScenarioError> {
        if sc.nodes == 0 {
            return Err(ScenarioError::NoNodes);
        }
        let genesis = sc.genesis.build();
        let nodes = (0..sc.nodes).map(|_| Arc::new(Node::new(&genesis))).collect();
        Ok(Sim {
            nodes,
            params: genesis.params.clone(),
            seeds: sc.genesis.producer_seeds.clone(),
            genesis,
            keys: BTreeMap::new(),
            docs: corpus_docs(),
            theories: corpus_theories(),
            labels: BTreeMap::new(),
            queue: BTreeMap::new(),
            link_last: BTreeMap::new(),
            requested: HashSet::new(),
            cuts: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(sc.seed),
            seq: 0,
            now: 0,
            base_delay: sc.base_delay,
            jitter: sc.jitter,
            lenient: sc.lenient,
            net: NetStats::default(),
        })
    }

    fn key(&mut self, seed: u64) -> Keypair {
        self.keys.entry(seed).or_insert_with(|| Keypair::from_seed(seed)).clone()
    }

    pub fn label(&self, l: &str) -> Option<BlockHash> {
        self.labels.get(l).copied()
    }

    fn cut_until(&self, a: usize, b: usize, at: u64) -> Option<u64> {
        self.cuts
            .iter()
            .filter(|c| at < c.until && (c.nodes.contains(&a) != c.nodes.contains(&b)))
            .map(|c| c.until)
            .max()
    }

    fn send(&mut self, from: usize, to: usize, body: Wire) {
        let jitter = if self.jitter > 0 { self.rng.gen_range(0..=self.jitter) } else { 0 };
        let mut at = self.now + self.base_delay + jitter;
        if let Some(u) = self.cut_until(from, to, self.now) {
            self.net.held += 1;
            at = at.max(u);
        }
        let last = self.link_last.entry((from, to)).or_insert(0);
        at = at.max(*last);
        *last = at;
        self.seq += 1;
        self.net.sent += 1;
        self.queue.insert((at, self.seq), Msg { from, to, body });
    }

    fn announce(&mut self, from: usize, item: ItemRef, except: Option<usize>) {
        for to in 0..self.nodes.len() {
            if to != from && Some(to) != except {
                self.send(from, to, Wire::Inv(item));
            }
        }
    }

    fn receive_block(&mut self, node: usize, from: Option<usize>, b: Block) {
        let h = b.hash();
        let parent = b.parent();
        match self.nodes[node].insert_block(b) {
            Accept::Duplicate => self.net.duplicates += 1,
            r => {
                self.requested.remove(&(node, ItemRef::Block(h)));
                if let (Accept::Orphaned, Some(src)) = (&r, from) {
                    if self.requested.insert((node, ItemRef::Block(parent))) {
                        self.send(node, src, Wire::GetData(ItemRef::Block(parent)));
                    }
                }
                self.announce(node, ItemRef::Block(h), from);
            }
        }
    }

    fn deliver(&mut self, m: Msg) {
        self.net.delivered += 1;
        let node = self.nodes[m.to].clone();
        match m.body {
            Wire::Inv(item) => {
                let known = match item {
                    ItemRef::Block(h) => node.knows_block(&h),
                    ItemRef::Tx(t) => node.mempool_tx(&t).is_some() || node.snapshot().txs.contains_key(&t),
                };
                if known {
                    self.net.duplicates += 1;
                } else if self.requested.insert((m.to, item)) {
                    self.send(m.to, m.from, Wire::GetData(item));
                }
            }
            Wire::GetData(ItemRef::Block(h)) => {
                match node.find_block(&h) {
                    Some(b) => self.send(m.to, m.from, Wire::Block(Arc::new(b))),
                    None => self.send(m.to, m.from, Wire::NotFound(ItemRef::Block(h))),
                }
            }
            Wire::GetData(ItemRef::Tx(t)) => {
                match node.mempool_tx(&t) {
                    Some(tx) => self.send(m.to, m.from, Wire::Tx(tx)),
                    None => self.send(m.to, m.from, Wire::NotFound(ItemRef::Tx(t))),
                }
            }
            Wire::NotFound(item) => {
                self.requested.remove(&(m.to, item));
            }
            Wire::Block(b) => self.receive_block(m.to, Some(m.from), (*b).clone()),
            Wire::Tx(tx) => {
                let id = tx.txid();
                self.requested.remove(&(m.to, ItemRef::Tx(id)));
                if node.submit_tx(tx).is_ok() {
                    self.announce(m.to, ItemRef::Tx(id), Some(m.from));
                }
            }
        }
    }

    /// Pops the earliest message that may cross its link now; held messages
    /// are moved to when their partition heals.
    fn pop(&mut self, to: Option<usize>, until: Option<u64>) -> Option<Msg> {
        loop {
            let key = *self.queue.iter().find(|(_, m)| to.is_none_or(|t| m.to == t))?.0;
            if until.is_some_and(|u| key.0 > u) {
                return None;
            }
            let m = self.queue.remove(&key).unwrap();
            let at = key.0.max(self.now);
            if let Some(heal) = self.cut_until(m.from, m.to, at) {
                self.net.held += 1;
                self.seq += 1;
                self.queue.insert((heal, self.seq), m);
                continue;
            }
            self.now = at;
            return Some(m);
        }
    }

    pub fn run(&mut self, until: Option<u64>) {
        while let Some(m) = self.pop(None, until) {
            self.deliver(m);
        }
        if let Some(u) = until {
            self.now = self.now.max(u);
        }
    }

    fn resolve_doc(&self, step: usize, name: &str) -> Result<Document, ScenarioError> {
        self.docs.get(name).cloned().ok_or_else(|| ScenarioError::UnknownDoc { step, name: name.into() })
    }

    fn resolve_prop(&self, step: usize, st: &ChainState, r: &PropRef) -> Result<(TheoryId, PropId), ScenarioError> {
        let bad = |reason: String| ScenarioError::BadProp { step, reason };
        match r {
            PropRef::Id { prop, theory } => {
                let p = PropId::from_hex(prop).map_err(|e| bad(e.to_string()))?;
                let th = match theory {
                    Some(t) => TheoryId::from_hex(t).map_err(|e| bad(e.to_string()))?,
                    None => self.params.builtin_theory,
                };
                Ok((th, p))
            }
            PropRef::Thm { doc, thm, refuted } => {
                let d = self.resolve_doc(step, doc)?;
                let sig = st.theories.get(&d.theory).ok_or_else(|| bad(format!("theory of {doc} not published")))?;
                let eff = check_doc(sig, &d).map_err(|e| bad(e.to_string()))?;
                let t = eff.thms.get(*thm).ok_or_else(|| bad(format!("{doc} has no theorem {thm}")))?;
                if *refuted {
                    let q = t.refutes.ok_or_else(|| bad(format!("theorem {thm} of {doc} refutes nothing")))?;
                    Ok((d.theory, q))
                } else {
                    Ok((d.theory, t.id))
                }
            }
            PropRef::Conj { doc, conj } => {
                let d = self.resolve_doc(step, doc)?;
                let sig = st.theories.get(&d.theory).ok_or_else(|| bad(format!("theory of {doc} not published")))?;
                let eff = check_doc(sig, &d).map_err(|e| bad(e.to_string()))?;
                let c = eff.conjs.get(*conj).ok_or_else(|| bad(format!("{doc} has no conjecture {conj}")))?;
                Ok((d.theory, c.id))
            }
        }
    }

    /// Builds one intent against `st`.
    pub fn build_intent(&mut self, step: usize, st: &ChainState, it: &Intent) -> Result<Tx, ScenarioError> {
        let build = |e: BuildError| ScenarioError::Build { step, reason: e.to_string() };
        match it {
            Intent::Transfer { from, to, amount, fee } => {
                let k = self.key(*from);
                let to = Addr::pay_to_key(&self.key(*to).public());
                builder::transfer(st, &k, to, *amount, *fee).map_err(build)
            }
            Intent::PublishTheory { from, theory, fee } => {
                let spec = self
                    .theories
                    .get(theory)
                    .cloned()
                    .ok_or_else(|| ScenarioError::UnknownTheory { step, name: theory.clone() })?;
                let k = self.key(*from);
                builder::publish_theory(st, &k, &spec, *fee).map_err(build)
            }
            Intent::PlaceBounty { from, prop, amount, fee } => {
                let (th, p) = self.resolve_prop(step, st, prop)?;
                let k = self.key(*from);
                builder::place_bounty(st, &k, &th, &p, *amount, *fee).map_err(build)
            }
            Intent::Marker { from, doc, fee } => {
                let d = self.resolve_doc(step, doc)?;
                let k = self.key(*from);
                builder::marker(st, &k, &d, *fee).map_err(build)
            }
            Intent::PublishDoc { from, doc, fee } => {
                let d = self.resolve_doc(step, doc)?;
                let k = self.key(*from);
                builder::publish_doc(st, &k, &d, *fee).map_err(build)
            }
            Intent::Collect { from, prop, to, fee } => {
                let (th, p) = self.resolve_prop(step, st, prop)?;
                let a = Addr::prop(&th, &p);
                let bounties: Vec<_> =
                    st.live_at(&a).filter(|x| matches!(x.payload, Payload::Bounty { .. })).map(|x| x.id).collect();
                if bounties.is_empty() {
                    return Err(ScenarioError::Build { step, reason: "no live bounty on the proposition".into() });
                }
                let k = self.key(*from);
                let to = Addr::pay_to_key(&self.key(to.unwrap_or(*from)).public());
                builder::collect_bounty(st, &k, &bounties, to, *fee).map_err(build)
            }
        }
    }

    /// Builds intents in order, each against the state left by the previous.
    fn build_txs(&mut self, step: usize, st: &ChainState, height: u64, intents: &[Intent]) -> Result<Vec<Tx>, ScenarioError> {
        let mut scratch = st.clone();
        let mut out = Vec::new();
        for it in intents {
            let tx = match self.build_intent(step, &scratch, it) {
                Ok(tx) => tx,
                Err(_) if self.lenient => continue,
                Err(e) => return Err(e),
            };
            match crate::ledger::validate_tx(&scratch, &self.params, &tx, height) {
                Ok(eff) => scratch.apply_tx(&eff),
                Err(_) if self.lenient => continue,
                Err(e) => return Err(ScenarioError::Rejected { step, reason: e.to_string() }),
            }
            out.push(tx);
        }
        Ok(out)
    }

    fn resign_tx(&mut self, tx: &mut Tx) {
        let keys: Vec<Keypair> = self.keys.values().cloned().collect();
        let refs: Vec<&Keypair> = keys.iter().collect();
        tx.sign(&refs);
    }

    fn producer_key(&mut self, height: u64) -> Keypair {
        let seed = self.seeds[(height % self.seeds.len() as u64) as usize];
        self.key(seed)
    }

    #[allow(clippy::too_many_arguments)]
    fn produce(
        &mut self,
        step: usize,
        label: &Option<String>,
        parent: &str,
        node: usize,
        intents: &[Intent],
        mempool: bool,
        flags: &Flags,
    ) -> Result<BlockHash, ScenarioError> {
        if node >= self.nodes.len() {
            return Err(ScenarioError::BadNode { step, node });
        }
        if let Some(l) = label {
            if self.labels.contains_key(l) {
                return Err(ScenarioError::DuplicateLabel { step, label: l.clone() });
            }
        }
        let n = self.nodes[node].clone();
        let unknown = parent == "unknown" || flags.orphan_parent;
        let base = match parent {
            "tip" | "unknown" => n.tip(),
            "genesis" => self.genesis.block.hash(),
            l => self.label(l).ok_or_else(|| ScenarioError::UnknownLabel { step, label: l.into() })?,
        };
        let st = n
            .state_at(&base)
            .ok_or_else(|| ScenarioError::ParentUnavailable { step, node, parent: parent.into() })?;
        let height = st.height + 1;
        let mut txs = self.build_txs(step, &st, height, intents)?;
        if mempool {
            let mut scratch = st.clone();
            for tx in &txs {
                if let Ok(e) = crate::ledger::validate_tx(&scratch, &self.params, tx, height) {
                    scratch.apply_tx(&e);
                }
            }
            for tx in n.mempool() {
                if let Ok(e) = crate::ledger::validate_tx(&scratch, &self.params, &tx, height) {
                    scratch.apply_tx(&e);
                    txs.push(tx);
                }
            }
        }
        let key = self.producer_key(height);
        let ts = self.genesis.block.header.timestamp + 60 * height + step as u64;
        let mut b = next_block(&self.params, &st, &key, ts, txs);
        let lenient = self.lenient;
        let unused = |flag: &'static str| ScenarioError::FlagUnused { step, flag };
        if flags.corrupt_proof && !(lenient && !b.txs.iter().any(|t| matches!(t.attachment, Some(Attachment::Doc(_))))) {
            let tx = b
                .txs
                .iter_mut()
                .find(|t| matches!(t.attachment, Some(Attachment::Doc(_))))
                .ok_or_else(|| unused("corrupt_proof"))?;
            let Some(Attachment::Doc(d)) = &mut tx.attachment else { unreachable!() };
            let thm = d
                .items
                .iter_mut()
                .find_map(|i| match i {
                    Item::Thm { proof, .. } => Some(proof),
                    _ => None,
                })
                .ok_or_else(|| unused("corrupt_proof"))?;
            *thm = Proof::Ext(Ty::Prop, Ty::Prop);
            self.resign_tx(tx);
        }
        if flags.double_spend && !(lenient && b.txs.len() < 2) {
            let tx = b
                .txs
                .iter_mut()
                .find(|t| t.coinbase.is_none())
                .ok_or_else(|| unused("double_spend"))?;
            let dup = tx.inputs[0].clone();
            tx.inputs.push(dup);
            self.resign_tx(tx);
        }
        if unknown {
            let nonce = self.rng.gen::<u64>();
            b.header.parent = BlockHash(sha256(&[b"unknown parent".as_slice(), &nonce.to_le_bytes()].concat()));
        }
        b.header.body_hash = merkle_root(&b.txs);
        b.header.sign(&key);
        if flags.bad_sig {
            b.header.sig.0[0] ^= 1;
        }
        let h = b.hash();
        if let Some(l) = label {
            self.labels.insert(l.clone(), h);
        }
        self.receive_block(node, None, b);
        Ok(h)
    }

    pub fn step(&mut self, i: usize, s: &Step) -> Result<(), ScenarioError> {
        match s {
            Step::Produce { label, parent, node, txs, mempool, flags } => {
                self.produce(i, label, parent, *node, txs, *mempool, flags)?;
            }
            Step::Deliver { to, count } => {
                let mut left = count.unwrap_or(usize::MAX);
                while left > 0 {
                    let Some(m) = self.pop(*to, None) else { break };
                    self.deliver(m);
                    left -= 1;
                }
            }
            Step::Partition { nodes, duration } => {
                self.cuts.push(Cut { nodes: nodes.iter().copied().collect(), until: self.now + duration });
            }
            Step::SubmitTx { node, tx } => {
                if *node >= self.nodes.len() {
                    return Err(ScenarioError::BadNode { step: i, node: *node });
                }
                let n = self.nodes[*node].clone();
                let st = n.pool_state();
                let tx = match self.build_intent(i, &st, tx) {
                    Ok(tx) => tx,
                    Err(_) if self.lenient => return Ok(()),
                    Err(e) => return Err(e),
                };
                let id = tx.txid();
                match n.submit_tx(tx) {
                    Ok(_) => self.announce(*node, ItemRef::Tx(id), None),
                    Err(_) if self.lenient => {}
                    Err(e) => return Err(ScenarioError::Rejected { step: i, reason: e.to_string() }),
                }
            }
            Step::Run { until } => self.run(*until),
        }
        Ok(())
    }

    pub fn report(&self, name: &str, seed: u64) -> ScenarioResult {
        let nodes: Vec<NodeReport> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let snap = n.snapshot();
                NodeReport {
                    node: i,
                    tip: snap.tip,
                    height: snap.stats.height,
                    digest: snap.digest_hex(),
                    counts: class_counts(&snap.graph),
                    dot: graph_dot(&snap.graph),
                    graph: snap.graph.clone(),
                }
            })
            .collect();
        let converged = nodes.windows(2).all(|w| w[0].tip == w[1].tip && w[0].digest == w[1].digest);
        ScenarioResult {
            name: name.into(),
            seed,
            nodes,
            labels: self.labels.clone(),
            converged,
            net: self.net.clone(),
            time: self.now,
        }
    }
}

/// Runs every step, settles the network if asked, and reports each node.
pub fn run_scenario(sc: &Scenario) -> Result<ScenarioResult, ScenarioError> {
    Ok(run_sim(sc)?.report(&sc.name, sc.seed))
}

/// Runs a scenario and hands back the live network for inspection.
pub fn run_sim(sc: &Scenario) -> Result<Sim, ScenarioError> {
    let mut sim = Sim::new(sc)?;
    for (i, s) in sc.steps.iter().enumerate() {
        sim.step(i, s)?;
    }
    if sc.settle {
        sim.run(None);
    }
    Ok(sim)
}
