//! One node: block tree, mempool, optional on-disk store and the explorer
//! index, behind a single writer lock.

use std::io;
use std::path::Path;
use std::sync::Arc;
use std::thread::JoinHandle;

use parking_lot::Mutex;
use serde::Serialize;

use crate::docform::{check_doc_report, parse_doc, ItemReport, Library};
use crate::hash::{BlockHash, DecodeError, TxId};
use crate::indexer::{IndexError, IndexSnapshot, Indexer, RefreshPolicy};
use crate::ledger::builder::next_block;
use crate::ledger::{validate_tx, Accept, Block, BlockTree, ChainState, Genesis, Keypair, Store, Tx, TxError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubmitError {
    #[error("decode error: {0}")]
    Decode(#[from] DecodeError),
    #[error("transaction invalid: {0}")]
    TxInvalid(TxError),
    #[error("transaction already in the mempool")]
    Duplicate,
    #[error("node is read-only")]
    ReadOnly,
}

impl SubmitError {
    pub fn code(&self) -> &'static str {
        match self {
            SubmitError::Decode(_) => "DecodeError",
            SubmitError::TxInvalid(_) => "TxInvalid",
            SubmitError::Duplicate => "Duplicate",
            SubmitError::ReadOnly => "ReadOnly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DocCheck {
    Checked { theory: String, ok: bool, items: Vec<ItemReport> },
    SyntaxError { code: String, message: String, line: u32, col: u32 },
}

struct Inner {
    tree: BlockTree,
    mempool: Vec<Tx>,
    /// Tip state with the mempool applied; new transactions validate against it.
    pool_state: ChainState,
    store: Option<Store>,
}

pub struct Node {
    inner: Mutex<Inner>,
    indexer: Indexer,
}

impl Node {
    pub fn new(g: &Genesis) -> Node {
        let mut tree = BlockTree::new(g);
        let mut snap = IndexSnapshot::empty();
        for ev in tree.take_events() {
            snap.apply_event(&ev).expect("genesis indexes");
        }
        snap.observe_tree(&tree);
        let pool_state = tree.tip_state().clone();
        Node { inner: Mutex::new(Inner { tree, mempool: Vec::new(), pool_state, store: None }), indexer: Indexer::new(snap) }
    }

    /// Opens (or creates) a data directory and replays the stored blocks.
    pub fn open(g: &Genesis, dir: impl AsRef<Path>) -> io::Result<Node> {
        let store = Store::open(dir)?;
        let node = Node::new(g);
        for b in store.load_blocks()? {
            node.insert_block(b);
        }
        node.inner.lock().store = Some(store);
        Ok(node)
    }

    pub fn snapshot(&self) -> Arc<IndexSnapshot> {
        self.indexer.snapshot()
    }

    pub fn with_tree<R>(&self, f: impl FnOnce(&BlockTree) -> R) -> R {
        f(&self.inner.lock().tree)
    }

    pub fn tip_state(&self) -> ChainState {
        self.inner.lock().tree.tip_state().clone()
    }

    pub fn mempool(&self) -> Vec<Tx> {
        self.inner.lock().mempool.clone()
    }

    pub fn pool_state(&self) -> ChainState {
        self.inner.lock().pool_state.clone()
    }

    pub fn mempool_tx(&self, id: &TxId) -> Option<Tx> {
        self.inner.lock().mempool.iter().find(|t| t.txid() == *id).cloned()
    }

    /// A stored or parked block.
    pub fn find_block(&self, h: &BlockHash) -> Option<Block> {
        let g = self.inner.lock();
        g.tree.get(h).map(|n| (*n.block).clone()).or_else(|| g.tree.orphan(h).map(|b| (**b).clone()))
    }

    pub fn knows_block(&self, h: &BlockHash) -> bool {
        self.inner.lock().tree.contains(h)
    }

    pub fn tip(&self) -> BlockHash {
        self.inner.lock().tree.tip()
    }

    /// State after `h`, if `h` is a valid block this node holds.
    pub fn state_at(&self, h: &BlockHash) -> Option<ChainState> {
        self.inner.lock().tree.get(h).and_then(|n| n.state.as_ref().map(|s| (**s).clone()))
    }

    pub fn params(&self) -> crate::ledger::Params {
        self.inner.lock().tree.params.clone()
    }

    /// Validates against the tip state plus pending transactions and admits
    /// the transaction to the mempool.
    pub fn submit_tx(&self, tx: Tx) -> Result<TxId, SubmitError> {
        let mut g = self.inner.lock();
        let txid = tx.txid();
        if g.mempool.iter().any(|t| t.txid() == txid) {
            return Err(SubmitError::Duplicate);
        }
        let height = g.tree.height() + 1;
        let eff = validate_tx(&g.pool_state, &g.tree.params, &tx, height).map_err(SubmitError::TxInvalid)?;
        g.pool_state.apply_tx(&eff);
        g.mempool.push(tx);
        Ok(txid)
    }

    pub fn submit_hex(&self, hex: &str) -> Result<TxId, SubmitError> {
        self.submit_tx(Tx::from_hex(hex.trim())?)
    }

    pub fn insert_block(&self, b: Block) -> Accept {
        let mut g = self.inner.lock();
        let bytes_for_store = g.store.is_some().then(|| b.clone());
        let r = g.tree.insert(b);
        if r != Accept::Duplicate {
            if let (Some(store), Some(b)) = (&g.store, bytes_for_store) {
                store.append_block(&b).expect("block store is writable");
            }
        }
        let events = g.tree.take_events();
        if !events.is_empty() {
            Self::refresh_mempool(&mut g);
        }
        self.indexer.apply(&events, &g.tree).expect("index follows the block tree");
        r
    }

    fn refresh_mempool(g: &mut Inner) {
        let mut st = g.tree.tip_state().clone();
        let height = g.tree.height() + 1;
        let params = g.tree.params.clone();
        let pending = std::mem::take(&mut g.mempool);
        for tx in pending {
            if let Ok(eff) = validate_tx(&st, &params, &tx, height) {
                st.apply_tx(&eff);
                g.mempool.push(tx);
            }
        }
        g.pool_state = st;
    }

    /// Builds a block on the tip from the mempool, signed by `key`, and inserts it.
    pub fn produce(&self, key: &Keypair, timestamp: u64) -> (Block, Accept) {
        let b = {
            let g = self.inner.lock();
            next_block(&g.tree.params, g.tree.tip_state(), key, timestamp, g.mempool.clone())
        };
        let r = self.insert_block(b.clone());
        (b, r)
    }

    /// Recomputes the index from genesis and swaps it in.
    pub fn rebuild_index(&self) -> Result<Arc<IndexSnapshot>, IndexError> {
        let g = self.inner.lock();
        let snap = IndexSnapshot::rebuild(&g.tree)?;
        self.indexer.replace(snap);
        Ok(self.indexer.snapshot())
    }

    /// Writes the current index to the store, keyed by tip hash.
    pub fn persist_index(&self) -> io::Result<()> {
        let g = self.inner.lock();
        if let Some(store) = &g.store {
            let snap = self.indexer.snapshot();
            store.put_snapshot(snap.tip.as_bytes(), &*snap)?;
        }
        Ok(())
    }

    /// Parses and checks a document against the theories known at the tip.
    pub fn check_doc_text(&self, text: &str) -> DocCheck {
        let st = self.tip_state();
        let mut lib = Library::new();
        for spec in st.specs.values() {
            lib.insert(spec.clone()).expect("published theories check");
        }
        check_doc_in(&lib, text)
    }

    /// Starts the periodic full rebuild when the policy asks for one.
    pub fn spawn_refresher(self: &Arc<Self>, policy: &RefreshPolicy) -> Option<JoinHandle<()>> {
        let every = policy.rebuild_interval?;
        let weak = Arc::downgrade(self);
        Some(std::thread::spawn(move || loop {
            std::thread::sleep(every);
            match weak.upgrade() {
                Some(node) => {
                    node.rebuild_index().expect("rebuild from a valid tree");
                }
                None => return,
            }
        }))
    }
}

/// Parses `text` against `lib` and reports per item. Shared by the node and
/// the offline command line checker.
pub fn check_doc_in(lib: &Library, text: &str) -> DocCheck {
    match parse_doc(text, lib) {
        Err(e) => {
            let (line, col) = e.position();
            DocCheck::SyntaxError { code: e.code().into(), message: e.to_string(), line, col }
        }
        Ok(doc) => {
            let spec = lib.get(&doc.theory).expect("parser resolved the theory");
            let sig = spec.signature().expect("library theories check");
            let items = check_doc_report(&sig, &doc);
            let ok = items.iter().all(|i| matches!(i.status, crate::docform::ItemStatus::Ok { .. }));
            DocCheck::Checked { theory: doc.theory.to_hex(), ok, items }
        }
    }
}
