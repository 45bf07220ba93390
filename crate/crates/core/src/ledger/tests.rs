use super::builder::{self, coinbase, next_block};
use super::*;
use crate::docform::{corpus, parse_doc, Document};
use crate::hash::{AssetId, PropId};
use crate::kernel::{prop_id, typecheck, Ty};

struct Chain {
    tree: BlockTree,
    keys: Vec<Keypair>,
    time: u64,
}

impl Chain {
    fn new(seeds: Vec<u64>) -> Chain {
        let cfg = GenesisConfig::with_seeds(seeds);
        let g = cfg.build();
        Chain { tree: BlockTree::new(&g), keys: cfg.producer_keys(), time: cfg.timestamp }
    }

    fn st(&self) -> &ChainState {
        self.tree.tip_state()
    }

    fn producer(&self) -> &Keypair {
        let h = self.st().height + 1;
        &self.keys[(h % self.keys.len() as u64) as usize]
    }

    fn block(&mut self, txs: Vec<Tx>) -> Block {
        self.time += 60;
        next_block(&self.tree.params, self.st(), self.producer(), self.time, txs)
    }

    fn mine(&mut self, txs: Vec<Tx>) -> Accept {
        let b = self.block(txs);
        self.tree.insert(b)
    }

    fn mine_n(&mut self, n: usize) {
        for _ in 0..n {
            assert_eq!(self.mine(vec![]), Accept::Stored);
        }
    }
}

fn key(seed: u64) -> Keypair {
    Keypair::from_seed(seed)
}

fn addr(seed: u64) -> Addr {
    Addr::pay_to_key(&key(seed).public())
}

fn doc(name: &str) -> Document {
    let src = corpus::PROOF_DOCS.iter().find(|(n, _)| *n == name).unwrap().1;
    parse_doc(src, &corpus::library()).unwrap()
}

#[test]
fn golden_theory_id_and_address() {
    // frozen from an independent serializer + SHA-256 / Ed25519 oracle
    assert_eq!(
        corpus::mini_hf().id().unwrap().to_hex(),
        "d6f3c25b5d90fff892eba9636a231f88a1d28d725028e10580a1236957bc5d46"
    );
    assert_eq!(key(0).public().to_hex(), "fe924a18ffeb7d3c1d4d39375fdf617c16c0045fdd29c921d18d5bab1b204f9d");
    assert_eq!(addr(0).to_hex(), "31993ca0329ce805ef7764209897a9d8aed03f5843");
}

#[test]
fn prop_addresses_are_distinct_over_corpus() {
    let lib = corpus::library();
    let mut seen = std::collections::HashSet::new();
    let th = corpus::mini_hf().id().unwrap();
    for (_, src) in corpus::PROOF_DOCS {
        let d = parse_doc(src, &lib).unwrap();
        let sig = lib.get(&d.theory).unwrap().signature().unwrap();
        let eff = crate::docform::check_doc(&sig, &d).unwrap();
        for t in eff.thms {
            seen.insert((t.id, Addr::prop(&d.theory, &t.id)));
        }
    }
    let ids: std::collections::HashSet<_> = seen.iter().map(|(i, _)| *i).collect();
    let addrs: std::collections::HashSet<_> = seen.iter().map(|(_, a)| *a).collect();
    assert_eq!(ids.len(), addrs.len());
    assert_eq!(Addr::prop(&th, &PropId::ZERO), Addr::prop(&th, &PropId::ZERO));
}

#[test]
fn random_prop_golden() {
    let sig = corpus::mini_hf().signature().unwrap();
    let t = gen_random_prop(&[0; 32]);
    let names = crate::docform::Names::for_theory(&corpus::mini_hf());
    assert_eq!(crate::docform::print_term(&names, &t), GOLDEN_RANDOM_PROP);
    assert_eq!(prop_id(&sig, &t).unwrap().to_hex(), GOLDEN_RANDOM_PROP_ID);
}

// frozen from the first run of the generator
const GOLDEN_RANDOM_PROP: &str = "all (x0 : set) (x1 : set) (x2 : set) => In (Union (Power Empty)) (Power (Adjoin Empty Empty)) -> all (x3 : set) => In (Adjoin x3 (Adjoin x2 x1)) (Union (Union x1))";
const GOLDEN_RANDOM_PROP_ID: &str = "c274fb69c2cd817531870178cb39afa29e00865f170a4a71fff4bfe363a09ba1";

#[test]
fn random_props_typecheck_and_differ() {
    let sig = corpus::mini_hf().signature().unwrap();
    let mut ids = std::collections::HashSet::new();
    for i in 0u8..100 {
        let mut seed = [0u8; 32];
        seed[0] = i;
        seed[31] = 7;
        let t = gen_random_prop(&seed);
        assert_eq!(typecheck(&sig, &[], &t).unwrap(), Ty::Prop);
        assert_eq!(gen_random_prop(&seed), t);
        ids.insert(prop_id(&sig, &t).unwrap());
    }
    assert_eq!(ids.len(), 100);
}

#[test]
fn transfer_then_double_spend() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let tx = builder::transfer(c.st(), &key(1), addr(2), 10 * BAR, BAR).unwrap();
    let eff = validate_tx(c.st(), &c.tree.params, &tx, c.st().height + 1).unwrap();
    assert_eq!(eff.fee, BAR);
    assert_eq!(c.mine(vec![tx.clone()]), Accept::Stored);
    assert_eq!(c.st().balance(&addr(2)), 10 * BAR);
    let e = validate_tx(c.st(), &c.tree.params, &tx, c.st().height + 1).unwrap_err();
    assert!(matches!(e, TxError::DoubleSpend(_)));
    // conservation
    let st = c.st();
    assert_eq!(st.live_value() + st.fees, st.subsidies);
    assert!(st.spent.iter().all(|id| !st.assets.contains_key(id)));
}

#[test]
fn signatures_and_value_are_checked() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let params = c.tree.params.clone();
    let st = c.st().clone();
    let mut tx = builder::transfer(&st, &key(1), addr(2), BAR, 0).unwrap();
    tx.inputs[0].sig.0[3] ^= 1;
    assert_eq!(validate_tx(&st, &params, &tx, 2), Err(TxError::BadSignature(0)));
    // a valid signature by the wrong key
    let coin = builder::coins(&st, &addr(1))[0].id;
    let mut tx = Tx::new(vec![(coin, key(2).public())], vec![], None);
    tx.sign(&[&key(2)]);
    assert_eq!(validate_tx(&st, &params, &tx, 2), Err(TxError::BadSignature(0)));
    let total = st.balance(&addr(1));
    let mut tx = builder::transfer(&st, &key(1), addr(2), BAR, 0).unwrap();
    tx.outputs[0].payload = Payload::Currency { amount: total + 1 };
    tx.sign(&[&key(1)]);
    assert!(matches!(validate_tx(&st, &params, &tx, 2), Err(TxError::ValueCreated(_))));
    let mut tx = Tx::new(vec![(AssetId([9; 32]), key(1).public())], vec![], None);
    tx.sign(&[&key(1)]);
    assert_eq!(validate_tx(&st, &params, &tx, 2), Err(TxError::MissingInput(AssetId([9; 32]))));
    let tx = Tx::new(vec![], vec![], None);
    assert_eq!(validate_tx(&st, &params, &tx, 2), Err(TxError::NoInputs));
}

#[test]
fn marker_must_mature_and_match() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let d = doc("p01_identity");
    let m = builder::marker(c.st(), &key(1), &d, BAR).unwrap();
    assert_eq!(c.mine(vec![m]), Accept::Stored);
    let born = c.st().height;
    let params = c.tree.params.clone();
    let publish = builder::publish_doc(c.st(), &key(1), &d, 0).unwrap();
    let e = validate_tx(c.st(), &params, &publish, born + 3).unwrap_err();
    assert_eq!(e, TxError::MarkerImmature { born, height: born + 3 });
    let eff = validate_tx(c.st(), &params, &publish, born + 4).unwrap();
    assert_eq!(eff.doc.as_ref().unwrap().added_thms.len(), 1);
    // a different document under the same marker
    let other = doc("p02_weaken");
    let mut tx = publish.clone();
    let sig = c.st().theories[&other.theory].clone();
    let deff = crate::docform::check_doc(&sig, &other).unwrap();
    tx.outputs = expected_doc_outputs(c.st(), other.theory, other.id(), &deff, addr(1));
    tx.attachment = Some(Attachment::Doc(other));
    tx.sign(&[&key(1)]);
    assert_eq!(validate_tx(c.st(), &params, &tx, born + 4), Err(TxError::CommitmentMismatch));
    // missing ownership output
    let mut tx = publish.clone();
    tx.outputs.pop();
    tx.sign(&[&key(1)]);
    assert_eq!(validate_tx(c.st(), &params, &tx, born + 4), Err(TxError::OwnershipOutputsWrong));
    c.mine_n(3);
    assert_eq!(c.mine(vec![publish]), Accept::Stored);
    let th = corpus::mini_hf().id().unwrap();
    let thm = c.st().theories[&th].thms.len();
    assert!(thm > 0);
    // ownership cannot be spent
    let own = c.st().assets.values().find(|a| matches!(a.payload, Payload::OwnsProp { .. })).unwrap().id;
    let mut tx = Tx::new(vec![(own, key(1).public())], vec![], None);
    tx.sign(&[&key(1)]);
    assert_eq!(validate_tx(c.st(), &params, &tx, 99), Err(TxError::Unspendable(0)));
}

#[test]
fn reproving_mints_no_ownership() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let d = doc("p01_identity");
    let m = builder::marker(c.st(), &key(1), &d, BAR).unwrap();
    c.mine(vec![m]);
    c.mine_n(3);
    let p = builder::publish_doc(c.st(), &key(1), &d, 0).unwrap();
    assert_eq!(c.mine(vec![p]), Accept::Stored);
    // a second publisher with a renamed copy of the same theorem
    let renamed = Document {
        theory: d.theory,
        items: d
            .items
            .iter()
            .map(|i| match i {
                crate::docform::Item::Thm { name, stmt, proof } => crate::docform::Item::Thm {
                    name: format!("{name}_again"),
                    stmt: stmt.clone(),
                    proof: proof.clone(),
                },
                other => other.clone(),
            })
            .collect(),
    };
    let t = builder::transfer(c.st(), &key(1), addr(2), 5 * BAR, 0).unwrap();
    c.mine(vec![t]);
    let m = builder::marker(c.st(), &key(2), &renamed, BAR).unwrap();
    c.mine(vec![m]);
    c.mine_n(3);
    let p = builder::publish_doc(c.st(), &key(2), &renamed, 0).unwrap();
    assert_eq!(p.outputs.len(), 1, "only the publication output");
    assert_eq!(c.mine(vec![p]), Accept::Stored);
}

#[test]
fn bounty_needs_ownership() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let d = doc("p01_identity");
    let th = d.theory;
    let sig = c.st().theories[&th].clone();
    let pid = crate::docform::check_doc(&sig, &d).unwrap().thms[0].id;
    let b = builder::place_bounty(c.st(), &key(1), &th, &pid, 20 * BAR, 0).unwrap();
    c.mine(vec![b]);
    let bounty = c.st().live_at(&Addr::prop(&th, &pid)).next().unwrap().id;
    let early = builder::collect_bounty(c.st(), &key(1), &[bounty], addr(1), 0).unwrap();
    let params = c.tree.params.clone();
    assert_eq!(validate_tx(c.st(), &params, &early, 9), Err(TxError::BountyNotRedeemable(0)));
    let m = builder::marker(c.st(), &key(1), &d, BAR).unwrap();
    c.mine(vec![m]);
    c.mine_n(3);
    let p = builder::publish_doc(c.st(), &key(1), &d, 0).unwrap();
    c.mine(vec![p]);
    // someone else cannot collect
    let mut other = early.clone();
    other.inputs[0].pubkey = key(3).public();
    other.sign(&[&key(3)]);
    assert_eq!(validate_tx(c.st(), &params, &other, 9), Err(TxError::BountyNotRedeemable(0)));
    let eff = validate_tx(c.st(), &params, &early, 9).unwrap();
    assert_eq!(eff.collections.len(), 1);
    assert!(!eff.collections[0].by_disproof);
}

#[test]
fn encodings_roundtrip() {
    let mut c = Chain::new(vec![1, 2]);
    c.mine_n(2);
    let d = doc("p04_compose");
    let t = builder::transfer(c.st(), &key(2), addr(1), BAR, 1).unwrap();
    let m = builder::marker(c.st(), &key(1), &d, 2).unwrap();
    let b = c.block(vec![t, m]);
    assert_eq!(Block::from_bytes(&b.to_bytes()).unwrap(), b);
    for tx in &b.txs {
        assert_eq!(Tx::from_bytes(&tx.to_bytes()).unwrap(), *tx);
        assert_eq!(Tx::from_hex(&hex::encode(tx.to_bytes())).unwrap(), *tx);
        let json = serde_json::to_string(tx).unwrap();
        assert_eq!(serde_json::from_str::<Tx>(&json).unwrap(), *tx);
    }
    let bytes = b.to_bytes();
    assert!(Block::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    let th = Tx {
        coinbase: None,
        inputs: vec![],
        outputs: vec![],
        attachment: Some(Attachment::Theory(corpus::mini_hotg())),
    };
    assert_eq!(Tx::from_bytes(&th.to_bytes()).unwrap(), th);
}

#[test]
fn auto_bounty_required() {
    let mut c = Chain::new(vec![1]);
    let params = c.tree.params.clone();
    let parent = c.st().tip;
    let mut b = c.block(vec![]);
    let (_, t, a) = auto_bounty_prop(&params, c.st(), &parent);
    assert_eq!(t, gen_random_prop(parent.as_bytes()));
    assert!(b.txs[0].outputs.iter().any(|o| o.addr == a && o.payload == Payload::Bounty { amount: 25 * BAR }));
    b.txs[0].outputs = vec![Output::new(addr(1), Payload::Currency { amount: 50 * BAR })];
    let b = Block::assemble(b.parent(), b.height(), b.header.timestamp, &key(1), b.txs);
    assert_eq!(c.tree.insert(b), Accept::Invalid(BlockError::AutoBountyMissing));
    c.mine_n(10);
    // past the window no bounty is allowed and none is built
    assert_eq!(coinbase(&params, c.st(), addr(1)).outputs.len(), 1);
    let st = c.st();
    assert_eq!(st.live_value() + st.fees, st.subsidies);
    let bounties = st.assets.values().filter(|a| matches!(a.payload, Payload::Bounty { .. })).count();
    assert_eq!(bounties, 10);
}

#[test]
fn header_checks() {
    let mut c = Chain::new(vec![1, 2]);
    let b = c.block(vec![]);
    let mut wrong = b.clone();
    wrong.header.sig.0[0] ^= 1;
    assert_eq!(c.tree.insert(wrong), Accept::Invalid(BlockError::BadHeaderSig));
    let wrong = Block::assemble(b.parent(), 1, 5, &key(1), b.txs.clone());
    assert_eq!(c.tree.insert(wrong), Accept::Invalid(BlockError::BadProducer));
    let mut wrong = b.clone();
    wrong.txs.push(wrong.txs[0].clone());
    wrong.header.timestamp += 1;
    wrong.header.sign(&key(2));
    assert_eq!(c.tree.insert(wrong), Accept::Invalid(BlockError::BadBody));
    assert_eq!(c.tree.insert(b.clone()), Accept::Stored);
    assert_eq!(c.tree.insert(b), Accept::Duplicate);
}

#[test]
fn tie_break_and_hereditary_invalidity() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(2);
    let base = c.st().clone();
    let params = c.tree.params.clone();
    let a = next_block(&params, &base, &key(1), 1000, vec![]);
    let b = next_block(&params, &base, &key(1), 2000, vec![]);
    c.tree.insert(a.clone());
    c.tree.insert(b.clone());
    assert_eq!(c.tree.tip(), a.hash().min(b.hash()));
    // an invalid block and its child never become the tip
    let mut bad = next_block(&params, &base, &key(1), 3000, vec![]);
    bad.txs[0].outputs[0].payload = Payload::Currency { amount: 51 * BAR };
    let bad = Block::assemble(bad.parent(), bad.height(), 3000, &key(1), bad.txs);
    assert!(matches!(c.tree.insert(bad.clone()), Accept::Invalid(_)));
    let child = Block::assemble(bad.hash(), bad.height() + 1, 3100, &key(1), vec![]);
    assert_eq!(c.tree.insert(child.clone()), Accept::Invalid(BlockError::InvalidAncestor(bad.hash())));
    assert_eq!(c.tree.tip(), a.hash().min(b.hash()));
    assert_eq!(c.tree.get(&child.hash()).unwrap().class(), NodeClass::Invalid);
}

#[test]
fn reorg_matches_fresh_replay() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(3);
    let fork_state = c.st().clone();
    let t = builder::transfer(c.st(), &key(1), addr(2), 3 * BAR, 0).unwrap();
    c.mine(vec![t]);
    c.mine_n(1);
    let old_tip = c.tree.tip();
    // a longer competing branch from the fork point
    let params = c.tree.params.clone();
    let mut st = fork_state;
    let mut branch = Vec::new();
    for i in 0..3 {
        let txs = if i == 1 { vec![builder::transfer(&st, &key(1), addr(3), 7 * BAR, BAR).unwrap()] } else { vec![] };
        let b = next_block(&params, &st, &key(1), 9000 + i, txs);
        st = validate_block(&st, &params, &b).unwrap().0;
        branch.push(b);
    }
    for b in &branch {
        c.tree.insert(b.clone());
    }
    assert_ne!(c.tree.tip(), old_tip);
    assert_eq!(c.tree.tip(), branch[2].hash());
    assert_eq!(c.st(), &st);
    assert_eq!(c.st().digest(), st.digest());
    assert_eq!(c.st().balance(&addr(2)), 0);
    assert_eq!(c.st().balance(&addr(3)), 7 * BAR);
    let events = c.tree.take_events();
    let disc = events.iter().filter(|e| matches!(e, ChainEvent::Disconnect { .. })).count();
    assert_eq!(disc, 2);
}

#[test]
fn orphans_wait_for_parents() {
    let mut c = Chain::new(vec![1]);
    let params = c.tree.params.clone();
    let g = c.st().clone();
    let b1 = next_block(&params, &g, &key(1), 1, vec![]);
    let s1 = validate_block(&g, &params, &b1).unwrap().0;
    let b2 = next_block(&params, &s1, &key(1), 2, vec![]);
    assert_eq!(c.tree.insert(b2.clone()), Accept::Orphaned);
    let nodes = classify_graph(&c.tree.graph_entries());
    assert_eq!(class_counts(&nodes)[&NodeClass::Missing], 1);
    assert_eq!(c.tree.insert(b1), Accept::Stored);
    assert_eq!(c.tree.tip(), b2.hash());
    let nodes = classify_graph(&c.tree.graph_entries());
    assert_eq!(class_counts(&nodes)[&NodeClass::Missing], 0);
    assert_eq!(class_counts(&nodes)[&NodeClass::Plain], 3);
    // dropping a block turns its child's parent into a placeholder
    let entries: Vec<_> = c.tree.graph_entries().into_iter().filter(|e| e.height != 1).collect();
    let nodes = classify_graph(&entries);
    let missing: Vec<_> = nodes.iter().filter(|n| n.class == NodeClass::Missing).collect();
    assert_eq!(missing.len(), 1);
    assert_eq!(missing[0].id, b2.parent());
    assert_eq!(graph_dot(&nodes), graph_dot(&classify_graph(&entries)));
}

#[test]
fn classify_by_content() {
    let mut c = Chain::new(vec![1]);
    c.mine_n(1);
    let th = builder::publish_theory(c.st(), &key(1), &corpus::mini_hotg(), BAR).unwrap();
    let b = c.block(vec![th]);
    assert_eq!(classify_block(&b), NodeClass::TheoryBlock);
    assert_eq!(c.tree.insert(b), Accept::Stored);
    let again = builder::publish_theory(c.st(), &key(1), &corpus::mini_hotg(), BAR).unwrap();
    let params = c.tree.params.clone();
    assert!(matches!(validate_tx(c.st(), &params, &again, 3), Err(TxError::AlreadyPublished(_))));
    let t = builder::transfer(c.st(), &key(1), addr(2), BAR, 0).unwrap();
    assert_eq!(classify_block(&c.block(vec![t])), NodeClass::TxOrBountyBlock);
    assert_eq!(classify_block(&c.block(vec![])), NodeClass::Plain);
}

#[test]
fn store_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let mut c = Chain::new(vec![1]);
    let mut blocks = Vec::new();
    for _ in 0..3 {
        let b = c.block(vec![]);
        c.tree.insert(b.clone());
        store.append_block(&b).unwrap();
        blocks.push(b);
    }
    assert_eq!(store.load_blocks().unwrap(), blocks);
    let key = c.st().digest();
    store.put_snapshot(&key, c.st()).unwrap();
    let back: ChainState = store.get_snapshot(&key).unwrap().unwrap();
    assert_eq!(&back, c.st());
    assert!(store.get_snapshot::<ChainState>(&[0; 32]).unwrap().is_none());
}
