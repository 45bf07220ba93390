//! The acceptance checks. Each returns a one-line summary or the first failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use formalchain::api::{self, ApiConfig};
use formalchain::docform::{check_doc, corpus, parse_doc, print_doc, Item, Library};
use formalchain::hash::AssetId;
use formalchain::indexer::IndexSnapshot;
use formalchain::kernel::{beta_eta, prop_id, term_bytes, term_id, typecheck, Signature, Term, Ty};
use formalchain::ledger::{
    builder, gen_random_prop, validate_block, validate_tx, Accept, Addr, Block, BlockError, BlockTree, Keypair,
    NodeClass, Output, Payload, Tx, BAR,
};
use formalchain::node::Node;
use formalchain::simnet::{random_scenario, run_scenario, run_sim, Sim};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mutate::{mutate_doc, Pool};
use super::oracle;
use super::{scenario, SCENARIOS};

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure!(took < limit, "{what} took {took:?}, limit {limit:?}");
    Ok(took)
}

/// 1. Every proof document checks and seeded single-node mutations never
/// yield a different theorem.
pub fn kernel_fixtures() -> Outcome {
    let start = Instant::now();
    let lib = corpus::library();
    ensure!(corpus::PROOF_DOCS.len() >= 15, "only {} proof documents", corpus::PROOF_DOCS.len());
    let (mut rejected, mut same) = (0, 0);
    for (i, (name, src)) in corpus::PROOF_DOCS.iter().enumerate() {
        let doc = parse_doc(src, &lib).map_err(|e| format!("{name}: {e}"))?;
        let sig = lib.get(&doc.theory).unwrap().signature().unwrap();
        let eff = check_doc(&sig, &doc).map_err(|e| format!("{name}: {e}"))?;
        let pool = Pool::new(&eff.sig);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for m in 0..200 {
            let (mutant, at) = mutate_doc(&mut rng, &pool, &doc);
            match check_doc(&sig, &mutant) {
                Err(_) => rejected += 1,
                Ok(meff) => {
                    let want = eff.thms.iter().find(|t| t.index == at).unwrap();
                    let got = meff.thms.iter().find(|t| t.index == at).unwrap();
                    ensure!(
                        got.stmt == want.stmt && got.id == want.id,
                        "{name} mutation {m}: accepted a proof of a different statement"
                    );
                    same += 1;
                }
            }
        }
    }
    let took = within(start, Duration::from_secs(10), "kernel suite")?;
    Ok(format!(
        "{} documents, {rejected} mutants rejected, {same} harmless, {took:.2?}",
        corpus::PROOF_DOCS.len()
    ))
}

/// 2. The kernel's normal form is the unique normal form reachable by any
/// reduction order, for every small closed well-typed term.
pub fn normalization_oracle() -> Outcome {
    let start = Instant::now();
    let sig = oracle::test_signature();
    let terms = oracle::closed_well_typed(&sig, 7);
    ensure!(terms.len() > 1000, "only {} terms enumerated", terms.len());
    let mut redexes = 0;
    for t in &terms {
        let nfs = oracle::all_normal_forms(t, 100_000);
        ensure!(nfs.len() == 1, "{t:?} has {} normal forms", nfs.len());
        let nf = nfs.into_iter().next().unwrap();
        ensure!(beta_eta(t) == nf, "kernel normal form of {t:?} differs from the oracle's {nf:?}");
        ensure!(typecheck(&sig, &[], &nf) == typecheck(&sig, &[], t), "reduction changed the type of {t:?}");
        if nf != *t {
            redexes += 1;
        }
    }
    let took = within(start, Duration::from_secs(60), "normalization oracle")?;
    Ok(format!("{} terms of size <= 7 ({redexes} reducible) agree, {took:.2?}", terms.len()))
}

/// 3. Frozen identifiers.
pub fn golden_ids() -> Outcome {
    let set = Ty::Base(0);
    let sig = Signature { base_count: 1, ..Signature::default() };
    let id_fn = Term::la(set.clone(), Term::Db(0));
    let k = Term::la(set.clone(), Term::la(set.clone(), Term::Db(1)));
    let triv = Term::all(Ty::Prop, Term::imp(Term::Db(0), Term::Db(0)));
    let hf = corpus::mini_hf().id().unwrap();
    let vectors: Vec<(&str, String, &str)> = vec![
        ("term lam x. x", term_id(&sig, &id_fn).unwrap().to_hex(), "a05e0fd883eb67f30f4ef0b6d053db6d166184f7d00fa3594b7aa425839a6d28"),
        ("term lam x y. x", term_id(&sig, &k).unwrap().to_hex(), "e8f405e51484fbcaafec508d08719e3df580683d9304c23ad7188efd573234d8"),
        ("prop all p. p -> p", prop_id(&sig, &triv).unwrap().to_hex(), "17ae0ba758e07a5d65bd0fbabf1dd684bcaaffa727e9defb9ec00cc81e41675d"),
        ("theory mini-HF", hf.to_hex(), "d6f3c25b5d90fff892eba9636a231f88a1d28d725028e10580a1236957bc5d46"),
        (
            "prop address",
            Addr::prop(&hf, &prop_id(&sig, &triv).unwrap()).to_hex(),
            "304eb51c709ec83bf4ccab254c5244a0dd08546d24",
        ),
        ("pubkey seed 0", Keypair::from_seed(0).public().to_hex(), "fe924a18ffeb7d3c1d4d39375fdf617c16c0045fdd29c921d18d5bab1b204f9d"),
        ("key address seed 0", Addr::pay_to_key(&Keypair::from_seed(0).public()).to_hex(), "31993ca0329ce805ef7764209897a9d8aed03f5843"),
    ];
    for (what, got, want) in &vectors {
        ensure!(got == want, "{what}: {got} != {want}");
    }
    ensure!(term_bytes(&id_fn) == [0x14, 0x01, 0x00, 0x10, 0x00], "encoding of lam x. x changed");
    ensure!(corpus::mini_hf().id().unwrap() == hf, "theory id is not stable");
    Ok(format!("{} vectors match", vectors.len()))
}

fn addr(seed: u64) -> Addr {
    Addr::pay_to_key(&Keypair::from_seed(seed).public())
}

fn currency(st: &formalchain::ledger::ChainState, a: &Addr) -> u64 {
    st.live_at(a).filter(|x| matches!(x.payload, Payload::Currency { .. })).map(|x| x.payload.value()).sum()
}

fn lifecycle_run(name: &str, doc: &str, negative: bool) -> Result<(), String> {
    let sc = scenario(name);
    let sim = run_sim(&sc).map_err(|e| format!("{name}: {e}"))?;
    let node = &sim.nodes[0];
    let st = node.tip_state();
    let snap = node.snapshot();
    ensure!(st.height == 26, "{name}: height {}", st.height);
    let label_h = |l: &str| node.with_tree(|t| t.get(&sim.label(l).unwrap()).map(|n| n.block.height()));
    let heights: Vec<_> = ["bounty", "marker", "publish", "collect"].iter().map(|l| label_h(l)).collect();
    ensure!(heights == vec![Some(20), Some(21), Some(25), Some(26)], "{name}: step heights {heights:?}");
    // 27 subsidies of 50, one 1-bar marker fee burned; ten 25-bar auto-bounties stay put;
    // key 1 collects 25 x 10 + 50 x 16 currency plus its 750 back: 1099
    ensure!(st.subsidies == 27 * 50 * BAR, "{name}: subsidies {}", st.subsidies);
    ensure!(st.fees == BAR, "{name}: fees {}", st.fees);
    ensure!(currency(&st, &addr(1)) == 1099 * BAR, "{name}: key 1 holds {}", currency(&st, &addr(1)));
    let auto: u64 = st.assets.values().filter(|a| matches!(a.payload, Payload::Bounty { .. })).map(|a| a.payload.value()).sum();
    ensure!(auto == 250 * BAR, "{name}: live bounties {auto}");
    ensure!(st.live_value() == 1349 * BAR, "{name}: live value {}", st.live_value());
    let d = super::doc(doc);
    let sig = &st.theories[&d.theory];
    let eff = check_doc(&st.theories[&d.theory], &d).map_err(|e| e.to_string())?;
    let _ = sig;
    let thm = &eff.thms[0];
    let target = if negative { thm.refutes.ok_or("theorem refutes nothing")? } else { thm.id };
    let a = Addr::prop(&d.theory, &target);
    ensure!(!st.live_at(&a).any(|x| matches!(x.payload, Payload::Bounty { .. })), "{name}: bounty still live");
    let owner_kind = st.live_at(&a).find_map(|x| match &x.payload {
        Payload::OwnsProp { holder } if !negative => Some(*holder),
        Payload::OwnsNegProp { holder } if negative => Some(*holder),
        _ => None,
    });
    ensure!(owner_kind == Some(addr(1)), "{name}: ownership at {a} is {owner_kind:?}");
    let b = snap.bounties.get(&a).ok_or("bounty not indexed")?;
    ensure!(b.open_amount() == 0 && b.collected_amount() == 750 * BAR, "{name}: bounty entry {b:?}");
    let p = snap.props.get(&a).ok_or("proposition not indexed")?;
    let want = if negative { "disproven" } else { "proven" };
    ensure!(p.status() == want, "{name}: status {}", p.status());
    snap.audit().map_err(|e| format!("{name}: {e}"))?;
    Ok(())
}

/// 4. Place, commit, publish, collect; and the same via a refutation.
pub fn bounty_lifecycle() -> Outcome {
    lifecycle_run("lifecycle", "p01_identity", false)?;
    lifecycle_run("disproof", "p14_refute", true)?;
    Ok("proof and disproof variants match the hand-computed balance sheet".into())
}

/// 5. Block graph classes of the shipped fork scenario.
pub fn graph_classification() -> Outcome {
    let sc = scenario("explorer_graph");
    let a = run_scenario(&sc).map_err(|e| e.to_string())?;
    let b = run_scenario(&sc).map_err(|e| e.to_string())?;
    let want: BTreeMap<NodeClass, usize> = [
        (NodeClass::TheoryBlock, 1),
        (NodeClass::ProofBlock, 2),
        (NodeClass::TxOrBountyBlock, 4),
        (NodeClass::Missing, 1),
        (NodeClass::Invalid, 1),
        (NodeClass::Plain, 3),
    ]
    .into();
    for n in &a.nodes {
        ensure!(n.counts == want, "node {} classes {:?}", n.node, n.counts);
    }
    for (x, y) in a.nodes.iter().zip(&b.nodes) {
        ensure!(x.dot == y.dot, "DOT of node {} differs between runs", x.node);
    }
    let total: usize = want.values().sum();
    Ok(format!("{} nodes x {total} graph nodes, DOT identical across runs", a.nodes.len()))
}

fn check_index(sim: &Sim, what: &str) -> Result<(), String> {
    for (i, n) in sim.nodes.iter().enumerate() {
        let rebuilt = n.with_tree(IndexSnapshot::rebuild).map_err(|e| format!("{what} node {i}: {e}"))?;
        ensure!(*n.snapshot() == rebuilt, "{what} node {i}: incremental index differs from rebuild");
        n.snapshot().audit().map_err(|e| format!("{what} node {i}: {e}"))?;
    }
    Ok(())
}

/// Disconnects and reconnects every main-chain block from the tip down.
fn connect_disconnect_identity(tree: &BlockTree, snap: &IndexSnapshot) -> Result<usize, String> {
    let chain = tree.main_chain();
    let mut s = snap.clone();
    let mut undone = Vec::new();
    for h in chain.iter().skip(1).rev() {
        let n = tree.get(h).unwrap();
        s.apply_disconnect(&n.block, n.effects.as_ref().unwrap()).map_err(|e| e.to_string())?;
        undone.push(n);
    }
    for n in undone.into_iter().rev() {
        let before = s.clone();
        s.apply_connect(&n.block, n.effects.as_ref().unwrap()).map_err(|e| e.to_string())?;
        let mut back = s.clone();
        back.apply_disconnect(&n.block, n.effects.as_ref().unwrap()).map_err(|e| e.to_string())?;
        ensure!(back == before, "disconnect after connect of {} is not the identity", n.block.hash());
    }
    s.observe_tree(tree);
    ensure!(s == *snap, "round trip through genesis changed the index");
    Ok(chain.len() - 1)
}

/// 6. Incremental index equals a full rebuild.
pub fn indexer_oracle() -> Outcome {
    let mut blocks = 0;
    for name in SCENARIOS {
        let sim = run_sim(&scenario(name)).map_err(|e| format!("{name}: {e}"))?;
        check_index(&sim, name)?;
        for n in &sim.nodes {
            blocks += n.with_tree(|t| connect_disconnect_identity(t, &n.snapshot()))?;
        }
    }
    for seed in 0..100 {
        let sim = run_sim(&random_scenario(seed, 3)).map_err(|e| format!("seed {seed}: {e}"))?;
        check_index(&sim, &format!("seed {seed}"))?;
    }
    Ok(format!("{} shipped + 100 random scenarios; {blocks} blocks round-tripped", SCENARIOS.len()))
}

/// 7. After a fork switch the state equals a fresh replay of the winning chain.
pub fn reorg_correctness() -> Outcome {
    let sc = scenario("reorg");
    let sim = run_sim(&sc).map_err(|e| e.to_string())?;
    let c5 = sim.label("c5").unwrap();
    let g = sc.genesis.build();
    for (i, n) in sim.nodes.iter().enumerate() {
        ensure!(n.tip() == c5, "node {i} did not switch to c5");
        let chain: Vec<Block> = n.with_tree(|t| t.main_chain().iter().skip(1).map(|h| (*t.get(h).unwrap().block).clone()).collect());
        let mut st = g.state.clone();
        for b in &chain {
            st = validate_block(&st, &g.params, b).map_err(|e| format!("replay: {e}"))?.0;
        }
        ensure!(st.digest() == n.tip_state().digest(), "node {i}: state differs from replay");
        let fresh = Node::new(&g);
        for b in &chain {
            ensure!(fresh.insert_block(b.clone()) == Accept::Stored, "fresh node refused a block");
        }
        let mut a = (*fresh.snapshot()).clone();
        let mut b = (*n.snapshot()).clone();
        // the forked node also knows the losing branch; compare chain-derived parts
        a.blocks.clear();
        a.graph.clear();
        b.blocks.clear();
        b.graph.clear();
        ensure!(a == b, "node {i}: index differs from a fresh replay");
    }
    Ok(format!("{} nodes reorganised onto c5 and match a fresh replay", sim.nodes.len()))
}

/// 8. Auto-bounties in the first blocks and rejection of a block without one.
pub fn auto_bounties() -> Outcome {
    let sc = scenario("lifecycle");
    let sim = run_sim(&sc).map_err(|e| e.to_string())?;
    let node = &sim.nodes[0];
    let hf = corpus::mini_hf();
    let sig = hf.signature().unwrap();
    let th = hf.id().unwrap();
    let chain = node.with_tree(|t| t.main_chain());
    for h in &chain[1..] {
        let b = node.find_block(h).unwrap();
        let t = gen_random_prop(b.parent().as_bytes());
        let a = Addr::prop(&th, &prop_id(&sig, &t).map_err(|e| e.to_string())?);
        let n = b.txs[0].outputs.iter().filter(|o| o.addr == a && o.payload == Payload::Bounty { amount: 25 * BAR }).count();
        let any = b.txs[0].outputs.iter().any(|o| matches!(o.payload, Payload::Bounty { .. }));
        if b.height() <= 10 {
            ensure!(n == 1, "block {} lacks its auto-bounty", b.height());
        } else {
            ensure!(!any, "block {} carries a bounty past the window", b.height());
        }
    }
    let g = sc.genesis.build();
    let params = g.params.clone();
    let key = Keypair::from_seed(1);
    let good = builder::next_block(&params, &g.state, &key, g.block.header.timestamp + 60, vec![]);
    let mut cb = good.txs[0].clone();
    cb.outputs = vec![Output::new(addr(1), Payload::Currency { amount: 50 * BAR })];
    let bad = Block::assemble(good.parent(), 1, good.header.timestamp, &key, vec![cb]);
    ensure!(
        validate_block(&g.state, &params, &bad).err() == Some(BlockError::AutoBountyMissing),
        "block without auto-bounty was not rejected"
    );
    let mut tree = BlockTree::new(&g);
    ensure!(tree.insert(bad) == Accept::Invalid(BlockError::AutoBountyMissing), "tree accepted the block");
    ensure!(tree.insert(good) == Accept::Stored, "the well-formed block was refused");
    Ok("10 auto-bounties on gen_random_prop(parent); omission rejected".into())
}

/// 9. Category-theory statements parse, check and round-trip.
pub fn category_corpus() -> Outcome {
    let start = Instant::now();
    let lib: Library = corpus::library();
    let doc = parse_doc(corpus::CATEGORIES_SRC, &lib).map_err(|e| e.to_string())?;
    let spec = lib.get(&doc.theory).unwrap();
    let sig = spec.signature().unwrap();
    let eff = check_doc(&sig, &doc).map_err(|e| e.to_string())?;
    let names: Vec<&str> = doc.items.iter().map(|i| i.name()).collect();
    for want in [
        "lam_id",
        "lam_id_in_funcs",
        "BinRelnHom_char",
        "MetaCat_sets",
        "IrrPartOrd_forgetful_has_left_adjoint",
        "F0_discrete",
        "F1_discrete",
        "eta_discrete",
        "eps_discrete",
    ] {
        ensure!(names.contains(&want), "{want} is missing");
    }
    // every statement is a proposition and every definition has its declared type
    for item in &doc.items {
        match item {
            Item::Def { name, ty, .. } => {
                let d = eff.defs.iter().find(|d| &d.name == name).ok_or(format!("{name} not checked"))?;
                ensure!(&d.ty == ty && eff.sig.defs[&d.id].ty == *ty, "{name} has the wrong type");
            }
            Item::Conj { name, stmt, .. } | Item::Thm { name, stmt, .. } => {
                ensure!(typecheck(&eff.sig, &[], stmt) == Ok(Ty::Prop), "{name} is not a proposition");
            }
            Item::Param { .. } => {}
        }
    }
    let printed = print_doc(spec, &doc);
    let again = parse_doc(&printed, &lib).map_err(|e| format!("reparse: {e}"))?;
    ensure!(again == doc, "print/parse round trip changed the document");
    let took = within(start, Duration::from_secs(5), "category corpus")?;
    Ok(format!("{} items check and round-trip, {took:.2?}", doc.items.len()))
}

/// 10. Every network settles on one tip and one index digest.
pub fn simnet_convergence() -> Outcome {
    for name in SCENARIOS {
        let r = run_scenario(&scenario(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.converged, "{name} did not converge");
    }
    for seed in 0..50 {
        let r = run_scenario(&random_scenario(seed, 3)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(r.converged, "random seed {seed} did not converge");
    }
    Ok(format!("{} shipped + 50 random scenarios converge", SCENARIOS.len()))
}

/// Every GET route worth asking about on `snap`.
pub fn get_paths(snap: &IndexSnapshot) -> Vec<String> {
    let mut out: Vec<String> = ["/status", "/graph", "/graph.dot", "/bounties/open", "/bounties/collected", "/bounties/categories"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.extend(snap.blocks.keys().map(|h| format!("/block/{h}")));
    out.extend((0..snap.chain.len()).map(|h| format!("/block/{h}")));
    out.extend(snap.txs.keys().map(|t| format!("/tx/{t}")));
    out.extend(snap.by_addr.keys().chain(snap.addr_txs.keys()).map(|a| format!("/address/{a}")));
    out.extend(snap.theories.keys().map(|t| format!("/theory/{t}")));
    out.extend(snap.objects.keys().map(|a| format!("/object/{a}")));
    out.extend(snap.props.keys().map(|a| format!("/prop/{a}")));
    out.extend(snap.docs.keys().map(|d| format!("/doc/{d}")));
    out.extend(["/block/zz", "/tx/00", "/nope"].iter().map(|s| s.to_string()));
    out
}

fn fixture_txs(node: &Node, rng: &mut ChaCha8Rng, spent_once: &mut Vec<AssetId>) -> Tx {
    let st = node.pool_state();
    let k = rng.gen_range(1..=3u64);
    let key = Keypair::from_seed(k);
    let to = addr(rng.gen_range(1..=5));
    let built = builder::transfer(&st, &key, to, rng.gen_range(1..20) * BAR, rng.gen_range(0..3) * BAR / 2);
    let Ok(mut tx) = built else {
        let probe = builder::transfer(&st, &Keypair::from_seed(1), to, BAR, 0).unwrap();
        return probe;
    };
    match rng.gen_range(0..6) {
        0 => {
            if let Some(a) = spent_once.last() {
                tx.inputs[0].asset = *a;
                tx.sign(&[&key]);
            }
        }
        1 => tx.inputs[0].sig.0[5] ^= 0x10,
        2 => {
            tx.outputs[0].payload = Payload::Currency { amount: 10_000 * BAR };
            tx.sign(&[&key]);
        }
        3 => {
            tx.inputs[0].asset = AssetId([rng.gen(); 32]);
            tx.sign(&[&key]);
        }
        _ => {}
    }
    spent_once.push(tx.inputs[0].asset);
    tx
}

/// 11. GETs depend only on the snapshot; POST /tx agrees with validate_tx.
pub fn api_purity() -> Outcome {
    let sc = scenario("bounty_views");
    let sim = run_sim(&sc).map_err(|e| e.to_string())?;
    let g = sc.genesis.build();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let blocks: Vec<Block> = sim.nodes[0].with_tree(|t| {
        let mut v: Vec<Block> = t.nodes().map(|n| (*n.block).clone()).filter(|b| b.height() > 0).collect();
        v.sort_by_key(|b| (b.height(), b.hash()));
        v
    });
    {
        let node = Node::open(&g, dir.path()).map_err(|e| e.to_string())?;
        for b in &blocks {
            node.insert_block(b.clone());
        }
    }
    let cfg = ApiConfig::default();
    let serve = || -> Result<(String, Vec<(String, api::Response)>), String> {
        let node = Node::open(&g, dir.path()).map_err(|e| e.to_string())?;
        let snap = node.snapshot();
        let out = get_paths(&snap).into_iter().map(|p| {
            let r = api::handle(&node, &cfg, "GET", &p, "", b"");
            (p, r)
        });
        Ok((snap.digest_hex(), out.collect()))
    };
    let (d1, first) = serve()?;
    let (d2, second) = serve()?;
    ensure!(d1 == d2, "restart changed the snapshot digest");
    ensure!(first == second, "a GET body changed across restarts");
    let ok = first.iter().filter(|(_, r)| r.status == 200).count();
    ensure!(ok > 50, "only {ok} successful GETs");

    let node = Node::open(&g, dir.path()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut spent = Vec::new();
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..30 {
        let tx = fixture_txs(&node, &mut rng, &mut spent);
        let direct = validate_tx(&node.pool_state(), &node.params(), &tx, node.tip_state().height + 1);
        let r = api::handle(&node, &cfg, "POST", "/tx", "", hex::encode(tx.to_bytes()).as_bytes());
        ensure!((r.status == 200) == direct.is_ok(), "tx {i}: POST {} but validate_tx {:?}", r.status, direct);
        if let Err(e) = direct {
            ensure!(r.json_value()["error"]["reason"] == e.code(), "tx {i}: reason {} vs {}", r.json_value(), e.code());
            rejected += 1;
        } else {
            accepted += 1;
        }
    }
    ensure!(accepted > 5 && rejected > 5, "fixture mix too one-sided: {accepted}/{rejected}");
    Ok(format!("{} GET bodies identical across restarts; 30 POSTs ({accepted} accepted) match validate_tx", first.len()))
}

pub const ALL: &[(&str, fn() -> Outcome)] = &[
    ("kernel fixture suite", kernel_fixtures),
    ("normalization oracle", normalization_oracle),
    ("golden ids", golden_ids),
    ("bounty lifecycle", bounty_lifecycle),
    ("graph classification", graph_classification),
    ("indexer oracle", indexer_oracle),
    ("reorg correctness", reorg_correctness),
    ("auto-bounties", auto_bounties),
    ("category corpus", category_corpus),
    ("simnet convergence", simnet_convergence),
    ("api purity", api_purity),
];
