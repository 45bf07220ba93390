//! `fchain`: run a node, make keys, check documents, build and submit
//! transactions, run network scenarios and export the chain graph.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde_json::{json, Value};

use formalchain::api::{self, ApiConfig};
use formalchain::docform::{parse_theory, ItemStatus, Library};
use formalchain::hash::PropId;
use formalchain::indexer::RefreshPolicy;
use formalchain::ledger::builder::{bounty_unsigned, transfer_unsigned};
use formalchain::ledger::{graph_dot, Addr, Accept, GenesisConfig, Keypair, PubKey, Tx, BAR};
use formalchain::node::{check_doc_in, DocCheck, Node};
use formalchain::simnet::{random_scenario, run_scenario, Scenario};

use config::Config;

#[derive(Parser)]
#[command(name = "fchain", version, about = "Formal math chain node and tools")]
struct Cli {
    /// Data directory [default: $PFG_HOME, else ./.fchain]
    #[arg(long, global = true, value_name = "DIR")]
    home: Option<PathBuf>,
    /// Settings file of key = value lines [default: <home>/config]
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Print one JSON document on stdout
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the node and its HTTP service
    Node {
        #[command(subcommand)]
        cmd: NodeCmd,
    },
    /// Derive a test key from a seed
    Keygen {
        #[arg(long)]
        seed: u64,
    },
    /// Documents
    Doc {
        #[command(subcommand)]
        cmd: DocCmd,
    },
    /// Transactions
    Tx {
        #[command(subcommand)]
        cmd: TxCmd,
    },
    /// Bounties
    Bounty {
        #[command(subcommand)]
        cmd: BountyCmd,
    },
    /// Simulated networks
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// The block graph
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// The explorer index
    Index {
        #[command(subcommand)]
        cmd: IndexCmd,
    },
    /// Chain summary, from a running node with --node or else from the data directory
    Status {
        #[arg(long, value_name = "URL")]
        node: Option<String>,
    },
}

#[derive(Subcommand)]
enum NodeCmd {
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Genesis JSON (producer seeds and parameters)
    #[arg(long, value_name = "FILE")]
    genesis: Option<PathBuf>,
    #[arg(long, value_name = "ADDR")]
    listen: Option<String>,
    /// Refuse POST /tx and POST /doc/check
    #[arg(long)]
    read_only: bool,
    /// Allowed cross-origin origin, repeatable; "*" allows any
    #[arg(long, value_name = "ORIGIN")]
    cors: Vec<String>,
    /// Directory served under /ui
    #[arg(long = "static", value_name = "DIR")]
    static_dir: Option<PathBuf>,
    #[arg(long)]
    page_size: Option<usize>,
    /// Full index rebuild period; 0 disables
    #[arg(long, value_name = "SECS")]
    rebuild_secs: Option<u64>,
    /// Produce blocks with these producer seeds when it is their turn
    #[arg(long, value_name = "SEED", num_args = 1..)]
    produce: Vec<u64>,
    /// Block interval for --produce
    #[arg(long, value_name = "MS")]
    block_ms: Option<u64>,
}

#[derive(Subcommand)]
enum DocCmd {
    /// Parse and check a document offline
    Check {
        file: PathBuf,
        /// Theory id the document must use, or a theory file to load
        #[arg(long)]
        theory: Option<String>,
    },
}

#[derive(Subcommand)]
enum TxCmd {
    /// Build an unsigned transaction against the local chain
    Build {
        #[command(subcommand)]
        kind: BuildCmd,
    },
    /// Sign every input of a transaction owned by the key
    Sign {
        /// Hex, or a file holding hex
        tx: String,
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Send a transaction to a node
    Submit {
        /// Hex, or a file holding hex
        tx: String,
        #[arg(long, value_name = "URL")]
        node: Option<String>,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    Transfer {
        /// Public key paying for the transaction
        #[arg(long = "pub", value_name = "HEX")]
        pubkey: String,
        #[arg(long, value_name = "ADDR")]
        to: String,
        /// Atomic units, or BAR with a "bar" suffix
        #[arg(long)]
        amount: String,
        #[arg(long, default_value = "0")]
        fee: String,
    },
    Bounty {
        #[arg(long = "pub", value_name = "HEX")]
        pubkey: String,
        #[arg(long)]
        prop: String,
        /// Theory of the proposition [default: the builtin theory]
        #[arg(long)]
        theory: Option<String>,
        #[arg(long)]
        amount: String,
        #[arg(long, default_value = "0")]
        fee: String,
    },
}

#[derive(Args)]
struct KeyArgs {
    /// Test key seed
    #[arg(long, conflicts_with = "secret")]
    seed: Option<u64>,
    /// 32-byte secret as hex
    #[arg(long, value_name = "HEX")]
    secret: Option<String>,
}

#[derive(Subcommand)]
enum BountyCmd {
    /// Build, sign and submit a bounty on a proposition
    Place {
        #[arg(long)]
        prop: String,
        #[arg(long)]
        amount: String,
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, default_value = "0")]
        fee: String,
        #[command(flatten)]
        key: KeyArgs,
        #[arg(long, value_name = "URL")]
        node: Option<String>,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Run a scenario file, or a random one when no file is given
    Run {
        file: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        nodes: Option<usize>,
        /// Write graph.json, graph.dot, digests.json and result.json here
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    Export {
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        #[arg(long = "graph-json", value_name = "FILE")]
        graph_json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IndexCmd {
    /// Recompute the index from the block tree and store it
    Rebuild,
}

/// A command result: the JSON value and its plain rendering.
struct Out {
    value: Value,
    text: String,
}

impl Out {
    fn new(value: Value, text: impl Into<String>) -> Out {
        Out { value, text: text.into() }
    }
}

struct Fail {
    exit: u8,
    code: String,
    message: String,
    detail: Value,
}

impl Fail {
    fn invalid(code: &str, message: impl Into<String>) -> Fail {
        Fail { exit: 1, code: code.into(), message: message.into(), detail: Value::Null }
    }

    fn usage(message: impl Into<String>) -> Fail {
        Fail { exit: 2, code: "Usage".into(), message: message.into(), detail: Value::Null }
    }

    fn with(mut self, detail: Value) -> Fail {
        self.detail = detail;
        self
    }
}

fn io_fail(what: &Path) -> impl Fn(std::io::Error) -> Fail + '_ {
    move |e| Fail::invalid("IoError", format!("{}: {e}", what.display()))
}

struct Ctx {
    home: PathBuf,
    cfg: Config,
    json: bool,
}

impl Ctx {
    fn chain_dir(&self) -> PathBuf {
        self.home.join("chain")
    }

    fn genesis_path(&self) -> PathBuf {
        self.home.join("genesis.json")
    }

    /// Genesis from a flag, the config, the data directory, or the default.
    fn genesis(&self, flag: Option<&Path>) -> Result<GenesisConfig, Fail> {
        let path = flag.map(Path::to_path_buf).or_else(|| self.cfg.get("genesis").map(PathBuf::from));
        let path = match path {
            Some(p) => p,
            None if self.genesis_path().exists() => self.genesis_path(),
            None => return Ok(GenesisConfig::default()),
        };
        let text = std::fs::read_to_string(&path).map_err(io_fail(&path))?;
        GenesisConfig::from_json(&text).map_err(|e| Fail::invalid("BadGenesis", format!("{}: {e}", path.display())))
    }

    /// The node stored in the data directory, or a fresh one at genesis.
    fn local_node(&self) -> Result<Node, Fail> {
        let g = self.genesis(None)?.build();
        let dir = self.chain_dir();
        if dir.exists() {
            Node::open(&g, &dir).map_err(io_fail(&dir))
        } else {
            Ok(Node::new(&g))
        }
    }

    fn node_url(&self, flag: Option<&str>) -> Result<String, Fail> {
        let url = flag
            .or_else(|| self.cfg.get("node"))
            .ok_or_else(|| Fail::usage("no node address: pass --node URL or set node = URL in the config"))?;
        Ok(if url.contains("://") { url.trim_end_matches('/').to_string() } else { format!("http://{url}") })
    }

    fn key(&self, k: &KeyArgs) -> Result<Keypair, Fail> {
        if let Some(s) = &k.secret {
            return secret_key(s);
        }
        if let Some(seed) = k.seed {
            return Ok(Keypair::from_seed(seed));
        }
        if let Some(s) = self.cfg.get("secret") {
            return secret_key(s);
        }
        match self.cfg.parsed::<u64>("seed").map_err(Fail::usage)? {
            Some(seed) => Ok(Keypair::from_seed(seed)),
            None => Err(Fail::usage("no key: pass --seed N or --secret HEX")),
        }
    }
}

fn secret_key(s: &str) -> Result<Keypair, Fail> {
    let bytes = hex::decode(s).map_err(|e| Fail::usage(format!("secret: {e}")))?;
    let arr: [u8; 32] = bytes.try_into().map_err(|_| Fail::usage("secret must be 32 bytes"))?;
    Ok(Keypair::from_secret(arr))
}

/// Plain integers are atomic units; a "bar" suffix scales by 10^8.
fn parse_amount(s: &str) -> Result<u64, Fail> {
    let bad = || Fail::usage(format!("bad amount {s:?}"));
    let s = s.trim();
    let Some(num) = s.strip_suffix("bar").or_else(|| s.strip_suffix("BAR")) else {
        return s.parse().map_err(|_| bad());
    };
    let num = num.trim();
    let (whole, frac) = num.split_once('.').unwrap_or((num, ""));
    if frac.len() > 8 || (whole.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
    let frac_units: u64 = if frac.is_empty() { 0 } else { format!("{frac:0<8}").parse().map_err(|_| bad())? };
    whole.checked_mul(BAR).and_then(|w| w.checked_add(frac_units)).ok_or_else(bad)
}

fn bar(units: u64) -> String {
    let frac = units % BAR;
    if frac == 0 {
        format!("{} BAR", units / BAR)
    } else {
        let f = format!("{frac:08}");
        format!("{}.{} BAR", units / BAR, f.trim_end_matches('0'))
    }
}

fn read_tx(arg: &str) -> Result<Tx, Fail> {
    let p = Path::new(arg);
    let text = if p.is_file() { std::fs::read_to_string(p).map_err(io_fail(p))? } else { arg.to_string() };
    Tx::from_hex(text.trim()).map_err(|e| Fail::invalid("DecodeError", e.to_string()))
}

fn tx_hex(tx: &Tx) -> String {
    hex::encode(tx.to_bytes())
}

fn run(cli: Cli) -> Result<Out, Fail> {
    let home = cli
        .home
        .clone()
        .or_else(|| std::env::var_os("PFG_HOME").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".fchain"));
    let cfg_path = cli.config.clone().unwrap_or_else(|| home.join("config"));
    let cfg = Config::load(&cfg_path).map_err(Fail::usage)?;
    let ctx = Ctx { home, cfg, json: cli.json };
    match cli.cmd {
        Cmd::Node { cmd: NodeCmd::Run(a) } => node_run(&ctx, a),
        Cmd::Keygen { seed } => Ok(keygen(seed)),
        Cmd::Doc { cmd: DocCmd::Check { file, theory } } => doc_check(&ctx, &file, theory.as_deref()),
        Cmd::Tx { cmd: TxCmd::Build { kind } } => tx_build(&ctx, kind),
        Cmd::Tx { cmd: TxCmd::Sign { tx, key } } => {
            let mut tx = read_tx(&tx)?;
            let key = ctx.key(&key)?;
            let pk = key.public();
            let mine = tx.inputs.iter().filter(|i| i.pubkey == pk).count();
            if mine == 0 {
                return Err(Fail::invalid("NotOwner", format!("no input belongs to {}", pk.to_hex())));
            }
            tx.sign(&[&key]);
            let hex = tx_hex(&tx);
            Ok(Out::new(json!({ "txid": tx.txid(), "signed_inputs": mine, "hex": hex }), hex.clone()))
        }
        Cmd::Tx { cmd: TxCmd::Submit { tx, node } } => {
            let tx = read_tx(&tx)?;
            submit(&ctx.node_url(node.as_deref())?, &tx)
        }
        Cmd::Bounty { cmd: BountyCmd::Place { prop, amount, theory, fee, key, node } } => {
            let url = ctx.node_url(node.as_deref())?;
            let key = ctx.key(&key)?;
            let mut tx = build_bounty(&ctx, &key.public(), &prop, theory.as_deref(), &amount, &fee)?;
            tx.sign(&[&key]);
            submit(&url, &tx)
        }
        Cmd::Scenario { cmd: ScenarioCmd::Run { file, seed, nodes, out } } => scenario(file, seed, nodes, out),
        Cmd::Graph { cmd: GraphCmd::Export { dot, graph_json } } => graph_export(&ctx, dot, graph_json),
        Cmd::Index { cmd: IndexCmd::Rebuild } => index_rebuild(&ctx),
        Cmd::Status { node } => status(&ctx, node.as_deref()),
    }
}

fn keygen(seed: u64) -> Out {
    let k = Keypair::from_seed(seed);
    let pk = k.public();
    let addr = Addr::pay_to_key(&pk);
    Out::new(
        json!({ "seed": seed, "secret": hex::encode(k.secret()), "public": pk, "address": addr }),
        format!("public  {}\naddress {}\nsecret  {}", pk.to_hex(), addr.to_hex(), hex::encode(k.secret())),
    )
}

fn doc_check(ctx: &Ctx, file: &Path, theory: Option<&str>) -> Result<Out, Fail> {
    let text = std::fs::read_to_string(file).map_err(io_fail(file))?;
    let node = ctx.local_node()?;
    let mut lib = Library::new();
    for spec in node.tip_state().specs.values() {
        lib.insert(spec.clone()).expect("chain theories check");
    }
    let mut want = None;
    if let Some(t) = theory {
        let p = Path::new(t);
        if p.is_file() {
            let src = std::fs::read_to_string(p).map_err(io_fail(p))?;
            let spec = parse_theory(&src).map_err(|e| Fail::invalid(e.code(), e.to_string()))?;
            lib.insert(spec).map_err(|e| Fail::invalid("TheoryCheckFailed", e.to_string()))?;
        } else if t.len() == 64 && t.chars().all(|c| c.is_ascii_hexdigit()) {
            want = Some(t.to_ascii_lowercase());
        } else {
            return Err(Fail::usage(format!("--theory {t:?} is neither a theory id nor a file")));
        }
    }
    let report = check_doc_in(&lib, &text);
    let value = serde_json::to_value(&report).expect("json");
    match &report {
        DocCheck::SyntaxError { code, message, line, col } => {
            Err(Fail::invalid(code, format!("{}:{line}:{col}: {message}", file.display())).with(value))
        }
        DocCheck::Checked { theory, ok, items } => {
            if let Some(w) = want.filter(|w| w != theory) {
                return Err(Fail::invalid("TheoryMismatch", format!("document uses theory {theory}, expected {w}"))
                    .with(value));
            }
            let mut text = String::new();
            for it in items {
                let line = match &it.status {
                    ItemStatus::Ok { id, fresh } => format!("ok      {id}{}", if *fresh { "" } else { " (known)" }),
                    ItemStatus::Failed { code, message } => format!("FAILED  {code}: {message}"),
                    ItemStatus::Skipped => "skipped".to_string(),
                };
                text += &format!("[{}] {} {}: {line}\n", it.index, it.kind, it.name);
            }
            if *ok {
                Ok(Out::new(value, format!("{text}{}: ok", file.display())))
            } else {
                let first = items.iter().find_map(|i| match &i.status {
                    ItemStatus::Failed { code, message } => Some((i, code.clone(), message.clone())),
                    _ => None,
                });
                let (code, msg) = match first {
                    Some((i, code, m)) => (code, format!("{text}item {} ({} {}): {m}", i.index, i.kind, i.name)),
                    None => ("DocCheckFailed".into(), text),
                };
                Err(Fail::invalid(&code, msg).with(value))
            }
        }
    }
}

fn parse_pub(s: &str) -> Result<PubKey, Fail> {
    PubKey::from_hex(s).map_err(|e| Fail::usage(format!("public key: {e}")))
}

fn build_bounty(ctx: &Ctx, pk: &PubKey, prop: &str, theory: Option<&str>, amount: &str, fee: &str) -> Result<Tx, Fail> {
    let prop = PropId::from_hex(prop).map_err(|e| Fail::usage(format!("prop: {e}")))?;
    let amount = parse_amount(amount)?;
    let fee = parse_amount(fee)?;
    let node = ctx.local_node()?;
    let th = match theory {
        Some(t) => formalchain::hash::TheoryId::from_hex(t).map_err(|e| Fail::usage(format!("theory: {e}")))?,
        None => node.params().builtin_theory,
    };
    bounty_unsigned(&node.tip_state(), pk, &th, &prop, amount, fee)
        .map_err(|e| Fail::invalid("BuildError", e.to_string()))
}

fn tx_build(ctx: &Ctx, kind: BuildCmd) -> Result<Out, Fail> {
    let tx = match kind {
        BuildCmd::Transfer { pubkey, to, amount, fee } => {
            let pk = parse_pub(&pubkey)?;
            let to = Addr::from_hex(&to).map_err(|e| Fail::usage(format!("address: {e}")))?;
            let node = ctx.local_node()?;
            transfer_unsigned(&node.tip_state(), &pk, to, parse_amount(&amount)?, parse_amount(&fee)?)
                .map_err(|e| Fail::invalid("BuildError", e.to_string()))?
        }
        BuildCmd::Bounty { pubkey, prop, theory, amount, fee } => {
            build_bounty(ctx, &parse_pub(&pubkey)?, &prop, theory.as_deref(), &amount, &fee)?
        }
    };
    let hex = tx_hex(&tx);
    Ok(Out::new(json!({ "txid": tx.txid(), "inputs": tx.inputs.len(), "outputs": tx.outputs.len(), "hex": hex }), hex.clone()))
}

/// Sends a request and returns the status with the parsed JSON body.
fn http(method: &str, url: &str, body: Option<&str>) -> Result<(u16, Value), Fail> {
    let req = ureq::request(method, url);
    let resp = match body {
        Some(b) => req.send_string(b),
        None => req.call(),
    };
    let resp = match resp {
        Ok(r) => r,
        Err(ureq::Error::Status(_, r)) => r,
        Err(e) => return Err(Fail::invalid("Unreachable", format!("{url}: {e}"))),
    };
    let status = resp.status();
    let text = resp.into_string().map_err(|e| Fail::invalid("Unreachable", format!("{url}: {e}")))?;
    let v = serde_json::from_str(&text).unwrap_or(Value::String(text));
    Ok((status, v))
}

fn submit(url: &str, tx: &Tx) -> Result<Out, Fail> {
    let (status, v) = http("POST", &format!("{url}/tx"), Some(&tx_hex(tx)))?;
    if status == 200 {
        let txid = v["txid"].as_str().unwrap_or_default().to_string();
        return Ok(Out::new(v, format!("accepted {txid}")));
    }
    let err = &v["error"];
    let code = err["reason"].as_str().or_else(|| err["code"].as_str()).unwrap_or("Rejected");
    let msg = err["message"].as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
    Err(Fail::invalid(code, format!("rejected ({status}): {msg}")).with(v))
}

fn scenario(file: Option<PathBuf>, seed: Option<u64>, nodes: Option<usize>, out: Option<PathBuf>) -> Result<Out, Fail> {
    let sc = match &file {
        Some(f) => {
            let text = std::fs::read_to_string(f).map_err(io_fail(f))?;
            let mut sc = Scenario::from_json(&text).map_err(|e| Fail::invalid("BadScenario", format!("{}: {e}", f.display())))?;
            if let Some(s) = seed {
                sc.seed = s;
            }
            if let Some(n) = nodes {
                sc.nodes = n;
            }
            sc
        }
        None => random_scenario(seed.unwrap_or(0), nodes.unwrap_or(3)),
    };
    let r = run_scenario(&sc).map_err(|e| Fail::invalid("ScenarioError", e.to_string()))?;
    let digests: Vec<Value> =
        r.nodes.iter().map(|n| json!({ "node": n.node, "tip": n.tip, "height": n.height, "digest": n.digest })).collect();
    let summary = json!({
        "name": r.name,
        "seed": r.seed,
        "converged": r.converged,
        "nodes": digests,
        "counts": r.nodes.first().map(|n| json!(n.counts)).unwrap_or(Value::Null),
        "net": r.net,
        "time": r.time,
    });
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir).map_err(io_fail(dir))?;
        let write = |name: &str, body: String| {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(io_fail(&p))
        };
        if let Some(n0) = r.nodes.first() {
            write("graph.json", serde_json::to_string_pretty(&n0.graph).expect("json"))?;
            write("graph.dot", n0.dot.clone())?;
        }
        for n in r.nodes.iter().skip(1) {
            write(&format!("graph.node{}.dot", n.node), n.dot.clone())?;
        }
        write("digests.json", serde_json::to_string_pretty(&summary).expect("json"))?;
        write("result.json", serde_json::to_string_pretty(&r).expect("json"))?;
    }
    let mut text = format!("{} seed {}: {} nodes, {} ticks\n", if r.name.is_empty() { "scenario" } else { &r.name }, r.seed, r.nodes.len(), r.time);
    for n in &r.nodes {
        text += &format!("node {} height {} tip {} digest {}\n", n.node, n.height, n.tip.to_hex(), n.digest);
    }
    if r.converged {
        Ok(Out::new(summary, text + "converged"))
    } else {
        Err(Fail::invalid("NotConverged", text + "nodes did not converge").with(summary))
    }
}

fn graph_export(ctx: &Ctx, dot: Option<PathBuf>, graph_json: Option<PathBuf>) -> Result<Out, Fail> {
    let node = ctx.local_node()?;
    let snap = node.snapshot();
    let body = graph_dot(&snap.graph);
    if dot.is_none() && graph_json.is_none() {
        if ctx.json {
            return Ok(Out::new(json!({ "nodes": snap.graph.len(), "dot": body, "graph": snap.graph }), String::new()));
        }
        return Ok(Out::new(Value::Null, body.trim_end().to_string()));
    }
    if let Some(p) = &dot {
        std::fs::write(p, &body).map_err(io_fail(p))?;
    }
    if let Some(p) = &graph_json {
        std::fs::write(p, serde_json::to_string_pretty(&snap.graph).expect("json")).map_err(io_fail(p))?;
    }
    Ok(Out::new(
        json!({ "nodes": snap.graph.len(), "dot_file": dot, "json_file": graph_json }),
        format!("wrote {} graph nodes", snap.graph.len()),
    ))
}

fn index_rebuild(ctx: &Ctx) -> Result<Out, Fail> {
    let node = ctx.local_node()?;
    let before = node.snapshot().digest_hex();
    let snap = node.rebuild_index().map_err(|e| Fail::invalid("IndexError", e.to_string()))?;
    let dir = ctx.chain_dir();
    node.persist_index().map_err(io_fail(&dir))?;
    let after = snap.digest_hex();
    let v = json!({
        "height": snap.stats.height,
        "tip": snap.tip,
        "snapshot_digest": after,
        "matches_incremental": before == after,
    });
    if before != after {
        return Err(Fail::invalid("IndexMismatch", format!("rebuild {after} differs from incremental {before}")).with(v));
    }
    Ok(Out::new(v, format!("index rebuilt at height {}, digest {after}", snap.stats.height)))
}

fn status(ctx: &Ctx, node: Option<&str>) -> Result<Out, Fail> {
    let v = if node.is_some() || ctx.cfg.get("node").is_some() {
        let url = ctx.node_url(node)?;
        let (code, v) = http("GET", &format!("{url}/status"), None)?;
        if code != 200 {
            return Err(Fail::invalid("Rejected", format!("status {code}")).with(v));
        }
        v
    } else {
        let snap = ctx.local_node()?.snapshot();
        api::get(&snap, "/status", "", &ApiConfig::default()).json_value()
    };
    let text = format!(
        "height {}  txs {}  addresses {}  circulation {}\ntip {}",
        v["height"],
        v["tx_count"],
        v["address_count"],
        v["coin_circulation"].as_u64().map(bar).unwrap_or_default(),
        v["tip_hash"].as_str().unwrap_or_default()
    );
    Ok(Out::new(v, text))
}

fn node_run(ctx: &Ctx, a: RunArgs) -> Result<Out, Fail> {
    let gcfg = ctx.genesis(a.genesis.as_deref())?;
    std::fs::create_dir_all(&ctx.home).map_err(io_fail(&ctx.home))?;
    let gpath = ctx.genesis_path();
    match std::fs::read_to_string(&gpath) {
        Ok(text) => {
            if GenesisConfig::from_json(&text).ok().as_ref() != Some(&gcfg) {
                return Err(Fail::invalid("GenesisMismatch", format!("{} holds a different genesis", gpath.display())));
            }
        }
        Err(_) => std::fs::write(&gpath, serde_json::to_string_pretty(&gcfg).expect("json")).map_err(io_fail(&gpath))?,
    }
    let c = &ctx.cfg;
    let listen = a.listen.or_else(|| c.get("listen").map(str::to_string)).unwrap_or_else(|| "127.0.0.1:8080".into());
    let mut cors = a.cors;
    if cors.is_empty() {
        cors = c.list("cors");
    }
    let api_cfg = ApiConfig {
        listen: listen.clone(),
        read_only: a.read_only || c.flag("read_only").map_err(Fail::usage)?,
        cors,
        page_size: a.page_size.or(c.parsed("page_size").map_err(Fail::usage)?).unwrap_or(100),
        static_dir: a.static_dir.or_else(|| c.get("static").map(PathBuf::from)),
    };
    let rebuild = a.rebuild_secs.or(c.parsed("rebuild_secs").map_err(Fail::usage)?).unwrap_or(0);
    let block_ms = a.block_ms.or(c.parsed("block_ms").map_err(Fail::usage)?).unwrap_or(2000);
    let mut seeds = a.produce;
    if seeds.is_empty() {
        for s in c.list("produce") {
            seeds.push(s.parse().map_err(|_| Fail::usage(format!("config produce: bad seed {s:?}")))?);
        }
    }

    let g = gcfg.build();
    let dir = ctx.chain_dir();
    let node = Arc::new(Node::open(&g, &dir).map_err(io_fail(&dir))?);
    let producers = node.params().producers;
    let keys: Vec<Keypair> = seeds.iter().map(|s| Keypair::from_seed(*s)).collect();
    if let Some(k) = keys.iter().find(|k| !producers.contains(&k.public())) {
        return Err(Fail::invalid("NotProducer", format!("{} is not in the producer set", k.public().to_hex())));
    }
    let policy = RefreshPolicy { rebuild_interval: (rebuild > 0).then(|| Duration::from_secs(rebuild)) };
    node.spawn_refresher(&policy);

    let rt = tokio::runtime::Runtime::new().map_err(|e| Fail::invalid("IoError", e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(&listen)
            .await
            .map_err(|e| Fail::invalid("IoError", format!("bind {listen}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Fail::invalid("IoError", e.to_string()))?;
        let snap = node.snapshot();
        let ready = json!({
            "listening": addr.to_string(),
            "height": snap.stats.height,
            "tip": snap.tip,
            "read_only": api_cfg.read_only,
            "producing": keys.iter().map(|k| k.public()).collect::<Vec<_>>(),
        });
        if ctx.json {
            println!("{ready}");
        } else {
            println!("listening on http://{addr} at height {}", snap.stats.height);
        }
        let _ = std::io::stdout().flush();
        if !keys.is_empty() {
            let node = node.clone();
            std::thread::spawn(move || produce_loop(&node, &keys, Duration::from_millis(block_ms.max(1))));
        }
        api::serve_on(listener, node.clone(), api_cfg).await.map_err(|e| Fail::invalid("IoError", e.to_string()))
    })?;
    Ok(Out::new(json!({ "stopped": true }), "stopped"))
}

fn produce_loop(node: &Node, keys: &[Keypair], every: Duration) {
    loop {
        std::thread::sleep(every);
        let (height, params) = node.with_tree(|t| (t.height() + 1, t.params.clone()));
        let due = params.producers[(height % params.producers.len() as u64) as usize];
        let Some(key) = keys.iter().find(|k| k.public() == due) else { continue };
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let (_, r) = node.produce(key, now);
        if let Accept::Invalid(e) = r {
            eprintln!("produced an invalid block at height {height}: {e}");
        }
        if let Err(e) = node.persist_index() {
            eprintln!("index not persisted: {e}");
        }
    }
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            if json {
                let v = if code == 0 {
                    json!({ "help": e.to_string() })
                } else {
                    json!({ "error": { "code": "Usage", "message": e.to_string(), "usage": Cli::command().render_help().to_string() } })
                };
                println!("{v}");
            } else {
                let _ = e.print();
            }
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", out.value);
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if json {
                println!("{}", json!({ "error": { "code": f.code, "message": f.message, "detail": f.detail } }));
            } else {
                eprintln!("error [{}]: {}", f.code, f.message);
                if f.exit == 2 {
                    eprintln!("\n{}", Cli::command().render_usage());
                }
            }
            ExitCode::from(f.exit)
        }
    }
}
