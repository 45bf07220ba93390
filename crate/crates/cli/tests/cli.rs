use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use formalchain::api::{handle, ApiConfig};
use formalchain::ledger::{Addr, GenesisConfig, Keypair};
use formalchain::node::Node;
use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fchain(home: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fchain"))
        .arg("--home")
        .arg(home)
        .args(args)
        .env_remove("PFG_HOME")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    let s = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(s.trim()).unwrap_or_else(|e| panic!("not JSON ({e}): {s:?}"))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn doc_files() -> Vec<PathBuf> {
    let mut v = Vec::new();
    for sub in ["proofs", "hotg"] {
        for e in std::fs::read_dir(fixtures().join("docs").join(sub)).unwrap() {
            v.push(e.unwrap().path());
        }
    }
    v.sort();
    v
}

struct Server {
    child: Child,
    url: String,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn spawn_node(home: &Path, extra: &[&str]) -> Server {
    let genesis = home.join("genesis-in.json");
    std::fs::create_dir_all(home).unwrap();
    std::fs::write(&genesis, serde_json::to_string(&GenesisConfig::with_seeds(vec![1, 2, 3])).unwrap()).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_fchain"))
        .arg("--home")
        .arg(home)
        .args(["--json", "node", "run", "--listen", "127.0.0.1:0", "--genesis"])
        .arg(&genesis)
        .args(extra)
        .stdout(Stdio::piped())
        .env_remove("PFG_HOME")
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let ready: Value = serde_json::from_str(line.trim()).unwrap_or_else(|e| panic!("{e}: {line:?}"));
    let url = format!("http://{}", ready["listening"].as_str().unwrap());
    Server { child, url }
}

fn seed_pub(seed: u64) -> String {
    Keypair::from_seed(seed).public().to_hex()
}

#[test]
fn doc_check_accepts_a_valid_fixture() {
    let home = tempfile::tempdir().unwrap();
    let f = fixtures().join("docs/proofs/p01_identity.pfgd");
    let out = fchain(home.path(), &["doc", "check", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = fchain(home.path(), &["--json", "doc", "check", f.to_str().unwrap()]);
    let v = json_of(&out);
    assert_eq!(v["result"], "checked");
    assert_eq!(v["ok"], true);
}

#[test]
fn doc_check_rejects_a_mutated_fixture_at_the_item() {
    let home = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(fixtures().join("docs/proofs/p02_weaken.pfgd")).unwrap();
    // swap the returned hypothesis for the other one
    let mutated = src.replace("=> hp", "=> hq");
    assert_ne!(src, mutated, "fixture changed shape:\n{src}");
    let f = home.path().join("mutated.pfgd");
    std::fs::write(&f, mutated).unwrap();
    let out = fchain(home.path(), &["doc", "check", f.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("item 0"), "{err}");

    let v = json_of(&fchain(home.path(), &["--json", "doc", "check", f.to_str().unwrap()]));
    let items = v["error"]["detail"]["items"].as_array().unwrap();
    assert_eq!(items[0]["status"], "failed");
    assert_eq!(v["error"]["code"], items[0]["code"]);
}

#[test]
fn doc_check_agrees_with_the_service() {
    let home = tempfile::tempdir().unwrap();
    let node = Node::new(&GenesisConfig::default().build());
    let files = doc_files();
    assert!(files.len() >= 20);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let api = handle(&node, &ApiConfig::default(), "POST", "/doc/check", "", text.as_bytes()).json_value();
        let out = fchain(home.path(), &["--json", "doc", "check", f.to_str().unwrap()]);
        let v = json_of(&out);
        let cli = if code(&out) == 0 { v } else { v["error"]["detail"].clone() };
        assert_eq!(cli, api, "{}", f.display());
    }
}

#[test]
fn doc_check_loads_a_theory_file_and_checks_theory_ids() {
    let home = tempfile::tempdir().unwrap();
    let doc = fixtures().join("docs/hotg/categories.pfgd");
    let th = fixtures().join("theories/mini_hotg.pfgt");
    let out = fchain(home.path(), &["doc", "check", doc.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "unknown theory without --theory");
    let out = fchain(home.path(), &["--json", "doc", "check", doc.to_str().unwrap(), "--theory", th.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    let p01 = fixtures().join("docs/proofs/p01_identity.pfgd");
    let hf = json_of(&fchain(home.path(), &["--json", "doc", "check", p01.to_str().unwrap()]))["theory"].as_str().unwrap().to_string();
    assert_eq!(code(&fchain(home.path(), &["doc", "check", p01.to_str().unwrap(), "--theory", &hf])), 0);
    let other = "00".repeat(32);
    let out = fchain(home.path(), &["--json", "doc", "check", p01.to_str().unwrap(), "--theory", &other]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["error"]["code"], "TheoryMismatch");
}

#[test]
fn usage_errors_exit_two() {
    let home = tempfile::tempdir().unwrap();
    let out = fchain(home.path(), &["frobnicate"]);
    assert_eq!(code(&out), 2);
    let out = fchain(home.path(), &["--json", "keygen"]);
    assert_eq!(code(&out), 2);
    let v = json_of(&out);
    assert_eq!(v["error"]["code"], "Usage");
    assert!(v["error"]["usage"].as_str().unwrap().contains("keygen"));
    let out = fchain(home.path(), &["--json", "tx", "build", "transfer", "--pub", "zz", "--to", "00", "--amount", "1"]);
    assert_eq!(code(&out), 2);
    let out = fchain(home.path(), &["tx", "submit", "00"]);
    assert_eq!(code(&out), 1, "undecodable transaction is a validation failure");
}

#[test]
fn keygen_matches_the_library() {
    let home = tempfile::tempdir().unwrap();
    let v = json_of(&fchain(home.path(), &["--json", "keygen", "--seed", "7"]));
    let k = Keypair::from_seed(7);
    assert_eq!(v["public"], k.public().to_hex());
    assert_eq!(v["address"], Addr::pay_to_key(&k.public()).to_hex());
    assert_eq!(v["secret"], hex::encode(k.secret()));
}

#[test]
fn offline_commands_print_json() {
    let home = tempfile::tempdir().unwrap();
    let h = home.path();
    let to = Addr::pay_to_key(&Keypair::from_seed(9).public()).to_hex();
    let pk = seed_pub(1);
    let built = json_of(&fchain(h, &["--json", "tx", "build", "transfer", "--pub", &pk, "--to", &to, "--amount", "10bar", "--fee", "1000"]));
    let hex = built["hex"].as_str().unwrap();
    let signed = fchain(h, &["--json", "tx", "sign", hex, "--seed", "1"]);
    assert_eq!(code(&signed), 0);
    assert_eq!(json_of(&signed)["signed_inputs"], 1);
    let wrong = fchain(h, &["--json", "tx", "sign", hex, "--seed", "2"]);
    assert_eq!(code(&wrong), 1);
    assert_eq!(json_of(&wrong)["error"]["code"], "NotOwner");
    let broke = fchain(h, &["--json", "tx", "build", "transfer", "--pub", &pk, "--to", &to, "--amount", "51bar"]);
    assert_eq!(code(&broke), 1);

    let prop = "11".repeat(32);
    let v = json_of(&fchain(h, &["--json", "tx", "build", "bounty", "--pub", &pk, "--prop", &prop, "--amount", "5bar"]));
    assert_eq!(v["outputs"], 2);

    let st = json_of(&fchain(h, &["--json", "status"]));
    assert_eq!(st["height"], 0);
    let idx = json_of(&fchain(h, &["--json", "index", "rebuild"]));
    assert_eq!(idx["matches_incremental"], true);
    assert_eq!(idx["snapshot_digest"], st["snapshot_digest"]);
    let g = json_of(&fchain(h, &["--json", "graph", "export"]));
    assert_eq!(g["nodes"], 1);
    let dot = h.join("g.dot");
    let g = json_of(&fchain(h, &["--json", "graph", "export", "--dot", dot.to_str().unwrap()]));
    assert_eq!(g["nodes"], 1);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn scenario_run_writes_graphs_and_digests() {
    let home = tempfile::tempdir().unwrap();
    let out_dir = home.path().join("explorer_graph");
    let f = fixtures().join("scenarios/explorer_graph.json");
    let out = fchain(home.path(), &["--json", "scenario", "run", f.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["converged"], true);
    assert_eq!(v["counts"]["invalid"], 1, "{v}");
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("graph.json")).unwrap()).unwrap();
    assert_eq!(graph.as_array().unwrap().len(), 12);
    let dot = std::fs::read_to_string(out_dir.join("graph.dot")).unwrap();
    assert_eq!(dot.matches("class=").count(), 12);
    let digests: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("digests.json")).unwrap()).unwrap();
    assert_eq!(digests, v);

    let r = json_of(&fchain(home.path(), &["--json", "scenario", "run", "--seed", "4", "--nodes", "3"]));
    assert_eq!(r["converged"], true);
    assert_eq!(r["nodes"].as_array().unwrap().len(), 3);
}

#[test]
fn config_file_supplies_defaults() {
    let home = tempfile::tempdir().unwrap();
    std::fs::write(home.path().join("config"), "# test\nseed = 1\nnode = 127.0.0.1:1\n").unwrap();
    let built = json_of(&fchain(home.path(), &["--json", "tx", "build", "transfer", "--pub", &seed_pub(1), "--to", &Addr::pay_to_key(&Keypair::from_seed(2).public()).to_hex(), "--amount", "5"]));
    let out = fchain(home.path(), &["--json", "tx", "sign", built["hex"].as_str().unwrap()]);
    assert_eq!(code(&out), 0, "seed comes from the config");
    let out = fchain(home.path(), &["--json", "status"]);
    assert_eq!(code(&out), 1, "node from the config is unreachable");
    assert_eq!(json_of(&out)["error"]["code"], "Unreachable");
    std::fs::write(home.path().join("config"), "no equals here\n").unwrap();
    assert_eq!(code(&fchain(home.path(), &["status"])), 2);
}

#[test]
fn submitting_a_double_spend_fails_with_the_reason() {
    let home = tempfile::tempdir().unwrap();
    let h = home.path();
    let server = spawn_node(h, &[]);
    let to = Addr::pay_to_key(&Keypair::from_seed(9).public()).to_hex();
    let mut signed = Vec::new();
    for amount in ["1bar", "2bar"] {
        let b = json_of(&fchain(h, &["--json", "tx", "build", "transfer", "--pub", &seed_pub(1), "--to", &to, "--amount", amount]));
        let s = json_of(&fchain(h, &["--json", "tx", "sign", b["hex"].as_str().unwrap(), "--seed", "1"]));
        signed.push(s["hex"].as_str().unwrap().to_string());
    }
    let first = fchain(h, &["--json", "tx", "submit", &signed[0], "--node", &server.url]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stdout));
    assert!(json_of(&first)["txid"].is_string());
    let second = fchain(h, &["tx", "submit", &signed[1], "--node", &server.url]);
    assert_eq!(code(&second), 1);
    assert!(String::from_utf8_lossy(&second.stderr).contains("DoubleSpend"));
    let v = json_of(&fchain(h, &["--json", "tx", "submit", &signed[1], "--node", &server.url]));
    assert_eq!(v["error"]["code"], "DoubleSpend");
    let st = json_of(&fchain(h, &["--json", "status", "--node", &server.url]));
    assert_eq!(st["height"], 0);
}

#[test]
fn produced_blocks_carry_a_placed_bounty() {
    let home = tempfile::tempdir().unwrap();
    let h = home.path();
    let server = spawn_node(h, &["--produce", "1", "2", "3", "--block-ms", "150"]);
    let prop = "22".repeat(32);
    let th = GenesisConfig::default().params().builtin_theory;
    let addr = Addr::prop(&th, &formalchain::hash::PropId::from_hex(&prop).unwrap()).to_hex();
    let out = fchain(h, &["--json", "bounty", "place", "--prop", &prop, "--amount", "7bar", "--seed", "1", "--node", &server.url]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let deadline = Instant::now() + Duration::from_secs(20);
    let (_, v) = loop {
        let body = http_get(&format!("{}/bounties/open", server.url));
        let v: Value = serde_json::from_str(&body).unwrap();
        if v["items"].as_array().unwrap().iter().any(|b| b["addr"] == addr.as_str() && b["amount"] == 700_000_000) {
            break (body, v);
        }
        assert!(Instant::now() < deadline, "bounty never confirmed: {body}");
        std::thread::sleep(Duration::from_millis(100));
    };
    assert!(v["total"].as_u64().unwrap() >= 1);
    drop(server);

    let st = json_of(&fchain(h, &["--json", "status"]));
    assert!(st["height"].as_u64().unwrap() >= 1, "blocks persisted in the data directory: {st}");
    assert_eq!(json_of(&fchain(h, &["--json", "index", "rebuild"]))["matches_incremental"], true);
}

fn http_get(url: &str) -> String {
    use std::io::{Read, Write};
    let rest = url.strip_prefix("http://").unwrap();
    let (host, path) = rest.split_once('/').map(|(h, p)| (h, format!("/{p}"))).unwrap();
    let mut s = std::net::TcpStream::connect(host).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: {host}\r\nConnection: close\r\n\r\n").unwrap();
    let mut buf = String::new();
    s.read_to_string(&mut buf).unwrap();
    let (_, body) = buf.split_once("\r\n\r\n").unwrap();
    body.to_string()
}
