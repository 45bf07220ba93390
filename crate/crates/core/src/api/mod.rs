//! HTTP/JSON service. Every GET is answered from one index snapshot and
//! nothing else; POSTs go through the node.

mod http;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::docform::{print_term, Names, TheorySpec};
use crate::hash::{BlockHash, DocId, ObjId, PropId, TheoryId, TxId};
use crate::indexer::{bounty_views, IndexSnapshot, PropEntry};
use crate::kernel::Term;
use crate::ledger::{graph_dot, Addr, Attachment, Payload};
use crate::node::{Node, SubmitError};

pub use http::{router, serve, serve_on};

pub const MAX_PAGE: usize = 500;

#[derive(Clone, Debug)]
pub struct ApiConfig {
    pub listen: String,
    pub read_only: bool,
    /// Origins allowed cross-origin access; "*" allows any.
    pub cors: Vec<String>,
    pub page_size: usize,
    /// Directory served under /ui.
    pub static_dir: Option<PathBuf>,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig { listen: "127.0.0.1:8080".into(), read_only: false, cors: Vec::new(), page_size: 100, static_dir: None }
    }
}

impl ApiConfig {
    pub fn page_size(&self) -> usize {
        self.page_size.clamp(1, MAX_PAGE)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Response {
    fn json(status: u16, v: &impl Serialize) -> Response {
        Response { status, content_type: "application/json", body: serde_json::to_vec(v).expect("json") }
    }

    fn ok(v: &impl Serialize) -> Response {
        Response::json(200, v)
    }

    pub fn error(status: u16, code: &str, message: impl Into<String>) -> Response {
        Response::json(status, &json!({ "error": { "code": code, "message": message.into() } }))
    }

    fn not_found(what: &str, id: &str) -> Response {
        Response::error(404, "NotFound", format!("no {what} {id}"))
    }

    fn bad_id(what: &str, id: &str) -> Response {
        Response::error(400, "BadRequest", format!("{id:?} is not a valid {what}"))
    }

    pub fn json_value(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or(Value::Null)
    }
}

/// Page selection from `?page=N&limit=M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Page {
    pub page: usize,
    pub limit: usize,
}

impl Page {
    pub fn parse(query: &str, default_limit: usize) -> Page {
        let mut p = Page { page: 0, limit: default_limit.clamp(1, MAX_PAGE) };
        for kv in query.split('&') {
            match kv.split_once('=') {
                Some(("page", v)) => p.page = v.parse().unwrap_or(0),
                Some(("limit", v)) => p.limit = v.parse::<usize>().unwrap_or(p.limit).clamp(1, MAX_PAGE),
                _ => {}
            }
        }
        p
    }

    fn slice<T: Serialize>(&self, items: &[T]) -> Value {
        let start = self.page.saturating_mul(self.limit).min(items.len());
        let end = (start + self.limit).min(items.len());
        json!({ "total": items.len(), "page": self.page, "limit": self.limit, "items": &items[start..end] })
    }
}

/// Routes a GET against a snapshot.
pub fn get(snap: &IndexSnapshot, path: &str, query: &str, cfg: &ApiConfig) -> Response {
    let page = Page::parse(query, cfg.page_size());
    let parts: Vec<&str> = path.trim_matches('/').split('/').collect();
    match parts.as_slice() {
        ["status"] => status(snap),
        ["graph"] => Response::ok(&snap.graph),
        ["graph.dot"] => Response { status: 200, content_type: "text/vnd.graphviz", body: graph_dot(&snap.graph).into_bytes() },
        ["block", id] => block(snap, id),
        ["tx", id] => tx(snap, id),
        ["address", id] => address(snap, id, page),
        ["theory", id] => theory(snap, id),
        ["object", id] => object(snap, id),
        ["prop", id] => prop(snap, id),
        ["doc", id] => doc(snap, id),
        ["bounties", "open"] => Response::ok(&page.slice(&bounty_views(snap).highest_open)),
        ["bounties", "collected"] => Response::ok(&page.slice(&bounty_views(snap).highest_collected)),
        ["bounties", "categories"] => Response::ok(&bounty_views(snap).categories),
        _ => Response::error(404, "NotFound", format!("no route {path}")),
    }
}

/// Routes any request; GETs read the node's current snapshot.
pub fn handle(node: &Node, cfg: &ApiConfig, method: &str, path: &str, query: &str, body: &[u8]) -> Response {
    match (method, path) {
        ("GET", _) => get(&node.snapshot(), path, query, cfg),
        ("POST", "/tx") | ("POST", "/doc/check") if cfg.read_only => {
            Response::error(403, "ReadOnly", "this node does not accept submissions")
        }
        ("POST", "/tx") => post_tx(node, body),
        ("POST", "/doc/check") => {
            let text = String::from_utf8_lossy(body);
            Response::ok(&node.check_doc_text(&text))
        }
        _ => Response::error(405, "MethodNotAllowed", format!("{method} {path}")),
    }
}

fn post_tx(node: &Node, body: &[u8]) -> Response {
    let text = String::from_utf8_lossy(body);
    match node.submit_hex(&text) {
        Ok(txid) => Response::ok(&json!({ "txid": txid })),
        Err(SubmitError::TxInvalid(te)) => Response::json(
            422,
            &json!({ "error": { "code": "TxInvalid", "reason": te.code(), "message": te.to_string() } }),
        ),
        Err(e) => Response::error(400, e.code(), e.to_string()),
    }
}

fn status(snap: &IndexSnapshot) -> Response {
    let s = &snap.stats;
    Response::ok(&json!({
        "height": s.height,
        "address_count": s.address_count,
        "tx_count": s.tx_count,
        "tx_volume": s.tx_volume,
        "coin_circulation": s.coin_circulation,
        "tip_hash": snap.tip,
        "snapshot_digest": snap.digest_hex(),
    }))
}

fn block(snap: &IndexSnapshot, id: &str) -> Response {
    let hash = match id.parse::<u64>() {
        Ok(h) if id.len() < 20 => match snap.chain.get(h as usize) {
            Some(b) => *b,
            None => return Response::not_found("block at height", id),
        },
        _ => match BlockHash::from_hex(id) {
            Ok(h) => h,
            Err(_) => return Response::bad_id("block hash or height", id),
        },
    };
    let Some(b) = snap.blocks.get(&hash) else { return Response::not_found("block", id) };
    let txs: Vec<Value> = b
        .txids
        .iter()
        .map(|t| match snap.txs.get(t) {
            Some(e) => json!({ "txid": t, "kind": tx_kind(&e.tx), "fee": e.fee }),
            None => json!({ "txid": t }),
        })
        .collect();
    let mut v = serde_json::to_value(b).expect("json");
    v["color"] = json!(b.class.color());
    v["txs"] = json!(txs);
    Response::ok(&v)
}

fn tx_kind(tx: &crate::ledger::Tx) -> &'static str {
    match (&tx.coinbase, &tx.attachment) {
        (Some(_), _) => "coinbase",
        (_, Some(Attachment::Theory(_))) => "theory",
        (_, Some(Attachment::Doc(_))) => "doc",
        _ if tx.outputs.iter().any(|o| matches!(o.payload, Payload::Bounty { .. })) => "bounty",
        _ => "transfer",
    }
}

fn names_for(snap: &IndexSnapshot, th: &TheoryId) -> Names {
    let mut names = match snap.theories.get(th) {
        Some(t) => Names::for_theory(&t.spec),
        None => Names::default(),
    };
    for o in snap.objects.values().filter(|o| o.theory == *th) {
        names.add_obj(o.id, &o.name);
    }
    names
}

fn print(snap: &IndexSnapshot, th: &TheoryId, t: &Term) -> String {
    print_term(&names_for(snap, th), t)
}

fn tx(snap: &IndexSnapshot, id: &str) -> Response {
    let Ok(txid) = TxId::from_hex(id) else { return Response::bad_id("txid", id) };
    let Some(e) = snap.txs.get(&txid) else { return Response::not_found("transaction", id) };
    let t = &e.tx;
    let inputs: Vec<Value> = t
        .inputs
        .iter()
        .map(|i| json!({ "asset": i.asset, "pubkey": i.pubkey.to_hex(), "signer": Addr::pay_to_key(&i.pubkey) }))
        .collect();
    let outputs: Vec<Value> = t
        .outputs
        .iter()
        .enumerate()
        .map(|(k, o)| {
            let asset = t.output_id(k);
            json!({ "index": k, "asset": asset, "addr": o.addr, "payload": o.payload, "live": snap.assets.contains_key(&asset) })
        })
        .collect();
    let attachment = match &t.attachment {
        None => Value::Null,
        Some(Attachment::Theory(spec)) => json!({ "kind": "theory", "theory": spec.id().ok(), "name": spec.name }),
        Some(Attachment::Doc(d)) => {
            let id = d.id();
            match snap.docs.get(&id) {
                Some(entry) => json!({ "kind": "doc", "doc": id, "theory": d.theory, "items": doc_items(snap, &id), "publisher": entry.publisher }),
                None => json!({ "kind": "doc", "doc": id, "theory": d.theory }),
            }
        }
    };
    Response::ok(&json!({
        "txid": txid,
        "block": e.block,
        "height": e.height,
        "index": e.index,
        "fee": e.fee,
        "kind": tx_kind(t),
        "coinbase": t.coinbase.is_some(),
        "inputs": inputs,
        "outputs": outputs,
        "attachment": attachment,
        "hex": hex::encode(t.to_bytes()),
    }))
}

/// Document items with printed types, statements and proofs.
fn doc_items(snap: &IndexSnapshot, id: &DocId) -> Vec<Value> {
    let Some(entry) = snap.docs.get(id) else { return Vec::new() };
    let doc = snap.txs.get(&entry.tx).and_then(|e| match &e.tx.attachment {
        Some(Attachment::Doc(d)) => Some(d.clone()),
        _ => None,
    });
    let (spec, doc) = match (snap.theories.get(&entry.theory), doc) {
        (Some(t), Some(d)) => (t.spec.clone(), d),
        _ => return entry.items.iter().map(|i| json!(i)).collect(),
    };
    let names = Names::for_doc(&spec, &doc);
    entry
        .items
        .iter()
        .zip(&doc.items)
        .map(|(i, item)| {
            let mut v = json!(i);
            match item {
                crate::docform::Item::Def { ty, body, .. } => {
                    v["ty"] = json!(ty.to_string());
                    v["body"] = json!(print_term(&names, body));
                }
                crate::docform::Item::Thm { stmt, proof, .. } => {
                    v["statement"] = json!(print_term(&names, stmt));
                    v["proof"] = json!(crate::docform::print_proof(&names, proof));
                }
                crate::docform::Item::Conj { stmt, tag, .. } => {
                    v["statement"] = json!(print_term(&names, stmt));
                    v["tag"] = json!(tag);
                }
                crate::docform::Item::Param { .. } => {}
            }
            v
        })
        .collect()
}

fn doc(snap: &IndexSnapshot, id: &str) -> Response {
    let Ok(d) = DocId::from_hex(id) else { return Response::bad_id("document id", id) };
    let Some(e) = snap.docs.get(&d) else { return Response::not_found("document", id) };
    Response::ok(&json!({
        "doc": d, "theory": e.theory, "publisher": e.publisher, "tx": e.tx, "height": e.height,
        "items": doc_items(snap, &d),
    }))
}

fn address(snap: &IndexSnapshot, id: &str, page: Page) -> Response {
    let Ok(a) = Addr::from_hex(id) else { return Response::bad_id("address", id) };
    let assets: Vec<_> = snap.live_at(&a).collect();
    let txs = snap.addr_txs.get(&a).cloned().unwrap_or_default();
    let known = !assets.is_empty() || !txs.is_empty() || snap.props.contains_key(&a) || snap.objects.contains_key(&a);
    if !known && !snap.bounties.contains_key(&a) && !snap.authorship.contains_key(&a) {
        return Response::not_found("activity at address", id);
    }
    let balance: u64 = assets.iter().filter(|x| matches!(x.payload, Payload::Currency { .. })).map(|x| x.payload.value()).sum();
    let mut entity = Value::Null;
    if let Some(p) = snap.props.get(&a) {
        entity = json!({ "kind": "prop", "id": p.id, "theory": p.theory });
    } else if let Some(o) = snap.objects.get(&a) {
        entity = json!({ "kind": "object", "id": o.id, "theory": o.theory });
    }
    Response::ok(&json!({
        "addr": a,
        "kind": if a.is_key() { "pay_to_key" } else { "derived" },
        "balance": balance,
        "assets": assets,
        "entity": entity,
        "authored": snap.authorship.get(&a).cloned().unwrap_or_default(),
        "txs": page.slice(&txs),
    }))
}

fn theory(snap: &IndexSnapshot, id: &str) -> Response {
    let Ok(th) = TheoryId::from_hex(id) else { return Response::bad_id("theory id", id) };
    let Some(t) = snap.theories.get(&th) else { return Response::not_found("theory", id) };
    let spec: &TheorySpec = &t.spec;
    let names = names_for(snap, &th);
    let sig = spec.signature().expect("indexed theories check");
    let prims: Vec<Value> = spec.prims.iter().map(|p| json!({ "name": p.name, "ty": p.ty.to_string() })).collect();
    let axioms: Vec<Value> = spec
        .axioms
        .iter()
        .map(|a| {
            let pid = crate::kernel::prop_id(&sig, &a.stmt).ok();
            json!({ "name": a.name, "statement": print_term(&names, &a.stmt), "prop": pid })
        })
        .collect();
    let docs: Vec<DocId> = snap.docs.iter().filter(|(_, d)| d.theory == th).map(|(k, _)| *k).collect();
    Response::ok(&json!({
        "id": th,
        "addr": Addr::theory(&th),
        "name": spec.name,
        "base_count": spec.base_count,
        "prims": prims,
        "axioms": axioms,
        "publisher": t.publisher,
        "tx": t.tx,
        "height": t.height,
        "builtin": t.tx.is_none(),
        "object_count": snap.objects.values().filter(|o| o.theory == th).count(),
        "prop_count": snap.props.values().filter(|p| p.theory == th).count(),
        "docs": docs,
    }))
}

/// Resolves an entity key given as an address or a bare id.
fn resolve<'a, T>(
    map: &'a BTreeMap<Addr, T>,
    id: &str,
    by_id: impl Fn(&[u8; 32]) -> Option<(&'a Addr, &'a T)>,
) -> Result<Option<(&'a Addr, &'a T)>, ()> {
    if id.len() == 42 {
        let a = Addr::from_hex(id).map_err(|_| ())?;
        return Ok(map.get_key_value(&a));
    }
    let bytes: [u8; 32] = hex::decode(id).map_err(|_| ())?.try_into().map_err(|_| ())?;
    Ok(by_id(&bytes))
}

fn object(snap: &IndexSnapshot, id: &str) -> Response {
    let found = resolve(&snap.objects, id, |b| snap.objects_by_id(&ObjId(*b)).next());
    let (a, o) = match found {
        Err(()) => return Response::bad_id("object id or address", id),
        Ok(None) => return Response::not_found("object", id),
        Ok(Some(x)) => x,
    };
    let used_by: Vec<Addr> = snap.deps().into_iter().filter(|(_, tos)| tos.contains(a)).map(|(k, _)| k).collect();
    Response::ok(&json!({
        "addr": a,
        "theory": o.theory,
        "id": o.id,
        "name": o.name,
        "ty": o.ty.to_string(),
        "owner": o.owner,
        "doc": o.doc,
        "tx": o.tx,
        "height": o.height,
        "uses": o.uses,
        "used_by": used_by,
    }))
}

fn prop(snap: &IndexSnapshot, id: &str) -> Response {
    let found = resolve(&snap.props, id, |b| snap.props_by_id(&PropId(*b)).next());
    let (a, p): (&Addr, &PropEntry) = match found {
        Err(()) => return Response::bad_id("proposition id or address", id),
        Ok(None) => return Response::not_found("proposition", id),
        Ok(Some(x)) => x,
    };
    let bounty = snap.bounties.get(a);
    Response::ok(&json!({
        "addr": a,
        "theory": p.theory,
        "id": p.id,
        "name": p.name(),
        "status": p.status(),
        "statement": print(snap, &p.theory, &p.stmt),
        "tag": p.tag(),
        "owner": p.owner(),
        "neg_owner": p.neg_owner(),
        "events": p.events,
        "deps": p.deps(),
        "bounty": {
            "open": bounty.map_or(0, |b| b.open_amount()),
            "collected": bounty.map_or(0, |b| b.collected_amount()),
            "history": bounty.map(|b| b.events.clone()).unwrap_or_default(),
        },
    }))
}
