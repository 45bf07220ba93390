//! Python bindings: keys, an in-process node with its HTTP API routes,
//! the offline document checker, term normalization and scenarios.
//!
//! Structured results come back as plain Python dicts and lists.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use formalchain::api::{self, ApiConfig};
use formalchain::docform::{corpus, parse_term_in, parse_theory, print_term, Library, Names, TheorySpec};
use formalchain::hash::{PropId, TheoryId};
use formalchain::kernel::{beta_eta, prop_id, typecheck};
use formalchain::ledger::builder::{coins, place_bounty, transfer};
use formalchain::ledger::{graph_dot, Addr, GenesisConfig, Payload};
use formalchain::node::{check_doc_in, Node};
use formalchain::simnet::{random_scenario, run_scenario, Scenario};

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn bad(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn theory_lib(extra: &[String]) -> PyResult<Library> {
    let mut lib = corpus::library();
    for src in extra {
        lib.insert(parse_theory(src).map_err(bad)?).map_err(bad)?;
    }
    Ok(lib)
}

fn lookup(lib: &Library, theory: &str) -> PyResult<TheorySpec> {
    lib.lookup(theory).map(|(_, s)| s.clone()).ok_or_else(|| PyKeyError::new_err(format!("unknown theory {theory}")))
}

/// A signing key derived from a test seed, or from a 32-byte secret.
#[pyclass(module = "formalchain", frozen)]
struct Keypair {
    inner: formalchain::ledger::Keypair,
}

#[pymethods]
impl Keypair {
    #[new]
    #[pyo3(signature = (seed=None, secret=None))]
    fn new(seed: Option<u64>, secret: Option<&str>) -> PyResult<Self> {
        let inner = match (seed, secret) {
            (Some(s), None) => formalchain::ledger::Keypair::from_seed(s),
            (None, Some(h)) => {
                let b: [u8; 32] =
                    hex::decode(h).map_err(bad)?.try_into().map_err(|_| bad("secret must be 32 bytes"))?;
                formalchain::ledger::Keypair::from_secret(b)
            }
            _ => return Err(bad("give exactly one of seed or secret")),
        };
        Ok(Keypair { inner })
    }

    #[getter]
    fn public(&self) -> String {
        self.inner.public().to_hex()
    }

    #[getter]
    fn address(&self) -> String {
        Addr::pay_to_key(&self.inner.public()).to_hex()
    }

    #[getter]
    fn secret(&self) -> String {
        hex::encode(self.inner.secret())
    }

    fn sign(&self, msg: &[u8]) -> Vec<u8> {
        self.inner.sign(msg).0.to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Keypair(public='{}')", self.public())
    }
}

/// A node in this process. Reads go through the same routes as the HTTP
/// service.
#[pyclass(name = "Node", module = "formalchain", frozen)]
struct PyNode {
    inner: Node,
    cfg: ApiConfig,
}

#[pymethods]
impl PyNode {
    #[new]
    #[pyo3(signature = (producer_seeds=vec![1, 2, 3], data_dir=None))]
    fn new(producer_seeds: Vec<u64>, data_dir: Option<&str>) -> PyResult<Self> {
        if producer_seeds.is_empty() {
            return Err(bad("need at least one producer seed"));
        }
        let g = GenesisConfig::with_seeds(producer_seeds).build();
        let inner = match data_dir {
            Some(d) => Node::open(&g, d).map_err(bad)?,
            None => Node::new(&g),
        };
        Ok(PyNode { inner, cfg: ApiConfig::default() })
    }

    #[getter]
    fn height(&self) -> u64 {
        self.inner.snapshot().stats.height
    }

    #[getter]
    fn tip(&self) -> String {
        self.inner.tip().to_hex()
    }

    #[getter]
    fn digest(&self) -> String {
        self.inner.snapshot().digest_hex()
    }

    #[getter]
    fn builtin_theory(&self) -> String {
        self.inner.params().builtin_theory.to_hex()
    }

    /// GET `path` against the current snapshot; returns (status, body).
    #[pyo3(signature = (path, query=""))]
    fn get<'py>(&self, py: Python<'py>, path: &str, query: &str) -> PyResult<(u16, Bound<'py, PyAny>)> {
        let r = api::get(&self.inner.snapshot(), path, query, &self.cfg);
        Ok((r.status, to_py(py, &r.json_value())?))
    }

    fn status<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        Ok(self.get(py, "/status", "")?.1)
    }

    fn graph_dot(&self) -> String {
        graph_dot(&self.inner.snapshot().graph)
    }

    /// Currency held by an address at the tip, in atomic units.
    fn balance(&self, address: &str) -> PyResult<u64> {
        let addr = Addr::from_hex(address).map_err(bad)?;
        let st = self.inner.tip_state();
        Ok(coins(&st, &addr)
            .iter()
            .map(|a| match a.payload {
                Payload::Currency { amount } => amount,
                _ => 0,
            })
            .sum())
    }

    /// Validates a hex transaction into the mempool; returns its id.
    fn submit_tx(&self, hex_tx: &str) -> PyResult<String> {
        match self.inner.submit_hex(hex_tx) {
            Ok(id) => Ok(id.to_hex()),
            Err(formalchain::node::SubmitError::TxInvalid(e)) => Err(bad(format!("{}: {e}", e.code()))),
            Err(e) => Err(bad(format!("{}: {e}", e.code()))),
        }
    }

    /// Signed transfer against the mempool state, as hex.
    #[pyo3(signature = (key, to, amount, fee=0))]
    fn transfer(&self, key: &Keypair, to: &str, amount: u64, fee: u64) -> PyResult<String> {
        let to = Addr::from_hex(to).map_err(bad)?;
        let tx = transfer(&self.inner.pool_state(), &key.inner, to, amount, fee).map_err(bad)?;
        Ok(hex::encode(tx.to_bytes()))
    }

    /// Signed bounty placement on a proposition, as hex.
    #[pyo3(signature = (key, prop, amount, fee=0, theory=None))]
    fn place_bounty(&self, key: &Keypair, prop: &str, amount: u64, fee: u64, theory: Option<&str>) -> PyResult<String> {
        let prop = PropId::from_hex(prop).map_err(bad)?;
        let th = match theory {
            Some(t) => TheoryId::from_hex(t).map_err(bad)?,
            None => self.inner.params().builtin_theory,
        };
        let tx = place_bounty(&self.inner.pool_state(), &key.inner, &th, &prop, amount, fee).map_err(bad)?;
        Ok(hex::encode(tx.to_bytes()))
    }

    /// Produces the next block with `key`; returns (hash, outcome).
    #[pyo3(signature = (key, timestamp=0))]
    fn produce(&self, key: &Keypair, timestamp: u64) -> (String, String) {
        let (b, r) = self.inner.produce(&key.inner, timestamp);
        (b.hash().to_hex(), format!("{r:?}"))
    }

    /// Public key of the producer due at the next height.
    fn next_producer(&self) -> String {
        let (h, params) = self.inner.with_tree(|t| (t.height() + 1, t.params.clone()));
        params.producers[(h % params.producers.len() as u64) as usize].to_hex()
    }

    fn check_doc<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.check_doc_text(text))
    }

    fn rebuild_index(&self) -> PyResult<String> {
        Ok(self.inner.rebuild_index().map_err(bad)?.digest_hex())
    }
}

/// Checks a document against the corpus theories plus any given theory
/// sources. The report has the same shape as POST /doc/check.
#[pyfunction]
#[pyo3(signature = (text, theories=vec![]))]
fn check_doc<'py>(py: Python<'py>, text: &str, theories: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let lib = theory_lib(&theories)?;
    to_py(py, &check_doc_in(&lib, text))
}

/// Beta-eta normal form of a term, printed.
#[pyfunction]
#[pyo3(signature = (text, theory="mini_hf"))]
fn normalize(text: &str, theory: &str) -> PyResult<String> {
    let spec = lookup(&corpus::library(), theory)?;
    let t = parse_term_in(text, &spec, None).map_err(bad)?;
    let sig = spec.signature().map_err(bad)?;
    typecheck(&sig, &[], &t).map_err(bad)?;
    Ok(print_term(&Names::for_theory(&spec), &beta_eta(&t)))
}

/// Content id of a closed proposition.
#[pyfunction]
#[pyo3(signature = (text, theory="mini_hf"))]
fn proposition_id(text: &str, theory: &str) -> PyResult<String> {
    let spec = lookup(&corpus::library(), theory)?;
    let t = parse_term_in(text, &spec, None).map_err(bad)?;
    Ok(prop_id(&spec.signature().map_err(bad)?, &t).map_err(bad)?.to_hex())
}

#[pyfunction]
#[pyo3(signature = (theory="mini_hf"))]
fn theory_id(theory: &str) -> PyResult<String> {
    Ok(lookup(&corpus::library(), theory)?.id().map_err(bad)?.to_hex())
}

#[pyfunction]
fn prop_address(theory: &str, prop: &str) -> PyResult<String> {
    let th = TheoryId::from_hex(theory).map_err(bad)?;
    let p = PropId::from_hex(prop).map_err(bad)?;
    Ok(Addr::prop(&th, &p).to_hex())
}

/// Runs a scenario given as JSON text, or a random one from seed and node
/// count when `text` is None.
#[pyfunction]
#[pyo3(signature = (text=None, seed=0, nodes=3))]
fn scenario<'py>(py: Python<'py>, text: Option<&str>, seed: u64, nodes: usize) -> PyResult<Bound<'py, PyAny>> {
    let sc = match text {
        Some(t) => Scenario::from_json(t).map_err(bad)?,
        None => random_scenario(seed, nodes),
    };
    to_py(py, &run_scenario(&sc).map_err(bad)?)
}

#[pymodule]
#[pyo3(name = "formalchain")]
fn formalchain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Keypair>()?;
    m.add_class::<PyNode>()?;
    m.add("BAR", formalchain::ledger::BAR)?;
    m.add_function(wrap_pyfunction!(check_doc, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(proposition_id, m)?)?;
    m.add_function(wrap_pyfunction!(theory_id, m)?)?;
    m.add_function(wrap_pyfunction!(prop_address, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    Ok(())
}
