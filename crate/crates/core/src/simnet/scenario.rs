use serde::{Deserialize, Serialize};

use crate::ledger::GenesisConfig;

/// A scripted multi-node history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub nodes: usize,
    #[serde(default)]
    pub genesis: GenesisConfig,
    /// Message delay is `base_delay` plus up to `jitter` ticks.
    #[serde(default = "one_u64")]
    pub base_delay: u64,
    #[serde(default = "three")]
    pub jitter: u64,
    /// Drop intents that cannot be built instead of failing.
    #[serde(default)]
    pub lenient: bool,
    /// Run the network until no messages remain after the last step.
    #[serde(default = "yes")]
    pub settle: bool,
    pub steps: Vec<Step>,
}

fn one() -> usize {
    1
}
fn one_u64() -> u64 {
    1
}
fn three() -> u64 {
    3
}
fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Produce {
        #[serde(default)]
        label: Option<String>,
        /// "tip", "genesis", "unknown" or an earlier label.
        #[serde(default = "tip")]
        parent: String,
        #[serde(default)]
        node: usize,
        #[serde(default)]
        txs: Vec<Intent>,
        /// Include the node's mempool after the scripted transactions.
        #[serde(default)]
        mempool: bool,
        #[serde(default)]
        flags: Flags,
    },
    /// Delivers queued messages right away, earliest first.
    Deliver {
        #[serde(default)]
        to: Option<usize>,
        #[serde(default)]
        count: Option<usize>,
    },
    /// Cuts `nodes` off from the rest for `duration` ticks; crossing messages wait.
    Partition { nodes: Vec<usize>, duration: u64 },
    SubmitTx { node: usize, tx: Intent },
    /// Runs the clock until `until` or until the queue is empty.
    Run {
        #[serde(default)]
        until: Option<u64>,
    },
}

fn tip() -> String {
    "tip".into()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// Replace the first theorem's proof of a document with a wrong one.
    #[serde(default)]
    pub corrupt_proof: bool,
    /// Repeat an input of the first ordinary transaction.
    #[serde(default)]
    pub double_spend: bool,
    /// Flip a bit of the header signature.
    #[serde(default)]
    pub bad_sig: bool,
    /// Point the header at a parent nobody has.
    #[serde(default)]
    pub orphan_parent: bool,
}

impl Flags {
    pub fn any(&self) -> bool {
        self.corrupt_proof || self.double_spend || self.bad_sig || self.orphan_parent
    }
}

/// Names a proposition: a conjecture or theorem of a corpus document, the
/// proposition a theorem refutes, or a raw id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropRef {
    Conj {
        doc: String,
        conj: usize,
    },
    Id {
        prop: String,
        #[serde(default)]
        theory: Option<String>,
    },
    Thm {
        doc: String,
        #[serde(default)]
        thm: usize,
        #[serde(default)]
        refuted: bool,
    },
}

/// Transactions described by intent; keys are given by test-key seed and
/// amounts in atomic units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Intent {
    Transfer {
        from: u64,
        to: u64,
        amount: u64,
        #[serde(default)]
        fee: u64,
    },
    PublishTheory {
        from: u64,
        theory: String,
        #[serde(default)]
        fee: u64,
    },
    PlaceBounty {
        from: u64,
        #[serde(flatten)]
        prop: PropRef,
        amount: u64,
        #[serde(default)]
        fee: u64,
    },
    Marker {
        from: u64,
        doc: String,
        #[serde(default = "one_bar")]
        fee: u64,
    },
    PublishDoc {
        from: u64,
        doc: String,
        #[serde(default)]
        fee: u64,
    },
    /// Collects every live bounty on the proposition.
    Collect {
        from: u64,
        #[serde(flatten)]
        prop: PropRef,
        #[serde(default)]
        to: Option<u64>,
        #[serde(default)]
        fee: u64,
    },
}

fn one_bar() -> u64 {
    crate::ledger::BAR
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Scenario, serde_json::Error> {
        serde_json::from_str(s)
    }
}
