use serde::{Deserialize, Serialize};

use crate::docform::{corpus, TheorySpec};
use crate::hash::BlockHash;

use super::addr::Addr;
use super::asset::{Output, Payload, BAR};
use super::block::{merkle_root, Block, Header};
use super::keys::{Keypair, Sig};
use super::state::{ChainState, Params};
use super::tx::Tx;
use super::validate::{BlockEffects, TxEffect};

fn default_subsidy() -> u64 {
    50 * BAR
}
fn default_auto_blocks() -> u64 {
    10
}
fn default_auto_amount() -> u64 {
    25 * BAR
}
fn default_maturity() -> u64 {
    4
}
fn default_timestamp() -> u64 {
    1_700_000_000
}

/// Theories every chain starts with.
pub fn builtin_theories() -> Vec<TheorySpec> {
    vec![corpus::mini_hf()]
}

/// Genesis file: the producer set (as test-key seeds) and consensus parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenesisConfig {
    pub producer_seeds: Vec<u64>,
    #[serde(default = "default_timestamp")]
    pub timestamp: u64,
    #[serde(default = "default_subsidy")]
    pub subsidy: u64,
    #[serde(default = "default_auto_blocks")]
    pub auto_bounty_blocks: u64,
    #[serde(default = "default_auto_amount")]
    pub auto_bounty_amount: u64,
    #[serde(default = "default_maturity")]
    pub marker_maturity: u64,
}

impl Default for GenesisConfig {
    fn default() -> Self {
        GenesisConfig::with_seeds(vec![1, 2, 3])
    }
}

/// The genesis block with the state it produces.
#[derive(Clone, Debug)]
pub struct Genesis {
    pub params: Params,
    pub block: Block,
    pub state: ChainState,
    pub effects: BlockEffects,
}

impl GenesisConfig {
    pub fn with_seeds(producer_seeds: Vec<u64>) -> GenesisConfig {
        GenesisConfig {
            producer_seeds,
            timestamp: default_timestamp(),
            subsidy: default_subsidy(),
            auto_bounty_blocks: default_auto_blocks(),
            auto_bounty_amount: default_auto_amount(),
            marker_maturity: default_maturity(),
        }
    }

    pub fn from_json(s: &str) -> Result<GenesisConfig, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn producer_keys(&self) -> Vec<Keypair> {
        self.producer_seeds.iter().map(|s| Keypair::from_seed(*s)).collect()
    }

    pub fn params(&self) -> Params {
        assert!(!self.producer_seeds.is_empty(), "genesis needs at least one producer");
        let hf = corpus::mini_hf().id().expect("mini-HF checks");
        Params {
            producers: self.producer_keys().iter().map(Keypair::public).collect(),
            subsidy: self.subsidy,
            auto_bounty_blocks: self.auto_bounty_blocks,
            auto_bounty_amount: self.auto_bounty_amount,
            marker_maturity: self.marker_maturity,
            builtin_theory: hf,
        }
    }

    /// Height 0: an unsigned header and one subsidy paid to the first producer.
    pub fn build(&self) -> Genesis {
        let params = self.params();
        let producer = params.producers[0];
        let cb = Tx {
            coinbase: Some(0),
            inputs: Vec::new(),
            outputs: vec![Output::new(Addr::pay_to_key(&producer), Payload::Currency { amount: params.subsidy })],
            attachment: None,
        };
        let header = Header {
            parent: BlockHash::ZERO,
            height: 0,
            timestamp: self.timestamp,
            producer,
            body_hash: merkle_root(std::slice::from_ref(&cb)),
            sig: Sig::ZERO,
        };
        let block = Block { header, txs: vec![cb.clone()] };
        let eff = TxEffect {
            txid: cb.txid(),
            spent: Vec::new(),
            created: vec![super::asset::Asset {
                id: cb.output_id(0),
                addr: cb.outputs[0].addr,
                payload: cb.outputs[0].payload.clone(),
                born: 0,
            }],
            fee: 0,
            subsidy: params.subsidy,
            theory: None,
            doc: None,
            collections: Vec::new(),
            auto_prop: None,
        };
        let effects = BlockEffects {
            hash: block.hash(),
            parent: BlockHash::ZERO,
            height: 0,
            timestamp: self.timestamp,
            txs: vec![eff],
        };
        let mut state = ChainState::empty(&builtin_theories());
        state.connect(&effects);
        Genesis { params, block, state, effects }
    }
}
