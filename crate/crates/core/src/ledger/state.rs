use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::docform::TheorySpec;
use crate::hash::{sha256, AssetId, BlockHash, TheoryId};
use crate::kernel::Signature;

use super::addr::Addr;
use super::asset::{Asset, Payload, BAR};
use super::keys::PubKey;

/// Consensus parameters fixed by genesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub producers: Vec<PubKey>,
    pub subsidy: u64,
    pub auto_bounty_blocks: u64,
    pub auto_bounty_amount: u64,
    pub marker_maturity: u64,
    /// The theory auto-bounty propositions live in.
    pub builtin_theory: TheoryId,
}

impl Params {
    pub fn with_producers(producers: Vec<PubKey>, builtin_theory: TheoryId) -> Params {
        Params {
            producers,
            subsidy: 50 * BAR,
            auto_bounty_blocks: 10,
            auto_bounty_amount: 25 * BAR,
            marker_maturity: 4,
            builtin_theory,
        }
    }

    pub fn producer_at(&self, height: u64) -> PubKey {
        self.producers[(height % self.producers.len() as u64) as usize]
    }

    pub fn has_auto_bounty(&self, height: u64) -> bool {
        height >= 1 && height <= self.auto_bounty_blocks
    }
}

/// The confirmed ledger at some block.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainState {
    pub height: u64,
    pub tip: BlockHash,
    /// Live assets.
    pub assets: BTreeMap<AssetId, Asset>,
    pub by_addr: BTreeMap<Addr, BTreeSet<AssetId>>,
    pub spent: BTreeSet<AssetId>,
    /// One signature per published theory.
    pub theories: BTreeMap<TheoryId, Signature>,
    pub specs: BTreeMap<TheoryId, TheorySpec>,
    pub subsidies: u64,
    pub fees: u64,
}

impl ChainState {
    /// State before genesis: only the built-in theories are known.
    pub fn empty(builtins: &[TheorySpec]) -> ChainState {
        let mut st = ChainState::default();
        for spec in builtins {
            let id = spec.id().expect("builtin theory checks");
            st.theories.insert(id, spec.signature().expect("builtin theory checks"));
            st.specs.insert(id, spec.clone());
        }
        st
    }

    pub fn coin_supply(&self) -> u64 {
        self.subsidies - self.fees
    }

    pub fn live_at(&self, addr: &Addr) -> impl Iterator<Item = &Asset> {
        self.by_addr.get(addr).into_iter().flatten().map(|id| &self.assets[id])
    }

    pub fn insert_asset(&mut self, a: Asset) {
        self.by_addr.entry(a.addr).or_default().insert(a.id);
        self.assets.insert(a.id, a);
    }

    pub fn remove_asset(&mut self, id: &AssetId) -> Option<Asset> {
        let a = self.assets.remove(id)?;
        if let Some(set) = self.by_addr.get_mut(&a.addr) {
            set.remove(id);
            if set.is_empty() {
                self.by_addr.remove(&a.addr);
            }
        }
        Some(a)
    }

    /// Sum of live currency and bounty amounts.
    pub fn live_value(&self) -> u64 {
        self.assets.values().map(|a| a.payload.value()).sum()
    }

    pub fn balance(&self, addr: &Addr) -> u64 {
        self.live_at(addr).filter(|a| matches!(a.payload, Payload::Currency { .. })).map(|a| a.payload.value()).sum()
    }

    /// SHA-256 of the JSON serialization (maps are ordered, so this is canonical).
    pub fn digest(&self) -> [u8; 32] {
        sha256(&serde_json::to_vec(self).expect("state serializes"))
    }
}
