use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hash::{AssetId, PropId, TheoryId, TxId};
use crate::ledger::Addr;

use super::{BountyEvent, IndexSnapshot};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenView {
    pub addr: Addr,
    pub theory: Option<TheoryId>,
    pub prop: Option<PropId>,
    pub name: Option<String>,
    pub tag: String,
    pub status: String,
    pub amount: u64,
    /// Number of open bounty assets making up the amount.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectedView {
    pub addr: Addr,
    pub theory: Option<TheoryId>,
    pub prop: Option<PropId>,
    pub name: Option<String>,
    pub tag: String,
    pub asset: AssetId,
    pub amount: u64,
    pub height: u64,
    pub tx: TxId,
    pub collector: Addr,
    pub by_disproof: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySums {
    pub open: u64,
    pub collected: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BountyViews {
    pub highest_open: Vec<OpenView>,
    pub highest_collected: Vec<CollectedView>,
    pub categories: BTreeMap<String, CategorySums>,
}

pub fn bounty_views(snap: &IndexSnapshot) -> BountyViews {
    let mut v = BountyViews::default();
    for (addr, b) in &snap.bounties {
        let p = snap.props.get(addr);
        let theory = p.map(|p| p.theory);
        let prop = p.map(|p| p.id);
        let name = p.and_then(|p| p.name()).map(str::to_string);
        let tag = p.map_or(crate::docform::DEFAULT_TAG, |p| p.tag()).to_string();
        let open = b.open_amount();
        let sums = v.categories.entry(tag.clone()).or_default();
        sums.open += open;
        sums.collected += b.collected_amount();
        if open > 0 {
            let collected = b.collected_assets();
            let count = b
                .events
                .iter()
                .filter(|e| matches!(e, BountyEvent::Placed { asset, .. } if !collected.contains(asset)))
                .count();
            v.highest_open.push(OpenView {
                addr: *addr,
                theory,
                prop,
                name: name.clone(),
                tag: tag.clone(),
                status: p.map_or("conjecture", |p| p.status()).to_string(),
                amount: open,
                count,
            });
        }
        for e in &b.events {
            if let BountyEvent::Collected { asset, amount, tx, height, collector, by_disproof } = e {
                v.highest_collected.push(CollectedView {
                    addr: *addr,
                    theory,
                    prop,
                    name: name.clone(),
                    tag: tag.clone(),
                    asset: *asset,
                    amount: *amount,
                    height: *height,
                    tx: *tx,
                    collector: *collector,
                    by_disproof: *by_disproof,
                });
            }
        }
    }
    v.highest_open.sort_by(|a, b| b.amount.cmp(&a.amount).then(a.prop.cmp(&b.prop)).then(a.addr.cmp(&b.addr)));
    v.highest_collected
        .sort_by(|a, b| b.amount.cmp(&a.amount).then(a.height.cmp(&b.height)).then(a.asset.cmp(&b.asset)));
    v
}
