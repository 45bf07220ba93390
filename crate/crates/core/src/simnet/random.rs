use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ledger::{GenesisConfig, BAR};

use super::scenario::{Flags, Intent, Scenario, Step};

fn transfer(rng: &mut ChaCha8Rng) -> Intent {
    let from = rng.gen_range(1..=3);
    let to = rng.gen_range(1..=4);
    Intent::Transfer { from, to, amount: rng.gen_range(1..=8) * BAR, fee: rng.gen_range(0..2) * BAR / 10 }
}

/// A seeded mix of production on every node, transfers, gossip steps,
/// partitions and the occasional faulty block.
pub fn random_scenario(seed: u64, nodes: usize) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut steps = Vec::new();
    let n = rng.gen_range(10..24);
    for _ in 0..n {
        let node = rng.gen_range(0..nodes);
        let roll = rng.gen_range(0..100);
        let step = if roll < 45 {
            let txs = (0..rng.gen_range(0..3)).map(|_| transfer(&mut rng)).collect();
            Step::Produce { label: None, parent: "tip".into(), node, txs, mempool: rng.gen_bool(0.5), flags: Flags::default() }
        } else if roll < 55 {
            let mut flags = Flags::default();
            match rng.gen_range(0..4) {
                0 => flags.bad_sig = true,
                1 => flags.double_spend = true,
                2 => flags.orphan_parent = true,
                _ => flags.corrupt_proof = true,
            }
            let txs = vec![transfer(&mut rng)];
            Step::Produce { label: None, parent: "tip".into(), node, txs, mempool: false, flags }
        } else if roll < 65 {
            let members = (0..nodes).filter(|_| rng.gen_bool(0.5)).collect();
            Step::Partition { nodes: members, duration: rng.gen_range(5..40) }
        } else if roll < 80 {
            Step::Deliver { to: None, count: Some(rng.gen_range(1..12)) }
        } else if roll < 90 {
            Step::SubmitTx { node, tx: transfer(&mut rng) }
        } else {
            Step::Run { until: None }
        };
        steps.push(step);
    }
    Scenario {
        name: format!("random-{seed}"),
        seed,
        nodes,
        genesis: GenesisConfig::with_seeds(vec![1, 2, 3]),
        base_delay: 1,
        jitter: 4,
        lenient: true,
        settle: true,
        steps,
    }
}
