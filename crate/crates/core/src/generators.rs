//! Seeded instance generators. Identical (parameters, seed) always produce
//! the identical instance.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::instance::{PacketId, StateFeedbackMatrix};
use crate::Result;

/// Upper bound on redraws before a generator gives up.
const MAX_TRIES: usize = 10_000;

/// Each receiver wants each packet independently with probability `p`;
/// all-zero rows are redrawn so every receiver wants something.
pub fn bernoulli(n_receivers: usize, n_packets: usize, p: f64, seed: u64) -> Result<StateFeedbackMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Generator(format!("p = {p} is not a probability")));
    }
    if p == 0.0 {
        return Err(Error::Generator(
            "p = 0 can never produce a nonempty want-set".into(),
        ));
    }
    if n_receivers == 0 || n_packets == 0 {
        return Err(Error::Generator("need at least one receiver and one packet".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wants = Vec::with_capacity(n_receivers);
    for n in 0..n_receivers {
        let mut set = BTreeSet::new();
        for _ in 0..MAX_TRIES {
            set = (0..n_packets).filter(|_| rng.gen_bool(p)).collect();
            if !set.is_empty() {
                break;
            }
        }
        if set.is_empty() {
            return Err(Error::Generator(format!(
                "receiver {} still empty after {MAX_TRIES} redraws (p = {p})",
                n + 1
            )));
        }
        wants.push(set);
    }
    StateFeedbackMatrix::new(n_packets, wants)
}

/// Every receiver wants a uniformly random unordered pair of packets.
pub fn uniform_pairs(n_receivers: usize, n_packets: usize, seed: u64) -> Result<StateFeedbackMatrix> {
    if n_packets < 2 {
        return Err(Error::Generator("pairs need at least two packets".into()));
    }
    if n_receivers == 0 {
        return Err(Error::Generator("need at least one receiver".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wants = Vec::with_capacity(n_receivers);
    for _ in 0..n_receivers {
        let i = rng.gen_range(0..n_packets);
        let mut j = rng.gen_range(0..n_packets - 1);
        if j >= i {
            j += 1;
        }
        wants.push([i, j].into_iter().collect());
    }
    StateFeedbackMatrix::new(n_packets, wants)
}

/// One receiver per unordered pair of packets: the pairing conflict graph is
/// the complete graph on `n_packets` vertices. Deterministic; no seed.
pub fn complete_graph(n_packets: usize) -> Result<StateFeedbackMatrix> {
    if n_packets < 2 {
        return Err(Error::Generator("complete-graph instance needs at least two packets".into()));
    }
    let mut wants = Vec::new();
    for i in 0..n_packets {
        for j in i + 1..n_packets {
            wants.push([i, j].into_iter().collect());
        }
    }
    StateFeedbackMatrix::new(n_packets, wants)
}

/// `r` receivers over a block of r(r+1)/2 packets, each wanting exactly `r`
/// packets, any two want-sets sharing at most one packet. Built by rejection
/// sampling; fails if no instance is found within the retry budget.
pub fn efl(r: usize, seed: u64) -> Result<StateFeedbackMatrix> {
    if r < 2 {
        return Err(Error::Generator("need at least two receivers".into()));
    }
    let n_packets = r * (r + 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const RESTARTS: usize = 200;
    const ROW_TRIES: usize = 500;
    for _ in 0..RESTARTS {
        let mut rows: Vec<BTreeSet<PacketId>> = Vec::with_capacity(r);
        'rows: for _ in 0..r {
            for _ in 0..ROW_TRIES {
                let cand: BTreeSet<PacketId> =
                    sample(&mut rng, n_packets, r).into_iter().collect();
                if rows.iter().all(|prev| prev.intersection(&cand).count() <= 1) {
                    rows.push(cand);
                    continue 'rows;
                }
            }
            break 'rows; // this restart failed
        }
        if rows.len() == r {
            return StateFeedbackMatrix::new(n_packets, rows);
        }
    }
    Err(Error::Generator(format!(
        "no admissible instance for r = {r} within {RESTARTS} restarts"
    )))
}
