//! Exhaustive ground-truth computations, feasible only for small instances.
//!
//! Random-coefficient searches run twice under independent streams; a
//! disagreement (a rank fluke in one stream) aborts instead of returning a
//! value that depends on the draw.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gf::{CodedVector, FieldMatrix};
use crate::instance::{PacketId, StateFeedbackMatrix};
use crate::sched::ConflictGraph;
use crate::sim::{alternate_seed, Apdd, CoefficientPolicy, Schedule, SIM_FIELD};
use crate::Result;

/// Coefficient seed used by the delay search; its witness schedules carry
/// this seed so replaying them reproduces the reported value.
pub const DMIN_ORACLE_SEED: u64 = 0x0D15_EA5E;

/// Largest conflict graph the exact independent-set solver accepts.
pub const MWIS_MAX_VERTICES: usize = 30;

/// Instance size limits for the exhaustive delay search.
#[derive(Clone, Copy, Debug)]
pub struct SearchGuard {
    pub max_receivers: usize,
    pub max_packets: usize,
}

impl Default for SearchGuard {
    fn default() -> Self {
        SearchGuard { max_receivers: 5, max_packets: 5 }
    }
}

/// Result of `mwis_exact`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwisResult {
    pub vertices: BTreeSet<PacketId>,
    pub weight: usize,
}

/// Maximum-weight independent set by branch and bound (heaviest-first,
/// weight-sum bound, greedy warm start). Deterministic: on weight ties the
/// first set found in search order wins.
pub fn mwis_exact(g: &ConflictGraph) -> Result<MwisResult> {
    let n = g.n();
    if n > MWIS_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "{n} conflict vertices exceed the exact solver limit of {MWIS_MAX_VERTICES}"
        )));
    }
    if n == 0 {
        return Ok(MwisResult { vertices: BTreeSet::new(), weight: 0 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (Reverse(g.weight(i)), g.vertex(i)));
    let weights: Vec<usize> = order.iter().map(|&i| g.weight(i)).collect();
    let mut nbr = vec![0u64; n];
    for p in 0..n {
        for q in 0..n {
            if g.adjacent(order[p], order[q]) {
                nbr[p] |= 1 << q;
            }
        }
    }
    // Greedy warm start tightens the bound from the first prune.
    let warm = crate::sched::greedy_mwis(g);
    let mut best_mask: u64 = 0;
    for (p, &i) in order.iter().enumerate() {
        if warm.contains(&g.vertex(i)) {
            best_mask |= 1 << p;
        }
    }
    let best_w: usize = warm
        .iter()
        .map(|&k| {
            let i = g.vertices().iter().position(|&v| v == k).unwrap();
            g.weight(i)
        })
        .sum();

    struct Bb<'a> {
        weights: &'a [usize],
        nbr: &'a [u64],
        best_w: usize,
        best_mask: u64,
    }
    impl Bb<'_> {
        fn remaining(&self, cands: u64) -> usize {
            let mut sum = 0;
            let mut m = cands;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                sum += self.weights[p];
                m &= m - 1;
            }
            sum
        }
        fn rec(&mut self, cands: u64, cur_mask: u64, cur_w: usize) {
            // Equality prunes too: the incumbent wins ties.
            if cur_w + self.remaining(cands) <= self.best_w {
                return;
            }
            if cands == 0 {
                if cur_w > self.best_w {
                    self.best_w = cur_w;
                    self.best_mask = cur_mask;
                }
                return;
            }
            let p = cands.trailing_zeros() as usize;
            self.rec(cands & !self.nbr[p] & !(1 << p), cur_mask | (1 << p), cur_w + self.weights[p]);
            self.rec(cands & !(1 << p), cur_mask, cur_w);
        }
    }
    let mut bb = Bb { weights: &weights, nbr: &nbr, best_w, best_mask };
    bb.rec((1u64 << n) - 1, 0, 0);

    let vertices: BTreeSet<PacketId> = (0..n)
        .filter(|&p| bb.best_mask & (1 << p) != 0)
        .map(|p| g.vertex(order[p]))
        .collect();
    Ok(MwisResult { vertices, weight: bb.best_w })
}

/// Result of the exhaustive delay search.
#[derive(Clone, Debug)]
pub struct DminResult {
    /// Minimum mean decoding delay over all searched schedules; `None` when
    /// no schedule within the length bound completes.
    pub value: Option<Apdd>,
    /// A schedule attaining `value`, replayable via `simulate`.
    pub witness: Option<Schedule>,
    /// Whether the whole space up to `search_bound` was covered.
    pub exhausted: bool,
    /// Length bound the search ran under.
    pub search_bound: usize,
}

/// Minimum mean decoding delay by depth-first search over all sequences of
/// nonempty coding sets up to length `l_max`, with random coefficients.
/// Subtrees that cannot beat the incumbent are pruned via an optimistic
/// completion bound, which keeps the search exhaustive in outcome.
pub fn dmin_bruteforce(a: &StateFeedbackMatrix, l_max: usize) -> Result<DminResult> {
    dmin_bruteforce_guarded(a, l_max, SearchGuard::default())
}

pub fn dmin_bruteforce_guarded(
    a: &StateFeedbackMatrix,
    l_max: usize,
    guard: SearchGuard,
) -> Result<DminResult> {
    if a.n_receivers() > guard.max_receivers || a.n_packets() > guard.max_packets {
        return Err(Error::GuardExceeded(format!(
            "instance is {}x{}, guard allows {}x{}",
            a.n_receivers(),
            a.n_packets(),
            guard.max_receivers,
            guard.max_packets
        )));
    }
    if l_max == 0 {
        return Err(Error::precondition("schedule length bound must be positive"));
    }
    let primary = DelaySearch::run(a, l_max, DMIN_ORACLE_SEED);
    let confirm = DelaySearch::run(a, l_max, alternate_seed(DMIN_ORACLE_SEED));
    if primary.as_ref().map(|(v, _)| *v) != confirm.as_ref().map(|(v, _)| *v) {
        return Err(Error::RankAnomaly(format!(
            "delay search differs across independent coefficient streams: {:?} vs {:?}",
            primary.map(|(v, _)| v),
            confirm.map(|(v, _)| v),
        )));
    }
    let (value, witness) = match primary {
        Some((v, sets)) => (
            Some(v),
            Some(
                Schedule::new(sets, CoefficientPolicy::Random, DMIN_ORACLE_SEED)
                    .expect("witness sets are nonempty"),
            ),
        ),
        None => (None, None),
    };
    Ok(DminResult { value, witness, exhausted: true, search_bound: l_max })
}

/// Incremental decoder state along one DFS path. Coefficients are drawn
/// from the same stream `simulate` would use, so the winning prefix replays
/// to the identical report.
#[derive(Clone)]
struct PathState {
    rng: ChaCha8Rng,
    bases: Vec<FieldMatrix>,
    decoded: Vec<Vec<bool>>,
    decoded_sum: u64,
    n_decoded: usize,
}

struct DelaySearch<'a> {
    a: &'a StateFeedbackMatrix,
    wants_vec: Vec<Vec<PacketId>>,
    subsets: Vec<BTreeSet<PacketId>>,
    total: usize,
    l_max: usize,
    best: Option<(Apdd, Vec<BTreeSet<PacketId>>)>,
    prefix: Vec<BTreeSet<PacketId>>,
}

impl<'a> DelaySearch<'a> {
    fn run(
        a: &'a StateFeedbackMatrix,
        l_max: usize,
        seed: u64,
    ) -> Option<(Apdd, Vec<BTreeSet<PacketId>>)> {
        let k = a.n_packets();
        let wants_vec: Vec<Vec<PacketId>> = (0..a.n_receivers())
            .map(|n| a.wants(n).iter().copied().collect())
            .collect();
        let subsets: Vec<BTreeSet<PacketId>> = (1u32..1 << k)
            .map(|mask| (0..k).filter(|&p| mask & (1 << p) != 0).collect())
            .collect();
        // Seed the incumbent with the uncoded schedule when it fits the
        // length bound: its decode times are structural (packet k arrives
        // at k+1), and a ready incumbent lets the bound prune wasteful
        // prefixes immediately.
        let best = (l_max >= k).then(|| {
            let sum: u64 = wants_vec
                .iter()
                .flatten()
                .map(|&p| p as u64 + 1)
                .sum();
            let sets: Vec<BTreeSet<PacketId>> =
                (0..k).map(|p| [p].into_iter().collect()).collect();
            (Ratio::new(sum, a.total_demands() as u64), sets)
        });
        let mut search = DelaySearch {
            a,
            wants_vec,
            subsets,
            total: a.total_demands(),
            l_max,
            best,
            prefix: Vec::new(),
        };
        let state = PathState {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bases: search
                .wants_vec
                .iter()
                .map(|w| FieldMatrix::new(SIM_FIELD, w.len()))
                .collect(),
            decoded: search.wants_vec.iter().map(|w| vec![false; w.len()]).collect(),
            decoded_sum: 0,
            n_decoded: 0,
        };
        search.dfs(&state);
        search.best
    }

    fn dfs(&mut self, state: &PathState) {
        if state.n_decoded == self.total {
            let value = Ratio::new(state.decoded_sum, self.total as u64);
            if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
                self.best = Some((value, self.prefix.clone()));
            }
            // Appending transmissions cannot change existing decode times.
            return;
        }
        if self.prefix.len() == self.l_max {
            return;
        }
        // Rank grows by at most one per transmission, so a receiver whose
        // deficit exceeds the remaining budget can never finish here.
        let remaining = self.l_max - self.prefix.len();
        for (n, wants) in self.wants_vec.iter().enumerate() {
            if wants.len() - state.bases[n].rank() > remaining {
                return;
            }
        }
        if let Some((incumbent, _)) = &self.best {
            if self.optimistic_bound(state) >= *incumbent {
                return;
            }
        }
        for si in 0..self.subsets.len() {
            let set = self.subsets[si].clone();
            let mut child = state.clone();
            self.apply(&mut child, &set, (self.prefix.len() + 1) as u32);
            self.prefix.push(set);
            self.dfs(&child);
            self.prefix.pop();
        }
    }

    fn apply(&self, state: &mut PathState, set: &BTreeSet<PacketId>, t: u32) {
        let cv = CodedVector::random(set, self.a.n_packets(), SIM_FIELD, &mut state.rng)
            .expect("subsets are nonempty and in range");
        for (n, wants) in self.wants_vec.iter().enumerate() {
            let proj = cv.project(wants);
            if proj.iter().any(|&c| c != 0) && state.bases[n].insert(&proj) {
                for i in 0..wants.len() {
                    if !state.decoded[n][i] && state.bases[n].contains_unit(i) {
                        state.decoded[n][i] = true;
                        state.decoded_sum += u64::from(t);
                        state.n_decoded += 1;
                    }
                }
            }
        }
    }

    /// Lower bound on the final delay sum of any completion of this prefix:
    /// cumulative decodes at receiver n by time t+j never exceed
    /// min(w_n, dof_n + j), so schedule the outstanding decodes at the
    /// earliest times that cap allows.
    fn optimistic_bound(&self, state: &PathState) -> Apdd {
        let t = self.prefix.len() as u64;
        let mut sum = state.decoded_sum;
        for (n, wants) in self.wants_vec.iter().enumerate() {
            let w = wants.len() as u64;
            let done = state.decoded[n].iter().filter(|&&d| d).count() as u64;
            let outstanding = w - done;
            if outstanding == 0 {
                continue;
            }
            let dof = state.bases[n].rank() as u64;
            let first_wave = outstanding.min(dof + 1 - done);
            sum += first_wave * (t + 1);
            let rest = outstanding - first_wave;
            sum += rest * (t + 1) + rest * (rest + 1) / 2;
        }
        Ratio::new(sum, self.total as u64)
    }
}

/// Result of the perfect-solution search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectResult {
    pub exists: bool,
    /// Partition of the wanted packets into rounds: transmitting round i as
    /// one XOR at time i+1 makes every receiver decode exactly one new
    /// packet at each of its first w_n transmissions.
    pub rounds: Option<Vec<BTreeSet<PacketId>>>,
}

/// Decides whether the wanted packets can be partitioned into rounds such
/// that every receiver decodes one new packet per round until done — i.e.
/// an assignment of round numbers, distinct within every want-set, where
/// packet k's round is at most min(w_n) over the receivers wanting it.
pub fn perfect_solution_exists(a: &StateFeedbackMatrix) -> Result<PerfectResult> {
    perfect_solution_guarded(a, 20, 6)
}

pub fn perfect_solution_guarded(
    a: &StateFeedbackMatrix,
    max_packets: usize,
    max_want: usize,
) -> Result<PerfectResult> {
    if a.n_packets() > max_packets || a.max_want_count() > max_want || max_want > 32 {
        return Err(Error::GuardExceeded(format!(
            "instance has {} packets (limit {}) and want-sets up to {} (limit {})",
            a.n_packets(),
            max_packets,
            a.max_want_count(),
            max_want.min(32)
        )));
    }
    let k = a.n_packets();
    let n = a.n_receivers();
    let wanted: Vec<PacketId> = (0..k).filter(|&p| a.demand_count(p) > 0).collect();
    let mut receivers_of: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (r, w) in a.want_sets().iter().enumerate() {
        for &p in w {
            receivers_of[p].push(r);
        }
    }
    let window: Vec<usize> = (0..k)
        .map(|p| {
            receivers_of[p]
                .iter()
                .map(|&r| a.want_count(r))
                .min()
                .unwrap_or(0)
        })
        .collect();
    // Most-constrained first: smallest round window, then most receivers.
    let mut order = wanted.clone();
    order.sort_by_key(|&p| (window[p], Reverse(a.demand_count(p)), p));
    // Rounds of a uniform instance are interchangeable, so only allow a new
    // round number in canonical (first-use) order.
    let uniform = (1..n).all(|r| a.want_count(r) == a.want_count(0));

    let mut round = vec![0usize; k];
    let mut used = vec![0u32; n];
    struct Search<'a> {
        order: &'a [PacketId],
        window: &'a [usize],
        receivers_of: &'a [Vec<usize>],
        uniform: bool,
    }
    impl Search<'_> {
        fn backtrack(&self, i: usize, max_used: usize, round: &mut [usize], used: &mut [u32]) -> bool {
            let Some(&p) = self.order.get(i) else { return true };
            let mut limit = self.window[p];
            if self.uniform {
                limit = limit.min(max_used + 1);
            }
            for c in 1..=limit {
                let bit = 1u32 << (c - 1);
                if self.receivers_of[p].iter().all(|&r| used[r] & bit == 0) {
                    round[p] = c;
                    for &r in &self.receivers_of[p] {
                        used[r] |= bit;
                    }
                    if self.backtrack(i + 1, max_used.max(c), round, used) {
                        return true;
                    }
                    round[p] = 0;
                    for &r in &self.receivers_of[p] {
                        used[r] &= !bit;
                    }
                }
            }
            false
        }
    }
    let search = Search { order: &order, window: &window, receivers_of: &receivers_of, uniform };
    let exists = search.backtrack(0, 0, &mut round, &mut used);
    let rounds = exists.then(|| {
        let n_rounds = wanted.iter().map(|&p| round[p]).max().unwrap_or(0);
        (1..=n_rounds)
            .map(|c| wanted.iter().copied().filter(|&p| round[p] == c).collect())
            .collect()
    });
    Ok(PerfectResult { exists, rounds })
}

/// Turns a perfect-solution partition into its XOR schedule (round i sent
/// at transmission i+1).
pub fn rounds_to_schedule(rounds: &[BTreeSet<PacketId>]) -> Result<Schedule> {
    Schedule::new(rounds.to_vec(), CoefficientPolicy::AllOnes, 0)
}

/// For instances shaped like the near-disjoint generator output (every
/// receiver wants exactly N packets, any two want-sets sharing at most
/// one), decides whether a perfect solution exists. The conjectured answer
/// is always yes.
pub fn check_efl(a: &StateFeedbackMatrix) -> Result<bool> {
    let r = a.n_receivers();
    for n in 0..r {
        if a.want_count(n) != r {
            return Err(Error::precondition(format!(
                "receiver {} wants {} packets, expected N = {r}",
                n + 1,
                a.want_count(n)
            )));
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            let shared = a.wants(i).intersection(a.wants(j)).count();
            if shared > 1 {
                return Err(Error::precondition(format!(
                    "receivers {} and {} share {shared} packets, at most one allowed",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(perfect_solution_guarded(a, a.n_packets().max(20), r.clamp(6, 32))?.exists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::sim::{self, is_perfect, lower_bound, simulate};
    use crate::testutil::sfm;
    use proptest::prelude::*;

    /// Test oracle: maximum-weight independent set by subset enumeration.
    fn mwis_brute(g: &ConflictGraph) -> usize {
        let n = g.n();
        let mut best = 0;
        for mask in 0u32..1 << n {
            let verts: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let independent = verts
                .iter()
                .enumerate()
                .all(|(x, &i)| verts[x + 1..].iter().all(|&j| !g.adjacent(i, j)));
            if independent {
                best = best.max(verts.iter().map(|&i| g.weight(i)).sum());
            }
        }
        best
    }

    #[test]
    fn mwis_finds_the_unique_heaviest_set() {
        let a = sfm(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3], &[0, 1]]);
        let g = ConflictGraph::from_sfm(&a);
        let r = mwis_exact(&g).unwrap();
        assert_eq!(r.vertices, [2, 3].into_iter().collect());
        assert_eq!(r.weight, 4);
    }

    #[test]
    fn mwis_matches_subset_enumeration() {
        for seed in 0..30u64 {
            let a = generators::bernoulli(6, 8, 0.35, seed).unwrap();
            let g = ConflictGraph::from_sfm(&a);
            let exact = mwis_exact(&g).unwrap();
            assert_eq!(exact.weight, mwis_brute(&g), "seed {seed}");
            // The witness really is an independent set of that weight.
            let ids: Vec<usize> = exact
                .vertices
                .iter()
                .map(|&k| g.vertices().iter().position(|&v| v == k).unwrap())
                .collect();
            for (x, &i) in ids.iter().enumerate() {
                for &j in &ids[x + 1..] {
                    assert!(!g.adjacent(i, j));
                }
            }
            assert_eq!(ids.iter().map(|&i| g.weight(i)).sum::<usize>(), exact.weight);
        }
    }

    #[test]
    fn mwis_guard_rejects_large_graphs() {
        let a = generators::complete_graph(31).unwrap();
        let g = ConflictGraph::from_sfm(&a);
        assert!(matches!(mwis_exact(&g), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn dmin_on_a_single_demand_is_one() {
        let a = sfm(1, &[&[0]]);
        let r = dmin_bruteforce(&a, 1).unwrap();
        assert_eq!(r.value, Some(Ratio::new(1, 1)));
        assert!(r.exhausted);
        let w = r.witness.unwrap();
        assert_eq!(simulate(&a, &w).unwrap().apdd, Some(Ratio::new(1, 1)));
    }

    #[test]
    fn dmin_meets_the_lower_bound_when_rounds_exist() {
        // Both receivers want both packets: packet-per-round decoding gives
        // (1+2+1+2)/4 = 3/2, which equals the lower bound.
        let a = sfm(2, &[&[0, 1], &[0, 1]]);
        let r = dmin_bruteforce(&a, 2).unwrap();
        assert_eq!(r.value, Some(Ratio::new(3, 2)));
        assert_eq!(r.value, Some(lower_bound(&a)));
        assert!(perfect_solution_exists(&a).unwrap().exists);
        let w = r.witness.unwrap();
        let rep = simulate(&a, &w).unwrap();
        assert_eq!(rep.apdd, r.value);
    }

    #[test]
    fn dmin_exceeds_the_lower_bound_on_the_triangle() {
        // All three pair demands over three packets: no round partition
        // exists, so 3/2 is unreachable. General coding still beats
        // one-packet-per-round (delay 2): send p1+p2 then p1+p3 — two
        // receivers decode instantly at 1 and everyone finishes at 2, for
        // (2+2 + 1+2 + 1+2)/6 = 5/3.
        let a = generators::complete_graph(3).unwrap();
        let r = dmin_bruteforce(&a, 3).unwrap();
        assert_eq!(r.value, Some(Ratio::new(5, 3)));
        assert!(r.value > Some(lower_bound(&a)));
        assert!(!perfect_solution_exists(&a).unwrap().exists);
        let w = r.witness.unwrap();
        assert_eq!(w.coding_sets.len(), 2);
        assert_eq!(simulate(&a, &w).unwrap().apdd, r.value);
    }

    #[test]
    fn dmin_reports_unreachable_completion() {
        let a = sfm(2, &[&[0, 1]]);
        let r = dmin_bruteforce(&a, 1).unwrap();
        assert_eq!(r.value, None);
        assert!(r.witness.is_none());
        assert!(r.exhausted);
        assert_eq!(r.search_bound, 1);
    }

    #[test]
    fn dmin_guards_and_preconditions() {
        let a = sfm(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert!(matches!(dmin_bruteforce(&a, 2), Err(Error::GuardExceeded(_))));
        let b = sfm(2, &[&[0, 1]]);
        assert!(dmin_bruteforce(&b, 0).is_err());
        assert!(dmin_bruteforce_guarded(
            &a,
            6,
            SearchGuard { max_receivers: 6, max_packets: 6 }
        )
        .is_ok());
    }

    #[test]
    fn perfect_solution_witnesses_replay() {
        for (a, expect) in [
            (sfm(2, &[&[0, 1], &[0, 1]]), true),
            (generators::complete_graph(3).unwrap(), false),
            (generators::complete_graph(4).unwrap(), false),
            (sfm(4, &[&[0, 1], &[2, 3]]), true),
            (sfm(3, &[&[0, 1, 2]]), true),
            (sfm(3, &[&[0, 1], &[1, 2], &[0]]), true),
        ] {
            let r = perfect_solution_exists(&a).unwrap();
            assert_eq!(r.exists, expect);
            if let Some(rounds) = r.rounds {
                let s = rounds_to_schedule(&rounds).unwrap();
                let rep = simulate(&a, &s).unwrap();
                assert!(is_perfect(&rep, &a));
                assert_eq!(rep.apdd, Some(lower_bound(&a)));
            }
        }
    }

    #[test]
    fn perfect_solution_guard_rejects_oversized_instances() {
        let a = generators::bernoulli(3, 21, 0.5, 1).unwrap();
        assert!(matches!(
            perfect_solution_exists(&a),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn near_disjoint_instances_check_out() {
        for r in 2..=5 {
            for seed in [0u64, 9] {
                let a = generators::efl(r, seed).unwrap();
                assert!(check_efl(&a).unwrap(), "r = {r}, seed {seed}");
            }
        }
    }

    #[test]
    fn efl_checker_rejects_wrong_shapes() {
        // Want-set size != N.
        assert!(check_efl(&sfm(3, &[&[0, 1, 2], &[0, 1]])).is_err());
        // Two receivers sharing two packets.
        assert!(check_efl(&sfm(3, &[&[0, 1], &[0, 1]])).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dmin_is_sandwiched_and_consistent(seed in any::<u64>(), n in 1usize..4, k in 1usize..4) {
            let a = generators::bernoulli(n, k, 0.5, seed).unwrap();
            let r = dmin_bruteforce(&a, k).unwrap();
            let d = r.value.expect("length-K schedules always complete");
            prop_assert!(d >= lower_bound(&a));
            // The witness replays to the reported value.
            let rep = simulate(&a, &r.witness.unwrap()).unwrap();
            prop_assert_eq!(rep.apdd, Some(d));
            // No scheduler can beat the exhaustive optimum.
            let s = crate::sched::schedule_sidnc(&a);
            let fixed = sim::apdd(&simulate(&a, &s).unwrap(), &a).unwrap();
            prop_assert!(fixed >= d);
            // A perfect partition exists iff the optimum meets the bound.
            let p = perfect_solution_exists(&a).unwrap();
            prop_assert_eq!(p.exists, d == lower_bound(&a));
        }
    }
}
