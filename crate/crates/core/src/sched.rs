//! Schedule builders: full-block random coding, uncoded rounds, conflict
//! coloring, clique-greedy opportunistic coding, vertex-cover rounds, and
//! the two-transmission independent-set scheme for pair demands.
//!
//! Every builder is deterministic given (instance, seed); ties break by
//! highest degree/weight first, then lowest packet index, then lowest
//! receiver index.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::error::Error;
use crate::gf::{CodedVector, FieldMatrix};
use crate::instance::{DemandHypergraph, PacketId, StateFeedbackMatrix};
use crate::oracle;
use crate::sim::{simulate, CoefficientPolicy, Schedule, SIM_FIELD};
use crate::Result;

/// Largest conflict graph solved exactly by the independent-set scheduler
/// before it falls back to the greedy heuristic.
pub const DEFAULT_MIS_EXACT_THRESHOLD: usize = 25;

/// Packet conflict graph: vertices are wanted packets (weight t_k), with an
/// edge wherever two packets share a receiver — those two can never be
/// usefully coded together for that receiver.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    vertices: Vec<PacketId>,
    weights: Vec<usize>,
    adj: Vec<Vec<bool>>,
}

impl ConflictGraph {
    pub fn from_sfm(a: &StateFeedbackMatrix) -> Self {
        let vertices: Vec<PacketId> =
            (0..a.n_packets()).filter(|&k| a.demand_count(k) > 0).collect();
        let index: Vec<Option<usize>> = {
            let mut m = vec![None; a.n_packets()];
            for (i, &k) in vertices.iter().enumerate() {
                m[k] = Some(i);
            }
            m
        };
        let weights = vertices.iter().map(|&k| a.demand_count(k)).collect();
        let mut adj = vec![vec![false; vertices.len()]; vertices.len()];
        for w in a.want_sets() {
            let ids: Vec<usize> = w.iter().map(|&k| index[k].unwrap()).collect();
            for (x, &i) in ids.iter().enumerate() {
                for &j in &ids[x + 1..] {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        ConflictGraph { vertices, weights, adj }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> PacketId {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[PacketId] {
        &self.vertices
    }

    /// t_k of the packet behind vertex i.
    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn total_weight(&self) -> usize {
        self.weights.iter().sum()
    }
}

/// Full-block random coding: max(w_n) transmissions over the whole block.
pub fn schedule_rlnc(a: &StateFeedbackMatrix) -> Schedule {
    let full: BTreeSet<PacketId> = (0..a.n_packets()).collect();
    let sets = vec![full; a.max_want_count()];
    Schedule::new(sets, CoefficientPolicy::Random, 0).expect("nonempty block")
}

/// One uncoded packet per transmission, in the given order (a permutation
/// of the block).
pub fn schedule_uncoded(a: &StateFeedbackMatrix, order: &[PacketId]) -> Result<Schedule> {
    let k = a.n_packets();
    let mut seen = vec![false; k];
    if order.len() != k || order.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::precondition(format!(
            "order must be a permutation of the {k} packets"
        )));
    }
    let sets = order.iter().map(|&p| [p].into_iter().collect()).collect();
    Schedule::new(sets, CoefficientPolicy::AllOnes, 0)
}

/// Colors the conflict graph greedily (descending t_k, first fit) and emits
/// one XOR transmission per color class, heaviest class first. Every class
/// is conflict-free, so each transmission is instantly decodable for every
/// receiver it serves.
pub fn schedule_sidnc(a: &StateFeedbackMatrix) -> Schedule {
    let g = ConflictGraph::from_sfm(a);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&i| (Reverse(g.weight(i)), g.vertex(i)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match classes
            .iter_mut()
            .find(|c| c.iter().all(|&j| !g.adjacent(i, j)))
        {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes.sort_by_key(|c| Reverse(c.iter().map(|&i| g.weight(i)).sum::<usize>()));
    let sets = classes
        .into_iter()
        .map(|c| c.into_iter().map(|i| g.vertex(i)).collect())
        .collect();
    Schedule::new(sets, CoefficientPolicy::AllOnes, 0).expect("classes are nonempty")
}

/// Opportunistic XOR coding: each round greedily grows a clique in the
/// pairing graph over still-undecoded (receiver, packet) pairs — two pairs
/// combine when they name the same packet or each packet is side
/// information (held or already decoded) at the other receiver — and XORs
/// the clique's packets. Decoding state is tracked with the same projected
/// bases the simulator uses, so served pairs decode at exactly the round
/// that serves them.
pub fn schedule_gidnc(a: &StateFeedbackMatrix, seed: u64) -> Schedule {
    let k = a.n_packets();
    let n = a.n_receivers();
    let wants_vec: Vec<Vec<PacketId>> = (0..n)
        .map(|r| a.wants(r).iter().copied().collect())
        .collect();
    let mut bases: Vec<FieldMatrix> = wants_vec
        .iter()
        .map(|w| FieldMatrix::new(SIM_FIELD, w.len()))
        .collect();
    let mut residual: Vec<BTreeSet<PacketId>> =
        (0..n).map(|r| a.wants(r).clone()).collect();
    let mut sets: Vec<BTreeSet<PacketId>> = Vec::new();

    while residual.iter().any(|r| !r.is_empty()) {
        let mut t_res = vec![0usize; k];
        for r in &residual {
            for &pk in r {
                t_res[pk] += 1;
            }
        }
        let mut cands: Vec<(usize, PacketId)> = (0..n)
            .flat_map(|r| residual[r].iter().map(move |&pk| (r, pk)))
            .collect();
        let mut coding_set: BTreeSet<PacketId> = BTreeSet::new();
        while !cands.is_empty() {
            let &(bn, bk) = cands
                .iter()
                .min_by_key(|&&(r, pk)| (Reverse(t_res[pk]), pk, r))
                .unwrap();
            coding_set.insert(bk);
            cands.retain(|&(r, pk)| {
                (r, pk) != (bn, bk)
                    && (pk == bk
                        || (!residual[r].contains(&bk) && !residual[bn].contains(&pk)))
            });
        }
        sets.push(coding_set.clone());
        let cv = CodedVector::all_ones(&coding_set, k).expect("nonempty clique");
        for r in 0..n {
            let proj = cv.project(&wants_vec[r]);
            if proj.iter().any(|&c| c != 0) && bases[r].insert(&proj) {
                residual[r].retain(|&pk| {
                    let i = wants_vec[r].binary_search(&pk).unwrap();
                    !bases[r].contains_unit(i)
                });
            }
        }
    }
    Schedule::new(sets, CoefficientPolicy::AllOnes, seed).expect("cliques are nonempty")
}

/// Greedy minimal vertex cover of a demand hypergraph. Degree is the
/// multiplicity-weighted number of hyperedges on a vertex. Phase 1 grows an
/// independent cover candidate by descending degree; phase 2 repairs any
/// uncovered hyperedge; phase 3 strips redundant vertices (ascending
/// degree), so the result is a cover with no removable vertex.
pub fn minimal_vertex_cover_heuristic(h: &DemandHypergraph) -> BTreeSet<PacketId> {
    let deg: Vec<usize> = (0..h.n_vertices()).map(|v| h.vertex_weight(v)).collect();
    let edges = h.edges();
    let mut cover: BTreeSet<PacketId> = BTreeSet::new();
    loop {
        let cand = (0..h.n_vertices())
            .filter(|&v| deg[v] > 0 && !cover.contains(&v))
            .filter(|&v| {
                !edges.iter().any(|e| {
                    e.packets.contains(&v) && e.packets.iter().any(|u| cover.contains(u))
                })
            })
            .max_by_key(|&v| (deg[v], Reverse(v)));
        match cand {
            Some(v) => cover.insert(v),
            None => break,
        };
    }
    for e in edges {
        if !e.packets.iter().any(|u| cover.contains(u)) {
            let &v = e
                .packets
                .iter()
                .max_by_key(|&&v| (deg[v], Reverse(v)))
                .expect("hyperedges are nonempty");
            cover.insert(v);
        }
    }
    let mut order: Vec<PacketId> = cover.iter().copied().collect();
    order.sort_by_key(|&v| (deg[v], v));
    for v in order {
        let redundant = edges.iter().all(|e| {
            !e.packets.contains(&v) || e.packets.iter().any(|&u| u != v && cover.contains(&u))
        });
        if redundant {
            cover.remove(&v);
        }
    }
    cover
}

/// Vertex-cover rounds: while every receiver still has undecoded packets,
/// send one random-coded transmission over a minimal vertex cover of the
/// residual demand hypergraph and delete the cover. Covers are pairwise
/// disjoint and hit every residual want-set, so each round adds exactly one
/// degree of freedom at every receiver; a tail of full-block random
/// transmissions then finishes everyone in exactly w_n transmissions.
pub fn schedule_vc_alg1(a: &StateFeedbackMatrix, seed: u64) -> Schedule {
    let k = a.n_packets();
    let mut edges: Vec<(BTreeSet<PacketId>, usize)> = DemandHypergraph::from_sfm(a)
        .edges()
        .iter()
        .map(|e| (e.packets.clone(), e.multiplicity))
        .collect();
    let mut sets: Vec<BTreeSet<PacketId>> = Vec::new();
    while edges.iter().all(|(s, _)| !s.is_empty()) {
        let h = DemandHypergraph::new(k, edges.clone()).expect("nonempty residual edges");
        let cover = minimal_vertex_cover_heuristic(&h);
        for (s, _) in &mut edges {
            for v in &cover {
                s.remove(v);
            }
        }
        sets.push(cover);
    }
    let prefix = Schedule::new(sets.clone(), CoefficientPolicy::Random, seed)
        .expect("covers are nonempty");
    let report = simulate(a, &prefix).expect("covers stay within the block");
    let deficit = (0..a.n_receivers())
        .map(|r| a.want_count(r) - report.final_dof(r) as usize)
        .max()
        .unwrap_or(0);
    let full: BTreeSet<PacketId> = (0..k).collect();
    sets.extend(std::iter::repeat_n(full, deficit));
    Schedule::new(sets, CoefficientPolicy::Random, seed).expect("nonempty sets")
}

/// Greedy maximum-weight independent set on the conflict graph, heaviest
/// vertex first — equivalently a greedy clique search on the complement.
pub fn greedy_mwis(g: &ConflictGraph) -> BTreeSet<PacketId> {
    let mut chosen: BTreeSet<PacketId> = BTreeSet::new();
    let mut cands: Vec<usize> = (0..g.n()).collect();
    while !cands.is_empty() {
        let &best = cands
            .iter()
            .max_by_key(|&&i| (g.weight(i), Reverse(g.vertex(i))))
            .unwrap();
        chosen.insert(g.vertex(best));
        cands.retain(|&i| i != best && !g.adjacent(i, best));
    }
    chosen
}

/// How the independent-set scheduler picks its partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MwisMode {
    /// Branch-and-bound up to the exactness threshold, greedy beyond it.
    Exact,
    /// Always the greedy heuristic.
    Greedy,
}

/// Partition of the wanted packets for the two-transmission scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisPartition {
    /// Independent side: no receiver wants two of these.
    pub independent: BTreeSet<PacketId>,
    /// Remaining wanted packets, coded in the first transmission.
    pub cover: BTreeSet<PacketId>,
    /// Receivers with one want on each side; they decode at transmissions
    /// 1 and 2, every other receiver decodes both packets at 2.
    pub split_demands: usize,
}

/// Splits the wanted packets of a pair-demand instance into a
/// maximum-weight independent set and its complement.
pub fn mis_partition(
    a: &StateFeedbackMatrix,
    mode: MwisMode,
    exact_threshold: usize,
) -> Result<MisPartition> {
    if (0..a.n_receivers()).any(|n| a.want_count(n) != 2) {
        return Err(Error::precondition(
            "independent-set scheduling needs every receiver to want exactly two packets",
        ));
    }
    let g = ConflictGraph::from_sfm(a);
    let independent = match mode {
        MwisMode::Exact if g.n() <= exact_threshold => oracle::mwis_exact(&g)?.vertices,
        _ => greedy_mwis(&g),
    };
    let cover: BTreeSet<PacketId> = g
        .vertices()
        .iter()
        .copied()
        .filter(|k| !independent.contains(k))
        .collect();
    let split_demands = independent.iter().map(|&k| a.demand_count(k)).sum();
    Ok(MisPartition { independent, cover, split_demands })
}

/// Two random-coded transmissions for pair demands: first the complement of
/// a maximum-weight independent set, then all wanted packets. Mean delay is
/// exactly 2 - split_demands / (2 N) when both transmissions are generic.
pub fn schedule_mis(a: &StateFeedbackMatrix, mode: MwisMode) -> Result<Schedule> {
    let part = mis_partition(a, mode, DEFAULT_MIS_EXACT_THRESHOLD)?;
    // Both packets of any receiver can't sit in the independent set, so the
    // cover is nonempty whenever the instance is valid.
    debug_assert!(!part.cover.is_empty());
    let all_wanted: BTreeSet<PacketId> =
        (0..a.n_packets()).filter(|&k| a.demand_count(k) > 0).collect();
    Schedule::new(vec![part.cover, all_wanted], CoefficientPolicy::Random, 0)
}

/// Named scheduler selection, as used by the experiment runner and CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulerSpec {
    Rlnc,
    Uncoded,
    SIdnc,
    GIdnc,
    VcAlg1,
    Mis(MwisMode),
}

impl SchedulerSpec {
    pub const ALL: [SchedulerSpec; 7] = [
        SchedulerSpec::Rlnc,
        SchedulerSpec::Uncoded,
        SchedulerSpec::SIdnc,
        SchedulerSpec::GIdnc,
        SchedulerSpec::VcAlg1,
        SchedulerSpec::Mis(MwisMode::Exact),
        SchedulerSpec::Mis(MwisMode::Greedy),
    ];

    pub fn parse(token: &str) -> Result<Self> {
        match token.trim() {
            "rlnc" => Ok(SchedulerSpec::Rlnc),
            "uncoded" => Ok(SchedulerSpec::Uncoded),
            "sidnc" => Ok(SchedulerSpec::SIdnc),
            "gidnc" => Ok(SchedulerSpec::GIdnc),
            "vc" | "vc-alg1" => Ok(SchedulerSpec::VcAlg1),
            "mis-exact" => Ok(SchedulerSpec::Mis(MwisMode::Exact)),
            "mis-greedy" => Ok(SchedulerSpec::Mis(MwisMode::Greedy)),
            other => Err(Error::precondition(format!(
                "unknown scheduler {other:?} (expected one of rlnc, uncoded, sidnc, gidnc, vc, mis-exact, mis-greedy)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SchedulerSpec::Rlnc => "rlnc",
            SchedulerSpec::Uncoded => "uncoded",
            SchedulerSpec::SIdnc => "sidnc",
            SchedulerSpec::GIdnc => "gidnc",
            SchedulerSpec::VcAlg1 => "vc",
            SchedulerSpec::Mis(MwisMode::Exact) => "mis-exact",
            SchedulerSpec::Mis(MwisMode::Greedy) => "mis-greedy",
        }
    }

    /// Builds the schedule and stamps `seed` on it as the coefficient seed.
    pub fn build(&self, a: &StateFeedbackMatrix, seed: u64) -> Result<Schedule> {
        let mut s = match self {
            SchedulerSpec::Rlnc => schedule_rlnc(a),
            SchedulerSpec::Uncoded => {
                let order: Vec<PacketId> = (0..a.n_packets()).collect();
                schedule_uncoded(a, &order)?
            }
            SchedulerSpec::SIdnc => schedule_sidnc(a),
            SchedulerSpec::GIdnc => schedule_gidnc(a, seed),
            SchedulerSpec::VcAlg1 => schedule_vc_alg1(a, seed),
            SchedulerSpec::Mis(mode) => schedule_mis(a, *mode)?,
        };
        s.seed = seed;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::sim::{self, is_throughput_optimal};
    use crate::testutil::sfm;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn rlnc_is_max_want_full_block_transmissions() {
        let a = sfm(3, &[&[0], &[0, 1], &[0, 1, 2]]);
        let s = schedule_rlnc(&a);
        assert_eq!(s.len(), 3);
        assert!(s.coding_sets.iter().all(|m| m.len() == 3));
        assert_eq!(s.policy, CoefficientPolicy::Random);
    }

    #[test]
    fn uncoded_requires_a_permutation() {
        let a = sfm(3, &[&[0, 1, 2]]);
        assert!(schedule_uncoded(&a, &[0, 1, 2]).is_ok());
        assert!(schedule_uncoded(&a, &[2, 0, 1]).is_ok());
        assert!(schedule_uncoded(&a, &[0, 1]).is_err());
        assert!(schedule_uncoded(&a, &[0, 1, 1]).is_err());
        assert!(schedule_uncoded(&a, &[0, 1, 3]).is_err());
    }

    #[test]
    fn sidnc_merges_conflict_free_packets_into_one_transmission() {
        // Disjoint singleton wants: no conflicts, one XOR serves everyone.
        let a = sfm(2, &[&[0], &[1]]);
        let s = schedule_sidnc(&a);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coding_sets[0], [0, 1].into_iter().collect());
        let r = simulate(&a, &s).unwrap();
        assert_eq!(r.apdd, Some(Ratio::new(1, 1)));
    }

    #[test]
    fn sidnc_on_pairwise_conflicts_degenerates_to_singletons() {
        let a = generators::complete_graph(5).unwrap();
        let s = schedule_sidnc(&a);
        assert_eq!(s.len(), 5);
        assert!(s.coding_sets.iter().all(|m| m.len() == 1));
        let r = simulate(&a, &s).unwrap();
        assert_eq!(r.apdd, Some(Ratio::new(3, 1))); // (K+1)/2
    }

    #[test]
    fn sidnc_orders_classes_by_total_demand() {
        // Packet 2 is wanted by three receivers and conflicts with both
        // others, so its singleton class goes first.
        let a = sfm(3, &[&[1, 2], &[0, 2], &[2]]);
        let s = schedule_sidnc(&a);
        assert_eq!(s.coding_sets[0], [2].into_iter().collect());
        assert_eq!(s.coding_sets[1], [0, 1].into_iter().collect());
    }

    #[test]
    fn gidnc_pairs_complementary_singleton_wants() {
        let a = sfm(2, &[&[0], &[1]]);
        let s = schedule_gidnc(&a, 0);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coding_sets[0], [0, 1].into_iter().collect());
    }

    #[test]
    fn gidnc_completes_and_makes_progress_every_round() {
        for seed in [5u64, 21, 99] {
            let a = generators::uniform_pairs(12, 8, seed).unwrap();
            let s = schedule_gidnc(&a, seed);
            let r = simulate(&a, &s).unwrap();
            assert!(r.complete, "seed {seed}");
            for t in 1..=s.len() as u32 {
                let decoded_at_t = r
                    .decode_time
                    .iter()
                    .flatten()
                    .filter(|&&dt| dt == Some(t))
                    .count();
                assert!(decoded_at_t > 0, "seed {seed}: idle transmission {t}");
            }
        }
    }

    #[test]
    fn vertex_cover_heuristic_picks_the_path_center() {
        // Path 1-2-3: vertex 2 covers both edges alone.
        let edge = |ks: &[usize]| ks.iter().copied().collect::<BTreeSet<_>>();
        let h = DemandHypergraph::new(3, vec![(edge(&[0, 1]), 1), (edge(&[1, 2]), 1)]).unwrap();
        assert_eq!(minimal_vertex_cover_heuristic(&h), edge(&[1]));
        // Path on four vertices needs both interior vertices.
        let h4 = DemandHypergraph::new(
            4,
            vec![(edge(&[0, 1]), 1), (edge(&[1, 2]), 1), (edge(&[2, 3]), 1)],
        )
        .unwrap();
        assert_eq!(minimal_vertex_cover_heuristic(&h4), edge(&[1, 3]));
        // A single hyperedge is covered by one vertex.
        let h1 = DemandHypergraph::new(3, vec![(edge(&[0, 1, 2]), 1)]).unwrap();
        assert_eq!(minimal_vertex_cover_heuristic(&h1).len(), 1);
        // Multiplicity weights the degree: vertex 1 sits in both edges.
        let hm = DemandHypergraph::new(3, vec![(edge(&[0, 1]), 3), (edge(&[1, 2]), 1)]).unwrap();
        assert_eq!(minimal_vertex_cover_heuristic(&hm), edge(&[1]));
    }

    #[test]
    fn vc_alg1_is_throughput_optimal_on_random_instances() {
        for seed in [1u64, 7, 13, 40] {
            let a = generators::bernoulli(10, 6, 0.35, seed).unwrap();
            let s = schedule_vc_alg1(&a, seed ^ 0xF00D);
            let r = simulate(&a, &s).unwrap();
            assert!(is_throughput_optimal(&r, &a), "seed {seed}");
            assert_eq!(s.len(), a.max_want_count());
        }
    }

    #[test]
    fn vc_alg1_cover_rounds_are_pairwise_disjoint() {
        let a = generators::bernoulli(8, 7, 0.4, 3).unwrap();
        let s = schedule_vc_alg1(&a, 0);
        let full: BTreeSet<PacketId> = (0..7).collect();
        let covers: Vec<&BTreeSet<PacketId>> =
            s.coding_sets.iter().take_while(|m| **m != full).collect();
        for i in 0..covers.len() {
            for j in i + 1..covers.len() {
                assert!(covers[i].is_disjoint(covers[j]));
            }
        }
    }

    // Pair demands on four packets where {2,3} is the unique heaviest
    // independent set but the greedy heuristic grabs vertex 0 first.
    fn straddle_example() -> StateFeedbackMatrix {
        sfm(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3], &[0, 1]])
    }

    #[test]
    fn mis_partition_exact_beats_greedy_on_the_straddle_example() {
        let a = straddle_example();
        let exact = mis_partition(&a, MwisMode::Exact, 25).unwrap();
        assert_eq!(exact.independent, [2, 3].into_iter().collect());
        assert_eq!(exact.cover, [0, 1].into_iter().collect());
        assert_eq!(exact.split_demands, 4);
        let greedy = mis_partition(&a, MwisMode::Greedy, 25).unwrap();
        assert_eq!(greedy.independent, [0].into_iter().collect());
        assert_eq!(greedy.split_demands, 3);
    }

    #[test]
    fn mis_schedule_hits_its_closed_form_delay() {
        let a = straddle_example();
        let n = a.n_receivers() as u64;
        for (mode, split) in [(MwisMode::Exact, 4u64), (MwisMode::Greedy, 3u64)] {
            let s = schedule_mis(&a, mode).unwrap();
            assert_eq!(s.len(), 2);
            let r = simulate(&a, &s).unwrap();
            assert!(r.complete);
            // 2 - split / (2N)
            assert_eq!(r.apdd.unwrap(), Ratio::new(4 * n - split, 2 * n));
        }
    }

    #[test]
    fn mis_on_all_pairs_serves_one_packet_early() {
        let a = generators::complete_graph(4).unwrap();
        let s = schedule_mis(&a, MwisMode::Exact).unwrap();
        let r = simulate(&a, &s).unwrap();
        assert_eq!(r.apdd.unwrap(), Ratio::new(7, 4)); // 2 - 3/12
    }

    #[test]
    fn mis_rejects_non_pair_demands() {
        let a = sfm(3, &[&[0, 1, 2]]);
        assert!(schedule_mis(&a, MwisMode::Exact).is_err());
        assert!(mis_partition(&a, MwisMode::Greedy, 25).is_err());
    }

    #[test]
    fn scheduler_names_parse_back() {
        for spec in SchedulerSpec::ALL {
            assert_eq!(SchedulerSpec::parse(spec.name()).unwrap(), spec);
        }
        assert_eq!(
            SchedulerSpec::parse("vc-alg1").unwrap(),
            SchedulerSpec::VcAlg1
        );
        assert!(SchedulerSpec::parse("dense").is_err());
    }

    proptest! {
        // Conflict-free classes make S-IDNC transmissions instantly
        // decodable: a receiver decodes at t iff it wants exactly one
        // packet of the t-th coding set.
        #[test]
        fn sidnc_transmissions_decode_instantly(seed in any::<u64>(), n in 1usize..10, k in 1usize..8) {
            let a = generators::bernoulli(n, k, 0.45, seed).unwrap();
            let s = schedule_sidnc(&a);
            for set in &s.coding_sets {
                for r in 0..n {
                    prop_assert!(set.intersection(a.wants(r)).count() <= 1);
                }
            }
            let rep = simulate(&a, &s).unwrap();
            prop_assert!(rep.complete);
            for (t, set) in s.coding_sets.iter().enumerate() {
                for r in 0..n {
                    let hit: Vec<PacketId> =
                        set.intersection(a.wants(r)).copied().collect();
                    match hit.as_slice() {
                        [pk] => prop_assert_eq!(rep.decode_time(r, *pk), Some(t as u32 + 1)),
                        _ => {
                            for &pk in a.wants(r) {
                                prop_assert!(rep.decode_time(r, pk) != Some(t as u32 + 1));
                            }
                        }
                    }
                }
            }
            // Each wanted packet appears in exactly one class.
            let mut appearances = vec![0usize; k];
            for set in &s.coding_sets {
                for &pk in set {
                    appearances[pk] += 1;
                }
            }
            for (pk, &count) in appearances.iter().enumerate() {
                prop_assert_eq!(count, usize::from(a.demand_count(pk) > 0));
            }
        }

        #[test]
        fn vc_alg1_always_finishes_in_max_want_transmissions(
            seed in any::<u64>(), n in 1usize..9, k in 1usize..7
        ) {
            let a = generators::bernoulli(n, k, 0.4, seed).unwrap();
            let s = schedule_vc_alg1(&a, seed);
            prop_assert_eq!(s.len(), a.max_want_count());
            // Throughput optimality needs generic tail coefficients; skip
            // the ~2^-16 draws where an independent stream disagrees.
            let (r, agreed) = sim::simulate_confirmed(&a, &s).unwrap();
            prop_assume!(agreed);
            prop_assert!(is_throughput_optimal(&r, &a));
        }

        #[test]
        fn gidnc_schedules_complete(seed in any::<u64>(), n in 1usize..9, k in 1usize..7) {
            let a = generators::bernoulli(n, k, 0.4, seed).unwrap();
            let s = schedule_gidnc(&a, seed);
            let r = simulate(&a, &s).unwrap();
            prop_assert!(r.complete);
            prop_assert!(sim::apdd(&r, &a).unwrap() >= sim::lower_bound(&a));
        }

        #[test]
        fn mis_delay_matches_split_formula_on_pairs(seed in any::<u64>(), n in 1usize..12, k in 2usize..8) {
            let a = generators::uniform_pairs(n, k, seed).unwrap();
            for mode in [MwisMode::Exact, MwisMode::Greedy] {
                let part = mis_partition(&a, mode, 25).unwrap();
                // No receiver straddles the independent set twice.
                for r in 0..n {
                    prop_assert!(a.wants(r).intersection(&part.independent).count() <= 1);
                }
                let s = schedule_mis(&a, mode).unwrap();
                // The closed form assumes generic coefficients.
                let (rep, agreed) = sim::simulate_confirmed(&a, &s).unwrap();
                prop_assume!(agreed);
                prop_assert!(rep.complete);
                let nn = n as u64;
                prop_assert_eq!(
                    rep.apdd.unwrap(),
                    Ratio::new(4 * nn - part.split_demands as u64, 2 * nn)
                );
            }
        }
    }
}
