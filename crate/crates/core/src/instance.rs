//! Problem instances: binary demand matrices and their hypergraph duals.
//!
//! Packets are indexed from 0 internally; every text format is 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::Error;
use crate::Result;

/// Zero-based packet index into the block.
pub type PacketId = usize;

/// Demand matrix: row n lists the packets receiver n still wants; everything
/// else is already held as side information. Every receiver wants at least
/// one packet and the block is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateFeedbackMatrix {
    n_packets: usize,
    wants: Vec<BTreeSet<PacketId>>,
}

impl StateFeedbackMatrix {
    pub fn new(n_packets: usize, wants: Vec<BTreeSet<PacketId>>) -> Result<Self> {
        if n_packets == 0 {
            return Err(Error::invalid_instance("packet block is empty"));
        }
        if wants.is_empty() {
            return Err(Error::invalid_instance("no receivers"));
        }
        for (n, w) in wants.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::invalid_instance(format!(
                    "receiver {} wants nothing",
                    n + 1
                )));
            }
            let &max = w.iter().next_back().unwrap();
            if max >= n_packets {
                return Err(Error::invalid_instance(format!(
                    "receiver {} wants packet {} but the block has {} packets",
                    n + 1,
                    max + 1,
                    n_packets
                )));
            }
        }
        Ok(StateFeedbackMatrix { n_packets, wants })
    }

    /// Convenience constructor from slices of packet ids.
    pub fn from_rows(n_packets: usize, rows: &[&[PacketId]]) -> Result<Self> {
        let wants = rows.iter().map(|r| r.iter().copied().collect()).collect();
        Self::new(n_packets, wants)
    }

    pub fn n_receivers(&self) -> usize {
        self.wants.len()
    }

    pub fn n_packets(&self) -> usize {
        self.n_packets
    }

    pub fn wants(&self, n: usize) -> &BTreeSet<PacketId> {
        &self.wants[n]
    }

    pub fn want_sets(&self) -> &[BTreeSet<PacketId>] {
        &self.wants
    }

    pub fn wants_packet(&self, n: usize, k: PacketId) -> bool {
        self.wants[n].contains(&k)
    }

    /// w_n: how many packets receiver n wants.
    pub fn want_count(&self, n: usize) -> usize {
        self.wants[n].len()
    }

    pub fn max_want_count(&self) -> usize {
        self.wants.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// t_k: how many receivers want packet k.
    pub fn demand_count(&self, k: PacketId) -> usize {
        self.wants.iter().filter(|w| w.contains(&k)).count()
    }

    /// Total demand pairs, sum of w_n.
    pub fn total_demands(&self) -> usize {
        self.wants.iter().map(BTreeSet::len).sum()
    }

    /// Parses the text format: a "N K" header line, then N rows of K
    /// characters from {0,1} where 1 marks a wanted packet.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(1, "header must be \"N K\""))?;
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(1, "header must be \"N K\""))?;
        if parts.next().is_some() {
            return Err(Error::parse(1, "header must be \"N K\""));
        }
        if n == 0 || k == 0 {
            return Err(Error::parse(1, "N and K must be positive"));
        }
        let mut wants = Vec::with_capacity(n);
        for (idx, row) in lines.by_ref() {
            let line_no = idx + 1;
            let row = row.trim();
            if row.is_empty() {
                continue;
            }
            if wants.len() == n {
                return Err(Error::parse(line_no, format!("expected {n} rows")));
            }
            if row.chars().count() != k {
                return Err(Error::parse(
                    line_no,
                    format!("expected {k} columns, found {}", row.chars().count()),
                ));
            }
            let mut set = BTreeSet::new();
            for (col, ch) in row.chars().enumerate() {
                match ch {
                    '1' => {
                        set.insert(col);
                    }
                    '0' => {}
                    other => {
                        return Err(Error::parse(
                            line_no,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
            }
            if set.is_empty() {
                return Err(Error::parse(line_no, "receiver wants nothing"));
            }
            wants.push(set);
        }
        if wants.len() != n {
            return Err(Error::parse(
                text.lines().count(),
                format!("expected {n} rows, found {}", wants.len()),
            ));
        }
        Self::new(k, wants)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n_receivers(), self.n_packets);
        for w in &self.wants {
            for k in 0..self.n_packets {
                out.push(if w.contains(&k) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// A distinct want-set together with every receiver that shares it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub packets: BTreeSet<PacketId>,
    pub multiplicity: usize,
    /// Row indices of the demand matrix this edge represents.
    pub receivers: Vec<usize>,
}

/// Hypergraph dual of a demand matrix: packets are vertices (weight t_k),
/// distinct want-sets are hyperedges carrying their receiver multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandHypergraph {
    n_vertices: usize,
    edges: Vec<Hyperedge>,
}

impl DemandHypergraph {
    /// Builds from explicit (want-set, multiplicity) pairs; duplicate sets
    /// are merged and receiver indices are synthesized in expansion order.
    pub fn new(n_vertices: usize, sets: Vec<(BTreeSet<PacketId>, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::invalid_instance("hypergraph has no vertices"));
        }
        if sets.is_empty() {
            return Err(Error::invalid_instance("hypergraph has no hyperedges"));
        }
        let mut edges: Vec<Hyperedge> = Vec::new();
        for (packets, multiplicity) in sets {
            if packets.is_empty() {
                return Err(Error::invalid_instance("empty hyperedge"));
            }
            if multiplicity == 0 {
                return Err(Error::invalid_instance("hyperedge multiplicity is zero"));
            }
            let &max = packets.iter().next_back().unwrap();
            if max >= n_vertices {
                return Err(Error::invalid_instance(format!(
                    "hyperedge references vertex {} of {}",
                    max + 1,
                    n_vertices
                )));
            }
            match edges.iter_mut().find(|e| e.packets == packets) {
                Some(e) => e.multiplicity += multiplicity,
                None => edges.push(Hyperedge { packets, multiplicity, receivers: Vec::new() }),
            }
        }
        let mut next = 0;
        for e in &mut edges {
            e.receivers = (next..next + e.multiplicity).collect();
            next += e.multiplicity;
        }
        Ok(DemandHypergraph { n_vertices, edges })
    }

    pub fn from_sfm(a: &StateFeedbackMatrix) -> Self {
        let mut edges: Vec<Hyperedge> = Vec::new();
        for (n, w) in a.want_sets().iter().enumerate() {
            match edges.iter_mut().find(|e| &e.packets == w) {
                Some(e) => {
                    e.multiplicity += 1;
                    e.receivers.push(n);
                }
                None => edges.push(Hyperedge {
                    packets: w.clone(),
                    multiplicity: 1,
                    receivers: vec![n],
                }),
            }
        }
        DemandHypergraph { n_vertices: a.n_packets(), edges }
    }

    /// Expands each hyperedge back into `multiplicity` identical rows.
    /// Inverse of `from_sfm` up to receiver ordering.
    pub fn to_sfm(&self) -> StateFeedbackMatrix {
        let mut wants = Vec::new();
        for e in &self.edges {
            for _ in 0..e.multiplicity {
                wants.push(e.packets.clone());
            }
        }
        StateFeedbackMatrix::new(self.n_vertices, wants)
            .expect("a valid hypergraph expands to a valid demand matrix")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// t_k: total multiplicity of hyperedges containing vertex k.
    pub fn vertex_weight(&self, k: PacketId) -> usize {
        self.edges
            .iter()
            .filter(|e| e.packets.contains(&k))
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Canonically sorted (want-set, multiplicity) pairs, for comparisons
    /// that should ignore hyperedge order.
    pub fn demand_multiset(&self) -> Vec<(Vec<PacketId>, usize)> {
        let mut out: Vec<(Vec<PacketId>, usize)> = self
            .edges
            .iter()
            .map(|e| (e.packets.iter().copied().collect(), e.multiplicity))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;

    fn sfm(n_packets: usize, rows: &[&[PacketId]]) -> StateFeedbackMatrix {
        StateFeedbackMatrix::from_rows(n_packets, rows).unwrap()
    }

    #[test]
    fn counts_and_accessors() {
        let a = sfm(3, &[&[0], &[0, 1], &[0, 1, 2]]);
        assert_eq!(a.n_receivers(), 3);
        assert_eq!(a.n_packets(), 3);
        assert_eq!(a.want_count(0), 1);
        assert_eq!(a.want_count(2), 3);
        assert_eq!(a.demand_count(0), 3);
        assert_eq!(a.demand_count(2), 1);
        assert_eq!(a.total_demands(), 6);
        assert_eq!(a.max_want_count(), 3);
        assert!(a.wants_packet(1, 1));
        assert!(!a.wants_packet(0, 1));
    }

    #[test]
    fn construction_rejects_bad_instances() {
        assert!(StateFeedbackMatrix::from_rows(0, &[&[0]]).is_err());
        assert!(StateFeedbackMatrix::from_rows(2, &[]).is_err());
        assert!(StateFeedbackMatrix::from_rows(2, &[&[]]).is_err());
        assert!(StateFeedbackMatrix::from_rows(2, &[&[2]]).is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let a = sfm(4, &[&[0, 2], &[1, 2, 3], &[0, 2]]);
        let text = a.render();
        assert_eq!(text, "3 4\n1010\n0111\n1010\n");
        assert_eq!(StateFeedbackMatrix::parse(&text).unwrap(), a);
    }

    #[test]
    fn parse_rejects_malformed_text() {
        for (text, what) in [
            ("", "missing header"),
            ("2\n10\n01\n", "short header"),
            ("2 2\n10\n", "missing row"),
            ("1 2\n10\n01\n", "extra row"),
            ("1 3\n10\n", "short row"),
            ("1 2\n1x\n", "bad character"),
            ("1 2\n00\n", "all-zero row"),
            ("0 2\n", "zero receivers"),
        ] {
            assert!(StateFeedbackMatrix::parse(text).is_err(), "{what}");
        }
        // Line numbers point at the offending row.
        match StateFeedbackMatrix::parse("2 2\n10\n00\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn hypergraph_merges_duplicate_want_sets() {
        let a = sfm(3, &[&[0, 1], &[2], &[0, 1]]);
        let h = DemandHypergraph::from_sfm(&a);
        assert_eq!(h.edges().len(), 2);
        assert_eq!(h.edges()[0].multiplicity, 2);
        assert_eq!(h.edges()[0].receivers, vec![0, 2]);
        assert_eq!(h.edges()[1].receivers, vec![1]);
        assert_eq!(h.vertex_weight(0), 2);
        assert_eq!(h.vertex_weight(2), 1);
        // An unwanted vertex has weight 0 but still exists.
        let b = sfm(3, &[&[0]]);
        assert_eq!(DemandHypergraph::from_sfm(&b).vertex_weight(2), 0);
    }

    #[test]
    fn hypergraph_construction_validates() {
        let edge = |ks: &[usize]| ks.iter().copied().collect::<BTreeSet<_>>();
        assert!(DemandHypergraph::new(0, vec![(edge(&[0]), 1)]).is_err());
        assert!(DemandHypergraph::new(2, vec![]).is_err());
        assert!(DemandHypergraph::new(2, vec![(edge(&[]), 1)]).is_err());
        assert!(DemandHypergraph::new(2, vec![(edge(&[0]), 0)]).is_err());
        assert!(DemandHypergraph::new(2, vec![(edge(&[3]), 1)]).is_err());
        // Duplicate sets merge.
        let h = DemandHypergraph::new(2, vec![(edge(&[0]), 1), (edge(&[0]), 2)]).unwrap();
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].multiplicity, 3);
    }

    #[test]
    fn round_trip_preserves_demand_multiset() {
        let a = sfm(4, &[&[0, 1], &[2], &[0, 1], &[3], &[2]]);
        let h = DemandHypergraph::from_sfm(&a);
        let b = h.to_sfm();
        assert_eq!(b.n_packets(), a.n_packets());
        let h2 = DemandHypergraph::from_sfm(&b);
        assert_eq!(h.demand_multiset(), h2.demand_multiset());
        // Want-set multisets of the two matrices agree.
        let mut wa: Vec<_> = a.want_sets().to_vec();
        let mut wb: Vec<_> = b.want_sets().to_vec();
        wa.sort();
        wb.sort();
        assert_eq!(wa, wb);
    }

    proptest! {
        #[test]
        fn generated_instances_round_trip(seed in any::<u64>(), n in 1usize..12, k in 1usize..8) {
            let a = generators::bernoulli(n, k, 0.4, seed).unwrap();
            let parsed = StateFeedbackMatrix::parse(&a.render()).unwrap();
            prop_assert_eq!(&parsed, &a);
            let h = DemandHypergraph::from_sfm(&a);
            let h2 = DemandHypergraph::from_sfm(&h.to_sfm());
            prop_assert_eq!(h.demand_multiset(), h2.demand_multiset());
            prop_assert_eq!(h.n_vertices(), k);
            // Vertex weights match demand counts.
            for pk in 0..k {
                prop_assert_eq!(h.vertex_weight(pk), a.demand_count(pk));
            }
        }
    }
}
