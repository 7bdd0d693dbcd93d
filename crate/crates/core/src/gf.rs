//! Arithmetic over GF(2^m) and incremental row reduction.
//!
//! Elements are stored as `u16` bit patterns of polynomials over GF(2);
//! the field is a context object carrying the modulus.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::Error;
use crate::instance::PacketId;
use crate::Result;

/// Polynomial bit pattern representing a field element; valid values are
/// `0..field.order()`.
pub type FieldElement = u16;

/// Binary extension field GF(2^m), m <= 16, with a fixed irreducible modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    m: u32,
    modulus: u32,
}

impl Field {
    /// GF(2^8), modulus x^8 + x^4 + x^3 + x^2 + 1.
    pub const GF2_8: Field = Field { m: 8, modulus: 0x11D };
    /// GF(2^16), modulus x^16 + x^5 + x^3 + x^2 + 1.
    pub const GF2_16: Field = Field { m: 16, modulus: 0x1_002D };

    pub fn exponent(&self) -> u32 {
        self.m
    }

    /// Number of field elements, 2^m.
    pub fn order(&self) -> u32 {
        1u32 << self.m
    }

    /// Addition = subtraction = XOR in characteristic 2.
    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a ^ b
    }

    /// Carry-less shift-and-add product, reduced by the modulus.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut acc: u32 = 0;
        let mut a = a as u32;
        let mut b = b as u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & self.order() != 0 {
                a ^= self.modulus;
            }
        }
        acc as FieldElement
    }

    pub fn pow(&self, a: FieldElement, mut e: u32) -> FieldElement {
        let mut base = a;
        let mut acc: FieldElement = 1;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^m - 2). Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a != 0, "zero has no multiplicative inverse");
        self.pow(a, self.order() - 2)
    }

    /// Uniform draw from the nonzero elements.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        rng.gen_range(1..self.order()) as FieldElement
    }
}

/// Row basis in reduced row echelon form; rows are kept normalized
/// (pivot coefficient 1), mutually reduced, and sorted by pivot column.
#[derive(Clone, Debug)]
pub struct FieldMatrix {
    field: Field,
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn new(field: Field, width: usize) -> Self {
        FieldMatrix { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Degrees of freedom accumulated so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.width
    }

    fn reduce_in_place(&self, v: &mut [FieldElement]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for j in p..self.width {
                    v[j] ^= self.field.mul(c, row[j]);
                }
            }
        }
    }

    /// Reduces `v` against the basis and inserts the remainder if it is
    /// independent. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]);
        for c in &mut v[p..] {
            *c = self.field.mul(inv, *c);
        }
        for row in &mut self.rows {
            let c = row[p];
            if c != 0 {
                for j in p..self.width {
                    row[j] ^= self.field.mul(c, v[j]);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// True iff the unit vector on `col` lies in the row span, i.e. that
    /// coordinate is individually recoverable from the rows.
    pub fn contains_unit(&self, col: usize) -> bool {
        assert!(col < self.width, "column out of range");
        let mut v = vec![0 as FieldElement; self.width];
        v[col] = 1;
        self.reduce_in_place(&mut v);
        v.iter().all(|&c| c == 0)
    }
}

/// A coded packet: one coefficient per packet of the block, nonzero exactly
/// on the coding set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedVector {
    coefficients: Vec<FieldElement>,
    support: BTreeSet<PacketId>,
}

impl CodedVector {
    /// Uniform nonzero coefficient on every packet of `coding_set`.
    pub fn random<R: Rng + ?Sized>(
        coding_set: &BTreeSet<PacketId>,
        n_packets: usize,
        field: Field,
        rng: &mut R,
    ) -> Result<Self> {
        Self::build(coding_set, n_packets, |_| field.random_nonzero(rng))
    }

    /// Coefficient 1 on every packet of `coding_set` (plain XOR coding).
    pub fn all_ones(coding_set: &BTreeSet<PacketId>, n_packets: usize) -> Result<Self> {
        Self::build(coding_set, n_packets, |_| 1)
    }

    fn build(
        coding_set: &BTreeSet<PacketId>,
        n_packets: usize,
        mut coeff: impl FnMut(PacketId) -> FieldElement,
    ) -> Result<Self> {
        if coding_set.is_empty() {
            return Err(Error::precondition("empty coding set"));
        }
        if coding_set.iter().any(|&k| k >= n_packets) {
            return Err(Error::precondition(format!(
                "coding set references packet {} outside a block of {}",
                coding_set.iter().next_back().unwrap() + 1,
                n_packets
            )));
        }
        let mut coefficients = vec![0 as FieldElement; n_packets];
        for &k in coding_set {
            coefficients[k] = coeff(k);
        }
        Ok(CodedVector { coefficients, support: coding_set.clone() })
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    pub fn support(&self) -> &BTreeSet<PacketId> {
        &self.support
    }

    /// Restriction to the given coordinates (a receiver's wanted packets,
    /// ascending); coordinates outside the support read as zero.
    pub fn project(&self, coords: &[PacketId]) -> Vec<FieldElement> {
        coords.iter().map(|&k| self.coefficients[k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Test oracle: one-shot Gaussian elimination rank, kept in plain
    /// index-loop form so it shares nothing with the incremental RREF.
    #[allow(clippy::needless_range_loop)]
    fn gauss_rank(field: Field, rows: &[Vec<FieldElement>], width: usize) -> usize {
        let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
        let mut rank = 0;
        for col in 0..width {
            let Some(r) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, r);
            let inv = field.inv(m[rank][col]);
            for j in col..width {
                m[rank][j] = field.mul(inv, m[rank][j]);
            }
            for r2 in 0..m.len() {
                if r2 != rank && m[r2][col] != 0 {
                    let c = m[r2][col];
                    for j in col..width {
                        m[r2][j] ^= field.mul(c, m[rank][j]);
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    fn unit(width: usize, col: usize) -> Vec<FieldElement> {
        let mut v = vec![0; width];
        v[col] = 1;
        v
    }

    #[test]
    fn modulus_reduction_matches_polynomial() {
        // x^8 = x^4 + x^3 + x^2 + 1 and x^16 = x^5 + x^3 + x^2 + 1.
        assert_eq!(Field::GF2_8.mul(0x80, 0x02), 0x1D);
        assert_eq!(Field::GF2_16.mul(0x8000, 0x0002), 0x2D);
    }

    #[test]
    fn every_nonzero_element_has_an_inverse_gf256() {
        let f = Field::GF2_8;
        for a in 1..f.order() as FieldElement {
            assert_eq!(f.mul(a, f.inv(a)), 1, "a = {a:#x}");
        }
    }

    #[test]
    fn every_nonzero_element_has_an_inverse_gf65536() {
        let f = Field::GF2_16;
        for a in 1..=u16::MAX {
            assert_eq!(f.mul(a, f.inv(a)), 1, "a = {a:#x}");
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [Field::GF2_8, Field::GF2_16] {
            for _ in 0..2000 {
                let a = (rng.gen_range(0..f.order())) as FieldElement;
                let b = (rng.gen_range(0..f.order())) as FieldElement;
                let c = (rng.gen_range(0..f.order())) as FieldElement;
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
            }
        }
    }

    #[test]
    fn insert_reports_rank_growth() {
        let f = Field::GF2_16;
        let mut m = FieldMatrix::new(f, 3);
        assert!(m.insert(&[1, 2, 3]));
        assert!(m.insert(&[0, 5, 7]));
        // A linear combination of the first two rows.
        let dep: Vec<FieldElement> = (0..3)
            .map(|j| f.mul(9, [1, 2, 3][j]) ^ f.mul(4, [0, 5, 7][j]))
            .collect();
        assert!(!m.insert(&dep));
        assert_eq!(m.rank(), 2);
        assert!(m.insert(&unit(3, 2)));
        assert!(m.is_full_rank());
    }

    #[test]
    fn contains_unit_distinguishes_coordinates() {
        let f = Field::GF2_16;
        let mut m = FieldMatrix::new(f, 3);
        m.insert(&[1, 1, 0]);
        assert!(!m.contains_unit(0));
        assert!(!m.contains_unit(1));
        assert!(!m.contains_unit(2));
        m.insert(&[0, 1, 0]);
        assert!(m.contains_unit(0));
        assert!(m.contains_unit(1));
        assert!(!m.contains_unit(2));
    }

    #[test]
    fn coded_vector_support_and_projection() {
        let set: BTreeSet<PacketId> = [0, 2].into_iter().collect();
        let v = CodedVector::all_ones(&set, 4).unwrap();
        assert_eq!(v.coefficients(), &[1, 0, 1, 0]);
        assert_eq!(v.project(&[1, 2, 3]), vec![0, 1, 0]);
        assert_eq!(v.support(), &set);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = CodedVector::random(&set, 4, Field::GF2_16, &mut rng).unwrap();
        for k in 0..4 {
            assert_eq!(r.coefficients()[k] != 0, set.contains(&k));
        }
        assert!(CodedVector::all_ones(&BTreeSet::new(), 4).is_err());
        let bad: BTreeSet<PacketId> = [5].into_iter().collect();
        assert!(CodedVector::all_ones(&bad, 4).is_err());
    }

    proptest! {
        #[test]
        fn rank_matches_gaussian_elimination(
            rows in prop::collection::vec(prop::collection::vec(any::<u16>(), 5), 0..8)
        ) {
            let f = Field::GF2_16;
            let mut m = FieldMatrix::new(f, 5);
            for r in &rows {
                m.insert(r);
            }
            prop_assert_eq!(m.rank(), gauss_rank(f, &rows, 5));
            for col in 0..5 {
                let mut with_unit = rows.clone();
                with_unit.push(unit(5, col));
                let expect = gauss_rank(f, &with_unit, 5) == m.rank();
                prop_assert_eq!(m.contains_unit(col), expect);
            }
        }
    }
}
