//! Byte-block XOR arithmetic and GF(2) linear algebra over the subfile basis.
//!
//! Every cache entry and broadcast packet built by the schemes is a
//! GF(2)-linear function of the subfiles. At the payload level that linearity
//! is bytewise XOR of [`Block`]s; at the symbolic level each variable is a
//! [`BasisVector`] of column indices over the global subfile basis. For
//! uniform independent file bits the joint entropy of any set of such
//! variables equals the GF(2) rank of their coefficient rows times the
//! subfile size, which makes [`rank`] and [`in_span`] the workhorses of both
//! decodability oracles and the converse checks.

use crate::{Error, Result};

/// Fixed-length byte payload carrying one subfile-sized chunk of data.
///
/// All blocks in one session have the same length; XOR of a block with
/// itself is the all-zero block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    bytes: Vec<u8>,
}

impl Block {
    pub fn new(bytes: Vec<u8>) -> Self {
        Block { bytes }
    }

    pub fn zeros(len: usize) -> Self {
        Block { bytes: vec![0; len] }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    /// XOR `other` into this block in place.
    pub fn xor_in_place(&mut self, other: &Block) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::BlockSizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        for (dst, src) in self.bytes.iter_mut().zip(&other.bytes) {
            *dst ^= src;
        }
        Ok(())
    }
}

/// Bytewise XOR of two equal-length blocks.
pub fn xor_blocks(a: &Block, b: &Block) -> Result<Block> {
    let mut out = a.clone();
    out.xor_in_place(b)?;
    Ok(out)
}

/// A GF(2) row vector over the global subfile basis, stored as the sorted
/// set of column indices with coefficient 1.
///
/// Construction has XOR semantics: a column listed an even number of times
/// cancels out.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisVector {
    cols: Vec<u32>,
}

impl BasisVector {
    pub fn zero() -> Self {
        BasisVector { cols: Vec::new() }
    }

    pub fn unit(col: u32) -> Self {
        BasisVector { cols: vec![col] }
    }

    /// Builds a vector from column indices, cancelling duplicate pairs.
    pub fn from_cols<I: IntoIterator<Item = u32>>(cols: I) -> Self {
        let mut v: Vec<u32> = cols.into_iter().collect();
        v.sort_unstable();
        let mut out = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut run = 1;
            while i + run < v.len() && v[i + run] == v[i] {
                run += 1;
            }
            if run % 2 == 1 {
                out.push(v[i]);
            }
            i += run;
        }
        BasisVector { cols: out }
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    /// Symmetric difference of the column sets.
    pub fn xor(&self, other: &Self) -> Self {
        BasisVector::from_cols(self.cols.iter().chain(other.cols.iter()).copied())
    }

    fn max_col(&self) -> Option<u32> {
        self.cols.last().copied()
    }

    fn to_words(&self, words: usize) -> Vec<u64> {
        let mut row = vec![0u64; words];
        for &c in &self.cols {
            row[(c / 64) as usize] |= 1u64 << (c % 64);
        }
        row
    }
}

/// Incremental GF(2) eliminator: rows are inserted and reduced against the
/// pivots accumulated so far.
struct Eliminator {
    words: usize,
    // pivot bit index -> reduced row owning that pivot
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl Eliminator {
    fn new(dim: usize) -> Self {
        let words = dim.div_ceil(64).max(1);
        Eliminator {
            words,
            pivots: vec![None; words * 64],
            rank: 0,
        }
    }

    fn leading_bit(row: &[u64]) -> Option<usize> {
        for (w, &word) in row.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    fn xor_rows(dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    }

    /// Reduces `row` against the current pivots; returns the residue.
    fn reduce(&self, mut row: Vec<u64>) -> Vec<u64> {
        while let Some(bit) = Self::leading_bit(&row) {
            match &self.pivots[bit] {
                Some(p) => Self::xor_rows(&mut row, p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns true iff it increased the rank.
    fn insert(&mut self, row: Vec<u64>) -> bool {
        let row = self.reduce(row);
        match Self::leading_bit(&row) {
            Some(bit) => {
                self.pivots[bit] = Some(row);
                self.rank += 1;
                true
            }
            None => false,
        }
    }
}

fn dimension_of<'a, I: Iterator<Item = &'a BasisVector>>(rows: I) -> usize {
    rows.filter_map(|r| r.max_col())
        .max()
        .map_or(0, |c| c as usize + 1)
}

/// GF(2) rank of a set of rows. Deterministic; 0 for empty input.
pub fn rank(rows: &[BasisVector]) -> usize {
    let dim = dimension_of(rows.iter());
    let mut elim = Eliminator::new(dim);
    for r in rows {
        elim.insert(r.to_words(elim.words));
    }
    elim.rank
}

/// True iff `v` lies in the GF(2) span of `rows`.
pub fn in_span(v: &BasisVector, rows: &[BasisVector]) -> bool {
    let dim = dimension_of(rows.iter().chain(std::iter::once(v)));
    let mut elim = Eliminator::new(dim);
    for r in rows {
        elim.insert(r.to_words(elim.words));
    }
    let residue = elim.reduce(v.to_words(elim.words));
    Eliminator::leading_bit(&residue).is_none()
}

/// A set of GF(2) rows queried for rank.
#[derive(Debug, Clone, Default)]
pub struct RankQuery {
    rows: Vec<BasisVector>,
}

impl RankQuery {
    pub fn new(rows: Vec<BasisVector>) -> Self {
        RankQuery { rows }
    }

    pub fn push(&mut self, row: BasisVector) {
        self.rows.push(row);
    }

    pub fn extend<I: IntoIterator<Item = BasisVector>>(&mut self, rows: I) {
        self.rows.extend(rows);
    }

    pub fn rows(&self) -> &[BasisVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    pub fn spans(&self, v: &BasisVector) -> bool {
        in_span(v, &self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn xor_self_is_zero() {
        let x = Block::new(vec![0xAB, 0x00, 0x7F]);
        assert!(xor_blocks(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn xor_zero_is_identity() {
        let x = Block::new(vec![1, 2, 3]);
        let z = Block::zeros(3);
        assert_eq!(xor_blocks(&x, &z).unwrap(), x);
    }

    #[test]
    fn xor_is_bytewise() {
        let a = Block::new(vec![0x0F, 0x0F]);
        let b = Block::new(vec![0xF0, 0xF0]);
        assert_eq!(xor_blocks(&a, &b).unwrap().as_bytes(), &[0xFF, 0xFF]);
    }

    #[test]
    fn xor_length_mismatch_errors() {
        let a = Block::new(vec![0; 2]);
        let b = Block::new(vec![0; 3]);
        let err = xor_blocks(&a, &b).unwrap_err();
        assert!(err.to_string().contains("block size mismatch"));
    }

    #[test]
    fn xor_blocks_associative_commutative() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let len = rng.random_range(1..16);
            let blk = |rng: &mut StdRng| Block::new((0..len).map(|_| rng.random()).collect());
            let (a, b, c) = (blk(&mut rng), blk(&mut rng), blk(&mut rng));
            let ab = xor_blocks(&a, &b).unwrap();
            let bc = xor_blocks(&b, &c).unwrap();
            assert_eq!(xor_blocks(&ab, &c).unwrap(), xor_blocks(&a, &bc).unwrap());
            assert_eq!(ab, xor_blocks(&b, &a).unwrap());
        }
    }

    #[test]
    fn rank_empty_is_zero() {
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn rank_duplicate_row_counts_once() {
        let v = BasisVector::from_cols([0, 3, 5]);
        assert_eq!(rank(&[v.clone(), v]), 1);
    }

    #[test]
    fn rank_full_unit_basis() {
        // 18 unit vectors = the full subfile basis for K=3, N=3.
        let rows: Vec<BasisVector> = (0..18).map(BasisVector::unit).collect();
        assert_eq!(rank(&rows), 18);
    }

    #[test]
    fn basis_vector_cancels_duplicate_cols() {
        let v = BasisVector::from_cols([4, 1, 4, 2, 1, 1]);
        assert_eq!(v.cols(), &[1, 2]);
        assert!(BasisVector::from_cols([9, 9]).is_zero());
    }

    #[test]
    fn in_span_trivial_cases() {
        let v = BasisVector::from_cols([2, 7]);
        assert!(in_span(&v, &[v.clone()]));
        assert!(!in_span(&v, &[]));
        assert!(in_span(&BasisVector::zero(), &[]));
    }

    #[test]
    fn members_always_in_span() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let rows = random_rows(&mut rng, 8, 12);
            for v in &rows {
                assert!(in_span(v, &rows));
            }
        }
    }

    fn random_rows(rng: &mut StdRng, max_rows: usize, dim: u32) -> Vec<BasisVector> {
        let n = rng.random_range(0..=max_rows);
        (0..n)
            .map(|_| BasisVector::from_cols((0..dim).filter(|_| rng.random_bool(0.4))))
            .collect()
    }

    #[test]
    fn rank_is_monotone_under_row_addition() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let mut rows = random_rows(&mut rng, 10, 16);
            let before = rank(&rows);
            rows.push(BasisVector::from_cols((0..16).filter(|_| rng.random_bool(0.4))));
            assert!(rank(&rows) >= before);
        }
    }

    #[test]
    fn rank_is_submodular_on_row_sets() {
        // rank(A ∪ B) + rank(A ∩ B) <= rank(A) + rank(B), with ∩/∪ taken on
        // row sets ("common rows" convention).
        use std::collections::BTreeSet;
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let pool = random_rows(&mut rng, 10, 12);
            let pick = |rng: &mut StdRng, pool: &[BasisVector]| -> BTreeSet<BasisVector> {
                pool.iter().filter(|_| rng.random_bool(0.5)).cloned().collect()
            };
            let a = pick(&mut rng, &pool);
            let b = pick(&mut rng, &pool);
            let union: Vec<_> = a.union(&b).cloned().collect();
            let inter: Vec<_> = a.intersection(&b).cloned().collect();
            let av: Vec<_> = a.iter().cloned().collect();
            let bv: Vec<_> = b.iter().cloned().collect();
            assert!(rank(&union) + rank(&inter) <= rank(&av) + rank(&bv));
        }
    }
}
