use num_bigint::BigInt;
use num_traits::Zero;

use crate::problem::Direction;

/// Packed GF(2) row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(cols: usize) -> Self {
        BitRow {
            words: vec![0; cols.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut r = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                r.set(i);
            }
        }
        r
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Incremental echelon basis keyed by each vector's lowest set bit.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    pivots: Vec<(usize, BitRow)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` in place; returns the pivot if it stays nonzero.
    fn reduce(&self, row: &mut BitRow) -> Option<usize> {
        loop {
            let low = row.lowest()?;
            match self.pivots.binary_search_by_key(&low, |(p, _)| *p) {
                Ok(i) => row.xor_with(&self.pivots[i].1),
                Err(_) => return Some(low),
            }
        }
    }

    /// Adds `row` if independent of the basis so far.
    pub fn insert(&mut self, row: &BitRow) -> bool {
        let mut r = row.clone();
        match self.reduce(&mut r) {
            Some(p) => {
                let at = self.pivots.partition_point(|(q, _)| *q < p);
                self.pivots.insert(at, (p, r));
                true
            }
            None => false,
        }
    }

    pub fn contains_span(&self, row: &BitRow) -> bool {
        let mut r = row.clone();
        self.reduce(&mut r).is_none()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns on which the restriction map is injective over the span.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|(p, _)| *p).collect()
    }
}

/// Binary matrix whose rows carry a weight and a caller-chosen tag.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitRow>,
    weights: Vec<i64>,
    tags: Vec<usize>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
            weights: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = BitMatrix::new(cols);
        for (i, r) in rows.iter().enumerate() {
            let bits: Vec<bool> = r.iter().map(|&b| b != 0).collect();
            m.push(BitRow::from_bools(&bits), 0, i);
        }
        m
    }

    pub fn push(&mut self, row: BitRow, weight: i64, tag: usize) {
        assert_eq!(row.words.len(), self.cols.div_ceil(64), "row width mismatch");
        self.rows.push(row);
        self.weights.push(weight);
        self.tags.push(tag);
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn tag(&self, i: usize) -> usize {
        self.tags[i]
    }

    /// Greedy optimum-weight basis of the row space. Ties keep insertion
    /// order. Returns tags in insertion order.
    pub fn max_weight_row_basis(&self, direction: Direction) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        match direction {
            Direction::Max => order.sort_by(|&a, &b| self.weights[b].cmp(&self.weights[a])),
            Direction::Min => order.sort_by(|&a, &b| self.weights[a].cmp(&self.weights[b])),
        }
        let mut basis = EchelonBasis::new();
        let mut keep = vec![false; self.rows.len()];
        for i in order {
            if basis.rank() == self.cols {
                break;
            }
            if basis.insert(&self.rows[i]) {
                keep[i] = true;
            }
        }
        (0..self.rows.len())
            .filter(|&i| keep[i])
            .map(|i| self.tags[i])
            .collect()
    }
}

pub fn rank_gf2(m: &BitMatrix) -> usize {
    let mut basis = EchelonBasis::new();
    for r in &m.rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Rank over the rationals by fraction-free elimination. Runs in `i128`
/// and restarts with big integers on overflow.
pub fn rank_rational(m: &[Vec<i64>]) -> usize {
    match bareiss_i128(m) {
        Some(r) => r,
        None => bareiss_big(m),
    }
}

fn bareiss_i128(m: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = a[rank][c]
                    .checked_mul(a[r][k])?
                    .checked_sub(a[r][c].checked_mul(a[rank][k])?)?;
                a[r][k] = v / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                a[r][k] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}
