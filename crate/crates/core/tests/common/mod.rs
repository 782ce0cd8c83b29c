//! Shared test helpers: a deterministic RNG and brute-force enumeration
//! oracles over ZZ/N, independent of the library's linear algebra.

use num_bigint::BigUint;
use proreg::matrix::Matrix;
use proreg::module::ModulePresentation;
use proreg::ring::Ring;

/// Small deterministic linear congruential generator (fixed seed per test).
pub struct Lcg(pub u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        // constants from Knuth's MMIX
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

pub fn zmod(n: u64) -> Ring {
    Ring::integers_mod(BigUint::from(n)).unwrap()
}

/// A module over ZZ/N from integer relation rows.
pub fn module_mod(n: u64, rank: usize, relations: &[Vec<i64>]) -> ModulePresentation {
    let ring = zmod(n);
    let rel = if relations.is_empty() {
        Matrix::zero(0, rank)
    } else {
        Matrix::from_rows(
            relations
                .iter()
                .map(|row| row.iter().map(|&v| ring.int(v)).collect())
                .collect(),
        )
    };
    ModulePresentation::new(ring, rank, rel).unwrap()
}

/// The subgroup of (ZZ/N)^r generated by the given rows, by closure.
pub fn span_mod(n: u64, rank: usize, rows: &[Vec<i64>]) -> Vec<Vec<u64>> {
    let norm = |v: &[i64]| -> Vec<u64> {
        v.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect()
    };
    let mut seen: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
    seen.insert(vec![0; rank]);
    let mut frontier: Vec<Vec<u64>> = vec![vec![0; rank]];
    while let Some(x) = frontier.pop() {
        for row in rows {
            let row = norm(row);
            let y: Vec<u64> = x.iter().zip(&row).map(|(a, b)| (a + b) % n).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// |Ann_M(a^i)| for M = (ZZ/N)^r / span(rows), by exhaustive enumeration:
/// count ambient vectors x with a^i * x in the relation subgroup, divided by
/// the subgroup order.
pub fn ann_cardinality_oracle(n: u64, rank: usize, rows: &[Vec<i64>], a: u64, i: u32) -> u64 {
    let span = span_mod(n, rank, rows);
    let in_span = |v: &[u64]| span.binary_search_by(|s| s.as_slice().cmp(v)).is_ok();
    let mut ai: u64 = 1;
    for _ in 0..i {
        ai = (ai * (a % n)) % n;
    }
    let mut count = 0u64;
    let total = n.pow(rank as u32);
    for code in 0..total {
        let mut x = vec![0u64; rank];
        let mut c = code;
        for slot in x.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        let img: Vec<u64> = x.iter().map(|&v| (v * ai) % n).collect();
        if in_span(&img) {
            count += 1;
        }
    }
    count / span.len() as u64
}
