//! Shared oracles and generators for the integration suites. Everything here
//! is deliberately independent of the library's conversion machinery: Kostka
//! numbers come from direct tableau enumeration, and random payloads are
//! built from scratch.

#![allow(dead_code)]

use hilbjack::partition::Partition;
use hilbjack::rational::Rat;
use rand::rngs::StdRng;
use rand::Rng;

/// Counts semistandard Young tableaux of the given shape and content: rows
/// weakly increase, columns strictly increase, and value `i` appears
/// `content[i-1]` times.
pub fn kostka_number(shape: &Partition, content: &Partition) -> u64 {
    if shape.size() != content.size() {
        return 0;
    }
    let rows: Vec<usize> = shape.parts().to_vec();
    let mut remaining: Vec<usize> = content.parts().to_vec();
    let mut filling: Vec<Vec<usize>> = rows.iter().map(|&len| vec![0; len]).collect();
    fn fill(
        rows: &[usize],
        remaining: &mut Vec<usize>,
        filling: &mut Vec<Vec<usize>>,
        pos: usize,
    ) -> u64 {
        let total: usize = rows.iter().sum();
        if pos == total {
            return 1;
        }
        // row-major position -> (row, col)
        let (mut r, mut p) = (0usize, pos);
        while p >= rows[r] {
            p -= rows[r];
            r += 1;
        }
        let c = p;
        let min_row = if c > 0 { filling[r][c - 1] } else { 1 };
        let min_col = if r > 0 { filling[r - 1][c] + 1 } else { 1 };
        let lo = min_row.max(min_col);
        let mut count = 0;
        for v in lo..=remaining.len() {
            if remaining[v - 1] == 0 {
                continue;
            }
            remaining[v - 1] -= 1;
            filling[r][c] = v;
            count += fill(rows, remaining, filling, pos + 1);
            remaining[v - 1] += 1;
        }
        filling[r][c] = 0;
        count
    }
    fill(&rows, &mut remaining, &mut filling, 0)
}

/// Uniform-ish random partition with size up to `max_size`.
pub fn random_partition(rng: &mut StdRng, max_size: usize) -> Partition {
    let n = rng.random_range(0..=max_size);
    random_partition_of(rng, n)
}

/// Random partition of exactly `n`.
pub fn random_partition_of(rng: &mut StdRng, n: usize) -> Partition {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.random_range(1..=left);
        parts.push(p);
        left -= p;
    }
    Partition::from_unsorted(parts)
}

/// Random nonzero-denominator rational with small entries.
pub fn random_rat(rng: &mut StdRng) -> Rat {
    let num = rng.random_range(-20i64..=20);
    let den = rng.random_range(1i64..=12);
    hilbjack::rational::ratio(num, den)
}

/// Random positive rational (for Jack and inner-product parameters).
pub fn random_positive_rat(rng: &mut StdRng) -> Rat {
    let num = rng.random_range(1i64..=9);
    let den = rng.random_range(1i64..=9);
    hilbjack::rational::ratio(num, den)
}
