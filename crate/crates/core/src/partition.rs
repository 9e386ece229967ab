//! Partitions, Young diagrams, and the cellwise weight products that drive
//! every pairing and normalization in the fixed-point calculus.
//!
//! Diagrams use English notation: row 1 is the longest row, cells are 1-based
//! `(row, col)` pairs. The canonical linear order on partitions of a fixed
//! size is reverse-lexicographic (largest first); it refines the dominance
//! order, which is what the triangular Jack orthogonalization needs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A partition: weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A cell of a Young diagram, 1-based `(row, col)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// The cell reflected across the main diagonal.
    pub fn transpose(self) -> Self {
        Cell {
            row: self.col,
            col: self.row,
        }
    }
}

impl Partition {
    /// Validates that the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Sorts the given part values (zeros are dropped).
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The partitioned integer `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts `ℓ(λ)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of the part value `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// Map part value -> multiplicity, ascending part values.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// The conjugate partition (reflected diagram).
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=cols)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect();
        Partition { parts }
    }

    /// The partition with one copy of `value` added as a new part.
    pub fn with_part(&self, value: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts.push(value);
        Partition::from_unsorted(parts)
    }

    /// The partition with one copy of `value` removed, if present.
    pub fn without_part(&self, value: usize) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == value)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.row <= self.parts.len() && c.col <= self.parts[c.row - 1]
    }

    /// All cells of the diagram, row by row.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |c| Cell::new(r + 1, c)))
    }

    /// Number of cells strictly to the right of `c` in its row.
    pub fn arm(&self, c: Cell) -> Result<usize> {
        if !self.contains_cell(c) {
            return Err(Error::CellOutOfRange {
                row: c.row,
                col: c.col,
            });
        }
        Ok(self.parts[c.row - 1] - c.col)
    }

    /// Number of cells strictly below `c` in its column.
    pub fn leg(&self, c: Cell) -> Result<usize> {
        if !self.contains_cell(c) {
            return Err(Error::CellOutOfRange {
                row: c.row,
                col: c.col,
            });
        }
        Ok(self.parts[c.row..].iter().filter(|&&p| p >= c.col).count())
    }

    /// Cellwise product `∏ (α (leg+1) + β arm)`, the first tangent-weight
    /// factor at a fixed point with chart weights `(α, β)`.
    pub fn lower_hook_product(&self, alpha: &Rat, beta: &Rat) -> Rat {
        self.cells()
            .map(|c| {
                let a = self.arm(c).expect("own cell");
                let l = self.leg(c).expect("own cell");
                alpha * Rat::from_integer(BigInt::from(l as u64 + 1))
                    + beta * Rat::from_integer(BigInt::from(a as u64))
            })
            .product()
    }

    /// Cellwise product `∏ (α leg + β (arm+1))`, the second tangent-weight
    /// factor. At `α = β = 1` both products equal the hook-length product.
    pub fn upper_hook_product(&self, alpha: &Rat, beta: &Rat) -> Rat {
        self.cells()
            .map(|c| {
                let a = self.arm(c).expect("own cell");
                let l = self.leg(c).expect("own cell");
                alpha * Rat::from_integer(BigInt::from(l as u64))
                    + beta * Rat::from_integer(BigInt::from(a as u64 + 1))
            })
            .product()
    }

    /// Order of the centralizer of a permutation of cycle type `λ`:
    /// `∏ i^{m_i} m_i!`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        for (i, m) in self.multiplicities() {
            for _ in 0..m {
                z *= BigInt::from(i as u64);
            }
            for k in 2..=m {
                z *= BigInt::from(k as u64);
            }
        }
        z
    }

    /// Dominance comparison: true iff every prefix sum of `self` is at most
    /// the corresponding prefix sum of `other`. Requires equal sizes.
    pub fn is_dominated_by(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::Mismatch(format!(
                "dominance needs equal sizes, got {} and {}",
                self.size(),
                other.size()
            )));
        }
        let rows = self.parts.len().max(other.parts.len());
        let (mut sum_self, mut sum_other) = (0usize, 0usize);
        for i in 0..rows {
            sum_self += self.parts.get(i).copied().unwrap_or(0);
            sum_other += other.parts.get(i).copied().unwrap_or(0);
            if sum_self > sum_other {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Ord for Partition {
    /// Size ascending, then reverse-lexicographic: among partitions of the
    /// same size, lexicographically larger part sequences come first. This is
    /// the order produced by [`partitions_of`].
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ordered pair of partitions indexing a fixed point of the Hilbert scheme
/// of the line-bundle surface: one partition per chart.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bipartition {
    pub first: Partition,
    pub second: Partition,
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        Bipartition { first, second }
    }

    pub fn total(&self) -> usize {
        self.first.size() + self.second.size()
    }
}

impl Ord for Bipartition {
    /// Total ascending, then `|first|` descending, then each factor in the
    /// canonical partition order. Matches [`bipartitions_of`].
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.first.size().cmp(&self.first.size()))
            .then_with(|| self.first.cmp(&other.first))
            .then_with(|| self.second.cmp(&other.second))
    }
}

impl PartialOrd for Bipartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.first, self.second)
    }
}

/// All partitions of `n` in reverse-lexicographic order (largest part
/// sequence first). This is a linear extension of dominance: whenever
/// `μ < λ` strictly in dominance, `μ` appears after `λ`.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn fill(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for next in (1..=remaining.min(max)).rev() {
            prefix.push(next);
            fill(remaining - next, next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n, n, &mut Vec::new(), &mut out);
    out
}

/// All bipartitions of total `n`, ordered by `|first|` descending and then
/// reverse-lexicographically within each factor.
pub fn bipartitions_of(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        for first in partitions_of(k) {
            for second in partitions_of(n - k) {
                out.push(Bipartition::new(first.clone(), second));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert!(Partition::new(vec![]).is_ok());
    }

    #[test]
    fn arm_examples() {
        assert_eq!(pt(&[1]).arm(Cell::new(1, 1)).unwrap(), 0);
        assert_eq!(pt(&[2]).arm(Cell::new(1, 1)).unwrap(), 1);
        assert_eq!(pt(&[3, 1]).arm(Cell::new(1, 2)).unwrap(), 1);
        assert!(pt(&[2]).arm(Cell::new(2, 1)).is_err());
    }

    #[test]
    fn leg_examples() {
        assert_eq!(pt(&[1]).leg(Cell::new(1, 1)).unwrap(), 0);
        assert_eq!(pt(&[1, 1]).leg(Cell::new(1, 1)).unwrap(), 1);
        assert_eq!(pt(&[3, 1]).leg(Cell::new(1, 1)).unwrap(), 1);
        assert!(pt(&[1]).leg(Cell::new(1, 2)).is_err());
    }

    #[test]
    fn lower_hook_product_examples() {
        let (a, b) = (ratio(2, 1), ratio(3, 1));
        assert_eq!(pt(&[1]).lower_hook_product(&a, &b), a);
        // two cells in a row: (α+β)·α
        assert_eq!(pt(&[2]).lower_hook_product(&a, &b), &a * (&a + &b));
        // two cells in a column: 2α·α
        assert_eq!(pt(&[1, 1]).lower_hook_product(&a, &b), rat(2) * &a * &a);
    }

    #[test]
    fn upper_hook_product_examples() {
        let (a, b) = (ratio(2, 1), ratio(3, 1));
        assert_eq!(pt(&[1]).upper_hook_product(&a, &b), b);
        assert_eq!(pt(&[2]).upper_hook_product(&a, &b), rat(2) * &b * &b);
        assert_eq!(pt(&[1, 1]).upper_hook_product(&a, &b), &b * (&a + &b));
    }

    #[test]
    fn centralizer_orders() {
        // cycle-type counts in small symmetric groups
        assert_eq!(pt(&[1, 1]).centralizer_order(), BigInt::from(2));
        assert_eq!(pt(&[2, 1]).centralizer_order(), BigInt::from(2));
        assert_eq!(pt(&[3]).centralizer_order(), BigInt::from(3));
        assert_eq!(pt(&[]).centralizer_order(), BigInt::from(1));
    }

    #[test]
    fn dominance_examples() {
        assert!(pt(&[1, 1, 1]).is_dominated_by(&pt(&[3])).unwrap());
        assert!(pt(&[2, 2]).is_dominated_by(&pt(&[3, 1])).unwrap());
        // incomparable pair
        assert!(!pt(&[3, 1, 1, 1]).is_dominated_by(&pt(&[2, 2, 2])).unwrap());
        assert!(!pt(&[2, 2, 2]).is_dominated_by(&pt(&[3, 1, 1, 1])).unwrap());
        assert!(pt(&[1]).is_dominated_by(&pt(&[1, 1])).is_err());
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions_of(0), vec![pt(&[])]);
        assert_eq!(
            partitions_of(3),
            vec![pt(&[3]), pt(&[2, 1]), pt(&[1, 1, 1])]
        );
        assert_eq!(partitions_of(5).len(), 7);
    }

    #[test]
    fn bipartition_enumeration() {
        assert_eq!(bipartitions_of(0).len(), 1);
        let one = bipartitions_of(1);
        assert_eq!(
            one,
            vec![
                Bipartition::new(pt(&[1]), pt(&[])),
                Bipartition::new(pt(&[]), pt(&[1])),
            ]
        );
        assert_eq!(bipartitions_of(4).len(), 20);
    }

    #[test]
    fn enumeration_matches_ord() {
        for n in 0..=7 {
            let list = partitions_of(n);
            assert!(list.windows(2).all(|w| w[0] < w[1]));
            let bi = bipartitions_of(n);
            assert!(bi.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn reverse_lex_refines_dominance() {
        for n in 0..=8 {
            let list = partitions_of(n);
            for (i, la) in list.iter().enumerate() {
                for (j, mu) in list.iter().enumerate() {
                    if i != j && mu.is_dominated_by(la).unwrap() {
                        assert!(j > i, "{mu} should follow {la}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_involution_and_arm_leg_swap() {
        for n in 0..=8 {
            for la in partitions_of(n) {
                let conj = la.conjugate();
                assert_eq!(conj.conjugate(), la);
                assert_eq!(conj.size(), la.size());
                for c in la.cells() {
                    assert_eq!(
                        la.arm(c).unwrap(),
                        conj.leg(c.transpose()).unwrap(),
                        "λ={la} cell {c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn hook_products_swap_under_conjugation() {
        let params = [
            (ratio(1, 1), ratio(1, 1)),
            (ratio(1, 2), ratio(3, 1)),
            (ratio(2, 3), ratio(5, 7)),
            (ratio(-1, 1), ratio(-2, 1)),
            (ratio(4, 1), ratio(1, 3)),
        ];
        for n in 0..=8 {
            for la in partitions_of(n) {
                let conj = la.conjugate();
                for (a, b) in &params {
                    assert_eq!(
                        la.lower_hook_product(a, b),
                        conj.upper_hook_product(b, a),
                        "λ={la}"
                    );
                }
            }
        }
    }

    #[test]
    fn hook_products_flip_sign_with_parameters() {
        let (a, b) = (ratio(3, 2), ratio(5, 1));
        for n in 0..=6 {
            for la in partitions_of(n) {
                let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
                assert_eq!(
                    la.lower_hook_product(&(-&a), &(-&b)),
                    &sign * la.lower_hook_product(&a, &b)
                );
                assert_eq!(
                    la.upper_hook_product(&(-&a), &(-&b)),
                    &sign * la.upper_hook_product(&a, &b)
                );
            }
        }
    }

    #[test]
    fn hook_products_at_one_one_are_hook_lengths() {
        for n in 0..=8 {
            for la in partitions_of(n) {
                let hooks: Rat = la
                    .cells()
                    .map(|c| rat((la.arm(c).unwrap() + la.leg(c).unwrap() + 1) as i64))
                    .product();
                assert_eq!(la.lower_hook_product(&rat(1), &rat(1)), hooks);
                assert_eq!(la.upper_hook_product(&rat(1), &rat(1)), hooks);
            }
        }
    }

    #[test]
    fn cell_count_is_size() {
        for n in 0..=8 {
            for la in partitions_of(n) {
                assert_eq!(la.cells().count(), n);
                assert_eq!(la.size(), n);
                let m = la.multiplicities();
                assert_eq!(m.iter().map(|(i, c)| i * c).sum::<usize>(), n);
                assert_eq!(m.values().sum::<usize>(), la.length());
            }
        }
    }

    #[test]
    fn partition_counts_match_pentagonal_recurrence() {
        // p(i) = Σ_k (-1)^{k+1} [p(i - k(3k-1)/2) + p(i - k(3k+1)/2)]
        let top = 30usize;
        let mut p = vec![0i64; top + 1];
        p[0] = 1;
        for i in 1..=top {
            let mut total = 0i64;
            let mut k = 1usize;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > i {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                total += sign * p[i - g1];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= i {
                    total += sign * p[i - g2];
                }
                k += 1;
            }
            p[i] = total;
        }
        for n in 0..=top {
            assert_eq!(partitions_of(n).len() as i64, p[n], "p({n})");
        }
    }

    #[test]
    fn display_form() {
        assert_eq!(pt(&[3, 1, 1]).to_string(), "[3,1,1]");
        assert_eq!(pt(&[]).to_string(), "[]");
        assert_eq!(Bipartition::new(pt(&[1]), pt(&[])).to_string(), "[[1],[]]");
    }
}
