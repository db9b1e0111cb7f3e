//! Ordered and unordered set partitions of `{0, .., g-1}`, weight
//! compositions, and block sums over a ground set.
//!
//! Blocks are bitmasks. Unordered partitions come out of a restricted growth
//! string enumerator, so blocks are already sorted by their smallest element.
//! Ordered partitions are generated by permuting the blocks of each unordered
//! one in lexicographic permutation order. Both streams are deterministic and
//! can be split into independent sub-streams by fixing the block that
//! contains element 0 (see [`split_handles`]).

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::rational::{binomial, factorial};
use crate::algebra::{MultiPoly, Rational, Variable};
use crate::error::{Error, Result};

pub type Block = u32;

/// Bitmask blocks cap the ground set size.
pub const MAX_ELEMENTS: usize = 20;

pub fn full_mask(g: usize) -> Block {
    if g == 0 {
        0
    } else {
        Block::MAX >> (32 - g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    g: usize,
    blocks: Vec<Block>,
}

impl Configuration {
    pub fn new(g: usize, blocks: Vec<Block>) -> Result<Self> {
        let c = Configuration { g, blocks };
        if !c.is_valid() {
            return Err(Error::InvalidInstance(format!(
                "blocks {:?} are not an ordered set partition of {g} elements",
                c.blocks
            )));
        }
        Ok(c)
    }

    /// Nonempty, pairwise disjoint, union is everything.
    pub fn is_valid(&self) -> bool {
        if self.g == 0 || self.g > MAX_ELEMENTS {
            return false;
        }
        let mut seen: Block = 0;
        for &b in &self.blocks {
            if b == 0 || b & seen != 0 {
                return false;
            }
            seen |= b;
        }
        seen == full_mask(self.g)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedConfiguration {
    pub config: Configuration,
    pub weights: Vec<usize>,
}

impl WeightedConfiguration {
    pub fn new(config: Configuration, weights: Vec<usize>) -> Result<Self> {
        if weights.len() != config.r() {
            return Err(Error::InvalidInstance(format!("{} weights for {} blocks", weights.len(), config.r())));
        }
        Ok(WeightedConfiguration { config, weights })
    }

    pub fn total_weight(&self) -> usize {
        self.weights.iter().sum()
    }
}

/// The values `c_1 .. c_g`: exact rationals, or indeterminates `c1 .. cg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundSet {
    Numeric(Vec<Rational>),
    Symbolic(Vec<Variable>),
}

impl GroundSet {
    pub fn numeric(values: Vec<Rational>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &values {
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidInstance(format!("ground set value {v} repeated")));
            }
        }
        check_size(values.len())?;
        Ok(GroundSet::Numeric(values))
    }

    pub fn symbolic(g: usize) -> Result<Self> {
        check_size(g)?;
        Ok(GroundSet::Symbolic((1..=g).map(|i| Variable::ordinary(format!("c{i}"))).collect()))
    }

    pub fn g(&self) -> usize {
        match self {
            GroundSet::Numeric(v) => v.len(),
            GroundSet::Symbolic(v) => v.len(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, GroundSet::Symbolic(_))
    }

    pub fn block_sum(&self, block: Block) -> MultiPoly {
        match self {
            GroundSet::Numeric(_) => MultiPoly::constant(self.block_sum_numeric(block).expect("numeric")),
            GroundSet::Symbolic(vars) => members(block).map(|i| MultiPoly::var(&vars[i])).sum(),
        }
    }

    /// `None` in symbolic mode.
    pub fn block_sum_numeric(&self, block: Block) -> Option<Rational> {
        match self {
            GroundSet::Numeric(values) => Some(members(block).map(|i| values[i].clone()).sum()),
            GroundSet::Symbolic(_) => None,
        }
    }

    /// Human-readable echo for records: values as `num/den`, or variable names.
    pub fn describe(&self) -> Vec<String> {
        match self {
            GroundSet::Numeric(v) => v.iter().map(crate::algebra::rational::to_ratio_string).collect(),
            GroundSet::Symbolic(v) => v.iter().map(|x| x.name.clone()).collect(),
        }
    }
}

fn check_size(g: usize) -> Result<()> {
    if g == 0 || g > MAX_ELEMENTS {
        return Err(Error::InvalidInstance(format!("ground set size {g} outside 1..={MAX_ELEMENTS}")));
    }
    Ok(())
}

pub fn members(block: Block) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| block >> i & 1 == 1)
}

pub fn block_sums(config: &Configuration, ground: &GroundSet) -> Result<Vec<MultiPoly>> {
    if config.g() != ground.g() {
        return Err(Error::InvalidInstance(format!(
            "configuration over {} elements, ground set has {}",
            config.g(),
            ground.g()
        )));
    }
    Ok(config.blocks().iter().map(|&b| ground.block_sum(b)).collect())
}

/// Unordered set partitions in canonical order, one per partition.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    g: usize,
    fixed: Option<Block>,
    free: Vec<usize>,
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(g: usize) -> Self {
        assert!((1..=MAX_ELEMENTS).contains(&g), "g must be in 1..={MAX_ELEMENTS}");
        Self::over(g, None, (0..g).collect())
    }

    /// The sub-stream of partitions in which element 0's block is exactly
    /// `first_block`. `first_block` must contain element 0.
    pub fn with_block_of_first(g: usize, first_block: Block) -> Self {
        assert!((1..=MAX_ELEMENTS).contains(&g), "g must be in 1..={MAX_ELEMENTS}");
        assert!(
            first_block & 1 == 1 && first_block & !full_mask(g) == 0,
            "first block must contain element 0 and lie inside the ground set"
        );
        let free = (0..g).filter(|i| first_block >> i & 1 == 0).collect();
        Self::over(g, Some(first_block), free)
    }

    fn over(g: usize, fixed: Option<Block>, free: Vec<usize>) -> Self {
        let n = free.len();
        SetPartitions { g, fixed, free, rgs: vec![0; n], maxes: vec![0; n], done: false }
    }

    fn current(&self) -> Configuration {
        let groups = if self.free.is_empty() { 0 } else { self.maxes[self.free.len() - 1] + 1 };
        let mut blocks: Vec<Block> = Vec::with_capacity(groups + 1);
        blocks.extend(self.fixed);
        let offset = blocks.len();
        blocks.resize(offset + groups, 0);
        for (&e, &k) in self.free.iter().zip(&self.rgs) {
            blocks[offset + k] |= 1 << e;
        }
        Configuration { g: self.g, blocks }
    }

    fn advance(&mut self) -> bool {
        for i in (1..self.rgs.len()).rev() {
            if self.rgs[i] <= self.maxes[i - 1] {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for k in i + 1..self.rgs.len() {
                    self.rgs[k] = 0;
                    self.maxes[k] = self.maxes[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.done {
            return None;
        }
        let c = self.current();
        debug_assert!(c.is_valid(), "invalid partition {c:?}");
        self.done = !self.advance();
        Some(c)
    }
}

/// Ordered set partitions: every permutation of every unordered partition.
#[derive(Clone, Debug)]
pub struct OrderedPartitions {
    inner: SetPartitions,
    base: Option<Configuration>,
    perm: Vec<usize>,
}

impl OrderedPartitions {
    pub fn new(g: usize) -> Self {
        Self::wrap(SetPartitions::new(g))
    }

    pub fn with_block_of_first(g: usize, first_block: Block) -> Self {
        Self::wrap(SetPartitions::with_block_of_first(g, first_block))
    }

    fn wrap(inner: SetPartitions) -> Self {
        OrderedPartitions { inner, base: None, perm: Vec::new() }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl Iterator for OrderedPartitions {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if let Some(base) = &self.base {
            if next_permutation(&mut self.perm) {
                let blocks = self.perm.iter().map(|&i| base.blocks[i]).collect();
                return Some(Configuration { g: base.g, blocks });
            }
        }
        let base = self.inner.next()?;
        self.perm = (0..base.r()).collect();
        let first = base.clone();
        self.base = Some(base);
        Some(first)
    }
}

pub fn iter_ordered_partitions(g: usize) -> OrderedPartitions {
    OrderedPartitions::new(g)
}

/// Canonical representatives with their block count.
pub fn iter_unordered_partitions(g: usize) -> impl Iterator<Item = (Configuration, usize)> {
    SetPartitions::new(g).map(|c| {
        let r = c.r();
        (c, r)
    })
}

/// Every block containing element 0, in increasing mask order. The streams
/// `with_block_of_first(g, h)` over these handles partition the full stream.
pub fn split_handles(g: usize) -> Vec<Block> {
    assert!((1..=MAX_ELEMENTS).contains(&g));
    (0..1u32 << (g - 1)).map(|m| (m << 1) | 1).collect()
}

/// Weak compositions of `w` into `r` parts, lexicographic.
#[derive(Clone, Debug)]
pub struct WeightCompositions {
    current: Vec<usize>,
    done: bool,
}

impl Iterator for WeightCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let v = &mut self.current;
        let last = v.len() - 1;
        match v.iter().rposition(|&x| x > 0) {
            Some(p) if p > 0 => {
                let tail = v[p] - 1;
                v[p] = 0;
                v[p - 1] += 1;
                v[last] = tail;
            }
            _ => self.done = true,
        }
        Some(out)
    }
}

pub fn weight_compositions(w: usize, r: usize) -> WeightCompositions {
    assert!(r >= 1, "at least one part");
    let mut current = vec![0; r];
    current[r - 1] = w;
    WeightCompositions { current, done: false }
}

/// Stirling numbers of the second kind `S(n, k)`, by the standard recurrence.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let stay = row.get(j).map(|x| x * j).unwrap_or_default();
            next[j] = &row[j - 1] + stay;
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

pub fn bell(g: usize) -> BigUint {
    (0..=g).map(|r| stirling2(g, r)).sum()
}

pub fn fubini(g: usize) -> BigUint {
    (0..=g).map(|r| factorial(r as u64) * stirling2(g, r)).sum()
}

/// Number of (ordered configuration, weight vector) pairs for `(g, w)`.
pub fn count_weighted_configs(g: usize, w: usize) -> BigUint {
    (1..=g).map(|r| factorial(r as u64) * stirling2(g, r) * binomial((w + r - 1) as u64, (r - 1) as u64)).sum()
}

/// Number of (unordered partition, weight vector) pairs for `(g, w)`.
pub fn count_collapsed_items(g: usize, w: usize) -> BigUint {
    (1..=g).map(|r| stirling2(g, r) * binomial((w + r - 1) as u64, (r - 1) as u64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn g2_ordered_by_hand() {
        let all: Vec<Vec<Block>> = iter_ordered_partitions(2).map(|c| c.blocks().to_vec()).collect();
        assert_eq!(all.len(), 3);
        for expected in [vec![0b11], vec![0b01, 0b10], vec![0b10, 0b01]] {
            assert!(all.contains(&expected), "{expected:?}");
        }
    }

    #[test]
    fn ordered_counts_are_fubini() {
        assert_eq!(iter_ordered_partitions(3).count(), 13);
        assert_eq!(iter_ordered_partitions(4).count(), 75);
        for g in 1..=6 {
            assert_eq!(BigUint::from(iter_ordered_partitions(g).count()), fubini(g));
        }
    }

    #[test]
    fn unordered_counts_are_bell() {
        let g3: Vec<usize> = iter_unordered_partitions(3).map(|(_, r)| r).collect();
        assert_eq!(g3.len(), 5);
        assert_eq!(g3.iter().filter(|&&r| r == 1).count(), 1);
        assert_eq!(g3.iter().filter(|&&r| r == 2).count(), 3);
        assert_eq!(g3.iter().filter(|&&r| r == 3).count(), 1);
        assert_eq!(iter_unordered_partitions(4).count(), 15);
        assert_eq!(iter_unordered_partitions(1).count(), 1);
    }

    #[test]
    fn canonical_blocks_sorted_by_smallest_element() {
        for (c, _) in iter_unordered_partitions(6) {
            let mins: Vec<u32> = c.blocks().iter().map(|b| b.trailing_zeros()).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]), "{c:?}");
        }
    }

    #[test]
    fn compositions() {
        assert_eq!(weight_compositions(0, 3).collect::<Vec<_>>(), vec![vec![0, 0, 0]]);
        assert_eq!(weight_compositions(2, 2).collect::<Vec<_>>(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(weight_compositions(1, 3).count(), 3);
        assert_eq!(weight_compositions(4, 1).collect::<Vec<_>>(), vec![vec![4]]);
        for w in 0..6 {
            for r in 1..6 {
                let all: Vec<_> = weight_compositions(w, r).collect();
                assert_eq!(BigUint::from(all.len()), binomial((w + r - 1) as u64, (r - 1) as u64));
                assert!(all.iter().all(|v| v.iter().sum::<usize>() == w));
                assert!(all.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn block_sum_examples() {
        let ground = GroundSet::numeric(vec![int(2), int(3), int(4)]).unwrap();
        let c = Configuration::new(3, vec![0b001, 0b110]).unwrap();
        assert_eq!(block_sums(&c, &ground).unwrap(), vec![MultiPoly::constant(int(2)), MultiPoly::constant(int(7))]);
        let single = Configuration::new(3, vec![0b111]).unwrap();
        assert_eq!(block_sums(&single, &ground).unwrap(), vec![MultiPoly::constant(int(9))]);

        let sym = GroundSet::symbolic(2).unwrap();
        let c = Configuration::new(2, vec![0b11]).unwrap();
        let c1 = MultiPoly::var(&Variable::ordinary("c1"));
        let c2 = MultiPoly::var(&Variable::ordinary("c2"));
        assert_eq!(block_sums(&c, &sym).unwrap(), vec![&c1 + &c2]);
        assert!(block_sums(&c, &ground).is_err());
    }

    #[test]
    fn weighted_counts() {
        assert_eq!(count_weighted_configs(3, 0), BigUint::from(13u32));
        assert_eq!(count_weighted_configs(3, 1), BigUint::from(31u32));
        assert_eq!(count_weighted_configs(2, 0), BigUint::from(3u32));
    }

    #[test]
    fn invalid_configurations_rejected() {
        assert!(Configuration::new(3, vec![0b011, 0b011]).is_err());
        assert!(Configuration::new(3, vec![0b011]).is_err());
        assert!(Configuration::new(3, vec![0b011, 0, 0b100]).is_err());
        assert!(GroundSet::numeric(vec![int(1), int(1)]).is_err());
        let c = Configuration::new(2, vec![0b11]).unwrap();
        assert!(WeightedConfiguration::new(c, vec![0, 0]).is_err());
    }

    #[test]
    fn split_handles_partition_the_stream() {
        for g in 1..=6 {
            let whole: Vec<Configuration> = SetPartitions::new(g).collect();
            let mut pieces: Vec<Configuration> =
                split_handles(g).into_iter().flat_map(|h| SetPartitions::with_block_of_first(g, h)).collect();
            assert_eq!(pieces.len(), whole.len());
            let mut whole_sorted = whole.clone();
            whole_sorted.sort_by(|a, b| a.blocks().cmp(b.blocks()));
            pieces.sort_by(|a, b| a.blocks().cmp(b.blocks()));
            assert_eq!(pieces, whole_sorted);

            let ordered: usize =
                split_handles(g).into_iter().map(|h| OrderedPartitions::with_block_of_first(g, h).count()).sum();
            assert_eq!(BigUint::from(ordered), fubini(g));
        }
    }
}
