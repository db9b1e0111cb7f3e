use std::collections::BTreeSet;

use num_bigint::BigUint;

use stirling_identities::configurations::{
    bell, count_weighted_configs, full_mask, iter_ordered_partitions, iter_unordered_partitions, split_handles,
    weight_compositions, Block, OrderedPartitions, SetPartitions,
};

/// Brute force: every function `{0..g} -> {0..g}` whose image is `{0..r}`,
/// read as an ordered partition.
fn brute_ordered(g: usize) -> BTreeSet<Vec<Block>> {
    let mut out = BTreeSet::new();
    let total = g.pow(g as u32);
    for code in 0..total {
        let mut labels = Vec::with_capacity(g);
        let mut c = code;
        for _ in 0..g {
            labels.push(c % g);
            c /= g;
        }
        let r = labels.iter().max().unwrap() + 1;
        let mut blocks = vec![0 as Block; r];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l] |= 1 << i;
        }
        if blocks.iter().all(|&b| b != 0) {
            out.insert(blocks);
        }
    }
    out
}

#[test]
fn ordered_partitions_match_brute_force() {
    for g in 1..=6 {
        let listed: Vec<Vec<Block>> = iter_ordered_partitions(g).map(|c| c.blocks().to_vec()).collect();
        let set: BTreeSet<_> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len(), "duplicates at g={g}");
        assert_eq!(set, brute_ordered(g), "g={g}");
    }
}

#[test]
fn unordered_partitions_count_bell_and_are_canonical() {
    for g in 1..=8 {
        let mut n = 0u64;
        for (c, r) in iter_unordered_partitions(g) {
            assert_eq!(c.r(), r);
            let lows: Vec<u32> = c.blocks().iter().map(|b| b.trailing_zeros()).collect();
            assert!(lows.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(c.blocks().iter().fold(0, |a, b| a | b), full_mask(g));
            n += 1;
        }
        assert_eq!(BigUint::from(n), bell(g));
    }
}

#[test]
fn split_handles_partition_the_streams() {
    for g in 1..=7 {
        let handles = split_handles(g);
        assert_eq!(handles.len(), 1 << (g - 1));
        let mut unordered = 0;
        let mut ordered = 0;
        for &h in &handles {
            assert_eq!(h & 1, 1);
            unordered += SetPartitions::with_block_of_first(g, h).count();
            ordered += OrderedPartitions::with_block_of_first(g, h).count();
        }
        assert_eq!(unordered, SetPartitions::new(g).count());
        assert_eq!(ordered, OrderedPartitions::new(g).count());
    }
}

#[test]
fn weighted_totals_match_counts() {
    for g in 1..=6 {
        for w in 0..=4 {
            let mut total = 0u64;
            for c in iter_ordered_partitions(g) {
                let comps: Vec<Vec<usize>> = weight_compositions(w, c.r()).collect();
                for v in &comps {
                    assert_eq!(v.iter().sum::<usize>(), w);
                }
                let distinct: BTreeSet<_> = comps.iter().collect();
                assert_eq!(distinct.len(), comps.len());
                total += comps.len() as u64;
            }
            assert_eq!(BigUint::from(total), count_weighted_configs(g, w), "g={g} w={w}");
        }
    }
}

#[test]
fn compositions_start_with_all_weight_last() {
    let first = weight_compositions(3, 3).next().unwrap();
    assert_eq!(first, vec![0, 0, 3]);
    assert_eq!(weight_compositions(3, 3).count(), 10);
    assert_eq!(weight_compositions(0, 4).count(), 1);
}
