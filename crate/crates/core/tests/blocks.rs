use std::collections::{BTreeMap, HashSet};

use hpfold::bench::BENCHMARKS;
use hpfold::blocks::{Block, START_BLOCKS};
use hpfold::{build_block_table, Direction, Symmetry};
use sha2::{Digest, Sha256};

fn orbit(b: &Block, syms: &[Symmetry]) -> Vec<Block> {
    let o: HashSet<Block> = syms.iter().map(|s| b.transformed(s)).collect();
    o.into_iter().collect()
}

#[test]
fn table_has_150_distinct_self_avoiding_blocks() {
    let t = build_block_table();
    assert_eq!(t.len(), 150);
    let set: HashSet<_> = t.blocks().iter().collect();
    assert_eq!(set.len(), 150);
    for b in t.blocks() {
        assert!(b.is_non_reversing());
        assert!(b.is_self_avoiding());
        let pts = b.points();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(pts[i], pts[j]);
            }
        }
    }
    // Every non-reversing triple is present.
    let mut count = 0;
    for a in Direction::ALL {
        for b in Direction::ALL {
            for c in Direction::ALL {
                let blk = Block::new(a, b, c);
                if blk.is_non_reversing() {
                    count += 1;
                    assert!(t.id_of(&blk).is_some());
                }
            }
        }
    }
    assert_eq!(count, 150);
}

#[test]
fn lexicographic_order() {
    let t = build_block_table();
    let key = |b: &Block| b.steps.map(Direction::index);
    assert!(t.blocks().windows(2).all(|w| key(&w[0]) < key(&w[1])));
    use Direction::*;
    assert_eq!(t.block(0), &Block::new(PosX, PosX, PosX));
    assert!(t.id_of(&Block::new(PosX, NegX, PosX)).is_none());
}

#[test]
fn orbit_decomposition() {
    let t = build_block_table();
    let syms = Symmetry::all();
    assert_eq!(syms.len(), 48);
    let mut seen = HashSet::new();
    let mut sizes = Vec::new();
    for b in t.blocks() {
        if seen.contains(b) {
            continue;
        }
        let o = orbit(b, &syms);
        for x in &o {
            assert!(t.id_of(x).is_some(), "orbit leaves the table");
            seen.insert(*x);
        }
        sizes.push(o.len());
    }
    sizes.sort_unstable();
    assert_eq!(sizes, vec![6, 24, 24, 24, 24, 48]);
    assert_eq!(sizes.iter().sum::<usize>(), 150);
}

#[test]
fn start_blocks_form_a_transversal() {
    let t = build_block_table();
    let syms = Symmetry::all();
    let starts: Vec<Block> = START_BLOCKS.iter().map(|s| Block::new(s[0], s[1], s[2])).collect();
    assert_eq!(t.start_ids().len(), 6);
    assert!(t.start_ids().windows(2).all(|w| w[0] < w[1]));
    for &id in t.start_ids() {
        assert!(starts.contains(t.block(id)));
    }
    let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
    for b in t.blocks() {
        let o = orbit(b, &syms);
        let reps: Vec<_> = t.start_ids().iter().filter(|&&s| o.contains(t.block(s))).collect();
        assert_eq!(reps.len(), 1, "block {b:?} matches {} start blocks", reps.len());
        assert_eq!(t.start_ids()[t.class_of(t.id_of(b).unwrap())], *reps[0]);
        *hits.entry(*reps[0]).or_default() += 1;
    }
    assert_eq!(hits.len(), 6);
}

#[test]
fn benchmark_sequences_match_manifest() {
    let manifest = include_str!("../data/benchmarks.sha256");
    let entries: Vec<(&str, &str)> = manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(entries.len(), BENCHMARKS.len());
    for ((hash, id), b) in entries.iter().zip(&BENCHMARKS) {
        assert_eq!(*id, b.id);
        let digest = Sha256::digest(b.sequence.as_bytes());
        let hex: String = digest.iter().map(|x| format!("{x:02x}")).collect();
        assert_eq!(&hex, hash, "sequence {id} drifted");
        assert_eq!(b.parse().len(), 48);
    }
}
