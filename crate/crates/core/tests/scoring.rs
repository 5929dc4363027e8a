use std::collections::HashSet;

use hpfold::lattice::Point3;
use hpfold::path::decode_into;
use hpfold::scoring::{combine, contact_upper_bound};
use hpfold::{build_block_table, decode, energy, parse_sequence, Conformation, Path, Symmetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{naive, random_seq};

#[test]
fn matches_naive_reference() {
    let t = build_block_table();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut overlapping = 0;
    for k in 0..1000 {
        let n = [6, 9, 12][k % 3];
        let seq = random_seq(n, &mut rng);
        let path = Path::random(&t, n, &mut rng);
        let conf = decode(&path, &t, n).unwrap();
        let s = energy(&conf, &seq).unwrap();
        let (hh, ov, hp, hd, thh, e) = naive(conf.coords(), &seq);
        assert_eq!((s.hh, s.ov, s.hp, s.hd, s.thh), (hh, ov, hp, hd, thh), "instance {k}");
        assert_eq!(s.energy, e);
        assert!((s.energy - combine(s.hh, s.ov, s.hp, s.hd, s.thh)).abs() < 1e-12);
        let distinct: HashSet<_> = conf.coords().iter().collect();
        assert_eq!(s.ov == 0, distinct.len() == n);
        overlapping += usize::from(s.ov > 0);
    }
    // The sample must exercise both feasible and overlapping walks.
    assert!(overlapping > 50 && overlapping < 950, "{overlapping}");
}

#[test]
fn invariant_under_symmetry_and_translation() {
    let t = build_block_table();
    let syms = Symmetry::all();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(6..=15);
        let seq = random_seq(n, &mut rng);
        let conf = decode(&Path::random(&t, n, &mut rng), &t, n).unwrap();
        let base = energy(&conf, &seq).unwrap();
        for s in &syms {
            assert_eq!(energy(&conf.map_points(|p| s.apply(p)), &seq).unwrap(), base);
        }
        let shift = Point3::new(rng.gen_range(-50..50), rng.gen_range(-50..50), rng.gen_range(-50..50));
        assert_eq!(energy(&conf.map_points(|p| p + shift), &seq).unwrap(), base);
    }
}

#[test]
fn decode_is_connected_and_anchored() {
    let t = build_block_table();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut buf = Vec::new();
    for _ in 0..500 {
        let n = rng.gen_range(4..=60);
        let path = Path::random(&t, n, &mut rng);
        let a = decode(&path, &t, n).unwrap();
        let b = decode(&path, &t, n).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), n);
        assert_eq!(a.coords()[0], Point3::ORIGIN);
        assert!(a.is_connected());
        decode_into(path.choices(), &t, n, &mut buf);
        assert_eq!(buf.as_slice(), a.coords());
    }
}

#[test]
fn energy_is_finite_for_long_chains() {
    let t = build_block_table();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let seq = random_seq(200, &mut rng);
    for _ in 0..20 {
        let s = energy(&decode(&Path::random(&t, 200, &mut rng), &t, 200).unwrap(), &seq).unwrap();
        assert!(s.energy.is_finite() && s.energy < 0.0);
    }
    let h = parse_sequence(&"h".repeat(200)).unwrap();
    assert_eq!(contact_upper_bound(&h), 4 * 100 + 2);
    let straight = Conformation::from_coords((0..200).map(|i| Point3::new(i, 0, 0)).collect());
    assert!(energy(&straight, &h).unwrap().energy.is_finite());
}
