use hpfold::local_search::{enumerate_1_neighborhood, hill_climb, neighborhood_size};
use hpfold::pheromone::{GraphMode, NodeId, PheromoneMatrix};
use hpfold::{build_block_table, decode, energy, parse_sequence, path_len, Path, N_BLOCKS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
enum Op {
    Evaporate(f64),
    Deposit(Vec<usize>, f64),
    Bounds(f64, f64),
}

fn op(positions: usize) -> impl Strategy<Value = Op> {
    prop_oneof![
        (0.001f64..0.999).prop_map(Op::Evaporate),
        (prop::collection::vec(0..N_BLOCKS, positions), -500.0f64..-0.01).prop_map(|(p, c)| Op::Deposit(p, c)),
        (-500.0f64..-0.01, 0.001f64..0.999).prop_map(|(c, r)| Op::Bounds(c, r)),
    ]
}

fn check(m: &PheromoneMatrix, probes: &[(usize, usize, usize, usize)]) -> Result<(), TestCaseError> {
    prop_assert!(m.t_min() > 0.0 && m.t_min() < m.t_max());
    for &v in m.values() {
        prop_assert!(
            v >= m.t_min() && v <= m.t_max(),
            "{v} outside [{}, {}]",
            m.t_min(),
            m.t_max()
        );
    }
    for &(i, bi, j, bj) in probes {
        if m.is_edge(i, j) {
            let a = m.get(NodeId::new(i, bi), NodeId::new(j, bj)).unwrap();
            let b = m.get(NodeId::new(j, bj), NodeId::new(i, bi)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pheromone_bounds_and_symmetry(
        all_pairs in any::<bool>(),
        ops in prop::collection::vec(op(3), 1..40),
        probes in prop::collection::vec((0..3usize, 0..N_BLOCKS, 0..3usize, 0..N_BLOCKS), 16),
    ) {
        let mode = if all_pairs { GraphMode::AllPairs } else { GraphMode::Adjacent };
        let mut m = PheromoneMatrix::new(3, mode).unwrap();
        let c_opt = -100.0;
        for o in ops {
            match o {
                Op::Evaporate(r) => m.evaporate(r).unwrap(),
                Op::Deposit(p, c) => {
                    let touched = m.deposit(&p, c, c_opt).unwrap();
                    prop_assert_eq!(touched, if all_pairs { 3 } else { 2 });
                }
                Op::Bounds(c, r) => m.update_bounds(c, c_opt, r).unwrap(),
            }
            check(&m, &probes)?;
        }
    }

    #[test]
    fn random_paths_are_valid_and_connected(n in 4usize..80, seed in any::<u64>()) {
        let t = build_block_table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Path::random(&t, n, &mut rng);
        prop_assert_eq!(p.len(), path_len(n));
        prop_assert!(t.is_start(p.choices()[0]));
        prop_assert!(Path::new(p.choices().to_vec(), &t, n).is_ok());
        let c = decode(&p, &t, n).unwrap();
        prop_assert!(c.is_connected());
    }

    #[test]
    fn neighborhood_is_complete(n in 4usize..40, seed in any::<u64>()) {
        let t = build_block_table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Path::random(&t, n, &mut rng);
        let nb = enumerate_1_neighborhood(&p, &t);
        prop_assert_eq!(nb.moves.len(), neighborhood_size(p.len()));
        for mv in &nb.moves {
            let q = p.with_block(mv.position, mv.block);
            prop_assert_eq!(q.hamming(&p), 1);
            prop_assert!(q.is_valid(&t, n));
        }
    }

    #[test]
    fn hill_climb_never_worsens(seed in any::<u64>()) {
        let t = build_block_table();
        let seq = parse_sequence("hphpphhphpphphhpphph").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Path::random(&t, seq.len(), &mut rng);
        let before = energy(&decode(&p, &t, seq.len()).unwrap(), &seq).unwrap().energy;
        let q = hill_climb(&p, &seq, &t, 50);
        let after = energy(&decode(&q, &t, seq.len()).unwrap(), &seq).unwrap().energy;
        prop_assert!(after <= before);
        prop_assert!(q.is_valid(&t, seq.len()));
    }
}

#[test]
fn adjacent_mode_rejects_distant_pairs() {
    let mut m = PheromoneMatrix::new(4, GraphMode::Adjacent).unwrap();
    assert!(m.get(NodeId::new(0, 0), NodeId::new(2, 0)).is_err());
    assert!(m.set(NodeId::new(3, 0), NodeId::new(1, 0), 1.0).is_err());
    assert!(m.get(NodeId::new(2, 0), NodeId::new(3, 5)).is_ok());
    assert!(PheromoneMatrix::new(1, GraphMode::AllPairs).is_err());
}
