use algodyn::formats::*;
use algodyn_core::instances::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ksat_round_trip(n in 3usize..60, alpha in 0.0f64..6.0, k in 1usize..4, seed: u64) {
        let inst = gen_ksat(n, (alpha * n as f64) as usize, k, seed).unwrap();
        prop_assert_eq!(parse_dimacs(&write_dimacs(&inst)).unwrap(), inst);
    }

    #[test]
    fn mixed_round_trip(n in 3usize..60, alpha in 0.0f64..6.0, p in 0.0f64..=1.0, seed: u64) {
        let inst = gen_2p_sat(n, alpha, p, seed).unwrap();
        prop_assert_eq!(parse_dimacs(&write_dimacs(&inst)).unwrap(), inst);
    }

    #[test]
    fn xor_round_trip(n in 10usize..60, alpha in 0.0f64..1.5, bernoulli: bool, seed: u64) {
        let mode = if bernoulli { XorMode::Bernoulli } else { XorMode::FixedM };
        let inst = gen_xorsat(n, alpha, mode, seed).unwrap();
        prop_assert_eq!(parse_xor(&write_xor(&inst)).unwrap(), inst);
    }

    #[test]
    fn graph_round_trip(n in 0usize..80, c in 0.0f64..5.0, seed: u64) {
        let c = if n > 0 { c.min(n as f64) } else { c };
        let g = gen_gnp(n, c, seed).unwrap();
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn alist_round_trip(checks in 1usize..40, seed: u64) {
        let n = 2 * checks;
        prop_assume!(n >= 6);
        let code = match gen_regular_ldpc(n, 3, 6, seed) {
            Ok(c) => c,
            // socket pairing may give up on very small codes
            Err(algodyn_core::Error::GenerationFailure(_)) if n < 60 => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert_eq!(parse_alist(&write_alist(&code)).unwrap(), code.with_seed(None));
    }
}

#[test]
fn untagged_files_parse() {
    let inst = parse_dimacs("p cnf 4 5\n1 -2 3 0\n-1 2 0\n4 0\n2 3 -4 0\n1 0\n").unwrap();
    assert_eq!(parse_dimacs(&write_dimacs(&inst)).unwrap(), inst);
    let x = parse_xor("p cnf 5 1\nx 1 -2 3 0\n").unwrap();
    assert_eq!(x.equations()[0], XorEquation::new([0, 1, 2], false));
    assert_eq!(x.tag().seed, None);
    let g = parse_graph("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
    assert_eq!(g.n_edges(), 2);
    assert!((g.tag().c - 4.0 / 3.0).abs() < 1e-12);
}
