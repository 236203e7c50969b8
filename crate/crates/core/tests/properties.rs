use proptest::prelude::*;

use graphwit::dense::materialize_diag_op;
use graphwit::diagonal::{wht_forward, wht_inverse};
use graphwit::graph::{canonical_masks, is_valid_bset, sample_canonical_masks};
use graphwit::io::{state_from_json, state_to_json, witness_from_json, witness_to_json};
use graphwit::lp::{monotone_n, optimal_witness, Mode};
use graphwit::witness::{lemma3_witness, white_noise_tolerance};
use graphwit::{white_noise_state, Bipartition, DiagonalOperator, Graph, GraphDiagonalState};

/// Connected graphs: a random spanning tree plus extra edges.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        let pairs = n * (n - 1) / 2;
        (Just(n), parents, prop::collection::vec(any::<bool>(), pairs)).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if extra[k] && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn operator(max_n: usize) -> impl Strategy<Value = DiagonalOperator> {
    graph(max_n).prop_flat_map(|g| {
        prop::collection::vec(-1.0..1.0f64, g.dim()).prop_map(move |d| DiagonalOperator::from_diag(&g, d).unwrap())
    })
}

fn state(max_n: usize) -> impl Strategy<Value = GraphDiagonalState> {
    graph(max_n).prop_flat_map(|g| {
        prop::collection::vec(0.0..1.0f64, g.dim()).prop_map(move |w| {
            let s: f64 = w.iter().sum::<f64>() + 1e-9;
            GraphDiagonalState::new(&g, w.iter().map(|x| (x + 1e-9 / w.len() as f64) / s).collect()).unwrap()
        })
    })
}

fn mask_for(n: usize) -> impl Strategy<Value = usize> {
    1..(1usize << n) - 1
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn wht_round_trip(c in (1..=8usize).prop_flat_map(|n| prop::collection::vec(-10.0..10.0f64, 1 << n))) {
        let back = wht_inverse(&wht_forward(&c).unwrap()).unwrap();
        prop_assert!(max_diff(&back, &c) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution((w, m) in operator(7).prop_flat_map(|w| { let n = w.n(); (Just(w), mask_for(n)) })) {
        let m = Bipartition::new(w.n(), m).unwrap();
        let twice = w.partial_transpose(&m).partial_transpose(&m);
        prop_assert!(max_diff(twice.diag(), w.diag()) < 1e-12);
        // The two sides of a cut transpose to the same graph-diagonal operator.
        let other = w.partial_transpose(&m.complement());
        prop_assert!(max_diff(other.diag(), w.partial_transpose(&m).diag()) < 1e-12);
        prop_assert!((w.partial_transpose(&m).trace() - w.trace()).abs() < 1e-9);
    }

    #[test]
    fn sweep_matches_single_transposes(w in operator(6)) {
        for (mask, min) in w.sweep().run_all() {
            let pt = w.partial_transpose(&Bipartition::new(w.n(), mask).unwrap());
            prop_assert!((pt.min_diag_entry() - min).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_transpose_matches_dense((w, m) in operator(4).prop_flat_map(|w| { let n = w.n(); (Just(w), mask_for(n)) })) {
        let dense = materialize_diag_op(&w).unwrap().partial_transpose(m);
        let diag = materialize_diag_op(&w.partial_transpose(&Bipartition::new(w.n(), m).unwrap())).unwrap();
        prop_assert!(dense.max_abs_diff(&diag) < 1e-10);
    }

    #[test]
    fn local_complement_is_an_involution((g, v) in graph(8).prop_flat_map(|g| { let n = g.n(); (Just(g), 0..n) })) {
        let h = g.local_complement(v).unwrap();
        prop_assert!(h.is_connected());
        prop_assert_eq!(h.local_complement(v).unwrap(), g);
    }

    #[test]
    fn sampled_masks_are_canonical(n in 2..=12usize, k in 0..200usize, seed in any::<u64>()) {
        let all = canonical_masks(n);
        let s = sample_canonical_masks(n, k, seed);
        prop_assert_eq!(s.len(), k.min(all.len()));
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s.iter().all(|m| all.binary_search(m).is_ok()));
    }

    #[test]
    fn state_files_round_trip(s in state(6)) {
        let back = state_from_json(serde_json::from_str(&serde_json::to_string(&state_to_json(&s).unwrap()).unwrap()).unwrap()).unwrap();
        prop_assert!(max_diff(back.probs(), s.probs()) < 1e-15);
    }

    #[test]
    fn set_witnesses_vanish_at_their_tolerance(g in graph(7)) {
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                if !is_valid_bset(&g, &[a, b]).unwrap() {
                    continue;
                }
                let w = lemma3_witness(&g, &[a, b]).unwrap();
                prop_assert_eq!(&witness_from_json(witness_to_json(&w, true).unwrap()).unwrap().op, &w.op);
                let t = white_noise_tolerance(&w.op).unwrap();
                prop_assert_eq!(&t, w.tolerance.as_ref().unwrap());
                let at = w.op.expectation(&white_noise_state(&g, t.value).unwrap()).unwrap();
                prop_assert!(at.abs() < 1e-12, "{}", at);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ppt_witnesses_are_decomposable(s in state(4)) {
        let ppt = optimal_witness(&s, Mode::FullyPpt).unwrap().value;
        let dec = optimal_witness(&s, Mode::FullyDecomposable).unwrap().value;
        prop_assert!(dec <= ppt + 1e-7, "decomposable {} ppt {}", dec, ppt);
    }

    #[test]
    fn monotone_is_convex((s, t, lambda) in state(3).prop_flat_map(|s| {
        let g = s.graph().clone();
        let other = prop::collection::vec(0.0..1.0f64, g.dim()).prop_map(move |w| {
            let sum: f64 = w.iter().sum::<f64>() + 1e-9;
            GraphDiagonalState::new(&g, w.iter().map(|x| (x + 1e-9 / w.len() as f64) / sum).collect()).unwrap()
        });
        (Just(s), other, 0.0..1.0f64)
    })) {
        let mixed = s.mix(&t, lambda).unwrap();
        let lhs = monotone_n(&mixed).unwrap().value;
        let rhs = lambda * monotone_n(&s).unwrap().value + (1.0 - lambda) * monotone_n(&t).unwrap().value;
        prop_assert!(lhs <= rhs + 1e-6, "{} > {}", lhs, rhs);
        prop_assert!(lhs >= -1e-9);
    }
}
