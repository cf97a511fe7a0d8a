//! Property tests for the codec and oracle invariants.

use proptest::prelude::*;

use ballperm::classical::SwapProgram;
use ballperm::irreps::{two_row_decode, two_row_encode, StandardTableau};
use ballperm::perm::{FactorialCode, Permutation, FACTORIALS};

fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        (0..FACTORIALS[n]).prop_map(move |r| FactorialCode::from_rank(n, r).unwrap().decode())
    })
}

proptest! {
    #[test]
    fn codec_round_trips(p in arb_perm(8)) {
        let code = FactorialCode::encode(&p);
        prop_assert_eq!(code.decode(), p.clone());
        let back = FactorialCode::from_rank(p.n(), code.rank()).unwrap();
        prop_assert_eq!(back.digits(), code.digits());
    }

    #[test]
    fn adjacent_code_swap_is_local_involution(p in arb_perm(8), k_seed in 0usize..100) {
        prop_assume!(p.n() >= 2);
        let k = 1 + k_seed % (p.n() - 1);
        let code = FactorialCode::encode(&p);
        let swapped = code.adjacent_swap(k).unwrap();
        prop_assert_eq!(swapped.decode(), p.swap_positions(k, k + 1));
        prop_assert_eq!(swapped.adjacent_swap(k).unwrap(), code.clone());
        for j in 1..p.n() {
            if j != k && j != k + 1 {
                prop_assert_eq!(swapped.digit(j), code.digit(j));
            }
        }
    }

    #[test]
    fn compose_inverse_cancels(p in arb_perm(8), q_seed in 0u64..10_000) {
        let q = FactorialCode::from_rank(p.n(), q_seed % FACTORIALS[p.n()])
            .unwrap()
            .decode();
        let composed = p.compose(&q).unwrap();
        prop_assert_eq!(composed.compose(&q.inverse()).unwrap(), p);
    }

    #[test]
    fn expansion_preserves_deterministic_runs(
        n in 2usize..=6,
        raw in proptest::collection::vec((0usize..100, 0usize..100), 0..8),
    ) {
        let swaps: Vec<(usize, usize)> = raw
            .into_iter()
            .map(|(a, b)| {
                let i = 1 + a % (n - 1);
                let j = i + 1 + b % (n - i);
                (i, j)
            })
            .collect();
        let prog = SwapProgram::deterministic(n, swaps).unwrap();
        prop_assert_eq!(
            prog.dball_run().unwrap(),
            prog.expand_adjacent().dball_run().unwrap()
        );
    }

    #[test]
    fn ballot_strings_round_trip(bits in proptest::collection::vec(proptest::bool::ANY, 1..=10)) {
        let m = bits.len();
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        match two_row_decode(&s) {
            Ok(t) => {
                // Decodable strings are balanced ballot sequences and
                // re-encode to themselves.
                prop_assert_eq!(two_row_encode(&t).unwrap(), s.clone());
                let shape = t.shape();
                prop_assert_eq!(shape.parts(), &[m / 2, m / 2]);
            }
            Err(_) => {
                // Must be unbalanced or violate the prefix condition.
                let mut zeros = 0i64;
                let mut valid = m % 2 == 0;
                for ch in s.chars() {
                    zeros += if ch == '0' { 1 } else { -1 };
                    if zeros < 0 {
                        valid = false;
                    }
                }
                prop_assert!(!(valid && zeros == 0));
            }
        }
    }
}

#[test]
fn tableau_swap_standards_match_axial_distance() {
    use ballperm::irreps::{axial_distance, syt_enumerate, Partition};
    for l in Partition::all(6) {
        for t in syt_enumerate(&l) {
            for k in 1..6 {
                let d = axial_distance(&t, k);
                let swapped: Result<StandardTableau, _> = t.swap_labels(k);
                assert_eq!(
                    swapped.is_ok(),
                    d.abs() >= 2,
                    "swap standardness disagrees with |d| at {t:?}, k={k}"
                );
            }
        }
    }
}
