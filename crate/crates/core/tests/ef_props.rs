mod support;

use catbench::ef::{random_playouts, solve_game, verify_certificate, DistanceDuplicator, Game, Player};
use catbench::mocheck::eval_fo;
use catbench::structures::{linear_order, PresentedStructure, SuccKind};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

fn binary(seed: u64, n: usize) -> catbench::structures::FiniteStructure {
    random_structure(&mut ChaCha8Rng::seed_from_u64(seed), &binary_vocab(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn structure_against_itself(seed in any::<u64>(), n in 1usize..5, rounds in 0usize..4) {
        let a = binary(seed, n);
        let r = solve_game(&a, &a, rounds).unwrap();
        prop_assert_eq!(r.winner, Player::Duplicator);
        prop_assert!(verify_certificate(&a, &a, rounds, &r.certificate).unwrap());
    }

    #[test]
    fn permuted_copy(seed in any::<u64>(), n in 1usize..5, rounds in 0usize..4) {
        let a = binary(seed, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let b = a.permuted(&perm);
        prop_assert_eq!(solve_game(&a, &b, rounds).unwrap().winner, Player::Duplicator);
    }

    #[test]
    fn winner_matches_hintikka(sa in any::<u64>(), sb in any::<u64>(), na in 1usize..4, nb in 1usize..4, rounds in 0usize..3) {
        let (a, b) = (binary(sa, na), binary(sb, nb));
        let r = solve_game(&a, &b, rounds).unwrap();
        let equivalent = eval_fo(&b, &hintikka(&a, rounds)).unwrap().value;
        prop_assert_eq!(r.winner == Player::Duplicator, equivalent);
        prop_assert!(verify_certificate(&a, &b, rounds, &r.certificate).unwrap());
        // the game is symmetric in its two structures
        prop_assert_eq!(solve_game(&b, &a, rounds).unwrap().winner, r.winner);
    }

    #[test]
    fn monotone_in_rounds(sa in any::<u64>(), sb in any::<u64>(), na in 1usize..4, nb in 1usize..4) {
        let (a, b) = (binary(sa, na), binary(sb, nb));
        let wins: Vec<bool> = (0..4).map(|k| solve_game(&a, &b, k).unwrap().winner == Player::Duplicator).collect();
        prop_assert!(wins.windows(2).all(|w| w[0] || !w[1]), "{:?}", wins);
    }
}

#[test]
fn linear_orders_closed_form() {
    for rounds in 0..=3usize {
        let threshold = (1usize << rounds) - 1;
        for m in 1..=8 {
            for k in m..=8 {
                let r = solve_game(&linear_order(m, "<"), &linear_order(k, "<"), rounds).unwrap();
                let expected = m == k || (m >= threshold && k >= threshold);
                assert_eq!(r.winner == Player::Duplicator, expected, "L{m} vs L{k}, {rounds} rounds");
            }
        }
    }
}

#[test]
fn transcript_winner_matches_result() {
    let (a, b) = (linear_order(2, "<"), linear_order(3, "<"));
    for rounds in 1..=3 {
        let r = solve_game(&a, &b, rounds).unwrap();
        assert_eq!(r.transcript.winner, r.winner);
    }
}

#[test]
fn distance_strategy_survives_playouts() {
    let cases = [
        (PresentedStructure::standard(), PresentedStructure::nonstandard(1).unwrap()),
        (PresentedStructure::standard(), PresentedStructure::nonstandard(2).unwrap()),
        (
            PresentedStructure::sum(SuccKind::Standard, SuccKind::Standard),
            PresentedStructure::sum(SuccKind::Standard, SuccKind::Nonstandard(1)),
        ),
    ];
    for (a, b) in &cases {
        let game = Game::new(a, b).unwrap();
        for rounds in 1..=3 {
            let mut dup = DistanceDuplicator::new(&game).unwrap();
            let r = random_playouts(&game, rounds, 500, rounds as u64, &mut dup).unwrap();
            assert_eq!(r.lines, 500);
            assert_eq!(r.losses, 0, "{:?}", r.first_loss);
        }
    }
}
