use humancomp::adversary::linear::{solve_mod10, LinearSystemMod10};
use humancomp::modifiers::{shift_add, start_index, typewriter_shift, KeyboardLayout, Move, StartRule};
use humancomp::prg::{prg1, prg2, Seed};
use humancomp::schemas::{letter_substitution, stml, stml_eval};
use humancomp::{Alphabet, KeyMap};
use proptest::prelude::*;

fn moves() -> impl Strategy<Value = Vec<Move>> {
    proptest::collection::vec(
        prop_oneof![
            Just(Move::Left),
            Just(Move::Right),
            Just(Move::UpLeft),
            Just(Move::UpRight),
            Just(Move::DownLeft),
            Just(Move::DownRight)
        ],
        1..3,
    )
}

fn key26() -> impl Strategy<Value = KeyMap> {
    proptest::collection::vec(0u8..10, 26).prop_map(|v| KeyMap::new(Alphabet::LATIN, v).unwrap())
}

fn key10() -> impl Strategy<Value = KeyMap> {
    proptest::collection::vec(0u8..10, 10).prop_map(|v| KeyMap::new(Alphabet::Digits, v).unwrap())
}

proptest! {
    #[test]
    fn typewriter_inverse_restores(text in "[a-z0-9]{1,12}", ms in moves()) {
        let kb = KeyboardLayout::qwerty();
        if let Ok(shifted) = typewriter_shift(&text, &ms, &kb, false) {
            let back: Vec<Move> = ms.iter().rev().map(|m| m.inverse()).collect();
            prop_assert_eq!(typewriter_shift(&shifted, &back, &kb, false).unwrap(), text);
        }
    }

    #[test]
    fn shift_add_has_period_26(text in "[A-Z]{1,15}", shifts in proptest::collection::vec(0u8..10, 1..8)) {
        prop_assume!(shifts.len() <= text.len());
        let mut t = text.clone();
        for _ in 0..26 {
            t = shift_add(&t, &shifts).unwrap();
        }
        prop_assert_eq!(t, text);
    }

    #[test]
    fn start_index_is_total(text in "[A-Z]{1,12}", rule in prop_oneof![
        Just(StartRule::First),
        Just(StartRule::LastLetter),
        Just(StartRule::SecondVowel),
        (0usize..5).prop_map(StartRule::PastFirstVowel),
        Just(StartRule::one_past_first_in("DLNTW")),
    ]) {
        prop_assert!(start_index(&text, &rule) < text.len());
    }

    #[test]
    fn letter_substitution_cost_is_linear(text in "[A-Z]{1,30}", key in key26()) {
        prop_assert_eq!(letter_substitution(&text, &key).unwrap().proc_total(), 3 * text.len() as u64);
    }

    #[test]
    fn stml_machine_matches_fast_path(text in "[A-Z]{1,20}", key in key26(), carry in proptest::option::of(0u8..10)) {
        let run = stml(&text, &key, carry).unwrap();
        let symbols = Alphabet::LATIN.parse(&text, false).unwrap();
        let (out, fin) = stml_eval(&symbols, &key, carry);
        prop_assert_eq!(run.result.output.bytes().map(|b| b - b'0').collect::<Vec<_>>(), out.clone());
        prop_assert_eq!(run.final_sum, fin);
        prop_assert!(out.len() <= text.len() && out.iter().all(|&d| d < 5));
    }

    #[test]
    fn generators_are_deterministic_and_partitioned(digits in proptest::collection::vec(0u8..5, 5..14), key in key10()) {
        let seed = Seed::new(digits.clone()).unwrap();
        let a = prg1(&seed, &key).unwrap();
        prop_assert_eq!(&a, &prg1(&seed, &key).unwrap());
        prop_assert!(a.digits.iter().all(|&d| d < 5));
        let joined: Vec<u8> = (0..a.passes.len()).flat_map(|k| a.part(k).to_vec()).collect();
        prop_assert_eq!(joined, a.digits.clone());
        let b = prg2(&seed, &key).unwrap();
        prop_assert_eq!(&b.digits[..digits.len()], &digits[..]);
        prop_assert_eq!(b.passes.len(), 3);
    }

    #[test]
    fn mod10_solutions_satisfy_and_are_complete(
        vars in 1usize..=4,
        rows in proptest::collection::vec((proptest::collection::vec(0u8..10, 4), 0u8..10), 0..5),
    ) {
        let mut sys = LinearSystemMod10::new(vars);
        for (a, b) in rows {
            sys.push(a[..vars].to_vec(), b).unwrap();
        }
        let set = solve_mod10(&sys);
        let brute = (0..10u32.pow(vars as u32))
            .filter(|&i| sys.is_satisfied_by(&(0..vars as u32).map(|p| (i / 10u32.pow(p) % 10) as u8).collect::<Vec<_>>()))
            .count();
        prop_assert_eq!(set.count() as usize, brute);
        for x in set.iter() {
            prop_assert!(sys.is_satisfied_by(&x));
        }
    }
}
