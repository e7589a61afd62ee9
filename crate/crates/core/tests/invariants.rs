use dictcode::{
    ball_volume, build_probable_sets, exact_error_probability, greedy_disjoint_code,
    greedy_gv_construct, hamming_distance, min_distance, puncture, two_stage_decode, Alphabet,
    DecodeOutcome, Dictionary, Dmc, ProbableSetStrategy, Rational, ReceivedWord, Word,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn word_pair(max_q: u8, max_n: usize) -> impl Strategy<Value = (u8, Vec<u8>, Vec<u8>, Vec<u8>)> {
    (2..=max_q, 1..=max_n).prop_flat_map(|(q, n)| {
        let w = proptest::collection::vec(0..q, n);
        (Just(q), w.clone(), w.clone(), w)
    })
}

proptest! {
    #[test]
    fn hamming_is_a_metric((_q, a, b, c) in word_pair(5, 16)) {
        let (a, b, c) = (Word::new(a).unwrap(), Word::new(b).unwrap(), Word::new(c).unwrap());
        let ab = hamming_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hamming_distance(&b, &a).unwrap());
        prop_assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        let bc = hamming_distance(&b, &c).unwrap();
        let ac = hamming_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc);
    }

    #[test]
    fn puncturing_loses_at_most_one_per_position(
        (_q, a, b, _c) in word_pair(4, 14),
        picks in proptest::collection::vec(any::<proptest::sample::Index>(), 0..6),
    ) {
        let n = a.len();
        let mut positions: Vec<usize> = picks.iter().map(|i| i.index(n)).collect();
        positions.sort_unstable();
        positions.dedup();
        let (a, b) = (Word::new(a).unwrap(), Word::new(b).unwrap());
        let pa = puncture(&a, &positions).unwrap();
        let pb = puncture(&b, &positions).unwrap();
        prop_assert_eq!(pa.len(), n - positions.len());
        let full = hamming_distance(&a, &b).unwrap();
        let kept = if pa.is_empty() { 0 } else { hamming_distance(&pa, &pb).unwrap() };
        prop_assert!(kept <= full);
        prop_assert!(kept + positions.len() >= full);
    }

    #[test]
    fn ball_volume_grows_with_radius(n in 1usize..20, q in 2usize..6) {
        let mut prev = ball_volume(n, 0, q).unwrap();
        prop_assert!(prev.is_one());
        for r in 1..=n {
            let v = ball_volume(n, r, q).unwrap();
            prop_assert!(v > prev);
            prev = v;
        }
        prop_assert_eq!(prev, num_bigint::BigUint::from(q).pow(n as u32));
    }

    #[test]
    fn gv_code_is_maximal_and_separated(seed in any::<u64>(), d in 1usize..6) {
        use rand::seq::SliceRandom;
        let n = 8;
        let mut all: Vec<u64> = (0..1u64 << n).collect();
        all.shuffle(&mut dictcode::stream_rng(seed, 0));
        all.truncate(60);
        let dict = Dictionary::new(
            Alphabet::binary(),
            n,
            all.iter().map(|&v| Word::from_index(v, n, 2).unwrap()).collect(),
        ).unwrap();
        let report = greedy_gv_construct(&dict, d).unwrap();
        prop_assert!(report.meets_guarantee());
        let code = &report.code;
        if code.len() > 1 {
            prop_assert!(min_distance(code).unwrap() >= d);
        }
        for w in dict.iter() {
            if !code.contains(w) {
                prop_assert!(code.words().iter().any(|c| hamming_distance(c, w).unwrap() < d));
            }
        }
    }

    #[test]
    fn decoder_recovers_within_budget(seed in any::<u64>(), pick in any::<proptest::sample::Index>()) {
        use rand::Rng;
        let n = 9;
        let dict = Dictionary::full_space(Alphabet::binary(), n).unwrap();
        let report = greedy_gv_construct(&dict, 5).unwrap();
        let code = report.code;
        let x = &code.words()[pick.index(code.len())];
        let mut rng = dictcode::stream_rng(seed, 1);
        let erasures = rng.gen_range(0..5);
        let subs = (4 - erasures) / 2;
        let mut positions: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut positions[..], &mut rng);
        let mut entries: Vec<Option<u8>> = x.symbols().iter().map(|&s| Some(s)).collect();
        for &p in &positions[..erasures] {
            entries[p] = None;
        }
        for &p in &positions[erasures..erasures + subs] {
            entries[p] = entries[p].map(|s| 1 - s);
        }
        let y = ReceivedWord::new(entries).unwrap();
        prop_assert_eq!(two_stage_decode(&code, 5, &y).unwrap(), DecodeOutcome::Decoded(x.clone()));
    }

    #[test]
    fn conflict_codes_meet_eps_exactly(
        seed in any::<u64>(),
        inputs in 4usize..24,
        outputs in 8usize..40,
    ) {
        use rand::Rng;
        let mut rng = dictcode::stream_rng(seed, 2);
        let rows: Vec<Vec<Rational>> = (0..inputs)
            .map(|_| {
                let support: Vec<usize> = (0..3).map(|_| rng.gen_range(0..outputs)).collect();
                let mut row = vec![Rational::zero(); outputs];
                let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(1..6)).collect();
                let total: i64 = weights.iter().sum();
                for (&y, &w) in support.iter().zip(&weights) {
                    row[y] += Rational::new(w, total);
                }
                row
            })
            .collect();
        let ch = Dmc::new(rows).unwrap();
        let eps = Rational::new(1, 4);
        let family = build_probable_sets(&ch, eps, ProbableSetStrategy::GreedyMass).unwrap();
        let m = family.max_admissible_size();
        prop_assume!(m >= 1);
        let code = greedy_disjoint_code(&family, m).unwrap();
        let profile = exact_error_probability(&ch, &family, &code).unwrap();
        prop_assert!(profile.max <= eps);
        for (i, &a) in code.members().iter().enumerate() {
            for &b in &code.members()[i + 1..] {
                let sa = family.probable_set(a);
                prop_assert!(family.probable_set(b).iter().all(|y| !sa.contains(y)));
            }
        }
    }
}
