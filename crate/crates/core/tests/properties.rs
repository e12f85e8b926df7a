use std::collections::BTreeSet;

use addwords::complexity::profile_word;
use addwords::powers::{
    find_power_scan, find_power_vdw, validate_witness, PowerWitness, SearchLimits,
};
use addwords::search::{
    backtrack, backtrack_from, contains_pattern, has_power_at_end, AvoidanceProblem, Checkpoint,
    PatternMode,
};
use addwords::{CumulativeTable, Factor, FiniteWord, MorphismMu, WordSource};
use proptest::prelude::*;

fn word_strategy(
    letters: std::ops::RangeInclusive<i64>,
    len: std::ops::Range<usize>,
) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(letters, len)
}

fn direct_sum(w: &[i64], start: usize, len: usize) -> i64 {
    w[start - 1..start - 1 + len].iter().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefixes_are_consistent(pattern in word_strategy(-3..=3, 1..6), m in 1usize..200, extra in 0usize..100) {
        let src = WordSource::periodic_scalars(&pattern).unwrap();
        let short = src.prefix(m).unwrap().to_scalars().unwrap();
        let long = src.prefix(m + extra).unwrap().to_scalars().unwrap();
        prop_assert_eq!(&long[..m], &short[..]);
        for (i, x) in long.iter().enumerate() {
            prop_assert_eq!(*x, pattern[i % pattern.len()]);
        }
    }

    #[test]
    fn morphic_prefixes_are_consistent(m in 1usize..500, extra in 0usize..500) {
        let src = WordSource::dekking();
        let short = src.prefix(m).unwrap().to_scalars().unwrap();
        let long = src.prefix(m + extra).unwrap().to_scalars().unwrap();
        prop_assert_eq!(&long[..m], &short[..]);
    }

    #[test]
    fn factor_values_match_direct_sums(w in word_strategy(-5..=5, 1..120), a in 1usize..120, b in 0usize..120) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let table = CumulativeTable::accumulate(&MorphismMu::additive(word.alphabet()), &word).unwrap();
        let start = 1 + (a - 1) % w.len();
        let len = b % (w.len() - start + 2);
        if len > 0 {
            prop_assert_eq!(table.factor_value(Factor::new(start, len)).unwrap(), vec![direct_sum(&w, start, len)]);
        }
        prop_assert!(table.factor_value(Factor::new(start, w.len() + 1)).is_err());
    }

    #[test]
    fn values_are_additive(w in word_strategy(-5..=5, 2..100), cut in 1usize..100) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let table = CumulativeTable::accumulate(&MorphismMu::parikh(word.alphabet()), &word).unwrap();
        let cut = 1 + cut % (w.len() - 1);
        let whole = table.factor_value(Factor::new(1, w.len())).unwrap();
        let left = table.factor_value(Factor::new(1, cut)).unwrap();
        let right = table.factor_value(Factor::new(cut + 1, w.len() - cut)).unwrap();
        let joined: Vec<i64> = left.iter().zip(&right).map(|(a, b)| a + b).collect();
        prop_assert_eq!(whole, joined);
    }

    #[test]
    fn profile_matches_direct_enumeration(w in word_strategy(-2..=3, 1..150), n_max in 1usize..30) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let n_max = n_max.min(w.len());
        let p = profile_word(&word, &MorphismMu::additive(word.alphabet()), n_max).unwrap();
        for row in &p.rows {
            let direct: BTreeSet<i64> = (1..=w.len() - row.n + 1).map(|i| direct_sum(&w, i, row.n)).collect();
            let got: BTreeSet<i64> = row.values.iter().map(|v| v.value[0]).collect();
            prop_assert_eq!(&got, &direct);
            for v in &row.values {
                prop_assert_eq!(direct_sum(&w, v.first_start, row.n), v.value[0]);
                prop_assert!((1..v.first_start).all(|i| direct_sum(&w, i, row.n) != v.value[0]));
            }
        }
    }

    #[test]
    fn binary_sizes_at_most_n_plus_one(w in word_strategy(0..=1, 1..200), n_max in 1usize..40) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let n_max = n_max.min(w.len());
        let p = profile_word(&word, &MorphismMu::parikh(word.alphabet()), n_max).unwrap();
        for row in &p.rows {
            prop_assert!(row.size() <= row.n + 1);
        }
    }

    #[test]
    fn residues_reduce_prefix_values(w in word_strategy(-7..=7, 1..80), q in 1i64..20) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let table = CumulativeTable::accumulate(&MorphismMu::additive(word.alphabet()), &word).unwrap();
        let r = table.residues(&[q]);
        prop_assert_eq!(r[0], 0);
        for (n, &residue) in r.iter().enumerate().skip(1) {
            prop_assert_eq!(residue, direct_sum(&w, 1, n).rem_euclid(q));
        }
    }

    #[test]
    fn scan_finds_the_first_power(w in word_strategy(-2..=3, 2..60), k in 2usize..5) {
        let src = WordSource::explicit_scalars(&w).unwrap();
        let mu = MorphismMu::additive(src.alphabet());
        let o = find_power_scan(&src, &mu, k, &SearchLimits::with_prefix(w.len())).unwrap();
        let mut expected = None;
        'outer: for end in k..=w.len() {
            for s in 1..=end / k {
                let t = end - k * s;
                let first = direct_sum(&w, t + 1, s);
                if (1..k).all(|i| direct_sum(&w, t + i * s + 1, s) == first) {
                    expected = Some((t, s));
                    break 'outer;
                }
            }
        }
        prop_assert_eq!(o.witness().map(|w| (w.t, w.s)), expected);
    }

    #[test]
    fn vdw_witnesses_are_sound(w in word_strategy(-2..=3, 2..200), k in 2usize..5, q in prop::option::of(1i64..6)) {
        let src = WordSource::explicit_scalars(&w).unwrap();
        let word = src.prefix(w.len()).unwrap();
        for mu in [MorphismMu::additive(src.alphabet()), MorphismMu::parikh(src.alphabet())] {
            let limits = SearchLimits { modulus: q, retry_cap: 32, ..SearchLimits::with_prefix(w.len()) };
            let vdw = find_power_vdw(&src, &mu, k, &limits).unwrap();
            if let Some(found) = vdw.witness() {
                prop_assert!(validate_witness(&word, &mu, found).unwrap());
                prop_assert!(find_power_scan(&src, &mu, k, &limits).unwrap().is_found());
            }
        }
    }

    #[test]
    fn vdw_agrees_with_scan_on_periodic_words(pattern in word_strategy(-2..=3, 1..5), k in 2usize..5) {
        let src = WordSource::periodic_scalars(&pattern).unwrap();
        let mu = MorphismMu::additive(src.alphabet());
        let limits = SearchLimits::with_prefix(1000);
        let vdw = find_power_vdw(&src, &mu, k, &limits).unwrap();
        let scan = find_power_scan(&src, &mu, k, &limits).unwrap();
        prop_assert!(vdw.is_found());
        prop_assert!(scan.is_found());
    }

    #[test]
    fn lift_turns_abelian_powers_into_additive_powers(w in word_strategy(1..=3, 2..40), k in 2usize..4) {
        let src = WordSource::explicit_scalars(&w).unwrap();
        let lifted = WordSource::lift(src.clone()).unwrap();
        let base = src.prefix(w.len()).unwrap();
        let up = lifted.prefix(w.len()).unwrap();
        let parikh = MorphismMu::parikh(base.alphabet());
        let additive = MorphismMu::additive(up.alphabet());
        let p_table = CumulativeTable::accumulate(&parikh, &base).unwrap();
        let a_table = CumulativeTable::accumulate(&additive, &up).unwrap();
        for s in 1..=w.len() / k {
            for t in 0..=w.len() - k * s {
                let pw = PowerWitness { t, s, k, value: p_table.factor_value(Factor::new(t + 1, s)).unwrap() };
                let aw = PowerWitness { t, s, k, value: a_table.factor_value(Factor::new(t + 1, s)).unwrap() };
                prop_assert_eq!(
                    validate_witness(&base, &parikh, &pw).unwrap(),
                    validate_witness(&up, &additive, &aw).unwrap()
                );
            }
        }
    }

    #[test]
    fn end_checks_agree_with_global_check(w in word_strategy(-2..=2, 1..40), k in 2usize..4) {
        let word = FiniteWord::from_scalars(&w).unwrap();
        let mu = MorphismMu::additive(word.alphabet());
        let incremental = (1..=w.len()).any(|n| {
            let prefix = word.factor(1, n).unwrap();
            has_power_at_end(&CumulativeTable::accumulate(&mu, &prefix).unwrap(), k)
        });
        prop_assert_eq!(incremental, contains_pattern(&w, k, PatternMode::Additive));
    }

    #[test]
    fn resumed_search_equals_uninterrupted(budget in 1u64..40, abelian in any::<bool>()) {
        let mode = if abelian { PatternMode::Abelian } else { PatternMode::Additive };
        let problem = AvoidanceProblem::new(&[0, 1, 2], 2, mode).unwrap();
        let full = backtrack(&problem.clone().with_max_len(12)).unwrap();
        let mut o = backtrack(&problem.clone().with_max_len(12).with_max_nodes(budget)).unwrap();
        while let Some(cp) = o.checkpoint.take() {
            let cp = Checkpoint::parse(&cp.to_text()).unwrap();
            let next = problem.clone().with_max_len(12).with_max_nodes(cp.nodes + budget);
            o = backtrack_from(&next, &cp).unwrap();
        }
        prop_assert_eq!(o, full);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn search_emits_pattern_free_words(alphabet in prop::collection::vec(-3i64..=4, 1..5), k in 2usize..5, nodes in 1u64..3000) {
        for mode in [PatternMode::Additive, PatternMode::Abelian] {
            let problem = AvoidanceProblem::new(&alphabet, k, mode).unwrap().with_max_nodes(nodes).with_max_len(60);
            let o = backtrack(&problem).unwrap();
            prop_assert!(!contains_pattern(&o.longest, k, mode));
            prop_assert_eq!(o.length, o.longest.len());
        }
    }
}
