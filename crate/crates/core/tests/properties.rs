mod common;

use std::collections::{HashMap, HashSet};

use common::*;
use d0l::circularity::{decide_circularity, interpretations_of, sync_report, CircularityStatus, NotCircularWitness};
use d0l::codes::{injective_simplification, is_code, CodeTest};
use d0l::corpus::FactorCorpus;
use d0l::growth::{bounded_mask, classify, is_pushy, sigma_partition, GrowthAnalysis};
use d0l::periodicity::{is_unboundedly_repetitive, UrStatus};
use d0l::word::minimal_period;
use d0l::{Alphabet, D0LSystem, Letter, Limits, Morphism, Word};
use proptest::prelude::*;

fn build(images: Vec<Vec<u32>>) -> Morphism {
    let names: Vec<String> = (0..images.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let images = images.into_iter().map(|w| Word::from_letters(w.into_iter().map(Letter).collect())).collect();
    Morphism::new(Alphabet::new(names).unwrap(), images).unwrap()
}

fn morphisms(max_letters: usize, max_image: usize) -> impl Strategy<Value = Morphism> {
    (1..=max_letters)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..n as u32, 1..=max_image), n))
        .prop_map(build)
}

fn systems(max_letters: usize, max_image: usize) -> impl Strategy<Value = D0LSystem> {
    morphisms(max_letters, max_image).prop_map(|m| system_from(&m))
}

fn words(max_len: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(
        prop::collection::vec(0..2u32, 1..=max_len).prop_map(|w| Word::from_letters(w.into_iter().map(Letter).collect())),
        1..=4,
    )
}

/// Every index sequence whose concatenation has length ≤ `max_len`; true
/// iff two distinct sequences spell the same word.
fn brute_force_ambiguous(list: &[Word], max_len: usize) -> bool {
    fn go(list: &[Word], cur: &mut Vec<Letter>, seq: &mut Vec<usize>, max_len: usize, seen: &mut HashMap<Vec<Letter>, Vec<usize>>) -> bool {
        for (i, w) in list.iter().enumerate() {
            if cur.len() + w.len() > max_len {
                continue;
            }
            cur.extend_from_slice(w);
            seq.push(i);
            if let Some(prev) = seen.get(cur) {
                if prev != seq {
                    return true;
                }
            } else {
                seen.insert(cur.clone(), seq.clone());
            }
            if go(list, cur, seq, max_len, seen) {
                return true;
            }
            seq.pop();
            cur.truncate(cur.len() - w.len());
        }
        false
    }
    go(list, &mut Vec::new(), &mut Vec::new(), max_len, &mut HashMap::new())
}

const CODE_HORIZON: usize = 10;

proptest! {
    #![proptest_config(ProptestConfig { cases: 192, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn text_round_trip(sys in systems(4, 3)) {
        let text = sys.to_text();
        let back = d0l::parse_system(&text).unwrap();
        prop_assert!(back.trimmed.is_empty());
        prop_assert_eq!(back.system.to_text(), text);
        prop_assert_eq!(back.system.morphism().images(), sys.morphism().images());
    }

    #[test]
    fn nonerasing_iteration_never_shrinks(sys in systems(4, 3), n in 0usize..6) {
        let m = sys.morphism();
        let w = m.iterate(sys.axiom(), n).unwrap();
        let next = m.apply(&w);
        prop_assert!(next.len() >= w.len());
        prop_assert!(next.len() >= m.norm_min() * w.len() && next.len() <= m.norm_max() * w.len());
    }

    #[test]
    fn code_test_matches_enumeration(list in words(3)) {
        match is_code(&list).unwrap() {
            CodeTest::Code => prop_assert!(!brute_force_ambiguous(&list, CODE_HORIZON)),
            CodeTest::NotCode(df) => {
                let spell = |seq: &[usize]| seq.iter().flat_map(|&i| list[i].iter().copied()).collect::<Vec<_>>();
                prop_assert_ne!(&df.left, &df.right);
                prop_assert_eq!(spell(&df.left), df.word.to_vec());
                prop_assert_eq!(spell(&df.right), df.word.to_vec());
                if df.word.len() <= CODE_HORIZON {
                    prop_assert!(brute_force_ambiguous(&list, CODE_HORIZON));
                }
            }
        }
    }

    #[test]
    fn bounded_letters_saturate(m in morphisms(4, 3)) {
        prop_assert_eq!(bounded_mask(&m).unwrap(), saturation_bounded(&m));
    }

    /// |φⁿ(a)| / (n^α βⁿ) stays within a fixed factor over a probe window.
    #[test]
    fn growth_class_fits_lengths(m in morphisms(3, 3)) {
        let g = GrowthAnalysis::new(&m).unwrap();
        let lengths: Vec<Vec<u128>> = (16..=24).map(|n| m.image_lengths(n).unwrap()).collect();
        for a in m.alphabet().letters() {
            let class = g.class(a);
            let beta = class.beta.to_f64();
            let ratios: Vec<f64> = (16..=24usize)
                .map(|n| lengths[n - 16][a.index()] as f64 / ((n as f64).powi(class.alpha as i32) * beta.powi(n as i32)))
                .collect();
            let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
            let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!(hi / lo < 4.0, "letter {} class ({}, {}) ratios {:?}", a.index(), class.alpha, beta, ratios);
        }
    }

    #[test]
    fn sigma_prefixes_are_closed(sys in systems(4, 3)) {
        let sigma = sigma_partition(&sys).unwrap();
        let m = sys.morphism();
        let total: usize = sigma.classes.iter().map(Vec::len).sum();
        prop_assert_eq!(total, m.size());
        for j in 0..sigma.classes.len() {
            let cum: HashSet<Letter> = sigma.cumulative(j).into_iter().collect();
            for &a in &cum {
                prop_assert!(m.image(a).iter().all(|x| cum.contains(x)));
            }
        }
    }

    /// Pushy exactly when long words over bounded letters turn up.
    #[test]
    fn pushy_matches_corpus(sys in systems(4, 3)) {
        let mask = bounded_mask(sys.morphism()).unwrap();
        let corpus = FactorCorpus::build(&sys, 16, 256).unwrap();
        prop_assume!(corpus.is_stable());
        let long_bounded = corpus.of_len(16).iter().any(|f| f.iter().all(|a| mask[a.index()]));
        let pushy = is_pushy(&sys).unwrap();
        prop_assert_eq!(pushy, long_bounded);
        // pushy systems are repetitive: powers keep growing with the corpus
        if pushy {
            let deep = FactorCorpus::build(&sys, 64, 512).unwrap();
            prop_assert!(deep.max_power().0 >= 4, "max power {:?}", deep.max_power());
        }
    }

    #[test]
    fn corpus_is_sound_and_complete(sys in systems(3, 3), max_len in 1usize..8) {
        let corpus = FactorCorpus::build(&sys, max_len, 128).unwrap();
        let mut direct = HashSet::new();
        for n in 0..=corpus.generation().min(6) {
            let w = sys.morphism().iterate(sys.axiom(), n).unwrap();
            for i in 0..w.len() {
                for l in 1..=max_len.min(w.len() - i) {
                    direct.insert(Word::from(&w[i..i + l]));
                }
            }
        }
        prop_assert!(direct.iter().all(|f| corpus.contains(f)));
        if corpus.generation() <= 6 {
            prop_assert_eq!(direct.len(), corpus.len());
        }
        let bigger = FactorCorpus::build(&sys, max_len + 2, 128).unwrap();
        prop_assert!(bigger.max_power().0 >= corpus.max_power().0);
    }

    #[test]
    fn collision_pairs_are_genuine(sys in systems(3, 3)) {
        let corpus = FactorCorpus::build(&sys, 6, 128).unwrap();
        for (u, v) in corpus.collision_search() {
            prop_assert!(u < v);
            prop_assert_eq!(sys.morphism().apply(&u), sys.morphism().apply(&v));
            prop_assert!(corpus.contains(&u) && corpus.contains(&v));
        }
    }

    #[test]
    fn interpretations_are_trimmed_and_exact(sys in systems(3, 3), pick in any::<prop::sample::Index>()) {
        let corpus = FactorCorpus::build(&sys, 6, 128).unwrap();
        let all: Vec<&Word> = corpus.iter().collect();
        let u = all[pick.index(all.len())];
        let m = sys.morphism();
        let interps = interpretations_of(u, &corpus).unwrap();
        // only a factor that never occurs inside an image, such as an
        // axiom letter no rule produces, goes uninterpreted
        if interps.is_empty() {
            prop_assert!(corpus.iter().all(|f| f.len() > u.len() || !u.is_factor_of(&m.apply(f))));
        }
        for i in &interps {
            prop_assert_eq!(m.apply(&i.preimage), i.prefix.concat(u).concat(&i.suffix));
            prop_assert!(i.prefix.len() < m.image(i.preimage[0]).len());
            prop_assert!(i.suffix.len() < m.image(*i.preimage.last().unwrap()).len());
            prop_assert!(corpus.contains(&i.preimage));
        }
        let report = sync_report(u, &corpus).unwrap();
        for k in &report.sync_positions {
            prop_assert!(interps.iter().all(|i| i.cuts.contains(k)));
        }
    }

    #[test]
    fn simplification_composes_back(sys in systems(4, 3)) {
        let simp = injective_simplification(&sys).unwrap();
        let mut cur = sys.morphism().clone();
        for step in &simp.chain {
            prop_assert!(step.simplified.size() < cur.size());
            for a in cur.alphabet().letters() {
                prop_assert_eq!(&step.decode.apply(step.merge.image(a)), cur.image(a));
            }
            cur = step.simplified.clone();
        }
        prop_assert!(is_code(simp.final_system.morphism().images()).unwrap().is_code());
    }

    /// A not-circular verdict by repetition shows up as high powers, and a
    /// UR certificate contains an unbounded letter.
    #[test]
    fn verdicts_agree_with_corpus(sys in systems(3, 3)) {
        let limits = Limits { corpus_len: 12, prefix_cap: 512, generations: 128 };
        let ur = is_unboundedly_repetitive(&sys, limits.prefix_cap).unwrap();
        let mask = bounded_mask(sys.morphism()).unwrap();
        if let UrStatus::Yes { lifted_period, .. } = &ur.status {
            prop_assert!(lifted_period.iter().any(|a| !mask[a.index()]));
            let corpus = FactorCorpus::build(&sys, 3 * lifted_period.len(), 128).unwrap();
            prop_assert!(corpus.contains(&lifted_period.pow(3)));
        }
        let verdict = decide_circularity(&sys, &limits).unwrap();
        if let CircularityStatus::NotCircular(NotCircularWitness::Repetition { family, .. }) = &verdict.status {
            let interior = |c: &[usize]| c.iter().copied().filter(|&k| k > 0 && k < family.word.len()).collect::<HashSet<_>>();
            prop_assert!(interior(&family.first.cuts).is_disjoint(&interior(&family.second.cuts)));
        }
        let a = serde_json::to_string(&verdict.to_json(&sys)).unwrap();
        let b = serde_json::to_string(&decide_circularity(&sys, &limits).unwrap().to_json(&sys)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn classification_is_consistent(sys in systems(4, 3)) {
        let c = classify(&sys).unwrap();
        for a in sys.alphabet().letters() {
            prop_assert_eq!(c.bounded.contains(&a), c.analysis.class(a).is_bounded());
        }
        prop_assert_eq!(c.sigma.classes[0].clone(), c.bounded.clone());
        prop_assert_eq!(c.pushy.is_some(), is_pushy(&sys).unwrap());
    }

    #[test]
    fn minimal_period_by_definition(w in prop::collection::vec(0..3u8, 1..40)) {
        let p = minimal_period(&w);
        prop_assert!((0..w.len() - p).all(|i| w[i] == w[i + p]));
        for q in 1..p {
            prop_assert!((0..w.len() - q).any(|i| w[i] != w[i + q]));
        }
    }
}
