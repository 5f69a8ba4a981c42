mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use ocrnoise::corrector::{correct, repair_token, segment_viterbi, Models};
use ocrnoise::layout::{columnize, invert_columnize};
use ocrnoise::metrics::{bm25_recall, cer, levenshtein, synthesize_queries, Variant};
use ocrnoise::pipeline::{contaminate_document, reconstruct, synthesize};
use ocrnoise::synthetic::SyntheticLanguage;
use ocrnoise::{derive_rng, CleanDocument, ConfusionTable, ContaminationProfile};

use common::{levenshtein_recursive, repair_exhaustive, segment_brute_force, RefLexicon};

fn language() -> &'static SyntheticLanguage {
    static LANG: OnceLock<SyntheticLanguage> = OnceLock::new();
    LANG.get_or_init(|| SyntheticLanguage::new(21, 600))
}

fn models() -> &'static Models {
    static MODELS: OnceLock<Models> = OnceLock::new();
    MODELS.get_or_init(|| Models::train(&language().corpus(21, 0, 300, 6..=12), 0.1).unwrap())
}

fn lexicon_entries() -> impl Strategy<Value = Vec<(String, u64)>> {
    prop::collection::vec(("[abtAB]{1,4}", 1u64..100), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn levenshtein_matches_recursion(a in "[abc]{0,7}", b in "[abc]{0,7}") {
        let (ca, cb): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
        prop_assert_eq!(levenshtein(&a, &b).distance, levenshtein_recursive(&ca, &cb));
    }

    #[test]
    fn levenshtein_is_a_metric(a in "\\PC{0,12}", b in "\\PC{0,12}", c in "\\PC{0,12}") {
        let d = |x: &str, y: &str| levenshtein(x, y).distance;
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert!(d(&a, &b) <= a.chars().count().max(b.chars().count()));
        let s = levenshtein(&a, &b);
        prop_assert_eq!(s.insertions + s.deletions + s.substitutions, s.distance);
    }

    #[test]
    fn segmentation_keeps_characters(words in lexicon_entries(), text in "[abtAB ]{0,30}", pen in 0.0f64..4.0) {
        let lex = RefLexicon::new(&words).to_lexicon();
        let out = segment_viterbi(&text, &lex, pen, 3.0);
        let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        prop_assert_eq!(strip(&out), strip(&text));
        prop_assert!(!out.contains("  "));
    }

    #[test]
    fn segmentation_matches_brute_force(words in lexicon_entries(), text in "[abtAB ]{0,12}", pen in 0.0f64..4.0) {
        let reference = RefLexicon::new(&words);
        let got = segment_viterbi(&text, &reference.to_lexicon(), pen, 3.0);
        prop_assert_eq!(got, segment_brute_force(&text, &reference, pen, 3.0));
    }

    #[test]
    fn repair_matches_exhaustive_search(
        words in prop::collection::vec(("[abeilnot]{1,6}", 1u64..50), 1..15),
        token in "[abeilnot10!]{1,7}",
    ) {
        let reference = RefLexicon::new(&words);
        let table = ConfusionTable::default();
        let got = repair_token(&token, &reference.to_lexicon(), &table, 2);
        prop_assert_eq!(got, repair_exhaustive(&token, &reference, &table, 2));
    }

    #[test]
    fn columnize_inverts((n, cols) in (2usize..5).prop_flat_map(|c| (c..40, Just(c)))) {
        let lines: Vec<usize> = (0..n).collect();
        let (mixed, heights) = columnize(&lines, cols).unwrap();
        prop_assert_eq!(heights.iter().sum::<usize>(), n);
        prop_assert_eq!(invert_columnize(&mixed, &heights).unwrap(), lines);
        prop_assert!(heights.iter().max().unwrap() - heights.iter().min().unwrap() <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn events_replay_to_contaminated_text(seed in any::<u64>(), index in 0u64..1000, sentences in 1usize..12) {
        let mut rng = derive_rng(seed, 0);
        let doc = CleanDocument::new("d", language().document(&mut rng, sentences));
        let profile = ContaminationProfile { master_seed: seed, ..ContaminationProfile::default() };
        let (template, noisy) = contaminate_document(&doc, index, &profile, &ConfusionTable::default()).unwrap();
        prop_assert_eq!(reconstruct(&template.joined(), &noisy.layout, &noisy.events).unwrap(), noisy.text);
    }

    #[test]
    fn correction_is_idempotent(index in 0u64..10_000) {
        let mut rng = derive_rng(99, index);
        let n = 1 + (index % 6) as usize;
        let doc = CleanDocument::new("d", language().document(&mut rng, n));
        let profile = ContaminationProfile::default();
        let table = ConfusionTable::default();
        let (_, noisy) = contaminate_document(&doc, index, &profile, &table).unwrap();
        let once = correct(&noisy.text, models(), &table, Some(&profile)).text;
        let twice = correct(&once, models(), &table, Some(&profile)).text;
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn recall_is_monotone_in_k() {
    let corpus = language().corpus(5, 0, 60, 4..=8);
    let queries = synthesize_queries(&corpus, 5);
    let pairs = synthesize(
        &corpus,
        0,
        &ContaminationProfile::default(),
        &ConfusionTable::default(),
        1,
    )
    .unwrap();
    let docs: Vec<(String, String)> = pairs
        .iter()
        .map(|p| (p.id.clone(), p.contaminated.clone()))
        .collect();
    let ks: BTreeSet<usize> = (1..=10).collect();
    let report = bm25_recall(&docs, &queries, &ks, Variant::Contaminated).unwrap();
    let values: Vec<f64> = report.recall_at.values().copied().collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn degradation_grows_with_rate_scale() {
    let corpus = language().corpus(8, 0, 60, 4..=8);
    let table = ConfusionTable::default();
    let mean_cer = |alpha: f64| {
        let profile = ContaminationProfile {
            p_multicolumn_section: 0.0,
            ..ContaminationProfile::default().scale_granular(alpha)
        };
        let pairs = synthesize(&corpus, 0, &profile, &table, 1).unwrap();
        pairs
            .iter()
            .map(|p| cer(&p.contaminated, &p.clean).unwrap())
            .sum::<f64>()
            / pairs.len() as f64
    };
    let (half, one, two) = (mean_cer(0.5), mean_cer(1.0), mean_cer(2.0));
    assert!(half < one && one < two, "{half} {one} {two}");
}
