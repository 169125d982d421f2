//! Agreement check against the 30-sentence manually annotated fixture.
//! The expected levels were assigned by hand from the published
//! developmental-level scale before the classifier was written.

use lexcomp::dlevel::{classify_dlevel, dlevel_distribution, read_bracketed, DlevelRules};

fn fixture_trees() -> &'static str {
    include_str!("../fixtures/dlevel_30.txt")
}

fn expected_levels() -> Vec<(usize, u8)> {
    include_str!("../fixtures/dlevel_30_expected.csv")
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (line, level) = l.split_once(',').unwrap();
            (line.parse().unwrap(), level.parse().unwrap())
        })
        .collect()
}

#[test]
fn fixture_has_thirty_annotated_sentences() {
    let batch = read_bracketed(fixture_trees());
    assert_eq!(batch.trees.len(), 30);
    assert!(batch.skipped.is_empty());
    assert_eq!(expected_levels().len(), 30);
}

#[test]
fn agreement_with_manual_annotation_at_least_90_percent() {
    let rules = DlevelRules::default();
    let batch = read_bracketed(fixture_trees());
    let expected = expected_levels();
    let mut agree = 0usize;
    let mut disagreements = Vec::new();
    for (parsed, (line, want)) in batch.trees.iter().zip(expected.iter()) {
        assert_eq!(parsed.line, *line);
        let got = classify_dlevel(&parsed.tree, &rules);
        if got.level == *want {
            agree += 1;
        } else {
            disagreements.push((*line, *want, got.level, got.triggers.clone()));
        }
    }
    let ratio = agree as f64 / expected.len() as f64;
    assert!(
        ratio >= 0.90,
        "agreement {ratio:.2}; disagreements {disagreements:?}"
    );
}

#[test]
fn two_trigger_sentence_is_always_level_seven() {
    // line 22: object relative clause + adjunct subordinate clause
    let rules = DlevelRules::default();
    let batch = read_bracketed(fixture_trees());
    let tree = &batch.trees[21].tree;
    for _ in 0..100 {
        let r = classify_dlevel(tree, &rules);
        assert_eq!(r.level, 7);
        assert!(r.triggers.len() >= 2);
    }
}

#[test]
fn fixture_distribution_sums() {
    let rules = DlevelRules::default();
    let batch = read_bracketed(fixture_trees());
    let results: Vec<_> = batch
        .trees
        .iter()
        .map(|p| classify_dlevel(&p.tree, &rules))
        .collect();
    let dist = dlevel_distribution(&results, batch.skipped.len()).unwrap();
    let total: u64 = dist.counts.iter().sum();
    assert_eq!(total, 30);
    assert_eq!(dist.classified, 30);
    assert_eq!(dist.skipped, 0);
}
