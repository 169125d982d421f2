//! Developmental-level (D-level) scoring of parsed sentences.
//!
//! Reads one bracketed constituency parse per line and assigns each sentence
//! a level 0..7 on the Covington scale: levels 1..6 mark specific kinds of
//! clausal embedding, 0 means none matched, and a sentence containing
//! structures from two or more different levels scores 7.
//!
//! Trigger detection is structural and driven by [`DlevelRules`] (category
//! names plus the subordinating-conjunction cue list), so it can be adapted
//! to tagset variants. Classification never fails on long sentences.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A constituency tree node. Preterminals collapse to leaf nodes: `(PRP I)`
/// becomes a node labeled `PRP` with `leaf = Some("I")` and no children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub children: Vec<ParseTree>,
    pub leaf: Option<String>,
}

impl ParseTree {
    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(|c| c.leaf_count()).sum()
        }
    }

    /// First leaf token in surface order.
    pub fn first_leaf(&self) -> Option<&str> {
        if let Some(l) = &self.leaf {
            return Some(l);
        }
        self.children.iter().find_map(|c| c.first_leaf())
    }
}

/// One successfully parsed input line.
#[derive(Debug, Clone)]
pub struct ParsedLine {
    pub line: usize,
    pub tree: ParseTree,
}

/// A skipped (malformed) input line.
#[derive(Debug, Clone)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

/// Result of reading a bracketed file: malformed lines are collected, not
/// fatal, mirroring how erratic parser output is handled in practice.
#[derive(Debug, Clone, Default)]
pub struct BracketedBatch {
    pub trees: Vec<ParsedLine>,
    pub skipped: Vec<SkippedLine>,
}

/// Reads bracketed trees, one per line; blank lines are ignored.
pub fn read_bracketed(text: &str) -> BracketedBatch {
    let mut batch = BracketedBatch::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match parse_tree_line(line) {
            Ok(tree) => batch.trees.push(ParsedLine {
                line: idx + 1,
                tree,
            }),
            Err(reason) => batch.skipped.push(SkippedLine {
                line: idx + 1,
                reason,
            }),
        }
    }
    batch
}

fn parse_tree_line(line: &str) -> std::result::Result<ParseTree, String> {
    let mut pos = 0usize;
    let chars: Vec<char> = line.chars().collect();
    let tree = parse_node(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(format!("trailing content after tree at column {}", pos + 1));
    }
    // unwrap bare outer brackets like "( (S ...) )"
    let mut root = tree;
    while root.label.is_empty() && root.leaf.is_none() && root.children.len() == 1 {
        root = root.children.into_iter().next().unwrap();
    }
    Ok(root)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_atom(chars: &[char], pos: &mut usize) -> String {
    let start = *pos;
    while *pos < chars.len() && !chars[*pos].is_whitespace() && chars[*pos] != '(' && chars[*pos] != ')'
    {
        *pos += 1;
    }
    chars[start..*pos].iter().collect()
}

fn parse_node(chars: &[char], pos: &mut usize) -> std::result::Result<ParseTree, String> {
    skip_ws(chars, pos);
    if *pos >= chars.len() || chars[*pos] != '(' {
        return Err(format!("expected '(' at column {}", *pos + 1));
    }
    *pos += 1; // consume '('
    skip_ws(chars, pos);
    let label = if *pos < chars.len() && chars[*pos] != '(' && chars[*pos] != ')' {
        parse_atom(chars, pos)
    } else {
        String::new()
    };
    let mut children = Vec::new();
    let mut atoms = Vec::new();
    loop {
        skip_ws(chars, pos);
        if *pos >= chars.len() {
            return Err("unbalanced parentheses: missing ')'".into());
        }
        match chars[*pos] {
            ')' => {
                *pos += 1;
                break;
            }
            '(' => children.push(parse_node(chars, pos)?),
            _ => atoms.push(parse_atom(chars, pos)),
        }
    }
    if children.is_empty() && atoms.len() == 1 {
        return Ok(ParseTree {
            label,
            children: Vec::new(),
            leaf: Some(atoms.into_iter().next().unwrap()),
        });
    }
    // stray atoms among phrasal children become anonymous leaves
    for a in atoms {
        children.push(ParseTree {
            label: String::new(),
            children: Vec::new(),
            leaf: Some(a),
        });
    }
    if children.is_empty() && label.is_empty() {
        return Err("empty node".into());
    }
    Ok(ParseTree {
        label,
        children,
        leaf: None,
    })
}

/// Category names and lexical cues driving trigger detection. Defaults
/// target Penn Treebank labels as produced by Collins-style parsers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DlevelRules {
    /// Clause categories (S-like, excluding SBAR).
    pub clause_labels: Vec<String>,
    pub sbar_label: String,
    pub np_labels: Vec<String>,
    pub vp_label: String,
    pub pp_label: String,
    /// Coordinating-conjunction preterminal tags.
    pub cc_tags: Vec<String>,
    /// Non-finite VP head tags (exact match).
    pub nonfinite_head_tags: Vec<String>,
    /// Finite VP head tags (exact match).
    pub finite_verb_tags: Vec<String>,
    /// Subordinating-conjunction words marking adjunct SBARs. This is the
    /// only lexical cue in the default rules.
    pub subordinating_conjunctions: Vec<String>,
    /// Suffixes marking nominalizations; empty by default, which keeps
    /// classification purely structural.
    pub nominalization_suffixes: Vec<String>,
}

impl Default for DlevelRules {
    fn default() -> Self {
        let v = |items: &[&str]| items.iter().map(|s| s.to_string()).collect();
        DlevelRules {
            clause_labels: v(&["S", "SINV", "SQ", "SBARQ"]),
            sbar_label: "SBAR".into(),
            np_labels: v(&["NP", "WHNP"]),
            vp_label: "VP".into(),
            pp_label: "PP".into(),
            cc_tags: v(&["CC"]),
            nonfinite_head_tags: v(&["TO", "VBG", "VBN", "VB"]),
            finite_verb_tags: v(&["VBD", "VBZ", "VBP", "MD"]),
            subordinating_conjunctions: v(&[
                "after", "although", "as", "because", "before", "if", "once", "since",
                "though", "unless", "until", "when", "whenever", "where", "whereas",
                "wherever", "while",
            ]),
            nominalization_suffixes: Vec::new(),
        }
    }
}

impl DlevelRules {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Argument(format!("bad D-level rules: {e}")))
    }

    fn is_clause(&self, label: &str) -> bool {
        self.clause_labels.iter().any(|l| l == label)
    }

    fn is_np(&self, label: &str) -> bool {
        self.np_labels.iter().any(|l| l == label)
    }

    fn is_punct_label(&self, label: &str) -> bool {
        !label.is_empty() && label.chars().all(|c| !c.is_alphanumeric())
    }
}

/// Classification outcome: the level plus the set of matched construction
/// categories. Level is 7 exactly when two or more distinct categories
/// matched, 0 when none did, and the single category otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DLevelResult {
    pub level: u8,
    pub triggers: BTreeSet<u8>,
}

/// Classifies one sentence tree against the scale. Never fails; sentences
/// with no matched construction are level 0.
pub fn classify_dlevel(tree: &ParseTree, rules: &DlevelRules) -> DLevelResult {
    let mut triggers = BTreeSet::new();
    walk(tree, rules, &Context::default(), &mut triggers);
    let level = match triggers.len() {
        0 => 0,
        1 => *triggers.iter().next().unwrap(),
        _ => 7,
    };
    DLevelResult { level, triggers }
}

#[derive(Debug, Clone, Copy, Default)]
struct Context {
    /// Inside the subject region of a non-embedded clause.
    in_main_subject: bool,
    /// Below any VP, SBAR or PP: clause subjects here are embedded.
    embedded: bool,
}

fn walk(node: &ParseTree, rules: &DlevelRules, ctx: &Context, triggers: &mut BTreeSet<u8>) {
    if node.is_leaf() {
        return;
    }
    detect_coordination(node, rules, triggers);
    if rules.is_clause(&node.label) {
        detect_clause_level(node, rules, ctx, triggers);
    }
    if node.label == rules.vp_label {
        detect_vp_level(node, rules, triggers);
    }
    if rules.is_np(&node.label) {
        detect_np_level(node, rules, ctx, triggers);
    }
    if node.label == rules.pp_label {
        detect_pp_level(node, rules, triggers);
    }

    // descend with updated context
    let vp_idx = first_child_index(node, |c| c.label == rules.vp_label);
    for (i, child) in node.children.iter().enumerate() {
        let mut child_ctx = *ctx;
        if child.label == rules.vp_label
            || child.label == rules.sbar_label
            || child.label == rules.pp_label
        {
            child_ctx.embedded = true;
        }
        if rules.is_clause(&node.label) && !ctx.embedded {
            if let Some(vp) = vp_idx {
                if i < vp && rules.is_np(&child.label) {
                    child_ctx.in_main_subject = true;
                }
            }
        }
        walk(child, rules, &child_ctx, triggers);
    }
}

fn first_child_index<F: Fn(&ParseTree) -> bool>(node: &ParseTree, pred: F) -> Option<usize> {
    node.children.iter().position(pred)
}

/// Level 2: conjoined constructions and coordinations. A CC with phrasal
/// or preterminal material on both sides; sentence-initial conjunctions do
/// not count.
fn detect_coordination(node: &ParseTree, rules: &DlevelRules, triggers: &mut BTreeSet<u8>) {
    let substantive = |c: &ParseTree| {
        !rules.cc_tags.contains(&c.label) && !rules.is_punct_label(&c.label)
    };
    for (i, child) in node.children.iter().enumerate() {
        if rules.cc_tags.contains(&child.label) {
            let before = node.children[..i].iter().any(substantive);
            let after = node.children[i + 1..].iter().any(substantive);
            if before && after {
                triggers.insert(2);
                return;
            }
        }
    }
}

/// Overt subject: an NP child before the VP that is not an empty trace.
fn has_overt_subject(clause: &ParseTree, rules: &DlevelRules) -> bool {
    let vp_idx = first_child_index(clause, |c| c.label == rules.vp_label)
        .unwrap_or(clause.children.len());
    clause.children[..vp_idx].iter().any(|c| {
        rules.is_np(&c.label)
            && c.first_leaf()
                .map(|w| !w.starts_with('*') && w != "-NONE-")
                .unwrap_or(false)
    })
}

/// Whether a clause's VP is non-finite (headed by TO, VBG, VBN or bare VB).
fn clause_vp_nonfinite(clause: &ParseTree, rules: &DlevelRules) -> bool {
    let Some(vp) = clause.children.iter().find(|c| c.label == rules.vp_label) else {
        return false;
    };
    vp_nonfinite(vp, rules)
}

fn vp_nonfinite(vp: &ParseTree, rules: &DlevelRules) -> bool {
    for child in &vp.children {
        if child.is_leaf() {
            if rules.nonfinite_head_tags.contains(&child.label) {
                return true;
            }
            if rules.finite_verb_tags.contains(&child.label) {
                return false;
            }
        } else if child.label == rules.vp_label {
            return vp_nonfinite(child, rules);
        }
    }
    false
}

/// Clause-level triggers: clausal subjects (6), fronted or trailing adjunct
/// clauses (5).
fn detect_clause_level(
    node: &ParseTree,
    rules: &DlevelRules,
    ctx: &Context,
    triggers: &mut BTreeSet<u8>,
) {
    let Some(vp_idx) = first_child_index(node, |c| c.label == rules.vp_label) else {
        return;
    };
    let has_np_subject = has_overt_subject(node, rules);
    for (i, child) in node.children.iter().enumerate() {
        if child.label == rules.sbar_label {
            if i < vp_idx && !has_np_subject && !ctx.embedded {
                // "That he lied bothers me."
                triggers.insert(6);
            } else {
                // fronted or trailing subordinate clause
                triggers.insert(5);
            }
        } else if rules.is_clause(&child.label) && clause_vp_nonfinite(child, rules) {
            if i < vp_idx && !has_np_subject && !ctx.embedded {
                // gerund subject: "Swimming is fun."
                triggers.insert(6);
            } else if !has_overt_subject(child, rules) {
                // participial adjunct: "Running fast, he fell."
                triggers.insert(5);
            }
        }
    }
}

/// VP-level triggers: non-finite complements with and without their own
/// subjects (4 / 1), finite clauses or WH clauses as objects (3), and
/// subordinate adjunct clauses cued by a subordinating conjunction (5).
fn detect_vp_level(node: &ParseTree, rules: &DlevelRules, triggers: &mut BTreeSet<u8>) {
    for child in &node.children {
        if rules.is_clause(&child.label) && clause_vp_nonfinite(child, rules) {
            if has_overt_subject(child, rules) {
                triggers.insert(4);
            } else {
                triggers.insert(1);
            }
        } else if child.label == rules.sbar_label {
            let first_word = child
                .first_leaf()
                .map(|w| w.to_lowercase())
                .unwrap_or_default();
            if rules.subordinating_conjunctions.contains(&first_word) {
                triggers.insert(5);
            } else {
                triggers.insert(3);
            }
        }
    }
}

/// NP-level triggers: relative clauses (6 on the main subject, 3 elsewhere)
/// and appositions (4).
fn detect_np_level(
    node: &ParseTree,
    rules: &DlevelRules,
    ctx: &Context,
    triggers: &mut BTreeSet<u8>,
) {
    let has_sbar = node.children.iter().any(|c| c.label == rules.sbar_label);
    if has_sbar {
        if ctx.in_main_subject {
            triggers.insert(6);
        } else {
            triggers.insert(3);
        }
    }
    if !rules.nominalization_suffixes.is_empty() {
        let head_nominalized = node.children.iter().rev().any(|c| {
            c.is_leaf()
                && c.label.starts_with("NN")
                && rules
                    .nominalization_suffixes
                    .iter()
                    .any(|s| c.leaf.as_deref().unwrap_or("").to_lowercase().ends_with(s))
        });
        if head_nominalized {
            triggers.insert(if ctx.in_main_subject { 6 } else { 3 });
        }
    }
    // apposition: (NP (NP ...) (, ,) (NP ...)) without coordination
    let np_children: Vec<usize> = node
        .children
        .iter()
        .enumerate()
        .filter(|(_, c)| rules.is_np(&c.label))
        .map(|(i, _)| i)
        .collect();
    let has_cc = node
        .children
        .iter()
        .any(|c| rules.cc_tags.contains(&c.label));
    if np_children.len() >= 2 && !has_cc {
        let (a, b) = (np_children[0], np_children[1]);
        let comma_between = node.children[a + 1..b]
            .iter()
            .any(|c| c.label == "," || c.leaf.as_deref() == Some(","));
        if comma_between {
            triggers.insert(4);
        }
    }
}

/// PP-level trigger: non-finite clause inside a preposition phrase, e.g.
/// "after eating" (5).
fn detect_pp_level(node: &ParseTree, rules: &DlevelRules, triggers: &mut BTreeSet<u8>) {
    for child in &node.children {
        if rules.is_clause(&child.label) && clause_vp_nonfinite(child, rules) {
            triggers.insert(5);
        }
    }
}

/// Aggregate distribution of levels over classified sentences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DlevelDistribution {
    /// counts\[l\] = sentences at level l.
    pub counts: [u64; 8],
    pub mean: f64,
    pub sd: f64,
    pub classified: u64,
    pub skipped: u64,
}

/// Histogram plus mean/SD of levels; errors when nothing was classified.
pub fn dlevel_distribution(
    results: &[DLevelResult],
    skipped: usize,
) -> Result<DlevelDistribution> {
    if results.is_empty() {
        return Err(Error::UndefinedMeasure {
            measure: "dlevel_distribution",
            reason: "no sentences were classified".into(),
        });
    }
    let mut counts = [0u64; 8];
    for r in results {
        counts[r.level as usize] += 1;
    }
    let levels: Vec<f64> = results.iter().map(|r| r.level as f64).collect();
    let ms = crate::stats::mean_sd(&levels)?;
    Ok(DlevelDistribution {
        counts,
        mean: ms.mean,
        sd: ms.sd,
        classified: results.len() as u64,
        skipped: skipped as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(line: &str) -> DLevelResult {
        let tree = parse_tree_line(line).unwrap();
        classify_dlevel(&tree, &DlevelRules::default())
    }

    #[test]
    fn parses_simple_tree() {
        let batch = read_bracketed("(S (NP (PRP I)) (VP (VBD ran)))\n");
        assert_eq!(batch.trees.len(), 1);
        assert!(batch.skipped.is_empty());
        let tree = &batch.trees[0].tree;
        assert_eq!(tree.label, "S");
        assert_eq!(tree.leaf_count(), 2);
    }

    #[test]
    fn malformed_line_is_recorded_not_fatal() {
        let batch = read_bracketed("(S (NP (PRP I)) (VP (VBD ran)))\n(S (NP\n");
        assert_eq!(batch.trees.len(), 1);
        assert_eq!(batch.skipped.len(), 1);
        assert_eq!(batch.skipped[0].line, 2);
    }

    #[test]
    fn outer_wrapper_brackets_unwrap() {
        let batch = read_bracketed("( (S (NP (NNP John)) (VP (VBD slept))) )\n");
        assert_eq!(batch.trees[0].tree.label, "S");
    }

    #[test]
    fn simple_sentence_is_level_zero() {
        let r = classify("(S (NP (PRP I)) (VP (VBD ran)))");
        assert_eq!(r.level, 0);
        assert!(r.triggers.is_empty());
    }

    #[test]
    fn two_distinct_triggers_force_level_seven() {
        // object relative clause (3) + adjunct subordinate clause (5)
        let r = classify(
            "(S (NP (PRP I)) (VP (VBD saw) (NP (NP (DT the) (NN dog)) (SBAR (WHNP (WDT that)) (S (VP (VBD barked)))))) (SBAR (IN while) (S (NP (PRP I)) (VP (VBD waited)))) (. .))",
        );
        assert_eq!(r.triggers, BTreeSet::from([3, 5]));
        assert_eq!(r.level, 7);
    }

    #[test]
    fn repeated_same_category_stays_at_that_level() {
        // two object relatives: one distinct category -> level 3, not 7
        let r = classify(
            "(S (NP (PRP I)) (VP (VBD saw) (NP (NP (DT the) (NN dog)) (SBAR (WHNP (WDT that)) (S (VP (VBD barked))))) (NP (NP (DT the) (NN cat)) (SBAR (WHNP (WDT that)) (S (VP (VBD slept)))))))",
        );
        assert_eq!(r.triggers, BTreeSet::from([3]));
        assert_eq!(r.level, 3);
    }

    #[test]
    fn classification_ignores_leaf_spelling() {
        // renaming leaves must not change the outcome (structure-only),
        // except for the subordinating-conjunction cue
        let a = classify("(S (NP (NNP John) (CC and) (NNP Mary)) (VP (VBD ran)))");
        let b = classify("(S (NP (NNP Alpha) (CC plus) (NNP Beta)) (VP (VBD jumped)))");
        assert_eq!(a, b);
        assert_eq!(a.level, 2);
    }

    #[test]
    fn sentence_initial_conjunction_does_not_coordinate() {
        let r = classify("(S (CC And) (NP (PRP he)) (VP (VBD left)))");
        assert_eq!(r.level, 0);
    }

    #[test]
    fn distribution_counts_and_errors() {
        let results = vec![
            DLevelResult { level: 0, triggers: BTreeSet::new() },
            DLevelResult { level: 0, triggers: BTreeSet::new() },
            DLevelResult { level: 4, triggers: BTreeSet::from([4]) },
        ];
        let d = dlevel_distribution(&results, 1).unwrap();
        assert_eq!(d.counts[0], 2);
        assert_eq!(d.counts[4], 1);
        assert_eq!(d.classified, 3);
        assert_eq!(d.skipped, 1);
        assert!((d.mean - 4.0 / 3.0).abs() < 1e-12);
        assert!(dlevel_distribution(&[], 5).is_err());
        // all-simple fixture: mean 0, sd 0
        let simple = vec![
            DLevelResult { level: 0, triggers: BTreeSet::new() };
            4
        ];
        let d = dlevel_distribution(&simple, 0).unwrap();
        assert_eq!((d.mean, d.sd), (0.0, 0.0));
    }

    #[test]
    fn long_sentences_classify_without_error() {
        // 150-leaf flat sentence
        let mut line = String::from("(S (NP (PRP They)) (VP (VBD saw)");
        for i in 0..148 {
            line.push_str(&format!(" (NP (NN thing{i}))"));
        }
        line.push_str("))");
        let r = classify(&line);
        assert_eq!(r.level, 0);
    }

    #[test]
    fn rules_load_from_toml() {
        let rules = DlevelRules::from_toml_str("sbar_label = \"CP\"\n").unwrap();
        assert_eq!(rules.sbar_label, "CP");
        assert_eq!(rules.vp_label, "VP");
    }
}
