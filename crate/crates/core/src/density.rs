//! Lexical density over POS-tagged streams: proportions of common nouns,
//! verbs, adjectives, and lexical words overall.

use serde::{Deserialize, Serialize};

use crate::corpus::TokenStream;
use crate::error::{Error, Result};

/// Tag-class map with prefix-match semantics. A tag matching any
/// `proper_noun_tags` prefix is counted as a proper noun even if it also
/// matches a `noun_tags` prefix (exclusion wins), and proper nouns are not
/// counted as lexical words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TagClassMap {
    pub noun_tags: Vec<String>,
    pub proper_noun_tags: Vec<String>,
    pub verb_tags: Vec<String>,
    pub adjective_tags: Vec<String>,
    pub other_lexical_tags: Vec<String>,
}

impl Default for TagClassMap {
    /// Penn/TreeTagger-style defaults: NN* nouns, NP*/NNP* proper nouns,
    /// V* verbs (modals are not included), JJ* adjectives. Adverbs are not
    /// lexical by default; see [`TagClassMap::with_adverbs`].
    fn default() -> Self {
        let v = |items: &[&str]| items.iter().map(|s| s.to_string()).collect();
        TagClassMap {
            noun_tags: v(&["NN"]),
            proper_noun_tags: v(&["NP", "NNP"]),
            verb_tags: v(&["V"]),
            adjective_tags: v(&["JJ"]),
            other_lexical_tags: Vec::new(),
        }
    }
}

impl TagClassMap {
    /// Adds RB* adverbs to the lexical classes.
    pub fn with_adverbs(mut self) -> Self {
        self.other_lexical_tags.push("RB".into());
        self
    }

    /// Loads a map from TOML (`noun_tags = ["NN"]`, ...); missing keys fall
    /// back to the defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Argument(format!("bad tag-class map: {e}")))
    }

    fn matches(prefixes: &[String], tag: &str) -> bool {
        prefixes.iter().any(|p| tag.starts_with(p.as_str()))
    }

    fn classify(&self, tag: &str) -> TagClass {
        if Self::matches(&self.proper_noun_tags, tag) {
            TagClass::ProperNoun
        } else if Self::matches(&self.noun_tags, tag) {
            TagClass::Noun
        } else if Self::matches(&self.verb_tags, tag) {
            TagClass::Verb
        } else if Self::matches(&self.adjective_tags, tag) {
            TagClass::Adjective
        } else if Self::matches(&self.other_lexical_tags, tag) {
            TagClass::OtherLexical
        } else {
            TagClass::NonLexical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TagClass {
    Noun,
    ProperNoun,
    Verb,
    Adjective,
    OtherLexical,
    NonLexical,
}

/// Density ratios over word tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRatios {
    pub noun_ratio: f64,
    pub verb_ratio: f64,
    pub adj_ratio: f64,
    pub lexical_ratio: f64,
}

/// Computes density ratios: each ratio is matching word tokens over all
/// word tokens; `lexical_ratio` covers nouns, verbs, adjectives and the
/// configured other lexical classes (proper nouns excluded throughout).
pub fn lexical_density(stream: &TokenStream, map: &TagClassMap) -> Result<DensityRatios> {
    let mut total = 0u64;
    let (mut noun, mut verb, mut adj, mut other) = (0u64, 0u64, 0u64, 0u64);
    for (i, t) in stream.tokens().iter().enumerate() {
        if !t.is_word {
            continue;
        }
        let tag = t.pos.as_deref().ok_or_else(|| {
            Error::Argument(format!(
                "token {i} ({:?}) has no POS tag; density needs tagged input",
                t.surface
            ))
        })?;
        total += 1;
        match map.classify(tag) {
            TagClass::Noun => noun += 1,
            TagClass::Verb => verb += 1,
            TagClass::Adjective => adj += 1,
            TagClass::OtherLexical => other += 1,
            TagClass::ProperNoun | TagClass::NonLexical => {}
        }
    }
    if total == 0 {
        return Err(Error::UndefinedMeasure {
            measure: "lexical_density",
            reason: "stream has no word tokens".into(),
        });
    }
    let tf = total as f64;
    Ok(DensityRatios {
        noun_ratio: noun as f64 / tf,
        verb_ratio: verb as f64 / tf,
        adj_ratio: adj as f64 / tf,
        lexical_ratio: (noun + verb + adj + other) as f64 / tf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;
    use approx::assert_relative_eq;

    fn tagged(pairs: &[(&str, &str)]) -> TokenStream {
        let tokens: Vec<Token> = pairs
            .iter()
            .map(|(w, tag)| Token {
                surface: w.to_string(),
                pos: Some(tag.to_string()),
                lemma: None,
                is_word: true,
            })
            .collect();
        let n = tokens.len();
        TokenStream::new(tokens, vec![n], "t").unwrap()
    }

    // 10-token hand-tagged fixture; hand counts: 3 common nouns, 2 verbs,
    // 1 adjective, 1 proper noun, 3 function words.
    fn fixture() -> TokenStream {
        tagged(&[
            ("the", "DT"),
            ("quick", "JJ"),
            ("fox", "NN"),
            ("jumps", "VVZ"),
            ("over", "IN"),
            ("dogs", "NNS"),
            ("in", "IN"),
            ("London", "NP"),
            ("parks", "NNS"),
            ("run", "VV"),
        ])
    }

    #[test]
    fn ratios_match_hand_counts() {
        let d = lexical_density(&fixture(), &TagClassMap::default()).unwrap();
        assert_relative_eq!(d.noun_ratio, 0.3);
        assert_relative_eq!(d.verb_ratio, 0.2);
        assert_relative_eq!(d.adj_ratio, 0.1);
        assert_relative_eq!(d.lexical_ratio, 0.6);
    }

    #[test]
    fn proper_nouns_are_excluded() {
        let d = lexical_density(
            &tagged(&[("London", "NP"), ("Paris", "NNP"), ("Rome", "NPS")]),
            &TagClassMap::default(),
        )
        .unwrap();
        assert_eq!(d.noun_ratio, 0.0);
        assert_eq!(d.lexical_ratio, 0.0);
    }

    #[test]
    fn ratios_invariant_under_self_concatenation() {
        let s = fixture();
        let mut doubled: Vec<Token> = s.tokens().to_vec();
        doubled.extend(s.tokens().to_vec());
        let n = doubled.len();
        let d1 = lexical_density(&s, &TagClassMap::default()).unwrap();
        let d2 = lexical_density(
            &TokenStream::new(doubled, vec![n], "t2").unwrap(),
            &TagClassMap::default(),
        )
        .unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn untagged_token_is_an_error() {
        let mut tokens = vec![Token::word("hello")];
        tokens[0].pos = None;
        let s = TokenStream::new(tokens, vec![1], "t").unwrap();
        let err = lexical_density(&s, &TagClassMap::default()).unwrap_err();
        assert!(err.to_string().contains("token 0"), "{err}");
    }

    #[test]
    fn adverb_flag_extends_lexical_union() {
        let s = tagged(&[("quickly", "RB"), ("ran", "VVD")]);
        let base = lexical_density(&s, &TagClassMap::default()).unwrap();
        assert_relative_eq!(base.lexical_ratio, 0.5);
        let with_rb = lexical_density(&s, &TagClassMap::default().with_adverbs()).unwrap();
        assert_relative_eq!(with_rb.lexical_ratio, 1.0);
    }

    #[test]
    fn map_loads_from_toml() {
        let map = TagClassMap::from_toml_str(
            "noun_tags = [\"N\"]\nproper_noun_tags = [\"NE\"]\n",
        )
        .unwrap();
        assert_eq!(map.noun_tags, vec!["N"]);
        assert_eq!(map.proper_noun_tags, vec!["NE"]);
        // unspecified keys keep defaults
        assert_eq!(map.verb_tags, vec!["V"]);
    }
}
