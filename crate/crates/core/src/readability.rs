//! Readability: heuristic syllable counting, Flesch Reading Ease,
//! Flesch-Kincaid grade, grade-band classification, per-sample readability
//! series, and mean sentence length.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::TokenStream;
use crate::diversity::SampleSeries;
use crate::error::{Error, Result};
use crate::stats::{mean_sd, MeanSd};

/// Word, sentence and syllable totals feeding both Flesch formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadabilityCounts {
    pub words: u64,
    pub sentences: u64,
    pub syllables: u64,
}

/// Exception lexicon consulted before the heuristic.
#[derive(Debug, Clone, Default)]
pub struct SyllableLexicon {
    entries: HashMap<String, u32>,
}

impl SyllableLexicon {
    /// Parses `word<whitespace>count` lines; `#` starts a comment.
    pub fn from_str_table(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            match (it.next(), it.next()) {
                (Some(w), Some(c)) => {
                    let count: u32 = c.parse().map_err(|e| Error::Ingest {
                        path: None,
                        line: Some(lineno + 1),
                        msg: format!("bad syllable count: {e}"),
                    })?;
                    entries.insert(w.to_lowercase(), count.max(1));
                }
                _ => {
                    return Err(Error::Ingest {
                        path: None,
                        line: Some(lineno + 1),
                        msg: "expected `word count`".into(),
                    })
                }
            }
        }
        Ok(SyllableLexicon { entries })
    }

    pub fn lookup(&self, word: &str) -> Option<u32> {
        self.entries.get(&word.to_lowercase()).copied()
    }

    pub fn merged_with(mut self, other: &SyllableLexicon) -> Self {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), *v);
        }
        self
    }
}

/// Common words the vowel-group heuristic gets wrong.
fn builtin_lexicon() -> &'static SyllableLexicon {
    static LEXICON: OnceLock<SyllableLexicon> = OnceLock::new();
    LEXICON.get_or_init(|| {
        let table = [
            ("science", 2),
            ("quiet", 2),
            ("poem", 2),
            ("poet", 2),
            ("going", 2),
            ("doing", 2),
            ("being", 2),
            ("seeing", 2),
            ("lion", 2),
            ("giant", 2),
            ("diet", 2),
            ("idea", 3),
            ("area", 3),
            ("create", 2),
            ("really", 3),
            ("every", 2),
            ("evening", 2),
            ("looked", 1),
            ("asked", 1),
            ("jumped", 1),
            ("walked", 1),
            ("helped", 1),
            ("watched", 1),
            ("stopped", 1),
            ("liked", 1),
            ("loved", 1),
            ("moved", 1),
            ("lived", 1),
        ];
        SyllableLexicon {
            entries: table
                .iter()
                .map(|(w, c)| (w.to_string(), *c as u32))
                .collect(),
        }
    })
}

const VOWELS: [char; 6] = ['a', 'e', 'i', 'o', 'u', 'y'];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Vowel-group heuristic for one hyphen-free part: maximal vowel groups
/// (a e i o u y), minus a silent final "e" unless it closes a
/// consonant+"le" ending, minimum 1.
fn heuristic_part(part: &str) -> u32 {
    let letters: Vec<char> = part
        .chars()
        .flat_map(|c| c.to_lowercase())
        .filter(|c| c.is_alphabetic())
        .collect();
    if letters.is_empty() {
        return 1;
    }
    let mut groups = 0u32;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    if groups > 1 && letters[n - 1] == 'e' {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Counts syllables with the default exception lexicon.
///
/// Hyphenated words count as one word with syllables summed over the parts.
pub fn count_syllables(word: &str) -> u32 {
    count_syllables_with(builtin_lexicon(), word)
}

/// Counts syllables, consulting `lexicon` (whole word, then each
/// hyphen-separated part) before the heuristic.
pub fn count_syllables_with(lexicon: &SyllableLexicon, word: &str) -> u32 {
    if let Some(c) = lexicon.lookup(word) {
        return c;
    }
    let total: u32 = word
        .split(['-', '‐'])
        .filter(|p| !p.is_empty())
        .map(|p| lexicon.lookup(p).unwrap_or_else(|| heuristic_part(p)))
        .sum();
    total.max(1)
}

/// Flesch Reading Ease:
/// 206.835 - 1.015 (words/sentences) - 84.6 (syllables/words).
pub fn flesch_reading_ease(c: &ReadabilityCounts) -> f64 {
    let wps = c.words as f64 / c.sentences as f64;
    let spw = c.syllables as f64 / c.words as f64;
    206.835 - 1.015 * wps - 84.6 * spw
}

/// Flesch-Kincaid grade:
/// 0.39 (words/sentences) + 11.8 (syllables/words) - 15.59.
pub fn flesch_kincaid(c: &ReadabilityCounts) -> f64 {
    let wps = c.words as f64 / c.sentences as f64;
    let spw = c.syllables as f64 / c.words as f64;
    0.39 * wps + 11.8 * spw - 15.59
}

/// One Flesch grade band; nominal bounds cover 0..100 and classification
/// extends the end bands over the whole real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FleschBand {
    pub band_name: &'static str,
    pub lower: f64,
    pub upper: f64,
}

/// Standard Flesch bands, hardest first.
pub const FLESCH_BANDS: [FleschBand; 7] = [
    FleschBand { band_name: "very difficult", lower: 0.0, upper: 30.0 },
    FleschBand { band_name: "difficult", lower: 30.0, upper: 50.0 },
    FleschBand { band_name: "fairly difficult", lower: 50.0, upper: 60.0 },
    FleschBand { band_name: "standard", lower: 60.0, upper: 70.0 },
    FleschBand { band_name: "fairly easy", lower: 70.0, upper: 80.0 },
    FleschBand { band_name: "easy", lower: 80.0, upper: 90.0 },
    FleschBand { band_name: "very easy", lower: 90.0, upper: 100.0 },
];

/// Total classification: band upper bounds are inclusive, scores beyond the
/// nominal 0..100 range fall into the end bands.
pub fn classify_band(score: f64) -> &'static FleschBand {
    for band in &FLESCH_BANDS[..6] {
        if score <= band.upper {
            return band;
        }
    }
    &FLESCH_BANDS[6]
}

/// Word, sentence and syllable totals of a stream.
pub fn counts(stream: &TokenStream) -> Result<ReadabilityCounts> {
    counts_with(builtin_lexicon(), stream)
}

pub fn counts_with(lexicon: &SyllableLexicon, stream: &TokenStream) -> Result<ReadabilityCounts> {
    let words = stream.word_count() as u64;
    let sentences = stream.sentence_count() as u64;
    if words == 0 || sentences == 0 {
        return Err(Error::UndefinedMeasure {
            measure: "readability",
            reason: "stream has no words or no sentences".into(),
        });
    }
    let syllables = stream
        .tokens()
        .iter()
        .filter(|t| t.is_word)
        .map(|t| count_syllables_with(lexicon, &t.surface) as u64)
        .sum();
    Ok(ReadabilityCounts {
        words,
        sentences,
        syllables,
    })
}

/// Per-sample readability counts over consecutive samples of `sample_size`
/// word tokens (trailing partial sample discarded). Sentences are counted
/// within each sample; a sentence partially inside counts if it contributes
/// at least one word.
pub fn readability_sample_counts(
    stream: &TokenStream,
    sample_size: usize,
) -> Result<Vec<ReadabilityCounts>> {
    if sample_size < 1 {
        return Err(Error::Argument("sample size must be >= 1".into()));
    }
    let sentence_of = stream.sentence_index_of_tokens();
    let lexicon = builtin_lexicon();
    let mut out = Vec::new();
    let mut words = 0u64;
    let mut syllables = 0u64;
    let mut sentences_seen = 0u64;
    let mut last_sentence: Option<usize> = None;
    for (i, t) in stream.tokens().iter().enumerate() {
        if !t.is_word {
            continue;
        }
        words += 1;
        syllables += count_syllables_with(lexicon, &t.surface) as u64;
        if last_sentence != Some(sentence_of[i]) {
            sentences_seen += 1;
            last_sentence = Some(sentence_of[i]);
        }
        if words == sample_size as u64 {
            out.push(ReadabilityCounts {
                words,
                sentences: sentences_seen,
                syllables,
            });
            words = 0;
            syllables = 0;
            sentences_seen = 0;
            last_sentence = None;
        }
    }
    if out.is_empty() {
        return Err(Error::UndefinedMeasure {
            measure: "readability_series",
            reason: format!(
                "no full sample of {sample_size} word tokens (stream has {})",
                stream.word_count()
            ),
        });
    }
    Ok(out)
}

/// Flesch Reading Ease per consecutive `sample_size`-word sample.
pub fn readability_series(stream: &TokenStream, sample_size: usize) -> Result<SampleSeries> {
    let values = readability_sample_counts(stream, sample_size)?
        .iter()
        .map(flesch_reading_ease)
        .collect();
    Ok(SampleSeries {
        measure_name: "flesch_reading_ease".into(),
        segment_size: sample_size,
        values,
    })
}

/// Mean and population SD of word tokens per sentence.
pub fn mean_sentence_length(stream: &TokenStream) -> Result<MeanSd> {
    if stream.sentence_count() == 0 {
        return Err(Error::UndefinedMeasure {
            measure: "mean_sentence_length",
            reason: "stream has no sentences".into(),
        });
    }
    let lengths: Vec<f64> = stream
        .sentences()
        .map(|s| s.iter().filter(|t| t.is_word).count() as f64)
        .collect();
    mean_sd(&lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize_plain, Token, TokenStream};
    use approx::assert_relative_eq;

    #[test]
    fn syllable_trivial_and_derived_examples() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("strength"), 1);
    }

    #[test]
    fn hyphenated_words_sum_over_parts() {
        assert_eq!(count_syllables("well-known"), 2);
        assert_eq!(count_syllables("mother-in-law"), 4);
    }

    // 200-word dictionary-syllabification fixture (word, syllables), built
    // from standard dictionary syllable counts before implementation.
    const SYLLABLE_FIXTURE: &[(&str, u32)] = &[
        // one syllable
        ("cat", 1), ("dog", 1), ("run", 1), ("hide", 1), ("strength", 1),
        ("through", 1), ("thought", 1), ("world", 1), ("friend", 1), ("school", 1),
        ("watch", 1), ("branch", 1), ("stretch", 1), ("truth", 1), ("youth", 1),
        ("street", 1), ("price", 1), ("green", 1), ("plant", 1), ("march", 1),
        ("torch", 1), ("voice", 1), ("choice", 1), ("bread", 1), ("dream", 1),
        ("staff", 1), ("wall", 1), ("face", 1), ("place", 1), ("space", 1),
        ("horse", 1), ("house", 1), ("mouse", 1), ("laugh", 1), ("knife", 1),
        ("thumb", 1), ("wolf", 1), ("clock", 1), ("bridge", 1), ("steel", 1),
        ("wheat", 1), ("looked", 1), ("played", 1), ("jumped", 1), ("asked", 1),
        ("gate", 1), ("note", 1), ("tide", 1), ("theme", 1), ("quote", 1),
        ("nerve", 1), ("pulse", 1), ("lamp", 1), ("desk", 1), ("shelf", 1),
        // two syllables
        ("table", 2), ("apple", 2), ("paper", 2), ("water", 2), ("window", 2),
        ("garden", 2), ("monkey", 2), ("mountain", 2), ("doctor", 2), ("teacher", 2),
        ("reading", 2), ("jumping", 2), ("open", 2), ("happy", 2), ("yellow", 2),
        ("purple", 2), ("simple", 2), ("little", 2), ("middle", 2), ("bottle", 2),
        ("candle", 2), ("jungle", 2), ("turtle", 2), ("winter", 2), ("summer", 2),
        ("morning", 2), ("pattern", 2), ("picture", 2), ("pencil", 2), ("market", 2),
        ("basket", 2), ("button", 2), ("cotton", 2), ("dragon", 2), ("lemon", 2),
        ("melon", 2), ("zebra", 2), ("tiger", 2), ("mother", 2), ("father", 2),
        ("brother", 2), ("sister", 2), ("money", 2), ("funny", 2), ("story", 2),
        ("city", 2), ("party", 2), ("forty", 2), ("sixty", 2), ("army", 2),
        ("cherry", 2), ("lazy", 2), ("tiny", 2), ("empty", 2),
        // three syllables
        ("banana", 3), ("animal", 3), ("camera", 3), ("elephant", 3), ("remember", 3),
        ("together", 3), ("tomorrow", 3), ("yesterday", 3), ("hospital", 3), ("capital", 3),
        ("festival", 3), ("principal", 3), ("musical", 3), ("physical", 3), ("chemical", 3),
        ("practical", 3), ("natural", 3), ("general", 3), ("mineral", 3), ("several", 3),
        ("family", 3), ("memory", 3), ("history", 3), ("victory", 3), ("century", 3),
        ("mystery", 3), ("battery", 3), ("gallery", 3), ("bakery", 3), ("holiday", 3),
        ("energy", 3), ("industry", 3), ("injury", 3), ("quality", 3), ("quantity", 3),
        ("gravity", 3), ("liberty", 3), ("poverty", 3), ("property", 3), ("difficult", 3),
        ("important", 3), ("beautiful", 3), ("dangerous", 3), ("wonderful", 3),
        ("grandfather", 3), ("grandmother", 3), ("umbrella", 3), ("potato", 3),
        ("tomato", 3), ("volcano", 3), ("mosquito", 3), ("chocolate", 3),
        // four syllables
        ("information", 4), ("education", 4), ("generation", 4), ("population", 4),
        ("celebration", 4), ("invitation", 4), ("conversation", 4), ("declaration", 4),
        ("explanation", 4), ("decoration", 4), ("operation", 4), ("calculator", 4),
        ("caterpillar", 4), ("secretary", 4), ("necessary", 4), ("dictionary", 4),
        ("television", 4), ("helicopter", 4), ("supermarket", 4), ("watermelon", 4),
        ("kindergarten", 4), ("temperature", 4), ("community", 4), ("ability", 4),
        ("activity", 4), ("authority", 4), ("majority", 4), ("security", 4),
        ("ceremony", 4), ("category", 4), ("avocado", 4),
        // five syllables
        ("organization", 5), ("university", 5), ("opportunity", 5), ("possibility", 5),
        ("electricity", 5), ("vocabulary", 5), ("imagination", 5), ("mathematical", 5),
    ];

    #[test]
    fn syllable_fixture_has_200_words() {
        assert_eq!(SYLLABLE_FIXTURE.len(), 200);
    }

    #[test]
    fn syllable_agreement_at_least_90_percent() {
        let agree = SYLLABLE_FIXTURE
            .iter()
            .filter(|(w, c)| count_syllables(w) == *c)
            .count();
        let ratio = agree as f64 / SYLLABLE_FIXTURE.len() as f64;
        assert!(ratio >= 0.90, "agreement {ratio:.3}");
    }

    #[test]
    fn bare_heuristic_agreement_also_high() {
        // the heuristic itself, without the exception lexicon
        let empty = SyllableLexicon::default();
        let agree = SYLLABLE_FIXTURE
            .iter()
            .filter(|(w, c)| count_syllables_with(&empty, w) == *c)
            .count();
        let ratio = agree as f64 / SYLLABLE_FIXTURE.len() as f64;
        assert!(ratio >= 0.90, "bare heuristic agreement {ratio:.3}");
    }

    #[test]
    fn lexicon_overrides_heuristic() {
        let lex = SyllableLexicon::from_str_table("# test\nfoo 7\n").unwrap();
        assert_eq!(count_syllables_with(&lex, "foo"), 7);
        assert_eq!(count_syllables("science"), 2);
        assert_eq!(count_syllables("quiet"), 2);
    }

    #[test]
    fn flesch_formula_direct_evaluation() {
        // words/sentences = 10, syllables/words = 1
        let c = ReadabilityCounts { words: 10, sentences: 1, syllables: 10 };
        assert_relative_eq!(flesch_reading_ease(&c), 112.085, max_relative = 1e-12);
        assert_relative_eq!(flesch_kincaid(&c), 0.11, max_relative = 1e-9);
    }

    #[test]
    fn formulas_depend_only_on_the_ratios() {
        let c1 = ReadabilityCounts { words: 40, sentences: 4, syllables: 52 };
        let c2 = ReadabilityCounts { words: 80, sentences: 8, syllables: 104 };
        assert_eq!(flesch_reading_ease(&c1), flesch_reading_ease(&c2));
        assert_eq!(flesch_kincaid(&c1), flesch_kincaid(&c2));
    }

    #[test]
    fn band_anchor_points() {
        assert_eq!(classify_band(70.0).band_name, "standard");
        assert_eq!(classify_band(57.0).band_name, "fairly difficult");
        assert_eq!(classify_band(30.0).band_name, "very difficult");
        assert_eq!(classify_band(95.0).band_name, "very easy");
        // total on the real line
        assert_eq!(classify_band(-10.0).band_name, "very difficult");
        assert_eq!(classify_band(130.0).band_name, "very easy");
    }

    #[test]
    fn bands_partition_without_gaps() {
        for w in FLESCH_BANDS.windows(2) {
            assert_eq!(w[0].upper, w[1].lower);
        }
        assert_eq!(FLESCH_BANDS[0].lower, 0.0);
        assert_eq!(FLESCH_BANDS[6].upper, 100.0);
    }

    #[test]
    fn series_on_uniform_text_has_zero_sd() {
        // identical sentences -> identical samples
        let text = "The cat sat here. ".repeat(100);
        let stream = tokenize_plain(&text, "t");
        let series = readability_series(&stream, 40).unwrap();
        assert!(series.values.len() >= 2);
        let sd = mean_sd(&series.values).unwrap().sd;
        assert!(sd.abs() < 1e-9, "sd {sd}");
    }

    #[test]
    fn series_length_and_undefined_cases() {
        let text = "One two three four. Five six seven eight. ".repeat(2);
        let stream = tokenize_plain(&text, "t");
        let series = readability_series(&stream, 8).unwrap();
        assert_eq!(series.values.len(), 2);
        assert!(readability_series(&stream, 1000).is_err());
    }

    #[test]
    fn counts_satisfy_their_invariants() {
        let stream = tokenize_plain("The cat sat on a mat. A dog ran away happily.", "t");
        let c = counts(&stream).unwrap();
        assert_eq!(c.sentences, 2);
        assert!(c.words >= c.sentences);
        assert!(c.syllables >= c.words);
        assert!(counts(&TokenStream::empty("e")).is_err());
    }

    #[test]
    fn mean_sentence_length_examples() {
        let mut tokens = Vec::new();
        for i in 0..8 {
            tokens.push(Token::word(format!("w{i}")));
        }
        let s = TokenStream::new(tokens, vec![3, 8], "t").unwrap();
        let msl = mean_sentence_length(&s).unwrap();
        assert_relative_eq!(msl.mean, 4.0);
        assert_relative_eq!(msl.sd, 1.0);
        let one = TokenStream::new(vec![Token::word("a")], vec![1], "t").unwrap();
        assert_eq!(mean_sentence_length(&one).unwrap().sd, 0.0);
        assert!(mean_sentence_length(&TokenStream::empty("e")).is_err());
    }
}
