//! Corpus ingestion and preparation.
//!
//! Two input formats are supported: plain UTF-8 text (tokenized and
//! sentence-split here) and vertical tagged text, one `surface<TAB>pos<TAB>lemma`
//! token per line as produced by TreeTagger-style taggers. Everything downstream
//! works on [`TokenStream`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One token: surface form plus optional tag and lemma.
///
/// `is_word` is false for punctuation and symbol tokens; lexical measures
/// run over word tokens only. Numerals count as word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub pos: Option<String>,
    pub lemma: Option<String>,
    pub is_word: bool,
}

impl Token {
    pub fn word(surface: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            pos: None,
            lemma: None,
            is_word: true,
        }
    }

    pub fn punct(surface: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            pos: None,
            lemma: None,
            is_word: false,
        }
    }
}

/// An ordered token sequence with sentence boundaries.
///
/// `sentence_bounds` holds end indices (exclusive) of each sentence; it is
/// strictly increasing and its last entry equals the token count, so every
/// token belongs to exactly one sentence and every sentence is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    tokens: Vec<Token>,
    sentence_bounds: Vec<usize>,
    source_id: String,
}

impl TokenStream {
    /// Builds a stream, validating the sentence-bound invariants.
    pub fn new(
        tokens: Vec<Token>,
        sentence_bounds: Vec<usize>,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        let mut prev = 0usize;
        for (i, &b) in sentence_bounds.iter().enumerate() {
            if b <= prev {
                return Err(Error::Argument(format!(
                    "sentence bound {i} ({b}) is not strictly increasing"
                )));
            }
            prev = b;
        }
        if sentence_bounds.last().copied().unwrap_or(0) != tokens.len() {
            return Err(Error::Argument(format!(
                "final sentence bound must equal token count {}",
                tokens.len()
            )));
        }
        if tokens.iter().any(|t| t.surface.is_empty()) {
            return Err(Error::Argument("token with empty surface".into()));
        }
        if tokens.iter().any(|t| t.pos.as_deref() == Some("")) {
            return Err(Error::Argument("token with empty POS label".into()));
        }
        Ok(TokenStream {
            tokens,
            sentence_bounds,
            source_id: source_id.into(),
        })
    }

    pub fn empty(source_id: impl Into<String>) -> Self {
        TokenStream {
            tokens: Vec::new(),
            sentence_bounds: Vec::new(),
            source_id: source_id.into(),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn sentence_bounds(&self) -> &[usize] {
        &self.sentence_bounds
    }

    pub fn sentence_count(&self) -> usize {
        self.sentence_bounds.len()
    }

    /// Iterates sentences as token slices.
    pub fn sentences(&self) -> impl Iterator<Item = &[Token]> {
        let bounds = &self.sentence_bounds;
        let tokens = &self.tokens;
        bounds.iter().scan(0usize, move |start, &end| {
            let s = &tokens[*start..end];
            *start = end;
            Some(s)
        })
    }

    /// Number of word (non-punctuation) tokens.
    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word).count()
    }

    /// Sentence index of each token, parallel to `tokens()`.
    pub fn sentence_index_of_tokens(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.tokens.len());
        let mut start = 0;
        for (si, &end) in self.sentence_bounds.iter().enumerate() {
            for _ in start..end {
                out.push(si);
            }
            start = end;
        }
        out
    }

    /// Restricts the stream to word tokens, re-indexing sentence bounds.
    /// Sentences left empty (all punctuation) are dropped. Idempotent.
    pub fn word_tokens(&self) -> TokenStream {
        let mut tokens = Vec::with_capacity(self.tokens.len());
        let mut bounds = Vec::with_capacity(self.sentence_bounds.len());
        for sentence in self.sentences() {
            let before = tokens.len();
            tokens.extend(sentence.iter().filter(|t| t.is_word).cloned());
            if tokens.len() > before {
                bounds.push(tokens.len());
            }
        }
        TokenStream {
            tokens,
            sentence_bounds: bounds,
            source_id: self.source_id.clone(),
        }
    }

    /// Splits the stream into consecutive non-overlapping segments of exactly
    /// `size` word tokens; a trailing partial segment is discarded. Segment
    /// bounds are token indices into this stream, so punctuation between the
    /// words of a segment stays inside it.
    ///
    /// Multi-document corpora should be segmented one document-stream at a
    /// time so segments never straddle document boundaries.
    pub fn segment(&self, size: usize) -> Result<Vec<Segment>> {
        if size < 1 {
            return Err(Error::Argument("segment size must be >= 1".into()));
        }
        let mut segments = Vec::new();
        let mut start = 0usize;
        let mut words = 0usize;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.is_word {
                words += 1;
                if words == size {
                    segments.push(Segment {
                        start,
                        end: i + 1,
                        word_count: size,
                    });
                    start = i + 1;
                    words = 0;
                }
            }
        }
        Ok(segments)
    }

    /// Draws whole sentences uniformly at random without replacement (seeded,
    /// reproducible) until the next drawn sentence would exceed `budget`
    /// tokens; the selected sentences keep their original order.
    ///
    /// If the stream holds fewer than `budget` tokens the full stream is
    /// returned and [`SampledStream::undersized`] is set.
    pub fn sample_sentences(&self, budget: usize, seed: u64) -> Result<SampledStream> {
        if budget < 1 {
            return Err(Error::Argument("sampling budget must be >= 1".into()));
        }
        if self.len() <= budget {
            return Ok(SampledStream {
                stream: self.clone(),
                undersized: self.len() < budget,
            });
        }
        let spans: Vec<(usize, usize)> = {
            let mut v = Vec::with_capacity(self.sentence_count());
            let mut start = 0;
            for &end in &self.sentence_bounds {
                v.push((start, end));
                start = end;
            }
            v
        };
        let mut order: Vec<usize> = (0..spans.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Fisher-Yates; kept explicit so the draw order is pinned by this code
        // rather than by rand's shuffle implementation.
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let mut selected = Vec::new();
        let mut total = 0usize;
        for &si in &order {
            let len = spans[si].1 - spans[si].0;
            if total + len > budget {
                break;
            }
            selected.push(si);
            total += len;
        }
        selected.sort_unstable();
        let mut tokens = Vec::with_capacity(total);
        let mut bounds = Vec::with_capacity(selected.len());
        for si in selected {
            let (s, e) = spans[si];
            tokens.extend_from_slice(&self.tokens[s..e]);
            bounds.push(tokens.len());
        }
        Ok(SampledStream {
            stream: TokenStream {
                tokens,
                sentence_bounds: bounds,
                source_id: self.source_id.clone(),
            },
            undersized: false,
        })
    }
}

/// A contiguous run of tokens containing a fixed number of word tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub word_count: usize,
}

/// Result of [`TokenStream::sample_sentences`].
#[derive(Debug, Clone)]
pub struct SampledStream {
    pub stream: TokenStream,
    /// True when the input stream held fewer tokens than the budget, so the
    /// full stream was returned.
    pub undersized: bool,
}

/// How a token maps to a "type" for diversity measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TypeDef {
    /// Lowercased surface form (default).
    #[default]
    Surface,
    /// Lowercased lemma when present, falling back to the surface form.
    Lemma,
}

impl TypeDef {
    pub fn key(&self, token: &Token) -> String {
        match self {
            TypeDef::Surface => token.surface.to_lowercase(),
            TypeDef::Lemma => match &token.lemma {
                Some(l) => l.to_lowercase(),
                None => token.surface.to_lowercase(),
            },
        }
    }
}

impl std::str::FromStr for TypeDef {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "surface" => Ok(TypeDef::Surface),
            "lemma" => Ok(TypeDef::Lemma),
            other => Err(Error::Argument(format!(
                "unknown type definition {other:?} (expected surface|lemma)"
            ))),
        }
    }
}

/// Abbreviations that do not end a sentence. Matched case-insensitively
/// against a maximal run of letters and internal periods ending in a period.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "etc.", "cf.", "vs.", "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "no.",
    "fig.", "al.", "jr.", "sr.",
];

/// Plain-text tokenizer configuration.
#[derive(Debug, Clone)]
pub struct PlainTextConfig {
    /// Lowercased abbreviation forms (each ends with a period).
    pub abbreviations: Vec<String>,
}

impl Default for PlainTextConfig {
    fn default() -> Self {
        PlainTextConfig {
            abbreviations: DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Tokenizes a plain-text document with the default configuration.
///
/// Words are maximal alphanumeric runs; internal `'`, `’` and `-` are kept
/// when flanked by alphanumerics (hyphenated words are single tokens), and
/// `.` is kept between digits (decimal numbers). Every other non-whitespace
/// character becomes a single-character punctuation token. A sentence ends
/// after `.`, `!` or `?` followed by whitespace and a capital letter, or at
/// end of text; abbreviations like "e.g." are guarded.
pub fn tokenize_plain(text: &str, source_id: &str) -> TokenStream {
    tokenize_plain_with(text, source_id, &PlainTextConfig::default())
}

/// Tokenizes UTF-8 bytes, reporting the byte offset of any encoding error.
pub fn tokenize_plain_bytes(bytes: &[u8], source_id: &str) -> Result<TokenStream> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Ingest {
        path: Some(source_id.to_string()),
        line: None,
        msg: format!("invalid UTF-8 at byte offset {}", e.valid_up_to()),
    })?;
    Ok(tokenize_plain(text, source_id))
}

pub fn tokenize_plain_with(text: &str, source_id: &str, config: &PlainTextConfig) -> TokenStream {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens: Vec<Token> = Vec::new();
    let mut bounds: Vec<usize> = Vec::new();
    let mut i = 0usize;

    let is_word_char = |c: char| c.is_alphanumeric();
    let followed_by_capital = |mut j: usize| -> bool {
        // whitespace+ then an uppercase letter
        if j >= chars.len() || !chars[j].is_whitespace() {
            return false;
        }
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        j < chars.len() && chars[j].is_uppercase()
    };
    let at_text_end = |mut j: usize| -> bool {
        while j < chars.len() {
            if !chars[j].is_whitespace() {
                return false;
            }
            j += 1;
        }
        true
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_word_char(c) {
            // Abbreviation lookahead: maximal run of letters and periods that
            // ends in a period, e.g. "e.g." or "Mr.".
            if c.is_alphabetic() {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphabetic() || chars[j] == '.') {
                    j += 1;
                }
                if j > i && chars[j - 1] == '.' {
                    let cand: String = chars[i..j].iter().collect();
                    let lower = cand.to_lowercase();
                    let single_initial = j - i == 2 && chars[i].is_alphabetic();
                    if single_initial || config.abbreviations.contains(&lower) {
                        tokens.push(Token::word(cand));
                        i = j;
                        continue;
                    }
                }
            }
            let start = i;
            i += 1;
            while i < chars.len() {
                let joiner = (chars[i] == '\'' || chars[i] == '’' || chars[i] == '-')
                    && i + 1 < chars.len()
                    && is_word_char(chars[i + 1]);
                let decimal_point = chars[i] == '.'
                    && chars[i - 1].is_ascii_digit()
                    && i + 1 < chars.len()
                    && chars[i + 1].is_ascii_digit();
                if is_word_char(chars[i]) {
                    i += 1;
                } else if joiner || decimal_point {
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token::word(chars[start..i].iter().collect::<String>()));
        } else {
            tokens.push(Token::punct(c.to_string()));
            i += 1;
            if matches!(c, '.' | '!' | '?') && (followed_by_capital(i) || at_text_end(i)) {
                bounds.push(tokens.len());
            }
        }
    }
    if bounds.last().copied().unwrap_or(0) < tokens.len() {
        bounds.push(tokens.len());
    }
    TokenStream {
        tokens,
        sentence_bounds: bounds,
        source_id: source_id.to_string(),
    }
}

/// Vertical-format configuration: the sentence-end tag and the tags treated
/// as punctuation (non-word tokens).
#[derive(Debug, Clone)]
pub struct VerticalConfig {
    pub sentence_end_tag: String,
    pub punctuation_tags: Vec<String>,
}

impl Default for VerticalConfig {
    fn default() -> Self {
        VerticalConfig {
            sentence_end_tag: "SENT".into(),
            punctuation_tags: ["SENT", "PUN", ",", ":", "(", ")", "''", "``", ".", "$"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

/// Lemma placeholder used by TreeTagger for unknown lemmas; mapped to `None`.
const UNKNOWN_LEMMA: &str = "<unknown>";

/// Reads vertical tagged text: one `surface<TAB>pos<TAB>lemma` triple per
/// line, blank lines ignored. A sentence ends at each token whose tag equals
/// the configured sentence-end tag; tokens after the last such tag close a
/// final sentence at end of input. A non-empty file without a single
/// sentence-end tag is rejected (almost certainly a tagset mismatch).
pub fn read_vertical(text: &str, source_id: &str, config: &VerticalConfig) -> Result<TokenStream> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut bounds: Vec<usize> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (surface, pos, lemma) = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(p), Some(l)) if fields.next().is_none() => (s, p, l),
            _ => {
                return Err(Error::Ingest {
                    path: Some(source_id.to_string()),
                    line: Some(lineno + 1),
                    msg: format!("expected 3 tab-separated fields, got {:?}", line),
                })
            }
        };
        if surface.is_empty() || pos.is_empty() {
            return Err(Error::Ingest {
                path: Some(source_id.to_string()),
                line: Some(lineno + 1),
                msg: "empty surface or tag field".into(),
            });
        }
        let is_word = !config.punctuation_tags.iter().any(|t| t == pos);
        tokens.push(Token {
            surface: surface.to_string(),
            pos: Some(pos.to_string()),
            lemma: if lemma.is_empty() || lemma == UNKNOWN_LEMMA {
                None
            } else {
                Some(lemma.to_string())
            },
            is_word,
        });
        if pos == config.sentence_end_tag {
            bounds.push(tokens.len());
        }
    }
    if bounds.is_empty() {
        return Err(Error::Ingest {
            path: Some(source_id.to_string()),
            line: None,
            msg: if tokens.is_empty() {
                "zero sentences: file is empty".into()
            } else {
                format!(
                    "zero sentences: no token tagged {:?} found",
                    config.sentence_end_tag
                )
            },
        });
    }
    if bounds.last().copied().unwrap_or(0) < tokens.len() {
        bounds.push(tokens.len());
    }
    TokenStream::new(tokens, bounds, source_id)
}

/// Serializes a stream to vertical format. Requires every token to carry a
/// tag. Sentence boundaries are recoverable on re-read only when each
/// sentence ends with a sentence-end-tagged token, which holds for every
/// stream produced by [`read_vertical`].
pub fn write_vertical(stream: &TokenStream) -> Result<String> {
    let mut out = String::new();
    for (i, t) in stream.tokens().iter().enumerate() {
        let pos = t.pos.as_deref().ok_or_else(|| {
            Error::Argument(format!(
                "token {i} ({:?}) has no POS tag; vertical output needs tagged input",
                t.surface
            ))
        })?;
        out.push_str(&t.surface);
        out.push('\t');
        out.push_str(pos);
        out.push('\t');
        out.push_str(t.lemma.as_deref().unwrap_or(UNKNOWN_LEMMA));
        out.push('\n');
    }
    Ok(out)
}

/// Reconstructs plain text from a stream: tokens joined with spaces, one
/// sentence per line. Lossy with respect to original spacing.
pub fn write_plain(stream: &TokenStream) -> String {
    let mut out = String::new();
    for sentence in stream.sentences() {
        for (i, t) in sentence.iter().enumerate() {
            if i > 0 && t.is_word {
                out.push(' ');
            }
            out.push_str(&t.surface);
        }
        out.push('\n');
    }
    out
}
