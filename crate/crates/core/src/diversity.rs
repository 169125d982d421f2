//! Type-based lexical diversity: TTR, MSTTR, corrected indices, frequency
//! spectra, observed vocabulary-growth curves, growth rate, and binomial
//! interpolation to smaller sample sizes.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{TokenStream, TypeDef};
use crate::error::{Error, Result};

/// Counts V(m, N) of types occurring exactly m times in N tokens.
///
/// Invariants: sum of V(m) over m equals V, and sum of m·V(m) equals N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySpectrum {
    n: u64,
    v: u64,
    counts: BTreeMap<u64, u64>,
}

impl FrequencySpectrum {
    /// Builds a spectrum from per-class counts, validating the identities.
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Result<Self> {
        if counts.keys().any(|&m| m == 0) {
            return Err(Error::Argument("frequency class m = 0 is not allowed".into()));
        }
        let v: u64 = counts.values().sum();
        let n: u64 = counts.iter().map(|(m, vm)| m * vm).sum();
        Ok(FrequencySpectrum { n, v, counts })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    /// V(m, N): number of types occurring exactly `m` times.
    pub fn class(&self, m: u64) -> u64 {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    /// Hapax legomena count V(1, N).
    pub fn hapaxes(&self) -> u64 {
        self.class(1)
    }

    pub fn classes(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&m, &vm)| (m, vm))
    }

    pub fn nonzero_class_count(&self) -> usize {
        self.counts.len()
    }

    /// Two-column CSV `m,Vm` preceded by `#N=` and `#V=` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#N={}\n#V={}\n", self.n, self.v));
        out.push_str("m,Vm\n");
        for (m, vm) in &self.counts {
            out.push_str(&format!("{m},{vm}\n"));
        }
        out
    }

    /// Parses the CSV exchange format produced by [`FrequencySpectrum::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut n: Option<u64> = None;
        let mut v: Option<u64> = None;
        let mut counts = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Ingest {
                path: None,
                line: Some(lineno + 1),
                msg,
            };
            if let Some(rest) = line.strip_prefix("#N=") {
                n = Some(rest.parse().map_err(|e| bad(format!("bad #N= value: {e}")))?);
            } else if let Some(rest) = line.strip_prefix("#V=") {
                v = Some(rest.parse().map_err(|e| bad(format!("bad #V= value: {e}")))?);
            } else if line.starts_with('#') || line == "m,Vm" {
                continue;
            } else {
                let (m_s, vm_s) = line
                    .split_once(',')
                    .ok_or_else(|| bad(format!("expected m,Vm row, got {line:?}")))?;
                let m: u64 = m_s.trim().parse().map_err(|e| bad(format!("bad m: {e}")))?;
                let vm: u64 = vm_s.trim().parse().map_err(|e| bad(format!("bad Vm: {e}")))?;
                if vm > 0 {
                    counts.insert(m, vm);
                }
            }
        }
        let spectrum = FrequencySpectrum::from_counts(counts)?;
        if let Some(n) = n {
            if n != spectrum.n {
                return Err(Error::Ingest {
                    path: None,
                    line: None,
                    msg: format!("#N={n} disagrees with spectrum token total {}", spectrum.n),
                });
            }
        }
        if let Some(v) = v {
            if v != spectrum.v {
                return Err(Error::Ingest {
                    path: None,
                    line: None,
                    msg: format!("#V={v} disagrees with spectrum type total {}", spectrum.v),
                });
            }
        }
        Ok(spectrum)
    }
}

/// Per-segment (or per-sample) values of one measure, in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSeries {
    pub measure_name: String,
    pub segment_size: usize,
    pub values: Vec<f64>,
}

/// Whether a growth curve was observed, binomially interpolated, or
/// extrapolated from a fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Observed,
    Interpolated,
    Extrapolated,
}

/// One vocabulary-growth checkpoint: V, V(1) and V(2) at sample size N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: u64,
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
}

/// A vocabulary-growth curve with strictly increasing checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub kind: CurveKind,
    pub checkpoints: Vec<GrowthPoint>,
}

/// Type-token ratio over word tokens: distinct types / tokens.
pub fn ttr(stream: &TokenStream, typedef: TypeDef) -> Result<f64> {
    let mut types = HashSet::new();
    let mut n = 0u64;
    for t in stream.tokens().iter().filter(|t| t.is_word) {
        types.insert(typedef.key(t));
        n += 1;
    }
    if n == 0 {
        return Err(Error::UndefinedMeasure {
            measure: "ttr",
            reason: "stream has no word tokens".into(),
        });
    }
    Ok(types.len() as f64 / n as f64)
}

/// Mean segmental TTR plus the full per-segment series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Msttr {
    pub mean: f64,
    pub series: SampleSeries,
}

/// Mean of per-segment TTRs over consecutive segments of `segment_size`
/// word tokens; the trailing partial segment is discarded.
pub fn msttr(stream: &TokenStream, segment_size: usize, typedef: TypeDef) -> Result<Msttr> {
    let segments = stream.segment(segment_size)?;
    if segments.is_empty() {
        return Err(Error::UndefinedMeasure {
            measure: "msttr",
            reason: format!(
                "no full segment of {segment_size} word tokens (stream has {})",
                stream.word_count()
            ),
        });
    }
    let tokens = stream.tokens();
    let mut values = Vec::with_capacity(segments.len());
    let mut types = HashSet::new();
    for seg in &segments {
        types.clear();
        for t in tokens[seg.start..seg.end].iter().filter(|t| t.is_word) {
            types.insert(typedef.key(t));
        }
        values.push(types.len() as f64 / seg.word_count as f64);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(Msttr {
        mean,
        series: SampleSeries {
            measure_name: "ttr".into(),
            segment_size,
            values,
        },
    })
}

/// Size-corrected diversity indices computed from a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectedIndices {
    pub herdan_c: f64,
    pub guiraud_r: f64,
    pub yule_k: f64,
}

/// Herdan's C = ln V / ln N, Guiraud's R = V/sqrt(N) and
/// Yule's K = 10^4 (sum m^2 V(m) - N) / N^2.
pub fn corrected_indices(spectrum: &FrequencySpectrum) -> Result<CorrectedIndices> {
    let n = spectrum.n();
    let v = spectrum.v();
    if n < 2 || v < 1 {
        return Err(Error::UndefinedMeasure {
            measure: "corrected_indices",
            reason: format!("need N >= 2 and V >= 1, got N={n}, V={v}"),
        });
    }
    let nf = n as f64;
    let vf = v as f64;
    let sum_m2: f64 = spectrum
        .classes()
        .map(|(m, vm)| (m as f64) * (m as f64) * vm as f64)
        .sum();
    Ok(CorrectedIndices {
        herdan_c: vf.ln() / nf.ln(),
        guiraud_r: vf / nf.sqrt(),
        yule_k: 1e4 * (sum_m2 - nf) / (nf * nf),
    })
}

/// Exact frequency spectrum of the stream's word tokens.
pub fn frequency_spectrum(stream: &TokenStream, typedef: TypeDef) -> Result<FrequencySpectrum> {
    let mut freq: HashMap<String, u64> = HashMap::new();
    for t in stream.tokens().iter().filter(|t| t.is_word) {
        *freq.entry(typedef.key(t)).or_insert(0) += 1;
    }
    if freq.is_empty() {
        return Err(Error::UndefinedMeasure {
            measure: "frequency_spectrum",
            reason: "stream has no word tokens".into(),
        });
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &m in freq.values() {
        *counts.entry(m).or_insert(0) += 1;
    }
    FrequencySpectrum::from_counts(counts)
}

/// Vocabulary growth rate V(1, N) / N, the hapax share of the tokens.
pub fn growth_rate(spectrum: &FrequencySpectrum) -> Result<f64> {
    if spectrum.n() == 0 {
        return Err(Error::UndefinedMeasure {
            measure: "growth_rate",
            reason: "empty spectrum".into(),
        });
    }
    Ok(spectrum.hapaxes() as f64 / spectrum.n() as f64)
}

/// Observed growth curve: V, V(1) and V(2) recorded every `step` word
/// tokens (and at the final token) in a single linear pass.
pub fn observed_growth(
    stream: &TokenStream,
    step: usize,
    typedef: TypeDef,
) -> Result<GrowthCurve> {
    if step < 1 {
        return Err(Error::Argument("growth step must be >= 1".into()));
    }
    let mut freq: HashMap<String, u64> = HashMap::new();
    let (mut v, mut v1, mut v2) = (0u64, 0u64, 0u64);
    let mut n = 0u64;
    let mut checkpoints = Vec::new();
    for t in stream.tokens().iter().filter(|t| t.is_word) {
        let c = freq.entry(typedef.key(t)).or_insert(0);
        *c += 1;
        match *c {
            1 => {
                v += 1;
                v1 += 1;
            }
            2 => {
                v1 -= 1;
                v2 += 1;
            }
            3 => {
                v2 -= 1;
            }
            _ => {}
        }
        n += 1;
        if n.is_multiple_of(step as u64) {
            checkpoints.push(GrowthPoint {
                n,
                v: v as f64,
                v1: v1 as f64,
                v2: v2 as f64,
            });
        }
    }
    if n > 0 && checkpoints.last().map(|p| p.n) != Some(n) {
        checkpoints.push(GrowthPoint {
            n,
            v: v as f64,
            v1: v1 as f64,
            v2: v2 as f64,
        });
    }
    Ok(GrowthCurve {
        kind: CurveKind::Observed,
        checkpoints,
    })
}

/// Expected vocabulary size at a smaller sample size N' <= N:
/// E\[V(N')\] = sum over m of V(m, N)·(1 - (1 - N'/N)^m).
pub fn binomial_interpolation(spectrum: &FrequencySpectrum, n_prime: u64) -> Result<f64> {
    let n = spectrum.n();
    if n_prime > n {
        return Err(Error::Argument(format!(
            "N' = {n_prime} exceeds N = {n}; extrapolation requires a fitted model"
        )));
    }
    if n_prime == 0 {
        return Ok(0.0);
    }
    let keep = 1.0 - n_prime as f64 / n as f64;
    let mut expected = 0.0;
    for (m, vm) in spectrum.classes() {
        expected += vm as f64 * (1.0 - keep.powf(m as f64));
    }
    Ok(expected)
}
