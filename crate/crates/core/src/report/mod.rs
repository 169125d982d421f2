//! Report assembly: computes every applicable measure for one corpus or a
//! two-corpus comparison and renders JSON, CSV tables, and SVG plots.
//!
//! Measures that cannot be computed for the given input are marked
//! unavailable with a reason instead of being dropped; one failed measure
//! never aborts the rest of the report.

mod svg;

pub use svg::{render_growth_block, render_svg, CorpusSide, PlotKind};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{TokenStream, TypeDef};
use crate::density::{lexical_density, DensityRatios, TagClassMap};
use crate::diversity::{
    self, CorrectedIndices, FrequencySpectrum, GrowthCurve, SampleSeries,
};
use crate::dlevel::DlevelDistribution;
use crate::error::{Error, Result};
use crate::lnre::{self, LnreFamily, LnreModel, LnreParams, ZTest};
use crate::readability::{
    self, classify_band, flesch_kincaid, flesch_reading_ease, FLESCH_BANDS,
};
use crate::stats::{kde, ks_two_sample, mean_sd, KsResult};

/// A measure value or the reason it is unavailable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Measure<T> {
    Available { value: T },
    Unavailable { reason: String },
}

impl<T> Measure<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(value) => Measure::Available { value },
            Err(e) => Measure::Unavailable {
                reason: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Measure::Available { value } => Some(value),
            Measure::Unavailable { .. } => None,
        }
    }

    pub fn is_available(&self) -> bool {
        matches!(self, Measure::Available { .. })
    }
}

/// Configuration of the measure battery.
#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub segment_size: usize,
    pub readability_sample: usize,
    pub family: LnreFamily,
    pub typedef: TypeDef,
    pub tag_map: TagClassMap,
    pub seed: u64,
    /// Number of growth-curve checkpoints over the corpus.
    pub growth_points: usize,
    /// Factor by which the expected growth curve extends past the corpus.
    pub extrapolation_factor: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            segment_size: 100,
            readability_sample: 1000,
            family: LnreFamily::Gigp,
            typedef: TypeDef::Surface,
            tag_map: TagClassMap::default(),
            seed: 0,
            growth_points: 40,
            extrapolation_factor: 2,
        }
    }
}

/// MSTTR summary with the full per-segment series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsttrBlock {
    pub mean: f64,
    pub sd: f64,
    pub segment_size: usize,
    pub series: SampleSeries,
}

/// Flesch Reading Ease over fixed-size samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleschBlock {
    pub mean: f64,
    pub sd: f64,
    pub sample_size: usize,
    pub band_of_mean: String,
    pub series: SampleSeries,
}

/// Flesch-Kincaid grade over the same samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FkBlock {
    pub mean: f64,
    pub sd: f64,
    pub sample_size: usize,
}

/// Mean/SD pair, serialized for the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSdBlock {
    pub mean: f64,
    pub sd: f64,
}

/// Fitted-model summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LnreBlock {
    pub family: LnreFamily,
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "S")]
    pub population_size: Option<f64>,
    pub chisq: f64,
    pub df: i64,
    pub p: f64,
}

impl LnreBlock {
    fn from_model(model: &LnreModel) -> Self {
        let mut params = BTreeMap::new();
        match model.params() {
            LnreParams::Zm { alpha, b } => {
                params.insert("alpha".into(), alpha);
                params.insert("b".into(), b);
            }
            LnreParams::Fzm { alpha, a, b } => {
                params.insert("alpha".into(), alpha);
                params.insert("a".into(), a);
                params.insert("b".into(), b);
            }
            LnreParams::Gigp { gamma, b, c } => {
                params.insert("gamma".into(), gamma);
                params.insert("b".into(), b);
                params.insert("c".into(), c);
            }
        }
        let record = model.fit_record().expect("fitted model has a record");
        LnreBlock {
            family: model.family(),
            params,
            n: model.fitted_n().unwrap_or(0),
            population_size: model.population_size(),
            chisq: record.chisq,
            df: record.df,
            p: record.p,
        }
    }

    /// Rebuilds the model (for growth evaluation on a parsed report).
    pub fn to_model(&self) -> Result<LnreModel> {
        let get = |k: &str| -> Result<f64> {
            self.params
                .get(k)
                .copied()
                .ok_or_else(|| Error::Argument(format!("missing LNRE parameter {k:?}")))
        };
        match self.family {
            LnreFamily::Zm => LnreModel::new_zm(get("alpha")?, get("b")?),
            LnreFamily::Fzm => LnreModel::new_fzm(get("alpha")?, get("a")?, get("b")?),
            LnreFamily::Gigp => LnreModel::new_gigp(get("gamma")?, get("b")?, get("c")?),
        }
    }
}

/// Observed and expected vocabulary growth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthBlock {
    pub observed: GrowthCurve,
    /// Interpolated and extrapolated curves from the fitted model; empty
    /// when no model could be fitted.
    pub expected: Vec<GrowthCurve>,
}

/// All measures for one corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusBlock {
    pub name: String,
    pub tokens: u64,
    pub word_tokens: u64,
    pub sentences: u64,
    pub ttr: Measure<f64>,
    pub msttr: Measure<MsttrBlock>,
    pub corrected: Measure<CorrectedIndices>,
    pub growth_rate: Measure<f64>,
    pub density: Measure<DensityRatios>,
    pub flesch: Measure<FleschBlock>,
    pub flesch_kincaid: Measure<FkBlock>,
    pub mean_sentence_length: Measure<MeanSdBlock>,
    pub lnre: Measure<LnreBlock>,
    pub growth: Measure<GrowthBlock>,
    /// Present only for reports built from parsed-sentence input.
    pub dlevel: Option<DlevelDistribution>,
}

/// Named KS test in the comparison block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedKs {
    pub measure: String,
    pub ks: KsResult,
}

/// Two-corpus comparison results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonBlock {
    pub ks_tests: Vec<NamedKs>,
    pub growth_z: Measure<ZTest>,
}

/// Run provenance; deliberately free of timestamps so identical runs are
/// byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_files: Vec<String>,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
}

/// Flesch band table entry (exported once per report).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandEntry {
    pub band_name: String,
    pub lower: f64,
    pub upper: f64,
}

/// The complete single- or two-corpus report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub corpus_a: CorpusBlock,
    pub corpus_b: Option<CorpusBlock>,
    pub comparison: Option<ComparisonBlock>,
    pub flesch_bands: Vec<BandEntry>,
    pub provenance: Provenance,
}

impl ComplexityReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("bad report JSON: {e}")))
    }

    pub fn block(&self, side: CorpusSide) -> Option<&CorpusBlock> {
        match side {
            CorpusSide::A => Some(&self.corpus_a),
            CorpusSide::B => self.corpus_b.as_ref(),
        }
    }

    /// True when every applicable measure on every corpus is available.
    pub fn is_complete(&self) -> bool {
        let block_ok = |b: &CorpusBlock| {
            b.ttr.is_available()
                && b.msttr.is_available()
                && b.corrected.is_available()
                && b.growth_rate.is_available()
                && b.density.is_available()
                && b.flesch.is_available()
                && b.flesch_kincaid.is_available()
                && b.mean_sentence_length.is_available()
                && b.lnre.is_available()
                && b.growth.is_available()
        };
        block_ok(&self.corpus_a)
            && self.corpus_b.as_ref().map(block_ok).unwrap_or(true)
            && self
                .comparison
                .as_ref()
                .map(|c| c.growth_z.is_available())
                .unwrap_or(true)
    }
}

/// Fits the preferred family, falling back to the remaining families in a
/// fixed order when fitting fails.
pub fn fit_with_fallback(
    spectrum: &FrequencySpectrum,
    preferred: LnreFamily,
) -> Result<LnreModel> {
    let mut order = vec![preferred];
    for f in [LnreFamily::Gigp, LnreFamily::Zm, LnreFamily::Fzm] {
        if !order.contains(&f) {
            order.push(f);
        }
    }
    let mut last_err = None;
    for family in order {
        match lnre::fit(family, spectrum) {
            Ok(m) => return Ok(m),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one family attempted"))
}

fn build_corpus_block(stream: &TokenStream, config: &ReportConfig) -> CorpusBlock {
    let words = stream.word_tokens();
    let spectrum = diversity::frequency_spectrum(stream, config.typedef);

    let ttr = Measure::from_result(diversity::ttr(stream, config.typedef));
    let msttr = Measure::from_result(
        diversity::msttr(stream, config.segment_size, config.typedef).and_then(|m| {
            let sd = mean_sd(&m.series.values)?.sd;
            Ok(MsttrBlock {
                mean: m.mean,
                sd,
                segment_size: config.segment_size,
                series: m.series,
            })
        }),
    );
    let corrected = Measure::from_result(
        spectrum
            .as_ref()
            .map_err(clone_err)
            .and_then(diversity::corrected_indices),
    );
    let growth_rate = Measure::from_result(
        spectrum
            .as_ref()
            .map_err(clone_err)
            .and_then(diversity::growth_rate),
    );
    let density = Measure::from_result(lexical_density(stream, &config.tag_map));
    let readability_counts =
        readability::readability_sample_counts(stream, config.readability_sample);
    let flesch = Measure::from_result(readability_counts.as_ref().map_err(clone_err).and_then(
        |counts| {
            let series = SampleSeries {
                measure_name: "flesch_reading_ease".into(),
                segment_size: config.readability_sample,
                values: counts.iter().map(flesch_reading_ease).collect(),
            };
            let ms = mean_sd(&series.values)?;
            Ok(FleschBlock {
                mean: ms.mean,
                sd: ms.sd,
                sample_size: config.readability_sample,
                band_of_mean: classify_band(ms.mean).band_name.to_string(),
                series,
            })
        },
    ));
    let flesch_kincaid = Measure::from_result(
        readability_counts
            .as_ref()
            .map_err(clone_err)
            .and_then(|counts| {
                let values: Vec<f64> = counts.iter().map(flesch_kincaid).collect();
                let ms = mean_sd(&values)?;
                Ok(FkBlock {
                    mean: ms.mean,
                    sd: ms.sd,
                    sample_size: config.readability_sample,
                })
            }),
    );
    let msl = Measure::from_result(
        readability::mean_sentence_length(stream).map(|m| MeanSdBlock {
            mean: m.mean,
            sd: m.sd,
        }),
    );

    let model = spectrum
        .as_ref()
        .map_err(clone_err)
        .and_then(|sp| fit_with_fallback(sp, config.family));
    let lnre_block =
        Measure::from_result(model.as_ref().map_err(clone_err).map(LnreBlock::from_model));

    let growth = Measure::from_result((|| {
        let word_total = words.word_count();
        if word_total == 0 {
            return Err(Error::UndefinedMeasure {
                measure: "growth",
                reason: "stream has no word tokens".into(),
            });
        }
        let step = word_total.div_ceil(config.growth_points.max(1)).max(1);
        let observed = diversity::observed_growth(stream, step, config.typedef)?;
        let expected = match model.as_ref() {
            Ok(m) => {
                let max_n = word_total as u64 * config.extrapolation_factor.max(1);
                let step_n = (max_n / (2 * config.growth_points.max(1)) as u64).max(1);
                let mut checkpoints: Vec<u64> = (1..).map(|i| i * step_n).take_while(|&n| n < max_n).collect();
                checkpoints.push(max_n);
                m.extrapolate_growth(&checkpoints)?
            }
            Err(_) => Vec::new(),
        };
        Ok(GrowthBlock { observed, expected })
    })());

    CorpusBlock {
        name: stream.source_id().to_string(),
        tokens: stream.len() as u64,
        word_tokens: stream.word_count() as u64,
        sentences: stream.sentence_count() as u64,
        ttr,
        msttr,
        corrected,
        growth_rate,
        density,
        flesch,
        flesch_kincaid,
        mean_sentence_length: msl,
        lnre: lnre_block,
        growth,
        dlevel: None,
    }
}

fn clone_err(e: &Error) -> Error {
    Error::UndefinedMeasure {
        measure: "dependent measure",
        reason: e.to_string(),
    }
}

fn build_comparison(
    a: &TokenStream,
    b: &TokenStream,
    block_a: &CorpusBlock,
    block_b: &CorpusBlock,
    config: &ReportConfig,
) -> ComparisonBlock {
    let mut ks_tests = Vec::new();
    if let (Some(ma), Some(mb)) = (block_a.msttr.value(), block_b.msttr.value()) {
        if let Ok(ks) = ks_two_sample(&ma.series.values, &mb.series.values) {
            ks_tests.push(NamedKs {
                measure: "ttr_segments".into(),
                ks,
            });
        }
    }
    if let (Some(fa), Some(fb)) = (block_a.flesch.value(), block_b.flesch.value()) {
        if let Ok(ks) = ks_two_sample(&fa.series.values, &fb.series.values) {
            ks_tests.push(NamedKs {
                measure: "flesch_samples".into(),
                ks,
            });
        }
    }
    let growth_z = Measure::from_result((|| {
        let model_a = block_a
            .lnre
            .value()
            .ok_or_else(|| Error::UndefinedStatistic("corpus A has no fitted model".into()))?
            .to_model()?;
        let model_b = block_b
            .lnre
            .value()
            .ok_or_else(|| Error::UndefinedStatistic("corpus B has no fitted model".into()))?
            .to_model()?;
        let sp_a = diversity::frequency_spectrum(a, config.typedef)?;
        let sp_b = diversity::frequency_spectrum(b, config.typedef)?;
        lnre::compare_growth_z(&model_a, &sp_a, &model_b, &sp_b)
    })());
    ComparisonBlock {
        ks_tests,
        growth_z,
    }
}

/// Builds the full report for one corpus, or a comparison when `corpus_b`
/// is given.
pub fn build_report(
    corpus_a: &TokenStream,
    corpus_b: Option<&TokenStream>,
    config: &ReportConfig,
) -> ComplexityReport {
    let block_a = build_corpus_block(corpus_a, config);
    let block_b = corpus_b.map(|b| build_corpus_block(b, config));
    let comparison = match (corpus_b, block_b.as_ref()) {
        (Some(b), Some(bb)) => Some(build_comparison(corpus_a, b, &block_a, bb, config)),
        _ => None,
    };
    let mut input_files = vec![corpus_a.source_id().to_string()];
    if let Some(b) = corpus_b {
        input_files.push(b.source_id().to_string());
    }
    ComplexityReport {
        corpus_a: block_a,
        corpus_b: block_b,
        comparison,
        flesch_bands: FLESCH_BANDS
            .iter()
            .map(|b| BandEntry {
                band_name: b.band_name.to_string(),
                lower: b.lower,
                upper: b.upper,
            })
            .collect(),
        provenance: Provenance {
            input_files,
            config_hash: config_hash(config),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
        },
    }
}

/// FNV-1a over the canonical config rendering.
fn config_hash(config: &ReportConfig) -> String {
    let canon = format!(
        "segment_size={};readability_sample={};family={};typedef={:?};seed={};growth_points={};extrapolation_factor={};tags={:?}",
        config.segment_size,
        config.readability_sample,
        config.family,
        config.typedef,
        config.seed,
        config.growth_points,
        config.extrapolation_factor,
        config.tag_map,
    );
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canon.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// Formats a float exactly as serde_json does, so CSV and JSON agree.
pub(crate) fn fmt_num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

/// Renders the CSV tables, one table per measure family separated by blank
/// lines; every number is formatted identically to the JSON report.
pub fn render_csv(report: &ComplexityReport) -> String {
    let mut out = String::new();
    let blocks: Vec<(&str, &CorpusBlock)> = match &report.corpus_b {
        Some(b) => vec![("A", &report.corpus_a), ("B", b)],
        None => vec![("A", &report.corpus_a)],
    };

    out.push_str("# summary\ncorpus,name,tokens,word_tokens,sentences\n");
    for (tag, b) in &blocks {
        out.push_str(&format!(
            "{tag},{},{},{},{}\n",
            csv_escape(&b.name),
            b.tokens,
            b.word_tokens,
            b.sentences
        ));
    }

    out.push_str("\n# diversity\ncorpus,ttr,msttr_mean,msttr_sd,herdan_c,guiraud_r,yule_k,growth_rate\n");
    for (tag, b) in &blocks {
        let ttr = b.ttr.value().map(|v| fmt_num(*v)).unwrap_or_default();
        let (mm, msd) = b
            .msttr
            .value()
            .map(|m| (fmt_num(m.mean), fmt_num(m.sd)))
            .unwrap_or_default();
        let (c, r, k) = b
            .corrected
            .value()
            .map(|c| (fmt_num(c.herdan_c), fmt_num(c.guiraud_r), fmt_num(c.yule_k)))
            .unwrap_or_default();
        let gr = b.growth_rate.value().map(|v| fmt_num(*v)).unwrap_or_default();
        out.push_str(&format!("{tag},{ttr},{mm},{msd},{c},{r},{k},{gr}\n"));
    }

    out.push_str("\n# density\ncorpus,noun_ratio,verb_ratio,adj_ratio,lexical_ratio\n");
    for (tag, b) in &blocks {
        let row = b
            .density
            .value()
            .map(|d| {
                format!(
                    "{},{},{},{}",
                    fmt_num(d.noun_ratio),
                    fmt_num(d.verb_ratio),
                    fmt_num(d.adj_ratio),
                    fmt_num(d.lexical_ratio)
                )
            })
            .unwrap_or_else(|| ",,,".into());
        out.push_str(&format!("{tag},{row}\n"));
    }

    out.push_str("\n# readability\ncorpus,flesch_mean,flesch_sd,flesch_band,fk_mean,fk_sd,msl_mean,msl_sd\n");
    for (tag, b) in &blocks {
        let (fm, fsd, band) = b
            .flesch
            .value()
            .map(|f| (fmt_num(f.mean), fmt_num(f.sd), f.band_of_mean.clone()))
            .unwrap_or_default();
        let (km, ksd) = b
            .flesch_kincaid
            .value()
            .map(|f| (fmt_num(f.mean), fmt_num(f.sd)))
            .unwrap_or_default();
        let (sm, ssd) = b
            .mean_sentence_length
            .value()
            .map(|m| (fmt_num(m.mean), fmt_num(m.sd)))
            .unwrap_or_default();
        out.push_str(&format!("{tag},{fm},{fsd},{band},{km},{ksd},{sm},{ssd}\n"));
    }

    out.push_str("\n# lnre\ncorpus,family,N,S,chisq,df,p\n");
    for (tag, b) in &blocks {
        match b.lnre.value() {
            Some(l) => {
                let s = l.population_size.map(fmt_num).unwrap_or_default();
                out.push_str(&format!(
                    "{tag},{},{},{s},{},{},{}\n",
                    l.family,
                    l.n,
                    fmt_num(l.chisq),
                    l.df,
                    fmt_num(l.p)
                ));
            }
            None => out.push_str(&format!("{tag},,,,,,\n")),
        }
    }

    out.push_str("\n# lnre_params\ncorpus,param,value\n");
    for (tag, b) in &blocks {
        if let Some(l) = b.lnre.value() {
            for (k, v) in &l.params {
                out.push_str(&format!("{tag},{k},{}\n", fmt_num(*v)));
            }
        }
    }

    if blocks.iter().any(|(_, b)| b.dlevel.is_some()) {
        out.push_str("\n# dlevel\ncorpus,level,count\n");
        for (tag, b) in &blocks {
            if let Some(d) = &b.dlevel {
                for (level, count) in d.counts.iter().enumerate() {
                    out.push_str(&format!("{tag},{level},{count}\n"));
                }
            }
        }
    }

    if let Some(cmp) = &report.comparison {
        out.push_str("\n# ks_tests\nmeasure,d,p,n1,n2\n");
        for t in &cmp.ks_tests {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.measure,
                fmt_num(t.ks.d),
                fmt_num(t.ks.p),
                t.ks.n1,
                t.ks.n2
            ));
        }
        out.push_str("\n# growth_z\nz,p,growth_rate_a,growth_rate_b\n");
        if let Some(z) = cmp.growth_z.value() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_num(z.z),
                fmt_num(z.p),
                fmt_num(z.growth_rate_a),
                fmt_num(z.growth_rate_b)
            ));
        } else {
            out.push_str(",,,\n");
        }
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// KDE curves used by the density plots; exported for CSV dumps as well.
pub fn density_curves(
    report: &ComplexityReport,
    kind: PlotKind,
) -> Result<Vec<(String, crate::stats::KdeCurve)>> {
    let pick = |b: &CorpusBlock| -> Option<(String, Vec<f64>)> {
        match kind {
            PlotKind::TtrDensity => b
                .msttr
                .value()
                .map(|m| (b.name.clone(), m.series.values.clone())),
            PlotKind::FleschDensity => b
                .flesch
                .value()
                .map(|f| (b.name.clone(), f.series.values.clone())),
            _ => None,
        }
    };
    let mut curves = Vec::new();
    let mut blocks = vec![&report.corpus_a];
    if let Some(b) = &report.corpus_b {
        blocks.push(b);
    }
    for b in blocks {
        if let Some((name, values)) = pick(b) {
            curves.push((name, kde(&values, None)?));
        }
    }
    if curves.is_empty() {
        return Err(Error::Render(format!("{kind:?} series")));
    }
    Ok(curves)
}

/// Test-only synthetic-corpus builder: Zipf-Mandelbrot tokens wrapped into
/// capitalized, period-terminated sentences so the plain-text pipeline sees
/// realistic type-frequency structure.
#[cfg(test)]
pub(crate) fn zm_sentences(alpha: f64, b: f64, n_tokens: usize, seed: u64, name: &str) -> String {
    use std::collections::HashMap;
    let keys = crate::lnre::sampling::sample_zm_token_keys(alpha, b, n_tokens, seed);
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut text = String::new();
    let mut in_sentence = 0usize;
    let mut sentence_len = 9 + (seed as usize % 5);
    for (i, k) in keys.iter().enumerate() {
        let next = ids.len() + 1;
        let id = *ids.entry(*k).or_insert(next);
        let word = format!("w{id}x{}", name.len());
        if in_sentence == 0 {
            let mut chars = word.chars();
            let first = chars.next().unwrap().to_uppercase().to_string();
            text.push_str(&first);
            text.push_str(chars.as_str());
        } else {
            text.push(' ');
            text.push_str(&word);
        }
        in_sentence += 1;
        if in_sentence == sentence_len || i + 1 == keys.len() {
            text.push_str(". ");
            in_sentence = 0;
            sentence_len = 5 + ((i * 2654435761) % 16);
        }
    }
    text
}
