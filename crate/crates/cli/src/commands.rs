//! Subcommand implementations.
//!
//! Exit codes: 0 on success, 2 when the run completed but some measures
//! were unavailable (partial), 1 on fatal errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};

use lexcomp::corpus::{self, TokenStream, VerticalConfig};
use lexcomp::density::TagClassMap;
use lexcomp::diversity::FrequencySpectrum;
use lexcomp::dlevel::{self, DlevelRules};
use lexcomp::lnre::{self, LnreFamily};
use lexcomp::report::{
    build_report, density_curves, render_csv, render_growth_block, render_svg, ComplexityReport,
    CorpusBlock, CorpusSide, GrowthBlock, Measure, PlotKind, ReportConfig,
};

use crate::config::{
    AnalyzeArgs, Cli, Command, CompareArgs, DlevelArgs, FitArgs, Format, RunConfig, SampleArgs,
};

const EXIT_PARTIAL: u8 = 2;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Dlevel(args) => cmd_dlevel(args),
        Command::Sample(args) => cmd_sample(args),
    }
}

fn read_corpus(path: &Path, format: Format) -> Result<TokenStream> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let source_id = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let resolved = match format {
        Format::Auto => detect_format(path, &bytes),
        other => other,
    };
    let stream = match resolved {
        Format::Vertical => {
            let text = std::str::from_utf8(&bytes).map_err(|e| {
                anyhow::anyhow!(
                    "{}: invalid UTF-8 at byte offset {}",
                    path.display(),
                    e.valid_up_to()
                )
            })?;
            corpus::read_vertical(text, &source_id, &VerticalConfig::default())?
        }
        _ => corpus::tokenize_plain_bytes(&bytes, &source_id)?,
    };
    Ok(stream)
}

fn detect_format(path: &Path, bytes: &[u8]) -> Format {
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_lowercase())
        .unwrap_or_default();
    if matches!(ext.as_str(), "vrt" | "vert" | "tagged") {
        return Format::Vertical;
    }
    if matches!(ext.as_str(), "txt" | "text") {
        return Format::Plain;
    }
    // sniff: a three-field TAB line on the first non-blank line
    if let Ok(text) = std::str::from_utf8(&bytes[..bytes.len().min(4096)]) {
        if let Some(line) = text.lines().find(|l| !l.trim().is_empty()) {
            if line.split('\t').count() == 3 {
                return Format::Vertical;
            }
        }
    }
    Format::Plain
}

fn report_config(config: &RunConfig) -> Result<ReportConfig> {
    let tag_map = match &config.tags {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read tag map {}", path.display()))?;
            TagClassMap::from_toml_str(&text)?
        }
        None => TagClassMap::default(),
    };
    Ok(ReportConfig {
        segment_size: config.segment_size,
        readability_sample: config.readability_sample,
        family: config.family.unwrap_or(LnreFamily::Gigp),
        typedef: config.type_def,
        tag_map,
        seed: config.seed,
        ..ReportConfig::default()
    })
}

fn write(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

fn write_report_files(
    out: &Path,
    report: &ComplexityReport,
    plots: &[(PlotKind, &str)],
) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    write(&out.join("report.json"), &report.to_json())?;
    write(&out.join("tables.csv"), &render_csv(report))?;
    for (kind, name) in plots {
        match render_svg(report, *kind) {
            Ok(svg) => write(&out.join(name), &svg)?,
            Err(e) => eprintln!("note: skipping {name}: {e}"),
        }
    }
    // KDE curves as two-column CSV for external plotting
    for (kind, stem) in [
        (PlotKind::TtrDensity, "ttr_density"),
        (PlotKind::FleschDensity, "flesch_density"),
    ] {
        if let Ok(curves) = density_curves(report, kind) {
            let two = curves.len() > 1;
            for (i, (_, curve)) in curves.iter().enumerate() {
                let name = if two {
                    format!("{stem}_{}.csv", ["a", "b"][i.min(1)])
                } else {
                    format!("{stem}.csv")
                };
                let mut csv = String::from("x,density\n");
                for (x, d) in &curve.points {
                    csv.push_str(&format!("{x},{d}\n"));
                }
                write(&out.join(name), &csv)?;
            }
        }
    }
    print_summary(report);
    Ok(())
}

/// Rounded display table (the CSV and JSON keep full precision).
fn print_summary(report: &ComplexityReport) {
    let blocks: Vec<&CorpusBlock> = match &report.corpus_b {
        Some(b) => vec![&report.corpus_a, b],
        None => vec![&report.corpus_a],
    };
    let fmt = |m: &Measure<f64>| match m.value() {
        Some(v) => format!("{v:.3}"),
        None => "-".into(),
    };
    let header: Vec<String> = blocks.iter().map(|b| b.name.clone()).collect();
    println!("{:<22} {}", "measure", header.join("  "));
    println!("{:<22} {}", "tokens", blocks.iter().map(|b| b.tokens.to_string()).collect::<Vec<_>>().join("  "));
    let row = |label: &str, values: Vec<String>| {
        println!("{label:<22} {}", values.join("  "));
    };
    row("TTR", blocks.iter().map(|b| fmt(&b.ttr)).collect());
    row(
        "MSTTR",
        blocks
            .iter()
            .map(|b| b.msttr.value().map(|m| format!("{:.3} (sd {:.3})", m.mean, m.sd)).unwrap_or("-".into()))
            .collect(),
    );
    row(
        "noun/verb/adj ratio",
        blocks
            .iter()
            .map(|b| {
                b.density
                    .value()
                    .map(|d| format!("{:.2}/{:.2}/{:.2}", d.noun_ratio, d.verb_ratio, d.adj_ratio))
                    .unwrap_or("-".into())
            })
            .collect(),
    );
    row(
        "Flesch (mean, sd)",
        blocks
            .iter()
            .map(|b| b.flesch.value().map(|f| format!("{:.1} ({:.1}) {}", f.mean, f.sd, f.band_of_mean)).unwrap_or("-".into()))
            .collect(),
    );
    row(
        "Flesch-Kincaid",
        blocks
            .iter()
            .map(|b| b.flesch_kincaid.value().map(|f| format!("{:.1}", f.mean)).unwrap_or("-".into()))
            .collect(),
    );
    row(
        "MSL (sd)",
        blocks
            .iter()
            .map(|b| {
                b.mean_sentence_length
                    .value()
                    .map(|m| format!("{:.1} ({:.1})", m.mean, m.sd))
                    .unwrap_or("-".into())
            })
            .collect(),
    );
    row("growth rate", blocks.iter().map(|b| fmt(&b.growth_rate)).collect());
    row(
        "LNRE fit",
        blocks
            .iter()
            .map(|b| {
                b.lnre
                    .value()
                    .map(|l| format!("{} chisq {:.1} (p {:.2})", l.family, l.chisq, l.p))
                    .unwrap_or("-".into())
            })
            .collect(),
    );
    if let Some(cmp) = &report.comparison {
        for t in &cmp.ks_tests {
            println!("{:<22} D = {:.3}, p = {:.3e}", format!("KS {}", t.measure), t.ks.d, t.ks.p);
        }
        if let Some(z) = cmp.growth_z.value() {
            println!("{:<22} Z = {:.1}, p = {:.3e}", "growth-rate Z", z.z, z.p);
        }
    }
}

fn exit_for(report: &ComplexityReport) -> ExitCode {
    if report.is_complete() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PARTIAL)
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let config = args.common.resolve()?;
    let stream = read_corpus(&args.input, config.format)?;
    let report = build_report(&stream, None, &report_config(&config)?);
    write_report_files(
        &config.out,
        &report,
        &[
            (PlotKind::Growth(CorpusSide::A), "growth.svg"),
            (PlotKind::TtrDensity, "ttr_density.svg"),
            (PlotKind::FleschDensity, "flesch_density.svg"),
        ],
    )?;
    Ok(exit_for(&report))
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode> {
    let config = args.common.resolve()?;
    let mut a = read_corpus(&args.input_a, config.format)?;
    let mut b = read_corpus(&args.input_b, config.format)?;
    if args.equalize_tokens {
        // sample the larger corpus down to the smaller one's token count
        if a.len() > b.len() {
            a = a.sample_sentences(b.len(), config.seed)?.stream;
        } else if b.len() > a.len() {
            b = b.sample_sentences(a.len(), config.seed)?.stream;
        }
    }
    let report = build_report(&a, Some(&b), &report_config(&config)?);
    write_report_files(
        &config.out,
        &report,
        &[
            (PlotKind::Growth(CorpusSide::A), "growth_a.svg"),
            (PlotKind::Growth(CorpusSide::B), "growth_b.svg"),
            (PlotKind::TtrDensity, "ttr_density.svg"),
            (PlotKind::FleschDensity, "flesch_density.svg"),
        ],
    )?;
    Ok(exit_for(&report))
}

fn cmd_fit(args: FitArgs) -> Result<ExitCode> {
    let config = args.common.resolve()?;
    fs::create_dir_all(&config.out)
        .with_context(|| format!("cannot create {}", config.out.display()))?;

    // spectrum CSV or corpus input
    let bytes = fs::read(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let looks_like_spectrum = args
        .input
        .extension()
        .map(|e| e.eq_ignore_ascii_case("csv"))
        .unwrap_or(false)
        || bytes.starts_with(b"#N=");
    let (spectrum, observed) = if looks_like_spectrum {
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| anyhow::anyhow!("invalid UTF-8 at byte offset {}", e.valid_up_to()))?;
        (FrequencySpectrum::from_csv(text)?, None)
    } else {
        let stream = read_corpus(&args.input, config.format)?;
        let spectrum = lexcomp::diversity::frequency_spectrum(&stream, config.type_def)?;
        let step = stream.word_count().div_ceil(40).max(1);
        let observed = lexcomp::diversity::observed_growth(&stream, step, config.type_def)?;
        // also write the spectrum in the exchange format
        write(&config.out.join("spectrum.csv"), &spectrum.to_csv())?;
        (spectrum, Some(observed))
    };

    let families: Vec<LnreFamily> = match config.family {
        Some(f) => vec![f],
        None => vec![LnreFamily::Zm, LnreFamily::Fzm, LnreFamily::Gigp],
    };
    let single = families.len() == 1;
    let mut fitted = Vec::new();
    let mut failures = Vec::new();
    for family in &families {
        match lnre::fit(*family, &spectrum) {
            Ok(model) => fitted.push(model),
            Err(e) => failures.push((family, e)),
        }
    }
    for (family, e) in &failures {
        eprintln!("fit {family} failed: {e}");
    }
    if fitted.is_empty() {
        anyhow::bail!("no family could be fitted");
    }

    let mut comparison = String::from("family,chisq,df,p\n");
    for model in &fitted {
        let name = if single {
            "model.json".to_string()
        } else {
            format!("model_{}.json", model.family())
        };
        write(&config.out.join(name), &model.to_json())?;
        let record = model.fit_record().unwrap();
        comparison.push_str(&format!(
            "{},{},{},{}\n",
            model.family(),
            record.chisq,
            record.df,
            record.p
        ));
    }
    if !single {
        write(&config.out.join("fit_comparison.csv"), &comparison)?;
    }

    // growth plot for the best fit
    let best = fitted
        .iter()
        .min_by(|a, b| {
            let ca = a.fit_record().unwrap().chisq;
            let cb = b.fit_record().unwrap().chisq;
            ca.partial_cmp(&cb).unwrap()
        })
        .unwrap();
    let n = spectrum.n();
    let step = (n / 20).max(1);
    let mut checkpoints: Vec<u64> = (1..=40).map(|i| i * step).collect();
    checkpoints.retain(|&c| c > 0);
    checkpoints.dedup();
    let expected = best.extrapolate_growth(&checkpoints)?;
    let growth = GrowthBlock {
        observed: observed.unwrap_or(lexcomp::diversity::GrowthCurve {
            kind: lexcomp::diversity::CurveKind::Observed,
            checkpoints: Vec::new(),
        }),
        expected,
    };
    let title = format!("{} ({})", args.input.display(), best.family());
    write(&config.out.join("growth.svg"), &render_growth_block(&title, &growth))?;

    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PARTIAL)
    })
}

fn cmd_dlevel(args: DlevelArgs) -> Result<ExitCode> {
    let config = args.common.resolve()?;
    let rules = match &config.rules {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read rules {}", path.display()))?;
            DlevelRules::from_toml_str(&text)?
        }
        None => DlevelRules::default(),
    };
    let text = fs::read_to_string(&args.trees)
        .with_context(|| format!("cannot read {}", args.trees.display()))?;
    let batch = dlevel::read_bracketed(&text);
    if batch.trees.is_empty() {
        anyhow::bail!(
            "no parseable trees in {} ({} lines skipped)",
            args.trees.display(),
            batch.skipped.len()
        );
    }
    let results: Vec<(usize, dlevel::DLevelResult)> = batch
        .trees
        .iter()
        .map(|p| (p.line, dlevel::classify_dlevel(&p.tree, &rules)))
        .collect();

    fs::create_dir_all(&config.out)
        .with_context(|| format!("cannot create {}", config.out.display()))?;
    let mut csv = String::from("line,level,triggers\n");
    for (line, r) in &results {
        let triggers = r
            .triggers
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";");
        csv.push_str(&format!("{line},{},{triggers}\n", r.level));
    }
    for s in &batch.skipped {
        eprintln!("skipped line {}: {}", s.line, s.reason);
    }
    write(&config.out.join("dlevel.csv"), &csv)?;

    let only: Vec<dlevel::DLevelResult> = results.into_iter().map(|(_, r)| r).collect();
    let dist = dlevel::dlevel_distribution(&only, batch.skipped.len())?;
    let json = serde_json::to_string_pretty(&dist).expect("distribution serializes");
    write(&config.out.join("dlevel.json"), &format!("{json}\n"))?;

    Ok(if batch.skipped.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PARTIAL)
    })
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode> {
    let config = args.common.resolve()?;
    let stream = read_corpus(&args.input, config.format)?;
    let sampled = stream.sample_sentences(args.budget, config.seed)?;
    if sampled.undersized {
        eprintln!(
            "warning: corpus has {} tokens, fewer than the budget {}; returning all sentences",
            stream.len(),
            args.budget
        );
    }
    fs::create_dir_all(&config.out)
        .with_context(|| format!("cannot create {}", config.out.display()))?;
    let tagged = sampled.stream.tokens().iter().all(|t| t.pos.is_some());
    let out_path: PathBuf;
    if tagged && !sampled.stream.is_empty() {
        out_path = config.out.join("sampled.vrt");
        write(&out_path, &corpus::write_vertical(&sampled.stream)?)?;
    } else {
        out_path = config.out.join("sampled.txt");
        write(&out_path, &corpus::write_plain(&sampled.stream))?;
    }
    println!(
        "{} tokens in {} sentences -> {}",
        sampled.stream.len(),
        sampled.stream.sentence_count(),
        out_path.display()
    );
    Ok(ExitCode::SUCCESS)
}
