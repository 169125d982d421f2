//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test -p lexcomp-cli --test acceptance -- --nocapture`
//! to see them; a failed criterion fails its test).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexcomp::corpus::{tokenize_plain, Token, TokenStream, TypeDef};
use lexcomp::diversity::{binomial_interpolation, frequency_spectrum, growth_rate, msttr, ttr};
use lexcomp::dlevel::{classify_dlevel, read_bracketed, DlevelRules};
use lexcomp::lnre::sampling::sample_zm_spectrum;
use lexcomp::lnre::{compare_growth_z, fit, fit_real, LnreFamily, LnreModel, LnreParams};
use lexcomp::numeric::quad::integrate_log;
use lexcomp::numeric::special::{gammp, ln_bessel_k};
use lexcomp::readability::{flesch_kincaid, flesch_reading_ease, ReadabilityCounts};
use lexcomp::stats::ks_two_sample;

fn pass(name: &str, detail: String) {
    println!("ACCEPTANCE {name}: PASS ({detail})");
}

fn within(elapsed: Duration, budget_s: u64, name: &str) {
    assert!(
        elapsed <= Duration::from_secs(budget_s),
        "{name} exceeded its {budget_s}s budget: {elapsed:?}"
    );
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn core_fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

#[test]
fn criterion_01_flesch_formula_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut max_rel: f64 = 0.0;
    for _ in 0..50 {
        let sentences = rng.random_range(1u64..500);
        let words = sentences * rng.random_range(1u64..40) + rng.random_range(0u64..30);
        let syllables = words + rng.random_range(0u64..(3 * words));
        let c = ReadabilityCounts { words, sentences, syllables };
        let wps = words as f64 / sentences as f64;
        let spw = syllables as f64 / words as f64;
        let fre_direct = 206.835 - 1.015 * wps - 84.6 * spw;
        let fk_direct = 0.39 * wps + 11.8 * spw - 15.59;
        let rel = |a: f64, b: f64| ((a - b) / b.abs().max(1e-300)).abs();
        max_rel = max_rel.max(rel(flesch_reading_ease(&c), fre_direct));
        max_rel = max_rel.max(rel(flesch_kincaid(&c), fk_direct));
    }
    assert!(max_rel <= 1e-9, "max relative error {max_rel:.3e}");
    within(start.elapsed(), 1, "formula exactness");
    pass(
        "formula exactness",
        format!("50 triples, max rel err {max_rel:.1e}, {:?}", start.elapsed()),
    );
}

fn random_stream(rng: &mut ChaCha8Rng) -> TokenStream {
    let n = rng.random_range(1..=10_000usize);
    let vocab = rng.random_range(5..=500usize);
    let tokens: Vec<Token> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let id = ((vocab as f64).powf(u) as usize).min(vocab - 1);
            Token::word(format!("t{id}"))
        })
        .collect();
    let len = tokens.len();
    TokenStream::new(tokens, vec![len], "rand").unwrap()
}

#[test]
fn criterion_02_diversity_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let stream = random_stream(&mut rng);
        // independent brute-force counter
        let mut freq: HashMap<String, u64> = HashMap::new();
        for t in stream.tokens() {
            *freq.entry(t.surface.to_lowercase()).or_insert(0) += 1;
        }
        let n: u64 = freq.values().sum();
        let v = freq.len() as u64;
        let hapaxes = freq.values().filter(|&&c| c == 1).count() as u64;
        let mut spectrum_oracle: BTreeMap<u64, u64> = BTreeMap::new();
        for &c in freq.values() {
            *spectrum_oracle.entry(c).or_insert(0) += 1;
        }

        assert_eq!(ttr(&stream, TypeDef::Surface).unwrap(), v as f64 / n as f64);
        let sp = frequency_spectrum(&stream, TypeDef::Surface).unwrap();
        assert_eq!((sp.n(), sp.v()), (n, v));
        assert_eq!(sp.classes().collect::<BTreeMap<_, _>>(), spectrum_oracle);
        assert_eq!(growth_rate(&sp).unwrap(), hapaxes as f64 / n as f64);

        if stream.word_count() >= 100 {
            let m = msttr(&stream, 100, TypeDef::Surface).unwrap();
            let words: Vec<String> = stream
                .tokens()
                .iter()
                .map(|t| t.surface.to_lowercase())
                .collect();
            let mut expected = Vec::new();
            for chunk in words.chunks(100) {
                if chunk.len() == 100 {
                    let distinct: HashSet<&String> = chunk.iter().collect();
                    expected.push(distinct.len() as f64 / 100.0);
                }
            }
            assert_eq!(m.series.values, expected);
            assert_eq!(
                m.mean,
                expected.iter().sum::<f64>() / expected.len() as f64
            );
        }
    }
    within(start.elapsed(), 10, "diversity oracle");
    pass(
        "diversity oracle equivalence",
        format!("100 corpora exact, {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_03_spectrum_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let stream = random_stream(&mut rng);
        let sp = frequency_spectrum(&stream, TypeDef::Surface).unwrap();
        let v: u64 = sp.classes().map(|(_, vm)| vm).sum();
        let n: u64 = sp.classes().map(|(m, vm)| m * vm).sum();
        assert_eq!(v, sp.v());
        assert_eq!(n, sp.n());
        assert_eq!(n, stream.word_count() as u64);
    }
    pass("spectrum identities", "100 corpora exact".into());
}

/// Test-side type density of a model, for the conservation tail integral.
fn density_of(model: &LnreModel) -> (Box<dyn Fn(f64) -> f64>, f64, f64) {
    match model.params() {
        LnreParams::Zm { alpha, b } => {
            let c = (1.0 - alpha) * b.powf(alpha - 1.0);
            (Box::new(move |pi: f64| c * pi.powf(-alpha - 1.0)), 1e-16, b)
        }
        LnreParams::Fzm { alpha, a, b } => {
            let c = (1.0 - alpha) / (b.powf(1.0 - alpha) - a.powf(1.0 - alpha));
            (Box::new(move |pi: f64| c * pi.powf(-alpha - 1.0)), a, b)
        }
        LnreParams::Gigp { gamma, b, c } => {
            let ln_norm = std::f64::consts::LN_2
                + (gamma + 1.0) * (0.5 * b * c).ln()
                + ln_bessel_k(gamma + 1.0, b);
            (
                Box::new(move |pi: f64| {
                    ((gamma - 1.0) * pi.ln() - pi / c - b * b * c / (4.0 * pi) - ln_norm).exp()
                }),
                b * b * c / 3200.0,
                800.0 * c,
            )
        }
    }
}

#[test]
fn criterion_04_lnre_self_consistency() {
    let start = Instant::now();
    let n = 100_000.0;
    let models = [
        LnreModel::new_zm(0.6, 0.05).unwrap(),
        LnreModel::new_fzm(0.55, 1e-6, 0.05).unwrap(),
        LnreModel::new_gigp(-0.45, 0.05, 0.01).unwrap(),
    ];
    let families = [LnreFamily::Zm, LnreFamily::Fzm, LnreFamily::Gigp];
    for (truth, family) in models.iter().zip(families) {
        // refit the model's own expected spectrum
        let v = truth.expected_vocabulary(n).unwrap();
        let classes: Vec<(u64, f64)> = (1..=15)
            .map(|m| (m, truth.expected_spectrum(m, n).unwrap()))
            .collect();
        let refit = fit_real(family, n, v, &classes).unwrap();
        let chisq = refit.fit_record().unwrap().chisq;
        assert!(chisq < 1e-3, "{family}: refit chisq {chisq:.3e}");

        // token conservation: partial sum + Poisson-tail integral
        let m_max = 100u64;
        let mut token_sum = 0.0;
        for m in 1..=m_max {
            token_sum += m as f64 * refit.expected_spectrum(m, n).unwrap();
        }
        let (g, lo, hi) = density_of(&refit);
        let tail = n
            * integrate_log(|pi| pi * gammp(m_max as f64, n * pi) * g(pi), lo, hi, 1e-9)
                .unwrap();
        let rel = ((token_sum + tail) - n).abs() / n;
        assert!(rel < 0.005, "{family}: token conservation off by {rel:.4}");
    }
    within(start.elapsed(), 30, "LNRE self-consistency");
    pass(
        "LNRE self-consistency",
        format!("3 families, {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_05_zm_parameter_recovery() {
    let start = Instant::now();
    let n = 100_000usize;
    for (ai, &true_alpha) in [0.4f64, 0.6, 0.8].iter().enumerate() {
        let mut hits = 0;
        let mut recovered = Vec::new();
        for rep in 0..10u64 {
            let seed = 1_000 * (ai as u64 + 1) + rep;
            let sp = sample_zm_spectrum(true_alpha, 0.05, n, seed).unwrap();
            let model = fit(LnreFamily::Zm, &sp).unwrap();
            let alpha = match model.params() {
                LnreParams::Zm { alpha, .. } => alpha,
                _ => unreachable!(),
            };
            recovered.push(alpha);
            if (alpha - true_alpha).abs() <= 0.05 {
                hits += 1;
            }
        }
        assert!(
            hits >= 9,
            "alpha={true_alpha}: only {hits}/10 within 0.05 ({recovered:?})"
        );
    }
    within(start.elapsed(), 120, "parameter recovery");
    pass(
        "ZM parameter recovery",
        format!("3 alphas x 10 replicates, {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_06_interpolation_vs_monte_carlo() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 10_000usize;
    let words: Vec<String> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            format!("s{}", (1.0 / (1.0 - u)).powf(0.7).floor() as u64)
        })
        .collect();
    let tokens: Vec<Token> = words.iter().map(Token::word).collect();
    let stream = TokenStream::new(tokens, vec![n], "fx").unwrap();
    let sp = frequency_spectrum(&stream, TypeDef::Surface).unwrap();
    let interpolated = binomial_interpolation(&sp, (n / 2) as u64).unwrap();

    let mut total = 0.0;
    let reps = 200u64;
    let mut indices: Vec<usize> = (0..n).collect();
    for rep in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + rep);
        for i in 0..n / 2 {
            let j = rng.random_range(i..n);
            indices.swap(i, j);
        }
        let distinct: HashSet<&str> =
            indices[..n / 2].iter().map(|&i| words[i].as_str()).collect();
        total += distinct.len() as f64;
    }
    let mc = total / reps as f64;
    let rel = (interpolated - mc).abs() / mc;
    assert!(rel < 0.02, "interpolated {interpolated:.1} vs MC {mc:.1}");
    within(start.elapsed(), 30, "interpolation vs MC");
    pass(
        "interpolation vs Monte Carlo",
        format!("rel {rel:.4}, {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_07_directional_paper_reproduction() {
    let narrow_text = std::fs::read_to_string(fixture("narrow.txt")).unwrap();
    let broad_text = std::fs::read_to_string(fixture("broad.txt")).unwrap();
    let narrow = tokenize_plain(&narrow_text, "narrow");
    let broad = tokenize_plain(&broad_text, "broad");
    assert_eq!(narrow.len(), broad.len(), "fixtures must have equal token counts");

    let sp_n = frequency_spectrum(&narrow, TypeDef::Surface).unwrap();
    let sp_b = frequency_spectrum(&broad, TypeDef::Surface).unwrap();
    let g_n = growth_rate(&sp_n).unwrap();
    let g_b = growth_rate(&sp_b).unwrap();
    assert!(g_n < g_b, "growth rates: narrow {g_n:.4} vs broad {g_b:.4}");

    let gigp_n = fit(LnreFamily::Gigp, &sp_n).unwrap();
    let zm_n = fit(LnreFamily::Zm, &sp_n).unwrap();
    let (c_gigp, c_zm) = (
        gigp_n.fit_record().unwrap().chisq,
        zm_n.fit_record().unwrap().chisq,
    );
    assert!(
        c_gigp <= c_zm,
        "GIGP should fit the narrow fixture at least as well: {c_gigp:.2} vs {c_zm:.2}"
    );

    let zm_b = fit(LnreFamily::Zm, &sp_b).unwrap();
    let z = compare_growth_z(&zm_n, &sp_n, &zm_b, &sp_b).unwrap();
    assert!(z.z < -3.0, "Z = {:.2}", z.z);

    let m_n = msttr(&narrow, 100, TypeDef::Surface).unwrap();
    let m_b = msttr(&broad, 100, TypeDef::Surface).unwrap();
    let ks = ks_two_sample(&m_n.series.values, &m_b.series.values).unwrap();
    assert!(ks.d > 0.0 && ks.p < 0.05, "KS D={} p={}", ks.d, ks.p);

    pass(
        "directional paper reproduction",
        format!(
            "growth {g_n:.3} < {g_b:.3}, Z={:.1}, GIGP {c_gigp:.1} <= ZM {c_zm:.1}, KS D={:.3} p={:.1e}",
            z.z, ks.d, ks.p
        ),
    );
}

#[test]
fn criterion_08_ks_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let n1 = rng.random_range(3..200usize);
        let n2 = rng.random_range(3..200usize);
        // discrete supports force ties across and within samples
        let a: Vec<f64> = (0..n1).map(|_| rng.random_range(0..40) as f64 / 17.0).collect();
        let b: Vec<f64> = (0..n2).map(|_| rng.random_range(0..40) as f64 / 17.0).collect();
        let r = ks_two_sample(&a, &b).unwrap();

        // O(n^2) brute-force sup-difference oracle
        let mut d_oracle = 0.0f64;
        for &v in a.iter().chain(b.iter()) {
            let fa = a.iter().filter(|&&x| x <= v).count() as f64 / n1 as f64;
            let fb = b.iter().filter(|&&x| x <= v).count() as f64 / n2 as f64;
            d_oracle = d_oracle.max((fa - fb).abs());
        }
        assert_eq!(r.d, d_oracle);

        // truncated Kolmogorov series, reimplemented
        let n_eff = (n1 * n2) as f64 / (n1 + n2) as f64;
        let lambda = n_eff.sqrt() * r.d;
        let p_oracle = if lambda <= 0.0 {
            1.0
        } else {
            let mut sum = 0.0;
            let mut sign = 1.0;
            for j in 1..100_000u64 {
                let t = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
                sum += sign * t;
                if t < 1e-12 {
                    break;
                }
                sign = -sign;
            }
            (2.0 * sum).clamp(0.0, 1.0)
        };
        assert!((r.p - p_oracle).abs() <= 1e-6, "p {} vs {}", r.p, p_oracle);
    }
    within(start.elapsed(), 5, "KS correctness");
    pass("KS correctness", format!("50 pairs, {:?}", start.elapsed()));
}

#[test]
fn criterion_09_dlevel_agreement() {
    let trees = std::fs::read_to_string(core_fixture("dlevel_30.txt")).unwrap();
    let expected: Vec<u8> = std::fs::read_to_string(core_fixture("dlevel_30_expected.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    let rules = DlevelRules::default();
    let batch = read_bracketed(&trees);
    assert_eq!(batch.trees.len(), 30);
    let mut agree = 0;
    for (parsed, want) in batch.trees.iter().zip(&expected) {
        if classify_dlevel(&parsed.tree, &rules).level == *want {
            agree += 1;
        }
    }
    let ratio = agree as f64 / 30.0;
    assert!(ratio >= 0.90, "agreement {ratio:.2}");

    // the two-trigger sentence (line 22) classifies as 7, every time
    let two_trigger = &batch.trees[21].tree;
    for _ in 0..100 {
        assert_eq!(classify_dlevel(two_trigger, &rules).level, 7);
    }
    pass(
        "D-level agreement",
        format!("{agree}/30 match; two-trigger sentence stable at 7"),
    );
}

fn run_binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lexcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_dir_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        out.insert(
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    out
}

#[test]
fn criterion_10_compare_determinism() {
    let narrow = fixture("narrow.txt");
    let broad = fixture("broad.txt");
    let tmp = tempfile::tempdir().unwrap();
    let mut snapshots = Vec::new();
    for run in 0..3 {
        let out = tmp.path().join(format!("run{run}"));
        let status = run_binary(&[
            "compare",
            narrow.to_str().unwrap(),
            broad.to_str().unwrap(),
            "--equalize-tokens",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            status.status.code() == Some(0) || status.status.code() == Some(2),
            "compare failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        snapshots.push(read_dir_files(&out));
    }
    let names: Vec<&String> = snapshots[0].keys().collect();
    assert!(names.iter().any(|n| n.ends_with(".json")));
    assert!(names.iter().any(|n| n.ends_with(".csv")));
    assert!(names.iter().any(|n| n.ends_with(".svg")));
    assert_eq!(snapshots[0], snapshots[1], "run 0 vs 1 differ");
    assert_eq!(snapshots[1], snapshots[2], "run 1 vs 2 differ");
    pass(
        "compare determinism",
        format!("3 runs byte-identical across {} files", snapshots[0].len()),
    );
}

fn write_large_fixture(path: &Path, alpha: f64, b: f64, n: usize, seed: u64) {
    use lexcomp::lnre::sampling::sample_zm_token_keys;
    let keys = sample_zm_token_keys(alpha, b, n, seed);
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut text = String::with_capacity(n * 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let mut remaining = 0usize;
    for k in keys {
        let next = ids.len() + 1;
        let id = *ids.entry(k).or_insert(next);
        if remaining == 0 {
            remaining = rng.random_range(8..22);
            text.push_str(&format!("Word{id}"));
        } else {
            text.push_str(&format!(" word{id}"));
        }
        remaining -= 1;
        if remaining == 0 {
            text.push_str(".\n");
        }
    }
    if !text.ends_with(".\n") {
        text.push_str(".\n");
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn criterion_11_end_to_end_runtime() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a.txt");
    let b = tmp.path().join("b.txt");
    write_large_fixture(&a, 0.55, 0.05, 250_000, 77);
    write_large_fixture(&b, 0.7, 0.03, 250_000, 78);

    let start = Instant::now();
    for (args, label) in [
        (vec!["analyze", a.to_str().unwrap(), "--out"], "analyze a"),
        (vec!["analyze", b.to_str().unwrap(), "--out"], "analyze b"),
        (
            vec![
                "compare",
                a.to_str().unwrap(),
                b.to_str().unwrap(),
                "--equalize-tokens",
                "--out",
            ],
            "compare",
        ),
        (vec!["fit", a.to_str().unwrap(), "--family", "all", "--out"], "fit"),
    ] {
        let out = tmp.path().join(label.replace(' ', "_"));
        let mut full = args.clone();
        full.push(out.to_str().unwrap());
        let output = run_binary(&full);
        let code = output.status.code();
        assert!(
            code == Some(0) || code == Some(2),
            "{label} failed ({code:?}): {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
    let elapsed = start.elapsed();
    within(elapsed, 60, "end-to-end runtime");
    pass(
        "end-to-end runtime",
        format!("analyze+analyze+compare+fit on 2x250k tokens in {elapsed:?}"),
    );
}
