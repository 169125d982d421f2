//! Regenerates the bundled fixture corpora in `fixtures/`.
//!
//! `narrow.txt` is sampled from a generalized inverse Gauss-Poisson
//! population tuned to a hapax rate of about .033 at 50k tokens (a
//! specialized, single-domain corpus profile); `broad.txt` comes from a
//! Zipf-Mandelbrot population tuned to about .059 (a diverse-web profile).
//! Both corpora contain exactly the same number of word tokens and the same
//! sentence-length sequence, so their raw token counts match too.
//!
//! Run from the workspace root:
//!   cargo run -p lexcomp-cli --example gen_fixtures

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexcomp::corpus::tokenize_plain;
use lexcomp::diversity::frequency_spectrum;
use lexcomp::lnre::sampling::sample_zm_token_keys;
use lexcomp::lnre::{fit, LnreFamily, LnreModel};

const N_TOKENS: usize = 50_000;
const NARROW_TARGET: f64 = 0.033;
const BROAD_TARGET: f64 = 0.059;

fn hapax_rate(model: &LnreModel, n: f64) -> f64 {
    model.expected_spectrum(1, n).unwrap() / n
}

/// Bisection for a monotone scalar map.
fn solve<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    let rising = f(hi) > f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if (v > target) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Draws `count` occurrence probabilities from the GIG density
/// pi^(gamma-1) exp(-pi/c - b^2 c/(4 pi)) via a grid inverse CDF.
fn sample_gig(gamma: f64, b: f64, c: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let lo = (b * b * c / 2800.0).ln();
    let hi = (700.0 * c).ln();
    let m = 20_000usize;
    let step = (hi - lo) / m as f64;
    // log-space density: pi^gamma * exp(- pi/c - b^2 c / (4 pi))
    let ln_density = |t: f64| {
        let pi = t.exp();
        gamma * t - pi / c - b * b * c / (4.0 * pi)
    };
    let peak = (0..=m)
        .map(|i| ln_density(lo + i as f64 * step))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut cdf = Vec::with_capacity(m + 1);
    let mut acc = 0.0;
    for i in 0..=m {
        acc += (ln_density(lo + i as f64 * step) - peak).exp();
        cdf.push(acc);
    }
    let total = acc;
    (0..count)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&x| x < u);
            (lo + idx as f64 * step).exp()
        })
        .collect()
}

/// Token stream (type ids) from a finite population of probabilities.
fn sample_population_tokens(probs: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let total: f64 = probs.iter().sum();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p / total;
        cumulative.push(acc);
    }
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative.partition_point(|&x| x < u).min(probs.len() - 1)
        })
        .collect()
}

/// Wraps word ids into sentences with the given length sequence.
fn to_text(ids: &[u64], lengths: &[usize]) -> String {
    let mut out = String::new();
    let mut pos = 0usize;
    for &len in lengths {
        if pos >= ids.len() {
            break;
        }
        let end = (pos + len).min(ids.len());
        for (i, id) in ids[pos..end].iter().enumerate() {
            if i == 0 {
                let _ = write!(out, "Word{id}");
            } else {
                let _ = write!(out, " word{id}");
            }
        }
        out.push_str(".\n");
        pos = end;
    }
    out
}

fn sentence_lengths(total: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lengths = Vec::new();
    let mut used = 0usize;
    while used < total {
        let len = rng.random_range(8..=20).min(total - used);
        lengths.push(len.max(1));
        used += lengths.last().unwrap();
    }
    lengths
}

fn dense_ids(raw: impl Iterator<Item = u64>) -> Vec<u64> {
    let mut map: HashMap<u64, u64> = HashMap::new();
    raw.map(|k| {
        let next = map.len() as u64;
        *map.entry(k).or_insert(next)
    })
    .collect()
}

fn describe(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let stream = tokenize_plain(&text, path.file_name().unwrap().to_str().unwrap());
    let sp = frequency_spectrum(&stream, lexcomp::corpus::TypeDef::Surface).unwrap();
    let rate = sp.class(1) as f64 / sp.n() as f64;
    println!(
        "{}: tokens={} words={} sentences={} V={} V1={} hapax_rate={:.4}",
        path.display(),
        stream.len(),
        stream.word_count(),
        stream.sentence_count(),
        sp.v(),
        sp.class(1),
        rate
    );
    for family in [LnreFamily::Gigp, LnreFamily::Zm, LnreFamily::Fzm] {
        match fit(family, &sp) {
            Ok(m) => {
                let r = m.fit_record().unwrap();
                println!("  fit {family}: chisq={:.2} df={} p={:.3e}", r.chisq, r.df, r.p);
            }
            Err(e) => println!("  fit {family}: failed: {e}"),
        }
    }
}

/// Small tagged vertical corpus for the golden-report test.
fn write_golden_vertical(path: &Path, n_words: usize, alpha: f64, seed: u64) {
    let keys = sample_zm_token_keys(alpha, 0.05, n_words, seed);
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let tags = ["NN", "VV", "JJ", "DT", "IN", "NNS", "VVZ", "RB", "NP"];
    let mut out = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = rng.random_range(6..16);
    for (i, k) in keys.iter().enumerate() {
        let next = ids.len() + 1;
        let id = *ids.entry(*k).or_insert(next);
        let tag = tags[id % tags.len()];
        let _ = writeln!(out, "word{id}\t{tag}\tword{id}");
        remaining -= 1;
        if remaining == 0 || i + 1 == keys.len() {
            out.push_str(".\tSENT\t.\n");
            remaining = rng.random_range(6..16);
        }
    }
    std::fs::write(path, out).unwrap();
}

fn main() {
    let out_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&out_dir).unwrap();
    let n = N_TOKENS as f64;

    // narrow: GIGP population, hapax rate ~ .033 at 50k tokens
    let gamma = -0.4;
    let b = 0.05;
    let c = solve(
        |c| hapax_rate(&LnreModel::new_gigp(gamma, b, c).unwrap(), n),
        1e-5,
        0.5,
        NARROW_TARGET,
    );
    let narrow_model = LnreModel::new_gigp(gamma, b, c).unwrap();
    println!(
        "narrow GIGP: gamma={gamma} b={b} c={c:.6} S={:.0} expected hapax rate {:.4}",
        narrow_model.population_size().unwrap(),
        hapax_rate(&narrow_model, n)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(20_250_101);
    let s = narrow_model.population_size().unwrap().round() as usize;
    let probs = sample_gig(gamma, b, c, s, &mut rng);
    let narrow_tokens = sample_population_tokens(&probs, N_TOKENS, &mut rng);
    let narrow_ids = dense_ids(narrow_tokens.iter().map(|&i| i as u64));

    // broad: ZM population, hapax rate ~ .059 at 50k tokens
    let b_zm = 0.05;
    let alpha = solve(
        |a| hapax_rate(&LnreModel::new_zm(a, b_zm).unwrap(), n),
        0.05,
        0.95,
        BROAD_TARGET,
    );
    let broad_model = LnreModel::new_zm(alpha, b_zm).unwrap();
    println!(
        "broad ZM: alpha={alpha:.6} B={b_zm} expected hapax rate {:.4}",
        hapax_rate(&broad_model, n)
    );
    let broad_ids = dense_ids(
        sample_zm_token_keys(alpha, b_zm, N_TOKENS, 20_250_202)
            .into_iter(),
    );

    // identical sentence-length sequences -> identical raw token counts
    let lengths = sentence_lengths(N_TOKENS, 9);
    let narrow_path = out_dir.join("narrow.txt");
    let broad_path = out_dir.join("broad.txt");
    std::fs::write(&narrow_path, to_text(&narrow_ids, &lengths)).unwrap();
    std::fs::write(&broad_path, to_text(&broad_ids, &lengths)).unwrap();

    describe(&narrow_path);
    describe(&broad_path);

    write_golden_vertical(&out_dir.join("golden_a.vrt"), 2_000, 0.55, 501);
    write_golden_vertical(&out_dir.join("golden_b.vrt"), 2_000, 0.7, 502);
    println!("golden corpora written; refresh the golden report with:");
    println!("  LEXCOMP_UPDATE_GOLDEN=1 cargo test -p lexcomp-cli --test golden");
}
