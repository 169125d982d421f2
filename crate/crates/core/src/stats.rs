//! Distribution comparison and summarization: the two-sample
//! Kolmogorov-Smirnov test, mean/SD, and Gaussian kernel density estimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sample KS test result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sample Kolmogorov-Smirnov test.
///
/// D is the supremum gap between the empirical CDFs, evaluated at the pooled
/// unique sample points (ties are handled by stepping both CDFs past every
/// duplicate first). The p-value comes from the asymptotic Kolmogorov series
/// with effective size n1 n2 / (n1 + n2), truncated when terms drop below
/// 1e-12.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("KS test needs two non-empty samples".into()));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::Argument("KS test needs finite sample values".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n1, n2) = (xs.len(), ys.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < n1 || j < n2 {
        // next pooled unique value
        let v = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < n1 && xs[i] <= v {
            i += 1;
        }
        while j < n2 && ys[j] <= v {
            j += 1;
        }
        let fa = i as f64 / n1 as f64;
        let fb = j as f64 / n2 as f64;
        d = d.max((fa - fb).abs());
    }
    let n_eff = (n1 * n2) as f64 / (n1 + n2) as f64;
    let lambda = n_eff.sqrt() * d;
    Ok(KsResult {
        d,
        p: kolmogorov_sf(lambda),
        n1,
        n2,
    })
}

/// Survival function of the Kolmogorov distribution:
/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for j in 1..=100_000u64 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Arithmetic mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

pub fn mean_sd(values: &[f64]) -> Result<MeanSd> {
    if values.is_empty() {
        return Err(Error::Argument("mean_sd needs at least one value".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(MeanSd {
        mean,
        sd: var.sqrt(),
    })
}

/// A kernel density curve on an even grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeCurve {
    pub bandwidth: f64,
    pub points: Vec<(f64, f64)>,
}

const KDE_GRID: usize = 512;

/// Gaussian KDE on 512 evenly spaced points spanning
/// \[min - 3h, max + 3h\]. The default bandwidth is Silverman's rule,
/// h = 0.9 min(SD, IQR/1.34) n^(-1/5) with sample SD; when the IQR
/// degenerates to zero on discrete-valued data the SD term alone is used.
pub fn kde(values: &[f64], bandwidth: Option<f64>) -> Result<KdeCurve> {
    if values.len() < 2 {
        return Err(Error::Argument("kde needs at least 2 values".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("kde needs finite values".into()));
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(Error::Argument(format!("bandwidth must be > 0, got {h}"))),
        None => silverman_bandwidth(values)?,
    };
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = min - 3.0 * h;
    let hi = max + 3.0 * h;
    let step = (hi - lo) / (KDE_GRID - 1) as f64;
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let mut points = Vec::with_capacity(KDE_GRID);
    for i in 0..KDE_GRID {
        let x = lo + i as f64 * step;
        let mut density = 0.0;
        for &v in values {
            let u = (x - v) / h;
            density += (-0.5 * u * u).exp();
        }
        points.push((x, density * norm));
    }
    Ok(KdeCurve {
        bandwidth: h,
        points,
    })
}

fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateDistribution(values.len()));
    }
    let iqr = interquartile_range(values);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// IQR with R-type-7 linear quantile interpolation.
fn interquartile_range(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25)
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - h.floor()) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ks_identical_series_gives_zero() {
        let a = vec![0.1, 0.4, 0.4, 0.9];
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.d, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn ks_disjoint_supports_give_one() {
        let r = ks_two_sample(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.d, 1.0);
        assert!(r.p < 0.5);
    }

    #[test]
    fn ks_brute_force_oracle_with_ties() {
        // O(n^2) oracle: evaluate |F_a - F_b| at every pooled point
        let brute = |a: &[f64], b: &[f64]| -> f64 {
            let mut d = 0.0f64;
            for &v in a.iter().chain(b.iter()) {
                let fa = a.iter().filter(|&&x| x <= v).count() as f64 / a.len() as f64;
                let fb = b.iter().filter(|&&x| x <= v).count() as f64 / b.len() as f64;
                d = d.max((fa - fb).abs());
            }
            d
        };
        let a = vec![0.2, 0.2, 0.5, 0.7, 0.7, 0.7, 1.2];
        let b = vec![0.2, 0.3, 0.3, 0.9, 1.2, 1.2];
        let r = ks_two_sample(&a, &b).unwrap();
        assert_eq!(r.d, brute(&a, &b));
    }

    #[test]
    fn ks_invariant_under_monotone_transform_and_reorder() {
        let a = vec![0.31, 0.77, 0.12, 0.55, 0.90, 0.31];
        let b = vec![0.45, 0.20, 0.66, 0.14, 0.83];
        let base = ks_two_sample(&a, &b).unwrap();
        let f = |x: f64| (3.0 * x).exp() + x; // strictly increasing
        let ta: Vec<f64> = a.iter().map(|&x| f(x)).collect();
        let tb: Vec<f64> = b.iter().map(|&x| f(x)).collect();
        let t = ks_two_sample(&ta, &tb).unwrap();
        assert_eq!(base.d, t.d);
        let mut ra = a.clone();
        ra.reverse();
        let r = ks_two_sample(&ra, &b).unwrap();
        assert_eq!(base.d, r.d);
    }

    #[test]
    fn kolmogorov_sf_reference_points() {
        // Q(0.5) ~ 0.9639, Q(1.0) ~ 0.2700, Q(2.0) ~ 0.00067
        assert_relative_eq!(kolmogorov_sf(1.0), 0.26999967168735443, max_relative = 1e-9);
        assert!(kolmogorov_sf(0.0) == 1.0);
        assert!(kolmogorov_sf(0.5) > 0.95 && kolmogorov_sf(0.5) < 0.97);
        assert!(kolmogorov_sf(2.0) < 1e-3);
    }

    #[test]
    fn mean_sd_trivial_values() {
        let r = mean_sd(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((r.mean, r.sd), (1.0, 0.0));
        let r = mean_sd(&[0.0, 2.0]).unwrap();
        assert_eq!((r.mean, r.sd), (1.0, 1.0));
        assert!(mean_sd(&[]).is_err());
    }

    #[test]
    fn mean_sd_matches_compensated_summation_oracle() {
        // deterministic pseudo-random fixture of 1000 draws
        let mut x = 0.5f64;
        let values: Vec<f64> = (0..1000)
            .map(|_| {
                x = (x * 997.0 + 0.123).fract();
                x * 10.0 - 5.0
            })
            .collect();
        // Neumaier compensated sums
        let comp_sum = |vs: &[f64]| -> f64 {
            let (mut sum, mut c) = (0.0f64, 0.0f64);
            for &v in vs {
                let t = sum + v;
                if sum.abs() >= v.abs() {
                    c += (sum - t) + v;
                } else {
                    c += (v - t) + sum;
                }
                sum = t;
            }
            sum + c
        };
        let n = values.len() as f64;
        let mean_oracle = comp_sum(&values) / n;
        let sq: Vec<f64> = values.iter().map(|v| (v - mean_oracle).powi(2)).collect();
        let sd_oracle = (comp_sum(&sq) / n).sqrt();
        let r = mean_sd(&values).unwrap();
        assert!((r.mean - mean_oracle).abs() < 1e-12);
        assert!((r.sd - sd_oracle).abs() < 1e-12);
    }

    #[test]
    fn kde_normalizes_and_is_nonnegative() {
        let values: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 10.0).collect();
        let curve = kde(&values, None).unwrap();
        assert_eq!(curve.points.len(), 512);
        assert!(curve.points.iter().all(|&(_, d)| d >= 0.0));
        // trapezoid integral within 1e-3 of 1
        let integral: f64 = curve
            .points
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum();
        assert!((integral - 1.0).abs() < 1e-3, "integral {integral}");
    }

    #[test]
    fn kde_symmetric_sample_gives_symmetric_density() {
        let values = vec![-3.0, -2.0, -2.0, -0.5, 0.5, 2.0, 2.0, 3.0];
        let curve = kde(&values, None).unwrap();
        let n = curve.points.len();
        for i in 0..n {
            let (_, d1) = curve.points[i];
            let (_, d2) = curve.points[n - 1 - i];
            assert!((d1 - d2).abs() < 1e-9);
        }
    }

    #[test]
    fn kde_finds_bimodal_modes() {
        // mixture with true modes at 0 and 5
        let mut values = Vec::new();
        for i in 0..60 {
            let t = (i as f64 / 59.0) * 2.0 - 1.0;
            values.push(t * 0.6);
            values.push(5.0 + t * 0.6);
        }
        let curve = kde(&values, None).unwrap();
        let h = curve.bandwidth;
        // local maxima
        let mut modes = Vec::new();
        for w in curve.points.windows(3) {
            if w[1].1 > w[0].1 && w[1].1 > w[2].1 {
                modes.push(w[1].0);
            }
        }
        assert_eq!(modes.len(), 2, "modes {modes:?}");
        assert!((modes[0] - 0.0).abs() <= h, "mode {} vs 0", modes[0]);
        assert!((modes[1] - 5.0).abs() <= h, "mode {} vs 5", modes[1]);
    }

    #[test]
    fn kde_degenerate_and_discrete_inputs() {
        assert!(matches!(
            kde(&[2.0, 2.0, 2.0], None),
            Err(Error::DegenerateDistribution(3))
        ));
        // zero IQR but positive SD: SD fallback keeps bandwidth positive
        let mut values = vec![1.0; 20];
        values.push(0.0);
        values.push(2.0);
        let curve = kde(&values, None).unwrap();
        assert!(curve.bandwidth > 0.0);
    }
}
