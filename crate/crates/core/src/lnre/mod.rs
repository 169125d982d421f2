//! Parametric LNRE frequency-distribution models: Zipf-Mandelbrot (ZM),
//! finite Zipf-Mandelbrot (fZM) and the generalized inverse Gauss-Poisson
//! model (GIGP), with chi-square fitting, expected vocabulary and spectrum
//! (plus variances), growth extrapolation, and the growth-rate Z-test.
//!
//! All models are Poisson mixtures over a type density g(pi):
//! E\[V(N)\]   = integral (1 - e^{-N pi}) g(pi) d pi,
//! E\[V(m,N)\] = integral ((N pi)^m e^{-N pi} / m!) g(pi) d pi,
//! with g normalized so integral pi g(pi) d pi = 1. ZM/fZM use a power-law
//! density evaluated through the regularized incomplete gamma; GIGP uses the
//! generalized-inverse-Gaussian density evaluated through Bessel K.

mod fit;
pub mod sampling;

pub use fit::{fit, fit_real};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diversity::{CurveKind, FrequencySpectrum, GrowthCurve, GrowthPoint};
use crate::error::{Error, Result};
use crate::numeric::special::{gammp, ln_bessel_k, ln_gamma, normal_two_sided_p};

/// Model family identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LnreFamily {
    Zm,
    Fzm,
    Gigp,
}

impl std::fmt::Display for LnreFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LnreFamily::Zm => "zm",
            LnreFamily::Fzm => "fzm",
            LnreFamily::Gigp => "gigp",
        })
    }
}

impl std::str::FromStr for LnreFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "zm" => Ok(LnreFamily::Zm),
            "fzm" => Ok(LnreFamily::Fzm),
            "gigp" => Ok(LnreFamily::Gigp),
            other => Err(Error::Argument(format!(
                "unknown LNRE family {other:?} (expected zm|fzm|gigp)"
            ))),
        }
    }
}

/// Family-specific parameters.
///
/// ZM: type density g(pi) = C pi^(-alpha-1) on (0, B], C = (1-alpha) B^(alpha-1).
/// fZM restricts the same density to [A, B]. GIGP: g(pi) proportional to
/// pi^(gamma-1) exp(-pi/c - b^2 c / (4 pi)) on (0, inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LnreParams {
    Zm { alpha: f64, b: f64 },
    Fzm { alpha: f64, a: f64, b: f64 },
    Gigp { gamma: f64, b: f64, c: f64 },
}

/// Goodness-of-fit record attached by [`fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub chisq: f64,
    pub df: i64,
    pub p: f64,
}

/// A (possibly fitted) LNRE model.
#[derive(Debug, Clone, PartialEq)]
pub struct LnreModel {
    params: LnreParams,
    fitted_n: Option<u64>,
    fit: Option<FitRecord>,
}

// Parameter guards use negated comparisons so NaN inputs are rejected too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
impl LnreModel {
    pub fn new_zm(alpha: f64, b: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(b > 0.0) {
            return Err(Error::Argument(format!(
                "ZM needs 0 < alpha < 1 and B > 0, got alpha={alpha}, B={b}"
            )));
        }
        Ok(LnreModel {
            params: LnreParams::Zm { alpha, b },
            fitted_n: None,
            fit: None,
        })
    }

    pub fn new_fzm(alpha: f64, a: f64, b: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(a > 0.0) || !(b > a) {
            return Err(Error::Argument(format!(
                "fZM needs 0 < alpha < 1 and 0 < A < B, got alpha={alpha}, A={a}, B={b}"
            )));
        }
        Ok(LnreModel {
            params: LnreParams::Fzm { alpha, a, b },
            fitted_n: None,
            fit: None,
        })
    }

    pub fn new_gigp(gamma: f64, b: f64, c: f64) -> Result<Self> {
        if !(gamma > -1.0 && gamma < 1.0) || !(b > 0.0) || !(c > 0.0) {
            return Err(Error::Argument(format!(
                "GIGP needs -1 < gamma < 1, B > 0 and C > 0, got gamma={gamma}, B={b}, C={c}"
            )));
        }
        Ok(LnreModel {
            params: LnreParams::Gigp { gamma, b, c },
            fitted_n: None,
            fit: None,
        })
    }

    pub fn family(&self) -> LnreFamily {
        match self.params {
            LnreParams::Zm { .. } => LnreFamily::Zm,
            LnreParams::Fzm { .. } => LnreFamily::Fzm,
            LnreParams::Gigp { .. } => LnreFamily::Gigp,
        }
    }

    pub fn params(&self) -> LnreParams {
        self.params
    }

    /// Token count the model was fitted at, if fitted.
    pub fn fitted_n(&self) -> Option<u64> {
        self.fitted_n
    }

    pub fn fit_record(&self) -> Option<FitRecord> {
        self.fit
    }

    #[cfg(test)]
    pub(crate) fn with_fit(mut self, n: u64, record: FitRecord) -> Self {
        self.fitted_n = Some(n);
        self.fit = Some(record);
        self
    }

    /// Expected total population type count S; `None` means infinite (ZM).
    pub fn population_size(&self) -> Option<f64> {
        match self.params {
            LnreParams::Zm { .. } => None,
            LnreParams::Fzm { alpha, a, b } => {
                let c = (1.0 - alpha) / (b.powf(1.0 - alpha) - a.powf(1.0 - alpha));
                Some(c / alpha * (a.powf(-alpha) - b.powf(-alpha)))
            }
            LnreParams::Gigp { gamma, b, c } => {
                let ln_s = (2.0 / (b * c)).ln() + ln_bessel_k(gamma, b)
                    - ln_bessel_k(gamma + 1.0, b);
                Some(ln_s.exp())
            }
        }
    }

    /// E\[V(N)\]: expected number of distinct types in a sample of `n` tokens.
    pub fn expected_vocabulary(&self, n: f64) -> Result<f64> {
        if n < 0.0 {
            return Err(Error::Argument("sample size must be >= 0".into()));
        }
        if n == 0.0 {
            return Ok(0.0);
        }
        let v = match self.params {
            LnreParams::Zm { alpha, b } => {
                let c = (1.0 - alpha) * b.powf(alpha - 1.0);
                let gamma_low = gammp(1.0 - alpha, n * b) * ln_gamma(1.0 - alpha).exp();
                c / alpha
                    * (n.powf(alpha) * gamma_low - (1.0 - (-n * b).exp()) * b.powf(-alpha))
            }
            LnreParams::Fzm { alpha, a, b } => {
                let c = (1.0 - alpha) / (b.powf(1.0 - alpha) - a.powf(1.0 - alpha));
                let g = ln_gamma(1.0 - alpha).exp();
                let gamma_b = gammp(1.0 - alpha, n * b) * g;
                let gamma_a = gammp(1.0 - alpha, n * a) * g;
                c / alpha
                    * ((1.0 - (-n * a).exp()) * a.powf(-alpha)
                        - (1.0 - (-n * b).exp()) * b.powf(-alpha)
                        + n.powf(alpha) * (gamma_b - gamma_a))
            }
            LnreParams::Gigp { gamma, b, c } => {
                let arg = b * (1.0 + n * c).sqrt();
                let ln_norm = (2.0 / (b * c)).ln() - ln_bessel_k(gamma + 1.0, b);
                let t1 = (ln_norm + ln_bessel_k(gamma, b)).exp();
                let t2 = (ln_norm - 0.5 * gamma * (1.0 + n * c).ln() + ln_bessel_k(gamma, arg))
                    .exp();
                t1 - t2
            }
        };
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "expected vocabulary at N={n} is not finite for {:?}",
                self.params
            )));
        }
        Ok(v.max(0.0))
    }

    /// E\[V(m, N)\]: expected count of types occurring exactly `m` times.
    pub fn expected_spectrum(&self, m: u64, n: f64) -> Result<f64> {
        if m < 1 {
            return Err(Error::Argument("spectrum class m must be >= 1".into()));
        }
        if n <= 0.0 {
            return Err(Error::Argument("sample size must be >= 1".into()));
        }
        let mf = m as f64;
        let v = match self.params {
            LnreParams::Zm { alpha, b } => {
                let c = (1.0 - alpha) * b.powf(alpha - 1.0);
                let ln_coeff = ln_gamma(mf - alpha) - ln_gamma(mf + 1.0);
                c * n.powf(alpha) * ln_coeff.exp() * gammp(mf - alpha, n * b)
            }
            LnreParams::Fzm { alpha, a, b } => {
                let c = (1.0 - alpha) / (b.powf(1.0 - alpha) - a.powf(1.0 - alpha));
                let ln_coeff = ln_gamma(mf - alpha) - ln_gamma(mf + 1.0);
                let diff = gammp(mf - alpha, n * b) - gammp(mf - alpha, n * a);
                (c * n.powf(alpha) * ln_coeff.exp() * diff).max(0.0)
            }
            LnreParams::Gigp { gamma, b, c } => {
                let z = 1.0 + n * c;
                let arg = b * z.sqrt();
                let ln_v = mf * n.ln()
                    + (mf - 1.0) * (0.5 * b * c).ln()
                    - ln_gamma(mf + 1.0)
                    - 0.5 * (gamma + mf) * z.ln()
                    + ln_bessel_k(gamma + mf, arg)
                    - ln_bessel_k(gamma + 1.0, b);
                ln_v.exp()
            }
        };
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "expected spectrum E[V({m},{n})] is not finite for {:?}",
                self.params
            )));
        }
        Ok(v)
    }

    /// Var\[V(N)\] = integral e^{-N pi}(1 - e^{-N pi}) g(pi) d pi, which
    /// reduces to E\[V(2N)\] - E\[V(N)\].
    pub fn variance_vocabulary(&self, n: f64) -> Result<f64> {
        if n == 0.0 {
            return Ok(0.0);
        }
        let v = self.expected_vocabulary(2.0 * n)? - self.expected_vocabulary(n)?;
        Ok(v.max(0.0))
    }

    /// Var\[V(m, N)\] = E\[V(m,N)\] - C(2m, m) 4^{-m} E\[V(2m, 2N)\].
    pub fn variance_spectrum(&self, m: u64, n: f64) -> Result<f64> {
        let mf = m as f64;
        let ln_binom = ln_gamma(2.0 * mf + 1.0) - 2.0 * ln_gamma(mf + 1.0)
            - mf * 4.0f64.ln();
        let v = self.expected_spectrum(m, n)?
            - ln_binom.exp() * self.expected_spectrum(2 * m, 2.0 * n)?;
        Ok(v.max(0.0))
    }

    /// Expected growth curves at the given checkpoints, split into the
    /// interpolated part (N up to the fitted sample size) and the
    /// extrapolated part beyond it. Requires a fitted model.
    pub fn extrapolate_growth(&self, checkpoints: &[u64]) -> Result<Vec<GrowthCurve>> {
        let fitted_n = self.fitted_n.ok_or_else(|| {
            Error::Argument("growth extrapolation requires a fitted model".into())
        })?;
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("checkpoints must be strictly increasing".into()));
        }
        let mut interpolated = Vec::new();
        let mut extrapolated = Vec::new();
        for &n in checkpoints {
            let nf = n as f64;
            let point = GrowthPoint {
                n,
                v: self.expected_vocabulary(nf)?,
                v1: self.expected_spectrum(1, nf)?,
                v2: self.expected_spectrum(2, nf)?,
            };
            if n <= fitted_n {
                interpolated.push(point);
            } else {
                extrapolated.push(point);
            }
        }
        let mut curves = Vec::new();
        if !interpolated.is_empty() {
            curves.push(GrowthCurve {
                kind: CurveKind::Interpolated,
                checkpoints: interpolated,
            });
        }
        if !extrapolated.is_empty() {
            curves.push(GrowthCurve {
                kind: CurveKind::Extrapolated,
                checkpoints: extrapolated,
            });
        }
        Ok(curves)
    }

    /// Serializes to the exchange JSON object
    /// `{family, params{}, N, S, chisq, df, p}`.
    pub fn to_json(&self) -> String {
        let mut params = BTreeMap::new();
        match self.params {
            LnreParams::Zm { alpha, b } => {
                params.insert("alpha".to_string(), alpha);
                params.insert("b".to_string(), b);
            }
            LnreParams::Fzm { alpha, a, b } => {
                params.insert("alpha".to_string(), alpha);
                params.insert("a".to_string(), a);
                params.insert("b".to_string(), b);
            }
            LnreParams::Gigp { gamma, b, c } => {
                params.insert("gamma".to_string(), gamma);
                params.insert("b".to_string(), b);
                params.insert("c".to_string(), c);
            }
        }
        let json = ModelJson {
            family: self.family(),
            params,
            n: self.fitted_n,
            s: self.population_size(),
            chisq: self.fit.map(|f| f.chisq),
            df: self.fit.map(|f| f.df),
            p: self.fit.map(|f| f.p),
        };
        serde_json::to_string_pretty(&json).expect("model serialization cannot fail")
    }

    /// Parses the exchange JSON produced by [`LnreModel::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let json: ModelJson = serde_json::from_str(text)
            .map_err(|e| Error::Argument(format!("bad model JSON: {e}")))?;
        let get = |key: &str| -> Result<f64> {
            json.params.get(key).copied().ok_or_else(|| {
                Error::Argument(format!("model JSON missing parameter {key:?}"))
            })
        };
        let mut model = match json.family {
            LnreFamily::Zm => LnreModel::new_zm(get("alpha")?, get("b")?)?,
            LnreFamily::Fzm => LnreModel::new_fzm(get("alpha")?, get("a")?, get("b")?)?,
            LnreFamily::Gigp => LnreModel::new_gigp(get("gamma")?, get("b")?, get("c")?)?,
        };
        model.fitted_n = json.n;
        if let (Some(chisq), Some(df), Some(p)) = (json.chisq, json.df, json.p) {
            model.fit = Some(FitRecord { chisq, df, p });
        }
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    family: LnreFamily,
    params: BTreeMap<String, f64>,
    #[serde(rename = "N")]
    n: Option<u64>,
    #[serde(rename = "S")]
    s: Option<f64>,
    chisq: Option<f64>,
    df: Option<i64>,
    p: Option<f64>,
}

/// Result of the two-corpus growth-rate Z-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZTest {
    pub z: f64,
    pub p: f64,
    pub growth_rate_a: f64,
    pub growth_rate_b: f64,
}

/// Compares vocabulary growth rates G = V(1,N)/N of two corpora with
/// model-based variances:
/// Z = (G_a - G_b) / sqrt(Var\[V(1,N_a)\]/N_a^2 + Var\[V(1,N_b)\]/N_b^2).
pub fn compare_growth_z(
    model_a: &LnreModel,
    spectrum_a: &FrequencySpectrum,
    model_b: &LnreModel,
    spectrum_b: &FrequencySpectrum,
) -> Result<ZTest> {
    let na = spectrum_a.n() as f64;
    let nb = spectrum_b.n() as f64;
    if na == 0.0 || nb == 0.0 {
        return Err(Error::UndefinedStatistic("empty spectrum".into()));
    }
    let ga = spectrum_a.hapaxes() as f64 / na;
    let gb = spectrum_b.hapaxes() as f64 / nb;
    let var = model_a.variance_spectrum(1, na)? / (na * na)
        + model_b.variance_spectrum(1, nb)? / (nb * nb);
    if var <= 0.0 {
        return Err(Error::UndefinedStatistic(
            "combined growth-rate variance is zero".into(),
        ));
    }
    let z = (ga - gb) / var.sqrt();
    Ok(ZTest {
        z,
        p: normal_two_sided_p(z),
        growth_rate_a: ga,
        growth_rate_b: gb,
    })
}
