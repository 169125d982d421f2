//! Chi-square fitting of LNRE models to an observed frequency spectrum.
//!
//! The objective compares observed against expected counts over the cells
//! {V(1), ..., V(K-1), V(>=K)}: spectrum classes m = 1..15 with trailing
//! low-count classes (observed < 5) merged into the open tail cell, which
//! also absorbs V - sum V(m). Parameters are searched by Nelder-Mead over
//! smooth transforms (logit for shape, log for cutoffs and scales) from a
//! fixed five-point multi-start grid, so fitting is fully deterministic.

use crate::diversity::FrequencySpectrum;
use crate::error::{Error, Result};
use crate::lnre::{FitRecord, LnreFamily, LnreModel, LnreParams};
use crate::numeric::simplex::{nelder_mead, SimplexResult};
use crate::numeric::special::gammq;

const MAX_SINGLE_CLASS: u64 = 15;
const MIN_CELL_COUNT: f64 = 5.0;
const MAX_EVALS_PER_START: usize = 10_000;
const DIAMETER_TOL: f64 = 1e-8;

/// One chi-square cell: a single spectrum class, or the open tail.
#[derive(Debug, Clone, Copy)]
struct Cell {
    /// Lowest frequency class covered; the tail cell covers m >= lo.
    lo: u64,
    open: bool,
    observed: f64,
}

fn build_cells(v: f64, classes: &[(u64, f64)]) -> Vec<Cell> {
    let mut singles: Vec<Cell> = Vec::new();
    let mut seen = 0.0;
    for m in 1..=MAX_SINGLE_CLASS {
        let observed = classes
            .iter()
            .find(|(cm, _)| *cm == m)
            .map(|(_, c)| *c)
            .unwrap_or(0.0);
        seen += observed;
        singles.push(Cell {
            lo: m,
            open: false,
            observed,
        });
    }
    // everything beyond the singles
    let mut tail = Cell {
        lo: MAX_SINGLE_CLASS + 1,
        open: true,
        observed: (v - seen).max(0.0),
    };
    // merge trailing low-count classes into the tail cell
    while let Some(last) = singles.last() {
        if last.observed < MIN_CELL_COUNT && singles.len() > 1 {
            tail.observed += last.observed;
            tail.lo = last.lo;
            singles.pop();
        } else {
            break;
        }
    }
    singles.push(tail);
    singles
}

fn chisq_objective(model: &LnreModel, n: f64, cells: &[Cell]) -> f64 {
    let mut singles_sum = 0.0;
    let mut chisq = 0.0;
    for cell in cells {
        let expected = if cell.open {
            match model.expected_vocabulary(n) {
                Ok(ev) => ev - singles_sum,
                Err(_) => return f64::INFINITY,
            }
        } else {
            match model.expected_spectrum(cell.lo, n) {
                Ok(e) => {
                    singles_sum += e;
                    e
                }
                Err(_) => return f64::INFINITY,
            }
        };
        if !expected.is_finite() {
            return f64::INFINITY;
        }
        let expected = expected.max(1e-12);
        let d = cell.observed - expected;
        chisq += d * d / expected;
    }
    chisq
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Transformed-parameter vector -> model, per family.
fn decode(family: LnreFamily, theta: &[f64]) -> Option<LnreModel> {
    let model = match family {
        LnreFamily::Zm => LnreModel::new_zm(sigmoid(theta[0]), theta[1].exp()),
        LnreFamily::Fzm => {
            let a = theta[1].exp();
            LnreModel::new_fzm(sigmoid(theta[0]), a, a + theta[2].exp())
        }
        LnreFamily::Gigp => {
            LnreModel::new_gigp(theta[0].tanh(), theta[1].exp(), theta[2].exp())
        }
    };
    model.ok()
}

fn encode(params: &LnreParams) -> Vec<f64> {
    match *params {
        LnreParams::Zm { alpha, b } => vec![logit(alpha), b.ln()],
        LnreParams::Fzm { alpha, a, b } => vec![logit(alpha), a.ln(), (b - a).ln()],
        LnreParams::Gigp { gamma, b, c } => {
            vec![0.5 * ((1.0 + gamma) / (1.0 - gamma)).ln(), b.ln(), c.ln()]
        }
    }
}

fn starting_points(family: LnreFamily, b0: f64) -> Vec<LnreParams> {
    match family {
        LnreFamily::Zm => vec![
            LnreParams::Zm { alpha: 0.5, b: b0 },
            LnreParams::Zm { alpha: 0.3, b: b0 },
            LnreParams::Zm { alpha: 0.7, b: b0 },
            LnreParams::Zm { alpha: 0.85, b: b0 },
            LnreParams::Zm { alpha: 0.5, b: (10.0 * b0).min(0.9) },
        ],
        LnreFamily::Fzm => vec![
            LnreParams::Fzm { alpha: 0.5, a: 1e-7, b: b0 },
            LnreParams::Fzm { alpha: 0.3, a: 1e-7, b: b0 },
            LnreParams::Fzm { alpha: 0.7, a: 1e-8, b: b0 },
            LnreParams::Fzm { alpha: 0.5, a: 1e-5, b: (10.0 * b0).min(0.9) },
            LnreParams::Fzm { alpha: 0.85, a: 1e-8, b: b0 },
        ],
        LnreFamily::Gigp => vec![
            LnreParams::Gigp { gamma: -0.5, b: 0.02, c: b0 },
            LnreParams::Gigp { gamma: -0.3, b: 0.1, c: b0 / 5.0 },
            LnreParams::Gigp { gamma: -0.7, b: 0.01, c: b0 },
            LnreParams::Gigp { gamma: -0.5, b: 0.3, c: (10.0 * b0).min(0.9) },
            LnreParams::Gigp { gamma: -0.2, b: 0.05, c: b0 / 20.0 },
        ],
    }
}

fn free_params(family: LnreFamily) -> usize {
    match family {
        LnreFamily::Zm => 2,
        LnreFamily::Fzm | LnreFamily::Gigp => 3,
    }
}

/// Fits a model family to an observed frequency spectrum.
pub fn fit(family: LnreFamily, spectrum: &FrequencySpectrum) -> Result<LnreModel> {
    if spectrum.v() < 2 || spectrum.nonzero_class_count() < 3 {
        return Err(Error::Argument(format!(
            "fitting needs V >= 2 and at least 3 nonempty frequency classes, got V={} with {} classes",
            spectrum.v(),
            spectrum.nonzero_class_count()
        )));
    }
    let classes: Vec<(u64, f64)> = spectrum
        .classes()
        .filter(|&(m, _)| m <= MAX_SINGLE_CLASS)
        .map(|(m, vm)| (m, vm as f64))
        .collect();
    // highest observed class approximates the top type's relative frequency
    let m_max = spectrum.classes().map(|(m, _)| m).max().unwrap_or(1);
    let b0 = (m_max as f64 / spectrum.n() as f64).clamp(1e-6, 0.5);
    fit_cells(
        family,
        spectrum.n() as f64,
        spectrum.v() as f64,
        &classes,
        b0,
    )
    .map(|m| {
        let record = m.fit.expect("fit record is set");
        LnreModel {
            params: m.params,
            fitted_n: Some(spectrum.n()),
            fit: Some(record),
        }
    })
}

/// Fits a family to real-valued spectrum data (e.g. a model's own expected
/// spectrum): token count `n`, type count `v`, and class counts for
/// m = 1..15. Values need not be integers.
pub fn fit_real(
    family: LnreFamily,
    n: f64,
    v: f64,
    classes: &[(u64, f64)],
) -> Result<LnreModel> {
    if !(n > 0.0 && v >= 2.0) || classes.len() < 3 {
        return Err(Error::Argument(
            "fitting needs N > 0, V >= 2 and at least 3 frequency classes".into(),
        ));
    }
    let m_max = classes
        .iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|(m, _)| *m)
        .max()
        .unwrap_or(1);
    let b0 = (m_max as f64 / n).clamp(1e-6, 0.5);
    let fitted = fit_cells(family, n, v, classes, b0)?;
    Ok(LnreModel {
        params: fitted.params,
        fitted_n: Some(n.round() as u64),
        fit: fitted.fit,
    })
}

fn fit_cells(
    family: LnreFamily,
    n: f64,
    v: f64,
    classes: &[(u64, f64)],
    b0: f64,
) -> Result<LnreModel> {
    let cells = build_cells(v, classes);
    let k = free_params(family);
    if cells.len() <= k {
        return Err(Error::Argument(format!(
            "only {} chi-square cells for {} free parameters",
            cells.len(),
            k
        )));
    }

    let mut best: Option<(SimplexResult, LnreModel)> = None;
    for start in starting_points(family, b0) {
        let theta0 = encode(&start);
        let result = nelder_mead(
            |theta| match decode(family, theta) {
                Some(model) => chisq_objective(&model, n, &cells),
                None => f64::INFINITY,
            },
            &theta0,
            0.7,
            MAX_EVALS_PER_START,
            DIAMETER_TOL,
        );
        let replace = match &best {
            None => true,
            Some((b, _)) => {
                (result.converged && !b.converged)
                    || (result.converged == b.converged && result.value < b.value)
            }
        };
        if replace {
            if let Some(model) = decode(family, &result.x) {
                best = Some((result, model));
            }
        }
    }

    let (result, model) = best.ok_or_else(|| Error::FitNotConverged {
        family: family.to_string(),
        params: Vec::new(),
        chisq: f64::INFINITY,
        diameter: f64::INFINITY,
    })?;
    if !result.converged {
        return Err(Error::FitNotConverged {
            family: family.to_string(),
            params: result.x.clone(),
            chisq: result.value,
            diameter: result.diameter,
        });
    }
    let df = cells.len() as i64 - k as i64;
    let chisq = result.value;
    let p = if df >= 1 {
        gammq(df as f64 / 2.0, chisq / 2.0)
    } else {
        f64::NAN
    };
    Ok(LnreModel {
        params: model.params,
        fitted_n: Some(n.round() as u64),
        fit: Some(FitRecord { chisq, df, p }),
    })
}
