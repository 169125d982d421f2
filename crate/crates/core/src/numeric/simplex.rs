//! Nelder-Mead simplex minimization. Fully deterministic: no random
//! restarts, so a fixed start always yields the same trajectory.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub diameter: f64,
    pub converged: bool,
}

/// Minimizes `f` from `start`, with an initial per-coordinate step, until
/// the simplex diameter drops below `diam_tol` or `max_evals` evaluations.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: f64,
    max_evals: usize,
    diam_tol: f64,
) -> SimplexResult {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = start.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(start, &mut evals);
    simplex.push((start.to_vec(), v0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let diameter = |s: &[(Vec<f64>, f64)]| -> f64 {
        let mut d = 0.0f64;
        for i in 1..s.len() {
            for k in 0..n {
                d = d.max((s[i].0[k] - s[0].0[k]).abs());
            }
        }
        d
    };

    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let diam = diameter(&simplex);
        if diam < diam_tol {
            return SimplexResult {
                x: simplex[0].0.clone(),
                value: simplex[0].1,
                evals,
                diameter: diam,
                converged: true,
            };
        }
        if evals >= max_evals {
            return SimplexResult {
                x: simplex[0].0.clone(),
                value: simplex[0].1,
                evals,
                diameter: diam,
                converged: false,
            };
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for k in 0..n {
                centroid[k] += x[k];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let worst = simplex[n].clone();
        let second_worst = simplex[n - 1].1;
        let best = simplex[0].1;

        let lerp = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + t * (centroid[k] - worst.0[k]))
                .collect()
        };

        let xr = lerp(ALPHA);
        let vr = eval(&xr, &mut evals);
        if vr < best {
            let xe = lerp(GAMMA);
            let ve = eval(&xe, &mut evals);
            simplex[n] = if ve < vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr < second_worst {
            simplex[n] = (xr, vr);
            continue;
        }
        let xc = lerp(-RHO);
        let vc = eval(&xc, &mut evals);
        if vc < worst.1 {
            simplex[n] = (xc, vc);
            continue;
        }
        // shrink towards the best vertex
        let best_x = simplex[0].0.clone();
        for item in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = (0..n)
                .map(|k| best_x[k] + SIGMA * (item.0[k] - best_x[k]))
                .collect();
            let v = eval(&x, &mut evals);
            *item = (x, v);
        }
    }
}
