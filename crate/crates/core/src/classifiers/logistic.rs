//! Binomial logistic regression fitted by iteratively reweighted least squares.

use serde::Serialize;

use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 25;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Coefficients whose magnitude would exceed this are frozen at ±bound and
/// the fit is reported as not converged (quasi-complete separation).
pub const COEFFICIENT_BOUND: f64 = 30.0;

const PROB_FLOOR: f64 = 1e-15;
const RIDGE_JITTER: f64 = 1e-8;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticModel {
    pub metric_names: Vec<String>,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations_used: usize,
    /// Log-likelihood after each accepted iteration, starting from the
    /// initial point.
    pub log_likelihood_trace: Vec<f64>,
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Binomial log-likelihood of `beta` (intercept first) on a design given
/// column-wise.
pub fn log_likelihood(beta: &[f64], cols: &[&[f64]], y: &[f64]) -> f64 {
    (0..y.len())
        .map(|i| {
            let eta = linear_predictor(beta, cols, i);
            y[i] * eta - softplus(eta)
        })
        .sum()
}

/// Gradient of [`log_likelihood`] with respect to `beta`.
pub fn score(beta: &[f64], cols: &[&[f64]], y: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; beta.len()];
    for i in 0..y.len() {
        let r = y[i] - sigmoid(linear_predictor(beta, cols, i));
        g[0] += r;
        for (gj, c) in g[1..].iter_mut().zip(cols) {
            *gj += r * c[i];
        }
    }
    g
}

/// `log_likelihood(to) - log_likelihood(from)`, accurate even when the two
/// points are too close for the difference of sums to resolve.
fn log_likelihood_change(from: &[f64], to: &[f64], cols: &[&[f64]], y: &[f64]) -> f64 {
    let diff: Vec<f64> = to.iter().zip(from).map(|(t, f)| t - f).collect();
    (0..y.len())
        .map(|i| {
            let eta = linear_predictor(from, cols, i);
            let delta = linear_predictor(&diff, cols, i);
            // softplus(eta + delta) - softplus(eta) = ln(1 + sigmoid(eta) * expm1(delta))
            let dsoft = if delta.abs() <= 1.0 {
                (sigmoid(eta) * delta.exp_m1()).ln_1p()
            } else {
                softplus(eta + delta) - softplus(eta)
            };
            y[i] * delta - dsoft
        })
        .sum()
}

fn linear_predictor(beta: &[f64], cols: &[&[f64]], i: usize) -> f64 {
    beta[0] + beta[1..].iter().zip(cols).map(|(b, c)| b * c[i]).sum::<f64>()
}

/// Solves `a x = b` for symmetric positive semi-definite `a` by Cholesky,
/// adding diagonal jitter when the factorisation breaks down.
fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = b.len();
    let scale = (0..k).map(|i| a[i][i].abs()).fold(0.0, f64::max).max(1.0);
    let mut ridge = 0.0;
    loop {
        if let Some(x) = cholesky_solve(a, b, ridge) {
            return x;
        }
        ridge = if ridge == 0.0 { RIDGE_JITTER * scale } else { ridge * 10.0 };
        if ridge > scale * 1e6 {
            return vec![0.0; k];
        }
    }
}

fn cholesky_solve(a: &[Vec<f64>], b: &[f64], ridge: f64) -> Option<Vec<f64>> {
    let k = b.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i][j] + if i == j { ridge } else { 0.0 };
            for m in 0..j {
                s -= l[i][m] * l[j][m];
            }
            if i == j {
                let pivot_floor = 1e-12 * (a[i][i].abs() + ridge).max(f64::MIN_POSITIVE);
                if !(s > pivot_floor) || !s.is_finite() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; k];
    for i in 0..k {
        let s: f64 = b[i] - (0..i).map(|m| l[i][m] * z[m]).sum::<f64>();
        z[i] = s / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = z[i] - ((i + 1)..k).map(|m| l[m][i] * x[m]).sum::<f64>();
        x[i] = s / l[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Fits `outcome ~ subset` by IRLS with step-halving.
///
/// Converges when the largest coefficient update falls below `tol`.
/// Coefficients that would leave `[-30, 30]` are frozen at the bound and
/// the model is marked not converged. An empty subset gives the
/// intercept-only model.
pub fn fit_logistic(d: &Dataset, subset: &MetricSubset, max_iter: usize, tol: f64) -> Result<LogisticModel> {
    if !d.has_both_classes() {
        return Err(Error::DegenerateOutcome);
    }
    let idx = d.indices_of(subset)?;
    let cols: Vec<&[f64]> = idx.iter().map(|&j| d.column(j)).collect();
    let y = d.outcome_f64();
    let n = y.len();
    let k = cols.len() + 1;

    let ybar = y.iter().sum::<f64>() / n as f64;
    let mut beta = vec![0.0; k];
    beta[0] = (ybar / (1.0 - ybar)).ln().clamp(-COEFFICIENT_BOUND, COEFFICIENT_BOUND);
    let mut frozen = vec![false; k];
    let mut separated = false;
    let mut converged = false;
    let mut ll = log_likelihood(&beta, &cols, &y);
    let mut trace = vec![ll];
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let free: Vec<usize> = (0..k).filter(|&j| !frozen[j]).collect();
        if free.is_empty() {
            break;
        }
        let column = |j: usize, i: usize| if j == 0 { 1.0 } else { cols[j - 1][i] };

        let mut grad = vec![0.0; free.len()];
        let mut hess = vec![vec![0.0; free.len()]; free.len()];
        for i in 0..n {
            let p = sigmoid(linear_predictor(&beta, &cols, i));
            let w = p * (1.0 - p);
            let r = y[i] - p;
            for (a, &ja) in free.iter().enumerate() {
                let xa = column(ja, i);
                grad[a] += r * xa;
                for (b, &jb) in free.iter().enumerate().take(a + 1) {
                    hess[a][b] += w * xa * column(jb, i);
                }
            }
        }
        for a in 0..free.len() {
            for b in 0..a {
                hess[b][a] = hess[a][b];
            }
        }
        let step = solve_spd(&hess, &grad);
        let max_step = step.iter().fold(0.0_f64, |m, s| m.max(s.abs()));

        // Largest fraction of the step that keeps every coefficient in bounds.
        let mut t_cap = 1.0_f64;
        for (a, &j) in free.iter().enumerate() {
            let target = beta[j] + step[a];
            if target.abs() > COEFFICIENT_BOUND {
                let limit = COEFFICIENT_BOUND.copysign(target);
                t_cap = t_cap.min(((limit - beta[j]) / step[a]).max(0.0));
            }
        }

        let mut t = t_cap;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut cand = beta.clone();
            for (a, &j) in free.iter().enumerate() {
                cand[j] += t * step[a];
            }
            let hit_bound = t == t_cap && t_cap < 1.0;
            if hit_bound {
                for &j in &free {
                    if cand[j].abs() >= COEFFICIENT_BOUND * (1.0 - 1e-12) {
                        cand[j] = COEFFICIENT_BOUND.copysign(cand[j]);
                    }
                }
            }
            let gain = log_likelihood_change(&beta, &cand, &cols, &y);
            if gain >= 0.0 {
                accepted = Some((cand, ll + gain, hit_bound));
                break;
            }
            t *= 0.5;
        }

        let Some((cand, cand_ll, hit_bound)) = accepted else {
            // No ascent along the Newton direction: at the optimum up to
            // round-off, or stuck.
            converged = !separated && max_step < tol.sqrt();
            break;
        };
        beta = cand;
        ll = cand_ll;
        trace.push(ll);
        if hit_bound {
            for &j in &free {
                if beta[j].abs() >= COEFFICIENT_BOUND {
                    frozen[j] = true;
                    separated = true;
                }
            }
        }
        if max_step < tol && !separated {
            converged = true;
            break;
        }
    }

    Ok(LogisticModel {
        metric_names: subset.names().to_vec(),
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        log_likelihood: log_likelihood(&beta, &cols, &y),
        converged,
        iterations_used: iterations,
        log_likelihood_trace: trace,
    })
}

impl LogisticModel {
    /// Intercept followed by the metric coefficients.
    pub fn beta(&self) -> Vec<f64> {
        let mut b = vec![self.intercept];
        b.extend(&self.coefficients);
        b
    }

    pub fn linear_predictor(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: row.len(),
            });
        }
        Ok(self.intercept + self.coefficients.iter().zip(row).map(|(b, x)| b * x).sum::<f64>())
    }
}

/// sigmoid(intercept + coefficients · row), clamped to [1e−15, 1 − 1e−15].
pub fn predict_logistic(m: &LogisticModel, row: &[f64]) -> Result<f64> {
    Ok(sigmoid(m.linear_predictor(row)?).clamp(PROB_FLOOR, 1.0 - PROB_FLOOR))
}

#[cfg(test)]
mod tests {

    #[test]
    fn likelihood_change_matches_difference() {
        let x = [0.3, -1.2, 2.0, 0.5, -0.7];
        let y = [1.0, 0.0, 1.0, 1.0, 0.0];
        let cols: Vec<&[f64]> = vec![&x];
        let a = [0.1, 0.4];
        for b in [[0.2, -0.3], [5.0, 3.0], [0.1 + 1e-9, 0.4]] {
            let direct = log_likelihood(&b, &cols, &y) - log_likelihood(&a, &cols, &y);
            let change = log_likelihood_change(&a, &b, &cols, &y);
            assert!((direct - change).abs() < 1e-12 * (1.0 + direct.abs()), "{direct} vs {change}");
        }
    }

    use super::*;

    fn ds(cols: Vec<Vec<f64>>, y: Vec<bool>) -> Dataset {
        let names = (0..cols.len()).map(|j| format!("x{j}")).collect();
        Dataset::from_columns(names, cols, y).unwrap()
    }

    #[test]
    fn intercept_only_is_logit_of_rate() {
        let y: Vec<bool> = (0..10).map(|i| i < 6).collect();
        let d = ds(vec![(0..10).map(f64::from).collect()], y);
        let m = fit_logistic(&d, &MetricSubset::empty(), 25, 1e-8).unwrap();
        assert!((m.intercept - 1.5_f64.ln()).abs() < 1e-10);
        assert!((m.intercept - 0.4055).abs() < 1e-4);
        assert!(m.converged);
        assert!(m.coefficients.is_empty());
    }

    #[test]
    fn symmetric_data_has_zero_intercept() {
        let x = vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, -1.5, 1.5];
        let y = vec![false, true, false, true, false, true, false, true];
        // mirror every point: (x, y) -> (-x, !y)
        let mut xs = x.clone();
        xs.extend(x.iter().map(|v| -v));
        let mut ys = y.clone();
        ys.extend(y.iter().map(|v| !v));
        let d = ds(vec![xs], ys);
        let m = fit_logistic(&d, &d.all_metrics(), 25, 1e-8).unwrap();
        assert!(m.converged);
        assert!(m.intercept.abs() < 1e-6);
    }

    #[test]
    fn complete_separation_caps_coefficients() {
        let d = ds(vec![vec![0.0, 1.0]], vec![false, true]);
        let m = fit_logistic(&d, &d.all_metrics(), 25, 1e-8).unwrap();
        assert!(!m.converged);
        assert!(m.coefficients[0].abs() <= COEFFICIENT_BOUND);
        assert!(m.intercept.abs() <= COEFFICIENT_BOUND);
        assert!(m.log_likelihood.is_finite() && m.log_likelihood <= 0.0);
        assert!(m.log_likelihood_trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn degenerate_outcome() {
        let d = ds(vec![vec![0.0, 1.0]], vec![false, true]).select_rows(&[0, 0]);
        assert!(matches!(
            fit_logistic(&d, &d.all_metrics(), 25, 1e-8),
            Err(Error::DegenerateOutcome)
        ));
    }

    #[test]
    fn prediction_examples() {
        let mut m = LogisticModel {
            metric_names: vec!["a".into()],
            intercept: 0.0,
            coefficients: vec![0.0],
            log_likelihood: 0.0,
            converged: true,
            iterations_used: 0,
            log_likelihood_trace: vec![],
        };
        assert_eq!(predict_logistic(&m, &[3.0]).unwrap(), 0.5);
        assert!(matches!(predict_logistic(&m, &[]), Err(Error::DimensionMismatch { .. })));

        m.metric_names.clear();
        m.coefficients.clear();
        m.intercept = 3.0_f64.ln();
        assert!((predict_logistic(&m, &[]).unwrap() - 0.75).abs() < 1e-12);

        let pos = LogisticModel {
            intercept: 0.3,
            coefficients: vec![1.2, -0.7],
            metric_names: vec!["a".into(), "b".into()],
            ..m.clone()
        };
        let neg = LogisticModel {
            intercept: -0.3,
            coefficients: vec![-1.2, 0.7],
            ..pos.clone()
        };
        let row = [0.4, 2.0];
        let p = predict_logistic(&pos, &row).unwrap();
        let q = predict_logistic(&neg, &row).unwrap();
        assert!((p + q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_design_is_fitted() {
        let x: Vec<f64> = (0..40).map(|i| ((i * 7) % 13) as f64).collect();
        let y: Vec<bool> = (0..40).map(|i| (i * 5) % 7 < 3).collect();
        let d = ds(vec![x.clone(), x], y);
        let m = fit_logistic(&d, &d.all_metrics(), 25, 1e-8).unwrap();
        assert!(m.log_likelihood.is_finite());
        assert!(m.log_likelihood_trace.windows(2).all(|w| w[1] >= w[0]));
    }
}
