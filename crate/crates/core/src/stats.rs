//! Numerical substrate: ranks, Spearman correlation, least squares, VIF,
//! discretisation and the information-theoretic scores used by the filter
//! selectors.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};

/// R² at or above `1 - UNBOUNDED_EPS` is treated as perfect dependence.
pub const UNBOUNDED_EPS: f64 = 1e-10;

/// Relative pivot size below which a unit-norm predictor is considered to
/// lie in the span of the previously chosen ones.
const RANK_TOL: f64 = 1e-10;

/// 1-based ranks; ties get the average of the ranks they span.
pub fn rank_with_ties(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation; 0 when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman's ρ: Pearson correlation of average ranks. A constant input
/// yields 0.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("spearman needs at least 2 values".into()));
    }
    Ok(pearson(&rank_with_ties(x), &rank_with_ties(y)))
}

/// Symmetric matrix of pairwise Spearman coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    metric_names: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn metric_names(&self) -> &[String] {
        &self.metric_names
    }

    pub fn len(&self) -> usize {
        self.metric_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric_names.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn by_name(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.metric_names.iter().position(|m| m == a)?;
        let j = self.metric_names.iter().position(|m| m == b)?;
        Some(self.values[i][j])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Pairwise Spearman over every metric column; ranks are computed once per
/// column.
pub fn spearman_matrix(d: &Dataset) -> CorrelationMatrix {
    let ranks: Vec<Vec<f64>> = d.columns().iter().map(|c| rank_with_ties(c)).collect();
    let p = ranks.len();
    let mut values = vec![vec![0.0; p]; p];
    for i in 0..p {
        values[i][i] = 1.0;
        for j in (i + 1)..p {
            let r = pearson(&ranks[i], &ranks[j]);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    for (j, col) in d.columns().iter().enumerate() {
        if is_constant(col) {
            log::warn!(
                "metric `{}` is constant; its Spearman coefficients are set to 0",
                d.metric_names()[j]
            );
        }
    }
    CorrelationMatrix {
        metric_names: d.metric_names().to_vec(),
        values,
    }
}

pub fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

fn centered(values: &[f64]) -> Vec<f64> {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| v - m).collect()
}

/// R² of the least-squares fit of `target` on `predictors` (columns) with an
/// intercept.
///
/// Uses Householder QR with column pivoting on centred, unit-normalised
/// predictors; directions that are numerically dependent on earlier pivots
/// are dropped, so rank-deficient designs fit in their identified column
/// space. A constant target yields 0.
pub fn ols_r_squared(target: &[f64], predictors: &[&[f64]]) -> f64 {
    let n = target.len();
    let mut y = centered(target);
    let tss: f64 = y.iter().map(|v| v * v).sum();
    if n < 2 || tss == 0.0 {
        return 0.0;
    }

    let mut cols: Vec<Vec<f64>> = predictors
        .iter()
        .filter_map(|p| {
            assert_eq!(p.len(), n, "predictor length must match target length");
            let mut c = centered(p);
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return None;
            }
            c.iter_mut().for_each(|v| *v /= norm);
            Some(c)
        })
        .collect();

    let k = cols.len();
    let mut rank = 0;
    for step in 0..k.min(n) {
        let (best, best_norm) = (step..k)
            .map(|j| (j, cols[j][step..].iter().map(|v| v * v).sum::<f64>().sqrt()))
            .fold((step, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_norm <= RANK_TOL {
            break;
        }
        cols.swap(step, best);

        // Householder reflector zeroing cols[step][step+1..].
        let alpha = if cols[step][step] > 0.0 { -best_norm } else { best_norm };
        let mut v: Vec<f64> = cols[step][step..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            let reflect = |target: &mut [f64]| {
                let dot: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vnorm2;
                for (t, a) in target.iter_mut().zip(&v) {
                    *t -= f * a;
                }
            };
            for col in cols.iter_mut().skip(step + 1) {
                reflect(&mut col[step..]);
            }
            reflect(&mut y[step..]);
        }
        cols[step][step] = alpha;
        cols[step][step + 1..].iter_mut().for_each(|x| *x = 0.0);
        rank = step + 1;
    }

    let rss: f64 = y[rank..].iter().map(|v| v * v).sum();
    (1.0 - rss / tss).clamp(0.0, 1.0)
}

/// A variance inflation factor; perfect linear dependence is `Unbounded`,
/// which orders above every finite score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VifScore {
    Finite(f64),
    Unbounded,
}

impl VifScore {
    pub fn from_r_squared(r2: f64) -> Self {
        if r2 >= 1.0 - UNBOUNDED_EPS {
            VifScore::Unbounded
        } else {
            VifScore::Finite(1.0 / (1.0 - r2))
        }
    }

    /// Finite value, or +∞.
    pub fn value(self) -> f64 {
        match self {
            VifScore::Finite(v) => v,
            VifScore::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, VifScore::Unbounded)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.value().total_cmp(&other.value())
    }
}

impl fmt::Display for VifScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VifScore::Finite(v) => write!(f, "{v:.4}"),
            VifScore::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for VifScore {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VifScore::Finite(v) => s.serialize_f64(*v),
            VifScore::Unbounded => s.serialize_str("inf"),
        }
    }
}

/// VIF per metric, in subset order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VifReport {
    pub entries: Vec<(String, VifScore)>,
}

impl VifReport {
    pub fn get(&self, name: &str) -> Option<VifScore> {
        self.entries.iter().find(|(m, _)| m == name).map(|(_, v)| *v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// VIF(m) = 1 / (1 − R²) where R² regresses m on the other subset metrics.
pub fn vif_scores(d: &Dataset, subset: &MetricSubset) -> Result<VifReport> {
    let idx = d.indices_of(subset)?;
    let entries = idx
        .iter()
        .enumerate()
        .map(|(pos, &j)| {
            let others: Vec<&[f64]> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, &k)| d.column(k))
                .collect();
            let r2 = ols_r_squared(d.column(j), &others);
            (d.metric_names()[j].clone(), VifScore::from_r_squared(r2))
        })
        .collect();
    Ok(VifReport { entries })
}

/// A discretised metric.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteColumn {
    /// Bin label per source value, in `0..bin_count()`.
    pub labels: Vec<usize>,
    /// Interior cut points, ascending. Bin `b` covers `[edge[b-1], edge[b])`
    /// with the outermost bins unbounded.
    pub bin_edges: Vec<f64>,
}

impl DiscreteColumn {
    pub fn bin_count(&self) -> usize {
        self.bin_edges.len() + 1
    }

    /// Bin of an arbitrary value under this column's edges.
    pub fn label_for(&self, value: f64) -> usize {
        self.bin_edges.partition_point(|&e| e <= value)
    }
}

/// Equal-frequency discretisation.
///
/// Each run of tied values is placed by its average sorted position
/// (`floor(pos · bins / n)`), so ties never straddle a cut. Empty bins are
/// merged away and cut points sit midway between neighbouring bins.
pub fn discretize_equal_frequency(values: &[f64], bins: usize) -> Result<DiscreteColumn> {
    let n = values.len();
    if bins < 2 {
        return Err(Error::InvalidParameter("bins must be >= 2".into()));
    }
    if n < bins {
        return Err(Error::TooFewValues { len: n, bins });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut labels = vec![0usize; n];
    let mut edges = Vec::new();
    let mut current: Option<usize> = None;
    let mut next_label = 0usize;
    let mut prev_value = f64::NAN;
    let mut start = 0;
    while start < n {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < n && values[order[end]] == v {
            end += 1;
        }
        let avg_pos = (start + end - 1) as f64 / 2.0;
        let raw_bin = ((avg_pos * bins as f64 / n as f64).floor() as usize).min(bins - 1);
        if current != Some(raw_bin) {
            if current.is_some() {
                edges.push(prev_value + (v - prev_value) / 2.0);
                next_label += 1;
            }
            current = Some(raw_bin);
        }
        for &i in &order[start..end] {
            labels[i] = next_label;
        }
        prev_value = v;
        start = end;
    }
    Ok(DiscreteColumn {
        labels,
        bin_edges: edges,
    })
}

/// Discretises with `min(bins, n)` bins, falling back to a single bin for
/// fewer than two values.
pub fn discretize_capped(values: &[f64], bins: usize) -> DiscreteColumn {
    let b = bins.min(values.len());
    if b < 2 {
        return DiscreteColumn {
            labels: vec![0; values.len()],
            bin_edges: Vec::new(),
        };
    }
    discretize_equal_frequency(values, b).expect("bins capped at length")
}

/// Shannon entropy (bits) of a count vector; 0·log 0 = 0.
pub fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn contingency(col: &DiscreteColumn, outcome: &[bool]) -> Result<Vec<[usize; 2]>> {
    if col.labels.len() != outcome.len() {
        return Err(Error::LengthMismatch {
            left: col.labels.len(),
            right: outcome.len(),
        });
    }
    let bins = col.labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut table = vec![[0usize; 2]; bins];
    for (&b, &y) in col.labels.iter().zip(outcome) {
        table[b][usize::from(y)] += 1;
    }
    Ok(table)
}

/// H(outcome) − H(outcome | bin), in bits.
pub fn information_gain(col: &DiscreteColumn, outcome: &[bool]) -> Result<f64> {
    let table = contingency(col, outcome)?;
    let n = outcome.len();
    if n == 0 {
        return Ok(0.0);
    }
    let totals = table.iter().fold([0usize; 2], |acc, r| [acc[0] + r[0], acc[1] + r[1]]);
    let h = entropy(&totals);
    let conditional: f64 = table
        .iter()
        .map(|r| (r[0] + r[1]) as f64 / n as f64 * entropy(r))
        .sum();
    Ok((h - conditional).max(0.0))
}

/// Pearson χ² statistic of the bins × outcome contingency table. Cells with
/// zero expected count contribute nothing.
pub fn chi_squared(col: &DiscreteColumn, outcome: &[bool]) -> Result<f64> {
    let table = contingency(col, outcome)?;
    Ok(chi_squared_table(&table))
}

pub fn chi_squared_table(table: &[[usize; 2]]) -> f64 {
    let n: usize = table.iter().map(|r| r[0] + r[1]).sum();
    if n == 0 {
        return 0.0;
    }
    let cols = table.iter().fold([0usize; 2], |acc, r| [acc[0] + r[0], acc[1] + r[1]]);
    let mut stat = 0.0;
    for r in table {
        let row_total = (r[0] + r[1]) as f64;
        for c in 0..2 {
            let expected = row_total * cols[c] as f64 / n as f64;
            if expected > 0.0 {
                let d = r[c] as f64 - expected;
                stat += d * d / expected;
            }
        }
    }
    stat
}

/// Fraction of rows outside the majority outcome of their discretised
/// pattern over `subset`. An empty subset forms a single pattern.
pub fn inconsistency_rate(d: &Dataset, subset: &MetricSubset, bins: usize) -> Result<f64> {
    let idx = d.indices_of(subset)?;
    let discrete: Vec<DiscreteColumn> = idx.iter().map(|&j| discretize_capped(d.column(j), bins)).collect();
    Ok(inconsistency_of_columns(&discrete.iter().collect::<Vec<_>>(), d.outcome()))
}

/// Inconsistency rate over pre-discretised columns.
pub fn inconsistency_of_columns(cols: &[&DiscreteColumn], outcome: &[bool]) -> f64 {
    let n = outcome.len();
    if n == 0 {
        return 0.0;
    }
    let mut groups: HashMap<Vec<usize>, [usize; 2]> = HashMap::new();
    for (i, &y) in outcome.iter().enumerate() {
        let key: Vec<usize> = cols.iter().map(|c| c.labels[i]).collect();
        groups.entry(key).or_default()[usize::from(y)] += 1;
    }
    let inconsistent: usize = groups.values().map(|c| c[0].min(c[1])).sum();
    inconsistent as f64 / n as f64
}

/// Akaike information criterion: 2k − 2·logLik.
pub fn aic(log_likelihood: f64, parameter_count: usize) -> f64 {
    2.0 * parameter_count as f64 - 2.0 * log_likelihood
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    fn dataset(cols: Vec<Vec<f64>>) -> Dataset {
        let n = cols[0].len();
        let names = (0..cols.len()).map(|j| format!("x{j}")).collect();
        Dataset::from_columns(names, cols, (0..n).map(|i| i % 2 == 0).collect()).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_with_ties(&[10.0, 20.0, 30.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_with_ties(&[5.0, 5.0, 9.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(rank_with_ties(&[7.0, 7.0, 7.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(rank_with_ties(&[3.0, 1.0, 2.0, 1.0]), vec![4.0, 1.5, 3.0, 1.5]);
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman(&[1.0, 4.0, 9.0], &[1.0, 4.0, 9.0]).unwrap(), 1.0);
        let r = spearman(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert_eq!(spearman(&[1.0, 1.0, 1.0], &[3.0, 2.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(spearman(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn matrix_shapes() {
        let a = vec![1.0, 3.0, 2.0, 5.0, 4.0];
        let d = dataset(vec![a.clone(), a, vec![2.0, 1.0, 5.0, 3.0, 3.0]]);
        let m = spearman_matrix(&d);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
        assert_eq!(m.get(2, 2), 1.0);
        let single = dataset(vec![vec![1.0, 2.0, 3.0, 4.0]]);
        assert_eq!(spearman_matrix(&single).rows(), &[vec![1.0]]);
    }

    #[test]
    fn independent_columns_are_weakly_correlated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let d = dataset(vec![normals(&mut rng, 500), normals(&mut rng, 500)]);
            assert!(spearman_matrix(&d).get(0, 1).abs() < 0.3);
        }
    }

    #[test]
    fn r_squared_degenerate_cases() {
        let p1 = [1.0, 2.0, 3.0, 4.0, 5.0];
        let p2 = [2.0, 0.0, 1.0, 7.0, 3.0];
        let y: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| 3.0 * a - b + 4.0).collect();
        assert!((ols_r_squared(&y, &[&p1, &p2]) - 1.0).abs() < 1e-10);
        assert_eq!(ols_r_squared(&y, &[&[2.0; 5]]), 0.0);
        assert_eq!(ols_r_squared(&[1.0; 5], &[&p1]), 0.0);
        assert_eq!(ols_r_squared(&y, &[]), 0.0);
    }

    #[test]
    fn r_squared_rank_deficient_design() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = normals(&mut rng, 50);
        let b = normals(&mut rng, 50);
        let dup = a.clone();
        let y: Vec<f64> = a.iter().zip(&b).map(|(x, z)| x + 0.5 * z + 0.1).collect();
        let full = ols_r_squared(&y, &[&a, &b]);
        let with_dup = ols_r_squared(&y, &[&a, &dup, &b]);
        assert!((full - with_dup).abs() < 1e-12);
    }

    #[test]
    fn vif_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = normals(&mut rng, 100);
        let b = normals(&mut rng, 100);
        let c: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let d = dataset(vec![a, b, c]);
        let single = vif_scores(&d, &MetricSubset::new(vec!["x0".into()]).unwrap()).unwrap();
        assert_eq!(single.get("x0"), Some(VifScore::Finite(1.0)));
        let all = vif_scores(&d, &d.all_metrics()).unwrap();
        assert!(all.get("x2").unwrap().is_unbounded());
        assert!(VifScore::Unbounded.total_cmp(&VifScore::Finite(1e300)).is_gt());
        assert_eq!(VifScore::Unbounded.to_string(), "inf");
    }

    #[test]
    fn discretize_examples() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        let d = discretize_equal_frequency(&v, 2).unwrap();
        assert_eq!(d.labels, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(d.bin_edges, vec![5.5]);

        let c = discretize_equal_frequency(&[4.0; 6], 3).unwrap();
        assert_eq!(c.labels, vec![0; 6]);
        assert_eq!(c.bin_count(), 1);

        for bits in [
            vec![0.0, 1.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ] {
            let d = discretize_equal_frequency(&bits, 2).unwrap();
            let expected: Vec<usize> = bits.iter().map(|&b| b as usize).collect();
            assert_eq!(d.labels, expected, "{bits:?}");
        }

        assert!(matches!(
            discretize_equal_frequency(&[1.0, 2.0], 3),
            Err(Error::TooFewValues { len: 2, bins: 3 })
        ));
    }

    #[test]
    fn labels_agree_with_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..200).map(|_| (rng.gen::<f64>() * 20.0).floor()).collect();
        let d = discretize_equal_frequency(&v, 10).unwrap();
        for (x, &l) in v.iter().zip(&d.labels) {
            assert_eq!(d.label_for(*x), l);
        }
        assert!(d.bin_edges.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn information_gain_examples() {
        let y = [true, true, true, false];
        let bins = DiscreteColumn {
            labels: vec![0, 0, 1, 1],
            bin_edges: vec![0.5],
        };
        let h = entropy(&[1, 3]);
        assert!((h - 0.8113).abs() < 1e-4);
        let ig = information_gain(&bins, &y).unwrap();
        assert!((ig - 0.3113).abs() < 1e-4);

        let perfect = DiscreteColumn {
            labels: y.iter().map(|&b| usize::from(b)).collect(),
            bin_edges: vec![0.5],
        };
        assert!((information_gain(&perfect, &y).unwrap() - h).abs() < 1e-12);

        let single = DiscreteColumn {
            labels: vec![0; 4],
            bin_edges: vec![],
        };
        assert_eq!(information_gain(&single, &y).unwrap(), 0.0);
        assert!(information_gain(&single, &y[..3]).is_err());
    }

    #[test]
    fn chi_squared_examples() {
        assert_eq!(chi_squared_table(&[[5, 5], [5, 5]]), 0.0);
        assert_eq!(chi_squared_table(&[[10, 0], [0, 10]]), 20.0);
        assert_eq!(chi_squared_table(&[[20, 0], [0, 20]]), 40.0);
        // an empty bin has zero expected count
        assert_eq!(chi_squared_table(&[[10, 0], [0, 0], [0, 10]]), 20.0);
        let col = DiscreteColumn {
            labels: vec![0, 0, 1, 1],
            bin_edges: vec![0.5],
        };
        assert_eq!(chi_squared(&col, &[false, false, true, true]).unwrap(), 4.0);
    }

    #[test]
    fn inconsistency_examples() {
        let d = Dataset::from_columns(
            vec!["a".into(), "k".into()],
            vec![vec![1.0, 2.0, 3.0, 4.0], vec![7.0; 4]],
            vec![false, false, true, true],
        )
        .unwrap();
        let a = MetricSubset::new(vec!["a".into()]).unwrap();
        let k = MetricSubset::new(vec!["k".into()]).unwrap();
        assert_eq!(inconsistency_rate(&d, &a, 2).unwrap(), 0.0);
        assert_eq!(inconsistency_rate(&d, &k, 2).unwrap(), 0.5);
        assert_eq!(inconsistency_rate(&d, &d.all_metrics(), 4).unwrap(), 0.0);
    }

    #[test]
    fn aic_examples() {
        assert_eq!(aic(0.0, 1), 2.0);
        assert_eq!(aic(-10.0, 3), 26.0);
        assert_eq!(aic(-7.5, 4) - aic(-7.5, 3), 2.0);
    }
}
