//! Nonparametric comparison of result sets: Wilcoxon signed-rank marks at the
//! 5 % level and Friedman average ranks, plus the comparison table layout.
//!
//! Marks are stated from the baseline's point of view, as in the result
//! tables: `‡` (rendered `-`) means the baseline is significantly worse than
//! the compared algorithm, `†` (`+`) significantly better, `≈` (`=`) no
//! significant difference.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scalar::{fmt17, Scalar};

/// Significance level for the marks.
pub const ALPHA: f64 = 0.05;

/// Largest effective sample size handled by exact enumeration.
pub const EXACT_LIMIT: usize = 12;

const TIE_EPS: f64 = 1e-9;

/// Midranks (1-based) of `values`; tied values share the mean of their ranks.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let r = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = r;
        }
        start = end;
    }
    ranks
}

/// Sizes of the tie groups in `values`.
fn tie_sizes(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    TwoSided,
    /// `x` tends to be smaller than `y`.
    Less,
    /// `x` tends to be larger than `y`.
    Greater,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact for effective n ≤ [`EXACT_LIMIT`], normal approximation above.
    Auto,
    Exact,
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W⁺, W⁻)`; `None` when every difference is zero.
    pub statistic: Option<f64>,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Pairs left after dropping zero differences.
    pub n_effective: usize,
    pub p_value: f64,
    pub exact: bool,
}

/// Two-sided paired Wilcoxon signed-rank test of `x` against `y`.
pub fn wilcoxon_signed_rank<T: Scalar>(x: &[T], y: &[T]) -> Result<WilcoxonResult> {
    wilcoxon_test(x, y, Alternative::TwoSided, Method::Auto)
}

/// Paired Wilcoxon signed-rank test on `d = x − y`.
///
/// Zero differences are dropped, |d| is ranked with midranks. All-zero input
/// yields `statistic = None` and `p = 1`.
pub fn wilcoxon_test<T: Scalar>(
    x: &[T],
    y: &[T],
    alternative: Alternative,
    method: Method,
) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::DegenerateMatrix("no paired samples".into()));
    }
    let d: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (a - b).as_f64())
        .filter(|&v| v != 0.0)
        .collect();
    let n = d.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            statistic: None,
            w_plus: 0.0,
            w_minus: 0.0,
            n_effective: 0,
            p_value: 1.0,
            exact: true,
        });
    }
    let mags: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks = midranks(&mags);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let exact = match method {
        Method::Auto => n <= EXACT_LIMIT,
        Method::Exact => true,
        Method::Normal => false,
    };
    let p = if exact {
        exact_p(&ranks, w_plus, alternative)
    } else {
        normal_p(n, &mags, w_plus, alternative)
    };
    Ok(WilcoxonResult {
        statistic: Some(w_plus.min(w_minus)),
        w_plus,
        w_minus,
        n_effective: n,
        p_value: p.clamp(0.0, 1.0),
        exact,
    })
}

/// Exact null distribution of W⁺ by counting subsets over doubled midranks
/// (which are integers).
fn exact_p(ranks: &[f64], w_plus: f64, alternative: Alternative) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0f64; max + 1];
    counts[0] = 1.0;
    for &r in &doubled {
        for s in (r..=max).rev() {
            counts[s] += counts[s - r];
        }
    }
    let total = 2f64.powi(ranks.len() as i32);
    let obs = 2.0 * w_plus;
    let (mut le, mut ge) = (0.0, 0.0);
    for (s, &c) in counts.iter().enumerate() {
        let s = s as f64;
        if s <= obs + TIE_EPS {
            le += c;
        }
        if s >= obs - TIE_EPS {
            ge += c;
        }
    }
    let (le, ge) = (le / total, ge / total);
    match alternative {
        Alternative::Less => le,
        Alternative::Greater => ge,
        Alternative::TwoSided => (2.0 * le.min(ge)).min(1.0),
    }
}

fn normal_p(n: usize, mags: &[f64], w_plus: f64, alternative: Alternative) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_sizes(mags)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum::<f64>()
        / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    let sd = var.sqrt();
    let phi = Normal::new(0.0, 1.0).expect("standard normal");
    match alternative {
        Alternative::Less => phi.cdf((w_plus - mean + 0.5) / sd),
        Alternative::Greater => phi.sf((w_plus - mean - 0.5) / sd),
        Alternative::TwoSided => {
            let z = ((w_plus - mean).abs() - 0.5).max(0.0) / sd;
            (2.0 * phi.sf(z)).min(1.0)
        }
    }
}

/// How per-run values are collapsed into one number per cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Mean,
    Median,
}

impl Aggregate {
    pub fn apply(self, runs: &[f64]) -> f64 {
        match self {
            Aggregate::Mean => runs.iter().sum::<f64>() / runs.len() as f64,
            Aggregate::Median => {
                let mut v = runs.to_vec();
                v.sort_by(f64::total_cmp);
                let m = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[m]
                } else {
                    (v[m - 1] + v[m]) / 2.0
                }
            }
        }
    }
}

/// Final values per (algorithm, problem) over a number of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultMatrix<T> {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `cells[a][p]` holds the runs of algorithm `a` on problem `p`.
    pub cells: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> ResultMatrix<T> {
    pub fn new(algorithms: Vec<String>, problems: Vec<String>) -> Self {
        let cells = vec![vec![Vec::new(); problems.len()]; algorithms.len()];
        Self {
            algorithms,
            problems,
            cells,
        }
    }

    pub fn algorithm_index(&self, name: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a == name)
    }

    pub fn set(&mut self, algorithm: usize, problem: usize, runs: Vec<T>) {
        self.cells[algorithm][problem] = runs;
    }

    pub fn cell(&self, algorithm: usize, problem: usize) -> &[T] {
        &self.cells[algorithm][problem]
    }

    /// `[problem][algorithm]` aggregates.
    pub fn aggregated(&self, how: Aggregate) -> Vec<Vec<f64>> {
        (0..self.problems.len())
            .map(|p| {
                (0..self.algorithms.len())
                    .map(|a| {
                        let runs: Vec<f64> = self.cells[a][p].iter().map(|v| v.as_f64()).collect();
                        how.apply(&runs)
                    })
                    .collect()
            })
            .collect()
    }

    fn check_filled(&self) -> Result<()> {
        for (a, row) in self.cells.iter().enumerate() {
            for (p, runs) in row.iter().enumerate() {
                if runs.is_empty() {
                    return Err(Error::DegenerateMatrix(format!(
                        "no runs for {} on {}",
                        self.algorithms[a], self.problems[p]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub avg_ranks: Vec<f64>,
    pub chi_square: f64,
    pub p_value: f64,
}

/// Friedman test over problems (blocks) and algorithms (treatments).
///
/// Each problem row ranks the aggregated values ascending, so rank 1 is the
/// lowest (best) value. The statistic is tie-corrected.
pub fn friedman<T: Scalar>(matrix: &ResultMatrix<T>, how: Aggregate) -> Result<FriedmanResult> {
    let k = matrix.algorithms.len();
    let n = matrix.problems.len();
    if k < 2 || n < 2 {
        return Err(Error::DegenerateMatrix(format!(
            "need at least 2 algorithms and 2 problems, got {k} and {n}"
        )));
    }
    matrix.check_filled()?;
    let rows = matrix.aggregated(how);
    let mut rank_sums = vec![0.0; k];
    let mut tie_total = 0.0;
    for row in &rows {
        for (s, r) in rank_sums.iter_mut().zip(midranks(row)) {
            *s += r;
        }
        tie_total += tie_sizes(row)
            .into_iter()
            .map(|t| (t * t * t - t) as f64)
            .sum::<f64>();
    }
    let (nf, kf) = (n as f64, k as f64);
    let avg_ranks: Vec<f64> = rank_sums.iter().map(|s| s / nf).collect();
    let raw = 12.0 / (nf * kf * (kf + 1.0)) * rank_sums.iter().map(|r| r * r).sum::<f64>()
        - 3.0 * nf * (kf + 1.0);
    let correction = 1.0 - tie_total / (nf * (kf * kf * kf - kf));
    let (chi_square, p_value) = if correction <= 0.0 {
        (0.0, 1.0)
    } else {
        let chi = (raw / correction).max(0.0);
        let dist = ChiSquared::new(kf - 1.0).expect("positive degrees of freedom");
        (chi, dist.sf(chi))
    };
    Ok(FriedmanResult {
        avg_ranks,
        chi_square,
        p_value,
    })
}

/// Outcome for the baseline against one algorithm on one problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mark {
    /// Baseline significantly worse (`‡`, rendered `-`).
    Worse,
    /// No significant difference (`≈`, rendered `=`).
    Similar,
    /// Baseline significantly better (`†`, rendered `+`).
    Better,
}

impl Mark {
    pub fn symbol(self) -> char {
        match self {
            Mark::Worse => '-',
            Mark::Similar => '=',
            Mark::Better => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '-' => Some(Mark::Worse),
            '=' => Some(Mark::Similar),
            '+' => Some(Mark::Better),
            _ => None,
        }
    }
}

pub const LEGEND: &str = "legend: '-' = \u{2021} (baseline worse), '=' = \u{2248} (similar), '+' = \u{2020} (baseline better)";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub mark: Mark,
    pub p_value: f64,
}

impl ComparisonVerdict {
    /// Mark from a test of `baseline − algorithm`.
    pub fn from_test(t: &WilcoxonResult) -> Self {
        let mark = if t.p_value >= ALPHA {
            Mark::Similar
        } else if t.w_plus > t.w_minus {
            Mark::Worse
        } else {
            Mark::Better
        };
        Self {
            mark,
            p_value: t.p_value,
        }
    }
}

/// Counts in `‡/≈/†` order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub worse: usize,
    pub similar: usize,
    pub better: usize,
}

impl Totals {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.worse, self.similar, self.better)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkTable {
    pub baseline: String,
    /// Compared algorithms, baseline excluded, in matrix order.
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `verdicts[a][p]`
    pub verdicts: Vec<Vec<ComparisonVerdict>>,
    pub totals: Vec<Totals>,
    /// Two-sided Wilcoxon p over the per-problem mean pairs.
    pub mean_p_values: Vec<f64>,
}

/// Per-problem Wilcoxon marks of every algorithm against `baseline`, pairing
/// runs by index.
pub fn mark_table<T: Scalar>(baseline: &str, matrix: &ResultMatrix<T>) -> Result<MarkTable> {
    let b = matrix
        .algorithm_index(baseline)
        .ok_or_else(|| Error::MissingAlgorithm(baseline.to_string()))?;
    matrix.check_filled()?;
    let means = matrix.aggregated(Aggregate::Mean);
    let mut table = MarkTable {
        baseline: baseline.to_string(),
        algorithms: Vec::new(),
        problems: matrix.problems.clone(),
        verdicts: Vec::new(),
        totals: Vec::new(),
        mean_p_values: Vec::new(),
    };
    for a in (0..matrix.algorithms.len()).filter(|&a| a != b) {
        let mut row = Vec::with_capacity(matrix.problems.len());
        let mut totals = Totals::default();
        for p in 0..matrix.problems.len() {
            let t = wilcoxon_signed_rank(matrix.cell(b, p), matrix.cell(a, p))?;
            let v = ComparisonVerdict::from_test(&t);
            match v.mark {
                Mark::Worse => totals.worse += 1,
                Mark::Similar => totals.similar += 1,
                Mark::Better => totals.better += 1,
            }
            row.push(v);
        }
        let base_means: Vec<f64> = means.iter().map(|r| r[b]).collect();
        let alg_means: Vec<f64> = means.iter().map(|r| r[a]).collect();
        table.mean_p_values.push(wilcoxon_signed_rank(&base_means, &alg_means)?.p_value);
        table.algorithms.push(matrix.algorithms[a].clone());
        table.verdicts.push(row);
        table.totals.push(totals);
    }
    Ok(table)
}

/// A full comparison: per-cell means, marks against the baseline, totals,
/// the p-value row and Friedman average ranks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `[problem][algorithm]`
    pub values: Vec<Vec<f64>>,
    pub marks: MarkTable,
    pub friedman: FriedmanResult,
}

const TOTALS_KEY: &str = "-/=/+";
const PVALUE_KEY: &str = "p-value";
const RANK_KEY: &str = "Avg. rank";

impl ComparisonReport {
    pub fn build<T: Scalar>(baseline: &str, matrix: &ResultMatrix<T>, how: Aggregate) -> Result<Self> {
        let marks = mark_table(baseline, matrix)?;
        let friedman = friedman(matrix, how)?;
        Ok(Self {
            algorithms: matrix.algorithms.clone(),
            problems: matrix.problems.clone(),
            values: matrix.aggregated(how),
            marks,
            friedman,
        })
    }

    fn mark_of(&self, algorithm: &str, problem: usize) -> Option<Mark> {
        let a = self.marks.algorithms.iter().position(|x| x == algorithm)?;
        Some(self.marks.verdicts[a][problem].mark)
    }

    fn cells(&self) -> Vec<Vec<String>> {
        let mut rows = vec![{
            let mut h = vec!["problem".to_string()];
            h.extend(self.algorithms.iter().cloned());
            h
        }];
        for (p, name) in self.problems.iter().enumerate() {
            let mut r = vec![name.clone()];
            for (a, alg) in self.algorithms.iter().enumerate() {
                let mut cell = fmt17(self.values[p][a]);
                if let Some(m) = self.mark_of(alg, p) {
                    cell.push(' ');
                    cell.push(m.symbol());
                }
                r.push(cell);
            }
            rows.push(r);
        }
        let per_alg = |f: &dyn Fn(usize) -> String| {
            self.algorithms
                .iter()
                .map(|alg| match self.marks.algorithms.iter().position(|x| x == alg) {
                    Some(i) => f(i),
                    None => "-".to_string(),
                })
                .collect::<Vec<_>>()
        };
        let mut totals = vec![TOTALS_KEY.to_string()];
        totals.extend(per_alg(&|i| {
            let t = self.marks.totals[i];
            format!("{}/{}/{}", t.worse, t.similar, t.better)
        }));
        rows.push(totals);
        let mut pv = vec![PVALUE_KEY.to_string()];
        pv.extend(per_alg(&|i| format!("{:.2e}", self.marks.mean_p_values[i])));
        rows.push(pv);
        let mut rk = vec![RANK_KEY.to_string()];
        rk.extend(self.friedman.avg_ranks.iter().map(|r| format!("{r:.2}")));
        rows.push(rk);
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.cells() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Aligned plain-text table followed by the legend.
    pub fn to_text(&self) -> String {
        let rows = self.cells();
        let cols = rows[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        let _ = writeln!(out, "baseline: {}", self.marks.baseline);
        let _ = writeln!(out, "{LEGEND}");
        out
    }
}

/// Recovers the aggregated values of a report CSV as a one-run-per-cell matrix.
pub fn parse_report_csv(text: &str) -> Result<ResultMatrix<f64>> {
    let bad = |m: String| Error::DataFile {
        path: "<comparison report>".into(),
        reason: m,
    };
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("empty report".into()))?
        .split(',')
        .collect();
    if header.first() != Some(&"problem") {
        return Err(bad("missing `problem` header".into()));
    }
    let algorithms: Vec<String> = header[1..].iter().map(|s| s.to_string()).collect();
    let mut problems = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells[0] == TOTALS_KEY {
            break;
        }
        if cells.len() != algorithms.len() + 1 {
            return Err(bad(format!("row `{}` has {} cells", cells[0], cells.len())));
        }
        problems.push(cells[0].to_string());
        let row = cells[1..]
            .iter()
            .map(|c| {
                let tok = c.split_whitespace().next().unwrap_or("");
                tok.parse::<f64>().map_err(|e| bad(format!("`{tok}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        values.push(row);
    }
    let mut m = ResultMatrix::new(algorithms, problems);
    for (p, row) in values.into_iter().enumerate() {
        for (a, v) in row.into_iter().enumerate() {
            m.set(a, p, vec![v]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn midranks_handle_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(midranks(&[5.0, 5.0, 1.0, 5.0]), vec![3.0, 3.0, 1.0, 3.0]);
    }

    #[test]
    fn wilcoxon_equal_samples() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert!(r.statistic.is_none());
    }

    #[test]
    fn wilcoxon_shift_by_one() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 3.0, 4.0, 5.0, 6.0];
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.w_plus, 0.0);
        assert_eq!(r.statistic, Some(0.0));
        assert_abs_diff_eq!(r.p_value, 0.0625, epsilon = 1e-15);
        let one = wilcoxon_test(&x, &y, Alternative::Less, Method::Auto).unwrap();
        assert_abs_diff_eq!(one.p_value, 1.0 / 32.0, epsilon = 1e-15);
        let other = wilcoxon_test(&x, &y, Alternative::Greater, Method::Auto).unwrap();
        assert_abs_diff_eq!(other.p_value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn wilcoxon_length_mismatch() {
        assert!(matches!(
            wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn wilcoxon_normal_branch_for_large_n() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..20).map(|i| i as f64 + 1.0 + 0.01 * i as f64).collect();
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert!(!r.exact);
        assert!(r.p_value < 1e-3);
    }

    #[test]
    fn friedman_all_tied() {
        let mut m = ResultMatrix::<f64>::new(names("a", 3), names("p", 4));
        for a in 0..3 {
            for p in 0..4 {
                m.set(a, p, vec![p as f64]);
            }
        }
        let f = friedman(&m, Aggregate::Mean).unwrap();
        assert_eq!(f.avg_ranks, vec![2.0, 2.0, 2.0]);
        assert_eq!(f.chi_square, 0.0);
        assert_eq!(f.p_value, 1.0);
    }

    #[test]
    fn friedman_total_order() {
        let mut m = ResultMatrix::<f64>::new(names("a", 2), names("p", 20));
        for p in 0..20 {
            m.set(0, p, vec![1.0]);
            m.set(1, p, vec![2.0]);
        }
        let f = friedman(&m, Aggregate::Mean).unwrap();
        assert_eq!(f.avg_ranks, vec![1.0, 2.0]);
        assert!(f.p_value < 1e-4);
    }

    #[test]
    fn friedman_degenerate() {
        let m = ResultMatrix::<f64>::new(names("a", 1), names("p", 3));
        assert!(matches!(friedman(&m, Aggregate::Mean), Err(Error::DegenerateMatrix(_))));
        let m = ResultMatrix::<f64>::new(names("a", 3), names("p", 1));
        assert!(friedman(&m, Aggregate::Mean).is_err());
    }

    #[test]
    fn friedman_known_statistic() {
        // Three treatments, four blocks, no ties: rank sums 4, 8, 12.
        let mut m = ResultMatrix::<f64>::new(names("a", 3), names("p", 4));
        for p in 0..4 {
            for a in 0..3 {
                m.set(a, p, vec![(a + 1) as f64 * 10.0 + p as f64]);
            }
        }
        let f = friedman(&m, Aggregate::Mean).unwrap();
        // 12/(4·3·4)·(16+64+144) − 3·4·4 = 56 − 48 = 8
        assert_abs_diff_eq!(f.chi_square, 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.p_value, (-4.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn mark_table_identical_and_dominated() {
        let mut m = ResultMatrix::<f64>::new(vec!["cs".into(), "x".into(), "y".into()], names("p", 5));
        for p in 0..5 {
            let runs: Vec<f64> = (0..20).map(|r| (r * 7 % 13) as f64 + p as f64).collect();
            let better: Vec<f64> = runs.iter().map(|v| v - 100.0).collect();
            m.set(0, p, runs.clone());
            m.set(1, p, runs);
            m.set(2, p, better);
        }
        let t = mark_table("cs", &m).unwrap();
        assert_eq!(t.algorithms, vec!["x".to_string(), "y".to_string()]);
        assert_eq!(t.totals[0].as_tuple(), (0, 5, 0));
        assert_eq!(t.totals[1].as_tuple(), (5, 0, 0));
        assert!(t.verdicts[1].iter().all(|v| v.mark == Mark::Worse && v.p_value < ALPHA));
    }

    #[test]
    fn mark_table_missing_baseline_and_mismatch() {
        let mut m = ResultMatrix::<f64>::new(vec!["a".into(), "b".into()], names("p", 2));
        for p in 0..2 {
            m.set(0, p, vec![1.0, 2.0]);
            m.set(1, p, vec![1.0]);
        }
        assert!(matches!(mark_table("zz", &m), Err(Error::MissingAlgorithm(_))));
        assert!(matches!(mark_table("a", &m), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn report_round_trip() {
        let mut m = ResultMatrix::<f64>::new(vec!["cs".into(), "csw".into()], names("F", 3));
        for p in 0..3 {
            m.set(0, p, (0..6).map(|r| 1.0 / (r + p + 3) as f64).collect());
            m.set(1, p, (0..6).map(|r| 0.5 / (r + p + 3) as f64).collect());
        }
        let rep = ComparisonReport::build("cs", &m, Aggregate::Mean).unwrap();
        let csv = rep.to_csv();
        assert!(csv.contains("-/=/+,-,"));
        assert!(csv.contains("Avg. rank,2.00,1.00"));
        let back = parse_report_csv(&csv).unwrap();
        assert_eq!(back.algorithms, rep.algorithms);
        assert_eq!(back.problems, rep.problems);
        for p in 0..3 {
            for a in 0..2 {
                assert_eq!(back.cell(a, p), &[rep.values[p][a]]);
            }
        }
        let text = rep.to_text();
        assert!(text.contains("legend"));
        assert!(text.lines().next().unwrap().starts_with("problem"));
    }
}
