use htcs::rng::{DrawSource, RandomStream};
use htcs::stats::{
    friedman, mark_table, parse_report_csv, wilcoxon_signed_rank, wilcoxon_test, Aggregate,
    Alternative, ComparisonReport, Mark, Method, ResultMatrix,
};
use proptest::prelude::*;

/// Midrank of `v[i]` by counting, O(n²).
fn naive_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let below = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Two-sided p of W⁺ by enumerating all 2ⁿ sign assignments.
fn brute_force_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len();
    let total = 1u64 << n;
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0..total {
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w <= w_plus + 1e-9 {
            le += 1;
        }
        if w >= w_plus - 1e-9 {
            ge += 1;
        }
    }
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

fn check_all_sign_patterns(mags: &[f64]) {
    let n = mags.len();
    let ranks = naive_ranks(mags);
    for pattern in 0..(1u32 << n) {
        let d: Vec<f64> = (0..n)
            .map(|i| if pattern >> i & 1 == 1 { mags[i] } else { -mags[i] })
            .collect();
        let zeros = vec![0.0; n];
        let got = wilcoxon_test(&d, &zeros, Alternative::TwoSided, Method::Exact).unwrap();
        let w_plus: f64 = (0..n).filter(|&i| d[i] > 0.0).map(|i| ranks[i]).sum();
        assert!((got.w_plus - w_plus).abs() < 1e-12);
        let want = brute_force_p(&ranks, w_plus);
        assert!(
            (got.p_value - want).abs() < 1e-12,
            "mags {mags:?}, pattern {pattern:b}: {} vs {want}",
            got.p_value
        );
    }
}

#[test]
fn exact_wilcoxon_matches_enumeration_without_ties() {
    for n in 1..=10 {
        let mags: Vec<f64> = (1..=n).map(|i| i as f64 * 0.7).collect();
        check_all_sign_patterns(&mags);
    }
}

#[test]
fn exact_wilcoxon_matches_enumeration_with_ties() {
    check_all_sign_patterns(&[1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 4.0, 5.0, 5.0, 6.0]);
    check_all_sign_patterns(&[2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]);
    check_all_sign_patterns(&[0.5, 1.5, 1.5, 9.0, 9.0]);
}

#[test]
fn hand_example() {
    let r = wilcoxon_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0], Alternative::Less, Method::Auto)
        .unwrap();
    assert_eq!(r.w_plus, 0.0);
    assert!((r.p_value - 1.0 / 32.0).abs() < 1e-15);
    let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    assert!((r.p_value - 0.0625).abs() < 1e-15);
}

fn random_matrix(src: &mut RandomStream, algorithms: usize, problems: usize) -> ResultMatrix<f64> {
    let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let mut m = ResultMatrix::new(names("A", algorithms), names("P", problems));
    for a in 0..algorithms {
        for p in 0..problems {
            // Coarse values so rows contain ties.
            m.set(a, p, vec![src.index_below(6) as f64]);
        }
    }
    m
}

#[test]
fn friedman_ranks_match_per_row_oracle() {
    let mut src = RandomStream::new(2024);
    let (k, n) = (5, 20);
    for _ in 0..100 {
        let m = random_matrix(&mut src, k, n);
        let got = friedman(&m, Aggregate::Mean).unwrap();
        let mut sums = vec![0.0; k];
        let mut tie_total = 0.0;
        for p in 0..n {
            let row: Vec<f64> = (0..k).map(|a| m.cell(a, p)[0]).collect();
            for (s, r) in sums.iter_mut().zip(naive_ranks(&row)) {
                *s += r;
            }
            let mut seen = Vec::new();
            for &v in &row {
                if !seen.contains(&v) {
                    seen.push(v);
                    let t = row.iter().filter(|&&w| w == v).count() as f64;
                    tie_total += t * t * t - t;
                }
            }
        }
        let (nf, kf) = (n as f64, k as f64);
        for (g, s) in got.avg_ranks.iter().zip(&sums) {
            assert!((g - s / nf).abs() < 1e-12);
        }
        let raw = 12.0 / (nf * kf * (kf + 1.0)) * sums.iter().map(|r| r * r).sum::<f64>() - 3.0 * nf * (kf + 1.0);
        let chi = raw / (1.0 - tie_total / (nf * (kf * kf * kf - kf)));
        assert!((got.chi_square - chi).abs() < 1e-9, "{} vs {chi}", got.chi_square);
        assert!((0.0..=1.0).contains(&got.p_value));
    }
}

#[test]
fn wilcoxon_null_is_calibrated() {
    let mut src = RandomStream::new(99);
    let mut accepted = 0;
    for _ in 0..100 {
        let x: Vec<f64> = (0..20).map(|_| src.standard_normal()).collect();
        let y: Vec<f64> = (0..20).map(|_| src.standard_normal()).collect();
        if wilcoxon_signed_rank(&x, &y).unwrap().p_value >= 0.05 {
            accepted += 1;
        }
    }
    assert!(accepted >= 90, "accepted {accepted}/100");
}

#[test]
fn exact_and_normal_agree_near_the_switch() {
    let mut src = RandomStream::new(7);
    for n in 10..=12 {
        for _ in 0..50 {
            let x: Vec<f64> = (0..n).map(|_| src.standard_normal::<f64>() + 0.3).collect();
            let y = vec![0.0; n];
            let e = wilcoxon_test(&x, &y, Alternative::TwoSided, Method::Exact).unwrap();
            let a = wilcoxon_test(&x, &y, Alternative::TwoSided, Method::Normal).unwrap();
            assert!((e.p_value - a.p_value).abs() < 0.02, "n = {n}: {} vs {}", e.p_value, a.p_value);
        }
    }
}

fn two_algorithm_matrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> ResultMatrix<f64> {
    let problems = (0..a.len()).map(|i| format!("P{i}")).collect();
    let mut m = ResultMatrix::new(vec!["A".into(), "B".into()], problems);
    for (p, (ra, rb)) in a.iter().zip(b).enumerate() {
        m.set(0, p, ra.clone());
        m.set(1, p, rb.clone());
    }
    m
}

#[test]
fn duplicated_algorithm_is_similar_everywhere() {
    let mut src = RandomStream::new(3);
    let a: Vec<Vec<f64>> = (0..6).map(|_| (0..20).map(|_| src.uniform_open()).collect()).collect();
    let m = two_algorithm_matrix(&a, &a);
    let t = mark_table("A", &m).unwrap();
    assert!(t.verdicts.iter().flatten().all(|v| v.mark == Mark::Similar));
    let f = friedman(&m, Aggregate::Mean).unwrap();
    assert_eq!(f.avg_ranks[0], f.avg_ranks[1]);
}

#[test]
fn halved_values_win_everywhere() {
    let mut src = RandomStream::new(4);
    let a: Vec<Vec<f64>> = (0..6).map(|_| (0..20).map(|_| 1.0 + src.uniform_open::<f64>()).collect()).collect();
    let b: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| v / 2.0).collect()).collect();
    let m = two_algorithm_matrix(&a, &b);
    let t = mark_table("A", &m).unwrap();
    assert!(t.verdicts.iter().flatten().all(|v| v.mark == Mark::Worse));
    assert_eq!(t.totals[0].as_tuple(), (6, 0, 0));
    let f = friedman(&m, Aggregate::Mean).unwrap();
    assert_eq!(f.avg_ranks, vec![2.0, 1.0]);
}

#[test]
fn report_round_trips_through_csv() {
    let mut src = RandomStream::new(5);
    let mut m = ResultMatrix::new(
        vec!["CS".into(), "CSW".into(), "CSP".into()],
        vec!["F_sph".into(), "F_ras".into(), "F_sal".into()],
    );
    for a in 0..3 {
        for p in 0..3 {
            m.set(a, p, (0..10).map(|_| src.uniform_open::<f64>() * 10f64.powi(-(a as i32) * 7)).collect());
        }
    }
    let report = ComparisonReport::build("CS", &m, Aggregate::Mean).unwrap();
    let back = parse_report_csv(&report.to_csv()).unwrap();
    assert_eq!(back.algorithms, m.algorithms);
    assert_eq!(back.problems, m.problems);
    let means = m.aggregated(Aggregate::Mean);
    for p in 0..3 {
        for a in 0..3 {
            assert_eq!(back.cell(a, p), &[means[p][a]]);
        }
    }
}

proptest! {
    #[test]
    fn row_ranks_sum_to_triangle(row in prop::collection::vec(0u8..5, 2..9)) {
        let row: Vec<f64> = row.into_iter().map(f64::from).collect();
        let k = row.len() as f64;
        let s: f64 = htcs::stats::midranks(&row).iter().sum();
        prop_assert!((s - k * (k + 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn swapping_samples_keeps_two_sided_p(
        pairs in prop::collection::vec((-100i32..100, -100i32..100), 1..30)
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let a = wilcoxon_signed_rank(&x, &y).unwrap();
        let b = wilcoxon_signed_rank(&y, &x).unwrap();
        prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
        prop_assert_eq!(a.statistic, b.statistic);
    }

    #[test]
    fn positive_scaling_keeps_p(
        pairs in prop::collection::vec((-100i32..100, -100i32..100), 1..30),
        k in -20i32..20,
    ) {
        // Powers of two scale exactly, so ties among |d| survive.
        let c = 2f64.powi(k);
        let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let xs: Vec<f64> = x.iter().map(|v| v * c).collect();
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let a = wilcoxon_signed_rank(&x, &y).unwrap();
        let b = wilcoxon_signed_rank(&xs, &ys).unwrap();
        prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
    }
}
