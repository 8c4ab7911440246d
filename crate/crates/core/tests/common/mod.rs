#![allow(dead_code)]

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    ks_distance_on(sample, cdf, 0.0, 1.0)
}

/// KS distance restricted to order statistics whose rank fraction lies in
/// `[lo, hi]`.
pub fn ks_distance_on(sample: &[f64], cdf: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        if above < lo || below > hi {
            continue;
        }
        let f = cdf(x);
        d = d.max((f - below).abs()).max((above - f).abs());
    }
    d
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
