//! Small statistical toolbox: compensated means, Wilson intervals, and the
//! two-sample Kolmogorov-Smirnov distance.

/// Neumaier-compensated sum; deterministic for a fixed input order.
pub fn sum(xs: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

#[derive(Clone, Copy, Debug)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

/// Sample mean with its CLT standard error (two-pass variance).
pub fn mean_se(xs: &[f64]) -> MeanSe {
    let n = xs.len();
    assert!(n >= 2, "need at least two samples");
    let mean = sum(xs) / n as f64;
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = sum(&sq) / (n as f64 - 1.0);
    MeanSe {
        mean,
        se: (var / n as f64).sqrt(),
        n,
    }
}

/// Wilson score interval for a binomial proportion at z standard deviations.
pub fn wilson_ci(successes: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0);
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Two-sample KS statistic sup |F_a - F_b|. Inputs need not be sorted.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("NaN in KS sample"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("NaN in KS sample"));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    let mut cdf_diff = 0.0;
    // advance through ties on both sides together so tied jumps are
    // measured after both CDFs have moved
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == next {
            cdf_diff += 1.0 / na;
            i += 1;
        }
        while j < b.len() && b[j] == next {
            cdf_diff -= 1.0 / nb;
            j += 1;
        }
        d = d.max(cdf_diff.abs());
    }
    d
}

/// Asymptotic two-sample KS critical value: c(level) * sqrt((n+m)/(n m))
/// with c(level) = sqrt(-ln(level/2)/2).
pub fn ks_critical(n: usize, m: usize, level: f64) -> f64 {
    assert!(level > 0.0 && level < 1.0);
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * ((n as f64 + m as f64) / (n as f64 * m as f64)).sqrt()
}
