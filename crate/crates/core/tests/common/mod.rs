//! Brute-force reference implementations used as test oracles.
//!
//! Everything here is written from the defining formulas with plain loops and
//! shares no code with the library: ranks come from pairwise counting, the
//! RSC from a sorted copy, combinations from explicit weighted sums.
#![allow(dead_code)]

pub const TOL: f64 = 1e-9;

/// `rank(i) = 1 + #{ j : j beats i }`, with `j` beating `i` when its key is
/// larger by more than the tolerance, or tied and earlier.
pub fn ranks(values: &[f64], higher_better: bool) -> Vec<usize> {
    let key = |v: f64| if higher_better { v } else { -v };
    let n = values.len();
    (0..n)
        .map(|i| {
            let mut r = 1;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let (kj, ki) = (key(values[j]), key(values[i]));
                if kj > ki + TOL || ((kj - ki).abs() <= TOL && j < i) {
                    r += 1;
                }
            }
            r
        })
        .collect()
}

/// Scores sorted from the best down.
pub fn rsc(scores: &[f64]) -> Vec<f64> {
    let mut v = scores.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

pub fn cd(a: &[f64], b: &[f64]) -> f64 {
    let fa = rsc(a);
    let fb = rsc(b);
    let mut sum = 0.0;
    for i in 0..fa.len() {
        sum += (fa[i] - fb[i]).powi(2);
    }
    (sum / fa.len() as f64).sqrt()
}

pub fn ds(systems: &[Vec<f64>]) -> Vec<f64> {
    let m = systems.len();
    (0..m)
        .map(|i| {
            let mut total = 0.0;
            for j in 0..m {
                if j != i {
                    total += cd(&systems[i], &systems[j]);
                }
            }
            total / (m - 1) as f64
        })
        .collect()
}

/// `Σ w_j x_j(i) / Σ w_j` per item.
pub fn weighted(columns: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let n = columns[0].len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        for (c, w) in columns.iter().zip(weights) {
            num += w * c[i];
            den += w;
        }
        out[i] = num / den;
    }
    out
}

pub fn average(columns: &[Vec<f64>]) -> Vec<f64> {
    weighted(columns, &vec![1.0; columns.len()])
}

/// Combined values for one subset: `space` is "SC" or "RC", `weighting` is
/// "AC", "WCDS" or "WCP". `ds` and `perf` are per member.
pub fn combine(
    scores: &[Vec<f64>],
    space: &str,
    weighting: &str,
    ds: &[f64],
    perf: &[f64],
) -> Vec<f64> {
    let columns: Vec<Vec<f64>> = match space {
        "SC" => scores.to_vec(),
        "RC" => scores
            .iter()
            .map(|s| ranks(s, true).into_iter().map(|r| r as f64).collect())
            .collect(),
        _ => unreachable!(),
    };
    let weights: Vec<f64> = match (space, weighting) {
        (_, "AC") => vec![1.0; scores.len()],
        ("SC", "WCDS") => ds.to_vec(),
        ("SC", "WCP") => perf.to_vec(),
        ("RC", "WCDS") => ds.iter().map(|d| 1.0 / d).collect(),
        ("RC", "WCP") => perf.iter().map(|p| 1.0 / p).collect(),
        _ => unreachable!(),
    };
    weighted(&columns, &weights)
}

/// Every subset of `0..t` with at least two members, by brute-force bitmask.
pub fn subsets(t: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << t))
        .map(|mask| (0..t).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() >= 2)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Mean negative log-likelihood with L2 on the coefficients; `params` holds
/// the coefficients followed by an optional intercept.
pub fn logistic_loss(x: &[Vec<f64>], y: &[u8], params: &[f64], l2: f64, intercept: bool) -> f64 {
    let p = x[0].len();
    let mut total = 0.0;
    for (row, &label) in x.iter().zip(y) {
        let mut z = if intercept { params[p] } else { 0.0 };
        for k in 0..p {
            z += params[k] * row[k];
        }
        let prob = 1.0 / (1.0 + (-z).exp());
        total -= if label == 1 { prob.ln() } else { (1.0 - prob).ln() };
    }
    let mut penalty = 0.0;
    for k in 0..p {
        penalty += params[k] * params[k];
    }
    total / x.len() as f64 + 0.5 * l2 * penalty
}

/// Central finite-difference gradient of `f` at `at`.
pub fn numeric_gradient(f: impl Fn(&[f64]) -> f64, at: &[f64], step: f64) -> Vec<f64> {
    (0..at.len())
        .map(|k| {
            let mut hi = at.to_vec();
            let mut lo = at.to_vec();
            hi[k] += step;
            lo[k] -= step;
            (f(&hi) - f(&lo)) / (2.0 * step)
        })
        .collect()
}
