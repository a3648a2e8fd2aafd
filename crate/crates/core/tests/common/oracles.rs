//! Reference implementations written independently of the library, and
//! the seeded case loops that compare them with it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use befm_core::metrics::{smoothed_ks_test, wasserstein_distance, EmpiricalSample};

fn sample(v: &[f64]) -> EmpiricalSample {
    EmpiricalSample::new("t", v.to_vec()).unwrap()
}

/// Minimum-cost perfect matching (Hungarian method with potentials).
pub fn assignment_cost(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let inf = f64::INFINITY;
    let (mut u, mut v) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}

/// W1 between empirical measures as a transport LP. Replicating each point
/// of `a` |b| times and each point of `b` |a| times gives two uniform
/// measures on n*m atoms, whose optimal plan is a permutation.
pub fn transport_oracle(a: &[f64], b: &[f64]) -> f64 {
    let xs: Vec<f64> = a.iter().flat_map(|&x| std::iter::repeat_n(x, b.len())).collect();
    let ys: Vec<f64> = b.iter().flat_map(|&y| std::iter::repeat_n(y, a.len())).collect();
    let cost: Vec<Vec<f64>> = xs.iter().map(|x| ys.iter().map(|y| (x - y).abs()).collect()).collect();
    assignment_cost(&cost) / xs.len() as f64
}

/// Asymptotic Kolmogorov survival function by direct alternating series,
/// summed until terms vanish.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-2.0 * k * k * lambda * lambda).exp();
        if term < 1e-20 {
            break;
        }
        sum += if (k as u64) % 2 == 1 { term } else { -term };
        k += 1.0;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS on values binned at width 10: D by brute force over the
/// pooled support, p from the asymptotic distribution.
pub fn ks_oracle(a: &[f64], b: &[f64]) -> (f64, f64) {
    let bin = |v: &[f64]| v.iter().map(|x| (x / 10.0).floor()).collect::<Vec<f64>>();
    let (a, b) = (bin(a), bin(b));
    let ecdf = |s: &[f64], t: f64| s.iter().filter(|&&x| x <= t).count() as f64 / s.len() as f64;
    let d = a
        .iter()
        .chain(&b)
        .map(|&t| (ecdf(&a, t) - ecdf(&b, t)).abs())
        .fold(0.0, f64::max);
    let (n, m) = (a.len() as f64, b.len() as f64);
    (d, kolmogorov_q((n * m / (n + m)).sqrt() * d))
}

/// `count` random pairs of sizes 1..=8, half integer-valued (ties) and half
/// continuous, checked against the transport oracle to 1e-9.
pub fn wasserstein_cases(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=8);
        let draw = |rng: &mut ChaCha8Rng| -> f64 {
            if case % 2 == 0 {
                rng.random_range(0..20) as f64
            } else {
                rng.random_range(-50.0..50.0)
            }
        };
        let a: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let b: Vec<f64> = (0..m).map(|_| draw(&mut rng)).collect();
        let got = wasserstein_distance(&sample(&a), &sample(&b)).map_err(|e| e.to_string())?;
        let want = transport_oracle(&a, &b);
        if (got - want).abs() > 1e-9 {
            return Err(format!("case {case}: {a:?} vs {b:?}: {got} != {want}"));
        }
    }
    Ok(())
}

/// `count` random survey-scale sample pairs (some shifted), binned KS
/// statistic, p-value and verdict checked against [`ks_oracle`].
pub fn ks_cases(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.random_range(20..200);
        let m = rng.random_range(20..200);
        let shift = rng.random_range(0..15) as f64;
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(10..=50) as f64).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(10..=50) as f64 + shift).collect();
        let got = smoothed_ks_test(&sample(&a), &sample(&b), 10.0).map_err(|e| e.to_string())?;
        let (d, p) = ks_oracle(&a, &b);
        let gp = got.p_value.unwrap_or(f64::NAN);
        if (got.value - d).abs() > 1e-9 || (gp - p).abs() > 1e-9 || got.passed != Some(p > 0.05) {
            return Err(format!("case {case}: D {} vs {d}, p {gp} vs {p}", got.value));
        }
    }
    Ok(())
}
