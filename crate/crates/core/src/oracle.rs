//! Slow, independent reference implementations used to cross-check the fast paths.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::error::Result;
use crate::monomial::{choose_modulus, spectrum_decompose, MonomialMatrix, SpectrumMultiset};

/// Exhaustive search for a partition of the multiset into full root sets.
///
/// Unlike the greedy peel this tries every admissible root order for the
/// smallest remaining exponent and backtracks.
pub fn partition_search(spectrum: &SpectrumMultiset) -> bool {
    let n = spectrum.modulus;
    let mut counts = vec![0usize; n as usize];
    for (&e, &c) in &spectrum.counts {
        counts[e as usize] += c;
    }
    let orders = divisors(n);
    search(&mut counts, n, &orders)
}

fn search(counts: &mut [usize], n: u64, orders: &[u64]) -> bool {
    let Some(e) = counts.iter().position(|&c| c > 0) else {
        return true;
    };
    for &d in orders {
        let step = n / d;
        if !(e as u64).is_multiple_of(step) {
            continue;
        }
        let roots: Vec<usize> = (0..d).map(|k| (k * step) as usize).collect();
        if roots.iter().all(|&x| counts[x] > 0) {
            roots.iter().for_each(|&x| counts[x] -= 1);
            let ok = search(counts, n, orders);
            roots.iter().for_each(|&x| counts[x] += 1);
            if ok {
                return true;
            }
        }
    }
    false
}

/// Dense complex form of a monomial matrix.
pub fn dense(a: &MonomialMatrix) -> Vec<Vec<Complex64>> {
    let n = a.n();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        m[a.sigma()[j]][j] = root_f64(a.modulus(), a.exps()[j] as i64);
    }
    m
}

fn root_f64(modulus: u64, e: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / modulus as f64)
}

fn dense_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Eigenvalue multiplicities among the M-th roots of unity from traces of
/// dense powers: `mult(e) = (1/M) sum_k z_M^{-ek} tr(A^k)`, rounded.
pub fn numeric_spectrum(a: &MonomialMatrix, modulus: u64) -> SpectrumMultiset {
    let n = a.n();
    let base = dense(a);
    let mut power: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0))
                .collect()
        })
        .collect();
    let mut traces = Vec::with_capacity(modulus as usize);
    for _ in 0..modulus {
        traces.push((0..n).map(|i| power[i][i]).sum::<Complex64>());
        power = dense_mul(&power, &base);
    }
    let mut s = SpectrumMultiset::new(modulus);
    for e in 0..modulus {
        let m: Complex64 = traces
            .iter()
            .enumerate()
            .map(|(k, t)| t * root_f64(modulus, -((e * k as u64 % modulus) as i64)))
            .sum::<Complex64>()
            / modulus as f64;
        s.insert(e, m.re.round() as usize);
    }
    s
}

/// `A^k` by repeated multiplication.
pub fn naive_pow(a: &MonomialMatrix, k: u64) -> MonomialMatrix {
    let mut x = MonomialMatrix::identity(a.n(), a.modulus());
    for _ in 0..k {
        x = x.mul(a).expect("same shape");
    }
    x
}

/// Least `k >= 1` with `A^k = I`, by repeated multiplication.
pub fn naive_order(a: &MonomialMatrix) -> u64 {
    let mut x = a.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(a).expect("same shape");
        k += 1;
    }
    k
}

/// Random monomial matrix whose spectrum is expressible with its own modulus:
/// every cycle length divides N and every cycle product is an l-th power.
/// Half of the instances have all corners trivial.
pub fn random_solvable_monomial(
    rng: &mut impl Rng,
    n_max: usize,
    modulus_max: u64,
) -> MonomialMatrix {
    let modulus = rng.gen_range(1..=modulus_max);
    let n = rng.gen_range(1..=n_max);
    let lengths: Vec<usize> = divisors(modulus)
        .into_iter()
        .map(|d| d as usize)
        .filter(|&d| d <= n)
        .collect();
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let choices: Vec<usize> = lengths.iter().copied().filter(|&d| d <= left).collect();
        let d = *choices.choose(rng).expect("1 always fits");
        parts.push(d);
        left -= d;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let trivial = rng.gen_bool(0.5);
    let mut sigma = vec![0usize; n];
    let mut exps = vec![0u64; n];
    let mut at = 0;
    for l in parts {
        let cycle = &order[at..at + l];
        at += l;
        for (i, &j) in cycle.iter().enumerate() {
            sigma[j] = cycle[(i + 1) % l];
            exps[j] = rng.gen_range(0..modulus);
        }
        let sum: u64 = cycle.iter().map(|&j| exps[j]).sum::<u64>() % modulus;
        let last = cycle[l - 1];
        let target = if trivial {
            0
        } else {
            // any multiple of l keeps the spectrum inside the N-th roots
            rng.gen_range(0..modulus / l as u64) * l as u64
        };
        exps[last] = (exps[last] + modulus + target - sum) % modulus;
    }
    MonomialMatrix::new(modulus, sigma, exps).expect("constructed valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub instance: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub seed: u64,
    pub instances: usize,
    pub permutation_like: usize,
    pub checks: usize,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub instances: usize,
    pub n_max: usize,
    pub modulus_max: u64,
    /// Trace-formula cross-check in double precision.
    pub numeric: bool,
    /// Corrupts one multiset count of instance 0 on the fast path.
    pub inject_fault: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 1000,
            n_max: 10,
            modulus_max: 24,
            numeric: true,
            inject_fault: false,
        }
    }
}

pub fn run_oracle_check(cfg: &OracleConfig) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let instances: Vec<MonomialMatrix> = (0..cfg.instances)
        .map(|_| random_solvable_monomial(&mut rng, cfg.n_max, cfg.modulus_max))
        .collect();
    let results: Vec<(bool, usize, Vec<Discrepancy>)> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, a)| check_instance(idx, a, cfg))
        .collect::<Result<_>>()?;
    let mut report = OracleReport {
        seed: cfg.seed,
        instances: cfg.instances,
        permutation_like: 0,
        checks: 0,
        discrepancies: vec![],
    };
    for (plike, checks, d) in results {
        report.permutation_like += usize::from(plike);
        report.checks += checks;
        report.discrepancies.extend(d);
    }
    Ok(report)
}

fn check_instance(
    idx: usize,
    a: &MonomialMatrix,
    cfg: &OracleConfig,
) -> Result<(bool, usize, Vec<Discrepancy>)> {
    let mut out = Vec::new();
    let mut note = |check: &str, detail: String| {
        out.push(Discrepancy {
            instance: idx,
            check: check.into(),
            detail,
        })
    };
    let mut spectrum = a.eigen_multiset()?;
    if cfg.inject_fault && idx == 0 {
        let e = *spectrum.counts.keys().next().expect("nonempty spectrum");
        spectrum.insert(e, 1);
    }
    let mut checks = 0;

    checks += 1;
    if spectrum.total() != a.n() {
        note(
            "spectrum_size",
            format!("{} eigenvalues for n = {}", spectrum.total(), a.n()),
        );
    }

    checks += 1;
    let fast = spectrum_decompose(&spectrum);
    let slow = partition_search(&spectrum);
    if fast.is_ok() != slow {
        note(
            "decompose",
            format!("greedy {:?}, search {slow}", fast.is_ok()),
        );
    }
    if let Ok(cert) = &fast {
        checks += 1;
        if cert.cycle_type.iter().sum::<usize>() != spectrum.total() {
            note("cycle_type", format!("{:?}", cert.cycle_type));
        }
    }

    if cfg.numeric {
        checks += 1;
        let modulus = choose_modulus(std::slice::from_ref(a));
        let lifted = a.with_modulus(modulus)?.eigen_multiset()?;
        let numeric = numeric_spectrum(a, modulus);
        let mut fast_lifted = lifted.clone();
        if cfg.inject_fault && idx == 0 {
            let e = *fast_lifted.counts.keys().next().expect("nonempty spectrum");
            fast_lifted.insert(e, 1);
        }
        if fast_lifted != numeric {
            note(
                "numeric_spectrum",
                format!(
                    "exact {:?}, numeric {:?}",
                    fast_lifted.counts, numeric.counts
                ),
            );
        }
    }

    checks += 2;
    let order = a.order();
    if naive_order(a) != order {
        note("order", format!("fast {order}, naive {}", naive_order(a)));
    }
    let k = (idx as u64 % (2 * order)) + 1;
    if a.pow(k as i64) != naive_pow(a, k) {
        note("power", format!("k = {k}"));
    }

    Ok((slow, checks, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_examples() {
        let s = SpectrumMultiset::from_exponents(2, [0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert!(!partition_search(&s));
        let s = SpectrumMultiset::from_exponents(2, [0, 0, 0, 0, 0, 1, 1, 1, 1]);
        assert!(partition_search(&s));
        let s = SpectrumMultiset::from_exponents(6, [0, 2, 4, 0, 3]);
        assert!(partition_search(&s));
    }

    #[test]
    fn numeric_matches_exact() {
        let a = MonomialMatrix::new(4, vec![1, 0, 2], vec![1, 1, 3]).unwrap();
        assert_eq!(numeric_spectrum(&a, 4), a.eigen_multiset().unwrap());
    }

    #[test]
    fn clean_run_and_fault() {
        let cfg = OracleConfig {
            instances: 100,
            ..OracleConfig::default()
        };
        let r = run_oracle_check(&cfg).unwrap();
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
        assert!(r.permutation_like > 0 && r.permutation_like < 100);
        let r = run_oracle_check(&OracleConfig {
            inject_fault: true,
            ..cfg
        })
        .unwrap();
        assert!(!r.discrepancies.is_empty());
        assert_eq!(
            r,
            run_oracle_check(&OracleConfig {
                inject_fault: true,
                ..cfg
            })
            .unwrap()
        );
    }
}
