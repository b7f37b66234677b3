//! Permutation-basis synthesis for `<C, B>` and its exact verification.
//!
//! After a diagonal change of basis puts `B` in corner-normal form, condition
//! (SC) says every corner is trivial. Then in adapted coordinates the all-ones
//! vector `f` has `f, Cf, ..., C^{n-1} f` as a basis on which `C` shifts and
//! `B` permutes by `i -> r^-1 i`. That basis is the Vandermonde
//! `Q_{j,i} = z_n^{ij}`, whose inverse is `(1/n) z_n^{-ij}`.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{mod_inv, residue};
use crate::cyclotomic::{CycElem, Rational};
use crate::error::{Error, Result};
use crate::group_builder::{
    analyze_spec, build_b, build_c, case_tag, CaseTag, GroupReport, GroupSpec,
};
use crate::monomial::MonomialMatrix;

/// Diagonal conjugator `D` and `D^-1 B D` in corner-normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adaptation {
    pub delta: Vec<u64>,
    pub normalized: MonomialMatrix,
}

/// One sigma-cycle of an adapted matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    /// Smallest index of the cycle.
    pub rep: usize,
    pub length: usize,
    pub exponent: u64,
}

impl Adaptation {
    pub fn corners(&self) -> Vec<Corner> {
        let m = &self.normalized;
        m.cycles()
            .into_iter()
            .map(|c| Corner {
                rep: c[0],
                length: c.len(),
                exponent: m.exps()[*c.last().expect("cycles are nonempty")],
            })
            .collect()
    }
}

/// Walks each cycle from its smallest index, accumulating entry exponents into
/// `delta` so that only the closing entry of each cycle stays nontrivial.
pub fn adapt_basis(b: &MonomialMatrix) -> Adaptation {
    let modulus = b.modulus();
    let mut delta = vec![0u64; b.n()];
    for cycle in b.cycles() {
        for w in cycle.windows(2) {
            delta[w[1]] = (delta[w[0]] + b.exps()[w[0]]) % modulus;
        }
    }
    let normalized = b
        .conjugate_by_diagonal(&delta)
        .expect("delta has the right length");
    let adaptation = Adaptation { delta, normalized };
    let order = b.order();
    debug_assert!(adaptation
        .corners()
        .iter()
        .all(|c| (c.exponent * (order / c.length as u64)).is_multiple_of(modulus)));
    adaptation
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScCheck {
    pub holds: bool,
    /// Cycles whose corner is not 1.
    pub witnesses: Vec<Corner>,
}

pub fn check_sc(adapted: &Adaptation) -> ScCheck {
    let witnesses: Vec<Corner> = adapted
        .corners()
        .into_iter()
        .filter(|c| c.exponent != 0)
        .collect();
    ScCheck {
        holds: witnesses.is_empty(),
        witnesses,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityCertificate {
    pub n: usize,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub delta: Vec<u64>,
    #[serde(rename = "sigma_C")]
    pub sigma_c: Vec<usize>,
    #[serde(rename = "sigma_B")]
    pub sigma_b: Vec<usize>,
    pub verified: bool,
}

/// Builds the certificate for `C` and an adapted `B` satisfying (SC) whose
/// permutation is `j -> rj`. `verified` is left false.
pub fn synthesize_certificate(
    c_mat: &MonomialMatrix,
    adapted: &Adaptation,
    r: u64,
) -> Result<SimilarityCertificate> {
    let sc = check_sc(adapted);
    if !sc.holds {
        return Err(Error::ScViolated {
            reps: sc.witnesses.iter().map(|c| c.rep).collect(),
        });
    }
    let n = c_mat.n();
    let nn = n as u64;
    let expected: Vec<usize> = (0..nn).map(|j| (j * r % nn) as usize).collect();
    if adapted.normalized.sigma() != expected.as_slice() {
        return Err(Error::Precondition(format!(
            "B does not permute eigenlines by j -> {r} j"
        )));
    }
    let r_inv = mod_inv(r, nn).ok_or(Error::NonUnit { r, n: nn })?;
    Ok(SimilarityCertificate {
        n,
        modulus: c_mat.modulus(),
        delta: adapted.delta.clone(),
        sigma_c: (0..n).map(|i| (i + 1) % n).collect(),
        sigma_b: (0..nn).map(|i| (i * r_inv % nn) as usize).collect(),
        verified: false,
    })
}

/// First entry of `Q^-1 D^-1 A D Q` disagreeing with the claimed permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryMismatch {
    pub i: usize,
    pub j: usize,
    pub value: CycElem,
}

/// `Q^-1 A Q` exactly, for monomial `A` with dimension dividing the modulus.
///
/// Entry `(i, i')` is `(1/n) sum_j z^{exps[j] + (N/n)(j i' - sigma(j) i)}`,
/// evaluated through exponent histograms.
pub fn dft_conjugate(a: &MonomialMatrix) -> Result<Vec<Vec<CycElem>>> {
    let n = a.n();
    let modulus = a.modulus();
    if !modulus.is_multiple_of(n as u64) {
        return Err(Error::NotDivisor {
            n: n as u64,
            modulus,
        });
    }
    let unit = (modulus / n as u64) as i64;
    let inv_n = Rational::one() / Rational::from_integer((n as i64).into());
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(n);
            for ip in 0..n {
                row.push(conjugate_entry(a, i, ip, unit)?.scale(&inv_n));
            }
            Ok(row)
        })
        .collect()
}

fn conjugate_entry(a: &MonomialMatrix, i: usize, ip: usize, unit: i64) -> Result<CycElem> {
    let modulus = a.modulus();
    let mut counts = vec![0i64; modulus as usize];
    for j in 0..a.n() {
        let e = a.exps()[j] as i64 + unit * (j * ip) as i64 - unit * (a.sigma()[j] * i) as i64;
        counts[residue(e, modulus) as usize] += 1;
    }
    CycElem::from_root_counts(modulus, &counts)
}

/// Checks that `Q^-1 D^-1 A D Q` is exactly the 0/1 matrix of `claimed`
/// (column `i` has its 1 in row `claimed[i]`).
pub fn verify_image(
    a: &MonomialMatrix,
    delta: &[u64],
    claimed: &[usize],
) -> Result<std::result::Result<(), EntryMismatch>> {
    let adapted = a.conjugate_by_diagonal(delta)?;
    let n = a.n();
    if claimed.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: claimed.len(),
        });
    }
    let unit = (a.modulus() / n as u64) as i64;
    let scaled_one = CycElem::from_integer(a.modulus(), n as i64);
    let inv_n = Rational::one() / Rational::from_integer((n as i64).into());
    // Scan columns in order so the reported mismatch is deterministic.
    let first = (0..n)
        .into_par_iter()
        .map(|col| -> Result<Option<EntryMismatch>> {
            for row in 0..n {
                let v = conjugate_entry(&adapted, row, col, unit)?;
                let ok = if claimed[col] == row {
                    v == scaled_one
                } else {
                    v.is_zero()
                };
                if !ok {
                    return Ok(Some(EntryMismatch {
                        i: row,
                        j: col,
                        value: v.scale(&inv_n),
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(match first {
        None => Ok(()),
        Some(m) => Err(m),
    })
}

/// Generator-level verification; conjugation is a homomorphism, so this
/// covers the whole group.
pub fn verify_certificate(
    cert: &SimilarityCertificate,
    c_mat: &MonomialMatrix,
    b: &MonomialMatrix,
) -> Result<std::result::Result<(), EntryMismatch>> {
    if let Err(m) = verify_image(c_mat, &cert.delta, &cert.sigma_c)? {
        return Ok(Err(m));
    }
    verify_image(b, &cert.delta, &cert.sigma_b)
}

/// Verifies the image of every `C^k B^h`, `k < n`, `h < q`.
pub fn verify_full_group(
    cert: &SimilarityCertificate,
    c_mat: &MonomialMatrix,
    b: &MonomialMatrix,
    q: u64,
) -> Result<std::result::Result<(), EntryMismatch>> {
    let n = cert.n;
    let mut ck = MonomialMatrix::identity(n, c_mat.modulus());
    let mut pk: Vec<usize> = (0..n).collect();
    for _ in 0..n {
        let mut x = ck.clone();
        let mut px = pk.clone();
        for _ in 0..q {
            if let Err(m) = verify_image(&x, &cert.delta, &px)? {
                return Ok(Err(m));
            }
            x = x.mul(b)?;
            px = cert.sigma_b.iter().map(|&i| px[i]).collect();
        }
        ck = ck.mul(c_mat)?;
        pk = cert.sigma_c.iter().map(|&i| pk[i]).collect();
    }
    Ok(Ok(()))
}

/// Exponent matrix of the Vandermonde `Q_{j,i} = z_n^{ij}` (modulus n).
pub fn vandermonde(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|j| (0..n).map(|i| (i * j % n) as u64).collect())
        .collect()
}

/// Exponents of `n Q^-1`, i.e. `z_n^{-ij}`.
pub fn vandermonde_inverse_scaled(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| ((n - i * j % n) % n) as u64).collect())
        .collect()
}

/// Exact product of two root-of-unity matrices given by exponents modulo `modulus`.
pub fn root_matrix_product(
    modulus: u64,
    a: &[Vec<u64>],
    b: &[Vec<u64>],
) -> Result<Vec<Vec<CycElem>>> {
    let inner = b.len();
    a.par_iter()
        .map(|row| {
            if row.len() != inner {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: inner,
                });
            }
            (0..b.first().map_or(0, Vec::len))
                .map(|col| {
                    let mut counts = vec![0i64; modulus as usize];
                    for k in 0..inner {
                        counts[((row[k] + b[k][col]) % modulus) as usize] += 1;
                    }
                    CycElem::from_root_counts(modulus, &counts)
                })
                .collect()
        })
        .collect()
}

/// `Q Q^-1 = I` computed exactly in Q(z_n).
pub fn vandermonde_roundtrip_is_identity(n: usize) -> Result<bool> {
    let prod = root_matrix_product(n as u64, &vandermonde(n), &vandermonde_inverse_scaled(n))?;
    let scaled_one = CycElem::from_integer(n as u64, n as i64);
    Ok(prod.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| {
            if i == j {
                *v == scaled_one
            } else {
                v.is_zero()
            }
        })
    }))
}

/// (SC) checked separately on `B^p` and `B^s` for Case 3, with `ph + sk = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScSplit {
    pub h: i64,
    pub k: i64,
    pub p_part: bool,
    pub s_part: bool,
    /// `p_part && s_part`; agrees with (SC) for `B` itself.
    pub combined: bool,
}

/// Bezout coefficients `(h, k)` with `ph + sk = 1` and `k` of minimal absolute value.
pub fn bezout_min_k(p: u64, s: u64) -> Result<(i64, i64)> {
    let inv = mod_inv(s % p, p).ok_or(Error::NonUnit { r: s, n: p })? as i64;
    let p_i = p as i64;
    let k = if inv > p_i / 2 { inv - p_i } else { inv };
    let h = (1 - s as i64 * k) / p_i;
    debug_assert_eq!(p_i * h + s as i64 * k, 1);
    Ok((h, k))
}

pub fn case3_sc_split(spec: &GroupSpec, b: &MonomialMatrix) -> Result<ScSplit> {
    if case_tag(spec.p, spec.q)? != CaseTag::Three {
        return Err(Error::WrongCase {
            expected: 3,
            actual: case_tag(spec.p, spec.q)?.into(),
        });
    }
    let s = spec.q / spec.p;
    let (h, k) = bezout_min_k(spec.p, s)?;
    let p_part = check_sc(&adapt_basis(&b.pow(spec.p as i64))).holds;
    let s_part = check_sc(&adapt_basis(&b.pow(s as i64))).holds;
    Ok(ScSplit {
        h,
        k,
        p_part,
        s_part,
        combined: p_part && s_part,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub witness_k: u64,
    pub witness_h: u64,
    pub missing_exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Certified(SimilarityCertificate),
    Refuted(Refutation),
    /// Permutation-like but no generator `C^c B` satisfies (SC).
    Uncertified(ScCheck),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub report: GroupReport,
    pub outcome: Outcome,
    /// `c` such that the certificate was built for the generator `C^c B`.
    pub generator_shift: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sc_split: Option<ScSplit>,
}

impl Analysis {
    pub fn certificate(&self) -> Option<&SimilarityCertificate> {
        match &self.outcome {
            Outcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Scan, adapt, check (SC), synthesize and verify.
///
/// When `B` itself fails (SC) but the group is permutation-like, the generator
/// `C^c B` (same group, same permutation of eigenlines) is tried for
/// `c = 1, 2, ...`; the certificate then records `sigma_B(i) = r^-1 i - c`.
pub fn end_to_end(spec: &GroupSpec, full_group: bool) -> Result<Analysis> {
    let report = analyze_spec(spec)?;
    if let Some(v) = report.violations.first() {
        return Ok(Analysis {
            report: report.clone(),
            outcome: Outcome::Refuted(Refutation {
                witness_k: v.k,
                witness_h: v.h,
                missing_exponent: v.missing_exponent,
            }),
            generator_shift: None,
            sc_split: None,
        });
    }
    let c_mat = build_c(spec.p, spec.modulus)?;
    let b = build_b(spec)?;
    let n = c_mat.n();
    let sc_split = match case_tag(spec.p, spec.q) {
        Ok(CaseTag::Three) => Some(case3_sc_split(spec, &b)?),
        _ => None,
    };

    let mut first_check = None;
    let mut ck = MonomialMatrix::identity(n, spec.modulus);
    for shift in 0..n as u64 {
        let generator = ck.mul(&b)?;
        let adapted = adapt_basis(&generator);
        let sc = check_sc(&adapted);
        if let Some(split) = &sc_split {
            if shift == 0 && split.combined != sc.holds {
                return Err(Error::Precondition(
                    "(SC) on the B^p and B^s parts disagrees with (SC) on B".into(),
                ));
            }
        }
        if sc.holds {
            let mut cert = synthesize_certificate(&c_mat, &adapted, spec.r)?;
            cert.sigma_b = cert
                .sigma_b
                .iter()
                .map(|&i| (i + n - shift as usize) % n)
                .collect();
            let check = if full_group {
                verify_full_group(&cert, &c_mat, &b, report_order(&report))?
            } else {
                verify_certificate(&cert, &c_mat, &b)?
            };
            cert.verified = check.is_ok();
            return Ok(Analysis {
                report,
                outcome: Outcome::Certified(cert),
                generator_shift: Some(shift),
                sc_split,
            });
        }
        first_check.get_or_insert(sc);
        ck = ck.mul(&c_mat)?;
    }
    Ok(Analysis {
        report,
        outcome: Outcome::Uncertified(first_check.expect("n >= 1")),
        generator_shift: None,
        sc_split,
    })
}

fn report_order(report: &GroupReport) -> u64 {
    report.spec.q.max(1)
}
