//! Monomial matrices over roots of unity.
//!
//! A [`MonomialMatrix`] with modulus `N` acts on the standard basis by
//! `A e_j = z_N^{exps[j]} e_{sigma(j)}`. Exponents are indexed by column, so a
//! diagonal matrix's exponents are exactly its eigenvalue exponents.
//!
//! Every such matrix has finite order, so its minimal polynomial divides the
//! squarefree x^M - 1 and it is always diagonalizable. Similarity to a
//! permutation matrix is therefore decided by the spectrum alone
//! ([`spectrum_decompose`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm, residue};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMonomial", into = "RawMonomial")]
pub struct MonomialMatrix {
    modulus: u64,
    sigma: Vec<usize>,
    exps: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawMonomial {
    n: usize,
    #[serde(rename = "N")]
    modulus: u64,
    sigma: Vec<usize>,
    exps: Vec<u64>,
}

impl TryFrom<RawMonomial> for MonomialMatrix {
    type Error = Error;
    fn try_from(raw: RawMonomial) -> Result<Self> {
        if raw.sigma.len() != raw.n {
            return Err(Error::DimensionMismatch {
                left: raw.n,
                right: raw.sigma.len(),
            });
        }
        MonomialMatrix::new(raw.modulus, raw.sigma, raw.exps)
    }
}

impl From<MonomialMatrix> for RawMonomial {
    fn from(m: MonomialMatrix) -> Self {
        RawMonomial {
            n: m.sigma.len(),
            modulus: m.modulus,
            sigma: m.sigma,
            exps: m.exps,
        }
    }
}

/// Characteristic-polynomial factor x^length - z_N^corner of one sigma-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleFactor {
    pub length: usize,
    pub corner: u64,
}

/// Eigenvalue exponents with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumMultiset {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub counts: BTreeMap<u64, usize>,
}

impl SpectrumMultiset {
    pub fn new(modulus: u64) -> Self {
        Self {
            modulus,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_exponents(modulus: u64, exps: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::new(modulus);
        for e in exps {
            s.insert(e % modulus, 1);
        }
        s
    }

    pub fn insert(&mut self, exp: u64, count: usize) {
        if count > 0 {
            *self.counts.entry(exp).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, exp: u64) -> usize {
        self.counts.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn remove_one(&mut self, exp: u64) -> bool {
        match self.counts.get_mut(&exp) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(&exp);
                true
            }
            None => false,
        }
    }
}

/// Cycle type witnessing similarity to a permutation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermLikeCertificate {
    /// Cycle lengths, largest first.
    pub cycle_type: Vec<usize>,
}

/// The spectrum is not a disjoint union of full root-of-unity sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotPermutationLike {
    /// First exponent found missing while peeling.
    pub missing_exponent: u64,
}

impl MonomialMatrix {
    pub fn new(modulus: u64, sigma: Vec<usize>, exps: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let n = sigma.len();
        if exps.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: exps.len(),
            });
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidPermutation { n });
            }
        }
        if let Some(&exp) = exps.iter().find(|&&e| e >= modulus) {
            return Err(Error::ExponentOutOfRange { exp, modulus });
        }
        Ok(Self {
            modulus,
            sigma,
            exps,
        })
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        Self {
            modulus,
            sigma: (0..n).collect(),
            exps: vec![0; n],
        }
    }

    pub fn diagonal(modulus: u64, exps: Vec<u64>) -> Result<Self> {
        Self::new(modulus, (0..exps.len()).collect(), exps)
    }

    /// The 0/1 permutation matrix with `e_j -> e_{sigma(j)}`.
    pub fn permutation(modulus: u64, sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        Self::new(modulus, sigma, vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n();
        let mut sigma = Vec::with_capacity(n);
        let mut exps = Vec::with_capacity(n);
        for j in 0..n {
            let mid = other.sigma[j];
            sigma.push(self.sigma[mid]);
            exps.push((other.exps[j] + self.exps[mid]) % self.modulus);
        }
        Ok(Self {
            modulus: self.modulus,
            sigma,
            exps,
        })
    }

    pub fn inv(&self) -> Self {
        let n = self.n();
        let mut sigma = vec![0; n];
        let mut exps = vec![0; n];
        for j in 0..n {
            let t = self.sigma[j];
            sigma[t] = j;
            exps[t] = (self.modulus - self.exps[j]) % self.modulus;
        }
        Self {
            modulus: self.modulus,
            sigma,
            exps,
        }
    }

    /// `self^k`; negative `k` raises the inverse.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.n(), self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.sigma.iter().enumerate().all(|(j, &s)| j == s)
    }

    /// True iff this is a literal 0/1 permutation matrix.
    pub fn is_perm_matrix(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Sigma-cycles, each listed from its smallest index along `j -> sigma(j)`,
    /// ordered by that smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.sigma[j];
            }
            out.push(cycle);
        }
        out
    }

    /// One factor x^l - z^m per sigma-cycle, with m the sum of the cycle's exponents.
    pub fn char_factors(&self) -> Vec<CycleFactor> {
        self.cycles()
            .into_iter()
            .map(|c| CycleFactor {
                length: c.len(),
                corner: c.iter().map(|&j| self.exps[j]).sum::<u64>() % self.modulus,
            })
            .collect()
    }

    /// Least `k >= 1` with `self^k = I`.
    pub fn order(&self) -> u64 {
        self.char_factors().iter().fold(1, |acc, f| {
            let corner_order = self.modulus / gcd(self.modulus, f.corner);
            lcm(acc, f.length as u64 * corner_order)
        })
    }

    /// Eigenvalue exponents with multiplicity.
    ///
    /// A cycle factor x^l - z^m contributes the l solutions of `l e = m (mod N)`;
    /// fails with [`Error::UnsolvableSpectrum`] when those roots are not
    /// `N`-th roots of unity.
    pub fn eigen_multiset(&self) -> Result<SpectrumMultiset> {
        let mut spec = SpectrumMultiset::new(self.modulus);
        for f in self.char_factors() {
            let l = f.length as u64;
            if !self.modulus.is_multiple_of(l) || f.corner % l != 0 {
                return Err(Error::UnsolvableSpectrum {
                    length: f.length,
                    corner: f.corner,
                    modulus: self.modulus,
                });
            }
            let base = f.corner / l;
            let step = self.modulus / l;
            for j in 0..l {
                spec.insert(base + j * step, 1);
            }
        }
        Ok(spec)
    }

    /// Re-embeds the matrix with modulus `new_modulus`, a multiple of the current one.
    pub fn with_modulus(&self, new_modulus: u64) -> Result<Self> {
        if new_modulus == 0 || !new_modulus.is_multiple_of(self.modulus) {
            return Err(Error::NotDivisor {
                n: self.modulus,
                modulus: new_modulus,
            });
        }
        let f = new_modulus / self.modulus;
        Ok(Self {
            modulus: new_modulus,
            sigma: self.sigma.clone(),
            exps: self.exps.iter().map(|e| e * f).collect(),
        })
    }

    /// `D^-1 A D` for the diagonal `D e_j = z^{delta[j]} e_j`.
    pub fn conjugate_by_diagonal(&self, delta: &[u64]) -> Result<Self> {
        if delta.len() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: delta.len(),
            });
        }
        let m = self.modulus as i64;
        let exps = (0..self.n())
            .map(|j| {
                residue(
                    self.exps[j] as i64 + delta[j] as i64 - delta[self.sigma[j]] as i64,
                    m as u64,
                )
            })
            .collect();
        Ok(Self {
            modulus: self.modulus,
            sigma: self.sigma.clone(),
            exps,
        })
    }
}

/// A modulus under which every listed matrix has a solvable spectrum: the lcm
/// of the dimensions, current moduli and all matrix orders.
pub fn choose_modulus(matrices: &[MonomialMatrix]) -> u64 {
    matrices.iter().fold(1, |acc, m| {
        lcm(lcm(acc, m.n().max(1) as u64), lcm(m.modulus, m.order()))
    })
}

/// Greedy peeling of full root-of-unity sets.
///
/// Repeatedly takes an exponent of maximal multiplicative order d (smallest
/// exponent on ties) and removes all d-th roots of unity. The largest order in
/// a full d-th root set is d itself, so the choice is forced and the peeling
/// succeeds exactly when a decomposition exists.
pub fn spectrum_decompose(
    spectrum: &SpectrumMultiset,
) -> std::result::Result<PermLikeCertificate, NotPermutationLike> {
    let n = spectrum.modulus;
    let mut rest = spectrum.clone();
    let mut cycle_type = Vec::new();
    while let Some(pick) = rest.counts.keys().copied().max_by(|&a, &b| {
        let (oa, ob) = (n / gcd(n, a), n / gcd(n, b));
        oa.cmp(&ob).then(b.cmp(&a))
    }) {
        let d = n / gcd(n, pick);
        for k in 0..d {
            let e = k * (n / d);
            if !rest.remove_one(e) {
                return Err(NotPermutationLike {
                    missing_exponent: e,
                });
            }
        }
        cycle_type.push(d as usize);
    }
    cycle_type.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PermLikeCertificate { cycle_type })
}

/// Convenience: spectrum plus decomposition of a single matrix.
pub fn permutation_like(
    a: &MonomialMatrix,
) -> Result<std::result::Result<PermLikeCertificate, NotPermutationLike>> {
    Ok(spectrum_decompose(&a.eigen_multiset()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap(exps: Vec<u64>, modulus: u64) -> MonomialMatrix {
        MonomialMatrix::new(modulus, vec![1, 0], exps).unwrap()
    }

    fn c3() -> MonomialMatrix {
        MonomialMatrix::diagonal(9, (0..9).collect()).unwrap()
    }

    #[test]
    fn products_and_powers() {
        let s = swap(vec![0, 0], 2);
        assert!(s.mul(&s).unwrap().is_identity());
        let a = swap(vec![0, 1], 2);
        let a2 = a.mul(&a).unwrap();
        assert!(a2.is_diagonal());
        assert_eq!(a2.exps(), &[1, 1]);
        assert!(a.mul(&a.inv()).unwrap().is_identity());
        assert_eq!(a.pow(-1), a.inv());
        assert_eq!(a.pow(3), a.pow(-1));
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = MonomialMatrix::identity(2, 4);
        let b = MonomialMatrix::identity(3, 4);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        let c = MonomialMatrix::identity(2, 6);
        assert!(matches!(a.mul(&c), Err(Error::ModulusMismatch { .. })));
        assert!(matches!(
            MonomialMatrix::new(4, vec![0, 0], vec![0, 0]),
            Err(Error::InvalidPermutation { .. })
        ));
        assert!(matches!(
            MonomialMatrix::new(4, vec![0, 1], vec![0, 4]),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(MonomialMatrix::identity(9, 9).order(), 1);
        assert_eq!(c3().order(), 9);
        let a = swap(vec![0, 1], 2);
        assert_eq!(a.order(), 4);
        // repeated-multiplication oracle
        let mut x = a.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(&a).unwrap();
            k += 1;
        }
        assert_eq!(k, 4);
    }

    #[test]
    fn char_factor_examples() {
        let id = MonomialMatrix::identity(3, 9);
        assert_eq!(
            id.char_factors(),
            vec![
                CycleFactor {
                    length: 1,
                    corner: 0
                };
                3
            ]
        );
        let f = c3().char_factors();
        assert_eq!(f.len(), 9);
        assert!(f
            .iter()
            .enumerate()
            .all(|(j, c)| c.length == 1 && c.corner == j as u64));
    }

    #[test]
    fn spectra() {
        let s = c3().eigen_multiset().unwrap();
        assert_eq!(s.total(), 9);
        assert!((0..9).all(|e| s.count(e) == 1));

        let a = swap(vec![0, 1], 2);
        assert_eq!(
            a.eigen_multiset(),
            Err(Error::UnsolvableSpectrum {
                length: 2,
                corner: 1,
                modulus: 2
            })
        );
        let a4 = a.with_modulus(4).unwrap();
        assert_eq!(a4.exps(), &[0, 2]);
        let s4 = a4.eigen_multiset().unwrap();
        assert_eq!(
            s4.counts.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (3, 1)]
        );
        assert_eq!(choose_modulus(&[a]), 4);
    }

    #[test]
    fn decomposition_examples() {
        let c = spectrum_decompose(&c3().eigen_multiset().unwrap()).unwrap();
        assert_eq!(c.cycle_type, vec![9]);

        let mut bad = SpectrumMultiset::new(2);
        bad.insert(0, 4);
        bad.insert(1, 5);
        assert_eq!(
            spectrum_decompose(&bad),
            Err(NotPermutationLike {
                missing_exponent: 0
            })
        );

        let mut good = SpectrumMultiset::new(2);
        good.insert(0, 5);
        good.insert(1, 4);
        assert_eq!(
            spectrum_decompose(&good).unwrap().cycle_type,
            vec![2, 2, 2, 2, 1]
        );
    }

    #[test]
    fn perm_matrix_predicate() {
        assert!(MonomialMatrix::identity(4, 4).is_perm_matrix());
        assert!(!c3().is_perm_matrix());
    }

    #[test]
    fn diagonal_conjugation_preserves_corners() {
        let a = MonomialMatrix::new(12, vec![2, 0, 1, 3], vec![3, 5, 7, 2]).unwrap();
        let b = a.conjugate_by_diagonal(&[1, 9, 4, 11]).unwrap();
        assert_eq!(a.char_factors(), b.char_factors());
    }

    #[test]
    fn json_shape() {
        let a = swap(vec![0, 1], 2);
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"n": 2, "N": 2, "sigma": [1, 0], "exps": [0, 1]})
        );
        let bad = serde_json::json!({"n": 2, "N": 2, "sigma": [1, 1], "exps": [0, 1]});
        assert!(serde_json::from_value::<MonomialMatrix>(bad).is_err());
    }
}
