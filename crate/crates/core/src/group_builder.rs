//! Candidate groups `<C, B>` of dimension p^2 and their permutation-likeness scans.
//!
//! Coordinates are the eigenbasis of the maximal cycle: `C e_j = lambda^j e_j`
//! with `lambda = z_N^{N/p^2}`. The generator `B` satisfies `B^-1 C B = C^r`,
//! so it maps the eigenline of `e_j` onto that of `e_{rj}`; up to diagonal
//! conjugation (which fixes `C`) it is determined by one corner exponent per
//! `<mu_r>`-orbit, and that is how [`GroupSpec`] describes it.

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::monomial::{permutation_like, spectrum_decompose, CycleFactor, MonomialMatrix};
use crate::residue_orbits::{find_r, mu_orbits, ActionSpec, OrbitDecomposition, OrbitTag};

/// Parameters of a candidate group.
///
/// `eps` holds one corner exponent per non-unit orbit (`{0}` first, then the
/// Gamma_0 orbits); `omegas` one per unit orbit, both in [`mu_orbits`] order.
/// Exponents are taken modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub eps: Vec<u64>,
    pub omegas: Vec<u64>,
}

impl GroupSpec {
    /// `p^3 s`, a common multiple of every element order in all three cases.
    pub fn default_modulus(p: u64, q: u64) -> u64 {
        let s = if q.is_multiple_of(p) { q / p } else { q };
        p * p * p * s
    }

    /// The spec with `r = find_r(p, q)`, default modulus and all corners trivial.
    pub fn trivial(p: u64, q: u64) -> Result<Self> {
        let r = find_r(p, q)?;
        Self::trivial_with_r(p, q, r, Self::default_modulus(p, q))
    }

    pub fn trivial_with_r(p: u64, q: u64, r: u64, modulus: u64) -> Result<Self> {
        let mut spec = Self {
            p,
            q,
            r,
            modulus,
            eps: vec![],
            omegas: vec![],
        };
        let orbits = spec.action()?;
        let d = mu_orbits(&orbits);
        spec.eps = vec![0; d.non_unit().count()];
        spec.omegas = vec![0; d.with_tag(OrbitTag::Unit).count()];
        spec.validate()?;
        Ok(spec)
    }

    pub fn action(&self) -> Result<ActionSpec> {
        let action = ActionSpec::new(self.p, self.r)?;
        if action.q != self.q {
            return Err(Error::InvalidSpec(format!(
                "r = {} has order {} modulo {}, not q = {}",
                self.r,
                action.q,
                self.p * self.p,
                self.q
            )));
        }
        Ok(action)
    }

    pub fn dimension(&self) -> usize {
        (self.p * self.p) as usize
    }

    /// Checks everything that can be checked without scanning the group.
    pub fn validate(&self) -> Result<OrbitDecomposition> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        let n = self.p * self.p;
        if self.modulus == 0 || !self.modulus.is_multiple_of(n) {
            return Err(Error::NotDivisor {
                n,
                modulus: self.modulus,
            });
        }
        let orbits = mu_orbits(&self.action()?);
        let non_unit = orbits.non_unit().count();
        let units = orbits.with_tag(OrbitTag::Unit).count();
        if self.eps.len() != non_unit || self.omegas.len() != units {
            return Err(Error::InvalidSpec(format!(
                "expected {non_unit} eps and {units} omega corners, got {} and {}",
                self.eps.len(),
                self.omegas.len()
            )));
        }
        if let Some(&exp) = self
            .eps
            .iter()
            .chain(&self.omegas)
            .find(|&&e| e >= self.modulus)
        {
            return Err(Error::ExponentOutOfRange {
                exp,
                modulus: self.modulus,
            });
        }
        Ok(orbits)
    }

    pub fn case_tag(&self) -> Result<CaseTag> {
        case_tag(self.p, self.q)
    }
}

/// The maximal cycle `diag(1, lambda, ..., lambda^{n-1})` of dimension `n`.
pub fn cycle_diagonal(n: usize, modulus: u64) -> Result<MonomialMatrix> {
    if n == 0 || !modulus.is_multiple_of(n as u64) {
        return Err(Error::NotDivisor {
            n: n as u64,
            modulus,
        });
    }
    let unit = modulus / n as u64;
    MonomialMatrix::diagonal(modulus, (0..n as u64).map(|j| j * unit).collect())
}

pub fn build_c(p: u64, modulus: u64) -> Result<MonomialMatrix> {
    cycle_diagonal((p * p) as usize, modulus)
}

/// `B` in corner-normal form: `e_j -> e_{rj}` with coefficient 1 except at the
/// entry closing each orbit, which carries the orbit's corner.
pub fn build_b(spec: &GroupSpec) -> Result<MonomialMatrix> {
    let orbits = spec.validate()?;
    let n = spec.dimension();
    let sigma: Vec<usize> = (0..n as u64)
        .map(|j| (j * spec.r % n as u64) as usize)
        .collect();
    let mut exps = vec![0u64; n];
    let corners = spec.eps.iter().chain(&spec.omegas);
    let ordered = orbits.non_unit().chain(orbits.with_tag(OrbitTag::Unit));
    for (orbit, &corner) in ordered.zip(corners) {
        let last = *orbit.members.last().expect("orbits are nonempty");
        exps[last as usize] = corner;
    }
    let b = MonomialMatrix::new(spec.modulus, sigma, exps)?;
    if !spec.modulus.is_multiple_of(b.order()) {
        return Err(Error::InvalidSpec(format!(
            "B has order {} which does not divide N = {}",
            b.order(),
            spec.modulus
        )));
    }
    Ok(b)
}

/// `Some(c)` when `x = c_mat^c`.
pub fn power_of(c_mat: &MonomialMatrix, x: &MonomialMatrix) -> Option<u64> {
    if !x.is_diagonal() || x.n() != c_mat.n() || x.modulus() != c_mat.modulus() {
        return None;
    }
    let n = c_mat.n() as u64;
    let mut power = MonomialMatrix::identity(c_mat.n(), c_mat.modulus());
    for c in 0..n {
        if &power == x {
            return Some(c);
        }
        power = power.mul(c_mat).ok()?;
    }
    None
}

/// Least `h >= 1` with `B^h` in `<C>`; the group is `{C^k B^h : k < n, h < outer_order}`.
pub fn outer_order(c_mat: &MonomialMatrix, b: &MonomialMatrix) -> u64 {
    let mut x = b.clone();
    let mut h = 1;
    while power_of(c_mat, &x).is_none() {
        x = x.mul(b).expect("same shape");
        h += 1;
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub k: u64,
    pub h: u64,
    pub matrix: MonomialMatrix,
}

/// All `C^k B^h` for `k < n`, `h < q`, in `(k, h)` lexicographic order.
pub fn enumerate_elements(c_mat: &MonomialMatrix, b: &MonomialMatrix, q: u64) -> Vec<Element> {
    let b_powers: Vec<MonomialMatrix> = (0..q).map(|h| b.pow(h as i64)).collect();
    let mut out = Vec::with_capacity(c_mat.n() * q as usize);
    let mut ck = MonomialMatrix::identity(c_mat.n(), c_mat.modulus());
    for k in 0..c_mat.n() as u64 {
        for (h, bh) in b_powers.iter().enumerate() {
            out.push(Element {
                k,
                h: h as u64,
                matrix: ck.mul(bh).expect("same shape"),
            });
        }
        ck = ck.mul(c_mat).expect("same shape");
    }
    out
}

/// An element that is not similar to a permutation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub k: u64,
    pub h: u64,
    pub missing_exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupScan {
    pub outer_order: u64,
    pub elements: usize,
    pub violations: Vec<Violation>,
}

/// Decides permutation-likeness of every element of `<C, B>`.
///
/// The scan covers `h < outer_order(C, B)`, which equals `q` exactly when
/// `B^q` lies in `<C>`; otherwise the group is larger than `p^2 q` and the
/// extra cosets are scanned too.
pub fn group_permutation_like(
    c_mat: &MonomialMatrix,
    b: &MonomialMatrix,
    q: u64,
) -> Result<GroupScan> {
    let outer = outer_order(c_mat, b).max(q);
    let mut violations = Vec::new();
    let b_powers: Vec<MonomialMatrix> = (0..outer).map(|h| b.pow(h as i64)).collect();
    let mut ck = MonomialMatrix::identity(c_mat.n(), c_mat.modulus());
    for k in 0..c_mat.n() as u64 {
        for (h, bh) in b_powers.iter().enumerate() {
            let x = ck.mul(bh)?;
            if let Err(w) = spectrum_decompose(&x.eigen_multiset()?) {
                violations.push(Violation {
                    k,
                    h: h as u64,
                    missing_exponent: w.missing_exponent,
                });
            }
        }
        ck = ck.mul(c_mat)?;
    }
    Ok(GroupScan {
        outer_order: outer_order(c_mat, b),
        elements: c_mat.n() * outer as usize,
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum CaseTag {
    /// q = s divides p - 1.
    One,
    /// q = p.
    Two,
    /// q = p s with s > 1.
    Three,
}

impl From<CaseTag> for u8 {
    fn from(c: CaseTag) -> u8 {
        match c {
            CaseTag::One => 1,
            CaseTag::Two => 2,
            CaseTag::Three => 3,
        }
    }
}

impl TryFrom<u8> for CaseTag {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(CaseTag::One),
            2 => Ok(CaseTag::Two),
            3 => Ok(CaseTag::Three),
            _ => Err(format!("case tag must be 1, 2 or 3, got {v}")),
        }
    }
}

pub fn case_tag(p: u64, q: u64) -> Result<CaseTag> {
    if q == 1 {
        return Err(Error::Abelian);
    }
    if q == 0 || !(p * (p - 1)).is_multiple_of(q) {
        return Err(Error::NoSuchOrder { p, q });
    }
    let delta = q.is_multiple_of(p);
    let s = if delta { q / p } else { q };
    Ok(match (delta, s) {
        (false, _) => CaseTag::One,
        (true, 1) => CaseTag::Two,
        (true, _) => CaseTag::Three,
    })
}

/// Outcome of scanning one spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub spec: GroupSpec,
    /// `B^q` lies in `<C>`, so `{C^k B^h : h < q}` is the whole group.
    pub is_group: bool,
    pub permutation_like: bool,
    pub violations: Vec<Violation>,
    /// `None` for abelian (q = 1) specs.
    pub case_tag: Option<CaseTag>,
}

pub fn analyze_spec(spec: &GroupSpec) -> Result<GroupReport> {
    let c_mat = build_c(spec.p, spec.modulus)?;
    let b = build_b(spec)?;
    let scan = group_permutation_like(&c_mat, &b, spec.q)?;
    Ok(GroupReport {
        spec: spec.clone(),
        is_group: scan.outer_order == spec.q,
        permutation_like: scan.violations.is_empty(),
        violations: scan.violations,
        case_tag: spec.case_tag().ok(),
    })
}

fn expect_case(spec: &GroupSpec, expected: CaseTag) -> Result<()> {
    let actual = spec.case_tag()?;
    if actual != expected {
        return Err(Error::WrongCase {
            expected: expected.into(),
            actual: actual.into(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case1Analysis {
    pub s: u64,
    pub t: u64,
    pub m: u64,
    pub eps0: u64,
    /// `(x - eps0)(x^s - 1)^(t + m)` as cycle factors.
    pub symbolic: Vec<CycleFactor>,
    /// The symbolic factors agree with `char_factors(B)` up to order.
    pub matches_matrix: bool,
    pub b_permutation_like: bool,
}

/// Symbolic characteristic polynomial of B when q = s divides p - 1.
pub fn case1_char_b(spec: &GroupSpec) -> Result<Case1Analysis> {
    expect_case(spec, CaseTag::One)?;
    let orbits = spec.validate()?;
    let action = orbits.action;
    let (s, t) = (action.s(), action.t());
    let m = orbits.with_tag(OrbitTag::Unit).count() as u64;
    let eps0 = spec.eps[0];
    let mut symbolic = vec![CycleFactor {
        length: 1,
        corner: eps0,
    }];
    symbolic.extend(std::iter::repeat_n(
        CycleFactor {
            length: s as usize,
            corner: 0,
        },
        (t + m) as usize,
    ));
    let b = build_b(spec)?;
    let mut actual = b.char_factors();
    let mut expected = symbolic.clone();
    actual.sort();
    expected.sort();
    Ok(Case1Analysis {
        s,
        t,
        m,
        eps0,
        symbolic,
        matches_matrix: actual == expected,
        b_permutation_like: permutation_like(&b)?.is_ok(),
    })
}

/// Shape of a characteristic polynomial restricted to the p indices fixed by B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockChar {
    /// x^p - 1: every p-th root of unity once.
    XpMinusOne,
    /// (x - 1)^p.
    XMinusOnePowP,
    Other,
}

/// Shape of the spectrum on the unit indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitPart {
    /// Phi_{p^2}: every primitive p^2-th root once.
    PrimitiveSquareRoots,
    /// (x^p - 1)^(p - 1).
    PthRootsRepeated,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case2Block {
    pub k: u64,
    pub h: u64,
    /// Diagonal exponents of `D_0^k B_0^h` at indices 0, p, ..., (p-1)p.
    pub block_exponents: Vec<u64>,
    pub block: BlockChar,
    pub unit_part: UnitPart,
}

/// Splits `C^k B^h` (q = p) into its fixed-point block and its unit part.
pub fn case2_block_analysis(spec: &GroupSpec, k: u64, h: u64) -> Result<Case2Block> {
    expect_case(spec, CaseTag::Two)?;
    let p = spec.p;
    let n_big = spec.modulus;
    let c_mat = build_c(p, n_big)?;
    let b = build_b(spec)?;
    let x = c_mat.pow(k as i64).mul(&b.pow(h as i64))?;

    let mut block_exponents = Vec::with_capacity(p as usize);
    for i in 0..p as usize {
        let j = i * p as usize;
        if x.sigma()[j] != j {
            return Err(Error::Precondition(format!("index {j} is not fixed by B")));
        }
        block_exponents.push(x.exps()[j]);
    }
    let mut sorted = block_exponents.clone();
    sorted.sort_unstable();
    let pth_roots: Vec<u64> = (0..p).map(|j| j * (n_big / p)).collect();
    let block = if sorted.iter().all(|&e| e == 0) {
        BlockChar::XMinusOnePowP
    } else if sorted == pth_roots {
        BlockChar::XpMinusOne
    } else {
        BlockChar::Other
    };

    let mut unit_spectrum = Vec::new();
    for cycle in x
        .cycles()
        .into_iter()
        .filter(|c| !(c[0] as u64).is_multiple_of(p))
    {
        let l = cycle.len() as u64;
        let corner = cycle.iter().map(|&j| x.exps()[j]).sum::<u64>() % n_big;
        if !n_big.is_multiple_of(l) || !corner.is_multiple_of(l) {
            return Err(Error::UnsolvableSpectrum {
                length: cycle.len(),
                corner,
                modulus: n_big,
            });
        }
        unit_spectrum.extend((0..l).map(|i| corner / l + i * (n_big / l)));
    }
    unit_spectrum.sort_unstable();
    let lam = n_big / (p * p);
    let primitive: Vec<u64> = (0..p * p).filter(|e| e % p != 0).map(|e| e * lam).collect();
    let mut repeated: Vec<u64> = pth_roots
        .iter()
        .flat_map(|&e| std::iter::repeat_n(e, (p - 1) as usize))
        .collect();
    repeated.sort_unstable();
    let unit_part = if unit_spectrum == primitive {
        UnitPart::PrimitiveSquareRoots
    } else if unit_spectrum == repeated {
        UnitPart::PthRootsRepeated
    } else {
        UnitPart::Other
    };

    Ok(Case2Block {
        k,
        h,
        block_exponents,
        block,
        unit_part,
    })
}

/// Whether the omega corners, each repeated q times, coincide as a multiset
/// with the diagonal of `C^{ap}` on the units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coincidence {
    pub a: u64,
    pub coincides: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case3Analysis {
    /// `B^{ps}` is diagonal; always true since sigma_B has order q = ps.
    pub b_power_diagonal: bool,
    /// `Some(a)` with `B^{ps} = C^{ap}`, `0 <= a < p`; `None` when `B^{ps}` is not of that form.
    pub a: Option<u64>,
    /// One entry per `a` in `1..p`.
    pub coincidence: Vec<Coincidence>,
}

/// Power constraint `B^{ps} = C^{ap}` for q = ps with s > 1.
pub fn case3_power_constraint(spec: &GroupSpec) -> Result<Case3Analysis> {
    expect_case(spec, CaseTag::Three)?;
    let p = spec.p;
    let n_big = spec.modulus;
    let c_mat = build_c(p, n_big)?;
    let b = build_b(spec)?;
    let bq = b.pow(spec.q as i64);
    let b_power_diagonal = bq.is_diagonal();
    let a = (0..p).find(|&a| c_mat.pow((a * p) as i64) == bq);

    let lam = n_big / (p * p);
    let mut omegas: Vec<u64> = spec
        .omegas
        .iter()
        .flat_map(|&w| std::iter::repeat_n(w, spec.q as usize))
        .collect();
    omegas.sort_unstable();
    let coincidence = (1..p)
        .map(|a| {
            let mut target: Vec<u64> = (1..p * p)
                .filter(|u| u % p != 0)
                .map(|u| (u * a * p % (p * p)) * lam)
                .collect();
            target.sort_unstable();
            Coincidence {
                a,
                coincides: target == omegas,
            }
        })
        .collect();
    Ok(Case3Analysis {
        b_power_diagonal,
        a,
        coincidence,
    })
}

/// For a diagonal `trial_b` commuting with the n-cycle `C`: returns `false`
/// only when every element of `<C, trial_b>` is permutation-like and yet
/// `trial_b` is not a power of `C`.
pub fn abelian_reduction_check(n: usize, modulus: u64, trial_b: &MonomialMatrix) -> Result<bool> {
    if !trial_b.is_diagonal() || trial_b.n() != n || trial_b.modulus() != modulus {
        return Err(Error::Precondition(
            "trial B must be an n x n diagonal matrix with the given modulus".into(),
        ));
    }
    let c_mat = cycle_diagonal(n, modulus)?;
    if power_of(&c_mat, trial_b).is_some() {
        return Ok(true);
    }
    let outer = outer_order(&c_mat, trial_b);
    let mut bh = MonomialMatrix::identity(n, modulus);
    for _ in 0..outer {
        let mut x = bh.clone();
        for _ in 0..n {
            if permutation_like(&x)?.is_err() {
                return Ok(true);
            }
            x = x.mul(&c_mat)?;
        }
        bh = bh.mul(trial_b)?;
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianSweep {
    pub n: usize,
    #[serde(rename = "N")]
    pub modulus: u64,
    /// All n^n diagonal matrices with exponents in (N/n) Z.
    pub trials: u64,
    /// Trials that are themselves permutation-like; the rest satisfy the
    /// implication vacuously and are not scanned.
    pub scanned: u64,
    /// Scanned trials violating the implication.
    pub counterexamples: Vec<Vec<u64>>,
}

/// Exhaustive abelian reduction check over every diagonal trial with `N = n`.
pub fn abelian_reduction_exhaustive(n: usize) -> Result<AbelianSweep> {
    use rayon::prelude::*;

    let modulus = n as u64;
    let candidates = permutation_like_diagonals(n);
    let scanned = candidates.len() as u64;
    let counterexamples: Vec<Vec<u64>> = candidates
        .into_par_iter()
        .filter_map(|exps| {
            let trial = MonomialMatrix::diagonal(modulus, exps.clone()).expect("valid exponents");
            match abelian_reduction_check(n, modulus, &trial) {
                Ok(true) => None,
                _ => Some(exps),
            }
        })
        .collect();
    Ok(AbelianSweep {
        n,
        modulus,
        trials: (n as u64).pow(n as u32),
        scanned,
        counterexamples,
    })
}

/// Every exponent vector in Z_n^n whose multiset is a union of full d-th root
/// sets (d | n), in lexicographic order.
fn permutation_like_diagonals(n: usize) -> Vec<Vec<u64>> {
    let divisors = crate::arith::divisors(n as u64);
    let mut multisets = Vec::new();
    fn split(
        divisors: &[u64],
        remaining: u64,
        n: u64,
        counts: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if divisors.is_empty() {
            if remaining == 0 {
                let mut hist = vec![0usize; n as usize];
                for (d, c) in crate::arith::divisors(n).iter().zip(counts.iter()) {
                    for k in 0..*d {
                        hist[(k * (n / d)) as usize] += c;
                    }
                }
                out.push(hist);
            }
            return;
        }
        let d = divisors[0];
        for c in 0..=(remaining / d) as usize {
            counts.push(c);
            split(&divisors[1..], remaining - c as u64 * d, n, counts, out);
            counts.pop();
        }
    }
    split(
        &divisors,
        n as u64,
        n as u64,
        &mut Vec::new(),
        &mut multisets,
    );

    let mut out = Vec::new();
    for mut hist in multisets {
        let mut current = Vec::with_capacity(n);
        arrangements(&mut hist, n, &mut current, &mut out);
    }
    out.sort();
    out
}

fn arrangements(hist: &mut [usize], n: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for e in 0..hist.len() {
        if hist[e] > 0 {
            hist[e] -= 1;
            current.push(e as u64);
            arrangements(hist, n, current, out);
            current.pop();
            hist[e] += 1;
        }
    }
}

/// Admissible corner orders for one slot in the classification scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerDomain {
    pub slot: String,
    /// Corners range over the `root_order`-th roots of unity.
    pub root_order: u64,
}

/// Corner domains per case, slots in spec order (eps then omegas).
///
/// Case 1: only the `{0}` corner varies, over s-th roots. Case 2: the p fixed
/// points vary over p-th roots. Case 3: `{0}` over q-th roots, every other
/// corner over p-th roots.
pub fn corner_domains(p: u64, q: u64) -> Result<Vec<CornerDomain>> {
    let case = case_tag(p, q)?;
    let action = ActionSpec::new(p, find_r(p, q)?)?;
    let orbits = mu_orbits(&action);
    let mut out = Vec::new();
    for (i, _) in orbits.non_unit().enumerate() {
        let root_order = match (case, i) {
            (CaseTag::One, 0) => action.s(),
            (CaseTag::One, _) => 1,
            (CaseTag::Two, _) => p,
            (CaseTag::Three, 0) => q,
            (CaseTag::Three, _) => p,
        };
        out.push(CornerDomain {
            slot: format!("eps[{i}]"),
            root_order,
        });
    }
    for (i, _) in orbits.with_tag(OrbitTag::Unit).enumerate() {
        let root_order = match case {
            CaseTag::One | CaseTag::Two => 1,
            CaseTag::Three => p,
        };
        out.push(CornerDomain {
            slot: format!("omegas[{i}]"),
            root_order,
        });
    }
    Ok(out)
}

/// Every corner assignment over [`corner_domains`], first slot most significant.
pub fn corner_assignments(p: u64, q: u64) -> Result<Vec<GroupSpec>> {
    let domains = corner_domains(p, q)?;
    let base = GroupSpec::trivial(p, q)?;
    let n_eps = base.eps.len();
    let total: u64 = domains.iter().map(|d| d.root_order).product();
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut corners = vec![0u64; domains.len()];
        for (slot, d) in domains.iter().enumerate().rev() {
            corners[slot] = (idx % d.root_order) * (base.modulus / d.root_order);
            idx /= d.root_order;
        }
        let mut spec = base.clone();
        spec.omegas = corners.split_off(n_eps);
        spec.eps = corners;
        out.push(spec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, q: u64) -> GroupSpec {
        GroupSpec::trivial(p, q).unwrap()
    }

    #[test]
    fn c_examples() {
        let c = build_c(3, 9).unwrap();
        assert_eq!(c.exps(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(c.order(), 9);
        let c18 = build_c(3, 18).unwrap();
        assert_eq!(c18.exps(), &[0, 2, 4, 6, 8, 10, 12, 14, 16]);
        assert!(build_c(3, 12).is_err());
    }

    #[test]
    fn b_examples() {
        let mut s = spec(3, 3);
        s.modulus = 9;
        let b = build_b(&s).unwrap();
        assert!(b.is_perm_matrix());
        assert_eq!(b.sigma(), &[0, 4, 8, 3, 7, 2, 6, 1, 5]);
        assert_eq!(b.order(), 3);

        let mut s = spec(3, 2);
        s.eps[0] = s.modulus / 2;
        let b = build_b(&s).unwrap();
        let f = b.char_factors();
        assert!(f.contains(&CycleFactor {
            length: 1,
            corner: s.modulus / 2
        }));
        assert_eq!(
            f.iter().filter(|c| c.length == 2 && c.corner == 0).count(),
            4
        );
    }

    #[test]
    fn b_normalizes_c() {
        for (p, q) in [(3, 2), (3, 3), (3, 6), (5, 4), (5, 10)] {
            let s = spec(p, q);
            let c = build_c(p, s.modulus).unwrap();
            let b = build_b(&s).unwrap();
            let conj = b.inv().mul(&c.mul(&b).unwrap()).unwrap();
            assert_eq!(conj, c.pow(s.r as i64));
        }
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(3, 3);
        s.eps.push(0);
        assert!(matches!(build_b(&s), Err(Error::InvalidSpec(_))));
        let mut s = spec(3, 3);
        s.r = 2;
        assert!(matches!(build_b(&s), Err(Error::InvalidSpec(_))));
        let mut s = spec(3, 3);
        s.omegas[0] = s.modulus;
        assert!(matches!(build_b(&s), Err(Error::ExponentOutOfRange { .. })));
        let mut s = spec(3, 3);
        s.p = 4;
        assert_eq!(build_b(&s), Err(Error::NotPrime(4)));
    }

    #[test]
    fn enumeration() {
        let s = spec(3, 3);
        let c = build_c(3, s.modulus).unwrap();
        let b = build_b(&s).unwrap();
        let els = enumerate_elements(&c, &b, 3);
        assert_eq!(els.len(), 27);
        assert!(els[0].matrix.is_identity());
        // (k, h) = (1, 1)
        let e11 = &els[3 + 1].matrix;
        let f = e11.char_factors();
        // fixed points 0, 3, 6 keep their C-exponents; two 3-cycles on the units
        let lam = s.modulus / 9;
        let singles: Vec<_> = f
            .iter()
            .filter(|x| x.length == 1)
            .map(|x| x.corner)
            .collect();
        assert_eq!(singles, vec![0, 3 * lam, 6 * lam]);
        assert_eq!(f.iter().filter(|x| x.length == 3).count(), 2);
    }

    #[test]
    fn scans() {
        let r = analyze_spec(&spec(3, 3)).unwrap();
        assert!(r.is_group && r.permutation_like);

        let mut s = spec(3, 3);
        s.eps = vec![0, s.modulus / 3, 2 * s.modulus / 3];
        let r = analyze_spec(&s).unwrap();
        assert!(r.is_group);
        assert!(!r.permutation_like);

        let mut s = spec(3, 2);
        s.eps[0] = s.modulus / 2;
        let r = analyze_spec(&s).unwrap();
        assert!(!r.permutation_like);
        assert_eq!((r.violations[0].k, r.violations[0].h), (0, 1));
    }

    #[test]
    fn case_tags() {
        assert_eq!(case_tag(3, 2), Ok(CaseTag::One));
        assert_eq!(case_tag(3, 3), Ok(CaseTag::Two));
        assert_eq!(case_tag(3, 6), Ok(CaseTag::Three));
        assert_eq!(case_tag(3, 1), Err(Error::Abelian));
        assert_eq!(case_tag(2, 2), Ok(CaseTag::Two));
    }

    #[test]
    fn case1_counts() {
        for (p, s, t, m) in [(3, 2, 1, 3), (5, 4, 1, 5), (5, 2, 2, 10)] {
            let a = case1_char_b(&spec(p, s)).unwrap();
            assert_eq!((a.s, a.t, a.m), (s, t, m));
            assert!(a.matches_matrix);
            assert!(a.b_permutation_like);
        }
        assert_eq!(
            case1_char_b(&spec(3, 3)),
            Err(Error::WrongCase {
                expected: 1,
                actual: 2
            })
        );
    }

    #[test]
    fn case2_blocks() {
        let s = spec(3, 3);
        for h in 0..3 {
            let b = case2_block_analysis(&s, 3, h).unwrap();
            assert_eq!(b.block, BlockChar::XMinusOnePowP);
            let b = case2_block_analysis(&s, 1, h).unwrap();
            assert_eq!(b.block, BlockChar::XpMinusOne);
        }
        let mut s = spec(3, 3);
        s.eps = vec![0, s.modulus / 3, 2 * s.modulus / 3];
        let b = case2_block_analysis(&s, 1, 2).unwrap();
        assert_eq!(b.block, BlockChar::XMinusOnePowP);
    }

    #[test]
    fn case3_constraint() {
        let a = case3_power_constraint(&spec(3, 6)).unwrap();
        assert!(a.b_power_diagonal);
        assert_eq!(a.a, Some(0));
        assert_eq!(a.coincidence.len(), 2);
        assert!(a.coincidence.iter().all(|c| !c.coincides));

        let mut s = spec(3, 6);
        s.omegas = vec![s.modulus / 3];
        let a = case3_power_constraint(&s).unwrap();
        assert_eq!(a.a, None);
        assert!(a.coincidence.iter().all(|c| !c.coincides));
    }

    #[test]
    fn abelian_examples() {
        let c = cycle_diagonal(9, 9).unwrap();
        assert_eq!(abelian_reduction_check(9, 9, &c.pow(2)), Ok(true));
        let id = MonomialMatrix::identity(4, 4);
        assert_eq!(abelian_reduction_check(4, 4, &id), Ok(true));
        let d = MonomialMatrix::diagonal(4, vec![0, 2, 0, 2]).unwrap();
        assert_eq!(abelian_reduction_check(4, 4, &d), Ok(true));
        // (0, 2, 0, 2) is C^2 itself, so the implication holds non-vacuously
        let c4 = cycle_diagonal(4, 4).unwrap();
        assert_eq!(power_of(&c4, &d), Some(2));
        let e = MonomialMatrix::diagonal(4, vec![0, 0, 0, 1]).unwrap();
        assert_eq!(power_of(&c4, &e), None);
        assert!(permutation_like(&e).unwrap().is_err());
        assert_eq!(abelian_reduction_check(4, 4, &e), Ok(true));
    }

    #[test]
    fn assignment_counts() {
        assert_eq!(corner_assignments(3, 3).unwrap().len(), 27);
        assert_eq!(corner_assignments(3, 2).unwrap().len(), 2);
        assert_eq!(corner_assignments(3, 6).unwrap().len(), 6 * 3 * 3);
        let first = &corner_assignments(3, 3).unwrap()[0];
        assert_eq!(first, &spec(3, 3));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(spec(3, 3)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"p": 3, "q": 3, "r": 4, "N": 27, "eps": [0, 0, 0], "omegas": [0, 0]})
        );
    }
}
