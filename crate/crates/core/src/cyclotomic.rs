//! Exact arithmetic in the cyclotomic field Q(z_N), z_N = exp(2 pi i / N).
//!
//! Elements are stored as rational coefficient vectors reduced modulo the
//! cyclotomic polynomial Phi_N, so two elements are equal exactly when their
//! coefficient vectors are. Working modulo Phi_N rather than x^N - 1 keeps the
//! representation a field, which is what makes "this entry is zero" a sound
//! test when verifying matrix identities.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{divisors, residue};
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

type PolyCache = RwLock<HashMap<u64, Arc<[i64]>>>;
type PowerCache = RwLock<HashMap<u64, Arc<Vec<Vec<i64>>>>>;

fn phi_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn power_cache() -> &'static PowerCache {
    static CACHE: OnceLock<PowerCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
///
/// Computed by exact division of x^n - 1 by Phi_d for every proper divisor d,
/// memoized per `n`. Panics if `n == 0`.
pub fn cyclotomic_poly(n: u64) -> Arc<[i64]> {
    assert!(n > 0, "cyclotomic_poly: n must be positive");
    if let Some(hit) = phi_cache().read().unwrap().get(&n) {
        return hit.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        num = div_monic(&num, &cyclotomic_poly(d));
    }
    let poly: Arc<[i64]> = num.into();
    // Write-once: a concurrent writer may have won the race with an identical value.
    phi_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert(poly)
        .clone()
}

/// Exact quotient of `num` by the monic polynomial `den`; the remainder must vanish.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// Degree of Phi_N, i.e. Euler's totient of N.
pub fn field_degree(modulus: u64) -> usize {
    cyclotomic_poly(modulus).len() - 1
}

/// Integer coefficient vectors of x^e mod Phi_N for e in [0, N).
fn power_table(modulus: u64) -> Arc<Vec<Vec<i64>>> {
    if let Some(hit) = power_cache().read().unwrap().get(&modulus) {
        return hit.clone();
    }
    let phi = cyclotomic_poly(modulus);
    let deg = phi.len() - 1;
    let mut table = Vec::with_capacity(modulus as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..modulus {
        table.push(cur.clone());
        // multiply by x, then fold the x^deg term back using Phi_N.
        let top = cur[deg - 1];
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..deg {
                cur[i] -= top * phi[i];
            }
        }
    }
    let table = Arc::new(table);
    power_cache()
        .write()
        .unwrap()
        .entry(modulus)
        .or_insert(table)
        .clone()
}

/// A root of unity z_N^e, kept as its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootExp {
    modulus: u64,
    exp: u64,
}

impl RootExp {
    pub fn new(modulus: u64, exp: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            modulus,
            exp: residue(exp, modulus),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Result<Self> {
        check_moduli(self.modulus, other.modulus)?;
        Ok(Self {
            modulus: self.modulus,
            exp: (self.exp + other.exp) % self.modulus,
        })
    }

    pub fn inv(self) -> Self {
        Self {
            modulus: self.modulus,
            exp: (self.modulus - self.exp) % self.modulus,
        }
    }

    /// Multiplicative order of the root.
    pub fn order(&self) -> u64 {
        self.modulus / crate::arith::gcd(self.modulus, self.exp)
    }
}

fn check_moduli(left: u64, right: u64) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::ModulusMismatch { left, right })
    }
}

/// An element of Q(z_N) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElem {
    modulus: u64,
    coeffs: Vec<Rational>,
}

impl CycElem {
    pub fn zero(modulus: u64) -> Self {
        Self {
            modulus,
            coeffs: vec![Rational::zero(); field_degree(modulus)],
        }
    }

    pub fn one(modulus: u64) -> Self {
        Self::from_rational(modulus, Rational::one())
    }

    pub fn from_rational(modulus: u64, value: Rational) -> Self {
        let mut e = Self::zero(modulus);
        e.coeffs[0] = value;
        e
    }

    pub fn from_integer(modulus: u64, value: i64) -> Self {
        Self::from_rational(modulus, Rational::from_integer(BigInt::from(value)))
    }

    /// Canonical form of the root of unity z_N^e.
    pub fn from_root(root: RootExp) -> Self {
        let table = power_table(root.modulus);
        Self::from_int_coeffs(root.modulus, &table[root.exp as usize])
    }

    /// The element sum_e counts[e] * z_N^e for an exponent histogram of length N.
    pub fn from_root_counts(modulus: u64, counts: &[i64]) -> Result<Self> {
        if counts.len() as u64 != modulus {
            return Err(Error::Precondition(format!(
                "root histogram has length {} but modulus is {modulus}",
                counts.len()
            )));
        }
        let table = power_table(modulus);
        let mut acc = vec![0i64; field_degree(modulus)];
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &t) in acc.iter_mut().zip(&table[e]) {
                    *a += c * t;
                }
            }
        }
        Ok(Self::from_int_coeffs(modulus, &acc))
    }

    /// Reduces an arbitrary rational polynomial (constant term first) modulo Phi_N.
    pub fn from_poly(modulus: u64, poly: Vec<Rational>) -> Self {
        Self {
            modulus,
            coeffs: reduce(modulus, poly),
        }
    }

    fn from_int_coeffs(modulus: u64, coeffs: &[i64]) -> Self {
        Self {
            modulus,
            coeffs: coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coefficients on the power basis 1, z, ..., z^(deg-1).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        check_moduli(self.modulus, rhs.modulus)?;
        Ok(Self {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        check_moduli(self.modulus, rhs.modulus)?;
        Ok(Self {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        check_moduli(self.modulus, rhs.modulus)?;
        let deg = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.modulus, prod))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.modulus);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    ///
    /// Not used by the certificate pipeline (which only inverts roots of unity
    /// and rationals), but completes the field structure.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let phi: Vec<Rational> = cyclotomic_poly(self.modulus)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        // Invariant: old_s * self == old_r (mod phi).
        let mut old_r = trim(self.coeffs.clone());
        let mut r = phi;
        let mut old_s = vec![Rational::one()];
        let mut s: Vec<Rational> = vec![];
        while !r.is_empty() {
            let (q, rem) = poly_divrem(&old_r, &r);
            let next_s = poly_sub(&old_s, &poly_mul(&q, &s));
            old_r = std::mem::replace(&mut r, rem);
            old_s = std::mem::replace(&mut s, next_s);
        }
        // old_r is a nonzero constant since Phi_N is irreducible.
        let c = old_r[0].clone();
        let inv: Vec<Rational> = old_s.iter().map(|x| x / &c).collect();
        Some(Self::from_poly(self.modulus, inv))
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(num.to_vec());
    let den = trim(den.to_vec());
    let lead = den.last().expect("division by zero polynomial").clone();
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let c = rem.last().unwrap() / &lead;
        for (j, d) in den.iter().enumerate() {
            rem[shift + j] -= &c * d;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Reduction modulo the monic integer polynomial Phi_N.
fn reduce(modulus: u64, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_poly(modulus);
    let deg = phi.len() - 1;
    for d in (deg..poly.len()).rev() {
        if poly[d].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[d], Rational::zero());
        for (i, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                poly[d - deg + i] -= &c * Rational::from_integer(BigInt::from(f));
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// Canonical form of z_N^e.
pub fn cyc_from_root(root: RootExp) -> CycElem {
    CycElem::from_root(root)
}

/// sum_{j=0}^{n-1} z_n^{jk} in Q(z_N); equals n when n | k and 0 otherwise.
pub fn root_power_sum(n: u64, k: i64, modulus: u64) -> Result<CycElem> {
    if n == 0 || !modulus.is_multiple_of(n) {
        return Err(Error::NotDivisor { n, modulus });
    }
    let step = modulus / n;
    let mut counts = vec![0i64; modulus as usize];
    for j in 0..n as i64 {
        let e = residue(j * k, n) * step;
        counts[e as usize] += 1;
    }
    CycElem::from_root_counts(modulus, &counts)
}

impl Add for &CycElem {
    type Output = CycElem;
    fn add(self, rhs: &CycElem) -> CycElem {
        self.checked_add(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Sub for &CycElem {
    type Output = CycElem;
    fn sub(self, rhs: &CycElem) -> CycElem {
        self.checked_sub(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Mul for &CycElem {
    type Output = CycElem;
    fn mul(self, rhs: &CycElem) -> CycElem {
        self.checked_mul(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem[N={}](", self.modulus)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{mag}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// JSON number when the value fits in i64, otherwise a decimal string.
fn int_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

fn json_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<[serde_json::Value; 2]> = self
            .coeffs
            .iter()
            .map(|c| [int_json(c.numer()), int_json(c.denom())])
            .collect();
        serde_json::json!({ "N": self.modulus, "coeffs": coeffs }).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            modulus: u64,
            coeffs: Vec<[serde_json::Value; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.modulus == 0 {
            return Err(D::Error::custom("modulus must be positive"));
        }
        let mut poly = Vec::with_capacity(raw.coeffs.len());
        for [n, d] in &raw.coeffs {
            let (n, d) = json_int(n)
                .zip(json_int(d))
                .ok_or_else(|| D::Error::custom("coefficient entries must be integers"))?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            poly.push(Rational::new(n, d));
        }
        Ok(CycElem::from_poly(raw.modulus, poly))
    }
}
