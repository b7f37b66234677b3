//! The multiplication-by-r action on Z_{p^2}.
//!
//! Conjugation by the normalizing generator permutes the eigenlines of the
//! maximal cycle exactly as `j -> r j` permutes residues, so the orbit
//! structure here is the block structure of every matrix the builder makes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_pow};
use crate::error::{Error, Result};

/// Least `q >= 1` with `r^q = 1 (mod n)`.
pub fn ord_mod(r: u64, n: u64) -> Result<u64> {
    if n == 0 || gcd(r % n, n) != 1 {
        return Err(Error::NonUnit { r, n });
    }
    let mut x = r % n;
    let mut q = 1;
    while x != 1 % n {
        x = x * r % n;
        q += 1;
    }
    Ok(q)
}

/// A unit `r` of Z_{p^2} together with its multiplicative order `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionSpec {
    pub p: u64,
    pub r: u64,
    pub q: u64,
}

impl ActionSpec {
    pub fn new(p: u64, r: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let r = r % (p * p);
        let q = ord_mod(r, p * p)?;
        Ok(Self { p, r, q })
    }

    pub fn modulus(&self) -> u64 {
        self.p * self.p
    }

    /// 1 when p divides q, else 0.
    pub fn delta(&self) -> u32 {
        u32::from(self.q.is_multiple_of(self.p))
    }

    /// The prime-to-p part of q.
    pub fn s(&self) -> u64 {
        self.q / self.p.pow(self.delta())
    }

    /// (p - 1) / s.
    pub fn t(&self) -> u64 {
        (self.p - 1) / self.s()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitTag {
    Zero,
    Gamma0,
    Unit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub rep: u64,
    /// `rep, r rep, r^2 rep, ...`
    pub members: Vec<u64>,
    pub tag: OrbitTag,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Orbits of `<mu_r>` on Z_{p^2}: `{0}`, then the non-unit orbits, then the
/// unit orbits, each group ordered by representative (the smallest member).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    pub action: ActionSpec,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn with_tag(&self, tag: OrbitTag) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(move |o| o.tag == tag)
    }

    /// Orbits that are not unit orbits: `{0}` followed by the Gamma_0 orbits.
    pub fn non_unit(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.tag != OrbitTag::Unit)
    }

    pub fn orbit_of(&self, residue: u64) -> Option<&Orbit> {
        self.orbits.iter().find(|o| o.members.contains(&residue))
    }
}

pub fn mu_orbits(spec: &ActionSpec) -> OrbitDecomposition {
    let n = spec.modulus();
    let mut seen = vec![false; n as usize];
    let mut orbits = Vec::new();
    for rep in 0..n {
        if seen[rep as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut x = rep;
        while !seen[x as usize] {
            seen[x as usize] = true;
            members.push(x);
            x = x * spec.r % n;
        }
        let tag = if rep == 0 {
            OrbitTag::Zero
        } else if rep % spec.p == 0 {
            OrbitTag::Gamma0
        } else {
            OrbitTag::Unit
        };
        orbits.push(Orbit { rep, members, tag });
    }
    // stable: representatives are already ascending within each tag
    orbits.sort_by_key(|o| o.tag);
    OrbitDecomposition {
        action: *spec,
        orbits,
    }
}

/// True iff every orbit inside `subset` has length exactly q.
pub fn free_action_check(spec: &ActionSpec, subset: &BTreeSet<u64>) -> Result<bool> {
    let n = spec.modulus();
    if let Some(&residue) = subset
        .iter()
        .find(|&&x| !subset.contains(&(x * spec.r % n)))
    {
        return Err(Error::NotClosed { residue });
    }
    Ok(mu_orbits(spec)
        .orbits
        .iter()
        .filter(|o| subset.contains(&o.rep))
        .all(|o| o.len() as u64 == spec.q))
}

/// `1 + r + ... + r^(p-1) (mod p^2)` for `r = p + 1`; equals `p m` with m prime to p
/// for odd p.
pub fn conjugate_product_sum(p: u64) -> u64 {
    let n = p * p;
    (0..p).map(|i| mod_pow(p + 1, i, n)).sum::<u64>() % n
}

/// Exponent of the product of the p conjugates of `C^a` under `<B>`.
pub fn conjugate_product_exponent(spec: &ActionSpec, a: u64) -> Result<u64> {
    let n = spec.modulus();
    if spec.r != (spec.p + 1) % n {
        return Err(Error::Precondition(format!(
            "conjugate product map needs r = p + 1, got r = {}",
            spec.r
        )));
    }
    Ok((a % n) * conjugate_product_sum(spec.p) % n)
}

/// Deterministic choice of a unit of order q modulo p^2: `p + 1` when `q = p`,
/// otherwise the smallest unit of that order.
pub fn find_r(p: u64, q: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if q == 0 || !(p * (p - 1)).is_multiple_of(q) {
        return Err(Error::NoSuchOrder { p, q });
    }
    let n = p * p;
    if q == p {
        return Ok((p + 1) % n);
    }
    (1..n)
        .filter(|&r| gcd(r, n) == 1)
        .find(|&r| ord_mod(r, n) == Ok(q))
        .ok_or(Error::NoSuchOrder { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(d: &OrbitDecomposition) -> Vec<Vec<u64>> {
        d.orbits.iter().map(|o| o.members.clone()).collect()
    }

    #[test]
    fn orders() {
        assert_eq!(ord_mod(1, 9), Ok(1));
        assert_eq!(ord_mod(4, 9), Ok(3));
        assert_eq!(ord_mod(2, 9), Ok(6));
        assert_eq!(ord_mod(3, 9), Err(Error::NonUnit { r: 3, n: 9 }));
    }

    #[test]
    fn orbit_examples() {
        let d = mu_orbits(&ActionSpec::new(3, 4).unwrap());
        assert_eq!(
            members(&d),
            vec![vec![0], vec![3], vec![6], vec![1, 4, 7], vec![2, 8, 5]]
        );
        assert_eq!(d.orbits[1].tag, OrbitTag::Gamma0);
        assert_eq!(d.orbits[3].tag, OrbitTag::Unit);

        let d = mu_orbits(&ActionSpec::new(3, 8).unwrap());
        assert_eq!(
            members(&d),
            vec![vec![0], vec![3, 6], vec![1, 8], vec![2, 7], vec![4, 5]]
        );

        let d = mu_orbits(&ActionSpec::new(3, 2).unwrap());
        assert_eq!(
            members(&d),
            vec![vec![0], vec![3, 6], vec![1, 2, 4, 8, 7, 5]]
        );
    }

    #[test]
    fn derived_parameters() {
        let a = ActionSpec::new(3, 2).unwrap();
        assert_eq!((a.q, a.delta(), a.s(), a.t()), (6, 1, 2, 1));
        let a = ActionSpec::new(5, find_r(5, 2).unwrap()).unwrap();
        assert_eq!((a.q, a.delta(), a.s(), a.t()), (2, 0, 2, 2));
    }

    #[test]
    fn freeness() {
        let units = |p: u64| -> BTreeSet<u64> { (1..p * p).filter(|x| x % p != 0).collect() };
        let a8 = ActionSpec::new(3, 8).unwrap();
        assert_eq!(free_action_check(&a8, &units(3)), Ok(true));
        let a4 = ActionSpec::new(3, 4).unwrap();
        let g0: BTreeSet<u64> = [3, 6].into();
        assert_eq!(free_action_check(&a4, &g0), Ok(false));
        assert_eq!(free_action_check(&a4, &units(3)), Ok(true));
        let open: BTreeSet<u64> = [1].into();
        assert_eq!(
            free_action_check(&a4, &open),
            Err(Error::NotClosed { residue: 1 })
        );
    }

    #[test]
    fn conjugate_products() {
        let a = ActionSpec::new(3, 4).unwrap();
        assert_eq!(conjugate_product_exponent(&a, 0), Ok(0));
        assert_eq!(conjugate_product_exponent(&a, 1), Ok(21 % 9));
        assert_eq!(conjugate_product_exponent(&a, 2), Ok(6));
        let b = ActionSpec::new(3, 2).unwrap();
        assert!(conjugate_product_exponent(&b, 1).is_err());
    }

    #[test]
    fn choosing_r() {
        assert_eq!(find_r(3, 3), Ok(4));
        assert_eq!(find_r(3, 2), Ok(8));
        assert_eq!(find_r(3, 6), Ok(2));
        assert_eq!(find_r(3, 4), Err(Error::NoSuchOrder { p: 3, q: 4 }));
        assert_eq!(find_r(2, 2), Ok(3));
        assert_eq!(find_r(4, 2), Err(Error::NotPrime(4)));
    }
}
