use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use permlike::basis_synth::{adapt_basis, check_sc, end_to_end, Outcome};
use permlike::cyclotomic::{CycElem, Rational, RootExp};
use permlike::group_builder::{
    build_b, build_c, case1_char_b, case3_power_constraint, corner_domains, enumerate_elements,
    CaseTag, GroupSpec,
};
use permlike::monomial::{spectrum_decompose, MonomialMatrix};
use permlike::oracle::{partition_search, random_solvable_monomial};
use permlike::residue_orbits::{find_r, mu_orbits, ActionSpec};

fn monomial(max_n: usize, max_modulus: u64) -> impl Strategy<Value = MonomialMatrix> {
    (1..=max_n, 1..=max_modulus).prop_flat_map(|(n, m)| {
        (
            Just(m),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(0..m, n),
        )
            .prop_map(|(m, sigma, exps)| MonomialMatrix::new(m, sigma, exps).unwrap())
    })
}

fn cyc_elem(modulus: u64) -> impl Strategy<Value = CycElem> {
    proptest::collection::vec(-3i64..=3, modulus as usize)
        .prop_map(move |c| CycElem::from_root_counts(modulus, &c).unwrap())
}

/// A spec for p in {3, 5} with corners drawn from the classify domains.
fn domain_spec() -> impl Strategy<Value = GroupSpec> {
    let pqs: Vec<(u64, u64)> = vec![
        (3, 2),
        (3, 3),
        (3, 6),
        (5, 2),
        (5, 4),
        (5, 5),
        (5, 10),
        (5, 20),
    ];
    proptest::sample::select(pqs).prop_flat_map(|(p, q)| {
        let base = GroupSpec::trivial(p, q).unwrap();
        let domains = corner_domains(p, q).unwrap();
        let picks: Vec<_> = domains.iter().map(|d| 0..d.root_order).collect();
        (Just(base), Just(domains), picks).prop_map(|(mut spec, domains, ks)| {
            let corners: Vec<u64> = ks
                .iter()
                .zip(&domains)
                .map(|(k, d)| k * (spec.modulus / d.root_order))
                .collect();
            let e = spec.eps.len();
            spec.eps = corners[..e].to_vec();
            spec.omegas = corners[e..].to_vec();
            spec
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws(a in cyc_elem(12), b in cyc_elem(12), c in cyc_elem(12)) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn field_inverse(a in cyc_elem(9)) {
        if let Some(inv) = a.inverse() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn roots_multiply_by_adding_exponents(m in 1u64..40, e in -80i64..80, f in -80i64..80) {
        let x = RootExp::new(m, e).unwrap();
        let y = RootExp::new(m, f).unwrap();
        let prod = CycElem::from_root(x.mul(y).unwrap());
        prop_assert_eq!(prod, &CycElem::from_root(x) * &CycElem::from_root(y));
        prop_assert!((m % x.order()).is_zero());
    }

    #[test]
    fn scaling_is_rational_multiplication(a in cyc_elem(10), num in -5i64..5, den in 1i64..5) {
        let r = Rational::new(num.into(), den.into());
        let scaled = a.scale(&r);
        prop_assert_eq!(scaled, &a * &CycElem::from_rational(10, r));
    }

    #[test]
    fn monomial_group_laws(a in monomial(6, 12)) {
        let n = a.n();
        let b = a.pow(3);
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
        prop_assert_eq!(a.pow(2).mul(&b).unwrap(), a.pow(5));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&a).unwrap(), a.mul(&b.mul(&a).unwrap()).unwrap());
        prop_assert!(a.pow(a.order() as i64).is_identity());
        prop_assert_eq!(a.pow(-1), a.inv());
        prop_assert_eq!(MonomialMatrix::identity(n, a.modulus()).mul(&a).unwrap(), a);
    }

    #[test]
    fn order_is_minimal(a in monomial(5, 8)) {
        let ord = a.order();
        for d in permlike::arith::divisors(ord) {
            if d < ord {
                prop_assert!(!a.pow(d as i64).is_identity());
            }
        }
    }

    #[test]
    fn greedy_matches_partition_search(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_solvable_monomial(&mut rng, 10, 24);
        let s = a.eigen_multiset().unwrap();
        prop_assert_eq!(s.total(), a.n());
        prop_assert_eq!(spectrum_decompose(&s).is_ok(), partition_search(&s));
    }

    #[test]
    fn permutation_matrices_decompose_by_cycle_type(a in monomial(10, 1)) {
        let m = choose(&a);
        let lifted = a.with_modulus(m).unwrap();
        let cert = spectrum_decompose(&lifted.eigen_multiset().unwrap()).unwrap();
        let mut lengths: Vec<usize> = a.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(cert.cycle_type, lengths);
    }

    #[test]
    fn diagonal_conjugation_preserves_invariants(a in monomial(8, 12), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let delta: Vec<u64> = (0..a.n()).map(|_| rng.gen_range(0..a.modulus())).collect();
        let b = a.conjugate_by_diagonal(&delta).unwrap();
        let mut fa = a.char_factors();
        let mut fb = b.char_factors();
        fa.sort();
        fb.sort();
        prop_assert_eq!(fa, fb);
        prop_assert_eq!(a.order(), b.order());
    }

    #[test]
    fn readaptation_recovers_corners(spec in domain_spec(), seed in any::<u64>()) {
        use rand::Rng;
        let b = build_b(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let delta: Vec<u64> = (0..b.n()).map(|_| rng.gen_range(0..b.modulus())).collect();
        let scrambled = b.conjugate_by_diagonal(&delta).unwrap();
        let again = adapt_basis(&scrambled);
        prop_assert_eq!(again.corners(), adapt_basis(&b).corners());
    }

    #[test]
    fn b_normalizes_c(spec in domain_spec()) {
        let c = build_c(spec.p, spec.modulus).unwrap();
        let b = build_b(&spec).unwrap();
        prop_assert_eq!(b.inv().mul(&c.mul(&b).unwrap()).unwrap(), c.pow(spec.r as i64));
    }

    #[test]
    fn survivors_have_forced_parameters_and_certificates(spec in domain_spec()) {
        let an = end_to_end(&spec, false).unwrap();
        let plike = an.report.permutation_like;
        match &an.outcome {
            Outcome::Certified(cert) => {
                prop_assert!(plike);
                prop_assert!(cert.verified);
                let n = cert.n;
                prop_assert_eq!(&cert.sigma_c, &(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
                let r_inv = permlike::arith::mod_inv(spec.r, n as u64).unwrap() as usize;
                prop_assert_eq!(&cert.sigma_b, &(0..n).map(|i| i * r_inv % n).collect::<Vec<_>>());
                prop_assert!(check_sc(&adapt_basis(&build_b(&spec).unwrap())).holds);
            }
            Outcome::Refuted(_) => prop_assert!(!plike),
            Outcome::Uncertified(_) => prop_assert!(false, "permutation-like without certificate"),
        }
        if plike {
            match spec.case_tag().unwrap() {
                CaseTag::One => prop_assert_eq!(case1_char_b(&spec).unwrap().eps0, 0),
                CaseTag::Two => prop_assert!(spec.eps.iter().all(|&e| e == 0)),
                CaseTag::Three => {
                    prop_assert_eq!(case3_power_constraint(&spec).unwrap().a, Some(0));
                    prop_assert!(adapt_basis(&build_b(&spec).unwrap()).corners().iter().all(|c| c.exponent == 0));
                }
            }
        }
    }

    #[test]
    fn orbits_partition_residues(p in proptest::sample::select(vec![2u64, 3, 5, 7]), pick in any::<prop::sample::Index>()) {
        let unit_orders = permlike::arith::divisors(p * (p - 1));
        let q = *pick.get(&unit_orders);
        let spec = ActionSpec::new(p, find_r(p, q).unwrap()).unwrap();
        prop_assert_eq!(spec.q, q);
        let d = mu_orbits(&spec);
        let n = p * p;
        let mut seen = BTreeSet::new();
        for o in &d.orbits {
            prop_assert_eq!(o.rep, *o.members.iter().min().unwrap());
            prop_assert!(q % o.len() as u64 == 0);
            for (i, &x) in o.members.iter().enumerate() {
                prop_assert!(seen.insert(x));
                prop_assert_eq!(o.members[(i + 1) % o.len()], x * spec.r % n);
            }
            if o.rep % p != 0 {
                prop_assert_eq!(o.len() as u64, q);
            }
        }
        prop_assert_eq!(seen.len() as u64, n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn adaptation_leaves_only_corners(a in monomial(12, 24)) {
        let ad = adapt_basis(&a);
        let corners: BTreeSet<usize> = a.cycles().iter().map(|c| *c.last().unwrap()).collect();
        for j in 0..a.n() {
            if !corners.contains(&j) {
                prop_assert_eq!(ad.normalized.exps()[j], 0);
            }
        }
        for (cycle, corner) in a.cycles().iter().zip(ad.corners()) {
            let sum = cycle.iter().map(|&j| a.exps()[j]).sum::<u64>() % a.modulus();
            prop_assert_eq!(corner.exponent, sum);
            prop_assert_eq!(corner.rep, cycle[0]);
        }
        prop_assert_eq!(a.conjugate_by_diagonal(&ad.delta).unwrap(), ad.normalized);
    }
}

fn choose(a: &MonomialMatrix) -> u64 {
    permlike::monomial::choose_modulus(std::slice::from_ref(a))
}

#[test]
fn element_counts_have_no_duplicates() {
    for p in [3u64, 5] {
        for q in permlike::arith::divisors(p * (p - 1)) {
            let spec = GroupSpec::trivial(p, q).unwrap();
            let c = build_c(p, spec.modulus).unwrap();
            let b = build_b(&spec).unwrap();
            let els = enumerate_elements(&c, &b, q);
            assert_eq!(els.len() as u64, p * p * q);
            let distinct: std::collections::HashSet<_> = els.iter().map(|e| &e.matrix).collect();
            assert_eq!(distinct.len(), els.len(), "p={p} q={q}");
        }
    }
}

#[test]
fn abelian_sweep_small() {
    let sweep = permlike::group_builder::abelian_reduction_exhaustive(4).unwrap();
    assert_eq!(sweep.trials, 256);
    assert!(sweep.counterexamples.is_empty());
}
