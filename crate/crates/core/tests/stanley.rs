use lechkit_core::monom::monomials_of_degree;
use lechkit_core::stanley::{analyze, cone_contains, stanley_decompose, stanley_decompose_with, PivotRule};
use lechkit_core::{Monomial, MonomialIdeal, RationalSeries, StandardSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn set(text: &str, r: usize) -> StandardSet {
    StandardSet::complement_of(MonomialIdeal::parse(text, r).unwrap())
}

fn arb_set() -> impl Strategy<Value = StandardSet> {
    (1usize..=4).prop_flat_map(|r| {
        prop::collection::vec(prop::collection::vec(0u32..=4, r), 0..=5).prop_map(move |gens| {
            let gens = gens.into_iter().map(Monomial::new).filter(|g| !g.is_one());
            StandardSet::complement_of(MonomialIdeal::minimalize(gens, r).unwrap())
        })
    })
}

fn cone_count(u: &Monomial, vars: &[usize], d: u32) -> usize {
    if u.degree() > d {
        return 0;
    }
    // monomials of degree d - deg u in |vars| variables
    let k = vars.len() as u64;
    let n = (d - u.degree()) as u64;
    if k == 0 {
        return usize::from(n == 0);
    }
    let mut c: u64 = 1;
    for i in 0..(k - 1) {
        c = c * (n + i + 1) / (i + 1);
    }
    c as usize
}

#[test]
fn decomposition_examples() {
    let g = set("T1^2", 2);
    let a = analyze(&stanley_decompose(&g)).unwrap();
    assert_eq!((a.dimension, a.multiplicity), (1, 2));
    assert_eq!(a.single_series, RationalSeries::parse("(1+z)/(1-z)").unwrap());

    let dec = stanley_decompose(&StandardSet::everything(3));
    assert_eq!(dec.pairs(), &[(Monomial::one(3), vec![0, 1, 2])]);
    let a = analyze(&dec).unwrap();
    assert_eq!((a.dimension, a.multiplicity), (3, 1));

    let dec = stanley_decompose(&set("T1, T2", 2));
    assert_eq!(dec.pairs(), &[(Monomial::one(2), vec![])]);
    let a = analyze(&dec).unwrap();
    assert_eq!((a.dimension, a.multiplicity), (0, 1));
    assert_eq!(a.single_series, RationalSeries::one());
}

#[test]
fn empty_standard_set() {
    let dec = stanley_decompose(&set("1", 2));
    assert!(dec.is_empty());
    assert!(analyze(&dec).is_err());
}

#[test]
fn multigraded_terms_print() {
    let a = analyze(&stanley_decompose(&set("T1^2", 2))).unwrap();
    let s = a.multigraded_string();
    assert!(s.contains("z1/(1-z2)"), "{s}");
}

proptest! {
    #[test]
    fn cones_partition_the_set(g in arb_set()) {
        for rule in [PivotRule::Lowest, PivotRule::Highest] {
            let dec = stanley_decompose_with(&g, rule);
            for (u, _) in dec.pairs() {
                prop_assert!(g.contains(u));
            }
            for d in 0..=15 {
                // cone sizes add up to |Gamma_d|
                let total: usize = dec.pairs().iter().map(|(u, v)| cone_count(u, v, d)).sum();
                prop_assert_eq!(total, g.members_of_degree(d).len(), "degree {}", d);
                if d <= 8 {
                    for m in monomials_of_degree(g.num_vars(), d) {
                        let hits = dec.pairs().iter().filter(|(u, v)| cone_contains(u, v, &m)).count();
                        prop_assert_eq!(hits, usize::from(g.contains(&m)));
                    }
                }
            }
        }
    }

    #[test]
    fn analysis_agrees_with_the_series(g in arb_set()) {
        prop_assume!(!g.is_empty());
        let a = analyze(&stanley_decompose(&g)).unwrap();
        let b = analyze(&stanley_decompose_with(&g, PivotRule::Highest)).unwrap();
        prop_assert_eq!(a.dimension, b.dimension);
        prop_assert_eq!(a.multiplicity, b.multiplicity);
        prop_assert_eq!(a.single_series.reduce(), b.single_series.reduce());

        let dec = stanley_decompose(&g);
        let top = dec.pairs().iter().map(|(_, v)| v.len()).max().unwrap();
        prop_assert_eq!(a.dimension, top);
        prop_assert_eq!(a.multiplicity as usize, dec.pairs().iter().filter(|(_, v)| v.len() == top).count());

        let s = a.single_series.reduce();
        prop_assert_eq!(s.classify_poles().order_at_one, a.dimension as i64);
        prop_assert_eq!(s.residue_at_one(), BigRational::from_integer(BigInt::from(a.multiplicity)));
        let coeffs = a.single_series.expand(15);
        for (d, c) in coeffs.iter().enumerate() {
            let n = g.members_of_degree(d as u32).len();
            prop_assert_eq!(c, &BigRational::from_integer(BigInt::from(n)));
        }
    }
}
