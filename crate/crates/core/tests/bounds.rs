use lechkit_core::bounds::{
    a2_census, c_series, hilbert_samuel_multiplicity, quotient_basis, samuel_bound, samuel_estimate,
    sandwich_bounds, sorted_orders, stabilize, theorem45_report, theorem47_check, QValue, Theorem45Input,
};
use lechkit_core::field::Rationals;
use lechkit_core::galg::{GradedAlgebra, HomogeneousIdeal};
use lechkit_core::stanley::{analyze, stanley_decompose};
use lechkit_core::{Error, MonomialIdeal, StandardSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn alg(names: &[&str], w: &[u32], rels: &[&str]) -> GradedAlgebra<Rationals> {
    GradedAlgebra::from_strings(Rationals, names, w, rels, 200).unwrap()
}

fn gamma(text: &str, r: usize) -> StandardSet {
    StandardSet::complement_of(MonomialIdeal::parse(text, r).unwrap())
}

struct Case {
    alg: GradedAlgebra<Rationals>,
    gens: Vec<&'static str>,
    gamma: StandardSet,
}

impl Case {
    fn ideal(&self) -> HomogeneousIdeal<'_, Rationals> {
        let ps: Vec<_> = self.gens.iter().map(|g| self.alg.parse(g).unwrap()).collect();
        HomogeneousIdeal::new(&self.alg, &ps).unwrap()
    }
}

fn ex323() -> Case {
    Case {
        alg: alg(&["t", "x", "y"], &[2, 2, 1], &["t^2", "x^2 - t*y^2"]),
        gens: vec!["x", "y"],
        gamma: gamma("T1^2", 2),
    }
}

fn rem48() -> Case {
    Case {
        alg: alg(&["x", "y"], &[1, 1], &["x*y^2"]),
        gens: vec!["x", "y^2"],
        gamma: gamma("T1*T2", 2),
    }
}

fn ex327() -> Case {
    Case {
        alg: alg(&["t", "x", "y"], &[6, 1, 1], &["t^2", "t*y^2 - x^8"]),
        gens: vec!["x", "y"],
        gamma: gamma("T1^8", 2),
    }
}

#[test]
fn hilbert_samuel_examples() {
    let hs = hilbert_samuel_multiplicity(&alg(&["x", "y"], &[1, 1], &["x^2"]), 30).unwrap();
    assert!(hs.stabilized);
    assert_eq!((hs.dimension, hs.multiplicity), (Some(1), Some(2)));
    assert_eq!(&hs.colengths[..5], &[0, 1, 3, 5, 7]);

    let hs = hilbert_samuel_multiplicity(&alg(&["u", "v"], &[1, 1], &[]), 30).unwrap();
    assert_eq!((hs.dimension, hs.multiplicity), (Some(2), Some(1)));

    let hs = hilbert_samuel_multiplicity(&ex323().alg, 30).unwrap();
    assert_eq!((hs.dimension, hs.multiplicity), (Some(1), Some(4)));
}

#[test]
fn late_stabilization_is_reported_not_guessed() {
    // the first difference reaches 16 at t = 16, past the trailing half of 30
    let hs = hilbert_samuel_multiplicity(&ex327().alg, 30).unwrap();
    assert!(!hs.stabilized);
    assert_eq!(hs.multiplicity, None);
    let wider = stabilize(hs.colengths.clone(), 30);
    assert_eq!(wider, hs);
    let diffs: Vec<usize> = hs.colengths.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(diffs[16..].iter().all(|&d| d == 16));
    assert_eq!(diffs[14], 15);
}

#[test]
fn quotient_basis_and_c_series() {
    let c = ex323();
    let i = c.ideal();
    let basis = quotient_basis(&i).unwrap();
    assert_eq!(basis.len(), 2);
    let dec = stanley_decompose(&c.gamma);
    let cs = c_series(&basis, &c.gamma, &dec, &[1, 1]).unwrap();
    assert_eq!(cs.limit, int(4));
    assert_eq!(cs.reduced.expand(4), vec![int(1), int(3), int(4), int(4), int(4)]);
    assert!(cs.pole_hypotheses);
}

#[test]
fn sandwich_examples() {
    assert_eq!(sandwich_bounds(2, 2, 1, &[1, 1]), (int(4), int(4)));
    assert_eq!(sandwich_bounds(2, 2, 1, &[1, 2]), (int(2), int(4)));
    assert_eq!(sandwich_bounds(6, 1, 2, &[2, 3]), (int(1), int(1)));
    assert_eq!(sandwich_bounds(3, 1, 1, &[2, 3, 5]), (frac(3, 5), frac(3, 2)));
    assert_eq!(sorted_orders(&[2, 1, 2]), (vec![1, 2, 2], vec![1, 0, 2]));
}

fn report_for(c: &Case, t_max: u32) -> Result<lechkit_core::bounds::BoundReport, Error> {
    let i = c.ideal();
    let basis = quotient_basis(&i)?;
    let dec = stanley_decompose(&c.gamma);
    let analysis = analyze(&dec)?;
    let t = lechkit_core::bounds::generator_orders(&i)?;
    let cs = c_series(&basis, &c.gamma, &dec, &t)?;
    let expansion = i.expansion_report(&c.gamma, 3)?;
    let census = a2_census(&i, &c.gamma, &basis, &t, t_max)?;
    let hs = hilbert_samuel_multiplicity(&c.alg, 30)?;
    let colengths: Vec<usize> = (0..=31).map(|k| c.alg.colength_max_power(k)).collect::<Result<_, _>>()?;
    theorem45_report(&Theorem45Input {
        analysis: &analysis,
        basis: &basis,
        c: &cs,
        t: &t,
        expansion: &expansion,
        census: &census,
        hilbert_samuel: &hs,
        colengths: &colengths,
        cumulative_degree: 30,
    })
}

#[test]
fn bound_reports() {
    let r = report_for(&ex323(), 20).unwrap();
    assert_eq!((r.lower_bound.clone(), r.c_limit.clone(), r.upper_bound.clone()), (int(4), int(4), int(4)));
    assert_eq!(r.e_n, Some(4));
    assert!(r.verdicts.iter().all(|v| v.pass), "{:?}", r.verdicts);
    assert!(r.verdict("e_n_ge_lower").is_some());
    assert_eq!(r.cumulative.equal_through, Some(30));

    let r = report_for(&rem48(), 10).unwrap();
    assert_eq!((r.lower_bound.clone(), r.c_limit.clone(), r.upper_bound.clone()), (int(2), int(3), int(4)));
    assert_eq!(r.t, vec![1, 2]);
    assert_eq!(r.e_n, Some(3));

    // an unvalidated standard set is refused, not reported on
    match report_for(&ex327(), 4) {
        Err(Error::Precondition(msg)) => assert!(msg.contains("i=2"), "{msg}"),
        other => panic!("expected a refusal, got {other:?}"),
    }
}

#[test]
fn census_is_monotone_and_spans() {
    for (c, t_max) in [(ex323(), 12), (rem48(), 10), (ex327(), 8)] {
        let i = c.ideal();
        let basis = quotient_basis(&i).unwrap();
        let t = lechkit_core::bounds::generator_orders(&i).unwrap();
        let census = a2_census(&i, &c.gamma, &basis, &t, t_max).unwrap();
        for w in census.rows.windows(2) {
            assert!(w[0].count <= w[1].count);
        }
        assert!(census.rows.iter().all(|r| r.spanning));
    }
}

#[test]
fn theorem47_on_the_two_generator_example() {
    let c = rem48();
    let i = c.ideal();
    let analysis = analyze(&stanley_decompose(&c.gamma)).unwrap();
    let r = theorem47_check(&i, &analysis, true, true, 3).unwrap();
    assert!(r.hanes.pass && r.inequality.pass);
    assert_eq!((r.hanes.lhs.as_str(), r.hanes.rhs.as_str()), ("2", "2"));
    assert_eq!(r.inequality.rhs, "2");
    assert!(theorem47_check(&i, &analysis, false, true, 3).is_err());
    let weighted = ex323();
    let wi = weighted.ideal();
    let wa = analyze(&stanley_decompose(&weighted.gamma)).unwrap();
    assert!(theorem47_check(&wi, &wa, true, true, 4).is_err());
}

#[test]
fn samuel_examples() {
    let a = alg(&["x", "y"], &[1, 1], &["x^2"]);
    let x = samuel_estimate(&a, &a.parse("x").unwrap(), 8, 40).unwrap();
    assert!(x.infinite);
    let y = samuel_estimate(&a, &a.parse("y").unwrap(), 8, 40).unwrap();
    assert_eq!(y.lower_bound, Some(int(1)));

    // x^2 = y^3 with weights 3, 2: ord x = 1 but ord x^2 = 3
    let cusp = alg(&["x", "y"], &[3, 2], &["x^2 - y^3"]);
    let e = samuel_estimate(&cusp, &cusp.parse("x").unwrap(), 8, 60).unwrap();
    assert_eq!(e.ord, "1");
    assert_eq!(e.lower_bound, Some(frac(3, 2)));
}

#[test]
fn samuel_bound_dominance() {
    let cusp = alg(&["x", "y"], &[3, 2], &["x^2 - y^3"]);
    let ex = samuel_estimate(&cusp, &cusp.parse("x").unwrap(), 8, 60).unwrap();
    let ey = samuel_estimate(&cusp, &cusp.parse("y").unwrap(), 8, 60).unwrap();
    let certified = [ex, ey];
    let at_ord = samuel_bound(2, 3, 1, &[QValue::Finite(int(1)), QValue::Finite(int(1))], &certified).unwrap();
    assert_eq!(at_ord.bound, int(6));
    let (_, upper) = sandwich_bounds(3, 2, 1, &[1, 1]);
    assert_eq!(at_ord.bound, upper);
    let sharper = samuel_bound(2, 3, 1, &[QValue::Finite(frac(3, 2)), QValue::Finite(int(1))], &certified).unwrap();
    assert_eq!(sharper.bound, int(6));
    let sharper = samuel_bound(2, 3, 2, &[QValue::Finite(frac(3, 2)), QValue::Finite(int(1))], &certified).unwrap();
    assert!(sharper.bound < samuel_bound(2, 3, 2, &[QValue::Finite(int(1)), QValue::Finite(int(1))], &certified).unwrap().bound);
    // q beyond what the samples certify is refused
    assert!(samuel_bound(2, 3, 1, &[QValue::Finite(int(2)), QValue::Finite(int(1))], &certified).is_err());
    assert_eq!(QValue::parse("inf").unwrap(), QValue::Infinite);
    assert_eq!(QValue::parse("3/2").unwrap(), QValue::Finite(frac(3, 2)));
}

proptest! {
    #[test]
    fn sandwich_is_ordered(
        l in 1usize..20,
        e in 1u64..20,
        t in prop::collection::vec(1u32..6, 1..5),
        d_seed in 0usize..5,
    ) {
        let (t_sorted, _) = sorted_orders(&t);
        let d = d_seed % t.len() + 1;
        let (lower, upper) = sandwich_bounds(l, e, d, &t_sorted);
        prop_assert!(lower <= upper);
        if t.iter().all(|&x| x == t[0]) {
            prop_assert_eq!(lower, upper);
        }
    }

    #[test]
    fn stabilize_recovers_hilbert_polynomials(a in 1u64..6, b in 0u64..5, d in 1u32..4) {
        // colengths e t^d / d! + b t^(d-1) style, kept integral
        let e = a * (1..=d as u64).product::<u64>();
        let col: Vec<usize> = (0..=30u64)
            .map(|t| if t == 0 { 0 } else { (a * t.pow(d) + b * t.pow(d - 1)) as usize })
            .collect();
        let hs = stabilize(col, 30);
        prop_assert!(hs.stabilized);
        prop_assert_eq!(hs.dimension, Some(d));
        prop_assert_eq!(hs.multiplicity, Some(e));
    }
}

#[test]
fn wider_window_settles_late_case() {
    let a = GradedAlgebra::from_strings(Rationals, &["t", "x", "y"], &[6, 1, 1], &["t^2", "t*y^2 - x^8"], 300).unwrap();
    let hs = hilbert_samuel_multiplicity(&a, 40).unwrap();
    assert!(hs.stabilized);
    assert_eq!((hs.dimension, hs.multiplicity), (Some(1), Some(16)));
}
