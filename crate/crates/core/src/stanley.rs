//! Stanley decompositions of standard sets and the invariants read off them.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::monom::{Monomial, MonomialIdeal, StandardSet};
use crate::series::{substitute_powers, RationalSeries};

/// Which variable the recursive split branches on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Lowest-index variable occurring in some generator.
    #[default]
    Lowest,
    /// Highest-index variable occurring in some generator.
    Highest,
}

/// Pairs `(u, S)`; the cones `u · Mon(k[S])` partition the standard set.
#[derive(Clone, PartialEq, Eq)]
pub struct StanleyDecomposition {
    num_vars: usize,
    pairs: Vec<(Monomial, Vec<usize>)>,
}

impl StanleyDecomposition {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn pairs(&self) -> &[(Monomial, Vec<usize>)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Index of the cone containing `m`, if any.
    pub fn cone_of(&self, m: &Monomial) -> Option<usize> {
        self.pairs.iter().position(|(u, vars)| cone_contains(u, vars, m))
    }
}

pub fn cone_contains(u: &Monomial, vars: &[usize], m: &Monomial) -> bool {
    match m.div(u) {
        Some(q) => q
            .exponents()
            .iter()
            .enumerate()
            .all(|(j, &e)| e == 0 || vars.contains(&j)),
        None => false,
    }
}

pub fn stanley_decompose(set: &StandardSet) -> StanleyDecomposition {
    stanley_decompose_with(set, PivotRule::Lowest)
}

pub fn stanley_decompose_with(set: &StandardSet, rule: PivotRule) -> StanleyDecomposition {
    let r = set.num_vars();
    let mut pairs = Vec::new();
    split(
        set.ideal().clone(),
        (0..r).collect(),
        Monomial::one(r),
        rule,
        &mut pairs,
    );
    StanleyDecomposition { num_vars: r, pairs }
}

/// Decomposes `{prefix · m : m ∈ Mon(k[free]) \ ideal}`; the generators of
/// `ideal` only involve variables in `free`.
fn split(
    ideal: MonomialIdeal,
    free: Vec<usize>,
    prefix: Monomial,
    rule: PivotRule,
    out: &mut Vec<(Monomial, Vec<usize>)>,
) {
    if ideal.is_whole() {
        return;
    }
    if ideal.is_zero() {
        out.push((prefix, free));
        return;
    }
    let occurring = free
        .iter()
        .copied()
        .filter(|&j| ideal.generators().iter().any(|g| g.exponent(j) > 0));
    let j = match rule {
        PivotRule::Lowest => occurring.min(),
        PivotRule::Highest => occurring.max(),
    }
    .expect("a nonzero proper ideal has a generator of positive degree");

    // monomials free of T_j
    let without: Vec<Monomial> = ideal
        .generators()
        .iter()
        .filter(|g| g.exponent(j) == 0)
        .cloned()
        .collect();
    let rest: Vec<usize> = free.iter().copied().filter(|&v| v != j).collect();
    let sub = MonomialIdeal::minimalize(without, ideal.num_vars()).expect("lengths agree");
    split(sub, rest, prefix.clone(), rule, out);

    // multiples of T_j
    split(ideal.colon_var(j), free, prefix.mul_var(j), rule, out);
}

/// Dimension, multiplicity and Hilbert series of a nonempty standard set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaAnalysis {
    pub dimension: usize,
    pub multiplicity: u64,
    /// The terms `u_i(z) / Π_{j ∈ S_i} (1 - z_j)`.
    pub multigraded_terms: Vec<(Monomial, Vec<usize>)>,
    pub single_series: RationalSeries,
}

impl GammaAnalysis {
    pub fn multigraded_string(&self) -> String {
        let parts: Vec<String> = self
            .multigraded_terms
            .iter()
            .map(|(u, vars)| {
                let num = u.format_with(
                    &(1..=u.num_vars()).map(|j| format!("z{j}")).collect::<Vec<_>>(),
                );
                if vars.is_empty() {
                    num
                } else {
                    let den: String = vars.iter().map(|j| format!("(1-z{})", j + 1)).collect();
                    format!("{num}/{den}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

pub fn analyze(dec: &StanleyDecomposition) -> Result<GammaAnalysis> {
    if dec.is_empty() {
        return Err(Error::Input(
            "standard set is empty; dimension and multiplicity are undefined".into(),
        ));
    }
    let dimension = dec.pairs.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let multiplicity = dec.pairs.iter().filter(|(_, s)| s.len() == dimension).count() as u64;
    let ones = vec![1; dec.num_vars];
    Ok(GammaAnalysis {
        dimension,
        multiplicity,
        multigraded_terms: dec.pairs.clone(),
        single_series: substitute_powers(dec, &ones)?,
    })
}

impl fmt::Display for StanleyDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, vars) in &self.pairs {
            let names: Vec<String> = vars.iter().map(|j| format!("T{}", j + 1)).collect();
            writeln!(f, "{u} ; {{{}}}", names.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for StanleyDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for StanleyDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair {
            monomial: String,
            variables: Vec<String>,
        }
        let mut seq = serializer.serialize_seq(Some(self.pairs.len()))?;
        for (u, vars) in &self.pairs {
            seq.serialize_element(&Pair {
                monomial: u.to_string(),
                variables: vars.iter().map(|j| format!("T{}", j + 1)).collect(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monom::monomials_of_degree;

    fn set(text: &str, r: usize) -> StandardSet {
        StandardSet::complement_of(MonomialIdeal::parse(text, r).unwrap())
    }

    fn assert_partition(s: &StandardSet, dec: &StanleyDecomposition, max_deg: u32) {
        for d in 0..=max_deg {
            for m in monomials_of_degree(s.num_vars(), d) {
                let hits = dec
                    .pairs()
                    .iter()
                    .filter(|(u, v)| cone_contains(u, v, &m))
                    .count();
                assert_eq!(hits, usize::from(s.contains(&m)), "monomial {m}");
            }
        }
    }

    #[test]
    fn complement_of_square() {
        let s = set("T1^2", 2);
        for rule in [PivotRule::Lowest, PivotRule::Highest] {
            let dec = stanley_decompose_with(&s, rule);
            assert_partition(&s, &dec, 15);
            let a = analyze(&dec).unwrap();
            assert_eq!((a.dimension, a.multiplicity), (1, 2));
            assert_eq!(a.single_series, RationalSeries::parse("(1+z)/(1-z)").unwrap());
        }
    }

    #[test]
    fn trivial_sets() {
        let dec = stanley_decompose(&StandardSet::everything(3));
        assert_eq!(dec.pairs(), &[(Monomial::one(3), vec![0, 1, 2])]);
        let a = analyze(&dec).unwrap();
        assert_eq!((a.dimension, a.multiplicity), (3, 1));

        let dec = stanley_decompose(&set("T1, T2", 2));
        assert_eq!(dec.pairs(), &[(Monomial::one(2), vec![])]);
        let a = analyze(&dec).unwrap();
        assert_eq!((a.dimension, a.multiplicity), (0, 1));
        assert_eq!(a.single_series, RationalSeries::one());

        let dec = stanley_decompose(&set("1", 2));
        assert!(dec.is_empty());
        assert!(analyze(&dec).is_err());
    }

    #[test]
    fn printing() {
        let dec = stanley_decompose(&set("T1^2", 2));
        let text = dec.to_string();
        assert!(text.contains("1 ; {T2}"));
        assert!(text.contains("T1 ; {T2}"));
        let json = serde_json::to_string(&dec).unwrap();
        assert!(json.contains(r#"{"monomial":"T1","variables":["T2"]}"#));
    }
}
