//! Multiplicity bounds for `n`-primary ideals with a known standard set:
//! the series `c(z)`, the `A_{2,t}` census, the Hilbert-Samuel multiplicity
//! estimate, the upper/lower sandwich, the flat-source inequality and the
//! refinement by the asymptotic Samuel function.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{serialize_opt_rational, serialize_rational, Field};
use crate::galg::{ExpansionVerdict, GradedAlgebra, HomElem, HomogeneousIdeal, OrdValue};
use crate::linalg::Echelon;
use crate::monom::{Monomial, StandardSet};
use crate::poly::Polynomial;
use crate::series::{compare_cumulative_coeffs, substitute_powers, PoleProfile, RationalSeries};
use crate::stanley::{GammaAnalysis, StanleyDecomposition};

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A named inequality with both sides rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Verdict {
            name: name.into(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    pub fn le(name: impl Into<String>, lhs: &BigRational, rhs: &BigRational) -> Self {
        Verdict::new(name, lhs <= rhs, lhs, rhs)
    }

    pub fn ge(name: impl Into<String>, lhs: &BigRational, rhs: &BigRational) -> Self {
        Verdict::new(name, lhs >= rhs, lhs, rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientElement {
    pub monomial: Monomial,
    pub display: String,
    pub degree: u32,
    pub ord: u32,
}

/// Monomials whose classes form a homogeneous basis of `gr_n(S/I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientBasis {
    pub elements: Vec<QuotientElement>,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ z^{ord f_i}`.
    pub fn hilbert_series(&self) -> RationalSeries {
        RationalSeries::from_exponents(self.elements.iter().map(|e| e.ord as u64))
    }
}

/// Per weighted degree, picks monomials independent modulo `I` in order of
/// descending total degree, so the chosen set is adapted to the `n`-adic
/// filtration and each `ord` equals the total degree.
pub fn quotient_basis<F: Field>(ideal: &HomogeneousIdeal<F>) -> Result<QuotientBasis> {
    let alg = ideal.algebra();
    let mut elements = Vec::new();
    for d in 0..=ideal.top_degree() {
        let piece = alg.piece(d);
        let mut e = (*ideal.power(1, d)).clone();
        for (col, m) in piece.monomials.iter().enumerate() {
            if e.rank() == piece.dim() {
                break;
            }
            let nf = piece.nf_column(col).clone();
            if e.insert(nf.clone()) {
                let ord = match alg.ord(&HomElem { degree: d, coords: nf }) {
                    OrdValue::Finite(t) => t,
                    other => {
                        return Err(Error::Internal(format!(
                            "basis monomial {} has ord {other}",
                            alg.format_monomial(m)
                        )))
                    }
                };
                if ord != m.degree() {
                    return Err(Error::Internal(format!(
                        "basis monomial {} has ord {ord} but total degree {}",
                        alg.format_monomial(m),
                        m.degree()
                    )));
                }
                elements.push(QuotientElement {
                    monomial: m.clone(),
                    display: alg.format_monomial(m),
                    degree: d,
                    ord,
                });
            }
        }
    }
    if elements.len() != ideal.colength() {
        return Err(Error::Internal(format!(
            "quotient basis has {} elements, colength is {}",
            elements.len(),
            ideal.colength()
        )));
    }
    Ok(QuotientBasis { elements })
}

/// `ord` of each generator, in generator order.
pub fn generator_orders<F: Field>(ideal: &HomogeneousIdeal<F>) -> Result<Vec<u32>> {
    let alg = ideal.algebra();
    ideal
        .generators()
        .iter()
        .zip(ideal.generator_strings())
        .map(|(g, s)| match alg.ord(g) {
            OrdValue::Finite(t) => Ok(t),
            _ => Err(Error::Input(format!("generator `{s}` is zero in S"))),
        })
        .collect()
}

/// Members `u` of `Γ` with `Σ_j w_j deg_{T_j}(u) < bound`.
pub fn gamma_below(gamma: &StandardSet, w: &[u32], bound: u64) -> Vec<Monomial> {
    fn go(gamma: &StandardSet, w: &[u32], pos: usize, used: u64, bound: u64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == w.len() {
            let m = Monomial::new(exps.clone());
            if gamma.contains(&m) {
                out.push(m);
            }
            return;
        }
        let mut e = 0u32;
        while used + (e as u64) * (w[pos] as u64) < bound {
            exps[pos] = e;
            go(gamma, w, pos + 1, used + (e as u64) * (w[pos] as u64), bound, exps, out);
            e += 1;
        }
        exps[pos] = 0;
    }
    let mut out = Vec::new();
    let mut exps = vec![0; w.len()];
    go(gamma, w, 0, 0, bound, &mut exps, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CSeries {
    pub series: RationalSeries,
    pub reduced: RationalSeries,
    #[serde(serialize_with = "serialize_rational")]
    pub limit: BigRational,
    pub poles: PoleProfile,
    /// P1, P2_d and P3_{d+1} hold for `d` = pole order at 1.
    pub pole_hypotheses: bool,
    pub crosscheck_degree: usize,
}

/// `c(z) = HS_{S/I}(z) · HS_Γ(z^{t_1}, ..., z^{t_r})`, cross-checked against
/// a direct count of `(i, u)` by degree.
pub fn c_series(
    basis: &QuotientBasis,
    gamma: &StandardSet,
    dec: &StanleyDecomposition,
    t: &[u32],
) -> Result<CSeries> {
    let series = basis.hilbert_series().mul(&substitute_powers(dec, t)?);
    const CHECK: usize = 20;
    let mut counts = [0u64; CHECK + 1];
    for u in gamma_below(gamma, t, CHECK as u64 + 1) {
        let base = u.dot(t);
        for f in &basis.elements {
            let m = base + f.ord as u64;
            if m <= CHECK as u64 {
                counts[m as usize] += 1;
            }
        }
    }
    let expanded = series.expand(CHECK);
    for (m, (&c, a)) in counts.iter().zip(&expanded).enumerate() {
        if rat(c) != *a {
            return Err(Error::Internal(format!(
                "c(z) coefficient {m} is {a}, direct count gives {c}"
            )));
        }
    }
    let reduced = series.reduce();
    let poles = reduced.classify_poles();
    let d = poles.order_at_one;
    Ok(CSeries {
        limit: reduced.residue_at_one(),
        pole_hypotheses: poles.satisfies_p1 && poles.p2(d) && poles.p3(d + 1),
        poles,
        series,
        reduced,
        crosscheck_degree: CHECK,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Row {
    pub t: u32,
    pub count: usize,
    pub colength: usize,
    /// `l(S/n^t) <= |A_{2,t}|`.
    pub spanning: bool,
    pub independent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Census {
    pub rows: Vec<A2Row>,
    /// Largest `t` such that independence holds for every `t' <= t`.
    pub independent_through: u32,
}

/// Counts `A_{2,t} = {f_i u(x) : ord f_i + Σ t_j deg_{T_j} u < t}` and tests
/// its independence modulo `n^t` for `1 <= t <= t_max`.
pub fn a2_census<F: Field>(
    ideal: &HomogeneousIdeal<F>,
    gamma: &StandardSet,
    basis: &QuotientBasis,
    t_vec: &[u32],
    t_max: u32,
) -> Result<A2Census> {
    let alg = ideal.algebra();
    let members = gamma_below(gamma, t_vec, t_max as u64);
    // (tdeg, element) for every candidate f_i u(x) of t-degree < t_max
    let mut elems: Vec<(u64, Arc<HomElem<F::Elem>>)> = Vec::new();
    for u in &members {
        let base = u.dot(t_vec);
        let p = ideal.product(u);
        for f in &basis.elements {
            let td = base + f.ord as u64;
            if td < t_max as u64 {
                alg.ensure_degree(p.degree + f.degree)?;
                elems.push((td, Arc::new(alg.mul_monomial(&f.monomial, &p))));
            }
        }
    }
    let mut rows = Vec::new();
    let mut independent_through = 0;
    let mut still = true;
    for t in 1..=t_max {
        let chosen: Vec<&HomElem<F::Elem>> = elems
            .iter()
            .filter(|(td, _)| *td < t as u64)
            .map(|(_, e)| e.as_ref())
            .collect();
        let colength = alg.colength_max_power(t)?;
        let mut by_degree: BTreeMap<u32, Vec<&HomElem<F::Elem>>> = BTreeMap::new();
        for e in &chosen {
            by_degree.entry(e.degree).or_default().push(e);
        }
        let mut independent = true;
        'deg: for (d, es) in by_degree {
            let op = alg.order_piece(d);
            let mut ech = Echelon::new(alg.field().clone());
            for row in op.echelon.rows_with_tag_at_least(t) {
                ech.insert(row.clone());
            }
            for e in es {
                if !ech.insert(e.coords.clone()) {
                    independent = false;
                    break 'deg;
                }
            }
        }
        if still && independent {
            independent_through = t;
        } else {
            still = false;
        }
        rows.push(A2Row {
            t,
            count: chosen.len(),
            colength,
            spanning: colength <= chosen.len(),
            independent,
        });
    }
    Ok(A2Census {
        rows,
        independent_through,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSamuel {
    /// `l(S/n^t)` for `t = 0..=window`.
    pub colengths: Vec<usize>,
    pub window: u32,
    pub stabilized: bool,
    pub dimension: Option<u32>,
    pub multiplicity: Option<u64>,
}

/// Estimates `(dim S, e(n))` from `l(S/n^t)`, `t <= window`: the first
/// difference order that is constant and positive over the trailing half
/// of the window gives both.
pub fn hilbert_samuel_multiplicity<F: Field>(alg: &GradedAlgebra<F>, window: u32) -> Result<HilbertSamuel> {
    let colengths: Vec<usize> = (0..=window)
        .map(|t| alg.colength_max_power(t))
        .collect::<Result<_>>()?;
    Ok(stabilize(colengths, window))
}

pub fn stabilize(colengths: Vec<usize>, window: u32) -> HilbertSamuel {
    let w = window as usize;
    let start = w - w / 2;
    let mut seq: Vec<i64> = colengths.iter().map(|&c| c as i64).collect();
    let mut found = None;
    for order in 0..=start {
        let tail = &seq[start.max(order)..=w];
        if tail.len() >= 2 && tail[0] > 0 && tail.iter().all(|&v| v == tail[0]) {
            found = Some((order as u32, tail[0] as u64));
            break;
        }
        // next difference, indexed by t (entries below `order` are unused)
        let mut next = vec![0i64; seq.len()];
        for t in 1..seq.len() {
            next[t] = seq[t] - seq[t - 1];
        }
        seq = next;
    }
    HilbertSamuel {
        colengths,
        window,
        stabilized: found.is_some(),
        dimension: found.map(|(d, _)| d),
        multiplicity: found.map(|(_, e)| e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CumulativeCheck {
    pub degree: usize,
    pub holds: bool,
    pub first_violation: Option<usize>,
    pub equal_through: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub d: u32,
    pub e_gamma: u64,
    pub l_si: usize,
    /// Generator orders, sorted ascending (stable in generator index).
    pub t: Vec<u32>,
    /// Generator index realizing each entry of `t`.
    pub t_order: Vec<usize>,
    pub c_series: String,
    #[serde(serialize_with = "serialize_rational")]
    pub c_limit: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub upper_bound: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub lower_bound: BigRational,
    pub e_n: Option<u64>,
    pub e_n_dimension: Option<u32>,
    pub e_n_window: u32,
    pub a2_independent_up_to: u32,
    pub cumulative: CumulativeCheck,
    pub verdicts: Vec<Verdict>,
}

impl BoundReport {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// Indices sorting `t` ascending, ties kept in generator order.
pub fn sorted_orders(t: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by_key(|&i| t[i]);
    (idx.iter().map(|&i| t[i]).collect(), idx)
}

fn product(ts: &[u32]) -> BigRational {
    ts.iter().fold(BigRational::one(), |acc, &t| acc * rat(t as u64))
}

/// `(lower, upper) = (l e / (t_r ... t_{r-d+1}), l e / (t_1 ... t_d))`.
pub fn sandwich_bounds(l: usize, e_gamma: u64, d: usize, t_sorted: &[u32]) -> (BigRational, BigRational) {
    let num = rat(l as u64) * rat(e_gamma);
    let r = t_sorted.len();
    let upper = &num / product(&t_sorted[..d]);
    let lower = &num / product(&t_sorted[r - d..]);
    (lower, upper)
}

pub struct Theorem45Input<'x> {
    pub analysis: &'x GammaAnalysis,
    pub basis: &'x QuotientBasis,
    pub c: &'x CSeries,
    pub t: &'x [u32],
    pub expansion: &'x [ExpansionVerdict],
    pub census: &'x A2Census,
    pub hilbert_samuel: &'x HilbertSamuel,
    /// `l(S/n^t)` for `t = 0..=cumulative_degree + 1`.
    pub colengths: &'x [usize],
    pub cumulative_degree: usize,
}

/// Assembles the sandwich, the cumulative comparison and the bounds on
/// `e(n)`; refuses unless every expansion check passed.
pub fn theorem45_report(input: &Theorem45Input<'_>) -> Result<BoundReport> {
    if input.expansion.is_empty() {
        return Err(Error::Precondition("no expansion check was run".into()));
    }
    if let Some(bad) = input.expansion.iter().find(|v| !v.pass) {
        return Err(Error::Precondition(format!(
            "expansion check fails at i={}",
            bad.i
        )));
    }
    if input.colengths.len() < input.cumulative_degree + 2 {
        return Err(Error::Precondition(format!(
            "cumulative comparison to degree {} needs l(S/n^t) through t={}",
            input.cumulative_degree,
            input.cumulative_degree + 1
        )));
    }
    let a = input.analysis;
    let d = a.dimension;
    let l = input.basis.len();
    let (t_sorted, t_order) = sorted_orders(input.t);
    let (lower, upper) = sandwich_bounds(l, a.multiplicity, d, &t_sorted);
    let mut verdicts = Vec::new();
    verdicts.push(Verdict::new(
        "c_pole_hypotheses",
        input.c.pole_hypotheses && input.c.poles.order_at_one == d as i64,
        format!("pole order {}", input.c.poles.order_at_one),
        format!("d = {d}"),
    ));
    verdicts.push(Verdict::le("sandwich_lower", &lower, &input.c.limit));
    verdicts.push(Verdict::le("sandwich_upper", &input.c.limit, &upper));

    let hs: Vec<BigRational> = (0..=input.cumulative_degree)
        .map(|m| rat((input.colengths[m + 1] - input.colengths[m]) as u64))
        .collect();
    let cs = input.c.series.expand(input.cumulative_degree);
    let cmp = compare_cumulative_coeffs(&hs, &cs, input.cumulative_degree);
    verdicts.push(Verdict::new(
        "cumulative_hs_le_c",
        cmp.holds,
        format!("HS_S/(1-z) through degree {}", input.cumulative_degree),
        match cmp.first_violation {
            Some(m) => format!("c/(1-z), first violation at {m}"),
            None => "c/(1-z)".to_string(),
        },
    ));

    let hsm = input.hilbert_samuel;
    let e_n = hsm.multiplicity;
    match (hsm.dimension, e_n) {
        (Some(dn), Some(e)) => {
            verdicts.push(Verdict::new("dimension_agrees", dn as usize == d, dn, d));
            verdicts.push(Verdict::le("e_n_le_upper", &rat(e), &upper));
            if input.census.independent_through >= input.census.rows.len() as u32
                && !input.census.rows.is_empty()
            {
                verdicts.push(Verdict::ge("e_n_ge_lower", &rat(e), &lower));
            }
        }
        _ => verdicts.push(Verdict::new(
            "e_n_stabilized",
            false,
            format!("window {}", hsm.window),
            "not stabilized",
        )),
    }
    Ok(BoundReport {
        d: d as u32,
        e_gamma: a.multiplicity,
        l_si: l,
        t: t_sorted,
        t_order,
        c_series: input.c.reduced.to_string(),
        c_limit: input.c.limit.clone(),
        upper_bound: upper,
        lower_bound: lower,
        e_n,
        e_n_dimension: hsm.dimension,
        e_n_window: hsm.window,
        a2_independent_up_to: input.census.independent_through,
        cumulative: CumulativeCheck {
            degree: cmp.degree,
            holds: cmp.holds,
            first_violation: cmp.first_violation,
            equal_through: cmp.equal_through,
        },
        verdicts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem47Report {
    pub hanes: Verdict,
    pub inequality: Verdict,
}

/// Checks `l(S/I) >= t_1...t_r` and `e(n) >= e(Γ) t_1 ... t_{r-d}` for a
/// standard graded case with a Lech-independent, Γ-expandable ideal.
pub fn theorem47_check<F: Field>(
    ideal: &HomogeneousIdeal<F>,
    analysis: &GammaAnalysis,
    lech_independent: bool,
    gamma_validated: bool,
    e_n: u64,
) -> Result<Theorem47Report> {
    let alg = ideal.algebra();
    if alg.weights().iter().any(|&w| w != 1) {
        return Err(Error::Precondition("standard weights are required".into()));
    }
    if !lech_independent {
        return Err(Error::Precondition("ideal is not Lech-independent".into()));
    }
    if !gamma_validated {
        return Err(Error::Precondition("standard set was not validated".into()));
    }
    let t = generator_orders(ideal)?;
    if t != ideal.generator_degrees() {
        return Err(Error::Internal("generator order differs from its degree".into()));
    }
    let (t_sorted, _) = sorted_orders(&t);
    let r = t_sorted.len();
    let d = analysis.dimension.min(r);
    let l = rat(ideal.colength() as u64);
    let hanes = Verdict::ge("hanes_colength", &l, &product(&t_sorted));
    let rhs = rat(analysis.multiplicity) * product(&t_sorted[..r - d]);
    let inequality = Verdict::ge("e_n_ge_e_gamma_t", &rat(e_n), &rhs);
    Ok(Theorem47Report { hanes, inequality })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamuelSample {
    pub n: u32,
    pub ord: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamuelEstimate {
    pub element: String,
    pub samples: Vec<SamuelSample>,
    pub ord: String,
    /// `max ord(x^n)/n` over resolved samples; a certified lower bound for
    /// the asymptotic Samuel function since `ord(x^n)` is superadditive.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower_bound: Option<BigRational>,
    pub infinite: bool,
}

pub fn samuel_estimate<F: Field>(
    alg: &GradedAlgebra<F>,
    x: &Polynomial,
    n_max: u32,
    cutoff: u32,
) -> Result<SamuelEstimate> {
    let xe = alg.nf_homogeneous(x)?;
    let mut power = alg.one();
    let mut samples = Vec::new();
    let mut best: Option<BigRational> = None;
    let mut infinite = false;
    let mut first = String::new();
    for n in 1..=n_max {
        alg.ensure_degree(power.degree + xe.degree)?;
        power = alg.mul(&power, &xe);
        let o = alg.ord_with_cutoff(&power, cutoff);
        if n == 1 {
            first = o.to_string();
        }
        samples.push(SamuelSample {
            n,
            ord: o.to_string(),
        });
        match o {
            OrdValue::Finite(t) => {
                let q = BigRational::new(BigInt::from(t), BigInt::from(n));
                if best.as_ref().is_none_or(|b| &q > b) {
                    best = Some(q);
                }
            }
            OrdValue::AtLeast(_) => {}
            OrdValue::Infinite => {
                infinite = true;
                break;
            }
        }
    }
    Ok(SamuelEstimate {
        element: x.format_with(alg.names()),
        samples,
        ord: first,
        lower_bound: best,
        infinite,
    })
}

/// A positive rational or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QValue {
    Finite(BigRational),
    Infinite,
}

impl std::fmt::Display for QValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QValue::Finite(q) => write!(f, "{q}"),
            QValue::Infinite => write!(f, "inf"),
        }
    }
}

impl QValue {
    pub fn parse(s: &str) -> Result<QValue> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(QValue::Infinite);
        }
        let q: BigRational = s
            .parse()
            .map_err(|_| Error::Input(format!("bad rational `{s}`")))?;
        if q <= BigRational::zero() {
            return Err(Error::Input(format!("q must be positive, got {q}")));
        }
        Ok(QValue::Finite(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamuelBound {
    pub q_sorted: Vec<String>,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: BigRational,
    /// Some `q_i`, `i <= d`, is infinite, which would force `e(n) = 0`.
    pub contradiction: bool,
}

/// `e(Γ) l(S/I) / (q_1 ... q_d)` with `q` sorted ascending; each `q_i` must
/// not exceed the certified lower bound of generator `i`.
pub fn samuel_bound(
    e_gamma: u64,
    l_si: usize,
    d: usize,
    q: &[QValue],
    certified: &[SamuelEstimate],
) -> Result<SamuelBound> {
    if q.len() != certified.len() {
        return Err(Error::LengthMismatch {
            expected: certified.len(),
            found: q.len(),
        });
    }
    for (i, (qi, est)) in q.iter().zip(certified).enumerate() {
        if est.infinite {
            continue;
        }
        let ok = match (qi, &est.lower_bound) {
            (QValue::Finite(v), Some(s)) => v <= s,
            _ => false,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "q_{} = {qi} exceeds the certified lower bound {} for `{}`",
                i + 1,
                est.lower_bound
                    .as_ref()
                    .map_or("(none)".to_string(), |s| s.to_string()),
                est.element
            )));
        }
    }
    let mut sorted = q.to_vec();
    sorted.sort();
    let num = rat(l_si as u64) * rat(e_gamma);
    let mut contradiction = false;
    let mut den = BigRational::one();
    for qi in sorted.iter().take(d) {
        match qi {
            QValue::Finite(v) => den *= v,
            QValue::Infinite => contradiction = true,
        }
    }
    Ok(SamuelBound {
        q_sorted: sorted.iter().map(|v| v.to_string()).collect(),
        bound: if contradiction { BigRational::zero() } else { num / den },
        contradiction,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A3Row {
    pub t: u32,
    pub count: usize,
    pub colength_shifted: usize,
    pub holds: bool,
}

/// `|A_{3,t}| = l(S/I) · #{u ∈ Γ : Σ q_j deg_{T_j} u < t}` against
/// `l(S/n^{t+shift})`, for a case-supplied shift.
pub fn a3_diagnostic<F: Field>(
    alg: &GradedAlgebra<F>,
    gamma: &StandardSet,
    l_si: usize,
    q: &[BigRational],
    shift: u32,
    t_max: u32,
) -> Result<Vec<A3Row>> {
    // clear denominators so the count works with integer weights
    let lcm = q
        .iter()
        .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    let w: Vec<u32> = q
        .iter()
        .map(|v| {
            let scaled = v * BigRational::from_integer(lcm.clone());
            num_traits::ToPrimitive::to_u32(&scaled.to_integer())
                .ok_or_else(|| Error::Input("q too large".into()))
        })
        .collect::<Result<_>>()?;
    let lcm_u = num_traits::ToPrimitive::to_u64(&lcm).ok_or_else(|| Error::Input("q too large".into()))?;
    (1..=t_max)
        .map(|t| {
            let count = l_si * gamma_below(gamma, &w, t as u64 * lcm_u).len();
            let colength_shifted = alg.colength_max_power(t + shift)?;
            Ok(A3Row {
                t,
                count,
                colength_shifted,
                holds: colength_shifted <= count,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::monom::MonomialIdeal;
    use crate::stanley::{analyze, stanley_decompose};

    #[test]
    fn stabilization_on_known_sequences() {
        let lin: Vec<usize> = (0..=30).map(|t| if t == 0 { 0 } else { 2 * t - 1 }).collect();
        let h = stabilize(lin, 30);
        assert_eq!((h.dimension, h.multiplicity), (Some(1), Some(2)));
        let quad: Vec<usize> = (0..=30).map(|t| t * (t + 1) / 2).collect();
        let h = stabilize(quad, 30);
        assert_eq!((h.dimension, h.multiplicity), (Some(2), Some(1)));
        let h = stabilize(vec![0, 1, 3, 3, 3, 3, 3], 6);
        assert_eq!((h.dimension, h.multiplicity), (Some(0), Some(3)));
        let cubic: Vec<usize> = (0..=8).map(|t| t * t * t).collect();
        let h = stabilize(cubic, 8);
        assert_eq!((h.dimension, h.multiplicity), (Some(3), Some(6)));
        let exp: Vec<usize> = (0..=8).map(|t| (1usize << t) - 1).collect();
        assert!(!stabilize(exp, 8).stabilized);
    }

    #[test]
    fn ex323_sandwich_is_tight() {
        let a = GradedAlgebra::from_strings(Rationals, &["t", "x", "y"], &[2, 2, 1], &["t^2", "x^2 - t*y^2"], 200)
            .unwrap();
        let gens: Vec<Polynomial> = ["x", "y"].iter().map(|g| a.parse(g).unwrap()).collect();
        let ideal = HomogeneousIdeal::new(&a, &gens).unwrap();
        let basis = quotient_basis(&ideal).unwrap();
        let ords: Vec<u32> = basis.elements.iter().map(|e| e.ord).collect();
        assert_eq!(ords, vec![0, 1]);
        let gamma = StandardSet::complement_of(MonomialIdeal::parse("T1^2", 2).unwrap());
        let dec = stanley_decompose(&gamma);
        let t = generator_orders(&ideal).unwrap();
        assert_eq!(t, vec![1, 1]);
        let c = c_series(&basis, &gamma, &dec, &t).unwrap();
        assert_eq!(c.reduced, RationalSeries::parse("(1+z)^2/(1-z)").unwrap());
        assert_eq!(c.limit, rat(4));
        let census = a2_census(&ideal, &gamma, &basis, &t, 8).unwrap();
        assert_eq!(census.independent_through, 8);
        assert_eq!(census.rows[1].count, 4);
        let hsm = hilbert_samuel_multiplicity(&a, 30).unwrap();
        assert_eq!((hsm.dimension, hsm.multiplicity), (Some(1), Some(4)));
        let analysis = analyze(&dec).unwrap();
        let expansion = ideal.expansion_report(&gamma, 3).unwrap();
        let colengths: Vec<usize> = (0..=31).map(|t| a.colength_max_power(t).unwrap()).collect();
        let report = theorem45_report(&Theorem45Input {
            analysis: &analysis,
            basis: &basis,
            c: &c,
            t: &t,
            expansion: &expansion,
            census: &census,
            hilbert_samuel: &hsm,
            colengths: &colengths,
            cumulative_degree: 30,
        })
        .unwrap();
        assert!(report.verdicts.iter().all(|v| v.pass), "{:?}", report.verdicts);
        assert_eq!((report.lower_bound.clone(), report.upper_bound.clone()), (rat(4), rat(4)));
    }

    #[test]
    fn samuel_examples() {
        let a = GradedAlgebra::from_strings(Rationals, &["x", "y"], &[1, 1], &["x^2"], 100).unwrap();
        let est = samuel_estimate(&a, &a.parse("x").unwrap(), 5, 50).unwrap();
        assert!(est.infinite);
        let est = samuel_estimate(&a, &a.parse("y").unwrap(), 5, 50).unwrap();
        assert_eq!(est.lower_bound, Some(rat(1)));
        let q = vec![QValue::Finite(rat(1)), QValue::Finite(rat(2))];
        let b = samuel_bound(2, 1, 1, &q, &[est.clone(), est.clone()]);
        assert!(b.is_err());
        let ok = samuel_bound(2, 1, 1, &[QValue::Finite(rat(1)), QValue::Finite(rat(1))], &[est.clone(), est])
            .unwrap();
        assert_eq!(ok.bound, rat(2));
    }
}
