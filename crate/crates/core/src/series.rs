//! Rational generating functions `N(z) / Π (1 - z^t)` with exact coefficients.
//!
//! Pole analysis works with the factors `Ψ_1 = 1 - z` and `Ψ_m = Φ_m` for
//! `m > 1`, so that `1 - z^t = Π_{m | t} Ψ_m` holds without sign bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::stanley::StanleyDecomposition;

/// Dense polynomial in `z`, ascending powers, no trailing zeros.
pub type ZPoly = Vec<BigRational>;

fn trim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn poly_mul(a: &[BigRational], b: &[BigRational]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> ZPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect();
    trim(out)
}

/// `a / b` when `b` divides `a` exactly; `b` must have a nonzero constant term.
fn exact_div(a: &[BigRational], b: &[BigRational]) -> Option<ZPoly> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() > a.len() {
        return None;
    }
    let qlen = a.len() - b.len() + 1;
    let b0 = &b[0];
    let mut rem: Vec<BigRational> = a.to_vec();
    let mut q = vec![BigRational::zero(); qlen];
    for i in 0..qlen {
        let c = &rem[i] / b0;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(trim(q))
    } else {
        None
    }
}

fn one_minus_z_pow(t: u32) -> ZPoly {
    let mut p = vec![BigRational::zero(); t as usize + 1];
    p[0] = int(1);
    p[t as usize] = int(-1);
    p
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `Ψ_m`: `1 - z` for `m = 1`, the cyclotomic polynomial `Φ_m` otherwise.
pub fn psi(m: u32) -> ZPoly {
    assert!(m >= 1);
    let mut p = one_minus_z_pow(m);
    for d in divisors(m) {
        if d < m {
            p = exact_div(&p, &psi(d)).expect("cyclotomic factor divides 1 - z^m");
        }
    }
    p
}

fn evaluate_at_one(p: &[BigRational]) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc + c)
}

fn strip_factor(mut p: ZPoly, f: &[BigRational], limit: Option<u32>) -> (ZPoly, u32) {
    let mut k = 0;
    while !p.is_empty() && limit.is_none_or(|l| k < l) {
        match exact_div(&p, f) {
            Some(q) => {
                p = q;
                k += 1;
            }
            None => break,
        }
    }
    (p, k)
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesJson", try_from = "SeriesJson")]
pub struct RationalSeries {
    numerator: ZPoly,
    /// Each entry `t` stands for a factor `1 - z^t`; kept sorted.
    denominator: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    numerator: Vec<String>,
    denominator: Vec<u32>,
}

impl From<RationalSeries> for SeriesJson {
    fn from(s: RationalSeries) -> Self {
        SeriesJson {
            numerator: s.numerator.iter().map(|c| c.to_string()).collect(),
            denominator: s.denominator,
        }
    }
}

impl TryFrom<SeriesJson> for RationalSeries {
    type Error = Error;
    fn try_from(j: SeriesJson) -> Result<Self> {
        let numerator = j
            .numerator
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|_| Error::Input(format!("bad rational `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        RationalSeries::new(numerator, j.denominator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleProfile {
    pub order_at_one: i64,
    /// Largest pole order at a root of unity other than 1 (0 if none).
    pub max_order_elsewhere: i64,
    pub satisfies_p1: bool,
    /// Order at the primitive `m`-th roots of unity, keyed by `m`.
    pub orders: BTreeMap<u32, i64>,
}

impl PoleProfile {
    pub fn p2(&self, d: i64) -> bool {
        self.order_at_one == d
    }

    pub fn p3(&self, d: i64) -> bool {
        self.max_order_elsewhere < d
    }
}

/// `L_k = a_k / C(d+k-1, d-1)` for `k = 0..=k_max`.
#[derive(Clone, Debug)]
pub struct LFunctionalRecord {
    pub d: i64,
    pub residue: BigRational,
    pub values: Vec<BigRational>,
}

impl LFunctionalRecord {
    pub fn final_value(&self) -> &BigRational {
        self.values.last().expect("k_max >= 0")
    }

    pub fn gap_exact(&self, k: usize) -> BigRational {
        (&self.values[k] - &self.residue).abs()
    }

    pub fn gap(&self, k: usize) -> f64 {
        self.gap_exact(k).to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn final_gap(&self) -> f64 {
        self.gap(self.values.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueComparison {
    pub d: i64,
    #[serde(serialize_with = "crate::field::serialize_rational")]
    pub residue_a: BigRational,
    #[serde(serialize_with = "crate::field::serialize_rational")]
    pub residue_b: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CumulativeComparison {
    pub degree: usize,
    pub holds: bool,
    pub first_violation: Option<usize>,
    /// Largest `m` with equal cumulative sums in every degree `<= m`.
    pub equal_through: Option<usize>,
    pub residues: Option<ResidueComparison>,
}

/// Compares prefix sums of two coefficient lists over `0..=n`.
pub fn compare_cumulative_coeffs(a: &[BigRational], b: &[BigRational], n: usize) -> CumulativeComparison {
    let mut sa = BigRational::zero();
    let mut sb = BigRational::zero();
    let mut first_violation = None;
    let mut equal_through = None;
    let mut still_equal = true;
    for m in 0..=n {
        sa += a.get(m).cloned().unwrap_or_else(BigRational::zero);
        sb += b.get(m).cloned().unwrap_or_else(BigRational::zero);
        if first_violation.is_none() && sa > sb {
            first_violation = Some(m);
        }
        if still_equal && sa == sb {
            equal_through = Some(m);
        } else {
            still_equal = false;
        }
    }
    CumulativeComparison {
        degree: n,
        holds: first_violation.is_none(),
        first_violation,
        equal_through,
        residues: None,
    }
}

impl RationalSeries {
    pub fn new(numerator: Vec<BigRational>, mut denominator: Vec<u32>) -> Result<Self> {
        if denominator.contains(&0) {
            return Err(Error::Input("denominator factor 1 - z^0 vanishes".into()));
        }
        denominator.sort_unstable();
        let numerator = trim(numerator);
        if numerator.is_empty() {
            return Ok(RationalSeries::zero());
        }
        Ok(RationalSeries {
            numerator,
            denominator,
        })
    }

    pub fn zero() -> Self {
        RationalSeries {
            numerator: Vec::new(),
            denominator: Vec::new(),
        }
    }

    pub fn one() -> Self {
        RationalSeries::polynomial(vec![int(1)])
    }

    pub fn polynomial(coeffs: Vec<BigRational>) -> Self {
        RationalSeries::new(coeffs, Vec::new()).expect("no denominator")
    }

    /// `Σ z^{e}` over the given exponents.
    pub fn from_exponents(exps: impl IntoIterator<Item = u64>) -> Self {
        let mut coeffs: ZPoly = Vec::new();
        for e in exps {
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] += int(1);
        }
        RationalSeries::polynomial(coeffs)
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    pub fn mul(&self, other: &RationalSeries) -> RationalSeries {
        let mut den = self.denominator.clone();
        den.extend(&other.denominator);
        RationalSeries::new(poly_mul(&self.numerator, &other.numerator), den)
            .expect("positive factors")
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        sum_over_common_denominator([self.clone(), other.clone()])
    }

    /// Cancels common cyclotomic factors and rebuilds a `(1 - z^t)` form.
    pub fn reduce(&self) -> RationalSeries {
        if self.is_zero() {
            return RationalSeries::zero();
        }
        let mut remaining: BTreeMap<u32, u32> = BTreeMap::new();
        for &t in &self.denominator {
            for m in divisors(t) {
                *remaining.entry(m).or_default() += 1;
            }
        }
        let mut num = self.numerator.clone();
        for (&m, count) in remaining.iter_mut() {
            let (rest, k) = strip_factor(num, &psi(m), Some(*count));
            num = rest;
            *count -= k;
        }
        remaining.retain(|_, c| *c > 0);
        let mut den = Vec::new();
        while let Some((&m, _)) = remaining.iter().next_back() {
            den.push(m);
            for d in divisors(m) {
                match remaining.get_mut(&d) {
                    Some(c) if *c > 0 => {
                        *c -= 1;
                        if *c == 0 {
                            remaining.remove(&d);
                        }
                    }
                    _ => num = poly_mul(&num, &psi(d)),
                }
            }
        }
        RationalSeries::new(num, den).expect("positive factors")
    }

    /// Coefficients `a_0..=a_n` of the power-series expansion.
    pub fn expand(&self, n: usize) -> Vec<BigRational> {
        let mut a: Vec<BigRational> = (0..=n)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        for &t in &self.denominator {
            let t = t as usize;
            for k in t..=n {
                let prev = a[k - t].clone();
                a[k] += prev;
            }
        }
        a
    }

    pub fn classify_poles(&self) -> PoleProfile {
        let mut den_mult: BTreeMap<u32, i64> = BTreeMap::new();
        for &t in &self.denominator {
            for m in divisors(t) {
                *den_mult.entry(m).or_default() += 1;
            }
        }
        let mut orders = BTreeMap::new();
        for (&m, &dm) in &den_mult {
            let (_, k) = strip_factor(self.numerator.clone(), &psi(m), None);
            orders.insert(m, dm - k as i64);
        }
        if !self.is_zero() && !orders.contains_key(&1) {
            let (_, k) = strip_factor(self.numerator.clone(), &psi(1), None);
            if k > 0 {
                orders.insert(1, -(k as i64));
            }
        }
        let order_at_one = if self.is_zero() {
            0
        } else {
            orders.get(&1).copied().unwrap_or(0)
        };
        let max_order_elsewhere = orders
            .iter()
            .filter(|(&m, _)| m > 1)
            .map(|(_, &o)| o.max(0))
            .max()
            .unwrap_or(0);
        PoleProfile {
            order_at_one,
            max_order_elsewhere,
            // Every denominator factor is a product of cyclotomic polynomials.
            satisfies_p1: true,
            orders,
        }
    }

    /// `lim_{z -> 1} (1 - z)^d · self` where `d` is the pole order at 1.
    pub fn residue_at_one(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (rest, _) = strip_factor(self.numerator.clone(), &psi(1), None);
        let denom: BigRational = self
            .denominator
            .iter()
            .fold(int(1), |acc, &t| acc * int(t as i64));
        evaluate_at_one(&rest) / denom
    }

    pub fn l_functional_check(&self, k_max: usize) -> Result<LFunctionalRecord> {
        let profile = self.classify_poles();
        let d = profile.order_at_one;
        if d < 1 {
            return Err(Error::Hypothesis {
                property: format!("P2_{d} with d >= 1"),
                detail: format!("pole order at 1 is {d}"),
            });
        }
        if !profile.p3(d) {
            return Err(Error::Hypothesis {
                property: format!("P3_{d}"),
                detail: format!(
                    "a root of unity other than 1 has pole order {}",
                    profile.max_order_elsewhere
                ),
            });
        }
        let coeffs = self.expand(k_max);
        // C(d+k-1, d-1) updated incrementally in k.
        let mut binom = BigInt::one();
        let dm1 = (d - 1) as u64;
        let mut values = Vec::with_capacity(k_max + 1);
        for (k, a) in coeffs.into_iter().enumerate() {
            if k > 0 {
                binom = binom * BigInt::from(dm1 + k as u64) / BigInt::from(k as u64);
            }
            values.push(a / BigRational::from_integer(binom.clone()));
        }
        Ok(LFunctionalRecord {
            d,
            residue: self.residue_at_one(),
            values,
        })
    }

    /// Coefficientwise `a/(1-z) <= b/(1-z)` through degree `n`, plus the
    /// residue comparison when both series satisfy P2_d and P3_{d+1}.
    pub fn compare_cumulative(&self, other: &RationalSeries, n: usize) -> CumulativeComparison {
        let mut cmp = compare_cumulative_coeffs(&self.expand(n), &other.expand(n), n);
        let pa = self.classify_poles();
        let pb = other.classify_poles();
        let d = pa.order_at_one;
        if pb.p2(d) && pa.p3(d + 1) && pb.p3(d + 1) {
            let residue_a = self.residue_at_one();
            let residue_b = other.residue_at_one();
            cmp.residues = Some(ResidueComparison {
                d,
                holds: residue_a <= residue_b,
                residue_a,
                residue_b,
            });
        }
        cmp
    }

    /// Parses `poly / (1-z^a)(1-z^b)...`; a plain polynomial has no denominator.
    pub fn parse(text: &str) -> Result<RationalSeries> {
        let s = text.trim();
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if let Ok(den) = parse_denominator(&s[i + 1..]) {
                        split = Some((i, den));
                    }
                }
                _ => {}
            }
        }
        let (num_text, den) = match split {
            Some((i, den)) => (&s[..i], den),
            None => (s, Vec::new()),
        };
        let poly = Polynomial::parse(num_text, &["z"])?;
        let mut coeffs: ZPoly = Vec::new();
        for (m, c) in poly.terms() {
            let e = m.exponent(0) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] += c;
        }
        RationalSeries::new(coeffs, den)
    }

    fn numerator_string(&self) -> String {
        if self.numerator.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let zpart = match e {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{e}"),
            };
            if e == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&zpart);
            } else {
                out.push_str(&format!("{a}*{zpart}"));
            }
        }
        out
    }
}

fn parse_denominator(text: &str) -> Result<Vec<u32>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Input("empty denominator".into()));
    }
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let inner_end = rest
            .find(')')
            .ok_or_else(|| Error::Input("unclosed factor".into()))?;
        let inner = rest
            .strip_prefix('(')
            .map(|r| &r[..inner_end - 1])
            .ok_or_else(|| Error::Input("factor must start with `(`".into()))?;
        let t: u32 = if inner == "1-z" {
            1
        } else {
            inner
                .strip_prefix("1-z^")
                .and_then(|e| e.parse().ok())
                .filter(|&e: &u32| e > 0)
                .ok_or_else(|| Error::Input(format!("bad factor `({inner})`")))?
        };
        rest = &rest[inner_end + 1..];
        let mut power = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            power = digits
                .parse()
                .map_err(|_| Error::Input("bad factor power".into()))?;
            rest = &r[digits.len()..];
        }
        let rest_trim = rest.strip_prefix('*').unwrap_or(rest);
        rest = rest_trim;
        out.extend(std::iter::repeat_n(t, power as usize));
    }
    Ok(out)
}

/// Sums series over the denominator whose multiplicity of each `t` is the
/// largest multiplicity among the terms.
pub fn sum_over_common_denominator(terms: impl IntoIterator<Item = RationalSeries>) -> RationalSeries {
    let terms: Vec<RationalSeries> = terms.into_iter().filter(|s| !s.is_zero()).collect();
    let mut common: BTreeMap<u32, usize> = BTreeMap::new();
    for s in &terms {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &t in &s.denominator {
            *counts.entry(t).or_default() += 1;
        }
        for (t, c) in counts {
            let e = common.entry(t).or_default();
            *e = (*e).max(c);
        }
    }
    let mut num: ZPoly = Vec::new();
    for s in &terms {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &t in &s.denominator {
            *counts.entry(t).or_default() += 1;
        }
        let mut part = s.numerator.clone();
        for (&t, &c) in &common {
            let have = counts.get(&t).copied().unwrap_or(0);
            for _ in have..c {
                part = poly_mul(&part, &one_minus_z_pow(t));
            }
        }
        num = poly_add(&num, &part);
    }
    let den = common
        .into_iter()
        .flat_map(|(t, c)| std::iter::repeat_n(t, c))
        .collect();
    RationalSeries::new(num, den).expect("positive factors")
}

/// `Σ_i z^{Σ_j t_j deg_{T_j}(u_i)} / Π_{j ∈ S_i} (1 - z^{t_j})`.
pub fn substitute_powers(dec: &StanleyDecomposition, t: &[u32]) -> Result<RationalSeries> {
    if t.len() != dec.num_vars() {
        return Err(Error::LengthMismatch {
            expected: dec.num_vars(),
            found: t.len(),
        });
    }
    if t.contains(&0) {
        return Err(Error::Input("substituted powers must be positive".into()));
    }
    let terms = dec.pairs().iter().map(|(u, vars)| {
        let shift = u.dot(t) as usize;
        let mut num = vec![BigRational::zero(); shift + 1];
        num[shift] = int(1);
        let den = vars.iter().map(|&j| t[j]).collect();
        RationalSeries::new(num, den).expect("positive factors")
    });
    Ok(sum_over_common_denominator(terms))
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator_string();
        if self.denominator.is_empty() {
            return f.write_str(&num);
        }
        let wrapped = if self.numerator.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        write!(f, "{wrapped} / ")?;
        for &t in &self.denominator {
            if t == 1 {
                write!(f, "(1-z)")?;
            } else {
                write!(f, "(1-z^{t})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
