//! Monomials in `k[T_1, ..., T_r]`, monomial ideals and standard sets.
//!
//! A standard set is never materialized: it is stored as the monomial ideal
//! it is the complement of, and only per-degree slices are enumerated.
//!
//! The canonical monomial order is pure lexicographic with
//! `1 < T_1 < T_2 < ... < T_r`, i.e. the exponent of `T_r` is compared first.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `(a_1, ..., a_r)` of `T_1^{a_1} ... T_r^{a_r}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial {
            exps: vec![0; num_vars],
        }
    }

    pub fn var(num_vars: usize, j: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[j] = 1;
        Monomial { exps }
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.exps[j]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.exps.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_var(&self, j: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[j] += 1;
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Generator of the colon ideal `(self) : (other)`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        }
    }

    /// Multiplies the `j`-th exponent by `a[j]`.
    pub fn scale(&self, a: &[u32]) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(a).map(|(e, s)| e * s).collect(),
        }
    }

    /// Total degree `sum_j t_j * deg_{T_j}(self)`.
    pub fn dot(&self, t: &[u32]) -> u64 {
        self.exps
            .iter()
            .zip(t)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    /// Renders with the given variable names, `1` for the empty monomial.
    pub fn format_with(&self, names: &[impl AsRef<str>]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                let name = names[j].as_ref();
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parses `T1^2*T2`, `1` or a bracketed exponent vector `[2,1,0]`.
    pub fn parse(text: &str, num_vars: usize) -> Result<Monomial> {
        let s = text.trim();
        if s.starts_with('[') {
            let inner = s
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::parse(1, 1, format!("unbalanced brackets in `{s}`")))?;
            let exps: Vec<u32> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::parse(1, 1, format!("bad exponent `{}`", p.trim())))
                    })
                    .collect::<Result<_>>()?
            };
            if exps.len() != num_vars {
                return Err(Error::LengthMismatch {
                    expected: num_vars,
                    found: exps.len(),
                });
            }
            return Ok(Monomial { exps });
        }
        let mut exps = vec![0u32; num_vars];
        if s == "1" {
            return Ok(Monomial { exps });
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, power) = match factor.split_once('^') {
                Some((b, p)) => {
                    let p = p
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| Error::parse(1, 1, format!("bad exponent in `{factor}`")))?;
                    (b.trim(), p)
                }
                None => (factor, 1),
            };
            if base == "1" {
                continue;
            }
            let idx = base
                .strip_prefix('T')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::parse(1, 1, format!("expected T<index>, found `{base}`")))?;
            if idx > num_vars {
                return Err(Error::Input(format!(
                    "variable T{idx} out of range for {num_vars} variables"
                )));
            }
            exps[idx - 1] += power;
        }
        Ok(Monomial { exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps
            .iter()
            .rev()
            .cmp(other.exps.iter().rev())
            .then_with(|| self.exps.len().cmp(&other.exps.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.exps.len()).map(|j| format!("T{j}")).collect();
        f.write_str(&self.format_with(&names))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All monomials of total degree `d` in `num_vars` variables, descending.
pub fn monomials_of_degree(num_vars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; num_vars];
    fill_degree(&mut exps, 0, d, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn fill_degree(exps: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if exps.is_empty() {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial::new(exps.clone()));
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e;
        fill_degree(exps, pos + 1, remaining - e, out);
    }
    exps[pos] = 0;
}

/// A monomial ideal stored by its minimal generators, kept in descending
/// canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    num_vars: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Inclusion-minimal generating set of the ideal generated by `gens`.
    pub fn minimalize(gens: impl IntoIterator<Item = Monomial>, num_vars: usize) -> Result<Self> {
        let mut unique = BTreeSet::new();
        for g in gens {
            if g.num_vars() != num_vars {
                return Err(Error::LengthMismatch {
                    expected: num_vars,
                    found: g.num_vars(),
                });
            }
            unique.insert(g);
        }
        // Ascending order: a proper divisor is always smaller, so it is kept
        // before any of its multiples is examined.
        let mut minimal: Vec<Monomial> = Vec::new();
        for g in unique {
            if !minimal.iter().any(|h| h.divides(&g)) {
                minimal.push(g);
            }
        }
        minimal.reverse();
        Ok(MonomialIdeal {
            num_vars,
            generators: minimal,
        })
    }

    pub fn zero(num_vars: usize) -> Self {
        MonomialIdeal {
            num_vars,
            generators: Vec::new(),
        }
    }

    pub fn whole(num_vars: usize) -> Self {
        MonomialIdeal {
            num_vars,
            generators: vec![Monomial::one(num_vars)],
        }
    }

    /// `(T_1^{a_1}, ..., T_r^{a_r})`.
    pub fn box_ideal(a: &[u32]) -> Self {
        let r = a.len();
        let gens = a.iter().enumerate().map(|(j, &aj)| {
            let mut e = vec![0; r];
            e[j] = aj;
            Monomial::new(e)
        });
        MonomialIdeal::minimalize(gens, r).expect("lengths agree")
    }

    /// Parses a comma-separated list of monomials; an empty string is the zero ideal.
    pub fn parse(text: &str, num_vars: usize) -> Result<Self> {
        let mut gens = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes: Vec<char> = text.chars().collect();
        let mut pieces = Vec::new();
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                '[' => depth += 1,
                ']' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    pieces.push(bytes[start..i].iter().collect::<String>());
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(bytes[start..].iter().collect::<String>());
        for p in pieces {
            let p = p.trim();
            if p.is_empty() {
                continue;
            }
            gens.push(Monomial::parse(p, num_vars)?);
        }
        MonomialIdeal::minimalize(gens, num_vars)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.generators.iter().any(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    /// `I : T_j`.
    pub fn colon_var(&self, j: usize) -> MonomialIdeal {
        let v = Monomial::var(self.num_vars, j);
        MonomialIdeal::minimalize(self.generators.iter().map(|g| g.colon(&v)), self.num_vars)
            .expect("lengths agree")
    }

    /// Image under `T_j -> T_j^{a_j}`.
    pub fn scale(&self, a: &[u32]) -> MonomialIdeal {
        MonomialIdeal::minimalize(self.generators.iter().map(|g| g.scale(a)), self.num_vars)
            .expect("scaling preserves length")
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        MonomialIdeal::minimalize(
            self.generators.iter().chain(&other.generators).cloned(),
            self.num_vars,
        )
        .expect("lengths agree")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A divisor-closed set of monomials, stored as the complement of `I_Γ`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardSet {
    complement_of: MonomialIdeal,
}

impl StandardSet {
    pub fn complement_of(ideal: MonomialIdeal) -> Self {
        StandardSet {
            complement_of: ideal,
        }
    }

    pub fn everything(num_vars: usize) -> Self {
        StandardSet::complement_of(MonomialIdeal::zero(num_vars))
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.complement_of
    }

    pub fn num_vars(&self) -> usize {
        self.complement_of.num_vars()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        !self.complement_of.contains(m)
    }

    pub fn is_empty(&self) -> bool {
        self.complement_of.is_whole()
    }

    /// `Γ_d` in descending canonical order.
    pub fn members_of_degree(&self, d: u32) -> Vec<Monomial> {
        monomials_of_degree(self.num_vars(), d)
            .into_iter()
            .filter(|m| self.contains(m))
            .collect()
    }

    /// The scaled standard set `aΓ`, whose ideal is generated by the
    /// exponent-scaled generators of `I_Γ`.
    pub fn scale(&self, a: &[u32]) -> Result<StandardSet> {
        if a.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                found: a.len(),
            });
        }
        if a.contains(&0) {
            return Err(Error::Input("scaling exponents must be positive".into()));
        }
        Ok(StandardSet::complement_of(self.complement_of.scale(a)))
    }
}

impl fmt::Display for StandardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mon \\ {}", self.complement_of)
    }
}

impl fmt::Debug for StandardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Γ_d` of `set`, descending canonical order.
pub fn gamma_members(set: &StandardSet, d: u32) -> Vec<Monomial> {
    set.members_of_degree(d)
}

/// Prime filtration of `P / (T_1^{a_1}, ..., T_r^{a_r})` by monomial ideals.
///
/// `chain[0] = P`, `chain[l] = J` and `chain[i]` is `J` plus the ideal
/// generated by the `l - i` largest box monomials. The witnesses list the box
/// monomials in descending pure lex order, so `witness[i]` spans the
/// one-dimensional factor `chain[l-1-i] / chain[l-i]`: it is read from the
/// `J` end of the chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxFiltration {
    pub a: Vec<u32>,
    pub chain: Vec<MonomialIdeal>,
    pub witness: Vec<Monomial>,
}

impl BoxFiltration {
    pub fn length(&self) -> usize {
        self.witness.len()
    }

    /// The monomial spanning `chain[i] / chain[i+1]`.
    pub fn factor_generator(&self, i: usize) -> &Monomial {
        &self.witness[self.length() - 1 - i]
    }
}

/// Box monomials `{u : deg_{T_j} u < a_j}` in ascending canonical order.
pub fn box_monomials(a: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Monomial::new(Vec::new())];
    for &aj in a {
        let mut next = Vec::with_capacity(out.len() * aj as usize);
        for m in &out {
            for e in 0..aj {
                let mut exps = m.exponents().to_vec();
                exps.push(e);
                next.push(Monomial::new(exps));
            }
        }
        out = next;
    }
    out.sort();
    out
}

pub fn box_prime_filtration(a: &[u32]) -> Result<BoxFiltration> {
    if a.is_empty() {
        return Err(Error::Input("box exponents must be non-empty".into()));
    }
    if a.contains(&0) {
        return Err(Error::Input("box exponents must be positive".into()));
    }
    let r = a.len();
    let boxed = box_monomials(a);
    let l = boxed.len();
    let j = MonomialIdeal::box_ideal(a);
    let chain = (0..=l)
        .map(|i| {
            let top = boxed[i..].iter().cloned();
            MonomialIdeal::minimalize(j.generators().iter().cloned().chain(top), r)
                .expect("lengths agree")
        })
        .collect();
    let mut witness = boxed;
    witness.reverse();
    Ok(BoxFiltration {
        a: a.to_vec(),
        chain,
        witness,
    })
}

/// Parses `2,3`, `(2,3)` or `[2,3]`.
pub fn parse_exponent_list(text: &str) -> Result<Vec<u32>> {
    let t = text
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(1, 1, format!("bad integer `{}`", p.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn minimalize_drops_multiples() {
        let i = MonomialIdeal::minimalize([m(&[2, 0]), m(&[2, 1])], 2).unwrap();
        assert_eq!(i.generators(), &[m(&[2, 0])]);
    }

    #[test]
    fn minimalize_empty_is_zero_ideal() {
        let i = MonomialIdeal::minimalize([], 3).unwrap();
        assert!(i.is_zero());
        assert!(!i.contains(&m(&[0, 0, 0])));
        assert!(!i.contains(&m(&[4, 4, 4])));
    }

    #[test]
    fn minimalize_keeps_antichain() {
        let gens = [m(&[1, 1, 0]), m(&[0, 1, 1]), m(&[1, 0, 1])];
        let i = MonomialIdeal::minimalize(gens.clone(), 3).unwrap();
        assert_eq!(i.generators().len(), 3);
        for g in gens {
            assert!(i.generators().contains(&g));
        }
    }

    #[test]
    fn minimalize_rejects_length_mismatch() {
        let err = MonomialIdeal::minimalize([m(&[1, 0]), m(&[1, 0, 0])], 2).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn gamma_members_degree_five() {
        let g = StandardSet::complement_of(MonomialIdeal::parse("T1^2", 2).unwrap());
        let members = g.members_of_degree(5);
        // descending pure lex: T2^5 > T1*T2^4
        assert_eq!(members, vec![m(&[0, 5]), m(&[1, 4])]);
        assert_eq!(g.members_of_degree(0), vec![m(&[0, 0])]);
        let all = StandardSet::everything(3);
        assert_eq!(all.members_of_degree(2).len(), 6);
    }

    #[test]
    fn scaling_examples() {
        let g = StandardSet::complement_of(MonomialIdeal::parse("T1*T2", 2).unwrap());
        let s = g.scale(&[2, 3]).unwrap();
        assert_eq!(s.ideal().generators(), &[m(&[2, 3])]);

        let all = StandardSet::everything(1);
        assert!(all.scale(&[3]).unwrap().ideal().is_zero());

        let one = StandardSet::complement_of(MonomialIdeal::parse("T1", 1).unwrap());
        let s = one.scale(&[3]).unwrap();
        assert_eq!(s.ideal().generators(), &[m(&[3])]);
        assert!(s.contains(&m(&[2])));
        assert!(!s.contains(&m(&[3])));
        assert!(one.scale(&[0]).is_err());
        assert!(one.scale(&[1, 2]).is_err());
    }

    #[test]
    fn filtration_two_by_two() {
        let f = box_prime_filtration(&[2, 2]).unwrap();
        assert_eq!(f.length(), 4);
        assert_eq!(
            f.witness,
            vec![m(&[1, 1]), m(&[0, 1]), m(&[1, 0]), m(&[0, 0])]
        );
        assert!(f.chain[0].is_whole());
        assert_eq!(f.chain[1], MonomialIdeal::parse("T1, T2", 2).unwrap());
        assert_eq!(f.factor_generator(0), &m(&[0, 0]));
        assert_eq!(f.chain[4], MonomialIdeal::parse("T1^2, T2^2", 2).unwrap());
    }

    #[test]
    fn filtration_trivial_box() {
        let f = box_prime_filtration(&[1, 1, 1]).unwrap();
        assert_eq!(f.witness, vec![m(&[0, 0, 0])]);
        assert_eq!(f.chain.len(), 2);
        assert!(f.chain[0].is_whole());
        assert_eq!(f.chain[1], MonomialIdeal::parse("T1,T2,T3", 3).unwrap());
    }

    #[test]
    fn filtration_two_by_three_ends() {
        let f = box_prime_filtration(&[2, 3]).unwrap();
        assert_eq!(f.length(), 6);
        assert_eq!(f.witness[0], m(&[1, 2]));
        assert_eq!(f.witness[5], m(&[0, 0]));
        assert!(box_prime_filtration(&[2, 0]).is_err());
    }

    #[test]
    fn parse_and_print() {
        let u = Monomial::parse("T1^2*T2", 3).unwrap();
        assert_eq!(u, m(&[2, 1, 0]));
        assert_eq!(u.to_string(), "T1^2*T2");
        assert_eq!(Monomial::parse("[2,1,0]", 3).unwrap(), u);
        assert_eq!(Monomial::parse("1", 2).unwrap().to_string(), "1");
        assert!(Monomial::parse("T4", 3).is_err());
        assert!(Monomial::parse("[1,2]", 3).is_err());
        assert!(Monomial::parse("X1", 3).is_err());
        let i = MonomialIdeal::parse("[2,0], T1*T2", 2).unwrap();
        assert_eq!(i.generators().len(), 2);
        assert_eq!(parse_exponent_list("[2, 3]").unwrap(), vec![2, 3]);
    }

    #[test]
    fn canonical_order_is_pure_lex_last_variable_first() {
        assert!(m(&[0, 1]) > m(&[5, 0]));
        assert!(m(&[1, 1]) > m(&[0, 1]));
        assert!(m(&[1, 0]) > m(&[0, 0]));
    }
}
