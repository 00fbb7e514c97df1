//! Homogeneous ideals `I ⊂ S` with `S/I` Artinian: powers, the modules
//! `I^i/I^{i+1}`, freeness and expansion tests, annihilators, colengths.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use super::{cached, GradedAlgebra, HomElem};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseVec};
use crate::monom::{monomials_of_degree, Monomial, StandardSet};
use crate::poly::Polynomial;

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

pub struct HomogeneousIdeal<'a, F: Field> {
    alg: &'a GradedAlgebra<F>,
    generators: Vec<HomElem<F::Elem>>,
    generator_strings: Vec<String>,
    /// Largest weighted degree with `(S/I)_d != 0`.
    top: u32,
    length: usize,
    powers: Cache<(u32, u32), Echelon<F>>,
    max_times_powers: Cache<(u32, u32), Echelon<F>>,
    gen_maps: Cache<(usize, u32), Vec<SparseVec<F::Elem>>>,
    products: Cache<Monomial, HomElem<F::Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleLengths {
    pub i: u32,
    /// `dim_k M/nM`.
    pub mu: usize,
    pub length_m: usize,
    pub length_a: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessVerdict {
    pub i: u32,
    pub mu: usize,
    pub length_m: usize,
    pub length_a: usize,
    pub free: bool,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionVerdict {
    pub i: u32,
    pub gamma_count: usize,
    pub mu: usize,
    pub length_m: usize,
    pub length_a: usize,
    /// The classes of `u(x)`, `u ∈ Γ_i`, span `M/nM`.
    pub spans: bool,
    pub pass: bool,
}

/// Degree of the first generator, if all generators are units or zero.
fn unit_generator<F: Field>(gens: &[HomElem<F::Elem>]) -> bool {
    gens.iter().any(|g| g.degree == 0 && !g.is_zero())
}

impl<'a, F: Field> HomogeneousIdeal<'a, F> {
    /// The ideal generated by weighted-homogeneous polynomials, which must
    /// be a proper ideal with Artinian quotient.
    pub fn new(alg: &'a GradedAlgebra<F>, gens: &[Polynomial]) -> Result<Self> {
        let mut generators = Vec::new();
        for g in gens {
            generators.push(alg.nf_homogeneous(g)?);
        }
        if unit_generator::<F>(&generators) {
            return Err(Error::Input("ideal contains a unit; S/I = 0".into()));
        }
        let mut ideal = HomogeneousIdeal {
            alg,
            generators,
            generator_strings: gens.iter().map(|g| g.format_with(alg.names())).collect(),
            top: 0,
            length: 0,
            powers: RwLock::new(HashMap::new()),
            max_times_powers: RwLock::new(HashMap::new()),
            gen_maps: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        };
        let (top, length) = ideal.artinian_profile()?;
        ideal.top = top;
        ideal.length = length;
        Ok(ideal)
    }

    pub fn algebra(&self) -> &GradedAlgebra<F> {
        self.alg
    }

    pub fn generators(&self) -> &[HomElem<F::Elem>] {
        &self.generators
    }

    pub fn generator_strings(&self) -> &[String] {
        &self.generator_strings
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// `l(S/I)`.
    pub fn colength(&self) -> usize {
        self.length
    }

    pub fn top_degree(&self) -> u32 {
        self.top
    }

    /// Number of consecutive vanishing degrees that certifies `S/I` vanishes
    /// from there on.
    pub fn vanishing_window(&self) -> u32 {
        let gen_max = self.generators.iter().map(|g| g.degree).max().unwrap_or(0);
        (1 + self.alg.max_relation_degree() + gen_max).max(self.alg.max_weight())
    }

    fn artinian_profile(&self) -> Result<(u32, usize)> {
        let window = self.vanishing_window();
        let mut run = 0;
        let mut top = 0;
        let mut length = 0;
        let mut d = 0;
        while run < window {
            if d > self.alg.max_degree() {
                return Err(Error::NotArtinian {
                    searched: self.alg.max_degree(),
                });
            }
            let q = self.alg.dim(d) - self.power(1, d).rank();
            if q == 0 {
                run += 1;
            } else {
                run = 0;
                top = d;
                length += q;
            }
            d += 1;
        }
        Ok((top, length))
    }

    /// Images of the standard basis of `S_d` under multiplication by `g_j`.
    fn gen_map(&self, j: usize, d: u32) -> Arc<Vec<SparseVec<F::Elem>>> {
        cached(&self.gen_maps, (j, d), || {
            let src = self.alg.piece(d);
            let g = &self.generators[j];
            (0..src.dim())
                .map(|s| {
                    let m = src.standard_monomial(s);
                    self.alg.mul_monomial(m, g).coords
                })
                .collect()
        })
    }

    pub fn mul_generator(&self, j: usize, a: &HomElem<F::Elem>) -> HomElem<F::Elem> {
        let map = self.gen_map(j, a.degree);
        HomElem {
            degree: a.degree + self.generators[j].degree,
            coords: self.alg.apply(&map, &a.coords),
        }
    }

    /// `u(x) = Π x_j^{u_j}`.
    pub fn product(&self, u: &Monomial) -> Arc<HomElem<F::Elem>> {
        if let Some(v) = self.products.read().expect("cache lock").get(u) {
            return v.clone();
        }
        let value = match u.exponents().iter().position(|&e| e > 0) {
            None => self.alg.one(),
            Some(j) => {
                let mut e = u.exponents().to_vec();
                e[j] -= 1;
                let prev = self.product(&Monomial::new(e));
                self.mul_generator(j, &prev)
            }
        };
        let value = Arc::new(value);
        self.products
            .write()
            .expect("cache lock")
            .entry(u.clone())
            .or_insert(value)
            .clone()
    }

    /// `(I^i)_d` as an echelon over the standard coordinates of `S_d`.
    pub fn power(&self, i: u32, d: u32) -> Arc<Echelon<F>> {
        if let Some(v) = self.powers.read().expect("cache lock").get(&(i, d)) {
            return v.clone();
        }
        let f = self.alg.field();
        let mut e = Echelon::new(f.clone());
        if i == 0 {
            for s in 0..self.alg.dim(d) {
                e.insert(vec![(s, f.one())]);
            }
        } else {
            for (j, g) in self.generators.iter().enumerate() {
                if g.degree > d || g.is_zero() {
                    continue;
                }
                let src_deg = d - g.degree;
                let prev = self.power(i - 1, src_deg);
                let map = self.gen_map(j, src_deg);
                for row in prev.rows() {
                    if e.rank() == self.alg.dim(d) {
                        break;
                    }
                    e.insert(self.alg.apply(&map, row));
                }
            }
        }
        let value = Arc::new(e);
        self.powers
            .write()
            .expect("cache lock")
            .entry((i, d))
            .or_insert(value)
            .clone()
    }

    /// `(n · I^i)_d`.
    pub fn max_times_power(&self, i: u32, d: u32) -> Arc<Echelon<F>> {
        cached(&self.max_times_powers, (i, d), || {
            let mut e = Echelon::new(self.alg.field().clone());
            for (k, &w) in self.alg.weights().iter().enumerate() {
                if w > d {
                    continue;
                }
                let prev = self.power(i, d - w);
                let map = self.alg.var_map(k, d - w);
                for row in prev.rows() {
                    e.insert(self.alg.apply(&map, row));
                }
            }
            e
        })
    }

    /// Degrees where `I^i/I^{i+1}` can be nonzero.
    pub fn module_degrees(&self, i: u32) -> std::ops::RangeInclusive<u32> {
        let degs = self.generator_degrees();
        let lo = i * degs.iter().copied().min().unwrap_or(0);
        let hi = i * degs.iter().copied().max().unwrap_or(0) + self.top;
        lo..=hi
    }

    pub fn module_lengths(&self, i: u32) -> Result<ModuleLengths> {
        let range = self.module_degrees(i);
        self.alg.ensure_degree(*range.end())?;
        let mut mu = 0;
        let mut length_m = 0;
        for d in range {
            let r = self.power(i, d).rank();
            length_m += r - self.power(i + 1, d).rank();
            mu += r - self.max_times_power(i, d).rank();
        }
        Ok(ModuleLengths {
            i,
            mu,
            length_m,
            length_a: self.length,
        })
    }

    pub fn freeness(&self, i: u32) -> Result<FreenessVerdict> {
        let m = self.module_lengths(i)?;
        let free = m.length_m == m.mu * m.length_a;
        Ok(FreenessVerdict {
            i,
            mu: m.mu,
            length_m: m.length_m,
            length_a: m.length_a,
            free,
            rank: free.then_some(m.mu),
        })
    }

    pub fn freeness_report(&self, i_max: u32) -> Result<Vec<FreenessVerdict>> {
        (1..=i_max).map(|i| self.freeness(i)).collect()
    }

    /// Rejects generating sets that are not minimal: every generator must be
    /// nonzero, lie in `n`, and the generators must be independent in `I/nI`.
    pub fn validate_minimal(&self) -> Result<()> {
        let mut by_degree: HashMap<u32, Vec<usize>> = HashMap::new();
        for (j, g) in self.generators.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::NotMinimal(format!(
                    "generator `{}` is zero in S",
                    self.generator_strings[j]
                )));
            }
            by_degree.entry(g.degree).or_default().push(j);
        }
        let mut degrees: Vec<_> = by_degree.into_iter().collect();
        degrees.sort();
        for (d, js) in degrees {
            let mut e = (*self.max_times_power(1, d)).clone();
            for j in js {
                if !e.insert(self.generators[j].coords.clone()) {
                    return Err(Error::NotMinimal(format!(
                        "generator `{}` lies in the span of the others modulo nI",
                        self.generator_strings[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Basis test for `{u(x) : u ∈ Γ_i}` in `I^i/I^{i+1}`.
    pub fn expansion_check(&self, gamma: &StandardSet, i: u32) -> Result<ExpansionVerdict> {
        if gamma.num_vars() != self.num_generators() {
            return Err(Error::LengthMismatch {
                expected: self.num_generators(),
                found: gamma.num_vars(),
            });
        }
        let m = self.module_lengths(i)?;
        let members = gamma.members_of_degree(i);
        let mut by_degree: HashMap<u32, Vec<Arc<HomElem<F::Elem>>>> = HashMap::new();
        for u in &members {
            let p = self.product(u);
            by_degree.entry(p.degree).or_default().push(p);
        }
        let mut spans = true;
        for d in self.module_degrees(i) {
            let target = self.power(i, d).rank();
            let mut e = (*self.max_times_power(i, d)).clone();
            if let Some(ps) = by_degree.get(&d) {
                for p in ps {
                    e.insert(p.coords.clone());
                }
            }
            if e.rank() != target {
                spans = false;
                break;
            }
        }
        let count = members.len();
        Ok(ExpansionVerdict {
            i,
            gamma_count: count,
            mu: m.mu,
            length_m: m.length_m,
            length_a: m.length_a,
            spans,
            pass: spans && count == m.mu && m.length_m == count * m.length_a,
        })
    }

    pub fn expansion_report(&self, gamma: &StandardSet, i_max: u32) -> Result<Vec<ExpansionVerdict>> {
        (1..=i_max).map(|i| self.expansion_check(gamma, i)).collect()
    }

    /// Standard coordinates of `S_d` that form a basis of `(S/I)_d`.
    pub fn quotient_coordinates(&self, d: u32) -> Vec<usize> {
        let e = self.power(1, d);
        (0..self.alg.dim(d)).filter(|&c| !e.is_pivot(c)).collect()
    }

    /// `dim_k Ann_{S/I}(I^i/I^{i+1})`.
    pub fn annihilator_dim(&self, i: u32) -> Result<usize> {
        let f = self.alg.field();
        let alphas = monomials_of_degree(self.num_generators(), i);
        let products: Vec<Arc<HomElem<F::Elem>>> = alphas.iter().map(|a| self.product(a)).collect();
        let mut kernel = 0;
        for e in 0..=self.top {
            let coords = self.quotient_coordinates(e);
            if coords.is_empty() {
                continue;
            }
            let piece = self.alg.piece(e);
            let mut offsets = Vec::with_capacity(products.len());
            let mut total = 0;
            for p in &products {
                offsets.push(total);
                let d = e + p.degree;
                self.alg.ensure_degree(d)?;
                total += self.alg.dim(d);
            }
            let mut ech = Echelon::new(f.clone());
            for &c in &coords {
                let m = piece.standard_monomial(c).clone();
                let mut row: SparseVec<F::Elem> = Vec::new();
                for (p, off) in products.iter().zip(&offsets) {
                    let img = self.alg.mul_monomial(&m, p);
                    let red = self.power(i + 1, img.degree).reduce(&img.coords);
                    row.extend(red.into_iter().map(|(k, v)| (k + off, v)));
                }
                ech.insert(row);
            }
            kernel += coords.len() - ech.rank();
        }
        Ok(kernel)
    }
}

/// `l(S/(gens))`, accepting units and non-minimal generating sets.
pub fn colength<F: Field>(alg: &GradedAlgebra<F>, gens: &[Polynomial]) -> Result<usize> {
    let mut elems = Vec::new();
    for g in gens {
        elems.push(alg.nf_homogeneous(g)?);
    }
    if unit_generator::<F>(&elems) {
        return Ok(0);
    }
    Ok(HomogeneousIdeal::new(alg, gens)?.colength())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub length_whole: usize,
    pub length_first: usize,
    pub length_second: usize,
    /// `seq[index] = y · y'` holds in `S`.
    pub factorization_holds: bool,
    pub additive: bool,
}

/// Compares `l(S/(seq))` with `l(S/(y, rest)) + l(S/(y', rest))` where
/// `seq[index] = y·y'`.
pub fn lech_additivity<F: Field>(
    alg: &GradedAlgebra<F>,
    seq: &[Polynomial],
    index: usize,
    y: &Polynomial,
    y2: &Polynomial,
) -> Result<AdditivityReport> {
    if index >= seq.len() {
        return Err(Error::Input(format!(
            "split index {index} out of range for {} elements",
            seq.len()
        )));
    }
    let lhs = alg.nf_components(&seq[index])?;
    let rhs = alg.nf_components(&y.mul(y2))?;
    let nonzero = |v: Vec<HomElem<F::Elem>>| -> Vec<HomElem<F::Elem>> {
        v.into_iter().filter(|e| !e.is_zero()).collect()
    };
    let factorization_holds = nonzero(lhs) == nonzero(rhs);
    let replaced = |z: &Polynomial| -> Vec<Polynomial> {
        let mut s = seq.to_vec();
        s[index] = z.clone();
        s
    };
    let length_whole = colength(alg, seq)?;
    let length_first = colength(alg, &replaced(y))?;
    let length_second = colength(alg, &replaced(y2))?;
    Ok(AdditivityReport {
        length_whole,
        length_first,
        length_second,
        factorization_holds,
        additive: length_whole == length_first + length_second,
    })
}
