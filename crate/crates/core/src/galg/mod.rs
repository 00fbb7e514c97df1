//! Positively weighted graded quotients `S = k[y_1..y_e] / K`.
//!
//! Every weighted degree `d` gets a [`Piece`]: the monomials of degree `d`,
//! the row space of `K_d` in echelon form, the standard (non-pivot)
//! monomials that form a basis of `S_d`, and the normal form of every
//! monomial in that basis. Elements of `S_d` are sparse vectors over the
//! standard monomials. Pieces are computed on demand and cached; the cache
//! is write-once, so concurrent readers see identical values.

mod ideal;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{axpy, Echelon, SparseVec};
use crate::monom::Monomial;
use crate::poly::Polynomial;

pub use ideal::{
    colength, lech_additivity, AdditivityReport, ExpansionVerdict, FreenessVerdict,
    HomogeneousIdeal, ModuleLengths,
};

/// A weighted-homogeneous element of `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomElem<E> {
    pub degree: u32,
    pub coords: SparseVec<E>,
}

impl<E> HomElem<E> {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// `ord(f)`: the largest `t` with `f ∈ n^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrdValue {
    Finite(u32),
    /// Membership in `n^t` was only established up to the cutoff.
    AtLeast(u32),
    Infinite,
}

impl std::fmt::Display for OrdValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrdValue::Finite(t) => write!(f, "{t}"),
            OrdValue::AtLeast(t) => write!(f, ">={t}"),
            OrdValue::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug)]
pub struct Piece<F: Field> {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Column indices of the standard monomials, ascending.
    pub standard: Vec<usize>,
    nf: Vec<SparseVec<F::Elem>>,
    pub relation_rank: usize,
}

impl<F: Field> Piece<F> {
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn column_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Normal form of the monomial in column `col`.
    pub fn nf_column(&self, col: usize) -> &SparseVec<F::Elem> {
        &self.nf[col]
    }

    pub fn standard_monomial(&self, k: usize) -> &Monomial {
        &self.monomials[self.standard[k]]
    }
}

/// The filtration `(n^t)_d`: normal forms of monomials inserted by
/// descending total degree, each row tagged with that degree.
#[derive(Debug)]
pub struct OrderPiece<F: Field> {
    pub echelon: Echelon<F>,
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn cached<K, V>(cache: &Cache<K, V>, key: K, make: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq + Clone,
{
    if let Some(v) = cache.read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let value = Arc::new(make());
    let mut guard = cache.write().expect("cache lock");
    guard.entry(key).or_insert(value).clone()
}

type Terms<F> = Vec<(Monomial, <F as Field>::Elem)>;

pub struct GradedAlgebra<F: Field> {
    field: F,
    names: Vec<String>,
    weights: Vec<u32>,
    relations: Vec<Polynomial>,
    relation_terms: Vec<(u32, Terms<F>)>,
    max_degree: u32,
    pieces: Cache<u32, Piece<F>>,
    order_pieces: Cache<u32, OrderPiece<F>>,
    var_maps: Cache<(usize, u32), Vec<SparseVec<F::Elem>>>,
}

impl<F: Field> std::fmt::Debug for GradedAlgebra<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("field", &self.field.name())
            .field("names", &self.names)
            .field("weights", &self.weights)
            .field("relations", &self.relation_strings())
            .finish()
    }
}

/// All monomials of weighted degree `d`.
pub fn monomials_of_weighted_degree(weights: &[u32], d: u32) -> Vec<Monomial> {
    fn go(weights: &[u32], pos: usize, rem: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == weights.len() {
            if rem == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let w = weights[pos];
        let mut e = 0;
        while e * w <= rem {
            exps[pos] = e;
            go(weights, pos + 1, rem - e * w, exps, out);
            e += 1;
        }
        exps[pos] = 0;
    }
    let mut out = Vec::new();
    let mut exps = vec![0; weights.len()];
    go(weights, 0, d, &mut exps, &mut out);
    out
}

impl<F: Field> GradedAlgebra<F> {
    /// `k[names] / (relations)` with the given positive weights.
    pub fn new(
        field: F,
        names: Vec<String>,
        weights: Vec<u32>,
        relations: Vec<Polynomial>,
        max_degree: u32,
    ) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                found: weights.len(),
            });
        }
        if names.is_empty() {
            return Err(Error::Input("at least one variable is required".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Input("weights must be positive".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("variable `{n}` declared twice")));
            }
        }
        let mut relation_terms = Vec::new();
        for rel in &relations {
            if rel.num_vars() != names.len() {
                return Err(Error::LengthMismatch {
                    expected: names.len(),
                    found: rel.num_vars(),
                });
            }
            let degree = match rel.homogeneous_degree(&weights) {
                Ok(Some(d)) => d,
                Ok(None) => continue,
                Err((a, b)) => {
                    return Err(Error::Inhomogeneous {
                        relation: rel.format_with(&names),
                        first_degree: a.weighted_degree(&weights),
                        second_degree: b.weighted_degree(&weights),
                        first: a.format_with(&names),
                        second: b.format_with(&names),
                    })
                }
            };
            let mut terms = Vec::new();
            for (m, c) in rel.terms() {
                let e = field.from_rational(c)?;
                if !field.is_zero(&e) {
                    terms.push((m.clone(), e));
                }
            }
            if !terms.is_empty() {
                relation_terms.push((degree, terms));
            }
        }
        Ok(GradedAlgebra {
            field,
            names,
            weights,
            relations,
            relation_terms,
            max_degree,
            pieces: RwLock::new(HashMap::new()),
            order_pieces: RwLock::new(HashMap::new()),
            var_maps: RwLock::new(HashMap::new()),
        })
    }

    /// Parses the relations from text over the given names.
    pub fn from_strings(
        field: F,
        names: &[impl AsRef<str>],
        weights: &[u32],
        relations: &[impl AsRef<str>],
        max_degree: u32,
    ) -> Result<Self> {
        let rels = relations
            .iter()
            .map(|r| Polynomial::parse(r.as_ref(), names))
            .collect::<Result<Vec<_>>>()?;
        GradedAlgebra::new(
            field,
            names.iter().map(|s| s.as_ref().to_string()).collect(),
            weights.to_vec(),
            rels,
            max_degree,
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn max_weight(&self) -> u32 {
        *self.weights.iter().max().expect("nonempty")
    }

    pub fn min_weight(&self) -> u32 {
        *self.weights.iter().min().expect("nonempty")
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relation_terms.iter().map(|(d, _)| *d).max().unwrap_or(0)
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.format_with(&self.names)).collect()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(text, &self.names)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        m.format_with(&self.names)
    }

    pub fn ensure_degree(&self, d: u32) -> Result<()> {
        if d > self.max_degree {
            return Err(Error::Precondition(format!(
                "weighted degree {d} exceeds max_degree {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    pub fn piece(&self, d: u32) -> Arc<Piece<F>> {
        cached(&self.pieces, d, || self.build_piece(d))
    }

    fn build_piece(&self, d: u32) -> Piece<F> {
        let f = &self.field;
        let mut monomials = monomials_of_weighted_degree(&self.weights, d);
        monomials.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut kernel = Echelon::new(f.clone());
        for (rd, terms) in &self.relation_terms {
            if *rd > d {
                continue;
            }
            for m in monomials_of_weighted_degree(&self.weights, d - rd) {
                let mut row: Vec<(usize, F::Elem)> = terms
                    .iter()
                    .map(|(t, c)| (index[&m.mul(t)], c.clone()))
                    .collect();
                row.sort_by_key(|(i, _)| *i);
                kernel.insert(row);
            }
        }
        let standard: Vec<usize> = (0..monomials.len())
            .filter(|&c| !kernel.is_pivot(c))
            .collect();
        let mut std_pos = vec![usize::MAX; monomials.len()];
        for (k, &c) in standard.iter().enumerate() {
            std_pos[c] = k;
        }
        let nf = (0..monomials.len())
            .map(|c| {
                if std_pos[c] != usize::MAX {
                    vec![(std_pos[c], f.one())]
                } else {
                    kernel
                        .reduce(&vec![(c, f.one())])
                        .into_iter()
                        .map(|(col, v)| (std_pos[col], v))
                        .collect()
                }
            })
            .collect();
        Piece {
            degree: d,
            monomials,
            index,
            standard,
            nf,
            relation_rank: kernel.rank(),
        }
    }

    pub fn dim(&self, d: u32) -> usize {
        self.piece(d).dim()
    }

    pub fn one(&self) -> HomElem<F::Elem> {
        self.nf_monomial(&Monomial::one(self.num_vars()))
    }

    pub fn nf_monomial(&self, m: &Monomial) -> HomElem<F::Elem> {
        let d = m.weighted_degree(&self.weights);
        let piece = self.piece(d);
        let col = piece.column_of(m).expect("monomial has the piece's degree");
        HomElem {
            degree: d,
            coords: piece.nf_column(col).clone(),
        }
    }

    /// Normal forms of the weighted-homogeneous components, ascending degree.
    pub fn nf_components(&self, p: &Polynomial) -> Result<Vec<HomElem<F::Elem>>> {
        let f = &self.field;
        let mut out = Vec::new();
        for (d, comp) in p.homogeneous_components(&self.weights) {
            let mut acc: SparseVec<F::Elem> = Vec::new();
            for (m, c) in comp.terms() {
                let c = f.from_rational(c)?;
                let nf = self.nf_monomial(m);
                acc = axpy(f, &acc, &c, &nf.coords);
            }
            out.push(HomElem { degree: d, coords: acc });
        }
        Ok(out)
    }

    /// Normal form of a weighted-homogeneous polynomial.
    pub fn nf_homogeneous(&self, p: &Polynomial) -> Result<HomElem<F::Elem>> {
        let d = match p.homogeneous_degree(&self.weights) {
            Ok(Some(d)) => d,
            Ok(None) => 0,
            Err((a, b)) => {
                return Err(Error::Inhomogeneous {
                    relation: p.format_with(&self.names),
                    first_degree: a.weighted_degree(&self.weights),
                    second_degree: b.weighted_degree(&self.weights),
                    first: a.format_with(&self.names),
                    second: b.format_with(&self.names),
                })
            }
        };
        let comps = self.nf_components(p)?;
        Ok(comps.into_iter().next().unwrap_or(HomElem {
            degree: d,
            coords: Vec::new(),
        }))
    }

    /// Images of the standard basis of `S_d` under multiplication by `y_k`.
    pub fn var_map(&self, k: usize, d: u32) -> Arc<Vec<SparseVec<F::Elem>>> {
        cached(&self.var_maps, (k, d), || {
            let src = self.piece(d);
            let dst = self.piece(d + self.weights[k]);
            (0..src.dim())
                .map(|s| {
                    let m = src.standard_monomial(s).mul_var(k);
                    dst.nf_column(dst.column_of(&m).expect("degree matches")).clone()
                })
                .collect()
        })
    }

    /// `Σ v_i · images[i]`.
    pub fn apply(&self, images: &[SparseVec<F::Elem>], v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc = Vec::new();
        for (i, c) in v {
            acc = axpy(f, &acc, c, &images[*i]);
        }
        acc
    }

    pub fn mul_var(&self, k: usize, a: &HomElem<F::Elem>) -> HomElem<F::Elem> {
        let map = self.var_map(k, a.degree);
        HomElem {
            degree: a.degree + self.weights[k],
            coords: self.apply(&map, &a.coords),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, a: &HomElem<F::Elem>) -> HomElem<F::Elem> {
        let mut cur = a.clone();
        for (k, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                cur = self.mul_var(k, &cur);
            }
        }
        cur
    }

    pub fn mul(&self, a: &HomElem<F::Elem>, b: &HomElem<F::Elem>) -> HomElem<F::Elem> {
        let f = &self.field;
        let pa = self.piece(a.degree);
        let mut acc = Vec::new();
        for (i, c) in &a.coords {
            let prod = self.mul_monomial(pa.standard_monomial(*i), b);
            acc = axpy(f, &acc, c, &prod.coords);
        }
        HomElem {
            degree: a.degree + b.degree,
            coords: acc,
        }
    }

    pub fn pow(&self, a: &HomElem<F::Elem>, n: u32) -> HomElem<F::Elem> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn order_piece(&self, d: u32) -> Arc<OrderPiece<F>> {
        cached(&self.order_pieces, d, || {
            let piece = self.piece(d);
            let mut echelon = Echelon::new(self.field.clone());
            // Columns are already sorted by descending total degree.
            for (col, m) in piece.monomials.iter().enumerate() {
                if echelon.rank() == piece.dim() {
                    break;
                }
                echelon.insert_tagged(piece.nf_column(col).clone(), m.degree());
            }
            OrderPiece { echelon }
        })
    }

    /// `ord` of a homogeneous element; exact because every piece is finite.
    pub fn ord(&self, a: &HomElem<F::Elem>) -> OrdValue {
        if a.is_zero() {
            return OrdValue::Infinite;
        }
        let op = self.order_piece(a.degree);
        let red = op.echelon.reduce_tracking(&a.coords);
        debug_assert!(red.remainder.is_empty());
        OrdValue::Finite(red.min_tag.expect("nonzero element uses some row"))
    }

    /// `ord` capped at `cutoff`.
    pub fn ord_with_cutoff(&self, a: &HomElem<F::Elem>, cutoff: u32) -> OrdValue {
        match self.ord(a) {
            OrdValue::Finite(t) if t >= cutoff => OrdValue::AtLeast(cutoff),
            v => v,
        }
    }

    /// `ord` of an arbitrary polynomial: the minimum over its components.
    pub fn ord_polynomial(&self, p: &Polynomial, cutoff: u32) -> Result<OrdValue> {
        let mut best = OrdValue::Infinite;
        for comp in self.nf_components(p)? {
            best = best.min(self.ord_with_cutoff(&comp, cutoff));
        }
        Ok(best)
    }

    /// `dim_k (n^t)_d`.
    pub fn power_of_max_dim(&self, t: u32, d: u32) -> usize {
        self.order_piece(d).echelon.count_tag_at_least(t)
    }

    /// `l(S / n^t)`.
    pub fn colength_max_power(&self, t: u32) -> Result<usize> {
        if t == 0 {
            return Ok(0);
        }
        // A monomial of total degree < t has weighted degree <= (t-1)·max weight.
        let top = (t - 1) * self.max_weight();
        self.ensure_degree(top)?;
        Ok((0..=top)
            .map(|d| self.dim(d) - self.power_of_max_dim(t, d))
            .sum())
    }
}
