//! Sparse row echelon forms over a [`Field`].
//!
//! Rows are kept semi-reduced: each row has a unique pivot (its smallest
//! column) normalized to one, and no row has a nonzero entry in a column to
//! the left of its pivot. Reducing a vector left to right against such rows
//! still yields the fully reduced remainder, which has no entry in any pivot
//! column.

use std::collections::BTreeMap;

use crate::field::Field;

/// Sorted `(column, nonzero value)` pairs.
pub type SparseVec<E> = Vec<(usize, E)>;

pub fn sparse_from_map<F: Field>(f: &F, map: BTreeMap<usize, F::Elem>) -> SparseVec<F::Elem> {
    map.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
}

/// `a + c * b`.
pub fn axpy<F: Field>(
    f: &F,
    a: &SparseVec<F::Elem>,
    c: &F::Elem,
    b: &SparseVec<F::Elem>,
) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    if f.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, f.mul(c, x))).collect()
}

#[derive(Clone, Debug)]
struct Row<E> {
    entries: SparseVec<E>,
    tag: u32,
}

#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    rows: BTreeMap<usize, Row<F::Elem>>,
}

/// Result of reducing a vector: the remainder and the smallest tag among
/// the rows that were used (`None` if no row was needed).
#[derive(Clone, Debug)]
pub struct Reduction<E> {
    pub remainder: SparseVec<E>,
    pub min_tag: Option<u32>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Basis rows in ascending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F::Elem>> + '_ {
        self.rows.values().map(|r| &r.entries)
    }

    pub fn rows_with_tag_at_least(&self, t: u32) -> impl Iterator<Item = &SparseVec<F::Elem>> + '_ {
        self.rows.values().filter(move |r| r.tag >= t).map(|r| &r.entries)
    }

    pub fn count_tag_at_least(&self, t: u32) -> usize {
        self.rows.values().filter(|r| r.tag >= t).count()
    }

    pub fn reduce_tracking(&self, v: &SparseVec<F::Elem>) -> Reduction<F::Elem> {
        let f = &self.field;
        let mut work: BTreeMap<usize, F::Elem> = v.iter().cloned().collect();
        let mut min_tag: Option<u32> = None;
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            cursor = k + 1;
            let Some(row) = self.rows.get(&k) else { continue };
            min_tag = Some(min_tag.map_or(row.tag, |m| m.min(row.tag)));
            for (col, x) in &row.entries {
                let cur = work.remove(col).unwrap_or_else(|| f.zero());
                let val = f.sub(&cur, &f.mul(&c, x));
                if !f.is_zero(&val) {
                    work.insert(*col, val);
                }
            }
        }
        Reduction {
            remainder: work.into_iter().collect(),
            min_tag,
        }
    }

    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.reduce_tracking(v).remainder
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        self.insert_tagged(v, 0)
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert_tagged(&mut self, v: SparseVec<F::Elem>, tag: u32) -> bool {
        let r = self.reduce(&v);
        if r.is_empty() {
            return false;
        }
        let f = &self.field;
        let pivot = r[0].0;
        let inv = f.inv(&r[0].1);
        let entries = scale(f, &inv, &r);
        self.rows.insert(pivot, Row { entries, tag });
        true
    }

    /// Fully reduced rows in ascending pivot order.
    pub fn into_rref(self) -> Vec<SparseVec<F::Elem>> {
        let f = self.field.clone();
        let mut done: Echelon<F> = Echelon::new(f);
        // Reduce from the rightmost pivot leftwards so each row only meets
        // rows that are already fully reduced.
        let rows: Vec<(usize, Row<F::Elem>)> = self.rows.into_iter().rev().collect();
        for (pivot, row) in rows {
            let mut entries = row.entries.clone();
            let head = entries.remove(0);
            let tail = done.reduce(&entries);
            let mut full = vec![head];
            full.extend(tail);
            done.rows.insert(pivot, Row { entries: full, tag: row.tag });
        }
        done.rows.into_values().map(|r| r.entries).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_and_remainders_over_q() {
        let mut e = Echelon::new(Rationals);
        assert!(e.insert(vec![(0, q(1)), (1, q(2))]));
        assert!(e.insert(vec![(0, q(2)), (1, q(4)), (2, q(1))]));
        assert!(!e.insert(vec![(0, q(3)), (1, q(6)), (2, q(5))]));
        assert_eq!(e.rank(), 2);
        let r = e.reduce(&vec![(1, q(1)), (3, q(1))]);
        assert_eq!(r, vec![(1, q(1)), (3, q(1))]);
        let rref = e.into_rref();
        assert_eq!(rref.len(), 2);
        assert_eq!(rref[0], vec![(0, q(1)), (1, q(2))]);
    }

    #[test]
    fn tags_track_the_filtration() {
        let f = PrimeField::new(7).unwrap();
        let mut e = Echelon::new(f);
        e.insert_tagged(vec![(0, 1), (1, 1)], 3);
        e.insert_tagged(vec![(1, 1)], 2);
        assert_eq!(e.count_tag_at_least(3), 1);
        let red = e.reduce_tracking(&vec![(0, 2), (1, 2)]);
        assert!(red.remainder.is_empty());
        assert_eq!(red.min_tag, Some(3));
        let red = e.reduce_tracking(&vec![(0, 1)]);
        assert_eq!(red.min_tag, Some(2));
    }

    #[test]
    fn rref_is_fully_reduced() {
        let mut e = Echelon::new(Rationals);
        e.insert(vec![(0, q(1)), (1, q(1)), (2, q(1))]);
        e.insert(vec![(1, q(1)), (2, q(2))]);
        let rows = e.into_rref();
        assert_eq!(rows[0], vec![(0, q(1)), (2, q(-1))]);
        assert_eq!(rows[1], vec![(1, q(1)), (2, q(2))]);
    }
}
