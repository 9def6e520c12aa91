//! Exact sparse linear algebra over the rationals.
//!
//! Elimination works on primitive integer rows: a row is scaled to clear
//! denominators and divided by the gcd of its entries, and the update
//! `r <- p_c * r - r_c * p` keeps every entry integral. Pivots are chosen as the
//! first nonzero column in basis order. Results are returned in reduced row
//! echelon form with unit pivots, which is unique for a given span.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{bracket, ChevalleyTable, LieElement, Q};
use crate::error::{Error, Result};

/// A sparse integer row, sorted by column with no zero entries.
type IntRow = Vec<(usize, BigInt)>;

/// Converts a rational row into a primitive integer row with positive leading entry.
fn to_primitive(v: &LieElement) -> IntRow {
    let mut l = BigInt::one();
    for c in v.terms().values() {
        l = l.lcm(c.denom());
    }
    let row: IntRow = v.terms().iter().map(|(i, c)| (*i, c.numer() * (&l / c.denom()))).collect();
    normalize(row)
}

/// Divides by the content and makes the leading entry positive.
fn normalize(mut row: IntRow) -> IntRow {
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, c) in &row {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c = &*c / &g;
        }
    }
    row
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// Returns `a * x - b * y` made primitive.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize(out)
}

/// Incremental fraction-free Gauss-Jordan elimination.
#[derive(Clone, Debug, Default)]
struct Echelon {
    /// Rows keyed by pivot column; each row vanishes on every other pivot column.
    rows: BTreeMap<usize, IntRow>,
}

impl Echelon {
    /// Reduces `v` against the current rows.
    fn reduce(&self, mut v: IntRow) -> IntRow {
        for (col, p) in &self.rows {
            if v.is_empty() {
                break;
            }
            if let Some(c) = entry(&v, *col) {
                let c = c.clone();
                let pc = entry(p, *col).expect("pivot").clone();
                v = combine(&pc, &v, &c, p);
            }
        }
        v
    }

    /// Inserts `v`; returns `true` if the span grew.
    fn insert(&mut self, v: IntRow) -> bool {
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let col = v[0].0;
        let vc = v[0].1.clone();
        for row in self.rows.values_mut() {
            if let Some(c) = entry(row, col) {
                let c = c.clone();
                *row = combine(&vc, row, &c, &v);
            }
        }
        self.rows.insert(col, v);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows scaled to unit pivots.
    fn rational_rows(&self) -> Vec<LieElement> {
        self.rows
            .iter()
            .map(|(col, row)| {
                let p = entry(row, *col).expect("pivot").clone();
                LieElement::from_terms(row.iter().map(|(i, c)| (*i, Q::new(c.clone(), p.clone()))))
            })
            .collect()
    }
}

/// A sparse exact-rational matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, Q>>,
}

impl LinearOperator {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        LinearOperator { nrows, ncols, rows: vec![BTreeMap::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zero(n, n);
        for i in 0..n {
            op.add_entry(i, i, Q::one());
        }
        op
    }

    /// The operator whose `j`-th column is `cols[j]`.
    pub fn from_columns(nrows: usize, cols: &[LieElement]) -> Self {
        let mut op = Self::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.terms() {
                op.add_entry(*i, j, v.clone());
            }
        }
        op
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BTreeMap<usize, Q>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.rows[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `v` to entry `(r, c)`, dropping zeros.
    pub fn add_entry(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.nrows && c < self.ncols, "entry ({r},{c}) out of range");
        if v.is_zero() {
            return;
        }
        let e = self.rows[r].entry(c).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (r, row) in self.rows.iter().enumerate() {
            let mut s = Q::zero();
            for (c, v) in row {
                if let Some(xc) = x.terms().get(c) {
                    s += v * xc;
                }
            }
            out.add_term(r, s);
        }
        out
    }

    /// `self - ev * I`.
    pub fn shifted(&self, ev: &Q) -> LinearOperator {
        assert_eq!(self.nrows, self.ncols, "shift needs a square operator");
        let mut op = self.clone();
        for i in 0..self.nrows {
            op.add_entry(i, i, -ev.clone());
        }
        op
    }

    /// Composition `self * other`.
    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        assert_eq!(self.ncols, other.nrows);
        let mut op = LinearOperator::zero(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    op.add_entry(r, *c, a * b);
                }
            }
        }
        op
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::default();
        for row in &self.rows {
            if !row.is_empty() {
                e.insert(to_primitive(&LieElement::from_terms(row.iter().map(|(c, v)| (*c, v.clone())))));
            }
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }
}

/// A subspace held as the reduced row echelon basis of its span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<LieElement>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    /// The canonical basis of the span of `vectors`.
    pub fn span<'a, I: IntoIterator<Item = &'a LieElement>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::default();
        for v in vectors {
            if e.rank() == ambient {
                break;
            }
            if !v.is_zero() {
                debug_assert!(v.terms().keys().all(|&i| i < ambient));
                e.insert(to_primitive(v));
            }
        }
        Subspace { ambient, basis: e.rational_rows() }
    }

    pub fn whole(ambient: usize) -> Self {
        let b: Vec<LieElement> = (0..ambient).map(LieElement::basis).collect();
        Subspace { ambient, basis: b }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LieElement] {
        &self.basis
    }

    /// Pivot column of each basis vector.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| *b.terms().keys().next().expect("nonzero")).collect()
    }

    /// Residual of `x` after reduction against the basis; zero iff `x` lies in the span.
    pub fn residual(&self, x: &LieElement) -> LieElement {
        let mut r = x.clone();
        for b in &self.basis {
            let p = *b.terms().keys().next().expect("nonzero");
            let c = r.coeff(p);
            if !c.is_zero() {
                r.axpy(&-c, b);
            }
        }
        r
    }

    pub fn contains(&self, x: &LieElement) -> bool {
        self.residual(x).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Coordinates of `x` in the canonical basis, if `x` is in the span.
    pub fn coordinates(&self, x: &LieElement) -> Option<Vec<Q>> {
        if !self.contains(x) {
            return None;
        }
        Some(self.pivots().iter().map(|p| x.coeff(*p)).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(other.basis.iter()))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let cols: Vec<LieElement> = self.basis.iter().cloned().chain(other.basis.iter().map(|b| -b.clone())).collect();
        let op = LinearOperator::from_columns(self.ambient, &cols);
        let k = kernel(&op);
        let n = self.dim();
        let vecs: Vec<LieElement> = k
            .basis()
            .iter()
            .map(|c| LieElement::combination((0..n).map(|i| (c.coeff(i), &self.basis[i]))))
            .collect();
        Subspace::span(self.ambient, vecs.iter())
    }

    /// Vectors of this subspace killed by `op`.
    pub fn kernel_of(&self, op: &LinearOperator) -> Subspace {
        self.common_kernel(std::slice::from_ref(op))
    }

    /// Vectors of this subspace killed by every operator in `ops`.
    pub fn common_kernel(&self, ops: &[LinearOperator]) -> Subspace {
        if self.dim() == 0 {
            return self.clone();
        }
        let n = self.dim();
        let mut stacked = LinearOperator::zero(ops.iter().map(|o| o.nrows()).sum(), n);
        let mut offset = 0;
        for op in ops {
            for (j, b) in self.basis.iter().enumerate() {
                for (i, v) in op.apply(b).terms() {
                    stacked.add_entry(offset + i, j, v.clone());
                }
            }
            offset += op.nrows();
        }
        let k = kernel(&stacked);
        let vecs: Vec<LieElement> = k
            .basis()
            .iter()
            .map(|c| LieElement::combination((0..n).map(|i| (c.coeff(i), &self.basis[i]))))
            .collect();
        Subspace::span(self.ambient, vecs.iter())
    }

    /// The image of this subspace under `op`.
    pub fn image(&self, op: &LinearOperator) -> Subspace {
        let imgs: Vec<LieElement> = self.basis.iter().map(|b| op.apply(b)).collect();
        Subspace::span(op.nrows(), imgs.iter())
    }
}

/// Canonical basis of the null space of `op`.
pub fn kernel(op: &LinearOperator) -> Subspace {
    let e = op.echelon();
    let rows = e.rational_rows();
    let pivots: Vec<usize> = e.rows.keys().copied().collect();
    let mut vecs = Vec::new();
    for free in (0..op.ncols()).filter(|c| !e.rows.contains_key(c)) {
        let mut v = LieElement::basis(free);
        for (row, p) in rows.iter().zip(&pivots) {
            let c = row.coeff(free);
            if !c.is_zero() {
                v.add_term(*p, -c);
            }
        }
        vecs.push(v);
    }
    Subspace::span(op.ncols(), vecs.iter())
}

/// Eigenspace of `op` for the eigenvalue `ev`.
pub fn eigenspace(op: &LinearOperator, ev: &Q) -> Subspace {
    kernel(&op.shifted(ev))
}

/// A solution of `op x = target` with free variables set to zero, or `None`.
pub fn solve(op: &LinearOperator, target: &LieElement) -> Option<LieElement> {
    let n = op.ncols();
    let mut aug = LinearOperator::zero(op.nrows(), n + 1);
    for (r, row) in op.rows().iter().enumerate() {
        for (c, v) in row {
            aug.add_entry(r, *c, v.clone());
        }
    }
    for (r, v) in target.terms() {
        if *r >= op.nrows() {
            return None;
        }
        aug.add_entry(*r, n, v.clone());
    }
    let e = aug.echelon();
    if e.rows.contains_key(&n) {
        return None;
    }
    let mut x = LieElement::zero();
    for row in e.rational_rows() {
        let p = *row.terms().keys().next().expect("nonzero");
        x.add_term(p, row.coeff(n));
    }
    Some(x)
}

/// Canonical basis of `span{[x, y] : x in basis(a), y in basis(b)}`.
pub fn span_brackets(t: &ChevalleyTable, a: &Subspace, b: &Subspace) -> Subspace {
    let mut e = Echelon::default();
    for x in a.basis() {
        for y in b.basis() {
            let z = bracket(t, x, y);
            if !z.is_zero() {
                e.insert(to_primitive(&z));
            }
        }
    }
    Subspace { ambient: a.ambient(), basis: e.rational_rows() }
}

/// Checks that `op` is square of size `n`.
pub fn require_square(op: &LinearOperator, n: usize) -> Result<()> {
    if op.nrows() != n || op.ncols() != n {
        return Err(Error::Dimension(format!("expected {n}x{n}, got {}x{}", op.nrows(), op.ncols())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qq};

    fn v(entries: &[(usize, i64)]) -> LieElement {
        LieElement::from_terms(entries.iter().map(|(i, c)| (*i, q(*c))))
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = kernel(&LinearOperator::zero(6, 6));
        assert_eq!(k, Subspace::whole(6));
    }

    #[test]
    fn kernel_small_example() {
        let mut op = LinearOperator::zero(2, 3);
        op.add_entry(0, 0, q(1));
        op.add_entry(0, 1, q(2));
        op.add_entry(1, 1, q(1));
        op.add_entry(1, 2, q(-1));
        let k = kernel(&op);
        assert_eq!(k.dim(), 1);
        let x = &k.basis()[0];
        assert!(op.apply(x).is_zero());
        assert_eq!(*x, v(&[(0, -2), (1, 1), (2, 1)]).scale(&qq(-1, 2)));
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Subspace::span(4, [v(&[(0, 2), (1, 4)]), v(&[(1, 1), (3, 3)])].iter());
        let b = Subspace::span(4, [v(&[(0, 1), (1, 1), (3, -3)]), v(&[(0, -1), (3, 6)])].iter());
        assert_eq!(a.dim(), 2);
        assert_eq!(a, b);
        assert_eq!(Subspace::span(4, a.basis().iter()), a);
    }

    #[test]
    fn solve_examples() {
        let id = LinearOperator::identity(5);
        let t = v(&[(1, 3), (4, -2)]);
        assert_eq!(solve(&id, &t), Some(t.clone()));
        let mut op = LinearOperator::zero(3, 3);
        op.add_entry(0, 1, q(1));
        assert_eq!(solve(&op, &v(&[(2, 1)])), None);
        assert_eq!(solve(&op, &v(&[(0, 5)])), Some(v(&[(1, 5)])));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, [v(&[(0, 1)]), v(&[(1, 1)])].iter());
        let b = Subspace::span(3, [v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, 1)])].iter());
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[(0, 1), (1, 1)])));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn rank_nullity() {
        let mut op = LinearOperator::zero(4, 4);
        op.add_entry(0, 0, q(1));
        op.add_entry(1, 0, q(2));
        op.add_entry(2, 3, qq(1, 3));
        assert_eq!(op.rank() + kernel(&op).dim(), 4);
    }

    #[test]
    fn eigenspace_of_diagonal() {
        let mut op = LinearOperator::zero(3, 3);
        op.add_entry(0, 0, q(2));
        op.add_entry(1, 1, q(2));
        op.add_entry(2, 2, q(-1));
        assert_eq!(eigenspace(&op, &q(2)).dim(), 2);
        assert_eq!(eigenspace(&op, &q(-1)).dim(), 1);
        assert_eq!(eigenspace(&op, &q(0)).dim(), 0);
    }

    #[test]
    fn common_kernel_restricted() {
        let s = Subspace::span(3, [v(&[(0, 1)]), v(&[(1, 1)])].iter());
        let mut op = LinearOperator::zero(3, 3);
        op.add_entry(2, 0, q(1));
        op.add_entry(2, 1, q(1));
        let k = s.kernel_of(&op);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&v(&[(0, 1), (1, -1)])));
    }
}
