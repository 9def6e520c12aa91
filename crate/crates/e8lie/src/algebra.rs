//! Chevalley basis of the 248-dimensional Lie algebra of type E8 over the rationals.
//!
//! Basis layout: indices `0..120` are `e_alpha` for the positive roots in
//! [`RootSystem::positive`] order, `120..240` the matching `f_alpha`, and
//! `240..248` the coroots `h_1..h_8`. The root vector attached to a root
//! `gamma` is `x_gamma = e_gamma` for `gamma > 0` and `f_{-gamma}` otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::LinearOperator;
use crate::roots::{build_root_system, Root, RootSystem, RANK};

/// Exact rationals.
pub type Q = BigRational;

/// Dimension of E8.
pub const DIM: usize = 248;
/// Number of positive roots.
pub const NPOS: usize = 120;
/// Number of root vectors.
pub const NROOTS: usize = 240;

/// Builds a rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`.
pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A decoded basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisIndex {
    PositiveRootVector(Root),
    NegativeRootVector(Root),
    Coroot(usize),
}

/// A sparse exact-rational vector over the Chevalley basis.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LieElement {
    terms: BTreeMap<usize, Q>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector with flat index `i`.
    pub fn basis(i: usize) -> Self {
        let mut x = Self::zero();
        x.add_term(i, Q::one());
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Q)>>(terms: I) -> Self {
        let mut x = Self::zero();
        for (i, c) in terms {
            x.add_term(i, c);
        }
        x
    }

    pub fn terms(&self) -> &BTreeMap<usize, Q> {
        &self.terms
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.terms.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient of basis vector `i`, dropping zeros.
    pub fn add_term(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(i) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Q, other: &LieElement) {
        if c.is_zero() {
            return;
        }
        for (i, d) in &other.terms {
            self.add_term(*i, c * d);
        }
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        if c.is_zero() {
            return Self::zero();
        }
        LieElement { terms: self.terms.iter().map(|(i, d)| (*i, d * c)).collect() }
    }

    /// Linear combination `sum c_k x_k`.
    pub fn combination<'a, I: IntoIterator<Item = (Q, &'a LieElement)>>(items: I) -> LieElement {
        let mut out = LieElement::zero();
        for (c, x) in items {
            out.axpy(&c, x);
        }
        out
    }

    /// Dense coefficient vector of length `DIM`.
    pub fn to_dense(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); DIM];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }
}

impl Add for LieElement {
    type Output = LieElement;
    fn add(mut self, rhs: LieElement) -> LieElement {
        self.axpy(&Q::one(), &rhs);
        self
    }
}

impl Sub for LieElement {
    type Output = LieElement;
    fn sub(mut self, rhs: LieElement) -> LieElement {
        self.axpy(&-Q::one(), &rhs);
        self
    }
}

impl Neg for LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&-Q::one())
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement{:?}", self.terms)
    }
}

/// Name of the basis vector with flat index `i`, e.g. `e[12232111]`, `f[00011111]`, `h3`.
pub fn basis_name(rs: &RootSystem, i: usize) -> String {
    if i < NPOS {
        format!("e[{}]", rs.positive[i])
    } else if i < NROOTS {
        format!("f[{}]", rs.positive[i - NPOS])
    } else {
        format!("h{}", i - NROOTS + 1)
    }
}

/// Renders an element as a signed sum of named basis vectors.
pub fn format_element(rs: &RootSystem, x: &LieElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (i, c)) in x.terms().iter().enumerate() {
        let name = basis_name(rs, *i);
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            s.push_str(&format!("{a}*"));
        }
        s.push_str(&name);
    }
    s
}

/// One transcribed structure constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub id: String,
    pub citation: String,
    pub alpha: String,
    pub beta: String,
    pub value: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Anchor {
    pub fn roots(&self) -> Result<(Root, Root)> {
        let a = self.alpha.parse::<Root>().map_err(Error::Fixture)?;
        let b = self.beta.parse::<Root>().map_err(Error::Fixture)?;
        Ok((a, b))
    }
}

/// The versioned anchor fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorSet {
    pub format: String,
    pub version: u32,
    pub anchors: Vec<Anchor>,
}

/// Contents of the shipped fixture.
pub const DEFAULT_ANCHORS_JSON: &str = include_str!("../data/anchors.json");

impl AnchorSet {
    /// Parses and validates a fixture.
    pub fn from_json(src: &str) -> Result<AnchorSet> {
        let set: AnchorSet = serde_json::from_str(src).map_err(|e| Error::Fixture(e.to_string()))?;
        if set.format != "e8-structure-constant-anchors" {
            return Err(Error::Fixture(format!("unknown format {:?}", set.format)));
        }
        if set.version != 1 {
            return Err(Error::Fixture(format!("unsupported version {}", set.version)));
        }
        let rs = build_root_system();
        for a in &set.anchors {
            let (x, y) = a.roots()?;
            if !rs.contains(&x) || !rs.contains(&y) {
                return Err(Error::Fixture(format!("{}: label is not a root", a.id)));
            }
            if !rs.contains(&x.plus(&y)) {
                return Err(Error::Fixture(format!("{}: {} + {} is not a root", a.id, x, y)));
            }
            if a.value != 1 && a.value != -1 {
                return Err(Error::Fixture(format!("{}: value {} is not +-1", a.id, a.value)));
            }
        }
        Ok(set)
    }

    pub fn from_path(path: &std::path::Path) -> Result<AnchorSet> {
        let src = std::fs::read_to_string(path)?;
        AnchorSet::from_json(&src)
    }

    /// The shipped fixture.
    pub fn shipped() -> AnchorSet {
        AnchorSet::from_json(DEFAULT_ANCHORS_JSON).expect("shipped anchor fixture is valid")
    }
}

/// Outcome of evaluating one anchor against a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorCheck {
    pub anchor: Anchor,
    pub computed: i32,
}

impl AnchorCheck {
    pub fn pass(&self) -> bool {
        self.computed == self.anchor.value
    }
}

/// The full bracket table of E8 in a fixed Chevalley basis.
#[derive(Clone)]
pub struct ChevalleyTable {
    pub rs: RootSystem,
    /// Root attached to each root-vector index `0..240`.
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
    /// `n[i * 240 + j]` is `N_{root(i), root(j)}`, zero when the sum is not a root.
    n: Vec<i8>,
    /// Root-vector index of `root(i) + root(j)`; `-1` if not a root, `-2` if zero.
    sum: Vec<i16>,
    /// `hpair[i][k] = <root(i), alpha_{k+1}^vee>`.
    hpair: Vec<[i32; RANK]>,
    /// Extraspecial pair (positive indices) of each positive root, `None` for simple roots.
    ext_pairs: Vec<Option<(usize, usize)>>,
    convention: String,
}

impl PartialEq for ChevalleyTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.convention == other.convention && self.rs == other.rs
    }
}

impl fmt::Debug for ChevalleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChevalleyTable({})", self.convention)
    }
}

/// Prefix of every convention id produced by this crate.
pub const CONVENTION_BASE: &str = "extraspecial-height-desclex";

/// Extraspecial pair of each positive root, as indices into `rs.positive`.
pub fn extraspecial_pairs(rs: &RootSystem) -> Vec<Option<(usize, usize)>> {
    rs.positive
        .iter()
        .map(|xi| {
            if xi.height() == 1 {
                return None;
            }
            rs.positive.iter().enumerate().find_map(|(ka, a)| {
                let b = xi.minus(a);
                if b.is_positive() {
                    rs.positive_index.get(&b).map(|&kb| (ka, kb))
                } else {
                    None
                }
            })
        })
        .collect()
}

impl ChevalleyTable {
    fn skeleton(rs: RootSystem) -> ChevalleyTable {
        let roots: Vec<Root> = rs.positive.iter().copied().chain(rs.positive.iter().map(Root::negate)).collect();
        let index: HashMap<Root, usize> = roots.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let mut sum = vec![-1i16; NROOTS * NROOTS];
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                let s = roots[i].plus(&roots[j]);
                sum[i * NROOTS + j] = if s.is_zero() {
                    -2
                } else {
                    index.get(&s).map(|&k| k as i16).unwrap_or(-1)
                };
            }
        }
        let hpair = roots.iter().map(|r| std::array::from_fn(|k| r.pairing_simple(k + 1))).collect();
        let ext_pairs = extraspecial_pairs(&rs);
        ChevalleyTable { rs, roots, index, n: vec![0; NROOTS * NROOTS], sum, hpair, ext_pairs, convention: String::new() }
    }

    /// Builds the table whose extraspecial pair of each non-simple positive root
    /// carries the given sign (indexed like `rs.positive`; entries for simple roots are ignored).
    pub fn from_extraspecial_signs(rs: RootSystem, signs: &[i8]) -> ChevalleyTable {
        assert_eq!(signs.len(), NPOS);
        let mut t = Self::skeleton(rs);
        let mut memo: HashMap<(usize, usize), i8> = HashMap::new();
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                if t.sum[i * NROOTS + j] >= 0 {
                    let v = t.n_rec(t.roots[i], t.roots[j], signs, &mut memo);
                    t.n[i * NROOTS + j] = v;
                }
            }
        }
        t.convention = t.derive_convention();
        t
    }

    /// Structure constant by the extraspecial recursion.
    fn n_rec(&self, a: Root, b: Root, signs: &[i8], memo: &mut HashMap<(usize, usize), i8>) -> i8 {
        let s = a.plus(&b);
        if s.is_zero() || !self.index.contains_key(&s) {
            return 0;
        }
        let pa = a.is_positive();
        let pb = b.is_positive();
        if pa && pb {
            let ka = self.rs.positive_index[&a];
            let kb = self.rs.positive_index[&b];
            if let Some(&v) = memo.get(&(ka, kb)) {
                return v;
            }
            let ks = self.rs.positive_index[&s];
            let (e1, e2) = self.ext_pairs[ks].expect("non-simple");
            let sg = signs[ks];
            let v = if (ka, kb) == (e1, e2) {
                sg
            } else if (kb, ka) == (e1, e2) {
                -sg
            } else {
                let r1 = self.rs.positive[e1];
                let r2 = self.rs.positive[e2];
                let t1 = self.n_rec(b, r1.negate(), signs, memo) * self.n_rec(a, r2.negate(), signs, memo);
                let t2 = self.n_rec(r1.negate(), a, signs, memo) * self.n_rec(b, r2.negate(), signs, memo);
                sg * (t1 + t2)
            };
            memo.insert((ka, kb), v);
            return v;
        }
        if !pa && !pb {
            return -self.n_rec(a.negate(), b.negate(), signs, memo);
        }
        // a + b + (-s) = 0 gives N_{a,b} = N_{b,-s} = N_{-s,a}.
        let ms = s.negate();
        if pa == s.is_positive() {
            self.n_rec(b, ms, signs, memo)
        } else {
            self.n_rec(ms, a, signs, memo)
        }
    }

    /// Builds a table from explicit constants on every root pair whose sum is a root.
    pub fn from_constants(rs: RootSystem, constants: &HashMap<(Root, Root), i8>, convention: &str) -> Result<ChevalleyTable> {
        let mut t = Self::skeleton(rs);
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                if t.sum[i * NROOTS + j] < 0 {
                    continue;
                }
                let (a, b) = (t.roots[i], t.roots[j]);
                match constants.get(&(a, b)) {
                    Some(&v) if v == 1 || v == -1 => t.n[i * NROOTS + j] = v,
                    Some(&v) => return Err(Error::Inconsistency(format!("N({a},{b}) = {v} is not +-1"))),
                    None => return Err(Error::Inconsistency(format!("missing N({a},{b})"))),
                }
            }
        }
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                if t.sum[i * NROOTS + j] < 0 {
                    continue;
                }
                let (a, b) = (t.roots[i], t.roots[j]);
                if t.n[i * NROOTS + j] != -t.n[j * NROOTS + i] {
                    return Err(Error::Inconsistency(format!("N({a},{b}) != -N({b},{a})")));
                }
                let (ni, nj) = (t.index[&a.negate()], t.index[&b.negate()]);
                if t.n[i * NROOTS + j] != -t.n[ni * NROOTS + nj] {
                    return Err(Error::Inconsistency(format!("N({a},{b}) != -N(-{a},-{b})")));
                }
            }
        }
        t.convention = convention.to_string();
        Ok(t)
    }

    /// Convention id determined by the extraspecial signs of this table.
    fn derive_convention(&self) -> String {
        let flipped: Vec<String> = self
            .extraspecial_signs()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .map(|(k, _)| self.rs.positive[k].to_string())
            .collect();
        if flipped.is_empty() {
            format!("{CONVENTION_BASE}:plus")
        } else {
            let crc = crc32fast::hash(flipped.join(",").as_bytes());
            format!("{CONVENTION_BASE}:flip{}-{crc:08x}", flipped.len())
        }
    }

    /// Sign of the extraspecial constant of each positive root (`0` for simple roots).
    pub fn extraspecial_signs(&self) -> Vec<i8> {
        self.ext_pairs
            .iter()
            .map(|p| match p {
                None => 0,
                Some((a, b)) => self.n[*a * NROOTS + *b],
            })
            .collect()
    }

    /// Extraspecial pair of each positive root.
    pub fn extraspecial(&self) -> &[Option<(usize, usize)>] {
        &self.ext_pairs
    }

    /// Positive roots whose extraspecial sign is `-1`.
    pub fn flipped_extraspecial(&self) -> Vec<Root> {
        self.extraspecial_signs()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .map(|(k, _)| self.rs.positive[k])
            .collect()
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    /// Root of root-vector index `i < 240`.
    pub fn root(&self, i: usize) -> Root {
        self.roots[i]
    }

    /// Flat basis index of `x_gamma`.
    pub fn root_index(&self, gamma: &Root) -> Option<usize> {
        self.index.get(gamma).copied()
    }

    pub fn decode(&self, i: usize) -> BasisIndex {
        if i < NPOS {
            BasisIndex::PositiveRootVector(self.roots[i])
        } else if i < NROOTS {
            BasisIndex::NegativeRootVector(self.roots[i - NPOS].negate())
        } else {
            BasisIndex::Coroot(i - NROOTS + 1)
        }
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    pub fn n(&self, a: &Root, b: &Root) -> i32 {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => i32::from(self.n[i * NROOTS + j]),
            _ => 0,
        }
    }

    /// Root vector `x_gamma`.
    pub fn x(&self, gamma: &Root) -> LieElement {
        LieElement::basis(self.root_index(gamma).unwrap_or_else(|| panic!("{gamma} is not a root")))
    }

    /// `e_alpha` for a positive root given by label, e.g. `e("12232111")`.
    pub fn e(&self, label: &str) -> LieElement {
        let r: Root = label.parse().expect("valid root label");
        assert!(r.is_positive());
        self.x(&r)
    }

    /// `f_alpha` for a positive root given by label.
    pub fn f(&self, label: &str) -> LieElement {
        let r: Root = label.parse().expect("valid root label");
        assert!(r.is_positive());
        self.x(&r.negate())
    }

    /// `e_i` for the simple root alpha_i.
    pub fn e_simple(&self, i: usize) -> LieElement {
        self.x(&Root::simple(i))
    }

    /// `f_i` for the simple root alpha_i.
    pub fn f_simple(&self, i: usize) -> LieElement {
        self.x(&Root::simple(i).negate())
    }

    /// Coroot `h_i`, `i` in 1..=8.
    pub fn h(&self, i: usize) -> LieElement {
        assert!((1..=RANK).contains(&i));
        LieElement::basis(NROOTS + i - 1)
    }

    /// Coroot `h_alpha` of any root, expressed over `h_1..h_8`.
    pub fn h_root(&self, gamma: &Root) -> LieElement {
        LieElement::from_terms((0..RANK).map(|k| (NROOTS + k, q(i64::from(gamma.0[k])))))
    }

    /// Calls `emit(k, c)` for every term `c * b_k` of `[b_i, b_j]`.
    #[inline]
    pub fn basis_bracket_with<F: FnMut(usize, i64)>(&self, i: usize, j: usize, mut emit: F) {
        match (i >= NROOTS, j >= NROOTS) {
            (true, true) => {}
            (true, false) => {
                let c = self.hpair[j][i - NROOTS];
                if c != 0 {
                    emit(j, i64::from(c));
                }
            }
            (false, true) => {
                let c = self.hpair[i][j - NROOTS];
                if c != 0 {
                    emit(i, -i64::from(c));
                }
            }
            (false, false) => {
                let s = self.sum[i * NROOTS + j];
                if s >= 0 {
                    emit(s as usize, i64::from(self.n[i * NROOTS + j]));
                } else if s == -2 {
                    let a = &self.roots[i];
                    for k in 0..RANK {
                        if a.0[k] != 0 {
                            emit(NROOTS + k, i64::from(a.0[k]));
                        }
                    }
                }
            }
        }
    }

    /// `[b_i, b_j]` as a list of integer terms.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(RANK);
        self.basis_bracket_with(i, j, |k, c| out.push((k, c)));
        out
    }

    /// The invariant form on basis vectors.
    #[inline]
    pub fn basis_form(&self, i: usize, j: usize) -> i64 {
        match (i >= NROOTS, j >= NROOTS) {
            (true, true) => i64::from(self.rs.cartan[i - NROOTS][j - NROOTS]),
            (false, false) => i64::from(self.sum[i * NROOTS + j] == -2),
            _ => 0,
        }
    }

    /// Basis index paired with `i` by the form (the opposite root vector), for root vectors.
    pub fn dual_root_index(&self, i: usize) -> usize {
        if i < NPOS {
            i + NPOS
        } else {
            i - NPOS
        }
    }

    /// Applies the gauge `x_gamma -> s_gamma x_gamma` with `s_gamma = s_{-gamma} = -1`
    /// exactly for the positive roots whose bit is set in `flips`.
    pub fn regauge(&self, flips: u128) -> ChevalleyTable {
        let mut t = self.clone();
        let sgn = |k: usize| -> i8 {
            let p = k % NPOS;
            if flips >> p & 1 == 1 {
                -1
            } else {
                1
            }
        };
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                let s = self.sum[i * NROOTS + j];
                if s >= 0 {
                    t.n[i * NROOTS + j] = self.n[i * NROOTS + j] * sgn(i) * sgn(j) * sgn(s as usize);
                }
            }
        }
        t.convention = t.derive_convention();
        t
    }

    /// Evaluates every anchor.
    pub fn check_anchors(&self, anchors: &AnchorSet) -> Result<Vec<AnchorCheck>> {
        anchors
            .anchors
            .iter()
            .map(|a| {
                let (x, y) = a.roots()?;
                Ok(AnchorCheck { anchor: a.clone(), computed: self.n(&x, &y) })
            })
            .collect()
    }

    /// Every constant on root pairs in canonical order, for serialisation and comparison.
    pub fn constants(&self) -> Vec<(Root, Root, i8)> {
        let mut out = Vec::new();
        for a in &self.rs.roots {
            for b in &self.rs.roots {
                let (i, j) = (self.index[a], self.index[b]);
                if self.sum[i * NROOTS + j] >= 0 {
                    out.push((*a, *b, self.n[i * NROOTS + j]));
                }
            }
        }
        out
    }
}

/// Base table: every extraspecial sign `+1` in the height / decreasing-lex order.
pub fn build_uncalibrated_table(rs: RootSystem) -> ChevalleyTable {
    ChevalleyTable::from_extraspecial_signs(rs, &[1; NPOS])
}

/// Builds the Chevalley table and calibrates it against the shipped anchors.
pub fn build_chevalley_table(rs: RootSystem) -> Result<ChevalleyTable> {
    build_chevalley_table_with(rs, &AnchorSet::shipped())
}

/// Builds the Chevalley table and calibrates it against `anchors`.
pub fn build_chevalley_table_with(rs: RootSystem, anchors: &AnchorSet) -> Result<ChevalleyTable> {
    calibrate(&build_uncalibrated_table(rs), anchors)
}

/// Re-signs `table` so that every anchor holds.
///
/// A gauge `x_gamma -> s_gamma x_gamma` multiplies `N_{a,b}` by `s_a s_b s_{a+b}`, so each
/// anchor is one linear equation over GF(2) in the 120 gauge bits. The system is solved by
/// elimination with free bits set to zero; an inconsistent system is reported.
pub fn calibrate(table: &ChevalleyTable, anchors: &AnchorSet) -> Result<ChevalleyTable> {
    let mut rows: Vec<(u128, bool, Vec<String>)> = Vec::new();
    for a in &anchors.anchors {
        let (x, y) = a.roots()?;
        let v = table.n(&x, &y);
        if v == 0 {
            return Err(Error::Fixture(format!("{}: {} + {} is not a root", a.id, x, y)));
        }
        let mut mask = 0u128;
        for r in [x, y, x.plus(&y)] {
            let p = table.rs.positive_position(&r).expect("root");
            mask ^= 1u128 << p;
        }
        rows.push((mask, v != a.value, vec![a.id.clone()]));
    }
    let mut pivots: Vec<(usize, u128, bool, Vec<String>)> = Vec::new();
    for (mut mask, mut rhs, mut ids) in rows {
        for (col, pm, pr, pids) in &pivots {
            if mask >> col & 1 == 1 {
                mask ^= pm;
                rhs ^= pr;
                ids.extend(pids.iter().cloned());
            }
        }
        if mask == 0 {
            if rhs {
                ids.sort();
                ids.dedup();
                return Err(Error::AnchorUnsatisfiable { conflicts: ids });
            }
            continue;
        }
        let col = mask.trailing_zeros() as usize;
        for (_, pm, pr, pids) in pivots.iter_mut() {
            if *pm >> col & 1 == 1 {
                *pm ^= mask;
                *pr ^= rhs;
                pids.extend(ids.iter().cloned());
            }
        }
        pivots.push((col, mask, rhs, ids));
    }
    let flips = pivots.iter().filter(|p| p.2).fold(0u128, |acc, p| acc | 1u128 << p.0);
    let t = table.regauge(flips);
    debug_assert!(t.check_anchors(anchors).map(|c| c.iter().all(AnchorCheck::pass)).unwrap_or(false));
    Ok(t)
}

/// The Lie bracket, extended bilinearly.
pub fn bracket(t: &ChevalleyTable, x: &LieElement, y: &LieElement) -> LieElement {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, a) in x.terms() {
        for (j, b) in y.terms() {
            t.basis_bracket_with(*i, *j, |k, c| {
                let term = a * b * Q::from_integer(BigInt::from(c));
                *acc.entry(k).or_insert_with(Q::zero) += term;
            });
        }
    }
    LieElement::from_terms(acc)
}

/// The invariant form with `(e_alpha, f_alpha) = 1`.
pub fn invariant_form(t: &ChevalleyTable, x: &LieElement, y: &LieElement) -> Q {
    let mut s = Q::zero();
    for (i, a) in x.terms() {
        if *i < NROOTS {
            if let Some(b) = y.terms().get(&t.dual_root_index(*i)) {
                s += a * b;
            }
        } else {
            for k in 0..RANK {
                let c = t.basis_form(*i, NROOTS + k);
                if c != 0 {
                    if let Some(b) = y.terms().get(&(NROOTS + k)) {
                        s += a * b * Q::from_integer(BigInt::from(c));
                    }
                }
            }
        }
    }
    s
}

/// The matrix of `ad x` on the full basis.
pub fn ad_operator(t: &ChevalleyTable, x: &LieElement) -> LinearOperator {
    let mut op = LinearOperator::zero(DIM, DIM);
    for j in 0..DIM {
        for (i, a) in x.terms() {
            t.basis_bracket_with(*i, j, |k, c| {
                op.add_entry(k, j, a * Q::from_integer(BigInt::from(c)));
            });
        }
    }
    op
}

/// Value `alpha(h)` of a root on a Cartan element.
pub fn root_value(t: &ChevalleyTable, gamma: &Root, h: &LieElement) -> Q {
    let idx = t.root_index(gamma).expect("root");
    let mut s = Q::zero();
    for (i, c) in h.terms() {
        assert!(*i >= NROOTS, "root_value needs a Cartan element");
        s += c * Q::from_integer(BigInt::from(t.hpair[idx][*i - NROOTS]));
    }
    s
}

/// Values `alpha_i(h)` for `i = 1..8`.
pub fn simple_root_values(t: &ChevalleyTable, h: &LieElement) -> Vec<Q> {
    (1..=RANK).map(|i| root_value(t, &Root::simple(i), h)).collect()
}

/// Table file header tag.
pub const TABLE_MAGIC: &str = "E8 v1";

/// Serialises the table in the line format `N c1..c8 d1..d8 value` with a CRC-32 trailer.
pub fn export_table(t: &ChevalleyTable) -> String {
    let mut body = format!("{TABLE_MAGIC} {}\n", t.convention);
    for (a, b, v) in t.constants() {
        body.push('N');
        for c in a.0.iter().chain(b.0.iter()) {
            body.push_str(&format!(" {c}"));
        }
        body.push_str(&format!(" {v}\n"));
    }
    let crc = crc32fast::hash(body.as_bytes());
    body.push_str(&format!("CRC {crc:08x}\n"));
    body
}

/// Parses a table file produced by [`export_table`] or any tool following the same format.
pub fn import_table(src: &str) -> Result<ChevalleyTable> {
    let rs = build_root_system();
    let perr = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = src.split_inclusive('\n').enumerate();
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    let convention = header
        .trim_end_matches('\n')
        .strip_prefix(TABLE_MAGIC)
        .and_then(|r| r.strip_prefix(' '))
        .filter(|r| !r.is_empty() && !r.contains(char::is_whitespace))
        .ok_or_else(|| perr(1, format!("header must be `{TABLE_MAGIC} <convention-id>`")))?
        .to_string();
    let mut hashed = header.len();
    let mut constants: HashMap<(Root, Root), i8> = HashMap::new();
    let mut crc_line: Option<(usize, u32)> = None;
    for (k, raw) in lines {
        let lineno = k + 1;
        if crc_line.is_some() {
            if raw.trim().is_empty() {
                continue;
            }
            return Err(perr(lineno, "content after CRC trailer".into()));
        }
        let line = raw.trim_end_matches('\n');
        if let Some(hex) = line.strip_prefix("CRC ") {
            let v = u32::from_str_radix(hex.trim(), 16).map_err(|e| perr(lineno, format!("bad CRC: {e}")))?;
            crc_line = Some((lineno, v));
            continue;
        }
        hashed += raw.len();
        let mut it = line.split(' ');
        if it.next() != Some("N") {
            return Err(perr(lineno, "expected a line starting with `N`".into()));
        }
        let nums: Vec<i64> = it
            .map(|s| s.parse::<i64>().map_err(|e| perr(lineno, format!("bad integer {s:?}: {e}"))))
            .collect::<Result<_>>()?;
        if nums.len() != 2 * RANK + 1 {
            return Err(perr(lineno, format!("expected 17 integers, found {}", nums.len())));
        }
        let to_root = |s: &[i64]| -> Option<Root> {
            let mut c = [0i32; RANK];
            for (x, y) in c.iter_mut().zip(s) {
                *x = i32::try_from(*y).ok()?;
            }
            Some(Root(c))
        };
        let a = to_root(&nums[..RANK]).filter(|r| rs.contains(r)).ok_or_else(|| perr(lineno, "first label is not a root".into()))?;
        let b = to_root(&nums[RANK..2 * RANK])
            .filter(|r| rs.contains(r))
            .ok_or_else(|| perr(lineno, "second label is not a root".into()))?;
        let v = nums[2 * RANK];
        if !(-1..=1).contains(&v) {
            return Err(perr(lineno, format!("structure constant {v} is not in {{-1, 0, 1}}")));
        }
        let is_root_sum = rs.contains(&a.plus(&b));
        if is_root_sum && v == 0 {
            return Err(perr(lineno, format!("N({a},{b}) = 0 but {a} + {b} is a root")));
        }
        if !is_root_sum && v != 0 {
            return Err(perr(lineno, format!("N({a},{b}) = {v} but {a} + {b} is not a root")));
        }
        if v != 0 && constants.insert((a, b), v as i8).is_some() {
            return Err(perr(lineno, format!("duplicate entry for ({a},{b})")));
        }
    }
    let (_, expected) = crc_line.ok_or_else(|| perr(src.lines().count() + 1, "missing CRC trailer".into()))?;
    let actual = crc32fast::hash(&src.as_bytes()[..hashed]);
    if actual != expected {
        return Err(Error::ChecksumMismatch { expected, actual });
    }
    ChevalleyTable::from_constants(rs, &constants, &convention).map_err(|e| perr(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ChevalleyTable {
        build_chevalley_table(build_root_system()).unwrap()
    }

    #[test]
    fn shipped_anchors_hold() {
        let t = table();
        let checks = t.check_anchors(&AnchorSet::shipped()).unwrap();
        assert!(checks.len() >= 14);
        for c in checks {
            assert!(c.pass(), "{:?}", c);
        }
    }

    #[test]
    fn simple_pair_constants() {
        let t = table();
        let (a2, a4) = (Root::simple(2), Root::simple(4));
        assert_eq!(t.n(&a2, &a4), 1);
        assert_eq!(t.n(&a2.negate(), &a4.negate()), -1);
        assert_eq!(t.n(&Root::simple(1), &a2), 0);
    }

    #[test]
    fn e_f_bracket_is_coroot() {
        let t = table();
        assert_eq!(bracket(&t, &t.e_simple(1), &t.f_simple(1)), t.h(1));
        let g: Root = "12232111".parse().unwrap();
        assert_eq!(bracket(&t, &t.x(&g), &t.x(&g.negate())), t.h_root(&g));
        assert_eq!(bracket(&t, &t.x(&g.negate()), &t.x(&g)), -t.h_root(&g));
    }

    #[test]
    fn form_values() {
        let t = table();
        assert_eq!(invariant_form(&t, &t.e_simple(3), &t.f_simple(3)), q(1));
        assert_eq!(invariant_form(&t, &t.h(3), &t.h(4)), q(-1));
        assert_eq!(invariant_form(&t, &t.e_simple(3), &t.e_simple(4)), q(0));
    }

    #[test]
    fn ad_h1_is_diagonal() {
        let t = table();
        let op = ad_operator(&t, &t.h(1));
        for (r, row) in op.rows().iter().enumerate() {
            for (c, v) in row {
                assert_eq!(r, *c);
                let expected = if r < NROOTS { t.root(r).pairing_simple(1) } else { 0 };
                assert_eq!(*v, q(i64::from(expected)));
            }
        }
    }

    #[test]
    fn regauge_round_trips_through_extraspecial_signs() {
        let t = build_uncalibrated_table(build_root_system());
        let g = t.regauge(0b1011_0110_0000_0000_0000_0001_0010_1000_0000_0000_0000_0000_0000);
        let rebuilt = ChevalleyTable::from_extraspecial_signs(build_root_system(), &g.extraspecial_signs());
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn export_import_round_trip() {
        let t = table();
        let s = export_table(&t);
        assert!(s.starts_with("E8 v1 "));
        let back = import_table(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn import_rejects_out_of_range_constant() {
        let s = export_table(&table());
        let bad = s.replacen(" 1\n", " 2\n", 1);
        match import_table(&bad) {
            Err(Error::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn import_detects_checksum_mismatch() {
        let s = export_table(&table());
        let pos = s.find(" 1\n").unwrap();
        let mut bad = s.clone();
        bad.replace_range(pos..pos + 3, " -1\n");
        assert!(matches!(import_table(&bad), Err(Error::ChecksumMismatch { .. }) | Err(Error::Parse { .. })));
    }

    #[test]
    fn conflicting_anchor_is_unsatisfiable() {
        let mut set = AnchorSet::shipped();
        let mut extra = set.anchors[0].clone();
        extra.id = "contradiction".into();
        extra.value = -extra.value;
        set.anchors.push(extra);
        match build_chevalley_table_with(build_root_system(), &set) {
            Err(Error::AnchorUnsatisfiable { conflicts }) => assert!(conflicts.contains(&"contradiction".to_string())),
            other => panic!("expected unsatisfiable, got {other:?}"),
        }
    }

    #[test]
    fn fixture_validation() {
        assert!(matches!(AnchorSet::from_json("{"), Err(Error::Fixture(_))));
        let src = DEFAULT_ANCHORS_JSON.replacen("\"value\": 1", "\"value\": 3", 1);
        assert!(matches!(AnchorSet::from_json(&src), Err(Error::Fixture(_))));
    }
}
