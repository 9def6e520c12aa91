//! The two rigid 202-dimensional nilpotent orbits: sl2-triples, ad h gradings,
//! graded centralizers and the distinguished vectors used by the slice module.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{ad_operator, bracket, format_element, q, qq, simple_root_values, ChevalleyTable, LieElement, Q, DIM};
use crate::error::{Error, Result};
use crate::linear::{eigenspace, kernel, span_brackets, LinearOperator, Subspace};

/// The orbits handled by this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitLabel {
    A5A1,
    D5a1A2,
}

impl OrbitLabel {
    pub const ALL: [OrbitLabel; 2] = [OrbitLabel::A5A1, OrbitLabel::D5a1A2];

    /// Command-line spelling.
    pub fn slug(&self) -> &'static str {
        match self {
            OrbitLabel::A5A1 => "a5a1",
            OrbitLabel::D5a1A2 => "d5a1a2",
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitLabel::A5A1 => "A5+A1",
            OrbitLabel::D5a1A2 => "D5(a1)+A2",
        })
    }
}

impl FromStr for OrbitLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a5a1" | "a5+a1" => Ok(OrbitLabel::A5A1),
            "d5a1a2" | "d5(a1)+a2" => Ok(OrbitLabel::D5a1A2),
            _ => Err(format!("unknown orbit {s:?}; expected a5a1 or d5a1a2")),
        }
    }
}

/// One bracket identity with its residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: LieElement,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Result of checking the three sl2 relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Report {
    pub checks: Vec<IdentityCheck>,
}

impl Sl2Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(IdentityCheck::pass)
    }
}

/// Checks `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn verify_sl2(t: &ChevalleyTable, e: &LieElement, h: &LieElement, f: &LieElement) -> Sl2Report {
    let two = q(2);
    let checks = vec![
        IdentityCheck { name: "[h,e] = 2e".into(), residual: bracket(t, h, e) - e.scale(&two) },
        IdentityCheck { name: "[h,f] = -2f".into(), residual: bracket(t, h, f) + f.scale(&two) },
        IdentityCheck { name: "[e,f] = h".into(), residual: bracket(t, e, f) - h.clone() },
    ];
    Sl2Report { checks }
}

/// Orbit data: the triple, the grading, the graded centralizer and named vectors.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub label: OrbitLabel,
    pub e: LieElement,
    pub f: LieElement,
    /// Derived as `[e, f]`.
    pub h: LieElement,
    /// `alpha_i(h)` for `i = 1..8`.
    pub h_values: Vec<Q>,
    /// `g(i)`: eigenspaces of `ad h`.
    pub grading: BTreeMap<i64, Subspace>,
    /// `g_e(i) = g(i) ∩ ker(ad e)`.
    pub centralizer: BTreeMap<i64, Subspace>,
    pub distinguished: BTreeMap<String, LieElement>,
    pub ad_e: LinearOperator,
    pub ad_f: LinearOperator,
    pub ad_h: LinearOperator,
}

impl OrbitData {
    /// A named distinguished vector; panics on unknown names.
    pub fn vec(&self, name: &str) -> &LieElement {
        self.distinguished.get(name).unwrap_or_else(|| panic!("no distinguished vector {name:?} for {}", self.label))
    }

    pub fn g(&self, i: i64) -> Subspace {
        self.grading.get(&i).cloned().unwrap_or_else(|| Subspace::zero(DIM))
    }

    pub fn ge(&self, i: i64) -> Subspace {
        self.centralizer.get(&i).cloned().unwrap_or_else(|| Subspace::zero(DIM))
    }

    /// Dimension of `g_e`.
    pub fn dim_centralizer(&self) -> usize {
        self.centralizer.values().map(Subspace::dim).sum()
    }

    /// The whole centralizer `g_e`.
    pub fn centralizer_space(&self) -> Subspace {
        Subspace::span(DIM, self.centralizer.values().flat_map(|s| s.basis().iter()))
    }

    /// Grade of a homogeneous element, if it is homogeneous.
    pub fn grade_of(&self, x: &LieElement) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        self.grading.iter().find(|(_, s)| s.contains(x)).map(|(i, _)| *i)
    }
}

fn sum_of(items: &[(i64, LieElement)]) -> LieElement {
    let mut out = LieElement::zero();
    for (c, x) in items {
        out.axpy(&q(*c), x);
    }
    out
}

/// `sum c * e[label]` for positive-root labels.
fn e_comb(t: &ChevalleyTable, terms: &[(i64, &str)]) -> LieElement {
    sum_of(&terms.iter().map(|(c, l)| (*c, t.e(l))).collect::<Vec<_>>())
}

/// `sum c * f[label]` for positive-root labels.
fn f_comb(t: &ChevalleyTable, terms: &[(i64, &str)]) -> LieElement {
    sum_of(&terms.iter().map(|(c, l)| (*c, t.f(l))).collect::<Vec<_>>())
}

/// The nilpositive element `e` and nilnegative element `f` as written for each orbit.
pub fn triple_elements(t: &ChevalleyTable, label: OrbitLabel) -> (LieElement, LieElement) {
    match label {
        OrbitLabel::A5A1 => {
            let e = sum_of(&[1, 2, 4, 5, 6, 7].map(|i| (1, t.e_simple(i))));
            let f = sum_of(&[(1, t.f_simple(1)), (5, t.f_simple(2)), (8, t.f_simple(4)), (9, t.f_simple(5)), (8, t.f_simple(6)), (5, t.f_simple(7))]);
            (e, f)
        }
        OrbitLabel::D5a1A2 => {
            let e24 = bracket(t, &t.e_simple(2), &t.e_simple(4));
            let e45 = bracket(t, &t.e_simple(4), &t.e_simple(5));
            let e = sum_of(&[1, 2, 3, 5, 7, 8].map(|i| (1, t.e_simple(i)))) + e24 + e45;
            let f24 = bracket(t, &t.f_simple(2), &t.f_simple(4));
            let f45 = bracket(t, &t.f_simple(4), &t.f_simple(5));
            let f = sum_of(&[
                (6, t.f_simple(1)),
                (1, t.f_simple(2)),
                (10, t.f_simple(3)),
                (1, t.f_simple(5)),
                (2, t.f_simple(7)),
                (2, t.f_simple(8)),
                (-6, f24),
                (-6, f45),
            ]);
            (e, f)
        }
    }
}

/// Named vectors built from their defining formulas (before any derived ones).
fn displayed_vectors(t: &ChevalleyTable, label: OrbitLabel, f: &LieElement) -> BTreeMap<String, LieElement> {
    let mut m = BTreeMap::new();
    match label {
        OrbitLabel::A5A1 => {
            m.insert("u".into(), f_comb(t, &[(1, "12232111"), (-1, "11232211"), (1, "11222221")]));
            m.insert("v".into(), e_comb(t, &[(1, "12243211"), (-1, "12233221"), (1, "11233321")]));
            m.insert("u'".into(), f_comb(t, &[(1, "11110000"), (1, "10111000"), (1, "01111000"), (2, "00111100")]));
            m.insert("v'".into(), e_comb(t, &[(1, "11121100"), (-1, "01122100"), (-1, "01121110"), (2, "11111110")]));
            m.insert("u1'".into(), f_comb(t, &[(1, "11110000"), (1, "10111000")]));
            m.insert("u2'".into(), f_comb(t, &[(1, "01111000"), (2, "00111100")]));
            m.insert("w".into(), e_comb(t, &[(1, "01011000"), (1, "00011100"), (1, "00001110")]));
            m.insert("e'".into(), e_comb(t, &[(1, "12232100"), (1, "11232110"), (-1, "11222210")]));
            m.insert("f'".into(), f_comb(t, &[(1, "12232100"), (1, "11232110"), (-1, "11222210")]));
            let hr = t.rs.highest_root();
            m.insert("e~".into(), t.x(&hr));
            m.insert("f~".into(), t.x(&hr.negate()));
            m.insert("e1".into(), t.e_simple(1));
            m.insert("f1".into(), t.f_simple(1));
            m.insert("h1".into(), t.h(1));
        }
        OrbitLabel::D5a1A2 => {
            m.insert(
                "u".into(),
                e_comb(t, &[(1, "11221110"), (1, "11121111"), (-1, "11222100"), (-2, "11122110"), (3, "11111111"), (1, "11232100")]),
            );
            m.insert("e'".into(), e_comb(t, &[(1, "11232221"), (-2, "12233210"), (-1, "12232211"), (-1, "11233211")]));
            m.insert("f'".into(), f_comb(t, &[(2, "11232221"), (-1, "12233210"), (-1, "12232211"), (-1, "11233211")]));
            let e0 = sum_of(&[2, 5, 7, 8].map(|i| (1, t.e_simple(i))));
            let h0 = bracket(t, &e0, f);
            let f0 = bracket(t, &h0, f).scale(&qq(1, 2));
            m.insert("e0".into(), e0);
            m.insert("h0".into(), h0);
            m.insert("f0".into(), f0);
            let v = bracket(t, &m["f'"], &m["u"]);
            m.insert("v".into(), v);
            let hp = bracket(t, &m["e'"], &m["f'"]);
            m.insert("h'".into(), hp);
        }
    }
    m
}

/// Graded component each distinguished vector must lie in, as `(name, grade)`.
pub fn membership_claims(label: OrbitLabel) -> &'static [(&'static str, i64)] {
    match label {
        OrbitLabel::A5A1 => &[
            ("u", 3),
            ("v", 3),
            ("u'", 3),
            ("v'", 3),
            ("w", 6),
            ("e'", 0),
            ("f'", 0),
            ("e~", 0),
            ("f~", 0),
            ("e1", 2),
        ],
        OrbitLabel::D5a1A2 => &[("u", 3), ("v", 3), ("e'", 0), ("f'", 0), ("h'", 0), ("e0", 2)],
    }
}

/// Builds the orbit data, verifying the triple and the graded memberships.
pub fn orbit_data(t: &ChevalleyTable, label: OrbitLabel) -> Result<OrbitData> {
    let (e, f) = triple_elements(t, label);
    let h = bracket(t, &e, &f);
    let sl2 = verify_sl2(t, &e, &h, &f);
    if !sl2.pass() {
        let bad: Vec<String> = sl2.checks.iter().filter(|c| !c.pass()).map(|c| c.name.clone()).collect();
        return Err(Error::Sl2Violation(format!("{label}: {}", bad.join(", "))));
    }
    let h_values = simple_root_values(t, &h);
    let ad_e = ad_operator(t, &e);
    let ad_f = ad_operator(t, &f);
    let ad_h = ad_operator(t, &h);
    let mut evs: Vec<Q> = (0..DIM).map(|i| ad_h.get(i, i)).collect();
    evs.sort();
    evs.dedup();
    let mut grading = BTreeMap::new();
    let mut centralizer = BTreeMap::new();
    for ev in evs {
        if !ev.is_integer() {
            return Err(Error::Sl2Violation(format!("{label}: ad h has non-integral eigenvalue {ev}")));
        }
        let i: i64 = ev.to_integer().try_into().map_err(|_| Error::Sl2Violation("eigenvalue overflow".into()))?;
        let gi = eigenspace(&ad_h, &ev);
        let gei = gi.kernel_of(&ad_e);
        grading.insert(i, gi);
        if gei.dim() > 0 {
            centralizer.insert(i, gei);
        }
    }
    let distinguished = displayed_vectors(t, label, &f);
    let od = OrbitData { label, e, f, h, h_values, grading, centralizer, distinguished, ad_e, ad_f, ad_h };
    for (name, grade) in membership_claims(label) {
        let x = od.vec(name);
        if !od.ge(*grade).contains(x) {
            return Err(Error::GradedMembership { name: (*name).into(), component: format!("g_e({grade}) for {label}") });
        }
    }
    Ok(od)
}

/// Structure of `[g_e, g_e]` inside `g_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerReport {
    pub dim_centralizer: usize,
    pub dim_derived: usize,
    /// `(dim g_e(i), dim [g_e,g_e](i))` per grade.
    pub graded: BTreeMap<i64, (usize, usize)>,
    pub e_in_derived: bool,
}

impl CentralizerReport {
    pub fn codimension(&self) -> usize {
        self.dim_centralizer - self.dim_derived
    }

    /// `g_e = C e ⊕ [g_e, g_e]`.
    pub fn e_spans_complement(&self) -> bool {
        self.codimension() == 1 && !self.e_in_derived
    }
}

/// The graded pieces of `[g_e, g_e]`.
pub fn derived_centralizer(t: &ChevalleyTable, od: &OrbitData) -> BTreeMap<i64, Subspace> {
    let mut out: BTreeMap<i64, Subspace> = BTreeMap::new();
    let grades: Vec<i64> = od.centralizer.keys().copied().collect();
    for &i in &grades {
        for &j in &grades {
            if j < i {
                continue;
            }
            let s = span_brackets(t, &od.ge(i), &od.ge(j));
            if s.dim() == 0 {
                continue;
            }
            let k = i + j;
            let cur = out.remove(&k).unwrap_or_else(|| Subspace::zero(DIM));
            out.insert(k, cur.sum(&s));
        }
    }
    out
}

/// Computes `[g_e, g_e]`, its codimension and whether `e` spans a complement.
pub fn centralizer_structure(t: &ChevalleyTable, od: &OrbitData) -> CentralizerReport {
    let derived = derived_centralizer(t, od);
    let graded = od
        .centralizer
        .iter()
        .map(|(i, s)| (*i, (s.dim(), derived.get(i).map(Subspace::dim).unwrap_or(0))))
        .collect();
    let dim_derived = derived.values().map(Subspace::dim).sum();
    let e_in_derived = derived.get(&2).map(|s| s.contains(&od.e)).unwrap_or(false);
    CentralizerReport { dim_centralizer: od.dim_centralizer(), dim_derived, graded, e_in_derived }
}

/// Elements of `space` fixed by the adjoint action of `g_e(0)`.
pub fn invariants(t: &ChevalleyTable, od: &OrbitData, space: &Subspace) -> Subspace {
    let ops: Vec<LinearOperator> = od.ge(0).basis().iter().map(|x| ad_operator(t, x)).collect();
    space.common_kernel(&ops)
}

/// Facts about `[g_e(1), g_e(1)]^{g_e(0)}` and `g_e(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E0InvariantsReport {
    pub dim_bracket_span: usize,
    pub invariant_line: Subspace,
    pub spanned_by_e0: bool,
    pub ge2_invariants: Subspace,
    pub ge2_invariants_are_e_e0: bool,
    pub dim_g0_ge2: usize,
}

impl E0InvariantsReport {
    pub fn pass(&self) -> bool {
        self.spanned_by_e0 && self.ge2_invariants_are_e_e0 && self.dim_g0_ge2 == 5
    }
}

/// Checks `[g_e(1), g_e(1)]^{g_e(0)} = C e_0` from scratch.
pub fn verify_e0_invariants(t: &ChevalleyTable, od: &OrbitData) -> Result<E0InvariantsReport> {
    if od.label != OrbitLabel::D5a1A2 {
        return Err(Error::Inconsistency(format!("the e_0 invariants check concerns D5(a1)+A2, not {}", od.label)));
    }
    let s = span_brackets(t, &od.ge(1), &od.ge(1));
    let inv = invariants(t, od, &s);
    let e0 = od.vec("e0");
    let line = Subspace::span(DIM, [e0.clone()].iter());
    let ge2_inv = invariants(t, od, &od.ge(2));
    let e_e0 = Subspace::span(DIM, [od.e.clone(), e0.clone()].iter());
    let g0g2 = span_brackets(t, &od.ge(0), &od.ge(2));
    Ok(E0InvariantsReport {
        dim_bracket_span: s.dim(),
        spanned_by_e0: inv == line,
        invariant_line: inv,
        ge2_invariants_are_e_e0: ge2_inv == e_e0,
        ge2_invariants: ge2_inv,
        dim_g0_ge2: g0g2.dim(),
    })
}

/// Identity checks on the D5(a1)+A2 auxiliary triple `(e_0, h_0, f_0)`.
pub fn auxiliary_identities(t: &ChevalleyTable, od: &OrbitData) -> Vec<IdentityCheck> {
    if od.label != OrbitLabel::D5a1A2 {
        return Vec::new();
    }
    let (e0, h0, f0) = (od.vec("e0"), od.vec("h0"), od.vec("f0"));
    vec![
        IdentityCheck { name: "[h0,e0] = 2e0".into(), residual: bracket(t, h0, e0) - e0.scale(&q(2)) },
        IdentityCheck { name: "[e,f0] = -h0".into(), residual: bracket(t, &od.e, f0) + h0.clone() },
        IdentityCheck { name: "[f0,[f0,e]] = 2f0".into(), residual: bracket(t, f0, &bracket(t, f0, &od.e)) - f0.scale(&q(2)) },
    ]
}

/// Grading closure `[g(i), g(j)] ⊆ g(i+j)` on all nonzero graded pairs; returns failing pairs.
pub fn grading_closure_failures(t: &ChevalleyTable, od: &OrbitData) -> Vec<(i64, i64)> {
    let mut bad = Vec::new();
    for (i, gi) in &od.grading {
        for (j, gj) in &od.grading {
            let target = od.g(i + j);
            let ok = gi.basis().iter().all(|x| gj.basis().iter().all(|y| target.contains(&bracket(t, x, y))));
            if !ok {
                bad.push((*i, *j));
            }
        }
    }
    bad
}

/// Dimension of `ker(ad e)` computed directly on the whole algebra.
pub fn centralizer_dimension_direct(od: &OrbitData) -> usize {
    kernel(&od.ad_e).dim()
}

/// Human-readable rendering of a named vector.
pub fn describe(t: &ChevalleyTable, od: &OrbitData, name: &str) -> String {
    format_element(&t.rs, od.vec(name))
}

/// `x` as a multiple of `w`, if it is one.
pub fn multiple_of(x: &LieElement, w: &LieElement) -> Option<Q> {
    let (i, c) = w.terms().iter().next()?;
    let ratio = x.coeff(*i) / c;
    (w.scale(&ratio) == *x).then_some(ratio)
}

/// `true` when `h` is a Cartan element whose simple-root values are all `values`.
pub fn has_root_values(t: &ChevalleyTable, h: &LieElement, values: &[i64]) -> bool {
    simple_root_values(t, h) == values.iter().map(|v| q(*v)).collect::<Vec<_>>()
}
