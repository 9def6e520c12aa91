//! Symplectic structure on g(-1), Darboux bases, the degree-8 sums and the
//! coefficient lambda of the quadratic relation.
//!
//! Pairing convention: `<x, y> = (e, [x, y])`, and a Darboux basis
//! `z_1..z_2s` satisfies `<z_{i+s}, z_j> = delta_ij` with all other pairings
//! among the first and among the last `s` vectors zero. The starred companion
//! is `z_i* = z_{i+s}` for `i <= s` and `z_i* = -z_{i-s}` for `i > s`, which
//! makes `<x, y> = sum_i <z_i*, x><z_i, y>` hold on g(-1).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{bracket, invariant_form, q, qq, ChevalleyTable, LieElement, Q, DIM};
use crate::error::{Error, Result};
use crate::linear::Subspace;
use crate::orbits::{multiple_of, IdentityCheck, OrbitData, OrbitLabel};
use crate::weights::{r_unit, RUnitVerdict};

/// A Darboux basis of g(-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub z: Vec<LieElement>,
    pub s: usize,
}

impl SymplecticBasis {
    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// The starred companion `z_i*` (0-based `i`).
    pub fn star(&self, i: usize) -> LieElement {
        if i < self.s {
            self.z[i + self.s].clone()
        } else {
            -self.z[i - self.s].clone()
        }
    }

    /// Gram matrix of `<., .>` on `z`.
    pub fn gram(&self, t: &ChevalleyTable, e: &LieElement) -> Vec<Vec<Q>> {
        self.z.iter().map(|x| self.z.iter().map(|y| pairing(t, e, x, y)).collect()).collect()
    }

    /// `true` when the Gram matrix is the standard symplectic matrix of this convention.
    pub fn is_darboux(&self, t: &ChevalleyTable, e: &LieElement) -> bool {
        let g = self.gram(t, e);
        let s = self.s;
        (0..2 * s).all(|i| {
            (0..2 * s).all(|j| {
                let expected = if i >= s && j == i - s {
                    Q::one()
                } else if i < s && j == i + s {
                    -Q::one()
                } else {
                    Q::zero()
                };
                g[i][j] == expected
            })
        })
    }
}

/// The symplectic form `<x, y> = (e, [x, y])`.
pub fn pairing(t: &ChevalleyTable, e: &LieElement, x: &LieElement, y: &LieElement) -> Q {
    invariant_form(t, e, &bracket(t, x, y))
}

/// Darboux basis obtained from the canonical basis of g(-1).
pub fn darboux_basis(t: &ChevalleyTable, od: &OrbitData) -> Result<SymplecticBasis> {
    let initial: Vec<LieElement> = od.g(-1).basis().to_vec();
    darboux_basis_from(t, od, &initial)
}

/// Darboux basis obtained from a pseudo-random integral change of basis of g(-1).
pub fn darboux_basis_seeded(t: &ChevalleyTable, od: &OrbitData, seed: u64) -> Result<SymplecticBasis> {
    let base = od.g(-1);
    let n = base.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mixed: Vec<LieElement> = (0..n)
            .map(|_| LieElement::combination((0..n).map(|j| (q(rng.gen_range(-3..=3)), &base.basis()[j]))))
            .collect();
        if Subspace::span(DIM, mixed.iter()).dim() == n {
            return darboux_basis_from(t, od, &mixed);
        }
    }
}

/// Symplectic Gram-Schmidt on a basis of g(-1).
pub fn darboux_basis_from(t: &ChevalleyTable, od: &OrbitData, initial: &[LieElement]) -> Result<SymplecticBasis> {
    let gm1 = od.g(-1);
    for (k, x) in initial.iter().enumerate() {
        if !gm1.contains(x) {
            return Err(Error::GradedMembership { name: format!("initial vector {k}"), component: "g(-1)".into() });
        }
    }
    let n = initial.len();
    if n != gm1.dim() || Subspace::span(DIM, initial.iter()).dim() != n {
        return Err(Error::Dimension(format!("need a basis of g(-1) (dimension {}), got {n} vectors", gm1.dim())));
    }
    let gram: Vec<Vec<Q>> = initial.iter().map(|x| initial.iter().map(|y| pairing(t, &od.e, x, y)).collect()).collect();
    let pair = |a: &[Q], b: &[Q]| -> Q {
        let mut s = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() && !gram[i][j].is_zero() {
                    s += ai * &gram[i][j] * bj;
                }
            }
        }
        s
    };
    let mut pool: Vec<Vec<Q>> = (0..n).map(|k| (0..n).map(|j| if j == k { Q::one() } else { Q::zero() }).collect()).collect();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    while !pool.is_empty() {
        let x = pool.remove(0);
        let Some(k) = pool.iter().position(|w| !pair(&x, w).is_zero()) else {
            let rank = Subspace::span(n, gram.iter().map(|row| LieElement::from_terms(row.iter().cloned().enumerate())).collect::<Vec<_>>().iter()).dim();
            return Err(Error::DegeneratePairing { rank, dim: n });
        };
        let mut y = pool.remove(k);
        let c = pair(&y, &x);
        for v in y.iter_mut() {
            *v = &*v / &c;
        }
        for w in pool.iter_mut() {
            let a = -pair(&y, w);
            let b = pair(&x, w);
            for j in 0..n {
                let d = &a * &x[j] + &b * &y[j];
                w[j] += d;
            }
        }
        lo.push(x);
        hi.push(y);
    }
    let to_elem = |c: &Vec<Q>| LieElement::combination(c.iter().cloned().zip(initial.iter()));
    let s = lo.len();
    let z: Vec<LieElement> = lo.iter().chain(hi.iter()).map(to_elem).collect();
    Ok(SymplecticBasis { z, s })
}

/// `<x, y> - sum_i <z_i*, x><z_i, y>`; zero when the completeness identity holds.
pub fn completeness_defect(t: &ChevalleyTable, od: &OrbitData, sb: &SymplecticBasis, x: &LieElement, y: &LieElement) -> Q {
    let mut s = pairing(t, &od.e, x, y);
    for i in 0..sb.dim() {
        s -= pairing(t, &od.e, &sb.star(i), x) * pairing(t, &od.e, &sb.z[i], y);
    }
    s
}

/// The evaluation point: `f - f_1` for A5+A1 and `f + f_0` for D5(a1)+A2.
pub fn slice_point(od: &OrbitData) -> LieElement {
    match od.label {
        OrbitLabel::A5A1 => od.f.clone() - od.vec("f1").clone(),
        OrbitLabel::D5a1A2 => od.f.clone() + od.vec("f0").clone(),
    }
}

/// Pairs of weight-3 vectors entering the sums.
fn sum_pairs(od: &OrbitData) -> Vec<(&LieElement, &LieElement)> {
    match od.label {
        OrbitLabel::A5A1 => vec![(od.vec("u"), od.vec("v")), (od.vec("u'"), od.vec("v'"))],
        OrbitLabel::D5a1A2 => vec![(od.vec("u"), od.vec("v"))],
    }
}

/// `sum_i ([x, z_i*], p)([y, z_i], p)`.
pub fn darboux_sum(t: &ChevalleyTable, sb: &SymplecticBasis, x: &LieElement, y: &LieElement, p: &LieElement) -> Q {
    let mut s = Q::zero();
    for i in 0..sb.dim() {
        let a = invariant_form(t, &bracket(t, x, &sb.star(i)), p);
        if a.is_zero() {
            continue;
        }
        s += a * invariant_form(t, &bracket(t, y, &sb.z[i]), p);
    }
    s
}

/// The sums `A` and `B` (for D5(a1)+A2, `B = 0`).
pub fn sum_ab(t: &ChevalleyTable, od: &OrbitData, sb: &SymplecticBasis) -> (Q, Q) {
    let p = slice_point(od);
    let pairs = sum_pairs(od);
    let a = darboux_sum(t, sb, pairs[0].0, pairs[0].1, &p);
    let b = pairs.get(1).map(|(x, y)| darboux_sum(t, sb, x, y, &p)).unwrap_or_else(Q::zero);
    (a, b)
}

/// `F^k(x)` with `F = ad f`.
pub fn f_power(t: &ChevalleyTable, od: &OrbitData, x: &LieElement, k: usize) -> LieElement {
    (0..k).fold(x.clone(), |acc, _| bracket(t, &od.f, &acc))
}

/// `E^k(x)` with `E = ad e`.
pub fn e_power(t: &ChevalleyTable, od: &OrbitData, x: &LieElement, k: usize) -> LieElement {
    (0..k).fold(x.clone(), |acc, _| bracket(t, &od.e, &acc))
}

/// `x_- = F^3(x) / 36`.
pub fn lowest(t: &ChevalleyTable, od: &OrbitData, x: &LieElement) -> LieElement {
    f_power(t, od, x, 3).scale(&qq(1, 36))
}

/// Closed-form values together with the intermediate quantities they reduce to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub a: Q,
    pub b: Q,
    pub aux: BTreeMap<String, Q>,
}

/// Closed-form expressions for `A` and `B`.
pub fn closed_form_ab(t: &ChevalleyTable, od: &OrbitData) -> ClosedForm {
    let mut aux = BTreeMap::new();
    match od.label {
        OrbitLabel::A5A1 => {
            let (e1, f1, h1) = (od.vec("e1"), od.vec("f1"), od.vec("h1"));
            let d = |x: &LieElement| bracket(t, &od.h, x) - bracket(t, h1, x);
            let form = |x: &LieElement, y: &LieElement| {
                let ym = lowest(t, od, y);
                let first = invariant_form(t, &bracket(t, &bracket(t, x, e1), f1), &ym);
                let inner = d(x) - x.scale(&q(2));
                let second = invariant_form(t, &d(&inner), &ym);
                q(8) * first - q(3) * second
            };
            let a = form(od.vec("u"), od.vec("v"));
            let b = form(od.vec("u'"), od.vec("v'"));
            let vm = lowest(t, od, od.vec("v"));
            let vpm = lowest(t, od, od.vec("v'"));
            aux.insert("-9(u,v_-)".into(), q(-9) * invariant_form(t, od.vec("u"), &vm));
            aux.insert("-16(u1',v'_-)".into(), q(-16) * invariant_form(t, od.vec("u1'"), &vpm));
            aux.insert("(F^3 u, v)".into(), invariant_form(t, &f_power(t, od, od.vec("u"), 3), od.vec("v")));
            aux.insert("(F^3 u1', v')".into(), invariant_form(t, &f_power(t, od, od.vec("u1'"), 3), od.vec("v'")));
            ClosedForm { a, b, aux }
        }
        OrbitLabel::D5a1A2 => {
            let (u, e0, h0, f0) = (od.vec("u"), od.vec("e0"), od.vec("h0"), od.vec("f0"));
            let vm = lowest(t, od, od.vec("v"));
            let h0u = bracket(t, h0, u);
            let h0h0u = bracket(t, h0, &h0u);
            let poly = h0h0u - h0u.scale(&q(4)) + u.scale(&q(3));
            let first = invariant_form(t, &poly, &vm);
            let second = invariant_form(t, &bracket(t, f0, &bracket(t, e0, u)), &vm);
            let a = q(-3) * first - q(8) * second;
            ClosedForm { a, b: Q::zero(), aux }
        }
    }
}

/// Outcome of the lambda computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaResult {
    pub label: OrbitLabel,
    pub a: Q,
    pub b: Q,
    pub closed: ClosedForm,
    /// `phi` at the slice point, equal to `A + B`.
    pub phi_value: Q,
    /// `(e, p)` for the slice point `p`.
    pub e_p: Q,
    pub lambda: Q,
    pub verdict: RUnitVerdict,
    pub dim_ab: u8,
}

impl LambdaResult {
    /// `(e,p)^2` and `A+B` both divisible by 7^2 while lambda is coprime to 7.
    pub fn seven_cancels(&self) -> bool {
        let v = |x: &Q| seven_valuation(x);
        v(&(&self.e_p * &self.e_p)) >= 2 && v(&self.phi_value) >= 2 && v(&self.lambda) == 0
    }
}

/// 7-adic valuation of a nonzero rational (`i64::MAX` for zero).
pub fn seven_valuation(x: &Q) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    let seven = num_bigint::BigInt::from(7);
    let count = |n: &num_bigint::BigInt| {
        let mut n = n.clone();
        let mut k = 0;
        while (&n % &seven).is_zero() {
            n /= &seven;
            k += 1;
        }
        k
    };
    count(x.numer()) - count(x.denom())
}

/// Computes `lambda = (A + B) / (e, p)^2`, cross-checking the Darboux and closed-form routes.
pub fn compute_lambda(t: &ChevalleyTable, od: &OrbitData) -> Result<LambdaResult> {
    let sb = darboux_basis(t, od)?;
    compute_lambda_with(t, od, &sb)
}

/// As [`compute_lambda`], with a caller-supplied Darboux basis.
pub fn compute_lambda_with(t: &ChevalleyTable, od: &OrbitData, sb: &SymplecticBasis) -> Result<LambdaResult> {
    let (a, b) = sum_ab(t, od, sb);
    let closed = closed_form_ab(t, od);
    if a != closed.a || b != closed.b {
        return Err(Error::Inconsistency(format!(
            "{}: Darboux sums (A, B) = ({a}, {b}) differ from closed forms ({}, {})",
            od.label, closed.a, closed.b
        )));
    }
    let p = slice_point(od);
    let e_p = invariant_form(t, &od.e, &p);
    if e_p.is_zero() {
        return Err(Error::Inconsistency(format!("{}: (e, p) = 0", od.label)));
    }
    let phi_value = &a + &b;
    let lambda = &phi_value / (&e_p * &e_p);
    let verdict = r_unit(&lambda);
    let dim_ab = if verdict.is_unit { 2 } else { 1 };
    Ok(LambdaResult { label: od.label, a, b, closed, phi_value, e_p, lambda, verdict, dim_ab })
}

/// The relations in `g_e(6)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G6Report {
    pub label: OrbitLabel,
    pub uv: LieElement,
    pub upvp: Option<LieElement>,
    /// `[u, v] = a w`.
    pub a: Option<Q>,
    /// `[u', v'] = b w`.
    pub b: Option<Q>,
}

impl G6Report {
    pub fn pass(&self) -> bool {
        match self.label {
            OrbitLabel::A5A1 => self.a == Some(q(-2)) && self.b == Some(q(2)) && self.relation_holds(),
            OrbitLabel::D5a1A2 => self.uv.is_zero(),
        }
    }

    /// `[u,v] + [u',v'] = 0` (A5+A1) or `[u,v] = 0` (D5(a1)+A2).
    pub fn relation_holds(&self) -> bool {
        match &self.upvp {
            Some(x) => (self.uv.clone() + x.clone()).is_zero(),
            None => self.uv.is_zero(),
        }
    }
}

/// Computes `[u,v]` and `[u',v']` and expresses them through `w`.
pub fn verify_g6_relations(t: &ChevalleyTable, od: &OrbitData) -> G6Report {
    let uv = bracket(t, od.vec("u"), od.vec("v"));
    match od.label {
        OrbitLabel::A5A1 => {
            let w = od.vec("w");
            let upvp = bracket(t, od.vec("u'"), od.vec("v'"));
            G6Report { label: od.label, a: multiple_of(&uv, w), b: multiple_of(&upvp, w), uv, upvp: Some(upvp) }
        }
        OrbitLabel::D5a1A2 => G6Report { label: od.label, uv, upvp: None, a: None, b: None },
    }
}

/// `x = E^3(x_-)` with `x_- = F^3(x)/36` in `ker(ad f) ∩ g(-3)`, for each weight-3 vector.
pub fn normalization_checks(t: &ChevalleyTable, od: &OrbitData) -> Vec<(String, IdentityCheck, bool)> {
    let names: &[&str] = match od.label {
        OrbitLabel::A5A1 => &["u", "v", "u'", "v'"],
        OrbitLabel::D5a1A2 => &["u", "v"],
    };
    names
        .iter()
        .map(|n| {
            let x = od.vec(n);
            let xm = lowest(t, od, x);
            let in_gf = bracket(t, &od.f, &xm).is_zero() && od.g(-3).contains(&xm);
            let check = IdentityCheck { name: format!("{n} = E^3({n}_-)"), residual: e_power(t, od, &xm, 3) - x.clone() };
            ((*n).to_string(), check, in_gf)
        })
        .collect()
}

/// `E^3(p) = 0` for the slice point.
pub fn slice_point_cubed(t: &ChevalleyTable, od: &OrbitData) -> LieElement {
    e_power(t, od, &slice_point(od), 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_chevalley_table;
    use crate::orbits::orbit_data;
    use crate::roots::build_root_system;

    #[test]
    fn darboux_basis_is_standard_and_complete() {
        let t = build_chevalley_table(build_root_system()).unwrap();
        let od = orbit_data(&t, OrbitLabel::A5A1).unwrap();
        let sb = darboux_basis(&t, &od).unwrap();
        assert_eq!(sb.dim(), od.g(-1).dim());
        assert!(sb.is_darboux(&t, &od.e));
        let g = od.g(-1);
        let (x, y) = (&g.basis()[0], &g.basis()[3]);
        let mix = x.clone() + y.scale(&qq(2, 3));
        assert!(completeness_defect(&t, &od, &sb, &mix, y).is_zero());
    }

    #[test]
    fn rejects_vectors_outside_g_minus_one() {
        let t = build_chevalley_table(build_root_system()).unwrap();
        let od = orbit_data(&t, OrbitLabel::A5A1).unwrap();
        let mut init: Vec<LieElement> = od.g(-1).basis().to_vec();
        init[0] = od.g(-2).basis()[0].clone();
        assert!(matches!(darboux_basis_from(&t, &od, &init), Err(Error::GradedMembership { .. })));
    }

    #[test]
    fn seven_valuation_examples() {
        assert_eq!(seven_valuation(&q(1176)), 2);
        assert_eq!(seven_valuation(&qq(-1225, 6)), 2);
        assert_eq!(seven_valuation(&qq(3, 2)), 0);
        assert_eq!(seven_valuation(&qq(1, 49)), -2);
    }
}
