//! Property tests of the algebraic invariants.

use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;

use e8lie::algebra::{bracket, export_table, import_table, invariant_form, qq, ChevalleyTable, LieElement, DIM, NROOTS};
use e8lie::linear::{kernel, Subspace};
use e8lie::orbits::{orbit_data, OrbitData};
use e8lie::roots::add_roots;
use e8lie::slice::{darboux_basis_seeded, sum_ab};
use e8lie::weights::{nonzero_mod_p, r_unit};
use e8lie::{build_chevalley_table, build_root_system, OrbitLabel, Q};

fn table() -> &'static ChevalleyTable {
    static T: OnceLock<ChevalleyTable> = OnceLock::new();
    T.get_or_init(|| build_chevalley_table(build_root_system()).unwrap())
}

fn orbit(label: OrbitLabel) -> &'static OrbitData {
    static A: OnceLock<OrbitData> = OnceLock::new();
    static D: OnceLock<OrbitData> = OnceLock::new();
    let cell = match label {
        OrbitLabel::A5A1 => &A,
        OrbitLabel::D5a1A2 => &D,
    };
    cell.get_or_init(|| orbit_data(table(), label).unwrap())
}

fn element() -> impl Strategy<Value = LieElement> {
    prop::collection::vec((0..DIM, -6i64..=6, 1i64..=5), 1..6).prop_map(|terms| {
        let mut x = LieElement::zero();
        for (i, n, d) in terms {
            x.add_term(i, qq(n, d));
        }
        x
    })
}

fn root_index() -> impl Strategy<Value = usize> {
    0..NROOTS
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric(x in element(), y in element()) {
        let t = table();
        prop_assert_eq!(bracket(t, &x, &y), -bracket(t, &y, &x));
    }

    #[test]
    fn jacobi_identity(x in element(), y in element(), z in element()) {
        let t = table();
        let j = bracket(t, &bracket(t, &x, &y), &z) + bracket(t, &bracket(t, &y, &z), &x) + bracket(t, &bracket(t, &z, &x), &y);
        prop_assert!(j.is_zero());
    }

    #[test]
    fn form_is_symmetric_and_invariant(x in element(), y in element(), z in element()) {
        let t = table();
        prop_assert_eq!(invariant_form(t, &x, &y), invariant_form(t, &y, &x));
        prop_assert_eq!(invariant_form(t, &bracket(t, &x, &y), &z), invariant_form(t, &x, &bracket(t, &y, &z)));
    }

    #[test]
    fn bracket_is_bilinear(x in element(), y in element(), z in element(), n in -4i64..=4, d in 1i64..=3) {
        let t = table();
        let c = qq(n, d);
        let lhs = bracket(t, &(x.scale(&c) + y.clone()), &z);
        let rhs = bracket(t, &x, &z).scale(&c) + bracket(t, &y, &z);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn structure_constant_symmetries(i in root_index(), j in root_index()) {
        let t = table();
        let (a, b) = (t.root(i), t.root(j));
        let n = t.n(&a, &b);
        prop_assert_eq!(n, -t.n(&b, &a));
        prop_assert_eq!(n, -t.n(&a.negate(), &b.negate()));
        prop_assert_eq!(n != 0, add_roots(&t.rs, &a, &b).is_some());
        if let Some(s) = add_roots(&t.rs, &a, &b) {
            prop_assert_eq!(n, t.n(&b, &s.negate()));
        }
    }

    #[test]
    fn regauge_is_an_involution_and_round_trips(bits in any::<u128>()) {
        let t = table();
        let mask = bits & ((1u128 << 120) - 1);
        let g = t.regauge(mask);
        prop_assert_eq!(g.regauge(mask).constants(), t.constants());
        let back = import_table(&export_table(&g)).unwrap();
        prop_assert_eq!(back.constants(), g.constants());
        prop_assert_eq!(back.convention(), g.convention());
    }

    #[test]
    fn span_is_idempotent(vs in prop::collection::vec(element(), 1..6)) {
        let s = Subspace::span(DIM, vs.iter());
        prop_assert_eq!(Subspace::span(DIM, s.basis().iter()), s.clone());
        prop_assert!(vs.iter().all(|v| s.contains(v)));
        prop_assert!(s.dim() <= vs.len());
    }

    #[test]
    fn r_units_are_nonzero_mod_good_primes(a in -6i32..=6, b in -6i32..=6, c in -4i32..=4, neg in any::<bool>()) {
        let pow = |p: i64, e: i32| if e >= 0 { Q::from_integer(p.pow(e as u32).into()) } else { qq(1, p.pow((-e) as u32)) };
        let mut x = pow(2, a) * pow(3, b) * pow(5, c);
        if neg { x = -x; }
        let v = r_unit(&x);
        prop_assert!(v.is_unit);
        prop_assert_eq!(v.exponents, [i64::from(a), i64::from(b), i64::from(c)]);
        for p in [7u64, 11, 13, 97] {
            prop_assert_eq!(nonzero_mod_p(&x, p), Ok(true));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn darboux_sums_do_not_depend_on_the_basis(seed in any::<u64>()) {
        for label in OrbitLabel::ALL {
            let t = table();
            let od = orbit(label);
            let sb = darboux_basis_seeded(t, od, seed).unwrap();
            prop_assert!(sb.is_darboux(t, &od.e));
            let (a, b) = sum_ab(t, od, &sb);
            let base = e8lie::slice::compute_lambda(t, od).unwrap();
            prop_assert_eq!(a + b, base.phi_value);
        }
    }
}

#[test]
fn centralizer_dimension_matches_rank_nullity() {
    for label in OrbitLabel::ALL {
        let od = orbit(label);
        assert_eq!(kernel(&od.ad_e).dim() + od.ad_e.rank(), DIM);
        assert_eq!(od.dim_centralizer(), 46);
        assert!(od.grading.values().map(Subspace::dim).sum::<usize>() == DIM);
    }
}

#[test]
fn graded_pieces_are_eigenspaces() {
    let t = table();
    for label in OrbitLabel::ALL {
        let od = orbit(label);
        for (i, s) in &od.grading {
            for x in s.basis() {
                assert_eq!(bracket(t, &od.h, x), x.scale(&Q::from_integer((*i).into())));
            }
        }
        assert!(od.centralizer.values().flat_map(|s| s.basis()).all(|x| bracket(t, &od.e, x).is_zero()));
        assert!(!od.ge(1).basis().is_empty() && !Q::is_zero(&invariant_form(t, &od.e, &od.f)));
    }
}
