//! Independent structure constants from the Frenkel-Kac cocycle, written in the
//! table file format and pushed through import, normalisation and calibration.

use std::collections::HashMap;

use e8lie::algebra::{build_uncalibrated_table, calibrate, export_table, import_table, AnchorSet, ChevalleyTable};
use e8lie::roots::{Root, CARTAN, RANK};
use e8lie::sweep::{invariance_sweep, jacobi_sweep};
use e8lie::{build_chevalley_table, build_root_system};

/// Bimultiplicative cocycle with eps(a_i, a_i) = -1 and eps(a_i, a_j) = (-1)^{C_ij} for i < j.
fn eps(a: &Root, b: &Root) -> i32 {
    let mut parity = 0i64;
    for i in 0..RANK {
        for j in 0..RANK {
            let odd = i == j || (i < j && CARTAN[i][j] == -1);
            if odd {
                parity += i64::from(a.0[i]) * i64::from(b.0[j]);
            }
        }
    }
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Rescaling `y_a = sigma_a x_a` that turns `[x_a, x_-a] = eps(a,-a) h_a` into `[y_a, y_-a] = h_a`.
fn sigma(a: &Root) -> i32 {
    if a.is_positive() {
        1
    } else {
        let c = a.negate();
        eps(&c, a)
    }
}

fn frenkel_kac_constants() -> HashMap<(Root, Root), i8> {
    let rs = build_root_system();
    let mut out = HashMap::new();
    for a in &rs.roots {
        for b in &rs.roots {
            let s = a.plus(b);
            if rs.contains(&s) {
                let n = sigma(a) * sigma(b) * sigma(&s) * eps(a, b);
                out.insert((*a, *b), n as i8);
            }
        }
    }
    out
}

/// Writes constants in the `E8 v1` line format, independently of the library writer.
fn write_table(constants: &HashMap<(Root, Root), i8>, convention: &str) -> String {
    let rs = build_root_system();
    let mut body = format!("E8 v1 {convention}\n");
    for a in &rs.roots {
        for b in &rs.roots {
            if let Some(v) = constants.get(&(*a, *b)) {
                let nums: Vec<String> = a.0.iter().chain(b.0.iter()).map(|c| c.to_string()).collect();
                body.push_str(&format!("N {} {v}\n", nums.join(" ")));
            }
        }
    }
    let crc = crc32fast::hash(body.as_bytes());
    body + &format!("CRC {crc:08x}\n")
}

/// Gauge-fixes every extraspecial constant to +1, processing roots by height.
fn normalise_extraspecial(t: &ChevalleyTable) -> ChevalleyTable {
    let mut cur = t.clone();
    let rs = build_root_system();
    for (k, pair) in t.extraspecial().iter().enumerate() {
        if let Some((a, b)) = pair {
            if cur.n(&rs.positive[*a], &rs.positive[*b]) < 0 {
                cur = cur.regauge(1u128 << k);
            }
        }
    }
    cur
}

fn imported() -> ChevalleyTable {
    import_table(&write_table(&frenkel_kac_constants(), "frenkel-kac")).expect("oracle table parses")
}

#[test]
fn oracle_table_is_a_lie_algebra() {
    let t = imported();
    assert_eq!(t.convention(), "frenkel-kac");
    assert!(jacobi_sweep(&t).pass());
    assert!(invariance_sweep(&t).pass());
}

#[test]
fn oracle_agrees_with_extraspecial_recursion_up_to_gauge() {
    let t = normalise_extraspecial(&imported());
    let base = build_uncalibrated_table(build_root_system());
    assert_eq!(t.constants(), base.constants());
}

#[test]
fn oracle_calibrates_to_every_anchor() {
    let anchors = AnchorSet::shipped();
    let cal = calibrate(&imported(), &anchors).unwrap();
    assert!(cal.check_anchors(&anchors).unwrap().iter().all(|c| c.pass()));
    let ours = build_chevalley_table(build_root_system()).unwrap();
    let norm = calibrate(&normalise_extraspecial(&imported()), &anchors).unwrap();
    assert_eq!(norm.constants(), ours.constants());
}

#[test]
fn library_writer_matches_independent_writer() {
    let ours = build_chevalley_table(build_root_system()).unwrap();
    let constants: HashMap<(Root, Root), i8> = ours.constants().into_iter().map(|(a, b, v)| ((a, b), v)).collect();
    assert_eq!(export_table(&ours), write_table(&constants, ours.convention()));
}
