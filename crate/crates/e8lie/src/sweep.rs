//! Exhaustive and randomized checks of the Lie algebra axioms and of the
//! invariance of the form.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{bracket, invariant_form, qq, ChevalleyTable, LieElement, DIM};

/// Default seed of the sampled suite.
pub const DEFAULT_SEED: u64 = 42;

/// Cases, failures and first failing triple of one slice of a sweep.
type Partial = (u64, u64, Option<(usize, usize, usize)>);

/// Outcome of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<(usize, usize, usize)>,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    fn merge(name: &str, parts: Vec<Partial>) -> SweepReport {
        let mut r = SweepReport { name: name.into(), cases: 0, failures: 0, first_failure: None };
        for (c, f, first) in parts {
            r.cases += c;
            r.failures += f;
            r.first_failure = r.first_failure.or(first);
        }
        r
    }
}

/// Dense scratch vector that remembers which slots were touched.
struct Scratch {
    v: Vec<i64>,
    touched: Vec<usize>,
}

impl Scratch {
    fn new() -> Self {
        Scratch { v: vec![0; DIM], touched: Vec::new() }
    }

    fn add(&mut self, k: usize, c: i64) {
        if self.v[k] == 0 {
            self.touched.push(k);
        }
        self.v[k] += c;
    }

    /// Returns whether every entry is zero and resets the buffer.
    fn drain_is_zero(&mut self) -> bool {
        let mut zero = true;
        for &k in &self.touched {
            zero &= self.v[k] == 0;
            self.v[k] = 0;
        }
        self.touched.clear();
        zero
    }
}

/// Adds `[[b_i, b_j], b_k]` into `out`.
fn double_bracket(t: &ChevalleyTable, i: usize, j: usize, k: usize, out: &mut Scratch) {
    t.basis_bracket_with(i, j, |m, c| t.basis_bracket_with(m, k, |n, d| out.add(n, c * d)));
}

/// Checks the Jacobi identity on every triple of basis vectors `i < j < k`,
/// together with antisymmetry on every pair.
pub fn jacobi_sweep(t: &ChevalleyTable) -> SweepReport {
    let parts = (0..DIM)
        .into_par_iter()
        .map_init(Scratch::new, |s, i| {
            let (mut cases, mut failures, mut first) = (0u64, 0u64, None);
            for j in 0..DIM {
                cases += 1;
                t.basis_bracket_with(i, j, |m, c| s.add(m, c));
                t.basis_bracket_with(j, i, |m, c| s.add(m, c));
                if !s.drain_is_zero() {
                    failures += 1;
                    first = first.or(Some((i, j, j)));
                }
            }
            for j in i + 1..DIM {
                for k in j + 1..DIM {
                    cases += 1;
                    double_bracket(t, i, j, k, s);
                    double_bracket(t, j, k, i, s);
                    double_bracket(t, k, i, j, s);
                    if !s.drain_is_zero() {
                        failures += 1;
                        first = first.or(Some((i, j, k)));
                    }
                }
            }
            (cases, failures, first)
        })
        .collect();
    SweepReport::merge("jacobi", parts)
}

/// Checks `([b_i, b_j], b_k) = (b_i, [b_j, b_k])` on every ordered triple.
pub fn invariance_sweep(t: &ChevalleyTable) -> SweepReport {
    let parts = (0..DIM)
        .into_par_iter()
        .map(|i| {
            let (mut cases, mut failures, mut first) = (0u64, 0u64, None);
            for j in 0..DIM {
                let ij = t.basis_bracket(i, j);
                for k in 0..DIM {
                    cases += 1;
                    let lhs: i64 = ij.iter().map(|&(m, c)| c * t.basis_form(m, k)).sum();
                    let mut rhs = 0i64;
                    t.basis_bracket_with(j, k, |m, c| rhs += c * t.basis_form(i, m));
                    if lhs != rhs {
                        failures += 1;
                        first = first.or(Some((i, j, k)));
                    }
                }
            }
            (cases, failures, first)
        })
        .collect();
    SweepReport::merge("invariance", parts)
}

/// A random sparse element with small rational coefficients.
pub fn random_element(rng: &mut impl Rng, max_terms: usize) -> LieElement {
    let n = rng.gen_range(1..=max_terms);
    let mut x = LieElement::zero();
    for _ in 0..n {
        let num = rng.gen_range(-5..=5);
        let den = rng.gen_range(1..=4);
        x.add_term(rng.gen_range(0..DIM), qq(num, den));
    }
    x
}

/// Outcome of the sampled suite, with a CRC-32 transcript of every computed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledReport {
    pub seed: u64,
    pub samples: u64,
    pub jacobi_failures: u64,
    pub invariance_failures: u64,
    pub transcript: u32,
}

impl SampledReport {
    pub fn pass(&self) -> bool {
        self.jacobi_failures == 0 && self.invariance_failures == 0
    }
}

/// Checks Jacobi and invariance on `n` random rational triples. Sample `k` draws
/// from stream `k` of a ChaCha generator keyed by `seed`, so the transcript does
/// not depend on the thread count.
pub fn sampled_sweep(t: &ChevalleyTable, seed: u64, n: u64) -> SampledReport {
    let results: Vec<(bool, bool, String)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let x = random_element(&mut rng, 4);
            let y = random_element(&mut rng, 4);
            let z = random_element(&mut rng, 4);
            let xy = bracket(t, &x, &y);
            let jac = bracket(t, &xy, &z) + bracket(t, &bracket(t, &y, &z), &x) + bracket(t, &bracket(t, &z, &x), &y);
            let lhs = invariant_form(t, &xy, &z);
            let rhs = invariant_form(t, &x, &bracket(t, &y, &z));
            let record = format!("{k}:{lhs};");
            (jac.is_zero(), (lhs - rhs).is_zero(), record)
        })
        .collect();
    let mut hasher = crc32fast::Hasher::new();
    let (mut jf, mut inf) = (0, 0);
    for (j, i, rec) in &results {
        jf += u64::from(!j);
        inf += u64::from(!i);
        hasher.update(rec.as_bytes());
    }
    SampledReport { seed, samples: n, jacobi_failures: jf, invariance_failures: inf, transcript: hasher.finalize() }
}
