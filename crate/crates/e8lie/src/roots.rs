//! The E8 root system in Bourbaki simple-root coordinates.
//!
//! Simple roots are numbered as in Bourbaki: the diagram is the chain
//! 1-3-4-5-6-7-8 with node 2 attached to node 4.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Rank of E8.
pub const RANK: usize = 8;

/// Edges of the Bourbaki E8 Dynkin diagram (1-based).
pub const DYNKIN_EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)];

/// The E8 Cartan matrix in Bourbaki numbering (0-based indices).
pub const fn cartan_matrix() -> [[i32; RANK]; RANK] {
    let mut c = [[0i32; RANK]; RANK];
    let mut i = 0;
    while i < RANK {
        c[i][i] = 2;
        i += 1;
    }
    let mut k = 0;
    while k < DYNKIN_EDGES.len() {
        let (a, b) = DYNKIN_EDGES[k];
        c[a - 1][b - 1] = -1;
        c[b - 1][a - 1] = -1;
        k += 1;
    }
    c
}

/// The Cartan matrix as a constant.
pub const CARTAN: [[i32; RANK]; RANK] = cartan_matrix();

/// An element of the root lattice, stored as coefficients over the simple roots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub [i32; RANK]);

impl Root {
    /// The simple root alpha_i, `i` in 1..=8.
    pub fn simple(i: usize) -> Root {
        assert!((1..=RANK).contains(&i), "simple root index {i} out of 1..=8");
        let mut c = [0; RANK];
        c[i - 1] = 1;
        Root(c)
    }

    /// Sum of the coefficients.
    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The coefficient nu_i, `i` in 1..=8.
    pub fn coefficient(&self, i: usize) -> i32 {
        assert!((1..=RANK).contains(&i), "coefficient index {i} out of 1..=8");
        self.0[i - 1]
    }

    /// Lattice sum (not necessarily a root).
    pub fn plus(&self, other: &Root) -> Root {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(other.0) {
            *x += y;
        }
        Root(c)
    }

    /// Lattice difference (not necessarily a root).
    pub fn minus(&self, other: &Root) -> Root {
        self.plus(&other.negate())
    }

    pub fn negate(&self) -> Root {
        Root(self.0.map(|x| -x))
    }

    /// The positive root among `self` and `-self`.
    pub fn abs(&self) -> Root {
        if self.is_positive() {
            *self
        } else {
            self.negate()
        }
    }

    /// The symmetric pairing (a, b) = a^T C b.
    pub fn pairing(&self, other: &Root) -> i32 {
        let mut s = 0;
        for i in 0..RANK {
            if self.0[i] == 0 {
                continue;
            }
            for j in 0..RANK {
                s += self.0[i] * CARTAN[i][j] * other.0[j];
            }
        }
        s
    }

    /// The value <self, alpha_i^vee> for `i` in 1..=8.
    pub fn pairing_simple(&self, i: usize) -> i32 {
        (0..RANK).map(|j| self.0[j] * CARTAN[j][i - 1]).sum()
    }
}

impl fmt::Display for Root {
    /// Compact label such as `12232111`, with a leading `-` for negative roots.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.abs();
        if !self.is_positive() && !self.is_zero() {
            write!(f, "-")?;
        }
        if a.0.iter().all(|&c| (0..10).contains(&c)) {
            for c in a.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", a.0)
        }
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({self})")
    }
}

impl FromStr for Root {
    type Err = String;

    /// Parses a compact label: eight decimal digits, optionally prefixed by `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        if digits.len() != RANK || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("root label {s:?} is not eight digits"));
        }
        let mut c = [0; RANK];
        for (k, b) in digits.bytes().enumerate() {
            c[k] = sign * i32::from(b - b'0');
        }
        Ok(Root(c))
    }
}

/// The 240 roots of E8 with index lookups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    /// All roots ordered by height, ties broken by decreasing lexicographic order.
    pub roots: Vec<Root>,
    /// The positive roots in the same order.
    pub positive: Vec<Root>,
    /// Lookup from positive root to its index in `positive`.
    pub positive_index: HashMap<Root, usize>,
    pub cartan: [[i32; RANK]; RANK],
}

/// Total order key: height first, then decreasing lexicographic order.
pub fn order_key(r: &Root) -> (i32, Reverse<[i32; RANK]>) {
    (r.height(), Reverse(r.0))
}

/// Builds the E8 root system by closing the simple roots under simple reflections
/// that raise height.
pub fn build_root_system() -> RootSystem {
    let simple: Vec<Root> = (1..=RANK).map(Root::simple).collect();
    let mut positive: Vec<Root> = simple.clone();
    let mut seen: std::collections::HashSet<Root> = simple.iter().copied().collect();
    let mut frontier = simple.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for s in &simple {
                if r.pairing(s) == -1 {
                    let t = r.plus(s);
                    if seen.insert(t) {
                        positive.push(t);
                        next.push(t);
                    }
                }
            }
        }
        frontier = next;
    }
    positive.sort_by_key(order_key);
    let mut roots: Vec<Root> = positive.iter().map(Root::negate).chain(positive.iter().copied()).collect();
    roots.sort_by_key(order_key);
    let positive_index = positive.iter().enumerate().map(|(k, r)| (*r, k)).collect();
    RootSystem { roots, positive, positive_index, cartan: CARTAN }
}

impl RootSystem {
    pub fn contains(&self, r: &Root) -> bool {
        self.positive_index.contains_key(&r.abs()) && !r.is_zero()
    }

    /// Index of `|r|` in the positive list.
    pub fn positive_position(&self, r: &Root) -> Option<usize> {
        if r.is_zero() {
            return None;
        }
        self.positive_index.get(&r.abs()).copied()
    }

    pub fn highest_root(&self) -> Root {
        *self.positive.last().expect("nonempty")
    }
}

/// Returns `a + b` when it is a root.
pub fn add_roots(rs: &RootSystem, a: &Root, b: &Root) -> Option<Root> {
    let s = a.plus(b);
    rs.contains(&s).then_some(s)
}

/// The coefficient of alpha_i in `a`, `i` in 1..=8.
pub fn coefficient(a: &Root, i: usize) -> i32 {
    a.coefficient(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_highest_root() {
        let rs = build_root_system();
        assert_eq!(rs.roots.len(), 240);
        assert_eq!(rs.positive.len(), 120);
        assert_eq!(rs.highest_root(), Root([2, 3, 4, 6, 5, 4, 3, 2]));
        assert!(rs.roots.iter().all(|r| (-29..=29).contains(&r.height()) && r.height() != 0));
    }

    #[test]
    fn cartan_is_e8() {
        let c = CARTAN;
        for i in 0..RANK {
            assert_eq!(c[i][i], 2);
            for j in 0..RANK {
                assert_eq!(c[i][j], c[j][i]);
                if i != j {
                    assert!(c[i][j] == 0 || c[i][j] == -1);
                }
            }
        }
        assert_eq!(c.iter().flatten().filter(|&&x| x == -1).count(), 14);
    }

    #[test]
    fn add_roots_examples() {
        let rs = build_root_system();
        let a2 = Root::simple(2);
        let a4 = Root::simple(4);
        assert_eq!(add_roots(&rs, &a2, &a4), Some(Root([0, 1, 0, 1, 0, 0, 0, 0])));
        assert_eq!(add_roots(&rs, &Root::simple(1), &a2), None);
        assert_eq!(add_roots(&rs, &a2, &a2.negate()), None);
    }

    #[test]
    fn coefficient_examples() {
        let rs = build_root_system();
        assert_eq!(coefficient(&rs.highest_root(), 3), 4);
        assert_eq!(coefficient(&Root::simple(1), 3), 0);
        assert_eq!(coefficient(&Root::simple(6), 6), 1);
    }

    #[test]
    #[should_panic]
    fn coefficient_out_of_range() {
        coefficient(&Root::simple(1), 9);
    }

    #[test]
    fn mixed_signs_never_occur() {
        let rs = build_root_system();
        for r in &rs.roots {
            assert!(r.0.iter().all(|&c| c >= 0) || r.0.iter().all(|&c| c <= 0));
            assert_eq!(r.pairing(r), 2);
        }
    }

    #[test]
    fn label_round_trip() {
        let r: Root = "12232111".parse().unwrap();
        assert_eq!(r, Root([1, 2, 2, 3, 2, 1, 1, 1]));
        assert_eq!(r.to_string(), "12232111");
        assert_eq!(r.negate().to_string(), "-12232111");
        assert_eq!("-12232111".parse::<Root>().unwrap(), r.negate());
        assert!("1223211".parse::<Root>().is_err());
    }

    #[test]
    fn ordering_is_height_then_decreasing_lex() {
        let rs = build_root_system();
        for w in rs.roots.windows(2) {
            assert!(order_key(&w[0]) < order_key(&w[1]));
        }
        assert_eq!(rs.positive[0], Root::simple(1));
        assert_eq!(rs.positive[7], Root::simple(8));
    }
}
