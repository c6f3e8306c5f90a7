//! Solvers for the two Diophantine problems behind the factorization
//! pipelines.
//!
//! Two-point case: integer points on the hyperbola
//!
//! ```text
//! -ε (d₁² + d₂²) + 3 d₁ d₂ = 1,      ε = ±1.
//! ```
//!
//! For ε = +1 the solution set is `± Zⁿ d⁽ⁱ⁾` where `Z = [[21, -8], [8, -3]]`
//! generates the group of integral isometries of the form and the base
//! vectors are `(1,1)`, `(1,2)`, `(2,1)`. The matrix `S = [[2, -1], [-1, 1]]`
//! maps the ε = +1 set bijectively onto the ε = −1 set. Given a solution
//! `(d₁, d₂)`, the unique matching `c`-vector is `c₁ = 8d₁ − 3εd₂`,
//! `c₂ = −d₂ + 3εd₁`.
//!
//! Three-point case: Markov's equation
//!
//! ```text
//! d₁² + d₂² + d₃² − 3 d₁ d₂ d₃ = 0,
//! ```
//!
//! whose positive solutions form a tree rooted at `(1,1,1)` under
//! permutations and Vieta jumping. For a Markov vector `d` the linear system
//! `c × d = 3 (d₁, d₂ − 3d₁d₃, d₃)` has integer solutions `c + k·d`, `k ∈ ℤ`.

use crate::sl2z::{Mat2, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Largest accepted brute-force bound. Keeps the i64 fast path exact:
/// every intermediate below is at most `5·LIMIT² < 2⁶³`.
pub const BRUTE_FORCE_LIMIT: i64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("bound {bound} is out of range (0..={limit})")]
    BoundOutOfRange { bound: i64, limit: i64 },
    #[error("max component must be at least 1, got {given}")]
    InvalidMaxComponent { given: i64 },
    #[error("({d1}, {d2}) does not satisfy the eps = {eps} hyperbola equation")]
    NotOnHyperbola { eps: Sign, d1: BigInt, d2: BigInt },
    #[error("expected an eps = {expected} solution")]
    WrongEps { expected: Sign },
    #[error("({d1}, {d2}, {d3}) is not a Markov triple: {reason}")]
    NotMarkov {
        d1: BigInt,
        d2: BigInt,
        d3: BigInt,
        reason: &'static str,
    },
    #[error("the linear system has no integer solution: {d} does not satisfy Markov's equation")]
    NoSolution { d: Vec3 },
}

/// `Q_ε(d₁, d₂) = -ε(d₁² + d₂²) + 3d₁d₂`.
pub fn hyperbola_form(eps: Sign, d1: &BigInt, d2: &BigInt) -> BigInt {
    -eps.apply(&(d1 * d1 + d2 * d2)) + 3 * d1 * d2
}

fn hyperbola_form_i64(eps: i64, d1: i64, d2: i64) -> i64 {
    -eps * (d1 * d1 + d2 * d2) + 3 * d1 * d2
}

/// An integer point on the hyperbola `Q_ε(d₁, d₂) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperbolaSolution {
    d1: BigInt,
    d2: BigInt,
    eps: Sign,
}

impl HyperbolaSolution {
    pub fn new(eps: Sign, d1: BigInt, d2: BigInt) -> Result<HyperbolaSolution, DiophantineError> {
        if !hyperbola_form(eps, &d1, &d2).is_one() {
            return Err(DiophantineError::NotOnHyperbola { eps, d1, d2 });
        }
        Ok(HyperbolaSolution { d1, d2, eps })
    }

    pub fn from_i64(eps: Sign, d1: i64, d2: i64) -> Result<HyperbolaSolution, DiophantineError> {
        HyperbolaSolution::new(eps, BigInt::from(d1), BigInt::from(d2))
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn d1(&self) -> &BigInt {
        &self.d1
    }

    pub fn d2(&self) -> &BigInt {
        &self.d2
    }
}

impl fmt::Display for HyperbolaSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// All solutions of `Q_ε(d) = 1` with `|d₁|, |d₂| ≤ bound`, in lexicographic
/// order.
pub fn hyperbola_brute_force(
    eps: Sign,
    bound: i64,
) -> Result<Vec<HyperbolaSolution>, DiophantineError> {
    if !(0..=BRUTE_FORCE_LIMIT).contains(&bound) {
        return Err(DiophantineError::BoundOutOfRange {
            bound,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let e = eps.value();
    let mut solutions: Vec<(i64, i64)> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|d1| {
            (-bound..=bound).filter_map(move |d2| {
                (hyperbola_form_i64(e, d1, d2) == 1).then_some((d1, d2))
            })
        })
        .collect();
    solutions.sort_unstable();
    Ok(solutions
        .into_iter()
        .map(|(d1, d2)| HyperbolaSolution {
            d1: BigInt::from(d1),
            d2: BigInt::from(d2),
            eps,
        })
        .collect())
}

/// The orbit `{± Zⁿ d⁽ⁱ⁾ : |n| ≤ n_max}` of the three base vectors under the
/// isometry `Z = [[21, -8], [8, -3]]`; every element is an ε = +1 solution.
pub fn hyperbola_generate(n_max: u32) -> Vec<HyperbolaSolution> {
    let z = Mat2::from([21, -8, 8, -3]);
    let bases: [(i64, i64); 3] = [(1, 1), (1, 2), (2, 1)];
    let mut set = BTreeSet::new();
    for n in -(n_max as i64)..=n_max as i64 {
        let zn = z.pow(n);
        for &(x, y) in &bases {
            let (d1, d2) = zn.apply_vec(&BigInt::from(x), &BigInt::from(y));
            let sol = HyperbolaSolution::new(Sign::Plus, d1.clone(), d2.clone())
                .expect("Z preserves the form");
            let neg = HyperbolaSolution::new(Sign::Plus, -d1, -d2).unwrap();
            set.insert(sol);
            set.insert(neg);
        }
    }
    set.into_iter().collect()
}

/// `S = [[2, -1], [-1, 1]]` maps ε = +1 solutions to ε = −1 solutions.
pub fn s_transform(sol: &HyperbolaSolution) -> Result<HyperbolaSolution, DiophantineError> {
    if sol.eps != Sign::Plus {
        return Err(DiophantineError::WrongEps {
            expected: Sign::Plus,
        });
    }
    let s = Mat2::from([2, -1, -1, 1]);
    let (d1, d2) = s.apply_vec(&sol.d1, &sol.d2);
    HyperbolaSolution::new(Sign::Minus, d1, d2)
}

/// Inverse of [`s_transform`].
pub fn s_transform_inverse(
    sol: &HyperbolaSolution,
) -> Result<HyperbolaSolution, DiophantineError> {
    if sol.eps != Sign::Minus {
        return Err(DiophantineError::WrongEps {
            expected: Sign::Minus,
        });
    }
    let s_inv = Mat2::from([1, 1, 1, 2]);
    let (d1, d2) = s_inv.apply_vec(&sol.d1, &sol.d2);
    HyperbolaSolution::new(Sign::Plus, d1, d2)
}

/// The unique `(c₁, c₂)` completing a hyperbola solution to a solution of
/// the full two-point system: `c₁ = 8d₁ − 3εd₂`, `c₂ = −d₂ + 3εd₁`.
pub fn c_from_d_twopoint(
    eps: Sign,
    d1: &BigInt,
    d2: &BigInt,
) -> Result<(BigInt, BigInt), DiophantineError> {
    if !hyperbola_form(eps, d1, d2).is_one() {
        return Err(DiophantineError::NotOnHyperbola {
            eps,
            d1: d1.clone(),
            d2: d2.clone(),
        });
    }
    let c1 = 8 * d1 - 3 * eps.apply(d2);
    let c2 = -d2 + 3 * eps.apply(d1);
    Ok((c1, c2))
}

/// Checks all four equations of the two-point system (the half-integer
/// equation in its doubled form).
pub fn two_point_system_holds(
    eps: Sign,
    c1: &BigInt,
    c2: &BigInt,
    d1: &BigInt,
    d2: &BigInt,
) -> bool {
    hyperbola_form(eps, c1, c2).is_one()
        && hyperbola_form(eps, d1, d2).is_one()
        && -2 * eps.apply(&(c1 * d1 + c2 * d2)) + 3 * (c1 * d2 + c2 * d1) == BigInt::from(7)
        && c1 * d2 - c2 * d1 == BigInt::from(3)
}

/// `m(d) = d₁² + d₂² + d₃² − 3 d₁ d₂ d₃`.
pub fn markov_form(d1: &BigInt, d2: &BigInt, d3: &BigInt) -> BigInt {
    d1 * d1 + d2 * d2 + d3 * d3 - 3 * d1 * d2 * d3
}

/// A positive solution of Markov's equation, stored sorted ascending.
///
/// The pairwise coprimality of the components is a consequence of the
/// equation; the constructor asserts it rather than assuming it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple {
    d1: BigInt,
    d2: BigInt,
    d3: BigInt,
}

impl MarkovTriple {
    /// Builds a triple from components in any order.
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<MarkovTriple, DiophantineError> {
        let mut v = [a, b, c];
        v.sort();
        let [d1, d2, d3] = v;
        let fail = |reason| DiophantineError::NotMarkov {
            d1: d1.clone(),
            d2: d2.clone(),
            d3: d3.clone(),
            reason,
        };
        if !d1.is_positive() {
            return Err(fail("components must be positive"));
        }
        if !markov_form(&d1, &d2, &d3).is_zero() {
            return Err(fail("equation does not hold"));
        }
        if !d1.gcd(&d2).is_one() || !d1.gcd(&d3).is_one() || !d2.gcd(&d3).is_one() {
            return Err(fail("components are not pairwise coprime"));
        }
        Ok(MarkovTriple { d1, d2, d3 })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<MarkovTriple, DiophantineError> {
        MarkovTriple::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }

    pub fn components(&self) -> [&BigInt; 3] {
        [&self.d1, &self.d2, &self.d3]
    }

    pub fn max_component(&self) -> &BigInt {
        &self.d3
    }

    /// The triple as an ordered (ascending) vector.
    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(self.d1.clone(), self.d2.clone(), self.d3.clone())
    }

    /// Vieta mutation in one slot of the ordered triple: replaces the chosen
    /// component by the other root of its quadratic.
    pub fn mutate(&self, slot: usize) -> MarkovTriple {
        let [a, b, c] = [&self.d1, &self.d2, &self.d3];
        let (x, y, z) = match slot {
            0 => (3 * b * c - a, b.clone(), c.clone()),
            1 => (a.clone(), 3 * a * c - b, c.clone()),
            2 => (a.clone(), b.clone(), 3 * a * b - c),
            _ => panic!("slot out of range"),
        };
        MarkovTriple::new(x, y, z).expect("Vieta mutation of a Markov triple is a Markov triple")
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.d1, self.d2, self.d3)
    }
}

/// The middle Vieta jump `v(d) = (d₁, 3d₁d₃ − d₂, d₃)` on an ordered vector;
/// `v² = id`.
pub fn vieta_middle(d: &Vec3) -> Vec3 {
    Vec3::new(d.x.clone(), 3 * &d.x * &d.z - &d.y, d.z.clone())
}

/// All Markov triples with largest component at most `max_component`,
/// sorted ascending.
///
/// Iterates `d₁ ≤ d₂` and solves the quadratic in `d₃` with an exact
/// integer-square-root discriminant test.
pub fn markov_brute_force(max_component: i64) -> Result<Vec<MarkovTriple>, DiophantineError> {
    if max_component < 1 {
        return Err(DiophantineError::InvalidMaxComponent {
            given: max_component,
        });
    }
    if max_component > BRUTE_FORCE_LIMIT {
        return Err(DiophantineError::BoundOutOfRange {
            bound: max_component,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let b = max_component;
    let mut found: Vec<(i64, i64, i64)> = (1..=b)
        .into_par_iter()
        .flat_map_iter(|d1| {
            (d1..=b).flat_map(move |d2| {
                // d3² − 3·d1·d2·d3 + (d1² + d2²) = 0
                let (p, q) = (d1 as i128, d2 as i128);
                let disc = 9 * p * p * q * q - 4 * (p * p + q * q);
                let mut roots = Vec::new();
                if disc >= 0 {
                    let s = (disc as u128).isqrt() as i128;
                    if s * s == disc {
                        for root2 in [3 * p * q - s, 3 * p * q + s] {
                            if root2 % 2 == 0 {
                                let d3 = root2 / 2;
                                if d3 >= q && d3 <= b as i128 {
                                    roots.push((d1, d2, d3 as i64));
                                }
                            }
                        }
                    }
                }
                roots.dedup();
                roots.into_iter()
            })
        })
        .collect();
    found.sort_unstable();
    found
        .into_iter()
        .map(|(a, b, c)| MarkovTriple::from_i64(a, b, c))
        .collect()
}

/// A node of the Markov tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovNode {
    pub triple: MarkovTriple,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: u32,
}

/// The Markov number tree, rooted at `(1, 1, 1)`, in breadth-first order.
///
/// Children of a sorted triple are its sorted Vieta mutations, excluding the
/// parent and anything not strictly larger in max-component, so the tree
/// never revisits a triple. The root's three mutations coincide, so
/// `(1, 1, 1)` has a single child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovTree {
    nodes: Vec<MarkovNode>,
}

enum TreeCutoff<'a> {
    Depth(u32),
    MaxComponent(&'a BigInt),
}

impl MarkovTree {
    fn grow(cutoff: TreeCutoff<'_>) -> MarkovTree {
        let root = MarkovTriple::from_i64(1, 1, 1).unwrap();
        if let TreeCutoff::MaxComponent(b) = &cutoff {
            if root.max_component() > b {
                return MarkovTree { nodes: Vec::new() };
            }
        }
        let mut nodes = vec![MarkovNode {
            triple: root,
            parent: None,
            children: Vec::new(),
            depth: 0,
        }];
        let mut cursor = 0;
        while cursor < nodes.len() {
            let depth = nodes[cursor].depth;
            if let TreeCutoff::Depth(d) = cutoff {
                if depth == d {
                    cursor += 1;
                    continue;
                }
            }
            let triple = nodes[cursor].triple.clone();
            let mut children: Vec<MarkovTriple> = (0..3)
                .map(|slot| triple.mutate(slot))
                .filter(|child| child.max_component() > triple.max_component())
                .collect();
            children.sort();
            children.dedup();
            for child in children {
                if let TreeCutoff::MaxComponent(b) = &cutoff {
                    if child.max_component() > b {
                        continue;
                    }
                }
                let idx = nodes.len();
                nodes[cursor].children.push(idx);
                nodes.push(MarkovNode {
                    triple: child,
                    parent: Some(cursor),
                    children: Vec::new(),
                    depth: depth + 1,
                });
            }
            cursor += 1;
        }
        MarkovTree { nodes }
    }

    pub fn nodes(&self) -> &[MarkovNode] {
        &self.nodes
    }

    pub fn triples(&self) -> impl Iterator<Item = &MarkovTriple> {
        self.nodes.iter().map(|n| &n.triple)
    }

    /// All triples, sorted ascending.
    pub fn sorted_triples(&self) -> Vec<MarkovTriple> {
        let mut v: Vec<MarkovTriple> = self.triples().cloned().collect();
        v.sort();
        v
    }
}

/// Breadth-first Markov tree down to the given depth (depth 0 = root only).
pub fn markov_tree(depth: u32) -> MarkovTree {
    MarkovTree::grow(TreeCutoff::Depth(depth))
}

/// The full Markov tree truncated to triples with max component ≤ `bound`.
pub fn markov_tree_bounded(bound: &BigInt) -> MarkovTree {
    MarkovTree::grow(TreeCutoff::MaxComponent(bound))
}

/// An integer 3-vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3 {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl Vec3 {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Vec3 {
        Vec3 { x, y, z }
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Vec3 {
        Vec3::new(BigInt::from(x), BigInt::from(y), BigInt::from(z))
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            &self.y * &other.z - &self.z * &other.y,
            &self.z * &other.x - &self.x * &other.z,
            &self.x * &other.y - &self.y * &other.x,
        )
    }

    pub fn dot(&self, other: &Vec3) -> BigInt {
        &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    pub fn add(&self, other: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &other.x, &self.y + &other.y, &self.z + &other.z)
    }

    pub fn scaled(&self, k: &BigInt) -> Vec3 {
        Vec3::new(k * &self.x, k * &self.y, k * &self.z)
    }

    pub fn max_norm(&self) -> BigInt {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn components(&self) -> [&BigInt; 3] {
        [&self.x, &self.y, &self.z]
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Right-hand side of the three-point linear system: `3(d₁, d₂ − 3d₁d₃, d₃)`.
pub fn threepoint_rhs(d: &Vec3) -> Vec3 {
    Vec3::new(3 * &d.x, 3 * (&d.y - 3 * &d.x * &d.z), 3 * &d.z)
}

/// The canonical shift `k` (a multiple of `step`) minimizing the max-norm of
/// `c + k·d`, ties broken by the smaller `k`. With `step = 1` this is the
/// representative rule for `c` modulo `d`.
pub fn min_norm_shift(c: &[BigInt], d: &[BigInt], step: u64) -> BigInt {
    assert_eq!(c.len(), d.len());
    assert!(step > 0);
    let step = BigInt::from(step);
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (ci, di) in c.iter().zip(d) {
        if di.is_zero() {
            continue;
        }
        let t = -(ci / di);
        lo = Some(match lo {
            Some(l) => l.min(t.clone()),
            None => t.clone(),
        });
        hi = Some(match hi {
            Some(h) => h.max(t.clone()),
            None => t,
        });
    }
    let (lo, hi): (BigInt, BigInt) = match (lo, hi) {
        (Some(l), Some(h)) => (l - 2 * &step, h + 2 * &step),
        _ => return BigInt::zero(),
    };
    let norm_at = |k: &BigInt| -> BigInt {
        c.iter()
            .zip(d)
            .map(|(ci, di)| (ci + k * di).abs())
            .max()
            .unwrap()
    };
    let mut k = lo.div_floor(&step) * &step;
    let mut best_k = k.clone();
    let mut best = norm_at(&k);
    while k <= hi {
        let n = norm_at(&k);
        if n < best || (n == best && k < best_k) {
            best = n;
            best_k = k.clone();
        }
        k += &step;
    }
    best_k
}

/// A particular integer solution of `c × d = 3(d₁, d₂ − 3d₁d₃, d₃)`,
/// canonicalized by the minimal-max-norm representative of `c` modulo `d`.
/// The full solution set is `c + k·d`, `k ∈ ℤ`. Each pair `(cᵢ, dᵢ)` is
/// coprime.
pub fn solve_c_threepoint(d: &Vec3) -> Result<Vec3, DiophantineError> {
    let rhs = threepoint_rhs(d);
    if !d.x.is_positive() || !d.y.is_positive() || !d.z.is_positive()
        || !rhs.dot(d).is_zero()
    {
        return Err(DiophantineError::NoSolution { d: d.clone() });
    }
    // Pairwise coprimality (guaranteed for Markov vectors) makes the modular
    // solve below well-defined.
    if !d.x.gcd(&d.y).is_one() || !d.x.gcd(&d.z).is_one() || !d.y.gcd(&d.z).is_one() {
        return Err(DiophantineError::NoSolution { d: d.clone() });
    }
    // From c₁d₂ ≡ rhs₃ (mod d₁) the other two components follow exactly.
    let egcd = d.y.extended_gcd(&d.x);
    debug_assert!(egcd.gcd.is_one());
    let d2_inv = egcd.x.mod_floor(&d.x);
    let c1 = (&rhs.z * d2_inv).mod_floor(&d.x);
    let c2 = (&c1 * &d.y - &rhs.z) / &d.x;
    let c3 = (&c1 * &d.z + &rhs.y) / &d.x;
    let particular = Vec3::new(c1, c2, c3);
    debug_assert_eq!(particular.cross(d), rhs);
    let k = min_norm_shift(
        &[particular.x.clone(), particular.y.clone(), particular.z.clone()],
        &[d.x.clone(), d.y.clone(), d.z.clone()],
        1,
    );
    let canonical = particular.add(&d.scaled(&k));
    debug_assert_eq!(canonical.cross(d), rhs);
    debug_assert!(canonical.x.gcd(&d.x).is_one());
    debug_assert!(canonical.y.gcd(&d.y).is_one());
    debug_assert!(canonical.z.gcd(&d.z).is_one());
    Ok(canonical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn plus_solutions(bound: i64) -> Vec<(i64, i64)> {
        hyperbola_brute_force(Sign::Plus, bound)
            .unwrap()
            .iter()
            .map(|s| (s.d1().to_i64().unwrap(), s.d2().to_i64().unwrap()))
            .collect()
    }

    #[test]
    fn brute_force_small_boxes() {
        assert_eq!(
            plus_solutions(3),
            vec![(-2, -1), (-1, -2), (-1, -1), (1, 1), (1, 2), (2, 1)]
        );
        assert_eq!(plus_solutions(0), vec![]);
        let minus: Vec<(i64, i64)> = hyperbola_brute_force(Sign::Minus, 1)
            .unwrap()
            .iter()
            .map(|s| (s.d1().to_i64().unwrap(), s.d2().to_i64().unwrap()))
            .collect();
        assert_eq!(minus, vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);
    }

    #[test]
    fn brute_force_rejects_out_of_range() {
        assert!(hyperbola_brute_force(Sign::Plus, -1).is_err());
        assert!(hyperbola_brute_force(Sign::Plus, BRUTE_FORCE_LIMIT + 1).is_err());
    }

    #[test]
    fn generate_base_vectors() {
        let got = hyperbola_generate(0);
        let want: Vec<HyperbolaSolution> = [
            (-2, -1),
            (-1, -2),
            (-1, -1),
            (1, 1),
            (1, 2),
            (2, 1),
        ]
        .iter()
        .map(|&(a, b)| HyperbolaSolution::from_i64(Sign::Plus, a, b).unwrap())
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn generate_applies_isometry() {
        let z = Mat2::from([21, -8, 8, -3]);
        let (d1, d2) = z.apply_vec(&BigInt::from(1), &BigInt::from(1));
        assert_eq!((d1.clone(), d2.clone()), (BigInt::from(13), BigInt::from(5)));
        assert!(hyperbola_form(Sign::Plus, &d1, &d2).is_one());
        assert!(hyperbola_generate(1)
            .contains(&HyperbolaSolution::from_i64(Sign::Plus, 13, 5).unwrap()));
    }

    #[test]
    fn generate_agrees_with_brute_force_in_box() {
        let bound = 1000;
        let brute = hyperbola_brute_force(Sign::Plus, bound).unwrap();
        let b = BigInt::from(bound);
        let mut boxed: Vec<HyperbolaSolution> = hyperbola_generate(6)
            .into_iter()
            .filter(|s| s.d1().abs() <= b && s.d2().abs() <= b)
            .collect();
        boxed.sort();
        assert_eq!(boxed, brute);
    }

    #[test]
    fn s_transform_examples() {
        let cases = [((1, 1), (1, 0)), ((1, 2), (0, 1)), ((2, 1), (3, -1))];
        for ((a, b), (x, y)) in cases {
            let sol = HyperbolaSolution::from_i64(Sign::Plus, a, b).unwrap();
            let image = s_transform(&sol).unwrap();
            assert_eq!(image, HyperbolaSolution::from_i64(Sign::Minus, x, y).unwrap());
            assert_eq!(s_transform_inverse(&image).unwrap(), sol);
        }
    }

    #[test]
    fn s_transform_is_bijective_on_boxes() {
        // image box: |S| maps the bound-B box into the 3B box and vice versa
        let plus = hyperbola_brute_force(Sign::Plus, 100).unwrap();
        let minus = hyperbola_brute_force(Sign::Minus, 300).unwrap();
        let image: BTreeSet<HyperbolaSolution> =
            plus.iter().map(|s| s_transform(s).unwrap()).collect();
        assert!(image.is_subset(&minus.iter().cloned().collect()));
        // and every minus solution in the small box is hit from the larger plus box
        let minus_small = hyperbola_brute_force(Sign::Minus, 100).unwrap();
        let image_large: BTreeSet<HyperbolaSolution> =
            hyperbola_brute_force(Sign::Plus, 300)
                .unwrap()
                .iter()
                .map(|s| s_transform(s).unwrap())
                .collect();
        assert!(minus_small.iter().all(|s| image_large.contains(s)));
    }

    #[test]
    fn c_from_d_examples() {
        let one = BigInt::from(1);
        let two = BigInt::from(2);
        assert_eq!(
            c_from_d_twopoint(Sign::Plus, &one, &two).unwrap(),
            (BigInt::from(2), BigInt::from(1))
        );
        assert_eq!(
            c_from_d_twopoint(Sign::Plus, &one, &one).unwrap(),
            (BigInt::from(5), BigInt::from(2))
        );
        assert_eq!(
            c_from_d_twopoint(Sign::Plus, &two, &one).unwrap(),
            (BigInt::from(13), BigInt::from(5))
        );
        assert!(c_from_d_twopoint(Sign::Plus, &two, &two).is_err());
    }

    #[test]
    fn c_from_d_satisfies_full_system() {
        for eps in [Sign::Plus, Sign::Minus] {
            for sol in hyperbola_brute_force(eps, 50).unwrap() {
                let (c1, c2) = c_from_d_twopoint(eps, sol.d1(), sol.d2()).unwrap();
                assert!(two_point_system_holds(eps, &c1, &c2, sol.d1(), sol.d2()));
            }
        }
    }

    #[test]
    fn markov_brute_force_examples() {
        let tr = |v: &[(i64, i64, i64)]| -> Vec<MarkovTriple> {
            v.iter().map(|&(a, b, c)| MarkovTriple::from_i64(a, b, c).unwrap()).collect()
        };
        assert_eq!(markov_brute_force(2).unwrap(), tr(&[(1, 1, 1), (1, 1, 2)]));
        assert_eq!(
            markov_brute_force(34).unwrap(),
            tr(&[(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (1, 13, 34), (2, 5, 29)])
        );
        assert!(markov_brute_force(0).is_err());
        assert_eq!(markov_brute_force(1).unwrap(), tr(&[(1, 1, 1)]));
    }

    #[test]
    fn markov_brute_force_matches_naive_scan() {
        // independent O(B³) oracle
        let b = 200i64;
        let mut naive = Vec::new();
        for d1 in 1..=b {
            for d2 in d1..=b {
                for d3 in d2..=b {
                    if d1 * d1 + d2 * d2 + d3 * d3 == 3 * d1 * d2 * d3 {
                        naive.push(MarkovTriple::from_i64(d1, d2, d3).unwrap());
                    }
                }
            }
        }
        assert_eq!(markov_brute_force(b).unwrap(), naive);
    }

    #[test]
    fn markov_triple_validation() {
        assert!(MarkovTriple::from_i64(1, 1, 3).is_err());
        assert!(MarkovTriple::from_i64(0, 1, 1).is_err());
        assert!(MarkovTriple::from_i64(-1, -1, 1).is_err());
        // any input order is accepted and sorted
        assert_eq!(
            MarkovTriple::from_i64(5, 1, 2).unwrap(),
            MarkovTriple::from_i64(1, 2, 5).unwrap()
        );
    }

    #[test]
    fn tree_first_levels() {
        let t1 = markov_tree(1);
        let triples: Vec<&MarkovTriple> = t1.triples().collect();
        assert_eq!(triples.len(), 2);
        assert_eq!(*triples[0], MarkovTriple::from_i64(1, 1, 1).unwrap());
        assert_eq!(*triples[1], MarkovTriple::from_i64(1, 1, 2).unwrap());
        assert_eq!(t1.nodes()[1].parent, Some(0));

        let t3 = markov_tree(3);
        let set: BTreeSet<MarkovTriple> = t3.triples().cloned().collect();
        assert!(set.contains(&MarkovTriple::from_i64(1, 5, 13).unwrap()));
        assert!(set.contains(&MarkovTriple::from_i64(2, 5, 29).unwrap()));
        // both are children of (1, 2, 5)
        let parent_125 = t3
            .nodes()
            .iter()
            .position(|n| n.triple == MarkovTriple::from_i64(1, 2, 5).unwrap())
            .unwrap();
        let kids: Vec<&MarkovTriple> = t3.nodes()[parent_125]
            .children
            .iter()
            .map(|&i| &t3.nodes()[i].triple)
            .collect();
        assert_eq!(
            kids,
            vec![
                &MarkovTriple::from_i64(1, 5, 13).unwrap(),
                &MarkovTriple::from_i64(2, 5, 29).unwrap()
            ]
        );
    }

    #[test]
    fn vieta_middle_example() {
        let d = Vec3::from_i64(1, 2, 5);
        let v = vieta_middle(&d);
        assert_eq!(v, Vec3::from_i64(1, 13, 5));
        assert_eq!(
            MarkovTriple::new(v.x.clone(), v.y.clone(), v.z.clone()).unwrap(),
            MarkovTriple::from_i64(1, 5, 13).unwrap()
        );
        assert_eq!(vieta_middle(&v), d);
    }

    #[test]
    fn tree_matches_brute_force() {
        let bound = 1000;
        let tree = markov_tree_bounded(&BigInt::from(bound));
        assert_eq!(tree.sorted_triples(), markov_brute_force(bound).unwrap());
    }

    #[test]
    fn tree_triples_are_pairwise_coprime() {
        // MarkovTriple::new asserts coprimality; reaching depth 6 without a
        // panic is the test
        let tree = markov_tree(6);
        // 1 + 1 + 1 + 2 + 4 + 8 + 16 nodes
        assert_eq!(tree.nodes().len(), 33);
    }

    #[test]
    fn solve_c_examples() {
        let d = Vec3::from_i64(1, 1, 1);
        let c = solve_c_threepoint(&d).unwrap();
        assert_eq!(c, Vec3::from_i64(3, 0, -3));

        let d = Vec3::from_i64(1, 1, 2);
        let c = solve_c_threepoint(&d).unwrap();
        // congruent to (6, 0, -3) modulo d
        let diff = Vec3::from_i64(6, 0, -3);
        let k = (&diff.x - &c.x).clone();
        assert_eq!(c.add(&d.scaled(&k)), diff);

        assert!(solve_c_threepoint(&Vec3::from_i64(1, 1, 3)).is_err());
    }

    #[test]
    fn solve_c_on_tree_triples() {
        for triple in markov_tree(6).triples() {
            let d = triple.to_vec3();
            let c = solve_c_threepoint(&d).unwrap();
            assert_eq!(c.cross(&d), threepoint_rhs(&d));
        }
    }

    #[test]
    fn min_norm_shift_scalar_rule() {
        // (3, 0, -3) mod (1, 1, 1): k = 0 is already minimal
        let c = [BigInt::from(3), BigInt::from(0), BigInt::from(-3)];
        let d = [BigInt::from(1), BigInt::from(1), BigInt::from(1)];
        assert_eq!(min_norm_shift(&c, &d, 1), BigInt::zero());
        // (6, 0, -3) mod (1, 1, 2): k = -1 gives norm 5
        let c = [BigInt::from(6), BigInt::from(0), BigInt::from(-3)];
        let d = [BigInt::from(1), BigInt::from(1), BigInt::from(2)];
        assert_eq!(min_norm_shift(&c, &d, 1), BigInt::from(-1));
        // all-zero direction
        assert_eq!(
            min_norm_shift(&[BigInt::from(7)], &[BigInt::zero()], 1),
            BigInt::zero()
        );
    }

    proptest! {
        #[test]
        fn isometry_preserves_form(d1 in -1000i64..=1000, d2 in -1000i64..=1000) {
            let z = Mat2::from([21, -8, 8, -3]);
            let (x, y) = (BigInt::from(d1), BigInt::from(d2));
            let (zx, zy) = z.apply_vec(&x, &y);
            prop_assert_eq!(
                hyperbola_form(Sign::Plus, &zx, &zy),
                hyperbola_form(Sign::Plus, &x, &y)
            );
        }

        #[test]
        fn vieta_is_involutive(idx in 0usize..30) {
            let tree = markov_tree(4);
            let n = tree.nodes().len();
            let d = tree.nodes()[idx % n].triple.to_vec3();
            prop_assert_eq!(vieta_middle(&vieta_middle(&d)), d);
        }
    }
}
