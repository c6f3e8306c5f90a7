//! Ordered tuples of primitive parabolic matrices with a fixed product,
//! the Hurwitz moves acting on them, and orbit exploration.
//!
//! Factors are indexed in application order: the tuple `(M₁, …, Mₙ)` is a
//! factorization of `M` when the reversed product `Mₙ ⋯ M₂ M₁` equals `M`.
//! The Hurwitz move at `i` replaces the adjacent pair `(Mᵢ, Mᵢ₊₁)` by
//! `(Mᵢ₊₁, Mᵢ₊₁ Mᵢ Mᵢ₊₁⁻¹)`; its inverse replaces it by
//! `(Mᵢ⁻¹ Mᵢ₊₁ Mᵢ, Mᵢ)`. Both preserve the product and the primitive
//! parabolic class of every factor.

use crate::diophantine::min_norm_shift;
use crate::sl2z::{Mat2, ParabolicParams, Sign, Sl2zError};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("factor {index} is invalid: {source}")]
    InvalidFactor { index: usize, source: Sl2zError },
    #[error("product of the factors is {product}, expected {target}")]
    ProductMismatch { product: Mat2, target: Mat2 },
    #[error("move index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("conjugator {matrix} is not unimodular")]
    BadConjugator { matrix: Mat2 },
    #[error("max_nodes must be at least 1")]
    EmptyBudget,
}

/// An ordered tuple of primitive parabolic matrices together with their
/// product.
///
/// Invariants: every factor passes [`ParabolicParams::from_matrix`], and the
/// reversed product of the factors equals `target` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    factors: Vec<Mat2>,
    target: Mat2,
}

/// Reversed-order product `factors[n−1] ⋯ factors[0]` (identity when empty).
pub fn reversed_product(factors: &[Mat2]) -> Mat2 {
    factors
        .iter()
        .rev()
        .fold(Mat2::identity(), |acc, m| &acc * m)
}

impl Factorization {
    /// Validates the factors against an expected target.
    pub fn new(factors: Vec<Mat2>, target: Mat2) -> Result<Factorization, FactorizationError> {
        let f = Factorization::from_factors(factors)?;
        if f.target != target {
            return Err(FactorizationError::ProductMismatch {
                product: f.target,
                target,
            });
        }
        Ok(f)
    }

    /// Validates the factors and takes their product as the target.
    pub fn from_factors(factors: Vec<Mat2>) -> Result<Factorization, FactorizationError> {
        for (index, m) in factors.iter().enumerate() {
            ParabolicParams::from_matrix(m)
                .map_err(|source| FactorizationError::InvalidFactor { index, source })?;
        }
        let target = reversed_product(&factors);
        Ok(Factorization { factors, target })
    }

    /// Builds the factorization with the given parameters; valid by
    /// construction.
    pub fn from_params(params: &[ParabolicParams]) -> Factorization {
        let factors: Vec<Mat2> = params.iter().map(|p| p.matrix()).collect();
        let target = reversed_product(&factors);
        Factorization { factors, target }
    }

    fn from_parts_unchecked(factors: Vec<Mat2>, target: Mat2) -> Factorization {
        debug_assert_eq!(reversed_product(&factors), target);
        debug_assert!(factors.iter().all(|m| ParabolicParams::from_matrix(m).is_ok()));
        Factorization { factors, target }
    }

    pub fn factors(&self) -> &[Mat2] {
        &self.factors
    }

    pub fn target(&self) -> &Mat2 {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Recomputes the reversed-order product of the factors.
    pub fn product(&self) -> Mat2 {
        reversed_product(&self.factors)
    }

    /// The `(ε, c, d)` parameters of every factor, in tuple order.
    pub fn params(&self) -> Vec<ParabolicParams> {
        self.factors
            .iter()
            .map(|m| ParabolicParams::from_matrix(m).expect("factors are primitive parabolic"))
            .collect()
    }

    /// Canonical (non-negative) `d`-component of every factor.
    pub fn d_vector(&self) -> Vec<BigInt> {
        self.params().iter().map(|p| p.d().clone()).collect()
    }

    /// `c`-component of every factor, in the canonical sign convention.
    pub fn c_vector(&self) -> Vec<BigInt> {
        self.params().iter().map(|p| p.c().clone()).collect()
    }

    /// Replaces `(Mᵢ, Mᵢ₊₁)` by `(Mᵢ₊₁, Mᵢ₊₁ Mᵢ Mᵢ₊₁⁻¹)`.
    pub fn hurwitz_move(&self, i: usize) -> Result<Factorization, FactorizationError> {
        if i + 1 >= self.factors.len() {
            return Err(FactorizationError::IndexOutOfRange {
                index: i,
                len: self.factors.len(),
            });
        }
        let x = &self.factors[i];
        let y = &self.factors[i + 1];
        let conjugate = &(y * x) * &y.inverse();
        let mut factors = self.factors.clone();
        factors[i] = y.clone();
        factors[i + 1] = conjugate;
        Ok(Factorization::from_parts_unchecked(factors, self.target.clone()))
    }

    /// Replaces `(Mᵢ, Mᵢ₊₁)` by `(Mᵢ⁻¹ Mᵢ₊₁ Mᵢ, Mᵢ)`; exact inverse of
    /// [`Factorization::hurwitz_move`].
    pub fn inverse_hurwitz_move(&self, i: usize) -> Result<Factorization, FactorizationError> {
        if i + 1 >= self.factors.len() {
            return Err(FactorizationError::IndexOutOfRange {
                index: i,
                len: self.factors.len(),
            });
        }
        let x = &self.factors[i];
        let y = &self.factors[i + 1];
        let conjugate = &(&x.inverse() * y) * x;
        let mut factors = self.factors.clone();
        factors[i] = conjugate;
        factors[i + 1] = x.clone();
        Ok(Factorization::from_parts_unchecked(factors, self.target.clone()))
    }

    /// Conjugates every factor (and the target) by `by`.
    ///
    /// When `by` commutes with the target the result is a factorization of
    /// the same matrix; otherwise the new target is reported explicitly and
    /// flagged.
    pub fn global_conjugate(
        &self,
        by: &Mat2,
    ) -> Result<ConjugatedFactorization, FactorizationError> {
        if !by.is_unimodular() {
            return Err(FactorizationError::BadConjugator { matrix: by.clone() });
        }
        let factors: Vec<Mat2> = self.factors.iter().map(|m| m.conjugated_by(by)).collect();
        let target = self.target.conjugated_by(by);
        let target_changed = target != self.target;
        Ok(ConjugatedFactorization {
            factorization: Factorization::from_parts_unchecked(factors, target),
            target_changed,
        })
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "] -> {}", self.target)
    }
}

/// Result of [`Factorization::global_conjugate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatedFactorization {
    pub factorization: Factorization,
    /// True when the conjugator does not commute with the target, so the
    /// product moved to a different (conjugate) matrix.
    pub target_changed: bool,
}

/// Canonicalized closure of a factorization under Hurwitz moves and global
/// conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Canonical representatives, sorted.
    pub representatives: Vec<Factorization>,
    /// Number of move/conjugation applications performed.
    pub move_count: u64,
    /// True when the node budget was exhausted before the closure was
    /// complete.
    pub truncated: bool,
}

impl OrbitReport {
    /// Exact membership among the stored canonical representatives.
    pub fn contains(&self, f: &Factorization) -> bool {
        self.representatives.contains(f)
    }
}

/// If `m = ±[[1, 0], [k, 1]]` for some `k ≠ 0`, returns `k`.
///
/// Conjugating a factorization by such a matrix shifts every factor's `c`
/// by `k·d` and is the one conjugation direction with infinite orbits that
/// can be quotiented out exactly.
fn lower_shear_exponent(m: &Mat2) -> Option<BigInt> {
    let pos = m.a.is_one() && m.d.is_one();
    let neg = m.a == BigInt::from(-1) && m.d == BigInt::from(-1);
    if m.b.is_zero() && (pos || neg) && !m.c.is_zero() {
        Some(if pos { m.c.clone() } else { -&m.c })
    } else {
        None
    }
}

fn canonical_shift_step(conjugators: &[Mat2]) -> Option<u64> {
    let mut step: Option<BigInt> = None;
    for m in conjugators {
        if let Some(k) = lower_shear_exponent(m) {
            let k = k.abs();
            step = Some(match step {
                Some(s) => num_integer::Integer::gcd(&s, &k),
                None => k,
            });
        }
    }
    step.and_then(|s| num_traits::ToPrimitive::to_u64(&s))
}

fn shift_canonicalize(f: &Factorization, step: u64) -> Factorization {
    let params = f.params();
    let c: Vec<BigInt> = params.iter().map(|p| p.c().clone()).collect();
    let d: Vec<BigInt> = params.iter().map(|p| p.d().clone()).collect();
    let k = min_norm_shift(&c, &d, step);
    if k.is_zero() {
        return f.clone();
    }
    let shear = Mat2::new(
        BigInt::one(),
        BigInt::zero(),
        k.clone(),
        BigInt::one(),
    );
    f.global_conjugate(&shear)
        .expect("shear is unimodular")
        .factorization
}

type OrbitKey = (Vec<(Sign, BigInt, BigInt)>, Vec<BigInt>);

fn orbit_key(f: &Factorization) -> OrbitKey {
    let params = f
        .params()
        .iter()
        .map(|p| (p.eps(), p.c().clone(), p.d().clone()))
        .collect();
    let target = f.target().entries().map(|e| e.clone()).to_vec();
    (params, target)
}

/// Breadth-first closure of `start` under Hurwitz moves (both directions at
/// every index) and global conjugation by each listed conjugator and its
/// inverse.
///
/// Nodes are canonicalized before deduplication: when a conjugator of the
/// form `±[[1, 0], [k, 1]]` is present, each node is replaced by its
/// minimal-max-norm shear conjugate, which makes orbits that are infinite
/// only in the shear direction finite. The search stops with
/// `truncated = true` once `max_nodes` representatives have been collected.
pub fn orbit_explore(
    start: &Factorization,
    conjugators: &[Mat2],
    max_nodes: usize,
) -> Result<OrbitReport, FactorizationError> {
    if max_nodes == 0 {
        return Err(FactorizationError::EmptyBudget);
    }
    let mut all_conjugators = Vec::new();
    for m in conjugators {
        let inv = m
            .try_inverse()
            .ok_or_else(|| FactorizationError::BadConjugator { matrix: m.clone() })?;
        all_conjugators.push(m.clone());
        if inv != *m {
            all_conjugators.push(inv);
        }
    }
    let step = canonical_shift_step(conjugators);
    let canon = |f: &Factorization| -> Factorization {
        match step {
            Some(s) => shift_canonicalize(f, s),
            None => f.clone(),
        }
    };

    let mut visited: BTreeMap<OrbitKey, Factorization> = BTreeMap::new();
    let mut queue: VecDeque<Factorization> = VecDeque::new();
    let mut move_count: u64 = 0;
    let mut truncated = false;

    let start_c = canon(start);
    visited.insert(orbit_key(&start_c), start_c.clone());
    queue.push_back(start_c);

    'bfs: while let Some(node) = queue.pop_front() {
        let mut neighbors: Vec<Factorization> = Vec::new();
        for i in 0..node.len().saturating_sub(1) {
            neighbors.push(node.hurwitz_move(i).expect("index in range"));
            neighbors.push(node.inverse_hurwitz_move(i).expect("index in range"));
        }
        for by in &all_conjugators {
            neighbors.push(node.global_conjugate(by).expect("validated").factorization);
        }
        for neighbor in neighbors {
            move_count += 1;
            let reduced = canon(&neighbor);
            let key = orbit_key(&reduced);
            if !visited.contains_key(&key) {
                if visited.len() >= max_nodes {
                    truncated = true;
                    break 'bfs;
                }
                visited.insert(key, reduced.clone());
                queue.push_back(reduced);
            }
        }
    }

    Ok(OrbitReport {
        representatives: visited.into_values().collect(),
        move_count,
        truncated,
    })
}
