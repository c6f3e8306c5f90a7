//! Exact arithmetic for 2×2 unimodular integer matrices and the
//! parametrization of primitive parabolic elements.
//!
//! A primitive parabolic element of SL(2,ℤ) is a trace-2 matrix, other than
//! the identity, that is conjugate to `[[1, ±1], [0, 1]]`. Every such matrix
//! can be written as
//!
//! ```text
//! M = I + ε · [[ c·d,  d² ],
//!              [ -c², -c·d ]]        ε = ±1, gcd(c, d) = 1,
//! ```
//!
//! and the pair `(c, d)` is determined by `M` up to a simultaneous sign flip.
//! [`ParabolicParams`] stores the sign `ε` together with the canonical
//! representative of `(c, d)` (the one with `d > 0`, or `d = 0` and `c > 0`).
//!
//! All arithmetic is arbitrary precision, so no operation can overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;
use thiserror::Error;

/// Errors from matrix and parametrization operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Sl2zError {
    #[error("matrix has determinant {det}, expected +1 or -1")]
    NotUnimodular { det: BigInt },
    #[error("parameters c = {c}, d = {d} are not coprime")]
    NotCoprime { c: BigInt, d: BigInt },
    #[error("matrix is not a primitive parabolic: {reason}")]
    NotPrimitiveParabolic { reason: &'static str },
}

/// A sign, `+1` or `-1`.
///
/// The `Ord` instance (`Minus < Plus`) is only used to make sorted output
/// deterministic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// Sign of a nonzero integer.
    pub fn of(value: &BigInt) -> Option<Sign> {
        match value.sign() {
            num_bigint::Sign::Plus => Some(Sign::Plus),
            num_bigint::Sign::Minus => Some(Sign::Minus),
            num_bigint::Sign::NoSign => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.value())
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other { Sign::Plus } else { Sign::Minus }
    }

    /// `self · x`.
    pub fn apply(self, x: &BigInt) -> BigInt {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.flipped()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(format!("expected +1 or -1, got `{other}`")),
        }
    }
}

/// A 2×2 integer matrix `[[a, b], [c, d]]`.
///
/// The type itself places no restriction on the entries; operations that
/// need a group element (inverses, conjugation) check `|det| = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        Mat2::from([1, 0, 0, 1])
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_unimodular(&self) -> bool {
        let det = self.det();
        det.is_one() || det == BigInt::from(-1)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// Exact inverse, defined only when `det = ±1`.
    pub fn try_inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_one() {
            Some(Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone()))
        } else if det == BigInt::from(-1) {
            Some(Mat2::new(-&self.d, self.b.clone(), self.c.clone(), -&self.a))
        } else {
            None
        }
    }

    /// Exact inverse.
    ///
    /// Panics if `|det| != 1`; use [`Mat2::try_inverse`] to validate
    /// untrusted input.
    pub fn inverse(&self) -> Mat2 {
        self.try_inverse().expect("matrix is not unimodular")
    }

    /// `by⁻¹ · self · by`. Trace and determinant are preserved.
    ///
    /// Panics if `by` is not unimodular.
    pub fn conjugated_by(&self, by: &Mat2) -> Mat2 {
        &(&by.inverse() * self) * by
    }

    /// Integer power, with negative exponents via the inverse.
    pub fn pow(&self, n: i64) -> Mat2 {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = Mat2::identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Matrix–vector product.
    pub fn apply_vec(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl From<[i64; 4]> for Mat2 {
    fn from(m: [i64; 4]) -> Mat2 {
        Mat2::new(
            BigInt::from(m[0]),
            BigInt::from(m[1]),
            BigInt::from(m[2]),
            BigInt::from(m[3]),
        )
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        -&self
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// The `(ε, c, d)` parameters of a primitive parabolic matrix.
///
/// Invariants, enforced by every constructor: `gcd(c, d) = 1`, and the sign
/// is canonical (`d > 0`, or `d = 0` and `c > 0`). `(−c, −d)` describes the
/// same matrix, so exactly one representative is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicParams {
    eps: Sign,
    c: BigInt,
    d: BigInt,
}

impl ParabolicParams {
    pub fn new(eps: Sign, c: BigInt, d: BigInt) -> Result<ParabolicParams, Sl2zError> {
        if !c.gcd(&d).is_one() {
            return Err(Sl2zError::NotCoprime { c, d });
        }
        let (c, d) = if d.is_negative() || (d.is_zero() && c.is_negative()) {
            (-c, -d)
        } else {
            (c, d)
        };
        Ok(ParabolicParams { eps, c, d })
    }

    pub fn from_i64(eps: Sign, c: i64, d: i64) -> Result<ParabolicParams, Sl2zError> {
        ParabolicParams::new(eps, BigInt::from(c), BigInt::from(d))
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// The matrix `I + ε·[[cd, d²], [−c², −cd]]`; it has trace 2 and
    /// determinant 1.
    pub fn matrix(&self) -> Mat2 {
        let e = self.eps.to_bigint();
        let cd = &self.c * &self.d;
        Mat2::new(
            1 + &e * &cd,
            &e * &self.d * &self.d,
            -(&e * &self.c * &self.c),
            1 - &e * &cd,
        )
    }

    /// Inverts the parametrization.
    ///
    /// Writes `m − I = [[p, q], [r, −p]]` and recovers `ε` from the sign of
    /// `q` (or of `−r` when `q = 0`), then `d² = εq`, `c² = −εr`, with the
    /// sign of `c` fixed by `εcd = p`. Rejects the identity, any matrix with
    /// `det ≠ 1` or trace ≠ 2, non-square entries, and imprimitive
    /// parabolics (`gcd(c, d) > 1`).
    pub fn from_matrix(m: &Mat2) -> Result<ParabolicParams, Sl2zError> {
        if !m.det().is_one() {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "determinant is not +1",
            });
        }
        if m.trace() != BigInt::from(2) {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "trace is not 2",
            });
        }
        if m.is_identity() {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "the identity is excluded",
            });
        }
        let p = &m.a - 1;
        let q = &m.b;
        let r = &m.c;
        let eps = match Sign::of(q) {
            Some(s) => s,
            None => Sign::of(r)
                .ok_or(Sl2zError::NotPrimitiveParabolic {
                    reason: "off-diagonal entries are zero",
                })?
                .flipped(),
        };
        let d_sq = eps.apply(q);
        let c_sq = -eps.apply(r);
        if d_sq.is_negative() || c_sq.is_negative() {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "entries have the wrong sign pattern",
            });
        }
        let d = d_sq.sqrt();
        if &d * &d != d_sq {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "d² entry is not a perfect square",
            });
        }
        let c_abs = c_sq.sqrt();
        if &c_abs * &c_abs != c_sq {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "c² entry is not a perfect square",
            });
        }
        let c = if eps.apply(&(&c_abs * &d)) == p {
            c_abs
        } else if eps.apply(&(-&c_abs * &d)) == p {
            -c_abs
        } else {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "diagonal entry does not match ±cd",
            });
        };
        if !c.gcd(&d).is_one() {
            return Err(Sl2zError::NotPrimitiveParabolic {
                reason: "parameters are not coprime (imprimitive parabolic)",
            });
        }
        ParabolicParams::new(eps, c, d)
    }

    /// Parameters of `by⁻¹ · M(self) · by`.
    ///
    /// Conjugation preserves primitivity, so this always succeeds: the
    /// parameter vector transforms by the transpose of `by` and the sign
    /// `ε` is multiplied by `det(by)`.
    ///
    /// Panics if `by` is not unimodular.
    pub fn conjugated_by(&self, by: &Mat2) -> ParabolicParams {
        let det = by.det();
        let det_sign = if det.is_one() {
            Sign::Plus
        } else if det == BigInt::from(-1) {
            Sign::Minus
        } else {
            panic!("conjugator is not unimodular");
        };
        let (c, d) = by.transpose().apply_vec(&self.c, &self.d);
        let result = ParabolicParams::new(self.eps.times(det_sign), c, d)
            .expect("unimodular conjugation preserves coprimality");
        debug_assert_eq!(
            result,
            ParabolicParams::from_matrix(&self.matrix().conjugated_by(by)).unwrap()
        );
        result
    }
}

impl fmt::Display for ParabolicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.eps, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: [i64; 4]) -> Mat2 {
        Mat2::from(e)
    }

    #[test]
    fn mul_identity() {
        let i = Mat2::identity();
        assert_eq!(&i * &i, i);
    }

    #[test]
    fn mul_corner_pieces() {
        // the cycle swap times the gluing matrix
        let swap = m([0, 1, 1, 0]);
        let glue = m([1, 0, -7, -1]);
        assert_eq!(&swap * &glue, m([-7, -1, 1, 0]));
    }

    #[test]
    fn mul_two_point_pair() {
        let m2 = m([3, 4, -1, -1]);
        let m1 = m([3, 1, -4, -1]);
        assert_eq!(&m2 * &m1, m([-7, -1, 1, 0]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Mat2::identity().inverse(), Mat2::identity());
        assert_eq!(m([3, 1, -4, -1]).inverse(), m([-1, -1, 4, 3]));
        // det = -1 involution
        assert_eq!(m([-1, 0, 0, 1]).inverse(), m([-1, 0, 0, 1]));
    }

    #[test]
    fn inverse_roundtrip() {
        for e in [[3, 1, -4, -1], [6, 1, -25, -4], [0, 1, 1, 0], [-1, 0, 0, 1]] {
            let x = m(e);
            assert_eq!(&x * &x.inverse(), Mat2::identity());
        }
    }

    #[test]
    fn conjugate_examples() {
        let a = m([1, 0, 1, 1]);
        assert_eq!(Mat2::identity().conjugated_by(&a), Mat2::identity());
        assert_eq!(m([1, 1, 0, 1]).conjugated_by(&a), m([2, 1, -1, 0]));
        let c = m([-1, 0, 0, 1]);
        assert_eq!(m([1, 0, 9, 1]).conjugated_by(&c), m([1, 0, -9, 1]));
    }

    #[test]
    fn conjugation_by_center_is_trivial() {
        let minus_i = m([-1, 0, 0, -1]);
        for e in [[1, 1, 0, 1], [3, 1, -4, -1], [-7, -1, 1, 0]] {
            let x = m(e);
            assert_eq!(x.conjugated_by(&minus_i), x);
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let z = m([21, -8, 8, -3]);
        assert_eq!(z.pow(0), Mat2::identity());
        assert_eq!(z.pow(1), z);
        assert_eq!(z.pow(3), &(&z * &z) * &z);
        assert_eq!(&z.pow(-2) * &z.pow(2), Mat2::identity());
    }

    #[test]
    fn parabolic_matrix_examples() {
        let t = ParabolicParams::from_i64(Sign::Plus, 0, 1).unwrap();
        assert_eq!(t.matrix(), m([1, 1, 0, 1]));
        let m1 = ParabolicParams::from_i64(Sign::Plus, 2, 1).unwrap();
        assert_eq!(m1.matrix(), m([3, 1, -4, -1]));
        let m2 = ParabolicParams::from_i64(Sign::Plus, 1, 2).unwrap();
        assert_eq!(m2.matrix(), m([3, 4, -1, -1]));
    }

    #[test]
    fn parabolic_matrix_rejects_non_coprime() {
        assert_eq!(
            ParabolicParams::from_i64(Sign::Plus, 2, 4),
            Err(Sl2zError::NotCoprime {
                c: BigInt::from(2),
                d: BigInt::from(4)
            })
        );
        assert!(ParabolicParams::from_i64(Sign::Plus, 0, 0).is_err());
    }

    #[test]
    fn params_from_matrix_examples() {
        assert_eq!(
            ParabolicParams::from_matrix(&m([1, 1, 0, 1])).unwrap(),
            ParabolicParams::from_i64(Sign::Plus, 0, 1).unwrap()
        );
        assert!(ParabolicParams::from_matrix(&Mat2::identity()).is_err());
        // imprimitive: c² = 9 with d = 0
        assert_eq!(
            ParabolicParams::from_matrix(&m([1, 0, 9, 1])),
            Err(Sl2zError::NotPrimitiveParabolic {
                reason: "parameters are not coprime (imprimitive parabolic)"
            })
        );
    }

    #[test]
    fn imprimitive_is_not_hit_by_any_small_params() {
        // oracle for the rejection above: no (ε, c, d) in the grid produces
        // [[1, 0], [9, 1]]
        let target = m([1, 0, 9, 1]);
        for c in -10i64..=10 {
            for d in -10i64..=10 {
                for eps in [Sign::Plus, Sign::Minus] {
                    if let Ok(p) = ParabolicParams::from_i64(eps, c, d) {
                        assert_ne!(p.matrix(), target);
                    }
                }
            }
        }
    }

    #[test]
    fn conj_params_examples() {
        let a = m([1, 0, 1, 1]);
        let p = ParabolicParams::from_i64(Sign::Plus, 0, 1).unwrap();
        assert_eq!(
            p.conjugated_by(&a),
            ParabolicParams::from_i64(Sign::Plus, 1, 1).unwrap()
        );
        assert_eq!(p.conjugated_by(&Mat2::identity()), p);
        // det(C) = -1 swaps the two primitive classes: ε flips along with c
        let c = m([-1, 0, 0, 1]);
        let q = ParabolicParams::from_i64(Sign::Plus, 2, 1).unwrap();
        assert_eq!(
            q.conjugated_by(&c),
            ParabolicParams::from_i64(Sign::Minus, -2, 1).unwrap()
        );
    }

    #[test]
    fn roundtrip_on_grid() {
        for c in -20i64..=20 {
            for d in -20i64..=20 {
                for eps in [Sign::Plus, Sign::Minus] {
                    if let Ok(p) = ParabolicParams::from_i64(eps, c, d) {
                        let back = ParabolicParams::from_matrix(&p.matrix()).unwrap();
                        assert_eq!(back, p);
                    }
                }
            }
        }
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (-60i64..=60, -60i64..=60)
            .prop_filter("coprime", |(c, d)| BigInt::from(*c).gcd(&BigInt::from(*d)).is_one())
    }

    proptest! {
        #[test]
        fn sign_quotient((c, d) in coprime_pair(), plus in any::<bool>()) {
            let eps = if plus { Sign::Plus } else { Sign::Minus };
            let p = ParabolicParams::from_i64(eps, c, d).unwrap();
            let q = ParabolicParams::from_i64(eps, -c, -d).unwrap();
            prop_assert_eq!(p.matrix(), q.matrix());
            prop_assert_eq!(p, q);
        }

        #[test]
        fn trace_and_det((c, d) in coprime_pair(), plus in any::<bool>()) {
            let eps = if plus { Sign::Plus } else { Sign::Minus };
            let m = ParabolicParams::from_i64(eps, c, d).unwrap().matrix();
            prop_assert_eq!(m.trace(), BigInt::from(2));
            prop_assert!(m.det().is_one());
        }

        #[test]
        fn conjugation_preserves_trace_and_det(
            (c, d) in coprime_pair(),
            word in proptest::collection::vec(0u8..4, 0..8),
        ) {
            let p = ParabolicParams::from_i64(Sign::Plus, c, d).unwrap();
            let by = word_to_matrix(&word);
            let m = p.matrix();
            let conj = m.conjugated_by(&by);
            prop_assert_eq!(conj.trace(), m.trace());
            prop_assert_eq!(conj.det(), m.det());
        }

        #[test]
        fn transpose_law(
            (c, d) in coprime_pair(),
            word in proptest::collection::vec(0u8..4, 0..10),
        ) {
            let p = ParabolicParams::from_i64(Sign::Plus, c, d).unwrap();
            let by = word_to_matrix(&word);
            let conj = p.conjugated_by(&by);
            let (tc, td) = by.transpose().apply_vec(p.c(), p.d());
            let expected = ParabolicParams::new(Sign::Plus, tc, td).unwrap();
            prop_assert_eq!(conj, expected);
        }
    }

    pub(crate) fn word_to_matrix(word: &[u8]) -> Mat2 {
        let t = Mat2::from([1, 1, 0, 1]);
        let a = Mat2::from([1, 0, 1, 1]);
        let gens = [t.clone(), a.clone(), t.inverse(), a.inverse()];
        word.iter().fold(Mat2::identity(), |acc, &g| &acc * &gens[g as usize])
    }
}
