//! Exact arithmetic in the golden-ratio field Q(√5) and in quaternions over it.
//!
//! Every geometric predicate used by the 120-cell construction (adjacency,
//! layer membership, symmetry lookup) reduces to an equality test between
//! elements of this field, so nothing here ever touches floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element `a + b·√5` of Q(√5) with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticRational {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadraticRational {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        Self { a, b }
    }

    /// `an/ad + (bn/bd)·√5`.
    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Self::new(rat(an, ad), rat(bn, bd))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratios(n, 1, 0, 1)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// φ = (1 + √5)/2.
    pub fn phi() -> Self {
        Self::from_ratios(1, 2, 1, 2)
    }

    /// φ⁻¹ = φ − 1 = (−1 + √5)/2.
    pub fn phi_inv() -> Self {
        Self::from_ratios(-1, 2, 1, 2)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Galois conjugate `a − b√5`.
    pub fn galois_conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 5b²`, a rational.
    pub fn field_norm(&self) -> BigRational {
        &self.a * &self.a - rat(5, 1) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a + b√5 is nonzero with a, b rational, so the norm is nonzero (√5 irrational).
        let n = self.field_norm();
        Ok(Self::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact sign of the real number `a + b√5`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² against 5b²
            (sa, _) => {
                let lhs = &self.a * &self.a;
                let rhs = rat(5, 1) * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn halve(&self) -> Self {
        Self::new(&self.a / rat(2, 1), &self.b / rat(2, 1))
    }
}

impl Default for QuadraticRational {
    fn default() -> Self {
        QuadraticRational::zero()
    }
}

impl PartialOrd for QuadraticRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Debug for QuadraticRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadraticRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*r5", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*r5", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*r5", self.a, self.b)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b QuadraticRational> for &'a QuadraticRational {
            type Output = QuadraticRational;
            fn $method(self, rhs: &'b QuadraticRational) -> QuadraticRational {
                let f: fn(&QuadraticRational, &QuadraticRational) -> QuadraticRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadraticRational> for QuadraticRational {
            type Output = QuadraticRational;
            fn $method(self, rhs: QuadraticRational) -> QuadraticRational {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b QuadraticRational> for QuadraticRational {
            type Output = QuadraticRational;
            fn $method(self, rhs: &'b QuadraticRational) -> QuadraticRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QuadraticRational::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| QuadraticRational::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| {
    // (a1 + b1√5)(a2 + b2√5) = a1a2 + 5b1b2 + (a1b2 + a2b1)√5
    QuadraticRational::new(
        &x.a * &y.a + rat(5, 1) * &x.b * &y.b,
        &x.a * &y.b + &x.b * &y.a,
    )
});

impl Neg for QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        QuadraticRational::new(-self.a, -self.b)
    }
}

impl Neg for &QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        QuadraticRational::new(-self.a.clone(), -self.b.clone())
    }
}

/// Quaternion `w + x·i + y·j + z·k` with coordinates in Q(√5).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub w: QuadraticRational,
    pub x: QuadraticRational,
    pub y: QuadraticRational,
    pub z: QuadraticRational,
}

impl Quaternion {
    pub fn new(
        w: QuadraticRational,
        x: QuadraticRational,
        y: QuadraticRational,
        z: QuadraticRational,
    ) -> Self {
        Self { w, x, y, z }
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(
            QuadraticRational::from_int(w),
            QuadraticRational::from_int(x),
            QuadraticRational::from_int(y),
            QuadraticRational::from_int(z),
        )
    }

    pub fn coords(&self) -> [&QuadraticRational; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn from_coords(c: [QuadraticRational; 4]) -> Self {
        let [w, x, y, z] = c;
        Self::new(w, x, y, z)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }

    pub fn norm2(&self) -> QuadraticRational {
        inner_product(self, self)
    }

    pub fn is_unit(&self) -> bool {
        self.norm2().is_one()
    }

    pub fn halve(&self) -> Self {
        Self::new(self.w.halve(), self.x.halve(), self.y.halve(), self.z.halve())
    }

    /// Smallest `k ≥ 1` with `q^k = 1`, searched up to `cap`.
    pub fn multiplicative_order_capped(&self, cap: u32) -> Result<u32> {
        let n = self.norm2();
        if !n.is_one() {
            return Err(Error::NotUnit(n.to_string()));
        }
        let one = Quaternion::one();
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc == one {
                return Ok(k);
            }
            acc = &acc * self;
        }
        Err(Error::OrderCapExceeded(cap))
    }

    pub fn multiplicative_order(&self) -> Result<u32> {
        self.multiplicative_order_capped(60)
    }
}

impl<'b> Mul<&'b Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn mul(self, q: &'b Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            &p.w * &q.w - &p.x * &q.x - &p.y * &q.y - &p.z * &q.z,
            &p.w * &q.x + &p.x * &q.w + &p.y * &q.z - &p.z * &q.y,
            &p.w * &q.y - &p.x * &q.z + &p.y * &q.w + &p.z * &q.x,
            &p.w * &q.z + &p.x * &q.y - &p.y * &q.x + &p.z * &q.w,
        )
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        &self * &q
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// Euclidean inner product; for unit quaternions this is the cosine of the
/// spherical distance.
pub fn inner_product(p: &Quaternion, q: &Quaternion) -> QuadraticRational {
    &p.w * &q.w + &p.x * &q.x + &p.y * &q.y + &p.z * &q.z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qr_strategy() -> impl Strategy<Value = QuadraticRational> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12)
            .prop_map(|(an, ad, bn, bd)| QuadraticRational::from_ratios(an, ad, bn, bd))
    }

    fn quat_strategy() -> impl Strategy<Value = Quaternion> {
        (qr_strategy(), qr_strategy(), qr_strategy(), qr_strategy())
            .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    #[test]
    fn golden_identities() {
        let phi = QuadraticRational::phi();
        let one = QuadraticRational::one();
        assert_eq!(&phi * &(&phi - &one), one);
        assert_eq!(&phi * &phi, &phi + &one);
        assert_eq!(&phi - &one, QuadraticRational::phi_inv());
        // 2 − φ = φ⁻²; expanded by hand: (φ−1)² = φ² − 2φ + 1 = 2 − φ
        let two = QuadraticRational::from_int(2);
        let pinv = QuadraticRational::phi_inv();
        assert_eq!(&two - &phi, &pinv * &pinv);
        assert_eq!(phi.inv().unwrap(), pinv);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert!(matches!(
            QuadraticRational::zero().inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn sign_cases() {
        let phi = QuadraticRational::phi();
        assert_eq!(phi.signum(), Ordering::Greater);
        assert_eq!(QuadraticRational::phi_inv().signum(), Ordering::Greater);
        assert_eq!((-phi.clone()).signum(), Ordering::Less);
        // 2 − √5 < 0, 3 − √5 > 0
        assert!(QuadraticRational::from_ratios(2, 1, -1, 1).is_negative());
        assert!(!QuadraticRational::from_ratios(3, 1, -1, 1).is_negative());
        assert_eq!(QuadraticRational::zero().signum(), Ordering::Equal);
        assert!(QuadraticRational::phi_inv() < QuadraticRational::one());
    }

    #[test]
    fn quaternion_basis_relations() {
        let i = Quaternion::from_ints(0, 1, 0, 0);
        let j = Quaternion::from_ints(0, 0, 1, 0);
        let k = Quaternion::from_ints(0, 0, 0, 1);
        assert_eq!(&i * &j, k);
        let minus_one = Quaternion::from_ints(-1, 0, 0, 0);
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&(&i * &j) * &k, minus_one);
    }

    #[test]
    fn hurwitz_square() {
        let h = Quaternion::from_ints(1, 1, 1, 1).halve();
        assert_eq!(&h * &h, Quaternion::from_ints(-1, 1, 1, 1).halve());
        assert_eq!(h.multiplicative_order().unwrap(), 6);
    }

    #[test]
    fn orders() {
        assert_eq!(Quaternion::one().multiplicative_order().unwrap(), 1);
        assert_eq!(
            Quaternion::from_ints(-1, 0, 0, 0).multiplicative_order().unwrap(),
            2
        );
        let f2 = Quaternion::new(
            QuadraticRational::phi(),
            QuadraticRational::zero(),
            QuadraticRational::phi_inv(),
            QuadraticRational::one(),
        )
        .halve();
        assert_eq!(f2.multiplicative_order().unwrap(), 10);
        assert!(matches!(
            Quaternion::from_ints(1, 1, 0, 0).multiplicative_order(),
            Err(Error::NotUnit(_))
        ));
    }

    #[test]
    fn inner_products_from_f1() {
        let f1 = Quaternion::one();
        let f2 = Quaternion::new(
            QuadraticRational::phi(),
            QuadraticRational::zero(),
            QuadraticRational::phi_inv(),
            QuadraticRational::one(),
        )
        .halve();
        assert_eq!(inner_product(&f1, &f1), QuadraticRational::one());
        assert_eq!(inner_product(&f1, &f2), QuadraticRational::phi().halve());
        assert_eq!(
            inner_product(&f1, &Quaternion::from_ints(-1, 0, 0, 0)),
            QuadraticRational::from_int(-1)
        );
    }

    proptest! {
        #[test]
        fn field_axioms(x in qr_strategy(), y in qr_strategy(), z in qr_strategy()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn ordering_is_consistent_with_addition(x in qr_strategy(), y in qr_strategy()) {
            let lhs = x.cmp(&y);
            prop_assert_eq!(lhs, (&x - &y).signum());
            prop_assert_eq!(y.cmp(&x), lhs.reverse());
        }

        #[test]
        fn conjugation_reverses_products(p in quat_strategy(), q in quat_strategy()) {
            prop_assert_eq!((&p * &q).conj(), &q.conj() * &p.conj());
            let n = &q * &q.conj();
            prop_assert_eq!(n, Quaternion::new(q.norm2(), QuadraticRational::zero(),
                QuadraticRational::zero(), QuadraticRational::zero()));
        }

        #[test]
        fn quaternion_product_is_associative(p in quat_strategy(), q in quat_strategy(), r in quat_strategy()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }
    }
}
