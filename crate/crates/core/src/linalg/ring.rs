//! Coefficient domains: exact rationals, arbitrary-precision integers and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Commutative ring with exact division where the quotient is known to exist.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs`, assuming `rhs` divides `self` exactly.
    fn div_exact(&self, rhs: &Self) -> Self;
}

pub trait Field: Ring {
    fn inv(&self) -> Self;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Ring for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("i64 overflow")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(*rhs).expect("i64 overflow")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("i64 overflow")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self % rhs, 0);
        self / rhs
    }
}

/// Integers modulo the prime `P` (`P < 2^32`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Zp<const P: u32>(u32);

/// The default modular backend, `p = 2^31 - 1`.
pub type Gf = Zp<2_147_483_647>;
/// Second prime used to cross-check modular ranks, `p = 2^31 - 19`.
pub type GfAlt = Zp<2_147_483_629>;

impl<const P: u32> Zp<P> {
    pub const MODULUS: u32 = P;

    pub fn new(v: u64) -> Self {
        Zp((v % u64::from(P)) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Zp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u32> Ring for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn one() -> Self {
        Zp(1)
    }
    fn from_i64(v: i64) -> Self {
        Zp(v.rem_euclid(i64::from(P)) as u32)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        let s = u64::from(self.0) + u64::from(rhs.0);
        Zp(if s >= u64::from(P) { s - u64::from(P) } else { s } as u32)
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        if self.0 >= rhs.0 {
            Zp(self.0 - rhs.0)
        } else {
            Zp((u64::from(self.0) + u64::from(P) - u64::from(rhs.0)) as u32)
        }
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        Zp(((u64::from(self.0) * u64::from(rhs.0)) % u64::from(P)) as u32)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Zp(P - self.0)
        }
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

impl<const P: u32> Field for Zp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Z/{P}");
        self.pow(u64::from(P) - 2)
    }
}

/// Coefficient backend selector for rank computations and reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Exact rationals.
    #[default]
    Rational,
    /// Integers modulo `2^31 - 1`.
    Modular,
    /// Integers modulo `2^31 - 19`, used to cross-check [`Backend::Modular`].
    ModularAlt,
}
