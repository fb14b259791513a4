use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Scalar;
use crate::error::{Error, Result};

/// First-order jet `val + d·ε` with `ε² = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsJet {
    pub val: Scalar,
    pub d: Scalar,
}

impl EpsJet {
    pub fn new(val: Scalar, d: Scalar) -> Self {
        EpsJet { val, d }
    }

    pub fn constant(val: Scalar) -> Self {
        EpsJet { val, d: Scalar::zero() }
    }

    /// The pure infinitesimal `d·ε`.
    pub fn eps(d: Scalar) -> Self {
        EpsJet { val: Scalar::zero(), d }
    }

    /// `(a + bε)⁻¹ = a⁻¹ − b·a⁻²·ε`; pure-ε jets are not units.
    pub fn inv(&self) -> Result<Self> {
        if self.val.is_zero() {
            return Err(Error::NonInvertibleJet(self.to_string()));
        }
        let a = self.val.inv()?;
        let d = -&(&self.d * &(&a * &a));
        Ok(EpsJet::new(a, d))
    }
}

impl From<Scalar> for EpsJet {
    fn from(val: Scalar) -> Self {
        EpsJet::constant(val)
    }
}

impl fmt::Display for EpsJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})ε", self.val, self.d)
    }
}

impl fmt::Debug for EpsJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a EpsJet> for &'a EpsJet {
    type Output = EpsJet;
    fn add(self, rhs: &'a EpsJet) -> EpsJet {
        EpsJet::new(&self.val + &rhs.val, &self.d + &rhs.d)
    }
}

impl<'a> Sub<&'a EpsJet> for &'a EpsJet {
    type Output = EpsJet;
    fn sub(self, rhs: &'a EpsJet) -> EpsJet {
        EpsJet::new(&self.val - &rhs.val, &self.d - &rhs.d)
    }
}

impl<'a> Mul<&'a EpsJet> for &'a EpsJet {
    type Output = EpsJet;
    fn mul(self, rhs: &'a EpsJet) -> EpsJet {
        let val = &self.val * &rhs.val;
        let d = &(&self.val * &rhs.d) + &(&self.d * &rhs.val);
        EpsJet::new(val, d)
    }
}

impl Add for EpsJet {
    type Output = EpsJet;
    fn add(self, rhs: EpsJet) -> EpsJet {
        &self + &rhs
    }
}

impl Sub for EpsJet {
    type Output = EpsJet;
    fn sub(self, rhs: EpsJet) -> EpsJet {
        &self - &rhs
    }
}

impl Mul for EpsJet {
    type Output = EpsJet;
    fn mul(self, rhs: EpsJet) -> EpsJet {
        &self * &rhs
    }
}

impl Neg for EpsJet {
    type Output = EpsJet;
    fn neg(self) -> EpsJet {
        EpsJet::new(-self.val, -self.d)
    }
}
