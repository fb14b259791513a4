//! Exact scalars: rationals, Gaussian rationals and first-order ε-jets.
//!
//! Nothing in this crate touches floating point. Every identity checked by the
//! crate is checked with structural equality on canonical forms.

mod jet;
mod rational;
mod scalar;

pub use jet::EpsJet;
pub use rational::Rational;
pub use scalar::Scalar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Commutative ring with unit, as needed by the operator matrices.
///
/// Implemented by [`Scalar`] and [`EpsJet`]; every scalar embeds into the ring.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + From<Scalar>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl Ring for EpsJet {
    fn zero() -> Self {
        EpsJet::constant(Scalar::zero())
    }
    fn one() -> Self {
        EpsJet::constant(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.d.is_zero()
    }
}
