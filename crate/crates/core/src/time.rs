//! Integer time base.
//!
//! Every duration and instant in the crate is a whole number of ticks, so
//! multiples-of-`D` checks and snapshot equality are exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A non-negative count of the base time quantum.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Tick(pub u64);

impl Tick {
    pub const ZERO: Tick = Tick(0);

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Smallest multiple of `quantum` that is `>= self`.
    #[inline]
    pub fn ceil_to(self, quantum: Tick) -> Tick {
        debug_assert!(quantum.0 > 0);
        Tick(self.0.div_ceil(quantum.0) * quantum.0)
    }

    /// Largest multiple of `quantum` that is `<= self`.
    #[inline]
    pub fn floor_to(self, quantum: Tick) -> Tick {
        debug_assert!(quantum.0 > 0);
        Tick(self.0 / quantum.0 * quantum.0)
    }

    #[inline]
    pub fn is_multiple_of(self, quantum: Tick) -> bool {
        quantum.0 > 0 && self.0.is_multiple_of(quantum.0)
    }

    #[inline]
    pub fn checked_sub(self, rhs: Tick) -> Option<Tick> {
        self.0.checked_sub(rhs.0).map(Tick)
    }

    #[inline]
    pub fn saturating_sub(self, rhs: Tick) -> Tick {
        Tick(self.0.saturating_sub(rhs.0))
    }
}

impl Add for Tick {
    type Output = Tick;
    #[inline]
    fn add(self, rhs: Tick) -> Tick {
        Tick(self.0 + rhs.0)
    }
}

impl AddAssign for Tick {
    #[inline]
    fn add_assign(&mut self, rhs: Tick) {
        self.0 += rhs.0;
    }
}

impl Sub for Tick {
    type Output = Tick;
    #[inline]
    fn sub(self, rhs: Tick) -> Tick {
        Tick(self.0 - rhs.0)
    }
}

impl Mul<u64> for Tick {
    type Output = Tick;
    #[inline]
    fn mul(self, rhs: u64) -> Tick {
        Tick(self.0 * rhs)
    }
}

impl Sum for Tick {
    fn sum<I: Iterator<Item = Tick>>(iter: I) -> Tick {
        Tick(iter.map(|t| t.0).sum())
    }
}

impl From<u64> for Tick {
    fn from(v: u64) -> Self {
        Tick(v)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
