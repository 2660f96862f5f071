use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};

/// Level of a `T^{1/n}` gate with `n = 2^{i−1}`: `i = 0` is `S`, `i = 1` is `T`,
/// `i = 2` is `√T`, and so on. Rotation angle `φ = π/(4n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HierarchyLevel(u8);

impl HierarchyLevel {
    pub const S: Self = Self(0);
    pub const T: Self = Self(1);
    /// Largest supported index; `n = 2^{30}` is far past anything physical.
    pub const MAX_INDEX: u8 = 31;

    pub fn from_index(i: u8) -> Result<Self> {
        if i > Self::MAX_INDEX {
            return Err(Error::NotDyadic(libm::ldexp(1.0, i as i32 - 1)));
        }
        Ok(Self(i))
    }

    /// Accepts `n ∈ {1/2, 1, 2, 4, ...}`.
    pub fn from_n(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.5 {
            return Err(Error::NotDyadic(n));
        }
        let (mantissa, exp) = libm::frexp(n);
        // n = 0.5 · 2^exp exactly when mantissa == 0.5
        if mantissa != 0.5 || exp < 0 || exp as u8 > Self::MAX_INDEX {
            return Err(Error::NotDyadic(n));
        }
        Ok(Self(exp as u8))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn n(self) -> f64 {
        libm::ldexp(1.0, self.0 as i32 - 1)
    }

    /// `π / (4n)`.
    pub fn phi(self) -> f64 {
        libm::ldexp(PI, -(self.0 as i32 + 1))
    }

    pub fn is_clifford(self) -> bool {
        self.0 == 0
    }

    /// Magic states consumed by one teleported `T^{1/n}` on average: `2 − 1/n`.
    pub fn magic_cost(self) -> f64 {
        if self.is_clifford() {
            0.0
        } else {
            2.0 - 1.0 / self.n()
        }
    }

    /// One level down (the correction gate `T^{2/n}`); `None` for `S`.
    pub fn lower(self) -> Option<Self> {
        self.0.checked_sub(1).map(Self)
    }

    /// Gate name: `S`, `T`, `T^(1/2)`, ...
    pub fn gate_label(self) -> String {
        match self.0 {
            0 => String::from("S"),
            1 => String::from("T"),
            i => format!("T^(1/{})", 1u64 << (i - 1)),
        }
    }
}

impl fmt::Display for HierarchyLevel {
    /// `n` as written on the command line: `1/2`, `1`, `2`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            f.write_str("1/2")
        } else {
            write!(f, "{}", 1u64 << (self.0 - 1))
        }
    }
}
