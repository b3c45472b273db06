use std::fmt;

use serde::{Deserialize, Serialize};

/// Generator families.
///
/// `T` are the KdV coefficients `t_i[m]`, `Lam` the mKdV/Toda fields
/// `Λ_i[m]`, `U`/`V` the classical-limit fields and `A` the classical Toda
/// exponentials `a_i[m]`. `Kp` holds the free coefficients `p_{-k}[m]` of a
/// q-KP operator (component `k + 1` stands for `p_{-k}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    T,
    Lam,
    U,
    V,
    A,
    Kp,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::T => "t",
            Family::Lam => "lam",
            Family::U => "u",
            Family::V => "v",
            Family::A => "a",
            Family::Kp => "p",
        }
    }

    pub fn from_prefix(s: &str) -> Option<Family> {
        Some(match s {
            "t" => Family::T,
            "lam" => Family::Lam,
            "u" => Family::U,
            "v" => Family::V,
            "a" => Family::A,
            "p" => Family::Kp,
            _ => return None,
        })
    }
}

/// A Fourier mode `g_i[m]` of the series `g_i(z) = sum_m g_i[m] z^{-m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub family: Family,
    pub comp: u16,
    pub mode: i32,
}

impl Gen {
    pub const fn new(family: Family, comp: u16, mode: i32) -> Self {
        Gen { family, comp, mode }
    }

    pub const fn t(comp: u16, mode: i32) -> Self {
        Gen::new(Family::T, comp, mode)
    }

    pub const fn lam(comp: u16, mode: i32) -> Self {
        Gen::new(Family::Lam, comp, mode)
    }

    /// Zero modes of `Λ_i` are formal units and may carry negative exponents.
    pub fn is_unit(&self) -> bool {
        self.family == Family::Lam && self.mode == 0
    }

    pub fn with_mode(&self, mode: i32) -> Self {
        Gen { mode, ..*self }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}[{}]", self.family.prefix(), self.comp, self.mode)
    }
}
