use serde::{Deserialize, Serialize};

use super::{Gen, Monomial};
use crate::error::{Error, Result};

/// Truncation policy shared by every series and operator of one computation.
///
/// Generators with `|mode| > m_pt` are *outside* the point window. They are
/// kept up to `|mode| <= m_expr`, but only in monomials with at most `jet`
/// outside factors, so a value computed here is exact up to its `jet`-th
/// derivatives at the finite-support point. `degcap` bounds the degree in
/// non-unit generators. `k` is the D-truncation depth of operators.
///
/// Each rule discards an ideal of the polynomial ring, so arithmetic in the
/// quotient is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub m_pt: i32,
    pub m_expr: i32,
    pub jet: u32,
    pub k: i32,
    pub degcap: Option<u32>,
}

impl Window {
    /// Exact computations at the point: nothing outside survives.
    pub fn point(m_pt: i32, k: i32) -> Self {
        Window {
            m_pt,
            m_expr: m_pt,
            jet: 0,
            k,
            degcap: None,
        }
    }

    /// First-order jet over the expression window `degree * m_pt`, which is
    /// what gradients of degree-`degree` functionals need.
    pub fn inflated(m_pt: i32, degree: u32, k: i32) -> Self {
        Window {
            m_pt,
            m_expr: m_pt * degree.max(1) as i32,
            jet: 1,
            k,
            degcap: None,
        }
    }

    pub fn with_degcap(self, cap: u32) -> Self {
        Window {
            degcap: Some(cap),
            ..self
        }
    }

    pub fn with_jet(self, jet: u32, m_expr: i32) -> Self {
        Window {
            jet,
            m_expr,
            ..self
        }
    }

    pub fn with_k(self, k: i32) -> Self {
        Window { k, ..self }
    }

    /// The same truncation restricted to the point.
    pub fn at_point(self) -> Self {
        Window {
            m_expr: self.m_pt,
            jet: 0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_pt < 0 || self.m_expr < self.m_pt {
            return Err(Error::Config(format!(
                "need 0 <= m_pt <= m_expr, got m_pt={} m_expr={}",
                self.m_pt, self.m_expr
            )));
        }
        if self.k < 1 {
            return Err(Error::Config("truncation depth must be >= 1".into()));
        }
        if self.degcap == Some(0) {
            return Err(Error::Config("degree cap must be >= 1".into()));
        }
        Ok(())
    }

    pub fn is_outside(&self, g: &Gen) -> bool {
        g.mode.abs() > self.m_pt
    }

    pub fn admits_gen(&self, g: &Gen) -> bool {
        g.mode.abs() <= self.m_expr && (self.jet > 0 || g.mode.abs() <= self.m_pt)
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        let mut outside = 0u32;
        let mut deg = 0u32;
        for (g, e) in m.factors() {
            let a = g.mode.abs();
            if a > self.m_expr {
                return false;
            }
            if a > self.m_pt {
                outside += *e as u32;
            }
            if !g.is_unit() {
                deg += *e as u32;
            }
        }
        outside <= self.jet && self.degcap.is_none_or(|c| deg <= c)
    }
}
