//! Check records and suite reports.

use std::time::Instant;

use serde::Serialize;

use crate::coeffs::Ring;
use crate::error::{Error, Result};
use crate::modering::{Poly, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    pub fn new(
        suite: impl Into<String>,
        config: serde_json::Value,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.status == Status::Pass);
        Report {
            suite: suite.into(),
            config,
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            s += &format!("{st} {} [{}]", c.name, c.anchor);
            if let Some(ms) = c.ms {
                s += &format!(" {ms}ms");
            }
            s.push('\n');
            if let Some(w) = &c.witness {
                s += &format!("     witness: {w}\n");
            }
        }
        let passed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count();
        s += &format!("{passed}/{} passed\n", self.checks.len());
        s
    }
}

/// Runs checks and collects their records.
#[derive(Default)]
pub struct Checker {
    pub timings: bool,
    pub records: Vec<CheckRecord>,
}

impl Checker {
    pub fn new(timings: bool) -> Self {
        Checker {
            timings,
            records: Vec::new(),
        }
    }

    /// Runs `f`; any error fails the check and becomes its witness.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        anchor: impl Into<String>,
        f: impl FnOnce() -> Result<()>,
    ) {
        let t = Instant::now();
        let r = f();
        let ms = self.timings.then(|| t.elapsed().as_millis() as u64);
        let (status, witness) = match r {
            Ok(()) => (Status::Pass, None),
            Err(Error::CheckFailed(w)) => (Status::Fail, Some(w)),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status,
            witness,
            ms,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }
}

/// The smallest monomial where `a` and `b` differ.
pub fn poly_witness<C: Ring>(a: &Poly<C>, b: &Poly<C>) -> Option<String> {
    let d = a.sub(b);
    d.first_term().map(|(m, c)| format!("{c}*{m}"))
}

pub fn expect_poly_eq<C: Ring>(what: &str, a: &Poly<C>, b: &Poly<C>) -> Result<()> {
    match poly_witness(a, b) {
        None => Ok(()),
        Some(w) => Err(Error::CheckFailed(format!(
            "{what}: difference has term {w}"
        ))),
    }
}

pub fn expect_poly_zero<C: Ring>(what: &str, a: &Poly<C>) -> Result<()> {
    expect_poly_eq(what, a, &Poly::zero())
}

pub fn series_witness<C: crate::coeffs::Coeff>(a: &Series<C>, b: &Series<C>) -> Option<String> {
    let d = a.sub(b);
    let (m, p) = d.modes().next()?;
    let (mono, c) = p.first_term()?;
    Some(format!("z^{}: {c}*{mono}", -m))
}

pub fn expect_series_eq<C: crate::coeffs::Coeff>(
    what: &str,
    a: &Series<C>,
    b: &Series<C>,
) -> Result<()> {
    match series_witness(a, b) {
        None => Ok(()),
        Some(w) => Err(Error::CheckFailed(format!("{what}: difference at {w}"))),
    }
}

pub fn expect(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CheckFailed(what()))
    }
}
