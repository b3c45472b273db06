//! Command-line front end: configuration, dispatch and output.

use std::io::Read;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coeffs::{set_numeric_q0, Coeff, Num, QRat, Rat, Ring};
use crate::error::{Error, Result};
use crate::hierarchy_kdv::verify::KdvSuite;
use crate::hierarchy_kdv::{hamiltonian_res, qkdv_flow, KdVState};
use crate::limits::verify::LimitsSuite;
use crate::limits::{classical_image, h_coeff, substitute_h};
use crate::miura_mkdv::verify::MkdvSuite;
use crate::miura_mkdv::{mkdv_hamiltonian, MKdVState};
use crate::modering::{Family, Gen, Poly, Series, Window};
use crate::poisson::verify::PoissonSuite;
use crate::poisson::KernelSet;
use crate::report::{Checker, Report};
use crate::toda::{s_bracket_table, toda_density, toda_hamiltonian_flow, toda_velocity, Ctx};

pub mod grammar;

pub use grammar::{parse_op, parse_poly, parse_series};

#[cfg(test)]
mod tests;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "qkdv",
    version,
    about = "Exact q-KdV, q-mKdV and q-Toda computations"
)]
pub struct RunConfig {
    /// Rank N of the Lax operator.
    #[arg(long = "N", global = true, default_value_t = 2)]
    pub n: u16,
    /// Point window M_pt: modes |m| <= M_pt are kept.
    #[arg(long = "window", global = true, default_value_t = 2)]
    pub m_pt: i32,
    /// Expression window for first-order jets (default: degree * M_pt).
    #[arg(long = "m-expr", global = true)]
    pub m_expr: Option<i32>,
    /// D-truncation depth (default: what the command needs).
    #[arg(long = "K", global = true)]
    pub k: Option<i32>,
    /// Degree cap in non-unit generators.
    #[arg(long, global = true, env = "QKDV_DEGCAP")]
    pub degcap: Option<u32>,
    /// Evaluate q at a rational q0 instead of exact arithmetic.
    #[arg(long, global = true, num_args = 0..=1, value_name = "Q0")]
    pub numeric: Option<Option<String>>,
    /// Keep t_N as a field instead of t_N = 1.
    #[arg(long, global = true)]
    pub unreduced: bool,
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Record per-check wall time in ms.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// L^{1/N} for the generic L, or for an operator read from --input.
    Root {
        /// File with `D^N + ...`; `-` reads stdin.
        #[arg(long)]
        input: Option<String>,
    },
    /// Right-hand sides of the tau_n flow on the t_i, mode by mode.
    Flow {
        #[arg(long = "n", default_value_t = 1)]
        order: u32,
        #[arg(long)]
        input: Option<String>,
    },
    /// H_n = (N/n) Int Res L^{n/N}.
    Ham {
        #[arg(long = "n", default_value_t = 1)]
        order: u32,
        #[arg(long)]
        input: Option<String>,
    },
    /// Mode bracket {x, y} of two generators, e.g. `t1[2] t1[-2]`.
    Bracket {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value_t = Structure::Second)]
        structure: Structure,
    },
    /// Images of t_1..t_N under the first Miura map, or bold H_n.
    Miura {
        #[arg(long = "ham")]
        ham: Option<u32>,
    },
    /// q-Toda flows in local form.
    Toda {
        #[arg(long, value_enum, default_value_t = TodaMode::Affine)]
        mode: TodaMode,
    },
    /// Leading coefficients of the h -> 0 limit.
    Limit {
        #[arg(long, value_enum)]
        target: LimitTarget,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    First,
    Second,
    Mkdv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TodaMode {
    Affine,
    Finite,
    SineGordon,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitTarget {
    Virasoro,
    Heisenberg,
    Toda,
    Hamiltonians,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kdv,
    Mkdv,
    Toda,
    Poisson,
    Limits,
    All,
}

/// The result of one command: computed values, or a verification report.
pub enum Output {
    Values {
        command: String,
        config: serde_json::Value,
        values: Vec<(String, String)>,
    },
    Report(Report),
}

impl Output {
    pub fn pass(&self) -> bool {
        match self {
            Output::Values { .. } => true,
            Output::Report(r) => r.pass,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Output::Values { values, .. } => {
                values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
            }
            Output::Report(r) => r.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Output::Values {
                command,
                config,
                values,
            } => {
                let vals: Vec<_> = values
                    .iter()
                    .map(|(k, v)| json!({ "name": k, "value": v }))
                    .collect();
                serde_json::to_string_pretty(
                    &json!({ "command": command, "config": config, "values": vals }),
                )
                .expect("values serialize")
            }
            Output::Report(r) => r.to_json(),
        }
    }
}

impl RunConfig {
    /// `q0` for numeric mode: the flag value, else `QKDV_Q0`, else `3/2`.
    pub fn q0(&self) -> Result<Option<Rat>> {
        let Some(v) = &self.numeric else {
            return Ok(None);
        };
        let s = match v {
            Some(s) => s.clone(),
            None => std::env::var("QKDV_Q0").unwrap_or_else(|_| "3/2".into()),
        };
        Rat::from_str(s.trim())
            .map(Some)
            .map_err(|_| Error::Config(format!("q0 {s:?} is not a rational number")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("N must be >= 2, got {}", self.n)));
        }
        if self.m_pt < 1 {
            return Err(Error::Config(format!(
                "window must be >= 1, got {}",
                self.m_pt
            )));
        }
        if let Some(k) = self.k {
            if k < 1 {
                return Err(Error::Config(format!("K must be >= 1, got {k}")));
            }
        }
        if self.degcap == Some(0) {
            return Err(Error::Config("degree cap must be >= 1".into()));
        }
        if let Some(e) = self.m_expr {
            let deg = self.degree();
            if e < deg as i32 * self.m_pt {
                return Err(Error::Config(format!(
                    "m-expr {e} is below the degree bound {deg} * {} of the command",
                    self.m_pt
                )));
            }
        }
        self.q0()?;
        Ok(())
    }

    /// Degree of the functionals the command works with.
    fn degree(&self) -> u32 {
        match &self.command {
            Command::Flow { order, .. } | Command::Ham { order, .. } => *order,
            Command::Miura { ham: Some(n) } => *n,
            _ => 1,
        }
    }

    /// The window of a compute command needing depth `need`.
    fn window(&self, need: i32) -> Window {
        let mut w = Window::point(self.m_pt, self.k.unwrap_or(need.max(1)));
        if let Some(e) = self.m_expr {
            w = w.with_jet(1, e);
        }
        if let Some(c) = self.degcap {
            w = w.with_degcap(c);
        }
        w
    }

    fn config_json(&self) -> serde_json::Value {
        json!({
            "N": self.n,
            "window": self.m_pt,
            "m_expr": self.m_expr,
            "K": self.k,
            "degcap": self.degcap,
            "numeric": self.q0().ok().flatten().map(|q| q.to_string()),
            "reduced": !self.unreduced,
            "seed": self.seed,
        })
    }
}

/// Parses command-line words, program name first.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))
}

/// Validates `cfg` and runs its command.
pub fn run(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    match cfg.q0()? {
        Some(q0) => {
            set_numeric_q0(q0)?;
            run_with::<Num>(cfg)
        }
        None => run_with::<QRat>(cfg),
    }
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
    Ok(s)
}

fn state<C: Coeff>(cfg: &RunConfig, w: Window, input: &Option<String>) -> Result<KdVState<C>> {
    let reduced = !cfg.unreduced;
    match input {
        Some(p) => KdVState::from_op(cfg.n, parse_op(&read_input(p)?, w)?, reduced),
        None => KdVState::new(cfg.n, w, reduced),
    }
}

fn series_values<C: Coeff>(
    name: impl Fn(i32) -> String,
    s: &Series<C>,
    m_pt: i32,
) -> Vec<(String, String)> {
    (-m_pt..=m_pt)
        .map(|m| (name(m), s.coeff(m).to_string()))
        .collect()
}

fn single_gen(text: &str, w: Window) -> Result<Gen> {
    let p: Poly<QRat> = parse_poly(text, w)?;
    if let (1, Some((m, c))) = (p.len(), p.first_term()) {
        if let ([(g, 1)], true) = (m.factors(), c.is_one()) {
            return Ok(*g);
        }
    }
    Err(Error::Config(format!("{text:?} is not a single generator")))
}

fn run_with<C: Coeff>(cfg: &RunConfig) -> Result<Output> {
    let n = cfg.n;
    let m = cfg.m_pt;
    let values = |name: &str, values: Vec<(String, String)>| Output::Values {
        command: name.into(),
        config: cfg.config_json(),
        values,
    };
    Ok(match &cfg.command {
        Command::Root { input } => {
            let s = state::<C>(cfg, cfg.window(4), input)?;
            values(
                "root",
                vec![(format!("L^(1/{n})"), s.root()?.at_point().to_string())],
            )
        }
        Command::Flow { order, input } => {
            let s = state::<C>(cfg, cfg.window(*order as i32 - 1 + n as i32), input)?;
            let f = qkdv_flow(&s, *order)?;
            let mut out = Vec::new();
            for i in s.fields() {
                out.extend(series_values(
                    |j| format!("d_tau{order} t{i}[{j}]"),
                    &f.series(Family::T, i),
                    m,
                ));
            }
            values("flow", out)
        }
        Command::Ham { order, input } => {
            let s = state::<C>(cfg, cfg.window(*order as i32), input)?;
            values(
                "ham",
                vec![(
                    format!("H{order}"),
                    hamiltonian_res(&s, *order)?.at_point().to_string(),
                )],
            )
        }
        Command::Bracket { x, y, structure } => {
            let w0 = Window::point(m, 1);
            let (gx, gy) = (single_gen(x, w0)?, single_gen(y, w0)?);
            let w = Window::point(m.max(gx.mode.abs() + gy.mode.abs()), 1);
            let reduced = !cfg.unreduced;
            let (ks, tag) = match structure {
                Structure::First => (KernelSet::kdv1(n, reduced), "_1"),
                Structure::Second => (KernelSet::kdv2(n, reduced), "_2"),
                Structure::Mkdv => (KernelSet::mkdv(n), ""),
            };
            let p: Poly<C> = ks.mode_bracket(&gx, &gy, &w)?;
            values(
                "bracket",
                vec![(format!("{{{gx},{gy}}}{tag}"), p.to_string())],
            )
        }
        Command::Miura { ham } => {
            let s = MKdVState::<C>::new(n, cfg.window(ham.map_or(1, |h| h as i32)), false)?;
            match ham {
                Some(h) => {
                    let v = mkdv_hamiltonian(&s, &s.lax_pair()?, *h)?;
                    values(
                        "miura",
                        vec![(format!("bold H{h}"), v.at_point().to_string())],
                    )
                }
                None => {
                    let mut out = Vec::new();
                    for (j, t) in s.t_images(1).iter().enumerate() {
                        out.extend(series_values(|k| format!("t{}[{k}]", j + 1), t, m));
                    }
                    values("miura", out)
                }
            }
        }
        Command::Toda { mode } => {
            let reduced = *mode == TodaMode::SineGordon;
            let ctx = Ctx::new(if reduced { 2 } else { n }, reduced)?;
            let kappa = s_bracket_table::<C>(ctx.n, 2 * ctx.n as i32 + 2)?;
            let mut out = Vec::new();
            let flow = toda_hamiltonian_flow(&ctx, &kappa, *mode != TodaMode::Finite);
            for i in ctx.fields() {
                out.push((format!("d_t lam{i}(z)"), flow[i as usize - 1].to_string()));
            }
            if *mode != TodaMode::Finite {
                for i in ctx.fields() {
                    out.push((
                        format!("A{i}(z) - A{}(zq)", ctx.idx(i as i32 + 1)),
                        toda_velocity::<C>(&ctx, i as i32).to_string(),
                    ));
                }
                out.push(("density".into(), toda_density::<C>(&ctx).to_string()));
            }
            values("toda", out)
        }
        Command::Limit { target } => values("limit", limit_values(cfg, *target)?),
        Command::Verify { suite } => Output::Report(verify::<C>(cfg, *suite)),
    })
}

fn limit_values(cfg: &RunConfig, target: LimitTarget) -> Result<Vec<(String, String)>> {
    let (n, m) = (cfg.n, cfg.m_pt);
    let w = Window::point(2 * m, 1);
    let mut out = Vec::new();
    match target {
        LimitTarget::Virasoro => {
            let ks = KernelSet::kdv2(2, true);
            for a in -m..=m {
                for b in -m..=m {
                    let p: Poly<QRat> = ks.mode_bracket(&Gen::t(1, a), &Gen::t(1, b), &w)?;
                    out.push((
                        format!("h^3 of {{t1[{a}],t1[{b}]}}_2"),
                        h_coeff(&substitute_h(&p, 6, classical_image)?, 3)?.to_string(),
                    ));
                }
            }
        }
        LimitTarget::Heisenberg => {
            let ks = KernelSet::mkdv(n);
            for i in 1..=n {
                for j in 1..=n {
                    for a in 1..=m {
                        let p: Poly<QRat> =
                            ks.mode_bracket(&Gen::lam(i, a), &Gen::lam(j, -a), &w)?;
                        let lim = substitute_h(&p, 4, classical_image)?;
                        out.push((
                            format!("h^1 of {{lam{i}[{a}],lam{j}[{}]}}", -a),
                            h_coeff(&lim, 1)?.to_string(),
                        ));
                    }
                }
            }
        }
        LimitTarget::Hamiltonians => {
            let mut suite = LimitsSuite::new(2, m);
            let mut ck = Checker::new(false);
            suite.run(&mut ck);
            if suite.h0.is_empty() {
                return Err(Error::CheckFailed(
                    "the hamiltonian limit check failed".into(),
                ));
            }
            for (k, p) in &suite.h0 {
                out.push((format!("H{k}^(0)"), p.to_string()));
            }
        }
        LimitTarget::Toda => {
            let mut ck = Checker::new(false);
            LimitsSuite::new(n, m).run(&mut ck);
            for r in ck
                .records
                .iter()
                .filter(|r| r.anchor.starts_with("classical Toda"))
            {
                out.push((r.name.clone(), format!("{:?}", r.status).to_lowercase()));
            }
        }
    }
    Ok(out)
}

fn verify<C: Coeff>(cfg: &RunConfig, suite: Suite) -> Report {
    let (n, m, seed) = (cfg.n, cfg.m_pt, cfg.seed);
    let one = |s: Suite, ck: &mut Checker| match s {
        Suite::Kdv => KdvSuite::new(n, m, seed).run::<C>(ck),
        Suite::Mkdv => MkdvSuite::new(n, m).run::<C>(ck),
        Suite::Toda => crate::toda::verify::TodaSuite::new(n, m).run::<C>(ck),
        Suite::Poisson => PoissonSuite::new(n, m, seed).run::<C>(ck),
        Suite::Limits => LimitsSuite::new(n, m).run(ck),
        Suite::All => unreachable!(),
    };
    let mut ck = Checker::new(cfg.timings);
    if suite == Suite::All {
        for s in [
            Suite::Kdv,
            Suite::Poisson,
            Suite::Mkdv,
            Suite::Toda,
            Suite::Limits,
        ] {
            let start = ck.records.len();
            one(s, &mut ck);
            let tag = serde_json::to_value(s)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            for r in &mut ck.records[start..] {
                r.name = format!("{tag}: {}", r.name);
            }
        }
    } else {
        one(suite, &mut ck);
    }
    let name = serde_json::to_value(suite)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    Report::new(name, cfg.config_json(), ck.records)
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cfg) {
        Ok(out) => {
            print!(
                "{}",
                if cfg.json {
                    out.to_json() + "\n"
                } else {
                    out.to_text()
                }
            );
            if out.pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
