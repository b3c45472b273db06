//! Text grammar for operators, series and polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := int | 'q' | 'z' | 'D' | 'O' '(' 'D' '^' '-'? int ')'
//!         | gen '[' '-'? int ']'                    a mode, e.g. t1[-3], lam2[0]
//!         | gen '(' 'z' | 'zq' ('^' '-'? int)? ')'  a field, e.g. t1(z), lam1(zq^2)
//!         | '(' expr ')'
//! gen    := ('t' | 'lam' | 'u' | 'v' | 'a' | 'p') int
//! ```
//!
//! `z^k` is the series monomial `z^k`, `D` the shift. Negative powers are
//! allowed on `D`, `z`, scalars and unit generators `lamN[0]`. `O(D^k)`
//! marks the operator as known only down to `D^{k+1}`. Every value the
//! `Display` impls print parses back to itself.

use crate::coeffs::{rat_int, Coeff};
use crate::error::{Error, Result};
use crate::modering::{Family, Gen, Monomial, Poly, Series, Window};
use crate::opalg::Op;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = s[st..i].parse().map_err(|_| Error::Parse {
                pos: st,
                msg: "integer too large".into(),
            })?;
            out.push((st, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && b[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()[]".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

/// Intermediate values; everything lowers to an operator.
enum Val<C> {
    Op(Op<C>),
    D,
    Z,
    Gen(Gen),
    Order(i32),
}

struct Parser<'a, C> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    w: Window,
    order: Option<i32>,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff> Parser<'_, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.at(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn int32(&mut self) -> Result<i32> {
        let p = self.at();
        i32::try_from(self.int()?).map_err(|_| Error::Parse {
            pos: p,
            msg: "integer out of range".into(),
        })
    }

    fn lower(&self, v: Val<C>) -> Result<Op<C>> {
        let w = self.w;
        Ok(match v {
            Val::Op(o) => o,
            Val::D => Op::d_pow(w, 1),
            Val::Z => z_pow(w, 1),
            Val::Gen(g) => Op::term(0, mode_series(w, Poly::gen(g))),
            Val::Order(_) => return self.err("O(D^k) may only appear as a summand"),
        })
    }

    fn expr(&mut self) -> Result<Op<C>> {
        let first = self.term_val()?;
        let mut acc = self.lower_or_order(first)?;
        loop {
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            let t = self.term_val()?;
            if let Some(t) = self.lower_or_order(t)? {
                let t = if neg { t.neg() } else { t };
                acc = Some(match acc {
                    Some(a) => a.add(&t),
                    None => t,
                });
            }
        }
        Ok(acc.unwrap_or_else(|| Op::zero(self.w)))
    }

    /// Records `O(D^k)` summands and lowers the rest.
    fn lower_or_order(&mut self, v: Val<C>) -> Result<Option<Op<C>>> {
        match v {
            Val::Order(k) => {
                self.order = Some(self.order.map_or(k, |o| o.max(k)));
                Ok(None)
            }
            v => self.lower(v).map(Some),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('('))
        )
    }

    fn term_val(&mut self) -> Result<Val<C>> {
        let first = self.unary()?;
        if !(matches!(self.peek(), Some(Tok::Sym('*')) | Some(Tok::Sym('/'))) || self.starts_atom())
        {
            return Ok(first);
        }
        let mut acc = self.lower(first)?;
        loop {
            if self.eat('*') {
                let r = self.unary()?;
                acc = acc.mul(&self.lower(r)?);
            } else if self.eat('/') {
                let r = self.unary()?;
                let r = self.lower(r)?;
                let c = scalar_of(&r)
                    .ok_or(())
                    .or_else(|_| self.err("can only divide by a scalar"))?;
                acc = acc.scale(&c.inv()?);
            } else if self.starts_atom() {
                let r = self.unary()?;
                acc = acc.mul(&self.lower(r)?);
            } else {
                break;
            }
        }
        Ok(Val::Op(acc))
    }

    fn unary(&mut self) -> Result<Val<C>> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Val::Op(self.lower(v)?.neg()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val<C>> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.int32()?;
        let w = self.w;
        Ok(Val::Op(match base {
            Val::D => Op::d_pow(w, e),
            Val::Z => z_pow(w, e),
            Val::Gen(g) => {
                if e < 0 && !g.is_unit() {
                    return self.err(format!("negative power of {g}, which is not a unit"));
                }
                Op::term(
                    0,
                    mode_series(
                        w,
                        Poly::term(C::one(), Monomial::from_factors(vec![(g, e)])),
                    ),
                )
            }
            Val::Order(_) => return self.err("cannot raise O(D^k) to a power"),
            Val::Op(o) => {
                if e >= 0 {
                    (0..e).fold(Op::one(w), |a, _| a.mul(&o))
                } else {
                    match scalar_of(&o) {
                        Some(c) => Op::scalar(w, c.inv()?.pow(e.unsigned_abs())),
                        None => return self.err("negative power of a non-scalar"),
                    }
                }
            }
        }))
    }

    fn atom(&mut self) -> Result<Val<C>> {
        let w = self.w;
        let p = self.at();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Val::Op(Op::scalar(w, C::from_rat(&rat_int(v)))))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let saved = self.order.take();
                let e = self.expr()?;
                if self.order.is_some() {
                    return self.err("O(D^k) inside parentheses");
                }
                self.order = saved;
                self.expect(')')?;
                Ok(Val::Op(e))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "q" => return Ok(Val::Op(Op::scalar(w, C::q_pow(1)))),
                    "z" => return Ok(Val::Z),
                    "D" => return Ok(Val::D),
                    "O" => {
                        self.expect('(')?;
                        match self.peek() {
                            Some(Tok::Ident(d)) if d == "D" => self.pos += 1,
                            _ => return self.err("expected D inside O(...)"),
                        }
                        let k = if self.eat('^') { self.int32()? } else { 1 };
                        self.expect(')')?;
                        return Ok(Val::Order(k));
                    }
                    _ => {}
                }
                let fam = Family::from_prefix(&name).ok_or(Error::Parse {
                    pos: p,
                    msg: format!("unknown name {name:?}"),
                })?;
                let comp = match self.peek() {
                    Some(Tok::Int(c)) if *c >= 1 && *c <= u16::MAX as i64 => *c as u16,
                    _ => return self.err(format!("expected a component number after {name}")),
                };
                self.pos += 1;
                if self.eat('[') {
                    let m = self.int32()?;
                    self.expect(']')?;
                    Ok(Val::Gen(Gen::new(fam, comp, m)))
                } else if self.eat('(') {
                    let shift = match self.peek() {
                        Some(Tok::Ident(s)) if s == "z" => {
                            self.pos += 1;
                            0
                        }
                        Some(Tok::Ident(s)) if s == "zq" => {
                            self.pos += 1;
                            if self.eat('^') {
                                self.int()?
                            } else {
                                1
                            }
                        }
                        _ => return self.err("expected z or zq"),
                    };
                    self.expect(')')?;
                    Ok(Val::Op(Op::term(
                        0,
                        Series::gen_series(w, fam, comp).q_shift(shift),
                    )))
                } else {
                    self.err("expected '[' or '(' after a generator")
                }
            }
            _ => self.err("expected a number, name or '('"),
        }
    }
}

fn mode_series<C: Coeff>(w: Window, p: Poly<C>) -> Series<C> {
    Series::from_mode(w, 0, p)
}

/// `z^k`, i.e. the mode `-k`.
fn z_pow<C: Coeff>(w: Window, k: i32) -> Op<C> {
    Op::term(0, Series::from_mode(w, -k, Poly::one()))
}

/// The constant of a scalar operator, if it is one.
fn scalar_of<C: Coeff>(o: &Op<C>) -> Option<C> {
    let mut it = o.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(C::zero()),
        (Some((0, s)), None) => {
            let mut modes = s.modes();
            match (modes.next(), modes.next()) {
                (Some((0, p)), None) if p.gens().is_empty() => Some(p.constant_term()),
                (None, _) => Some(C::zero()),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Parses an operator; series and polynomials are operators of order 0.
pub fn parse_op<C: Coeff>(text: &str, w: Window) -> Result<Op<C>> {
    let toks = lex(text)?;
    let mut p = Parser::<C> {
        toks: &toks,
        pos: 0,
        end: text.len(),
        w,
        order: None,
        _c: std::marker::PhantomData,
    };
    let o = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(match p.order {
        Some(k) => o.with_valid(k + 1),
        None => o,
    })
}

/// A series: an operator with only a `D^0` term.
pub fn parse_series<C: Coeff>(text: &str, w: Window) -> Result<Series<C>> {
    let o = parse_op::<C>(text, w)?;
    if o.terms().any(|(d, s)| d != 0 && !s.is_zero()) || !o.is_exact() {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a series, found an operator".into(),
        });
    }
    Ok(o.coeff(0))
}

/// A polynomial in the modes: a series concentrated in mode 0.
pub fn parse_poly<C: Coeff>(text: &str, w: Window) -> Result<Poly<C>> {
    let s = parse_series::<C>(text, w)?;
    if s.modes().any(|(m, p)| m != 0 && !p.is_zero()) {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a polynomial, found a z-dependent series".into(),
        });
    }
    Ok(s.coeff(0))
}
