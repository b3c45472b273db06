use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::modering::Window;

use super::Op;

/// Dense square matrix of operators.
#[derive(Clone)]
pub struct MatrixOp<C> {
    n: usize,
    e: Vec<Op<C>>,
}

impl<C: Coeff> PartialEq for MatrixOp<C> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.e == o.e
    }
}

impl<C: Coeff> std::fmt::Debug for MatrixOp<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.e.iter()).finish()
    }
}

impl<C: Coeff> MatrixOp<C> {
    pub fn zero(w: Window, n: usize) -> Self {
        MatrixOp {
            n,
            e: vec![Op::zero(w); n * n],
        }
    }

    pub fn diag(d: Vec<Op<C>>) -> Self {
        let n = d.len();
        let w = *d[0].window();
        let mut m = MatrixOp::zero(w, n);
        for (i, x) in d.into_iter().enumerate() {
            m.e[i * n + i] = x;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Op<C> {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Op<C>) {
        self.e[i * self.n + j] = x;
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::SizeMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(MatrixOp {
            n: self.n,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(MatrixOp {
            n: self.n,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.n;
        let w = *self.e[0].window();
        let mut r = MatrixOp::zero(w, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Op::zero(w);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                r.set(i, j, acc);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let w = *self.e[0].window();
        let mut acc = MatrixOp::diag(vec![Op::one(w); self.n]);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Entrywise `(.)_+`.
    pub fn plus(&self) -> Self {
        MatrixOp {
            n: self.n,
            e: self.e.iter().map(|x| x.plus()).collect(),
        }
    }

    /// First entry that is nonzero on its exact range, with the witness.
    pub fn nonzero_witness(&self) -> Option<(usize, usize, String)> {
        let w = *self.e[0].window();
        for i in 0..self.n {
            for j in 0..self.n {
                let z = Op::zero(w);
                if let Some((d, m, p)) = self.get(i, j).diff_witness(&z) {
                    return Some((i, j, format!("D^{d} z^{} : {p}", -m)));
                }
            }
        }
        None
    }
}

/// `AB - BA`.
pub fn mat_commutator<C: Coeff>(a: &MatrixOp<C>, b: &MatrixOp<C>) -> Result<MatrixOp<C>> {
    a.mul(b)?.sub(&b.mul(a)?)
}
