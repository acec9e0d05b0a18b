//! Trigonometric polynomials on the n-torus.
//!
//! Elements are finite sums `sum_k c_k e^{i<k,t>}` with `k` ranging over
//! integer frequency vectors and `c_k` Gaussian rational. The map is kept
//! canonical: no zero coefficients are ever stored, and every frequency
//! vector has length `dim`. `cos` and `sin` live here through the usual
//! exponential expansions, so `cos(t)^2` really is
//! `1/4 e^{2it} + 1/2 + 1/4 e^{-2it}`.

use crate::scalar::Scalar;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type Freq = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<Freq, Scalar>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut p = TrigPoly::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        TrigPoly::constant(dim, Scalar::one())
    }

    pub fn from_int(dim: usize, n: i64) -> Self {
        TrigPoly::constant(dim, Scalar::from_int(n))
    }

    /// Single exponential term `c * e^{i<k,t>}`.
    pub fn monomial(dim: usize, freq: Freq, c: Scalar) -> Result<Self> {
        if freq.len() != dim {
            return Err(Error::DimMismatch(freq.len(), dim));
        }
        let mut p = TrigPoly::zero(dim);
        p.add_term(freq, c);
        Ok(p)
    }

    /// `e^{i*(<k,t>)}` for an integer linear form `k`.
    pub fn exp_lin(dim: usize, k: &[i64]) -> Result<Self> {
        TrigPoly::monomial(dim, k.to_vec(), Scalar::one())
    }

    /// `cos(<k,t>) = 1/2 e^{i<k,t>} + 1/2 e^{-i<k,t>}`.
    pub fn cos_lin(dim: usize, k: &[i64]) -> Result<Self> {
        if k.len() != dim {
            return Err(Error::DimMismatch(k.len(), dim));
        }
        let half = Scalar::from_ratio(1, 2);
        let mut p = TrigPoly::zero(dim);
        p.add_term(k.to_vec(), half.clone());
        p.add_term(k.iter().map(|x| -x).collect(), half);
        Ok(p)
    }

    /// `sin(<k,t>) = -i/2 e^{i<k,t>} + i/2 e^{-i<k,t>}`.
    pub fn sin_lin(dim: usize, k: &[i64]) -> Result<Self> {
        if k.len() != dim {
            return Err(Error::DimMismatch(k.len(), dim));
        }
        let half_i = &Scalar::from_ratio(1, 2) * &Scalar::i();
        let mut p = TrigPoly::zero(dim);
        p.add_term(k.to_vec(), -half_i.clone());
        p.add_term(k.iter().map(|x| -x).collect(), half_i);
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Freq, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: &[i64]) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, freq: Freq, c: Scalar) {
        debug_assert_eq!(freq.len(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(freq) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &TrigPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    /// Product: exponents add, coefficients convolve.
    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut out = TrigPoly::zero(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let freq: Freq = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(freq, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TrigPoly {
        if c.is_zero() {
            return TrigPoly::zero(self.dim);
        }
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> TrigPoly {
        let mut out = TrigPoly::one(self.dim);
        for _ in 0..n {
            out = out.mul(self).expect("same dim");
        }
        out
    }

    /// Partial derivative along `axis` (0-based): each term picks up `i*k_axis`.
    pub fn partial(&self, axis: usize) -> Result<TrigPoly> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        let mut out = TrigPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * &Scalar::i()) * &Scalar::from_int(k[axis]));
        }
        Ok(out)
    }

    pub fn conj(&self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.iter().map(|x| -x).collect(), c.conj());
        }
        out
    }

    /// Real as a function on the torus: the coefficient at `-k` must be the
    /// conjugate of the coefficient at `k`.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(k, c)| {
            let mirror: Freq = k.iter().map(|x| -x).collect();
            self.coeff(&mirror) == c.conj()
        })
    }

    /// Max-norm frequency degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|k| k.iter().map(|x| x.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Units are exactly the single nonzero exponential terms.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn unit_inverse(&self) -> Result<TrigPoly> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (k, c) = self.terms.iter().next().expect("one term");
        TrigPoly::monomial(self.dim, k.iter().map(|x| -x).collect(), c.inv()?)
    }

    /// Exact evaluation at a quarter-turn point `t_j = q_j * pi/2`.
    pub fn eval_quarter(&self, q: &[i64]) -> Result<Scalar> {
        if q.len() != self.dim {
            return Err(Error::DimMismatch(q.len(), self.dim));
        }
        let mut acc = Scalar::zero();
        for (k, c) in &self.terms {
            let phase: i64 = k.iter().zip(q).map(|(a, b)| a * b).sum();
            acc += &(c * &Scalar::i_pow(phase));
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> TrigPolyJson {
        TrigPolyJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let (re, im) = c.to_parts();
                    TermJson { freq: k.clone(), re, im }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TrigPolyJson) -> Result<TrigPoly> {
        let mut p = TrigPoly::zero(json.dim);
        for t in &json.terms {
            if t.freq.len() != json.dim {
                return Err(Error::DimMismatch(t.freq.len(), json.dim));
            }
            p.add_term(t.freq.clone(), Scalar::from_parts(&t.re, &t.im)?);
        }
        Ok(p)
    }
}

/// Serialized shape: term list sorted lexicographically by frequency.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TrigPolyJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub freq: Vec<i64>,
    pub re: String,
    pub im: String,
}

fn linear_form_string(k: &[i64]) -> String {
    let mut out = String::new();
    for (j, &kj) in k.iter().enumerate() {
        if kj == 0 {
            continue;
        }
        if !out.is_empty() && kj > 0 {
            out.push('+');
        }
        match kj {
            1 => {}
            -1 => out.push('-'),
            _ => out.push_str(&format!("{kj}*")),
        }
        out.push_str(&format!("t{}", j + 1));
    }
    out
}

impl fmt::Display for TrigPoly {
    /// Prints in the expression grammar the parser accepts, so that
    /// parse -> print -> parse is the identity.
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fm, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.iter().all(|&x| x == 0) {
                    format!("{c}")
                } else {
                    format!("{c}*exp(i*({}))", linear_form_string(k))
                }
            })
            .collect();
        write!(fm, "{}", rendered.join(" + "))
    }
}
