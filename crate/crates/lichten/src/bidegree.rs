//! Bidegree decomposition on even-dimensional tori.
//!
//! With coordinates paired as `z_j = t_{2j-1} + i t_{2j}`, a real form
//! splits into components `g dz_P ^ dzbar_Q`. Components are keyed by the
//! pair `(P, Q)` of strictly increasing tuples over `0..m`; for wedge signs
//! the two blocks are flattened into one ordered alphabet
//! `dz_1 < .. < dz_m < dzbar_1 < .. < dzbar_m` so the usual merge rule
//! applies unchanged.

use crate::form::{merge_indices, DifferentialForm, MultiIndex};
use crate::scalar::Scalar;
use crate::trig::TrigPoly;
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidegreeForm {
    m: usize,
    degree: usize,
    components: BTreeMap<(MultiIndex, MultiIndex), TrigPoly>,
}

fn encode(p: &[usize], q: &[usize], m: usize) -> MultiIndex {
    p.iter().copied().chain(q.iter().map(|&j| m + j)).collect()
}

fn decode(enc: &[usize], m: usize) -> (MultiIndex, MultiIndex) {
    let split = enc.partition_point(|&x| x < m);
    (enc[..split].to_vec(), enc[split..].iter().map(|&x| x - m).collect())
}

impl BidegreeForm {
    pub fn zero(m: usize, degree: usize) -> Self {
        BidegreeForm { m, degree, components: BTreeMap::new() }
    }

    pub fn from_poly(m: usize, p: TrigPoly) -> Result<Self> {
        if p.dim() != 2 * m {
            return Err(Error::DimMismatch(p.dim(), 2 * m));
        }
        let mut f = BidegreeForm::zero(m, 0);
        f.add_component(vec![], vec![], p);
        Ok(f)
    }

    /// `g dz_P ^ dzbar_Q`.
    pub fn monomial_term(m: usize, p_idx: MultiIndex, q_idx: MultiIndex, g: TrigPoly) -> Result<Self> {
        if g.dim() != 2 * m {
            return Err(Error::DimMismatch(g.dim(), 2 * m));
        }
        for idx in [&p_idx, &q_idx] {
            for w in idx.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::FixtureInvariant(format!(
                        "bidegree index {idx:?} is not strictly increasing"
                    )));
                }
            }
            if let Some(&last) = idx.last() {
                if last >= m {
                    return Err(Error::AxisOutOfRange { axis: last, dim: m });
                }
            }
        }
        let mut f = BidegreeForm::zero(m, p_idx.len() + q_idx.len());
        f.add_component(p_idx, q_idx, g);
        Ok(f)
    }

    pub fn complex_dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &TrigPoly)> {
        self.components.iter()
    }

    pub fn coeff(&self, p_idx: &[usize], q_idx: &[usize]) -> TrigPoly {
        self.components
            .get(&(p_idx.to_vec(), q_idx.to_vec()))
            .cloned()
            .unwrap_or_else(|| TrigPoly::zero(2 * self.m))
    }

    fn add_component(&mut self, p_idx: MultiIndex, q_idx: MultiIndex, g: TrigPoly) {
        debug_assert_eq!(p_idx.len() + q_idx.len(), self.degree);
        if g.is_zero() {
            return;
        }
        match self.components.entry((p_idx, q_idx)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(g);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&g).expect("same dim");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &BidegreeForm) -> Result<BidegreeForm> {
        if self.m != other.m {
            return Err(Error::DimMismatch(self.m, other.m));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for ((p, q), g) in &other.components {
            out.add_component(p.clone(), q.clone(), g.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BidegreeForm) -> Result<BidegreeForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BidegreeForm {
        BidegreeForm {
            m: self.m,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(k, g)| (k.clone(), g.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> BidegreeForm {
        let mut out = BidegreeForm::zero(self.m, self.degree);
        for ((p, q), g) in &self.components {
            out.add_component(p.clone(), q.clone(), g.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, f: &TrigPoly) -> Result<BidegreeForm> {
        let mut out = BidegreeForm::zero(self.m, self.degree);
        for ((p, q), g) in &self.components {
            out.add_component(p.clone(), q.clone(), g.mul(f)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &BidegreeForm) -> Result<BidegreeForm> {
        if self.m != other.m {
            return Err(Error::DimMismatch(self.m, other.m));
        }
        let degree = self.degree + other.degree;
        let mut out = BidegreeForm::zero(self.m, degree);
        if degree > 2 * self.m {
            return Ok(out);
        }
        for ((pa, qa), ga) in &self.components {
            let ea = encode(pa, qa, self.m);
            for ((pb, qb), gb) in &other.components {
                let eb = encode(pb, qb, self.m);
                if let Some((merged, sign)) = merge_indices(&ea, &eb) {
                    let mut prod = ga.mul(gb)?;
                    if sign < 0 {
                        prod = prod.neg();
                    }
                    let (p, q) = decode(&merged, self.m);
                    out.add_component(p, q, prod);
                }
            }
        }
        Ok(out)
    }

    /// Keep only the components of bidegree `(p, q)`.
    pub fn pure_part(&self, p: usize, q: usize) -> BidegreeForm {
        let mut out = BidegreeForm::zero(self.m, self.degree);
        for ((pi, qi), g) in &self.components {
            if pi.len() == p && qi.len() == q {
                out.add_component(pi.clone(), qi.clone(), g.clone());
            }
        }
        out
    }

    /// The set of bidegrees present.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.components.keys().map(|(p, q)| (p.len(), q.len())).collect();
        out.dedup();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Wirtinger `d/dz_j` of a function: `(d_{2j} - i d_{2j+1}) / 2`.
    pub fn wirtinger_z(g: &TrigPoly, j: usize) -> Result<TrigPoly> {
        let half = Scalar::from_ratio(1, 2);
        let a = g.partial(2 * j)?;
        let b = g.partial(2 * j + 1)?;
        a.sub(&b.scale(&Scalar::i())).map(|p| p.scale(&half))
    }

    /// Wirtinger `d/dzbar_j` of a function: `(d_{2j} + i d_{2j+1}) / 2`.
    pub fn wirtinger_zbar(g: &TrigPoly, j: usize) -> Result<TrigPoly> {
        let half = Scalar::from_ratio(1, 2);
        let a = g.partial(2 * j)?;
        let b = g.partial(2 * j + 1)?;
        a.add(&b.scale(&Scalar::i())).map(|p| p.scale(&half))
    }

    /// Holomorphic half of the exterior derivative: inserts `dz_j` with the
    /// `d/dz_j` coefficient.
    pub fn del(&self) -> Result<BidegreeForm> {
        self.insert_halves(true)
    }

    /// Antiholomorphic half: inserts `dzbar_j` with `d/dzbar_j`.
    pub fn delbar(&self) -> Result<BidegreeForm> {
        self.insert_halves(false)
    }

    fn insert_halves(&self, holomorphic: bool) -> Result<BidegreeForm> {
        let mut out = BidegreeForm::zero(self.m, self.degree + 1);
        if self.degree + 1 > 2 * self.m {
            return Ok(out);
        }
        for ((p, q), g) in &self.components {
            let enc = encode(p, q, self.m);
            for j in 0..self.m {
                let dg = if holomorphic {
                    BidegreeForm::wirtinger_z(g, j)?
                } else {
                    BidegreeForm::wirtinger_zbar(g, j)?
                };
                if dg.is_zero() {
                    continue;
                }
                let sym = if holomorphic { j } else { self.m + j };
                if let Some((merged, sign)) = merge_indices(&[sym], &enc) {
                    let (pi, qi) = decode(&merged, self.m);
                    out.add_component(pi, qi, if sign < 0 { dg.neg() } else { dg });
                }
            }
        }
        Ok(out)
    }
}

/// Rewrite a real-basis form over `dz/dzbar`. Requires even torus dimension.
pub fn to_bidegree(phi: &DifferentialForm) -> Result<BidegreeForm> {
    if phi.dim() % 2 != 0 {
        return Err(Error::OddDimension(phi.dim()));
    }
    let m = phi.dim() / 2;
    let half = Scalar::from_ratio(1, 2);
    let half_i = &half * &Scalar::i();
    let mut out = BidegreeForm::zero(m, phi.degree());
    for (idx, g) in phi.components() {
        let mut acc = BidegreeForm::from_poly(m, g.clone())?;
        for &axis in idx {
            let j = axis / 2;
            let (cz, czbar) = if axis % 2 == 0 {
                // dt_{2j} = (dz_j + dzbar_j)/2
                (half.clone(), half.clone())
            } else {
                // dt_{2j+1} = (dz_j - dzbar_j)/(2i)
                (-half_i.clone(), half_i.clone())
            };
            let mut one = BidegreeForm::zero(m, 1);
            one.add_component(vec![j], vec![], TrigPoly::constant(2 * m, cz));
            one.add_component(vec![], vec![j], TrigPoly::constant(2 * m, czbar));
            acc = acc.wedge(&one)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// Back to the real `dt` basis: `dz_j = dt_{2j} + i dt_{2j+1}`.
pub fn from_bidegree(beta: &BidegreeForm) -> Result<DifferentialForm> {
    let m = beta.complex_dim();
    let dim = 2 * m;
    let mut out = DifferentialForm::zero(dim, beta.degree());
    for ((p, q), g) in beta.components() {
        let mut acc = DifferentialForm::from_poly(g.clone());
        for (block, conj) in [(p, false), (q, true)] {
            for &j in block {
                let im = if conj { -Scalar::i() } else { Scalar::i() };
                let mut one = DifferentialForm::zero(dim, 1);
                one.add_component(vec![2 * j], TrigPoly::one(dim));
                one.add_component(vec![2 * j + 1], TrigPoly::constant(dim, im));
                acc = acc.wedge(&one)?;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}
