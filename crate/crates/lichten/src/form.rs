//! Differential forms with trigonometric polynomial coefficients.
//!
//! A form of degree r on the n-torus is stored as a map from strictly
//! increasing index tuples (0-based, length r) to coefficients. Wedge signs
//! come from counting inversions while merging index tuples; the exterior
//! derivative inserts one axis at a time through the same merge.

use crate::scalar::Scalar;
use crate::trig::{TrigPoly, TrigPolyJson};
use crate::{Error, Result};
use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type MultiIndex = Vec<usize>;

/// Merge two strictly increasing index tuples; `None` on a repeated index,
/// otherwise the merged tuple and the sign of the interleaving permutation.
pub fn merge_indices(a: &[usize], b: &[usize]) -> Option<(MultiIndex, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((out, sign))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    components: BTreeMap<MultiIndex, TrigPoly>,
}

impl DifferentialForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        DifferentialForm { dim, degree, components: BTreeMap::new() }
    }

    pub fn from_poly(p: TrigPoly) -> Self {
        let dim = p.dim();
        let mut f = DifferentialForm::zero(dim, 0);
        f.add_component(vec![], p);
        f
    }

    pub fn one(dim: usize) -> Self {
        DifferentialForm::from_poly(TrigPoly::one(dim))
    }

    /// The coordinate 1-form `dt_axis` (0-based axis).
    pub fn dt(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        let mut f = DifferentialForm::zero(dim, 1);
        f.add_component(vec![axis], TrigPoly::one(dim));
        Ok(f)
    }

    /// `p * dt_I` for a strictly increasing index tuple `I`.
    pub fn monomial_term(dim: usize, index: MultiIndex, p: TrigPoly) -> Result<Self> {
        if p.dim() != dim {
            return Err(Error::DimMismatch(p.dim(), dim));
        }
        for w in index.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::FixtureInvariant(format!(
                    "index tuple {index:?} is not strictly increasing"
                )));
            }
        }
        if let Some(&last) = index.last() {
            if last >= dim {
                return Err(Error::AxisOutOfRange { axis: last, dim });
            }
        }
        let mut f = DifferentialForm::zero(dim, index.len());
        f.add_component(index, p);
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &TrigPoly)> {
        self.components.iter()
    }

    pub fn coeff(&self, index: &[usize]) -> TrigPoly {
        self.components.get(index).cloned().unwrap_or_else(|| TrigPoly::zero(self.dim))
    }

    /// Extract the polynomial of a 0-form.
    pub fn into_poly(&self) -> Result<TrigPoly> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch(self.degree, 0));
        }
        Ok(self.coeff(&[]))
    }

    pub(crate) fn add_component(&mut self, index: MultiIndex, p: TrigPoly) {
        debug_assert_eq!(index.len(), self.degree);
        if p.is_zero() {
            return;
        }
        match self.components.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&p).expect("same dim");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
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
        for (idx, p) in &other.components {
            out.add_component(idx.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DifferentialForm {
        DifferentialForm {
            dim: self.dim,
            degree: self.degree,
            components: self.components.iter().map(|(i, p)| (i.clone(), p.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.dim, self.degree);
        for (idx, p) in &self.components {
            out.add_component(idx.clone(), p.scale(c));
        }
        out
    }

    /// Multiply every coefficient by a function (same as wedging with the
    /// 0-form, but keeps the degree bookkeeping trivial).
    pub fn scale_poly(&self, g: &TrigPoly) -> Result<DifferentialForm> {
        if g.dim() != self.dim {
            return Err(Error::DimMismatch(g.dim(), self.dim));
        }
        let mut out = DifferentialForm::zero(self.dim, self.degree);
        for (idx, p) in &self.components {
            out.add_component(idx.clone(), p.mul(g)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        let mut out = DifferentialForm::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (ia, pa) in &self.components {
            for (ib, pb) in &other.components {
                if let Some((idx, sign)) = merge_indices(ia, ib) {
                    let mut prod = pa.mul(pb)?;
                    if sign < 0 {
                        prod = prod.neg();
                    }
                    out.add_component(idx, prod);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.dim, self.degree + 1);
        if self.degree + 1 > self.dim {
            return out;
        }
        for (idx, p) in &self.components {
            for axis in 0..self.dim {
                let dp = p.partial(axis).expect("axis in range");
                if dp.is_zero() {
                    continue;
                }
                if let Some((merged, sign)) = merge_indices(&[axis], idx) {
                    out.add_component(merged, if sign < 0 { dp.neg() } else { dp });
                }
            }
        }
        out
    }

    /// Largest coefficient frequency degree over all components.
    pub fn coeff_degree(&self) -> i64 {
        self.components.values().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            dim: self.dim,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(idx, p)| ComponentJson {
                    index: idx.iter().map(|i| i + 1).collect(),
                    coeff: p.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &FormJson) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(json.dim, json.degree);
        for comp in &json.components {
            let mut idx = Vec::with_capacity(comp.index.len());
            for &i in &comp.index {
                if i == 0 || i > json.dim {
                    return Err(Error::AxisOutOfRange { axis: i, dim: json.dim });
                }
                idx.push(i - 1);
            }
            if idx.len() != json.degree {
                return Err(Error::DegreeMismatch(idx.len(), json.degree));
            }
            out.add_component(idx, TrigPoly::from_json(&comp.coeff)?);
        }
        Ok(out)
    }
}

/// Serialized shape; indices are written 1-based to match `dt1..dtn`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormJson {
    pub dim: usize,
    pub degree: usize,
    pub components: Vec<ComponentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComponentJson {
    pub index: Vec<usize>,
    pub coeff: TrigPolyJson,
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(fm, "0");
        }
        let rendered: Vec<String> = self
            .components
            .iter()
            .map(|(idx, p)| {
                if idx.is_empty() {
                    format!("({p})")
                } else {
                    let dts: Vec<String> = idx.iter().map(|i| format!("dt{}", i + 1)).collect();
                    format!("(({p}) ∧ {})", dts.join(" ∧ "))
                }
            })
            .collect();
        write!(fm, "{}", rendered.join(" + "))
    }
}

/// Affine self-map data between tori: `t = A s + 2*pi*beta`, with `A` an
/// integer matrix (rows indexed by target axes) and `beta` rational turns.
/// Denominators of `beta` are limited to 1, 2, 4 so that the phase factors
/// `e^{2*pi*i<k,beta>}` stay Gaussian rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTorusMap {
    matrix: Vec<Vec<i64>>,
    translation: Vec<BigRational>,
    source_dim: usize,
    target_dim: usize,
}

impl AffineTorusMap {
    pub fn new(matrix: Vec<Vec<i64>>, translation: Vec<BigRational>) -> Result<Self> {
        let target_dim = matrix.len();
        let source_dim = matrix.first().map(|r| r.len()).unwrap_or(0);
        if matrix.iter().any(|r| r.len() != source_dim) || translation.len() != target_dim {
            return Err(Error::MapShape {
                rows: target_dim,
                cols: source_dim,
                tlen: translation.len(),
            });
        }
        let mut norm = Vec::with_capacity(target_dim);
        for b in &translation {
            let frac = b - b.floor();
            let four = BigInt::from(4);
            if !(four % frac.denom()).is_zero() {
                return Err(Error::UnsupportedTranslation(frac.to_string()));
            }
            norm.push(frac);
        }
        Ok(AffineTorusMap { matrix, translation: norm, source_dim, target_dim })
    }

    pub fn linear(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let t = vec![BigRational::zero(); matrix.len()];
        AffineTorusMap::new(matrix, t)
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        AffineTorusMap::linear(matrix).expect("square")
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[BigRational] {
        &self.translation
    }

    /// Bound `a` with `|A^T k|_inf <= a * |k|_inf`: pullback multiplies
    /// frequency cutoffs by at most this factor.
    pub fn freq_scale(&self) -> i64 {
        (0..self.source_dim)
            .map(|l| self.matrix.iter().map(|row| row[l].abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Pull a function on the target torus back along the map.
    pub fn pullback_poly(&self, p: &TrigPoly) -> Result<TrigPoly> {
        if p.dim() != self.target_dim {
            return Err(Error::DimMismatch(p.dim(), self.target_dim));
        }
        let mut out = TrigPoly::zero(self.source_dim);
        for (k, c) in p.terms() {
            // phase in quarter turns: 4 * <k, beta> is an integer by the
            // denominator restriction
            let mut quarters = BigRational::zero();
            for (kj, bj) in k.iter().zip(&self.translation) {
                quarters += BigRational::from_integer(BigInt::from(4 * kj)) * bj;
            }
            debug_assert!(quarters.is_integer());
            let q: i64 = (quarters.numer() % BigInt::from(4i64))
                .try_into()
                .expect("reduced mod 4 fits");
            let phase = Scalar::i_pow(q);
            let freq: Vec<i64> = (0..self.source_dim)
                .map(|l| self.matrix.iter().zip(k).map(|(row, kj)| row[l] * kj).sum())
                .collect();
            out.add_term(freq, c * &phase);
        }
        Ok(out)
    }

    /// Pull back a differential form: coefficients through `pullback_poly`,
    /// each `dt_j` to the constant 1-form given by row `j` of the matrix.
    pub fn pullback_form(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        if phi.dim() != self.target_dim {
            return Err(Error::DimMismatch(phi.dim(), self.target_dim));
        }
        let degree = phi.degree();
        let mut out = DifferentialForm::zero(self.source_dim, degree);
        if degree > self.source_dim {
            return Ok(out);
        }
        for (idx, p) in phi.components() {
            let mut acc = DifferentialForm::from_poly(self.pullback_poly(p)?);
            for &j in idx {
                let mut one_form = DifferentialForm::zero(self.source_dim, 1);
                for l in 0..self.source_dim {
                    if self.matrix[j][l] != 0 {
                        one_form.add_component(
                            vec![l],
                            TrigPoly::from_int(self.source_dim, self.matrix[j][l]),
                        );
                    }
                }
                acc = acc.wedge(&one_form)?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dt(dim: usize, axis: usize) -> DifferentialForm {
        DifferentialForm::dt(dim, axis).unwrap()
    }

    fn cos_axis(dim: usize, axis: usize) -> TrigPoly {
        let mut k = vec![0; dim];
        k[axis] = 1;
        TrigPoly::cos_lin(dim, &k).unwrap()
    }

    fn sin_axis(dim: usize, axis: usize) -> TrigPoly {
        let mut k = vec![0; dim];
        k[axis] = 1;
        TrigPoly::sin_lin(dim, &k).unwrap()
    }

    #[test]
    fn merge_sign_counting() {
        assert_eq!(merge_indices(&[0], &[1]), Some((vec![0, 1], 1)));
        assert_eq!(merge_indices(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_indices(&[0, 2], &[1]), Some((vec![0, 1, 2], -1)));
        assert_eq!(merge_indices(&[1], &[1]), None);
        assert_eq!(merge_indices(&[], &[3]), Some((vec![3], 1)));
    }

    #[test]
    fn wedge_antisymmetry() {
        let a = dt(2, 0);
        let b = dt(2, 1);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        assert_eq!(ab, ba.neg());
        assert!(a.wedge(&a).unwrap().is_zero());
        // past the top degree everything is zero
        let top = ab.wedge(&b).unwrap();
        assert!(top.is_zero());
        assert_eq!(top.degree(), 3);
    }

    #[test]
    fn wedge_with_function() {
        let f = DifferentialForm::from_poly(cos_axis(2, 0));
        let w = f.wedge(&dt(2, 1)).unwrap();
        assert_eq!(w.coeff(&[1]), cos_axis(2, 0));
        let one = DifferentialForm::one(2);
        assert_eq!(one.wedge(&w).unwrap(), w);
    }

    #[test]
    fn exterior_derivative_basics() {
        let s = DifferentialForm::from_poly(sin_axis(1, 0));
        let d = s.ext_d();
        assert_eq!(d.coeff(&[0]), cos_axis(1, 0));
        assert!(dt(2, 0).ext_d().is_zero());
        // d(cos t1 dt2) = -sin t1 dt1^dt2
        let w = DifferentialForm::monomial_term(2, vec![1], cos_axis(2, 0)).unwrap();
        let dw = w.ext_d();
        assert_eq!(dw.coeff(&[0, 1]), sin_axis(2, 0).neg());
    }

    #[test]
    fn d_squared_zero_sample() {
        let p = cos_axis(3, 0).mul(&sin_axis(3, 2)).unwrap();
        let phi = DifferentialForm::monomial_term(3, vec![1], p).unwrap();
        assert!(phi.ext_d().ext_d().is_zero());
    }

    #[test]
    fn graded_leibniz_sample() {
        let a = DifferentialForm::monomial_term(3, vec![0], cos_axis(3, 1)).unwrap();
        let b = DifferentialForm::monomial_term(3, vec![2], sin_axis(3, 0)).unwrap();
        let lhs = a.wedge(&b).unwrap().ext_d();
        let rhs = a
            .ext_d()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&b.ext_d()).unwrap().neg())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_identity_and_doubling() {
        let id = AffineTorusMap::identity(2);
        let w = DifferentialForm::monomial_term(2, vec![0], cos_axis(2, 1)).unwrap();
        assert_eq!(id.pullback_form(&w).unwrap(), w);

        let double = AffineTorusMap::linear(vec![vec![2]]).unwrap();
        let e_dt = DifferentialForm::monomial_term(
            1,
            vec![0],
            TrigPoly::exp_lin(1, &[1]).unwrap(),
        )
        .unwrap();
        let pulled = double.pullback_form(&e_dt).unwrap();
        let expect = DifferentialForm::monomial_term(
            1,
            vec![0],
            TrigPoly::exp_lin(1, &[2]).unwrap().scale(&Scalar::from_int(2)),
        )
        .unwrap();
        assert_eq!(pulled, expect);
        assert_eq!(double.freq_scale(), 2);
    }

    #[test]
    fn pullback_quarter_translation() {
        // s -> s + 1/4 turn multiplies e^{it} by i
        let shift = AffineTorusMap::new(
            vec![vec![1]],
            vec![BigRational::new(BigInt::from(1), BigInt::from(4))],
        )
        .unwrap();
        let e = TrigPoly::exp_lin(1, &[1]).unwrap();
        assert_eq!(shift.pullback_poly(&e).unwrap(), e.scale(&Scalar::i()));
        // cos picks up the right values: cos(t + pi/2) = -sin t
        let c = cos_axis(1, 0);
        assert_eq!(shift.pullback_poly(&c).unwrap(), sin_axis(1, 0).neg());

        let bad = AffineTorusMap::new(
            vec![vec![1]],
            vec![BigRational::new(BigInt::from(1), BigInt::from(3))],
        );
        assert!(matches!(bad, Err(Error::UnsupportedTranslation(_))));
    }

    #[test]
    fn pullback_embedding_t1_to_t2() {
        // s -> (s, 2s): dt1 -> ds, dt2 -> 2 ds, dt1^dt2 -> 0
        let inc = AffineTorusMap::linear(vec![vec![1], vec![2]]).unwrap();
        let vol = dt(2, 0).wedge(&dt(2, 1)).unwrap();
        assert!(inc.pullback_form(&vol).unwrap().is_zero());
        let pulled = inc.pullback_form(&dt(2, 1)).unwrap();
        assert_eq!(pulled.coeff(&[0]), TrigPoly::from_int(1, 2));
        // frequencies add: e^{i(t1 + t2)} -> e^{3is}
        let p = TrigPoly::exp_lin(2, &[1, 1]).unwrap();
        assert_eq!(inc.pullback_poly(&p).unwrap(), TrigPoly::exp_lin(1, &[3]).unwrap());
    }

    #[test]
    fn form_json_round_trip() {
        let w = DifferentialForm::monomial_term(3, vec![0, 2], cos_axis(3, 1))
            .unwrap()
            .add(&DifferentialForm::monomial_term(3, vec![1, 2], sin_axis(3, 0)).unwrap())
            .unwrap();
        let json = w.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: FormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(DifferentialForm::from_json(&parsed).unwrap(), w);
        assert_eq!(json.components[0].index, vec![1, 3]);
    }

    #[test]
    fn add_requires_matching_degree() {
        let a = dt(2, 0);
        let vol = dt(2, 0).wedge(&dt(2, 1)).unwrap();
        assert_eq!(a.add(&vol), Err(Error::DegreeMismatch(1, 2)));
        // except when one side is zero
        let z = DifferentialForm::zero(2, 2);
        assert_eq!(a.add(&z).unwrap(), a);
    }
}
