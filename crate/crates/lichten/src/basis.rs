//! Frequency-truncated monomial bases.
//!
//! The degree-r slice at cutoff D on the n-torus is spanned by
//! `e^{i<k,t>} dt_I` with `|k|_inf <= D` and `I` a strictly increasing
//! r-tuple. Basis positions are ordered lexicographically by `(I, k)`, so
//! a position decomposes as `combo_rank * (2D+1)^n + odometer(k)`.

use crate::bidegree::BidegreeForm;
use crate::form::{DifferentialForm, MultiIndex};
use crate::scalar::Scalar;
use crate::trig::TrigPoly;
use crate::{Error, Result};

/// All strictly increasing `r`-tuples over `0..n`, lexicographically.
pub fn combinations(n: usize, r: usize) -> Vec<MultiIndex> {
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: MultiIndex = (0..r).collect();
    loop {
        out.push(cur.clone());
        // advance the odometer
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (r - i) {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: usize = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpec {
    pub dim: usize,
    pub degree: usize,
    pub cutoff: i64,
}

impl BasisSpec {
    pub fn new(dim: usize, degree: usize, cutoff: i64) -> Self {
        BasisSpec { dim, degree, cutoff }
    }

    fn freq_side(&self) -> usize {
        if self.cutoff < 0 {
            0
        } else {
            (2 * self.cutoff + 1) as usize
        }
    }

    pub fn freq_count(&self) -> usize {
        self.freq_side().pow(self.dim as u32)
    }

    pub fn size(&self) -> usize {
        if self.degree > self.dim || self.cutoff < 0 {
            return 0;
        }
        binomial(self.dim, self.degree) * self.freq_count()
    }

    fn freq_at(&self, mut pos: usize) -> Vec<i64> {
        let side = self.freq_side();
        let mut k = vec![0i64; self.dim];
        for axis in (0..self.dim).rev() {
            k[axis] = (pos % side) as i64 - self.cutoff;
            pos /= side;
        }
        k
    }

    fn freq_rank(&self, k: &[i64]) -> Option<usize> {
        let side = self.freq_side();
        let mut pos = 0usize;
        for &kj in k {
            if kj.abs() > self.cutoff {
                return None;
            }
            pos = pos * side + (kj + self.cutoff) as usize;
        }
        Some(pos)
    }

    /// Decode a basis position into its index tuple and frequency.
    pub fn element(&self, pos: usize) -> (MultiIndex, Vec<i64>) {
        let fc = self.freq_count();
        let combo = combinations(self.dim, self.degree)
            .into_iter()
            .nth(pos / fc)
            .expect("position in range");
        (combo, self.freq_at(pos % fc))
    }

    pub fn position(&self, index: &[usize], k: &[i64]) -> Option<usize> {
        let combos = combinations(self.dim, self.degree);
        let combo_rank = combos.binary_search_by(|c| c.as_slice().cmp(index)).ok()?;
        Some(combo_rank * self.freq_count() + self.freq_rank(k)?)
    }

    /// The basis form at a position.
    pub fn monomial(&self, pos: usize) -> DifferentialForm {
        let (idx, k) = self.element(pos);
        let p = TrigPoly::monomial(self.dim, k, Scalar::one()).expect("freq length");
        DifferentialForm::monomial_term(self.dim, idx, p).expect("valid index")
    }

    /// Coordinates of a form in this basis; errors when a term falls outside
    /// the cutoff (a growth-bound violation) or the degree does not match.
    pub fn vectorize(&self, phi: &DifferentialForm) -> Result<Vec<(usize, Scalar)>> {
        if phi.dim() != self.dim {
            return Err(Error::DimMismatch(phi.dim(), self.dim));
        }
        if !phi.is_zero() && phi.degree() != self.degree {
            return Err(Error::DegreeMismatch(phi.degree(), self.degree));
        }
        let mut out = Vec::new();
        for (idx, p) in phi.components() {
            for (k, c) in p.terms() {
                let pos = self.position(idx, k).ok_or_else(|| Error::GrowthBound {
                    element: format!("e^(i<{k:?},t>) dt{idx:?}"),
                    cutoff: self.cutoff,
                })?;
                out.push((pos, c.clone()));
            }
        }
        out.sort_by_key(|(pos, _)| *pos);
        Ok(out)
    }
}

/// Truncated basis of pure `(p, q)` bidegree monomials on T^{2m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidegreeBasisSpec {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub cutoff: i64,
}

impl BidegreeBasisSpec {
    pub fn new(m: usize, p: usize, q: usize, cutoff: i64) -> Self {
        BidegreeBasisSpec { m, p, q, cutoff }
    }

    fn freq(&self) -> BasisSpec {
        BasisSpec::new(2 * self.m, 0, self.cutoff)
    }

    pub fn size(&self) -> usize {
        if self.p > self.m || self.q > self.m || self.cutoff < 0 {
            return 0;
        }
        binomial(self.m, self.p) * binomial(self.m, self.q) * self.freq().freq_count()
    }

    pub fn element(&self, pos: usize) -> (MultiIndex, MultiIndex, Vec<i64>) {
        let fc = self.freq().freq_count();
        let q_combos = combinations(self.m, self.q);
        let per_p = q_combos.len() * fc;
        let p_combo = combinations(self.m, self.p)
            .into_iter()
            .nth(pos / per_p)
            .expect("position in range");
        let rem = pos % per_p;
        let q_combo = q_combos.into_iter().nth(rem / fc).expect("in range");
        (p_combo, q_combo, self.freq().freq_at(rem % fc))
    }

    pub fn position(&self, p_idx: &[usize], q_idx: &[usize], k: &[i64]) -> Option<usize> {
        let fc = self.freq().freq_count();
        let p_combos = combinations(self.m, self.p);
        let q_combos = combinations(self.m, self.q);
        let pr = p_combos.binary_search_by(|c| c.as_slice().cmp(p_idx)).ok()?;
        let qr = q_combos.binary_search_by(|c| c.as_slice().cmp(q_idx)).ok()?;
        Some((pr * q_combos.len() + qr) * fc + self.freq().freq_rank(k)?)
    }

    pub fn monomial(&self, pos: usize) -> BidegreeForm {
        let (pi, qi, k) = self.element(pos);
        let g = TrigPoly::monomial(2 * self.m, k, Scalar::one()).expect("freq length");
        BidegreeForm::monomial_term(self.m, pi, qi, g).expect("valid index")
    }

    /// Coordinates of a bidegree form whose components all have bidegree
    /// `(p, q)`; errors outside the cutoff.
    pub fn vectorize(&self, phi: &BidegreeForm) -> Result<Vec<(usize, Scalar)>> {
        if phi.complex_dim() != self.m {
            return Err(Error::DimMismatch(phi.complex_dim(), self.m));
        }
        let mut out = Vec::new();
        for ((pi, qi), g) in phi.components() {
            if pi.len() != self.p || qi.len() != self.q {
                return Err(Error::DegreeMismatch(pi.len() + qi.len(), self.p + self.q));
            }
            for (k, c) in g.terms() {
                let pos = self.position(pi, qi, k).ok_or_else(|| Error::GrowthBound {
                    element: format!("e^(i<{k:?},t>) dz{pi:?} dzbar{qi:?}"),
                    cutoff: self.cutoff,
                })?;
                out.push((pos, c.clone()));
            }
        }
        out.sort_by_key(|(pos, _)| *pos);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_order() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn sizes() {
        // C(2,1) * 5^2 at D = 2 on T^2
        let spec = BasisSpec::new(2, 1, 2);
        assert_eq!(spec.size(), 2 * 25);
        assert_eq!(BasisSpec::new(2, 3, 2).size(), 0);
        assert_eq!(BasisSpec::new(2, 1, -1).size(), 0);
    }

    #[test]
    fn position_round_trip() {
        let spec = BasisSpec::new(3, 2, 2);
        for pos in 0..spec.size() {
            let (idx, k) = spec.element(pos);
            assert_eq!(spec.position(&idx, &k), Some(pos));
        }
        assert_eq!(spec.position(&[0, 1], &[3, 0, 0]), None);
    }

    #[test]
    fn vectorize_and_back() {
        let spec = BasisSpec::new(2, 1, 2);
        let phi = DifferentialForm::monomial_term(
            2,
            vec![0],
            TrigPoly::cos_lin(2, &[1, -2]).unwrap(),
        )
        .unwrap();
        let coords = spec.vectorize(&phi).unwrap();
        assert_eq!(coords.len(), 2);
        // out-of-cutoff terms are reported as growth violations
        let tight = BasisSpec::new(2, 1, 1);
        assert!(matches!(
            tight.vectorize(&phi),
            Err(Error::GrowthBound { .. })
        ));
    }

    #[test]
    fn bidegree_positions() {
        let spec = BidegreeBasisSpec::new(2, 1, 1, 1);
        assert_eq!(spec.size(), 2 * 2 * 81);
        for pos in (0..spec.size()).step_by(17) {
            let (pi, qi, k) = spec.element(pos);
            assert_eq!(spec.position(&pi, &qi, &k), Some(pos));
        }
        let phi = spec.monomial(5);
        let coords = spec.vectorize(&phi).unwrap();
        assert_eq!(coords, vec![(5, Scalar::one())]);
    }
}
