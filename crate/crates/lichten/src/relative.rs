//! Cone complex of a torus map between twisted complexes.
//!
//! For a map `mu : M -> M'` (forms on the target `M'` pull back to the
//! source `M`) carrying twist data `(f, theta)` on the target, the cone in
//! degree `r` holds pairs `(phi, psi)` with `phi` an `r`-form on `M'` and
//! `psi` an `(r-1)`-form on `M`, and
//!
//! ```text
//! d(phi, psi) = ( d_{f,theta} phi , mu^* phi - d_{mu^* f, mu^* theta} psi )
//! ```
//!
//! This squares to zero because pullback intertwines the two twisted
//! derivatives. Pullback multiplies frequencies by at most the map's
//! frequency scale `a`, so when the target summand is truncated at cutoff
//! `D` the source summand is truncated at `a*D + W`, with `W` a fixed pad
//! absorbing one application of the pulled-back differential.
//!
//! The level step is `max(w', ceil(w/a))` where `w'` and `w` bound the
//! coefficient growth of the target and source differentials: stepping the
//! level by that amount advances the source box by about `w`, the reach of
//! one application of the source differential, so the incoming image spans
//! all the way to the boundary of the kernel box instead of leaving an
//! unreachable band there whose classes would inflate every quotient.

use crate::basis::BasisSpec;
use crate::engine::{assemble, ComplexFamily, FormOp};
use crate::form::{AffineTorusMap, DifferentialForm};
use crate::sparse::SparseMat;
use crate::trig::TrigPoly;
use crate::twist::TwistData;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RelativeComplex {
    map: AffineTorusMap,
    target: TwistData,
    source: TwistData,
    step: i64,
    pad: i64,
}

impl RelativeComplex {
    /// Build the cone of `map` over the target twist data; the source data
    /// is the pullback of the target data.
    pub fn new(map: AffineTorusMap, target: TwistData) -> Result<Self> {
        if map.target_dim() != target.dim() {
            return Err(Error::DimMismatch(map.target_dim(), target.dim()));
        }
        let source = TwistData::new(
            map.pullback_poly(target.f())?,
            map.pullback_form(target.theta())?,
        )?;
        let w_target = FormOp::DFTheta(target.clone()).growth();
        let w_source = FormOp::DFTheta(source.clone()).growth();
        let a = map.freq_scale();
        let step = w_target.max((w_source + a - 1) / a);
        Ok(RelativeComplex { map, target, source, step, pad: w_source })
    }

    pub fn map(&self) -> &AffineTorusMap {
        &self.map
    }

    pub fn target(&self) -> &TwistData {
        &self.target
    }

    /// The pulled-back twist data on the source torus.
    pub fn source(&self) -> &TwistData {
        &self.source
    }

    /// Cutoff used for the source summand when the target summand is
    /// truncated at `level`.
    pub fn inner(&self, level: i64) -> i64 {
        if level < 0 {
            return level;
        }
        self.map.freq_scale() * level + self.pad
    }

    /// One application of the pair differential
    /// `(phi, psi) -> (d_{f,theta} phi, mu*(phi) - d_{mu*f, mu*theta} psi)`,
    /// with `phi` on the target torus and `psi` one degree lower on the
    /// source.
    pub fn rel_d(
        &self,
        phi: &DifferentialForm,
        psi: &DifferentialForm,
    ) -> Result<(DifferentialForm, DifferentialForm)> {
        if !psi.is_zero() && !phi.is_zero() && psi.degree() + 1 != phi.degree() {
            return Err(Error::DegreeMismatch(psi.degree() + 1, phi.degree()));
        }
        let first = self.target.d_f_theta(phi)?;
        let second = self.map.pullback_form(phi)?.sub(&self.source.d_f_theta(psi)?)?;
        Ok((first, second))
    }

    fn target_basis(&self, r: usize, level: i64) -> BasisSpec {
        BasisSpec::new(self.target.dim(), r, level)
    }

    fn source_basis(&self, r: usize, level: i64) -> BasisSpec {
        BasisSpec::new(self.source.dim(), r, self.inner(level))
    }
}

impl ComplexFamily for RelativeComplex {
    fn name(&self) -> String {
        format!(
            "relative complex of a t{} -> t{} map",
            self.source.dim(),
            self.target.dim()
        )
    }

    fn top_degree(&self) -> usize {
        (self.source.dim() + 1).max(self.target.dim())
    }

    fn step(&self) -> i64 {
        self.step
    }

    fn space_dim(&self, r: usize, level: i64) -> usize {
        let target_part = self.target_basis(r, level).size();
        let source_part = match r.checked_sub(1) {
            Some(rm1) => self.source_basis(rm1, level).size(),
            None => 0,
        };
        target_part + source_part
    }

    fn matrix(&self, r: usize, level: i64) -> Result<SparseMat> {
        let hi = level + self.step;
        let target_rows = self.target_basis(r + 1, hi);
        let source_rows = self.source_basis(r, hi);
        let target_cols = self.target_basis(r, level);

        let d_target = assemble(&FormOp::DFTheta(self.target.clone()), &target_cols, &target_rows)?;
        let pull = assemble(&FormOp::Pullback(self.map.clone()), &target_cols, &source_rows)?;
        let left = SparseMat::vstack(&[&d_target, &pull]);

        let right = match r.checked_sub(1) {
            Some(rm1) => {
                let source_cols = self.source_basis(rm1, level);
                let minus_d = FormOp::Compose(
                    Box::new(FormOp::ScalePoly(TrigPoly::from_int(self.source.dim(), -1))),
                    Box::new(FormOp::DFTheta(self.source.clone())),
                );
                let d_source = assemble(&minus_d, &source_cols, &source_rows)?;
                SparseMat::vstack(&[
                    &SparseMat::zero(target_rows.size(), source_cols.size()),
                    &d_source,
                ])
            }
            None => SparseMat::zero(target_rows.size() + source_rows.size(), 0),
        };
        Ok(SparseMat::hstack(&[&left, &right]))
    }
}
