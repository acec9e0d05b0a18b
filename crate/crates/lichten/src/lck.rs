//! Complexes attached to a conformally closed 2-form.
//!
//! A fixture holds a twist `(f, theta)`, a 2-form `omega` with
//! `d(omega) = theta ^ omega`, and a rational parameter `m`. From these it
//! derives the scaled twists `theta_0 = m*theta` and `theta_1 = (m+1)*theta`
//! and the coupling form `f^2 omega`, which is closed for `d_{f,theta}`
//! because `d_{f,theta}(f^2 omega) = f^3 d_theta(omega) = 0`.
//!
//! The pair complex holds `(phi, psi)` with `psi` one degree lower and
//!
//! ```text
//! d(phi, psi) = ( d_{f,theta_1} phi - f^2 omega ^ psi , -d_{f,theta_0} psi )
//! ```
//!
//! Its cohomology interlocks with the two strands through the connecting
//! map `[phi] -> [phi ^ f^2 omega]`, and the dimension identity
//!
//! ```text
//! dim Hhat^r = (dim H^r_{f,theta_1} - rank delta^{r-2})
//!            + (dim H^{r-1}_{f,theta_0} - rank delta^{r-1})
//! ```
//!
//! is checked whenever every ingredient stabilizes. On even tori the
//! Bott-Chern spaces `ker del ∩ ker delbar / im (del delbar)` are computed
//! on bidegree bases with the same truncation discipline.

use crate::basis::{BasisSpec, BidegreeBasisSpec};
use crate::bidegree::{to_bidegree, BidegreeForm};
use crate::engine::{
    assemble, cohomology_dims, induced_map_rank, stabilize_tail, ComplexFamily, DegreeReport,
    FormOp, TwistKind, TwistedComplex,
};
use crate::form::DifferentialForm;
use crate::scalar::Scalar;
use crate::sparse::{SparseMat, SparseVec};
use crate::trig::TrigPoly;
use crate::twist::TwistData;
use crate::{Error, Result};
use num::{BigRational, One};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct LckFixture {
    tw: TwistData,
    omega: DifferentialForm,
    m: BigRational,
    tw0: TwistData,
    tw1: TwistData,
    f2_omega: DifferentialForm,
}

impl LckFixture {
    pub fn new(tw: TwistData, omega: DifferentialForm, m: BigRational) -> Result<Self> {
        if omega.dim() != tw.dim() {
            return Err(Error::DimMismatch(omega.dim(), tw.dim()));
        }
        if omega.degree() != 2 {
            return Err(Error::FixtureInvariant(format!(
                "omega must be a 2-form, got degree {}",
                omega.degree()
            )));
        }
        if !omega.ext_d().sub(&tw.theta().wedge(&omega)?)?.is_zero() {
            return Err(Error::FixtureInvariant("d(omega) != theta ^ omega".into()));
        }
        if !tw.d_theta(&omega)?.is_zero() {
            return Err(Error::FixtureInvariant("d_theta(omega) != 0".into()));
        }
        let f2 = tw.f().mul(tw.f())?;
        let f2_omega = omega.scale_poly(&f2)?;
        if !tw.d_f_theta(&f2_omega)?.is_zero() {
            return Err(Error::FixtureInvariant("d_{f,theta}(f^2 omega) != 0".into()));
        }
        let tw0 = tw.with_theta(tw.theta().scale(&Scalar::from_real(m.clone())))?;
        let m1 = &m + BigRational::one();
        let tw1 = tw.with_theta(tw.theta().scale(&Scalar::from_real(m1)))?;
        Ok(LckFixture { tw, omega, m, tw0, tw1, f2_omega })
    }

    pub fn twist(&self) -> &TwistData {
        &self.tw
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn parameter(&self) -> &BigRational {
        &self.m
    }

    /// Twist with `theta_0 = m * theta`.
    pub fn twist0(&self) -> &TwistData {
        &self.tw0
    }

    /// Twist with `theta_1 = (m+1) * theta`.
    pub fn twist1(&self) -> &TwistData {
        &self.tw1
    }

    pub fn f2_omega(&self) -> &DifferentialForm {
        &self.f2_omega
    }

    /// One application of the pair differential.
    pub fn hat_d(
        &self,
        phi: &DifferentialForm,
        psi: &DifferentialForm,
    ) -> Result<(DifferentialForm, DifferentialForm)> {
        if !psi.is_zero() && !phi.is_zero() && psi.degree() + 1 != phi.degree() {
            return Err(Error::DegreeMismatch(psi.degree() + 1, phi.degree()));
        }
        let first = self.tw1.d_f_theta(phi)?.sub(&self.f2_omega.wedge(psi)?)?;
        let second = self.tw0.d_f_theta(psi)?.neg();
        Ok((first, second))
    }

    pub fn bott_chern(
        &self,
        p: usize,
        q: usize,
        schedule: &[i64],
        stability: usize,
    ) -> Result<BottChernReport> {
        bott_chern_dim(&self.tw, p, q, schedule, stability)
    }
}

/// Fixture whose coupling form is exact by construction:
/// `omega := f^{-2} d_{f,theta}(omega_prime)` for a unit `f`. Then
/// `d_theta(omega) = f^{-3} d_{f,theta}(f^2 omega) = 0` automatically, so
/// the fixture laws hold for any 1-form seed.
pub fn exact_fixture(
    tw: &TwistData,
    omega_prime: &DifferentialForm,
    m: BigRational,
) -> Result<LckFixture> {
    if omega_prime.dim() != tw.dim() {
        return Err(Error::DimMismatch(omega_prime.dim(), tw.dim()));
    }
    if omega_prime.degree() != 1 {
        return Err(Error::DegreeMismatch(omega_prime.degree(), 1));
    }
    let f2_inv = tw.f().mul(tw.f())?.unit_inverse()?;
    let omega = tw.d_f_theta(omega_prime)?.scale_poly(&f2_inv)?;
    LckFixture::new(tw.clone(), omega, m)
}

/// Closedness certificates for the distinguished classes of a fixture,
/// with their coordinates in the truncated bases.
#[derive(Debug, Clone)]
pub struct LckClasses {
    /// `f theta`, certified `d_f`-closed.
    pub lee: DifferentialForm,
    pub lee_coords: SparseVec,
    /// `f^2 omega`, certified `d_{f,theta}`-closed.
    pub square: DifferentialForm,
    pub square_coords: SparseVec,
    /// Coordinates of `f^2 omega` in the `(1,1)` bidegree basis; present on
    /// even tori when the form is pure `(1,1)` (certified closed under both
    /// split halves there).
    pub bidegree_coords: Option<SparseVec>,
    /// Cutoff of the coordinate bases.
    pub cutoff: i64,
}

pub fn lck_classes(fx: &LckFixture) -> Result<LckClasses> {
    let tw = fx.twist();
    let lee = tw.f_theta();
    if !tw.d_f(&lee)?.is_zero() {
        return Err(Error::FixtureInvariant("d_f(f theta) != 0".into()));
    }
    let square = fx.f2_omega().clone();
    if !tw.d_f_theta(&square)?.is_zero() {
        return Err(Error::FixtureInvariant("d_{f,theta}(f^2 omega) != 0".into()));
    }
    let cutoff = lee.coeff_degree().max(square.coeff_degree());
    let lee_coords = BasisSpec::new(tw.dim(), 1, cutoff).vectorize(&lee)?;
    let square_coords = BasisSpec::new(tw.dim(), 2, cutoff).vectorize(&square)?;
    let bidegree_coords = if tw.dim() % 2 == 0 {
        let bi = to_bidegree(&square)?;
        if !tw.del_f_theta(&bi)?.is_zero() {
            return Err(Error::FixtureInvariant("del_{f,theta}(f^2 omega) != 0".into()));
        }
        if !tw.delbar_f_theta(&bi)?.is_zero() {
            return Err(Error::FixtureInvariant("delbar_{f,theta}(f^2 omega) != 0".into()));
        }
        if bi.bidegrees().iter().all(|&pq| pq == (1, 1)) {
            Some(BidegreeBasisSpec::new(tw.dim() / 2, 1, 1, cutoff).vectorize(&bi)?)
        } else {
            None
        }
    } else {
        None
    };
    Ok(LckClasses { lee, lee_coords, square, square_coords, bidegree_coords, cutoff })
}

/// The pair complex `(phi, psi)` driven by the fixture.
#[derive(Debug, Clone)]
pub struct HatComplex {
    fx: LckFixture,
    step: i64,
}

impl HatComplex {
    pub fn new(fx: &LckFixture) -> Self {
        let step = FormOp::DFTheta(fx.tw1.clone())
            .growth()
            .max(FormOp::DFTheta(fx.tw0.clone()).growth())
            .max(fx.f2_omega.coeff_degree());
        HatComplex { fx: fx.clone(), step }
    }

    fn basis(&self, r: usize, level: i64) -> BasisSpec {
        BasisSpec::new(self.fx.tw.dim(), r, level)
    }
}

impl ComplexFamily for HatComplex {
    fn name(&self) -> String {
        format!("hat pair complex on t{}", self.fx.tw.dim())
    }

    fn top_degree(&self) -> usize {
        self.fx.tw.dim() + 1
    }

    fn step(&self) -> i64 {
        self.step
    }

    fn space_dim(&self, r: usize, level: i64) -> usize {
        let first = self.basis(r, level).size();
        let second = match r.checked_sub(1) {
            Some(rm1) => self.basis(rm1, level).size(),
            None => 0,
        };
        first + second
    }

    fn matrix(&self, r: usize, level: i64) -> Result<SparseMat> {
        let hi = level + self.step;
        let rows_first = self.basis(r + 1, hi);
        let rows_second = self.basis(r, hi);
        let cols_first = self.basis(r, level);

        let d1 = assemble(&FormOp::DFTheta(self.fx.tw1.clone()), &cols_first, &rows_first)?;
        let left = SparseMat::vstack(&[&d1, &SparseMat::zero(rows_second.size(), d1.cols())]);

        let minus_one = TrigPoly::from_int(self.fx.tw.dim(), -1);
        let right = match r.checked_sub(1) {
            Some(rm1) => {
                let cols_second = self.basis(rm1, level);
                let minus_wedge = FormOp::Compose(
                    Box::new(FormOp::ScalePoly(minus_one.clone())),
                    Box::new(FormOp::WedgeLeft(self.fx.f2_omega.clone())),
                );
                let wedge = assemble(&minus_wedge, &cols_second, &rows_first)?;
                let minus_d0 = FormOp::Compose(
                    Box::new(FormOp::ScalePoly(minus_one)),
                    Box::new(FormOp::DFTheta(self.fx.tw0.clone())),
                );
                let d0 = assemble(&minus_d0, &cols_second, &rows_second)?;
                SparseMat::vstack(&[&wedge, &d0])
            }
            None => SparseMat::zero(rows_first.size() + rows_second.size(), 0),
        };
        Ok(SparseMat::hstack(&[&left, &right]))
    }
}

/// Everything the pair-complex protocol produces: the pair dims, the two
/// strand dims, the connecting-map ranks, and the per-degree verdict of the
/// dimension identity (present only when every input stabilized).
#[derive(Debug, Clone)]
pub struct HatReport {
    pub hat: BTreeMap<usize, DegreeReport>,
    pub strand1: BTreeMap<usize, DegreeReport>,
    pub strand0: BTreeMap<usize, DegreeReport>,
    /// Per source degree `r`: `(cutoff, rank of [phi] -> [phi ^ f^2 omega])`.
    pub delta: BTreeMap<usize, Vec<(i64, usize)>>,
    pub identity: BTreeMap<usize, Option<bool>>,
}

impl HatReport {
    /// Stabilized rank of the connecting map out of degree `r`, when the
    /// last `stability` scheduled values agree.
    pub fn delta_rank(&self, r: usize, stability: usize) -> Option<usize> {
        let rows = self.delta.get(&r)?;
        let ranks: Vec<usize> = rows.iter().map(|(_, rank)| *rank).collect();
        stabilize_tail(&ranks, stability).1
    }
}

fn stabilized_dim(reports: &BTreeMap<usize, DegreeReport>, r: usize) -> Option<usize> {
    reports.get(&r).and_then(|rep| rep.stabilized_dim)
}

pub fn hat_cohomology_and_delta(
    fx: &LckFixture,
    degrees: &[usize],
    schedule: &[i64],
    stability: usize,
) -> Result<HatReport> {
    let hat_fam = HatComplex::new(fx);
    let hat = cohomology_dims(&hat_fam, degrees, schedule, stability)?;

    let fam1 = TwistedComplex::new(fx.twist1().clone(), TwistKind::DFTheta);
    let fam0 = TwistedComplex::new(fx.twist0().clone(), TwistKind::DFTheta);
    let degrees1: Vec<usize> = degrees.to_vec();
    let degrees0: Vec<usize> = degrees.iter().filter_map(|&r| r.checked_sub(1)).collect();
    let strand1 = cohomology_dims(&fam1, &degrees1, schedule, stability)?;
    let strand0 = if degrees0.is_empty() {
        BTreeMap::new()
    } else {
        cohomology_dims(&fam0, &degrees0, schedule, stability)?
    };

    let delta_sources: BTreeSet<usize> = degrees
        .iter()
        .flat_map(|&r| [r.checked_sub(2), r.checked_sub(1)])
        .flatten()
        .collect();
    let wedge = FormOp::WedgeRight(fx.f2_omega().clone());
    let mut delta = BTreeMap::new();
    for &r in &delta_sources {
        let mut rows = Vec::with_capacity(schedule.len());
        for &d in schedule {
            rows.push((d, induced_map_rank(&wedge, &fam0, &fam1, r, d)?));
        }
        delta.insert(r, rows);
    }

    let mut report = HatReport { hat, strand1, strand0, delta, identity: BTreeMap::new() };
    for &r in degrees {
        let lhs = stabilized_dim(&report.hat, r);
        let h1 = stabilized_dim(&report.strand1, r);
        let h0 = match r.checked_sub(1) {
            Some(rm1) => stabilized_dim(&report.strand0, rm1),
            None => Some(0),
        };
        let d2 = match r.checked_sub(2) {
            Some(rm2) => report.delta_rank(rm2, stability),
            None => Some(0),
        };
        let d1 = match r.checked_sub(1) {
            Some(rm1) => report.delta_rank(rm1, stability),
            None => Some(0),
        };
        let verdict = match (lhs, h1, h0, d2, d1) {
            (Some(lhs), Some(h1), Some(h0), Some(d2), Some(d1)) => {
                Some(lhs as i64 == h1 as i64 - d2 as i64 + h0 as i64 - d1 as i64)
            }
            _ => None,
        };
        report.identity.insert(r, verdict);
    }
    Ok(report)
}

fn assemble_bidegree<F>(op: &F, src: &BidegreeBasisSpec, tgt: &BidegreeBasisSpec) -> Result<SparseMat>
where
    F: Fn(&BidegreeForm) -> Result<BidegreeForm>,
{
    let mut columns = Vec::with_capacity(src.size());
    for pos in 0..src.size() {
        let image = op(&src.monomial(pos))?;
        columns.push(tgt.vectorize(&image)?);
    }
    Ok(SparseMat::from_columns(tgt.size(), columns))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottChernRun {
    pub cutoff: i64,
    pub joint_kernel: usize,
    pub image_rank: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottChernReport {
    pub p: usize,
    pub q: usize,
    pub runs: Vec<BottChernRun>,
    pub stabilized: bool,
    pub stabilized_dim: Option<usize>,
}

/// Dimension of `ker del_{f,theta} ∩ ker delbar_{f,theta} / im (del delbar)`
/// in bidegree `(p, q)` over a cutoff schedule. The image is checked to lie
/// inside both kernels exactly before the quotient is taken.
pub fn bott_chern_dim(
    tw: &TwistData,
    p: usize,
    q: usize,
    schedule: &[i64],
    stability: usize,
) -> Result<BottChernReport> {
    if tw.dim() % 2 != 0 {
        return Err(Error::OddDimension(tw.dim()));
    }
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] < 0 {
        return Err(Error::Config(
            "schedule must be nonempty, nonnegative and strictly increasing".into(),
        ));
    }
    let m = tw.dim() / 2;
    let w = FormOp::DFTheta(tw.clone()).growth();
    let del = |b: &BidegreeForm| tw.del_f_theta(b);
    let delbar = |b: &BidegreeForm| tw.delbar_f_theta(b);

    let mut runs = Vec::with_capacity(schedule.len());
    for &cut in schedule {
        let here = BidegreeBasisSpec::new(m, p, q, cut);
        let up = BidegreeBasisSpec::new(m, p + 1, q, cut + w);
        let up_bar = BidegreeBasisSpec::new(m, p, q + 1, cut + w);
        let m_del = assemble_bidegree(&del, &here, &up)?;
        let m_delbar = assemble_bidegree(&delbar, &here, &up_bar)?;
        let joint_kernel = SparseMat::vstack(&[&m_del, &m_delbar]).kernel_dim();

        let image_rank = if p >= 1 && q >= 1 && cut - 2 * w >= 0 {
            let lo = BidegreeBasisSpec::new(m, p - 1, q - 1, cut - 2 * w);
            let mid = BidegreeBasisSpec::new(m, p - 1, q, cut - w);
            let first = assemble_bidegree(&delbar, &lo, &mid)?;
            let second = assemble_bidegree(&del, &mid, &here)?;
            let dd = second.mul(&first);
            if !m_del.mul(&dd).is_zero() || !m_delbar.mul(&dd).is_zero() {
                return Err(Error::ComplexProperty(format!(
                    "im(del delbar) escapes the joint kernel at ({p},{q}), cutoff {cut}"
                )));
            }
            dd.rank()
        } else {
            0
        };
        runs.push(BottChernRun {
            cutoff: cut,
            joint_kernel,
            image_rank,
            dim: joint_kernel - image_rank,
        });
    }
    let dims: Vec<usize> = runs.iter().map(|r| r.dim).collect();
    let (stabilized, stabilized_dim) = stabilize_tail(&dims, stability);
    Ok(BottChernReport { p, q, runs, stabilized, stabilized_dim })
}
