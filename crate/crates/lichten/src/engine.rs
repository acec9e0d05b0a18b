//! Assembling operators on truncated bases and computing cohomology
//! dimensions from exact ranks.
//!
//! The protocol: for a complex with growth bound `w`, the dimension of
//! `H^r` at cutoff `D` is
//!
//! ```text
//! dim ker( op : B(r, D) -> B(r+1, D+w) ) - rank( op : B(r-1, D-w) -> B(r, D) )
//! ```
//!
//! with the incoming term zero when `r = 0` or `D - w < 0`. Every returned
//! pair of consecutive matrices is checked to satisfy the complex property
//! exactly; `d_{theta,f}` does not square to zero, so for that operator the
//! product is instead compared against the assembled matrix of
//! `f theta ^ d_f` and the quotient is taken by the part of the image that
//! lies in the kernel.

use crate::basis::BasisSpec;
use crate::form::{AffineTorusMap, DifferentialForm};
use crate::sparse::{SparseMat, SparseVec};
use crate::trig::TrigPoly;
use crate::twist::TwistData;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// A linear operator on forms that the engine can turn into a matrix.
#[derive(Debug, Clone)]
pub enum FormOp {
    ExtD,
    DTheta(TwistData),
    DF(TwistData),
    DFTheta(TwistData),
    DThetaF(TwistData),
    /// `phi -> eta ^ phi`
    WedgeLeft(DifferentialForm),
    /// `phi -> phi ^ eta`
    WedgeRight(DifferentialForm),
    /// `phi -> p * phi`
    ScalePoly(TrigPoly),
    /// `phi -> mu^* phi` (forms on the map's target pull back to its source)
    Pullback(AffineTorusMap),
    /// `Compose(a, b)` applies `b` first.
    Compose(Box<FormOp>, Box<FormOp>),
}

impl FormOp {
    pub fn apply(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        match self {
            FormOp::ExtD => Ok(phi.ext_d()),
            FormOp::DTheta(tw) => tw.d_theta(phi),
            FormOp::DF(tw) => tw.d_f(phi),
            FormOp::DFTheta(tw) => tw.d_f_theta(phi),
            FormOp::DThetaF(tw) => tw.d_theta_f(phi),
            FormOp::WedgeLeft(eta) => eta.wedge(phi),
            FormOp::WedgeRight(eta) => phi.wedge(eta),
            FormOp::ScalePoly(p) => phi.scale_poly(p),
            FormOp::Pullback(map) => map.pullback_form(phi),
            FormOp::Compose(a, b) => a.apply(&b.apply(phi)?),
        }
    }

    pub fn degree_shift(&self) -> i64 {
        match self {
            FormOp::ExtD
            | FormOp::DTheta(_)
            | FormOp::DF(_)
            | FormOp::DFTheta(_)
            | FormOp::DThetaF(_) => 1,
            FormOp::WedgeLeft(eta) | FormOp::WedgeRight(eta) => eta.degree() as i64,
            FormOp::ScalePoly(_) | FormOp::Pullback(_) => 0,
            FormOp::Compose(a, b) => a.degree_shift() + b.degree_shift(),
        }
    }

    /// Additive frequency growth: applying the operator to a form with
    /// coefficient degree `<= D` yields coefficient degree
    /// `<= freq_scale * D + growth`.
    pub fn growth(&self) -> i64 {
        match self {
            FormOp::ExtD => 0,
            FormOp::DTheta(tw) => tw.theta_coeff_degree(),
            FormOp::DF(tw) => tw.f().degree(),
            FormOp::DFTheta(tw) => tw.f().degree().max(tw.f_theta().coeff_degree()),
            FormOp::DThetaF(tw) => tw
                .f()
                .degree()
                .max(tw.f_theta().coeff_degree())
                .max(tw.d_theta_of_f().coeff_degree()),
            FormOp::WedgeLeft(eta) | FormOp::WedgeRight(eta) => eta.coeff_degree(),
            FormOp::ScalePoly(p) => p.degree(),
            FormOp::Pullback(_) => 0,
            FormOp::Compose(a, b) => a.freq_scale() * b.growth() + a.growth(),
        }
    }

    /// Multiplicative cutoff factor; 1 except for pullbacks.
    pub fn freq_scale(&self) -> i64 {
        match self {
            FormOp::Pullback(map) => map.freq_scale(),
            FormOp::Compose(a, b) => a.freq_scale() * b.freq_scale(),
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            FormOp::ExtD => "d".into(),
            FormOp::DTheta(_) => "d_theta".into(),
            FormOp::DF(_) => "d_f".into(),
            FormOp::DFTheta(_) => "d_f_theta".into(),
            FormOp::DThetaF(_) => "d_theta_f".into(),
            FormOp::WedgeLeft(_) => "wedge_left".into(),
            FormOp::WedgeRight(_) => "wedge_right".into(),
            FormOp::ScalePoly(_) => "scale".into(),
            FormOp::Pullback(_) => "pullback".into(),
            FormOp::Compose(a, b) => format!("{} . {}", a.name(), b.name()),
        }
    }
}

/// Matrix of `op` from the `src` basis to the `tgt` basis. Errors if any
/// image leaves the target cutoff (growth-bound violation, reported with
/// the offending basis element) or lands in the wrong degree.
pub fn assemble(op: &FormOp, src: &BasisSpec, tgt: &BasisSpec) -> Result<SparseMat> {
    let mut columns = Vec::with_capacity(src.size());
    for pos in 0..src.size() {
        let phi = src.monomial(pos);
        let image = op.apply(&phi)?;
        let coords = tgt.vectorize(&image).map_err(|e| match e {
            Error::GrowthBound { .. } => Error::GrowthBound {
                element: format!("{phi}"),
                cutoff: tgt.cutoff,
            },
            other => other,
        })?;
        columns.push(coords);
    }
    Ok(SparseMat::from_columns(tgt.size(), columns))
}

/// Reindex a matrix whose rows are `from`-coordinates into the larger
/// basis `to` (same degree, bigger cutoff).
pub fn embed_rows(mat: &SparseMat, from: &BasisSpec, to: &BasisSpec) -> Result<SparseMat> {
    let mut columns = Vec::with_capacity(mat.cols());
    for j in 0..mat.cols() {
        let mut col: SparseVec = Vec::with_capacity(mat.column(j).len());
        for (row, v) in mat.column(j) {
            let (idx, k) = from.element(*row);
            let pos = to.position(&idx, &k).ok_or_else(|| Error::GrowthBound {
                element: format!("e^(i<{k:?},t>) dt{idx:?}"),
                cutoff: to.cutoff,
            })?;
            col.push((pos, v.clone()));
        }
        col.sort_by_key(|(r, _)| *r);
        columns.push(col);
    }
    Ok(SparseMat::from_columns(to.size(), columns))
}

/// A graded complex the dimension protocol can drive.
pub trait ComplexFamily: Sync {
    fn name(&self) -> String;
    /// Degrees above this have empty spaces.
    fn top_degree(&self) -> usize;
    /// Uniform growth bound per application of the differential.
    fn step(&self) -> i64;
    fn space_dim(&self, r: usize, level: i64) -> usize;
    /// Matrix of the differential `C^r(level) -> C^{r+1}(level + step)`.
    fn matrix(&self, r: usize, level: i64) -> Result<SparseMat>;
    /// Whether the differential squares to zero (image inside kernel for free).
    fn squares_to_zero(&self) -> bool {
        true
    }
    /// Exact check of the square law on assembled consecutive matrices.
    fn verify_square(&self, r: usize, level: i64, m1: &SparseMat, m2: &SparseMat) -> Result<()> {
        if m2.mul(m1).is_zero() {
            Ok(())
        } else {
            Err(Error::ComplexProperty(format!(
                "{}: d.d != 0 into degree {r} at cutoff {level}",
                self.name()
            )))
        }
    }
}

/// Single-operator twisted complex on one torus.
#[derive(Debug, Clone)]
pub struct TwistedComplex {
    tw: TwistData,
    kind: TwistKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    ExtD,
    DTheta,
    DF,
    DFTheta,
    DThetaF,
}

impl TwistKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(TwistKind::ExtD),
            "d_theta" => Ok(TwistKind::DTheta),
            "d_f" => Ok(TwistKind::DF),
            "d_f_theta" => Ok(TwistKind::DFTheta),
            "d_theta_f" => Ok(TwistKind::DThetaF),
            other => Err(Error::Config(format!(
                "unknown operator {other:?}; use d, d_theta, d_f, d_f_theta or d_theta_f"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TwistKind::ExtD => "d",
            TwistKind::DTheta => "d_theta",
            TwistKind::DF => "d_f",
            TwistKind::DFTheta => "d_f_theta",
            TwistKind::DThetaF => "d_theta_f",
        }
    }
}

impl TwistedComplex {
    pub fn new(tw: TwistData, kind: TwistKind) -> Self {
        TwistedComplex { tw, kind }
    }

    pub fn de_rham(dim: usize) -> Self {
        TwistedComplex { tw: TwistData::untwisted(TrigPoly::one(dim)), kind: TwistKind::ExtD }
    }

    pub fn twist(&self) -> &TwistData {
        &self.tw
    }

    pub fn kind(&self) -> TwistKind {
        self.kind
    }

    pub fn op(&self) -> FormOp {
        match self.kind {
            TwistKind::ExtD => FormOp::ExtD,
            TwistKind::DTheta => FormOp::DTheta(self.tw.clone()),
            TwistKind::DF => FormOp::DF(self.tw.clone()),
            TwistKind::DFTheta => FormOp::DFTheta(self.tw.clone()),
            TwistKind::DThetaF => FormOp::DThetaF(self.tw.clone()),
        }
    }

    pub fn basis(&self, r: usize, level: i64) -> BasisSpec {
        BasisSpec::new(self.tw.dim(), r, level)
    }
}

impl ComplexFamily for TwistedComplex {
    fn name(&self) -> String {
        format!("{} complex on t{}", self.kind.label(), self.tw.dim())
    }

    fn top_degree(&self) -> usize {
        self.tw.dim()
    }

    fn step(&self) -> i64 {
        self.op().growth()
    }

    fn space_dim(&self, r: usize, level: i64) -> usize {
        self.basis(r, level).size()
    }

    fn matrix(&self, r: usize, level: i64) -> Result<SparseMat> {
        assemble(&self.op(), &self.basis(r, level), &self.basis(r + 1, level + self.step()))
    }

    fn squares_to_zero(&self) -> bool {
        self.kind != TwistKind::DThetaF
    }

    fn verify_square(&self, r: usize, level: i64, m1: &SparseMat, m2: &SparseMat) -> Result<()> {
        if self.squares_to_zero() {
            if m2.mul(m1).is_zero() {
                return Ok(());
            }
            return Err(Error::ComplexProperty(format!(
                "{}: d.d != 0 into degree {r} at cutoff {level}",
                self.name()
            )));
        }
        // d_{theta,f} squared equals f theta ^ d_f, exactly
        let w = self.step();
        let composite = FormOp::Compose(
            Box::new(FormOp::WedgeLeft(self.tw.f_theta())),
            Box::new(FormOp::DF(self.tw.clone())),
        );
        let expected = assemble(
            &composite,
            &self.basis(r - 1, level - w),
            &self.basis(r + 1, level + w),
        )?;
        if m2.mul(m1) == expected {
            Ok(())
        } else {
            Err(Error::ComplexProperty(format!(
                "{}: square does not equal f theta ^ d_f at degree {r}, cutoff {level}",
                self.name()
            )))
        }
    }
}

/// One row of the dimension table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRun {
    pub cutoff: i64,
    pub kernel_dim: usize,
    /// Rank of the incoming differential inside the kernel. For complexes
    /// that square to zero this is just the rank of the incoming matrix.
    pub incoming_rank: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub runs: Vec<DegreeRun>,
    pub stabilized: bool,
    pub stabilized_dim: Option<usize>,
}

pub(crate) fn stabilize_tail(dims: &[usize], stability: usize) -> (bool, Option<usize>) {
    if dims.len() < stability || stability == 0 {
        return (false, None);
    }
    let tail = &dims[dims.len() - stability..];
    if tail.iter().all(|d| *d == tail[0]) {
        (true, Some(tail[0]))
    } else {
        (false, None)
    }
}

fn stabilize(runs: &[DegreeRun], stability: usize) -> (bool, Option<usize>) {
    let dims: Vec<usize> = runs.iter().map(|r| r.dim).collect();
    stabilize_tail(&dims, stability)
}

struct Computed {
    mat: SparseMat,
    rank: usize,
    kernel: Option<Vec<SparseVec>>,
}

/// Dimension tables for the requested degrees over a cutoff schedule.
pub fn cohomology_dims(
    family: &dyn ComplexFamily,
    degrees: &[usize],
    schedule: &[i64],
    stability: usize,
) -> Result<BTreeMap<usize, DegreeReport>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("schedule must be strictly increasing and nonempty".into()));
    }
    if schedule[0] < 0 {
        return Err(Error::Config("schedule cutoffs must be nonnegative".into()));
    }
    if stability == 0 {
        return Err(Error::Config("stability window must be at least 1".into()));
    }
    let w = family.step();
    let mut outgoing: BTreeSet<(usize, i64)> = BTreeSet::new();
    let mut incoming: BTreeSet<(usize, i64)> = BTreeSet::new();
    for &r in degrees {
        for &d in schedule {
            outgoing.insert((r, d));
            if r >= 1 && d - w >= 0 {
                incoming.insert((r - 1, d - w));
            }
        }
    }
    let need_kernel = !family.squares_to_zero();
    let keys: Vec<(usize, i64, bool)> = outgoing
        .iter()
        .map(|&(r, d)| (r, d, true))
        .chain(incoming.difference(&outgoing).map(|&(r, d)| (r, d, false)))
        .collect();

    let computed: Result<BTreeMap<(usize, i64), Computed>> = keys
        .par_iter()
        .map(|&(r, d, is_outgoing)| {
            let mat = family.matrix(r, d)?;
            let kernel = if need_kernel && is_outgoing {
                Some(mat.kernel_basis())
            } else {
                None
            };
            let rank = match &kernel {
                Some(k) => mat.cols() - k.len(),
                None => mat.rank(),
            };
            Ok(((r, d), Computed { mat, rank, kernel }))
        })
        .collect();
    let computed = computed?;

    let mut out = BTreeMap::new();
    for &r in degrees {
        let mut runs = Vec::with_capacity(schedule.len());
        for &d in schedule {
            let here = &computed[&(r, d)];
            let kernel_dim = here.mat.cols() - here.rank;
            let (incoming_rank, dim) = if r == 0 || d - w < 0 {
                (0, kernel_dim)
            } else {
                let prev = &computed[&(r - 1, d - w)];
                family.verify_square(r, d, &prev.mat, &here.mat)?;
                if family.squares_to_zero() {
                    (prev.rank, kernel_dim - prev.rank)
                } else {
                    // dim(H) = dim(span(im) + ker) - dim(im)
                    let kernel = here.kernel.as_ref().expect("kernel computed");
                    let kmat = SparseMat::from_columns(here.mat.cols(), kernel.clone());
                    let joint = SparseMat::hstack(&[&prev.mat, &kmat]).rank();
                    let meet = prev.rank + kernel_dim - joint;
                    (meet, kernel_dim - meet)
                }
            };
            runs.push(DegreeRun { cutoff: d, kernel_dim, incoming_rank, dim });
        }
        let (stabilized, stabilized_dim) = stabilize(&runs, stability);
        out.insert(r, DegreeReport { degree: r, runs, stabilized, stabilized_dim });
    }
    Ok(out)
}

/// Rank of the map induced on truncated cohomology by a chain map between
/// two single-operator complexes. The chain property is verified on the
/// truncated bases before any rank is taken.
pub fn induced_map_rank(
    op: &FormOp,
    source: &TwistedComplex,
    target: &TwistedComplex,
    degree: usize,
    level: i64,
) -> Result<usize> {
    let shift = op.degree_shift();
    if shift < 0 || (degree as i64 + shift) < 0 {
        return Err(Error::Config(format!("chain map shifts degree by {shift}")));
    }
    let rt = (degree as i64 + shift) as usize;
    let ws = source.step();
    let wt = target.step();
    let scale = op.freq_scale();
    let wop = op.growth();
    let level_t = scale * level + wop;

    // chain property: target_d . F = F . source_d on the truncated basis
    let src_lo = source.basis(degree, level);
    let src_hi = source.basis(degree + 1, level + ws);
    let f_lo = assemble(op, &src_lo, &target.basis(rt, level_t))?;
    let f_hi_cut = scale * (level + ws) + wop;
    let f_hi = assemble(op, &src_hi, &target.basis(rt + 1, f_hi_cut))?;
    let d_src = source.matrix(degree, level)?;
    let d_tgt = target.matrix(rt, level_t)?;
    let common = f_hi_cut.max(level_t + wt);
    let common_spec = target.basis(rt + 1, common);
    let path_a = embed_rows(&d_tgt.mul(&f_lo), &target.basis(rt + 1, level_t + wt), &common_spec)?;
    let path_b = embed_rows(&f_hi.mul(&d_src), &target.basis(rt + 1, f_hi_cut), &common_spec)?;
    if path_a != path_b {
        return Err(Error::ChainMap(format!(
            "{} between degree {degree} of {} and degree {rt} of {}",
            op.name(),
            source.name(),
            target.name()
        )));
    }

    // rank of the induced map: image of kernel classes modulo the image
    let kernel = d_src.kernel_basis();
    if kernel.is_empty() {
        return Ok(0);
    }
    let kmat = SparseMat::from_columns(d_src.cols(), kernel);
    let mapped = f_lo.mul(&kmat);
    let incoming = if rt >= 1 && level_t - wt >= 0 {
        target.matrix(rt - 1, level_t - wt)?
    } else {
        SparseMat::zero(target.space_dim(rt, level_t), 0)
    };
    let base_rank = incoming.rank();
    Ok(SparseMat::hstack(&[&incoming, &mapped]).rank() - base_rank)
}
