//! Cochain-level constructions on top of the core operators.
//!
//! Three families live here:
//!
//! * partition-of-unity data and the connecting representative
//!   `sigma -> d_f(lambda_V) ^ sigma`, together with the gluing maps it
//!   belongs to — with no open-set structure in the coefficient ring,
//!   restriction is the identity, so the maps are exposed at the cochain
//!   level only;
//! * the product map `(phi, psi) -> pr1*(phi) ^ pr2*(psi)` across a product
//!   torus and its twisted product rule — the rule requires a single
//!   function on the product equal to both factor pullbacks, which as
//!   stated forces the factors to share one constant, so the check carries
//!   a hypothesis flag instead of silently assuming it;
//! * the homomorphisms out of the twisted complex: the ideal generated by
//!   `f theta` (where `d_{theta,f}` and `d_f` agree exactly) and the
//!   connecting assignment `[phi] -> [f theta ^ phi]`.

use crate::basis::BasisSpec;
use crate::engine::{assemble, FormOp};
use crate::form::{AffineTorusMap, DifferentialForm};
use crate::sparse::SparseMat;
use crate::trig::TrigPoly;
use crate::twist::TwistData;
use crate::{Error, Result};

/// Two functions summing to one exactly.
#[derive(Debug, Clone)]
pub struct PartitionFixture {
    lambda_u: TrigPoly,
    lambda_v: TrigPoly,
}

impl PartitionFixture {
    pub fn new(lambda_u: TrigPoly, lambda_v: TrigPoly) -> Result<Self> {
        if lambda_u.dim() != lambda_v.dim() {
            return Err(Error::DimMismatch(lambda_u.dim(), lambda_v.dim()));
        }
        let sum = lambda_u.add(&lambda_v)?;
        if !sum.sub(&TrigPoly::one(lambda_u.dim()))?.is_zero() {
            return Err(Error::InvalidPartition(format!(
                "lambda_U + lambda_V = {sum}, expected 1"
            )));
        }
        Ok(PartitionFixture { lambda_u, lambda_v })
    }

    pub fn lambda_u(&self) -> &TrigPoly {
        &self.lambda_u
    }

    pub fn lambda_v(&self) -> &TrigPoly {
        &self.lambda_v
    }
}

/// First gluing map: duplicate (each copy stands for a restriction).
pub fn mv_alpha(sigma: &DifferentialForm) -> (DifferentialForm, DifferentialForm) {
    (sigma.clone(), sigma.clone())
}

/// Second gluing map: difference of the two pieces.
pub fn mv_beta(
    phi_u: &DifferentialForm,
    phi_v: &DifferentialForm,
) -> Result<DifferentialForm> {
    phi_u.sub(phi_v)
}

/// Connecting representative `d_f(lambda_V) ^ sigma`.
///
/// Certifies on the way that `d_f(lambda_U) + d_f(lambda_V) = 0` (so the
/// same form equals `-d_f(lambda_U) ^ sigma`) and that the composite of the
/// two gluing maps kills `sigma`. When `sigma` is `d_{f,theta}`-closed the
/// result is again `d_{f,theta}`-closed; that consequence is left to the
/// caller because the formula itself does not need it.
pub fn mv_maps(
    pf: &PartitionFixture,
    tw: &TwistData,
    sigma: &DifferentialForm,
) -> Result<DifferentialForm> {
    if pf.lambda_u.dim() != tw.dim() {
        return Err(Error::DimMismatch(pf.lambda_u.dim(), tw.dim()));
    }
    if sigma.dim() != tw.dim() {
        return Err(Error::DimMismatch(sigma.dim(), tw.dim()));
    }
    let du = tw.d_f(&DifferentialForm::from_poly(pf.lambda_u.clone()))?;
    let dv = tw.d_f(&DifferentialForm::from_poly(pf.lambda_v.clone()))?;
    if !du.add(&dv)?.is_zero() {
        return Err(Error::InvalidPartition(
            "d_f(lambda_U) + d_f(lambda_V) != 0".into(),
        ));
    }
    let (su, sv) = mv_alpha(sigma);
    if !mv_beta(&su, &sv)?.is_zero() {
        return Err(Error::ComplexProperty(
            "gluing composite does not vanish".into(),
        ));
    }
    dv.wedge(sigma)
}

/// The two coordinate projections of `T^(n1+n2)` onto its factors.
pub fn product_projections(n1: usize, n2: usize) -> Result<(AffineTorusMap, AffineTorusMap)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Config("product factors must be positive-dimensional".into()));
    }
    let n = n1 + n2;
    let m1: Vec<Vec<i64>> = (0..n1)
        .map(|j| (0..n).map(|l| i64::from(l == j)).collect())
        .collect();
    let m2: Vec<Vec<i64>> = (0..n2)
        .map(|j| (0..n).map(|l| i64::from(l == n1 + j)).collect())
        .collect();
    Ok((AffineTorusMap::linear(m1)?, AffineTorusMap::linear(m2)?))
}

/// `pr1*(phi) ^ pr2*(psi)` on the product torus.
pub fn kunneth_map(
    phi: &DifferentialForm,
    psi: &DifferentialForm,
) -> Result<DifferentialForm> {
    let (pr1, pr2) = product_projections(phi.dim(), psi.dim())?;
    pr1.pullback_form(phi)?.wedge(&pr2.pullback_form(psi)?)
}

/// Both sides of the twisted product rule
///
/// ```text
/// d_{f,theta}(pr1*phi ^ pr2*psi)
///   = pr1*(d_{f1,theta1} phi) ^ pr2*psi
///   + (-1)^{deg phi} pr1*phi ^ pr2*(d_{f2,theta2} psi)
/// ```
///
/// computed with `f := pr1*(f1)` and `theta := pr1*(theta1) + pr2*(theta2)`.
/// `hypothesis_met` records whether `pr1*(f1) = pr2*(f2)` — the literal
/// hypothesis of the rule, which holds only when both functions are the same
/// constant. The two sides agree exactly whenever the flag is set.
#[derive(Debug, Clone)]
pub struct KunnethCheck {
    pub product: DifferentialForm,
    pub lhs: DifferentialForm,
    pub rhs: DifferentialForm,
    pub hypothesis_met: bool,
}

pub fn kunneth_identity(
    tw1: &TwistData,
    phi: &DifferentialForm,
    tw2: &TwistData,
    psi: &DifferentialForm,
) -> Result<KunnethCheck> {
    if phi.dim() != tw1.dim() {
        return Err(Error::DimMismatch(phi.dim(), tw1.dim()));
    }
    if psi.dim() != tw2.dim() {
        return Err(Error::DimMismatch(psi.dim(), tw2.dim()));
    }
    let (pr1, pr2) = product_projections(tw1.dim(), tw2.dim())?;
    let f = pr1.pullback_poly(tw1.f())?;
    let f_other = pr2.pullback_poly(tw2.f())?;
    let theta = pr1
        .pullback_form(tw1.theta())?
        .add(&pr2.pullback_form(tw2.theta())?)?;
    let tw = TwistData::new(f.clone(), theta)?;

    let phi_up = pr1.pullback_form(phi)?;
    let psi_up = pr2.pullback_form(psi)?;
    let product = phi_up.wedge(&psi_up)?;
    let lhs = tw.d_f_theta(&product)?;
    let first = pr1.pullback_form(&tw1.d_f_theta(phi)?)?.wedge(&psi_up)?;
    let second = phi_up.wedge(&pr2.pullback_form(&tw2.d_f_theta(psi)?)?)?;
    let rhs = if phi.degree() % 2 == 0 { first.add(&second)? } else { first.sub(&second)? };
    let hypothesis_met = f.sub(&f_other)?.is_zero();
    Ok(KunnethCheck { product, lhs, rhs, hypothesis_met })
}

/// An element `f theta ^ eta` of the ideal generated by the closed form
/// `f theta`.
pub fn ideal_element(tw: &TwistData, eta: &DifferentialForm) -> Result<DifferentialForm> {
    tw.f_theta().wedge(eta)
}

/// On ideal elements the two operators coincide: both correction terms are
/// multiples of `f theta ^ f theta = 0`.
pub fn ideal_agreement(tw: &TwistData, eta: &DifferentialForm) -> Result<bool> {
    let elt = ideal_element(tw, eta)?;
    Ok(tw.d_theta_f(&elt)?.sub(&tw.d_f(&elt)?)?.is_zero())
}

/// Does `phi` equal `f theta ^ eta` for some cofactor `eta` of coefficient
/// degree at most `cutoff`? A positive answer is exact; a negative answer
/// only rules out cofactors inside the cutoff box.
pub fn ideal_membership(tw: &TwistData, phi: &DifferentialForm, cutoff: i64) -> Result<bool> {
    if phi.dim() != tw.dim() {
        return Err(Error::DimMismatch(phi.dim(), tw.dim()));
    }
    if phi.degree() == 0 {
        return Ok(phi.is_zero());
    }
    let lee = tw.f_theta();
    let op = FormOp::WedgeLeft(lee.clone());
    let src = BasisSpec::new(tw.dim(), phi.degree() - 1, cutoff);
    let tgt = BasisSpec::new(tw.dim(), phi.degree(), cutoff + lee.coeff_degree());
    let mat = assemble(&op, &src, &tgt)?;
    let vec = match tgt.vectorize(phi) {
        Ok(v) => v,
        // outside the reachable box: no cofactor inside the cutoff fits
        Err(Error::GrowthBound { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let aug = SparseMat::hstack(&[&mat, &SparseMat::from_columns(tgt.size(), vec![vec])]);
    Ok(aug.rank() == mat.rank())
}

/// Images of a `d_{theta,f}`-closed form under the three maps out of the
/// twisted complex. All three share the representative `f theta ^ phi`; what
/// differs is the complex each image lives in, so each closedness
/// certificate is checked separately and exactly.
#[derive(Debug, Clone)]
pub struct TwistedHomImages {
    /// Class of the ideal element in the twisted complex.
    pub a_image: DifferentialForm,
    /// Class of the ideal element in the attached-function complex.
    pub b_image: DifferentialForm,
    /// Connecting image `f theta ^ phi` one degree up.
    pub c_image: DifferentialForm,
}

pub fn twisted_homs(tw: &TwistData, phi: &DifferentialForm) -> Result<TwistedHomImages> {
    if phi.dim() != tw.dim() {
        return Err(Error::DimMismatch(phi.dim(), tw.dim()));
    }
    if !tw.d_theta_f(phi)?.is_zero() {
        return Err(Error::ComplexProperty(
            "input is not d_{theta,f}-closed".into(),
        ));
    }
    let rep = tw.f_theta().wedge(phi)?;
    if !tw.d_f(&rep)?.is_zero() {
        return Err(Error::ComplexProperty("d_f(f theta ^ phi) != 0".into()));
    }
    if !tw.d_theta_f(&rep)?.is_zero() {
        return Err(Error::ComplexProperty("d_{theta,f}(f theta ^ phi) != 0".into()));
    }
    Ok(TwistedHomImages { a_image: rep.clone(), b_image: rep.clone(), c_image: rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn halves(dim: usize, axis_freq: &[i64]) -> PartitionFixture {
        let half = Scalar::from_ratio(1, 2);
        let lu = TrigPoly::one(dim)
            .add(&TrigPoly::cos_lin(dim, axis_freq).unwrap())
            .unwrap()
            .scale(&half);
        let lv = TrigPoly::one(dim)
            .sub(&TrigPoly::cos_lin(dim, axis_freq).unwrap())
            .unwrap()
            .scale(&half);
        PartitionFixture::new(lu, lv).unwrap()
    }

    #[test]
    fn partition_must_sum_to_one() {
        let lu = TrigPoly::cos_lin(1, &[1]).unwrap();
        let lv = TrigPoly::cos_lin(1, &[1]).unwrap();
        assert!(matches!(
            PartitionFixture::new(lu, lv),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn connecting_representative_on_the_circle() {
        // f = 2: d_f(lambda_V) = 2 d((1 - cos t)/2) = sin t dt
        let pf = halves(1, &[1]);
        let tw = TwistData::untwisted(TrigPoly::from_int(1, 2));
        let rep = mv_maps(&pf, &tw, &DifferentialForm::one(1)).unwrap();
        let expected =
            DifferentialForm::monomial_term(1, vec![0], TrigPoly::sin_lin(1, &[1]).unwrap())
                .unwrap();
        assert_eq!(rep, expected);
    }

    #[test]
    fn closed_sigma_gives_closed_representative() {
        // theta = i dt1 makes exp(i t1) a d_{f,theta}-closed function
        let theta = DifferentialForm::dt(2, 0).unwrap().scale(&Scalar::i());
        let tw = TwistData::new(TrigPoly::from_int(2, 2), theta).unwrap();
        let sigma = DifferentialForm::from_poly(TrigPoly::exp_lin(2, &[1, 0]).unwrap());
        assert!(tw.d_f_theta(&sigma).unwrap().is_zero());

        let pf = halves(2, &[0, 1]);
        let rep = mv_maps(&pf, &tw, &sigma).unwrap();
        assert!(!rep.is_zero());
        assert!(tw.d_f_theta(&rep).unwrap().is_zero());
    }

    #[test]
    fn product_of_circle_forms() {
        let dt = DifferentialForm::dt(1, 0).unwrap();
        let prod = kunneth_map(&dt, &dt).unwrap();
        let expected = DifferentialForm::dt(2, 0)
            .unwrap()
            .wedge(&DifferentialForm::dt(2, 1).unwrap())
            .unwrap();
        assert_eq!(prod, expected);

        let ones = kunneth_map(&DifferentialForm::one(1), &DifferentialForm::one(1)).unwrap();
        assert_eq!(ones, DifferentialForm::one(2));
    }

    #[test]
    fn product_rule_for_matching_constants() {
        let tw1 = TwistData::new(
            TrigPoly::from_int(1, 3),
            DifferentialForm::monomial_term(1, vec![0], TrigPoly::cos_lin(1, &[1]).unwrap())
                .unwrap(),
        )
        .unwrap();
        let tw2 = TwistData::new(
            TrigPoly::from_int(1, 3),
            DifferentialForm::monomial_term(
                1,
                vec![0],
                TrigPoly::one(1).add(&TrigPoly::sin_lin(1, &[1]).unwrap()).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();

        // even-degree first factor
        let phi = DifferentialForm::from_poly(TrigPoly::cos_lin(1, &[1]).unwrap());
        let psi = DifferentialForm::monomial_term(1, vec![0], TrigPoly::sin_lin(1, &[1]).unwrap())
            .unwrap();
        let check = kunneth_identity(&tw1, &phi, &tw2, &psi).unwrap();
        assert!(check.hypothesis_met);
        assert_eq!(check.lhs, check.rhs);

        // odd-degree first factor exercises the sign
        let check = kunneth_identity(&tw1, &psi, &tw2, &phi).unwrap();
        assert!(check.hypothesis_met);
        assert_eq!(check.lhs, check.rhs);
    }

    #[test]
    fn product_rule_hypothesis_flag() {
        let tw1 = TwistData::untwisted(
            TrigPoly::one(1).add(&TrigPoly::cos_lin(1, &[1]).unwrap()).unwrap(),
        );
        let tw2 = TwistData::untwisted(TrigPoly::one(1));
        let phi = DifferentialForm::one(1);
        let check = kunneth_identity(&tw1, &phi, &tw2, &phi).unwrap();
        assert!(!check.hypothesis_met);
    }

    #[test]
    fn twisted_hom_images_certified() {
        // f = 2, theta = dt1: closed 1-forms are d_{theta,f}-closed
        let tw = TwistData::new(
            TrigPoly::from_int(2, 2),
            DifferentialForm::dt(2, 0).unwrap(),
        )
        .unwrap();
        let phi = DifferentialForm::dt(2, 1).unwrap();
        let images = twisted_homs(&tw, &phi).unwrap();
        let expected = DifferentialForm::dt(2, 0)
            .unwrap()
            .wedge(&DifferentialForm::dt(2, 1).unwrap())
            .unwrap()
            .scale(&Scalar::from_int(2));
        assert_eq!(images.c_image, expected);
        assert_eq!(images.a_image, images.b_image);

        let open = DifferentialForm::from_poly(TrigPoly::cos_lin(2, &[0, 1]).unwrap());
        assert!(matches!(
            twisted_homs(&tw, &open),
            Err(Error::ComplexProperty(_))
        ));
    }

    #[test]
    fn ideal_agreement_and_membership() {
        let tw = TwistData::new(
            TrigPoly::from_int(2, 2),
            DifferentialForm::dt(2, 0).unwrap(),
        )
        .unwrap();
        let eta = DifferentialForm::monomial_term(2, vec![1], TrigPoly::sin_lin(2, &[0, 1]).unwrap())
            .unwrap();
        assert!(ideal_agreement(&tw, &eta).unwrap());

        let member = ideal_element(&tw, &eta).unwrap();
        assert!(ideal_membership(&tw, &member, 1).unwrap());
        // dt2 has no f theta factor
        let outside = DifferentialForm::dt(2, 1).unwrap();
        assert!(!ideal_membership(&tw, &outside, 2).unwrap());
        // dt1 = f theta ^ (1/2) does
        let inside = DifferentialForm::dt(2, 0).unwrap();
        assert!(ideal_membership(&tw, &inside, 2).unwrap());
    }
}
