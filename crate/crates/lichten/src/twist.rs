//! Twisted exterior derivatives attached to a function and a closed 1-form.
//!
//! For a function `f` and a closed 1-form `theta` on the torus, acting on a
//! form `phi` of degree `r`:
//!
//! ```text
//! d_theta     phi = d phi - theta ^ phi
//! d_f         phi = f d phi - r df ^ phi
//! d_{f,theta} phi = d_f phi - f theta ^ phi
//! d_{theta,f} phi = f d_theta phi - r (d_theta f) ^ phi
//! ```
//!
//! The first three square to zero; the last squares to `f theta ^ d_f`,
//! which the engine checks as an exact matrix identity rather than assuming.
//! On even-dimensional tori the same twists exist for each half of the
//! bidegree splitting.

use crate::bidegree::{to_bidegree, BidegreeForm};
use crate::form::{AffineTorusMap, DifferentialForm};
use crate::trig::TrigPoly;
use crate::{Error, Result};

/// Validated twist data: `f` any function, `theta` a closed 1-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    dim: usize,
    f: TrigPoly,
    theta: DifferentialForm,
}

impl TwistData {
    pub fn new(f: TrigPoly, theta: DifferentialForm) -> Result<Self> {
        let dim = f.dim();
        if theta.dim() != dim {
            return Err(Error::DimMismatch(theta.dim(), dim));
        }
        if theta.degree() != 1 {
            return Err(Error::ThetaDegree(theta.degree()));
        }
        if !theta.ext_d().is_zero() {
            return Err(Error::ThetaNotClosed);
        }
        Ok(TwistData { dim, f, theta })
    }

    /// Twist with `theta = 0`.
    pub fn untwisted(f: TrigPoly) -> Self {
        let dim = f.dim();
        TwistData { dim, f, theta: DifferentialForm::zero(dim, 1) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self) -> &TrigPoly {
        &self.f
    }

    pub fn theta(&self) -> &DifferentialForm {
        &self.theta
    }

    /// `df` as a 1-form.
    pub fn df(&self) -> DifferentialForm {
        DifferentialForm::from_poly(self.f.clone()).ext_d()
    }

    /// The product form `f theta`.
    pub fn f_theta(&self) -> DifferentialForm {
        self.theta.scale_poly(&self.f).expect("same dim")
    }

    /// `d_theta f = df - f theta`.
    pub fn d_theta_of_f(&self) -> DifferentialForm {
        self.df().sub(&self.f_theta()).expect("1-forms")
    }

    /// Replace `theta` keeping `f`.
    pub fn with_theta(&self, theta: DifferentialForm) -> Result<Self> {
        TwistData::new(self.f.clone(), theta)
    }

    /// Replace `f` keeping `theta`.
    pub fn with_f(&self, f: TrigPoly) -> Result<Self> {
        TwistData::new(f, self.theta.clone())
    }

    fn check_form(&self, phi: &DifferentialForm) -> Result<()> {
        if phi.dim() != self.dim {
            return Err(Error::DimMismatch(phi.dim(), self.dim));
        }
        Ok(())
    }

    /// `d_theta phi = d phi - theta ^ phi`.
    pub fn d_theta(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_form(phi)?;
        phi.ext_d().sub(&self.theta.wedge(phi)?)
    }

    /// `d_f phi = f d phi - r df ^ phi`.
    pub fn d_f(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_form(phi)?;
        let r = phi.degree() as i64;
        let scaled_d = phi.ext_d().scale_poly(&self.f)?;
        let correction = self.df().wedge(phi)?.scale(&crate::scalar::Scalar::from_int(r));
        scaled_d.sub(&correction)
    }

    /// `d_{f,theta} phi = d_f phi - f theta ^ phi`.
    pub fn d_f_theta(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        self.d_f(phi)?.sub(&self.f_theta().wedge(phi)?)
    }

    /// `d_{theta,f} phi = f d_theta phi - r (d_theta f) ^ phi`.
    pub fn d_theta_f(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_form(phi)?;
        let r = phi.degree() as i64;
        let first = self.d_theta(phi)?.scale_poly(&self.f)?;
        let correction = self
            .d_theta_of_f()
            .wedge(phi)?
            .scale(&crate::scalar::Scalar::from_int(r));
        first.sub(&correction)
    }

    /// `chi^r(phi) = f^r phi`, which intertwines `d_theta` with `d_{f,theta}`:
    /// `d_{f,theta}(f^r phi) = f^{r+1} d_theta phi`.
    pub fn chi_map(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_form(phi)?;
        phi.scale_poly(&self.f.pow(phi.degree() as u32))
    }

    /// `Phi^r(phi) = phi / h^r` for a unit `h`; relates the `(f h, theta)`
    /// complex to the `(f, theta)` one.
    pub fn phi_map(h: &TrigPoly, phi: &DifferentialForm) -> Result<DifferentialForm> {
        if h.dim() != phi.dim() {
            return Err(Error::DimMismatch(h.dim(), phi.dim()));
        }
        let h_inv = h.unit_inverse()?;
        phi.scale_poly(&h_inv.pow(phi.degree() as u32))
    }

    /// Largest coefficient frequency degree of `theta`.
    pub fn theta_coeff_degree(&self) -> i64 {
        self.theta.coeff_degree()
    }
}

/// Gauge change by a unit `u`: returns `u phi` together with the twist
/// `(f, theta - u^{-1} du)`, so that `d_{f,theta}(u phi)` equals
/// `u * d_{f,theta'} phi`.
pub fn unit_gauge(
    tw: &TwistData,
    u: &TrigPoly,
    phi: &DifferentialForm,
) -> Result<(DifferentialForm, TwistData)> {
    if u.dim() != tw.dim() {
        return Err(Error::DimMismatch(u.dim(), tw.dim()));
    }
    let u_inv = u.unit_inverse()?;
    let dlog = DifferentialForm::from_poly(u.clone())
        .ext_d()
        .scale_poly(&u_inv)?;
    let gauged = TwistData::new(tw.f().clone(), tw.theta().sub(&dlog)?)?;
    Ok((phi.scale_poly(u)?, gauged))
}

/// Morphism of twisted pairs: an affine torus map together with a unit
/// `alpha` on the source satisfying `mu^* f' = alpha f`. The induced map on
/// forms divides the pullback by `alpha^r`.
#[derive(Debug, Clone)]
pub struct PairMorphism {
    map: AffineTorusMap,
    alpha: TrigPoly,
}

impl PairMorphism {
    pub fn new(map: AffineTorusMap, alpha: TrigPoly) -> Result<Self> {
        if alpha.dim() != map.source_dim() {
            return Err(Error::DimMismatch(alpha.dim(), map.source_dim()));
        }
        if !alpha.is_unit() {
            return Err(Error::NotAUnit(alpha.to_string()));
        }
        Ok(PairMorphism { map, alpha })
    }

    /// Plain pullback with `alpha = 1`.
    pub fn plain(map: AffineTorusMap) -> Self {
        let alpha = TrigPoly::one(map.source_dim());
        PairMorphism { map, alpha }
    }

    pub fn map(&self) -> &AffineTorusMap {
        &self.map
    }

    pub fn alpha(&self) -> &TrigPoly {
        &self.alpha
    }

    /// `Phi^*(phi) = mu^*(phi) / alpha^r`.
    pub fn pullback(&self, phi: &DifferentialForm) -> Result<DifferentialForm> {
        let pulled = self.map.pullback_form(phi)?;
        let alpha_inv = self.alpha.unit_inverse()?;
        pulled.scale_poly(&alpha_inv.pow(phi.degree() as u32))
    }

    /// Twist on the source induced from a twist on the target:
    /// `f = alpha^{-1} mu^* f'` and `theta = mu^* theta'`.
    pub fn induced_twist(&self, target: &TwistData) -> Result<TwistData> {
        let f = self
            .map
            .pullback_poly(target.f())?
            .mul(&self.alpha.unit_inverse()?)?;
        let theta = self.map.pullback_form(target.theta())?;
        TwistData::new(f, theta)
    }
}

/// Bidegree halves of the twisted derivatives on an even torus. Degrees in
/// the twist formulas are total degrees `p + q`.
impl TwistData {
    fn complex_dim(&self) -> Result<usize> {
        if self.dim % 2 != 0 {
            return Err(Error::OddDimension(self.dim));
        }
        Ok(self.dim / 2)
    }

    /// `del f` as a pure (1,0) bidegree form.
    pub fn del_of_f(&self) -> Result<BidegreeForm> {
        let m = self.complex_dim()?;
        let f0 = BidegreeForm::from_poly(m, self.f.clone())?;
        f0.del()
    }

    pub fn delbar_of_f(&self) -> Result<BidegreeForm> {
        let m = self.complex_dim()?;
        let f0 = BidegreeForm::from_poly(m, self.f.clone())?;
        f0.delbar()
    }

    /// The (1,0) part of `theta`.
    pub fn theta_10(&self) -> Result<BidegreeForm> {
        Ok(to_bidegree(&self.theta)?.pure_part(1, 0))
    }

    /// The (0,1) part of `theta`.
    pub fn theta_01(&self) -> Result<BidegreeForm> {
        Ok(to_bidegree(&self.theta)?.pure_part(0, 1))
    }

    /// `del_f phi = f del phi - r (del f) ^ phi`.
    pub fn del_f(&self, phi: &BidegreeForm) -> Result<BidegreeForm> {
        let r = phi.degree() as i64;
        let first = phi.del()?.scale_poly(&self.f)?;
        let corr = self
            .del_of_f()?
            .wedge(phi)?
            .scale(&crate::scalar::Scalar::from_int(r));
        first.sub(&corr)
    }

    /// `delbar_f phi = f delbar phi - r (delbar f) ^ phi`.
    pub fn delbar_f(&self, phi: &BidegreeForm) -> Result<BidegreeForm> {
        let r = phi.degree() as i64;
        let first = phi.delbar()?.scale_poly(&self.f)?;
        let corr = self
            .delbar_of_f()?
            .wedge(phi)?
            .scale(&crate::scalar::Scalar::from_int(r));
        first.sub(&corr)
    }

    /// `del_{f,theta} phi = del_f phi - f theta^{1,0} ^ phi`.
    pub fn del_f_theta(&self, phi: &BidegreeForm) -> Result<BidegreeForm> {
        let t10 = self.theta_10()?.scale_poly(&self.f)?;
        self.del_f(phi)?.sub(&t10.wedge(phi)?)
    }

    /// `delbar_{f,theta} phi = delbar_f phi - f theta^{0,1} ^ phi`.
    pub fn delbar_f_theta(&self, phi: &BidegreeForm) -> Result<BidegreeForm> {
        let t01 = self.theta_01()?.scale_poly(&self.f)?;
        self.delbar_f(phi)?.sub(&t01.wedge(phi)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidegree::from_bidegree;
    use crate::scalar::Scalar;

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

    fn circle_twist() -> TwistData {
        TwistData::new(cos_axis(1, 0), DifferentialForm::dt(1, 0).unwrap()).unwrap()
    }

    #[test]
    fn theta_must_be_closed_degree_one() {
        // sin(t1) dt2 on T^2 is not closed
        let theta = DifferentialForm::monomial_term(2, vec![1], sin_axis(2, 0)).unwrap();
        assert_eq!(
            TwistData::new(TrigPoly::one(2), theta),
            Err(Error::ThetaNotClosed)
        );
        // cos(t1) dt1 is exact, hence accepted
        let exact = DifferentialForm::monomial_term(2, vec![0], cos_axis(2, 0)).unwrap();
        assert!(TwistData::new(TrigPoly::one(2), exact).is_ok());
        let two_form = DifferentialForm::dt(2, 0)
            .unwrap()
            .wedge(&DifferentialForm::dt(2, 1).unwrap())
            .unwrap();
        assert_eq!(
            TwistData::new(TrigPoly::one(2), two_form),
            Err(Error::ThetaDegree(2))
        );
    }

    #[test]
    fn d_theta_special_cases() {
        let tw = circle_twist();
        // on a function: dg - g theta
        let g = TrigPoly::exp_lin(1, &[3]).unwrap();
        let out = tw.d_theta(&DifferentialForm::from_poly(g.clone())).unwrap();
        let expect = g.scale(&(&Scalar::i().scale_int(3) - &Scalar::one()));
        assert_eq!(out.coeff(&[0]), expect);
        // phi = 1 gives -theta
        let one = DifferentialForm::one(1);
        assert_eq!(tw.d_theta(&one).unwrap(), tw.theta().neg());
        // theta = 0 reduces to d
        let untw = TwistData::untwisted(TrigPoly::one(1));
        let s = DifferentialForm::from_poly(sin_axis(1, 0));
        assert_eq!(untw.d_theta(&s).unwrap(), s.ext_d());
    }

    #[test]
    fn d_f_on_functions_and_top_forms() {
        let tw = circle_twist();
        // d_f(sin) = cos * cos dt = cos^2 dt
        let s = DifferentialForm::from_poly(sin_axis(1, 0));
        let out = tw.d_f(&s).unwrap();
        assert_eq!(out.coeff(&[0]), cos_axis(1, 0).pow(2));
        // degree 1 forms on the circle map to zero
        let w = DifferentialForm::monomial_term(1, vec![0], sin_axis(1, 0)).unwrap();
        assert!(tw.d_f(&w).unwrap().is_zero());
        // constants map to zero
        assert!(tw.d_f(&DifferentialForm::one(1)).unwrap().is_zero());
    }

    #[test]
    fn d_f_theta_special_cases() {
        let tw = circle_twist();
        let one = DifferentialForm::one(1);
        assert_eq!(tw.d_f_theta(&one).unwrap(), tw.f_theta().neg());

        let untw = TwistData::untwisted(cos_axis(1, 0));
        let s = DifferentialForm::from_poly(sin_axis(1, 0));
        assert_eq!(untw.d_f_theta(&s).unwrap(), untw.d_f(&s).unwrap());

        let unit_f = tw.with_f(TrigPoly::one(1)).unwrap();
        assert_eq!(unit_f.d_f_theta(&s).unwrap(), unit_f.d_theta(&s).unwrap());
    }

    #[test]
    fn d_f_theta_squares_to_zero_sample() {
        let f = cos_axis(2, 0);
        let theta = DifferentialForm::dt(2, 1).unwrap();
        let tw = TwistData::new(f, theta).unwrap();
        let phi = DifferentialForm::monomial_term(2, vec![0], sin_axis(2, 1)).unwrap();
        let twice = tw.d_f_theta(&tw.d_f_theta(&phi).unwrap()).unwrap();
        assert!(twice.is_zero());
    }

    #[test]
    fn d_theta_f_reductions_and_square() {
        let f = cos_axis(2, 0);
        let theta = DifferentialForm::dt(2, 0).unwrap();
        let tw = TwistData::new(f.clone(), theta).unwrap();
        // theta = 0 reduces to d_f
        let untw = TwistData::untwisted(f.clone());
        let phi = DifferentialForm::monomial_term(2, vec![1], sin_axis(2, 0)).unwrap();
        assert_eq!(untw.d_theta_f(&phi).unwrap(), untw.d_f(&phi).unwrap());
        // f = 0 kills everything
        let zero_f = tw.with_f(TrigPoly::zero(2)).unwrap();
        assert!(zero_f.d_theta_f(&phi).unwrap().is_zero());
        // on functions d_{theta,f} g = f d_theta g
        let g = DifferentialForm::from_poly(sin_axis(2, 1));
        assert_eq!(
            tw.d_theta_f(&g).unwrap(),
            tw.d_theta(&g).unwrap().scale_poly(&f).unwrap()
        );
        // square equals f theta ^ d_f
        let twice = tw.d_theta_f(&tw.d_theta_f(&g).unwrap()).unwrap();
        let expect = tw.f_theta().wedge(&tw.d_f(&g).unwrap()).unwrap();
        assert_eq!(twice, expect);
    }

    #[test]
    fn chi_intertwines() {
        let tw = circle_twist();
        let phi = DifferentialForm::monomial_term(1, vec![0], sin_axis(1, 0)).unwrap();
        let lhs = tw.d_f_theta(&tw.chi_map(&phi).unwrap()).unwrap();
        let rhs = tw
            .d_theta(&phi)
            .unwrap()
            .scale_poly(&tw.f().pow(2))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_map_divides_by_unit_powers() {
        let h = TrigPoly::monomial(1, vec![1], Scalar::from_int(2)).unwrap();
        let phi = DifferentialForm::monomial_term(1, vec![0], TrigPoly::exp_lin(1, &[2]).unwrap())
            .unwrap();
        let out = TwistData::phi_map(&h, &phi).unwrap();
        let expect = DifferentialForm::monomial_term(
            1,
            vec![0],
            TrigPoly::monomial(1, vec![1], Scalar::from_ratio(1, 2)).unwrap(),
        )
        .unwrap();
        assert_eq!(out, expect);
        // degree 0: identity
        let g = DifferentialForm::from_poly(cos_axis(1, 0));
        assert_eq!(TwistData::phi_map(&h, &g).unwrap(), g);
        // non-units rejected
        assert!(TwistData::phi_map(&cos_axis(1, 0), &phi).is_err());
    }

    #[test]
    fn gauge_by_unit_shifts_theta() {
        let tw = circle_twist();
        let u = TrigPoly::exp_lin(1, &[1]).unwrap();
        let phi = DifferentialForm::monomial_term(1, vec![0], cos_axis(1, 0)).unwrap();
        let (u_phi, gauged) = unit_gauge(&tw, &u, &phi).unwrap();
        // theta' = dt - i dt
        let expect_theta = DifferentialForm::monomial_term(
            1,
            vec![0],
            TrigPoly::constant(1, &Scalar::one() - &Scalar::i()),
        )
        .unwrap();
        assert_eq!(gauged.theta(), &expect_theta);
        // the defining identity
        assert_eq!(
            tw.d_f_theta(&u_phi).unwrap(),
            gauged.d_f_theta(&phi).unwrap().scale_poly(&u).unwrap()
        );
        // u = 1 changes nothing
        let (same, gauged1) = unit_gauge(&tw, &TrigPoly::one(1), &phi).unwrap();
        assert_eq!(same, phi);
        assert_eq!(gauged1.theta(), tw.theta());
    }

    #[test]
    fn morphism_pullback_identity() {
        // identity map, alpha = 2: on 1-forms divides by 2
        let alpha = TrigPoly::from_int(1, 2);
        let phi = DifferentialForm::monomial_term(1, vec![0], cos_axis(1, 0)).unwrap();
        let m = PairMorphism::new(AffineTorusMap::identity(1), alpha).unwrap();
        assert_eq!(
            m.pullback(&phi).unwrap(),
            phi.scale(&Scalar::from_ratio(1, 2))
        );
        // intertwining identity on a sample, doubling map with alpha = e^{is}
        let double = AffineTorusMap::linear(vec![vec![2]]).unwrap();
        let alpha = TrigPoly::exp_lin(1, &[1]).unwrap();
        let morph = PairMorphism::new(double, alpha).unwrap();
        let target_tw = circle_twist();
        let source_tw = morph.induced_twist(&target_tw).unwrap();
        let lhs = morph.pullback(&target_tw.d_f_theta(&phi).unwrap()).unwrap();
        let rhs = source_tw.d_f_theta(&morph.pullback(&phi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bidegree_halves_recompose() {
        let f = cos_axis(2, 0);
        let theta = DifferentialForm::dt(2, 0).unwrap();
        let tw = TwistData::new(f, theta).unwrap();
        let phi_real = DifferentialForm::monomial_term(2, vec![1], sin_axis(2, 1)).unwrap();
        let phi = to_bidegree(&phi_real).unwrap();

        let d_f_split = tw.del_f(&phi).unwrap().add(&tw.delbar_f(&phi).unwrap()).unwrap();
        assert_eq!(from_bidegree(&d_f_split).unwrap(), tw.d_f(&phi_real).unwrap());

        let d_ft_split = tw
            .del_f_theta(&phi)
            .unwrap()
            .add(&tw.delbar_f_theta(&phi).unwrap())
            .unwrap();
        assert_eq!(
            from_bidegree(&d_ft_split).unwrap(),
            tw.d_f_theta(&phi_real).unwrap()
        );
    }

    #[test]
    fn del_f_basic_cases() {
        let tw = TwistData::untwisted(TrigPoly::one(2));
        let g = TrigPoly::exp_lin(2, &[1, 0]).unwrap();
        let phi = BidegreeForm::from_poly(1, g.clone()).unwrap();
        // with f = 1 this is plain del
        assert_eq!(tw.del_f(&phi).unwrap(), phi.del().unwrap());
        // constants are killed
        let c = BidegreeForm::from_poly(1, TrigPoly::one(2)).unwrap();
        assert!(tw.del_f(&c).unwrap().is_zero());
    }
}
