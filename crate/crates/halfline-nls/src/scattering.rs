//! Reflectionless scattering data and its transformation under dressing.
//!
//! For decaying potentials the transition coefficient `a11(lambda)` of a
//! pure N-soliton solution is the Blaschke product
//!
//! ```text
//!     a11(lambda) = prod_j (lambda - lambda_j) / (lambda - conj(lambda_j)),
//! ```
//!
//! with simple zeros at the soliton poles `lambda_j` in the upper half-plane
//! and a norming weight `C_j` attached to each.  Inserting one pole
//! `lambda_0` with vacuum coefficients `(u0, v0)` transforms the data as
//!
//! ```text
//!     a11'(lambda) = (lambda - lambda_0)/(lambda - conj(lambda_0)) a11(lambda),
//!     C_j'  = (lambda_j - conj(lambda_0))/(lambda_j - lambda_0) C_j,
//!     C_0'  = -(v0/u0) (lambda_0 - conj(lambda_0)) / a11(lambda_0),
//! ```
//!
//! and the reflection coefficient picks up the inverse Blaschke factor
//! (identically zero stays zero, so this module records the factor only).
//! Iterating from the vacuum gives the closed form, for a chain with data
//! `(lambda_j, (u_j, v_j))`:
//!
//! ```text
//!     C_j = -(v_j/u_j) prod_k (lambda_j - conj(lambda_k))
//!                       / prod_{k != j} (lambda_j - lambda_k) .
//! ```
//!
//! The weight of a one-soliton solution encodes its envelope centre and
//! carrier phase: `C = 2 eta exp(2 eta x1 + i phi1)`.

use crate::boundary::BoundaryCondition;
use crate::complex2::{c64, C64, ONE};
use crate::darboux::DressingChain;
use crate::error::{Error, Result};
use crate::lax::SolitonParameters;

/// Tolerance used to decide whether an inserted pole collides with an
/// existing one.
const POLE_COLLISION_TOL: f64 = 1e-12;

/// Reflectionless scattering data: poles of the transmission problem in the
/// open upper half-plane with their norming weights.  The reflection
/// coefficient is identically zero and stays zero under pole insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    poles: Vec<C64>,
    weights: Vec<C64>,
}

impl ScatteringData {
    /// Vacuum data: no poles, a11 identically one.
    pub fn empty() -> Self {
        Self { poles: Vec::new(), weights: Vec::new() }
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// The reflection coefficient (identically zero for pure solitons).
    pub fn rho(&self, _lambda: C64) -> C64 {
        c64(0.0, 0.0)
    }

    /// Blaschke product with zeros at the poles.
    pub fn a11(&self, lambda: C64) -> C64 {
        self.poles
            .iter()
            .fold(ONE, |acc, &l| acc * (lambda - l) / (lambda - l.conj()))
    }

    /// Multiplicative factor the accumulated insertions apply to the
    /// reflection coefficient: prod_j (lambda - conj(lambda_j)) / (lambda - lambda_j).
    pub fn rho_update_factor(&self, lambda: C64) -> C64 {
        self.poles
            .iter()
            .fold(ONE, |acc, &l| acc * (lambda - l.conj()) / (lambda - l))
    }

    /// Insert one pole (one dressing step) and return the transformed data.
    pub fn add_pole(&self, lambda0: C64, u0: C64, v0: C64) -> Result<Self> {
        if lambda0.im <= 0.0 {
            return Err(Error::PoleNotUpperHalfPlane(lambda0));
        }
        if u0.norm_sqr() == 0.0 || v0.norm_sqr() == 0.0 {
            return Err(Error::InvalidWeight(
                "pole insertion requires both vacuum coefficients nonzero",
            ));
        }
        if self.poles.iter().any(|&l| (l - lambda0).norm() < POLE_COLLISION_TOL) {
            return Err(Error::PoleCollision(lambda0));
        }
        let mut poles = self.poles.clone();
        let mut weights: Vec<C64> = self
            .weights
            .iter()
            .zip(self.poles.iter())
            .map(|(&cj, &lj)| cj * (lj - lambda0.conj()) / (lj - lambda0))
            .collect();
        let c0 = -(v0 / u0) * (lambda0 - lambda0.conj()) / self.a11(lambda0);
        poles.push(lambda0);
        weights.push(c0);
        Ok(Self { poles, weights })
    }
}

/// Closed-form scattering data of a dressing chain whose parameters all lie
/// in the open upper half-plane.
pub fn pure_soliton_data(chain: &DressingChain) -> Result<ScatteringData> {
    let lambdas = chain.lambdas();
    for &l in &lambdas {
        if l.im <= 0.0 {
            return Err(Error::PoleNotUpperHalfPlane(l));
        }
    }
    let mut weights = Vec::with_capacity(lambdas.len());
    for (j, datum) in chain.data().iter().enumerate() {
        let (uj, vj) = datum.constants();
        if uj.norm_sqr() == 0.0 || vj.norm_sqr() == 0.0 {
            return Err(Error::InvalidWeight(
                "closed-form weights require both vacuum coefficients nonzero",
            ));
        }
        weights.push(-(vj / uj) * weight_pole_product(&lambdas, j));
    }
    Ok(ScatteringData { poles: lambdas, weights })
}

/// prod_k (lambda_j - conj(lambda_k)) / prod_{k != j} (lambda_j - lambda_k).
fn weight_pole_product(lambdas: &[C64], j: usize) -> C64 {
    let lj = lambdas[j];
    let mut num = ONE;
    let mut den = ONE;
    for (k, &lk) in lambdas.iter().enumerate() {
        num *= lj - lk.conj();
        if k != j {
            den *= lj - lk;
        }
    }
    num / den
}

/// Invert the closed-form weight: the constants ratio v_j/u_j that makes
/// pole j of the given pole configuration carry weight `c`.
pub(crate) fn constants_ratio_for_weight(lambdas: &[C64], j: usize, c: C64) -> C64 {
    -c / weight_pole_product(lambdas, j)
}

/// Norming weight in position-phase form: C = 2 eta exp(2 eta x1 + i phi1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightForm {
    pub c: C64,
    pub eta: f64,
    pub x1: f64,
    pub phi1: f64,
}

impl WeightForm {
    /// Decompose a weight at a pole of imaginary part `eta`.
    pub fn from_weight(c: C64, eta: f64) -> Result<Self> {
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::InvalidWeight("weight form requires eta > 0"));
        }
        if c.norm_sqr() == 0.0 {
            return Err(Error::InvalidWeight("zero weight has no position form"));
        }
        let x1 = (c.norm() / (2.0 * eta)).ln() / (2.0 * eta);
        let phi1 = c.arg();
        Ok(Self { c, eta, x1, phi1 })
    }

    /// Assemble the weight from position and phase.
    pub fn from_position_phase(eta: f64, x1: f64, phi1: f64) -> Result<Self> {
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::InvalidWeight("weight form requires eta > 0"));
        }
        let c = c64(2.0 * eta * (2.0 * eta * x1).exp(), 0.0) * c64(0.0, phi1).exp();
        Ok(Self { c, eta, x1, phi1 })
    }
}

/// Envelope centre and carrier phase encoded by a weight; phase in (-pi, pi].
pub fn weight_to_soliton(c: C64, eta: f64) -> Result<(f64, f64)> {
    let w = WeightForm::from_weight(c, eta)?;
    Ok((w.x1, w.phi1))
}

/// Weight of a soliton with the given parameters.
pub fn soliton_to_weight(params: &SolitonParameters) -> C64 {
    WeightForm::from_position_phase(params.eta, params.x1, params.phi1)
        .expect("validated parameters")
        .c
}

/// Mirror-image relation for one physical soliton of a boundary chain:
/// the sum of the physical and mirror envelope centres, the difference of
/// their carrier phases (wrapped to (-pi, pi]), and the product
/// C_j conj(C_j_mirror) they derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorRelation {
    pub x_sum: f64,
    pub phi_diff: f64,
    pub weight_product: C64,
}

/// Predicted mirror relations for each requested soliton, from the closed
/// form of the weight product
///
/// ```text
///     C_j conj(C_j_mirror) = -4 lambda_j^2 F(lambda_j) (eta_j/xi_j)^2
///         * [ prod_{k != j} z_k ]^2 ,
///     z_k = (lambda_j - conj(lambda_k)) (lambda_j + lambda_k)
///           / ((lambda_j - lambda_k) (lambda_j + conj(lambda_k))) ,
/// ```
///
/// where `F` is the boundary pairing factor.  Envelope-centre sums and
/// carrier-phase differences follow from modulus and argument:
/// `x_j + x_j_mirror = log(|product| / (4 eta_j^2)) / (2 eta_j)` and
/// `phi_j - phi_j_mirror = arg(product)`.
pub fn mirror_relations(
    bc: &BoundaryCondition,
    solitons: &[SolitonParameters],
) -> Result<Vec<MirrorRelation>> {
    bc.validate()?;
    let mut out = Vec::with_capacity(solitons.len());
    for (j, sj) in solitons.iter().enumerate() {
        let lj = sj.lambda();
        bc.check_admissible(lj)?;
        let f = bc.pairing_factor(lj)?;
        let mut bracket = ONE;
        for (k, sk) in solitons.iter().enumerate() {
            if k == j {
                continue;
            }
            let lk = sk.lambda();
            bracket = bracket * (lj - lk.conj()) * (lj + lk) / ((lj - lk) * (lj + lk.conj()));
        }
        let ratio = c64(sj.eta / sj.xi, 0.0);
        let product = -4.0 * lj * lj * f * ratio * ratio * bracket * bracket;
        out.push(relation_from_product(product, sj.eta));
    }
    Ok(out)
}

fn relation_from_product(product: C64, eta: f64) -> MirrorRelation {
    MirrorRelation {
        x_sum: (product.norm() / (4.0 * eta * eta)).ln() / (2.0 * eta),
        phi_diff: product.arg(),
        weight_product: product,
    }
}

/// Mirror relations read off an actually-constructed boundary chain: build
/// the 2N-fold chain, extract the closed-form weights, and convert the
/// physical/mirror weight pairs to sums and differences.
pub fn extracted_mirror_relations(
    bc: &BoundaryCondition,
    solitons: &[SolitonParameters],
) -> Result<Vec<MirrorRelation>> {
    let chain = crate::boundary::build_boundary_chain(bc, solitons)?;
    let data = pure_soliton_data(&chain)?;
    let mut out = Vec::with_capacity(solitons.len());
    for (j, sj) in solitons.iter().enumerate() {
        // physical datum at index 2j, its mirror at 2j + 1
        let cj = data.weights()[2 * j];
        let cm = data.weights()[2 * j + 1];
        let product = cj * cm.conj();
        out.push(relation_from_product(product, sj.eta));
    }
    Ok(out)
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::SpectralDatum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn blaschke_unimodular_on_real_axis() {
        let data = ScatteringData::empty()
            .add_pole(c64(1.0, 1.0), ONE, ONE)
            .unwrap()
            .add_pole(c64(-0.4, 0.7), ONE, c64(2.0, -1.0))
            .unwrap();
        for &x in &[-3.0, -0.2, 0.0, 1.7, 12.0] {
            assert_abs_diff_eq!(data.a11(c64(x, 0.0)).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn add_pole_rejects_bad_input() {
        let data = ScatteringData::empty().add_pole(c64(1.0, 1.0), ONE, ONE).unwrap();
        assert!(matches!(
            data.add_pole(c64(1.0, -1.0), ONE, ONE),
            Err(Error::PoleNotUpperHalfPlane(_))
        ));
        assert!(matches!(
            data.add_pole(c64(1.0, 1.0), ONE, ONE),
            Err(Error::PoleCollision(_))
        ));
        assert!(data.add_pole(c64(0.0, 2.0), c64(0.0, 0.0), ONE).is_err());
    }

    #[test]
    fn single_pole_weight() {
        // C = -(v/u)(lambda - conj(lambda)) = -(v/u) 2i eta
        let data = ScatteringData::empty().add_pole(c64(0.0, 1.0), ONE, ONE).unwrap();
        let c = data.weights()[0];
        assert_abs_diff_eq!((c - c64(0.0, -2.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn iterated_insertion_matches_closed_form() {
        let entries = [
            (c64(1.0, 1.0), ONE, c64(0.3, -0.4)),
            (c64(-0.5, 0.8), c64(1.0, 2.0), ONE),
            (c64(0.2, 1.1), ONE, c64(-1.0, 0.1)),
            (c64(2.0, 0.3), c64(0.5, 0.5), c64(1.0, -2.0)),
        ];
        let mut iterated = ScatteringData::empty();
        let mut data = Vec::new();
        for &(l, u0, v0) in &entries {
            iterated = iterated.add_pole(l, u0, v0).unwrap();
            data.push(SpectralDatum::new(l, u0, v0).unwrap());
        }
        let chain = DressingChain::new(data).unwrap();
        let closed = pure_soliton_data(&chain).unwrap();
        for (a, b) in iterated.weights().iter().zip(closed.weights()) {
            assert_abs_diff_eq!((a - b).norm() / b.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_round_trip() {
        let (eta, x1, phi1) = (0.8, -2.3, 2.9);
        let w = WeightForm::from_position_phase(eta, x1, phi1).unwrap();
        let back = WeightForm::from_weight(w.c, eta).unwrap();
        assert_abs_diff_eq!(back.x1, x1, epsilon = 1e-14);
        assert_abs_diff_eq!(back.phi1, phi1, epsilon = 1e-14);
    }

    #[test]
    fn weight_form_rejects_degenerate_input() {
        assert!(WeightForm::from_weight(c64(0.0, 0.0), 1.0).is_err());
        assert!(WeightForm::from_weight(ONE, 0.0).is_err());
        assert!(WeightForm::from_position_phase(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn robin_one_soliton_weight_product() {
        // Robin alpha = 1, lambda = 1 + i:
        // C C_mirror^* = -4 lambda^2 (i - 2 lambda)/(i + 2 lambda) = (32 + 56 i)/13
        let bc = BoundaryCondition::Robin { alpha: 1.0 };
        let solitons = [SolitonParameters::new(1.0, 1.0, 0.0, 0.0).unwrap()];
        let rel = mirror_relations(&bc, &solitons).unwrap();
        let want = c64(32.0, 56.0) / 13.0;
        assert_abs_diff_eq!((rel[0].weight_product - want).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn angle_wrap() {
        assert_abs_diff_eq!(wrap_angle(3.0 * std::f64::consts::PI), std::f64::consts::PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-0.1), -0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(7.0), 7.0 - 2.0 * std::f64::consts::PI, epsilon = 1e-12);
    }
}
