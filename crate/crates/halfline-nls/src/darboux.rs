//! Iterated Darboux dressing of the zero seed.
//!
//! An N-fold dressing chain is specified by N spectral data
//! `(lambda_j, (u_j, v_j))` with pairwise distinct, non-real `lambda_j`.
//! At a space-time point the chain is evaluated recursively: the j-th
//! one-fold factor is
//!
//! ```text
//!     D_j(lambda) = (lambda - conj(lambda_j)) I
//!                   + (conj(lambda_j) - lambda_j) P_j ,
//! ```
//!
//! where `P_j` is the Hermitian rank-one projector onto the j-th vacuum
//! solution pushed through the first j-1 factors,
//!
//! ```text
//!     phi_j = D_{j-1}(lambda_j) ... D_1(lambda_j) psi_j ,   P_j = phi_j phi_j^dagger / |phi_j|^2 .
//! ```
//!
//! The dressed potential is read off the first-order coefficient of the full
//! product `D(lambda) = D_N ... D_1`:
//!
//! ```text
//!     u = 2 i (Sigma_1)_{12} ,   Sigma_1 = sum_j ( -conj(lambda_j) I + (conj(lambda_j) - lambda_j) P_j ) .
//! ```
//!
//! Every projector is scale-invariant in its input vector, which the
//! implementation exploits to renormalise intermediate vectors and keep the
//! recursion finite for |x|, |t| far outside the soliton support.

use crate::complex2::{c64, C2Matrix, C2Vector, C64, I, ONE};
use crate::error::{Error, Result};
use crate::lax::{orthogonal_partner, theta, vacuum_solution, SpacetimePoint};

/// Norm floor below which a transformed kernel vector is considered
/// numerically dead and projector construction fails.
pub const PROJECTOR_FLOOR: f64 = 1e-300;

/// Default step for the finite-difference derivatives of the dressed field.
pub const DERIVATIVE_STEP: f64 = 1e-3;

/// One entry of a dressing chain: a non-real spectral parameter together
/// with the constant coefficients of the vacuum Lax solution attached to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDatum {
    lambda: C64,
    u0: C64,
    v0: C64,
}

impl SpectralDatum {
    pub fn new(lambda: C64, u0: C64, v0: C64) -> Result<Self> {
        if !lambda.is_finite() || !u0.is_finite() || !v0.is_finite() {
            return Err(Error::InvalidParameter(
                "spectral datum must be finite".into(),
            ));
        }
        if lambda.im == 0.0 {
            return Err(Error::RealSpectralParameter(lambda));
        }
        if u0.norm_sqr() == 0.0 && v0.norm_sqr() == 0.0 {
            return Err(Error::DegenerateVacuumVector);
        }
        Ok(Self { lambda, u0, v0 })
    }

    #[inline(always)]
    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    #[inline(always)]
    pub fn constants(&self) -> (C64, C64) {
        (self.u0, self.v0)
    }

    /// Vacuum Lax solution carried by this datum, exact (unscaled) value.
    pub fn vacuum_at(&self, p: SpacetimePoint) -> C2Vector {
        // constants validated non-degenerate at construction
        vacuum_solution(self.lambda, self.u0, self.v0, p).expect("validated datum")
    }

    /// Vacuum solution rescaled by exp(-|Im theta|), an overflow-free
    /// representative of the same ray.  Projectors built from it equal
    /// those built from the exact vector.
    pub(crate) fn vacuum_direction(&self, p: SpacetimePoint) -> C2Vector {
        let th = theta(p, self.lambda);
        let w = th.im; // |first| = |u0| e^w, |second| = |v0| e^{-w}
        let phase = c64(0.0, -th.re).exp();
        C2Vector::new(
            self.u0 * (w - w.abs()).exp() * phase,
            self.v0 * (-w - w.abs()).exp() * phase.conj(),
        )
    }
}

/// Seed solution being dressed.  Only the zero seed is implemented; the
/// enum records the choice explicitly so chain constructors stay honest
/// about what the recursion starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Seed {
    #[default]
    Zero,
}

/// An ordered list of spectral data with pairwise distinct parameters,
/// dressing the zero seed.
#[derive(Debug, Clone, PartialEq)]
pub struct DressingChain {
    data: Vec<SpectralDatum>,
    seed: Seed,
}

impl DressingChain {
    pub fn new(data: Vec<SpectralDatum>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter(
                "dressing chain must contain at least one datum".into(),
            ));
        }
        for (i, a) in data.iter().enumerate() {
            for b in &data[i + 1..] {
                if a.lambda == b.lambda {
                    return Err(Error::DuplicateSpectralParameter(a.lambda));
                }
            }
        }
        Ok(Self { data, seed: Seed::Zero })
    }

    pub fn single(datum: SpectralDatum) -> Self {
        Self { data: vec![datum], seed: Seed::Zero }
    }

    pub fn data(&self) -> &[SpectralDatum] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    /// Spectral parameters of the chain in order.
    pub fn lambdas(&self) -> Vec<C64> {
        self.data.iter().map(|d| d.lambda).collect()
    }
}

/// Everything the recursion produces at a single space-time point.
#[derive(Debug, Clone)]
pub struct DressingEvaluation {
    /// Rank-one Hermitian projectors, one per chain stage.
    pub projectors: Vec<C2Matrix>,
    /// First-order coefficient matrix Sigma_1 of the dressing product.
    pub sigma1: C2Matrix,
    /// Dressed potential u at the evaluation point.
    pub dressed_u: C64,
}

/// Run the dressing recursion at one point.
pub fn evaluate_chain(chain: &DressingChain, p: SpacetimePoint) -> Result<DressingEvaluation> {
    let n = chain.len();
    let mut projectors: Vec<C2Matrix> = Vec::with_capacity(n);
    let mut sigma1 = C2Matrix::zero();

    for (j, datum) in chain.data().iter().enumerate() {
        let lambda_j = datum.lambda();
        let mut v = datum.vacuum_direction(p);
        // push through the first j factors, renormalising as we go
        for (k, pk) in projectors.iter().enumerate() {
            let chain_datum: &SpectralDatum = &chain.data()[k];
            let lk = chain_datum.lambda();
            let pv = pk.mul_vec(&v);
            v = v.scale(lambda_j - lk.conj()) + pv.scale(lk.conj() - lk);
            let norm = v.norm();
            if norm < PROJECTOR_FLOOR {
                return Err(Error::ProjectorBreakdown { stage: j, norm });
            }
            v = v.scale(c64(1.0 / norm, 0.0));
        }
        let nsq = v.norm_sqr();
        if nsq < PROJECTOR_FLOOR {
            return Err(Error::ProjectorBreakdown { stage: j, norm: nsq.sqrt() });
        }
        let proj = C2Matrix::outer(&v, &v).scale(c64(1.0 / nsq, 0.0));
        sigma1 = sigma1 + C2Matrix::diag(-lambda_j.conj(), -lambda_j.conj())
            + proj.scale(lambda_j.conj() - lambda_j);
        projectors.push(proj);
    }

    let dressed_u = 2.0 * I * sigma1.m12;
    Ok(DressingEvaluation { projectors, sigma1, dressed_u })
}

/// Dressed potential at one point (zero seed plus the chain contribution).
pub fn dressed_u(chain: &DressingChain, p: SpacetimePoint) -> Result<C64> {
    Ok(evaluate_chain(chain, p)?.dressed_u)
}

/// Full dressing matrix D(lambda) = D_N ... D_1 at one point.
pub fn dressing_matrix(chain: &DressingChain, p: SpacetimePoint, lambda: C64) -> Result<C2Matrix> {
    let eval = evaluate_chain(chain, p)?;
    let mut d = C2Matrix::identity();
    for (datum, proj) in chain.data().iter().zip(eval.projectors.iter()) {
        let lj = datum.lambda();
        let factor = C2Matrix::diag(lambda - lj.conj(), lambda - lj.conj())
            + proj.scale(lj.conj() - lj);
        d = factor * d;
    }
    Ok(d)
}

/// x-derivative of the dressed potential by a 4th-order central stencil.
pub fn dressed_u_x(chain: &DressingChain, p: SpacetimePoint) -> Result<C64> {
    dressed_u_x_with_step(chain, p, DERIVATIVE_STEP)
}

pub fn dressed_u_x_with_step(chain: &DressingChain, p: SpacetimePoint, h: f64) -> Result<C64> {
    check_step(h)?;
    let f = |x: f64| dressed_u(chain, SpacetimePoint::new(p.t, x));
    Ok(stencil_first(f(p.x - 2.0 * h)?, f(p.x - h)?, f(p.x + h)?, f(p.x + 2.0 * h)?, h))
}

/// t-derivative of the dressed potential by a 4th-order central stencil.
pub fn dressed_u_t(chain: &DressingChain, p: SpacetimePoint) -> Result<C64> {
    dressed_u_t_with_step(chain, p, DERIVATIVE_STEP)
}

pub fn dressed_u_t_with_step(chain: &DressingChain, p: SpacetimePoint, h: f64) -> Result<C64> {
    check_step(h)?;
    let f = |t: f64| dressed_u(chain, SpacetimePoint::new(t, p.x));
    Ok(stencil_first(f(p.t - 2.0 * h)?, f(p.t - h)?, f(p.t + h)?, f(p.t + 2.0 * h)?, h))
}

/// Second x-derivative by a 4th-order central stencil.
pub fn dressed_u_xx_with_step(chain: &DressingChain, p: SpacetimePoint, h: f64) -> Result<C64> {
    check_step(h)?;
    let f = |x: f64| dressed_u(chain, SpacetimePoint::new(p.t, x));
    let (m2, m1, c, p1, p2) = (
        f(p.x - 2.0 * h)?,
        f(p.x - h)?,
        f(p.x)?,
        f(p.x + h)?,
        f(p.x + 2.0 * h)?,
    );
    Ok((-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / c64(12.0 * h * h, 0.0))
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0 && h <= 1e-2) {
        return Err(Error::EvaluationGuard(format!(
            "finite-difference step must satisfy 0 < h <= 1e-2, got {h}"
        )));
    }
    Ok(())
}

#[inline]
fn stencil_first(m2: C64, m1: C64, p1: C64, p2: C64, h: f64) -> C64 {
    (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / c64(12.0 * h, 0.0)
}

/// Exact kernel pairs of the chain's dressing matrix: D annihilates each
/// vacuum solution at its own lambda_j, and each orthogonal partner at
/// conj(lambda_j).  Returned as (lambda, vector) pairs, partner vectors
/// rescaled like the originals.
pub(crate) fn kernel_pairs(chain: &DressingChain, p: SpacetimePoint) -> Vec<(C64, C2Vector)> {
    let mut pairs = Vec::with_capacity(2 * chain.len());
    for datum in chain.data() {
        let v = datum.vacuum_direction(p);
        pairs.push((datum.lambda(), v));
        pairs.push((datum.lambda().conj(), orthogonal_partner(&v)));
    }
    pairs
}

/// Determinant the dressing matrix must have:
/// prod_j (lambda - lambda_j)(lambda - conj(lambda_j)).
pub fn expected_determinant(chain: &DressingChain, lambda: C64) -> C64 {
    chain
        .data()
        .iter()
        .fold(ONE, |acc, d| acc * (lambda - d.lambda()) * (lambda - d.lambda().conj()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::{one_soliton, SolitonParameters};
    use approx::assert_abs_diff_eq;

    fn single_chain(lambda: C64, u0: C64, v0: C64) -> DressingChain {
        DressingChain::single(SpectralDatum::new(lambda, u0, v0).unwrap())
    }

    #[test]
    fn chain_rejects_duplicates_and_real_lambda() {
        let d1 = SpectralDatum::new(c64(1.0, 1.0), ONE, ONE).unwrap();
        let d2 = SpectralDatum::new(c64(1.0, 1.0), ONE, -ONE).unwrap();
        assert!(matches!(
            DressingChain::new(vec![d1, d2]),
            Err(Error::DuplicateSpectralParameter(_))
        ));
        assert!(matches!(
            SpectralDatum::new(c64(1.0, 0.0), ONE, ONE),
            Err(Error::RealSpectralParameter(_))
        ));
        assert!(DressingChain::new(vec![]).is_err());
    }

    #[test]
    fn one_fold_matches_closed_form() {
        // lambda1 = i, constants (1, 1): the stationary soliton
        // u = 2 exp(4it) sech(2x), i.e. xi = 0, eta = 1, x1 = 0, phi1 = -pi/2
        let chain = single_chain(c64(0.0, 1.0), ONE, ONE);
        let params = SolitonParameters::new(0.0, 1.0, 0.0, -std::f64::consts::FRAC_PI_2).unwrap();
        for &(t, x) in &[(0.0, 0.0), (0.3, 0.7), (-1.0, 2.0), (2.0, -35.0)] {
            let p = SpacetimePoint::new(t, x);
            let got = dressed_u(&chain, p).unwrap();
            let want = one_soliton(&params, p);
            assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn projectors_are_hermitian_idempotent_rank_one() {
        let chain = DressingChain::new(vec![
            SpectralDatum::new(c64(1.0, 1.0), ONE, c64(0.3, -0.4)).unwrap(),
            SpectralDatum::new(c64(-0.5, 0.8), c64(1.0, 2.0), ONE).unwrap(),
            SpectralDatum::new(c64(0.2, -1.1), ONE, c64(-1.0, 0.1)).unwrap(),
        ])
        .unwrap();
        let eval = evaluate_chain(&chain, SpacetimePoint::new(0.4, -0.7)).unwrap();
        for p in &eval.projectors {
            assert_abs_diff_eq!((*p - p.adjoint()).max_norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((*p * *p - *p).max_norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.trace().re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.trace().im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn scaling_invariance_of_constants() {
        let p = SpacetimePoint::new(0.2, 1.3);
        let base = single_chain(c64(0.6, 0.9), ONE, c64(0.2, 0.5));
        let scaled = single_chain(c64(0.6, 0.9), c64(-1.4, 2.2) * ONE, c64(-1.4, 2.2) * c64(0.2, 0.5));
        let a = dressed_u(&base, p).unwrap();
        let b = dressed_u(&scaled, p).unwrap();
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_property_of_dressing_matrix() {
        let chain = DressingChain::new(vec![
            SpectralDatum::new(c64(1.0, 1.0), ONE, c64(0.3, -0.4)).unwrap(),
            SpectralDatum::new(c64(-0.5, 0.8), c64(1.0, 2.0), ONE).unwrap(),
        ])
        .unwrap();
        let p = SpacetimePoint::new(-0.3, 0.9);
        for (lambda, v) in kernel_pairs(&chain, p) {
            let d = dressing_matrix(&chain, p, lambda).unwrap();
            let dv = d.mul_vec(&v);
            assert_abs_diff_eq!(dv.norm() / v.norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn determinant_identity() {
        let chain = DressingChain::new(vec![
            SpectralDatum::new(c64(1.0, 1.0), ONE, c64(0.3, -0.4)).unwrap(),
            SpectralDatum::new(c64(-0.5, 0.8), c64(1.0, 2.0), ONE).unwrap(),
            SpectralDatum::new(c64(0.2, -1.1), ONE, c64(-1.0, 0.1)).unwrap(),
        ])
        .unwrap();
        let p = SpacetimePoint::new(0.15, -0.45);
        for &lambda in &[c64(2.0, 0.3), c64(-1.0, 1.5), c64(0.1, -0.2)] {
            let d = dressing_matrix(&chain, p, lambda).unwrap();
            let want = expected_determinant(&chain, lambda);
            assert_abs_diff_eq!((d.det() - want).norm() / want.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn one_fold_asymptotic_limits() {
        // x -> -inf: D -> diag(lambda - conj(l1), lambda - l1)
        // x -> +inf: D -> diag(lambda - l1, lambda - conj(l1))
        let l1 = c64(0.0, 1.0);
        let chain = single_chain(l1, ONE, ONE);
        let lambda = c64(1.7, -0.6);
        let far = 40.0;

        let d_minus = dressing_matrix(&chain, SpacetimePoint::new(0.0, -far), lambda).unwrap();
        let want_minus = C2Matrix::diag(lambda - l1.conj(), lambda - l1);
        assert_abs_diff_eq!((d_minus - want_minus).max_norm(), 0.0, epsilon = 1e-10);

        let d_plus = dressing_matrix(&chain, SpacetimePoint::new(0.0, far), lambda).unwrap();
        let want_plus = C2Matrix::diag(lambda - l1, lambda - l1.conj());
        assert_abs_diff_eq!((d_plus - want_plus).max_norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn permutation_invariance_of_dressed_field() {
        let d1 = SpectralDatum::new(c64(1.0, 1.0), ONE, c64(0.3, -0.4)).unwrap();
        let d2 = SpectralDatum::new(c64(-0.5, 0.8), c64(1.0, 2.0), ONE).unwrap();
        let d3 = SpectralDatum::new(c64(0.2, -1.1), ONE, c64(-1.0, 0.1)).unwrap();
        let p = SpacetimePoint::new(0.6, -1.1);
        let orders: [[&SpectralDatum; 3]; 3] = [[&d1, &d2, &d3], [&d3, &d1, &d2], [&d2, &d3, &d1]];
        let mut values = Vec::new();
        for ord in orders {
            let chain = DressingChain::new(ord.into_iter().copied().collect()).unwrap();
            values.push(dressed_u(&chain, p).unwrap());
        }
        assert_abs_diff_eq!((values[0] - values[1]).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((values[0] - values[2]).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn derivative_matches_closed_form() {
        // compare dressed_u_x against the analytic derivative of the
        // one-soliton formula
        let chain = single_chain(c64(0.0, 1.0), ONE, ONE);
        let params = SolitonParameters::new(0.0, 1.0, 0.0, -std::f64::consts::FRAC_PI_2).unwrap();
        let p = SpacetimePoint::new(0.1, 0.4);
        let got = dressed_u_x(&chain, p).unwrap();
        // u_x = u (-2 i xi - 2 eta tanh(2 eta (x + 4 xi t - x1)))
        let s = 2.0 * params.eta * (p.x + 4.0 * params.xi * p.t - params.x1);
        let want = one_soliton(&params, p)
            * (c64(0.0, -2.0 * params.xi) + c64(-2.0 * params.eta * s.tanh(), 0.0));
        assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_step_guard() {
        let chain = single_chain(c64(0.0, 1.0), ONE, ONE);
        let p = SpacetimePoint::new(0.0, 0.0);
        assert!(dressed_u_x_with_step(&chain, p, 0.5).is_err());
        assert!(dressed_u_x_with_step(&chain, p, -1e-3).is_err());
    }
}
