//! Lax-pair primitives for the focusing nonlinear Schroedinger equation
//!
//! ```text
//!     i u_t + u_xx + 2 |u|^2 u = 0 .
//! ```
//!
//! The equation is the compatibility condition of the linear system
//! `psi_x = U psi`, `psi_t = V psi` with
//!
//! ```text
//!     U(lambda) = -i lambda sigma3 + Q,              Q = [[0, u], [-conj(u), 0]],
//!     V(lambda) = -2i lambda^2 sigma3
//!                 + [[ i|u|^2,          2 lambda u + i u_x ],
//!                    [ -2 lambda conj(u) + i conj(u_x), -i|u|^2 ]] .
//! ```
//!
//! At the zero seed (`u = 0`) the system is solved exactly by exponentials
//! in the phase `theta(t, x, lambda) = lambda x + 2 lambda^2 t`; those vacuum
//! solutions are the raw material of every dressing chain in this crate.

use crate::complex2::{c64, C2Matrix, C2Vector, C64, I};
use crate::error::{Error, Result};

/// A point (t, x) of the space-time domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
}

impl SpacetimePoint {
    #[inline(always)]
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }
}

/// Phase of the vacuum Lax solutions: theta = lambda x + 2 lambda^2 t.
#[inline(always)]
pub fn theta(p: SpacetimePoint, lambda: C64) -> C64 {
    lambda * p.x + 2.0 * lambda * lambda * p.t
}

/// Space part of the Lax pair, U = -i lambda sigma3 + Q.
pub fn lax_u(lambda: C64, u: C64) -> C2Matrix {
    C2Matrix::new(-I * lambda, u, -u.conj(), I * lambda)
}

/// Time part of the Lax pair,
/// V = -2i lambda^2 sigma3 + [[i|u|^2, 2 lambda u + i u_x], [-2 lambda conj(u) + i conj(u_x), -i|u|^2]].
pub fn lax_v(lambda: C64, u: C64, u_x: C64) -> C2Matrix {
    let l2 = lambda * lambda;
    let usq = c64(u.norm_sqr(), 0.0);
    C2Matrix::new(
        -2.0 * I * l2 + I * usq,
        2.0 * lambda * u + I * u_x,
        -2.0 * lambda * u.conj() + I * u_x.conj(),
        2.0 * I * l2 - I * usq,
    )
}

/// Vacuum (zero-seed) solution of the Lax system at spectral parameter
/// `lambda` with constant coefficients `(u0, v0)`:
///
/// ```text
///     psi(t, x) = ( u0 exp(-i theta), v0 exp(i theta) ) .
/// ```
///
/// Fails when both constants vanish, since the zero vector carries no
/// direction for a projector.
pub fn vacuum_solution(lambda: C64, u0: C64, v0: C64, p: SpacetimePoint) -> Result<C2Vector> {
    if u0.norm_sqr() == 0.0 && v0.norm_sqr() == 0.0 {
        return Err(Error::DegenerateVacuumVector);
    }
    let th = theta(p, lambda);
    Ok(C2Vector::new(u0 * (-I * th).exp(), v0 * (I * th).exp()))
}

/// For a solution `psi` of the Lax system at `lambda`, the vector
/// `(-conj(psi_2), conj(psi_1))` solves the system at `conj(lambda)`.
/// (It is `sigma2 conj(psi)` with the constant unit phase `i` stripped off,
/// which a linear system does not see.)  It is orthogonal to `psi` in the
/// Hermitian inner product.
#[inline(always)]
pub fn orthogonal_partner(v: &C2Vector) -> C2Vector {
    C2Vector::new(-v.second.conj(), v.first.conj())
}

/// Parameters of a single soliton: spectral point lambda = xi + i eta with
/// eta > 0, initial envelope centre x1 and carrier phase phi1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParameters {
    pub xi: f64,
    pub eta: f64,
    pub x1: f64,
    pub phi1: f64,
}

impl SolitonParameters {
    pub fn new(xi: f64, eta: f64, x1: f64, phi1: f64) -> Result<Self> {
        if !(xi.is_finite() && eta.is_finite() && x1.is_finite() && phi1.is_finite()) {
            return Err(Error::InvalidParameter(
                "soliton parameters must be finite".into(),
            ));
        }
        if eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "soliton requires eta > 0, got {eta}"
            )));
        }
        Ok(Self { xi, eta, x1, phi1 })
    }

    /// The spectral parameter xi + i eta in the upper half-plane.
    #[inline(always)]
    pub fn lambda(&self) -> C64 {
        c64(self.xi, self.eta)
    }
}

/// Closed-form one-soliton solution on the full line:
///
/// ```text
///     u(t, x) = 2 eta exp(-i (2 xi x + 4 (xi^2 - eta^2) t + phi1 + pi/2))
///               * sech(2 eta (x + 4 xi t - x1)) .
/// ```
///
/// Envelope speed is -4 xi; the peak trajectory is x = x1 - 4 xi t and the
/// amplitude is 2 eta.
pub fn one_soliton(params: &SolitonParameters, p: SpacetimePoint) -> C64 {
    let SolitonParameters { xi, eta, x1, phi1 } = *params;
    let phase = 2.0 * xi * p.x + 4.0 * (xi * xi - eta * eta) * p.t
        + phi1
        + std::f64::consts::FRAC_PI_2;
    let s = 2.0 * eta * (p.x + 4.0 * xi * p.t - x1);
    // sech via exp(-|s|) so the envelope underflows gracefully instead of
    // producing inf/inf for large |s|
    let sech = 2.0 * (-s.abs()).exp() / (1.0 + (-2.0 * s.abs()).exp());
    2.0 * eta * sech * c64(0.0, -phase).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex2::ONE;
    use approx::assert_abs_diff_eq;

    const EPS: f64 = 1e-12;

    #[test]
    fn theta_at_quadratic_point() {
        // t = 1, x = 0, lambda = 1 + i: theta = 2 (1 + i)^2 = 4i
        let th = theta(SpacetimePoint::new(1.0, 0.0), c64(1.0, 1.0));
        assert_abs_diff_eq!(th.re, 0.0, epsilon = EPS);
        assert_abs_diff_eq!(th.im, 4.0, epsilon = EPS);
    }

    #[test]
    fn lax_u_entries() {
        // lambda = i, u = 1: U = [[1, 1], [-1, -1]]
        let m = lax_u(c64(0.0, 1.0), ONE);
        assert_abs_diff_eq!((m.m11 - ONE).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m12 - ONE).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m21 + ONE).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m22 + ONE).norm(), 0.0, epsilon = EPS);
    }

    #[test]
    fn lax_v_entries() {
        // lambda = 1, u = 1, u_x = 0:
        // diagonal -2i + i = -i and 2i - i = i; off-diagonal 2 and -2
        let m = lax_v(ONE, ONE, c64(0.0, 0.0));
        assert_abs_diff_eq!((m.m11 - c64(0.0, -1.0)).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m12 - c64(2.0, 0.0)).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m21 - c64(-2.0, 0.0)).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((m.m22 - c64(0.0, 1.0)).norm(), 0.0, epsilon = EPS);
    }

    #[test]
    fn vacuum_solution_at_imaginary_lambda() {
        // lambda = i, (u0, v0) = (1, 1), t = 0, x = 1: psi = (e, 1/e)
        let p = SpacetimePoint::new(0.0, 1.0);
        let psi = vacuum_solution(c64(0.0, 1.0), ONE, ONE, p).unwrap();
        assert_abs_diff_eq!(psi.first.re, 1.0_f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(psi.first.im, 0.0, epsilon = EPS);
        assert_abs_diff_eq!(psi.second.re, (-1.0_f64).exp(), epsilon = EPS);
    }

    #[test]
    fn vacuum_solution_rejects_zero_constants() {
        let p = SpacetimePoint::new(0.0, 0.0);
        let err = vacuum_solution(c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), p);
        assert_eq!(err, Err(crate::error::Error::DegenerateVacuumVector));
    }

    #[test]
    fn vacuum_solves_lax_system() {
        // finite-difference check of psi_x = U psi and psi_t = V psi at u = 0
        let lambda = c64(0.7, 1.3);
        let (u0, v0) = (c64(1.0, -0.5), c64(0.3, 0.8));
        let h = 1e-5;
        let p = SpacetimePoint::new(0.4, -0.9);
        let psi = |t: f64, x: f64| vacuum_solution(lambda, u0, v0, SpacetimePoint::new(t, x)).unwrap();

        let dx = (psi(p.t, p.x + h) - psi(p.t, p.x - h)).scale(c64(0.5 / h, 0.0));
        let want_x = lax_u(lambda, c64(0.0, 0.0)).mul_vec(&psi(p.t, p.x));
        assert_abs_diff_eq!((dx - want_x).norm(), 0.0, epsilon = 1e-7);

        let dt = (psi(p.t + h, p.x) - psi(p.t - h, p.x)).scale(c64(0.5 / h, 0.0));
        let want_t = lax_v(lambda, c64(0.0, 0.0), c64(0.0, 0.0)).mul_vec(&psi(p.t, p.x));
        assert_abs_diff_eq!((dt - want_t).norm(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn orthogonal_partner_examples() {
        // (1, i) -> (i, 1)
        let v = C2Vector::new(ONE, c64(0.0, 1.0));
        let w = orthogonal_partner(&v);
        assert_abs_diff_eq!((w.first - c64(0.0, 1.0)).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((w.second - ONE).norm(), 0.0, epsilon = EPS);
        // orthogonality and double application = -identity
        assert_abs_diff_eq!(v.inner(&w).norm(), 0.0, epsilon = EPS);
        let ww = orthogonal_partner(&w);
        assert_abs_diff_eq!((ww.first + v.first).norm(), 0.0, epsilon = EPS);
        assert_abs_diff_eq!((ww.second + v.second).norm(), 0.0, epsilon = EPS);
    }

    #[test]
    fn one_soliton_normalisation() {
        // xi = 0, eta = 1, x1 = 0, phi1 = 0 at the origin: u = 2 e^{-i pi/2} = -2i
        let params = SolitonParameters::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let u = one_soliton(&params, SpacetimePoint::new(0.0, 0.0));
        assert_abs_diff_eq!(u.re, 0.0, epsilon = EPS);
        assert_abs_diff_eq!(u.im, -2.0, epsilon = EPS);
    }

    #[test]
    fn one_soliton_peak_amplitude_and_speed() {
        let params = SolitonParameters::new(0.8, 1.2, 3.0, 0.4).unwrap();
        for &t in &[0.0, 0.7, 2.0] {
            let xc = params.x1 - 4.0 * params.xi * t;
            let peak = one_soliton(&params, SpacetimePoint::new(t, xc)).norm();
            assert_abs_diff_eq!(peak, 2.0 * params.eta, epsilon = 1e-12);
            // strictly smaller off the crest
            let off = one_soliton(&params, SpacetimePoint::new(t, xc + 0.1)).norm();
            assert!(off < peak);
        }
    }

    #[test]
    fn one_soliton_solves_nls() {
        // residual i u_t + u_xx + 2|u|^2 u at a generic point, 2nd-order stencils
        let params = SolitonParameters::new(0.5, 0.9, 1.0, -0.3).unwrap();
        let h = 1e-4;
        let (t, x) = (0.3, 0.8);
        let u = |t: f64, x: f64| one_soliton(&params, SpacetimePoint::new(t, x));
        let u0 = u(t, x);
        let ut = (u(t + h, x) - u(t - h, x)) / c64(2.0 * h, 0.0);
        let uxx = (u(t, x + h) - 2.0 * u0 + u(t, x - h)) / c64(h * h, 0.0);
        let residual = I * ut + uxx + 2.0 * c64(u0.norm_sqr(), 0.0) * u0;
        assert_abs_diff_eq!(residual.norm(), 0.0, epsilon = 1e-5);
    }

    #[test]
    fn soliton_parameters_reject_nonpositive_eta() {
        assert!(SolitonParameters::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(SolitonParameters::new(1.0, -1.0, 0.0, 0.0).is_err());
    }
}
