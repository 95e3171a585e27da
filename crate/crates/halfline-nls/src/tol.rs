//! Pinned tolerances for every numerical check in the crate.
//!
//! Each constant documents which class of computation it bounds.  Exact
//! algebraic identities evaluated in double precision sit near 1e-12;
//! anything passing through a 4th-order finite-difference stencil with
//! step 1e-3 sits near 1e-6; chain-versus-closed-form comparisons sit in
//! between depending on conditioning.

/// Exact 2x2 algebra: matrix inverses, defect factorisation, projector
/// idempotency, scaling invariance.
pub const ALGEBRAIC_IDENTITY: f64 = 1e-12;

/// Kernel annihilation D(lambda_j) psi_j = 0, relative to |psi_j|.
pub const KERNEL_PROPERTY: f64 = 1e-10;

/// Determinant of the dressing matrix vs its Blaschke-product closed form.
pub const DETERMINANT_IDENTITY: f64 = 1e-9;

/// One-fold chain vs the closed one-soliton formula, relative pointwise.
pub const CLOSED_FORM_EQUIVALENCE: f64 = 1e-10;

/// Max |i u_t + u_xx + 2|u|^2 u| over a preset grid with step 1e-3.
pub const PDE_RESIDUAL: f64 = 1e-5;

/// Same for a single one-fold chain on a generic grid.
pub const PDE_RESIDUAL_ONE_FOLD: f64 = 1e-6;

/// |u(t, 0)| for Dirichlet boundary chains.
pub const DIRICHLET_RESIDUAL: f64 = 1e-8;

/// Boundary-condition residual at x = 0 for Robin and the new condition
/// (finite-difference derivatives with step 1e-3).
pub const BOUNDARY_RESIDUAL: f64 = 1e-6;

/// Detuning the mirror pairing by 1% must push the boundary residual
/// above this floor.
pub const BROKEN_PAIRING_FLOOR: f64 = 1e-2;

/// Structure of the dressed boundary matrix for the new condition.
pub const BOUNDARY_MATRIX_STRUCTURE: f64 = 1e-8;

/// Structure of the dressed boundary matrix for the Robin condition.
pub const BOUNDARY_MATRIX_STRUCTURE_ROBIN: f64 = 1e-10;

/// Weight products C_j conj(C_mirror_j) vs their closed form, relative.
pub const WEIGHT_PRODUCT: f64 = 1e-10;

/// Mirror relations (envelope-centre sums, carrier-phase differences)
/// predicted vs chain-extracted.
pub const MIRROR_RELATION: f64 = 1e-9;

/// Soliton peak heights recovered by refinement over a dressed chain.
pub const PEAK_HEIGHT: f64 = 1e-6;

/// Peak velocities recovered by tracking between two time slices.
pub const PEAK_VELOCITY: f64 = 1e-4;

/// Dressed field vs the determinant-quotient evaluation, relative where
/// |u| > QUOTIENT_SUPPORT_FLOOR.
pub const QUOTIENT_ORACLE: f64 = 1e-8;
pub const QUOTIENT_SUPPORT_FLOOR: f64 = 1e-12;

/// Pairing identity psi_hat(t,0) = B0(lambda) psi(t,0), relative.
pub const PAIRING_CONSISTENCY: f64 = 1e-10;

/// Slack admitted in beta^2 - |u(t,0)|^2 >= 0.
pub const OMEGA_SLACK: f64 = 1e-9;

/// |u(t, 0)| at the last decay sample (t = 80).
pub const DECAY_CEILING: f64 = 1e-3;

/// Below this, decay samples count as zero and strict decrease is waived.
pub const DECAY_NOISE_FLOOR: f64 = 1e-8;

/// Asymptotic diagonal limits of the one-fold dressing matrix at |x| = 40.
pub const DRESSING_LIMITS: f64 = 1e-10;

/// Acceptable range for the error ratio when the finite-difference step is
/// halved (nominal 16 for 4th-order stencils).
pub const ORDER_RATIO_LOW: f64 = 12.0;
pub const ORDER_RATIO_HIGH: f64 = 20.0;

/// Exact round trips (weight form, config serialisation).
pub const ROUND_TRIP: f64 = 1e-14;

/// |a11| = 1 on the real axis.
pub const BLASCHKE_UNITARITY: f64 = 1e-12;
