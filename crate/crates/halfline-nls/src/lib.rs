//! Exact multi-soliton solutions of the focusing nonlinear Schroedinger
//! equation on the half-line x >= 0, satisfying an integrable boundary
//! condition at x = 0: Dirichlet, Robin, or a two-parameter condition
//! coupling the field to the time derivative through
//! Omega = sqrt(beta^2 - |u|^2).
//!
//! Solutions are built by dressing the zero seed with an even number of
//! Darboux transformations: every physical soliton (pole `lambda_j` in the
//! upper half-plane, off the imaginary axis) is accompanied by a mirror
//! soliton at `-conj(lambda_j)` whose norming constants are locked to the
//! physical ones by the boundary matrix.  The paired chain satisfies the
//! boundary condition identically in time; the mirror soliton is the
//! reflected partner that enters the physical region after the collision
//! with the boundary.
//!
//! Modules:
//!
//! * [`complex2`] - 2x2 complex linear algebra,
//! * [`lax`] - Lax pair, vacuum solutions, the closed one-soliton formula,
//! * [`darboux`] - dressing chains and their evaluation,
//! * [`boundary`] - boundary matrices, mirror pairing, residuals,
//! * [`scattering`] - reflectionless scattering data and mirror relations,
//! * [`verify`] - independent numerical checks and the JSON report,
//! * [`grid`], [`presets`], [`tol`] - sweeps, demo configurations, pinned
//!   tolerances.
//!
//! ```
//! use halfline_nls::boundary::{build_boundary_chain, BoundaryCondition};
//! use halfline_nls::darboux::dressed_u;
//! use halfline_nls::lax::{SolitonParameters, SpacetimePoint};
//!
//! let bc = BoundaryCondition::New { alpha: 1.0, beta: 2.0 };
//! let soliton = SolitonParameters::new(1.0, 1.0, 5.0, 0.0).unwrap();
//! let chain = build_boundary_chain(&bc, &[soliton]).unwrap();
//! let u = dressed_u(&chain, SpacetimePoint::new(0.0, 5.0)).unwrap();
//! assert!((u.norm() - 2.0).abs() < 1e-6); // peak of a unit-eta soliton
//! ```

pub mod boundary;
pub mod complex2;
pub mod darboux;
pub mod error;
pub mod grid;
pub mod lax;
pub mod presets;
pub mod scattering;
pub mod tol;
pub mod verify;

pub use boundary::BoundaryCondition;
pub use complex2::{C2Matrix, C2Vector, C64};
pub use darboux::{DressingChain, SpectralDatum};
pub use error::{Error, Result};
pub use grid::Grid;
pub use lax::{SolitonParameters, SpacetimePoint};
pub use verify::ResidualReport;
