//! Leading-order asymptotics of three-dimensional Fourier-type integrals
//!
//! ```text
//! u(Λ) = c · ∫_Γ F(ξ) exp(iΛ G(ξ)) dξ,    F = N · ∏ g_j^{μ_j}
//! ```
//!
//! where Γ is ℝ³ shifted by a small constant imaginary vector. The crate
//! locates and classifies the special points of the integrand, decides which
//! of them contribute, sums the closed-form contributions, and provides
//! quadrature oracles to check the result. The Kelvin ship-wake integral is
//! included as a fully worked problem.

pub mod asym;
pub mod detect;
mod error;
pub mod field;
pub mod geometry;
pub mod kelvin;
mod linalg;
pub mod oracle;
pub mod problem;
pub mod problems;

pub use error::{Error, Result};
pub use field::ScalarField3;
pub use geometry::{CPoint3, CVec3, CMat3, RPoint3};
pub use problem::{
    AmplitudeSpec, DomainShift, PhaseSpec, ProblemSpec, SearchRegion, Side, SingularityComponent,
};
