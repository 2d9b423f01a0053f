//! Independent numerical evaluation of the integrals.

mod contour;
mod deformed;
mod gauss;
mod kelvin;

pub use contour::{integrate_path, quad_contour_1d, Contour1D, Segment};
pub use deformed::{quad_deformed_3d, QuadResult, QuadratureSpec, Window, SINGULARITY_MARGIN};
pub use gauss::{composite_rule, integrate_adaptive, panel_rule, GaussLegendre};
pub use kelvin::{kelvin_oracle, KelvinOracleSpec};
