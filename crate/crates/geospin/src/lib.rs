//! geospin: differential geometry on chart-defined Riemannian metrics.
//!
//! From a metric given as a grid of coordinate expressions, this crate
//! computes Christoffel symbols with exact symbolic derivatives, contracts
//! them with velocities into geospin matrices W, integrates the geodesic
//! system dx/dt = v, dv/dt = −Wv, builds the geometric Hamiltonian matrix
//! Ĥ = −iħW with its complex spectrum, and evolves Ricci flow on
//! constant-curvature families to verify the identity chain
//! tr W = A·v = d/dt ln √det g and w⁽ʳ⁾ = −R (hence H = iħR) numerically.
//!
//! Start with the runnable programs in `examples/`, one per capability, or
//! the `geospin` binary (`geospin --help`). The `verify` subcommand runs the
//! whole identity suite over the built-in manifold zoo.

// `!(x > 0.0)` guards reject NaN along with nonpositive values; the
// partial_cmp rewrite clippy suggests would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod connection;
pub mod curvature;
pub mod dynamics;
mod error;
pub mod expr;
pub mod geospin;
pub mod manifold;
pub mod spectrum;
mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use tensor::{Tensor3, Tensor4};

pub use connection::{
    christoffel_at, connection_one_form_coeffs, log_volume_gradient, ChristoffelAtPoint,
};
pub use curvature::{
    corollary_check, curvature_at, ricci_flow_integrate, w_r_from_metric_rate, CurvatureBundle,
    FlowMode, RicciFlowTrajectory,
};
pub use dynamics::{
    evolve_mode, evolve_mode_schroedinger, geodesic_rhs, integrate_geodesic,
    logdet_rate_residual, speed, GeodesicState, GeodesicTrajectory, ModeState,
};
pub use expr::{parse_expr, Expr};
pub use geospin::{
    covariant_derivative, covariant_derivative_lowered, geospin_lowered, geospin_matrix,
    GeospinMatrix, LoweredGeospin,
};
pub use manifold::{
    inner_product, lower_index, raise_index, ChartPoint, IndexPosition, MetricAtPoint,
    MetricField, TangentVector,
};
pub use spectrum::{
    eig_real_nonsymmetric, hamiltonian_matrix, spectrum_map, ComplexSpectrum, EigenConfig,
    HamiltonianMatrix,
};
