//! A desk-scale numerical laboratory for higher index theory of proper
//! actions: geodesic-simplex group cocycles, the van Est map, cyclic cocycles
//! on convolution and kernel algebras, Chern pairings, index projectors and
//! characteristic-form integrals.

pub mod conv;
pub mod cyclic;
pub mod error;
pub mod fredholm;
pub mod geom;
pub mod groupcoh;
pub mod index;
pub mod kernels;
pub mod proper;
pub mod simplex;

pub use error::{Error, Result};
pub use geom::{GroupElement, InvariantForm, Point, Sl2, SymmetricSpaceModel, TangentVector};
pub use simplex::{integrate_form, simplex_point, simplex_volume, GeodesicSimplex, QuadratureRule};
pub use proper::{cutoff_family, invariant_integral, make_cutoff, slice_cutoff, Bump, Cutoff, ProperActionData, Slice};
pub use groupcoh::{cyclic_symmetrize, delta, growth_profile, j_map, vanest_form, GroupCochain, GrowthReport};
pub use conv::{convolve, fourier_check, plancherel_trace, seminorm, tau_g, ConvElement, LatticeGroup};
pub use cyclic::{chern_pairing, connes_b, hochschild_b, CyclicCochain, Idempotent, SampledAlgebra, Unitized};
pub use kernels::{kernel_convolve, morita_check, partial_trace, tau_m, InvariantKernel, KernelAlgebra};
pub use fredholm::{cm_idempotent, cs_projector, graph_projection, mckean_singer, mw_projector, trace_pairing, GradedDirac, IndexProjector, ProjectorKind};
pub use index::{a_hat_form, atiyah_singer_form, chern_character, higher_a_hat, higher_index_rhs, higher_signature, l_form, CharacteristicForm, CurvatureData, ExtForm, MatForm};
