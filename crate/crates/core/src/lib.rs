//! Operator entanglement of bipartite unitaries, with coupled kicked tops as
//! the model system.
//!
//! - [`numerics`]: dense complex matrices and the factorizations built on them.
//! - [`spin`]: angular-momentum matrices in the ascending-m J_z basis.
//! - [`kickedtop`]: the coupled-tops Floquet operator and its powers.
//! - [`entanglement`]: realignment, operator Schmidt spectra and entropies.
//! - [`rmt`]: the Laguerre eigenvalue law and histogram comparison.
//! - [`states`]: bipartite pure states and their entanglement.

pub mod entanglement;
pub mod error;
pub mod kickedtop;
pub mod numerics;
pub mod random;
pub mod rmt;
pub mod spin;
pub mod states;

pub use entanglement::{
    operator_entanglement, realign, reshape_vec, schmidt_spectrum, slin, svn, BipartitionDims,
    OperatorEntropies, SchmidtSpectrum,
};
pub use error::{Error, Result};
pub use kickedtop::{
    diagonal_coupling, floquet, power_sequence, product_rotation, FloquetOperator, KickedTopParams,
    PowerSample, Propagator,
};
pub use numerics::{ComplexMatrix, C64};
pub use rmt::{fit_distance, histogram, saturation_estimate, Histogram, LaguerreLaw};
pub use spin::{HalfInt, SpinSystem};
pub use states::{phi_p_state, phi_state, product_basis_state, state_entropy, PureState};
