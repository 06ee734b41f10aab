//! Classical information through the spin of relativistically boosted wave packets.
//!
//! Two signal states of a spin-1/2 particle are prepared as Gaussian momentum
//! wave packets carrying a spin direction, and a receiver boosted along x reads
//! the spin alone. Boosts entangle spin with momentum, so the receiver's reduced
//! spin density matrices, and with them the Holevo bound on the accessible
//! classical information, depend on the rapidity. This crate computes those
//! reduced matrices (both from 2D momentum integrals and from a brute-force 3D
//! oracle), the Holevo bounds for two- and four-symbol encodings, and the
//! effective spin channel maps together with their complete-positivity
//! witnesses and the symmetric-case Kraus decomposition.
//!
//! Everything is expressed in natural units with momenta normalized by the
//! particle mass, so packets are described by a dimensionless mean momentum `K`
//! along x and width `W`. Entropies are in bits.

pub mod cp_analysis;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod relativity;
pub mod spin_channel;
pub mod states;

pub use error::{Error, Result};
pub use quadrature::{IntegrationSpec, QuadratureResult};
pub use relativity::{FourMomentum, Rapidity};
pub use spin_channel::{
    BoostedChannel, ChannelParams, DensityMatrix2, DensityMatrix4, HolevoReport,
};
pub use states::{Ensemble2, Ensemble4, MomentumPacket, PureSpinorState};
