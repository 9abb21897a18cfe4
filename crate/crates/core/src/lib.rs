//! Embeddings of noncompact classical symmetric spaces `G*/K` into their
//! compact duals `G/K`.
//!
//! Spaces are realized as subspaces of `F^{n+m}`: the compact side uses the
//! standard Hermitian form, the noncompact side the form `diag(I_n, -I_m)`.
//! Three maps send a space-like subspace to the compact dual: `p` (the
//! subspace itself), `g` (the unitary factor of a block QR of a coset
//! representative) and `f` (log, flat rescaling, exp). On Grassmannians the
//! three agree; the rank-one sphere admits a further map `b`.
//!
//! [`lattice`] computes unit lattices and tangent cut radii, and [`verify`]
//! checks the identities on random samples with reproducible seeds.

pub mod embeddings;
pub mod error;
pub mod lattice;
pub mod numkernel;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
