//! Walk-based graph centralities with exact and high-precision backends.
//!
//! The crate decides vertex cospectrality and walk-regularity with exact
//! rational arithmetic, computes diagonal entry functions (subgraph,
//! resolvent, degree, eigenvector centralities and walk entropy) at a
//! configurable decimal precision, and locates the positive `beta` values at
//! which two non-cospectral vertices acquire equal subgraph centrality.

pub mod centrality;
pub mod exact;
pub mod graph;
pub mod hp;
pub mod miner;
pub mod poly;
pub mod solver;
pub mod spectral;

pub use centrality::{Beta, CentralityFn, CentralityReport};
pub use exact::{CharPoly, ExactMatrix, WalkTable};
pub use graph::{Graph, VertexPair};
pub use hp::{Hp, HpCtx};
pub use solver::{BetaRoot, DiffFunction};
pub use spectral::{Precision, SpectralData};
