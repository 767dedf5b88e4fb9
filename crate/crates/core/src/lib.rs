//! Positivity structure of the linear maps
//!
//! ```text
//! Phi_{a,b,n}(A) = A^t (x) 1_n + 1_n (x) A + Tr(A) (a 1_{n^2} + b B_{n^2})
//! ```
//!
//! from `M_n` to `M_n (x) M_n`, where `B_{n^2}` is the projector onto the
//! unnormalized Bell vector. The crate builds the maps and their Choi
//! matrices, evaluates the closed-form positivity, 2-positivity, complete
//! positivity and decomposability regions, checks them against a numeric
//! oracle, and rasterizes the regions of the `(alpha, beta)` plane.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod oracle;
pub mod regions;
pub mod scan;
pub mod spectra;

pub use error::{Error, Result};
pub use maps::{MapKind, MapParams};
pub use regions::Classification;
