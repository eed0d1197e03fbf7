//! Paths, truncated signatures, iterated-integral functionals and loops.

mod exact;
mod functional;
mod loops;
mod path;
mod quadrature;
mod signature;
pub mod words;

pub use exact::{
    exact_rewrite, reduce_exact_letter, rewrite_functional, Boundary, ExactIdentityReport, ExactLetter, LetterRef,
    RewriteTerm, ScaledLetter,
};
pub use functional::{HomotopyStatus, IteratedIntegral, LetterInfo};
pub use loops::{loop_signature, CacheKey, LoopCache};
pub use path::{pullback_integrand, Path};
pub use quadrature::gauss_legendre;
pub use signature::{
    path_signature, segment_signature, segment_signature_with, QuadratureOptions, Signature, DEFAULT_NODE_BUDGET,
};
