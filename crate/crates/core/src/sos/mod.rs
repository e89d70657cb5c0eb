//! Sum-of-squares certification at desk scale.

pub mod basis;
pub mod certify;
pub mod facial;
pub mod gram;
pub mod modular;
pub mod sdp;
pub mod span;

pub use basis::{monomial_basis, MonomialBasis};
pub use certify::{
    certify, extract_squares, recomposition_residual, round_gram, verify_certificate, Branch,
    Certificate, CertifyMode, CertifyOptions, CertifyReport, Verification, WeightedSquare,
};
pub use facial::{facial_reduce, facial_reduce_batched, BatchTrace, Face, FaceTracker};
pub use gram::{gram_system, GramConstraint, GramProblem};
pub use sdp::{check_functional, face_basis_f64, sdp_feasible, SdpOptions, SdpStatus};
pub use span::{exact_span_check, negative_direction, ExactWitness, SpanOutcome};
