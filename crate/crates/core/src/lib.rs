//! Exact analysis of finite sets of multipartite orthogonal product states.
//!
//! The crate decides completeness, derives the space of operators compatible
//! with orthogonality-preserving local measurements, enumerates and applies
//! local projective measurements, searches for projective LPCC discrimination
//! protocols, decides unextendibility, and searches for local activation of
//! nonlocality, including across every bipartition of the parties.
//!
//! All arithmetic is over the Gaussian rationals; no verdict depends on a
//! floating-point tolerance.

#![allow(clippy::needless_range_loop)]

pub mod activation;
pub mod constraints;
pub mod corpus;
pub mod discrimination;
pub mod error;
pub mod format;
pub mod linalg;
pub mod measurement;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod state;
pub mod tiling;

pub use activation::{
    is_activable, is_activable_with, is_strongly_local, replay_witness, strong_locality_over,
    Activability, ActivationStep, ActivationWitness, NotActivableReason, StrongLocality,
    StrongLocalityReport, TerminalProperty,
};
pub use constraints::{
    derive_constraint_space, is_locally_irreducible, only_trivial, ConstraintRecord,
    HermitianOperator, HermitianSpace, IrreducibilityReport,
};
pub use discrimination::{
    is_upb, replay_protocol, search_protocol, DistinguishabilityVerdict, NodeAction, ProtocolNode,
    UpbVerdict, Verdict, DEFAULT_MAX_DEPTH,
};
pub use error::{Error, Result};
pub use format::{parse_pvm, parse_state_set, serialize_state_set};
pub use linalg::Operator;
pub use measurement::{
    apply_projector, enumerate_op_pvms, is_orthogonality_preserving, measure, Closure,
    OutcomeResult, Projector, Pvm, PvmEnumeration,
};
pub use scalar::{Rational, Scalar};
pub use state::{
    classify_completeness, flatten, has_local_redundancy, inner_product, is_orthogonal_set,
    Bipartition, CompletenessClass, CompletenessTag, LocalVector, ProductState, StateSet,
};
pub use tiling::{render_tiling, tiling, Tile, TilingDiagram, TilingFormat};
