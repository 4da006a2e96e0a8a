//! Exact Gromov-Hausdorff distances between finite metric spaces.
//!
//! The crate provides:
//!
//! - finite metric spaces over exact rationals, with axiom validation,
//!   diameter, subspaces, scaling, and isometry testing ([`metric`]);
//! - correspondences, their distortion, and exhaustive enumerators
//!   ([`correspondence`]);
//! - the distance itself: an enumeration oracle, a deterministic
//!   branch-and-bound solver, and cheap bounds ([`gh`]);
//! - a gluing construction that joins a tuple of spaces of diameter at most
//!   `r` behind a two-point anchor, turning Gromov-Hausdorff distance into
//!   the l-infinity product distance of the tuple ([`embedding`]);
//! - a desk-scale harness that checks the identity on random instances,
//!   recovers the structure of low-distortion correspondences, and embeds
//!   real and l-infinity point sets isometrically ([`verify`]);
//! - a JSON space-file format and a scriptable CLI ([`mod@format`], [`cli`]).
//!
//! Everything is computed in exact rational arithmetic; results are asserted
//! with equality, not tolerance.
//!
//! ```
//! use ghforge::{gh_exact, FiniteMetricSpace, Scalar};
//!
//! let x = FiniteMetricSpace::two_point("a", "b", Scalar::from_int(1)).unwrap();
//! let y = FiniteMetricSpace::two_point("u", "v", Scalar::from_int(2)).unwrap();
//! let result = gh_exact(&x, &y);
//! assert_eq!(result.value, Scalar::ratio(1, 2));
//! assert_eq!(result.witness.distortion(&x, &y).unwrap(), Scalar::from_int(1));
//! ```

// Error enums carry exact rationals and witness data; they are cold paths,
// so the large-variant lint is not worth boxing them over.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod correspondence;
pub mod embedding;
pub mod format;
pub mod gh;
pub mod metric;
mod rng;
pub mod scalar;
pub mod verify;

pub use correspondence::{
    enumerate_correspondences, enumerate_function_pairs, Correspondence, CorrespondenceError,
    DEFAULT_ENUMERATION_CAP,
};
pub use embedding::{
    anchor_space, embed, glue_correspondence, EmbeddedSpace, EmbeddingError, EmbeddingParams,
    ProductPoint,
};
pub use gh::{
    gh_bruteforce, gh_exact, gh_exact_with, gh_function_pairs, gh_lower_bound_diam,
    gh_upper_bound_full_relation, GhError, GhResult, Method, SearchOptions,
};
pub use metric::{AxiomViolation, FiniteMetricSpace, MetricError};
pub use scalar::{Scalar, ScalarParseError};
pub use verify::{
    embed_linf_points, embed_real_points, linf_distance, linf_product_distance,
    random_product_point, recover_anchor_map, recover_block_permutation, run_suite,
    verify_instance, AnchorMap, DiagnosticError, StructureViolation, SuiteConfig, SuiteInstance,
    VerifyError, VerifyReport,
};
