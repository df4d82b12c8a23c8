//! Generation and analysis of the Yellowstone permutation (OEIS A098550)
//! and its generalized variants.
//!
//! ```
//! use yellowstone::{generate, VariantConfig};
//!
//! let seq = generate(&VariantConfig::default(), 12).unwrap();
//! assert_eq!(seq.terms(), &[1, 2, 3, 4, 9, 8, 15, 14, 5, 6, 25, 12]);
//! ```

pub mod bitset;
pub mod classify;
pub mod cli;
pub mod error;
pub mod frontier;
pub mod generator;
pub mod growth;
pub mod io;
pub mod numtheory;
pub mod orbits;
pub mod variants;

pub use classify::{
    check_hypothesis_a, check_hypothesis_a_range, classify_sequence, kappa_distribution, Annotation,
    Classification, HypothesisAReport, Sigma, TermClass, TermKind,
};
pub use error::{Error, Result};
pub use frontier::{frontier_track, FrontierSnapshot};
pub use generator::{generate, verify_prefix, Domain, SequenceState, VariantConfig};
pub use growth::{alpha_estimate, residuals, Curve, GrowthModel, TermFilter};
pub use numtheory::SieveTable;
pub use orbits::{enumerate_cycles, find_fixed_points, trace_orbit, OrbitReport, OrbitStatus};
pub use variants::{detect_merge, make_variant, MergeResult};
