//! Exact reduced Poincaré series and Betti numbers of directed path
//! (trace) spaces of zero-delay PV concurrency models.
//!
//! A model is an upward-closed family `F` of subsets of `[n]` (the sets of
//! processes that may not simultaneously sit on an integer level) together
//! with a vector `k` of per-process access counts.  The series engine sums
//! over multiplicity maps `m: F -> N`, combining acyclic-orientation counts
//! of conflict graphs with the homology of order complexes of matching
//! posets.  Every nontrivial ingredient has an independent brute-force
//! route (see [`oracle`] and the test suites).

pub mod error;
pub mod homology;
pub mod hypergraph;
pub mod limits;
pub mod oracle;
pub mod orientations;
pub mod poly;
pub mod series;
pub mod set;

pub use error::{Error, Result};
pub use homology::{BettiTable, Field, SimplicialComplex};
pub use hypergraph::{Hypergraph, Matching, MatchingPoset};
pub use limits::{Limits, OracleLimits};
pub use poly::{IntPolynomial, LaurentPolynomial};
pub use series::{Engine, MultiplicityMap, ProblemInstance};
pub use set::ProcessSet;
