//! Stable marriage with ties and incomplete preference lists.
//!
//! The crate models two-sided matching instances whose preference lists may be
//! incomplete (unacceptable partners) and contain ties (rank groups), and looks
//! for weakly stable marriages of maximum size with a local search driven by
//! blocking pairs. It ships four pieces:
//!
//! * [`instance`]: instance representation, text format, rank/preference queries;
//! * [`matching`]: marriages, blocking pairs, the evaluation function, neighbor moves;
//! * [`localsearch`]: the randomized search over marriages, in two variants
//!   ([`Variant::Lti`] with the full blocking-pair neighborhood, [`Variant::Ltiu`]
//!   restricted to undominated blocking pairs with alternating sides);
//! * [`generator`] and [`oracle`]: random instances and exact small-instance
//!   ground truth for testing and benchmarking.
//!
//! All randomized code draws from seeded ChaCha streams; the same seed always
//! reproduces the same result, independent of platform.

pub mod generator;
pub mod instance;
pub mod localsearch;
pub mod matching;
pub mod oracle;
pub mod seed;

pub use generator::{GenError, GenParams};
pub use instance::{Groups, Instance, InstanceError, ParseError, Preference, PersonId, PreferenceList, Side};
pub use localsearch::{
    search, search_traced, SearchConfig, SearchResult, SearchRng, StepAction, StepTrace,
    TrajectorySample, Variant,
};
pub use matching::{BlockingPair, Evaluation, Matching, MatchingError};
pub use oracle::{OracleError, OracleReport};
