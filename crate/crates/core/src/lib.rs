//! Search and verification of odd-length binary Z-complementary pairs.
//!
//! * [`seqcore`]: packed sequences, hex codec, correlation kernels
//! * [`equivalence`]: interchange / negation / reversal orbits and canonical forms
//! * [`classify`]: zone width and optimality verdicts
//! * [`demerit`]: demerit factors and the Pursley-Sarwate criterion
//! * [`search`]: the chunked meet-in-the-middle search
//! * [`catalog`]: bundled published pairs and their regression check
//! * [`oracle`]: brute-force references used by the tests

pub mod catalog;
pub mod classify;
pub mod demerit;
pub mod equivalence;
pub mod oracle;
pub mod search;
pub mod seqcore;

pub use classify::{check_end_parity, classify, zcz_width, Category, Classification};
pub use demerit::{adf, cdf, psc, DemeritReport};
pub use equivalence::{are_equivalent, canonical, orbit, PairTransform};
pub use search::{run_search, search_chunk, Case, CaseMask, Chunk, SearchConfig, SearchError, SearchOutcome};
pub use seqcore::{BinarySequence, RhoVector, SeqError, SequencePair};
