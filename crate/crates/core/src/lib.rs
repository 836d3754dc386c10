//! Zero-error codes for the `(ℓ, r)`-duplication and `(ℓ, r)`-0-insertion
//! channels: the `φ_ℓ` transform, both channel models, the block code
//! `C_{q,ℓ,r}(n)` with exact counting and ranking, its decoder, and the
//! zero-error capacity.

pub mod capacity;
pub mod channel;
pub mod codebook;
pub mod decoder;
pub mod error;
pub mod oracle;
pub mod transform;
pub mod word;

pub use capacity::{cw_capacity, omega_star, solve_rho, CapacityResult, CharSeries, CWCapacityResult};
pub use channel::{confusable, for_each_output, output_set, Backend, Budget, InsertionPattern, Model, OutputSet};
pub use codebook::{code_prime, count, CodePrime, Codebook, CountTable};
pub use decoder::{decode, decode_into, decode_prime, decode_run};
pub use error::{Error, Result};
pub use oracle::{brute_zero_error_check, build_graph, max_independent_set, ConfusabilityGraph};
pub use transform::{phi, phi_inverse};
pub use word::{ChannelParams, Repetition, RunForm, Segment, SpaceSq, Symbol, Word};
