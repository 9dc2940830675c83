//! Exact arithmetic for the extended continued fraction map.
//!
//! Numbers in `[0,1]` are sent to sequences over `ℕ ∪ {∞}` by the extended
//! Gauss map, and sequences are sent back to numbers by evaluating their
//! continued fractions with the convention `1/∞ = 0`. The crate covers both
//! directions, the Fibonacci-weighted product metric on sequences, the
//! forgetting map onto the stratified space `Σ`, rational preimages, and
//! probes that measure one-sided limits of the expansion map.
//!
//! Every value is exact. Irrational limits are reported as rational
//! enclosures and infinite metric series as rational brackets.

pub mod arith;
pub mod error;
pub mod evaluator;
pub mod metric;
pub mod symbolic;
pub mod topology;

pub use arith::{fib, fib_binet_check, rat, Fibonacci, Rational};
pub use error::{Error, Result};
pub use evaluator::{
    convergents, eval, eval_k, expand, gauss_digit, gauss_step, Convergents, Enclosure, Value,
};
pub use metric::{class_dist, dist, dist_with_depth, rho, tail_bound, weight, DistResult};
pub use symbolic::{
    equivalent, forget, in_cylinder, stratum, truncate, ExtDigit, GeneralWord, Seq, Stratum,
    Stream, Word, DEFAULT_DEPTH_BUDGET,
};
pub use topology::{
    alternate_is_noncanonical, continuity_probe, endpoint_probe, fundamental_interval,
    irrational_probe, preimage, Approach, Interval, Preimage, PreimagePair, ProbeReport, Sample,
    Side,
};
