#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bench;
pub mod cli;
pub mod dispatch;
pub mod error;
pub mod normalize;
pub mod oracle;
pub mod polish;
pub mod pricing;
pub mod refine;
pub mod seed;
pub mod specfun;
pub mod ulp;

pub use dispatch::{implied_total_vol, implied_vol_from_quote, solve, BranchTag, SolveResult, SolverConfig};
pub use error::{Error, Result};
pub use normalize::{normalize, NormalizedQuote, OptionKind, RawQuote};
