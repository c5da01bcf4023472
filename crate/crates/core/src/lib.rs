//! Solvers for fair left-perfect many-to-one bipartite matching.
//!
//! Every left vertex carries one color and must be assigned to exactly one
//! adjacent right vertex. An assignment is `ell`-fair when the multiset of
//! colors landing on each right vertex has margin of victory (or max-min
//! spread) at most `ell`.
//!
//! The crate contains exact reference oracles ([`oracle`]), an integer
//! feasibility engine ([`ilp`]), matching and flow kernels ([`matchflow`]),
//! parameterized solvers ([`fpt`]), polynomial special cases ([`poly`]),
//! set-function utilities ([`setfn`]) and instance generators ([`gen`]).

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fpt;
pub mod gen;
pub mod ilp;
pub mod matchflow;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod setfn;

pub use error::{Error, Result};
pub use model::{
    maxmin, mov, validate_instance, verify, Answer, CountVector, Instance, Matching, Measure,
    Verdict, Violation, Warning,
};
