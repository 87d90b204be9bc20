//! Coded caching for the (K,K) broadcast cache network.
//!
//! A server holds K files of F bits each; K users, each with an MF-bit cache,
//! share a broadcast link. This crate implements, at the bit level:
//!
//! * a coded-prefetching scheme reaching the memory-rate pair
//!   ((K²−K−1)/K, 1/(K−1)) for demands where all users request distinct files
//!   ([`scheme_kk`]),
//! * the classical uncoded-prefetching baseline at integer cache parameter r
//!   ([`scheme_mn`]),
//! * a memory-sharing combinator that runs two schemes on complementary file
//!   segments to hit convex combinations of their points ([`memshare`]),
//! * closed-form lower bounds, the achievable-point atlas, and the lower
//!   convex envelope with exact rational arithmetic ([`bounds`]),
//! * a GF(2)-rank analyzer that machine-checks the converse argument on the
//!   instantiated linear scheme, using rank as entropy ([`entropy`]).
//!
//! All rate/memory accounting is exact: sizes are integer bit counts and
//! every (M,R) value is a rational number, so optimality checks are integer
//! comparisons rather than floating-point tolerances.

pub mod bounds;
pub mod demand;
pub mod entropy;
pub mod gf2;
pub mod golden;
pub mod memshare;
pub mod partition;
pub mod scheme_kk;
pub mod scheme_mn;

mod error;

pub use error::{Error, Result};
