//! The Cohen-Lenstra measure on finite abelian p-groups.
//!
//! Groups are identified with integer partitions ([`partitions`]). On top of
//! that the crate provides exact truncated q-series ([`qseries`]), closed-form
//! probabilities and moments ([`measure`]), the Young tableau chain and the
//! weighted Young lattice ([`young`]), matrices over `Z/p^K` ([`fplinalg`]),
//! conjugacy classes of `GL(n, p)` ([`conjugacy`]), brute-force oracles
//! ([`oracle`]), goodness-of-fit statistics ([`stats`]) and the `clh` command
//! line ([`cli`], [`verify`]).
//!
//! Runnable walkthroughs live in `examples/`; run one with
//! `cargo run --release --example <name>`.

pub mod arith;
pub mod cli;
pub mod conjugacy;
pub mod error;
pub mod fplinalg;
pub mod group;
pub mod measure;
pub mod oracle;
pub mod partitions;
pub mod qseries;
pub mod stats;
pub mod verify;
pub mod young;

pub use arith::{Prime, Rational};
pub use error::{Error, Result};
pub use partitions::{GroupShape, Partition};
pub use qseries::{EvalResult, QSeries};
