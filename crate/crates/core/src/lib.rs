//! mzvlab — a laboratory for multiple zeta values.
//!
//! ζ(s_1,...,s_l) = Σ_{n_1 > ... > n_l >= 1} 1/(n_1^{s_1} ... n_l^{s_l})
//!
//! The crate provides:
//!   - index/word combinatorics and the d_w dimension sequence ([`index`],
//!     [`word`], [`dims`])
//!   - rigorous ball-arithmetic evaluation through the Hölder convolution
//!     at 1/2 ([`numeval`], [`ball`], [`dyadic`])
//!   - stuffle/shuffle/duality/Hoffman relation generation, exact
//!     dimension upper bounds and reduction onto the {2,3} basis
//!     ([`relations`], [`exactla`])
//!   - PSLQ integer-relation probes and independence certificates
//!     ([`lindep`])
//!   - the `verify-paper` acceptance battery ([`battery`]) and the CLI
//!     plumbing ([`config`], [`cache`], [`render`])
//!
//! Every numeric result is an enclosure: a ball guaranteed to contain the
//! exact value. Every algebraic result is exact rational arithmetic.

pub mod ball;
pub mod battery;
pub mod cache;
pub mod config;
pub mod dims;
pub mod dyadic;
pub mod exactla;
pub mod formal;
pub mod index;
pub mod lindep;
pub mod numeval;
pub mod rat;
pub mod relations;
pub mod render;
pub mod word;

pub use ball::Ball;
pub use dyadic::Dyadic;
pub use formal::FormalSum;
pub use index::MzvIndex;
pub use rat::Rational;
pub use word::BinaryWord;
