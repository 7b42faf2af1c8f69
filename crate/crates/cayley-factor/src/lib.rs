//! Construction, verification and certification of 1-factorizations of
//! connected Cayley graphs of finite groups of the form `Q x H`, where `Q`
//! is a nontrivial 2-group and `H` has odd order.
//!
//! Groups are explicit multiplication tables (desk scale, hard cap 512), so
//! quotients, normality and every verification step are exact. The main
//! entry point is [`factorizer::factorize_nilpotent`], which decomposes an
//! even-order nilpotent group into its 2-part and odd part and runs the
//! inductive construction. Every stage is re-verified and recorded in a
//! replayable [`factorizer::Certificate`]. A generic Delta+1 edge colorer
//! ([`edge_color::vizing_color`]) and an exact backtracking oracle
//! ([`edge_color::exact_one_factorize`]) serve as backstops.

pub mod bench;
pub mod catalog;
pub mod cayley;
pub mod edge_color;
pub mod export;
pub mod factorizer;
pub mod group;
pub mod groupspec;

mod error;
pub use error::Error;
