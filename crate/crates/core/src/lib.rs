//! Finite combinatorics of strong coding trees for the k-clique-free Henson
//! graphs.
//!
//! The crate builds two families of finite trees of 0/1 sequences: the strong
//! k-clique-free trees (uniform branching, one coding node per level block)
//! and their skew counterparts (exactly one critical node per level), both to
//! a requested number of coding nodes.  On top of the builders it provides
//!
//! * the branching and passing-number criteria the trees satisfy, with
//!   checkable witnesses;
//! * pre-clique analysis: which level sets acquire new pre-cliques where, and
//!   which witnessing properties (plain, strong, strict) a subtree enjoys;
//! * extension machinery: leftmost extensions, splitting-node extensions,
//!   passing-number choices, and end-extension searches realizing a
//!   prescribed similarity type;
//! * strict similarity types of incremental antichains of coding nodes, and
//!   the induced upper-bound counts for small graphs.
//!
//! Sequences are packed 64 bits to the word; deep trees are handled through
//! an implicit strand representation that is cross-validated against the
//! explicit builder on shallow prefixes.

pub mod antichains;
pub mod bitseq;
pub mod builders;
pub mod criteria;
pub mod deep;
pub mod error;
pub mod extension;
pub mod graph;
pub mod json;
pub mod precliques;
pub mod render;
pub mod similarity;
pub mod tree;

pub use bitseq::BitSeq;
pub use error::{Error, Result};
