//! Exact-arithmetic toolkit for the combinatorics of finite subsets of the
//! positive integers and the seminorm spaces built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`finset`] — finite sets, infinite sets in window form, transfer maps;
//! * [`barrier`] — a closed grammar of uniform barriers with ordinal ranks;
//! * [`plegma`] — interlaced tuples of barrier members and their calculus;
//! * [`normspace`] — norming sets, seminorm points, certified distances, nets;
//! * [`ramsey`] — homogenisation and oscillation-stability searches;
//! * [`models`] — barrier-indexed matrices and their stabilised limits.
//!
//! Everything user-facing is exact: coordinates and norms are rationals,
//! suprema over boxes are reported as certified intervals, and all random
//! generation is driven by explicit seeds.

pub mod acceptance;
pub mod barrier;
pub mod finset;
pub mod models;
pub mod normspace;
pub mod plegma;
pub mod ramsey;
pub mod rat;

use thiserror::Error;

/// Crate-wide error type.  Variants that carry data report the best partial
/// result that was available when the operation gave up.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An element was expected to lie in a given infinite set and does not.
    #[error("element {element} does not belong to the reference set")]
    ElementNotInSet { element: u32 },
    /// A finite set strays outside the ground set of the family consuming it.
    #[error("set {set:?} is not contained in the ground set")]
    GroundSetViolation { set: Vec<u32> },
    /// Defensive cap on ordinal degree; unreachable through the public grammar.
    #[error("ordinal rank exceeds the supported range")]
    RankOverflow,
    /// The zero-rank family has no sections to take.
    #[error("the singleton family {{∅}} has no sections")]
    NoSections,
    /// A search ran out of window before meeting its obligation.
    #[error("window of depth {depth} exhausted: {what}")]
    InsufficientWindow { what: String, depth: usize },
    /// No initial segment of the input inverts to a member of the source family.
    #[error("no initial segment of {set:?} projects onto the source family")]
    NoProjection { set: Vec<u32> },
    /// A gap between consecutive anchor elements holds too few fill elements.
    #[error("gap below {below} holds {found} fill elements, {needed} needed")]
    GapTooSmall { below: u32, found: usize, needed: usize },
    /// The input admits no member decomposition of the requested length.
    #[error("set {set:?} admits no {n}-fold member decomposition")]
    NotDecomposable { set: Vec<u32>, n: usize },
    /// A functional family does not norm the requested unit vectors.
    #[error("norming set does not give norm 1 to basis vector at position {position}")]
    NotNormalized { position: u32 },
    /// The evaluator for this norming-set kind is approximate, not exact.
    #[error("norming-set kind `{kind}` only supports direct evaluation")]
    EvaluationOnly { kind: String },
    /// The vectors handed to a ratio computation span a degenerate space.
    #[error("denominator vanishes: the sampled span is degenerate")]
    DegenerateSpan,
    /// Homogenisation could not reach the requested size; carries best found.
    #[error("no homogeneous set of size {target} found; best has size {}", best.len())]
    TargetUnreachable { target: usize, best: Vec<u32> },
    /// Stabilisation ran out of window; carries the deepest verified level.
    #[error("stabilisation exhausted the window at level {level}")]
    WindowExhausted { level: usize },
    /// A tuple fails the interlacing conditions where one was required.
    #[error("tuple is not plegma: {reason}")]
    NotPlegma { reason: String },
    /// A finite set was expected to be a member of a family and is not.
    #[error("set {set:?} is not a member of the family")]
    NotMember { set: Vec<u32> },
    /// Truncation tails never fit the error budget within the available rows.
    #[error("row {row} is not coordinatewise null within the available indices")]
    NotCoordinatewiseNull { row: usize },
    /// Malformed scenario or object encoding.
    #[error("schema error: {0}")]
    Schema(String),
    /// Requested entry lies outside the finite table backing a matrix.
    #[error("matrix entry ({row}, {set:?}) is outside the backing table")]
    EntryOutOfRange { row: usize, set: Vec<u32> },
}

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
