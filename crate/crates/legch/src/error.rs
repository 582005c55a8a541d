//! Error types shared by the whole crate.
//!
//! Three broad families matter to callers:
//!
//! * **input errors** — malformed files, unknown names, inconsistent block
//!   data. These map to process exit code 2.
//! * **mathematical failures** — a well-formed instance that fails a check
//!   (a differential that does not square to zero, a non-exact sequence, …).
//!   Checks usually *report* these rather than erroring, but operations whose
//!   preconditions are mathematical (e.g. assembling a duality splitting)
//!   surface them here. These map to exit code 1.
//! * **refusals** — an operation whose hypotheses are not met by the input
//!   (no augmentation, monotonicity violated). Also exit code 2, since the
//!   input does not belong to the operation's domain.

use gf2core::Gf2Error;
use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum LegchError {
    /// Parse-time failure with 1-based line and column.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A generator name appears twice in one presentation.
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    /// A name was referenced that no generator declares.
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    /// The `ambient n <int>` header is required but absent.
    #[error("missing ambient header")]
    MissingAmbient,

    /// Chord actions must be strictly positive.
    #[error("action must be positive (generator `{0}`)")]
    NonPositiveAction(String),

    /// A differential has a nonzero constant term where none is allowed
    /// (word-length-1 truncation, augmentation conjugation).
    #[error("constant term survives in the differential of `{0}`")]
    ConstantTerm(String),

    /// An operation that needs an augmentation was given a DGA without one.
    #[error("no augmentation exists for this presentation")]
    NoAugmentation,

    /// Degree growth does not dominate action growth, so inverse-limit
    /// stabilization cannot be certified. Lists every offending chord.
    #[error("monotonicity |c| > C1*action(c) + C0 fails for: {0}")]
    Monotonicity(String),

    /// A required structural identity of the two-copy complex fails.
    /// `identity` names which one (e.g. "d_infinity^2 = 0").
    #[error("two-copy identity {identity} fails at degree {degree}")]
    TwoCopyIdentity { identity: String, degree: i64 },

    /// Action may not decrease along the two-copy differential.
    #[error("action decreases along the differential: {from} -> {to}")]
    ActionDecrease { from: String, to: String },

    /// Duality assembly: the assembled total differential does not square
    /// to zero.
    #[error("duality splitting: total differential does not square to zero at degree {0}")]
    DualitySquare(i64),

    /// Duality assembly: the pairing is not a degree-consistent bijection, or
    /// the P block is not the transpose of the Q block under it.
    #[error("duality splitting: P block is not dual to Q block under the pairing ({0})")]
    DualityPairMismatch(String),

    /// Duality assembly: the total complex has nonzero homology.
    #[error("duality splitting: total complex is not acyclic (first nonzero homology in degree {0})")]
    DualityNotAcyclic(i64),

    /// Duality assembly: the Q block differs from the linearized complex.
    #[error("duality splitting: Q block does not match the linearized complex ({0})")]
    DualityQMismatch(String),

    /// Cross-module comparison was asked of complexes whose bases do not
    /// line up.
    #[error("incompatible bases: {0}")]
    BasisIncompatibility(String),

    /// A move or comparison precondition failed (degree mismatch, missing
    /// coefficient, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An underlying exact-linear-algebra failure.
    #[error(transparent)]
    Core(#[from] Gf2Error),

    /// Filesystem-level failure while reading input.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, LegchError>;

impl LegchError {
    /// Process exit code contract: 2 for malformed/out-of-domain input,
    /// 1 for a mathematical failure discovered in well-formed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            LegchError::Parse { .. }
            | LegchError::DuplicateGenerator(_)
            | LegchError::UnknownGenerator(_)
            | LegchError::MissingAmbient
            | LegchError::NonPositiveAction(_)
            | LegchError::NoAugmentation
            | LegchError::Monotonicity(_)
            | LegchError::BasisIncompatibility(_)
            | LegchError::Precondition(_)
            | LegchError::Io(_) => 2,
            LegchError::ConstantTerm(_)
            | LegchError::TwoCopyIdentity { .. }
            | LegchError::ActionDecrease { .. }
            | LegchError::DualitySquare(_)
            | LegchError::DualityPairMismatch(_)
            | LegchError::DualityNotAcyclic(_)
            | LegchError::DualityQMismatch(_)
            | LegchError::Core(_) => 1,
        }
    }
}
