//! Error type shared by every validator and decision procedure.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// All the ways validation or a decision procedure can reject its input.
///
/// Variants carry enough context to point at the offending object, arrow,
/// element or table entry by name.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    // ---- categories ----
    #[error("missing composite for composable pair g={g}, f={f}")]
    MissingComposite { g: String, f: String },
    #[error(
        "associativity fails on triple h={h}, g={g}, f={f}: (h.g).f = {left} but h.(g.f) = {right}"
    )]
    NonAssociative { h: String, g: String, f: String, left: String, right: String },
    #[error("type mismatch: {0}")]
    BadTyping(String),
    #[error("duplicate or reserved name: {0}")]
    DuplicateName(String),
    #[error("multiplication table is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("bad unit: {0}")]
    BadUnit(String),
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("unknown object {0}")]
    UnknownObject(String),

    // ---- presheaves ----
    #[error("composition violated: action of {gf} and {g} after {f} disagree on element {elem}")]
    CompositionViolation { g: String, f: String, gf: String, elem: String },
    #[error("action of arrow {arrow} has no entry for element {elem}")]
    EmptyActionEntry { arrow: String, elem: String },
    #[error("element {0} not in ambient presheaf")]
    ElementNotInAmbient(String),
    #[error("subpresheaves live in different ambient presheaves")]
    DifferentAmbient,
    #[error("naturality violated at arrow {arrow}, element {elem}: map({arrow}.{elem}) != {arrow}.map({elem})")]
    NaturalityViolation { arrow: String, elem: String },

    // ---- limits ----
    #[error("homomorphism {0} is not a monomorphism")]
    NotMono(String),
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("square is incompatible with the pushout: {0}")]
    IncompatibleSquare(String),

    // ---- connectivity ----
    #[error("base is not action-closed: {arrow}.{elem} leaves the base")]
    BaseNotClosed { arrow: String, elem: String },
    #[error("element {0} lies in the base")]
    ElementInBase(String),

    // ---- equation systems / purity ----
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("sort mismatch in equation system: {0}")]
    SortMismatch(String),
    #[error("square leg {0} is not a pure monomorphism")]
    NotPureInputs(String),
    #[error("square is not a pullback of monomorphisms: {0}")]
    NotPullback(String),
    #[error("connectivity precondition fails: components of A\\K and B\\K meet at {0}")]
    ConnectivityPreconditionFailed(String),
    #[error("the supplied assignment does not solve the system in the ambient presheaf: {0}")]
    NotSolvableInL(String),
    #[error(
        "amalgamation sub-system unsolvable in side {side}; a precondition was violated upstream"
    )]
    AmalgamationFailed { side: char },

    // ---- chain construction ----
    #[error("seed condition violated: {0}")]
    SeedConditionViolated(String),
    #[error("gluing map is not a well-defined monomorphism: {0}")]
    GluingNotMono(String),
    #[error("arrows {f} and {g} do not share a domain")]
    BadSpan { f: String, g: String },

    // ---- files / cli ----
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("malformed JSON in {path}: {detail}")]
    MalformedJson { path: String, detail: String },
    #[error("i/o failure on {path}: {detail}")]
    Io { path: String, detail: String },
}

impl Error {
    /// Stable machine-readable kind tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            MissingComposite { .. } => "MissingComposite",
            NonAssociative { .. } => "NonAssociative",
            BadTyping(_) => "BadTyping",
            DuplicateName(_) => "DuplicateName",
            NotAssociative { .. } => "NotAssociative",
            BadUnit(_) => "BadUnit",
            NotAPoset(_) => "NotAPoset",
            UnknownObject(_) => "UnknownObject",
            CompositionViolation { .. } => "CompositionViolation",
            EmptyActionEntry { .. } => "EmptyActionEntry",
            ElementNotInAmbient(_) => "ElementNotInAmbient",
            DifferentAmbient => "DifferentAmbient",
            NaturalityViolation { .. } => "NaturalityViolation",
            NotMono(_) => "NotMono",
            SourceMismatch(_) => "SourceMismatch",
            TargetMismatch(_) => "TargetMismatch",
            IncompatibleSquare(_) => "IncompatibleSquare",
            BaseNotClosed { .. } => "BaseNotClosed",
            ElementInBase(_) => "ElementInBase",
            BadParameters(_) => "BadParameters",
            SortMismatch(_) => "SortMismatch",
            NotPureInputs(_) => "NotPureInputs",
            NotPullback(_) => "NotPullback",
            ConnectivityPreconditionFailed(_) => "ConnectivityPreconditionFailed",
            NotSolvableInL(_) => "NotSolvableInL",
            AmalgamationFailed { .. } => "AmalgamationFailed",
            SeedConditionViolated(_) => "SeedConditionViolated",
            GluingNotMono(_) => "GluingNotMono",
            BadSpan { .. } => "BadSpan",
            FileNotFound(_) => "FileNotFound",
            MalformedJson { .. } => "MalformedJson",
            Io { .. } => "Io",
        }
    }
}
