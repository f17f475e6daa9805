use thiserror::Error;

/// Errors raised by constructions and verifiers in this crate.
///
/// Input problems (bad labels, violated preconditions) are kept apart from
/// [`Error::Falsified`], which signals that an exact check produced a
/// counterexample to a property that is expected to hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("unknown element index {0}")]
    UnknownElement(usize),

    #[error("cover relations contain a cycle through `{0}`")]
    Cycle(String),

    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("`{lo}` is not below `{hi}`")]
    NotComparable { lo: String, hi: String },

    #[error("poset has no least element")]
    NoLeastElement,

    #[error("poset is not bounded")]
    Unbounded,

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid building set: {0}")]
    InvalidBuildingSet(String),

    #[error("`{element}` is not a building set member")]
    NotInBuildingSet { element: String },

    #[error("set is not nested; witness antichain {witness:?}")]
    NotNested { witness: Vec<String> },

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex `{0}` already exists")]
    VertexCollision(String),

    #[error("face {0:?} is not a simplex of the complex")]
    NotAFace(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{claim} falsified: {witness}")]
    Falsified { claim: String, witness: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
