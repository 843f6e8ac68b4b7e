use thiserror::Error;

use crate::mask::SetMask;

/// Largest universe size accepted anywhere in the crate.
pub const MAX_UNIVERSE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size {0} is outside 1..={max}", max = MAX_UNIVERSE)]
    UniverseTooLarge(usize),
    #[error("exhaustive enumeration stops at n = {max}, got n = {n}{hint}", hint = if *n == 5 { " (n = 5 needs the long-run opt-in)" } else { "" })]
    EnumerationTooLarge { n: usize, max: usize },
    #[error("element {element} is outside 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("the empty set cannot be a member of a family")]
    EmptySetRejected,
    #[error("operation needs a nonempty family")]
    EmptyFamily,
    #[error("{0} is not a member of the family")]
    NotAMember(SetMask),
    #[error("{0} is not in the complement of the family")]
    NotInComplement(SetMask),
    #[error("the two sets must be distinct, got {0} twice")]
    IdenticalSets(SetMask),
    #[error("families have different universe sizes ({0} and {1})")]
    UniverseMismatch(usize, usize),
    #[error("family is not union-closed: {0} ∪ {1} is missing")]
    NotUnionClosed(SetMask, SetMask),
    #[error("no set of the complement contains element {0}")]
    EmptyDi(usize),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("malformed sequence: {0}")]
    MalformedSequence(String),
    #[error("greedy construction blocked after {deleted} deletions: every basis set of the current family already lies in the target")]
    ConstructionBlocked { deleted: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_universe(n: usize) -> Result<()> {
    if n == 0 || n > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(n));
    }
    Ok(())
}

pub(crate) fn check_element(element: usize, n: usize) -> Result<()> {
    if element == 0 || element > n {
        return Err(Error::ElementOutOfRange { element, n });
    }
    Ok(())
}
