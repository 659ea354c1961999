use crate::poset::ElementId;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("relation contains a cycle through element {0}")]
    Cycle(ElementId),
    #[error("element {0} compared with itself")]
    SelfQuery(ElementId),
    #[error("element id {id} out of range for {n} elements")]
    UnknownElement { id: ElementId, n: usize },
    #[error("exhaustive counting over {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("input does not have width at most {0}")]
    WidthExceeded(usize),
    #[error("invalid chain decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("weighted search probe contradicts the interval partition")]
    InconsistentProbe,
    #[error("more than {0} minimal candidates")]
    CandidateOverflow(usize),
    #[error("sequence is not a linear extension: {later} precedes {earlier}")]
    InvalidExtension { earlier: ElementId, later: ElementId },
    #[error("no free color left for element {0}")]
    ColorExhausted(ElementId),
    #[error("witness disagrees with logged answer for ({0}, {1})")]
    WitnessMismatch(ElementId, ElementId),
    #[error("argument out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
