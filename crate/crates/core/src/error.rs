use alloc::string::String;
use core::fmt;

/// Errors raised by operations whose preconditions fail.
///
/// Mathematical verdicts (a collection that is not exceptional, a fan that is
/// not smooth) are reported as values, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DimensionMismatch,
    /// A machine-integer conversion would have lost information.
    Overflow,
    InvalidFan(String),
    NotSmooth,
    NotComplete,
    /// The Picard quotient has torsion or the rays do not span.
    Torsion,
    LengthMismatch { expected: usize, found: usize },
    NotACone,
    ConeTooSmall,
    SingularWall,
    TooManyRays(usize),
    NotStable,
    OrbitNotOrthogonal,
    CyclicOrder,
    DuplicateItem(usize),
    NotAGroup,
    NotConstructible(String),
    UnknownName(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::Overflow => write!(f, "integer does not fit in 64 bits"),
            Error::InvalidFan(why) => write!(f, "invalid fan: {why}"),
            Error::NotSmooth => write!(f, "fan is not smooth"),
            Error::NotComplete => write!(f, "fan is not complete"),
            Error::Torsion => write!(f, "Picard group has torsion or rays do not span the lattice"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            Error::NotACone => write!(f, "ray set is not a cone of the fan"),
            Error::ConeTooSmall => write!(f, "cone must have dimension at least 2"),
            Error::SingularWall => write!(f, "wall relation is not integral with unit coefficients"),
            Error::TooManyRays(n) => write!(f, "{n} rays exceeds the supported maximum of 128"),
            Error::NotStable => write!(f, "class set is not stable under the group"),
            Error::OrbitNotOrthogonal => write!(f, "an orbit is not a completely orthogonal block"),
            Error::CyclicOrder => write!(f, "Ext-precedence relation has a cycle"),
            Error::DuplicateItem(i) => write!(f, "item {i} repeats an earlier class"),
            Error::NotAGroup => write!(f, "elements are not closed under composition"),
            Error::NotConstructible(why) => write!(f, "not constructible: {why}"),
            Error::UnknownName(name) => write!(f, "unknown name `{name}`"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}
