use core::fmt;

/// Errors raised by the exact kernels and generator constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus is outside `[2, 2^31)`.
    ModulusOutOfRange(u64),
    /// The modulus failed the primality test.
    NotPrime(u64),
    /// Inversion of zero.
    DivisionByZero,
    /// Operands from two different prime fields.
    FieldMismatch { left: u64, right: u64 },
    /// Incompatible shapes for a binary operation.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A vector argument of the wrong length.
    LengthMismatch { expected: usize, got: usize },
    NotSquare { rows: usize, cols: usize },
    /// A unit lower triangular factor has a diagonal entry other than one.
    NonUnitDiagonal { index: usize },
    /// An upper triangular factor has a zero on its diagonal.
    Singular { index: usize },
    /// A nonzero entry at `(row, col)` with `row + col > n - 2` (0-based).
    NotLeftTriangular { row: usize, col: usize },
    /// The image array is not a bijection.
    InvalidPermutation,
    /// Compression found no free column in the given block column.
    NoZeroColumn { block: usize },
    /// The block width passed to the compression is smaller than the
    /// number of segments crossing some row.
    BlockWidthTooSmall { width: usize, needed: usize },
    /// Embedded operands whose offsets do not line up for the product.
    Placement,
    /// Structurally invalid generator data.
    InvalidGenerator(&'static str),
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ModulusOutOfRange(p) => write!(f, "modulus {p} is outside [2, 2^31)"),
            Error::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::FieldMismatch { left, right } => {
                write!(f, "field mismatch: p={left} vs p={right}")
            }
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: incompatible dimensions {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::LengthMismatch { expected, got } => {
                write!(f, "expected length {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::NonUnitDiagonal { index } => {
                write!(f, "diagonal entry {index} of unit triangular factor is not 1")
            }
            Error::Singular { index } => write!(f, "zero diagonal entry at {index}"),
            Error::NotLeftTriangular { row, col } => {
                write!(f, "nonzero entry at ({row}, {col}) below the anti-diagonal")
            }
            Error::InvalidPermutation => write!(f, "image array is not a bijection"),
            Error::NoZeroColumn { block } => {
                write!(f, "no zero column available in block column {block}")
            }
            Error::BlockWidthTooSmall { width, needed } => {
                write!(f, "block width {width} is smaller than the required {needed}")
            }
            Error::Placement => write!(f, "embedded operands are not aligned for this product"),
            Error::InvalidGenerator(what) => write!(f, "invalid generator: {what}"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
