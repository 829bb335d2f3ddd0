use core::fmt;

use crate::diagrams::{Cell, FccPoint};
use crate::laurent::VarId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    NotDivisible,
    DivisionByZero,
    NonInvertibleImage(VarId),
    UnknownVar(VarId),
    Parse(usize),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::NotDivisible => write!(f, "quotient is not a Laurent polynomial"),
            AlgebraError::DivisionByZero => write!(f, "division by zero"),
            AlgebraError::NonInvertibleImage(v) => {
                write!(
                    f,
                    "variable {} has a negative power but a non-monomial image",
                    v
                )
            }
            AlgebraError::UnknownVar(v) => write!(f, "variable {} is not in the table", v),
            AlgebraError::Parse(at) => write!(f, "parse error at byte {}", at),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    NotWeaklyDecreasing,
    NonPositivePart,
    Malformed,
    BoxOutside(Cell),
    Parity(i64, i64, i64),
    EmptyPartition,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::NotWeaklyDecreasing => write!(f, "parts are not weakly decreasing"),
            DiagramError::NonPositivePart => write!(f, "parts must be positive"),
            DiagramError::Malformed => write!(f, "expected comma-separated positive integers"),
            DiagramError::BoxOutside(c) => {
                write!(f, "box ({},{}) is outside the diagram", c.a, c.b)
            }
            DiagramError::Parity(i, j, k) => write!(f, "({},{},{}) violates i+j+k odd", i, j, k),
            DiagramError::EmptyPartition => write!(f, "partition must be nonempty"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    Algebra(AlgebraError),
    Diagram(DiagramError),
    OutsideDomain(FccPoint),
    /// Division failed while solving `point`.
    Inexact(FccPoint),
    InvalidPath,
    SurfaceMismatch,
    SquareDoesNotFit {
        a: u32,
        b: u32,
        m: u32,
    },
    NotDecomposable(i64),
    InternalMismatch(&'static str),
    NonPolynomialResult,
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Algebra(e) => e.fmt(f),
            EngineError::Diagram(e) => e.fmt(f),
            EngineError::OutsideDomain(p) => write!(f, "point {} is outside the surface domain", p),
            EngineError::Inexact(p) => write!(f, "inexact division while solving {}", p),
            EngineError::InvalidPath => write!(f, "invalid boundary path"),
            EngineError::SurfaceMismatch => write!(f, "surface does not match the diagram"),
            EngineError::SquareDoesNotFit { a, b, m } => {
                write!(f, "{}x{} square at ({},{}) does not fit", m, m, a, b)
            }
            EngineError::NotDecomposable(j) => {
                write!(f, "strip at column {} is not decomposable", j)
            }
            EngineError::InternalMismatch(what) => write!(f, "internal mismatch: {}", what),
            EngineError::NonPolynomialResult => write!(f, "specialization is not a polynomial"),
        }
    }
}

impl From<AlgebraError> for EngineError {
    fn from(e: AlgebraError) -> Self {
        EngineError::Algebra(e)
    }
}

impl From<DiagramError> for EngineError {
    fn from(e: DiagramError) -> Self {
        EngineError::Diagram(e)
    }
}
