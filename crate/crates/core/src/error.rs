use thiserror::Error;

use crate::algebra::HermitianPoly;

#[derive(Debug, Clone, Error)]
pub enum AlgebraError {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: Box<HermitianPoly> },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("radicand too large to factor")]
    RadicandTooLarge,
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("defining function is not real")]
    NotReal,
    #[error("degenerate complex Hessian")]
    DegenerateHessian,
    #[error("degenerate Levi matrix")]
    DegenerateLevi,
    #[error("log argument vanishes on the sphere")]
    VanishingLogArgument,
    #[error("operation needs a {expected}-variable source, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("not a sphere map: ‖F‖² − 1 leaves remainder {remainder}")]
    NotASphereMap { remainder: String },
    #[error("quotient Q is not positive at a sample point (value {value})")]
    SignAnomaly { value: f64 },
    #[error("ball automorphism center must lie strictly inside the unit ball")]
    CenterOutsideBall,
    #[error("source is not the standard sphere; use the tracefree route")]
    NonSphereSource,
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("near-zero denominator ({0:e}) at evaluation point")]
    NearZeroDenominator(f64),
    #[error("chart degeneracy: |w| = {0:e} below guard")]
    ChartDegeneracy(f64),
    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),
    #[error("expression is not a function of s = |z|² alone")]
    NotMonomialForm,
    #[error("operation needs a polynomial map")]
    RequiresPolynomialMap,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
