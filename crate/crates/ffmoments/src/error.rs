use thiserror::Error;

/// Errors shared across the crate. Variants mirror the failure contracts of
/// the individual operations; anything not listed here is a programming error
/// and panics instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not an odd prime in [3, 2^20]")]
    InvalidFieldOrder(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("mixed polynomials from F_{0}[x] and F_{1}[x]")]
    MismatchedField(u32, u32),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial of degree {0} is not irreducible")]
    NotIrreducible(usize),
    #[error("enumeration budget exceeded: q^{exp} = {q}^{exp} > {budget}")]
    BudgetExceeded { q: u32, exp: usize, budget: u64 },
    #[error("not a valid discriminant: {0}")]
    InvalidDiscriminant(&'static str),
    #[error("sample count {count} exceeds ensemble size {size} (without replacement)")]
    SampleOverflow { count: u64, size: u64 },
    #[error("empty input")]
    EmptyInput,
    #[error("Newton identity division by {0} is not exact; upstream point counts are corrupt")]
    NewtonInexact(usize),
    #[error("root radius deviates from q^-1/2 by {0:.3e} (> 1e-6)")]
    RootRadius(f64),
    #[error("evaluation too close to a zeta_A pole at s = {0}")]
    PoleProximity(num_complex::Complex64),
    #[error("shift outside the convergence domain: {0}")]
    DomainViolation(&'static str),
    #[error("dual evaluations disagree: {generic} vs {closed} (tol {tol:.1e})")]
    DualMismatch { generic: f64, closed: f64, tol: f64 },
    #[error("contour residue has non-real coefficient: |imag| = {0:.3e}")]
    ResidualImag(f64),
    #[error("invalid contour specification: {0}")]
    InvalidContour(&'static str),
    #[error("quadrature did not converge: node doubling still changes the value by {0:.3e}")]
    QuadratureDiverged(f64),
    #[error("denominator L-value vanishes within 1e-12")]
    DenominatorZero,
    #[error("test function has no integrable scaled-variable form")]
    NonIntegrableTestFunction,
    #[error("char-sum and point-count L-polynomials disagree for D = {0}")]
    CrossCheckFailed(String),
    #[error("cache format error: {0}")]
    CacheFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
