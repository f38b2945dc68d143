use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator {denominator} is divisible by p = {p}")]
    DenominatorDivisibleByP { denominator: String, p: u64 },

    #[error("{value} is not divisible by p = {p}")]
    NotDivisibleByP { value: u64, p: u64 },

    #[error("{0} is not an odd prime below 2^31")]
    InvalidPrime(u64),

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("matrix representation is incompatible with the bracket [{0}, {1}]")]
    RepIncompatible(usize, usize),

    #[error("invalid algebra specification: {0}")]
    InvalidSpec(String),

    #[error("p-th power of rep({0}) is not in the span of the representation")]
    RepNotClosed(usize),

    #[error("representation matrices become linearly dependent mod p")]
    RepDegenerateModP,

    #[error("p-map is determined only modulo a nontrivial center; supply it explicitly")]
    AmbiguousPMap,

    #[error("ad(x_{0})^p is not an inner derivation; the algebra is not restrictable")]
    NoPMap(usize),

    #[error("p-map image table does not satisfy ad(x^[p]) = ad(x)^p at index {0}")]
    InvalidPMap(usize),

    #[error("p-map of a general element needs a representation or a trivial center")]
    PMapNotExtendable,

    #[error("generator extraction is undetermined: {0}")]
    GenerationUndetermined(String),

    #[error("p-center generator {0} is not central")]
    NotCentral(usize),

    #[error("Harish-Chandra generator {0} is not central mod p")]
    NotCentralModP(usize),

    #[error("element is not central: [x_{0}, u] != 0")]
    ElementNotCentral(usize),

    #[error("degree window has {monomials} monomials, above the budget of {budget}")]
    WindowTooLarge { monomials: usize, budget: usize },

    #[error("weight is not a character: it does not vanish on [x_{0}, x_{1}]")]
    NotACharacter(usize, usize),

    #[error("Jacobi identity fails in m/m^2 at ({0}, {1}, {2}); window too small")]
    JacobiFailure(usize, usize, usize),

    #[error("presentation generators do not span m/m^2 in the window")]
    GeneratorsIncomplete,

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
