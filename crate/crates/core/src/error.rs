use thiserror::Error;

use crate::torus::TorusKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("characteristic {0} divides |W| = 2; only odd characteristic is supported")]
    EvenCharacteristic(u32),

    #[error("q = {q} exceeds the enumeration budget (q <= {max})")]
    BudgetExceeded { q: u32, max: u32 },

    #[error("zero has no norm in the multiplicative group")]
    ZeroNorm,

    #[error("determinant subgroup of order {order} does not exist in F_{q}^x")]
    NotADeterminantSubgroup { order: u32, q: u32 },

    #[error("element is not semisimple (order {order} divisible by p)")]
    NotSemisimple { order: u32 },

    #[error("element is not a member of {0}")]
    NotAMember(String),

    #[error("{sub} is not contained in {sup}")]
    NotContained { sub: String, sup: String },

    #[error("class functions live on different groups ({0} vs {1})")]
    OwnerMismatch(String, String),

    #[error("operation requires GL2, got {0}")]
    RequiresGl2(String),

    #[error("no Green-function table for {0}; only GL2 and SL2 are supported")]
    UnsupportedGroup(String),

    #[error("Green table for {group} failed validation: {reason}")]
    GreenValidation { group: String, reason: String },

    #[error("unexpected centralizer shape at class {class}: {reason}")]
    UnsupportedCentralizer { class: usize, reason: String },

    #[error("character index has the wrong shape for a {0} torus")]
    CharacterKindMismatch(TorusKind),

    #[error("character is not regular; R_(T,theta) is reducible")]
    NotRegular,

    #[error("class function is not irreducible: <chi, chi> = {0}")]
    NotIrreducible(f64),

    #[error("inner product {0} is not within tolerance of an integer")]
    NotNearInteger(f64),

    #[error("no element of the group normalizes the torus nontrivially")]
    MissingWeylElement,

    #[error("invalid cached class data: {0}")]
    InvalidClassData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
