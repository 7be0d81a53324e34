use thiserror::Error;

/// Which side of a product a distributivity failure was found on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

/// Errors raised by validators and constructions.
///
/// Every axiom failure names the elements that witness it, using the
/// element names of the structure being checked.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("carrier must not be empty")]
    EmptyCarrier,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not a partial order: `{a}` <= `{b}` and `{b}` <= `{a}`")]
    NotAPartialOrder { a: String, b: String },
    #[error("`{a}` and `{b}` have no least upper bound")]
    NoLeastUpperBound { a: String, b: String },
    #[error("no bottom element")]
    NoBottom,
    #[error("table has {found} entries, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("map does not preserve joins: f({a} v {b}) != f({a}) v f({b})")]
    NotJoinPreserving { a: String, b: String },
    #[error("map does not send bottom to bottom")]
    BottomNotPreserved,
    #[error("product not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("product not {side}-distributive at a={a}, b={b}, c={c}")]
    NotDistributive {
        side: Side,
        a: String,
        b: String,
        c: String,
    },
    #[error("bottom does not absorb `{a}`")]
    BottomNotAbsorbed { a: String },
    #[error("unit law fails at `{a}`")]
    UnitLaw { a: String },
    #[error("(M1) fails: ({a}*{b}) acting on {v}")]
    M1Violation { a: String, b: String, v: String },
    #[error("(M2) fails ({clause}): {witness}")]
    M2Violation { clause: &'static str, witness: String },
    #[error("(M3) fails: 1 * {v} != {v}")]
    M3Violation { v: String },
    #[error("map does not commute with the action: f({a} * {v}) != {a} * f({v})")]
    NotEquivariant { a: String, v: String },
    #[error("modules are over different quantales")]
    ScalarMismatch,
    #[error("quantale is not unital")]
    NotUnital,
    #[error("`{0}` is not a two-sided element")]
    NotTwoSided(String),
    #[error("subset is not closed: {0}")]
    ClosureViolation(String),
    #[error("law `{law}` violated: {witness}")]
    LawViolation { law: &'static str, witness: String },
    #[error("carrier of size {size} exceeds bound {bound}")]
    CarrierTooLarge { size: usize, bound: usize },
    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("the given elements do not generate the module")]
    NotGenerating,
    #[error("kernel is not square")]
    NotSquare,
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
