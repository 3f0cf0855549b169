use thiserror::Error;

/// Errors raised by the geometry, solver and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polygon needs at least 3 distinct non-collinear vertices, got {0}")]
    TooFewVertices(usize),

    #[error("vertex chain is not strictly convex at vertex {index}")]
    ReflexVertex { index: usize },

    #[error("vertex chain winds {turns} times around its interior")]
    SelfIntersecting { turns: f64 },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("point ({x}, {y}) lies outside the domain (slack {slack:e})")]
    OutOfDomain { x: f64, y: f64, slack: f64 },

    #[error("origin is not interior to the polygon (offset of facet {facet} is {offset:e})")]
    OriginNotInterior { facet: usize, offset: f64 },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape parts {0} and {1} overlap")]
    Overlapping(usize, usize),

    #[error("exponent q = {q} is outside the admissible range {range}")]
    ExponentOutOfRange { q: f64, range: String },

    #[error("grid has no interior nodes (h = {h:e})")]
    EmptyGrid { h: f64 },

    #[error("{what} did not converge after {iterations} iterations (last relative change {last_change:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        last_change: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
