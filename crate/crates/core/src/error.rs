use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop requested at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("theta_e = 0 corresponds to infinite temperature and has no physical form")]
    InfiniteTemperature,

    #[error("temperature must be nonzero and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("sparse-phase size {n_s} out of range 0..={n}")]
    StratumOutOfRange { n_s: usize, n: usize },

    #[error("multiplicity table built for N = {table} but N = {requested} requested")]
    TableMismatch { table: usize, requested: usize },

    #[error("order parameter {m} does not lie on the grid k/{n}")]
    OffGrid { m: f64, n: usize },

    #[error("stratum n_s = {0} carries zero mass under the approximation")]
    ZeroMassStratum(usize),

    #[error("exhaustive enumeration over {dyads} dyads exceeds the limit of {limit}")]
    EnumerationTooLarge { dyads: usize, limit: usize },

    #[error("no phase coexistence found for temperatures in [{lo}, {hi}]")]
    NoTransition { lo: f64, hi: f64 },

    #[error("free-energy curve has no finite points")]
    AllInfinite,

    #[error(
        "trajectory acceptance {accepted}/{attempted} fell below floor {floor}; \
         raise the step cap or move closer to the stability flip"
    )]
    AcceptanceFloor {
        accepted: usize,
        attempted: usize,
        floor: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
