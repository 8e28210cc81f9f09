use thiserror::Error;

use crate::graphs::Color;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("type (g={g}, n={n}) is not stable: need 2g-2+n > 0")]
    UnstableType { g: u32, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no leg carries color {0}")]
    ColorAbsent(Color),

    #[error("degree {d} is inadmissible for genus {g} with leg profile {colors:?}: gcd(d-g+1, 2g-2, n_1, ..., n_p) != 1")]
    InadmissibleDegree { g: u32, colors: Vec<usize>, d: i64 },

    #[error("residue {residue} is not a unit modulo {modulus}")]
    NotCoprime { residue: i64, modulus: i64 },

    #[error("multiplier {a} must be an odd prime larger than |Pic^0| = {order}")]
    BadMultiplier { a: i64, order: u64 },

    #[error("automorphism does not preserve the spanning subgraph")]
    NotPreserving,

    #[error("genus-{g} interior class with {n} markings needs a plugin table (JSON {{\"g\": int, \"n\": int, \"class\": {{partition: motive-class}}}})")]
    NeedsPluginTable { g: u32, n: usize },

    #[error("class still contains a local system V_k (k >= 1); integrate over M_1,1 first")]
    RelativeClass,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("plugin table: {0}")]
    Plugin(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
