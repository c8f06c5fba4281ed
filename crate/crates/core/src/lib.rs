//! Root data, their representation semirings, and the reconstruction of the
//! former from an opaque presentation of the latter.

pub mod char_engine;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod reconstruction;
pub mod root_datum;
pub mod weight;

pub use error::{Error, Result};
pub use root_datum::{RootDatum, RootDatumData};
pub use weight::{Coweight, Weight};
pub use char_engine::{CharEngine, FormalCharacter, SemiringElement};
pub use oracle::{materialize_oracle, validate_oracle, MaterializedOracle, OracleTable};
pub use reconstruction::{recover_datum, Params, ReconstructionReport};
