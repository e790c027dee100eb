//! Multi-edge-type LDPC codes: ensemble ingestion, parity-check matrix
//! construction, syndrome computation, and syndrome-constrained decoding.

mod decode;
mod ensemble;
mod matrix;

pub use decode::{decode_bp, decode_lbp, DecodeResult, Schedule};
pub use ensemble::{load_ensemble, load_ensemble_path, MultiEdgeEnsemble, NodeClass};
pub use matrix::{construct_matrix, SparseParityMatrix};
