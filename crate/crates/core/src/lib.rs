//! Simulation and benchmarking toolkit for non-Gaussian information
//! reconciliation in continuous-variable QKD.
//!
//! The pipeline: Gaussian raw data is converted to virtual-photon-subtracted
//! non-Gaussian data by acceptance-rejection postselection, sent through a
//! simulated AWGN channel, reconciled in reverse with multidimensional
//! mapping, and error-corrected with syndrome-based MET-LDPC decoding under
//! flooding or layered schedules. Campaign drivers report frame error rate,
//! average iteration count, reconciliation efficiency, and secret key rate.

pub mod channel;
pub mod error;
pub mod harness;
pub mod mdr;
pub mod metldpc;
pub mod postselect;
pub mod randsrc;
pub mod secanalysis;

pub use error::{Error, Result};
