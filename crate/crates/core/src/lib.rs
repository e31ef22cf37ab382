//! Community detection in quantum networks.
//!
//! A network is a Hermitian Hamiltonian `H`. Continuous-time quantum-walk
//! dynamics under `H` define a closeness between nodes (transport, fidelity
//! or purity based, in short-, finite- or infinite-time regimes), which is
//! fed to tie-aware agglomerative clustering; the dendrogram level of
//! maximal modularity is the detected community structure.
//!
//! ```
//! use qcomm::closeness::{Measure, Regime};
//! use qcomm::network_lab::{toy_hamiltonian, ToyConfig, ToyVariant};
//! use qcomm::pipeline::{detect, MeasureSpec};
//!
//! let h = toy_hamiltonian(&ToyConfig::new(ToyVariant::A, 0));
//! let found = detect(&h, &MeasureSpec::new(Measure::Transport, Regime::Infinite)).unwrap();
//! assert_eq!(found.partition.labels(), &[0, 0, 0, 1, 1, 1]);
//! ```

pub mod closeness;
pub mod dynamics;
pub mod error;
pub mod hermitian;
pub mod network_lab;
pub mod partitioning;
pub mod pipeline;
pub mod sweep;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
