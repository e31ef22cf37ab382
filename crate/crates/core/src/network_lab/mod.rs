//! Test networks, phase randomization, degeneracy-breaking perturbations and
//! file formats.

mod io;
mod perturb;
mod planted;
mod toy;

pub use io::{
    load_hamiltonian, load_partition, parse_hamiltonian, save_hamiltonian, write_closeness_csv, write_dendrogram,
    write_json, write_partition, DendrogramEntry, HamiltonianFile, PartitionRecord,
};
pub use perturb::{perturb, randomize_phases};
pub use planted::{planted_hamiltonian, PlantedNetwork, PlantedSpec};
pub use toy::{toy_hamiltonian, ToyConfig, ToyVariant};
