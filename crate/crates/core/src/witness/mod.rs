//! Bounded strictly subharmonic witnesses: the lattice sum and the Bergman-space patch.

mod bergman;
mod lattice;

pub use bergman::{
    bergman_samples, bergman_witness, BergmanCertificate, BergmanEval, BergmanWitness,
};
pub use lattice::{
    cell_samples, certify_witness, eval_witness, laplacian_cross_check, select_cell_compacts,
    tail_bound, CellCompact, CellWindow, WitnessCertificate, WitnessEval, WitnessField,
    DEFAULT_SAMPLES_PER_SIDE, DEFAULT_SHELLS, ZETA3, ZETA4,
};
