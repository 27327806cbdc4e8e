//! Harmonic structure over cyclic groups: the Fourier-side Gram detector,
//! the regular-representation test, automorphisms and circulantization.

mod automorphism;
mod block;
mod families;

pub use automorphism::{
    automorphism_residual, brute_force_automorphism_search, circulantize, verify_automorphism, AutomorphismWitness,
    Circulantized,
};
pub use block::{
    assemble_harmonic_frame, check_regular_representation, detect_harmonic_gram, harmonic_generators, BlockGram,
    HarmonicReport,
};
pub use families::{diagonal_block_antisymmetry, family_automorphism, Family, FamilyAutomorphism};
