//! Characters, Plancherel weights and the Fourier transform of finite
//! commutative hypergroups, plus the (P2) test and the positive-character
//! deformation for truncated families.

mod characters;
mod p2;
mod voit;

pub use characters::{
    characters, characters_seeded, fourier, inverse_fourier, multiplicativity_residual, plancherel,
    CharacterTable, DEFAULT_SEED,
};
pub use p2::{
    check_p2, jacobi_operator, section_top_eigenvalue, P2Options, P2Result, P2Status,
    SpectralBounds,
};
pub use voit::{chi0, recurrence_character, table_recurrence, voit_deform, Chi0, DeformedPair};
