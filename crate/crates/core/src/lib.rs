//! Product LDPC codes built from simple systematic components, with optional
//! column interleaving designed by a modified progressive-edge-growth search.
//!
//! The crate covers construction ([`product`]), interleaver design
//! ([`peg`]), sum-product decoding ([`decoder`]), exact and truncated weight
//! spectra with union bounds ([`analysis`]) and Monte Carlo BER/FER sweeps
//! ([`sim`]).

pub mod analysis;
pub mod cli;
pub mod code;
pub mod component;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod peg;
pub mod product;
pub mod sim;

pub use analysis::{exhaustive_spectrum, low_weight_search, union_bound, WeightSpectrum};
pub use code::{BlockCode, Uncoded};
pub use component::{build_mscmpc, build_spc, ComponentCode, ComponentSpec};
pub use decoder::{spa_decode, DecodeResult, SpaDecoder};
pub use error::{Error, Result};
pub use gf2::{BitVec, PermutationArray, SparseBinMatrix};
pub use peg::{design_circulant, design_generic, local_girth, GirthReport, PegVariant};
pub use product::{build_hp, build_hp_interleaved, ProductCode};
pub use sim::{run_sweep, SimConfig, SimResult};
