//! Time-frequency analysis on a periodic grid: STFT and Wigner transforms,
//! Gabor frames and duals, Weyl operators and their Gabor matrices, and decay
//! and sparsity diagnostics for those matrices.

pub mod cli;
pub mod decay;
pub mod error;
pub mod frames;
pub mod grid;
pub mod io;
pub mod tf;
pub mod weyl;
pub mod xprec;

pub use error::{Error, Result};
pub use grid::{Grid, PhasePoint, Signal};
