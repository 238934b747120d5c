//! Density-matrix quantum information toolkit.
//!
//! A small library for the matrix calculus of quantum information:
//! conditional and mutual amplitude operators, entropy Venn diagrams for
//! multipartite states, separability diagnostics, a unitary (collapse-free)
//! measurement simulator, and a Holevo-bound laboratory.
//!
//! The central objects are [`DensityOperator`]s on a labeled
//! [`SubsystemLayout`]. Entropies are reported in bits. Negative
//! conditional entropy — impossible classically — is the signature of
//! entanglement here, and every diagnostic in the crate is built around
//! that observation.
//!
//! ```
//! use qvenn::{states, entropy};
//!
//! let epr = states::bell_state(states::BellState::PhiPlus).to_density();
//! let diagram = entropy::bipartite_diagram(&epr, (&["A"], &["B"])).unwrap();
//!
//! assert!((diagram.s_a_given_b - (-1.0)).abs() < 1e-9);
//! assert!((diagram.s_mutual - 2.0).abs() < 1e-9);
//! ```

pub mod entropy;
pub mod error;
pub mod kholevo;
pub mod linalg;
pub mod measurement;
pub mod separability;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{DensityOperator, HermitianOperator, Spectrum, SubsystemLayout, C64};

// the public API speaks in nalgebra matrices, so callers get the crate too
pub use nalgebra;

// Keep the book's code listings honest: every fenced Rust block in the
// guide runs under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(intro, "../../../book/src/intro.md");
    chapter!(states, "../../../book/src/states.md");
    chapter!(diagrams, "../../../book/src/diagrams.md");
    chapter!(amplitude_operators, "../../../book/src/amplitude-operators.md");
    chapter!(separability, "../../../book/src/separability.md");
    chapter!(measurement, "../../../book/src/measurement.md");
    chapter!(holevo, "../../../book/src/holevo.md");
    chapter!(cli, "../../../book/src/cli.md");
}
