//! Exact second-order normal forms of polynomial perturbations of resonant
//! harmonic oscillators.
//!
//! For `H_ε = H0 + ε H1 + (ε²/2) H2` with `H0` a resonant oscillator, the
//! normal form is assembled directly from two averaging operators of the
//! oscillator's circle action and the Poisson bracket:
//!
//! ```text
//! H_ε ∘ Φ_ε = H0 + ε⟨H1⟩ + (ε²/2)(⟨H2⟩ + ⟨{S(H1/ω), H1}⟩) + O(ε³)
//! ```
//!
//! Everything symbolic is exact (`BigRational` coefficients). The
//! [`dynamics`] module is the only floating-point code.

pub mod averaging;
pub mod complex;
pub mod dynamics;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod normalform;
pub mod parse;
pub mod poisson;
pub mod poly;
pub mod scalar;

pub use averaging::{average, lie_upsilon, quadrature_oracle, s_op, FrequencyData, OracleKind};
pub use error::{NfError, Result};
pub use normalform::{
    lie_transform_residual, normal_form_condition, second_order_nf, EpsSeries, NormalFormResult,
    PerturbedHamiltonian,
};
pub use poisson::{bracket, ham_apply};
pub use poly::{Monomial, Poly};
pub use scalar::{GaussRational, Rational};
