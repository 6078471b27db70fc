//! Symbol term-algebra and derivative machinery.

mod bloch;
mod derivatives;
mod symbol;

pub use bloch::{bloch_norm, invariant_gradient_profile, max_principle_probe, BlochEstimate, SHELL_RESOLUTION};
pub use derivatives::{gradient, invariant_gradient_norm, tangential_gradient_norm, GradientReport};
pub use symbol::multi_indices;
pub use symbol::{LogFactor, Symbol, Term};
