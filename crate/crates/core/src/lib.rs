pub mod analysis;
pub mod error;
pub mod function;
pub mod geometry;
pub mod hankel;
pub mod numeric;
pub mod quadrature;
pub mod symbols;

pub use error::{Error, Result};
pub use function::BallFunction;

/// Guide chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub struct Geometry;
    #[doc = include_str!("../../../book/src/quadrature.md")]
    pub struct Quadrature;
    #[doc = include_str!("../../../book/src/projection.md")]
    pub struct Projection;
    #[doc = include_str!("../../../book/src/symbols.md")]
    pub struct Symbols;
    #[doc = include_str!("../../../book/src/hankel.md")]
    pub struct Hankel;
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub struct Experiments;
}
