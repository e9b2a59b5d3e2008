#![doc = include_str!("../../../book/src/introduction.md")]

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod laurent;
pub mod series;
pub mod skein;

/// Chapters of the guide in `book/`, compiled here so their examples run
/// as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    pub mod algebras {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    pub mod diagrams {}
    #[doc = include_str!("../../../book/src/skein.md")]
    pub mod skein {}
    #[doc = include_str!("../../../book/src/moves.md")]
    pub mod moves {}
    #[doc = include_str!("../../../book/src/series.md")]
    pub mod series {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    pub mod catalog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
