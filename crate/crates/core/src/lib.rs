//! Locally rigid binary relations on plane point sets.
//!
//! Geometry is generic over [`numeric::Coord`], with an exact backend in
//! ℚ(√3, √11) and a tolerance-carrying float backend. The guide in `book/`
//! walks through each module with runnable examples.

pub mod bq;
pub mod numeric;
pub mod phi;
pub mod plane;
pub mod product;
pub mod relations;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/coordinates.md")]
    mod coordinates {}
    #[doc = include_str!("../../../book/src/plane.md")]
    mod plane {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/orientations.md")]
    mod orientations {}
    #[doc = include_str!("../../../book/src/certification.md")]
    mod certification {}
    #[doc = include_str!("../../../book/src/products.md")]
    mod products {}
}
