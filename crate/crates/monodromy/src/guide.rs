//! The book under `book/` rendered as rustdoc, so that every code block in
//! the guide is compiled and run by `cargo test --doc`. One module per
//! chapter keeps doctest failures attributable to their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/parabolic-matrices.md")]
pub mod parabolic_matrices {}

#[doc = include_str!("../../../book/src/two-point.md")]
pub mod two_point {}

#[doc = include_str!("../../../book/src/markov.md")]
pub mod markov {}

#[doc = include_str!("../../../book/src/hurwitz.md")]
pub mod hurwitz {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
