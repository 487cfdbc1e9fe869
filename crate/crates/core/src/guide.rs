//! The book chapters, included here so their code samples run as doc-tests.
//!
//! mdBook cannot test snippets that depend on external crates, so we follow
//! the usual workaround: each chapter is attached as the documentation of an
//! empty module and `cargo test --doc` does the work.

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/multipliers.md")]
pub mod multipliers {}

#[doc = include_str!("../../../book/src/bands.md")]
pub mod bands {}

#[doc = include_str!("../../../book/src/grid.md")]
pub mod grid {}

#[doc = include_str!("../../../book/src/rates.md")]
pub mod rates {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
