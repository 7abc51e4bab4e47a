//! The chapters of the guide in `book/src`, included so that `cargo test`
//! runs every Rust snippet in them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/apparatus.md")]
pub mod apparatus {}

#[doc = include_str!("../../../book/src/commitment.md")]
pub mod commitment {}

#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}

#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
