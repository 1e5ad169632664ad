//! Doc-test harness for the guide. Each chapter of `book/src` becomes a
//! module so that `cargo test --doc` runs its snippets.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/bodies.md")]
pub mod bodies {}

#[doc = include_str!("../../../book/src/estimators.md")]
pub mod estimators {}

#[doc = include_str!("../../../book/src/shadow.md")]
pub mod shadow {}

#[doc = include_str!("../../../book/src/derived.md")]
pub mod derived {}

#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
