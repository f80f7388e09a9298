//! The narrative guide, mirrored from `book/src` so that every code block
//! in the book compiles and runs under `cargo test --doc`. Render the
//! browsable version with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rationals-and-valuations.md")]
pub mod rationals_and_valuations {}

#[doc = include_str!("../../../book/src/continued-fractions.md")]
pub mod continued_fractions {}

#[doc = include_str!("../../../book/src/convergence.md")]
pub mod convergence {}

#[doc = include_str!("../../../book/src/loci.md")]
pub mod loci {}

#[doc = include_str!("../../../book/src/pell.md")]
pub mod pell {}

#[doc = include_str!("../../../book/src/pure-radicals.md")]
pub mod pure_radicals {}

#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
