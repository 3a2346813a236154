//! Compiles and runs the code listings of the guide in `book/src` as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/reads.md")]
pub mod reads {}

#[doc = include_str!("../../../book/src/graph.md")]
pub mod graph {}

#[doc = include_str!("../../../book/src/coloring.md")]
pub mod coloring {}

#[doc = include_str!("../../../book/src/colors.md")]
pub mod colors {}

#[doc = include_str!("../../../book/src/reconstruction.md")]
pub mod reconstruction {}

#[doc = include_str!("../../../book/src/contigs.md")]
pub mod contigs {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
