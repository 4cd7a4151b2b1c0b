//! Book chapters compiled as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/corpus.md")]
mod corpus {}
#[doc = include_str!("../../../book/src/citations.md")]
mod citations {}
#[doc = include_str!("../../../book/src/graph.md")]
mod graph {}
#[doc = include_str!("../../../book/src/metrics.md")]
mod metrics {}
#[doc = include_str!("../../../book/src/communities.md")]
mod communities {}
#[doc = include_str!("../../../book/src/reproducibility.md")]
mod reproducibility {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
