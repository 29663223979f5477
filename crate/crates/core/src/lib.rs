//! Exact toolkit for pulling large complete multipartite subgraphs out of
//! dense clique sets, with independently checkable certificates.
//!
//! A set `M` of r-cliques of a graph covers a complete r-partite subgraph
//! when every edge of the subgraph lies inside a member and the subgraph
//! carries pairwise disjoint member cliques as witnesses. This crate builds
//! such covers — with `r − 1` balanced parts and one large last part — and
//! verifies them, alongside the exact clique-count inequalities the
//! parameter regime rests on.
//!
//! Everything verdict-bearing runs in exact rational arithmetic; the few
//! transcendental parameter formulas are rounded through certified interval
//! evaluation ([`certified`]).

pub mod biclique;
pub mod bits;
pub mod certificate;
pub mod certified;
pub mod cliques;
pub mod error;
pub mod extract;
pub mod graph;
pub mod prune;
pub mod rational;
pub mod verify;

pub use biclique::{
    biclique_oracle, double_count_check, emit_bipartite, find_s_subset, generalized_binomial,
    lemma1_params, parse_bipartite, BipartiteInstance, Lemma1Params, SearchMode, Witness,
};
pub use certificate::{emit_certificate, parse_certificate, CertMode, CoverCertificate};
pub use cliques::{
    chain_inequality_report, codegree, emit_clique_list, enumerate_r_cliques, parse_clique_list,
    sub_cliques, supersaturation_report, CliqueCounter, CliqueList,
};
pub use error::{Error, Result, Stage};
pub use extract::{
    base_case_r2, build_bipartite_from_cliques, extract, extract_with_target, theorem_params,
    ExtractionParams, LevelParams, TargetOptions,
};
pub use graph::{
    build_graph, emit_edge_list, gen_complete_multipartite, gen_gnp, overlay, parse_edge_list,
    Graph, SplitMix64, VertexSet,
};
pub use prune::{prune, prune_guarantee_check, GuaranteeReport, PruneResult};
pub use rational::{fmt_rat, parse_rat, Rat};
pub use verify::{verify_cover, VerifyReport};
