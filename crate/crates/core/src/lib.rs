//! Node features for within-network classification.
//!
//! Builds weighted directed social networks from co-attendance data,
//! computes label-independent measures (betweenness, degree, clustering) and
//! label-dependent ones (neighbor-label shares, tie-strength shares and any
//! structural measure lifted onto label-induced subgraphs), exports them as
//! ARFF/CSV datasets and evaluates them with boosted decision stumps.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod label_features;
pub mod measures;
pub mod select;

pub use error::{Error, Result};
pub use graph::{
    Adjacency, AttrKind, AttrValue, DirectionMode, GraphBuilder, Label, LabeledGraph, NodeId,
};
