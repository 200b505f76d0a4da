//! Pinning-node selection for synchronizability of complex networks.
//!
//! The synchronizability of a pinned network is indexed by `lambda1`, the
//! smallest eigenvalue of the grounded Laplacian (the Laplacian with the rows
//! and columns of pinned nodes removed). This crate builds graphs, computes
//! `lambda1` and its eigenvector, selects pins with four strategies, simulates
//! pinned Chen oscillators, and sweeps random pin failures.

// `!(x > 0.0)` is how NaN gets rejected; index loops mirror the matrix math
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod robustness;
pub mod spectral;
pub mod strategies;

pub use dynamics::{
    chen_rhs, measure_decay_rate, simulate, ChenParams, ChenVariant, DynamicsConfig, FailureMask, TrajectorySummary,
};
pub use error::{Error, Result};
pub use generators::{gen_ba, gen_er, gen_ws, GenSpec, Model};
pub use graph::{
    load_edge_list, load_edge_list_file, unpinned_components, write_edge_list, Graph, GroundedView, LoadReport, PinSet,
    UnpinnedComponent,
};
pub use robustness::{
    apply_failures, effective_lambda1, robustness_curve, robustness_from_trace, RobustnessCurve, RobustnessRow,
};
pub use spectral::{
    dense_spectrum_oracle, smallest_eigenpair, smallest_eigenpair_warm, DenseSpectrum, EigenMethod, SolverOptions,
    SpectralPair,
};
pub use strategies::{
    betweenness_centrality, exhaustive_oracle, perturbation_scores, select, select_betweenness, select_bfg,
    select_bfg_pruned, select_degree, select_pbo, Budget, ExhaustiveResult, PerturbationScore, SelectOptions,
    SelectionTrace, Step, StrategyKind,
};
