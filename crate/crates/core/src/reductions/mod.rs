//! Executable hardness reductions with exact auditing.
//!
//! [`dominating`] maps Dominating Set to Hyperplane Cover through a
//! Vandermonde table; [`rmis`] maps Regular Multicolored Independent Set to
//! Line Clustering with integer coordinates.

pub mod dominating;
pub mod graph;
pub mod rmis;

pub use dominating::{
    cover_to_dominating_set, dominating_set_to_cover_witness, ds_to_hyperplane_cover, DsOptions, VandermondeInstance,
};
pub use graph::ColoredGraph;
pub use rmis::{
    audit_counts, desanitize_multiset, exact_solution_cost, independent_set_to_lines, rmis_to_line_clustering,
    AxisLine, RmisConstants, RmisInstance, RmisMode, RmisParameters, ThetaTables,
};
