//! Atiyah–Bott fixed-point evaluation of the generating functions at low degree.

pub mod contribution;
pub mod oracle;
pub mod psi;
pub mod trees;

pub use contribution::{graph_contribution, ClassSpec, Contribution, Descendant, Insertion, InsertionSpec, SplitValue, TwistMode};
pub use oracle::{
    debug_dump, oracle_invariant, oracle_series, oracle_two_point, oracle_zp, sum_contributions, OracleGuard, OracleOutput,
    OracleTarget, TwoPointOracle,
};
pub use psi::{psi_by_string_equation, psi_integral};
pub use trees::{enumerate_trees, sample_trees, DecoratedTree, DegreeGuard, TreeEdge};
