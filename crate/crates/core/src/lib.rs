//! Virtually free groups presented as graphs of finite groups.
//!
//! * [`graph`] ingests the graph and plans the construction (amalgamations
//!   along a spanning tree, then HNN extensions), tracking the generating
//!   set and locality constant `k` of each step.
//! * [`normal_form`] multiplies exactly in the constructed group.
//! * [`oracle`] computes geodesic lengths by breadth-first search and checks
//!   local exclusion exhaustively up to a length bound.
//! * [`dehn`] synthesizes the length-reducing rewrite rules and solves the
//!   word problem with a bounded-window stack.

pub mod dehn;
pub mod error;
pub mod finite;
pub mod fixtures;
pub mod graph;
pub mod group;
pub mod normal_form;
pub mod oracle;
pub mod words;

pub use dehn::{DehnEngine, Guarantee, RewriteRule, RewriteSystem, WordProblemOutcome};
pub use error::{DehnError, EmbeddingViolation, GraphError, GroupError, NormalFormError, OracleError, WordError};
pub use finite::{FiniteGroup, GroupSpec, SubgroupEmbedding};
pub use graph::{ConstructionPlan, GraphOfGroups, GraphSpec};
pub use group::{GeneratingSet, Group};
pub use normal_form::{ConstructedGroup, GroupElement};
pub use oracle::{Ball, ExclusionSet, Oracle, Verification};
pub use words::{InvolutiveAlphabet, Letter, Word};
