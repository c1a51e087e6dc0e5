//! Fault-tolerance and reliability analysis of replicated and XOR-parity
//! stripe layouts.
//!
//! A [`Layout`] places one stripe's cells on disks. The [`decoder`] decides
//! which blocks survive a set of disk failures, [`ft_analysis`] enumerates
//! failure scenarios, [`reliability`] turns scenario verdicts into system
//! reliability, and [`search`] explores alternative placements.

pub mod bits;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod ft_analysis;
pub mod layout;
pub mod reliability;
pub mod search;

pub use bits::{AliveSet, BlockSet};
pub use decoder::{
    is_fully_recoverable, recoverable_blocks, recovery_plan, RecoveryPlan, RecoveryStep,
};
pub use error::{Error, Result};
pub use ft_analysis::{coverage, ft_degree, ft_table, CoverageReport, FtDegree, ScenarioRow};
pub use layout::{
    generate_named, generate_pp, generate_rp, parse_layout, serialize_layout, BlockId, Cell,
    Layout, ParsedLayout, Scheme,
};
pub use reliability::{
    exact_reliability, koon_reliability, monte_carlo_reliability, naive_parallel_series,
    reliability_curve, CurveMode, DiskModel, McEstimate, PathSet, ReliabilityCurve,
};
pub use search::{
    search_pp_offsets, search_replication_placements, search_rp_offsets, CandidateScore, Descriptor,
};
