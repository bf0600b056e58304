//! Exact small-instance regret oracles. Every value is per round and clamped at zero.

pub mod basic;
pub mod linear;
pub mod menu;
pub mod report;
pub mod swap;

pub use basic::{best_response, external_regret, external_regret_rewards, instantaneous_regret, ExternalRegret};
pub use linear::{linear_swap_regret, linear_swap_regret_rewards, LinearSwapRegret};
pub use menu::{profile_swap_distance, stackelberg_value, MenuProjection, MenuProjector, Stackelberg};
pub use report::{batch_reports, regret_report, regret_report_limited, RegretReport};
pub use swap::{
    normal_form_swap_regret, polytope_swap_regret, polytope_swap_regret_rewards, profile_swap_regret,
    vertex_csp_of_rounds, Decomposition, DecompositionPart, NormalFormSwapRegret, PolytopeSwapRegret,
    ProfileSwapRegret,
};
