//! Profile and normal-form correlated equilibria.

pub mod nfce;
pub mod pce;
pub mod schedule;

pub use nfce::{
    extreme_nfce, lift_simplex_to_nfce, nfce_check, nfce_feasibility, nfce_lp, purify_mediator, NfceCheck, NfceMode,
    NfceResult, NfceStatus, NfceTarget,
};
pub use pce::{compute_profile_ce, self_play, verify_profile_ce, Distances, PceCheck, ProfileCe, MAX_DOUBLINGS};
pub use schedule::{schedule_from_decomposition, Schedule};
