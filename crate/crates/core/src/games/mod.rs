pub mod agnostic;
pub mod game;
pub mod profile;

pub use agnostic::{build_gstar, embed_delta_t, gstar_point, gstar_transcript, reward_range, to_agnostic};
pub use game::{build_game, GameJson, GameSpec, Perspective, PolytopeGame};
pub use profile::{csp_of_transcript, fmt_f64, project_vertex_csp, Csp, RewardTranscript, Transcript, VertexCsp};
