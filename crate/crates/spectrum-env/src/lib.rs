//! Finite-MDP model of a radar sharing a congested spectrum with an
//! uncooperative communications system.
//!
//! The spectrum is split into N sub-bands. Each step the interferer
//! occupies some of them, the radar senses per-band power against a
//! threshold, and transmits an LFM chirp over one contiguous run of
//! sub-bands. States are M-deep occupancy histories, actions the
//! N(N+1)/2 contiguous masks, and rewards trade collision avoidance
//! against bandwidth and waveform stability.

pub mod action;
pub mod config;
pub mod env;
pub mod error;
pub mod occupancy;
pub mod reward;
pub mod sense;
pub mod source;
pub mod state;

pub use action::{
    action_count, count_collisions, enumerate_actions, missed_opportunities, RadarAction,
};
pub use config::EnvConfig;
pub use env::{Environment, Transition};
pub use error::EnvError;
pub use occupancy::{read_trace, read_trace_file, OccupancyVector};
pub use reward::{compute_reward, RewardBreakdown};
pub use sense::{sense, synth_powers_db};
pub use source::{advance_interference, InterferenceSource};
pub use state::{count_states, decode_state, encode_state, InterferenceState};
