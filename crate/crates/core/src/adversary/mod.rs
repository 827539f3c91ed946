//! Attacks and distinguishers against the schemas and generators.

pub mod exhaust;
pub mod frequency;
pub mod guess_solve;
pub mod linear;
pub mod security_q;

pub use exhaust::{exhaust_seeds, ExhaustReport, Verdict};
pub use frequency::{frequency_distinguisher, FrequencyReport};
pub use guess_solve::{guess_and_solve, guess_and_solve_unknown_key, project_cost, GuessMask, GuessSolveReport, Projection};
pub use linear::{solve_mod10, LinearSystemMod10, SolutionSet};
pub use security_q::{
    estimate_security_q, ChallengeSource, Guesser, Lexicon, MapConstraintGuesser, Responder, SecurityQReport,
};
