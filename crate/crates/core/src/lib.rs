//! Scoring engine for near-miss lottery scenarios.
//!
//! A dot lands somewhere on a uniform strip or board and misses the winning
//! region. How improbable does that loss *feel*? The engine answers with an
//! algorithmic take on probability: an outcome is unexpected to the extent
//! that it is cheap to describe but expensive to generate. Near-misses are
//! scored by imagining the cheapest "cheat" that would have moved the dot
//! onto a winning position (a direction plus a magnitude) and charging the
//! description of that counterfactual against the generation cost of the
//! draw.
//!
//! The crate is organised around the pipeline:
//!
//! - [`scenario`]: exact-rational geometry, the scenario file format, and the
//!   built-in presets;
//! - [`codec`]: positional codes and remarkable-point costs, the unit of
//!   account for all descriptions;
//! - [`complexity`]: the individual bit-cost terms;
//! - [`score`]: unexpectedness, subjective probability, and rankings;
//! - [`oracle`]: brute-force cross-checks (exhaustive enumeration, seeded
//!   Monte Carlo, counterfactual search);
//! - [`cli`]: the `nearmiss` command-line tool.

pub mod cli;
pub mod codec;
pub mod complexity;
pub mod oracle;
pub mod scenario;
pub mod score;

pub use complexity::{ComplexityReport, StructureCost};
pub use scenario::{
    parse_scenario, serialize_scenario, Counterfactual, Outcome, Position, Rational, Scenario,
    ScenarioFile,
};
pub use score::{
    nearmiss_unexpectedness, rank_scenarios, NearMissReport, Ranking, ScoreKind,
    UnexpectednessScores, BIT_TOLERANCE,
};
