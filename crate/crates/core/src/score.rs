//! Unexpectedness scores, subjective probability, and scenario rankings.
//!
//! Unexpectedness is the gap between what the draw machine had to spend to
//! produce an outcome and what it takes to describe it after the fact. A
//! losing outcome is scored three ways: against a typical losing position,
//! against a typical winning position, and against the cheapest counterfactual
//! winning position reachable with a single cheating move. The near-miss score
//! drives rankings by default; the two prior scores are reported alongside but
//! never blended in.

use crate::complexity::{
    cheat_cost, complexity_report, counterfactual_complexity, typical_losing_complexity,
    typical_winning_complexity, ComplexityError, ComplexityReport, StructureCost,
};
use crate::scenario::{candidate_order, Counterfactual, GeometryError, Outcome, Scenario};
use std::cmp::Ordering;
use thiserror::Error;

/// Two scores closer than this (in bits) count as tied. 2^-20 sits far below
/// any gap the formulas can produce at representable geometry sizes.
pub const BIT_TOLERANCE: f64 = 9.5367431640625e-7;

/// Errors from scoring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error("scenario `{id}`: {source}")]
    InScenario {
        id: String,
        #[source]
        source: Box<ScoreError>,
    },
    #[error("baseline intensity is undefined at zero distance")]
    UndefinedBaseline,
}

impl ScoreError {
    fn for_scenario(self, id: &str) -> Self {
        ScoreError::InScenario {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}

/// Unexpectedness of an event: generation complexity minus description
/// complexity. Negative when the event is harder to describe than to produce.
pub fn unexpectedness(c_w: f64, c_desc: f64) -> f64 {
    c_w - c_desc
}

/// Lower bound on the unexpectedness of two coinciding events, from the joint
/// description bound `C(s1 & s2) <= C(s1) + C(s2|s1)`.
pub fn coincidence_bound(c_w_1: f64, c_w_2: f64, c_1: f64, c_2_given_1: f64) -> f64 {
    c_w_1 + c_w_2 - c_1 - c_2_given_1
}

/// The utility-over-distance baseline: intensity = `delta_v / distance`.
pub fn teigen_intensity(delta_v: f64, distance: f64) -> Result<f64, ScoreError> {
    if distance <= 0.0 {
        return Err(ScoreError::UndefinedBaseline);
    }
    Ok(delta_v / distance)
}

/// The three unexpectedness readings of a losing outcome, with both
/// probability readings.
#[derive(Debug, Clone, PartialEq)]
pub struct UnexpectednessScores {
    /// Unexpectedness of a typical losing position (the prior odds of losing).
    pub u_prior_lose: f64,
    /// Unexpectedness of a typical winning position (the prior odds of
    /// winning).
    pub u_prior_win: f64,
    /// Near-miss unexpectedness through the cheapest counterfactual.
    pub u_nearmiss: f64,
    /// `min(1, 2^-u_nearmiss)`.
    pub p_subjective: f64,
    /// `2^-c_w`, the classical probability of a pre-designated site.
    pub p_ex_ante: f64,
    /// True when `u_nearmiss` was negative and the subjective probability was
    /// clamped to 1.
    pub clamped: bool,
}

/// Everything the engine knows about one scored near-miss.
#[derive(Debug, Clone, PartialEq)]
pub struct NearMissReport {
    pub id: String,
    pub scores: UnexpectednessScores,
    pub complexity: ComplexityReport,
    pub counterfactual: Counterfactual,
}

/// Total designation-plus-cheat cost of one candidate counterfactual, in bits.
pub fn counterfactual_cost(
    candidate: &Counterfactual,
    scenario: &Scenario,
    structure: StructureCost,
) -> Result<f64, ComplexityError> {
    Ok(counterfactual_complexity(candidate, scenario, structure)
        + cheat_cost(candidate, scenario)?)
}

/// The cost-minimizing counterfactual for a losing outcome.
///
/// All single-move candidates are scored by `C(s2) + cheat`; ties fall back to
/// the geometric order (smaller move, remarkable first, lower piece index).
pub fn best_counterfactual(
    scenario: &Scenario,
    outcome: &Outcome,
    structure: StructureCost,
) -> Result<Counterfactual, ScoreError> {
    let candidates = scenario.counterfactual_candidates(outcome)?;
    // a zero-distance candidate means the dot already touches the frontier
    if candidates
        .iter()
        .any(|c| c.delta == crate::scenario::Rational::from_integer(0))
    {
        return Err(ComplexityError::DegenerateCounterfactual.into());
    }
    let mut best: Option<(f64, &Counterfactual)> = None;
    for candidate in &candidates {
        let cost = counterfactual_cost(candidate, scenario, structure)?;
        best = match best {
            None => Some((cost, candidate)),
            Some((best_cost, best_candidate)) => {
                let better = cost < best_cost - BIT_TOLERANCE
                    || ((cost - best_cost).abs() <= BIT_TOLERANCE
                        && candidate_order(candidate, best_candidate) == Ordering::Less);
                if better {
                    Some((cost, candidate))
                } else {
                    Some((best_cost, best_candidate))
                }
            }
        };
    }
    Ok(best.expect("candidates are non-empty").1.clone())
}

/// Score a losing outcome: pick the cheapest counterfactual, decompose its
/// cost, and derive all unexpectedness and probability readings.
pub fn nearmiss_unexpectedness(
    scenario: &Scenario,
    outcome: &Outcome,
    structure: StructureCost,
) -> Result<NearMissReport, ScoreError> {
    let counterfactual = best_counterfactual(scenario, outcome, structure)?;
    let complexity = complexity_report(scenario, &counterfactual, structure)?;
    let u_nearmiss = unexpectedness(
        complexity.c_w,
        complexity.c_counterfactual + complexity.cheat_total,
    );
    let u_prior_lose = unexpectedness(
        complexity.c_w,
        typical_losing_complexity(scenario, structure)?,
    );
    let u_prior_win = unexpectedness(
        complexity.c_w,
        typical_winning_complexity(scenario, structure)?,
    );
    let clamped = u_nearmiss < 0.0;
    let scores = UnexpectednessScores {
        u_prior_lose,
        u_prior_win,
        u_nearmiss,
        p_subjective: if clamped { 1.0 } else { (-u_nearmiss).exp2() },
        p_ex_ante: (-complexity.c_w).exp2(),
        clamped,
    };
    Ok(NearMissReport {
        id: scenario.id.clone(),
        scores,
        complexity,
        counterfactual,
    })
}

/// Which quantity drives a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreKind {
    /// Near-miss unexpectedness.
    #[default]
    U2,
    /// Prior losing unexpectedness.
    U1s,
    /// Prior winning unexpectedness.
    U2s,
}

impl ScoreKind {
    pub fn of(self, report: &NearMissReport) -> f64 {
        match self {
            ScoreKind::U2 => report.scores.u_nearmiss,
            ScoreKind::U1s => report.scores.u_prior_lose,
            ScoreKind::U2s => report.scores.u_prior_win,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScoreKind::U2 => "U2",
            ScoreKind::U1s => "U1s",
            ScoreKind::U2s => "U2s",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub id: String,
    pub score: f64,
    /// Dense rank: 1, 2, 2, 3, ...
    pub rank: usize,
}

/// Scenarios ordered by a score, highest first, with tie groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub entries: Vec<RankEntry>,
    /// Identifiers sharing each rank, in rank order.
    pub tie_groups: Vec<Vec<String>>,
}

/// Rank scored scenarios by predicted emotional intensity: higher selected
/// score first, ties (within [`BIT_TOLERANCE`]) share a dense rank and are
/// listed by identifier.
pub fn rank_reports(reports: &[NearMissReport], kind: ScoreKind) -> Ranking {
    let mut scored: Vec<(String, f64)> = reports
        .iter()
        .map(|r| (r.id.clone(), kind.of(r)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut groups: Vec<Vec<(String, f64)>> = Vec::new();
    let mut anchor = f64::INFINITY;
    for (id, score) in scored {
        if (anchor - score).abs() > BIT_TOLERANCE {
            anchor = score;
            groups.push(Vec::new());
        }
        groups.last_mut().expect("group exists").push((id, score));
    }
    let mut entries = Vec::new();
    let mut tie_groups = Vec::with_capacity(groups.len());
    for (index, mut group) in groups.into_iter().enumerate() {
        group.sort_by(|a, b| a.0.cmp(&b.0));
        tie_groups.push(group.iter().map(|(id, _)| id.clone()).collect());
        for (id, score) in group {
            entries.push(RankEntry {
                id,
                score,
                rank: index + 1,
            });
        }
    }
    Ranking { entries, tie_groups }
}

/// Score each scenario/outcome pair and rank the results. Any failing pair
/// aborts the ranking with its scenario identifier attached.
pub fn rank_scenarios(
    cases: &[(Scenario, Outcome)],
    structure: StructureCost,
    kind: ScoreKind,
) -> Result<Ranking, ScoreError> {
    let reports = cases
        .iter()
        .map(|(scenario, outcome)| {
            nearmiss_unexpectedness(scenario, outcome, structure)
                .map_err(|e| e.for_scenario(&scenario.id))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rank_reports(&reports, kind))
}
