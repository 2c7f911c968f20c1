//! Bit-cost terms of the model: generation complexity of a draw, description
//! complexity of typical and counterfactual positions, and the cost of
//! "cheating" the draw into a winning position.
//!
//! Every quantity is a base-2 logarithm of an exact ratio of geometric
//! measures, so all outputs are invariant under uniform rescaling of the
//! geometry. Move bits may be negative when the move distance is below one
//! cell; they are carried through unclamped.

use crate::scenario::{Counterfactual, Geometry, Rational, Scenario};
use num::ToPrimitive;
use thiserror::Error;

/// Errors from bit-cost computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("scenario has no losing region")]
    NoLosingRegion,
    #[error("scenario has no winning region")]
    NoWinningRegion,
    #[error("counterfactual move distance is zero; the outcome already touches the winning region")]
    DegenerateCounterfactual,
}

/// Extra description bits charged when a region is fragmented into several
/// pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StructureCost {
    /// `log2(k)` bits for `k > 1` pieces: the cost of designating a piece.
    #[default]
    Log2K,
    /// No fragmentation penalty.
    None,
}

impl StructureCost {
    pub fn cost(self, pieces: usize) -> f64 {
        match self {
            StructureCost::Log2K if pieces > 1 => (pieces as f64).log2(),
            _ => 0.0,
        }
    }
}

/// log2 of an exact ratio.
fn bits(ratio: Rational) -> f64 {
    ratio.to_f64().expect("finite rational").log2()
}

/// Bits the draw machine needs to produce one landing site: `log2` of the
/// number of distinguishable sites.
pub fn generation_complexity(scenario: &Scenario) -> f64 {
    bits(scenario.site_count())
}

/// Description cost of a typical (maximally complex) losing position:
/// `log2` of the losing region size in cells, plus the fragmentation cost.
pub fn typical_losing_complexity(
    scenario: &Scenario,
    structure: StructureCost,
) -> Result<f64, ComplexityError> {
    let (measure, fragments) = scenario.losing_measure();
    if fragments == 0 {
        return Err(ComplexityError::NoLosingRegion);
    }
    let cells = match scenario.geometry {
        Geometry::Strip { .. } => measure / scenario.cell,
        Geometry::Board { .. } => measure / (scenario.cell * scenario.cell),
    };
    Ok(bits(cells) + structure.cost(fragments))
}

/// Description cost of a typical winning position: `log2` of the winning
/// region size in cells, plus the fragmentation cost.
pub fn typical_winning_complexity(
    scenario: &Scenario,
    structure: StructureCost,
) -> Result<f64, ComplexityError> {
    let (measure, pieces) = scenario.winning_measure();
    if pieces == 0 {
        return Err(ComplexityError::NoWinningRegion);
    }
    let cells = match scenario.geometry {
        Geometry::Strip { .. } => measure / scenario.cell,
        Geometry::Board { .. } => measure / (scenario.cell * scenario.cell),
    };
    Ok(bits(cells) + structure.cost(pieces))
}

/// Description cost of the designated counterfactual position.
///
/// A registered remarkable point costs nothing. Otherwise a strip
/// counterfactual sits on a piece frontier, which is itself remarkable, and
/// pays only the piece-designation cost; a board counterfactual is a point of
/// its piece's perimeter and pays `log2(perimeter / cell)` on top.
pub fn counterfactual_complexity(
    counterfactual: &Counterfactual,
    scenario: &Scenario,
    structure: StructureCost,
) -> f64 {
    if counterfactual.is_remarkable {
        return 0.0;
    }
    let (_, pieces) = scenario.winning_measure();
    let piece_cost = structure.cost(pieces);
    match scenario.geometry {
        Geometry::Strip { .. } => piece_cost,
        Geometry::Board { .. } => {
            let perimeter = scenario.pieces()[counterfactual.piece_index].perimeter;
            bits(perimeter / scenario.cell) + piece_cost
        }
    }
}

/// Bits spent choosing the move direction: `log2(direction_count)`.
pub fn direction_bits(counterfactual: &Counterfactual) -> f64 {
    f64::from(counterfactual.direction_count).log2()
}

/// Bits spent designating the move magnitude: `log2(delta / cell)`, negative
/// below one cell.
pub fn move_bits(
    counterfactual: &Counterfactual,
    scenario: &Scenario,
) -> Result<f64, ComplexityError> {
    if counterfactual.delta == Rational::from_integer(0) {
        return Err(ComplexityError::DegenerateCounterfactual);
    }
    Ok(bits(counterfactual.delta / scenario.cell))
}

/// Bits needed to tell the draw machine to move the dot onto the
/// counterfactual: direction bits plus magnitude bits.
pub fn cheat_cost(
    counterfactual: &Counterfactual,
    scenario: &Scenario,
) -> Result<f64, ComplexityError> {
    Ok(direction_bits(counterfactual) + move_bits(counterfactual, scenario)?)
}

/// The full bit-cost decomposition for a near-miss.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    /// Generation complexity of a landing site.
    pub c_w: f64,
    /// Description cost of a typical losing position.
    pub c_typical_lose: f64,
    /// Description cost of a typical winning position.
    pub c_typical_win: f64,
    /// Description cost of the designated counterfactual.
    pub c_counterfactual: f64,
    pub cheat_direction_bits: f64,
    pub cheat_move_bits: f64,
    /// `cheat_direction_bits + cheat_move_bits`.
    pub cheat_total: f64,
}

/// Assemble the full report for a chosen counterfactual.
pub fn complexity_report(
    scenario: &Scenario,
    counterfactual: &Counterfactual,
    structure: StructureCost,
) -> Result<ComplexityReport, ComplexityError> {
    let direction = direction_bits(counterfactual);
    let movement = move_bits(counterfactual, scenario)?;
    Ok(ComplexityReport {
        c_w: generation_complexity(scenario),
        c_typical_lose: typical_losing_complexity(scenario, structure)?,
        c_typical_win: typical_winning_complexity(scenario, structure)?,
        c_counterfactual: counterfactual_complexity(counterfactual, scenario, structure),
        cheat_direction_bits: direction,
        cheat_move_bits: movement,
        cheat_total: direction + movement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{preset, Interval, Position, Rect};
    use approx::assert_abs_diff_eq;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn load(id: &str) -> crate::scenario::ScenarioFile {
        preset(id).unwrap().load()
    }

    fn chosen(file: &crate::scenario::ScenarioFile) -> Counterfactual {
        file.scenario.nearest_win(&file.outcome).unwrap()
    }

    const EPS: f64 = 1e-12;

    #[test]
    fn generation_complexity_counts_sites() {
        let fig2b = load("fig2-b");
        assert_abs_diff_eq!(
            generation_complexity(&fig2b.scenario),
            48f64.log2(),
            epsilon = EPS
        );
        let single = crate::scenario::Scenario::strip("one", r(5), r(5), vec![], vec![]).unwrap();
        assert_abs_diff_eq!(generation_complexity(&single), 0.0, epsilon = EPS);
        let fig4a = load("fig4-a");
        assert_abs_diff_eq!(
            generation_complexity(&fig4a.scenario),
            80f64.log2(),
            epsilon = EPS
        );
    }

    #[test]
    fn typical_losing_positions() {
        let fig2b = load("fig2-b");
        assert_abs_diff_eq!(
            typical_losing_complexity(&fig2b.scenario, StructureCost::Log2K).unwrap(),
            5.0,
            epsilon = EPS
        );
        let all_losing =
            crate::scenario::Scenario::strip("all", r(48), r(1), vec![], vec![]).unwrap();
        assert_abs_diff_eq!(
            typical_losing_complexity(&all_losing, StructureCost::Log2K).unwrap(),
            48f64.log2(),
            epsilon = EPS
        );
        // two equal losing fragments of 16: 5 + 1 bits under the default
        let split = crate::scenario::Scenario::strip(
            "split",
            r(48),
            r(1),
            vec![
                Interval { start: r(8), end: r(16) },
                Interval { start: r(32), end: r(40) },
            ],
            vec![],
        )
        .unwrap();
        assert_abs_diff_eq!(
            typical_losing_complexity(&split, StructureCost::Log2K).unwrap(),
            6.0,
            epsilon = EPS
        );
        assert_abs_diff_eq!(
            typical_losing_complexity(&split, StructureCost::None).unwrap(),
            5.0,
            epsilon = EPS
        );
    }

    #[test]
    fn no_losing_region_is_an_error() {
        let full = crate::scenario::Scenario::strip(
            "full",
            r(8),
            r(1),
            vec![Interval { start: r(0), end: r(8) }],
            vec![],
        )
        .unwrap();
        assert_eq!(
            typical_losing_complexity(&full, StructureCost::Log2K),
            Err(ComplexityError::NoLosingRegion)
        );
    }

    #[test]
    fn typical_winning_positions() {
        let fig2b = load("fig2-b");
        assert_abs_diff_eq!(
            typical_winning_complexity(&fig2b.scenario, StructureCost::Log2K).unwrap(),
            4.0,
            epsilon = EPS
        );
        let fig4a = load("fig4-a");
        assert_abs_diff_eq!(
            typical_winning_complexity(&fig4a.scenario, StructureCost::Log2K).unwrap(),
            4.0,
            epsilon = EPS
        );
        let fig2c = load("fig2-c");
        assert_abs_diff_eq!(
            typical_winning_complexity(&fig2c.scenario, StructureCost::Log2K).unwrap(),
            6.0,
            epsilon = EPS
        );
        let empty = crate::scenario::Scenario::strip("none", r(8), r(1), vec![], vec![]).unwrap();
        assert_eq!(
            typical_winning_complexity(&empty, StructureCost::Log2K),
            Err(ComplexityError::NoWinningRegion)
        );
    }

    #[test]
    fn counterfactual_costs() {
        let fig2b = load("fig2-b");
        let c = chosen(&fig2b);
        assert_abs_diff_eq!(
            counterfactual_complexity(&c, &fig2b.scenario, StructureCost::Log2K),
            0.0,
            epsilon = EPS
        );
        let fig4a = load("fig4-a");
        let c = chosen(&fig4a);
        assert_abs_diff_eq!(
            counterfactual_complexity(&c, &fig4a.scenario, StructureCost::Log2K),
            4.0,
            epsilon = EPS
        );
        let fig2c = load("fig2-c");
        let c = chosen(&fig2c);
        assert_abs_diff_eq!(
            counterfactual_complexity(&c, &fig2c.scenario, StructureCost::Log2K),
            2.0,
            epsilon = EPS
        );
        let fig4d = load("fig4-d");
        let c = chosen(&fig4d);
        assert!(c.is_remarkable);
        assert_abs_diff_eq!(
            counterfactual_complexity(&c, &fig4d.scenario, StructureCost::Log2K),
            0.0,
            epsilon = EPS
        );
    }

    #[test]
    fn cheat_costs() {
        let fig2b = load("fig2-b");
        assert_abs_diff_eq!(
            cheat_cost(&chosen(&fig2b), &fig2b.scenario).unwrap(),
            1.0,
            epsilon = EPS
        );
        let fig2d = load("fig2-d");
        assert_abs_diff_eq!(
            cheat_cost(&chosen(&fig2d), &fig2d.scenario).unwrap(),
            0.0,
            epsilon = EPS
        );
        let fig4d = load("fig4-d");
        assert_abs_diff_eq!(
            cheat_cost(&chosen(&fig4d), &fig4d.scenario).unwrap(),
            -1.0,
            epsilon = EPS
        );
    }

    #[test]
    fn zero_delta_is_degenerate() {
        let fig2b = load("fig2-b");
        let o = fig2b.scenario.outcome_at(Position::One(r(32))).unwrap();
        let c = fig2b.scenario.nearest_win(&o).unwrap();
        assert_eq!(
            cheat_cost(&c, &fig2b.scenario),
            Err(ComplexityError::DegenerateCounterfactual)
        );
    }

    #[test]
    fn boundary_blocking_saves_exactly_one_bit() {
        // identical geometry up to translation; only the blocking differs
        let interior = crate::scenario::Scenario::strip(
            "interior",
            r(48),
            r(1),
            vec![Interval { start: r(16), end: r(32) }],
            vec![],
        )
        .unwrap();
        let o = interior.outcome_at(Position::One(r(15))).unwrap();
        let interior_cost = cheat_cost(&interior.nearest_win(&o).unwrap(), &interior).unwrap();
        let blocked = load("fig2-d");
        let blocked_cost = cheat_cost(&chosen(&blocked), &blocked.scenario).unwrap();
        assert_abs_diff_eq!(interior_cost - blocked_cost, 1.0, epsilon = EPS);
    }

    #[test]
    fn split_raises_counterfactual_cost_by_log2_k() {
        for k in [2usize, 4, 8] {
            let piece = 16 / k as i128;
            let wins: Vec<Interval> = (0..k as i128)
                .map(|i| Interval {
                    start: r(16 + 2 * i * piece),
                    end: r(16 + 2 * i * piece + piece),
                })
                .collect();
            let split = crate::scenario::Scenario::strip("split", r(64), r(1), wins, vec![])
                .unwrap();
            let o = split.outcome_at(Position::One(r(15))).unwrap();
            let c = split.nearest_win(&o).unwrap();
            assert_eq!(c.delta, r(1));
            let cost = counterfactual_complexity(&c, &split, StructureCost::Log2K);
            assert_abs_diff_eq!(cost, (k as f64).log2(), epsilon = EPS);
            let flat = counterfactual_complexity(&c, &split, StructureCost::None);
            assert_abs_diff_eq!(flat, 0.0, epsilon = EPS);
        }
    }

    #[test]
    fn scale_invariance() {
        let base = load("fig4-a");
        for factor in [r(2), r(7), Rational::new(1, 3)] {
            let scaled = crate::scenario::Scenario::board(
                "scaled",
                r(10) * factor,
                r(8) * factor,
                r(1) * factor,
                vec![Rect {
                    x: r(3) * factor,
                    y: r(2) * factor,
                    w: r(4) * factor,
                    h: r(4) * factor,
                }],
                vec![],
            )
            .unwrap();
            let o = scaled
                .outcome_at(Position::Two(Rational::new(11, 4) * factor, r(4) * factor))
                .unwrap();
            let c = scaled.nearest_win(&o).unwrap();
            let b = chosen(&base);
            assert_eq!(generation_complexity(&scaled), generation_complexity(&base.scenario));
            assert_eq!(
                counterfactual_complexity(&c, &scaled, StructureCost::Log2K),
                counterfactual_complexity(&b, &base.scenario, StructureCost::Log2K)
            );
            assert_eq!(
                cheat_cost(&c, &scaled).unwrap(),
                cheat_cost(&b, &base.scenario).unwrap()
            );
        }
    }

    #[test]
    fn report_is_additive() {
        let fig4d = load("fig4-d");
        let report =
            complexity_report(&fig4d.scenario, &chosen(&fig4d), StructureCost::Log2K).unwrap();
        assert_abs_diff_eq!(
            report.cheat_total,
            report.cheat_direction_bits + report.cheat_move_bits,
            epsilon = EPS
        );
        assert_abs_diff_eq!(report.cheat_direction_bits, 1.0, epsilon = EPS);
        assert_abs_diff_eq!(report.cheat_move_bits, -2.0, epsilon = EPS);
        assert!(report.c_w >= 0.0);
        assert!(report.c_counterfactual >= 0.0);
    }
}
