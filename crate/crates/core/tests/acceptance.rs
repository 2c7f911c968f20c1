//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them).
//!
//! The criteria pin the reference scores, the split penalties, the ordering
//! claims, the oracle identities, the positional-code laws, exhaustive
//! counterfactual optimality on seeded random scenarios, and the scale/
//! distance invariants.

use nearmiss::complexity::StructureCost;
use nearmiss::oracle::{
    exhaustive_counterfactual_check, mc_win_frequency, random_discrete_case, verify_codec_laws,
    verify_prior_identity, CheckStatus,
};
use nearmiss::scenario::{preset, Geometry, Interval, Position, Rect, Scenario, ScenarioFile};
use nearmiss::score::{nearmiss_unexpectedness, rank_scenarios, NearMissReport, ScoreKind};
use nearmiss::{Rational, BIT_TOLERANCE};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

fn load(id: &str) -> ScenarioFile {
    preset(id).expect("preset exists").load()
}

fn score(file: &ScenarioFile) -> NearMissReport {
    nearmiss_unexpectedness(&file.scenario, &file.outcome, StructureCost::Log2K)
        .expect("valid near-miss")
}

fn u2(id: &str) -> f64 {
    score(&load(id)).scores.u_nearmiss
}

fn cases(ids: &[&str]) -> Vec<(Scenario, nearmiss::Outcome)> {
    ids.iter()
        .map(|id| {
            let file = load(id);
            (file.scenario, file.outcome)
        })
        .collect()
}

/// Uniformly rescale a scenario and its outcome by a positive factor.
fn scaled(file: &ScenarioFile, factor: Rational) -> ScenarioFile {
    let scale_pos = |p: &Position| match p {
        Position::One(x) => Position::One(x * factor),
        Position::Two(x, y) => Position::Two(x * factor, y * factor),
    };
    let remarks = file.scenario.remarks.iter().map(scale_pos).collect();
    let scenario = match &file.scenario.geometry {
        Geometry::Strip { length, wins } => Scenario::strip(
            file.scenario.id.clone(),
            length * factor,
            file.scenario.cell * factor,
            wins.iter()
                .map(|w| Interval {
                    start: w.start * factor,
                    end: w.end * factor,
                })
                .collect(),
            remarks,
        ),
        Geometry::Board {
            width,
            height,
            wins,
        } => Scenario::board(
            file.scenario.id.clone(),
            width * factor,
            height * factor,
            file.scenario.cell * factor,
            wins.iter()
                .map(|r| Rect {
                    x: r.x * factor,
                    y: r.y * factor,
                    w: r.w * factor,
                    h: r.h * factor,
                })
                .collect(),
            remarks,
        ),
    }
    .expect("scaled geometry is valid");
    let outcome = scenario
        .outcome_at(scale_pos(&file.outcome.position))
        .expect("scaled outcome is valid");
    ScenarioFile { scenario, outcome }
}

/// The fig2-b geometry with the dot pulled back to the given distance.
fn sweep_member(delta: i128) -> ScenarioFile {
    let base = load("fig2-b");
    let outcome = base
        .scenario
        .outcome_at(Position::One(Rational::from_integer(16 - delta)))
        .expect("in domain");
    ScenarioFile {
        scenario: Scenario {
            id: format!("fig2-b-delta{delta}"),
            ..base.scenario
        },
        outcome,
    }
}

#[test]
fn criterion_1_golden_values() {
    let start = Instant::now();
    let expected = [
        ("fig2-b", 4.6, 48f64.log2() - 1.0),
        ("fig2-d", 5.6, 48f64.log2()),
        ("fig4-a", 2.3, 80f64.log2() - 4.0),
        ("fig4-d", 7.3, 80f64.log2() + 1.0),
    ];
    for (id, reference, formula) in expected {
        let computed = u2(id);
        assert!(
            (computed - reference).abs() <= 0.05,
            "{id}: computed {computed} vs reference {reference}"
        );
        assert!(
            (computed - formula).abs() <= 1e-12,
            "{id}: computed {computed} vs formula {formula}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");

    let status = std::process::Command::new(env!("CARGO_BIN_EXE_nearmiss"))
        .arg("reproduce")
        .status()
        .expect("binary runs");
    assert!(status.success());
    println!("criterion 1 (golden values): PASS: 4.585/5.585/2.322/7.322 within 0.05 of the references, in {elapsed:?}");
}

#[test]
fn criterion_2_split_penalties() {
    let strip_gap = u2("fig2-b") - u2("fig2-c");
    assert!(
        (strip_gap - 2.0).abs() <= 0.001,
        "strip split penalty {strip_gap}"
    );
    let board_gap = u2("fig4-a") - u2("fig4-c");
    assert!(
        (board_gap - 1.0).abs() <= 0.001,
        "board split penalty {board_gap}"
    );
    println!("criterion 2 (split penalties): PASS: gaps {strip_gap:.3} and {board_gap:.3} bits");
}

#[test]
fn criterion_3_ordering_claims() {
    let ranking = rank_scenarios(
        &cases(&["fig2-b", "fig2-c", "fig2-d"]),
        StructureCost::Log2K,
        ScoreKind::U2,
    )
    .unwrap();
    let order: Vec<&str> = ranking.entries.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(order, ["fig2-d", "fig2-b", "fig2-c"]);

    let ranking = rank_scenarios(
        &cases(&["fig4-a", "fig4-c"]),
        StructureCost::Log2K,
        ScoreKind::U2,
    )
    .unwrap();
    assert_eq!(ranking.entries[0].id, "fig4-a");
    assert_eq!(ranking.entries[1].id, "fig4-c");

    // the distance sweep ranks strictly by proximity
    let sweep: Vec<(Scenario, nearmiss::Outcome)> = [1, 2, 4, 8]
        .into_iter()
        .map(|d| {
            let file = sweep_member(d);
            (file.scenario, file.outcome)
        })
        .collect();
    let ranking = rank_scenarios(&sweep, StructureCost::Log2K, ScoreKind::U2).unwrap();
    let order: Vec<&str> = ranking.entries.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(
        order,
        [
            "fig2-b-delta1",
            "fig2-b-delta2",
            "fig2-b-delta4",
            "fig2-b-delta8"
        ]
    );
    for pair in ranking.entries.windows(2) {
        assert!(pair[0].score > pair[1].score + BIT_TOLERANCE);
    }
    println!("criterion 3 (ordering claims): PASS: d > b > c, 4-a > 4-c, sweep strictly ordered by distance");
}

#[test]
fn criterion_4_oracle_identity() {
    let start = Instant::now();
    let fig2b = load("fig2-b");
    let report = verify_prior_identity(&fig2b.scenario, StructureCost::Log2K).unwrap();
    let lose = report.lose.expect("losing region exists");
    assert_eq!(lose.status, CheckStatus::Pass);
    // exact rational identity: 2^-U1s is the cell ratio 32/48
    assert_eq!(lose.extensional, Rational::new(32, 48));
    assert!(lose.discrepancy_bits.abs() <= BIT_TOLERANCE);

    let frequency = mc_win_frequency(&fig2b.scenario, 1_000_000, 42);
    let gap = (frequency - 1.0 / 3.0).abs();
    assert!(gap <= 0.005, "monte carlo off by {gap}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 4 (oracle identity): PASS: 2^-U1s = 32/48 exactly, MC gap {gap:.6}, in {elapsed:?}"
    );
}

#[test]
fn criterion_5_codec_laws() {
    let start = Instant::now();
    let report = verify_codec_laws(1 << 16);
    assert!(report.unique, "code words must be pairwise distinct");
    assert!(report.length_law, "length law violated");
    assert!(report.average_law, "average law violated");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 5 (codec laws): PASS: {} words enumerated, unique, floor(log2(i+1)) lengths, log2 N average, in {elapsed:?}",
        report.checked
    );
}

#[test]
fn criterion_6_counterfactual_optimality() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x6e65_6172_6d69_7373);
    for i in 0..200 {
        let case = random_discrete_case(&mut rng, i % 2 == 1);
        let check =
            exhaustive_counterfactual_check(&case.scenario, &case.outcome, StructureCost::Log2K)
                .unwrap_or_else(|e| panic!("case {i}: {e}"));
        assert!(
            check.pass,
            "case {i}: engine cost {} vs brute minimum {} ({:?})",
            check.engine_cost, check.brute_min_cost, check.engine
        );
        // on discrete geometry the move is at least one cell, so the chain
        // never scores above the generation complexity
        let report = score(&case);
        assert!(
            report.scores.u_nearmiss <= report.complexity.c_w + BIT_TOLERANCE,
            "case {i}: bound violated"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 6 (counterfactual optimality): PASS: 200 random discrete scenarios attain the brute-force minimum, in {elapsed:?}"
    );
}

#[test]
fn criterion_7_property_suite() {
    let all = ["fig2-a", "fig2-b", "fig2-c", "fig2-d", "fig4-a", "fig4-c", "fig4-d"];
    let factors = [
        Rational::from_integer(2),
        Rational::from_integer(7),
        Rational::new(1, 3),
    ];
    // scale invariance of every reported quantity
    for id in all {
        let base = load(id);
        let base_report = score(&base);
        for factor in factors {
            let report = score(&scaled(&base, factor));
            for (label, a, b) in [
                ("U2", base_report.scores.u_nearmiss, report.scores.u_nearmiss),
                ("U1s", base_report.scores.u_prior_lose, report.scores.u_prior_lose),
                ("U2s", base_report.scores.u_prior_win, report.scores.u_prior_win),
                ("Cw", base_report.complexity.c_w, report.complexity.c_w),
                (
                    "cheat",
                    base_report.complexity.cheat_total,
                    report.complexity.cheat_total,
                ),
            ] {
                assert!(
                    (a - b).abs() <= BIT_TOLERANCE,
                    "{id} x{factor}: {label} moved from {a} to {b}"
                );
            }
        }
    }
    // ranking is invariant under rescaling
    let base_ranking =
        rank_scenarios(&cases(&all), StructureCost::Log2K, ScoreKind::U2).unwrap();
    for factor in factors {
        let scaled_cases: Vec<(Scenario, nearmiss::Outcome)> = all
            .iter()
            .map(|id| {
                let file = scaled(&load(id), factor);
                (file.scenario, file.outcome)
            })
            .collect();
        let ranking = rank_scenarios(&scaled_cases, StructureCost::Log2K, ScoreKind::U2).unwrap();
        assert_eq!(ranking.tie_groups, base_ranking.tie_groups, "x{factor}");
        for (a, b) in ranking.entries.iter().zip(&base_ranking.entries) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.rank, b.rank);
        }
    }
    // doubling the distance costs exactly one bit
    let sweep: Vec<f64> = [1, 2, 4, 8]
        .into_iter()
        .map(|d| score(&sweep_member(d)).scores.u_nearmiss)
        .collect();
    for pair in sweep.windows(2) {
        assert!(
            (pair[0] - pair[1] - 1.0).abs() <= BIT_TOLERANCE,
            "slope {} per doubling",
            pair[0] - pair[1]
        );
    }
    println!("criterion 7 (property suite): PASS: scale invariance, ranking invariance, -1 bit per doubling");
}

#[test]
fn criterion_8_misprediction_reproduction() {
    // observed judgements put the split strip above the plain two-cells-short
    // strip; the model orders them the other way, and must keep doing so
    let ranking = rank_scenarios(
        &cases(&["fig2-a", "fig2-c"]),
        StructureCost::Log2K,
        ScoreKind::U2,
    )
    .unwrap();
    assert_eq!(ranking.entries[0].id, "fig2-a");
    assert!(ranking.entries[0].score > ranking.entries[1].score + BIT_TOLERANCE);
    println!(
        "criterion 8 (documented misprediction): PASS: fig2-a ranks above fig2-c ({:.3} > {:.3} bits)",
        ranking.entries[0].score, ranking.entries[1].score
    );
}
