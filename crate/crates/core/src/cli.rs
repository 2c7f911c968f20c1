//! The `nearmiss` command-line tool: evaluate scenario files or presets, rank
//! sets of scenarios, check the built-in reference values, and run the
//! brute-force oracle checks.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when a reference or oracle
//! check fails.

use crate::codec;
use crate::complexity::StructureCost;
use crate::oracle::{
    exhaustive_counterfactual_check, mc_win_frequency, verify_prior_identity, CheckStatus,
};
use crate::scenario::{parse_scenario, preset, presets, Geometry, Position, ScenarioFile};
use crate::score::{nearmiss_unexpectedness, rank_reports, NearMissReport, ScoreKind};
use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use std::fmt::Write as _;
use std::path::Path;

/// Reference values must be matched within this many bits.
const REFERENCE_TOLERANCE: f64 = 0.05;

const CSV_HEADER: &str = "id,Cw,C_s2,dir_bits,move_bits,U2,U1s,U2s,p_subj,p_ex_ante,clamped";

#[derive(Parser)]
#[command(
    name = "nearmiss",
    version,
    about = "Score and rank near-miss lottery scenarios by description complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Extra bits charged when a region is fragmented.
    #[arg(long = "structure-cost", global = true, value_enum, default_value_t = StructureArg::Log2K)]
    structure_cost: StructureArg,
    /// Which score drives rankings.
    #[arg(long, global = true, value_enum, default_value_t = ScoreArg::U2)]
    score: ScoreArg,
}

#[derive(Subcommand)]
enum Command {
    /// Score one scenario file or preset.
    Eval {
        /// Preset name or path to a scenario file.
        input: String,
        /// Print the counterfactual decomposition and code words to stderr.
        #[arg(long)]
        debug: bool,
    },
    /// Score several scenarios and rank them.
    Rank {
        /// Preset names or paths, at least one.
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// List the built-in presets.
    Presets,
    /// Check every preset with a reference score against that value.
    Reproduce,
    /// Run the brute-force checks on one scenario.
    Oracle {
        /// Preset name or path to a scenario file.
        input: String,
        /// Monte Carlo draws.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Monte Carlo seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StructureArg {
    #[value(name = "log2k")]
    Log2K,
    None,
}

impl From<StructureArg> for StructureCost {
    fn from(value: StructureArg) -> Self {
        match value {
            StructureArg::Log2K => StructureCost::Log2K,
            StructureArg::None => StructureCost::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoreArg {
    U2,
    U1s,
    U2s,
}

impl From<ScoreArg> for ScoreKind {
    fn from(value: ScoreArg) -> Self {
        match value {
            ScoreArg::U2 => ScoreKind::U2,
            ScoreArg::U1s => ScoreKind::U1s,
            ScoreArg::U2s => ScoreKind::U2s,
        }
    }
}

/// Parse arguments from the process environment and run. Returns the exit
/// code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8, String> {
    let structure = StructureCost::from(cli.structure_cost);
    let kind = ScoreKind::from(cli.score);
    match &cli.command {
        Command::Eval { input, debug } => {
            let file = load_input(input)?;
            let report = nearmiss_unexpectedness(&file.scenario, &file.outcome, structure)
                .map_err(|e| e.to_string())?;
            if *debug {
                print_debug(&file, &report);
            }
            match cli.format {
                Format::Csv => {
                    println!("{CSV_HEADER}");
                    println!("{}", csv_row(&report));
                }
                Format::Table => print_report_table(&[report]),
            }
            Ok(0)
        }
        Command::Rank { inputs } => {
            let mut reports = Vec::with_capacity(inputs.len());
            for input in inputs {
                let file = load_input(input)?;
                reports.push(
                    nearmiss_unexpectedness(&file.scenario, &file.outcome, structure)
                        .map_err(|e| e.to_string())?,
                );
            }
            let ranking = rank_reports(&reports, kind);
            match cli.format {
                Format::Csv => {
                    println!("rank,{CSV_HEADER}");
                    for entry in &ranking.entries {
                        let report = reports
                            .iter()
                            .find(|r| r.id == entry.id)
                            .expect("ranked id exists");
                        println!("{},{}", entry.rank, csv_row(report));
                    }
                }
                Format::Table => {
                    println!("{:<5} {:<10} {:>9}", "rank", "id", kind.label());
                    for entry in &ranking.entries {
                        println!("{:<5} {:<10} {:>9.3}", entry.rank, entry.id, entry.score);
                    }
                }
            }
            Ok(0)
        }
        Command::Presets => {
            match cli.format {
                Format::Csv => {
                    println!("id,dim,provenance,reference_U2,summary");
                    for p in presets() {
                        let file = p.load();
                        println!(
                            "{},{},{},{},{}",
                            p.id,
                            file.scenario.dim(),
                            p.provenance.as_str(),
                            p.reference_u2
                                .map(|v| format!("{v:.1}"))
                                .unwrap_or_default(),
                            p.summary
                        );
                    }
                }
                Format::Table => {
                    let header = format!(
                        "{:<8} {:<4} {:<8} {:>6}  summary",
                        "id", "dim", "source", "refU2"
                    );
                    println!("{header}");
                    for p in presets() {
                        let file = p.load();
                        println!(
                            "{:<8} {:<4} {:<8} {:>6}  {}",
                            p.id,
                            file.scenario.dim(),
                            p.provenance.as_str(),
                            p.reference_u2
                                .map(|v| format!("{v:.1}"))
                                .unwrap_or_else(|| "-".into()),
                            p.summary
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Reproduce => reproduce(cli.format, structure),
        Command::Oracle {
            input,
            samples,
            seed,
        } => oracle_checks(cli.format, structure, input, *samples, *seed),
    }
}

/// Resolve an input as a preset name first, then as a file path.
fn load_input(input: &str) -> Result<ScenarioFile, String> {
    if let Some(p) = preset(input) {
        return Ok(p.load());
    }
    let path = Path::new(input);
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read `{input}`: {e}"))?;
    let mut file = parse_scenario(&text).map_err(|e| format!("{input}: {e}"))?;
    if file.scenario.id == crate::scenario::DEFAULT_ID {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            file.scenario.id = stem.to_string();
        }
    }
    Ok(file)
}

fn csv_row(report: &NearMissReport) -> String {
    format!(
        "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
        report.id,
        report.complexity.c_w,
        report.complexity.c_counterfactual,
        report.complexity.cheat_direction_bits,
        report.complexity.cheat_move_bits,
        report.scores.u_nearmiss,
        report.scores.u_prior_lose,
        report.scores.u_prior_win,
        report.scores.p_subjective,
        report.scores.p_ex_ante,
        report.scores.clamped
    )
}

fn print_report_table(reports: &[NearMissReport]) {
    println!(
        "{:<10} {:>7} {:>7} {:>5} {:>7} {:>7} {:>7} {:>7} {:>9} {:>10} {:>8}",
        "id", "Cw", "C_s2", "dir", "move", "U2", "U1s", "U2s", "p_subj", "p_ex_ante", "clamped"
    );
    for r in reports {
        println!(
            "{:<10} {:>7.3} {:>7.3} {:>5.1} {:>7.3} {:>7.3} {:>7.3} {:>7.3} {:>9.6} {:>10.6} {:>8}",
            r.id,
            r.complexity.c_w,
            r.complexity.c_counterfactual,
            r.complexity.cheat_direction_bits,
            r.complexity.cheat_move_bits,
            r.scores.u_nearmiss,
            r.scores.u_prior_lose,
            r.scores.u_prior_win,
            r.scores.p_subjective,
            r.scores.p_ex_ante,
            if r.scores.clamped { "yes" } else { "no" }
        );
    }
}

fn print_debug(file: &ScenarioFile, report: &NearMissReport) {
    let c = &report.counterfactual;
    eprintln!(
        "# counterfactual: s2 = {}, delta = {}, directions = {}, piece = {}, remarkable = {}",
        c.position, c.delta, c.direction_count, c.piece_index, c.is_remarkable
    );
    eprintln!(
        "# piece designation code: \"{}\" ({} of {} pieces)",
        codec::code_word(c.piece_index as u64),
        c.piece_index,
        file.scenario.pieces().len()
    );
    if let (Geometry::Strip { length, .. }, Position::One(x)) =
        (&file.scenario.geometry, &c.position)
    {
        let cells = (length / file.scenario.cell).to_f64().unwrap_or(0.0) as u64;
        let cell_index = ((x / file.scenario.cell).to_f64().unwrap_or(0.0) as u64).min(
            cells.saturating_sub(1),
        );
        if let (Ok(rank), Ok(word)) = (
            codec::remarkable_rank(cell_index, cells),
            codec::remarkable_code(cell_index, cells),
        ) {
            eprintln!(
                "# s2 cell {cell_index}/{cells}: ends-inward rank {}, code \"{word}\" ({} bits)",
                rank.rank, rank.bits
            );
        }
    }
}

fn reproduce(format: Format, structure: StructureCost) -> Result<u8, String> {
    let mut rows: Vec<(String, f64, f64, f64)> = Vec::new();
    for p in presets() {
        let Some(reference) = p.reference_u2 else { continue };
        let file = p.load();
        let report = nearmiss_unexpectedness(&file.scenario, &file.outcome, structure)
            .map_err(|e| format!("{}: {e}", p.id))?;
        let computed = report.scores.u_nearmiss;
        rows.push((
            p.id.to_string(),
            reference,
            computed,
            (computed - reference).abs(),
        ));
    }
    let mut failed = false;
    match format {
        Format::Csv => {
            println!("preset,reference,computed,delta,status");
            for (id, reference, computed, delta) in &rows {
                let ok = *delta <= REFERENCE_TOLERANCE;
                failed |= !ok;
                println!(
                    "{id},{reference:.3},{computed:.6},{delta:.6},{}",
                    if ok { "ok" } else { "FAIL" }
                );
            }
        }
        Format::Table => {
            println!(
                "{:<8} {:>9} {:>9} {:>7}  status",
                "preset", "reference", "computed", "|delta|"
            );
            for (id, reference, computed, delta) in &rows {
                let ok = *delta <= REFERENCE_TOLERANCE;
                failed |= !ok;
                println!(
                    "{id:<8} {reference:>9.3} {computed:>9.3} {delta:>7.3}  {}",
                    if ok { "ok" } else { "FAIL" }
                );
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}

fn identity_line(label: &str, check: &Option<crate::oracle::IdentityCheck>) -> (String, bool) {
    match check {
        None => (format!("{label:<24} skip     region has zero measure"), false),
        Some(c) => {
            let (status, failed) = match c.status {
                CheckStatus::Pass => ("pass", false),
                CheckStatus::ExpectedDiscrepancy => ("expected", false),
                CheckStatus::Fail => ("FAIL", true),
            };
            let mut detail = String::new();
            let _ = write!(
                detail,
                "U = {:.6} bits vs ratio {} (gap {:.6} bits",
                c.u_bits, c.extensional, c.discrepancy_bits
            );
            if c.structure_bits > 0.0 {
                let _ = write!(detail, ", fragmentation charges {:.3}", c.structure_bits);
            }
            detail.push(')');
            (format!("{label:<24} {status:<8} {detail}"), failed)
        }
    }
}

fn oracle_checks(
    format: Format,
    structure: StructureCost,
    input: &str,
    samples: u64,
    seed: u64,
) -> Result<u8, String> {
    let file = load_input(input)?;
    let mut lines: Vec<(String, bool)> = Vec::new();

    match verify_prior_identity(&file.scenario, structure) {
        Ok(report) => {
            lines.push(identity_line("prior-identity-lose", &report.lose));
            lines.push(identity_line("prior-identity-win", &report.win));
        }
        Err(e) => {
            lines.push((format!("{:<24} error    {e}", "prior-identity"), true));
        }
    }

    match exhaustive_counterfactual_check(&file.scenario, &file.outcome, structure) {
        Ok(check) => {
            let status = if check.pass { "pass" } else { "FAIL" };
            lines.push((
                format!(
                    "{:<24} {status:<8} engine cost {:.6} bits at {} vs brute minimum {:.6}",
                    "counterfactual-minimum",
                    check.engine_cost,
                    check.engine.position,
                    check.brute_min_cost
                ),
                !check.pass,
            ));
        }
        Err(e) => {
            lines.push((
                format!("{:<24} error    {e}", "counterfactual-minimum"),
                true,
            ));
        }
    }

    match crate::oracle::exhaustive_win_probability(&file.scenario, file.scenario.cell) {
        Ok(exact) => {
            let frequency = mc_win_frequency(&file.scenario, samples, seed);
            let p = exact.to_f64().unwrap_or(0.0);
            let sigma = (p * (1.0 - p) / samples as f64).sqrt();
            let bound = (5.0 * sigma).max(0.005);
            let ok = (frequency - p).abs() <= bound;
            lines.push((
                format!(
                    "{:<24} {:<8} frequency {frequency:.6} vs exact {exact} (n = {samples}, seed = {seed})",
                    "mc-frequency",
                    if ok { "pass" } else { "FAIL" }
                ),
                !ok,
            ));
        }
        Err(e) => {
            lines.push((format!("{:<24} error    {e}", "mc-frequency"), true));
        }
    }

    let failed = lines.iter().any(|(_, f)| *f);
    match format {
        Format::Csv => {
            println!("check,status,detail");
            for (line, _) in &lines {
                let name = line.split_whitespace().next().unwrap_or("");
                let rest: Vec<&str> = line.split_whitespace().skip(1).collect();
                let status = rest.first().copied().unwrap_or("");
                let detail = rest[1..].join(" ").replace(',', ";");
                println!("{name},{status},{detail}");
            }
        }
        Format::Table => {
            for (line, _) in &lines {
                println!("{line}");
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}
