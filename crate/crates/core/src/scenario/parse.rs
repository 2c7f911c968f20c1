//! Text format for scenario files, and its inverse.
//!
//! One directive per line; `#` starts a comment. Numbers are plain decimal
//! strings and are parsed exactly.
//!
//! ```text
//! scenario fig2-b
//! dim 1
//! size 48
//! cell 1
//! win 16 32
//! outcome 15
//! ```
//!
//! On a board, `size` takes a width and a height, `win` takes `x y w h`, and
//! `outcome`/`remark` take two coordinates.

use super::*;

/// Identifier given to scenarios whose file has no `scenario` directive.
pub const DEFAULT_ID: &str = "unnamed";

/// Errors from reading a scenario file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("`win` directives at lines {first} and {second} overlap")]
    OverlappingWins { first: usize, second: usize },
    #[error("missing `{directive}` directive")]
    Missing { directive: &'static str },
    #[error("line {line}: duplicate `{directive}` directive (already given at line {first})")]
    Duplicate {
        directive: &'static str,
        line: usize,
        first: usize,
    },
}

/// Errors from writing a scenario file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("{value} has no finite decimal expansion")]
    NonDecimal { value: String },
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn line_tokens(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let bytes = body.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        tokens.push(Token {
            column: start + 1,
            text: &body[start..i],
        });
    }
    tokens
}

/// Largest accepted magnitude and denominator, keeping all downstream
/// products inside i128.
const NUMBER_LIMIT: i128 = 1_000_000_000;

/// Parse a decimal string (`-12`, `0.25`, `16`) into an exact rational.
fn parse_number(text: &str) -> Result<Rational, String> {
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("expected a number, found `{text}`"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(format!("expected a decimal number, found `{text}`"));
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer * 10 + i128::from(b - b'0');
        if numer > NUMBER_LIMIT * NUMBER_LIMIT {
            return Err(format!("number `{text}` exceeds the supported precision"));
        }
    }
    let mut denom: i128 = 1;
    for _ in 0..frac_part.len() {
        denom *= 10;
        if denom > NUMBER_LIMIT {
            return Err(format!("number `{text}` has too many decimals"));
        }
    }
    if numer > NUMBER_LIMIT * denom {
        return Err(format!("number `{text}` exceeds the supported range"));
    }
    if negative {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

struct Directive {
    line: usize,
    keyword_column: usize,
    values: Vec<Rational>,
}

#[derive(Default)]
struct RawDoc {
    id: Option<(usize, String)>,
    dim: Option<(usize, Rational)>,
    size: Option<Directive>,
    cell: Option<Directive>,
    wins: Vec<Directive>,
    remarks: Vec<Directive>,
    outcome: Option<Directive>,
}

fn numbers(
    line: usize,
    tokens: &[Token<'_>],
    keyword: &str,
) -> Result<Vec<Rational>, ParseError> {
    if tokens.len() == 1 {
        return Err(ParseError::Syntax {
            line,
            column: tokens[0].column,
            message: format!("`{keyword}` needs at least one number"),
        });
    }
    tokens[1..]
        .iter()
        .map(|t| {
            parse_number(t.text).map_err(|message| ParseError::Syntax {
                line,
                column: t.column,
                message,
            })
        })
        .collect()
}

fn expect_unique<T>(
    slot: &Option<T>,
    directive: &'static str,
    line: usize,
    first_line: impl Fn(&T) -> usize,
) -> Result<(), ParseError> {
    if let Some(existing) = slot {
        return Err(ParseError::Duplicate {
            directive,
            line,
            first: first_line(existing),
        });
    }
    Ok(())
}

/// Parse a scenario file into a validated scenario and its outcome.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ParseError> {
    let mut doc = RawDoc::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = line_tokens(raw_line);
        let Some(head) = tokens.first() else { continue };
        match head.text {
            "scenario" => {
                expect_unique(&doc.id, "scenario", line, |(l, _)| *l)?;
                if tokens.len() != 2 {
                    return Err(ParseError::Syntax {
                        line,
                        column: head.column,
                        message: "`scenario` takes exactly one identifier".into(),
                    });
                }
                doc.id = Some((line, tokens[1].text.to_string()));
            }
            "dim" => {
                expect_unique(&doc.dim, "dim", line, |(l, _)| *l)?;
                let values = numbers(line, &tokens, "dim")?;
                if values.len() != 1 {
                    return Err(ParseError::Syntax {
                        line,
                        column: head.column,
                        message: "`dim` takes exactly one number".into(),
                    });
                }
                doc.dim = Some((line, values[0]));
            }
            "size" => {
                expect_unique(&doc.size, "size", line, |d| d.line)?;
                doc.size = Some(Directive {
                    line,
                    keyword_column: head.column,
                    values: numbers(line, &tokens, "size")?,
                });
            }
            "cell" => {
                expect_unique(&doc.cell, "cell", line, |d| d.line)?;
                doc.cell = Some(Directive {
                    line,
                    keyword_column: head.column,
                    values: numbers(line, &tokens, "cell")?,
                });
            }
            "win" => doc.wins.push(Directive {
                line,
                keyword_column: head.column,
                values: numbers(line, &tokens, "win")?,
            }),
            "remark" => doc.remarks.push(Directive {
                line,
                keyword_column: head.column,
                values: numbers(line, &tokens, "remark")?,
            }),
            "outcome" => {
                expect_unique(&doc.outcome, "outcome", line, |d| d.line)?;
                doc.outcome = Some(Directive {
                    line,
                    keyword_column: head.column,
                    values: numbers(line, &tokens, "outcome")?,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: head.column,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    assemble(doc)
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

fn assemble(doc: RawDoc) -> Result<ScenarioFile, ParseError> {
    let (dim_line, dim_value) = doc.dim.ok_or(ParseError::Missing { directive: "dim" })?;
    let dim = if dim_value == Rational::from_integer(1) {
        1u8
    } else if dim_value == Rational::from_integer(2) {
        2u8
    } else {
        return Err(semantic(dim_line, "`dim` must be 1 or 2"));
    };
    let size = doc.size.ok_or(ParseError::Missing { directive: "size" })?;
    let cell = doc.cell.ok_or(ParseError::Missing { directive: "cell" })?;
    let outcome = doc
        .outcome
        .ok_or(ParseError::Missing { directive: "outcome" })?;
    let id = doc
        .id
        .map(|(_, id)| id)
        .unwrap_or_else(|| DEFAULT_ID.to_string());

    if size.values.len() != usize::from(dim) {
        return Err(semantic(
            size.line,
            format!(
                "`size` takes {} number(s) in a {dim}-dimensional scenario",
                dim
            ),
        ));
    }
    if cell.values.len() != 1 {
        return Err(semantic(cell.line, "`cell` takes exactly one number"));
    }
    if cell.values[0] <= Rational::zero() {
        return Err(semantic(cell.line, "`cell` must be positive"));
    }
    for d in doc.remarks.iter().chain([&outcome]) {
        if d.values.len() != usize::from(dim) {
            return Err(semantic(
                d.line,
                format!("expected {dim} coordinate(s) in a {dim}-dimensional scenario"),
            ));
        }
    }
    let win_arity = if dim == 1 { 2 } else { 4 };
    for w in &doc.wins {
        if w.values.len() != win_arity {
            return Err(semantic(
                w.line,
                format!("`win` takes {win_arity} numbers in a {dim}-dimensional scenario"),
            ));
        }
        let _ = w.keyword_column;
    }

    let remarks: Vec<Position> = doc
        .remarks
        .iter()
        .map(|d| position_from(dim, &d.values))
        .collect();

    let scenario = if dim == 1 {
        let length = size.values[0];
        if length <= Rational::zero() {
            return Err(semantic(size.line, "`size` must be positive"));
        }
        let intervals: Vec<Interval> = doc
            .wins
            .iter()
            .map(|w| Interval {
                start: w.values[0],
                end: w.values[1],
            })
            .collect();
        for (w, iv) in doc.wins.iter().zip(&intervals) {
            if iv.length() <= Rational::zero() {
                return Err(semantic(w.line, "`win` interval has no extent"));
            }
            if iv.start < Rational::zero() || iv.end > length {
                return Err(semantic(w.line, "`win` interval lies outside the strip"));
            }
        }
        check_overlaps_1d(&doc.wins, &intervals)?;
        Scenario::strip(id, length, cell.values[0], intervals, remarks)
    } else {
        let (width, height) = (size.values[0], size.values[1]);
        if width <= Rational::zero() || height <= Rational::zero() {
            return Err(semantic(size.line, "`size` must be positive"));
        }
        let rects: Vec<Rect> = doc
            .wins
            .iter()
            .map(|w| Rect {
                x: w.values[0],
                y: w.values[1],
                w: w.values[2],
                h: w.values[3],
            })
            .collect();
        for (w, rc) in doc.wins.iter().zip(&rects) {
            if rc.w <= Rational::zero() || rc.h <= Rational::zero() {
                return Err(semantic(w.line, "`win` rectangle has no extent"));
            }
            if rc.x < Rational::zero()
                || rc.y < Rational::zero()
                || rc.x + rc.w > width
                || rc.y + rc.h > height
            {
                return Err(semantic(w.line, "`win` rectangle lies outside the board"));
            }
        }
        check_overlaps_2d(&doc.wins, &rects)?;
        Scenario::board(id, width, height, cell.values[0], rects, remarks)
    };

    let scenario = scenario.map_err(|e| match e {
        GeometryError::CellLargerThanDomain => semantic(cell.line, "cell size exceeds the domain"),
        GeometryError::RemarkOutOfDomain { index } => semantic(
            doc.remarks[index].line,
            "`remark` point lies outside the domain",
        ),
        other => semantic(dim_line, other.to_string()),
    })?;

    let position = position_from(dim, &outcome.values);
    let outcome = scenario
        .outcome_at(position)
        .map_err(|_| semantic(outcome.line, "`outcome` lies outside the domain"))?;
    Ok(ScenarioFile { scenario, outcome })
}

fn position_from(dim: u8, values: &[Rational]) -> Position {
    if dim == 1 {
        Position::One(values[0])
    } else {
        Position::Two(values[0], values[1])
    }
}

fn check_overlaps_1d(directives: &[Directive], intervals: &[Interval]) -> Result<(), ParseError> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| intervals[a].start.cmp(&intervals[b].start));
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if intervals[b].start < intervals[a].end {
            return Err(ParseError::OverlappingWins {
                first: directives[a].line.min(directives[b].line),
                second: directives[a].line.max(directives[b].line),
            });
        }
    }
    Ok(())
}

fn check_overlaps_2d(directives: &[Directive], rects: &[Rect]) -> Result<(), ParseError> {
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            let (a, b) = (&rects[i], &rects[j]);
            let ix = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
            let iy = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
            if ix > Rational::zero() && iy > Rational::zero() {
                return Err(ParseError::OverlappingWins {
                    first: directives[i].line,
                    second: directives[j].line,
                });
            }
        }
    }
    Ok(())
}

/// Render a rational as an exact decimal string, if it has one.
fn decimal_string(value: Rational) -> Result<String, SerializeError> {
    let mut denom = *value.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while denom % 2 == 0 {
        denom /= 2;
        twos += 1;
    }
    while denom % 5 == 0 {
        denom /= 5;
        fives += 1;
    }
    if denom != 1 {
        return Err(SerializeError::NonDecimal {
            value: value.to_string(),
        });
    }
    let digits = twos.max(fives);
    let scale = 10i128
        .checked_pow(digits)
        .ok_or_else(|| SerializeError::NonDecimal {
            value: value.to_string(),
        })?;
    let scaled = value
        .numer()
        .checked_mul(scale / value.denom())
        .ok_or_else(|| SerializeError::NonDecimal {
            value: value.to_string(),
        })?;
    if digits == 0 {
        return Ok(scaled.to_string());
    }
    let sign = if scaled < 0 { "-" } else { "" };
    let magnitude = scaled.unsigned_abs();
    let base = 10u128.pow(digits);
    let int_part = magnitude / base;
    let frac = format!("{:0width$}", magnitude % base, width = digits as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        Ok(format!("{sign}{int_part}"))
    } else {
        Ok(format!("{sign}{int_part}.{frac}"))
    }
}

fn push_position(out: &mut String, p: &Position) -> Result<(), SerializeError> {
    match p {
        Position::One(x) => {
            out.push_str(&decimal_string(*x)?);
        }
        Position::Two(x, y) => {
            out.push_str(&decimal_string(*x)?);
            out.push(' ');
            out.push_str(&decimal_string(*y)?);
        }
    }
    Ok(())
}

/// Render a scenario and outcome in the canonical file format. Parsing the
/// result reproduces the inputs structurally.
pub fn serialize_scenario(
    scenario: &Scenario,
    outcome: &Outcome,
) -> Result<String, SerializeError> {
    let mut out = String::new();
    out.push_str(&format!("scenario {}\n", scenario.id));
    out.push_str(&format!("dim {}\n", scenario.dim()));
    match &scenario.geometry {
        Geometry::Strip { length, wins } => {
            out.push_str(&format!("size {}\n", decimal_string(*length)?));
            out.push_str(&format!("cell {}\n", decimal_string(scenario.cell)?));
            for w in wins {
                out.push_str(&format!(
                    "win {} {}\n",
                    decimal_string(w.start)?,
                    decimal_string(w.end)?
                ));
            }
        }
        Geometry::Board {
            width,
            height,
            wins,
        } => {
            out.push_str(&format!(
                "size {} {}\n",
                decimal_string(*width)?,
                decimal_string(*height)?
            ));
            out.push_str(&format!("cell {}\n", decimal_string(scenario.cell)?));
            for r in wins {
                out.push_str(&format!(
                    "win {} {} {} {}\n",
                    decimal_string(r.x)?,
                    decimal_string(r.y)?,
                    decimal_string(r.w)?,
                    decimal_string(r.h)?
                ));
            }
        }
    }
    for r in &scenario.remarks {
        out.push_str("remark ");
        push_position(&mut out, r)?;
        out.push('\n');
    }
    out.push_str("outcome ");
    push_position(&mut out, &outcome.position)?;
    out.push('\n');
    Ok(out)
}
