//! Lottery geometry: uniform strips and boards, winning regions, outcomes,
//! and counterfactual moves.
//!
//! Coordinates are exact rationals, so containment and distance queries never
//! depend on a floating-point tolerance. Winning regions are half-open (a dot
//! exactly on the upper edge of an interval has lost), while counterfactual
//! targets live on region *closures*: moving a dot onto the frontier of a
//! winning region counts as winning it.
//!
//! A counterfactual move is a single axis-aligned displacement: one direction
//! out of the available ones plus a magnitude. A dot strictly inside a board
//! can be pushed in four directions; a dot on the board boundary is
//! constrained to the boundary and has two; a dot at the end of a strip has
//! one.

use num::rational::Ratio;
use num::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

mod parse;
mod preset;

pub use parse::{parse_scenario, serialize_scenario, ParseError, SerializeError, DEFAULT_ID};
pub use preset::{preset, presets, Preset, Provenance};

/// Exact coordinate type used throughout the geometry. The parser caps
/// magnitudes at 10^9 and denominators at 10^9, so every product the model
/// forms stays far inside the i128 range.
pub type Rational = Ratio<i128>;

/// Errors raised by scenario construction and geometric queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("domain size must be positive")]
    NonPositiveSize,
    #[error("cell size must be positive")]
    NonPositiveCell,
    #[error("cell size exceeds the domain")]
    CellLargerThanDomain,
    #[error("winning region {index} lies outside the domain")]
    RegionOutOfBounds { index: usize },
    #[error("winning region {index} has no extent")]
    EmptyRegion { index: usize },
    #[error("winning regions {first} and {second} overlap")]
    OverlappingRegions { first: usize, second: usize },
    #[error("remarkable point {index} lies outside the domain")]
    RemarkOutOfDomain { index: usize },
    #[error("position lies outside the domain")]
    PositionOutOfDomain,
    #[error("position dimension does not match the scenario")]
    DimensionMismatch,
    #[error("outcome is a win, not a near-miss")]
    NotANearMiss,
    #[error("no winning position is reachable from the outcome")]
    NoCounterfactual,
}

/// Half-open interval `[start, end)` on a strip, in cell units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub start: Rational,
    pub end: Rational,
}

impl Interval {
    pub fn length(&self) -> Rational {
        self.end - self.start
    }

    pub fn contains(&self, x: Rational) -> bool {
        self.start <= x && x < self.end
    }

    pub fn closure_contains(&self, x: Rational) -> bool {
        self.start <= x && x <= self.end
    }
}

/// Half-open axis-aligned rectangle `[x, x+w) x [y, y+h)` on a board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub x: Rational,
    pub y: Rational,
    pub w: Rational,
    pub h: Rational,
}

impl Rect {
    pub fn area(&self) -> Rational {
        self.w * self.h
    }

    pub fn contains(&self, x: Rational, y: Rational) -> bool {
        self.x <= x && x < self.x + self.w && self.y <= y && y < self.y + self.h
    }

    pub fn closure_contains(&self, x: Rational, y: Rational) -> bool {
        self.x <= x && x <= self.x + self.w && self.y <= y && y <= self.y + self.h
    }
}

/// The uniform draw space: a one-dimensional strip or a two-dimensional
/// board, with its winning regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geometry {
    Strip {
        length: Rational,
        wins: Vec<Interval>,
    },
    Board {
        width: Rational,
        height: Rational,
        wins: Vec<Rect>,
    },
}

/// A point in the draw space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Position {
    One(Rational),
    Two(Rational, Rational),
}

impl Position {
    /// Lexicographic order, used for deterministic tie-breaking. Positions of
    /// different dimensions never meet in practice; 1D sorts first.
    pub fn lex_cmp(&self, other: &Position) -> Ordering {
        match (self, other) {
            (Position::One(a), Position::One(b)) => a.cmp(b),
            (Position::Two(ax, ay), Position::Two(bx, by)) => ax.cmp(bx).then(ay.cmp(by)),
            (Position::One(_), Position::Two(..)) => Ordering::Less,
            (Position::Two(..), Position::One(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::One(x) => write!(f, "{x}"),
            Position::Two(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// An axis direction for a counterfactual move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
    Down,
    Up,
}

/// A validated lottery scenario: geometry, resolution and the registered
/// remarkable points (strip ends and board corners are always registered;
/// `remark` directives add more).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub id: String,
    /// Size of the minimal distinguishable landing site, in the same units
    /// as the geometry coordinates.
    pub cell: Rational,
    pub geometry: Geometry,
    /// User-registered remarkable points, validated to lie in the domain.
    pub remarks: Vec<Position>,
}

/// A landing position, tagged with whether it fell in a winning region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub position: Position,
    pub is_win: bool,
}

/// A designated winning position the outcome is compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterfactual {
    /// The designated point, on the closure of a winning piece.
    pub position: Position,
    /// Single-axis move distance from the outcome, in coordinate units.
    pub delta: Rational,
    /// Number of equally available move directions at the outcome (1, 2 or 4).
    pub direction_count: u8,
    /// Index of the winning piece whose closure contains the point.
    pub piece_index: usize,
    /// True when the point is in the registered remarkable set.
    pub is_remarkable: bool,
}

/// A connected winning piece, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// Length (strip) or area (board) in coordinate units.
    pub measure: Rational,
    /// Boundary length of the piece; zero on strips, where frontiers are
    /// points.
    pub perimeter: Rational,
    /// Smallest corner, used to order pieces.
    pub anchor: Position,
}

/// A scenario bundled with its outcome, as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub outcome: Outcome,
}

fn zero() -> Rational {
    Rational::zero()
}

impl Scenario {
    /// Build a validated strip scenario. Touching winning intervals are
    /// merged; overlapping ones are rejected.
    pub fn strip(
        id: impl Into<String>,
        length: Rational,
        cell: Rational,
        wins: Vec<Interval>,
        remarks: Vec<Position>,
    ) -> Result<Self, GeometryError> {
        if length <= zero() {
            return Err(GeometryError::NonPositiveSize);
        }
        if cell <= zero() {
            return Err(GeometryError::NonPositiveCell);
        }
        if cell > length {
            return Err(GeometryError::CellLargerThanDomain);
        }
        for (i, w) in wins.iter().enumerate() {
            if w.length() <= zero() {
                return Err(GeometryError::EmptyRegion { index: i });
            }
            if w.start < zero() || w.end > length {
                return Err(GeometryError::RegionOutOfBounds { index: i });
            }
        }
        let mut indexed: Vec<(usize, Interval)> = wins.into_iter().enumerate().collect();
        indexed.sort_by_key(|entry| entry.1.start);
        for pair in indexed.windows(2) {
            if pair[1].1.start < pair[0].1.end {
                return Err(GeometryError::OverlappingRegions {
                    first: pair[0].0,
                    second: pair[1].0,
                });
            }
        }
        // merge touching intervals into maximal pieces
        let mut merged: Vec<Interval> = Vec::new();
        for (_, w) in indexed {
            match merged.last_mut() {
                Some(last) if w.start == last.end => last.end = w.end,
                _ => merged.push(w),
            }
        }
        let scenario = Self {
            id: id.into(),
            cell,
            geometry: Geometry::Strip {
                length,
                wins: merged,
            },
            remarks: Vec::new(),
        };
        scenario.with_remarks(remarks)
    }

    /// Build a validated board scenario. Winning rectangles may touch along
    /// edges (they then form one piece) but may not overlap.
    pub fn board(
        id: impl Into<String>,
        width: Rational,
        height: Rational,
        cell: Rational,
        wins: Vec<Rect>,
        remarks: Vec<Position>,
    ) -> Result<Self, GeometryError> {
        if width <= zero() || height <= zero() {
            return Err(GeometryError::NonPositiveSize);
        }
        if cell <= zero() {
            return Err(GeometryError::NonPositiveCell);
        }
        if cell > width || cell > height {
            return Err(GeometryError::CellLargerThanDomain);
        }
        for (i, r) in wins.iter().enumerate() {
            if r.w <= zero() || r.h <= zero() {
                return Err(GeometryError::EmptyRegion { index: i });
            }
            if r.x < zero() || r.y < zero() || r.x + r.w > width || r.y + r.h > height {
                return Err(GeometryError::RegionOutOfBounds { index: i });
            }
        }
        for i in 0..wins.len() {
            for j in i + 1..wins.len() {
                let (a, b) = (&wins[i], &wins[j]);
                let ix = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
                let iy = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
                if ix > zero() && iy > zero() {
                    return Err(GeometryError::OverlappingRegions { first: i, second: j });
                }
            }
        }
        let scenario = Self {
            id: id.into(),
            cell,
            geometry: Geometry::Board {
                width,
                height,
                wins,
            },
            remarks: Vec::new(),
        };
        scenario.with_remarks(remarks)
    }

    fn with_remarks(mut self, remarks: Vec<Position>) -> Result<Self, GeometryError> {
        for (i, p) in remarks.iter().enumerate() {
            match self.check_in_domain(p) {
                Ok(()) => {}
                Err(_) => return Err(GeometryError::RemarkOutOfDomain { index: i }),
            }
        }
        self.remarks = remarks;
        Ok(self)
    }

    pub fn dim(&self) -> u8 {
        match self.geometry {
            Geometry::Strip { .. } => 1,
            Geometry::Board { .. } => 2,
        }
    }

    /// Total measure of the draw space: length of the strip or area of the
    /// board, in coordinate units.
    pub fn domain_measure(&self) -> Rational {
        match &self.geometry {
            Geometry::Strip { length, .. } => *length,
            Geometry::Board { width, height, .. } => width * height,
        }
    }

    /// Number of distinguishable landing sites, as an exact ratio.
    pub fn site_count(&self) -> Rational {
        match &self.geometry {
            Geometry::Strip { length, .. } => length / self.cell,
            Geometry::Board { width, height, .. } => (width * height) / (self.cell * self.cell),
        }
    }

    fn check_in_domain(&self, p: &Position) -> Result<(), GeometryError> {
        match (&self.geometry, p) {
            (Geometry::Strip { length, .. }, Position::One(x)) => {
                if *x < zero() || x > length {
                    Err(GeometryError::PositionOutOfDomain)
                } else {
                    Ok(())
                }
            }
            (Geometry::Board { width, height, .. }, Position::Two(x, y)) => {
                if *x < zero() || x > width || *y < zero() || y > height {
                    Err(GeometryError::PositionOutOfDomain)
                } else {
                    Ok(())
                }
            }
            _ => Err(GeometryError::DimensionMismatch),
        }
    }

    /// Whether a point falls in a winning region (half-open containment).
    pub fn is_win(&self, p: &Position) -> bool {
        match (&self.geometry, p) {
            (Geometry::Strip { wins, .. }, Position::One(x)) => {
                wins.iter().any(|w| w.contains(*x))
            }
            (Geometry::Board { wins, .. }, Position::Two(x, y)) => {
                wins.iter().any(|r| r.contains(*x, *y))
            }
            _ => false,
        }
    }

    /// Validate a landing position and tag it as winning or losing.
    pub fn outcome_at(&self, position: Position) -> Result<Outcome, GeometryError> {
        self.check_in_domain(&position)?;
        let is_win = self.is_win(&position);
        Ok(Outcome { position, is_win })
    }

    /// Total winning measure and the number of connected winning pieces.
    pub fn winning_measure(&self) -> (Rational, usize) {
        let (pieces, _) = self.components();
        let total = pieces
            .iter()
            .fold(zero(), |acc, p| acc + p.measure);
        (total, pieces.len())
    }

    /// Total losing measure and the number of losing fragments.
    ///
    /// On a strip, the stretches touching the two ends count as a single
    /// fragment (the "outside" of the winning zone); only gaps enclosed
    /// between winning pieces add fragments. On a board, fragments are the
    /// connected components of the complement.
    pub fn losing_measure(&self) -> (Rational, usize) {
        let (win, _) = self.winning_measure();
        let measure = self.domain_measure() - win;
        if measure == zero() {
            return (measure, 0);
        }
        let k = match &self.geometry {
            Geometry::Strip { length, wins } => {
                if wins.is_empty() {
                    1
                } else {
                    let interior_gaps = wins.len() - 1;
                    let flank =
                        wins[0].start > zero() || wins.last().expect("non-empty").end < *length;
                    interior_gaps + usize::from(flank)
                }
            }
            Geometry::Board { .. } => self.losing_components_2d(),
        };
        (measure, k)
    }

    fn losing_components_2d(&self) -> usize {
        let (width, height, wins) = match &self.geometry {
            Geometry::Board {
                width,
                height,
                wins,
            } => (*width, *height, wins),
            Geometry::Strip { .. } => unreachable!("2d query on a strip"),
        };
        let mut xs = vec![zero(), width];
        let mut ys = vec![zero(), height];
        for r in wins {
            xs.push(r.x);
            xs.push(r.x + r.w);
            ys.push(r.y);
            ys.push(r.y + r.h);
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let two = Rational::from_integer(2);
        let losing: Vec<bool> = (0..nx * ny)
            .map(|idx| {
                let (i, j) = (idx % nx, idx / nx);
                let cx = (xs[i] + xs[i + 1]) / two;
                let cy = (ys[j] + ys[j + 1]) / two;
                !wins.iter().any(|r| r.contains(cx, cy))
            })
            .collect();
        let mut seen = vec![false; nx * ny];
        let mut components = 0;
        for start in 0..nx * ny {
            if !losing[start] || seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(idx) = stack.pop() {
                let (i, j) = (idx % nx, idx / nx);
                let mut push = |n: usize| {
                    if losing[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                };
                if i > 0 {
                    push(idx - 1);
                }
                if i + 1 < nx {
                    push(idx + 1);
                }
                if j > 0 {
                    push(idx - nx);
                }
                if j + 1 < ny {
                    push(idx + nx);
                }
            }
        }
        components
    }

    /// Connected winning pieces in deterministic order, plus the map from raw
    /// region index to piece index.
    fn components(&self) -> (Vec<Piece>, Vec<usize>) {
        match &self.geometry {
            Geometry::Strip { wins, .. } => {
                let pieces = wins
                    .iter()
                    .map(|w| Piece {
                        measure: w.length(),
                        perimeter: zero(),
                        anchor: Position::One(w.start),
                    })
                    .collect();
                let map = (0..wins.len()).collect();
                (pieces, map)
            }
            Geometry::Board { wins, .. } => {
                let n = wins.len();
                let mut label: Vec<usize> = (0..n).collect();
                fn root(label: &mut [usize], mut i: usize) -> usize {
                    while label[i] != i {
                        label[i] = label[label[i]];
                        i = label[i];
                    }
                    i
                }
                let mut shared: Vec<Rational> = vec![zero(); n * n];
                for i in 0..n {
                    for j in i + 1..n {
                        let (a, b) = (&wins[i], &wins[j]);
                        let ix = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
                        let iy = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
                        // edge adjacency: positive contact along exactly one axis
                        let contact = if ix == zero() && iy > zero() {
                            iy
                        } else if iy == zero() && ix > zero() {
                            ix
                        } else {
                            zero()
                        };
                        if contact > zero() {
                            shared[i * n + j] = contact;
                            let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                            if ri != rj {
                                label[ri.max(rj)] = ri.min(rj);
                            }
                        }
                    }
                }
                let roots: Vec<usize> = (0..n).map(|i| root(&mut label, i)).collect();
                let mut groups: Vec<(Position, Vec<usize>)> = Vec::new();
                let mut group_of_root: Vec<Option<usize>> = vec![None; n];
                for i in 0..n {
                    let anchor = Position::Two(wins[i].x, wins[i].y);
                    match group_of_root[roots[i]] {
                        Some(g) => {
                            groups[g].1.push(i);
                            if anchor.lex_cmp(&groups[g].0) == Ordering::Less {
                                groups[g].0 = anchor;
                            }
                        }
                        None => {
                            group_of_root[roots[i]] = Some(groups.len());
                            groups.push((anchor, vec![i]));
                        }
                    }
                }
                groups.sort_by(|a, b| a.0.lex_cmp(&b.0));
                let mut map = vec![0usize; n];
                let mut pieces = Vec::with_capacity(groups.len());
                for (piece_idx, (anchor, members)) in groups.iter().enumerate() {
                    let mut measure = zero();
                    let mut perimeter = zero();
                    for &m in members {
                        measure += wins[m].area();
                        perimeter += (wins[m].w + wins[m].h) * Rational::from_integer(2);
                        map[m] = piece_idx;
                    }
                    for &a in members {
                        for &b in members {
                            if a < b {
                                perimeter -= shared[a * n + b] * Rational::from_integer(2);
                            }
                        }
                    }
                    pieces.push(Piece {
                        measure,
                        perimeter,
                        anchor: anchor.clone(),
                    });
                }
                (pieces, map)
            }
        }
    }

    /// Connected winning pieces in deterministic order.
    pub fn pieces(&self) -> Vec<Piece> {
        self.components().0
    }

    /// Index of the winning piece whose closure contains the point; the
    /// lowest index wins if the point sits on a shared frontier.
    pub fn piece_containing_closure(&self, p: &Position) -> Option<usize> {
        let (_, map) = self.components();
        match (&self.geometry, p) {
            (Geometry::Strip { wins, .. }, Position::One(x)) => wins
                .iter()
                .enumerate()
                .filter(|(_, w)| w.closure_contains(*x))
                .map(|(i, _)| map[i])
                .min(),
            (Geometry::Board { wins, .. }, Position::Two(x, y)) => wins
                .iter()
                .enumerate()
                .filter(|(_, r)| r.closure_contains(*x, *y))
                .map(|(i, _)| map[i])
                .min(),
            _ => None,
        }
    }

    /// The registered remarkable points: strip ends or board corners, plus
    /// any `remark` directives.
    pub fn registered_remarkables(&self) -> Vec<Position> {
        let mut out = match &self.geometry {
            Geometry::Strip { length, .. } => {
                vec![Position::One(zero()), Position::One(*length)]
            }
            Geometry::Board { width, height, .. } => vec![
                Position::Two(zero(), zero()),
                Position::Two(*width, zero()),
                Position::Two(zero(), *height),
                Position::Two(*width, *height),
            ],
        };
        for r in &self.remarks {
            if !out.contains(r) {
                out.push(r.clone());
            }
        }
        out
    }

    /// Whether a point belongs to the registered remarkable set.
    pub fn is_remarkable(&self, p: &Position) -> bool {
        self.registered_remarkables().contains(p)
    }

    /// Move directions available at a position.
    ///
    /// On a strip, a dot at an extremity can only move inward. On a board, a
    /// dot strictly inside can move along both axes; a dot on the boundary is
    /// constrained to slide along it.
    pub fn available_directions(&self, p: &Position) -> Vec<Direction> {
        match (&self.geometry, p) {
            (Geometry::Strip { length, .. }, Position::One(x)) => {
                let mut dirs = Vec::new();
                if *x > zero() {
                    dirs.push(Direction::Left);
                }
                if x < length {
                    dirs.push(Direction::Right);
                }
                dirs
            }
            (Geometry::Board { width, height, .. }, Position::Two(x, y)) => {
                let on_x_edge = *x == zero() || x == width;
                let on_y_edge = *y == zero() || y == height;
                if !on_x_edge && !on_y_edge {
                    return vec![
                        Direction::Left,
                        Direction::Right,
                        Direction::Down,
                        Direction::Up,
                    ];
                }
                let mut dirs = Vec::new();
                if on_y_edge && *x > zero() {
                    dirs.push(Direction::Left);
                }
                if on_y_edge && x < width {
                    dirs.push(Direction::Right);
                }
                if on_x_edge && *y > zero() {
                    dirs.push(Direction::Down);
                }
                if on_x_edge && y < height {
                    dirs.push(Direction::Up);
                }
                dirs
            }
            _ => Vec::new(),
        }
    }

    /// Number of equally available move directions at a position (1, 2 or 4).
    pub fn direction_count(&self, p: &Position) -> u8 {
        self.available_directions(p).len() as u8
    }

    /// All candidate counterfactuals reachable from a losing outcome with a
    /// single axis-aligned move: the nearest closure point of each winning
    /// piece along each available direction, plus every registered remarkable
    /// point that is a winning position on one of those rays.
    pub fn counterfactual_candidates(
        &self,
        outcome: &Outcome,
    ) -> Result<Vec<Counterfactual>, GeometryError> {
        if outcome.is_win {
            return Err(GeometryError::NotANearMiss);
        }
        let (_, piece_map) = self.components();
        if piece_map.is_empty() {
            return Err(GeometryError::NoCounterfactual);
        }
        let dirs = self.available_directions(&outcome.position);
        let direction_count = dirs.len() as u8;
        let mut found: Vec<Counterfactual> = Vec::new();
        let mut add = |position: Position, delta: Rational, piece_index: usize| {
            debug_assert!(delta >= zero());
            if let Some(existing) = found.iter_mut().find(|c| c.position == position) {
                if piece_index < existing.piece_index {
                    existing.piece_index = piece_index;
                }
                return;
            }
            let is_remarkable = self.is_remarkable(&position);
            found.push(Counterfactual {
                position,
                delta,
                direction_count,
                piece_index,
                is_remarkable,
            });
        };

        match (&self.geometry, &outcome.position) {
            (Geometry::Strip { wins, .. }, Position::One(px)) => {
                for (i, w) in wins.iter().enumerate() {
                    let piece = piece_map[i];
                    if w.closure_contains(*px) {
                        add(Position::One(*px), zero(), piece);
                    } else if *px < w.start && dirs.contains(&Direction::Right) {
                        add(Position::One(w.start), w.start - px, piece);
                    } else if *px > w.end && dirs.contains(&Direction::Left) {
                        add(Position::One(w.end), px - w.end, piece);
                    }
                }
                for q in self.registered_remarkables() {
                    let Position::One(qx) = q else { continue };
                    let Some(piece) = self.piece_containing_closure(&Position::One(qx)) else {
                        continue;
                    };
                    let reachable = qx == *px
                        || (qx > *px && dirs.contains(&Direction::Right))
                        || (qx < *px && dirs.contains(&Direction::Left));
                    if reachable {
                        add(Position::One(qx), (qx - px).abs(), piece);
                    }
                }
            }
            (Geometry::Board { wins, .. }, Position::Two(px, py)) => {
                for (i, r) in wins.iter().enumerate() {
                    let piece = piece_map[i];
                    if r.closure_contains(*px, *py) {
                        add(Position::Two(*px, *py), zero(), piece);
                        continue;
                    }
                    // horizontal moves keep y; the ray must cross the closure
                    if r.y <= *py && *py <= r.y + r.h {
                        if *px < r.x && dirs.contains(&Direction::Right) {
                            add(Position::Two(r.x, *py), r.x - px, piece);
                        }
                        if *px > r.x + r.w && dirs.contains(&Direction::Left) {
                            add(Position::Two(r.x + r.w, *py), px - (r.x + r.w), piece);
                        }
                    }
                    if r.x <= *px && *px <= r.x + r.w {
                        if *py < r.y && dirs.contains(&Direction::Up) {
                            add(Position::Two(*px, r.y), r.y - py, piece);
                        }
                        if *py > r.y + r.h && dirs.contains(&Direction::Down) {
                            add(Position::Two(*px, r.y + r.h), py - (r.y + r.h), piece);
                        }
                    }
                }
                for q in self.registered_remarkables() {
                    let Position::Two(qx, qy) = q else { continue };
                    let Some(piece) =
                        self.piece_containing_closure(&Position::Two(qx, qy))
                    else {
                        continue;
                    };
                    let on_ray = if qx == *px && qy == *py {
                        true
                    } else if qy == *py {
                        (qx > *px && dirs.contains(&Direction::Right))
                            || (qx < *px && dirs.contains(&Direction::Left))
                    } else if qx == *px {
                        (qy > *py && dirs.contains(&Direction::Up))
                            || (qy < *py && dirs.contains(&Direction::Down))
                    } else {
                        false
                    };
                    if on_ray {
                        let delta = (qx - px).abs() + (qy - py).abs();
                        add(Position::Two(qx, qy), delta, piece);
                    }
                }
            }
            _ => return Err(GeometryError::DimensionMismatch),
        }

        if found.is_empty() {
            return Err(GeometryError::NoCounterfactual);
        }
        found.sort_by(candidate_order);
        Ok(found)
    }

    /// The geometrically nearest winning position: minimal move distance,
    /// ties broken in favour of remarkable points, then lower piece index,
    /// then lexicographically smaller coordinates.
    pub fn nearest_win(&self, outcome: &Outcome) -> Result<Counterfactual, GeometryError> {
        let candidates = self.counterfactual_candidates(outcome)?;
        Ok(candidates.into_iter().next().expect("non-empty"))
    }
}

/// Deterministic candidate order: by move distance, remarkable first, then
/// piece index, then coordinates.
pub fn candidate_order(a: &Counterfactual, b: &Counterfactual) -> Ordering {
    a.delta
        .cmp(&b.delta)
        .then_with(|| b.is_remarkable.cmp(&a.is_remarkable))
        .then_with(|| a.piece_index.cmp(&b.piece_index))
        .then_with(|| a.position.lex_cmp(&b.position))
}
