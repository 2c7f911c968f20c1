//! Built-in scenario presets.
//!
//! The presets cover the canonical near-miss configurations the engine is
//! calibrated against: a strip with one winning block and the dot one cell
//! short, the same block split in four, the dot pinned at a strip end, and
//! the board variants with an interior square, a split square, and a corner
//! square with a remarkable frontier point.

use super::parse::parse_scenario;
use super::ScenarioFile;

/// Whether a preset's geometry is fully pinned by its reference description
/// or reconstructed from qualitative constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Stated,
    Derived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Stated => "stated",
            Provenance::Derived => "derived",
        }
    }
}

/// A named built-in scenario.
#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub provenance: Provenance,
    /// Reference near-miss unexpectedness in bits, where one exists.
    pub reference_u2: Option<f64>,
    pub summary: &'static str,
    pub text: &'static str,
}

impl Preset {
    /// Parse the preset's scenario text.
    pub fn load(&self) -> ScenarioFile {
        parse_scenario(self.text).expect("preset text is valid")
    }
}

const PRESETS: [Preset; 7] = [
    Preset {
        id: "fig2-a",
        provenance: Provenance::Derived,
        reference_u2: None,
        summary: "strip 48, one winning block of 16, dot two cells short",
        text: "\
scenario fig2-a
dim 1
size 48
cell 1
win 16 32
outcome 14
",
    },
    Preset {
        id: "fig2-b",
        provenance: Provenance::Stated,
        reference_u2: Some(4.6),
        summary: "strip 48, one winning block of 16, dot one cell short",
        text: "\
scenario fig2-b
dim 1
size 48
cell 1
win 16 32
outcome 15
",
    },
    Preset {
        id: "fig2-c",
        provenance: Provenance::Derived,
        reference_u2: None,
        summary: "strip 48, winning length 16 split in four, dot one cell short",
        text: "\
scenario fig2-c
dim 1
size 48
cell 1
win 16 20
win 24 28
win 32 36
win 40 44
outcome 15
",
    },
    Preset {
        id: "fig2-d",
        provenance: Provenance::Derived,
        reference_u2: Some(5.6),
        summary: "strip 48, winning block beside the end, dot pinned at the end",
        text: "\
scenario fig2-d
dim 1
size 48
cell 1
win 1 17
outcome 0
",
    },
    Preset {
        id: "fig4-a",
        provenance: Provenance::Stated,
        reference_u2: Some(2.3),
        summary: "board 10x8, interior 4x4 winning square, dot 0.25 off its face",
        text: "\
scenario fig4-a
dim 2
size 10 8
cell 1
win 3 2 4 4
outcome 2.75 4
",
    },
    Preset {
        id: "fig4-c",
        provenance: Provenance::Derived,
        reference_u2: None,
        summary: "board 10x8, winning area 16 split into four 2x2 squares",
        text: "\
scenario fig4-c
dim 2
size 10 8
cell 1
win 2 1 2 2
win 6 1 2 2
win 2 5 2 2
win 6 5 2 2
outcome 1.75 2
",
    },
    Preset {
        id: "fig4-d",
        provenance: Provenance::Derived,
        reference_u2: Some(7.3),
        summary: "board 10x8, 2x2 corner square, dot 0.25 from a remarkable frontier point",
        text: "\
scenario fig4-d
dim 2
size 10 8
cell 1
win 0 0 2 2
remark 2 0
outcome 2.25 0
",
    },
];

/// All built-in presets, in display order.
pub fn presets() -> &'static [Preset] {
    &PRESETS
}

/// Look up a preset by its identifier.
pub fn preset(id: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id)
}
