//! Bundled reference arcs with their published invariants.

use serde::Serialize;

use crate::arcsearch::{addable_points, arc_graph, is_degenerate};
use crate::canon::canonical_labeling;
use crate::codes::{code_report, parse_arc_file, parse_enumerator, CodeReport};
use crate::geometry::Geometry;
use crate::report::Check;
use crate::ring::ring;

pub struct AppendixEntry {
    pub title: &'static str,
    pub text: &'static str,
    pub g: u64,
    pub d_hom: u64,
    /// `(length, dimension, minimum distance)` of the Gray image.
    pub gray: (usize, u32, u64),
    /// Stated linearity; `None` when the source is silent.
    pub gray_linear: Option<bool>,
    pub enumerator: Option<&'static str>,
    pub note: &'static str,
}

macro_rules! arc_file {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/appendix/", $name))
    };
}

pub const ENTRIES: [AppendixEntry; 13] = [
    AppendixEntry {
        title: "(7,2)-arc in PHG(2,Z4)",
        text: arc_file!("z4_k2_n7_u2.arc"),
        g: 168,
        d_hom: 6,
        gray: (14, 6, 6),
        gray_linear: None,
        enumerator: Some("1 + 42X^6 + 7X^8 + 14X^10"),
        note: "The best linear binary [14,6]-code has minimum distance 5.",
    },
    AppendixEntry {
        title: "(22,5)-arc in PHG(2,Z4)",
        text: arc_file!("z4_k2_n22_u5.arc"),
        g: 1536,
        d_hom: 20,
        gray: (44, 6, 20),
        gray_linear: None,
        enumerator: Some("1 + 6X^20 + 48X^22 + 6X^24 + 2X^28 + X^32"),
        note: "There is a linear binary [44,6,21]-code.",
    },
    AppendixEntry {
        title: "(22,5)-arc in PHG(2,S22)",
        text: arc_file!("s22_k2_n22_u5.arc"),
        g: 1536,
        d_hom: 20,
        gray: (44, 6, 20),
        gray_linear: Some(true),
        enumerator: None,
        note: "Linear binary code with the parameters of the Z4 case.",
    },
    AppendixEntry {
        title: "(8,3)-arc in PHG(3,Z4)",
        text: arc_file!("z4_k3_n8_u3.arc"),
        g: 1344,
        d_hom: 6,
        gray: (16, 8, 6),
        gray_linear: None,
        enumerator: Some("1 + 112X^6 + 30X^8 + 112X^10 + X^16"),
        note: "The best linear binary [16,8]-code has minimum distance 5.",
    },
    AppendixEntry {
        title: "(11,4)-arc in PHG(3,S22)",
        text: arc_file!("s22_k3_n11_u4.arc"),
        g: 24,
        d_hom: 8,
        gray: (22, 8, 8),
        gray_linear: Some(true),
        enumerator: Some("1 + 54X^8 + 76X^10 + 72X^12 + 48X^14 + X^16 + 4X^18"),
        note: "Optimal.",
    },
    AppendixEntry {
        title: "(10,2)-arc in PHG(2,Z8)",
        text: arc_file!("z8_k2_n10_u2.arc"),
        g: 8,
        d_hom: 6,
        gray: (40, 9, 12),
        gray_linear: None,
        enumerator: Some("1 + 4X^12 + 70X^16 + 128X^18 + 168X^20 + 32X^22 + 72X^24 + 32X^26 + 4X^28 + X^32"),
        note: "There is a linear binary [40,9,16]-code.",
    },
    AppendixEntry {
        title: "(21,3)-arc in PHG(2,Z8)",
        text: arc_file!("z8_k2_n21_u3.arc"),
        g: 168,
        d_hom: 18,
        gray: (84, 9, 36),
        gray_linear: None,
        enumerator: Some("1 + 14X^36 + 168X^38 + 196X^42 + 42X^44 + 7X^48 + 84X^50"),
        note: "There is a linear binary [84,9,38]-code.",
    },
    AppendixEntry {
        title: "(9,3)-arc in PHG(3,H8)",
        text: arc_file!("h8_k3_n9_u3.arc"),
        g: 12,
        d_hom: 5,
        gray: (36, 12, 10),
        gray_linear: None,
        enumerator: Some(
            "1 + 12X^10 + 166X^12 + 504X^14 + 873X^16 + 908X^18 + 1020X^20 + 468X^22 + 110X^24 + 24X^26 + 6X^28 + 4X^30",
        ),
        note: "There is a linear binary [36,12,12]-code.",
    },
    AppendixEntry {
        title: "(9,3)-arc in PHG(3,S23)",
        text: arc_file!("s23_k3_n9_u3.arc"),
        g: 12,
        d_hom: 5,
        gray: (36, 12, 10),
        gray_linear: Some(true),
        enumerator: None,
        note: "Linear binary code with the parameters of the H8 case.",
    },
    AppendixEntry {
        title: "(10,3)-arc in PHG(3,Z9)",
        text: arc_file!("z9_k3_n10_u3.arc"),
        g: 10,
        d_hom: 15,
        gray: (30, 8, 15),
        gray_linear: None,
        enumerator: Some("1 + 720X^15 + 1680X^18 + 3240X^21 + 900X^24 + 20X^27"),
        note: "There is no better linear ternary [30,8]-code.",
    },
    AppendixEntry {
        title: "(10,3)-arc in PHG(3,S32)",
        text: arc_file!("s32_k3_n10_u3.arc"),
        g: 10,
        d_hom: 15,
        gray: (30, 8, 15),
        gray_linear: Some(true),
        enumerator: None,
        note: "Optimal linear ternary code with the parameters of the Z9 case.",
    },
    AppendixEntry {
        title: "(21,2)-arc in PHG(2,G42)",
        text: arc_file!("g42_k2_n21_u2.arc"),
        g: 126,
        d_hom: 60,
        gray: (84, 6, 60),
        gray_linear: None,
        enumerator: Some("1 + 2520X^60 + 63X^64 + 1512X^68"),
        note: "The best known linear quaternary [84,6]-code has minimum distance 59.",
    },
    AppendixEntry {
        title: "(18,2)-arc in PHG(2,T4)",
        text: arc_file!("t4_k2_n18_u2.arc"),
        g: 96,
        d_hom: 48,
        gray: (72, 6, 48),
        gray_linear: Some(true),
        enumerator: Some(
            "1 + 12X^48 + 864X^50 + 960X^51 + 96X^52 + 576X^54 + 144X^56 + 864X^58 + 576X^59 + 3X^64",
        ),
        note: "There is a linear quaternary [72,6,50]-code.",
    },
];

#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub title: String,
    pub checks: Vec<Check>,
    pub code: Option<CodeReport>,
    pub note: String,
}

impl EntryOutcome {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

pub fn verify_entry(e: &AppendixEntry) -> EntryOutcome {
    let mut checks = vec![];
    let outcome = |checks, code| EntryOutcome { title: e.title.to_string(), checks, code, note: e.note.to_string() };
    let file = match parse_arc_file(e.text) {
        Ok(f) => f,
        Err(err) => return outcome(vec![Check::new("parse", "ok", err)], None),
    };
    let geom = Geometry::build(ring(file.ring), file.k).expect("appendix geometry");
    let arc = match file.resolve(&geom) {
        Ok(a) => a,
        Err(err) => return outcome(vec![Check::new("points", "ok", err)], None),
    };
    let u = file.u.expect("appendix files carry u");
    checks.push(Check::new("n", file.points.len(), arc.n()));
    checks.push(Check::new("max load", u, arc.max_load()));
    checks.push(Check::new("complete", true, addable_points(&geom, &arc, u).is_empty()));
    checks.push(Check::new("degenerate", false, is_degenerate(&geom, &arc)));
    let g = canonical_labeling(&arc_graph(&geom, &arc, u)).group_order();
    checks.push(Check::new("g", e.g, g));
    let report = code_report(&geom, &arc);
    checks.push(Check::new("d_hom", e.d_hom, report.d_hom));
    let (len, dim, d) = e.gray;
    checks.push(Check::new("gray parameters", format!("[{len},{dim},{d}]"), report.parameters()));
    if let Some(lin) = e.gray_linear {
        checks.push(Check::new("gray linear", lin, report.gray_linear));
    }
    if let Some(en) = e.enumerator {
        let expected = parse_enumerator(en).expect("well-formed enumerator");
        checks.push(Check::new(
            "weight enumerator",
            crate::codes::format_enumerator(&expected),
            report.enumerator_string(),
        ));
    }
    outcome(checks, Some(report))
}

pub fn verify_all() -> Vec<EntryOutcome> {
    ENTRIES.iter().map(verify_entry).collect()
}
