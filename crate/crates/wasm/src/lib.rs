//! Browser bindings for the interactive demo page. Three operations are
//! exposed: structure validation (with the derived VR operator), coloring
//! counts for braid words and Gauss codes, and presentations. Inputs and
//! outputs are plain strings so the page stays a single static file.

use wasm_bindgen::prelude::*;

use vbq_core::algebra::{
    derive_vr, parse_structure, render_structure, validate_biquandle, validate_virtual,
    AxiomReport, StructureFile,
};
use vbq_core::braid::parse_braid;
use vbq_core::coloring::{count_colorings, RepKind, SearchOptions};
use vbq_core::gauss::{color_gauss, gauss_presentation, parse_gauss};
use vbq_core::terms::make_presentation;

// Demo-scale budget: keeps a misclick from freezing the tab.
const DEMO_BUDGET: u64 = 2_000_000;

fn report_lines(report: &AxiomReport) -> String {
    let mut out = format!("size {}\n", report.n());
    for axiom in report.axioms_checked() {
        match report.failure_for(axiom) {
            None => out.push_str(&format!("{} pass\n", axiom.name())),
            Some(w) => out.push_str(&format!("{} fail: {w}\n", axiom.name())),
        }
    }
    out.push_str(&format!(
        "result {}\n",
        if report.passed() { "pass" } else { "fail" }
    ));
    out
}

fn rep_from(rep: &str) -> Result<RepKind, String> {
    match rep {
        "phi" | "" => Ok(RepKind::Phi),
        "psi" => Ok(RepKind::Psi),
        other => Err(format!("error: unknown representation {other:?}")),
    }
}

fn strands_from(strands: u32) -> Option<usize> {
    (strands > 0).then_some(strands as usize)
}

fn check_impl(structure: &str) -> String {
    let StructureFile { op, f } = match parse_structure(structure) {
        Ok(parsed) => parsed,
        Err(e) => return format!("error: {e}"),
    };
    let report = match &f {
        Some(f) => match validate_virtual(&op, f) {
            Ok(report) => report,
            Err(e) => return format!("error: {e}"),
        },
        None => validate_biquandle(&op),
    };
    let mut out = report_lines(&report);
    if report.passed() {
        let vbq = StructureFile { op, f: f.clone() }
            .into_virtual()
            .expect("report passed");
        out.push_str("\nderived VR structure:\n");
        out.push_str(&render_structure(&derive_vr(&vbq), f.as_deref()));
    }
    out
}

fn color_impl(structure: &str, braid: &str, gauss: &str, strands: u32, rep: &str) -> String {
    let vbq = match parse_structure(structure).map(StructureFile::into_virtual) {
        Ok(Ok(vbq)) => vbq,
        Ok(Err(e)) => return format!("error: {e}"),
        Err(e) => return format!("error: {e}"),
    };
    let opts = SearchOptions {
        budget: DEMO_BUDGET,
        workers: 1,
        materialize: true,
    };
    let result = match (braid.trim(), gauss.trim()) {
        (word, "") => {
            let rep = match rep_from(rep) {
                Ok(rep) => rep,
                Err(e) => return e,
            };
            let b = match parse_braid(word, strands_from(strands)) {
                Ok(b) => b,
                Err(e) => return format!("error: {e}"),
            };
            count_colorings(&vbq, &b, rep, &opts)
        }
        ("", code) => {
            let code = match parse_gauss(code) {
                Ok(code) => code,
                Err(e) => return format!("error: {e}"),
            };
            color_gauss(&vbq, &code, &opts)
        }
        _ => return "error: provide a braid word or a Gauss code, not both".into(),
    };
    match result {
        Ok(res) => {
            let mut out = format!("colorings: {}\n", res.count);
            let witnesses = res.witnesses.unwrap_or_default();
            for w in witnesses.iter().take(50) {
                let row: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            if witnesses.len() > 50 {
                out.push_str(&format!("... and {} more\n", witnesses.len() - 50));
            }
            out
        }
        Err(e) => format!("error: {e}"),
    }
}

fn present_impl(braid: &str, gauss: &str, strands: u32, rep: &str) -> String {
    match (braid.trim(), gauss.trim()) {
        (word, "") => {
            let rep = match rep_from(rep) {
                Ok(rep) => rep,
                Err(e) => return e,
            };
            match parse_braid(word, strands_from(strands)) {
                Ok(b) => make_presentation(&b, rep).to_string(),
                Err(e) => format!("error: {e}"),
            }
        }
        ("", code) => match parse_gauss(code) {
            Ok(code) => gauss_presentation(&code).to_string(),
            Err(e) => format!("error: {e}"),
        },
        _ => "error: provide a braid word or a Gauss code, not both".into(),
    }
}

/// Validates a structure file; on success the derived VR structure is
/// appended to the axiom report.
#[wasm_bindgen]
pub fn check_structure(structure: &str) -> String {
    check_impl(structure)
}

/// Counts colorings of a braid closure (with the chosen representation) or
/// a Gauss code (always the classical-crossing rules), listing up to 50
/// witnesses. Pass `strands = 0` to infer the braid strand count.
#[wasm_bindgen]
pub fn color_link(structure: &str, braid: &str, gauss: &str, strands: u32, rep: &str) -> String {
    color_impl(structure, braid, gauss, strands, rep)
}

/// Prints the presentation cut out by a braid word or a Gauss code.
#[wasm_bindgen]
pub fn present_link(braid: &str, gauss: &str, strands: u32, rep: &str) -> String {
    present_impl(braid, gauss, strands, rep)
}
