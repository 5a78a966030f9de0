//! Command-line front end: validate structure files, derive the `VR`
//! operator, count colorings of braid closures and Gauss codes, cross-check
//! the coloring-count bridge, print presentations, and enumerate catalogs.
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 semantic
//! failure (axioms fail, counts disagree), 2 input error, 3 budget exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vbq_core::algebra::{
    derive_vr, parse_structure, render_structure, validate_virtual, AxiomReport, StructureFile,
    ValidationError, VirtualBiquandle,
};
use vbq_core::braid::{parse_braid, random_braid, BraidWord};
use vbq_core::coloring::{count_colorings, verify_bridge, RepKind, SearchOptions};
use vbq_core::enumeration::{enumerate_biquandles, enumerate_virtual, CatalogOptions};
use vbq_core::gauss::{color_gauss, gauss_presentation, parse_gauss};
use vbq_core::terms::make_presentation;

#[derive(Parser)]
#[command(
    name = "vbq",
    about = "Finite biquandles, virtual biquandles, and coloring invariants of virtual links",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepArg {
    Phi,
    Psi,
}

impl From<RepArg> for RepKind {
    fn from(rep: RepArg) -> RepKind {
        match rep {
            RepArg::Phi => RepKind::Phi,
            RepArg::Psi => RepKind::Psi,
        }
    }
}

#[derive(Args)]
struct LinkInput {
    /// Braid word, e.g. "s1 S2 v1" (s = positive, S = negative, v = virtual)
    #[arg(long)]
    braid: Option<String>,
    /// Gauss code, e.g. "U1+O2+|O1+U2+"
    #[arg(long, conflicts_with = "braid")]
    gauss: Option<String>,
    /// Strand count for the braid word (default: 1 + largest index used)
    #[arg(long)]
    strands: Option<usize>,
    /// Representation acting on braid inputs; Gauss codes always use the
    /// classical-crossing labeling rules
    #[arg(long, value_enum)]
    rep: Option<RepArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure file against the axioms
    Check {
        /// Structure file in the vbq format
        file: PathBuf,
    },
    /// Derive the VR operator of a virtual biquandle and print it
    Vr { file: PathBuf },
    /// Count colorings of a braid closure or a Gauss code
    Color {
        file: PathBuf,
        #[command(flatten)]
        link: LinkInput,
        /// Print the fixed tuples / semiarc assignments
        #[arg(long)]
        witnesses: bool,
        /// Bound on the number of evaluation steps
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Worker threads for the fixed-point scan
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Compare phi, psi, and derived-VR coloring counts of a braid closure
    Bridge {
        file: PathBuf,
        /// Braid word to check
        #[arg(long)]
        braid: Option<String>,
        /// Check this many seeded random braids instead of a fixed word
        #[arg(long, conflicts_with = "braid")]
        fuzz: Option<usize>,
        /// Strand count (braid word default: inferred; fuzz default: 3)
        #[arg(long)]
        strands: Option<usize>,
        /// Seed for the fuzz words
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Print the presentation cut out by a braid word or a Gauss code
    Present {
        #[command(flatten)]
        link: LinkInput,
    },
    /// Enumerate all biquandles or virtual biquandles of a given size
    Enum {
        /// Carrier size
        #[arg(long)]
        size: usize,
        /// Enumerate (operator, automorphism) pairs instead of bare operators
        #[arg(long = "virtual")]
        virtual_structures: bool,
        /// De-duplicate up to isomorphism
        #[arg(long)]
        iso: bool,
        /// Permit size 5 (slow)
        #[arg(long)]
        allow_large: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

/// Failure cases that end the process without a normal report.
enum Failure {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// Valid input that fails a semantic check: exit 1.
    Semantic(String),
    /// Search refused or aborted by the budget guard: exit 3.
    Budget(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Input(msg) => (2, msg),
            Failure::Semantic(msg) => (1, msg),
            Failure::Budget(msg) => (3, msg),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn load_structure(path: &PathBuf) -> Result<StructureFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_structure(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_virtual(path: &PathBuf) -> Result<VirtualBiquandle, Failure> {
    load_structure(path)?.into_virtual().map_err(|e| match e {
        ValidationError::Structure(err) => Failure::Input(err.to_string()),
        ValidationError::Axioms(report) => {
            Failure::Semantic(format!("structure fails validation: {report}"))
        }
    })
}

fn parse_word(text: &str, strands: Option<usize>) -> Result<BraidWord, Failure> {
    parse_braid(text, strands).map_err(|e| Failure::Input(format!("braid word: {e}")))
}

fn format_report(report: &AxiomReport, out: &mut String) {
    writeln!(out, "size {}", report.n()).unwrap();
    for axiom in report.axioms_checked() {
        match report.failure_for(axiom) {
            None => writeln!(out, "{} pass", axiom.name()).unwrap(),
            Some(w) => writeln!(out, "{} fail: {w}", axiom.name()).unwrap(),
        }
    }
    writeln!(
        out,
        "result {}",
        if report.passed() { "pass" } else { "fail" }
    )
    .unwrap();
}

fn cmd_check(file: PathBuf) -> Result<ExitCode, Failure> {
    let StructureFile { op, f } = load_structure(&file)?;
    let report = match &f {
        Some(f) => validate_virtual(&op, f).map_err(|e| Failure::Input(e.to_string()))?,
        None => vbq_core::algebra::validate_biquandle(&op),
    };
    let mut out = String::new();
    format_report(&report, &mut out);
    print!("{out}");
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_vr(file: PathBuf) -> Result<ExitCode, Failure> {
    let StructureFile { op, f } = load_structure(&file)?;
    let vbq = StructureFile { op, f: f.clone() }
        .into_virtual()
        .map_err(|e| match e {
            ValidationError::Structure(err) => Failure::Input(err.to_string()),
            ValidationError::Axioms(report) => {
                Failure::Semantic(format!("structure fails validation: {report}"))
            }
        })?;
    let vr = derive_vr(&vbq);
    print!("{}", render_structure(&vr, f.as_deref()));
    Ok(ExitCode::SUCCESS)
}

fn budget_failure(e: vbq_core::coloring::BudgetError) -> Failure {
    Failure::Budget(e.to_string())
}

fn cmd_color(
    file: PathBuf,
    link: LinkInput,
    witnesses: bool,
    budget: u64,
    workers: usize,
) -> Result<ExitCode, Failure> {
    let vbq = load_virtual(&file)?;
    let opts = SearchOptions {
        budget,
        workers,
        materialize: witnesses,
    };
    let result = match (&link.braid, &link.gauss) {
        (Some(word), None) => {
            let b = parse_word(word, link.strands)?;
            let rep = link.rep.map(RepKind::from).unwrap_or(RepKind::Phi);
            count_colorings(&vbq, &b, rep, &opts).map_err(budget_failure)?
        }
        (None, Some(code)) => {
            if link.rep.is_some() {
                return Err(Failure::Input(
                    "--rep applies to braid inputs only; Gauss codes always use the \
                     classical-crossing rules"
                        .into(),
                ));
            }
            if link.strands.is_some() {
                return Err(Failure::Input(
                    "--strands applies to braid inputs only".into(),
                ));
            }
            let code = parse_gauss(code).map_err(|e| Failure::Input(format!("gauss code: {e}")))?;
            color_gauss(&vbq, &code, &opts).map_err(budget_failure)?
        }
        _ => {
            return Err(Failure::Input(
                "exactly one of --braid or --gauss is required".into(),
            ))
        }
    };
    println!("{}", result.count);
    if let Some(list) = result.witnesses {
        for w in list {
            let row: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            println!("{}", row.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// One bridge evaluation: phi and psi fixed-point counts over the input
/// structure, the theta-mechanism check, and the coloring count of the same
/// word over the derived (X, VR) biquandle with the identity automorphism.
fn bridge_line(
    vbq: &VirtualBiquandle,
    vr_plain: &VirtualBiquandle,
    b: &BraidWord,
    opts: &SearchOptions,
) -> Result<(u64, u64, u64, bool), Failure> {
    let report = verify_bridge(vbq, b, opts).map_err(budget_failure)?;
    let vr_count = count_colorings(vr_plain, b, RepKind::Phi, opts)
        .map_err(budget_failure)?
        .count;
    let ok = report.passed() && vr_count == report.phi_count;
    Ok((report.phi_count, report.psi_count, vr_count, ok))
}

fn cmd_bridge(
    file: PathBuf,
    braid: Option<String>,
    fuzz: Option<usize>,
    strands: Option<usize>,
    seed: u64,
    budget: u64,
    workers: usize,
) -> Result<ExitCode, Failure> {
    let vbq = load_virtual(&file)?;
    let vr_plain = VirtualBiquandle::plain(derive_vr(&vbq))
        .map_err(|e| Failure::Semantic(format!("derived VR table fails validation: {e}")))?;
    let opts = SearchOptions {
        budget,
        workers,
        materialize: false,
    };
    match (braid, fuzz) {
        (Some(word), None) => {
            let b = parse_word(&word, strands)?;
            let (phi, psi, vr, ok) = bridge_line(&vbq, &vr_plain, &b, &opts)?;
            println!("phi {phi}");
            println!("psi {psi}");
            println!("vr {vr}");
            println!("{}", if ok { "ok" } else { "mismatch" });
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        (None, Some(count)) => {
            let strands = strands.unwrap_or(3);
            if strands < 2 {
                return Err(Failure::Input("--fuzz needs at least 2 strands".into()));
            }
            let mut passed = 0usize;
            for k in 0..count {
                let b = random_braid(strands, 8, seed.wrapping_add(k as u64));
                let (phi, psi, vr, ok) = bridge_line(&vbq, &vr_plain, &b, &opts)?;
                println!(
                    "fuzz {k} word \"{b}\" phi {phi} psi {psi} vr {vr} {}",
                    if ok { "ok" } else { "mismatch" }
                );
                if ok {
                    passed += 1;
                }
            }
            println!("ok {passed}/{count}");
            Ok(if passed == count {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        _ => Err(Failure::Input(
            "exactly one of --braid or --fuzz is required".into(),
        )),
    }
}

fn cmd_present(link: LinkInput) -> Result<ExitCode, Failure> {
    let presentation = match (&link.braid, &link.gauss) {
        (Some(word), None) => {
            let b = parse_word(word, link.strands)?;
            let rep = link.rep.map(RepKind::from).unwrap_or(RepKind::Phi);
            make_presentation(&b, rep)
        }
        (None, Some(code)) => {
            if link.rep.is_some() {
                return Err(Failure::Input(
                    "--rep applies to braid inputs only; Gauss codes always use the \
                     classical-crossing rules"
                        .into(),
                ));
            }
            let code = parse_gauss(code).map_err(|e| Failure::Input(format!("gauss code: {e}")))?;
            gauss_presentation(&code)
        }
        _ => {
            return Err(Failure::Input(
                "exactly one of --braid or --gauss is required".into(),
            ))
        }
    };
    print!("{presentation}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_enum(
    size: usize,
    virtual_structures: bool,
    iso: bool,
    allow_large: bool,
    workers: usize,
) -> Result<ExitCode, Failure> {
    let opts = CatalogOptions {
        up_to_iso: iso,
        allow_size_five: allow_large,
        workers,
    };
    if size == 5 && allow_large {
        eprintln!("warning: size-5 enumeration may take several minutes");
    }
    let mut out = String::new();
    let total;
    if virtual_structures {
        let pairs = enumerate_virtual(size, &opts).map_err(|e| Failure::Input(e.to_string()))?;
        total = pairs.len();
        for (op, f) in &pairs {
            out.push_str(&render_structure(op, Some(f)));
            out.push('\n');
        }
    } else {
        let ops = enumerate_biquandles(size, &opts).map_err(|e| Failure::Input(e.to_string()))?;
        total = ops.len();
        for op in &ops {
            out.push_str(&render_structure(op, None));
            out.push('\n');
        }
    }
    out.push_str(&format!("# total {total}\n"));
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Vr { file } => cmd_vr(file),
        Command::Color {
            file,
            link,
            witnesses,
            budget,
            workers,
        } => cmd_color(file, link, witnesses, budget, workers),
        Command::Bridge {
            file,
            braid,
            fuzz,
            strands,
            seed,
            budget,
            workers,
        } => cmd_bridge(file, braid, fuzz, strands, seed, budget, workers),
        Command::Present { link } => cmd_present(link),
        Command::Enum {
            size,
            virtual_structures,
            iso,
            allow_large,
            workers,
        } => cmd_enum(size, virtual_structures, iso, allow_large, workers),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => failure.exit(),
    }
}
