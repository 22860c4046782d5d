use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use splitblur::blowup::{
    all_subsets, alpha_of_graph, blur_structure, blur_structure_unchecked, f_l_mu, AtomStructureSpec, GraphScheme,
    Truncation,
};
use splitblur::finite_ra::{check_associativity, check_axioms, default_atom_names, make_m};
use splitblur::graphs::{chromatic_number, girth, make_disjoint_cliques, sample_random_graph, Girth, Graph};
use splitblur::matrices::{check_cylindric_basis, enumerate_matrices};
use splitblur::nonrep::{certify, check_certificate, monk_sequence, CertificateError};
use splitblur::representation::{
    default_generators, new_graph, pending_count, sample_elements, saturate, verify_representation,
};
use splitblur::symbolic::{check_blur_conditions, n_complex_blur};
use splitblur::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "splitblur", version, about = "Blow-up-and-blur atom structures and non-representability certificates")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Truncation depth D (rows kept)
    #[arg(long = "D", alias = "depth", global = true, default_value_t = 8)]
    depth: u32,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Directory for written artifacts
    #[arg(long, global = true, env = "SPLITBLUR_OUTPUT_DIR", default_value = ".")]
    output_dir: PathBuf,

    /// Path of the main artifact (overrides the default under --output-dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    /// The finite algebra M over |I| diversity atoms
    M,
    /// Blur structure over M with all 2-element blurs
    Blur,
    /// F(l, mu)
    Flmu,
    /// alpha over countably many disjoint N-cliques with n colors
    Alpha,
}

#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long, value_enum, default_value = "blur")]
    construction: Construction,

    /// Number of base atoms |I|
    #[arg(long = "I", default_value_t = 6)]
    base_atoms: usize,

    #[arg(long, default_value_t = 2)]
    l: usize,

    #[arg(long, default_value_t = 1)]
    mu: usize,

    /// Colors of alpha(G); dimension for (**) and matrices
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Clique size of alpha(G)
    #[arg(long = "N", default_value_t = 3)]
    clique_size: usize,

    /// Cliques kept in the finite window of alpha(G)
    #[arg(long, default_value_t = 10)]
    copies: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic number and girth of a sampled or generated graph
    Graph {
        /// Sample G(nodes, p) instead of disjoint cliques
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Disjoint cliques: count
        #[arg(long, default_value_t = 10)]
        cliques: usize,
        /// Disjoint cliques: size
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// Read the graph from a file instead
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check the atom-structure axioms (on the truncation for infinite kinds)
    RaCheck(SpecArgs),
    /// Build a structure and write its parameters
    BlurBuild(SpecArgs),
    /// Blur conditions (i)-(iii) and the n-complex-blur property
    BlurCheck(SpecArgs),
    /// Saturate a coloured graph and verify the induced representation
    Represent {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        /// Sampled term-algebra elements checked
        #[arg(long, default_value_t = 24)]
        sample: usize,
    },
    /// Write a non-representability certificate
    Certify(SpecArgs),
    /// Re-verify a certificate file
    CheckCertificate { path: PathBuf },
    /// Basic matrices of M and the amalgamation property
    Matrices(SpecArgs),
    /// Monk sequence of alpha over growing cliques
    Monk {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
}

/// A finished command: whether every check passed, and its report.
struct Outcome {
    ok: bool,
    report: Value,
}

enum Failure {
    Usage(String),
    Check(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::InvalidGraph(_)
            | Error::ImproperColoring(_)
            | Error::Parse(_)
            | Error::DuplicateAtom(_)
            | Error::InvalidBlurFamily(_)
            | Error::EnumerationTooLarge(_) => Failure::Usage(e.to_string()),
            Error::CheckFailed(_) | Error::Certificate(_) => Failure::Check(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Internal(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            emit(&outcome.report, cli.common.format);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn emit(report: &Value, format: Format) {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(report).expect("reports serialize"));
        }
        Format::Text => {
            if let Value::Object(map) = report {
                for (k, v) in map {
                    let shown = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(out, "{k}: {shown}");
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Graph { nodes, p, cliques, size, file } => graph(*nodes, *p, *cliques, *size, file.as_deref(), c),
        Command::RaCheck(s) => ra_check(s, c),
        Command::BlurBuild(s) => blur_build(s, c),
        Command::BlurCheck(s) => blur_check(s),
        Command::Represent { spec, steps, sample } => represent(spec, *steps, *sample, c),
        Command::Certify(s) => certify_cmd(s, c),
        Command::CheckCertificate { path } => check_certificate_cmd(path),
        Command::Matrices(s) => matrices(s, c),
        Command::Monk { n, count } => monk(*n, *count, c),
    }
}

fn artifact_path(c: &Common, default_name: &str) -> PathBuf {
    c.out.clone().unwrap_or_else(|| c.output_dir.join(default_name))
}

fn write_artifact(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_failure(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn build(s: &SpecArgs) -> Result<AtomStructureSpec, Failure> {
    let names = default_atom_names(s.base_atoms);
    Ok(match s.construction {
        Construction::M => return Err(Failure::Usage("the finite algebra M has no blow-up; use ra-check or matrices".into())),
        Construction::Blur => blur_structure(&make_m(&names)?, &all_subsets(s.base_atoms, 2))?,
        Construction::Flmu => f_l_mu(&names, s.l, s.mu)?,
        Construction::Alpha => alpha_of_graph(GraphScheme::CliqueCopies { clique_size: s.clique_size }, s.n)?,
    })
}

fn truncation(s: &SpecArgs, c: &Common) -> Truncation {
    Truncation { depth: c.depth, copies: s.copies }
}

fn graph(nodes: Option<usize>, p: f64, cliques: usize, size: usize, file: Option<&Path>, c: &Common) -> Result<Outcome, Failure> {
    let g: Graph = match (file, nodes) {
        (Some(path), _) => fs::read_to_string(path).map_err(|e| io_failure(path, e))?.parse()?,
        (None, Some(n)) => sample_random_graph(n, p, c.seed)?,
        (None, None) => make_disjoint_cliques(cliques, size),
    };
    let (chi, coloring) = chromatic_number(&g);
    let girth = match girth(&g) {
        Girth::Finite(k) => json!(k),
        Girth::Infinite => json!("infinite"),
    };
    Ok(Outcome {
        ok: true,
        report: json!({
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "chromatic_number": chi,
            "girth": girth,
            "coloring": coloring.assignment,
        }),
    })
}

fn ra_check(s: &SpecArgs, c: &Common) -> Result<Outcome, Failure> {
    if s.construction == Construction::M {
        let m = make_m(&default_atom_names(s.base_atoms))?;
        let axioms = check_axioms(&m);
        let assoc = check_associativity(&m);
        return Ok(Outcome {
            ok: axioms.is_clean() && assoc.is_empty(),
            report: json!({
                "atoms": m.atom_count(),
                "triples_scanned": axioms.triples_scanned,
                "axiom_violations": axioms.violations.len(),
                "associativity_failures": assoc.len(),
            }),
        });
    }
    let spec = build(s)?;
    let t = spec.truncate(&truncation(s, c))?;
    let axioms = check_axioms(&t.structure);
    Ok(Outcome {
        ok: axioms.is_clean(),
        report: json!({
            "atoms": t.structure.atom_count(),
            "triples_scanned": axioms.triples_scanned,
            "axiom_violations": axioms.violations.len(),
            "first_violations": axioms.violations.iter().take(5).collect::<Vec<_>>(),
        }),
    })
}

fn blur_build(s: &SpecArgs, c: &Common) -> Result<Outcome, Failure> {
    let spec = build(s)?;
    let t = spec.truncate(&truncation(s, c))?;
    let path = artifact_path(c, "spec.json");
    let params = spec.params();
    let mut text = serde_json::to_string_pretty(&params).expect("params serialize");
    text.push('\n');
    write_artifact(&path, text.as_bytes())?;
    let blurs = spec.as_blur().map(|b| b.blur_count());
    Ok(Outcome {
        ok: true,
        report: json!({
            "spec": params,
            "blurs": blurs,
            "truncated_atoms": t.structure.atom_count(),
            "written": path.display().to_string(),
        }),
    })
}

fn blur_check(s: &SpecArgs) -> Result<Outcome, Failure> {
    let names = default_atom_names(s.base_atoms);
    let m = make_m(&names)?;
    let (spec, blur_sets) = match s.construction {
        // below six base atoms the pair family is checked without the size
        // restriction of the construction
        Construction::Blur | Construction::M => {
            let j = all_subsets(s.base_atoms, 2);
            (blur_structure_unchecked(&m, &j)?, j)
        }
        Construction::Flmu => (f_l_mu(&names, s.l, s.mu)?, all_subsets(s.base_atoms, s.l)),
        Construction::Alpha => return Err(Failure::Usage("blur-check needs a blur construction".into())),
    };
    let report = check_blur_conditions(spec.as_blur().expect("blur constructions"));
    let complex = n_complex_blur(&m, &blur_sets, s.n);
    Ok(Outcome {
        ok: report.is_clean() && complex,
        report: json!({
            "pairs_checked": report.pairs_checked,
            "label_triples_checked": report.label_triples_checked,
            "violations": report.violations.len(),
            "first_violations": report.violations.iter().take(5).collect::<Vec<_>>(),
            "n": s.n,
            "n_complex_blur": complex,
        }),
    })
}

fn represent(s: &SpecArgs, steps: usize, sample: usize, c: &Common) -> Result<Outcome, Failure> {
    let spec = build(s)?;
    let b = spec
        .as_blur()
        .ok_or_else(|| Failure::Usage("represent needs a blur construction".into()))?;
    let gens = default_generators(b);
    let mut g = new_graph();
    saturate(&mut g, b, &gens, steps)?;
    let elements = sample_elements(b, sample, c.seed);
    let report = verify_representation(&g, b, &elements, pending_count(&g, b, &gens));
    let path = artifact_path(c, "steps.jsonl");
    let mut log = Vec::new();
    g.write_step_log(&mut log).map_err(|e| io_failure(&path, e))?;
    write_artifact(&path, &log)?;
    Ok(Outcome {
        ok: report.is_clean(),
        report: json!({
            "nodes": report.nodes,
            "steps": g.step_log().len(),
            "label_triangles": report.label_triangles,
            "sample_size": report.sample_size,
            "dequeued": report.dequeued,
            "pending": report.pending,
            "resolved_atoms": report.resolved_atoms,
            "violations": report.violations.len(),
            "first_violations": report.violations.iter().take(5).collect::<Vec<_>>(),
            "step_log": path.display().to_string(),
        }),
    })
}

fn certify_cmd(s: &SpecArgs, c: &Common) -> Result<Outcome, Failure> {
    let spec = build(s)?;
    let coloring = match &spec {
        AtomStructureSpec::Alpha(a) => Some(chromatic_number(&a.scheme.window(s.copies)).1),
        AtomStructureSpec::Blur(_) => None,
    };
    let cert = certify(&spec, coloring.as_ref(), truncation(s, c), c.seed)?;
    let path = artifact_path(c, "certificate.json");
    write_artifact(&path, cert.to_json().as_bytes())?;
    Ok(Outcome {
        ok: true,
        report: json!({
            "blocks": cert.blocks.len(),
            "mono_zero": cert.mono_zero.iter().filter(|v| v.zero).count(),
            "coarse_entries": cert.coarse_table.len(),
            "checksum": cert.checksum,
            "written": path.display().to_string(),
        }),
    })
}

fn check_certificate_cmd(path: &Path) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    match check_certificate(&text) {
        Ok(cert) => Ok(Outcome {
            ok: true,
            report: json!({ "valid": true, "blocks": cert.blocks.len(), "checksum": cert.checksum }),
        }),
        Err(e) => {
            let kind = match &e {
                CertificateError::Malformed(_) => "malformed",
                CertificateError::VersionMismatch { .. } => "version_mismatch",
                CertificateError::Reverification { .. } => "reverification",
                CertificateError::Checksum { .. } => "checksum",
            };
            Err(Failure::Check(format!("{kind}: {e}")))
        }
    }
}

fn matrices(s: &SpecArgs, c: &Common) -> Result<Outcome, Failure> {
    let m = make_m(&default_atom_names(s.base_atoms))?;
    let ms = enumerate_matrices(&m, s.n)?;
    let basis = check_cylindric_basis(&m, s.n, &ms);
    let complex = n_complex_blur(&m, &all_subsets(s.base_atoms, 2), s.n);
    let mut report = json!({
        "atoms": m.atom_count(),
        "dimension": s.n,
        "matrices": ms.len(),
        "pairs_checked": basis.pairs_checked,
        "amalgamation_failures": basis.failure_count,
        "n_complex_blur": complex,
    });
    if let Some(path) = &c.out {
        let mut text = serde_json::to_string_pretty(&ms).expect("matrices serialize");
        text.push('\n');
        write_artifact(path, text.as_bytes())?;
        report["written"] = json!(path.display().to_string());
    }
    Ok(Outcome { ok: basis.is_clean(), report })
}

fn monk(n: usize, count: usize, c: &Common) -> Result<Outcome, Failure> {
    let members = monk_sequence(n, count, c.seed)?;
    let mut rows = Vec::new();
    for m in &members {
        let path = c.output_dir.join(format!("monk_{}.json", m.clique_size));
        write_artifact(&path, m.certificate.to_json().as_bytes())?;
        rows.push(json!({
            "clique_size": m.clique_size,
            "chromatic_number": m.chromatic_number,
            "blocks": m.certificate.blocks.len(),
            "certificate": path.display().to_string(),
        }));
    }
    let ok = members.iter().all(|m| m.chromatic_number == m.clique_size);
    Ok(Outcome { ok, report: json!({ "n": n, "members": rows }) })
}
