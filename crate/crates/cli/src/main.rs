//! `stieltjes-star`: forward and inverse spectral problems for star graphs
//! of Stieltjes strings, in exact rational arithmetic.
//!
//! Exit status is 0 on success, 2 when the input fails validation and 1 on
//! any other error. Errors go to stderr as `{"error": {"code", "message"}}`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use stieltjes_star::forward::{char_polys_center, char_polys_pendant, common_zeros, pendant_identities, quotient_identity, spectrum_of};
use stieltjes_star::inverse_center::{
    constraint_set, reconstruct_center_polys, validate_center, validate_center_roots, CenterInverseInput, SpectralPolys,
};
use stieltjes_star::inverse_pendant::{reconstruct_pendant_polys, validate_pendant, PendantInverseInput};
use stieltjes_star::matrixize::{build_pencil, interlacing_certificate, validate_pattern};
use stieltjes_star::model::{graph_to_json, parse_graph, parse_plan, parse_spectra, root_list_json, to_pretty, OutputMode};
use stieltjes_star::numeric::{default_budget, parse_rational, Rational, RootList};
use stieltjes_star::roundtrip::{roundtrip_with, same_spectra, spectral_polys};
use stieltjes_star::{Error, Execution, ReconstructionPlan, Root, SpectrumPair, StarGraph, ValidationReport};

#[derive(Parser, Debug)]
#[command(name = "stieltjes-star", version, about = "Direct and inverse spectral problems on star graphs of Stieltjes strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Squared eigenvalues of a graph (root clamped and root free).
    Forward {
        #[arg(long)]
        graph: PathBuf,
        /// Also write the characteristic polynomials.
        #[arg(long)]
        emit_polys: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Centre-rooted graph from Neumann and Dirichlet spectra.
    InverseCenter {
        #[arg(long)]
        spectra: PathBuf,
        #[command(flatten)]
        inv: InverseArgs,
    },
    /// Pendant-rooted graph from the spectra at the root.
    InversePendant {
        #[arg(long)]
        spectra: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        main_length: Rational,
        #[command(flatten)]
        inv: InverseArgs,
    },
    /// Check spectral data (with --lengths) or a graph's spectral theorems.
    Validate {
        #[arg(long, conflicts_with = "spectra")]
        graph: Option<PathBuf>,
        #[arg(long)]
        spectra: Option<PathBuf>,
        #[arg(long, value_parser = rational_arg, value_delimiter = ',')]
        lengths: Vec<Rational>,
        /// Treat the spectra as pendant-rooted with this main edge length.
        #[arg(long, value_parser = rational_arg)]
        main_length: Option<Rational>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// forward then inverse then forward (--graph), or inverse then forward (--spectra).
    VerifyRoundtrip {
        #[arg(long, conflicts_with = "spectra")]
        graph: Option<PathBuf>,
        #[arg(long)]
        spectra: Option<PathBuf>,
        #[arg(long, value_parser = rational_arg, value_delimiter = ',')]
        lengths: Vec<Rational>,
        #[arg(long, value_parser = rational_arg)]
        main_length: Option<Rational>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stiffness/mass pencil of a centre-rooted graph with its interlacing certificate.
    Matrix {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct InverseArgs {
    /// Edge lengths, comma separated (non-main edges for a pendant root).
    #[arg(long, value_parser = rational_arg, value_delimiter = ',', required = true)]
    lengths: Vec<Rational>,
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Export the free parameters of the isospectral family.
    #[arg(long)]
    enumerate: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file, or directory in batch mode; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Approximate decimal output with this many digits.
    #[arg(long)]
    digits: Option<usize>,
    /// Report frequencies ±√z instead of squared values.
    #[arg(long)]
    as_frequencies: bool,
    /// Width to which isolating intervals are refined, e.g. 1/1000000.
    #[arg(long, value_parser = rational_arg)]
    refine_width: Option<Rational>,
}

impl OutputArgs {
    fn mode(&self) -> OutputMode {
        match (self.as_frequencies, self.digits) {
            (true, d) => OutputMode::Frequency(d.unwrap_or(12)),
            (false, Some(d)) => OutputMode::Decimal(d),
            (false, None) => OutputMode::Exact,
        }
    }

    fn width(&self) -> Rational {
        self.refine_width.clone().unwrap_or_else(default_budget)
    }
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.message().to_string())
}

/// Result of one job: a document and whether the input passed validation.
struct Outcome {
    doc: Value,
    valid: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, valid: true }
    }
}

type JobResult = std::result::Result<Outcome, Error>;

fn read(path: &Path) -> std::result::Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn load_plan(path: Option<&PathBuf>) -> std::result::Result<Option<ReconstructionPlan>, Error> {
    path.map(|p| parse_plan(&read(p)?)).transpose()
}

fn report_json(r: &ValidationReport) -> Value {
    let mut v = serde_json::to_value(r).expect("serialisable");
    v["valid"] = json!(r.is_valid());
    v
}

fn refined(list: &RootList, width: &Rational) -> RootList {
    let roots = list
        .roots()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.refine(width);
            r
        })
        .collect();
    RootList::from_sorted(roots)
}

fn spectra_doc(neumann: &RootList, dirichlet: &RootList, out: &OutputArgs) -> Value {
    let mode = out.mode();
    let w = out.width();
    let mut doc = json!({
        "neumann_squared": root_list_json(&refined(neumann, &w), mode),
        "dirichlet_squared": root_list_json(&refined(dirichlet, &w), mode),
    });
    if mode != OutputMode::Exact {
        doc["approximate"] = json!(true);
    }
    if let OutputMode::Frequency(_) = mode {
        doc = json!({
            "neumann_frequencies": doc["neumann_squared"].take(),
            "dirichlet_frequencies": doc["dirichlet_squared"].take(),
            "approximate": true,
        });
    }
    doc
}

fn coeffs_json(p: &stieltjes_star::numeric::Polynomial) -> Value {
    json!(p.coeffs().iter().map(stieltjes_star::numeric::format_rational).collect::<Vec<_>>())
}

fn forward(graph: &Path, emit_polys: bool, out: &OutputArgs) -> JobResult {
    let g = parse_graph(&read(graph)?)?;
    let polys = spectral_polys(&g, Execution::default())?;
    let (n, d) = (spectrum_of(&polys.neumann)?, spectrum_of(&polys.dirichlet)?);
    let mut doc = spectra_doc(&n, &d, out);
    if emit_polys {
        let (nk, dk) = match g.root() {
            Root::Center => ("phi_N", "phi_D"),
            Root::Pendant => ("phi_inf", "phi_l0"),
        };
        doc["polynomials"] = json!({ nk: coeffs_json(&polys.neumann), dk: coeffs_json(&polys.dirichlet), "lowest_degree_first": true });
    }
    Ok(Outcome::ok(doc))
}

fn inverse_center(spectra: &Path, inv: &InverseArgs) -> JobResult {
    let input = CenterInverseInput {
        spectra: parse_spectra(&read(spectra)?)?,
        lengths: inv.lengths.clone(),
        plan: load_plan(inv.plan.as_ref())?,
    };
    let rep = validate_center(&input);
    if !rep.is_valid() {
        return Ok(Outcome { doc: report_json(&rep), valid: false });
    }
    let polys = SpectralPolys::from_pair(&input.spectra);
    let rec = reconstruct_center_polys(&polys, &input.lengths, input.plan.as_ref(), Execution::default())?;
    let mut doc = graph_to_json(&rec.graph);
    doc["reconstruction"] = json!({ "plan_used": rec.plan.to_json() });
    if inv.enumerate {
        doc["reconstruction"]["constraints"] = constraint_set(&polys, &input.lengths)?;
    }
    Ok(Outcome::ok(doc))
}

fn inverse_pendant(spectra: &Path, main_length: &Rational, inv: &InverseArgs) -> JobResult {
    let input = PendantInverseInput {
        spectra: parse_spectra(&read(spectra)?)?,
        main_length: main_length.clone(),
        lengths: inv.lengths.clone(),
        plan: load_plan(inv.plan.as_ref())?,
    };
    let rep = validate_pendant(&input);
    if !rep.is_valid() {
        return Ok(Outcome { doc: report_json(&rep), valid: false });
    }
    let polys = SpectralPolys::from_pair(&input.spectra);
    let rec = reconstruct_pendant_polys(&polys, main_length, &input.lengths, input.plan.as_ref(), Execution::default())?;
    let mut doc = graph_to_json(&rec.graph);
    doc["reconstruction"] = rec.metadata();
    if inv.enumerate {
        doc["reconstruction"]["constraints"] = constraint_set(&rec.decomposition.subgraph_polys(), &input.lengths)?;
    }
    Ok(Outcome::ok(doc))
}

/// Spectral theorem checks on a graph's own spectra.
fn graph_report(g: &StarGraph) -> std::result::Result<ValidationReport, Error> {
    let mut rep = ValidationReport::default();
    match g.root() {
        Root::Center => {
            let (n, d) = char_polys_center(g)?;
            let lengths: Vec<_> = g.edges().iter().map(|e| e.total_length()).collect();
            rep.merge("", validate_center_roots(&spectrum_of(&n)?, &spectrum_of(&d)?, &lengths));
            if !quotient_identity(g)? {
                rep.violate("quotient-identity", "phi_D/phi_N differs from 1/(sum 1/phi_j - M z)");
            }
        }
        Root::Pendant => {
            let (l0, inf) = char_polys_pendant(g)?;
            let input = PendantInverseInput {
                spectra: SpectrumPair::new(Vec::new(), Vec::new())?,
                main_length: g.main_edge().expect("pendant").total_length(),
                lengths: g.edges().iter().map(|e| e.total_length()).collect(),
                plan: None,
            };
            let polys = SpectralPolys { neumann: inf, dirichlet: l0 };
            rep.merge("", stieltjes_star::inverse_pendant::validate_pendant_polys(&polys, &input.main_length, &input.lengths));
            let ids = pendant_identities(g)?;
            if !ids.dirichlet_sub || !ids.neumann_sub {
                rep.violate("pendant-identities", "subgraph polynomials differ from the main-edge combination");
            }
            for c in common_zeros(g)? {
                if !c.consistent(g.q()) {
                    rep.violate("common-zero", format!("multiplicities {} and {} at a common value", c.k0, c.k_inf));
                }
            }
        }
    }
    Ok(rep)
}

fn validate(graph: Option<&PathBuf>, spectra: Option<&PathBuf>, lengths: &[Rational], main_length: Option<&Rational>) -> JobResult {
    let rep = match (graph, spectra) {
        (Some(g), _) => graph_report(&parse_graph(&read(g)?)?)?,
        (None, Some(s)) => {
            let spectra = parse_spectra(&read(s)?)?;
            match main_length {
                None => validate_center(&CenterInverseInput { spectra, lengths: lengths.to_vec(), plan: None }),
                Some(m) => validate_pendant(&PendantInverseInput {
                    spectra,
                    main_length: m.clone(),
                    lengths: lengths.to_vec(),
                    plan: None,
                }),
            }
        }
        (None, None) => return Err(Error::Schema("validate needs --graph or --spectra".into())),
    };
    Ok(Outcome { valid: rep.is_valid(), doc: report_json(&rep) })
}

fn verify_roundtrip(
    graph: Option<&PathBuf>,
    spectra: Option<&PathBuf>,
    lengths: &[Rational],
    main_length: Option<&Rational>,
    plan: Option<&PathBuf>,
) -> JobResult {
    let plan = load_plan(plan)?;
    if let Some(path) = graph {
        let g = parse_graph(&read(path)?)?;
        let (rt, rebuilt) = roundtrip_with(&g, plan.as_ref(), Execution::default())?;
        let doc = json!({
            "mode": "forward-inverse-forward",
            "verdict": if rt.passed() { "pass" } else { "fail" },
            "details": serde_json::to_value(&rt).expect("serialisable"),
            "reconstructed": graph_to_json(&rebuilt),
        });
        return Ok(Outcome { valid: rt.passed(), doc });
    }
    let Some(path) = spectra else {
        return Err(Error::Schema("verify-roundtrip needs --graph or --spectra".into()));
    };
    let pair = parse_spectra(&read(path)?)?;
    let polys = SpectralPolys::from_pair(&pair);
    let rebuilt = match main_length {
        None => reconstruct_center_polys(&polys, lengths, plan.as_ref(), Execution::default())?.graph,
        Some(m) => reconstruct_pendant_polys(&polys, m, lengths, plan.as_ref(), Execution::default())?.graph,
    };
    let after = spectral_polys(&rebuilt, Execution::default())?;
    let pass = same_spectra(&polys, &after)?;
    let doc = json!({
        "mode": "inverse-forward",
        "verdict": if pass { "pass" } else { "fail" },
        "reconstructed": graph_to_json(&rebuilt),
    });
    Ok(Outcome { valid: pass, doc })
}

fn matrix(graph: &Path, out: &OutputArgs) -> JobResult {
    let g = parse_graph(&read(graph)?)?;
    let p = build_pencil(&g)?;
    let pattern = validate_pattern(&p, &g);
    let cert = interlacing_certificate(&p, &out.width())?;
    let mut doc = p.to_json();
    doc["pattern"] = report_json(&pattern);
    doc["interlacing"] = cert.to_json(out.mode());
    Ok(Outcome { valid: pattern.is_valid() && cert.passes(), doc })
}

/// The input that may name a directory for batch processing.
fn primary_input(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Forward { graph, .. } | Command::Matrix { graph, .. } => Some(graph),
        Command::InverseCenter { spectra, .. } | Command::InversePendant { spectra, .. } => Some(spectra),
        Command::Validate { graph, spectra, .. } | Command::VerifyRoundtrip { graph, spectra, .. } => {
            graph.as_ref().or(spectra.as_ref())
        }
    }
}

fn out_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Forward { out, .. }
        | Command::Matrix { out, .. }
        | Command::Validate { out, .. }
        | Command::VerifyRoundtrip { out, .. } => out,
        Command::InverseCenter { inv, .. } | Command::InversePendant { inv, .. } => &inv.out,
    }
}

/// Runs `cmd` with its primary input replaced by `input`.
fn run_one(cmd: &Command, input: &Path) -> JobResult {
    let p = input.to_path_buf();
    match cmd {
        Command::Forward { emit_polys, out, .. } => forward(input, *emit_polys, out),
        Command::InverseCenter { inv, .. } => inverse_center(input, inv),
        Command::InversePendant { main_length, inv, .. } => inverse_pendant(input, main_length, inv),
        Command::Validate { graph, lengths, main_length, .. } => {
            let (g, s) = if graph.is_some() { (Some(&p), None) } else { (None, Some(&p)) };
            validate(g, s, lengths, main_length.as_ref())
        }
        Command::VerifyRoundtrip { graph, lengths, main_length, plan, .. } => {
            let (g, s) = if graph.is_some() { (Some(&p), None) } else { (None, Some(&p)) };
            verify_roundtrip(g, s, lengths, main_length.as_ref(), plan.as_ref())
        }
        Command::Matrix { out, .. } => matrix(input, out),
    }
}

fn error_json(e: &Error, file: Option<&Path>) -> String {
    let mut v = json!({"error": {"code": e.code(), "message": e.message()}});
    if let Some(f) = file {
        v["error"]["file"] = json!(f.display().to_string());
    }
    v.to_string()
}

fn write_out(path: Option<&Path>, doc: &Value) -> std::result::Result<(), Error> {
    let bytes = to_pretty(doc);
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Error::Schema(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| Error::Schema(format!("stdout: {e}")))
        }
    }
}

/// 0, 2 or 1 for success, validation failure or error.
fn status(r: &JobResult) -> u8 {
    match r {
        Ok(o) if o.valid => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}

fn run_batch(cmd: &Command, dir: &Path) -> u8 {
    let Some(out_dir) = out_args(cmd).out.as_deref() else {
        eprintln!("{}", error_json(&Error::Schema("batch mode needs --out <directory>".into()), Some(dir)));
        return 1;
    };
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => {
            eprintln!("{}", error_json(&Error::Schema(format!("{}: {e}", dir.display())), Some(dir)));
            return 1;
        }
    };
    files.sort();
    if let Err(e) = fs::create_dir_all(out_dir) {
        eprintln!("{}", error_json(&Error::Schema(format!("{}: {e}", out_dir.display())), Some(out_dir)));
        return 1;
    }
    let results = Execution::default().map(&files, |f| run_one(cmd, f));
    let mut code = 0;
    for (f, r) in files.iter().zip(&results) {
        let written = match r {
            Ok(o) => write_out(Some(&out_dir.join(f.file_name().expect("file"))), &o.doc),
            Err(e) => Err(e.clone()),
        };
        let s = match written {
            Ok(()) => status(r),
            Err(e) => {
                eprintln!("{}", error_json(&e, Some(f)));
                1
            }
        };
        code = match (code, s) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            _ => 0,
        };
    }
    code
}

fn run(cli: Cli) -> u8 {
    let cmd = &cli.command;
    let Some(input) = primary_input(cmd) else {
        eprintln!("{}", error_json(&Error::Schema("no input given; use --graph or --spectra".into()), None));
        return 1;
    };
    if input.is_dir() {
        return run_batch(cmd, input);
    }
    let r = run_one(cmd, input);
    match &r {
        Ok(o) => {
            if let Err(e) = write_out(out_args(cmd).out.as_deref(), &o.doc) {
                eprintln!("{}", error_json(&e, None));
                return 1;
            }
        }
        Err(e) => eprintln!("{}", error_json(e, Some(input))),
    }
    status(&r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let v = json!({"error": {"code": "E_USAGE", "message": e.to_string().trim_end()}});
            eprintln!("{v}");
            return ExitCode::from(1);
        }
    };
    ExitCode::from(run(cli))
}
