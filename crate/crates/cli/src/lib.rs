//! `dbr`: load or generate a graph, run the analyses, print a report.
//!
//! Exit status is 0 whenever the analysis ran, whatever the verdicts; 1 for
//! bad input; 2 when routes disagree or an internal invariant breaks.

mod report;

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dbr_core::characterize::{
    classify, halved_route_dbrg, spectral_excess_dbrg, spectral_excess_drg, Route, Verdict,
};
use dbr_core::graph::{bipartition, to_edge_list};
use dbr_core::{decompose, distance_data, generate, parse_edge_list, Error, FamilySpec, Graph, DEFAULT_TOL};
use serde_json::json;

pub use report::{round_sig, ErrorRecord, GraphSummary, Report, SpectrumEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dbr", version, about = "Distance-regularity and distance-biregularity from the spectrum")]
struct Cli {
    /// Eigenvalue clustering and comparison tolerance.
    #[arg(long, global = true, env = "DBR_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: summary, spectrum, every route, classification.
    Analyze { file: String },
    /// Classification only.
    Classify { file: String },
    /// Spectral excess reports.
    Excess { file: String },
    /// Halved graphs and the halved route.
    Halved { file: String },
    /// Write a named family as an edge list.
    Gen {
        family: String,
        params: Vec<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl Failure {
    fn record(&self) -> ErrorRecord {
        let (kind, message) = match self {
            Failure::Usage(m) => ("Usage", m.clone()),
            Failure::Io(m) => ("Io", m.clone()),
            Failure::Core(e) => (e.kind(), e.to_string()),
        };
        ErrorRecord {
            kind: kind.to_string(),
            message,
        }
    }

    fn code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load(file: &str, stdin: &mut dyn Read) -> Result<Graph, Failure> {
    let mut text = String::new();
    if file == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(file).map_err(|e| Failure::Io(format!("{file}: {e}")))?;
    }
    Ok(parse_edge_list(&text)?)
}

fn analyze(g: &Graph, report: &mut Report) -> Result<(), Failure> {
    let dec = decompose(g, report.tol)?;
    let out = classify(g, report.tol)?;
    report.graph = Some(GraphSummary::new(g));
    report.spectrum = Some(report::spectrum_table(&dec));
    report.classification = Some(out.classification);
    report.details = Some(json!({
        "oracle": out.oracle,
        "excess_drg": out.excess_drg,
        "excess_dbrg": out.excess_dbrg,
        "excess_girth": out.excess_girth,
    }));
    report.verdicts = out.verdicts;
    Ok(())
}

fn excess(g: &Graph, report: &mut Report) -> Result<(), Failure> {
    let tol = report.tol;
    let dec = decompose(g, tol)?;
    let dd = distance_data(g);
    let mut details = serde_json::Map::new();
    match spectral_excess_drg(g, &dec, &dd, tol) {
        Ok((v, r)) => {
            report.verdicts.push(v);
            details.insert("excess_drg".into(), json!(r));
        }
        Err(e @ Error::NotRegular { .. }) => {
            report
                .verdicts
                .push(Verdict::not_applicable(Route::SpectralExcessDrg, "V", tol, e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    let dbrg = bipartition(g).and_then(|part| spectral_excess_dbrg(g, &dec, &dd, &part, tol));
    match dbrg {
        Ok((v, r)) => {
            report.verdicts.push(v);
            details.insert("excess_dbrg".into(), json!(r));
        }
        Err(
            e @ (Error::NotBipartite { .. } | Error::NotSemiregular { .. } | Error::EigenvalueCountMismatch { .. }),
        ) => {
            report
                .verdicts
                .push(Verdict::not_applicable(Route::SpectralExcessDbrg, "B,C", tol, e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    report.graph = Some(GraphSummary::new(g));
    report.spectrum = Some(report::spectrum_table(&dec));
    report.details = Some(details.into());
    Ok(())
}

fn halved(g: &Graph, report: &mut Report) -> Result<(), Failure> {
    let out = halved_route_dbrg(g, report.tol)?;
    let half = |h: &Graph, spectrum: &[(f64, usize)]| {
        json!({
            "n": h.n(),
            "edges": h.edges(),
            "spectrum": spectrum
                .iter()
                .map(|&(eigenvalue, multiplicity)| SpectrumEntry { eigenvalue, multiplicity })
                .collect::<Vec<_>>(),
        })
    };
    report.graph = Some(GraphSummary::new(g));
    report.details = Some(json!({
        "k": out.degrees.0,
        "ell": out.degrees.1,
        "r": out.pair.r,
        "s": out.pair.s,
        "half_b": half(&out.pair.h_b, &out.spectrum_b),
        "half_c": half(&out.pair.h_c, &out.spectrum_c),
    }));
    let mut half_b = out.half_b;
    let mut half_c = out.half_c;
    half_b.subject = "halved B".into();
    half_c.subject = "halved C".into();
    report.verdicts = vec![out.verdict, half_b, half_c];
    Ok(())
}

fn gen(family: &str, params: &[usize], output: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let g = generate(&FamilySpec::new(family, params))?;
    let text = to_edge_list(&g);
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn emit(report: &Report, format: Format, out: &mut dyn Write) {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let _ = out.write_all(text.as_bytes());
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Reports go to `stdout`, error records to `stderr`.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let json = args
                .windows(2)
                .any(|w| w[0] == "--format" && w[1] == "json")
                || args.iter().any(|a| a == "--format=json");
            if json {
                let mut report = Report::new("", DEFAULT_TOL);
                report.error = Some(Failure::Usage(e.render().to_string().trim_end().to_string()).record());
                emit(&report, Format::Json, stderr);
            } else {
                let _ = write!(stderr, "{}", e.render());
            }
            return 1;
        }
    };
    let command = match &cli.command {
        Command::Analyze { .. } => "analyze",
        Command::Classify { .. } => "classify",
        Command::Excess { .. } => "excess",
        Command::Halved { .. } => "halved",
        Command::Gen { .. } => "gen",
    };
    let mut report = Report::new(command, cli.tol);
    let result = if !(cli.tol.is_finite() && cli.tol > 0.0) {
        Err(Failure::Usage(format!("tolerance must be positive and finite, got {}", cli.tol)))
    } else {
        match &cli.command {
            Command::Analyze { file } => load(file, stdin).and_then(|g| analyze(&g, &mut report)),
            Command::Classify { file } => load(file, stdin).and_then(|g| {
                report.classification = Some(classify(&g, cli.tol)?.classification);
                Ok(())
            }),
            Command::Excess { file } => load(file, stdin).and_then(|g| excess(&g, &mut report)),
            Command::Halved { file } => load(file, stdin).and_then(|g| halved(&g, &mut report)),
            Command::Gen { family, params, output } => {
                return match gen(family, params, output.as_ref(), stdout) {
                    Ok(()) => 0,
                    Err(f) => {
                        report.error = Some(f.record());
                        emit(&report, cli.format, stderr);
                        f.code()
                    }
                };
            }
        }
    };
    match result {
        Ok(()) => {
            emit(&report, cli.format, stdout);
            0
        }
        Err(f) => {
            report.error = Some(f.record());
            emit(&report, cli.format, stderr);
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn internal_errors_exit_two() {
        let disagreement = Error::RouteDisagreement {
            property: "distance-regular".into(),
            detail: String::new(),
        };
        assert_eq!(Failure::Core(disagreement).code(), 2);
        assert_eq!(Failure::Core(Error::InvariantViolation(String::new())).code(), 2);
        assert_eq!(Failure::Core(Error::EmptyGraph).code(), 1);
        assert_eq!(Failure::Io(String::new()).code(), 1);
    }

    #[test]
    fn run_in_process() {
        let args: Vec<String> = ["dbr", "classify", "-"].map(String::from).to_vec();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&args, &mut "0 1\n1 2\n2 3\n3 0\n".as_bytes(), &mut out, &mut err);
        assert_eq!((code, out.as_slice(), err.len()), (0, &b"BOTH\n"[..], 0));
    }
}
