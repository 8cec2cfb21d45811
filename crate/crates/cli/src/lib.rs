//! The `dpack` command line.
//!
//! Every subcommand reads versioned JSON documents (or packing CSV tables),
//! writes one result document and maps the outcome to an exit status:
//! 0 success, 1 input error, 2 non-convergence, 3 assertion failure.

mod commands;
mod docs;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

pub use commands::{FlowCmd, GenCmd, GraphCmd, ModCmd, PackCmd};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

/// Parsed command line: the full configuration of one run.
#[derive(Parser, Debug, Serialize)]
#[command(name = "dpack", version, about = "Sphere packings, vertex extremal length and isoperimetry at desk scale")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct GlobalArgs {
    /// Worker threads for the parallel parts.
    #[arg(long, global = true, env = "DPACK_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Seed for sampling subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Omit nondeterministic metadata (the timestamp) from documents.
    #[arg(long, global = true)]
    pub canonical: bool,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the command's plot series as CSV.
    #[arg(long, global = true)]
    pub plot_csv: Option<PathBuf>,
    /// Output encoding; `csv` applies to packing outputs only and carries no run metadata.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Document)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Document,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Packing validation, tangency, uniformity, census and normalization.
    #[command(subcommand)]
    Pack(PackCmd),
    /// Balls, distances, boundaries, hulls, Cheeger constants and profiles of graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Vertex p-modulus: solve, probe, certificate and divergence diagnostics.
    #[command(subcommand)]
    Mod(ModCmd),
    /// The water-flow exploration of a vertex metric.
    #[command(subcommand)]
    Flow(FlowCmd),
    /// Generate packings and graphs.
    #[command(subcommand)]
    Gen(GenCmd),
}

/// Why a run did not finish cleanly.
#[derive(Debug)]
pub enum Failure {
    Input(String),
}

impl From<dpack_core::Error> for Failure {
    fn from(e: dpack_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Outcome flag of a command that produced a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged(String),
    AssertionFailed(String),
}

/// What a command hands back for writing.
pub struct Output {
    pub doc: Value,
    /// CSV rendering for `--format csv`, when the output is a packing.
    pub csv: Option<String>,
    pub plot: Option<String>,
    pub status: Status,
}

impl Output {
    pub fn doc(doc: Value) -> Self {
        Self {
            doc,
            csv: None,
            plot: None,
            status: Status::Ok,
        }
    }

    pub fn with_plot(mut self, plot: String) -> Self {
        self.plot = Some(plot);
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

impl RunConfig {
    fn command_name(&self) -> String {
        let (group, cmd) = match &self.command {
            Command::Pack(c) => ("pack", c.name()),
            Command::Graph(c) => ("graph", c.name()),
            Command::Mod(c) => ("mod", c.name()),
            Command::Flow(c) => ("flow", c.name()),
            Command::Gen(c) => ("gen", c.name()),
        };
        format!("{group} {cmd}")
    }
}

/// Runs the configured subcommand and returns its document, unwritten.
pub fn dispatch(config: &RunConfig) -> Result<Output, Failure> {
    if config.global.threads == 0 {
        return Err(Failure::Input("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.global.threads)
        .build()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    let g = &config.global;
    pool.install(|| match &config.command {
        Command::Pack(c) => commands::pack(c, g),
        Command::Graph(c) => commands::graph(c, g),
        Command::Mod(c) => commands::modulus(c, g),
        Command::Flow(c) => commands::flow(c, g),
        Command::Gen(c) => commands::generate(c, g),
    })
}

/// Parses `args` (program name first), runs, writes and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&config, stdout) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::NotConverged(msg)) => {
            let _ = writeln!(stderr, "dpack: not converged: {msg}");
            EXIT_NONCONVERGENCE
        }
        Ok(Status::AssertionFailed(msg)) => {
            let _ = writeln!(stderr, "dpack: assertion failed: {msg}");
            EXIT_ASSERTION
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "dpack: error: {msg}");
            EXIT_INPUT
        }
    }
}

fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<Status, Failure> {
    let out = dispatch(config)?;
    let g = &config.global;
    let text = match (g.format, &out.csv) {
        (OutputFormat::Csv, Some(csv)) => csv.clone(),
        (OutputFormat::Csv, None) => return Err(Failure::Input("--format csv is only available for packing outputs".into())),
        (OutputFormat::Document, _) => {
            let run = docs::RunInfo {
                command: config.command_name(),
                config: serde_json::to_value(&config.command).expect("config serializes"),
                seed: g.seed,
                threads: g.threads,
                canonical: g.canonical,
            };
            let doc = docs::with_run(out.doc, &run);
            serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
        }
    };
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("stdout: {e}")))?,
    }
    if let Some(path) = &g.plot_csv {
        let plot = out
            .plot
            .ok_or_else(|| Failure::Input(format!("{} has no plot series", config.command_name())))?;
        std::fs::write(path, plot).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(out.status)
}
