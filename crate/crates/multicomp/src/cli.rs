use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multicomp_core::{build_codebook, decode_with, mix, BinaryString, Stage, SubsetSearch};

use crate::error::{CliError, CliResult};
use crate::format::{load_codebook, load_mixture, to_json, CodebookFile, MixtureFile, ShuffledReadout};
use crate::report::{rate_report, verify, DecodeReport, Scope, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "multicomp",
    version,
    about = "Build, mix, decode and verify h-MC codes"
)]
pub struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for shuffled readouts and codeword sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print JSON instead of a table (verify, rate).
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the codebook for GF(2^m) and mixtures of up to h codewords.
    Build {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        h: usize,
    },
    /// Simulate the readout of a set of codewords.
    Mix {
        #[command(flatten)]
        codebook: CodebookArg,
        /// Column indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// Write the canonical entry table instead of a shuffled readout.
        #[arg(long)]
        canonical: bool,
    },
    /// Recover the codeword set from a readout.
    Decode {
        #[command(flatten)]
        codebook: CodebookArg,
        #[arg(long)]
        mixture: PathBuf,
        #[arg(long, value_enum, default_value_t = SearchArg::Auto)]
        search: SearchArg,
        /// Record per-stage wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run an exhaustive check over a codebook.
    Verify {
        #[command(flatten)]
        codebook: CodebookArg,
        #[arg(long, value_enum)]
        scope: Scope,
        /// Number of codewords drawn for `--scope mc` (default: all).
        #[arg(long)]
        sample: Option<usize>,
        /// Cap on enumerated subsets for `bh` and `mc`.
        #[arg(long)]
        limit: Option<u128>,
    },
    /// Tabulate rates over field degrees.
    Rate {
        #[arg(long)]
        h: usize,
        /// Field degrees, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        m: Vec<u32>,
    },
}

#[derive(Debug, Args)]
pub struct CodebookArg {
    /// Codebook file written by `build`.
    #[arg(long)]
    pub codebook: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SearchArg {
    Auto,
    Table,
    BruteForce,
    Syndrome,
}

impl From<SearchArg> for SubsetSearch {
    fn from(s: SearchArg) -> Self {
        match s {
            SearchArg::Auto => SubsetSearch::Auto,
            SearchArg::Table => SubsetSearch::Table,
            SearchArg::BruteForce => SubsetSearch::BruteForce,
            SearchArg::Syndrome => SubsetSearch::Syndrome,
        }
    }
}

/// Runs one command. JSON goes to `--out` or `stdout`; tables to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let emit_json = |text: String, stdout: &mut dyn Write| -> CliResult<()> {
        match &cli.out {
            Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io("stdout".into(), e)),
        }
    };
    let print = |text: String, stdout: &mut dyn Write| -> CliResult<()> {
        stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("stdout".into(), e))
    };

    match &cli.command {
        Command::Build { m, h } => {
            let cb = build_codebook(*m, *h)?;
            emit_json(to_json(&CodebookFile::from_codebook(&cb)), stdout)
        }
        Command::Mix {
            codebook,
            indices,
            canonical,
        } => {
            let cb = load_codebook(&codebook.codebook)?;
            let strings = indices
                .iter()
                .map(|&i| multicomp_core::encode(&cb, i))
                .collect::<Result<Vec<BinaryString>, _>>()?;
            let doc = mix(&strings, cb.h())?;
            let text = if *canonical {
                to_json(&MixtureFile::from_document(&doc))
            } else {
                to_json(&ShuffledReadout::from_document(&doc, cli.seed))
            };
            emit_json(text, stdout)
        }
        Command::Decode {
            codebook,
            mixture,
            search,
            timings,
        } => {
            let cb = load_codebook(&codebook.codebook)?;
            let doc = load_mixture(mixture)?;
            let mut stages: Vec<(Stage, Option<f64>)> = Vec::new();
            let mut clock = Instant::now();
            let decoded = decode_with(&cb, &doc, (*search).into(), |stage| {
                let ms = timings.then(|| clock.elapsed().as_secs_f64() * 1e3);
                stages.push((stage, ms));
                clock = Instant::now();
            })?;
            emit_json(to_json(&DecodeReport::new(&decoded, &stages)), stdout)
        }
        Command::Verify {
            codebook,
            scope,
            sample,
            limit,
        } => {
            let cb = load_codebook(&codebook.codebook)?;
            let opts = VerifyOptions {
                sample: *sample,
                limit: *limit,
                seed: cli.seed,
            };
            let report = verify(&cb, *scope, &opts)?;
            if cli.json || cli.out.is_some() {
                emit_json(to_json(&report), stdout)?;
            }
            if !cli.json {
                print(report.to_string(), stdout)?;
            }
            if report.ok {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("scope {}", scope.name())))
            }
        }
        Command::Rate { h, m } => {
            let report = rate_report(*h, m)?;
            if cli.json || cli.out.is_some() {
                emit_json(to_json(&report), stdout)?;
            }
            if !cli.json {
                print(report.to_string(), stdout)?;
            }
            Ok(())
        }
    }
}
