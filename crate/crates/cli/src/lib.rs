//! Command-line surface over `dualspace-core`: lattice inspection, cut
//! radii, embedding evaluation and verification suites.
//!
//! Exit codes: 0 success, 1 verification failures, 2 usage or parse errors,
//! 3 math-domain errors, 4 numerical failures.

pub mod commands;
pub mod error;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use dualspace_core::verify::{Property, DEFAULT_SEED};

use crate::commands::{EmbedInput, VerifyOptions};
use crate::error::{CliError, CliResult};
use crate::input::{parse_matrix, parse_space_id, parse_vector, SpaceArg};
use crate::output::Format;

pub const SEED_ENV: &str = "DUALSPACE_SEED";

#[derive(Debug, Parser)]
#[command(name = "dualspace", version, about = "Compact/noncompact dual symmetric space embeddings")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// RNG seed (decimal or 0x-prefixed hex); overrides DUALSPACE_SEED.
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, Gram matrix and orthonormality of the integral lattice.
    LatticeInfo {
        /// Space id such as gr-real:2:3, sphere:1:2 or su3.
        #[arg(long)]
        space: String,
    },
    /// Tangent cut radius along one flat direction.
    CutRadius {
        #[arg(long)]
        space: String,
        /// Direction, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Read the direction in lattice coordinates instead of orthonormal ones.
        #[arg(long)]
        lattice_coords: bool,
    },
    /// Cut radius over a grid of unit flat directions.
    CutlocusGrid {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 360)]
        samples: usize,
    },
    /// Evaluate p, g, f or b on one input.
    Embed {
        #[arg(long)]
        space: String,
        /// p, g, f, b or all.
        #[arg(long, default_value = "all")]
        method: String,
        /// Matrix file, CSV or JSON; `-` reads stdin.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Treat the input as a noncompact group element instead of a graph block.
        #[arg(long)]
        group: bool,
        /// Flat parameter for the rank-one b map.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Run randomized property suites.
    Verify {
        /// Space id, or `all` for the catalog.
        #[arg(long, default_value = "all")]
        space: String,
        /// Property name, or `all`.
        #[arg(long, default_value = "all")]
        property: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Override the per-property tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// Seed from the flag, then the environment, then the default.
pub fn resolve_seed(flag: Option<&str>, env: Option<&str>) -> CliResult<u64> {
    let Some(raw) = flag.or(env) else {
        return Ok(DEFAULT_SEED);
    };
    let t = raw.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse::<u64>(),
    };
    parsed.map_err(|_| CliError::Usage(format!("bad seed '{raw}'")))
}

fn read_input(path: Option<&PathBuf>, stdin: &mut dyn Read) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => text = std::fs::read_to_string(p)?,
        _ => {
            stdin.read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn space_or_all(s: &str) -> CliResult<Option<SpaceArg>> {
    if s.trim().eq_ignore_ascii_case("all") {
        Ok(None)
    } else {
        parse_space_id(s).map(Some)
    }
}

fn execute(cli: &Cli, env_seed: Option<&str>, stdin: &mut dyn Read, out: &mut dyn Write) -> CliResult<u8> {
    let seed = resolve_seed(cli.seed.as_deref(), env_seed)?;
    let format = cli.format;
    match &cli.command {
        Command::LatticeInfo { space } => commands::lattice_info(&parse_space_id(space)?, seed).write(format, out)?,
        Command::CutRadius { space, direction, lattice_coords } => {
            commands::cut_radius_cmd(&parse_space_id(space)?, &parse_vector(direction)?, *lattice_coords, seed)?
                .write(format, out)?
        }
        Command::CutlocusGrid { space, samples } => {
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            commands::cutlocus_grid(&parse_space_id(space)?, *samples, seed, format, out)?
        }
        Command::Embed { space, method, input, group, t } => {
            let space = parse_space_id(space)?;
            let space = space.space()?;
            let input = match t {
                Some(t) => {
                    if input.is_some() || *group {
                        return Err(CliError::Usage("--t excludes --input and --group".into()));
                    }
                    EmbedInput::Parameter(*t)
                }
                None => {
                    let m = parse_matrix(&read_input(input.as_ref(), stdin)?)?;
                    if *group {
                        EmbedInput::Group(m)
                    } else {
                        EmbedInput::Block(m)
                    }
                }
            };
            commands::embed_cmd(space, method, input, seed)?.write(format, out)?
        }
        Command::Verify { space, property, samples, tolerance } => {
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            if let Some(t) = tolerance {
                if !(t.is_finite() && *t > 0.0) {
                    return Err(CliError::Usage("--tolerance must be positive".into()));
                }
            }
            let space = space_or_all(space)?;
            let space = match &space {
                Some(s) => Some(s.space()?),
                None => None,
            };
            let property = if property.trim().eq_ignore_ascii_case("all") {
                None
            } else {
                Some(property.parse::<Property>().map_err(|e| CliError::Usage(e.to_string()))?)
            };
            let outcome = commands::verify_cmd(&VerifyOptions {
                space,
                property,
                samples: *samples,
                tolerance: *tolerance,
                seed,
            })?;
            match format {
                Format::Json => outcome.report.write(format, out)?,
                Format::Csv => commands::write_verify_csv(&outcome.reports, out)?,
            }
            return Ok(if outcome.passed { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, env_seed, stdin, out) {
        Ok(code) => code,
        Err(e) if e.is_broken_pipe() => 0,
        Err(e) => {
            let _ = writeln!(err, "dualspace: {e}");
            e.exit_code()
        }
    }
}
