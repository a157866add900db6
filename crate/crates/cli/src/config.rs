//! Command-line parsing and validation into a [`RunConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

/// Environment variable naming the default directory for reports.
pub const OUTPUT_DIR_ENV: &str = "OPERADKIT_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Usage(#[from] clap::Error),

    #[error("{flag}: {message}")]
    Invalid { flag: &'static str, message: String },
}

impl ConfigError {
    fn invalid(flag: &'static str, message: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            flag,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "operadkit",
    version,
    about = "Exact verification suites for operads, bar constructions and truncation towers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions and characters of the operad's terms.
    Dims,
    /// Homology of the bar construction, compared with the Koszul dual.
    Bar,
    /// Degree concentration of `B(τ_n𝒪, 𝒪, 𝟏)(d)` and the tower maps.
    KnTable,
    /// The counit `ΩB𝒪 → 𝒪` is a quasi-isomorphism.
    KoszulCheck,
    /// The bar-term formula through the truncated cobar construction.
    BarTerm,
    /// Cotangent fiber, truncation tower, π₀ and graded-fiber suites on an
    /// algebra file.
    Algebra {
        /// Algebra presentation document.
        #[arg(long, value_name = "PATH")]
        algebra_file: PathBuf,
    },
    /// Operad axioms, and algebra axioms when an algebra file is given.
    Axioms {
        #[arg(long, value_name = "PATH")]
        algebra_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperadKind {
    Com,
    Ass,
    Lie,
}

impl OperadKind {
    pub fn name(self) -> &'static str {
        match self {
            OperadKind::Com => "com",
            OperadKind::Ass => "ass",
            OperadKind::Lie => "lie",
        }
    }

    /// The largest arity allowed without `--allow-large`.
    pub fn arity_cap(self) -> usize {
        match self {
            OperadKind::Com | OperadKind::Lie => 7,
            OperadKind::Ass => 6,
        }
    }
}

/// Arity cap for operads read from a file.
pub const FILE_ARITY_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "txt",
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Bundled operad.
    #[arg(long, global = true, value_enum, conflicts_with = "operad_file")]
    pub operad: Option<OperadKind>,

    /// Operad presentation document.
    #[arg(long, global = true, value_name = "PATH")]
    pub operad_file: Option<PathBuf>,

    /// Largest arity examined.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub max_arity: Option<u64>,

    /// Largest number of leaves `d` in the `K_n(d)` table.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..=64))]
    pub max_d: Option<u64>,

    /// Largest weight examined on the algebra side.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub weight: Option<u64>,

    /// Largest tower level `n` examined on the algebra side.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub max_n: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Report destination; defaults to `$OPERADKIT_OUTPUT_DIR/<command>.<ext>`
    /// when that variable is set, and standard output otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Seed echoed into the report for reproducible reruns.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Permit bounds above the default safety caps.
    #[arg(long, global = true)]
    pub allow_large: bool,

    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum OperadSource {
    Builtin(OperadKind),
    File(PathBuf),
}

impl OperadSource {
    pub fn arity_cap(&self) -> usize {
        match self {
            OperadSource::Builtin(k) => k.arity_cap(),
            OperadSource::File(_) => FILE_ARITY_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Dims,
    Bar,
    KnTable,
    KoszulCheck,
    BarTerm,
    Algebra,
    Axioms,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Dims => "dims",
            CommandKind::Bar => "bar",
            CommandKind::KnTable => "kn-table",
            CommandKind::KoszulCheck => "koszul-check",
            CommandKind::BarTerm => "bar-term",
            CommandKind::Algebra => "algebra",
            CommandKind::Axioms => "axioms",
        }
    }
}

/// A validated run: every bound resolved to a concrete value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub operad: Option<OperadSource>,
    pub algebra_file: Option<PathBuf>,
    pub max_arity: Option<usize>,
    pub max_d: Option<usize>,
    pub weight: Option<usize>,
    pub max_n: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub allow_large: bool,
    pub timing: bool,
}

/// Parses and validates command-line arguments (the first item is the
/// program name).
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    RunConfig::from_cli(cli)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, ConfigError> {
        let c = cli.common;
        let as_usize = |v: Option<u64>| v.map(|x| x as usize);
        let (command, algebra_file) = match cli.command {
            Command::Dims => (CommandKind::Dims, None),
            Command::Bar => (CommandKind::Bar, None),
            Command::KnTable => (CommandKind::KnTable, None),
            Command::KoszulCheck => (CommandKind::KoszulCheck, None),
            Command::BarTerm => (CommandKind::BarTerm, None),
            Command::Algebra { algebra_file } => (CommandKind::Algebra, Some(algebra_file)),
            Command::Axioms { algebra_file } => (CommandKind::Axioms, algebra_file),
        };
        let operad = match (c.operad, c.operad_file) {
            (Some(k), None) => Some(OperadSource::Builtin(k)),
            (None, Some(p)) => Some(OperadSource::File(p)),
            (None, None) => None,
            (Some(_), Some(_)) => {
                return Err(ConfigError::invalid(
                    "--operad",
                    "conflicts with --operad-file",
                ))
            }
        };
        let mut cfg = RunConfig {
            command,
            operad,
            algebra_file,
            max_arity: None,
            max_d: None,
            weight: None,
            max_n: None,
            format: c.format,
            output: c.output,
            seed: c.seed,
            allow_large: c.allow_large,
            timing: c.timing,
        };
        let unused = |flag: &'static str, given: bool| {
            if given {
                Err(ConfigError::invalid(
                    flag,
                    format!("not used by `{}`", command.name()),
                ))
            } else {
                Ok(())
            }
        };
        match command {
            CommandKind::Algebra => {
                if cfg.operad.is_some() {
                    return Err(ConfigError::invalid(
                        "--operad",
                        "the algebra file names its operad",
                    ));
                }
                unused("--max-arity", c.max_arity.is_some())?;
                unused("--max-d", c.max_d.is_some())?;
                let weight = as_usize(c.weight).unwrap_or(4);
                let max_n = as_usize(c.max_n).unwrap_or(3);
                if !cfg.allow_large && weight > OperadKind::Ass.arity_cap() {
                    return Err(ConfigError::invalid(
                        "--weight",
                        format!(
                            "{weight} exceeds the safety cap {}; pass --allow-large to override",
                            OperadKind::Ass.arity_cap()
                        ),
                    ));
                }
                if max_n > weight {
                    return Err(ConfigError::invalid(
                        "--max-n",
                        format!("{max_n} exceeds --weight {weight}"),
                    ));
                }
                cfg.weight = Some(weight);
                cfg.max_n = Some(max_n);
            }
            _ => {
                let Some(source) = cfg.operad.clone() else {
                    return Err(ConfigError::invalid(
                        "--operad",
                        "required: pass --operad or --operad-file",
                    ));
                };
                unused("--weight", c.weight.is_some())?;
                unused("--max-n", c.max_n.is_some())?;
                let cap = source.arity_cap();
                if command == CommandKind::KnTable {
                    unused("--max-arity", c.max_arity.is_some())?;
                    let max_d = as_usize(c.max_d).unwrap_or(4);
                    check_cap("--max-d", max_d, cap - 1, cfg.allow_large)?;
                    cfg.max_d = Some(max_d);
                } else {
                    unused("--max-d", c.max_d.is_some())?;
                    let default = match command {
                        CommandKind::Dims | CommandKind::Axioms => 5,
                        _ => 4,
                    };
                    let max_arity = as_usize(c.max_arity).unwrap_or(default);
                    if command == CommandKind::BarTerm && max_arity < 2 {
                        return Err(ConfigError::invalid(
                            "--max-arity",
                            "the bar-term suite needs at least arity 2",
                        ));
                    }
                    check_cap("--max-arity", max_arity, cap, cfg.allow_large)?;
                    cfg.max_arity = Some(max_arity);
                }
            }
        }
        Ok(cfg)
    }

    /// Where the report goes, if not standard output.
    pub fn destination(&self, output_dir: Option<PathBuf>) -> Option<PathBuf> {
        self.output.clone().or_else(|| {
            output_dir.map(|dir| {
                dir.join(format!(
                    "{}.{}",
                    self.command.name(),
                    self.format.extension()
                ))
            })
        })
    }
}

fn check_cap(
    flag: &'static str,
    value: usize,
    cap: usize,
    allow_large: bool,
) -> Result<(), ConfigError> {
    if value > cap && !allow_large {
        return Err(ConfigError::invalid(
            flag,
            format!("{value} exceeds the safety cap {cap}; pass --allow-large to override"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, ConfigError> {
        parse_args(std::iter::once("operadkit").chain(args.split_whitespace()))
    }

    #[test]
    fn defaults_are_resolved() {
        let c = parse("dims --operad ass").unwrap();
        assert_eq!(c.max_arity, Some(5));
        assert_eq!(c.operad, Some(OperadSource::Builtin(OperadKind::Ass)));
        let c = parse("kn-table --operad com").unwrap();
        assert_eq!((c.max_arity, c.max_d), (None, Some(4)));
        let c = parse("algebra --algebra-file a.json").unwrap();
        assert_eq!((c.weight, c.max_n), (Some(4), Some(3)));
    }

    #[test]
    fn caps_need_acknowledgement() {
        assert!(parse("dims --operad com --max-arity 7").is_ok());
        let e = parse("dims --operad ass --max-arity 7").unwrap_err();
        assert!(matches!(
            e,
            ConfigError::Invalid {
                flag: "--max-arity",
                ..
            }
        ));
        assert!(parse("dims --operad ass --max-arity 7 --allow-large").is_ok());
        assert!(parse("kn-table --operad ass --max-d 6").is_err());
        assert!(parse("kn-table --operad lie --max-d 6").is_ok());
    }

    #[test]
    fn validation_names_the_flag() {
        let e = parse("dims").unwrap_err();
        assert!(matches!(
            e,
            ConfigError::Invalid {
                flag: "--operad",
                ..
            }
        ));
        let e = parse("bar --operad com --weight 3").unwrap_err();
        assert!(matches!(
            e,
            ConfigError::Invalid {
                flag: "--weight",
                ..
            }
        ));
        assert!(matches!(
            parse("dims --operad com --max-arity 0").unwrap_err(),
            ConfigError::Usage(_)
        ));
        assert!(matches!(
            parse("dims --operad pre-lie").unwrap_err(),
            ConfigError::Usage(_)
        ));
        assert!(matches!(
            parse("dims --operad com --operad-file x.json").unwrap_err(),
            ConfigError::Usage(_)
        ));
    }

    #[test]
    fn destination_prefers_explicit_output() {
        let c = parse("bar --operad com --format csv").unwrap();
        assert_eq!(c.destination(None), None);
        assert_eq!(
            c.destination(Some("out".into())),
            Some(PathBuf::from("out/bar.csv"))
        );
        let c = parse("bar --operad com --output r.json").unwrap();
        assert_eq!(
            c.destination(Some("out".into())),
            Some(PathBuf::from("r.json"))
        );
    }
}
