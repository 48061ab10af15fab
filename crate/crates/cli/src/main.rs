use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tetrapet::bundle::{Interval, Space};
use tetrapet::exactnum::{parse_rat, Rat};
use tetrapet_cli::commands::{self, Format, InputError, Output, TilingParam, VerifyTarget};

#[derive(Parser)]
#[command(
    name = "tetrapet",
    version,
    about = "Exact tetrahedral twist PETs: pictures, renormalization and proof checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Svg => Format::Svg,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Domain and image partitions of the map at one parameter.
    Partition {
        #[arg(long, value_parser = rat_arg)]
        s: Rat,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodic tiling at a rational parameter or near a quadratic surd.
    Tiling {
        #[arg(long, value_parser = rat_arg, required_unless_present = "surd", conflicts_with = "surd")]
        s: Option<Rat>,
        /// `sqrt2-1` or `a+b*sqrt(n)`; the map is run at a convergent.
        #[arg(long, requires = "depth")]
        surd: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        /// Longest period looked for.
        #[arg(long, default_value_t = 1 << 16)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Renormalization arithmetic.
    Renorm {
        #[command(subcommand)]
        op: RenormOp,
    },
    /// Maximal domains of the parameter bundle over an interval.
    Domains {
        #[arg(long, value_parser = space_arg)]
        space: Space,
        #[arg(long, value_parser = interval_arg)]
        interval: Interval,
        #[arg(long, default_value_t = 1 << 14)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the list in certificate format.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Run a check battery: a23, a24, half or at:<p/q>.
    Verify {
        target: String,
        #[arg(long, default_value_t = 1 << 14)]
        max_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RenormOp {
    /// Coding sequence of a rational.
    Code {
        #[arg(value_parser = rat_arg)]
        s: Rat,
        #[arg(long, value_enum, default_value = "svg", hide = true)]
        format: FormatArg,
    },
    /// Splitted expansion of a rational or a surd.
    Split {
        s: String,
        /// Digit pairs shown for a surd.
        #[arg(long, default_value_t = 8)]
        pairs: usize,
    },
    /// Value of a comma-separated splitted expansion.
    Eval {
        #[arg(allow_hyphen_values = true)]
        digits: String,
    },
    /// Endpoints of a named interval, e.g. `A 2 3`.
    Interval { family: String, m: i64, n: i64 },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn space_arg(s: &str) -> Result<Space, String> {
    s.parse::<Space>().map_err(|e| e.to_string())
}

fn interval_arg(s: &str) -> Result<Interval, String> {
    s.parse::<Interval>().map_err(|e| e.to_string())
}

fn emit(o: &Output, out: Option<&PathBuf>) -> Result<(), InputError> {
    for w in &o.warnings {
        eprintln!("warning: {w}");
    }
    match out {
        Some(p) => {
            std::fs::write(p, &o.body).map_err(|e| InputError(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{}", o.body);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, InputError> {
    let (o, out) = match cli.cmd {
        Cmd::Partition { s, format, out } => (commands::partition(&s, format.into())?, out),
        Cmd::Tiling {
            s,
            surd,
            depth,
            budget,
            max_steps,
            format,
            out,
        } => {
            let param = match (s, surd, depth) {
                (Some(s), _, _) => TilingParam::Exact(s),
                (None, Some(surd), Some(depth)) => TilingParam::Convergent { surd, depth },
                _ => return Err(InputError("give --s, or --surd with --depth".into())),
            };
            (
                commands::tiling(&param, budget, max_steps, format.into())?,
                out,
            )
        }
        Cmd::Renorm { op } => {
            let o = match op {
                RenormOp::Code { s, format } => commands::renorm_code(&s, format.into())?,
                RenormOp::Split { s, pairs } => commands::renorm_split(&s, pairs)?,
                RenormOp::Eval { digits } => commands::renorm_eval(&digits)?,
                RenormOp::Interval { family, m, n } => commands::renorm_interval(&family, m, n)?,
            };
            (o, None)
        }
        Cmd::Domains {
            space,
            interval,
            max_steps,
            format,
            out,
            cert,
        } => {
            let (o, doms) = commands::domains(space, &interval, max_steps, format.into())?;
            eprintln!("{} maximal domains", doms.len());
            if let Some(p) = cert {
                std::fs::write(&p, commands::domains_certificate(space, &interval, &doms))
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            }
            (o, out)
        }
        Cmd::Verify {
            target,
            max_steps,
            out,
        } => {
            let t: VerifyTarget = target.parse()?;
            (commands::verify(&t, max_steps)?, out)
        }
    };
    emit(&o, out.as_ref())?;
    Ok(!o.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
