mod cmd;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "edslab", version, about = "Elliptic divisibility sequences, heights, isogenies and index bounds")]
pub struct Cli {
    #[command(flatten)]
    pub cfg: RunConfig,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits.
    #[arg(long, global = true, env = "EDSLAB_PRECISION", default_value_t = 192, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, visible_alias = "json")]
    pub output: Option<PathBuf>,
    /// Pollard rho iterations allowed per factorisation.
    #[arg(long, global = true, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long = "r-max", global = true, default_value_t = 3)]
    pub r_max: u32,
}

impl RunConfig {
    pub fn prec(&self) -> usize {
        self.precision as usize
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curve invariants and reduction types.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Terms of the elliptic divisibility sequence B_nP.
    Eds {
        #[command(subcommand)]
        cmd: EdsCmd,
    },
    /// Canonical height and its local decomposition.
    Heights(CurvePoint),
    Isogeny {
        #[command(subcommand)]
        cmd: IsogenyCmd,
    },
    /// Evaluate one of the explicit index bounds.
    Bounds(Box<BoundsArgs>),
    /// Classify B_nP′ and B_nσ(P′) for n ≤ max-n.
    Sieve {
        #[command(flatten)]
        at: CurvePoint,
        #[arg(long)]
        isogeny: String,
        #[arg(long = "max-n")]
        max_n: u64,
    },
    Thue {
        #[command(subcommand)]
        cmd: ThueCmd,
    },
    /// Checks on y² = x³ − Ax.
    Ea {
        #[command(subcommand)]
        cmd: EaCmd,
    },
    /// Property checks on the bundled fixtures.
    Selftest,
}

#[derive(Args, Debug, Clone)]
pub struct CurvePoint {
    /// Weierstrass coefficients "[a1,a2,a3,a4,a6]".
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// "x,y" with rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    Info {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum EdsCmd {
    Term {
        #[command(flatten)]
        at: CurvePoint,
        #[arg(long)]
        n: u64,
    },
    Seq {
        #[command(flatten)]
        at: CurvePoint,
        #[arg(long = "max-n")]
        max_n: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsogenyCmd {
    /// Vélu isogeny from a kernel polynomial.
    Velu {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Coefficients lowest degree first ("0,1") or symbolic ("x^2-3").
        #[arg(long, allow_hyphen_values = true)]
        kernel: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Multiplication by m.
    Mult {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundName {
    Thm12,
    Siegel,
    Gap,
    David,
    Nonuniform,
    Szpiro,
    Solve,
    Bounded,
    Doubly,
    Magnified,
    Lll,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(value_enum)]
    pub name: BoundName,
    /// Measure heights from this curve, point and isogeny instead of passing them.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long)]
    pub isogeny: Option<String>,
    #[arg(long = "h-p", allow_hyphen_values = true)]
    pub h_p: Option<String>,
    #[arg(long = "h-sigma-p", allow_hyphen_values = true)]
    pub h_sigma_p: Option<String>,
    #[arg(long = "h-e", allow_hyphen_values = true)]
    pub h_e: Option<String>,
    #[arg(long = "h-e-prime", allow_hyphen_values = true)]
    pub h_e_prime: Option<String>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long = "m-prime")]
    pub m_prime: Option<String>,
    /// Szpiro ratio S, or the constant C_σ for thm12.
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub cs: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    /// n1,n2,n3 for the gap principle.
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<u64>,
    /// solve: n² ≤ a(log n + 1)^d + b with auxiliary A.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long = "big-a")]
    pub big_a: Option<String>,
    #[arg(long = "deg")]
    pub deg: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum ThueCmd {
    /// Thue instances for index n.
    Emit {
        #[command(flatten)]
        at: CurvePoint,
        #[arg(long)]
        isogeny: String,
        #[arg(long)]
        n: u64,
    },
    /// Small-box search over the emitted instances.
    Brute {
        #[command(flatten)]
        at: CurvePoint,
        #[arg(long)]
        isogeny: String,
        #[arg(long)]
        n: u64,
        #[arg(long = "box", default_value_t = 50)]
        bx: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum EaCmd {
    Check {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long = "max-n", default_value_t = 24)]
        max_n: u64,
        /// Odd m with [m]P on the bounded component, for the odd-multiple rows.
        #[arg(long)]
        m: Option<u64>,
    },
}

/// Outcome of a subcommand: a JSON document plus whether it is a partial result.
pub struct Output {
    pub value: Value,
    pub partial: bool,
    pub code: Option<u8>,
}

impl From<Value> for Output {
    fn from(value: Value) -> Output {
        Output { value, partial: false, code: None }
    }
}

fn fail(kind: &str, detail: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "detail": detail }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::from(if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 });
            }
            return fail("Usage", e.render().to_string().trim_end(), 2);
        }
    };
    if let Some(t) = cli.cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return fail("Usage", &e.to_string(), 2);
        }
    }
    let out = match cmd::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            let code = if matches!(e, edslab::Error::BudgetExhausted(_)) { 3 } else { 2 };
            return fail(e.kind(), &e.to_string(), code);
        }
    };
    let body = match cli.cfg.format {
        Format::Json => serde_json::to_string_pretty(&out.value).expect("serializable") + "\n",
        Format::Text => render::text(&out.value),
    };
    let written = match &cli.cfg.output {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        return fail("Io", &e.to_string(), 2);
    }
    match (out.code, out.partial) {
        (Some(c), _) => ExitCode::from(c),
        (None, true) => ExitCode::from(3),
        (None, false) => ExitCode::SUCCESS,
    }
}
