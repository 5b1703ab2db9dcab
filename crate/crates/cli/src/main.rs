mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phimod::codes::ErrorCode;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "phimod", version, about = "Exact computations with filtered (φ, N)-modules in characteristic p")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Series precision; defaults to the file's value or 3p.
    #[arg(long, global = true)]
    prec: Option<usize>,
    /// Degree m of the coefficient field F_{p^m}.
    #[arg(long = "fq-degree", global = true)]
    fq_degree: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON envelope here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build L(r) and report its character and splittings.
    Simple {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: String,
    },
    /// Enumerate admissible pairs and their constants.
    Admissible {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Run the (C1) and (C2) normalisation on a factor-system file.
    Normalize { input: PathBuf },
    /// Decompose a factor system, a decomposition or a module with context.
    Decompose { input: PathBuf },
    /// Validate a module, split it, or take the kernel or cokernel of a morphism.
    Object {
        #[arg(value_enum)]
        action: ObjectAction,
        input: PathBuf,
    },
    /// Fontaine-Laffaille functor in either direction.
    Fl {
        #[arg(value_enum)]
        direction: FlDirection,
        input: PathBuf,
    },
    /// Ramification bounds.
    Bounds {
        #[arg(long)]
        p: u32,
    },
    /// Principal-unit filtration of a list of units.
    Filtrate { input: PathBuf },
    /// Run the bundled acceptance suites.
    Selftest {
        /// Run only these criteria.
        #[arg(long)]
        criterion: Vec<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ObjectAction {
    Validate,
    Splits,
    Kernel,
    Cokernel,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FlDirection {
    /// FL module file to an object of L*.
    ToModule,
    /// Crystalline module file to its FL module.
    FromModule,
}

/// A failed run: malformed input exits with 2, domain errors with 1.
#[derive(Debug)]
pub struct Failure {
    code: String,
    message: String,
    exit: u8,
}

impl Failure {
    pub fn malformed(code: &str, message: impl Into<String>) -> Self {
        Failure { code: code.into(), message: message.into(), exit: 2 }
    }

    pub fn domain<E: ErrorCode + std::fmt::Display>(e: E) -> Self {
        Failure { code: e.code().into(), message: e.to_string(), exit: 1 }
    }

    /// Library errors raised while reading arguments count as malformed input.
    pub fn input<E: ErrorCode + std::fmt::Display>(e: E) -> Self {
        Failure { code: e.code().into(), message: e.to_string(), exit: 2 }
    }
}

/// Successful result with the run's exit status; `selftest` fails softly.
pub struct Outcome {
    pub result: Value,
    pub resolved: Map<String, Value>,
    pub exit: u8,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simple { .. } => "simple",
            Command::Admissible { .. } => "admissible",
            Command::Normalize { .. } => "normalize",
            Command::Decompose { .. } => "decompose",
            Command::Object { .. } => "object",
            Command::Fl { .. } => "fl",
            Command::Bounds { .. } => "bounds",
            Command::Filtrate { .. } => "filtrate",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn arguments(&self) -> Value {
        match self {
            Command::Simple { p, r } => json!({"p": p, "r": r}),
            Command::Admissible { p, r1, r2, s } => json!({"p": p, "r1": r1, "r2": r2, "s": s}),
            Command::Normalize { input } | Command::Decompose { input } | Command::Filtrate { input } => {
                json!({"input": input})
            }
            Command::Object { action, input } => json!({"action": format!("{action:?}").to_lowercase(), "input": input}),
            Command::Fl { direction, input } => json!({
                "direction": direction.to_possible_value().map(|v| v.get_name().to_string()),
                "input": input,
            }),
            Command::Bounds { p } => json!({"p": p}),
            Command::Selftest { criterion } => json!({"criterion": criterion}),
        }
    }
}

fn config(global: &Global, command: &Command, resolved: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("prec".into(), json!(global.prec));
    out.insert("fq_degree".into(), json!(global.fq_degree));
    out.insert("seed".into(), json!(global.seed));
    out.insert("output".into(), json!(global.output));
    out.insert("arguments".into(), command.arguments());
    out.insert("resolved".into(), Value::Object(resolved));
    Value::Object(out)
}

fn error_json(f: &Failure) -> Value {
    json!({"code": f.code, "message": f.message})
}

fn emit(envelope: &Value, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(envelope).expect("JSON values always serialise") + "\n";
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::malformed("io_error", format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let failure = Failure::malformed("usage", e.render().to_string().trim_end());
            let envelope = json!({"command": null, "config": null, "ok": false, "error": error_json(&failure)});
            println!("{}", serde_json::to_string_pretty(&envelope).expect("JSON values always serialise"));
            return ExitCode::from(failure.exit);
        }
    };
    let (envelope, exit) = match commands::dispatch(&cli.global, &cli.command) {
        Ok(out) => (
            json!({
                "command": cli.command.name(),
                "config": config(&cli.global, &cli.command, out.resolved),
                "ok": out.exit == 0,
                "result": out.result,
            }),
            out.exit,
        ),
        Err(f) => (
            json!({
                "command": cli.command.name(),
                "config": config(&cli.global, &cli.command, Map::new()),
                "ok": false,
                "error": error_json(&f),
            }),
            f.exit,
        ),
    };
    match emit(&envelope, cli.global.output.as_ref()) {
        Ok(()) => ExitCode::from(exit),
        Err(f) => {
            eprintln!("{}: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}
