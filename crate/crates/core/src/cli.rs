//! Command-line front end.
//!
//! Every subcommand writes one JSON document to standard output. Exit codes:
//! 0 when the checked property holds, 1 when it fails (a certificate or
//! failing report is printed), 2 for input or usage errors, 3 when an
//! internal invariant is violated.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{self, Method};
use crate::error::{Error, Result};
use crate::fan::{self, FanCone};
use crate::generators::{self, Family, FamilySpec};
use crate::illuminate;
use crate::io;
use crate::oracle;
use crate::polytope::{HPolytope, NormalSet};
use crate::skeleton;

#[derive(Debug, Parser)]
#[command(
    name = "hadwiger",
    version,
    about = "Strong monotypy, skeletons and illumination sets of polytopes"
)]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Worker threads for subset enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Conical,
    Mss,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Conical => Method::Conical,
            MethodArg::Mss => Method::Mss,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide monotypy and strong monotypy of the normal set.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Conical)]
        method: MethodArg,
    },
    /// Extract the skeleton decomposition of a strongly monotypic normal set.
    Skeleton { file: PathBuf },
    /// Build an explicit illumination set.
    Illuminate {
        file: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Check a directions file against a polytope.
    Verify {
        file: PathBuf,
        #[arg(long)]
        directions: PathBuf,
    },
    /// Primitive-basis fan and vertex normal fan.
    Fan {
        file: PathBuf,
        #[arg(long)]
        verify_unique: bool,
    },
    /// Brute-force minimum illumination number.
    Oracle { file: PathBuf },
    /// Write a built-in polytope as JSON.
    Gen {
        family: String,
        /// Comma-separated dimensions, e.g. `3` or `2,1`.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        randomize_offsets: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Outcome {
    code: i32,
    body: Value,
}

fn ok<T: Serialize>(body: &T) -> Result<Outcome> {
    Ok(Outcome {
        code: 0,
        body: to_value(body),
    })
}

fn to_value<T: Serialize>(body: &T) -> Value {
    serde_json::to_value(body).expect("output types always serialize")
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.to_string();
            return if code == 0 {
                CommandOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return render_error(&Error::Internal(e.to_string()), cli.pretty);
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(outcome) => CommandOutput {
            code: outcome.code,
            stdout: render(&outcome.body, cli.pretty),
            stderr: String::new(),
        },
        Err(e) => render_error(&e, cli.pretty),
    }
}

fn render(body: &Value, pretty: bool) -> String {
    let mut text = if pretty {
        serde_json::to_string_pretty(body)
    } else {
        serde_json::to_string(body)
    }
    .expect("JSON values always serialize");
    text.push('\n');
    text
}

fn render_error(error: &Error, pretty: bool) -> CommandOutput {
    let mut body = json!({
        "error": error.kind(),
        "message": error.to_string(),
    });
    let extra = match error {
        Error::NotStronglyMonotypic { certificate } | Error::NotMonotypic { certificate } => {
            Some(("certificate", to_value(certificate)))
        }
        Error::Unbounded { direction } => Some(("direction", to_value(direction))),
        Error::Infeasible { multipliers } => Some(("multipliers", to_value(multipliers))),
        Error::NonSimpleVertex { point, tight } => {
            Some(("vertex", json!({ "point": point, "tight": tight })))
        }
        Error::RedundantFacet { index, .. } | Error::ZeroNormal { index } => {
            Some(("facet", json!(index)))
        }
        Error::Facet { index, .. } => Some(("facet", json!(index))),
        Error::AssignmentFailure { vertex } => Some(("vertex", to_value(vertex))),
        _ => None,
    };
    if let (Some((key, value)), Some(map)) = (extra, body.as_object_mut()) {
        map.insert(key.to_string(), value);
    }
    CommandOutput {
        code: error.exit_code(),
        stdout: render(&body, pretty),
        stderr: format!("error: {error}\n"),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<HPolytope> {
    io::parse_polytope(&read(path)?)
}

fn cone_json(normals: &NormalSet, cone: &FanCone) -> Value {
    json!({
        "generators": normals.select(&cone.generators),
        "vertex": cone.associated_vertex.as_ref().map(|v| &v.point),
    })
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Classify { file, method } => {
            let polytope = load(file)?;
            let verdict = classify::classify(polytope.normal_set(), (*method).into())?;
            Ok(Outcome {
                code: if verdict.strongly_monotypic { 0 } else { 1 },
                body: to_value(&verdict),
            })
        }
        Command::Skeleton { file } => {
            let polytope = load(file)?;
            let skeleton = skeleton::extract_skeleton(polytope.normal_set())?;
            let mut body = to_value(&skeleton);
            body["k"] = json!(skeleton.parts.len());
            body["product"] = json!(skeleton.product() as u64);
            Ok(Outcome { code: 0, body })
        }
        Command::Illuminate { file, verify } => {
            let polytope = load(file)?;
            let set = illuminate::build_illumination_set(&polytope)?;
            let mut body = to_value(&set);
            let mut code = 0;
            if *verify {
                let report = illuminate::verify_illumination(&polytope, &set)?;
                if !report.passed {
                    code = 1;
                }
                body["verification"] = to_value(&report);
            }
            Ok(Outcome { code, body })
        }
        Command::Verify { file, directions } => {
            let polytope = load(file)?;
            let (dirs, epsilon) = io::parse_directions(&read(directions)?)?;
            let report = illuminate::verify_directions(&polytope, &dirs, &epsilon)?;
            Ok(Outcome {
                code: if report.passed { 0 } else { 1 },
                body: to_value(&report),
            })
        }
        Command::Fan {
            file,
            verify_unique,
        } => {
            let polytope = load(file)?;
            let normals = polytope.normal_set();
            let bases = fan::enumerate_primitive_bases(normals)?;
            let mut body = json!({
                "primitive_bases": bases.iter().map(|c| cone_json(normals, c)).collect::<Vec<_>>(),
            });
            let mut code = 0;
            if *verify_unique {
                let report = fan::verify_fan_uniqueness(&polytope)?;
                if !report.unique {
                    code = 1;
                }
                body["uniqueness"] = to_value(&report);
            }
            body["normal_fan"] = match fan::normal_fan(&polytope) {
                Ok(cones) => Value::Array(cones.iter().map(|c| cone_json(normals, c)).collect()),
                Err(Error::NonSimpleVertex { .. }) if !*verify_unique => Value::Null,
                Err(e) => return Err(e),
            };
            Ok(Outcome { code, body })
        }
        Command::Oracle { file } => {
            let polytope = load(file)?;
            ok(&oracle::min_illumination_number(&polytope)?)
        }
        Command::Gen {
            family,
            dims,
            seed,
            randomize_offsets,
            output,
        } => {
            let family: Family = family.parse()?;
            let mut spec = FamilySpec::new(family, dims.clone());
            if *randomize_offsets {
                spec.seed = Some(seed.unwrap_or(0));
            } else if seed.is_some() {
                return Err(Error::InvalidArgument(
                    "--seed requires --randomize-offsets".into(),
                ));
            }
            let polytope = generators::generate(&spec)?;
            let doc = io::PolytopeDocument::from_polytope(&polytope);
            if let Some(path) = output {
                let text = serde_json::to_string(&doc).expect("documents serialize");
                std::fs::write(path, text + "\n").map_err(|e| {
                    Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            ok(&doc)
        }
    }
}
