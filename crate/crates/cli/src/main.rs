//! Command-line front end: session configuration, enumeration, operator
//! application, dictionaries, truncation, defect and block queries, vacuum
//! paths, and the verification suites — every subcommand a thin adapter over
//! the library, emitting canonical JSON on standard output.
//!
//! Exit status: `0` on success (and on a fully passing verification), `1`
//! when a verification subcommand finds a failing check, `2` on malformed
//! input, which is reported as a JSON object `{"error": …}`.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use superwedge::category_o::{
    e_class, f_class, from_pattern, r_lambda, to_pattern, truncate_class, VermaVector,
};
use superwedge::fock::{
    divided_power, k_act, specialize_q1, vacuum_reduction_path, FockVector, Gen,
};
use superwedge::indexset::{enumerate, kappa, Pattern, Shape};
use superwedge::json;
use superwedge::suite::{run_verify, VerifyOptions};
use superwedge::superdual::{transport, verify_superduality, DualityContext};
use superwedge::{Error, Result};

#[derive(Parser)]
#[command(
    name = "superwedge",
    version,
    about = "Exact pattern combinatorics: enumeration, quantum and class-level \
             operators, weight dictionaries, and verification suites",
    arg_required_else_help = true
)]
struct Cli {
    /// Session configuration file, JSON:
    /// {"shape": {...}, "default_level": R, "q_mode": "quantum"|"classical"}.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Shape override: inline JSON {"n": [...], "c": [...], "epsilon": B} or
    /// a file containing that object.
    #[arg(long, global = true, value_name = "FILE|JSON")]
    shape: Option<String>,

    /// Window level; defaults to the session's default level.
    #[arg(long, global = true, value_name = "R")]
    level: Option<u32>,

    /// Coefficient mode for operator output.
    #[arg(long, global = true, value_enum, value_name = "MODE")]
    q: Option<QMode>,

    /// Worker count for the verification subcommands.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QMode {
    Quantum,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    E,
    F,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassGenArg {
    E,
    F,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every pattern of the session shape at the window level.
    Enumerate,

    /// Apply a quantum generator (a divided power for e/f, a signed power
    /// for k) to a vector.
    Act {
        #[arg(long, value_enum)]
        gen: GenArg,
        /// Generator index.
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        /// Divided power for e/f (non-negative); signed power for k.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        p: i64,
        /// "kappa", "-" (stdin), "@FILE", or inline JSON: a pattern object
        /// or a vector array.
        #[arg(long, default_value = "-")]
        input: String,
    },

    /// Apply a class-level translation operator to a combination of classes.
    VermaAct {
        #[arg(long, value_enum)]
        gen: ClassGenArg,
        /// Generator index.
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        /// "kappa", "-" (stdin), "@FILE", or inline JSON: a pattern object
        /// or an integer-coefficient vector array.
        #[arg(long, default_value = "-")]
        input: String,
    },

    /// Convert between dominant integral weights and patterns.
    Dict {
        #[command(subcommand)]
        op: DictOp,
    },

    /// Drop the terms of a class combination not realizable at the window
    /// level.
    Truncate {
        /// "kappa", "-" (stdin), "@FILE", or inline JSON vector.
        #[arg(long, default_value = "-")]
        input: String,
    },

    /// Report the defect of a pattern (at the window level when --level is
    /// given, otherwise at its native level).
    Defect {
        /// "kappa", "-" (stdin), "@FILE", or inline pattern JSON.
        #[arg(long, default_value = "-")]
        input: String,
    },

    /// Report the block key of a pattern, optionally with every block member
    /// at the window level.
    Block {
        /// "kappa", "-" (stdin), "@FILE", or inline pattern JSON.
        #[arg(long, default_value = "-")]
        input: String,
        /// Also list the block members at the window level.
        #[arg(long)]
        members: bool,
    },

    /// Print the extremal pattern of the session shape at the window level.
    Kappa,

    /// Print the divided-power product carrying the extremal vector one
    /// level above the window down to the window's extremal vector.
    Path,

    /// Run the verification suites; exit 0 only if every check passes.
    Verify {
        /// Run every suite (also the default when no suite flag is given).
        #[arg(long)]
        all: bool,
        /// Quantum relation families on every basis vector.
        #[arg(long)]
        relations: bool,
        /// Weight dictionary vs. q=1 actions vs. class formulas.
        #[arg(long)]
        tpc2: bool,
        /// Ideal difference identities across nearby levels.
        #[arg(long)]
        ideals: bool,
        /// Defect level-independence and extremal vanishing.
        #[arg(long)]
        defect: bool,
        /// Tail-charge transport: bijection, poset, intertwining.
        #[arg(long)]
        superdual: bool,
    },

    /// Transport and verification across the two tail charges.
    Superdual {
        #[command(subcommand)]
        op: SuperdualOp,
    },
}

#[derive(Subcommand)]
enum DictOp {
    /// Weight {"delta": [...], "level": R} to its pattern.
    ToPattern {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Pattern to its dominant weight at the window level.
    FromPattern {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Minimal window level of a pattern.
    RLambda {
        #[arg(long, default_value = "-")]
        input: String,
    },
}

#[derive(Subcommand)]
enum SuperdualOp {
    /// Re-tag a pattern with the other tail charge.
    Transport {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Check transport bijectivity, poset agreement, and classical
    /// intertwining up to a depth.
    Verify {
        /// Enumeration depth; defaults to the window level.
        #[arg(long, value_name = "R")]
        depth: Option<u32>,
        /// Smallest generator index checked.
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        j_min: i64,
        /// Largest generator index checked.
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        j_max: i64,
    },
}

struct Session {
    shape: Shape,
    default_level: u32,
    q_mode: QMode,
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Resolve an `--input` argument: `-` reads standard input, `@FILE` reads a
/// file, anything else is taken verbatim.
fn read_payload(raw: &str) -> Result<String> {
    if raw == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        Ok(text)
    } else if let Some(path) = raw.strip_prefix('@') {
        read_file(Path::new(path))
    } else {
        Ok(raw.to_string())
    }
}

/// Resolve a `--shape` argument: inline JSON when it looks like an object,
/// otherwise a file path.
fn parse_shape_arg(raw: &str) -> Result<Shape> {
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        read_file(Path::new(raw))?
    };
    json::shape_from_json(&parse_json(&text)?)
}

fn load_session(cli: &Cli) -> Result<Session> {
    let mut shape = Shape::new(vec![1], vec![0], 0).expect("the base shape is valid");
    let mut default_level = 1u32;
    let mut q_mode = QMode::Quantum;

    if let Some(path) = &cli.config {
        let value = parse_json(&read_file(path)?)?;
        let map = value
            .as_object()
            .ok_or_else(|| Error::Parse("config: expected a JSON object".into()))?;
        let shape_value = map
            .get("shape")
            .ok_or_else(|| Error::Parse("config: missing field \"shape\"".into()))?;
        shape = json::shape_from_json(shape_value)?;
        default_level = shape.min_level();
        if let Some(level_value) = map.get("default_level") {
            let level = level_value
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("config: default_level must be a level".into()))?;
            if level < shape.min_level() {
                return Err(Error::Parse(format!(
                    "config: default_level {level} is below the minimal window level {}",
                    shape.min_level()
                )));
            }
            default_level = level;
        }
        if let Some(mode_value) = map.get("q_mode") {
            q_mode = match mode_value.as_str() {
                Some("quantum") => QMode::Quantum,
                Some("classical") => QMode::Classical,
                _ => {
                    return Err(Error::Parse(
                        "config: q_mode must be \"quantum\" or \"classical\"".into(),
                    ))
                }
            };
        }
    }

    if let Some(raw) = &cli.shape {
        shape = parse_shape_arg(raw)?;
        default_level = default_level.max(shape.min_level());
    }
    if let Some(q) = cli.q {
        q_mode = q;
    }
    Ok(Session {
        shape,
        default_level,
        q_mode,
    })
}

/// A pattern argument: the session's extremal pattern for "kappa", otherwise
/// pattern JSON (which carries its own shape).
fn input_pattern(raw: &str, session: &Session, level: u32) -> Result<Pattern> {
    if raw == "kappa" {
        return kappa(&session.shape, level);
    }
    json::pattern_from_json(&parse_json(&read_payload(raw)?)?)
}

fn require_session_shape(p: &Pattern, session: &Session) -> Result<()> {
    if p.shape() == &session.shape {
        Ok(())
    } else {
        Err(Error::ShapeMismatch)
    }
}

/// A quantum vector argument: a pattern object becomes its basis vector, an
/// array is a full vector; either must live over the session shape.
fn input_fock_vector(raw: &str, session: &Session, level: u32) -> Result<FockVector> {
    if raw == "kappa" {
        return Ok(FockVector::basis(kappa(&session.shape, level)?));
    }
    let value = parse_json(&read_payload(raw)?)?;
    if value.is_array() {
        json::fock_vector_from_json(&value, &session.shape)
    } else {
        let p = json::pattern_from_json(&value)?;
        require_session_shape(&p, session)?;
        Ok(FockVector::basis(p))
    }
}

/// A class-combination argument, in the integer-coefficient vector format.
fn input_class_vector(raw: &str, session: &Session, level: u32) -> Result<VermaVector> {
    if raw == "kappa" {
        return Ok(VermaVector::unit(kappa(&session.shape, level)?));
    }
    let value = parse_json(&read_payload(raw)?)?;
    if value.is_array() {
        json::classical_vector_from_json(&value, &session.shape)
    } else {
        let p = json::pattern_from_json(&value)?;
        require_session_shape(&p, session)?;
        Ok(VermaVector::unit(p))
    }
}

fn emit(value: &Value) {
    println!("{}", json::to_canonical_string(value));
}

/// Build a JSON object; callers list keys in alphabetical order so the
/// canonical rendering stays byte-reproducible.
fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn exit_for(report_pass: bool) -> ExitCode {
    if report_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let session = load_session(&cli)?;
    let level = cli.level.unwrap_or(session.default_level);
    let workers = cli.workers.unwrap_or(1);

    match cli.command {
        Cmd::Enumerate => {
            let patterns = enumerate(&session.shape, level, None)?;
            let items: Vec<Value> = patterns.iter().map(json::pattern_to_json).collect();
            emit(&Value::from(items));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Act { gen, j, p, input } => {
            let v = input_fock_vector(&input, &session, level)?;
            let out = match gen {
                GenArg::K => {
                    let mut cur = v;
                    for _ in 0..p.unsigned_abs() {
                        cur = k_act(j, &cur, level, p < 0)?;
                    }
                    cur
                }
                GenArg::E | GenArg::F => {
                    let power = u32::try_from(p).map_err(|_| {
                        Error::Parse("divided powers of e/f take a non-negative --p".into())
                    })?;
                    let g = if matches!(gen, GenArg::E) {
                        Gen::E
                    } else {
                        Gen::F
                    };
                    divided_power(g, j, power, &v, level)?
                }
            };
            match session.q_mode {
                QMode::Quantum => emit(&json::fock_vector_to_json(&out)),
                QMode::Classical => emit(&json::classical_vector_to_json(&specialize_q1(&out))),
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::VermaAct { gen, j, input } => {
            let v = input_class_vector(&input, &session, level)?;
            let out = match gen {
                ClassGenArg::F => f_class(j, &v)?,
                ClassGenArg::E => e_class(j, &v)?,
            };
            emit(&json::classical_vector_to_json(&out));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Dict { op } => {
            match op {
                DictOp::ToPattern { input } => {
                    let value = parse_json(&read_payload(&input)?)?;
                    let w = json::integral_weight_from_json(&value, &session.shape)?;
                    emit(&json::pattern_to_json(&to_pattern(&w)?));
                }
                DictOp::FromPattern { input } => {
                    let p = input_pattern(&input, &session, level)?;
                    emit(&json::integral_weight_to_json(&from_pattern(&p, level)?));
                }
                DictOp::RLambda { input } => {
                    let p = input_pattern(&input, &session, level)?;
                    emit(&obj(vec![("r_lambda", Value::from(r_lambda(&p)))]));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Truncate { input } => {
            let v = input_class_vector(&input, &session, level)?;
            emit(&json::classical_vector_to_json(&truncate_class(&v, level)));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Defect { input } => {
            let p = input_pattern(&input, &session, level)?;
            let d = match cli.level {
                Some(r) => p.defect_at(r)?,
                None => p.defect()?,
            };
            emit(&obj(vec![("defect", Value::from(d))]));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Block { input, members } => {
            let p = input_pattern(&input, &session, level)?;
            let key = p.block_key();
            let mut entries = vec![("key", json::block_key_to_json(&key))];
            if members {
                let list = enumerate(p.shape(), level, Some(&key))?;
                let items: Vec<Value> = list.iter().map(json::pattern_to_json).collect();
                entries.push(("members", Value::from(items)));
            }
            emit(&obj(entries));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Kappa => {
            emit(&json::pattern_to_json(&kappa(&session.shape, level)?));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Path => {
            emit(&json::path_to_json(&vacuum_reduction_path(
                &session.shape,
                level,
            )?));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Verify {
            all,
            relations,
            tpc2,
            ideals,
            defect,
            superdual,
        } => {
            let any = relations || tpc2 || ideals || defect || superdual;
            let opts = if all || !any {
                VerifyOptions::all(level, workers)
            } else {
                VerifyOptions {
                    relations,
                    tpc2,
                    ideals,
                    defect,
                    superdual,
                    level,
                    workers,
                }
            };
            let report = run_verify(&session.shape, &opts)?;
            emit(&json::report_to_json(&report));
            Ok(exit_for(report.pass()))
        }

        Cmd::Superdual { op } => match op {
            SuperdualOp::Transport { input } => {
                let p = input_pattern(&input, &session, level)?;
                let ctx = DualityContext::new(&session.shape)?;
                emit(&json::pattern_to_json(&transport(&ctx, &p)?));
                Ok(ExitCode::SUCCESS)
            }
            SuperdualOp::Verify {
                depth,
                j_min,
                j_max,
            } => {
                if j_min > j_max {
                    return Err(Error::Parse(format!(
                        "empty generator window: --j-min {j_min} exceeds --j-max {j_max}"
                    )));
                }
                let ctx = DualityContext::new(&session.shape)?;
                let js: Vec<i64> = (j_min..=j_max).collect();
                let report = verify_superduality(&ctx, depth.unwrap_or(level), &js, workers)?;
                emit(&json::report_to_json(&report));
                Ok(exit_for(report.pass()))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = Error::Parse(e.to_string());
            emit(&json::error_to_json(&err));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            emit(&json::error_to_json(&err));
            ExitCode::from(2)
        }
    }
}
