//! Command-line front-end over the `vpts` library. Every verdict printed
//! here is reproducible through library calls; the CLI adds no semantics.
//!
//! Exit codes: `0` for conforms / empty / balanced-run-found and for
//! successful constructions, `1` for a failing verdict (nonconformance, a
//! nonempty language, no balanced run), `2` for usage and domain errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use vpts::doc::{load_model, save_model, Loaded, Model};
use vpts::{
    build_fault_model, check_conf, check_ioco, complement, concat_suffix, contract,
    enumerate_language, find_balanced_run, format_word, intersect, is_empty, passes, product,
    union, ConformanceSpec, EnumLimits, Error, FaultModel, Iovpts, PipelineStats, Verdict,
};

#[derive(Parser)]
#[command(
    name = "vpts",
    about = "Visibly pushdown models: closure operations and conformance checking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JsonFlag {
    /// Emit a machine-readable verdict object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check ioco-style conformance of an implementation against a
    /// deterministic specification.
    Ioco {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "impl")]
        implementation: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Check (desired, forbidden) visible conformance.
    Conf {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "impl")]
        implementation: PathBuf,
        #[arg(long)]
        desired: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Run an implementation against a saved fault model.
    Passes {
        #[arg(long = "fault-model")]
        fault_model: PathBuf,
        #[arg(long)]
        fail_state: Option<String>,
        #[arg(long = "impl")]
        implementation: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Build the complete fault model of a deterministic specification.
    FaultModel {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Synchronous product of two automata.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Intersection of two automata languages.
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Union of two automata languages.
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Complement of a deterministic automaton.
    Complement {
        a: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Concatenate a one-symbol suffix set onto an automaton language.
    Concat {
        a: PathBuf,
        /// Comma-separated alphabet symbols, e.g. "x,y".
        #[arg(long = "suffix-set")]
        suffix_set: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decide language emptiness; prints a witness when nonempty.
    Empty {
        a: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Contract a transition system, dropping unfireable pop transitions.
    Contract {
        model: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Search for a balanced run between two states of a transition system.
    Balanced {
        model: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Enumerate the bounded language of an automaton (or the observable
    /// traces of a transition system), one word per line.
    Enumerate {
        a: PathBuf,
        #[arg(long = "max-len")]
        max_len: usize,
    },
}

fn load(path: &PathBuf) -> Result<Model, Error> {
    let Loaded { model, warnings } = load_model(path)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(model)
}

fn load_iovpts(path: &PathBuf) -> Result<Iovpts, Error> {
    load(path)?.as_iovpts().cloned()
}

fn print_verdict(verdict: &Verdict, json: bool, kind: [&str; 2]) -> ExitCode {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "verdict": if verdict.conforms { kind[0] } else { kind[1] },
                "witness": verdict.witness.clone().unwrap_or_default(),
                "stats": stats_json(&verdict.stats),
            }))
            .expect("verdict serializes")
        );
    } else {
        println!(
            "verdict: {}",
            if verdict.conforms { kind[0] } else { kind[1] }
        );
        if let Some(witness) = &verdict.witness {
            println!("witness: {}", format_word(witness));
        }
        println!("note: {}", verdict.diagnostics);
    }
    if verdict.conforms {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn stats_json(stats: &PipelineStats) -> serde_json::Value {
    json!({
        "states": stats.states,
        "transitions": stats.transitions,
        "saturation_pairs": stats.saturation_pairs,
    })
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Ioco {
            spec,
            implementation,
            json,
        } => {
            let spec = load_iovpts(&spec)?;
            let imp = load_iovpts(&implementation)?;
            let verdict = check_ioco(&spec, &imp)?;
            Ok(print_verdict(&verdict, json.json, ["conforms", "fails"]))
        }
        Command::Conf {
            spec,
            implementation,
            desired,
            forbidden,
            json,
        } => {
            let spec = load_iovpts(&spec)?;
            let imp = load_iovpts(&implementation)?;
            let cs = ConformanceSpec::new(
                load(&desired)?.as_vpa()?.clone(),
                load(&forbidden)?.as_vpa()?.clone(),
            )?;
            let verdict = check_conf(&imp, &spec, &cs)?;
            Ok(print_verdict(&verdict, json.json, ["conforms", "fails"]))
        }
        Command::Passes {
            fault_model,
            fail_state,
            implementation,
            json,
        } => {
            let tester = load_iovpts(&fault_model)?;
            let imp = load_iovpts(&implementation)?;
            let fm = FaultModel::from_parts(tester, fail_state.unwrap_or_else(|| "_fail".into()))?;
            let verdict = passes(&imp, &fm)?;
            Ok(print_verdict(&verdict, json.json, ["passes", "fails"]))
        }
        Command::FaultModel { spec, out } => {
            let spec = load_iovpts(&spec)?;
            let fm = build_fault_model(&spec)?;
            save_model(&Model::Iovpts(fm.model().clone()), &out)?;
            eprintln!(
                "wrote fault model with fail state `{}` to {}",
                fm.fail_state(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Product { a, b, out } => {
            let result = product(load(&a)?.as_vpa()?, load(&b)?.as_vpa()?)?;
            save_model(&Model::Vpa(result), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect { a, b, out } => {
            let result = intersect(load(&a)?.as_vpa()?, load(&b)?.as_vpa()?)?;
            save_model(&Model::Vpa(result), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Union { a, b, out } => {
            let result = union(load(&a)?.as_vpa()?, load(&b)?.as_vpa()?)?;
            save_model(&Model::Vpa(result), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Complement { a, out } => {
            let result = complement(load(&a)?.as_vpa()?)?;
            save_model(&Model::Vpa(result), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Concat { a, suffix_set, out } => {
            let suffix: BTreeSet<String> = suffix_set
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            let result = concat_suffix(load(&a)?.as_vpa()?, &suffix)?;
            save_model(&Model::Vpa(result), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Empty { a, json } => {
            let vpa = load(&a)?.as_vpa()?.clone();
            let emptiness = is_empty(&vpa)?;
            if json.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "verdict": if emptiness.empty { "empty" } else { "nonempty" },
                        "witness": emptiness.witness.clone().unwrap_or_default(),
                        "stats": {
                            "states": vpa.states().len(),
                            "transitions": vpa.transitions().len(),
                            "saturation_pairs": emptiness.stats.pairs_enqueued,
                        },
                    }))
                    .expect("verdict serializes")
                );
            } else if emptiness.empty {
                println!("empty");
            } else {
                println!("nonempty");
                println!(
                    "witness: {}",
                    format_word(emptiness.witness.as_deref().unwrap_or_default())
                );
            }
            Ok(if emptiness.empty {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Contract { model, out } => {
            let loaded = load(&model)?;
            let report = contract(loaded.as_vpts()?)?;
            eprintln!(
                "removed {} transitions, {} states",
                report.removed_transitions.len(),
                report.removed_states.len()
            );
            let result = match &loaded {
                Model::Iovpts(_) => Model::Iovpts(Iovpts::new(report.result)?),
                _ => Model::Vpts(report.result),
            };
            save_model(&result, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Balanced {
            model,
            from,
            to,
            json,
        } => {
            let loaded = load(&model)?;
            let vpts = loaded.as_vpts()?;
            let outcome = find_balanced_run(vpts, &from, &to)?;
            if json.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "verdict": if outcome.witness.is_some() { "balanced-run" } else { "no-balanced-run" },
                        "witness": outcome.witness.clone().unwrap_or_default(),
                        "stats": {
                            "states": vpts.states().len(),
                            "transitions": vpts.transitions().len(),
                            "saturation_pairs": outcome.stats.pairs_enqueued,
                        },
                    }))
                    .expect("verdict serializes")
                );
            } else {
                match &outcome.witness {
                    Some(word) => println!("balanced run: {}", format_word(word)),
                    None => println!("no balanced run"),
                }
            }
            Ok(if outcome.witness.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Enumerate { a, max_len } => {
            let loaded = load(&a)?;
            let limits = EnumLimits {
                max_len_cap: max_len.max(EnumLimits::default().max_len_cap),
                ..EnumLimits::default()
            };
            let words = match &loaded {
                Model::Vpa(vpa) => enumerate_language(vpa, max_len, &limits)?,
                _ => vpts::traces(loaded.as_vpts()?, max_len, true, &limits)?,
            };
            for word in words {
                println!("{}", format_word(&word));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
