use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use snc_charts::suite::{SuiteOptions, DEFAULT_SAMPLES};
use snc_smooth::registry::{self, FAMILIES};
use snc_smooth::runner::{self, Format, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "snc-smooth",
    version,
    about = "Check smoothability data of simple normal crossing surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List built-in scenarios and families.
    List,
    /// Show a scenario; `--format json` prints it as a scenario file.
    Describe {
        /// Scenario name or path.
        target: String,
        /// Family parameter `key=value` (repeatable).
        #[arg(long = "param", value_parser = runner::parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Run the blow-up plan and every check, comparing with expectations.
    Check {
        /// Scenario names or paths.
        #[arg(required = true)]
        targets: Vec<String>,
        /// Family parameter `key=value` (repeatable).
        #[arg(long = "param", value_parser = runner::parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Print a minimal plan trivializing every collective class.
    Plan {
        /// Scenario name or path.
        target: String,
        /// Family parameter `key=value` (repeatable).
        #[arg(long = "param", value_parser = runner::parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Evaluate the local chart identities at seeded random points.
    Charts {
        /// Points per identity.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Tolerance for the exact identities.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Random seed (overrides SNC_SMOOTH_SEED).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Write every named scenario as `<name>.json` into a directory.
    Export {
        /// Output directory.
        dir: PathBuf,
    },
}

fn params_map(params: Vec<(String, i64)>) -> BTreeMap<String, i64> {
    params.into_iter().collect()
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("scenarios:");
            for s in registry::all_named() {
                println!("  {:<24} {}", s.name, s.description);
            }
            println!("families (use --param key=value):");
            for f in FAMILIES {
                let params: Vec<String> = f
                    .params
                    .iter()
                    .map(|p| format!("{}={} [{}..{}]", p.name, p.default, p.min, p.max))
                    .collect();
                println!("  {:<24} {} ({})", f.name, f.summary, params.join(", "));
            }
            exit(0)
        }
        Command::Describe {
            target,
            params,
            format,
        } => {
            let scenario = match runner::load_target(&target, &params_map(params)) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(EXIT_INPUT);
                }
            };
            match Format::from(format) {
                Format::Json => print!("{}", scenario.to_json()),
                Format::Text => {
                    let s = &scenario.surface;
                    println!("{}: {}", scenario.name, scenario.description);
                    println!(
                        "  {} component(s), {} double curve(s), {} triple point(s), {} plan step(s)",
                        s.components.len(),
                        s.double_curves.len(),
                        s.triple_points.len(),
                        scenario.plan.steps.len()
                    );
                    for c in &s.components {
                        println!(
                            "  component {} ({}), euler {}",
                            c.id,
                            c.kind.name(),
                            c.euler_char
                        );
                    }
                    for c in &s.double_curves {
                        let sides: Vec<&str> =
                            c.sides.iter().map(|x| x.component.as_str()).collect();
                        println!(
                            "  curve {} of genus {} between {}, {} triple mark(s)",
                            c.id,
                            c.geometry.genus(),
                            sides.join(" and "),
                            c.triple_marks.len()
                        );
                    }
                    if let Some(b1) = scenario.declared_b1 {
                        println!("  declared b1: {b1}");
                    }
                    if let Some(f) = registry::family_spec(&target) {
                        for p in f.params {
                            println!(
                                "  param {} (default {}, {}..{}): {}",
                                p.name, p.default, p.min, p.max, p.help
                            );
                        }
                    }
                    for n in &scenario.notes {
                        println!("  note: {n}");
                    }
                }
            }
            exit(0)
        }
        Command::Check {
            targets,
            params,
            format,
        } => {
            let params = params_map(params);
            let mut scenarios = Vec::new();
            for t in &targets {
                match runner::load_target(t, &params) {
                    Ok(s) => scenarios.push(s),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return exit(EXIT_INPUT);
                    }
                }
            }
            let outcomes = runner::run_checks(&scenarios);
            match Format::from(format) {
                Format::Json if outcomes.len() == 1 => print!("{}", runner::to_json(&outcomes[0])),
                Format::Json => print!("{}", runner::to_json(&outcomes)),
                Format::Text => {
                    for o in &outcomes {
                        print!("{}", runner::check_text(o));
                    }
                }
            }
            exit(runner::combined_exit(outcomes.iter().map(|o| o.exit_code)))
        }
        Command::Plan {
            target,
            params,
            format,
        } => {
            let scenario = match runner::load_target(&target, &params_map(params)) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(EXIT_INPUT);
                }
            };
            let outcome = runner::run_plan_cmd(&scenario);
            match Format::from(format) {
                Format::Json => print!("{}", runner::to_json(&outcome)),
                Format::Text => print!("{}", runner::plan_text(&outcome)),
            }
            exit(outcome.exit_code)
        }
        Command::Charts {
            samples,
            tolerance,
            seed,
            format,
        } => {
            let env = std::env::var(runner::SEED_ENV).ok();
            let seed = match runner::resolve_seed(seed, env.as_deref()) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(EXIT_INPUT);
                }
            };
            let options = SuiteOptions {
                samples,
                tolerance,
                seed,
            };
            let (report, code) = runner::run_charts(&options);
            match Format::from(format) {
                Format::Json => print!("{}", runner::to_json(&report)),
                Format::Text => print!("{}", runner::charts_text(&report)),
            }
            exit(code)
        }
        Command::Export { dir } => {
            if let Err(e) = std::fs::create_dir_all(&dir) {
                eprintln!("error: cannot create {}: {e}", dir.display());
                return exit(EXIT_INPUT);
            }
            for s in registry::all_named() {
                let path = dir.join(format!("{}.json", s.name));
                if let Err(e) = std::fs::write(&path, s.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return exit(EXIT_INPUT);
                }
            }
            exit(0)
        }
    }
}
