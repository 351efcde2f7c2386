//! `leftheart`: runs scenarios and single operations, writing reports.
//!
//! Exit codes: 0 when every verification passes, 1 on a task failure,
//! 2 on unreadable or malformed input, 3 on an internal invariant breach.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leftheart::scenario::{Scenario, ScenarioReport};
use leftheart::{Error, Execution};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "leftheart", version, about = "Left hearts of additive regular categories, computed exactly")]
struct Cli {
    /// Seed for randomized checks (ChaCha8, one stream per sample).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sampling bounds, as JSON or `rank=3,entry=3,samples=500,chain_depth=8`.
    #[arg(long, global = true)]
    bounds: Option<String>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Category {
    /// fgab, vec:Q or vec:Fp.
    #[arg(long, default_value = "fgab")]
    ambient: String,
    /// all, torsion-free, torsion-exponent:m, forbid:p^k, free-or-Z4.
    #[arg(long, default_value = "all")]
    predicate: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a TOML or JSON scenario and write report.json and report.txt.
    Run {
        scenario: PathBuf,
        /// Directory for the report files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Sample the exactness axioms.
    CheckAxioms {
        #[command(flatten)]
        category: Category,
        /// Comma-separated axiom names; all by default.
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
    },
    /// Deflation-mono factorization of a morphism.
    Factor {
        #[command(flatten)]
        category: Category,
        #[arg(long)]
        morphism: PathBuf,
        /// deflation-mono or cokernel-mono.
        #[arg(long, default_value = "deflation-mono")]
        kind: String,
    },
    /// Left-heart cohomology of a complex in one degree.
    Cohomology {
        #[command(flatten)]
        category: Category,
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Morphisms between two mono objects after localization.
    HeartHom {
        #[command(flatten)]
        category: Category,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Torsion decomposition of a finitely presented functor.
    TorsionSplit {
        #[command(flatten)]
        category: Category,
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Sampled agreement of the localization criteria.
    LocalizeCheck {
        #[command(flatten)]
        category: Category,
    },
    /// Sampled percolating axioms for a subcategory.
    PercolateCheck {
        #[command(flatten)]
        category: Category,
        /// finite, free, effaceable, or a predicate name.
        #[arg(long)]
        subclass: String,
    },
    /// Place a mono object between E, its exact hull and the heart.
    HullClassify {
        #[command(flatten)]
        category: Category,
        #[arg(long)]
        morphism: PathBuf,
    },
}

enum Failure {
    Parse(String),
    Invariant(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(m) => Failure::Invariant(m),
            other => Failure::Parse(other.to_string()),
        }
    }
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    if is_toml {
        toml::from_str::<Value>(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }
}

fn parse_bounds(text: &str, base: &Value) -> Result<Value, Failure> {
    let mut b = base.clone();
    let text = text.trim();
    if text.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| Failure::Parse(format!("bounds: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Failure::Parse("bounds must be an object".into()))?;
        for (k, x) in obj {
            b[k] = x.clone();
        }
        return Ok(b);
    }
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Failure::Parse(format!("bounds entry {part:?} needs key=value")))?;
        let n: u64 = v.trim().parse().map_err(|_| Failure::Parse(format!("bounds value {v:?} is not a count")))?;
        b[k.trim()] = json!(n);
    }
    Ok(b)
}

fn scenario_value(category: &Category, seed: Option<u64>, morphisms: Value, complexes: Value, task: Value) -> Value {
    json!({
        "schema": 1,
        "ambient": category.ambient,
        "predicate": category.predicate,
        "seed": seed,
        "morphisms": morphisms,
        "complexes": complexes,
        "tasks": [task],
    })
}

/// Builds the scenario a command stands for.
fn scenario_for(cli: &Cli) -> Result<Value, Failure> {
    let none = json!({});
    let one = |name: &str, path: &Path| -> Result<Value, Failure> { Ok(json!({ name: read_value(path)? })) };
    Ok(match &cli.command {
        Command::Run { scenario, .. } => {
            let mut v = read_value(scenario)?;
            if let Some(seed) = cli.seed {
                v["seed"] = json!(seed);
            }
            v
        }
        Command::CheckAxioms { category, axioms } => {
            let mut task = json!({ "op": "check-axioms" });
            if !axioms.is_empty() {
                task["axioms"] = json!(axioms);
            }
            scenario_value(category, cli.seed, none.clone(), none, task)
        }
        Command::Factor { category, morphism, kind } => scenario_value(
            category,
            cli.seed,
            one("input", morphism)?,
            none,
            json!({ "op": "factor", "morphism": "input", "kind": kind }),
        ),
        Command::Cohomology { category, complex, degree } => scenario_value(
            category,
            cli.seed,
            none,
            one("input", complex)?,
            json!({ "op": "cohomology", "complex": "input", "degree": degree }),
        ),
        Command::HeartHom { category, x, y } => scenario_value(
            category,
            cli.seed,
            json!({ "x": read_value(x)?, "y": read_value(y)? }),
            none,
            json!({ "op": "heart-hom", "x": "x", "y": "y" }),
        ),
        Command::TorsionSplit { category, morphism } => scenario_value(
            category,
            cli.seed,
            one("input", morphism)?,
            none,
            json!({ "op": "torsion-split", "morphism": "input" }),
        ),
        Command::LocalizeCheck { category } => {
            scenario_value(category, cli.seed, none.clone(), none, json!({ "op": "localize-check" }))
        }
        Command::PercolateCheck { category, subclass } => scenario_value(
            category,
            cli.seed,
            none.clone(),
            none,
            json!({ "op": "percolate-check", "subclass": subclass }),
        ),
        Command::HullClassify { category, morphism } => scenario_value(
            category,
            cli.seed,
            one("input", morphism)?,
            none,
            json!({ "op": "hull-classify", "morphism": "input" }),
        ),
    })
}

fn execute(cli: &Cli) -> Result<ScenarioReport, Failure> {
    let mut value = scenario_for(cli)?;
    if let Some(text) = &cli.bounds {
        let base = serde_json::to_value(leftheart::sample::Bounds::default()).expect("bounds serialize");
        let current = value.get("bounds").cloned().unwrap_or(base.clone());
        let mut merged = base;
        for (k, x) in current.as_object().into_iter().flatten() {
            merged[k] = x.clone();
        }
        value["bounds"] = parse_bounds(text, &merged)?;
    }
    let scenario = Scenario::from_value(&value)?;
    let exec = if cli.jobs == 1 { Execution::Sequential } else { Execution::Parallel };
    if cli.jobs > 1 {
        // the pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    Ok(scenario.run(exec)?)
}

fn write_reports(report: &ScenarioReport, out: &Path) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let body = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
    fs::write(out.join("report.json"), body).map_err(|e| Failure::Io(e.to_string()))?;
    fs::write(out.join("report.txt"), report.to_text()).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(())
}

/// Text output for single operations: the operation's result, then the
/// verdict lines.
fn render(report: &ScenarioReport) -> String {
    let mut out = String::new();
    for t in &report.tasks {
        let o = &t.output;
        match t.op.as_str() {
            "factor" => {
                out += &format!("deflation p: {}\n", o["deflation"]["matrix"]);
                out += &format!("mono m:      {}\n", o["mono"]["matrix"]);
                out += &format!("through:     {}\n", o["middle"].as_str().unwrap_or_default());
            }
            "cohomology" => out += &format!("{}\n", serde_json::to_string(&o["cohomology"]).expect("json")),
            "heart-hom" => out += &format!("Hom = {}\n", o["group"].as_str().unwrap_or_default()),
            "hull-classify" => out += &format!("{}\n", o["class"].as_str().unwrap_or_default()),
            "torsion-split" => {
                out += &format!("torsion:      {}\n", o["torsion"]);
                out += &format!("torsion-free: {}\n", o["torsion_free"]);
            }
            _ => {}
        }
    }
    out + &report.to_text()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|report| {
        if let Command::Run { out, .. } = &cli.command {
            write_reports(&report, out)?;
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
            } else {
                print!("{}", render(&report));
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Parse(m)) | Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("internal invariant breached: {m}");
            ExitCode::from(3)
        }
    }
}
