use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use epiq_core::algebra::{AtomicSystemDoc, ElementCodec, EpistemicAlgebra, SystemDoc};
use epiq_core::kernel::{axioms_of, check_proof, AssumptionBase, BaseDoc, ProofDoc, ProofTree};
use epiq_core::model::scenarios::{lying_scenario, mitm_scenario, muddy_scenario, Scenario, DEFAULT_HORIZON};
use epiq_core::search::{prove_with_stats, CutPool, SearchConfig};
use epiq_core::syntax::{parse_sequent, BindingsDoc, Environment};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "epiq", version, about = "Epistemic systems: validation, model checking, proof checking and search")]
struct Cli {
    /// Layout of the JSON report on standard output.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// One line.
    Json,
    /// Indented.
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pool {
    Subformulas,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Muddy,
    Lying,
    Mitm,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quantale, module and appearance laws of a system.
    Validate { system: PathBuf },
    /// Decide whether a sequent holds in a system under bindings.
    Mc {
        sequent: String,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        bindings: PathBuf,
    },
    /// Check a proof certificate against an assumption base.
    Check {
        proof: PathBuf,
        #[arg(long)]
        base: PathBuf,
    },
    /// Search for a proof; prints the certificate when one is found.
    Prove {
        sequent: String,
        #[arg(long)]
        base: PathBuf,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long, value_enum, default_value_t = Pool::Subformulas)]
        cut_pool: Pool,
    },
    /// Build a scenario and write its models, system, bindings, base and targets.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        /// Number of children.
        #[arg(long)]
        n: Option<usize>,
        /// Number of dirty children.
        #[arg(long)]
        k: Option<usize>,
        /// Extra targets after this many rounds.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Unreadable or ill-formed input; exits with status 2.
struct Failure(String);

/// Exit status and report of a command that ran to completion.
struct Report {
    ok: bool,
    json: Value,
    summary: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure(e.to_string())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(usage)?;
    fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Result<Report, Failure> {
    let (kind, report, structure) = match read_json::<SystemDoc>(path)? {
        SystemDoc::Atomic(doc) => {
            let sys = doc.build().map_err(usage)?;
            ("atomic", sys.validate(), Some(sys.theorem1()))
        }
        SystemDoc::Table(doc) => ("table", doc.build().map_err(usage)?.validate(), None),
    };
    let summary = if report.is_valid() {
        format!("valid {kind} system")
    } else {
        let lines: Vec<String> = report.violations.iter().map(|v| format!("  {v}")).collect();
        format!("{} violated law(s):\n{}", report.violations.len(), lines.join("\n"))
    };
    Ok(Report {
        ok: report.is_valid(),
        json: json!({ "kind": kind, "valid": report.is_valid(), "violations": report.violations, "structure": structure }),
        summary,
    })
}

fn model_check<S: ElementCodec>(sys: S, bindings: &BindingsDoc, text: &str) -> Result<Report, Failure> {
    let env = Environment::from_bindings(Arc::new(sys), bindings).map_err(usage)?;
    let sequent = parse_sequent(text, &env.signature()).map_err(|e| usage(format!("{text}: {e}")))?;
    let holds = env.holds(&sequent).map_err(usage)?;
    Ok(Report {
        ok: holds,
        json: json!({ "sequent": sequent.to_string(), "holds": holds }),
        summary: format!("{sequent} {}", if holds { "holds" } else { "fails" }),
    })
}

fn mc(text: &str, system: &Path, bindings: &Path) -> Result<Report, Failure> {
    let b: BindingsDoc = read_json(bindings)?;
    match read_json::<SystemDoc>(system)? {
        SystemDoc::Atomic(doc) => model_check(doc.build().map_err(usage)?, &b, text),
        SystemDoc::Table(doc) => model_check(doc.build().map_err(usage)?, &b, text),
    }
}

fn load_base(path: &Path) -> Result<AssumptionBase, Failure> {
    AssumptionBase::from_doc(&read_json::<BaseDoc>(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check(proof: &Path, base: &Path) -> Result<Report, Failure> {
    let base = load_base(base)?;
    let doc: ProofDoc = read_json(proof)?;
    let tree = ProofTree::from_doc(&doc, &base.signature).map_err(|e| usage(format!("{}: {e}", proof.display())))?;
    Ok(match check_proof(&tree, &base) {
        Ok(()) => Report {
            ok: true,
            json: json!({ "ok": true, "conclusion": tree.sequent.to_string(), "size": tree.size(), "height": tree.height() }),
            summary: format!("proof of {} accepted ({} nodes)", tree.sequent, tree.size()),
        },
        Err(v) => Report { ok: false, summary: format!("proof rejected at {v}"), json: json!({ "ok": false, "violation": v }) },
    })
}

fn prove(text: &str, base: &Path, depth: u64, pool: Pool) -> Result<Report, Failure> {
    let base = load_base(base)?;
    let goal = parse_sequent(text, &base.signature).map_err(|e| usage(format!("{text}: {e}")))?;
    let cut_pool = match pool {
        Pool::Subformulas => CutPool::Subformulas,
        Pool::None => CutPool::None,
    };
    let cfg = SearchConfig { max_depth: depth as usize, cut_pool, ..Default::default() };
    let (tree, stats) = prove_with_stats(&goal, &base, &cfg);
    Ok(match tree {
        Some(t) => Report {
            ok: true,
            json: serde_json::to_value(t.to_doc()).map_err(usage)?,
            summary: format!("proof of height {} found ({} sequents expanded)", t.height(), stats.expanded),
        },
        None => Report {
            ok: false,
            json: json!({ "found": false, "goal": goal.to_string(), "depth": depth, "expanded": stats.expanded }),
            summary: format!("no proof within depth {depth} ({} sequents expanded)", stats.expanded),
        },
    })
}

fn required(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required for this scenario")))
}

fn scenario(name: ScenarioName, n: Option<usize>, k: Option<usize>, rounds: Option<usize>, out: &Path) -> Result<Report, Failure> {
    let sc: Scenario = match name {
        ScenarioName::Muddy => muddy_scenario(required(n, "n")?, required(k, "k")?, rounds, DEFAULT_HORIZON),
        ScenarioName::Lying => lying_scenario(required(n, "n")?, DEFAULT_HORIZON),
        ScenarioName::Mitm => mitm_scenario(DEFAULT_HORIZON),
    }
    .map_err(usage)?;
    let base = match &sc.base {
        Some(b) => b.clone(),
        None => axioms_of(&sc.env, &sc.vocabulary).map_err(usage)?,
    };
    fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    let sys = &sc.compiled.system;
    let files: [(&str, Value); 6] = [
        ("state_model.json", serde_json::to_value(sc.state_model.to_doc()).map_err(usage)?),
        ("action_model.json", serde_json::to_value(sc.action_model.to_doc(&sc.state_model)).map_err(usage)?),
        ("system.json", serde_json::to_value(AtomicSystemDoc::from_system(sys)).map_err(usage)?),
        ("bindings.json", serde_json::to_value(sc.env.to_bindings()).map_err(usage)?),
        ("base.json", serde_json::to_value(base.to_doc()).map_err(usage)?),
        ("targets.json", serde_json::to_value(&sc.targets).map_err(usage)?),
    ];
    for (file, v) in &files {
        write_json(&out.join(file), v)?;
    }
    Ok(Report {
        ok: true,
        json: json!({
            "scenario": sc.name,
            "out": out.display().to_string(),
            "files": files.iter().map(|(f, _)| *f).collect::<Vec<_>>(),
            "states": sys.m_atoms().len(),
            "actions": sys.q_atoms().len(),
            "agents": sys.agents().len(),
            "targets": sc.targets,
        }),
        summary: format!(
            "{}: {} propositions, {} actions, {} targets written to {}",
            sc.name,
            sys.m_atoms().len(),
            sys.q_atoms().len(),
            sc.targets.len(),
            out.display()
        ),
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Validate { system } => validate(system),
        Command::Mc { sequent, system, bindings } => mc(sequent, system, bindings),
        Command::Check { proof, base } => check(proof, base),
        Command::Prove { sequent, base, depth, cut_pool } => prove(sequent, base, *depth, *cut_pool),
        Command::Scenario { name, n, k, rounds, out } => scenario(*name, *n, *k, *rounds, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.json.to_string(),
                Format::Pretty => serde_json::to_string_pretty(&report.json).expect("json value"),
            };
            println!("{text}");
            eprintln!("{}", report.summary);
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(Failure(msg)) => {
            println!("{}", json!({ "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
