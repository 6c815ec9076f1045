//! Command-line front end: every subcommand reads JSON and writes JSON.
//!
//! Exit codes: 0 on success, 1 on a domain error (a JSON diagnostic is
//! printed to stdout), 2 on a usage or I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use brace_forge::brace::{
    check_proposition_five, is_two_sided, left_series, retract_iso_check, right_series, socle,
    socle_commutator_witness, two_sided_witness, validate_brace, validate_brace_sampled,
    BraceJson, FiniteBrace,
};
use brace_forge::census::{build_census, census_to_jsonl, enumerate_solutions};
use brace_forge::permgrp::{PermGroup, PermGroupJson, DEFAULT_CAP};
use brace_forge::ring::embed_group_adjoint;
use brace_forge::solution::{mpl, retract, Solution, SolutionJson};
use brace_forge::structure_group::{
    check_binomial_identity, check_eq2_recursion, check_nonabelian, embed_finite_brace,
    socle_index, theorem_one_report, GElement,
};
use brace_forge::Error;

#[derive(Parser)]
#[command(name = "brace-forge", version, about = "Involutive solutions and finite left braces")]
struct Cli {
    /// Closure and order cap.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// JSON output (always on).
    #[arg(long, global = true)]
    json: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a solution or brace against its axioms.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Check this many random triples instead of all of them (braces only).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Summary invariants of a solution or brace.
    Info {
        #[arg(long)]
        input: PathBuf,
    },
    /// First retraction of a solution.
    Retract {
        #[arg(long)]
        input: PathBuf,
    },
    /// Multipermutation level of a solution.
    Mpl {
        #[arg(long)]
        input: PathBuf,
    },
    /// Embed a solution into a finite left brace.
    Embed {
        #[arg(long)]
        input: PathBuf,
    },
    /// Left and right star chains of a brace (solutions are embedded first).
    Chains {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run structural checks on a solution or brace.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Checks to run; all applicable ones by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        what: Vec<Check>,
    },
    /// List every solution on m points.
    Enumerate {
        #[arg(long)]
        m: usize,
        /// Keep every labeling instead of one per isomorphism class.
        #[arg(long)]
        labeled: bool,
    },
    /// Census records (JSON lines) for all solutions on m points.
    Census {
        #[arg(long)]
        m: usize,
    },
    /// Check that g ↦ g − 1 embeds a group into the adjoint semigroup of Z/k[G].
    Groupring {
        /// z2, z4, klein, sym3, d4, or cyclic:N, dihedral:N, symmetric:N.
        #[arg(long, conflicts_with = "input")]
        group: Option<String>,
        /// Group JSON: {"degree": d, "generators": [[...]]}.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Prop5,
    SocleCommutator,
    TheoremOne,
    Eq2,
    Binomial,
    TwoSided,
    RetractIso,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Prop5 => "prop5",
            Check::SocleCommutator => "socle-commutator",
            Check::TheoremOne => "theorem-one",
            Check::Eq2 => "eq2",
            Check::Binomial => "binomial",
            Check::TwoSided => "two-sided",
            Check::RetractIso => "retract-iso",
        }
    }

    fn needs_solution(self) -> bool {
        matches!(self, Check::TheoremOne | Check::Eq2 | Check::Binomial)
    }
}

enum Failure {
    Domain(Error),
    Usage(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome<T> = Result<T, Failure>;

enum Input {
    Solution(Solution),
    Brace(FiniteBrace),
}

fn read_json(path: &Path) -> Outcome<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()).into())
}

fn parse<T: serde::de::DeserializeOwned>(v: Value) -> Outcome<T> {
    serde_json::from_value(v).map_err(|e| Error::Malformed(e.to_string()).into())
}

fn read_input(path: &Path) -> Outcome<Input> {
    let v = read_json(path)?;
    if v.get("repr").is_some() {
        Ok(Input::Brace(FiniteBrace::from_json(parse::<BraceJson>(v)?)?))
    } else {
        Ok(Input::Solution(Solution::from_json(parse::<SolutionJson>(v)?)?))
    }
}

fn read_solution(path: &Path) -> Outcome<Solution> {
    match read_input(path)? {
        Input::Solution(s) => Ok(s),
        Input::Brace(_) => Err(anyhow::anyhow!("expected a solution, got a brace").into()),
    }
}

fn brace_of(input: &Input, cap: usize) -> Outcome<FiniteBrace> {
    match input {
        Input::Brace(b) => Ok(b.clone()),
        Input::Solution(s) => Ok(embed_finite_brace(s, cap)?.brace),
    }
}

fn named_group(name: &str) -> anyhow::Result<PermGroup> {
    let param = |s: &str| -> anyhow::Result<usize> {
        let n: usize = s.parse().with_context(|| format!("bad group size {s:?}"))?;
        if n == 0 {
            bail!("group size must be positive");
        }
        Ok(n)
    };
    Ok(match name {
        "z2" => PermGroup::cyclic(2),
        "z4" => PermGroup::cyclic(4),
        "klein" => PermGroup::klein_four(),
        "sym3" => PermGroup::symmetric(3),
        "d4" => PermGroup::dihedral(4),
        other => match other.split_once(':') {
            Some(("cyclic", n)) => PermGroup::cyclic(param(n)?),
            Some(("dihedral", n)) if param(n)? >= 3 => PermGroup::dihedral(param(n)?),
            Some(("symmetric", n)) if param(n)? <= 8 => PermGroup::symmetric(param(n)?),
            _ => bail!("unknown group {other:?}"),
        },
    })
}

fn solution_info(s: &Solution, cap: usize) -> Outcome<Value> {
    let n = socle_index(s, cap)?;
    let brace_order = n.max(2).checked_pow(s.size() as u32);
    Ok(json!({
        "size": s.size(),
        "trivial": s.is_trivial(),
        "mpl": mpl(s),
        "retract_size": retract(s)?.classes(),
        "perm_group_order": n,
        "embedded_brace_order": brace_order,
        "nonabelian_witness": check_nonabelian(s).witness,
    }))
}

fn brace_info(b: &FiniteBrace) -> Value {
    json!({
        "order": b.order(),
        "socle_order": socle(b).len(),
        "lambda_classes": b.class_count(),
        "trivial": b.is_trivial(),
        "two_sided": is_two_sided(b),
    })
}

/// Pairs of generators `(x, y)` with the star checks run on each.
fn generator_pairs(s: &Solution) -> Outcome<Vec<(GElement, GElement)>> {
    let m = s.size();
    let mut out = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            out.push((GElement::generator(s, x)?, GElement::generator(s, y)?));
        }
    }
    Ok(out)
}

fn run_check(what: Check, input: &Input, cap: usize) -> Outcome<Value> {
    if what.needs_solution() {
        let Input::Solution(s) = input else {
            return Err(anyhow::anyhow!("check {} needs a solution", what.name()).into());
        };
        return Ok(match what {
            Check::TheoremOne => json!(theorem_one_report(s)?),
            Check::Eq2 => {
                let mut holds = true;
                let pairs = generator_pairs(s)?;
                for (a, b) in &pairs {
                    holds &= check_eq2_recursion(a, b, 4)?;
                }
                json!({"holds": holds, "cases": pairs.len()})
            }
            _ => {
                let mut holds = true;
                let pairs = generator_pairs(s)?;
                for (a, b) in &pairs {
                    for m in 1..=6 {
                        holds &= check_binomial_identity(a, b, m)?;
                    }
                }
                json!({"holds": holds, "cases": 6 * pairs.len()})
            }
        });
    }
    let b = brace_of(input, cap)?;
    Ok(match what {
        Check::Prop5 => json!(check_proposition_five(&b, cap)?),
        Check::SocleCommutator => {
            let w = socle_commutator_witness(&b);
            json!({"holds": w.is_none(), "witness": w})
        }
        Check::TwoSided => {
            let w = two_sided_witness(&b);
            json!({"holds": w.is_none(), "witness": w})
        }
        _ => json!({"holds": retract_iso_check(&b)?}),
    })
}

enum Output {
    Json(Value),
    Lines(String),
}

fn run(cli: &Cli) -> Outcome<Output> {
    let cap = cli.cap;
    let value = match &cli.command {
        Command::Validate { input, samples } => {
            match (read_input(input)?, samples) {
                (Input::Solution(_), _) => {}
                (Input::Brace(b), Some(n)) => validate_brace_sampled(&b, *n, 0)?,
                (Input::Brace(b), None) => validate_brace(&b)?,
            }
            json!({"valid": true})
        }
        Command::Info { input } => match read_input(input)? {
            Input::Solution(s) => solution_info(&s, cap)?,
            Input::Brace(b) => brace_info(&b),
        },
        Command::Retract { input } => {
            let q = retract(&read_solution(input)?)?;
            json!({"class_of": q.class_of, "retracted": q.retracted.to_json(false)})
        }
        Command::Mpl { input } => json!({"mpl": mpl(&read_solution(input)?)}),
        Command::Embed { input } => {
            json!(embed_finite_brace(&read_solution(input)?, cap)?.to_json())
        }
        Command::Chains { input } => {
            let b = brace_of(&read_input(input)?, cap)?;
            let (r, l) = (right_series(&b, cap), left_series(&b, cap));
            json!({
                "right": r.orders(),
                "right_nilpotent": r.nilpotent,
                "left": l.orders(),
                "left_nilpotent": l.nilpotent,
            })
        }
        Command::Check { input, what } => {
            let input = read_input(input)?;
            let checks: Vec<Check> = if what.is_empty() {
                Check::value_variants()
                    .iter()
                    .copied()
                    .filter(|c| matches!(input, Input::Solution(_)) || !c.needs_solution())
                    .collect()
            } else {
                what.clone()
            };
            let mut out = serde_json::Map::new();
            for c in checks {
                out.insert(c.name().to_string(), run_check(c, &input, cap)?);
            }
            Value::Object(out)
        }
        Command::Enumerate { m, labeled } => {
            let sols = enumerate_solutions(*m, !labeled)?;
            json!({
                "m": m,
                "up_to_iso": !labeled,
                "count": sols.len(),
                "solutions": sols.iter().map(|s| s.to_json(false)).collect::<Vec<_>>(),
            })
        }
        Command::Census { m } => return Ok(Output::Lines(census_to_jsonl(&build_census(*m, cap)?))),
        Command::Groupring { group, input, k } => {
            let g = match (group, input) {
                (Some(name), _) => named_group(name)?,
                (None, Some(path)) => PermGroup::from_json(&parse::<PermGroupJson>(read_json(path)?)?, cap)?,
                (None, None) => return Err(anyhow::anyhow!("pass --group or --input").into()),
            };
            let emb = embed_group_adjoint(&g, *k)?;
            let ring_size = brace_forge::ring::group_ring(*k, g.clone())?.size();
            json!({
                "group_order": g.order(),
                "k": k,
                "ring_size": ring_size.to_string(),
                "pairs_checked": emb.pairs_checked,
                "image_size": emb.image_size(),
                "injective": emb.image_size() == g.order(),
            })
        }
    };
    Ok(Output::Json(value))
}

fn emit(cli: &Cli, out: Output) -> anyhow::Result<()> {
    let text = match out {
        Output::Json(v) => serde_json::to_string(&v)? + "\n",
        Output::Lines(s) => s,
    };
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => match emit(&cli, out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Domain(e)) => {
            println!("{}", e.diagnostic());
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
