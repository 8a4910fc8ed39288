//! Command-line interface: solve, reduce, verify, realize, classify, gen.
//!
//! Exit codes: 0 for success / yes / PASS, 1 for answer-no / FAIL, 2 for
//! errors and INCONCLUSIVE outcomes.

use crate::election::{PWInstance, ScoringRuleFamily, ScoringVector};
use crate::io::{self, RuleSpec};
use crate::oracles::{verify_reduction, CheckStatus, SourceOracle};
use crate::reductions::{
    self, pad_mc, MCInstance, ReductionError, ReductionOutput, X3CInstance,
};
use crate::solvers::{
    necessary_winner_bruteforce, possible_winner_plateau_search,
    possible_winner_plurality_flow, possible_winner_veto_flow, SolveError,
};
use clap::{Args, Parser, Subcommand};
use std::io::Read;

#[derive(Parser)]
#[command(
    name = "posswin",
    about = "Possible-winner solving, score realization, and hardness-gadget generation for positional scoring rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the distinguished candidate is a possible winner.
    Solve(SolveArgs),
    /// Generate a possible-winner instance from a source instance.
    Reduce(ReduceArgs),
    /// Generate and cross-check an instance against brute-force oracles.
    Verify(ReduceArgs),
    /// Build linear votes realizing the score targets of a task file.
    Realize(FileArg),
    /// Classify a scoring vector into its construction family.
    Classify(ClassifyArgs),
    /// Emit random instances.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Election file; `-` or absent reads standard input.
    file: Option<String>,
    /// Override the file's rule (family name or comma-separated vector).
    #[arg(long)]
    rule: Option<String>,
    /// Override the file's mode: co or unique.
    #[arg(long)]
    mode: Option<String>,
    /// Skip the flow solvers and run the exact search.
    #[arg(long)]
    force_exact: bool,
    /// Node budget for the exact search.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Decide necessary winner (by enumeration) instead.
    #[arg(long)]
    necessary: bool,
    /// Print the witness extension profile on a yes answer.
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct ReduceArgs {
    /// Source instance file; `-` or absent reads standard input.
    file: Option<String>,
    #[arg(long)]
    construction: String,
    /// Target rule; defaults to the smallest conforming vector.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, default_value = "co")]
    mode: String,
    /// Drop position parameter for the plateau constructions.
    #[arg(long)]
    i: Option<usize>,
    /// Secondary position parameter where applicable.
    #[arg(long)]
    j: Option<usize>,
    /// Node budget for the verification search.
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
}

#[derive(Args)]
struct FileArg {
    /// Input file; `-` or absent reads standard input.
    file: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Explicit comma-separated vector.
    #[arg(long)]
    vector: Option<String>,
    /// Rule family, resolved at --m candidates.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 4)]
    x_threshold: usize,
}

#[derive(Args)]
struct GenArgs {
    /// What to generate: x3c, mc, or profile.
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 3)]
    max_class: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, default_value = "co")]
    mode: String,
}

pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let mut argv = vec!["posswin".to_string()];
    argv.extend(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn read_input(path: &Option<String>) -> Result<String, String> {
    match path.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| e.to_string())?;
            Ok(buf)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}")),
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Reduce(a) => reduce(a, false),
        Command::Verify(a) => reduce(a, true),
        Command::Realize(a) => realize_cmd(a),
        Command::Classify(a) => classify(a),
        Command::Gen(a) => gen(a),
    }
}

fn solve(a: SolveArgs) -> Result<i32, String> {
    let text = read_input(&a.file)?;
    let mut inst = io::parse_profile(&text).map_err(|e| e.to_string())?;
    if let Some(r) = &a.rule {
        let spec = RuleSpec::parse(r)?;
        inst.rule = spec
            .resolve(inst.num_candidates())
            .map_err(|e| e.to_string())?;
    }
    if let Some(m) = &a.mode {
        inst.mode = io::parse_mode(m)?;
    }

    if a.necessary {
        let r = necessary_winner_bruteforce(&inst, a.budget).map_err(|e| e.to_string())?;
        println!("necessary winner: {}", if r.answer { "yes" } else { "no" });
        return Ok(if r.answer { 0 } else { 1 });
    }

    let norm = inst.rule.normalized();
    let nv = norm.values();
    let is_plurality = nv[0] == 1 && nv[1..].iter().all(|&x| x == 0);
    let is_veto =
        nv.len() >= 2 && *nv.last().unwrap() == 0 && nv[..nv.len() - 1].iter().all(|&x| x == 1);

    let result = if a.force_exact {
        possible_winner_plateau_search(&inst, a.budget)
    } else if is_plurality {
        possible_winner_plurality_flow(&inst)
    } else if is_veto {
        possible_winner_veto_flow(&inst)
    } else {
        possible_winner_plateau_search(&inst, a.budget)
    };
    match result {
        Ok(r) => {
            println!("possible winner: {}", if r.answer { "yes" } else { "no" });
            if a.witness {
                if let Some(w) = &r.witness {
                    let mut ext = inst.clone();
                    ext.profile.votes = w.iter().map(|l| l.as_partial()).collect();
                    print!("{}", io::serialize_profile(&ext));
                }
            }
            Ok(if r.answer { 0 } else { 1 })
        }
        Err(SolveError::BudgetExceeded { budget, explored }) => {
            println!("possible winner: INCONCLUSIVE (budget {budget} exhausted after {explored} nodes)");
            Ok(2)
        }
        Err(e) => Err(e.to_string()),
    }
}

enum Source {
    X3C(X3CInstance),
    MC(MCInstance),
}

fn build_reduction(a: &ReduceArgs, text: &str) -> Result<(ReductionOutput, Source), String> {
    let mode = io::parse_mode(&a.mode)?;
    let rule_override = a
        .rule
        .as_deref()
        .map(RuleSpec::parse)
        .transpose()?;
    let explicit = |spec: &RuleSpec, fallback: ScoringVector| -> Result<ScoringVector, String> {
        match spec {
            RuleSpec::Explicit(v) => Ok(v.clone()),
            RuleSpec::Family(f) => f.vector_for(fallback.len()).map_err(|e| e.to_string()),
        }
    };
    let res: Result<(ReductionOutput, Source), ReductionError> = match a.construction.as_str() {
        "x3c-different-values" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string()).unwrap();
            let f = 3 + x.universe_size() + 5 * x.num_subsets();
            let default = ScoringRuleFamily::Borda
                .vector_for(f)
                .map_err(|e| e.to_string())?;
            let rule = match &rule_override {
                Some(s) => explicit(s, default)?,
                None => default,
            };
            reductions::reduce_x3c_different_values(&x, &rule, mode).map(|o| (o, Source::X3C(x)))
        }
        "mc-plateau" => {
            let g0 = io::parse_mc(text).map_err(|e| e.to_string())?;
            let g = if g0.uniformity().is_some() {
                g0
            } else {
                eprintln!("note: instance padded to uniform shape");
                pad_mc(&g0).map_err(|e| e.to_string())?
            };
            let (s, t) = g.uniformity().unwrap();
            let k = g.num_colors();
            let n_c = 1 + s * k * (k - 1) + 2 * t * k * (k - 1) + s * k * (k - 2) + k * (k - 2) + k;
            let m_default = n_c + 1;
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => f.vector_for(m_default).map_err(|e| e.to_string())?,
                None => ScoringRuleFamily::KApproval(m_default - 2)
                    .vector_for(m_default)
                    .map_err(|e| e.to_string())?,
            };
            let i = a.i.unwrap_or(rule.len() - 1);
            reductions::reduce_mc_plateau(&g, &rule, i, mode).map(|o| (o, Source::MC(g)))
        }
        "mc-reversed" => {
            let g0 = io::parse_mc(text).map_err(|e| e.to_string())?;
            let g = if g0.uniformity().is_some() {
                g0
            } else {
                eprintln!("note: instance padded to uniform shape");
                pad_mc(&g0).map_err(|e| e.to_string())?
            };
            let (s, t) = g.uniformity().unwrap();
            let k = g.num_colors();
            let n_c = 1 + s * k * (k - 1) + 2 * t * k * (k - 1) + s * k * (k - 2) + k * (k - 2) + k;
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => {
                    f.vector_for(n_c + 1).map_err(|e| e.to_string())?
                }
                None => {
                    let mut v = vec![0i64; n_c + 1];
                    v[0] = 3;
                    v[1] = 2;
                    ScoringVector::new(v).unwrap()
                }
            };
            let i = a.i.unwrap_or(2);
            let j = a.j.unwrap_or(i - 1);
            reductions::reduce_mc_reversed(&g, &rule, i, j, mode).map(|o| (o, Source::MC(g)))
        }
        "x3c-ratio3" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string())?;
            let i = a.i.unwrap_or(2);
            let j = a.j.unwrap_or(1);
            let core = 1 + x.num_subsets() + x.universe_size() + x.num_subsets() * (i - j);
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => {
                    f.vector_for(core + j).map_err(|e| e.to_string())?
                }
                None => {
                    let mut v = vec![0i64; core + j];
                    v[0] = 3;
                    v[1] = 1;
                    ScoringVector::new(v).unwrap()
                }
            };
            reductions::reduce_x3c_ratio3(&x, &rule, i, j, mode).map(|o| (o, Source::X3C(x)))
        }
        "x3c-two-values" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string())?;
            let m = 2 + 3 * x.num_subsets() + x.universe_size();
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => f.vector_for(m).map_err(|e| e.to_string())?,
                None => {
                    let mut v = vec![0i64; m];
                    v[0] = 5;
                    v[1] = 2;
                    ScoringVector::new(v).unwrap()
                }
            };
            reductions::reduce_x3c_two_values(&x, &rule, mode).map(|o| (o, Source::X3C(x)))
        }
        "x3c-210" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string())?;
            let m = 2 + 3 * x.num_subsets() + x.universe_size()
                + (x.num_subsets() - x.universe_size() / 3);
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => f.vector_for(m).map_err(|e| e.to_string())?,
                None => {
                    let mut v = vec![0i64; m];
                    v[0] = 2;
                    v[1] = 1;
                    ScoringVector::new(v).unwrap()
                }
            };
            reductions::reduce_x3c_210(&x, &rule, mode).map(|o| (o, Source::X3C(x)))
        }
        "x3c-veto-plurality-small" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string())?;
            let m = 2 + 3 * x.num_subsets() + x.universe_size();
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => f.vector_for(m).map_err(|e| e.to_string())?,
                None => {
                    let mut v = vec![2i64; m];
                    v[0] = 3;
                    v[m - 1] = 0;
                    ScoringVector::new(v).unwrap()
                }
            };
            reductions::reduce_x3c_veto_plurality_small(&x, &rule, mode)
                .map(|o| (o, Source::X3C(x)))
        }
        "x3c-veto-plurality-large" => {
            let x = io::parse_x3c(text).map_err(|e| e.to_string())?;
            let m = 2 + 2 * x.num_subsets() + x.universe_size();
            let rule = match &rule_override {
                Some(RuleSpec::Explicit(v)) => v.clone(),
                Some(RuleSpec::Family(f)) => f.vector_for(m).map_err(|e| e.to_string())?,
                None => {
                    let mut v = vec![2i64; m];
                    v[0] = 5;
                    v[m - 1] = 0;
                    ScoringVector::new(v).unwrap()
                }
            };
            reductions::reduce_x3c_veto_plurality_large(&x, &rule, mode)
                .map(|o| (o, Source::X3C(x)))
        }
        other => return Err(format!("unknown construction `{other}`")),
    };
    res.map_err(|e| e.to_string())
}

fn reduce(a: ReduceArgs, verify: bool) -> Result<i32, String> {
    let text = read_input(&a.file)?;
    let (output, source) = build_reduction(&a, &text)?;
    if !verify {
        print!("{}", io::serialize_profile(&output.instance));
        return Ok(0);
    }
    let oracle = match &source {
        Source::X3C(x) => SourceOracle::X3C(x),
        Source::MC(g) => SourceOracle::MC(g),
    };
    let report = verify_reduction(&output, oracle, 1_000_000, a.budget);
    print!("{}", report.render());
    Ok(match report.status() {
        CheckStatus::Pass => 0,
        CheckStatus::Fail => 1,
        CheckStatus::Inconclusive => 2,
    })
}

fn realize_cmd(a: FileArg) -> Result<i32, String> {
    let text = read_input(&a.file)?;
    let task = io::parse_realize_task(&text).map_err(|e| e.to_string())?;
    let linear = crate::realize::realize(
        &task.instance.profile.votes,
        task.instance.distinguished,
        &task.spec,
        &task.instance.rule,
    )
    .map_err(|e| e.to_string())?;
    let mut full = task.instance.clone();
    for l in &linear {
        full.profile.votes.push(l.as_partial());
    }
    print!("{}", io::serialize_profile(&full));
    eprintln!(
        "realized {} linear votes over {} partial votes",
        linear.len(),
        task.instance.profile.votes.len()
    );
    Ok(0)
}

fn classify(a: ClassifyArgs) -> Result<i32, String> {
    let vector = match (&a.vector, &a.rule) {
        (Some(v), _) => match RuleSpec::parse(v)? {
            RuleSpec::Explicit(v) => v,
            RuleSpec::Family(_) => return Err("--vector needs an explicit vector".into()),
        },
        (None, Some(r)) => {
            let m = a.m.ok_or("--rule needs --m to fix the length")?;
            RuleSpec::parse(r)?.resolve(m).map_err(|e| e.to_string())?
        }
        (None, None) => return Err("pass --vector or --rule with --m".into()),
    };
    let tag = reductions::classify_scoring_vector(&vector, a.x_threshold);
    println!("{tag}");
    Ok(0)
}

fn gen(a: GenArgs) -> Result<i32, String> {
    let mut rng = crate::gen::rng(a.seed);
    match a.kind.as_str() {
        "x3c" => {
            let q = a.q.ok_or("--q is required")?;
            let t = a.t.ok_or("--t is required")?;
            print!("{}", io::serialize_x3c(&crate::gen::random_x3c(q, t, &mut rng)));
            Ok(0)
        }
        "mc" => {
            let k = a.k.ok_or("--k is required")?;
            print!(
                "{}",
                io::serialize_mc(&crate::gen::random_mc(k, a.max_class, a.density, &mut rng))
            );
            Ok(0)
        }
        "profile" => {
            let m = a.m.ok_or("--m is required")?;
            let n = a.n.ok_or("--n is required")?;
            let rule = match &a.rule {
                Some(r) => RuleSpec::parse(r)?.resolve(m).map_err(|e| e.to_string())?,
                None => ScoringRuleFamily::Plurality
                    .vector_for(m)
                    .map_err(|e| e.to_string())?,
            };
            let mode = io::parse_mode(&a.mode)?;
            let inst: PWInstance =
                crate::gen::random_instance(m, n, a.density, rule, mode, &mut rng);
            print!("{}", io::serialize_profile(&inst));
            Ok(0)
        }
        other => Err(format!("unknown generator `{other}`")),
    }
}
