use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use propvote::axioms::{
    check, check_generalised_psc, check_generalised_weak_psc, check_pjr, Axiom, GENERALISED_MAX_M,
    PJR_MAX_N,
};
use propvote::ballots::{parse_ballots, serialize_ballots};
use propvote::ear::{ear, EarConfig, Priority};
use propvote::monotonicity::{check_monotonicity, check_monotonicity_paired, Variant};
use propvote::phragmen::{self, phragmen_first_all};
use propvote::report;
use propvote::stv::{self, stv, stv_all_outcomes, Reweighting, StvConfig};
use propvote::testkit::{random_profile, Culture, ProfileSpec};
use propvote::{Candidate, Committee, Profile, QuotaSpec, Rule};

#[derive(Parser)]
#[command(
    name = "propvote",
    version,
    about = "Proportional multiwinner elections over ranked ballots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rule and print the committee.
    Run {
        rule: RuleName,
        ballots: PathBuf,
        #[command(flatten)]
        flags: RuleFlags,
        /// `lex` breaks ties toward the smallest candidate; `all` lists every
        /// reachable committee (stv, phragmen1).
        #[arg(long, value_enum, default_value_t = Ties::Lex)]
        ties: Ties,
        /// Write the round-by-round trace here (ear, stv).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a committee against a proportionality axiom. Exit 1 if violated.
    Check {
        axiom: AxiomName,
        ballots: PathBuf,
        /// Comma-separated candidate names, exactly k of them.
        #[arg(long, value_delimiter = ',', required = true)]
        committee: Vec<String>,
        /// hare, droop, default or <p>/<q>[,strict]. Not used by pjr.
        #[arg(long)]
        quota: Option<QuotaSpec>,
    },
    /// Search single-ballot reinforcements for a monotonicity failure. Exit 1
    /// if one is found.
    Mono {
        variant: Variant,
        #[arg(long)]
        rule: RuleName,
        ballots: PathBuf,
        #[command(flatten)]
        flags: RuleFlags,
        /// Reinforce the winner in two ballots at once.
        #[arg(long)]
        paired: bool,
    },
    /// Generate a seeded random profile.
    Gen {
        /// strict, weak[:<max classes>] or dichotomous[:<p>/<q>].
        #[arg(long, default_value = "strict")]
        culture: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum RuleName {
    Ear,
    Stv,
    Qbs,
    #[value(name = "phragmen1")]
    Phragmen1,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Ties {
    Lex,
    All,
}

#[derive(Copy, Clone, ValueEnum)]
enum AxiomName {
    Psc,
    WeakPsc,
    Gpsc,
    WeakGpsc,
    Pjr,
}

#[derive(Args)]
struct RuleFlags {
    /// hare, droop, default or <p>/<q>[,strict]. Defaults: droop for stv,
    /// default for ear and qbs.
    #[arg(long)]
    quota: Option<QuotaSpec>,
    /// fractional or discrete:<p> (stv).
    #[arg(long, default_value = "fractional")]
    reweight: String,
    /// rank-maximal, max-support or file:<path> (ear).
    #[arg(long, default_value = "rank-maximal")]
    priority: String,
    /// Only explicitly ranked classes are approved; unfilled seats go by
    /// priority (ear).
    #[arg(long)]
    partial_list: bool,
    /// Accept a quota outside (n/(k+1), n/k].
    #[arg(long)]
    allow_any_quota: bool,
}

fn load(path: &Path) -> Result<Profile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ballots(&text).with_context(|| format!("parsing {}", path.display()))
}

fn candidates(profile: &Profile, names: &[String]) -> Result<Vec<Candidate>> {
    names
        .iter()
        .map(|name| Ok(profile.candidate(name.trim())?))
        .collect()
}

fn priority(profile: &Profile, spec: &str) -> Result<Priority> {
    match spec {
        "rank-maximal" => Ok(Priority::RankMaximal),
        "max-support" => Ok(Priority::MaxSupport),
        other => {
            let Some(path) = other.strip_prefix("file:") else {
                bail!(
                    "unknown priority `{other}`; expected rank-maximal, max-support or file:<path>"
                );
            };
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let names: Vec<String> = text
                .split(|ch: char| ch.is_whitespace() || ch == '>' || ch == ',')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            Ok(Priority::Given(candidates(profile, &names)?))
        }
    }
}

fn reweighting(spec: &str) -> Result<Reweighting> {
    if spec == "fractional" {
        return Ok(Reweighting::Fractional);
    }
    let p = spec
        .strip_prefix("discrete:")
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| {
            anyhow!("unknown reweighting `{spec}`; expected fractional or discrete:<p>")
        })?;
    Ok(Reweighting::Discrete(p))
}

fn build_rule(name: RuleName, profile: &Profile, flags: &RuleFlags) -> Result<Rule> {
    Ok(match name {
        RuleName::Ear => Rule::Ear(EarConfig {
            quota: flags.quota.clone().unwrap_or(QuotaSpec::Default),
            priority: priority(profile, &flags.priority)?,
            partial_list: flags.partial_list,
            allow_any_quota: flags.allow_any_quota,
        }),
        RuleName::Stv => Rule::Stv(StvConfig {
            quota: flags.quota.clone().unwrap_or(QuotaSpec::Droop),
            reweighting: reweighting(&flags.reweight)?,
            allow_any_quota: flags.allow_any_quota,
        }),
        RuleName::Qbs => Rule::Qbs(flags.quota.clone().unwrap_or(QuotaSpec::Default)),
        RuleName::Phragmen1 => Rule::PhragmenFirst,
    })
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(
    name: RuleName,
    path: &Path,
    flags: &RuleFlags,
    ties: Ties,
    trace: Option<&Path>,
) -> Result<ExitCode> {
    let profile = load(path)?;
    let rule = build_rule(name, &profile, flags)?;
    if ties == Ties::All {
        if trace.is_some() {
            bail!("--trace cannot be combined with --ties all");
        }
        let outcomes = match &rule {
            Rule::Stv(config) => stv_all_outcomes(&profile, config, stv::ALL_OUTCOMES_MAX_M)?,
            Rule::PhragmenFirst => phragmen_first_all(&profile, phragmen::ALL_OUTCOMES_MAX_M)?,
            other => bail!("--ties all is not available for {other}"),
        };
        print_json(&report::outcomes_json(&profile, rule.name(), &outcomes))?;
        return Ok(ExitCode::SUCCESS);
    }
    let w = match (&rule, trace) {
        (Rule::Ear(config), Some(out)) => {
            let (w, t) = ear(&profile, config)?;
            write_json(out, &report::ear_trace_json(&profile, &w, &t))?;
            w
        }
        (Rule::Stv(config), Some(out)) => {
            let (w, t) = stv(&profile, config)?;
            write_json(out, &report::stv_trace_json(&profile, &w, &t))?;
            w
        }
        (other, Some(_)) => bail!("--trace is not available for {other}"),
        (rule, None) => rule.run(&profile)?,
    };
    print_json(&report::committee_json(&profile, rule.name(), &w))?;
    Ok(ExitCode::SUCCESS)
}

fn check_axiom(
    name: AxiomName,
    path: &Path,
    members: &[String],
    quota: Option<QuotaSpec>,
) -> Result<ExitCode> {
    let profile = load(path)?;
    let w = Committee::from_order(candidates(&profile, members)?);
    if w.len() != members.len() {
        bail!("--committee lists a candidate twice");
    }
    let (axiom, quota) = match name {
        AxiomName::Pjr => {
            if quota.is_some() {
                bail!("pjr uses the Hare quota; --quota does not apply");
            }
            (Axiom::Pjr, None)
        }
        AxiomName::Psc => (Axiom::Psc, quota),
        AxiomName::WeakPsc => (Axiom::WeakPsc, quota),
        AxiomName::Gpsc => (Axiom::GeneralisedPsc, quota),
        AxiomName::WeakGpsc => (Axiom::GeneralisedWeakPsc, quota),
    };
    let quota = (axiom != Axiom::Pjr).then(|| {
        quota
            .unwrap_or(QuotaSpec::Droop)
            .resolve(profile.n(), profile.k(), profile.m())
    });
    let verdict = match (axiom, &quota) {
        (Axiom::Pjr, _) => check_pjr(&profile, &w, PJR_MAX_N)?,
        (Axiom::GeneralisedPsc, Some(q)) => {
            check_generalised_psc(&profile, &w, q, GENERALISED_MAX_M)?
        }
        (Axiom::GeneralisedWeakPsc, Some(q)) => {
            check_generalised_weak_psc(&profile, &w, q, GENERALISED_MAX_M)?
        }
        (axiom, Some(q)) => check(axiom, &profile, &w, q)?,
        (_, None) => unreachable!("quota resolved for every axiom but pjr"),
    };
    print_json(&report::verdict_json(
        &profile,
        axiom,
        quota.as_ref(),
        &w,
        &verdict,
    ))?;
    Ok(if verdict.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn mono(
    variant: Variant,
    name: RuleName,
    path: &Path,
    flags: &RuleFlags,
    paired: bool,
) -> Result<ExitCode> {
    let profile = load(path)?;
    let rule = build_rule(name, &profile, flags)?;
    let verdict = if paired {
        check_monotonicity_paired(&rule, &profile, variant)?
    } else {
        check_monotonicity(&rule, &profile, variant)?
    };
    print_json(&report::mono_json(&profile, rule.name(), variant, &verdict))?;
    Ok(if verdict.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn culture(spec: &str, m: usize) -> Result<Culture> {
    let (kind, arg) = match spec.split_once(':') {
        Some((kind, arg)) => (kind, Some(arg)),
        None => (spec, None),
    };
    match (kind, arg) {
        ("strict", None) => Ok(Culture::ImpartialStrict),
        ("weak", None) => Ok(Culture::RandomWeak {
            max_classes: m.max(1),
        }),
        ("weak", Some(r)) => Ok(Culture::RandomWeak {
            max_classes: r.parse().context("weak:<max classes>")?,
        }),
        ("dichotomous", None) => Ok(Culture::Dichotomous { numer: 1, denom: 2 }),
        ("dichotomous", Some(p)) => {
            let (numer, denom) = p
                .split_once('/')
                .ok_or_else(|| anyhow!("dichotomous:<p>/<q>"))?;
            Ok(Culture::Dichotomous {
                numer: numer.parse().context("dichotomous:<p>/<q>")?,
                denom: denom.parse().context("dichotomous:<p>/<q>")?,
            })
        }
        _ => {
            bail!("unknown culture `{spec}`; expected strict, weak[:<r>] or dichotomous[:<p>/<q>]")
        }
    }
}

fn generate(
    spec: &str,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let culture = culture(spec, m)?;
    let profile = random_profile(&ProfileSpec {
        culture,
        n,
        m,
        k,
        seed,
    })?;
    let text = serialize_ballots(&profile);
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            rule,
            ballots,
            flags,
            ties,
            trace,
        } => run(*rule, ballots, flags, *ties, trace.as_deref()),
        Command::Check {
            axiom,
            ballots,
            committee,
            quota,
        } => check_axiom(*axiom, ballots, committee, quota.clone()),
        Command::Mono {
            variant,
            rule,
            ballots,
            flags,
            paired,
        } => mono(*variant, *rule, ballots, flags, *paired),
        Command::Gen {
            culture,
            n,
            m,
            k,
            seed,
            output,
        } => generate(culture, *n, *m, *k, *seed, output.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
