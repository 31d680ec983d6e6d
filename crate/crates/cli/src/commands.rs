//! Subcommand implementations.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use argagree::agreement::{DegreeKind, ExtensionProfile, SimilarityKind};
use argagree::dynamics::{
    aas_normal_expansion_diagnostic, check_principle_with, enforce_extensions, expansion_diagnostic,
    normal_expansion_diagnostic, Evidence, ExpansionFailure, PrincipleKind,
};
use argagree::format::{parse_scenario, Scenario};
use argagree::synth::{self, GenConfig};
use argagree::vaf::{vaas_normal_expansion_diagnostic, ValueId};
use argagree::{ArgFramework, Extension, ExtensionSet, Limits, SemanticsKind};
use serde::Serialize;

use crate::report::{table, Num, Report};
use crate::{Cli, Command, Experiment, Pair};

#[derive(Debug)]
pub enum CliError {
    Core {
        path: Option<PathBuf>,
        err: argagree::Error,
    },
    Io {
        path: PathBuf,
        err: std::io::Error,
    },
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core { err, .. } => err.code(),
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // positioned errors already start with line:column
            CliError::Core {
                path: Some(p),
                err: err @ (argagree::Error::Parse { .. } | argagree::Error::Located { .. }),
            } => write!(f, "{}:{err}", p.display()),
            CliError::Core { path: Some(p), err } => write!(f, "{}: {err}", p.display()),
            CliError::Core { path: None, err } => write!(f, "{err}"),
            CliError::Io { path, err } => write!(f, "{}: {err}", path.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<argagree::Error> for CliError {
    fn from(err: argagree::Error) -> Self {
        CliError::Core { path: None, err }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|err| CliError::Io {
        path: path.to_path_buf(),
        err,
    })?;
    let in_file = |err| CliError::Core {
        path: Some(path.to_path_buf()),
        err,
    };
    parse_scenario(&text).and_then(|doc| doc.scenario()).map_err(in_file)
}

fn profile(scn: &Scenario, limits: &Limits) -> Result<ExtensionProfile> {
    match scn {
        Scenario::Abstract(s) => Ok(s.profile(limits)?),
        Scenario::Value(s) => Ok(s.profile(limits)?),
        Scenario::Framework(_) => Err(CliError::Usage(
            "this command needs a scenario with a topic and agents".into(),
        )),
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let limits = Limits::default();
    match &cli.command {
        Command::Solve { file, semantics } => solve(&load(file)?, *semantics, &limits),
        Command::Degrees {
            scenario,
            similarity,
            kind,
        } => degrees(&load(scenario)?, *similarity, *kind, &limits),
        Command::Sat {
            scenario,
            agents,
            similarity,
            ..
        } => sat(&load(scenario)?, *agents, *similarity, &limits),
        Command::Impact {
            scenario,
            value,
            similarity,
        } => impact(&load(scenario)?, value, *similarity, &limits),
        Command::CheckExpansion { pair, normal } => check_expansion(pair, *normal),
        Command::CheckPrinciple {
            pair,
            principle,
            semantics,
        } => check(pair, *principle, *semantics, &limits),
        Command::Enforce {
            pair,
            principle,
            similarity,
        } => enforce(pair, *principle, *similarity, &limits),
        Command::Experiment(e) => experiment(e),
    }
}

fn set_text(s: &ExtensionSet) -> String {
    s.to_string()
}

#[derive(Serialize)]
struct SolveOut<'a> {
    command: &'static str,
    semantics: SemanticsKind,
    extensions: &'a ExtensionSet,
}

fn solve(scn: &Scenario, sem: SemanticsKind, limits: &Limits) -> Result<Report> {
    let exts = scn.af().enumerate_with(sem, limits)?;
    let text: String = exts.iter().map(|e| format!("{e}\n")).collect();
    Ok(Report::new(
        SolveOut {
            command: "solve",
            semantics: sem,
            extensions: &exts,
        },
        text,
    ))
}

#[derive(Serialize)]
struct DegreeOut {
    kind: DegreeKind,
    #[serde(flatten)]
    value: Num,
    witness: Extension,
}

#[derive(Serialize)]
struct DegreesOut {
    command: &'static str,
    similarity: SimilarityKind,
    degrees: Vec<DegreeOut>,
}

fn degrees(
    scn: &Scenario,
    skind: SimilarityKind,
    kind: Option<DegreeKind>,
    limits: &Limits,
) -> Result<Report> {
    let all = profile(scn, limits)?.degrees(skind, limits)?;
    let chosen: Vec<DegreeOut> = all
        .into_iter()
        .filter(|r| kind.is_none_or(|k| k == r.kind))
        .map(|r| DegreeOut {
            kind: r.kind,
            value: r.value.into(),
            witness: r.witness,
        })
        .collect();
    let rows: Vec<Vec<String>> = chosen
        .iter()
        .map(|d| {
            vec![
                d.kind.short().to_string(),
                d.value.exact.clone(),
                d.value.decimal_text(),
                d.witness.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(
        DegreesOut {
            command: "degrees",
            similarity: skind,
            degrees: chosen,
        },
        table(&rows),
    ))
}

#[derive(Serialize)]
struct PairOut {
    command: &'static str,
    similarity: SimilarityKind,
    agents: [usize; 2],
    #[serde(flatten)]
    value: Num,
}

#[derive(Serialize)]
struct MatrixOut {
    command: &'static str,
    similarity: SimilarityKind,
    matrix: Vec<Vec<Num>>,
}

fn sat(
    scn: &Scenario,
    agents: Option<(usize, usize)>,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<Report> {
    let p = profile(scn, limits)?;
    if let Some((i, j)) = agents {
        let value: Num = p.two_agent_satisfaction(i, j, skind)?.into();
        let text = format!("{}\n", value.pair());
        return Ok(Report::new(
            PairOut {
                command: "sat",
                similarity: skind,
                agents: [i, j],
                value,
            },
            text,
        ));
    }
    let matrix: Vec<Vec<Num>> = p
        .satisfaction_matrix(skind)
        .into_iter()
        .map(|row| row.into_iter().map(Num::from).collect())
        .collect();
    let n = matrix.len();
    let mut rows = vec![std::iter::once(String::new())
        .chain((0..n).map(|j| j.to_string()))
        .collect::<Vec<_>>()];
    for (i, row) in matrix.iter().enumerate() {
        rows.push(
            std::iter::once(i.to_string())
                .chain(row.iter().map(|v| v.exact.clone()))
                .collect(),
        );
    }
    Ok(Report::new(
        MatrixOut {
            command: "sat",
            similarity: skind,
            matrix,
        },
        table(&rows),
    ))
}

#[derive(Serialize)]
struct KindNum {
    kind: DegreeKind,
    #[serde(flatten)]
    value: Num,
}

#[derive(Serialize)]
struct ImpactOut {
    command: &'static str,
    similarity: SimilarityKind,
    value: String,
    impacts: Vec<KindNum>,
}

fn impact(scn: &Scenario, value: &str, skind: SimilarityKind, limits: &Limits) -> Result<Report> {
    let Scenario::Value(vscn) = scn else {
        return Err(CliError::Usage("impact needs a value-based scenario".into()));
    };
    let v = ValueId::new(value)?;
    let impacts = argagree::vaf::value_impacts(vscn, &v, skind, limits)?;
    let out: Vec<KindNum> = DegreeKind::ALL
        .into_iter()
        .zip(impacts)
        .map(|(kind, d)| KindNum {
            kind,
            value: d.into(),
        })
        .collect();
    let rows: Vec<Vec<String>> = out
        .iter()
        .map(|k| vec![k.kind.short().to_string(), k.value.exact.clone(), k.value.decimal_text()])
        .collect();
    Ok(Report::new(
        ImpactOut {
            command: "impact",
            similarity: skind,
            value: value.to_string(),
            impacts: out,
        },
        table(&rows),
    ))
}

#[derive(Serialize)]
struct ExpansionOut {
    command: &'static str,
    normal: bool,
    holds: bool,
    failure: Option<&'static str>,
}

fn check_expansion(pair: &Pair, normal: bool) -> Result<Report> {
    let (s1, s2) = (load(&pair.before)?, load(&pair.after)?);
    let verdict: std::result::Result<(), ExpansionFailure> = if !normal {
        expansion_diagnostic(s1.af(), s2.af())
    } else {
        match (&s1, &s2) {
            (Scenario::Framework(a), Scenario::Framework(b)) => normal_expansion_diagnostic(a, b),
            (Scenario::Abstract(a), Scenario::Abstract(b)) => aas_normal_expansion_diagnostic(a, b),
            (Scenario::Value(a), Scenario::Value(b)) => vaas_normal_expansion_diagnostic(a, b),
            _ => {
                return Err(CliError::Usage(
                    "both files must describe the same kind of scenario".into(),
                ))
            }
        }
    };
    let failure = verdict.err().map(ExpansionFailure::code);
    let text = match failure {
        None => "true\n".to_string(),
        Some(code) => format!("false: {code}\n"),
    };
    Ok(Report::new(
        ExpansionOut {
            command: "check-expansion",
            normal,
            holds: failure.is_none(),
            failure,
        },
        text,
    ))
}

/// One agent's view of a before/after pair.
struct AgentPair {
    semantics: SemanticsKind,
    af1: ArgFramework,
    af2: ArgFramework,
}

fn agent_pairs(s1: &Scenario, s2: &Scenario, fallback: Option<SemanticsKind>) -> Result<Vec<AgentPair>> {
    let explicit = |what: &str| {
        CliError::Usage(format!("--semantics applies only to plain frameworks, not {what} scenarios"))
    };
    match (s1, s2) {
        (Scenario::Framework(a), Scenario::Framework(b)) => {
            let semantics = fallback.ok_or_else(|| {
                CliError::Usage("plain frameworks declare no semantics; pass --semantics".into())
            })?;
            Ok(vec![AgentPair {
                semantics,
                af1: a.clone(),
                af2: b.clone(),
            }])
        }
        (Scenario::Abstract(a), Scenario::Abstract(b)) => {
            if fallback.is_some() {
                return Err(explicit("agent-based"));
            }
            if a.agents() != b.agents() {
                return Err(argagree::Error::Precondition(
                    "the two scenarios assign different semantics to their agents".into(),
                )
                .into());
            }
            Ok(a.agents()
                .iter()
                .map(|&semantics| AgentPair {
                    semantics,
                    af1: a.af().clone(),
                    af2: b.af().clone(),
                })
                .collect())
        }
        (Scenario::Value(a), Scenario::Value(b)) => {
            if fallback.is_some() {
                return Err(explicit("value-based"));
            }
            if a.semantics() != b.semantics() || a.vaf().agent_count() != b.vaf().agent_count() {
                return Err(argagree::Error::Precondition(
                    "the two scenarios differ in semantics or number of agents".into(),
                )
                .into());
            }
            (0..a.vaf().agent_count())
                .map(|i| {
                    Ok(AgentPair {
                        semantics: a.semantics(),
                        af1: a.vaf().subjective_framework(i)?,
                        af2: b.vaf().subjective_framework(i)?,
                    })
                })
                .collect()
        }
        _ => Err(CliError::Usage(
            "both files must describe the same kind of scenario".into(),
        )),
    }
}

#[derive(Serialize)]
struct AgentVerdict {
    agent: usize,
    semantics: SemanticsKind,
    holds: bool,
    witnesses: Vec<argagree::dynamics::ExtensionWitness>,
}

#[derive(Serialize)]
struct PrincipleOut {
    command: &'static str,
    principle: PrincipleKind,
    holds: bool,
    agents: Vec<AgentVerdict>,
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::NewAttack { from, to } => format!("new attack {from}->{to}"),
        Evidence::StrongAttacker { argument } => format!("strong attacker {argument}"),
    }
}

fn check(
    pair: &Pair,
    principle: PrincipleKind,
    fallback: Option<SemanticsKind>,
    limits: &Limits,
) -> Result<Report> {
    let (s1, s2) = (load(&pair.before)?, load(&pair.after)?);
    let mut agents = Vec::new();
    for (i, a) in agent_pairs(&s1, &s2, fallback)?.into_iter().enumerate() {
        let v = check_principle_with(&a.af1, &a.af2, a.semantics, principle, limits)?;
        agents.push(AgentVerdict {
            agent: i,
            semantics: a.semantics,
            holds: v.holds,
            witnesses: v.witnesses,
        });
    }
    let holds = agents.iter().all(|a| a.holds);
    let mut text = format!(
        "{}: {}\n",
        principle.short(),
        if holds { "holds" } else { "violated" }
    );
    for a in &agents {
        text.push_str(&format!(
            "agent {} ({}): {}\n",
            a.agent,
            a.semantics,
            if a.holds { "holds" } else { "violated" }
        ));
        for w in &a.witnesses {
            let condition = match &w.evidence {
                None => "condition true".to_string(),
                Some(e) => format!("condition false ({})", evidence_text(e)),
            };
            let superset = match &w.superset {
                Some(s) => format!("superset {s}"),
                None => "no superset".to_string(),
            };
            text.push_str(&format!("  {}: {condition}, {superset}\n", w.extension));
        }
    }
    Ok(Report::new(
        PrincipleOut {
            command: "check-principle",
            principle,
            holds,
            agents,
        },
        text,
    ))
}

#[derive(Serialize)]
struct EnforcedAgent {
    agent: usize,
    semantics: SemanticsKind,
    extensions: ExtensionSet,
}

#[derive(Serialize)]
struct DegreeComparison {
    kind: DegreeKind,
    before: Num,
    after: Num,
    enforced: Num,
    delta: Num,
    enforced_delta: Num,
}

#[derive(Serialize)]
struct EnforceOut {
    command: &'static str,
    principle: PrincipleKind,
    similarity: SimilarityKind,
    agents: Vec<EnforcedAgent>,
    degrees: Vec<DegreeComparison>,
}

fn enforce(
    pair: &Pair,
    principle: PrincipleKind,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<Report> {
    let (s1, s2) = (load(&pair.before)?, load(&pair.after)?);
    let p1 = profile(&s1, limits)?;
    let p2 = profile(&s2, limits)?;
    let mut agents = Vec::new();
    for (i, a) in agent_pairs(&s1, &s2, None)?.into_iter().enumerate() {
        let exts1 = a.af1.enumerate_with(a.semantics, limits)?;
        let exts2 = a.af2.enumerate_with(a.semantics, limits)?;
        let extensions =
            enforce_extensions(&a.af1, &exts1, &a.af2, &exts2, p2.topic(), principle, limits)?;
        agents.push(EnforcedAgent {
            agent: i,
            semantics: a.semantics,
            extensions,
        });
    }
    let p3 = ExtensionProfile::new(
        p2.af().clone(),
        p2.topic().clone(),
        agents.iter().map(|a| a.extensions.clone()).collect(),
    )?;
    let d1 = p1.degrees(skind, limits)?;
    let d2 = p2.degrees(skind, limits)?;
    let d3 = p3.degrees(skind, limits)?;
    let degrees: Vec<DegreeComparison> = (0..3)
        .map(|k| DegreeComparison {
            kind: d1[k].kind,
            before: d1[k].value.into(),
            after: d2[k].value.into(),
            enforced: d3[k].value.into(),
            delta: d1[k].value.abs_diff(d2[k].value).into(),
            enforced_delta: d1[k].value.abs_diff(d3[k].value).into(),
        })
        .collect();
    let mut text = String::new();
    for a in &agents {
        text.push_str(&format!("agent {} ({}): {}\n", a.agent, a.semantics, set_text(&a.extensions)));
    }
    let mut rows = vec![["kind", "before", "after", "enforced", "delta", "enforced-delta"]
        .map(String::from)
        .to_vec()];
    for d in &degrees {
        rows.push(vec![
            d.kind.short().to_string(),
            d.before.exact.clone(),
            d.after.exact.clone(),
            d.enforced.exact.clone(),
            d.delta.exact.clone(),
            d.enforced_delta.exact.clone(),
        ]);
    }
    text.push_str(&table(&rows));
    Ok(Report::new(
        EnforceOut {
            command: "enforce",
            principle,
            similarity: skind,
            agents,
            degrees,
        },
        text,
    ))
}

#[derive(Serialize)]
struct ExperimentOut {
    command: &'static str,
    experiment: synth::Experiment,
    topic_mode: synth::TopicMode,
    semantics: SemanticsKind,
    seed: u64,
    reps: u64,
    rows: usize,
    out: String,
}

fn experiment(e: &Experiment) -> Result<Report> {
    let (run, records) = match e {
        Experiment::Delta {
            run,
            expanding_topic,
            max_expansion,
        } => {
            let cfg = GenConfig::default().with_seed(run.seed);
            let records = synth::run_delta_experiment(
                &cfg,
                run.semantics,
                *max_expansion as usize,
                run.reps as usize,
                *expanding_topic,
            )?;
            (run, records)
        }
        Experiment::Impact {
            run,
            proportional_topic,
            min_size,
            max_size,
        } => {
            if max_size < min_size {
                return Err(CliError::Usage(format!(
                    "--max-size {max_size} is below --min-size {min_size}"
                )));
            }
            let cfg = GenConfig::default().with_seed(run.seed);
            let records = synth::run_impact_experiment(
                &cfg,
                run.semantics,
                *min_size as usize,
                *max_size as usize,
                run.reps as usize,
                *proportional_topic,
            )?;
            (run, records)
        }
    };
    let csv = synth::to_csv_string(&records);
    fs::write(&run.out, &csv).map_err(|err| CliError::Io {
        path: run.out.clone(),
        err,
    })?;
    let rows = 2 * records.len();
    let first = records.first().expect("at least one size");
    let text = format!("wrote {rows} rows to {}\n", run.out.display());
    Ok(Report::new(
        ExperimentOut {
            command: "experiment",
            experiment: first.experiment,
            topic_mode: first.topic_mode,
            semantics: run.semantics,
            seed: run.seed,
            reps: run.reps,
            rows,
            out: run.out.display().to_string(),
        },
        text,
    ))
}
