//! Similarity measures, degrees of satisfaction and degrees of agreement.
//!
//! Every degree is an exact rational. Agreement degrees maximize an aggregate
//! of per-agent satisfaction over every subset of the topic, so the topic size
//! is capped (see [`Limits::max_topic`]).

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::af::{ArgFramework, Extension, ExtensionSet, SemanticsKind};
use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::Limits;

pub use crate::rational::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    Intersection,
    Complement,
    Hamming,
}

impl SimilarityKind {
    pub const ALL: [SimilarityKind; 3] = [
        SimilarityKind::Intersection,
        SimilarityKind::Complement,
        SimilarityKind::Hamming,
    ];

    pub fn short(self) -> &'static str {
        match self {
            SimilarityKind::Intersection => "i",
            SimilarityKind::Complement => "c",
            SimilarityKind::Hamming => "h",
        }
    }
}

impl fmt::Display for SimilarityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "intersection" => Ok(SimilarityKind::Intersection),
            "c" | "complement" => Ok(SimilarityKind::Complement),
            "h" | "hamming" => Ok(SimilarityKind::Hamming),
            _ => Err(Error::Domain(format!("unknown similarity {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    Min,
    Mean,
    Median,
}

impl DegreeKind {
    pub const ALL: [DegreeKind; 3] = [DegreeKind::Min, DegreeKind::Mean, DegreeKind::Median];

    pub fn short(self) -> &'static str {
        match self {
            DegreeKind::Min => "min",
            DegreeKind::Mean => "mean",
            DegreeKind::Median => "median",
        }
    }

    fn slot(self) -> usize {
        match self {
            DegreeKind::Min => 0,
            DegreeKind::Mean => 1,
            DegreeKind::Median => 2,
        }
    }
}

impl fmt::Display for DegreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for DegreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(DegreeKind::Min),
            "mean" => Ok(DegreeKind::Mean),
            "med" | "median" => Ok(DegreeKind::Median),
            _ => Err(Error::Domain(format!("unknown degree kind {s:?}"))),
        }
    }
}

/// Similarity from the topic size and the number of topic arguments that
/// both sets include (`inside`) and that both sets exclude (`outside`).
fn similarity_counts(kind: SimilarityKind, topic: u64, inside: u64, outside: u64) -> Degree {
    match kind {
        SimilarityKind::Intersection => {
            let union = topic - outside;
            if union == 0 {
                Degree::ONE
            } else {
                Degree::frac(inside, union)
            }
        }
        SimilarityKind::Complement => {
            let union = topic - inside;
            if union == 0 {
                Degree::ONE
            } else {
                Degree::frac(outside, union)
            }
        }
        SimilarityKind::Hamming => {
            if topic == 0 {
                Degree::ONE
            } else {
                Degree::frac(inside + outside, topic)
            }
        }
    }
}

/// Similarity of `e` and `s` with respect to topic `t`; only their
/// intersections with `t` matter.
pub fn similarity(kind: SimilarityKind, e: &Extension, s: &Extension, t: &Extension) -> Degree {
    let inside = t.iter().filter(|a| e.contains(a) && s.contains(a)).count() as u64;
    let outside = t.iter().filter(|a| !e.contains(a) && !s.contains(a)).count() as u64;
    similarity_counts(kind, t.len() as u64, inside, outside)
}

fn similarity_masks(kind: SimilarityKind, k: usize, x: Mask, e: Mask) -> Degree {
    let all = bits::full(k);
    let inside = (x & e).count_ones() as u64;
    let outside = (all & !(x | e)).count_ones() as u64;
    similarity_counts(kind, k as u64, inside, outside)
}

/// Median of a nonempty sequence; even lengths average the middle pair.
pub fn median(values: &[Degree]) -> Result<Degree> {
    if values.is_empty() {
        return Err(Error::Domain("median of an empty sequence".into()));
    }
    let mut v = values.to_vec();
    v.sort();
    let n = v.len();
    if n % 2 == 1 {
        Ok(v[n / 2])
    } else {
        Ok(Degree::from_ratio(
            (v[n / 2 - 1].ratio() + v[n / 2].ratio()) / Ratio::from_integer(2),
        ))
    }
}

/// A degree together with one topic subset attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeResult {
    pub kind: DegreeKind,
    pub value: Degree,
    /// Maximizing subset of the topic; ties go to the smallest cardinality,
    /// then to the lexicographically first member list.
    pub witness: Extension,
}

/// An argumentation-based agreement scenario: framework, topic and one
/// semantics per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementScenario {
    af: ArgFramework,
    topic: Extension,
    agents: Vec<SemanticsKind>,
}

impl AgreementScenario {
    pub fn new(af: ArgFramework, topic: Extension, agents: Vec<SemanticsKind>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::Domain("an agreement scenario needs at least one agent".into()));
        }
        af.mask(&topic)?;
        Ok(AgreementScenario { af, topic, agents })
    }

    pub fn af(&self) -> &ArgFramework {
        &self.af
    }

    pub fn topic(&self) -> &Extension {
        &self.topic
    }

    pub fn agents(&self) -> &[SemanticsKind] {
        &self.agents
    }

    /// Resolves every agent's semantics to its extension set.
    pub fn profile(&self, limits: &Limits) -> Result<ExtensionProfile> {
        let agents = self
            .agents
            .iter()
            .map(|&k| self.af.enumerate_with(k, limits))
            .collect::<Result<Vec<_>>>()?;
        ExtensionProfile::new(self.af.clone(), self.topic.clone(), agents)
    }
}

/// A shared framework and topic with one extension set per agent.
///
/// This is the common currency of the degree computations: abstract
/// scenarios resolve semantics into it, value-based scenarios fill it with
/// the extensions of each agent's subjective framework, and enforcement
/// swaps in adjusted extension sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionProfile {
    af: ArgFramework,
    topic: Extension,
    agents: Vec<ExtensionSet>,
}

impl ExtensionProfile {
    pub fn new(af: ArgFramework, topic: Extension, agents: Vec<ExtensionSet>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::Domain("an agreement scenario needs at least one agent".into()));
        }
        af.mask(&topic)?;
        for (i, exts) in agents.iter().enumerate() {
            if exts.is_empty() {
                return Err(Error::Domain(format!("agent {i} infers no extension")));
            }
            for e in exts {
                af.mask(e)?;
            }
        }
        Ok(ExtensionProfile { af, topic, agents })
    }

    pub fn af(&self) -> &ArgFramework {
        &self.af
    }

    pub fn topic(&self) -> &Extension {
        &self.topic
    }

    pub fn agents(&self) -> &[ExtensionSet] {
        &self.agents
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn with_agent(&self, i: usize, exts: ExtensionSet) -> Result<Self> {
        self.check_agent(i)?;
        let mut agents = self.agents.clone();
        agents[i] = exts;
        ExtensionProfile::new(self.af.clone(), self.topic.clone(), agents)
    }

    fn check_agent(&self, i: usize) -> Result<()> {
        if i < self.agents.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "agent index {i} out of range (scenario has {} agents)",
                self.agents.len()
            )))
        }
    }

    /// Degree of satisfaction of agent `i` with the set `s`: the best
    /// similarity between `s` and any extension the agent infers.
    pub fn satisfaction(&self, i: usize, s: &Extension, kind: SimilarityKind) -> Result<Degree> {
        self.check_agent(i)?;
        Ok(self.agents[i]
            .iter()
            .map(|e| similarity(kind, e, s, &self.topic))
            .max()
            .expect("extension sets are nonempty"))
    }

    /// Best satisfaction of agent `i` with any extension of agent `j`.
    pub fn two_agent_satisfaction(&self, i: usize, j: usize, kind: SimilarityKind) -> Result<Degree> {
        self.check_agent(i)?;
        self.check_agent(j)?;
        let mut best = Degree::ZERO;
        for e in &self.agents[j] {
            best = best.max(self.satisfaction(i, e, kind)?);
        }
        Ok(best)
    }

    pub fn satisfaction_matrix(&self, kind: SimilarityKind) -> Vec<Vec<Degree>> {
        let n = self.agents.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.two_agent_satisfaction(i, j, kind).expect("indices in range"))
                    .collect()
            })
            .collect()
    }

    pub fn degree(&self, dkind: DegreeKind, skind: SimilarityKind, limits: &Limits) -> Result<DegreeResult> {
        Ok(self.degrees(skind, limits)?[dkind.slot()].clone())
    }

    /// Min, mean and median degrees from a single pass over the powerset of
    /// the topic.
    pub fn degrees(&self, skind: SimilarityKind, limits: &Limits) -> Result<[DegreeResult; 3]> {
        let k = self.topic.len();
        if k > limits.max_topic {
            return Err(Error::CapExceeded {
                what: "topic",
                size: k,
                cap: limits.max_topic,
            });
        }
        let topic_args: Vec<_> = self.topic.iter().cloned().collect();
        let n = self.agents.len();
        if k == 0 {
            return Ok(DegreeKind::ALL.map(|kind| DegreeResult {
                kind,
                value: Degree::ONE,
                witness: Extension::new(),
            }));
        }
        // distinct projections of each agent's extensions onto the topic
        let projections: Vec<Vec<Mask>> = self
            .agents
            .iter()
            .map(|exts| {
                let mut v: Vec<Mask> = exts
                    .iter()
                    .map(|e| {
                        topic_args
                            .iter()
                            .enumerate()
                            .filter(|(_, a)| e.contains(a))
                            .fold(0, |m, (j, _)| m | bits::bit(j))
                    })
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();

        let best = match skind {
            SimilarityKind::Hamming => {
                let all = bits::full(k);
                let keys = search(k, n, |i, e| {
                    projections[i]
                        .iter()
                        .map(|&x| k as u64 - ((x ^ e) & all).count_ones() as u64)
                        .max()
                        .expect("nonempty")
                });
                let kk = k as u64;
                let nn = n as u64;
                [
                    (Degree::frac(keys[0].0, kk), keys[0].1),
                    (Degree::frac(keys[1].0, kk * nn), keys[1].1),
                    if n % 2 == 1 {
                        (Degree::frac(keys[2].0, kk), keys[2].1)
                    } else {
                        (Degree::frac(keys[2].0, 2 * kk), keys[2].1)
                    },
                ]
            }
            _ => {
                let keys = search(k, n, |i, e| {
                    projections[i]
                        .iter()
                        .map(|&x| similarity_masks(skind, k, x, e).ratio())
                        .max()
                        .expect("nonempty")
                });
                let nn = Ratio::from_integer(n as u64);
                [
                    (Degree::from_ratio(keys[0].0), keys[0].1),
                    (Degree::from_ratio(keys[1].0 / nn), keys[1].1),
                    if n % 2 == 1 {
                        (Degree::from_ratio(keys[2].0), keys[2].1)
                    } else {
                        (Degree::from_ratio(keys[2].0 / Ratio::from_integer(2)), keys[2].1)
                    },
                ]
            }
        };
        let witness = |m: Mask| -> Extension {
            bits::iter(m).map(|j| topic_args[j].clone()).collect()
        };
        Ok([0, 1, 2].map(|slot| DegreeResult {
            kind: DegreeKind::ALL[slot],
            value: best[slot].0,
            witness: witness(best[slot].1),
        }))
    }
}

/// Aggregation keys of one candidate: minimum, sum, and the median key (the
/// middle element, or the sum of the middle pair for even agent counts).
fn aggregate<T: Copy + Ord + Add<Output = T>>(scores: &mut [T]) -> [T; 3] {
    scores.sort_unstable();
    let n = scores.len();
    let sum = scores[1..].iter().fold(scores[0], |acc, &s| acc + s);
    let med = if n % 2 == 1 {
        scores[n / 2]
    } else {
        scores[n / 2 - 1] + scores[n / 2]
    };
    [scores[0], sum, med]
}

type Best<T> = [Option<(T, Mask)>; 3];

fn improves<T: Ord>(key: &T, cand: Mask, current: &Option<(T, Mask)>) -> bool {
    match current {
        None => true,
        Some((best, m)) => {
            key > best || (key == best && bits::canonical_cmp(cand, *m) == std::cmp::Ordering::Less)
        }
    }
}

fn merge<T: Copy + Ord>(mut a: Best<T>, b: Best<T>) -> Best<T> {
    for slot in 0..3 {
        if let Some((key, m)) = b[slot] {
            if improves(&key, m, &a[slot]) {
                a[slot] = Some((key, m));
            }
        }
    }
    a
}

/// Exhaustive maximization over all `2^k` topic subsets. The reduction uses a
/// total order on (key, witness), so the parallel result is deterministic.
fn search<T, F>(k: usize, n: usize, score: F) -> [(T, Mask); 3]
where
    T: Copy + Ord + Add<Output = T> + Send + Sync,
    F: Fn(usize, Mask) -> T + Sync,
{
    let visit = |(mut best, mut buf): (Best<T>, Vec<T>), e: Mask| {
        buf.clear();
        buf.extend((0..n).map(|i| score(i, e)));
        let keys = aggregate(&mut buf);
        for slot in 0..3 {
            if improves(&keys[slot], e, &best[slot]) {
                best[slot] = Some((keys[slot], e));
            }
        }
        (best, buf)
    };
    let total: u64 = 1u64 << k;
    let best: Best<T> = if k <= 12 {
        (0..total)
            .fold(([None; 3], Vec::with_capacity(n)), visit)
            .0
    } else {
        (0..total)
            .into_par_iter()
            .fold(|| ([None; 3], Vec::with_capacity(n)), visit)
            .map(|(best, _)| best)
            .reduce(|| [None; 3], merge)
    };
    best.map(|b| b.expect("at least one candidate"))
}

/// Degree of satisfaction of `agent` with `s` on `af` and `topic`.
pub fn satisfaction(
    af: &ArgFramework,
    topic: &Extension,
    agent: SemanticsKind,
    s: &Extension,
    kind: SimilarityKind,
) -> Result<Degree> {
    let scn = AgreementScenario::new(af.clone(), topic.clone(), vec![agent])?;
    scn.profile(&Limits::default())?.satisfaction(0, s, kind)
}

/// Two-agent degree of satisfaction between two semantics.
pub fn two_agent_satisfaction(
    af: &ArgFramework,
    topic: &Extension,
    first: SemanticsKind,
    second: SemanticsKind,
    kind: SimilarityKind,
) -> Result<Degree> {
    let scn = AgreementScenario::new(af.clone(), topic.clone(), vec![first, second])?;
    scn.profile(&Limits::default())?.two_agent_satisfaction(0, 1, kind)
}

pub fn degree_of_agreement(
    scn: &AgreementScenario,
    dkind: DegreeKind,
    skind: SimilarityKind,
) -> Result<DegreeResult> {
    degree_of_agreement_with(scn, dkind, skind, &Limits::default())
}

pub fn degree_of_agreement_with(
    scn: &AgreementScenario,
    dkind: DegreeKind,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<DegreeResult> {
    scn.profile(limits)?.degree(dkind, skind, limits)
}

/// Absolute difference of the degrees of two scenarios.
pub fn agreement_delta(
    first: &AgreementScenario,
    second: &AgreementScenario,
    dkind: DegreeKind,
    skind: SimilarityKind,
) -> Result<Degree> {
    let a = degree_of_agreement(first, dkind, skind)?.value;
    let b = degree_of_agreement(second, dkind, skind)?.value;
    Ok(a.abs_diff(b))
}

/// Agreement delta between two already resolved profiles.
pub fn profile_delta(
    first: &ExtensionProfile,
    second: &ExtensionProfile,
    dkind: DegreeKind,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<Degree> {
    let a = first.degree(dkind, skind, limits)?.value;
    let b = second.degree(dkind, skind, limits)?.value;
    Ok(a.abs_diff(b))
}
