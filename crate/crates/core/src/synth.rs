//! Seeded synthetic value-based scenarios and the two experiments built on
//! them: agreement deltas after expansions of growing size, and the impact of
//! a single value on frameworks of growing size.
//!
//! Every repetition draws from its own ChaCha8 stream seeded by
//! [`sub_seed`], so results do not depend on iteration order and the
//! repetitions run in parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::af::{ArgFramework, ArgId, Extension, SemanticsKind};
use crate::agreement::{DegreeKind, SimilarityKind};
use crate::error::{Error, Result};
use crate::rational::{significant, Degree};
use crate::vaf::{is_vaas_normal_expansion, Preference, ValueFramework, ValueId, ValueScenario};
use crate::Limits;

/// Master seed used by the CLI and the committed experiment checks.
pub const DEFAULT_SEED: u64 = 42;

/// Exact header of the experiment CSV.
pub const CSV_HEADER: [&str; 8] = [
    "experiment",
    "size_param",
    "degree_kind",
    "topic_mode",
    "normalized",
    "reps",
    "seed",
    "mean_delta",
];

/// Largest initial framework in the delta experiment.
pub const MAX_INITIAL_ARGS: usize = 10;

/// Arguments eligible for the topic in the fixed-topic impact experiment.
pub const FIXED_TOPIC_POOL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub agents: usize,
    pub attack_prob: Ratio<u32>,
    pub max_targets: usize,
    pub prefs_per_agent: usize,
    pub topic_prob: Ratio<u32>,
    pub retry_limit: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: DEFAULT_SEED,
            agents: 3,
            attack_prob: Ratio::new(1, 2),
            max_targets: 3,
            prefs_per_agent: 5,
            topic_prob: Ratio::new(1, 2),
            retry_limit: 50,
        }
    }
}

impl GenConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        GenConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("attack_prob", self.attack_prob), ("topic_prob", self.topic_prob)] {
            if p > Ratio::from_integer(1) {
                return Err(Error::Domain(format!("{name} = {p} is not a probability")));
            }
        }
        for (name, c) in [
            ("agents", self.agents),
            ("max_targets", self.max_targets),
            ("retry_limit", self.retry_limit),
        ] {
            if c == 0 {
                return Err(Error::Domain(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Caps that admit every instance the experiments generate.
pub fn experiment_limits() -> Limits {
    Limits {
        max_args: 32,
        max_topic: 32,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Delta,
    Impact,
}

impl Experiment {
    pub fn tag(self) -> &'static str {
        match self {
            Experiment::Delta => "delta",
            Experiment::Impact => "impact",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(Experiment::Delta),
            "impact" => Ok(Experiment::Impact),
            _ => Err(Error::Domain(format!("unknown experiment {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopicMode {
    Fixed,
    Expanding,
    Proportional,
}

impl TopicMode {
    pub fn tag(self) -> &'static str {
        match self {
            TopicMode::Fixed => "fixed",
            TopicMode::Expanding => "expanding",
            TopicMode::Proportional => "proportional",
        }
    }
}

impl fmt::Display for TopicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Mean absolute change of one degree kind over the repetitions of one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub experiment: Experiment,
    pub size_param: usize,
    pub kind: DegreeKind,
    pub raw_mean: BigRational,
    pub normalized_mean: BigRational,
    pub reps: usize,
    pub seed: u64,
    pub topic_mode: TopicMode,
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for one repetition: the master seed is folded with the tag bytes
/// (FNV-1a), the size and the repetition index, each step passed through the
/// SplitMix64 finalizer.
pub fn sub_seed(master: u64, tag: &str, size: usize, rep: usize) -> u64 {
    let fnv = tag.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    });
    let h = mix64(master ^ fnv);
    let h = mix64(h ^ size as u64);
    mix64(h ^ rep as u64)
}

fn chance(rng: &mut ChaCha8Rng, p: Ratio<u32>) -> bool {
    rng.random_ratio(*p.numer(), *p.denom())
}

/// A name `{prefix}{k}` not in `taken`, starting the search at `*next`.
fn fresh(prefix: &str, taken: &dyn Fn(&str) -> bool, next: &mut usize) -> String {
    loop {
        let name = format!("{prefix}{next}");
        *next += 1;
        if !taken(&name) {
            return name;
        }
    }
}

/// Adds `(u, w)` to a transitively closed relation, keeping it closed.
/// Rejects pairs that are already implied or would make it reflexive (and
/// thereby not asymmetric).
fn insert_closed(rel: &mut Preference, u: &ValueId, w: &ValueId) -> bool {
    if u == w || rel.contains(&(u.clone(), w.clone())) || rel.contains(&(w.clone(), u.clone())) {
        return false;
    }
    let mut above: Vec<ValueId> = rel.iter().filter(|(_, b)| b == u).map(|(a, _)| a.clone()).collect();
    above.push(u.clone());
    let mut below: Vec<ValueId> = rel.iter().filter(|(a, _)| a == w).map(|(_, b)| b.clone()).collect();
    below.push(w.clone());
    if above.iter().any(|a| below.contains(a)) {
        return false;
    }
    for a in &above {
        for b in &below {
            rel.insert((a.clone(), b.clone()));
        }
    }
    true
}

/// Up to `max_targets` attacks from `from`, each drawn with `attack_prob`
/// against a uniformly chosen other argument.
fn draw_attacks(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    from: usize,
    targets: usize,
    out: &mut BTreeSet<(usize, usize)>,
) {
    if targets < 2 {
        return;
    }
    for _ in 0..cfg.max_targets {
        if chance(rng, cfg.attack_prob) {
            let mut to = rng.random_range(0..targets - 1);
            if to >= from {
                to += 1;
            }
            out.insert((from, to));
        }
    }
}

fn draw_topic(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    pool: &[ArgId],
) -> Result<Extension> {
    for _ in 0..cfg.retry_limit {
        let mut topic = Extension::new();
        for a in pool {
            if chance(rng, cfg.topic_prob) {
                topic.insert(a.clone());
            }
        }
        if !topic.is_empty() {
            return Ok(topic);
        }
    }
    Err(Error::Generation {
        what: "nonempty topic",
        attempts: cfg.retry_limit,
        seed: cfg.seed,
    })
}

struct Draft {
    args: Vec<ArgId>,
    values: Vec<ValueId>,
    attacks: BTreeSet<(usize, usize)>,
    prefs: Vec<Preference>,
}

impl Draft {
    fn build(self, topic: Extension, sem: SemanticsKind) -> Result<ValueScenario> {
        let af = ArgFramework::new(
            self.args.iter().cloned(),
            self.attacks
                .iter()
                .map(|&(x, y)| (self.args[x].clone(), self.args[y].clone())),
        )?;
        let val = self.args.iter().cloned().zip(self.values.iter().cloned());
        let vaf = ValueFramework::new(af, self.values.iter().cloned(), val, self.prefs)?;
        ValueScenario::new(vaf, topic, sem)
    }
}

fn draw_initial(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    n_args: usize,
) -> Result<Draft> {
    if n_args == 0 {
        return Err(Error::Precondition("a generated framework needs at least one argument".into()));
    }
    cfg.validate()?;
    let args: Vec<ArgId> = (0..n_args)
        .map(|i| ArgId::new(&format!("a{i}")).expect("valid token"))
        .collect();
    let values: Vec<ValueId> = (0..n_args)
        .map(|i| ValueId::new(&format!("v{i}")).expect("valid token"))
        .collect();
    let mut attacks = BTreeSet::new();
    for x in 0..n_args {
        draw_attacks(rng, cfg, x, n_args, &mut attacks);
    }
    let attack_list: Vec<(usize, usize)> = attacks.iter().copied().collect();
    let mut prefs = vec![Preference::new(); cfg.agents];
    if !attack_list.is_empty() {
        for rel in prefs.iter_mut() {
            for _ in 0..cfg.prefs_per_agent {
                // a preference for the attacked argument's value over the
                // attacker's; skipped when no candidate fits after retries
                for _ in 0..cfg.retry_limit {
                    let &(x, y) = attack_list.choose(rng).expect("nonempty");
                    if insert_closed(rel, &values[y], &values[x]) {
                        break;
                    }
                }
            }
        }
    }
    Ok(Draft {
        args,
        values,
        attacks,
        prefs,
    })
}

/// An initial scenario with `n_args` arguments `a0, a1, ...`, argument `ai`
/// carrying its own value `vi`, and a topic drawn from all arguments.
pub fn gen_initial_vaas(cfg: &GenConfig, n_args: usize, sem: SemanticsKind) -> Result<ValueScenario> {
    gen_with_topic_pool(cfg, n_args, sem, n_args)
}

/// Like [`gen_initial_vaas`], with the topic drawn from the first
/// `topic_pool` arguments only.
pub fn gen_with_topic_pool(
    cfg: &GenConfig,
    n_args: usize,
    sem: SemanticsKind,
    topic_pool: usize,
) -> Result<ValueScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, "initial", n_args, 0));
    let draft = draw_initial(&mut rng, cfg, n_args)?;
    let pool = &draft.args[..topic_pool.min(n_args)];
    let topic = draw_topic(&mut rng, cfg, pool)?;
    draft.build(topic, sem)
}

/// A strong expansion of `base` by `n_new` arguments: new arguments attack
/// old or new arguments but are never attacked by old ones, each brings a
/// fresh value, and every agent gets one preference attempt per new
/// argument, contrary to one of its attacks.
pub fn gen_expansion(
    cfg: &GenConfig,
    base: &ValueScenario,
    n_new: usize,
    expand_topic: bool,
) -> Result<ValueScenario> {
    if n_new == 0 {
        return Err(Error::Precondition("an expansion adds at least one argument".into()));
    }
    cfg.validate()?;
    let vaf = base.vaf();
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(
        cfg.seed,
        if expand_topic { "expansion-topic" } else { "expansion" },
        n_new,
        vaf.af().len(),
    ));

    let mut args: Vec<ArgId> = vaf.af().args().to_vec();
    let mut values: Vec<ValueId> = args
        .iter()
        .map(|a| vaf.val(a).expect("total valuation").clone())
        .collect();
    let index: BTreeMap<ArgId, usize> = args.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let mut attacks: BTreeSet<(usize, usize)> = vaf
        .af()
        .attacks()
        .iter()
        .map(|(a, b)| (index[a], index[b]))
        .collect();
    let old = args.len();
    let (mut next_arg, mut next_value) = (old, old);
    for _ in 0..n_new {
        let taken = |s: &str| args.iter().any(|a| a.as_str() == s);
        let a = fresh("a", &taken, &mut next_arg);
        args.push(ArgId::new(&a)?);
        let taken = |s: &str| vaf.values().iter().chain(&values).any(|v| v.as_str() == s);
        let v = fresh("v", &taken, &mut next_value);
        values.push(ValueId::new(&v)?);
    }
    let total = args.len();
    for x in old..total {
        draw_attacks(&mut rng, cfg, x, total, &mut attacks);
    }

    let mut prefs: Vec<Preference> = vaf.prefs().to_vec();
    for rel in prefs.iter_mut() {
        for x in old..total {
            let own: Vec<usize> = attacks.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y).collect();
            if let Some(&y) = own.choose(&mut rng) {
                insert_closed(rel, &values[y], &values[x]);
            }
        }
    }

    let mut topic = base.topic().clone();
    if expand_topic {
        for a in &args[old..] {
            if chance(&mut rng, cfg.topic_prob) {
                topic.insert(a.clone());
            }
        }
    }
    let expanded = Draft {
        args,
        values,
        attacks,
        prefs,
    }
    .build(topic, base.semantics())?;
    assert!(
        is_vaas_normal_expansion(base, &expanded),
        "generated expansion is not a normal expansion (seed {})",
        cfg.seed
    );
    Ok(expanded)
}

/// A value carried by an attacked argument, chosen uniformly.
pub fn pick_relevant_value(rng: &mut ChaCha8Rng, vscn: &ValueScenario) -> Option<ValueId> {
    let vaf = vscn.vaf();
    let targets: BTreeSet<&ArgId> = vaf.af().attacks().iter().map(|(_, b)| b).collect();
    let relevant: Vec<&ValueId> = targets.iter().map(|a| vaf.val(a).expect("total")).collect();
    relevant.choose(rng).map(|v| (*v).clone())
}

fn big(d: Degree) -> BigRational {
    d.to_big()
}

/// `|change| / max(d0, 1 - d0)`.
fn normalized(change: Degree, d0: Degree) -> BigRational {
    big(change) / big(d0.max_distance_to_bounds())
}

/// Raw and normalized absolute changes of the three degree kinds.
type Sample = [(BigRational, BigRational); 3];

fn aggregate(
    experiment: Experiment,
    topic_mode: TopicMode,
    seed: u64,
    reps: usize,
    sizes: impl Iterator<Item = usize>,
    samples: &[Sample],
) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    for (size, chunk) in sizes.zip(samples.chunks(reps)) {
        for (slot, kind) in DegreeKind::ALL.into_iter().enumerate() {
            let (raw, norm) = chunk.iter().fold(
                (BigRational::zero(), BigRational::zero()),
                |(r, n), s| (r + &s[slot].0, n + &s[slot].1),
            );
            let count = BigRational::from_integer(BigInt::from(reps));
            out.push(ExperimentRecord {
                experiment,
                size_param: size,
                kind,
                raw_mean: raw / &count,
                normalized_mean: norm / count,
                reps,
                seed,
                topic_mode,
            });
        }
    }
    out
}

fn delta_sample(
    cfg: &GenConfig,
    sem: SemanticsKind,
    size: usize,
    rep: usize,
    expand_topic: bool,
) -> Result<Sample> {
    let seed = sub_seed(cfg.seed, Experiment::Delta.tag(), size, rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n0 = rng.random_range(1..=MAX_INITIAL_ARGS);
    let local = cfg.with_seed(seed);
    let base = gen_initial_vaas(&local, n0, sem)?;
    let expanded = gen_expansion(&local, &base, size, expand_topic)?;
    let limits = experiment_limits();
    let h = SimilarityKind::Hamming;
    let before = base.profile(&limits)?.degrees(h, &limits)?;
    let after = expanded.profile(&limits)?.degrees(h, &limits)?;
    Ok([0, 1, 2].map(|k| {
        let change = before[k].value.abs_diff(after[k].value);
        (big(change), normalized(change, before[k].value))
    }))
}

/// Mean absolute Hamming-degree changes after expansions of size
/// `1..=max_expansion`, each size over `reps` fresh (initial, expansion)
/// pairs whose initial size is uniform in `1..=10`.
pub fn run_delta_experiment(
    cfg: &GenConfig,
    sem: SemanticsKind,
    max_expansion: usize,
    reps: usize,
    expand_topic: bool,
) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize)> = (1..=max_expansion)
        .flat_map(|size| (0..reps).map(move |rep| (size, rep)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(size, rep)| delta_sample(cfg, sem, size, rep, expand_topic))
        .collect::<Result<Vec<_>>>()?;
    let mode = if expand_topic {
        TopicMode::Expanding
    } else {
        TopicMode::Fixed
    };
    Ok(aggregate(Experiment::Delta, mode, cfg.seed, reps, 1..=max_expansion, &samples))
}

fn impact_sample(
    cfg: &GenConfig,
    sem: SemanticsKind,
    size: usize,
    rep: usize,
    proportional_topic: bool,
) -> Result<Sample> {
    let seed = sub_seed(cfg.seed, Experiment::Impact.tag(), size, rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = if proportional_topic { size } else { FIXED_TOPIC_POOL };
    let limits = experiment_limits();
    for _ in 0..cfg.retry_limit {
        let local = cfg.with_seed(rng.random());
        let vscn = gen_with_topic_pool(&local, size, sem, pool)?;
        let Some(v) = pick_relevant_value(&mut rng, &vscn) else {
            continue;
        };
        let stripped = vscn.with_vaf(vscn.vaf().strip_value(&v)?)?;
        let h = SimilarityKind::Hamming;
        let before = vscn.profile(&limits)?.degrees(h, &limits)?;
        let after = stripped.profile(&limits)?.degrees(h, &limits)?;
        return Ok([0, 1, 2].map(|k| {
            let change = before[k].value.abs_diff(after[k].value);
            (big(change), normalized(change, before[k].value))
        }));
    }
    Err(Error::Generation {
        what: "framework with an attacked argument",
        attempts: cfg.retry_limit,
        seed,
    })
}

/// Mean absolute Hamming-degree impact of a randomly chosen relevant value
/// for framework sizes `min_size..=max_size`.
pub fn run_impact_experiment(
    cfg: &GenConfig,
    sem: SemanticsKind,
    min_size: usize,
    max_size: usize,
    reps: usize,
    proportional_topic: bool,
) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    if min_size == 0 {
        return Err(Error::Domain("min_size must be at least 1".into()));
    }
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize)> = (min_size..=max_size)
        .flat_map(|size| (0..reps).map(move |rep| (size, rep)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(size, rep)| impact_sample(cfg, sem, size, rep, proportional_topic))
        .collect::<Result<Vec<_>>>()?;
    let mode = if proportional_topic {
        TopicMode::Proportional
    } else {
        TopicMode::Fixed
    };
    Ok(aggregate(Experiment::Impact, mode, cfg.seed, reps, min_size..=max_size, &samples))
}

/// Writes the header and two rows per record (raw, then normalized).
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("writing CSV failed: {e}"));
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        for (normalized, mean) in [(false, &r.raw_mean), (true, &r.normalized_mean)] {
            w.write_record([
                r.experiment.tag().to_string(),
                r.size_param.to_string(),
                r.kind.short().to_string(),
                r.topic_mode.tag().to_string(),
                normalized.to_string(),
                r.reps.to_string(),
                r.seed.to_string(),
                significant(mean, 12),
            ])
            .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::Domain(format!("writing CSV failed: {e}")))
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}
