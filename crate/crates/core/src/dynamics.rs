//! Expansions, relaxed-monotony principles and their enforcement.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::af::{ArgFramework, ArgId, Extension, ExtensionSet, SemanticsKind};
use crate::agreement::{similarity, AgreementScenario, Degree, SimilarityKind};
use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrincipleKind {
    WeakCautiousMonotony,
    StrongRelaxedMonotony,
}

impl PrincipleKind {
    pub const ALL: [PrincipleKind; 2] = [
        PrincipleKind::WeakCautiousMonotony,
        PrincipleKind::StrongRelaxedMonotony,
    ];

    pub fn short(self) -> &'static str {
        match self {
            PrincipleKind::WeakCautiousMonotony => "cm",
            PrincipleKind::StrongRelaxedMonotony => "srm",
        }
    }
}

impl fmt::Display for PrincipleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for PrincipleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cm" => Ok(PrincipleKind::WeakCautiousMonotony),
            "srm" => Ok(PrincipleKind::StrongRelaxedMonotony),
            _ => Err(Error::Domain(format!("unknown principle {s:?}"))),
        }
    }
}

/// The first conjunct of an expansion relation that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionFailure {
    /// Both frameworks are identical.
    Identical,
    ArgumentsNotIncluded,
    AttacksNotIncluded,
    /// A new attack connects two arguments of the initial framework.
    AttackBetweenOldArguments,
    TopicNotIncluded,
    /// The topic gained an argument of the initial framework.
    TopicGainsOldArgument,
    AgentsChanged,
    ValuesNotIncluded,
    ValueMappingChanged,
    AgentCountChanged,
    PreferencesNotIncluded,
    /// A new preference relates two values of the initial framework.
    PreferenceBetweenOldValues,
}

impl ExpansionFailure {
    pub fn code(self) -> &'static str {
        match self {
            ExpansionFailure::Identical => "identical",
            ExpansionFailure::ArgumentsNotIncluded => "arguments_not_included",
            ExpansionFailure::AttacksNotIncluded => "attacks_not_included",
            ExpansionFailure::AttackBetweenOldArguments => "attack_between_old_arguments",
            ExpansionFailure::TopicNotIncluded => "topic_not_included",
            ExpansionFailure::TopicGainsOldArgument => "topic_gains_old_argument",
            ExpansionFailure::AgentsChanged => "agents_changed",
            ExpansionFailure::ValuesNotIncluded => "values_not_included",
            ExpansionFailure::ValueMappingChanged => "value_mapping_changed",
            ExpansionFailure::AgentCountChanged => "agent_count_changed",
            ExpansionFailure::PreferencesNotIncluded => "preferences_not_included",
            ExpansionFailure::PreferenceBetweenOldValues => "preference_between_old_values",
        }
    }
}

impl fmt::Display for ExpansionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

pub fn expansion_diagnostic(af1: &ArgFramework, af2: &ArgFramework) -> Result<(), ExpansionFailure> {
    if af1 == af2 {
        return Err(ExpansionFailure::Identical);
    }
    if !af1.args().iter().all(|a| af2.contains(a)) {
        return Err(ExpansionFailure::ArgumentsNotIncluded);
    }
    if !af1.attacks().is_subset(af2.attacks()) {
        return Err(ExpansionFailure::AttacksNotIncluded);
    }
    Ok(())
}

pub fn normal_expansion_diagnostic(
    af1: &ArgFramework,
    af2: &ArgFramework,
) -> Result<(), ExpansionFailure> {
    expansion_diagnostic(af1, af2)?;
    let old_pair_added = af2
        .attacks()
        .difference(af1.attacks())
        .any(|(a, b)| af1.contains(a) && af1.contains(b));
    if old_pair_added {
        return Err(ExpansionFailure::AttackBetweenOldArguments);
    }
    Ok(())
}

/// `af1 ≠ af2` and `af2` contains every argument and attack of `af1`.
pub fn is_expansion(af1: &ArgFramework, af2: &ArgFramework) -> bool {
    expansion_diagnostic(af1, af2).is_ok()
}

/// An expansion that adds no attack between two arguments of `af1`.
pub fn is_normal_expansion(af1: &ArgFramework, af2: &ArgFramework) -> bool {
    normal_expansion_diagnostic(af1, af2).is_ok()
}

/// Shared topic clauses of the scenario-level normal expansions.
pub(crate) fn topic_diagnostic(
    af1: &ArgFramework,
    t1: &Extension,
    t2: &Extension,
) -> Result<(), ExpansionFailure> {
    if !t1.is_subset(t2) {
        return Err(ExpansionFailure::TopicNotIncluded);
    }
    if t2.difference(t1).iter().any(|a| af1.contains(a)) {
        return Err(ExpansionFailure::TopicGainsOldArgument);
    }
    Ok(())
}

pub fn aas_normal_expansion_diagnostic(
    s1: &AgreementScenario,
    s2: &AgreementScenario,
) -> Result<(), ExpansionFailure> {
    normal_expansion_diagnostic(s1.af(), s2.af())?;
    topic_diagnostic(s1.af(), s1.topic(), s2.topic())?;
    if s1.agents() != s2.agents() {
        return Err(ExpansionFailure::AgentsChanged);
    }
    Ok(())
}

pub fn is_aas_normal_expansion(s1: &AgreementScenario, s2: &AgreementScenario) -> bool {
    aas_normal_expansion_diagnostic(s1, s2).is_ok()
}

fn require_normal(af1: &ArgFramework, af2: &ArgFramework) -> Result<()> {
    normal_expansion_diagnostic(af1, af2).map_err(|why| {
        Error::Precondition(format!("second framework is not a normal expansion of the first ({why})"))
    })
}

fn require_expansion(af1: &ArgFramework, af2: &ArgFramework) -> Result<()> {
    expansion_diagnostic(af1, af2).map_err(|why| {
        Error::Precondition(format!("second framework is not an expansion of the first ({why})"))
    })
}

/// Mask (in `af2`) of the arguments that `af2` has and `af1` lacks.
fn new_args_mask(af1: &ArgFramework, af2: &ArgFramework) -> Mask {
    af2.args()
        .iter()
        .enumerate()
        .filter(|(_, a)| !af1.contains(a))
        .fold(0, |m, (i, _)| m | bits::bit(i))
}

/// A new attack from a new argument onto a member of `e`, if any.
fn new_attack_on(af1: &ArgFramework, af2: &ArgFramework, e: Mask) -> Option<(usize, usize)> {
    let new = new_args_mask(af1, af2);
    bits::iter(e).find_map(|b| bits::iter(af2.attackers_mask(b) & new).next().map(|a| (a, b)))
}

/// The weak cautious monotony condition: no new argument attacks `e`.
pub fn cm_condition(af1: &ArgFramework, af2: &ArgFramework, e: &Extension) -> Result<bool> {
    require_normal(af1, af2)?;
    af1.mask(e)?;
    Ok(new_attack_on(af1, af2, af2.mask(e)?).is_none())
}

/// Maximal conflict-free sets of `af` as masks.
///
/// Strong defence is monotone in the defending set, so "some conflict-free
/// set strongly defends a" only needs to be tried on these.
fn naive_masks(af: &ArgFramework, limits: &Limits) -> Result<Vec<Mask>> {
    af.enumerate_with(SemanticsKind::Naive, limits)?
        .iter()
        .map(|s| af.mask(s))
        .collect()
}

fn strongly_defensible(af: &ArgFramework, naive: &[Mask], a: usize) -> bool {
    naive.iter().any(|&s| af.strongly_defends_mask(s, a))
}

pub fn is_strong_attacker(
    af1: &ArgFramework,
    af2: &ArgFramework,
    a: &ArgId,
    s: &Extension,
) -> Result<bool> {
    is_strong_attacker_with(af1, af2, a, s, &Limits::default())
}

pub fn is_strong_attacker_with(
    af1: &ArgFramework,
    af2: &ArgFramework,
    a: &ArgId,
    s: &Extension,
    limits: &Limits,
) -> Result<bool> {
    require_expansion(af1, af2)?;
    af1.mask(s)?;
    let i = af2.idx(a)?;
    if af2.targets_mask(i) & af2.mask(s)? == 0 {
        return Ok(false);
    }
    Ok(strongly_defensible(af2, &naive_masks(af2, limits)?, i))
}

/// A strong attacker of `e` that sits in some extension of `exts2`.
fn inferred_strong_attacker(
    af2: &ArgFramework,
    exts2: &ExtensionSet,
    e: Mask,
    limits: &Limits,
) -> Result<Option<ArgId>> {
    let mut attackers: Mask = 0;
    for b in bits::iter(e) {
        attackers |= af2.attackers_mask(b);
    }
    let mut inferred: Mask = 0;
    for x in exts2 {
        inferred |= af2.mask(x)?;
    }
    let candidates = attackers & inferred;
    if candidates == 0 {
        return Ok(None);
    }
    let naive = naive_masks(af2, limits)?;
    Ok(bits::iter(candidates)
        .find(|&a| strongly_defensible(af2, &naive, a))
        .map(|a| af2.args()[a].clone()))
}

/// The strong relaxed monotony condition: no extension of `af2` under `sem`
/// contains a strong attacker of `e`.
pub fn srm_condition(
    af1: &ArgFramework,
    af2: &ArgFramework,
    e: &Extension,
    sem: SemanticsKind,
) -> Result<bool> {
    require_normal(af1, af2)?;
    af1.mask(e)?;
    let limits = Limits::default();
    let exts2 = af2.enumerate_with(sem, &limits)?;
    Ok(inferred_strong_attacker(af2, &exts2, af2.mask(e)?, &limits)?.is_none())
}

/// Why a p-condition evaluated to false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    NewAttack { from: ArgId, to: ArgId },
    StrongAttacker { argument: ArgId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub extension: Extension,
    pub condition: bool,
    /// First extension of the expansion containing `extension`, if any.
    pub superset: Option<Extension>,
    pub evidence: Option<Evidence>,
}

impl ExtensionWitness {
    pub fn satisfied(&self) -> bool {
        !self.condition || self.superset.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipleVerdict {
    pub holds: bool,
    pub witnesses: Vec<ExtensionWitness>,
}

impl PrincipleVerdict {
    /// Extensions with a true condition and no superset in the expansion.
    pub fn violations(&self) -> impl Iterator<Item = &ExtensionWitness> {
        self.witnesses.iter().filter(|w| !w.satisfied())
    }
}

/// Evaluates a principle on explicit extension sets of the two frameworks.
///
/// `exts2` stands for the expansion's extensions wherever the principle
/// quantifies over them; passing an enforced set checks compliance of that
/// set.
pub fn check_extensions(
    af1: &ArgFramework,
    exts1: &ExtensionSet,
    af2: &ArgFramework,
    exts2: &ExtensionSet,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<PrincipleVerdict> {
    check_with_reference(af1, exts1, af2, exts2, exts2, principle, limits)
}

/// Like [`check_extensions`], with the srm condition quantifying over
/// `reference` while supersets are looked up in `candidates`.
fn check_with_reference(
    af1: &ArgFramework,
    exts1: &ExtensionSet,
    af2: &ArgFramework,
    reference: &ExtensionSet,
    candidates: &ExtensionSet,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<PrincipleVerdict> {
    require_normal(af1, af2)?;
    let mut witnesses = Vec::with_capacity(exts1.len());
    for e in exts1 {
        af1.mask(e)?;
        let m = af2.mask(e)?;
        let evidence = match principle {
            PrincipleKind::WeakCautiousMonotony => {
                new_attack_on(af1, af2, m).map(|(a, b)| Evidence::NewAttack {
                    from: af2.args()[a].clone(),
                    to: af2.args()[b].clone(),
                })
            }
            PrincipleKind::StrongRelaxedMonotony => inferred_strong_attacker(af2, reference, m, limits)?
                .map(|argument| Evidence::StrongAttacker { argument }),
        };
        let condition = evidence.is_none();
        let superset = candidates.iter().find(|x| e.is_subset(x)).cloned();
        witnesses.push(ExtensionWitness {
            extension: e.clone(),
            condition,
            superset,
            evidence,
        });
    }
    let holds = witnesses.iter().all(ExtensionWitness::satisfied);
    Ok(PrincipleVerdict { holds, witnesses })
}

pub fn check_principle(
    af1: &ArgFramework,
    af2: &ArgFramework,
    sem: SemanticsKind,
    principle: PrincipleKind,
) -> Result<PrincipleVerdict> {
    check_principle_with(af1, af2, sem, principle, &Limits::default())
}

pub fn check_principle_with(
    af1: &ArgFramework,
    af2: &ArgFramework,
    sem: SemanticsKind,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<PrincipleVerdict> {
    require_normal(af1, af2)?;
    let exts1 = af1.enumerate_with(sem, limits)?;
    let exts2 = af2.enumerate_with(sem, limits)?;
    check_extensions(af1, &exts1, af2, &exts2, principle, limits)
}

/// Adds, for every extension of `exts1` whose condition holds but which has no
/// superset in `exts2`, the conflict-free superset in `af2` that best
/// satisfies the agent (Hamming similarity against `exts2` on `topic2`).
///
/// Ties prefer more topic arguments, then the canonical extension order. The
/// result keeps every original extension: satisfaction is a maximum over
/// extensions, so extra extensions never lower a degree.
pub fn enforce_extensions(
    af1: &ArgFramework,
    exts1: &ExtensionSet,
    af2: &ArgFramework,
    exts2: &ExtensionSet,
    topic2: &Extension,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<ExtensionSet> {
    af2.mask(topic2)?;
    let verdict = check_extensions(af1, exts1, af2, exts2, principle, limits)?;
    let mut out: Vec<Extension> = exts2.iter().cloned().collect();
    for w in verdict.violations() {
        if out.iter().any(|x| w.extension.is_subset(x)) {
            continue;
        }
        let repair = best_superset(af2, exts2, &w.extension, topic2)?;
        out.push(repair);
    }
    Ok(ExtensionSet::new(out))
}

fn best_superset(
    af2: &ArgFramework,
    exts2: &ExtensionSet,
    e: &Extension,
    topic2: &Extension,
) -> Result<Extension> {
    let base = af2.mask(e)?;
    if !af2.cf_mask(base) {
        return Err(Error::EnforcementInfeasible(e.to_string()));
    }
    let tmask = af2.mask(topic2)?;
    let free: Vec<usize> = bits::iter(
        af2.full_mask() & !base & !af2.self_attacking_mask() & !af2.plus_mask(base),
    )
    .filter(|&i| af2.targets_mask(i) & base == 0)
    .collect();
    let score = |s: Mask| -> (Degree, u32) {
        let cand = af2.extension(s);
        let sat = exts2
            .iter()
            .map(|x| similarity(SimilarityKind::Hamming, x, &cand, topic2))
            .max()
            .unwrap_or(Degree::ZERO);
        (sat, (s & tmask).count_ones())
    };
    let mut best: Option<((Degree, u32), Mask)> = None;
    let mut visit = |s: Mask| {
        let key = score(s);
        let better = match &best {
            None => true,
            Some((k, m)) => key > *k || (key == *k && bits::canonical_cmp(s, *m).is_lt()),
        };
        if better {
            best = Some((key, s));
        }
    };
    supersets(af2, &free, 0, base, &mut visit);
    Ok(af2.extension(best.expect("the set itself is a candidate").1))
}

/// Visits every conflict-free set made of `set` plus a subset of `free`.
fn supersets(af: &ArgFramework, free: &[usize], depth: usize, set: Mask, visit: &mut impl FnMut(Mask)) {
    if depth == free.len() {
        visit(set);
        return;
    }
    let i = free[depth];
    if (af.targets_mask(i) | af.attackers_mask(i)) & set == 0 {
        supersets(af, free, depth + 1, set | bits::bit(i), visit);
    }
    supersets(af, free, depth + 1, set, visit);
}

pub fn enforce_principle(
    af1: &ArgFramework,
    af2: &ArgFramework,
    topic2: &Extension,
    sem: SemanticsKind,
    principle: PrincipleKind,
) -> Result<ExtensionSet> {
    enforce_principle_with(af1, af2, topic2, sem, principle, &Limits::default())
}

pub fn enforce_principle_with(
    af1: &ArgFramework,
    af2: &ArgFramework,
    topic2: &Extension,
    sem: SemanticsKind,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<ExtensionSet> {
    require_normal(af1, af2)?;
    let exts1 = af1.enumerate_with(sem, limits)?;
    let exts2 = af2.enumerate_with(sem, limits)?;
    enforce_extensions(af1, &exts1, af2, &exts2, topic2, principle, limits)
}

/// Compliance of an enforced set: the condition is still evaluated against
/// the semantics' own extensions, supersets are sought in `enforced`.
pub fn enforced_complies(
    af1: &ArgFramework,
    exts1: &ExtensionSet,
    af2: &ArgFramework,
    exts2: &ExtensionSet,
    enforced: &ExtensionSet,
    principle: PrincipleKind,
    limits: &Limits,
) -> Result<bool> {
    Ok(check_with_reference(af1, exts1, af2, exts2, enforced, principle, limits)?.holds)
}

/// `⌊n/2⌋ / n`, the least Hamming minimal-agreement degree on a topic of size `n`.
pub fn min_agreement_lower_bound(topic_size: usize) -> Result<Degree> {
    if topic_size == 0 {
        return Err(Error::Domain("the topic must be nonempty".into()));
    }
    let n = topic_size as u64;
    Ok(Degree::frac(n / 2, n))
}

/// `1 − (⌊|T′|/2⌋ + core) / |T′|`, clamped at 0.
///
/// `core` is the number of arguments of the initial topic inside the largest
/// common intersection of the agents' extensions.
pub fn delta_upper_bound(topic1: &Extension, topic2_size: usize, common_core_size: usize) -> Result<Degree> {
    if topic2_size == 0 {
        return Err(Error::Domain("the expanded topic must be nonempty".into()));
    }
    if common_core_size > topic1.len() {
        return Err(Error::Domain(format!(
            "core size {common_core_size} exceeds the initial topic size {}",
            topic1.len()
        )));
    }
    let n = topic2_size as u64;
    let covered = n / 2 + common_core_size as u64;
    Ok(if covered >= n {
        Degree::ZERO
    } else {
        Degree::frac(n - covered, n)
    })
}

/// Largest intersection of one extension per agent; ties go to the canonical
/// extension order.
pub fn max_common_extension_core(af: &ArgFramework, agents: &[SemanticsKind]) -> Result<Extension> {
    max_common_extension_core_with(af, agents, &Limits::default())
}

pub fn max_common_extension_core_with(
    af: &ArgFramework,
    agents: &[SemanticsKind],
    limits: &Limits,
) -> Result<Extension> {
    let sets = agents
        .iter()
        .map(|&k| af.enumerate_with(k, limits))
        .collect::<Result<Vec<_>>>()?;
    common_core(af, &sets)
}

/// [`max_common_extension_core`] over explicit extension sets.
pub fn common_core(af: &ArgFramework, sets: &[ExtensionSet]) -> Result<Extension> {
    if sets.is_empty() {
        return Err(Error::Domain("at least one agent is required".into()));
    }
    let masks = sets
        .iter()
        .map(|s| s.iter().map(|e| af.mask(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<Mask> = None;
    let mut consider = |m: Mask| {
        let better = match best {
            None => true,
            Some(b) => {
                m.count_ones() > b.count_ones()
                    || (m.count_ones() == b.count_ones() && bits::lex_cmp(m, b).is_lt())
            }
        };
        if better {
            best = Some(m);
        }
    };
    product(&masks, 0, af.full_mask(), &mut consider);
    Ok(af.extension(best.unwrap_or(0)))
}

fn product(masks: &[Vec<Mask>], depth: usize, acc: Mask, visit: &mut impl FnMut(Mask)) {
    if depth == masks.len() {
        visit(acc);
        return;
    }
    for &m in &masks[depth] {
        product(masks, depth + 1, acc & m, visit);
    }
}
