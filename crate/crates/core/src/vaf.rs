//! Value-based argumentation: subjective frameworks, value-based agreement,
//! value impact and value-based expansions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::af::{is_token, ArgFramework, ArgId, Extension, SemanticsKind};
use crate::agreement::{Degree, DegreeKind, DegreeResult, ExtensionProfile, SimilarityKind};
use crate::dynamics::{normal_expansion_diagnostic, topic_diagnostic, ExpansionFailure};
use crate::error::{Error, Result};
use crate::rational::SignedDegree;
use crate::Limits;

/// Interned value name; same token grammar as arguments, separate namespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueId(Arc<str>);

impl ValueId {
    pub fn new(name: &str) -> Result<Self> {
        if is_token(name) {
            Ok(ValueId(Arc::from(name)))
        } else {
            Err(Error::InvalidIdentifier(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ValueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ValueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ValueId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// One agent's strict preferences; `(u, w)` means `u` is preferred over `w`.
pub type Preference = BTreeSet<(ValueId, ValueId)>;

/// A validated value-based argumentation framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueFramework {
    af: ArgFramework,
    values: BTreeSet<ValueId>,
    val: BTreeMap<ArgId, ValueId>,
    prefs: Vec<Preference>,
}

impl ValueFramework {
    /// Validates that the framework has no self-attacks, that `val` maps
    /// every argument into `values`, and that every preference relation is
    /// irreflexive, asymmetric and transitive. Relations are not closed
    /// automatically.
    pub fn new(
        af: ArgFramework,
        values: impl IntoIterator<Item = ValueId>,
        val: impl IntoIterator<Item = (ArgId, ValueId)>,
        prefs: Vec<Preference>,
    ) -> Result<Self> {
        let values: BTreeSet<ValueId> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::Validation("the set of values is empty".into()));
        }
        if prefs.is_empty() {
            return Err(Error::Validation("at least one agent is required".into()));
        }
        if let Some((a, _)) = af.attacks().iter().find(|(a, b)| a == b) {
            return Err(Error::SelfAttack(a.to_string()));
        }
        let mut map = BTreeMap::new();
        for (a, v) in val {
            if !af.contains(&a) {
                return Err(Error::UnknownArgument(a.to_string()));
            }
            if !values.contains(&v) {
                return Err(Error::UnknownValue(v.to_string()));
            }
            if let Some(old) = map.insert(a.clone(), v.clone()) {
                if old != v {
                    return Err(Error::Validation(format!(
                        "argument {a} is mapped to both {old} and {v}"
                    )));
                }
            }
        }
        if let Some(a) = af.args().iter().find(|a| !map.contains_key(*a)) {
            return Err(Error::Validation(format!("argument {a} has no value")));
        }
        for (agent, p) in prefs.iter().enumerate() {
            validate_preference(agent, p, &values)?;
        }
        Ok(ValueFramework {
            af,
            values,
            val: map,
            prefs,
        })
    }

    pub fn af(&self) -> &ArgFramework {
        &self.af
    }

    pub fn values(&self) -> &BTreeSet<ValueId> {
        &self.values
    }

    pub fn val(&self, a: &ArgId) -> Option<&ValueId> {
        self.val.get(a)
    }

    pub fn valuation(&self) -> &BTreeMap<ArgId, ValueId> {
        &self.val
    }

    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    pub fn agent_count(&self) -> usize {
        self.prefs.len()
    }

    /// Agent `i`'s view: attacks whose target's value the agent prefers over
    /// the attacker's value are dropped.
    pub fn subjective_framework(&self, i: usize) -> Result<ArgFramework> {
        let p = self.prefs.get(i).ok_or_else(|| {
            Error::Domain(format!(
                "agent index {i} out of range (framework has {} agents)",
                self.prefs.len()
            ))
        })?;
        let kept: Vec<(ArgId, ArgId)> = self
            .af
            .attacks()
            .iter()
            .filter(|(a, b)| !p.contains(&(self.val[b].clone(), self.val[a].clone())))
            .cloned()
            .collect();
        ArgFramework::new(self.af.args().iter().cloned(), kept)
    }

    /// Removes every preference pair that mentions `v`, for every agent.
    pub fn strip_value(&self, v: &ValueId) -> Result<ValueFramework> {
        if !self.values.contains(v) {
            return Err(Error::UnknownValue(v.to_string()));
        }
        let prefs = self
            .prefs
            .iter()
            .map(|p| p.iter().filter(|(x, y)| x != v && y != v).cloned().collect())
            .collect();
        Ok(ValueFramework {
            prefs,
            ..self.clone()
        })
    }
}

fn validate_preference(agent: usize, p: &Preference, values: &BTreeSet<ValueId>) -> Result<()> {
    for (u, w) in p {
        for x in [u, w] {
            if !values.contains(x) {
                return Err(Error::UnknownValue(x.to_string()));
            }
        }
        if u == w {
            return Err(Error::PreferenceReflexive {
                agent,
                value: u.to_string(),
            });
        }
        if p.contains(&(w.clone(), u.clone())) {
            return Err(Error::PreferenceSymmetric {
                agent,
                pair: format!("({u},{w})"),
            });
        }
    }
    for (u, w) in p {
        for (w2, x) in p.range((w.clone(), min_value())..) {
            if w2 != w {
                break;
            }
            if !p.contains(&(u.clone(), x.clone())) {
                return Err(Error::PreferenceIntransitive {
                    agent,
                    missing: format!("({u},{x})"),
                });
            }
        }
    }
    Ok(())
}

/// Smallest possible value id, used as a range bound.
fn min_value() -> ValueId {
    ValueId(Arc::from(""))
}

/// A value-based agreement scenario: framework, topic and one semantics
/// shared by all agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueScenario {
    vaf: ValueFramework,
    topic: Extension,
    sem: SemanticsKind,
}

impl ValueScenario {
    pub fn new(vaf: ValueFramework, topic: Extension, sem: SemanticsKind) -> Result<Self> {
        vaf.af.mask(&topic)?;
        Ok(ValueScenario { vaf, topic, sem })
    }

    pub fn vaf(&self) -> &ValueFramework {
        &self.vaf
    }

    pub fn topic(&self) -> &Extension {
        &self.topic
    }

    pub fn semantics(&self) -> SemanticsKind {
        self.sem
    }

    pub fn with_vaf(&self, vaf: ValueFramework) -> Result<Self> {
        ValueScenario::new(vaf, self.topic.clone(), self.sem)
    }

    /// The equivalent abstract scenario: the shared framework with, per
    /// agent, the extensions of that agent's subjective framework.
    pub fn profile(&self, limits: &Limits) -> Result<ExtensionProfile> {
        let agents = (0..self.vaf.agent_count())
            .map(|i| self.vaf.subjective_framework(i)?.enumerate_with(self.sem, limits))
            .collect::<Result<Vec<_>>>()?;
        ExtensionProfile::new(self.vaf.af.clone(), self.topic.clone(), agents)
    }
}

pub fn subjective_framework(vaf: &ValueFramework, agent_index: usize) -> Result<ArgFramework> {
    vaf.subjective_framework(agent_index)
}

pub fn to_agreement_scenario(vscn: &ValueScenario) -> Result<ExtensionProfile> {
    vscn.profile(&Limits::default())
}

pub fn strip_value(vaf: &ValueFramework, v: &ValueId) -> Result<ValueFramework> {
    vaf.strip_value(v)
}

pub fn value_degree(vscn: &ValueScenario, dkind: DegreeKind, skind: SimilarityKind) -> Result<Degree> {
    Ok(value_degree_result(vscn, dkind, skind, &Limits::default())?.value)
}

pub fn value_degree_result(
    vscn: &ValueScenario,
    dkind: DegreeKind,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<DegreeResult> {
    vscn.profile(limits)?.degree(dkind, skind, limits)
}

pub fn value_two_agent_satisfaction(
    vscn: &ValueScenario,
    i: usize,
    j: usize,
    skind: SimilarityKind,
) -> Result<Degree> {
    vscn.profile(&Limits::default())?.two_agent_satisfaction(i, j, skind)
}

/// Degree of the scenario minus the degree after stripping `v`.
pub fn value_impact(
    vscn: &ValueScenario,
    v: &ValueId,
    dkind: DegreeKind,
    skind: SimilarityKind,
) -> Result<SignedDegree> {
    let all = value_impacts(vscn, v, skind, &Limits::default())?;
    Ok(all[DegreeKind::ALL.iter().position(|&k| k == dkind).expect("listed")])
}

/// Impacts of `v` on the min, mean and median degrees.
pub fn value_impacts(
    vscn: &ValueScenario,
    v: &ValueId,
    skind: SimilarityKind,
    limits: &Limits,
) -> Result<[SignedDegree; 3]> {
    let stripped = vscn.with_vaf(vscn.vaf.strip_value(v)?)?;
    let before = vscn.profile(limits)?.degrees(skind, limits)?;
    let after = stripped.profile(limits)?.degrees(skind, limits)?;
    Ok([0, 1, 2].map(|k| before[k].value.signed_sub(after[k].value)))
}

pub fn vaf_normal_expansion_diagnostic(
    v1: &ValueFramework,
    v2: &ValueFramework,
) -> Result<(), ExpansionFailure> {
    normal_expansion_diagnostic(&v1.af, &v2.af)?;
    if !v1.values.is_subset(&v2.values) {
        return Err(ExpansionFailure::ValuesNotIncluded);
    }
    if v1.val.iter().any(|(a, v)| v2.val.get(a) != Some(v)) {
        return Err(ExpansionFailure::ValueMappingChanged);
    }
    if v1.prefs.len() != v2.prefs.len() {
        return Err(ExpansionFailure::AgentCountChanged);
    }
    for (p1, p2) in v1.prefs.iter().zip(&v2.prefs) {
        if !p1.is_subset(p2) {
            return Err(ExpansionFailure::PreferencesNotIncluded);
        }
    }
    for (p1, p2) in v1.prefs.iter().zip(&v2.prefs) {
        let old_pair_added = p2
            .difference(p1)
            .any(|(u, w)| v1.values.contains(u) && v1.values.contains(w));
        if old_pair_added {
            return Err(ExpansionFailure::PreferenceBetweenOldValues);
        }
    }
    Ok(())
}

pub fn is_vaf_normal_expansion(v1: &ValueFramework, v2: &ValueFramework) -> bool {
    vaf_normal_expansion_diagnostic(v1, v2).is_ok()
}

pub fn vaas_normal_expansion_diagnostic(
    s1: &ValueScenario,
    s2: &ValueScenario,
) -> Result<(), ExpansionFailure> {
    vaf_normal_expansion_diagnostic(&s1.vaf, &s2.vaf)?;
    topic_diagnostic(&s1.vaf.af, &s1.topic, &s2.topic)?;
    if s1.sem != s2.sem {
        return Err(ExpansionFailure::AgentsChanged);
    }
    Ok(())
}

pub fn is_vaas_normal_expansion(s1: &ValueScenario, s2: &ValueScenario) -> bool {
    vaas_normal_expansion_diagnostic(s1, s2).is_ok()
}

pub fn value_agreement_delta(
    s1: &ValueScenario,
    s2: &ValueScenario,
    dkind: DegreeKind,
    skind: SimilarityKind,
) -> Result<Degree> {
    Ok(value_degree(s1, dkind, skind)?.abs_diff(value_degree(s2, dkind, skind)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use DegreeKind::*;

    const H: SimilarityKind = SimilarityKind::Hamming;

    fn ext(names: &[&str]) -> Extension {
        Extension::from_names(names).unwrap()
    }

    fn d(n: u64, m: u64) -> Degree {
        Degree::new(n, m).unwrap()
    }

    fn vid(name: &str) -> ValueId {
        ValueId::new(name).unwrap()
    }

    fn pref(pairs: &[(&str, &str)]) -> Preference {
        pairs.iter().map(|(u, w)| (vid(u), vid(w))).collect()
    }

    /// Every argument `x` carries value `x_v`.
    fn vaf(args: &[&str], attacks: &[(&str, &str)], prefs: &[&[(&str, &str)]]) -> Result<ValueFramework> {
        let af = ArgFramework::from_names(args, attacks)?;
        let values: Vec<ValueId> = args.iter().map(|a| vid(&format!("{a}_v"))).collect();
        let val: Vec<(ArgId, ValueId)> = args
            .iter()
            .map(|a| (ArgId::new(a).unwrap(), vid(&format!("{a}_v"))))
            .collect();
        ValueFramework::new(af, values, val, prefs.iter().map(|p| pref(p)).collect())
    }

    fn intro_vaf() -> ValueFramework {
        vaf(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("c", "b"), ("d", "c")],
            &[&[("a_v", "b_v")], &[("b_v", "a_v")], &[("c_v", "d_v")]],
        )
        .unwrap()
    }

    fn intro() -> ValueScenario {
        ValueScenario::new(intro_vaf(), ext(&["a", "b", "c", "d"]), SemanticsKind::Preferred).unwrap()
    }

    fn attacks(af: &ArgFramework) -> Vec<(String, String)> {
        af.attacks()
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
        p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn subjective_frameworks() {
        let v = intro_vaf();
        assert_eq!(
            attacks(&v.subjective_framework(0).unwrap()),
            pairs(&[("a", "b"), ("c", "b"), ("d", "c")])
        );
        assert_eq!(
            attacks(&v.subjective_framework(2).unwrap()),
            pairs(&[("a", "b"), ("b", "a"), ("c", "b")])
        );
        assert!(v.subjective_framework(3).is_err());
        let neutral = vaf(&["a", "b"], &[("a", "b")], &[&[]]).unwrap();
        assert_eq!(neutral.subjective_framework(0).unwrap(), *neutral.af());
    }

    #[test]
    fn profiles_of_value_scenarios() {
        let p = intro().profile(&Limits::default()).unwrap();
        let shown: Vec<String> = p.agents().iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{{a,d}}", "{{b,d}}", "{{a,c,d}}"]);
    }

    #[test]
    fn value_degrees_and_satisfaction() {
        let s = intro();
        assert_eq!(value_degree(&s, Min, H).unwrap(), d(1, 2));
        assert_eq!(value_degree(&s, Mean, H).unwrap(), d(3, 4));
        assert_eq!(value_degree(&s, Median, H).unwrap(), d(3, 4));
        assert_eq!(value_two_agent_satisfaction(&s, 0, 1, H).unwrap(), d(1, 2));
        assert_eq!(value_two_agent_satisfaction(&s, 1, 2, H).unwrap(), d(1, 4));
        assert_eq!(value_two_agent_satisfaction(&s, 0, 2, H).unwrap(), d(3, 4));
        assert_eq!(value_two_agent_satisfaction(&s, 1, 1, H).unwrap(), Degree::ONE);
        assert!(value_two_agent_satisfaction(&s, 0, 3, H).is_err());
    }

    #[test]
    fn stripping_and_impact() {
        let s = intro();
        let stripped = s.vaf().strip_value(&vid("b_v")).unwrap();
        assert_eq!(stripped.prefs(), &[pref(&[]), pref(&[]), pref(&[("c_v", "d_v")])]);
        let s2 = s.with_vaf(stripped).unwrap();
        assert_eq!(value_degree(&s2, Min, H).unwrap(), d(3, 4));
        assert_eq!(value_degree(&s2, Mean, H).unwrap(), d(11, 12));
        assert_eq!(value_degree(&s2, Median, H).unwrap(), Degree::ONE);

        let neg = |n: i64, m: i64| SignedDegree::new(-n, m).unwrap();
        assert_eq!(value_impact(&s, &vid("b_v"), Min, H).unwrap(), neg(1, 4));
        assert_eq!(value_impact(&s, &vid("b_v"), Median, H).unwrap(), neg(1, 4));
        assert_eq!(value_impact(&s, &vid("b_v"), Mean, H).unwrap(), neg(1, 6));
        assert!(s.vaf().strip_value(&vid("zz")).is_err());
        assert_eq!(value_agreement_delta(&s, &s2, Min, H).unwrap(), d(1, 4));
    }

    #[test]
    fn unmentioned_value_has_no_impact() {
        let v = vaf(&["a", "b", "c"], &[("a", "b")], &[&[("a_v", "b_v")], &[]]).unwrap();
        let s = ValueScenario::new(v, ext(&["a", "b", "c"]), SemanticsKind::Grounded).unwrap();
        assert_eq!(s.vaf().strip_value(&vid("c_v")).unwrap(), *s.vaf());
        for k in DegreeKind::ALL {
            assert_eq!(value_impact(&s, &vid("c_v"), k, H).unwrap(), SignedDegree::ZERO);
        }
    }

    #[test]
    fn validation_errors() {
        let self_attack = vaf(&["a"], &[("a", "a")], &[&[]]).unwrap_err();
        assert_eq!(self_attack.code(), "E_SELF_ATTACK");
        let reflexive = vaf(&["a", "b"], &[], &[&[("a_v", "a_v")]]).unwrap_err();
        assert_eq!(reflexive.code(), "E_PREF_REFLEXIVE");
        let symmetric = vaf(&["a", "b"], &[], &[&[("a_v", "b_v"), ("b_v", "a_v")]]).unwrap_err();
        assert_eq!(symmetric.code(), "E_PREF_SYMMETRIC");
        let intransitive = vaf(&["a", "b", "c"], &[], &[&[("a_v", "b_v"), ("b_v", "c_v")]]).unwrap_err();
        assert_eq!(intransitive.code(), "E_PREF_INTRANSITIVE");
        assert!(vaf(&["a", "b", "c"], &[], &[&[("a_v", "b_v"), ("b_v", "c_v"), ("a_v", "c_v")]]).is_ok());
        assert!(vaf(&["a"], &[], &[]).is_err());
        let unknown = vaf(&["a"], &[], &[&[("a_v", "z_v")]]).unwrap_err();
        assert_eq!(unknown.code(), "E_UNKNOWN_VALUE");
    }

    fn expansion_example() -> (ValueScenario, [ValueScenario; 3]) {
        let sem = SemanticsKind::Preferred;
        let v0 = vaf(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[&[("a_v", "b_v")], &[("b_v", "a_v")]]).unwrap();
        let args2 = ["a", "b", "c", "d"];
        let att2 = [("a", "b"), ("b", "c"), ("d", "a")];
        // the second agent's relation is closed under transitivity here
        let v2 = vaf(
            &args2,
            &att2,
            &[&[("a_v", "b_v")], &[("a_v", "b_v"), ("c_v", "a_v"), ("c_v", "b_v")]],
        )
        .unwrap();
        let v2p = vaf(&args2, &att2, &[&[("a_v", "b_v")], &[("b_v", "a_v"), ("d_v", "a_v")]]).unwrap();
        let s0 = ValueScenario::new(v0, ext(&["a", "b"]), sem).unwrap();
        let s2 = ValueScenario::new(v2, ext(&["a", "b", "d"]), sem).unwrap();
        let s2p = ValueScenario::new(v2p.clone(), ext(&["a", "b", "c"]), sem).unwrap();
        let s2pp = ValueScenario::new(v2p, ext(&["a", "b", "d"]), sem).unwrap();
        (s0, [s2, s2p, s2pp])
    }

    #[test]
    fn value_expansions() {
        let (s0, [s2, s2p, s2pp]) = expansion_example();
        assert!(is_vaf_normal_expansion(s0.vaf(), s2pp.vaf()));
        assert!(!is_vaf_normal_expansion(s0.vaf(), s0.vaf()));
        assert!(!is_vaf_normal_expansion(s0.vaf(), s2.vaf()));
        assert!(is_vaas_normal_expansion(&s0, &s2pp));
        assert!(!is_vaas_normal_expansion(&s0, &s0));
        assert_eq!(
            vaas_normal_expansion_diagnostic(&s0, &s2p),
            Err(ExpansionFailure::TopicGainsOldArgument)
        );
        assert_eq!(
            vaas_normal_expansion_diagnostic(&s0, &s2),
            Err(ExpansionFailure::PreferencesNotIncluded)
        );
    }

    #[test]
    fn value_agreement_deltas() {
        let sem = SemanticsKind::Preferred;
        let before = vaf(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "a"), ("b", "c")],
            &[&[("a_v", "b_v")], &[("b_v", "a_v")]],
        )
        .unwrap();
        let after = vaf(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("d", "a")],
            &[&[("a_v", "b_v")], &[("b_v", "a_v"), ("d_v", "a_v")]],
        )
        .unwrap();
        let s = ValueScenario::new(before, ext(&["a", "b"]), sem).unwrap();
        let s2 = ValueScenario::new(after, ext(&["a", "b", "d"]), sem).unwrap();
        assert!(is_vaas_normal_expansion(&s, &s2));
        let p = s.profile(&Limits::default()).unwrap();
        let shown: Vec<String> = p.agents().iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["{{a,c}}", "{{b}}"]);
        for k in DegreeKind::ALL {
            assert_eq!(value_degree(&s, k, H).unwrap(), d(1, 2));
            assert_eq!(value_degree(&s2, k, H).unwrap(), Degree::ONE);
            assert_eq!(value_agreement_delta(&s, &s2, k, H).unwrap(), d(1, 2));
            assert_eq!(value_agreement_delta(&s, &s, k, H).unwrap(), Degree::ZERO);
        }
    }

    #[test]
    fn single_agent_fully_agrees() {
        let v = vaf(&["a", "b"], &[("a", "b"), ("b", "a")], &[&[]]).unwrap();
        let s = ValueScenario::new(v, ext(&["a", "b"]), SemanticsKind::Preferred).unwrap();
        for k in DegreeKind::ALL {
            assert_eq!(value_degree(&s, k, H).unwrap(), Degree::ONE);
        }
    }
}
