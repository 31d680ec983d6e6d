mod common;

use argagree::agreement::{degree_of_agreement, AgreementScenario, DegreeKind, SimilarityKind};
use argagree::dynamics::{
    check_principle, cm_condition, delta_upper_bound, enforce_principle, enforced_complies, is_aas_normal_expansion,
    is_normal_expansion, is_strong_attacker, max_common_extension_core, min_agreement_lower_bound, srm_condition,
    PrincipleKind,
};
use argagree::{ArgFramework, ArgId, Degree, Extension, Limits, SemanticsKind};
use common::{normal_expansion, random_af, random_pair, random_topic, rng, weak_cautious_monotony, Oracle};
use rand::Rng;

const H: SimilarityKind = SimilarityKind::Hamming;

#[test]
fn naive_satisfies_every_relaxed_monotony_principle() {
    for seed in 0..500u64 {
        let (af1, af2) = random_pair(&mut rng(70_000 + seed), 0.3);
        assert!(is_normal_expansion(&af1, &af2));
        for p in PrincipleKind::ALL {
            let v = check_principle(&af1, &af2, SemanticsKind::Naive, p).unwrap();
            assert!(v.holds, "seed {seed}, {p}: {:?}", v.violations().collect::<Vec<_>>());
        }
    }
}

#[test]
fn cm_principle_agrees_with_the_direct_definition() {
    let mut violated = 0;
    for seed in 0..500u64 {
        let mut r = rng(80_000 + seed);
        let (af1, af2) = random_pair(&mut r, 0.3);
        for sem in SemanticsKind::ALL {
            let direct = weak_cautious_monotony(&af1, &af2, sem);
            let verdict = check_principle(&af1, &af2, sem, PrincipleKind::WeakCautiousMonotony).unwrap();
            assert_eq!(verdict.holds, direct, "seed {seed}, {sem}");
            violated += usize::from(!direct);
        }
    }
    assert!(violated > 0, "the sample never exercises a violation");
}

/// `s` strongly defends `a`, by the recursive definition.
fn strongly_defends(o: &Attacks, s: &[bool], a: usize) -> bool {
    let mut rest = s.to_vec();
    rest[a] = false;
    (0..o.n).filter(|&b| o.att[b][a]).all(|b| {
        (0..o.n).any(|c| rest[c] && o.att[c][b] && strongly_defends(o, &rest, c))
    })
}

struct Attacks {
    n: usize,
    att: Vec<Vec<bool>>,
    args: Vec<ArgId>,
}

impl Attacks {
    fn new(af: &ArgFramework) -> Self {
        let args = af.args().to_vec();
        let n = args.len();
        let att = args
            .iter()
            .map(|a| args.iter().map(|b| af.has_attack(a, b)).collect())
            .collect();
        Attacks { n, att, args }
    }

    fn strong_attacker(&self, a: usize, target: &Extension) -> bool {
        let hits = (0..self.n).any(|b| self.att[a][b] && target.contains(&self.args[b]));
        hits && (0u32..1 << self.n).any(|m| {
            let s: Vec<bool> = (0..self.n).map(|i| m >> i & 1 == 1).collect();
            let cf = (0..self.n).all(|i| (0..self.n).all(|j| !(s[i] && s[j] && self.att[i][j])));
            cf && strongly_defends(self, &s, a)
        })
    }
}

#[test]
fn strong_attackers_match_a_subset_scan() {
    for seed in 0..200u64 {
        let mut r = rng(90_000 + seed);
        let n = r.random_range(1..=5);
        let af1 = random_af(&mut r, n, 0.35, true);
        let k = r.random_range(1..=3);
        let af2 = normal_expansion(&mut r, &af1, k, 0.35);
        let oracle = Attacks::new(&af2);
        let target = common::random_subset(&mut r, &af1);
        for (i, a) in af2.args().iter().enumerate() {
            assert_eq!(
                is_strong_attacker(&af1, &af2, a, &target).unwrap(),
                oracle.strong_attacker(i, &target),
                "seed {seed}: {a} vs {target}"
            );
        }
        for sem in SemanticsKind::ALL {
            for e in &af1.enumerate(sem).unwrap() {
                let inferred = af2.enumerate(sem).unwrap();
                let expected = !inferred.iter().any(|x| {
                    x.iter().any(|a| oracle.strong_attacker(af2.args().iter().position(|y| y == a).unwrap(), e))
                });
                assert_eq!(srm_condition(&af1, &af2, e, sem).unwrap(), expected, "seed {seed}, {sem}, {e}");
            }
        }
    }
}

#[test]
fn cm_condition_is_false_exactly_when_a_new_argument_attacks() {
    for seed in 0..200u64 {
        let mut r = rng(95_000 + seed);
        let (af1, af2) = random_pair(&mut r, 0.3);
        let e = common::random_subset(&mut r, &af1);
        let attacked = af2.attacks().iter().any(|(a, b)| !af1.contains(a) && e.contains(b));
        assert_eq!(cm_condition(&af1, &af2, &e).unwrap(), !attacked, "seed {seed}");
    }
}

#[test]
fn enforcement_always_complies() {
    for seed in 0..200u64 {
        let mut r = rng(100_000 + seed);
        let (af1, af2) = random_pair(&mut r, 0.3);
        let topic2 = random_topic(&mut r, &af2);
        let oracle = Oracle::new(&af2);
        for sem in SemanticsKind::ALL {
            let exts1 = af1.enumerate(sem).unwrap();
            let exts2 = af2.enumerate(sem).unwrap();
            for p in PrincipleKind::ALL {
                let enforced = enforce_principle(&af1, &af2, &topic2, sem, p).unwrap();
                let limits = Limits::default();
                assert!(
                    enforced_complies(&af1, &exts1, &af2, &exts2, &enforced, p, &limits).unwrap(),
                    "seed {seed}, {sem}, {p}"
                );
                for e in &exts2 {
                    assert!(enforced.contains(e), "seed {seed}: lost {e}");
                }
                for e in &enforced {
                    assert!(oracle.is_conflict_free(e), "seed {seed}: repair {e} has a conflict");
                }
                if check_principle(&af1, &af2, sem, p).unwrap().holds {
                    assert_eq!(enforced, exts2, "seed {seed}: nothing to repair");
                }
            }
        }
    }
}

fn scenario(af: &ArgFramework, topic: &Extension, agents: usize) -> AgreementScenario {
    AgreementScenario::new(af.clone(), topic.clone(), vec![SemanticsKind::Naive; agents]).unwrap()
}

fn degree(s: &AgreementScenario, k: DegreeKind) -> Degree {
    degree_of_agreement(s, k, H).unwrap().value
}

#[test]
fn full_agreement_survives_a_fixed_topic_expansion() {
    let mut checked = 0;
    for seed in 0..3000u64 {
        if checked == 300 {
            break;
        }
        let mut r = rng(110_000 + seed);
        let (af1, af2) = random_pair(&mut r, 0.25);
        let topic = random_topic(&mut r, &af1);
        let agents = r.random_range(1..=4);
        let exts = af1.enumerate(SemanticsKind::Naive).unwrap();
        let precondition = PrincipleKind::ALL.iter().any(|&p| {
            exts.iter().any(|e| {
                topic.is_subset(e)
                    && match p {
                        PrincipleKind::WeakCautiousMonotony => cm_condition(&af1, &af2, e).unwrap(),
                        PrincipleKind::StrongRelaxedMonotony => srm_condition(&af1, &af2, e, SemanticsKind::Naive).unwrap(),
                    }
            })
        });
        if !precondition {
            continue;
        }
        let (s1, s2) = (scenario(&af1, &topic, agents), scenario(&af2, &topic, agents));
        assert!(is_aas_normal_expansion(&s1, &s2));
        for k in DegreeKind::ALL {
            assert_eq!(degree(&s1, k), Degree::ONE, "seed {seed}");
            assert_eq!(degree(&s2, k), Degree::ONE, "seed {seed}");
        }
        checked += 1;
    }
    assert_eq!(checked, 300);
}

fn lower_bound_samples(count: usize) -> Result<usize, String> {
    for seed in 0..count as u64 {
        let mut r = rng(120_000 + seed);
        let (_, af2) = random_pair(&mut r, 0.3);
        let topic = random_topic(&mut r, &af2);
        let s = scenario(&af2, &topic, r.random_range(1..=4));
        let bound = min_agreement_lower_bound(topic.len()).unwrap();
        if degree(&s, DegreeKind::Min) < bound {
            return Err(format!("seed {seed}"));
        }
    }
    Ok(count)
}

#[test]
fn min_degree_respects_the_lower_bound_for_naive_agents() {
    assert_eq!(lower_bound_samples(300), Ok(300));
}

#[test]
fn min_delta_respects_the_upper_bound() {
    let mut checked = 0;
    for seed in 0..5000u64 {
        if checked == 300 {
            break;
        }
        let mut r = rng(130_000 + seed);
        let (af1, af2) = random_pair(&mut r, 0.25);
        let topic1 = random_topic(&mut r, &af1);
        let extra: Extension = af2.args().iter().filter(|a| !af1.contains(a) && r.random_bool(0.5)).cloned().collect();
        let topic2 = topic1.union(&extra);
        let agents = r.random_range(1..=4);
        let exts = af1.enumerate(SemanticsKind::Naive).unwrap();
        if !exts.iter().all(|e| cm_condition(&af1, &af2, e).unwrap()) {
            continue;
        }
        let (s1, s2) = (scenario(&af1, &topic1, agents), scenario(&af2, &topic2, agents));
        assert!(is_aas_normal_expansion(&s1, &s2));
        let (d1, d2) = (degree(&s1, DegreeKind::Min), degree(&s2, DegreeKind::Min));
        if d2 > d1 {
            continue;
        }
        let core = max_common_extension_core(&af1, &vec![SemanticsKind::Naive; agents]).unwrap();
        let bound = delta_upper_bound(&topic1, topic2.len(), topic1.intersection(&core).len()).unwrap();
        assert!(d1.abs_diff(d2) <= bound, "seed {seed}: delta {} > {bound}", d1.abs_diff(d2));
        checked += 1;
    }
    assert_eq!(checked, 300);
}
