//! Seeded generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use argagree::{ArgFramework, ArgId, Extension, SemanticsKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn id(s: &str) -> ArgId {
    ArgId::new(s).unwrap()
}

/// `n` arguments `x0..`, each ordered pair attacked with probability `p`.
pub fn random_af(rng: &mut ChaCha8Rng, n: usize, p: f64, self_attacks: bool) -> ArgFramework {
    let args: Vec<ArgId> = (0..n).map(|i| id(&format!("x{i}"))).collect();
    let mut attacks = Vec::new();
    for a in &args {
        for b in &args {
            if (a != b || self_attacks) && rng.random_bool(p) {
                attacks.push((a.clone(), b.clone()));
            }
        }
    }
    ArgFramework::new(args, attacks).unwrap()
}

/// Adds `n_new` arguments `y0..`; every new attack touches a new argument.
pub fn normal_expansion(rng: &mut ChaCha8Rng, af: &ArgFramework, n_new: usize, p: f64) -> ArgFramework {
    let new: Vec<ArgId> = (0..n_new).map(|i| id(&format!("y{i}"))).collect();
    let all: Vec<ArgId> = af.args().iter().chain(&new).cloned().collect();
    let mut attacks: Vec<(ArgId, ArgId)> = af.attacks().iter().cloned().collect();
    for a in &all {
        for b in &all {
            let touches_new = new.contains(a) || new.contains(b);
            if touches_new && rng.random_bool(p) {
                attacks.push((a.clone(), b.clone()));
            }
        }
    }
    ArgFramework::new(all, attacks).unwrap()
}

/// A random framework and a random normal expansion of it, at most ten
/// arguments in total.
pub fn random_pair(rng: &mut ChaCha8Rng, p: f64) -> (ArgFramework, ArgFramework) {
    let n = rng.random_range(1..=7);
    let k = rng.random_range(1..=10 - n);
    let af1 = random_af(rng, n, p, true);
    let af2 = normal_expansion(rng, &af1, k, p);
    (af1, af2)
}

/// Weak cautious monotony read straight off its definition: every extension
/// that receives no attack from a new argument survives inside some
/// extension of the expansion.
pub fn weak_cautious_monotony(af1: &ArgFramework, af2: &ArgFramework, sem: SemanticsKind) -> bool {
    let exts2 = af2.enumerate(sem).unwrap();
    af1.enumerate(sem).unwrap().iter().all(|e| {
        let attacked_by_new = af2.attacks().iter().any(|(a, b)| !af1.contains(a) && e.contains(b));
        attacked_by_new || exts2.iter().any(|x| e.is_subset(x))
    })
}

/// A nonempty random subset of the framework's arguments.
pub fn random_topic(rng: &mut ChaCha8Rng, af: &ArgFramework) -> Extension {
    loop {
        let t: Extension = af.args().iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        if !t.is_empty() {
            return t;
        }
    }
}

pub fn random_subset(rng: &mut ChaCha8Rng, af: &ArgFramework) -> Extension {
    af.args().iter().filter(|_| rng.random_bool(0.5)).cloned().collect()
}

pub fn random_semantics(rng: &mut ChaCha8Rng) -> SemanticsKind {
    SemanticsKind::ALL[rng.random_range(0..SemanticsKind::ALL.len())]
}

pub fn names(e: &Extension) -> Vec<String> {
    e.iter().map(|a| a.as_str().to_string()).collect()
}

/// Every subset of `items`, as index lists.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

/// Extensions straight from the textbook definitions, by scanning every
/// subset of the arguments.
pub struct Oracle {
    n: usize,
    att: Vec<Vec<bool>>,
    args: Vec<String>,
}

impl Oracle {
    pub fn new(af: &ArgFramework) -> Self {
        let args: Vec<String> = af.args().iter().map(|a| a.as_str().to_string()).collect();
        let n = args.len();
        let mut att = vec![vec![false; n]; n];
        for (a, b) in af.attacks() {
            let i = args.iter().position(|x| x == a.as_str()).unwrap();
            let j = args.iter().position(|x| x == b.as_str()).unwrap();
            att[i][j] = true;
        }
        Oracle { n, att, args }
    }

    fn conflict_free(&self, s: &[bool]) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| !(s[i] && s[j] && self.att[i][j])))
    }

    fn set_attacks(&self, s: &[bool], b: usize) -> bool {
        (0..self.n).any(|a| s[a] && self.att[a][b])
    }

    fn defends(&self, s: &[bool], a: usize) -> bool {
        (0..self.n).all(|b| !self.att[b][a] || self.set_attacks(s, b))
    }

    fn admissible(&self, s: &[bool]) -> bool {
        self.conflict_free(s) && (0..self.n).all(|a| !s[a] || self.defends(s, a))
    }

    fn complete(&self, s: &[bool]) -> bool {
        self.admissible(s) && (0..self.n).all(|a| s[a] || !self.defends(s, a))
    }

    fn range(&self, s: &[bool]) -> Vec<bool> {
        (0..self.n).map(|a| s[a] || self.set_attacks(s, a)).collect()
    }

    fn all_sets(&self) -> Vec<Vec<bool>> {
        (0u32..1 << self.n)
            .map(|m| (0..self.n).map(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    fn subset(a: &[bool], b: &[bool]) -> bool {
        a.iter().zip(b).all(|(x, y)| !x || *y)
    }

    /// Members of `family` that are ⊆-maximal with respect to `key`.
    fn maximal_by(&self, family: &[Vec<bool>], key: impl Fn(&[bool]) -> Vec<bool>) -> Vec<Vec<bool>> {
        family
            .iter()
            .filter(|s| {
                let ks = key(s);
                !family.iter().any(|t| {
                    let kt = key(t);
                    kt != ks && Self::subset(&ks, &kt)
                })
            })
            .cloned()
            .collect()
    }

    pub fn extensions(&self, kind: SemanticsKind) -> BTreeSet<Vec<String>> {
        let all = self.all_sets();
        let found: Vec<Vec<bool>> = match kind {
            SemanticsKind::Complete => all.into_iter().filter(|s| self.complete(s)).collect(),
            SemanticsKind::Preferred => {
                let adm: Vec<_> = all.into_iter().filter(|s| self.admissible(s)).collect();
                self.maximal_by(&adm, |s| s.to_vec())
            }
            SemanticsKind::Grounded => {
                let comp: Vec<_> = all.into_iter().filter(|s| self.complete(s)).collect();
                comp.iter()
                    .filter(|s| comp.iter().all(|t| Self::subset(s, t)))
                    .cloned()
                    .collect()
            }
            SemanticsKind::Naive => {
                let cf: Vec<_> = all.into_iter().filter(|s| self.conflict_free(s)).collect();
                self.maximal_by(&cf, |s| s.to_vec())
            }
            SemanticsKind::Stage => {
                let cf: Vec<_> = all.into_iter().filter(|s| self.conflict_free(s)).collect();
                self.maximal_by(&cf, |s| self.range(s))
            }
        };
        found
            .iter()
            .map(|s| (0..self.n).filter(|&i| s[i]).map(|i| self.args[i].clone()).collect())
            .collect()
    }

    pub fn is_conflict_free(&self, e: &Extension) -> bool {
        let s: Vec<bool> = self.args.iter().map(|a| e.contains(&id(a))).collect();
        self.conflict_free(&s)
    }
}

/// Hamming similarity on characteristic vectors over the topic.
pub fn hamming(e: &Extension, s: &Extension, t: &Extension) -> (u64, u64) {
    let distance = t.iter().filter(|a| e.contains(a) != s.contains(a)).count() as u64;
    (t.len() as u64 - distance, t.len() as u64)
}
