//! Abstract argumentation frameworks and their extensions.

mod semantics;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::Limits;

pub use semantics::SemanticsKind;

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Interned argument name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgId(Arc<str>);

impl ArgId {
    pub fn new(name: &str) -> Result<Self> {
        if is_token(name) {
            Ok(ArgId(Arc::from(name)))
        } else {
            Err(Error::InvalidIdentifier(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ArgId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// A set of arguments, independent of any particular framework.
///
/// Ordered by cardinality first and then by the sorted member lists.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Extension(BTreeSet<ArgId>);

impl Extension {
    pub fn new() -> Self {
        Extension(BTreeSet::new())
    }

    /// Builds a set from raw names, validating each token.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        names.iter().map(|n| ArgId::new(n.as_ref())).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &ArgId) -> bool {
        self.0.contains(a)
    }

    pub fn insert(&mut self, a: ArgId) -> bool {
        self.0.insert(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArgId> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &Extension) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &Extension) -> Extension {
        Extension(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn union(&self, other: &Extension) -> Extension {
        Extension(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Extension) -> Extension {
        Extension(self.0.difference(&other.0).cloned().collect())
    }
}

impl FromIterator<ArgId> for Extension {
    fn from_iter<I: IntoIterator<Item = ArgId>>(iter: I) -> Self {
        Extension(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Extension {
    type Item = &'a ArgId;
    type IntoIter = std::collections::btree_set::Iter<'a, ArgId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Ord for Extension {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Extension {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Extension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

/// The extensions a semantics yields on a framework, sorted and deduplicated.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ExtensionSet(Vec<Extension>);

impl ExtensionSet {
    pub fn new(exts: impl IntoIterator<Item = Extension>) -> Self {
        let mut v: Vec<Extension> = exts.into_iter().collect();
        v.sort();
        v.dedup();
        ExtensionSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Extension> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Extension] {
        &self.0
    }

    pub fn contains(&self, e: &Extension) -> bool {
        self.0.binary_search(e).is_ok()
    }

    /// Some member is a superset of `e`.
    pub fn covers(&self, e: &Extension) -> bool {
        self.0.iter().any(|x| e.is_subset(x))
    }
}

impl<'a> IntoIterator for &'a ExtensionSet {
    type Item = &'a Extension;
    type IntoIter = std::slice::Iter<'a, Extension>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ExtensionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ExtensionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite attack graph over named arguments.
///
/// Arguments are kept in lexicographic order; that order fixes the bit
/// layout used by every mask-based routine in the crate.
#[derive(Clone)]
pub struct ArgFramework {
    args: Vec<ArgId>,
    index: HashMap<ArgId, usize>,
    attacks: BTreeSet<(ArgId, ArgId)>,
    attackers: Vec<Mask>,
    targets: Vec<Mask>,
}

impl PartialEq for ArgFramework {
    fn eq(&self, other: &Self) -> bool {
        self.args == other.args && self.attacks == other.attacks
    }
}

impl Eq for ArgFramework {}

impl fmt::Debug for ArgFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArgFramework")
            .field("args", &self.args)
            .field("attacks", &self.attacks)
            .finish()
    }
}

impl ArgFramework {
    /// Builds a framework. Repeated arguments and attacks collapse; attack
    /// endpoints must be declared arguments.
    pub fn new(
        args: impl IntoIterator<Item = ArgId>,
        attacks: impl IntoIterator<Item = (ArgId, ArgId)>,
    ) -> Result<Self> {
        let args: Vec<ArgId> = args
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if args.len() > bits::MAX_BITS {
            return Err(Error::FrameworkTooLarge {
                size: args.len(),
                max: bits::MAX_BITS,
            });
        }
        let index: HashMap<ArgId, usize> = args
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut attackers = vec![0; args.len()];
        let mut targets = vec![0; args.len()];
        let mut set = BTreeSet::new();
        for (a, b) in attacks {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::UnknownArgument(a.to_string()))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::UnknownArgument(b.to_string()))?;
            attackers[ib] |= bits::bit(ia);
            targets[ia] |= bits::bit(ib);
            set.insert((a, b));
        }
        Ok(ArgFramework {
            args,
            index,
            attacks: set,
            attackers,
            targets,
        })
    }

    /// Convenience constructor from raw names.
    pub fn from_names(args: &[&str], attacks: &[(&str, &str)]) -> Result<Self> {
        let args = args
            .iter()
            .map(|a| ArgId::new(a))
            .collect::<Result<Vec<_>>>()?;
        let attacks = attacks
            .iter()
            .map(|(a, b)| Ok((ArgId::new(a)?, ArgId::new(b)?)))
            .collect::<Result<Vec<_>>>()?;
        ArgFramework::new(args, attacks)
    }

    pub fn args(&self) -> &[ArgId] {
        &self.args
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.attacks
    }

    pub fn contains(&self, a: &ArgId) -> bool {
        self.index.contains_key(a)
    }

    pub fn has_attack(&self, a: &ArgId, b: &ArgId) -> bool {
        self.attacks.contains(&(a.clone(), b.clone()))
    }

    pub fn all_args(&self) -> Extension {
        self.args.iter().cloned().collect()
    }

    /// Arguments attacking `a`.
    pub fn attackers_of(&self, a: &ArgId) -> Result<Extension> {
        let i = self.idx(a)?;
        Ok(self.extension(self.attackers[i]))
    }

    pub(crate) fn idx(&self, a: &ArgId) -> Result<usize> {
        self.index
            .get(a)
            .copied()
            .ok_or_else(|| Error::UnknownArgument(a.to_string()))
    }

    pub(crate) fn mask(&self, s: &Extension) -> Result<Mask> {
        s.iter().try_fold(0, |m, a| Ok(m | bits::bit(self.idx(a)?)))
    }

    pub(crate) fn extension(&self, m: Mask) -> Extension {
        bits::iter(m).map(|i| self.args[i].clone()).collect()
    }

    pub(crate) fn full_mask(&self) -> Mask {
        bits::full(self.args.len())
    }

    pub(crate) fn attackers_mask(&self, i: usize) -> Mask {
        self.attackers[i]
    }

    pub(crate) fn targets_mask(&self, i: usize) -> Mask {
        self.targets[i]
    }

    pub(crate) fn self_attacking_mask(&self) -> Mask {
        (0..self.args.len())
            .filter(|&i| bits::contains(self.targets[i], i))
            .fold(0, |m, i| m | bits::bit(i))
    }

    /// S+ as a mask.
    pub(crate) fn plus_mask(&self, s: Mask) -> Mask {
        bits::iter(s).fold(0, |m, i| m | self.targets[i])
    }

    pub(crate) fn cf_mask(&self, s: Mask) -> bool {
        bits::iter(s).all(|i| self.targets[i] & s == 0)
    }

    pub(crate) fn acceptable_mask(&self, i: usize, s: Mask) -> bool {
        bits::is_subset(self.attackers[i], self.plus_mask(s))
    }

    pub(crate) fn admissible_mask(&self, s: Mask) -> bool {
        if !self.cf_mask(s) {
            return false;
        }
        let plus = self.plus_mask(s);
        bits::iter(s).all(|i| bits::is_subset(self.attackers[i], plus))
    }

    /// Characteristic function: everything acceptable w.r.t. `s`.
    pub(crate) fn defended_mask(&self, s: Mask) -> Mask {
        let plus = self.plus_mask(s);
        (0..self.args.len())
            .filter(|&i| bits::is_subset(self.attackers[i], plus))
            .fold(0, |m, i| m | bits::bit(i))
    }

    pub(crate) fn grounded_mask(&self) -> Mask {
        let mut s = 0;
        loop {
            let next = self.defended_mask(s);
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub(crate) fn strongly_defends_mask(&self, s: Mask, a: usize) -> bool {
        let mut memo = HashMap::new();
        self.sd(s, a, &mut memo)
    }

    fn sd(&self, s: Mask, a: usize, memo: &mut HashMap<(Mask, usize), bool>) -> bool {
        if let Some(&v) = memo.get(&(s, a)) {
            return v;
        }
        let rest = s & !bits::bit(a);
        let result = bits::iter(self.attackers[a]).all(|b| {
            bits::iter(self.attackers[b] & rest).any(|c| self.sd(rest, c, memo))
        });
        memo.insert((s, a), result);
        result
    }

    /// S+: all arguments attacked by some member of `s`.
    pub fn attacks_set(&self, s: &Extension) -> Result<Extension> {
        Ok(self.extension(self.plus_mask(self.mask(s)?)))
    }

    pub fn is_conflict_free(&self, s: &Extension) -> Result<bool> {
        Ok(self.cf_mask(self.mask(s)?))
    }

    /// Every attacker of `a` is attacked by `s`.
    pub fn is_acceptable(&self, a: &ArgId, s: &Extension) -> Result<bool> {
        let i = self.idx(a)?;
        Ok(self.acceptable_mask(i, self.mask(s)?))
    }

    pub fn is_admissible(&self, s: &Extension) -> Result<bool> {
        Ok(self.admissible_mask(self.mask(s)?))
    }

    /// Every attacker of `a` is countered by some `c` in `s \ {a}` that is
    /// itself strongly defended by `s \ {a}`.
    pub fn strongly_defends(&self, s: &Extension, a: &ArgId) -> Result<bool> {
        let i = self.idx(a)?;
        Ok(self.strongly_defends_mask(self.mask(s)?, i))
    }

    /// Least fixpoint of the characteristic function, reached by iteration
    /// from the empty set.
    pub fn grounded_fixpoint(&self) -> Extension {
        self.extension(self.grounded_mask())
    }

    /// Extensions of `kind` under the default limits.
    pub fn enumerate(&self, kind: SemanticsKind) -> Result<ExtensionSet> {
        self.enumerate_with(kind, &Limits::default())
    }

    pub fn enumerate_with(&self, kind: SemanticsKind, limits: &Limits) -> Result<ExtensionSet> {
        let masks = semantics::enumerate_masks(self, kind, limits)?;
        Ok(ExtensionSet(
            masks.into_iter().map(|m| self.extension(m)).collect(),
        ))
    }

    pub(crate) fn check_cap(&self, limits: &Limits) -> Result<()> {
        if self.args.len() > limits.max_args {
            Err(Error::CapExceeded {
                what: "framework",
                size: self.args.len(),
                cap: limits.max_args,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(names: &[&str]) -> Extension {
        Extension::from_names(names).unwrap()
    }

    fn id(name: &str) -> ArgId {
        ArgId::new(name).unwrap()
    }

    pub(crate) fn intro_af() -> ArgFramework {
        ArgFramework::from_names(
            &["a", "b", "c", "d", "e"],
            &[
                ("b", "e"),
                ("c", "e"),
                ("d", "a"),
                ("d", "d"),
                ("e", "b"),
                ("e", "c"),
                ("e", "e"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_tokens_and_unknown_endpoints() {
        assert!(ArgId::new("").is_err());
        assert!(ArgId::new("a-b").is_err());
        assert!(ArgId::new("A_1").is_ok());
        let err = ArgFramework::from_names(&["a"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownArgument("z".into()));
    }

    #[test]
    fn attack_sets() {
        let af = intro_af();
        assert_eq!(af.attacks_set(&ext(&["b", "c"])).unwrap(), ext(&["e"]));
        assert_eq!(af.attacks_set(&ext(&[])).unwrap(), ext(&[]));
        let chain = ArgFramework::from_names(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(chain.attacks_set(&ext(&["a", "b"])).unwrap(), ext(&["b", "c"]));
        assert!(matches!(
            af.attacks_set(&ext(&["x"])),
            Err(Error::UnknownArgument(_))
        ));
    }

    #[test]
    fn conflict_freeness() {
        let af = intro_af();
        assert!(af.is_conflict_free(&ext(&["a", "b", "c"])).unwrap());
        assert!(af.is_conflict_free(&ext(&[])).unwrap());
        let mutual_after = ArgFramework::from_names(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "c")],
        )
        .unwrap();
        assert!(!mutual_after.is_conflict_free(&ext(&["b", "c"])).unwrap());
    }

    #[test]
    fn acceptability_and_admissibility() {
        let af = intro_af();
        assert!(af.is_acceptable(&id("b"), &ext(&["b", "c"])).unwrap());
        assert!(!af.is_acceptable(&id("a"), &ext(&["b", "c"])).unwrap());
        let free = ArgFramework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(free.is_acceptable(&id("a"), &ext(&[])).unwrap());
        assert!(af.is_admissible(&ext(&["b", "c"])).unwrap());
        assert!(af.is_admissible(&ext(&[])).unwrap());
        assert!(!af.is_admissible(&ext(&["a"])).unwrap());
    }

    #[test]
    fn strong_defence() {
        let single = ArgFramework::from_names(&["a"], &[]).unwrap();
        assert!(single.strongly_defends(&ext(&[]), &id("a")).unwrap());

        let chain = ArgFramework::from_names(&["a", "b", "c"], &[("b", "a"), ("c", "b")]).unwrap();
        assert!(chain.strongly_defends(&ext(&["c"]), &id("a")).unwrap());

        let mutual = ArgFramework::from_names(&["a", "b"], &[("b", "a"), ("a", "b")]).unwrap();
        assert!(!mutual.strongly_defends(&ext(&["a"]), &id("a")).unwrap());
    }

    #[test]
    fn grounded_fixpoints() {
        assert_eq!(intro_af().grounded_fixpoint(), ext(&[]));
        let free = ArgFramework::from_names(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(free.grounded_fixpoint(), ext(&["a", "b", "c"]));
        let chain_with_d = ArgFramework::from_names(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("d", "a")],
        )
        .unwrap();
        // d is unattacked and defeats a, which reinstates b and defeats c
        assert_eq!(chain_with_d.grounded_fixpoint(), ext(&["b", "d"]));
    }

    #[test]
    fn extension_order_is_cardinality_then_lexicographic() {
        let set = ExtensionSet::new(vec![ext(&["b", "c"]), ext(&[]), ext(&["a", "c"]), ext(&["c"])]);
        let shown: Vec<String> = set.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["{}", "{c}", "{a,c}", "{b,c}"]);
    }

    #[test]
    fn frameworks_compare_by_content() {
        let a = ArgFramework::from_names(&["b", "a"], &[("a", "b"), ("a", "b")]).unwrap();
        let b = ArgFramework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(a, b);
    }
}
