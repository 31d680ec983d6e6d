use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::ArgFramework;
use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsKind {
    Complete,
    Preferred,
    Grounded,
    Naive,
    Stage,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 5] = [
        SemanticsKind::Complete,
        SemanticsKind::Preferred,
        SemanticsKind::Grounded,
        SemanticsKind::Naive,
        SemanticsKind::Stage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemanticsKind::Complete => "complete",
            SemanticsKind::Preferred => "preferred",
            SemanticsKind::Grounded => "grounded",
            SemanticsKind::Naive => "naive",
            SemanticsKind::Stage => "stage",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SemanticsKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown semantics {s:?}")))
    }
}

pub(crate) fn enumerate_masks(
    af: &ArgFramework,
    kind: SemanticsKind,
    limits: &Limits,
) -> Result<Vec<Mask>> {
    af.check_cap(limits)?;
    let mut out = match kind {
        SemanticsKind::Grounded => vec![af.grounded_mask()],
        SemanticsKind::Complete => complete(af),
        SemanticsKind::Preferred => maximal(complete(af)),
        SemanticsKind::Naive => naive(af),
        SemanticsKind::Stage => stage(af),
    };
    out.sort_by(|a, b| bits::canonical_cmp(*a, *b));
    out.dedup();
    Ok(out)
}

/// Complete extensions by include/exclude branching over the arguments not
/// already settled by the grounded extension.
///
/// Every complete extension contains the grounded extension G and, being
/// conflict-free, avoids G+; only the remaining arguments are branched on.
fn complete(af: &ArgFramework) -> Vec<Mask> {
    let grounded = af.grounded_mask();
    let excluded = af.plus_mask(grounded) | af.self_attacking_mask();
    let open: Vec<usize> = bits::iter(af.full_mask() & !grounded & !excluded).collect();
    let mut out = Vec::new();
    branch_complete(af, &open, 0, grounded, &mut out);
    out
}

fn branch_complete(af: &ArgFramework, open: &[usize], depth: usize, set: Mask, out: &mut Vec<Mask>) {
    if depth == open.len() {
        if af.admissible_mask(set) && af.defended_mask(set) == set {
            out.push(set);
        }
        return;
    }
    let i = open[depth];
    // conflict pruning: i must not attack or be attacked by the partial set
    if (af.targets_mask(i) | af.attackers_mask(i)) & set == 0 {
        branch_complete(af, open, depth + 1, set | bits::bit(i), out);
    }
    branch_complete(af, open, depth + 1, set, out);
}

/// Keeps the ⊆-maximal members.
fn maximal(mut sets: Vec<Mask>) -> Vec<Mask> {
    sets.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut kept: Vec<Mask> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| bits::is_subset(s, *k)) {
            kept.push(s);
        }
    }
    kept
}

/// Naive extensions are the maximal independent sets of the symmetric
/// conflict graph over the non-self-attacking arguments.
fn naive(af: &ArgFramework) -> Vec<Mask> {
    let n = af.len();
    let usable = af.full_mask() & !af.self_attacking_mask();
    // compatible[i]: arguments that may sit together with i in a conflict-free set
    let compatible: Vec<Mask> = (0..n)
        .map(|i| usable & !(af.targets_mask(i) | af.attackers_mask(i)) & !bits::bit(i))
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(&compatible, 0, usable, 0, &mut out);
    out
}

fn bron_kerbosch(compat: &[Mask], r: Mask, mut p: Mask, mut x: Mask, out: &mut Vec<Mask>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits::iter(p | x)
        .max_by_key(|&u| (p & compat[u]).count_ones())
        .expect("p is nonempty");
    for v in bits::iter(p & !compat[pivot]) {
        bron_kerbosch(compat, r | bits::bit(v), p & compat[v], x & compat[v], out);
        p &= !bits::bit(v);
        x |= bits::bit(v);
    }
}

/// Stage extensions are the naive extensions whose range S ∪ S+ is not
/// strictly contained in the range of another conflict-free set. Extending a
/// conflict-free set to a naive one never shrinks its range, so comparing
/// against the naive extensions suffices.
fn stage(af: &ArgFramework) -> Vec<Mask> {
    let candidates = naive(af);
    let ranges: Vec<Mask> = candidates.iter().map(|&s| s | af.plus_mask(s)).collect();
    candidates
        .iter()
        .zip(&ranges)
        .filter(|(_, &r)| !ranges.iter().any(|&o| o != r && bits::is_subset(r, o)))
        .map(|(&s, _)| s)
        .collect()
}
