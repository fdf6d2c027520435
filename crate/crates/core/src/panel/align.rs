//! Explicit entity correspondence between two panel rosters.
//!
//! Ids present in both rosters continue unchanged unless a rule says
//! otherwise. Renames carry a trajectory over to a new id, split children
//! inherit their parent's history, and merged entities start fresh.
//! Nothing is matched by name similarity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::ScorePanel;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapRule {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

impl MapRule {
    pub fn new<S: AsRef<str>>(from: &[S], to: &[S]) -> Self {
        Self {
            from: from.iter().map(|s| String::from(s.as_ref())).collect(),
            to: to.iter().map(|s| String::from(s.as_ref())).collect(),
        }
    }
}

/// Alignment rules from an earlier roster to a later one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EntityMap {
    /// One old id to one new id.
    pub renames: Vec<MapRule>,
    /// One old id to two or more new ids (the parent id may be among them).
    pub splits: Vec<MapRule>,
    /// Two or more old ids to one new id.
    pub merges: Vec<MapRule>,
    /// New ids declared as having no predecessor.
    pub introductions: Vec<String>,
    /// Old ids declared as ending.
    pub retirements: Vec<String>,
}

impl EntityMap {
    pub fn is_empty(&self) -> bool {
        self.renames.is_empty()
            && self.splits.is_empty()
            && self.merges.is_empty()
            && self.introductions.is_empty()
            && self.retirements.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("{kind} rule #{index} is malformed: {reason}")]
    MalformedRule {
        kind: &'static str,
        index: usize,
        reason: &'static str,
    },
    #[error("id `{id}` is claimed by more than one rule")]
    Conflict { id: String },
    #[error("rule references `{id}`, which is not in the {side} roster")]
    Dangling { id: String, side: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lineage {
    /// Same id in both rosters.
    Continuing,
    Renamed { from: String },
    /// Inherits the parent's earlier history.
    SplitDerived { parent: String },
    /// Starts a fresh trajectory at the later roster.
    Merged { sources: Vec<String> },
    /// No predecessor.
    Introduced,
}

impl Lineage {
    /// Short tag for tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Lineage::Continuing => "continuing",
            Lineage::Renamed { .. } => "renamed",
            Lineage::SplitDerived { .. } => "split-derived",
            Lineage::Merged { .. } => "merged",
            Lineage::Introduced => "introduced",
        }
    }
}

/// Correspondence for one entity of the later roster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub entity: String,
    /// Id in the earlier roster whose history this entity continues.
    pub predecessor: Option<String>,
    pub lineage: Lineage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    /// One link per id of the later roster, in roster order.
    pub links: Vec<Link>,
    /// Earlier ids with no successor, in roster order.
    pub retired: Vec<String>,
}

impl Alignment {
    /// `(earlier id, later id)` pairs that share history.
    pub fn comparable(&self) -> impl Iterator<Item = (&str, &str)> {
        self.links
            .iter()
            .filter_map(|l| l.predecessor.as_deref().map(|p| (p, l.entity.as_str())))
    }

    /// True when every id continues unchanged in both directions.
    pub fn is_identity(&self) -> bool {
        self.retired.is_empty() && self.links.iter().all(|l| l.lineage == Lineage::Continuing)
    }
}

/// Align the rosters of two panels.
pub fn align_panels(a: &ScorePanel, b: &ScorePanel, map: &EntityMap) -> Result<Alignment, AlignError> {
    align_rosters(a.entities(), b.entities(), map)
}

/// Align an earlier roster `a` with a later roster `b`.
pub fn align_rosters<S: AsRef<str>>(
    a: &[S],
    b: &[S],
    map: &EntityMap,
) -> Result<Alignment, AlignError> {
    let in_a: BTreeSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let in_b: BTreeSet<&str> = b.iter().map(AsRef::as_ref).collect();

    check_shapes("rename", &map.renames, |f, t| f == 1 && t == 1, "needs exactly one `from` and one `to`")?;
    check_shapes("split", &map.splits, |f, t| f == 1 && t >= 2, "needs one `from` and at least two `to`")?;
    check_shapes("merge", &map.merges, |f, t| f >= 2 && t == 1, "needs at least two `from` and one `to`")?;

    // later id -> lineage, earlier ids consumed by some rule
    let mut claimed_to: BTreeMap<&str, Lineage> = BTreeMap::new();
    let mut claimed_from: BTreeSet<&str> = BTreeSet::new();

    let rules = map
        .renames
        .iter()
        .map(|r| (RuleKind::Rename, r))
        .chain(map.splits.iter().map(|r| (RuleKind::Split, r)))
        .chain(map.merges.iter().map(|r| (RuleKind::Merge, r)));

    for (kind, rule) in rules {
        for f in &rule.from {
            if !in_a.contains(f.as_str()) {
                return Err(AlignError::Dangling { id: f.clone(), side: "earlier" });
            }
            if !claimed_from.insert(f.as_str()) {
                return Err(AlignError::Conflict { id: f.clone() });
            }
            // a source that survives must be one of this rule's targets
            if in_b.contains(f.as_str()) && !rule.to.contains(f) {
                return Err(AlignError::Conflict { id: f.clone() });
            }
        }
        for t in &rule.to {
            if !in_b.contains(t.as_str()) {
                return Err(AlignError::Dangling { id: t.clone(), side: "later" });
            }
            if in_a.contains(t.as_str()) && !rule.from.contains(t) {
                return Err(AlignError::Conflict { id: t.clone() });
            }
            let lineage = match kind {
                RuleKind::Rename => Lineage::Renamed { from: rule.from[0].clone() },
                RuleKind::Split => Lineage::SplitDerived { parent: rule.from[0].clone() },
                RuleKind::Merge => Lineage::Merged { sources: rule.from.clone() },
            };
            if claimed_to.insert(t.as_str(), lineage).is_some() {
                return Err(AlignError::Conflict { id: t.clone() });
            }
        }
    }

    for id in &map.introductions {
        if !in_b.contains(id.as_str()) {
            return Err(AlignError::Dangling { id: id.clone(), side: "later" });
        }
        if in_a.contains(id.as_str()) || claimed_to.contains_key(id.as_str()) {
            return Err(AlignError::Conflict { id: id.clone() });
        }
    }
    for id in &map.retirements {
        if !in_a.contains(id.as_str()) {
            return Err(AlignError::Dangling { id: id.clone(), side: "earlier" });
        }
        if in_b.contains(id.as_str()) || claimed_from.contains(id.as_str()) {
            return Err(AlignError::Conflict { id: id.clone() });
        }
    }

    let links = b
        .iter()
        .map(AsRef::as_ref)
        .map(|id| {
            let (predecessor, lineage) = match claimed_to.get(id) {
                Some(l @ Lineage::Renamed { from }) => (Some(from.clone()), l.clone()),
                Some(l @ Lineage::SplitDerived { parent }) => (Some(parent.clone()), l.clone()),
                Some(l) => (None, l.clone()),
                None if in_a.contains(id) => (Some(String::from(id)), Lineage::Continuing),
                None => (None, Lineage::Introduced),
            };
            Link {
                entity: String::from(id),
                predecessor,
                lineage,
            }
        })
        .collect();

    let retired = a
        .iter()
        .map(AsRef::as_ref)
        .filter(|id| !claimed_from.contains(id) && !in_b.contains(id))
        .map(String::from)
        .collect();

    Ok(Alignment { links, retired })
}

#[derive(Clone, Copy)]
enum RuleKind {
    Rename,
    Split,
    Merge,
}

fn check_shapes(
    kind: &'static str,
    rules: &[MapRule],
    ok: impl Fn(usize, usize) -> bool,
    reason: &'static str,
) -> Result<(), AlignError> {
    for (index, r) in rules.iter().enumerate() {
        if !ok(r.from.len(), r.to.len()) {
            return Err(AlignError::MalformedRule { kind, index, reason });
        }
    }
    Ok(())
}
