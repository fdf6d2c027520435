//! Multi-year rank trajectories and weight tables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{AnalyticsError, GoalWeights, RankTable};
use crate::panel::{align_rosters, EntityMap, Lineage};

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub year: String,
    /// Entity id in that year's table.
    pub entity: String,
    pub rank: usize,
    /// Copied from a split parent rather than observed for this entity.
    pub inherited: bool,
}

/// A roster change that touched a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct LineageEvent {
    /// Year in which the change takes effect.
    pub year: String,
    pub lineage: Lineage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Latest id of the entity.
    pub entity: String,
    pub points: Vec<TrajectoryPoint>,
    pub events: Vec<LineageEvent>,
    /// Rank in the last year, `None` if the entity did not survive to it.
    /// Used as the color key.
    pub final_rank: Option<usize>,
}

impl Trajectory {
    pub fn is_split_derived(&self) -> bool {
        self.events
            .iter()
            .any(|e| matches!(e.lineage, Lineage::SplitDerived { .. }))
    }

    pub fn rank_in(&self, year: &str) -> Option<usize> {
        self.points.iter().find(|p| p.year == year).map(|p| p.rank)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankSeries {
    pub years: Vec<String>,
    /// Survivors by final rank, then ended trajectories by entity id.
    pub trajectories: Vec<Trajectory>,
}

/// Chain rank tables through consecutive entity maps.
///
/// `maps[t]` aligns `tables[t]` with `tables[t + 1]`. Renamed and continuing
/// entities extend their trajectory; split children get a copy of the
/// parent's history (points flagged `inherited`); merged and introduced
/// entities start a new trajectory.
pub fn rank_evolution(tables: &[RankTable], maps: &[EntityMap]) -> Result<RankSeries, AnalyticsError> {
    let expected = tables.len().saturating_sub(1);
    if maps.len() != expected {
        return Err(AnalyticsError::LengthMismatch {
            what: "entity map",
            expected,
            found: maps.len(),
        });
    }
    let years: Vec<String> = tables.iter().map(|t| t.year.clone()).collect();
    let Some(first) = tables.first() else {
        return Ok(RankSeries {
            years,
            trajectories: Vec::new(),
        });
    };

    let point = |t: &RankTable, entity: &str, rank: usize| TrajectoryPoint {
        year: t.year.clone(),
        entity: String::from(entity),
        rank,
        inherited: false,
    };

    let mut active: Vec<Trajectory> = first
        .entries
        .iter()
        .map(|e| Trajectory {
            entity: e.entity.clone(),
            points: alloc::vec![point(first, &e.entity, e.rank)],
            events: Vec::new(),
            final_rank: None,
        })
        .collect();
    let mut ended: Vec<Trajectory> = Vec::new();

    for (prev, (cur, map)) in tables.iter().zip(tables[1..].iter().zip(maps)) {
        let prev_ids: Vec<&str> = prev.entries.iter().map(|e| e.entity.as_str()).collect();
        let cur_ids: Vec<&str> = cur.entries.iter().map(|e| e.entity.as_str()).collect();
        let alignment = align_rosters(&prev_ids, &cur_ids, map).map_err(|source| {
            AnalyticsError::Alignment {
                from: prev.year.clone(),
                to: cur.year.clone(),
                source,
            }
        })?;

        let mut by_id: BTreeMap<String, Trajectory> =
            active.drain(..).map(|t| (t.entity.clone(), t)).collect();
        let split_parents: BTreeSet<String> = alignment
            .links
            .iter()
            .filter_map(|l| match &l.lineage {
                Lineage::SplitDerived { parent } => Some(parent.clone()),
                _ => None,
            })
            .collect();

        let mut next = Vec::with_capacity(alignment.links.len());
        // links follow the later roster order, which is the entry order
        for (link, entry) in alignment.links.iter().zip(&cur.entries) {
            let here = point(cur, &link.entity, entry.rank);
            let traj = match &link.lineage {
                Lineage::Continuing | Lineage::Renamed { .. } => {
                    let pred = link.predecessor.as_deref().expect("continuing link has predecessor");
                    let mut t = by_id.remove(pred).expect("alignment only names known ids");
                    if !matches!(link.lineage, Lineage::Continuing) {
                        t.events.push(LineageEvent {
                            year: cur.year.clone(),
                            lineage: link.lineage.clone(),
                        });
                    }
                    t.entity = link.entity.clone();
                    t.points.push(here);
                    t
                }
                Lineage::SplitDerived { parent } => {
                    let source = &by_id[parent.as_str()];
                    let mut points: Vec<TrajectoryPoint> = source
                        .points
                        .iter()
                        .cloned()
                        .map(|mut p| {
                            p.inherited = true;
                            p
                        })
                        .collect();
                    points.push(here);
                    let mut events = source.events.clone();
                    events.push(LineageEvent {
                        year: cur.year.clone(),
                        lineage: link.lineage.clone(),
                    });
                    Trajectory {
                        entity: link.entity.clone(),
                        points,
                        events,
                        final_rank: None,
                    }
                }
                Lineage::Merged { .. } | Lineage::Introduced => Trajectory {
                    entity: link.entity.clone(),
                    points: alloc::vec![here],
                    events: alloc::vec![LineageEvent {
                        year: cur.year.clone(),
                        lineage: link.lineage.clone(),
                    }],
                    final_rank: None,
                },
            };
            next.push(traj);
        }
        // split parents live on in their children; everything else left over ended
        for (id, t) in by_id {
            if !split_parents.contains(&id) {
                ended.push(t);
            }
        }
        active = next;
    }

    for t in &mut active {
        t.final_rank = t.points.last().map(|p| p.rank);
    }
    active.sort_by_key(|t| t.final_rank);
    ended.sort_by(|a, b| a.entity.cmp(&b.entity));
    active.extend(ended);
    Ok(RankSeries {
        years,
        trajectories: active,
    })
}

/// Category × year weight table with explicit gaps.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightsEvolution {
    pub years: Vec<String>,
    pub categories: Vec<String>,
    /// `values[category][year]`.
    pub values: Vec<Vec<Option<f64>>>,
}

impl WeightsEvolution {
    /// Number of years in which `category` has a weight.
    pub fn present_years(&self, category: usize) -> usize {
        self.values[category].iter().filter(|v| v.is_some()).count()
    }
}

/// Collect per-year weights into one table. The category order merges the
/// yearly rosters: a category first seen in a later year is placed right
/// after its predecessor in that year's roster.
pub fn weights_evolution(series: &[GoalWeights]) -> WeightsEvolution {
    let mut categories: Vec<String> = Vec::new();
    for w in series {
        for (k, c) in w.categories.iter().enumerate() {
            if categories.contains(c) {
                continue;
            }
            let anchor = w.categories[..k]
                .iter()
                .rev()
                .find_map(|p| categories.iter().position(|x| x == p));
            let at = anchor.map_or(0, |a| a + 1);
            categories.insert(at, c.clone());
        }
    }
    let values = categories
        .iter()
        .map(|c| series.iter().map(|w| w.get(c)).collect())
        .collect();
    WeightsEvolution {
        years: series.iter().map(|w| w.year.clone()).collect(),
        categories,
        values,
    }
}
