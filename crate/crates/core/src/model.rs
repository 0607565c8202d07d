//! Instances, configurations and the placement primitives shared by every
//! solver.
//!
//! Algorithms address intervals by their *rank*: the 0-based position in
//! the instance's sorted order (by left endpoint, then right endpoint, then
//! original input ordinal). The original ordinal is kept as [`Interval::id`]
//! so results can be reported in input order.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("interval {} is degenerate: left {left} is not smaller than right {right}", .id + 1)]
    DegenerateInterval {
        id: usize,
        left: Scalar,
        right: Scalar,
    },
    #[error("instance has no intervals")]
    EmptyInstance,
    #[error("rank {rank} is out of range for an instance of {n} intervals")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("rank {rank} appears more than once in the order")]
    DuplicateRank { rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Intervals may only move rightwards.
    One,
    /// Intervals may move either way.
    Two,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::One => "one",
            Direction::Two => "two",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    id: usize,
    left: Scalar,
    right: Scalar,
    length: Scalar,
}

impl Interval {
    pub fn new(id: usize, left: Scalar, right: Scalar) -> Result<Interval, ModelError> {
        if left >= right {
            return Err(ModelError::DegenerateInterval { id, left, right });
        }
        let length = &right - &left;
        Ok(Interval {
            id,
            left,
            right,
            length,
        })
    }

    /// Original 0-based input ordinal.
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn left(&self) -> &Scalar {
        &self.left
    }

    pub fn right(&self) -> &Scalar {
        &self.right
    }

    pub fn length(&self) -> &Scalar {
        &self.length
    }

    /// True when `other` lies inside `self` in the input.
    pub fn contains(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

/// A validated, sorted set of intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    intervals: Vec<Interval>,
    rank_of_id: Vec<usize>,
}

impl Instance {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn rank_of_id(&self, id: usize) -> usize {
        self.rank_of_id[id]
    }

    /// Intervals as `(left, right)` pairs in original input order.
    pub fn raw(&self) -> Vec<(Scalar, Scalar)> {
        self.rank_of_id
            .iter()
            .map(|&r| {
                (
                    self.intervals[r].left.clone(),
                    self.intervals[r].right.clone(),
                )
            })
            .collect()
    }

    pub fn all_equal_length(&self) -> bool {
        self.intervals
            .windows(2)
            .all(|w| w[0].length == w[1].length)
    }

    pub fn from_pairs<L, R>(pairs: impl IntoIterator<Item = (L, R)>) -> Result<Instance, ModelError>
    where
        L: Into<Scalar>,
        R: Into<Scalar>,
    {
        let raw: Vec<(Scalar, Scalar)> = pairs
            .into_iter()
            .map(|(l, r)| (l.into(), r.into()))
            .collect();
        normalize_instance(&raw)
    }
}

impl std::ops::Index<usize> for Instance {
    type Output = Interval;

    fn index(&self, rank: usize) -> &Interval {
        &self.intervals[rank]
    }
}

/// Validates the raw pairs and sorts them by `(left, right, input ordinal)`.
pub fn normalize_instance(raw: &[(Scalar, Scalar)]) -> Result<Instance, ModelError> {
    if raw.is_empty() {
        return Err(ModelError::EmptyInstance);
    }
    let mut intervals = raw
        .iter()
        .enumerate()
        .map(|(id, (l, r))| Interval::new(id, l.clone(), r.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    intervals.sort_by(|a, b| {
        a.left
            .cmp(&b.left)
            .then_with(|| a.right.cmp(&b.right))
            .then_with(|| a.id.cmp(&b.id))
    });
    let mut rank_of_id = vec![0; intervals.len()];
    for (rank, iv) in intervals.iter().enumerate() {
        rank_of_id[iv.id] = rank;
    }
    Ok(Instance {
        intervals,
        rank_of_id,
    })
}

/// New left-endpoint positions for a subset of an instance, indexed by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    slots: Vec<Option<Scalar>>,
}

impl Configuration {
    pub fn new(n: usize) -> Configuration {
        Configuration {
            slots: vec![None; n],
        }
    }

    /// Every interval at its input position.
    pub fn identity(inst: &Instance) -> Configuration {
        Configuration {
            slots: inst
                .intervals
                .iter()
                .map(|iv| Some(iv.left.clone()))
                .collect(),
        }
    }

    pub fn set(&mut self, rank: usize, position: Scalar) {
        self.slots[rank] = Some(position);
    }

    pub fn position(&self, rank: usize) -> Option<&Scalar> {
        self.slots.get(rank).and_then(Option::as_ref)
    }

    /// Covered ranks with their positions, in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(r, p)| p.as_ref().map(|p| (r, p)))
    }

    pub fn covered(&self) -> usize {
        self.slots.iter().filter(|p| p.is_some()).count()
    }

    pub fn displacement(&self, inst: &Instance, rank: usize) -> Option<Scalar> {
        self.position(rank).map(|p| p - inst[rank].left())
    }

    /// Shifts every covered position by `delta`.
    pub fn translated(&self, delta: &Scalar) -> Configuration {
        Configuration {
            slots: self
                .slots
                .iter()
                .map(|p| p.as_ref().map(|p| p + delta))
                .collect(),
        }
    }
}

/// An optimal (or claimed) answer for an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub delta: Scalar,
    /// Left-to-right order of ranks.
    pub order: Vec<usize>,
    pub config: Configuration,
    pub direction: Direction,
}

impl Solution {
    /// Builds the one-direction solution for `order` by left-possible placement.
    pub fn from_order(inst: &Instance, order: Vec<usize>) -> Result<Solution, ModelError> {
        let config = left_possible_placement(inst, &order)?;
        let delta = max_displacement(&config, inst);
        Ok(Solution {
            delta,
            order,
            config,
            direction: Direction::One,
        })
    }

    /// `(new_left, displacement)` per interval in original input order.
    pub fn by_input_order(&self, inst: &Instance) -> Vec<(Scalar, Scalar)> {
        (0..inst.len())
            .map(|id| {
                let rank = inst.rank_of_id(id);
                let pos = self.config.position(rank).cloned().unwrap_or_default();
                let disp = &pos - inst[rank].left();
                (pos, disp)
            })
            .collect()
    }
}

fn check_order(n: usize, order: &[usize]) -> Result<(), ModelError> {
    let mut seen = vec![false; n];
    for &rank in order {
        if rank >= n {
            return Err(ModelError::RankOutOfRange { rank, n });
        }
        if std::mem::replace(&mut seen[rank], true) {
            return Err(ModelError::DuplicateRank { rank });
        }
    }
    Ok(())
}

/// Places the intervals of `order` one by one, each as far left as
/// possible: at its input position or at the right end of its predecessor,
/// whichever is larger.
pub fn left_possible_placement(
    inst: &Instance,
    order: &[usize],
) -> Result<Configuration, ModelError> {
    check_order(inst.len(), order)?;
    let mut config = Configuration::new(inst.len());
    let mut end: Option<Scalar> = None;
    for &rank in order {
        let iv = &inst[rank];
        let pos = match end {
            Some(e) if e > iv.left => e,
            _ => iv.left.clone(),
        };
        end = Some(&pos + &iv.length);
        config.set(rank, pos);
    }
    Ok(config)
}

/// Largest absolute displacement over the covered intervals (zero if none).
pub fn max_displacement(config: &Configuration, inst: &Instance) -> Scalar {
    config
        .iter()
        .map(|(rank, pos)| (pos - inst[rank].left()).abs())
        .max()
        .unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A one-direction configuration moved an interval leftwards.
    NegativeDisplacement { rank: usize, displacement: Scalar },
    /// Two placed intervals share more than one point.
    Overlap { first: usize, second: usize },
}

impl Violation {
    pub fn describe(&self, inst: &Instance) -> String {
        match self {
            Violation::NegativeDisplacement { rank, displacement } => format!(
                "interval {} has negative displacement {}",
                inst[*rank].id() + 1,
                displacement
            ),
            Violation::Overlap { first, second } => format!(
                "intervals {} and {} overlap",
                inst[*first].id() + 1,
                inst[*second].id() + 1
            ),
        }
    }
}

/// First feasibility violation of `config`, scanning displacements in rank
/// order and then neighbouring pairs in position order.
pub fn find_violation(
    config: &Configuration,
    inst: &Instance,
    direction: Direction,
) -> Option<Violation> {
    if direction == Direction::One {
        for (rank, pos) in config.iter() {
            let displacement = pos - inst[rank].left();
            if displacement.is_negative() {
                return Some(Violation::NegativeDisplacement { rank, displacement });
            }
        }
    }
    let mut placed: Vec<(usize, &Scalar)> = config.iter().collect();
    placed.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    placed.windows(2).find_map(|w| {
        let (a, pa) = w[0];
        let (b, pb) = w[1];
        match (pa + inst[a].length()).cmp(pb) {
            Ordering::Greater => Some(Violation::Overlap {
                first: a,
                second: b,
            }),
            _ => None,
        }
    })
}

pub fn is_feasible(config: &Configuration, inst: &Instance, direction: Direction) -> bool {
    find_violation(config, inst, direction).is_none()
}

/// Shifts an optimal one-direction solution left by half its max-displacement,
/// which is optimal for the two-direction problem.
pub fn to_two_direction(one_dir: &Solution) -> Solution {
    debug_assert_eq!(one_dir.direction, Direction::One);
    let half = one_dir.delta.half();
    Solution {
        delta: half.clone(),
        order: one_dir.order.clone(),
        config: one_dir.config.translated(&-&half),
        direction: Direction::Two,
    }
}
