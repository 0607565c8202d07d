//! Quadratic reference solver.
//!
//! Every candidate list is kept until the end; at each step each list is
//! advanced by one of three rules, and of all the swapped lists created in
//! that step only the one with the smallest max-displacement survives.
//!
//! A list's order and positions are not stored explicitly. A list is
//! summarized by its last interval, right end and max-displacement, plus a
//! [`Lineage`] node from which [`materialize`] rebuilds the order.

use std::cmp::Ordering;

use crate::lineage::{reconstruct, replay, Lineage, NodeId, ReplayError, Replayed};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateList {
    /// Rank of the last interval.
    pub last: usize,
    /// Right end of the last interval.
    pub x_end: Scalar,
    pub delta: Scalar,
    pub node: NodeId,
}

impl CandidateList {
    /// The list holding only the first interval.
    pub fn first(inst: &Instance, node: NodeId) -> CandidateList {
        CandidateList {
            last: 0,
            x_end: inst[0].right().clone(),
            delta: Scalar::ZERO,
            node,
        }
    }

    /// Position of the last interval.
    pub fn last_position(&self, inst: &Instance) -> Scalar {
        &self.x_end - inst[self.last].length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepCase {
    /// The new interval reaches at least as far right as the last one.
    Append,
    /// The new interval fits where the last one starts.
    InsertBefore,
    /// Neither: the list is extended by appending and also forks a swapped copy.
    Fork,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub case: StepCase,
    pub updated: CandidateList,
    /// The swapped copy; carries the parent's lineage node until it is kept.
    pub spawned: Option<CandidateList>,
}

/// Advances one list by interval `i`.
pub fn step_list(inst: &Instance, list: &CandidateList, i: usize) -> StepResult {
    let iv = &inst[i];
    let m = &inst[list.last];
    if iv.right() >= m.right() {
        let pos = if &list.x_end > iv.left() {
            list.x_end.clone()
        } else {
            iv.left().clone()
        };
        let delta = list.delta.clone().max(&pos - iv.left());
        let updated = CandidateList {
            last: i,
            x_end: pos + iv.length(),
            delta,
            node: list.node,
        };
        return StepResult {
            case: StepCase::Append,
            updated,
            spawned: None,
        };
    }
    let m_pos = list.last_position(inst);
    if iv.left() <= &m_pos {
        let delta = list.delta.clone().max(&(&m_pos + iv.length()) - m.left());
        let updated = CandidateList {
            last: list.last,
            x_end: &list.x_end + iv.length(),
            delta,
            node: list.node,
        };
        return StepResult {
            case: StepCase::InsertBefore,
            updated,
            spawned: None,
        };
    }
    let updated = CandidateList {
        last: i,
        x_end: &list.x_end + iv.length(),
        delta: list.delta.clone().max(&list.x_end - iv.left()),
        node: list.node,
    };
    let spawned = CandidateList {
        last: list.last,
        x_end: iv.right() + m.length(),
        delta: list.delta.clone().max(iv.right() - m.left()),
        node: list.node,
    };
    StepResult {
        case: StepCase::Fork,
        updated,
        spawned: Some(spawned),
    }
}

/// State of a preliminary run after some prefix of the instance.
#[derive(Debug, Clone)]
pub struct PrelimRun<'a> {
    inst: &'a Instance,
    lists: Vec<CandidateList>,
    lineage: Lineage,
    processed: usize,
}

fn better(a: &CandidateList, b: &CandidateList) -> bool {
    match a.delta.cmp(&b.delta) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.x_end < b.x_end,
    }
}

impl<'a> PrelimRun<'a> {
    pub fn new(inst: &'a Instance) -> PrelimRun<'a> {
        let lineage = Lineage::new();
        let lists = vec![CandidateList::first(inst, lineage.root())];
        PrelimRun {
            inst,
            lists,
            lineage,
            processed: 1,
        }
    }

    pub fn lists(&self) -> &[CandidateList] {
        &self.lists
    }

    pub fn lineage(&self) -> &Lineage {
        &self.lineage
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn is_done(&self) -> bool {
        self.processed == self.inst.len()
    }

    /// Processes the next interval. Returns false once all are processed.
    pub fn step(&mut self) -> bool {
        if self.is_done() {
            return false;
        }
        let i = self.processed;
        let mut best: Option<(usize, CandidateList)> = None;
        for (idx, list) in self.lists.iter_mut().enumerate() {
            let step = step_list(self.inst, list, i);
            *list = step.updated;
            if let Some(sp) = step.spawned {
                if best.as_ref().is_none_or(|(_, b)| better(&sp, b)) {
                    best = Some((idx, sp));
                }
            }
        }
        if let Some((idx, mut spawned)) = best {
            let parent = self.lists[idx].node;
            let (append, swap) = self.lineage.record_spawn(parent, i, spawned.last);
            self.lists[idx].node = append;
            spawned.node = swap;
            self.lists.push(spawned);
        }
        self.processed += 1;
        true
    }

    /// The list with the smallest max-displacement, ties to the smallest
    /// right end, then to the earliest list.
    pub fn best(&self) -> &CandidateList {
        let mut best = &self.lists[0];
        for l in &self.lists[1..] {
            if better(l, best) {
                best = l;
            }
        }
        best
    }

    pub fn materialize(&self, list: &CandidateList) -> Result<Replayed, ReplayError> {
        materialize(self.inst, &self.lineage, list, self.processed)
    }
}

/// Rebuilds the explicit order and configuration of `list` over the first
/// `processed` intervals.
pub fn materialize(
    inst: &Instance,
    lineage: &Lineage,
    list: &CandidateList,
    processed: usize,
) -> Result<Replayed, ReplayError> {
    replay(inst, lineage, list.node, processed)
}

/// Runs the quadratic algorithm to completion.
pub fn run_preliminary(inst: &Instance) -> PrelimRun<'_> {
    let mut run = PrelimRun::new(inst);
    while run.step() {}
    run
}

pub fn solve_preliminary(inst: &Instance) -> Solution {
    let run = run_preliminary(inst);
    let best = run.best();
    reconstruct(inst, &run.lineage, best.node, &best.delta)
        .expect("preliminary lineage replays to its own value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{left_possible_placement, max_displacement};

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn root_list(a: &Instance) -> CandidateList {
        CandidateList::first(a, Lineage::new().root())
    }

    #[test]
    fn step_append() {
        let a = inst(&[(0, 1), (2, 3)]);
        let s = step_list(&a, &root_list(&a), 1);
        assert_eq!(s.case, StepCase::Append);
        assert_eq!(s.updated.delta, Scalar::from(0));
        assert_eq!(s.updated.x_end, Scalar::from(3));
        assert_eq!(s.updated.last, 1);
        assert!(s.spawned.is_none());
    }

    #[test]
    fn step_fork() {
        let a = inst(&[(0, 10), (1, 3)]);
        let s = step_list(&a, &root_list(&a), 1);
        assert_eq!(s.case, StepCase::Fork);
        assert_eq!(
            (
                s.updated.last,
                s.updated.delta.clone(),
                s.updated.x_end.clone()
            ),
            (1, 9.into(), 12.into())
        );
        let sp = s.spawned.unwrap();
        assert_eq!((sp.last, sp.delta, sp.x_end), (0, 3.into(), 13.into()));
    }

    #[test]
    fn step_insert_before() {
        let a = inst(&[(0, 10), (0, 3)]);
        // Sorting puts [0,3] first, so the list over [0,10] alone is built by hand.
        let list = CandidateList {
            last: 1,
            x_end: 10.into(),
            delta: 0.into(),
            node: Lineage::new().root(),
        };
        let s = step_list(&a, &list, 0);
        assert_eq!(s.case, StepCase::InsertBefore);
        assert_eq!(s.updated.last, 1);
        assert_eq!(s.updated.x_end, Scalar::from(13));
        assert_eq!(s.updated.delta, Scalar::from(3));
    }

    #[test]
    fn run_keeps_one_spawn_per_step() {
        let a = inst(&[(0, 20), (1, 3), (2, 4), (5, 6), (7, 9)]);
        let mut run = PrelimRun::new(&a);
        while run.step() {
            assert!(run.lists().len() <= run.processed());
            for l in run.lists() {
                let r = run.materialize(l).unwrap();
                assert_eq!(r.delta, l.delta);
                assert_eq!(r.x_end, l.x_end);
                assert_eq!(r.last, l.last);
                assert_eq!(left_possible_placement(&a, &r.order).unwrap(), r.config);
            }
        }
    }

    #[test]
    fn solve_examples() {
        let s = solve_preliminary(&inst(&[(5, 7)]));
        assert_eq!((s.delta, s.order), (Scalar::from(0), vec![0]));

        let s = solve_preliminary(&inst(&[(0, 2), (1, 3)]));
        assert_eq!((s.delta, s.order), (Scalar::from(1), vec![0, 1]));

        let a = inst(&[(0, 8), (2, 4), (3, 5)]);
        let s = solve_preliminary(&a);
        assert_eq!(s.delta, Scalar::from(6));
        assert_eq!(s.order, vec![1, 2, 0]);
        assert_eq!(max_displacement(&s.config, &a), s.delta);
    }
}
