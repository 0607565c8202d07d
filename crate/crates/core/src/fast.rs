//! The O(n log n) solver.
//!
//! Candidate lists are kept implicitly as leaves of an ordered map keyed by
//! the list's right end minus a global shift. Every list grows by the length
//! of the new interval at every step, so the shift absorbs that growth and
//! keys only change for the one leaf that gets clamped to the new interval's
//! left end. The surviving leaves always form a staircase: right ends
//! strictly increase while max-displacements strictly decrease.
//!
//! At most two distinct last intervals exist across the lists. When there
//! are two, the inner one is nested in the outer one and the lists ending in
//! it occupy a prefix of the map up to the boundary key.
//!
//! Each step splits the leaves into a few contiguous pieces that share one
//! update rule, trims each piece's tail where its new values stop
//! decreasing, and merges the pieces (plus at most one forked list) back into
//! a staircase.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound::{self, Excluded, Included, Unbounded};

use crate::lineage::{reconstruct, replay, Lineage, NodeId, ReplayError};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Leaf {
    delta: Scalar,
    node: NodeId,
}

/// A leaf as seen from outside the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafRecord {
    /// Right end of the list minus the global shift.
    pub key: Scalar,
    pub delta: Scalar,
    pub node: NodeId,
}

/// Which update pattern a step used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcase {
    /// One last interval, new interval reaches past it: every list appends.
    AppendSingle,
    /// Two last intervals, new interval reaches past both: every list appends.
    AppendPair,
    /// One last interval containing the new one: lists fork or insert.
    SplitSingle,
    /// Two last intervals, new one ends between them: inner lists append,
    /// outer lists fork or insert.
    SplitPair,
    /// Two last intervals, new one nested in both: every list inserts.
    InsertPair,
}

impl Subcase {
    pub const ALL: [Subcase; 5] = [
        Subcase::AppendSingle,
        Subcase::AppendPair,
        Subcase::SplitSingle,
        Subcase::SplitPair,
        Subcase::InsertPair,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Subcase::AppendSingle => "append1",
            Subcase::AppendPair => "append2",
            Subcase::SplitSingle => "split1",
            Subcase::SplitPair => "split2",
            Subcase::InsertPair => "insert2",
        }
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Boundary situations a step ran into.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct StepFlags {
    /// A split step where no list could fork.
    pub no_fork: bool,
    /// A split step where every splittable list forked (none inserted).
    pub all_fork: bool,
    /// Everything ending in the outer interval was dominated by the forking
    /// lists' own appended versions.
    pub outer_dropped: bool,
    /// In a split-pair step, everything formerly ending in the outer
    /// interval was dominated by the inner lists.
    pub split_outer_dropped: bool,
    /// In an insert-pair step, every outer list was dominated by an inner one.
    pub insert_outer_dropped: bool,
    /// The forked list tied on right end with its neighbour and lost.
    pub spawn_tie: bool,
    /// The leftmost list ended at or before the new interval's left end.
    pub clamp: bool,
}

impl StepFlags {
    pub const NAMES: [&'static str; 7] = [
        "no-fork",
        "all-fork",
        "outer-dropped",
        "split-outer-dropped",
        "insert-outer-dropped",
        "spawn-tie",
        "clamp",
    ];

    fn bits(&self) -> [bool; 7] {
        [
            self.no_fork,
            self.all_fork,
            self.outer_dropped,
            self.split_outer_dropped,
            self.insert_outer_dropped,
            self.spawn_tie,
            self.clamp,
        ]
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> {
        let bits = self.bits();
        Self::NAMES
            .into_iter()
            .zip(bits)
            .filter(|(_, on)| *on)
            .map(|(n, _)| n)
    }
}

impl fmt::Display for StepFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names().collect();
        if names.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    /// Rank of the processed interval.
    pub interval: usize,
    pub case: Subcase,
    /// Leaves deleted from the map this step.
    pub removed: usize,
    /// Whether a forked list was inserted.
    pub spawned: bool,
    pub leaves: usize,
    pub flags: StepFlags,
}

impl StepOutcome {
    /// Tab-separated trace line: step (1-based), case, removed, spawned, leaves, flags.
    pub fn trace_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.interval + 1,
            self.case,
            self.removed,
            u8::from(self.spawned),
            self.leaves,
            self.flags
        )
    }
}

pub const TRACE_HEADER: &str = "step\tcase\tremoved\tspawned\tleaves\tflags";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// New interval goes after the last one (possibly as the appended half
    /// of a fork).
    Append,
    /// New interval goes before a last interval with this rank.
    InsertBefore(usize),
}

#[derive(Debug, Clone)]
enum PieceKind {
    Leaves {
        lo: Bound<Scalar>,
        hi: Bound<Scalar>,
        rule: Rule,
    },
    Spawn,
}

#[derive(Debug, Clone)]
struct Piece {
    kind: PieceKind,
    /// Rank of the last interval of every list in this piece after the step.
    ends_in: usize,
}

#[derive(Debug, Clone)]
struct Spawn {
    key: Scalar,
    delta: Scalar,
    parent: NodeId,
    source_key: Scalar,
    last: usize,
}

/// Live state of the fast solver between steps.
#[derive(Debug, Clone)]
pub struct SolverState<'a> {
    inst: &'a Instance,
    tree: BTreeMap<Scalar, Leaf>,
    shift: Scalar,
    outer: usize,
    inner: Option<usize>,
    boundary: Option<Scalar>,
    processed: usize,
    lineage: Lineage,
    created: usize,
    removed: usize,
}

/// Starts a run with the single list holding the first interval.
pub fn init_state(inst: &Instance) -> SolverState<'_> {
    assert!(!inst.is_empty(), "instance has no intervals");
    let lineage = Lineage::new();
    let mut tree = BTreeMap::new();
    tree.insert(
        inst[0].right().clone(),
        Leaf {
            delta: Scalar::ZERO,
            node: lineage.root(),
        },
    );
    SolverState {
        inst,
        tree,
        shift: Scalar::ZERO,
        outer: 0,
        inner: None,
        boundary: None,
        processed: 1,
        lineage,
        created: 1,
        removed: 0,
    }
}

fn above(key: &Scalar, lo: &Bound<Scalar>) -> bool {
    match lo {
        Unbounded => true,
        Included(b) => key >= b,
        Excluded(b) => key > b,
    }
}

fn below(key: &Scalar, hi: &Bound<Scalar>) -> bool {
    match hi {
        Unbounded => true,
        Included(b) => key <= b,
        Excluded(b) => key < b,
    }
}

impl<'a> SolverState<'a> {
    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn shift(&self) -> &Scalar {
        &self.shift
    }

    /// Rank of the last interval of lists right of the boundary (or of all
    /// lists when there is a single last interval).
    pub fn outer_last(&self) -> usize {
        self.outer
    }

    /// Rank of the last interval of lists up to the boundary.
    pub fn inner_last(&self) -> Option<usize> {
        self.inner
    }

    pub fn boundary(&self) -> Option<&Scalar> {
        self.boundary.as_ref()
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn is_done(&self) -> bool {
        self.processed == self.inst.len()
    }

    pub fn lineage(&self) -> &Lineage {
        &self.lineage
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.len()
    }

    /// Leaves created so far, including the initial one.
    pub fn created(&self) -> usize {
        self.created
    }

    pub fn removed(&self) -> usize {
        self.removed
    }

    pub fn leaves(&self) -> impl Iterator<Item = LeafRecord> + '_ {
        self.tree.iter().map(|(k, l)| LeafRecord {
            key: k.clone(),
            delta: l.delta.clone(),
            node: l.node,
        })
    }

    /// True right end of a stored key.
    pub fn true_x(&self, key: &Scalar) -> Scalar {
        key + &self.shift
    }

    /// Rightmost leaf: its max-displacement is the optimum so far.
    pub fn best(&self) -> LeafRecord {
        let (k, l) = self
            .tree
            .iter()
            .next_back()
            .expect("solver map is never empty");
        LeafRecord {
            key: k.clone(),
            delta: l.delta.clone(),
            node: l.node,
        }
    }

    /// Last interval of the list stored under `key`.
    pub fn last_of(&self, key: &Scalar) -> usize {
        match (&self.boundary, self.inner) {
            (Some(b), Some(inner)) if key <= b => inner,
            _ => self.outer,
        }
    }

    /// Overwrites the value of the leaf at `position`; for fault injection
    /// in tests of the checker.
    #[doc(hidden)]
    pub fn set_delta_at(&mut self, position: usize, delta: Scalar) {
        if let Some((_, leaf)) = self.tree.iter_mut().nth(position) {
            leaf.delta = delta;
        }
    }

    fn first_in(&self, lo: &Bound<Scalar>, hi: &Bound<Scalar>) -> Option<Scalar> {
        self.tree
            .range((lo.clone(), Unbounded))
            .next()
            .map(|(k, _)| k)
            .filter(|k| below(k, hi))
            .cloned()
    }

    fn last_in(&self, lo: &Bound<Scalar>, hi: &Bound<Scalar>) -> Option<Scalar> {
        self.tree
            .range((Unbounded, hi.clone()))
            .next_back()
            .map(|(k, _)| k)
            .filter(|k| above(k, lo))
            .cloned()
    }

    fn pred_in(&self, key: &Scalar, lo: &Bound<Scalar>) -> Option<Scalar> {
        self.tree
            .range((Unbounded, Excluded(key.clone())))
            .next_back()
            .map(|(k, _)| k)
            .filter(|k| above(k, lo))
            .cloned()
    }

    fn new_delta(&self, key: &Scalar, rule: Rule, i: usize) -> Scalar {
        let iv = &self.inst[i];
        let x = key + &self.shift;
        let old = &self.tree[key].delta;
        let grown = match rule {
            Rule::Append => {
                if &x > iv.left() {
                    &x - iv.left()
                } else {
                    Scalar::ZERO
                }
            }
            Rule::InsertBefore(r) => &(&x + iv.length()) - self.inst[r].right(),
        };
        if &grown > old {
            grown
        } else {
            old.clone()
        }
    }

    fn remove(&mut self, key: &Scalar) {
        self.tree.remove(key);
        self.removed += 1;
    }

    /// Drops leading leaves that collapse onto the new interval's left end,
    /// keeping only the last of them, re-keyed to that left end.
    fn clamp(&mut self, i: usize, removed: &mut usize) -> bool {
        let left = self.inst[i].left();
        let Some(first) = self.tree.keys().next().cloned() else {
            return false;
        };
        if &self.true_x(&first) > left {
            return false;
        }
        let mut first = first;
        loop {
            let next = self
                .tree
                .range((Excluded(first.clone()), Unbounded))
                .next()
                .map(|(k, _)| k.clone());
            match next {
                Some(k) if &self.true_x(&k) <= left => {
                    self.remove(&first);
                    *removed += 1;
                    first = k;
                }
                _ => break,
            }
        }
        let target = left - &self.shift;
        if first != target {
            let leaf = self.tree.remove(&first).expect("clamped leaf exists");
            self.tree.insert(target, leaf);
        }
        true
    }

    /// Removes the tail of a piece while its predecessor's new value is no
    /// larger, then writes the surviving tail's new value.
    fn trim(
        &mut self,
        lo: &Bound<Scalar>,
        hi: &Bound<Scalar>,
        rule: Rule,
        i: usize,
        removed: &mut usize,
    ) {
        let Some(mut tail) = self.last_in(lo, hi) else {
            return;
        };
        let mut tail_delta = self.new_delta(&tail, rule, i);
        while let Some(pred) = self.pred_in(&tail, lo) {
            let pred_delta = self.new_delta(&pred, rule, i);
            if pred_delta <= tail_delta {
                self.remove(&tail);
                *removed += 1;
                tail = pred;
                tail_delta = pred_delta;
            } else {
                break;
            }
        }
        self.tree.get_mut(&tail).expect("tail exists").delta = tail_delta;
    }

    fn pieces(&self, i: usize) -> (Subcase, Vec<Piece>) {
        let iv = &self.inst[i];
        let outer = self.outer;
        let r_outer = self.inst[outer].right();
        // Outer lists with a key below this are too far left for the new
        // interval to slide under their last interval: they fork.
        let fork_below = &(iv.left() + self.inst[outer].length()) - &self.shift;
        let leaves = |lo, hi, rule, ends_in| Piece {
            kind: PieceKind::Leaves { lo, hi, rule },
            ends_in,
        };
        let spawn = Piece {
            kind: PieceKind::Spawn,
            ends_in: outer,
        };
        match (self.inner, &self.boundary) {
            (None, _) => {
                if iv.right() >= r_outer {
                    (
                        Subcase::AppendSingle,
                        vec![leaves(Unbounded, Unbounded, Rule::Append, i)],
                    )
                } else {
                    (
                        Subcase::SplitSingle,
                        vec![
                            leaves(Unbounded, Excluded(fork_below.clone()), Rule::Append, i),
                            spawn,
                            leaves(
                                Included(fork_below),
                                Unbounded,
                                Rule::InsertBefore(outer),
                                outer,
                            ),
                        ],
                    )
                }
            }
            (Some(inner), Some(b)) => {
                if iv.right() >= r_outer {
                    (
                        Subcase::AppendPair,
                        vec![leaves(Unbounded, Unbounded, Rule::Append, i)],
                    )
                } else if iv.right() >= self.inst[inner].right() {
                    let insert_lo = if &fork_below > b {
                        Included(fork_below.clone())
                    } else {
                        Excluded(b.clone())
                    };
                    (
                        Subcase::SplitPair,
                        vec![
                            leaves(Unbounded, Included(b.clone()), Rule::Append, i),
                            leaves(
                                Excluded(b.clone()),
                                Excluded(fork_below.clone()),
                                Rule::Append,
                                i,
                            ),
                            spawn,
                            leaves(insert_lo, Unbounded, Rule::InsertBefore(outer), outer),
                        ],
                    )
                } else {
                    (
                        Subcase::InsertPair,
                        vec![
                            leaves(
                                Unbounded,
                                Included(b.clone()),
                                Rule::InsertBefore(inner),
                                inner,
                            ),
                            leaves(
                                Excluded(b.clone()),
                                Unbounded,
                                Rule::InsertBefore(outer),
                                outer,
                            ),
                        ],
                    )
                }
            }
            (Some(_), None) => unreachable!("inner last interval without a boundary"),
        }
    }

    /// Processes interval `i`, which must be the next unprocessed rank.
    pub fn process_interval(&mut self, i: usize) -> StepOutcome {
        assert_eq!(
            i, self.processed,
            "intervals must be processed in rank order"
        );
        let iv = &self.inst[i];
        let outer = self.outer;
        let (case, pieces) = self.pieces(i);
        let mut flags = StepFlags::default();
        let mut removed = 0;

        if matches!(case, Subcase::AppendSingle | Subcase::AppendPair) {
            flags.clamp = self.clamp(i, &mut removed);
        }

        // The forked list comes from the rightmost forking leaf, using its
        // value from before this step.
        let fork_piece = pieces
            .iter()
            .position(|p| matches!(p.kind, PieceKind::Spawn));
        let mut spawn = None;
        if let Some(sp) = fork_piece {
            let PieceKind::Leaves { lo, hi, .. } = &pieces[sp - 1].kind else {
                unreachable!()
            };
            if let Some(c) = self.last_in(lo, hi) {
                let leaf = &self.tree[&c];
                let reach = iv.right() - self.inst[outer].left();
                let delta = if reach > leaf.delta {
                    reach
                } else {
                    leaf.delta.clone()
                };
                let x = iv.right() + self.inst[outer].length();
                let key = &(&x - &self.shift) - iv.length();
                spawn = Some(Spawn {
                    key,
                    delta,
                    parent: leaf.node,
                    source_key: c,
                    last: outer,
                });
            }
            let has_insert = {
                let PieceKind::Leaves { lo, hi, .. } = &pieces[sp + 1].kind else {
                    unreachable!()
                };
                self.first_in(lo, hi).is_some()
            };
            flags.no_fork = spawn.is_none();
            flags.all_fork = spawn.is_some() && !has_insert;
        }

        for p in &pieces {
            if let PieceKind::Leaves { lo, hi, rule } = &p.kind {
                self.trim(lo, hi, *rule, i, &mut removed);
            }
        }

        // Merge the pieces left to right into one staircase.
        let mut present = vec![false; pieces.len()];
        let mut wiped_by: Vec<Option<usize>> = vec![None; pieces.len()];
        let mut last_kept: Option<(Scalar, Scalar, usize)> = None;
        let mut spawn_alive = spawn.is_some();
        for (p, piece) in pieces.iter().enumerate() {
            match &piece.kind {
                PieceKind::Leaves { lo, hi, .. } => {
                    present[p] = self.first_in(lo, hi).is_some();
                    while let Some(k) = self.first_in(lo, hi) {
                        let Some((lk_key, lk_delta, lk_piece)) = &last_kept else {
                            break;
                        };
                        if &self.tree[&k].delta >= lk_delta {
                            self.remove(&k);
                            removed += 1;
                            wiped_by[p] = Some(*lk_piece);
                            continue;
                        }
                        if &k == lk_key {
                            if Some(*lk_piece) == fork_piece {
                                spawn_alive = false;
                                flags.spawn_tie = true;
                            } else {
                                let key = lk_key.clone();
                                self.remove(&key);
                                removed += 1;
                            }
                        }
                        break;
                    }
                    match self.last_in(lo, hi) {
                        Some(k) => {
                            wiped_by[p] = None;
                            let d = self.tree[&k].delta.clone();
                            last_kept = Some((k, d, p));
                        }
                        None if !present[p] => wiped_by[p] = None,
                        None => {}
                    }
                }
                PieceKind::Spawn => {
                    let Some(s) = &spawn else { continue };
                    present[p] = true;
                    if let Some((_, lk_delta, lk_piece)) = &last_kept {
                        if &s.delta >= lk_delta {
                            spawn_alive = false;
                            wiped_by[p] = Some(*lk_piece);
                            continue;
                        }
                    }
                    last_kept = Some((s.key.clone(), s.delta.clone(), p));
                }
            }
        }
        // A spawn knocked out by a tie is not attributed to an earlier piece.
        if flags.spawn_tie {
            if let Some(sp) = fork_piece {
                wiped_by[sp] = None;
            }
        }

        match case {
            Subcase::SplitSingle | Subcase::SplitPair => {
                let fork = fork_piece.expect("split cases have a fork slot");
                let source = fork - 1;
                if spawn.is_some() {
                    let tail_pieces = [fork, fork + 1];
                    let tail_present = tail_pieces.iter().any(|&p| present[p]);
                    flags.outer_dropped = tail_present
                        && present[source]
                        && tail_pieces
                            .iter()
                            .all(|&p| !present[p] || wiped_by[p] == Some(source));
                }
                if case == Subcase::SplitPair {
                    let outer_pieces = [1, 2, 3];
                    let any = outer_pieces.iter().any(|&p| present[p]);
                    flags.split_outer_dropped = any
                        && outer_pieces
                            .iter()
                            .all(|&p| !present[p] || wiped_by[p] == Some(0));
                }
            }
            Subcase::InsertPair => {
                flags.insert_outer_dropped = present[1] && wiped_by[1] == Some(0);
            }
            _ => {}
        }

        // Last intervals and boundary from the surviving pieces, in order.
        let mut ends: Vec<(usize, Scalar)> = Vec::with_capacity(2);
        for piece in &pieces {
            let hi_key = match &piece.kind {
                PieceKind::Leaves { lo, hi, .. } => self.last_in(lo, hi),
                PieceKind::Spawn => spawn
                    .as_ref()
                    .filter(|_| spawn_alive)
                    .map(|s| s.key.clone()),
            };
            if let Some(k) = hi_key {
                match ends.last_mut() {
                    Some((last, key)) if *last == piece.ends_in => *key = k,
                    _ => ends.push((piece.ends_in, k)),
                }
            }
        }
        match ends.as_slice() {
            [(only, _)] => {
                self.outer = *only;
                self.inner = None;
                self.boundary = None;
            }
            [(first, b), (second, _)] => {
                self.inner = Some(*first);
                self.outer = *second;
                self.boundary = Some(b.clone());
            }
            _ => unreachable!(
                "a step leaves one or two last intervals, got {}",
                ends.len()
            ),
        }

        let mut spawned = false;
        if let Some(s) = spawn.filter(|_| spawn_alive) {
            let (append, swap) = self.lineage.record_spawn(s.parent, i, s.last);
            if let Some(leaf) = self.tree.get_mut(&s.source_key) {
                leaf.node = append;
            }
            let prev = self.tree.insert(
                s.key,
                Leaf {
                    delta: s.delta,
                    node: swap,
                },
            );
            debug_assert!(prev.is_none(), "forked list collided with a surviving key");
            self.created += 1;
            spawned = true;
        }

        self.shift = &self.shift + iv.length();
        self.processed += 1;
        StepOutcome {
            interval: i,
            case,
            removed,
            spawned,
            leaves: self.tree.len(),
            flags,
        }
    }

    /// Processes the next interval, if any.
    pub fn step(&mut self) -> Option<StepOutcome> {
        if self.is_done() {
            None
        } else {
            Some(self.process_interval(self.processed))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    /// Two neighbouring leaves share a max-displacement.
    EqualDelta { position: usize, delta: Scalar },
    /// A leaf's max-displacement exceeds its left neighbour's.
    DeltaIncreasing { position: usize },
    /// Exactly one of the inner last interval and the boundary is set.
    BoundaryMismatch,
    /// The boundary key is not a leaf.
    BoundaryMissing { key: Scalar },
    /// No list ends in the outer interval.
    NoOuterLists,
    /// The inner last interval does not come after the outer one.
    LastOrder { inner: usize, outer: usize },
    /// The inner last interval is not nested in the outer one.
    NotNested { inner: usize, outer: usize },
    /// Replaying a leaf's lineage failed.
    Replay { position: usize, error: ReplayError },
    /// A replayed list disagrees with its leaf.
    LeafMismatch {
        position: usize,
        what: &'static str,
        stored: String,
        replayed: String,
    },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use InvariantViolation::*;
        match self {
            EqualDelta { position, delta } => {
                write!(
                    f,
                    "leaves {} and {} share max-displacement {delta}",
                    position - 1,
                    position
                )
            }
            DeltaIncreasing { position } => {
                write!(f, "max-displacement does not decrease at leaf {position}")
            }
            BoundaryMismatch => {
                f.write_str("inner last interval and boundary are not set together")
            }
            BoundaryMissing { key } => write!(f, "boundary key {key} is not a leaf"),
            NoOuterLists => f.write_str("no leaf lies right of the boundary"),
            LastOrder { inner, outer } => {
                write!(f, "inner last interval {inner} precedes outer {outer}")
            }
            NotNested { inner, outer } => {
                write!(f, "interval {inner} is not nested in interval {outer}")
            }
            Replay { position, error } => write!(f, "leaf {position}: {error}"),
            LeafMismatch {
                position,
                what,
                stored,
                replayed,
            } => {
                write!(
                    f,
                    "leaf {position}: stored {what} {stored}, replayed {replayed}"
                )
            }
        }
    }
}

/// Structural checks: strictly decreasing values, a consistent boundary,
/// and at most two nested last intervals. Keys are distinct by construction.
pub fn check_invariants(state: &SolverState<'_>) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    let mut prev: Option<&Scalar> = None;
    for (position, leaf) in state.tree.values().enumerate() {
        if let Some(p) = prev {
            if &leaf.delta == p {
                out.push(InvariantViolation::EqualDelta {
                    position,
                    delta: leaf.delta.clone(),
                });
            } else if &leaf.delta > p {
                out.push(InvariantViolation::DeltaIncreasing { position });
            }
        }
        prev = Some(&leaf.delta);
    }
    match (state.inner, &state.boundary) {
        (None, None) => {}
        (Some(inner), Some(b)) => {
            if !state.tree.contains_key(b) {
                out.push(InvariantViolation::BoundaryMissing { key: b.clone() });
            }
            if state
                .tree
                .range((Excluded(b.clone()), Unbounded))
                .next()
                .is_none()
            {
                out.push(InvariantViolation::NoOuterLists);
            }
            let outer = state.outer;
            if inner <= outer {
                out.push(InvariantViolation::LastOrder { inner, outer });
            }
            if !state.inst[outer].contains(&state.inst[inner]) {
                out.push(InvariantViolation::NotNested { inner, outer });
            }
        }
        _ => out.push(InvariantViolation::BoundaryMismatch),
    }
    out
}

/// Replays every leaf's lineage and compares the rebuilt list with what the
/// leaf stores. Costs linear time per leaf.
pub fn check_lineage(state: &SolverState<'_>) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    for (position, (key, leaf)) in state.tree.iter().enumerate() {
        let r = match replay(state.inst, &state.lineage, leaf.node, state.processed) {
            Ok(r) => r,
            Err(error) => {
                out.push(InvariantViolation::Replay { position, error });
                continue;
            }
        };
        let x = state.true_x(key);
        if r.x_end != x {
            out.push(InvariantViolation::LeafMismatch {
                position,
                what: "right end",
                stored: x.to_string(),
                replayed: r.x_end.to_string(),
            });
        }
        if r.delta != leaf.delta {
            out.push(InvariantViolation::LeafMismatch {
                position,
                what: "max-displacement",
                stored: leaf.delta.to_string(),
                replayed: r.delta.to_string(),
            });
        }
        let last = state.last_of(key);
        if r.last != last {
            out.push(InvariantViolation::LeafMismatch {
                position,
                what: "last interval",
                stored: last.to_string(),
                replayed: r.last.to_string(),
            });
        }
    }
    out
}

/// Per-case and per-flag step counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub cases: [usize; 5],
    pub flags: [usize; 7],
    pub steps: usize,
    pub removed: usize,
    pub spawned: usize,
}

impl Coverage {
    pub fn record(&mut self, o: &StepOutcome) {
        self.steps += 1;
        self.removed += o.removed;
        self.spawned += usize::from(o.spawned);
        let idx = Subcase::ALL
            .iter()
            .position(|c| *c == o.case)
            .expect("known case");
        self.cases[idx] += 1;
        for (slot, on) in self.flags.iter_mut().zip(o.flags.bits()) {
            *slot += usize::from(on);
        }
    }

    pub fn merge(&mut self, other: &Coverage) {
        for (a, b) in self.cases.iter_mut().zip(other.cases) {
            *a += b;
        }
        for (a, b) in self.flags.iter_mut().zip(other.flags) {
            *a += b;
        }
        self.steps += other.steps;
        self.removed += other.removed;
        self.spawned += other.spawned;
    }

    pub fn case_count(&self, case: Subcase) -> usize {
        self.cases[Subcase::ALL
            .iter()
            .position(|c| *c == case)
            .expect("known case")]
    }

    pub fn flag_count(&self, name: &str) -> usize {
        StepFlags::NAMES
            .iter()
            .position(|n| *n == name)
            .map_or(0, |i| self.flags[i])
    }

    /// Case tags and flag names that never occurred.
    pub fn missing(&self) -> Vec<&'static str> {
        let cases = Subcase::ALL
            .iter()
            .zip(self.cases)
            .filter(|(_, n)| *n == 0)
            .map(|(c, _)| c.tag());
        let flags = StepFlags::NAMES
            .iter()
            .zip(self.flags)
            .filter(|(_, n)| *n == 0)
            .map(|(f, _)| *f);
        cases.chain(flags).collect()
    }
}

/// Result of a complete fast run.
#[derive(Debug, Clone)]
pub struct FastSolve {
    pub delta: Scalar,
    pub lineage: Lineage,
    /// Lineage leaf of the optimal list.
    pub best: NodeId,
    pub coverage: Coverage,
    pub created: usize,
}

impl FastSolve {
    /// Explicit optimal order and configuration.
    pub fn reconstruct(&self, inst: &Instance) -> Result<Solution, ReplayError> {
        reconstruct(inst, &self.lineage, self.best, &self.delta)
    }
}

/// Runs the solver, calling `observe` after every step.
pub fn solve_fast_with<F>(inst: &Instance, mut observe: F) -> FastSolve
where
    F: FnMut(&SolverState<'_>, &StepOutcome),
{
    let mut state = init_state(inst);
    let mut coverage = Coverage::default();
    while let Some(outcome) = state.step() {
        coverage.record(&outcome);
        observe(&state, &outcome);
    }
    let best = state.best();
    FastSolve {
        delta: best.delta,
        best: best.node,
        created: state.created,
        lineage: state.lineage,
        coverage,
    }
}

pub fn solve_fast(inst: &Instance) -> FastSolve {
    solve_fast_with(inst, |_, _| {})
}

/// Optimal one-direction solution via the fast solver.
pub fn solve_fast_solution(inst: &Instance) -> Solution {
    solve_fast(inst)
        .reconstruct(inst)
        .expect("fast lineage replays to its own value")
}

/// Solves and returns the trace, one line per step after a header.
pub fn solve_fast_traced(inst: &Instance) -> (FastSolve, String) {
    let mut trace = String::from(TRACE_HEADER);
    trace.push('\n');
    let solve = solve_fast_with(inst, |_, o| {
        trace.push_str(&o.trace_line());
        trace.push('\n');
    });
    (solve, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn xs(state: &SolverState<'_>) -> Vec<(Scalar, Scalar)> {
        state
            .leaves()
            .map(|l| (state.true_x(&l.key), l.delta))
            .collect()
    }

    #[test]
    fn init_examples() {
        for (pairs, x) in [
            (vec![(0, 10), (1, 3)], 10),
            (vec![(5, 7)], 7),
            (vec![(-3, -1), (0, 4)], -1),
        ] {
            let a = inst(&pairs);
            let s = init_state(&a);
            assert_eq!(xs(&s), vec![(Scalar::from(x), Scalar::from(0))]);
            assert_eq!(s.shift(), &Scalar::from(0));
            assert_eq!(s.outer_last(), 0);
            assert!(s.boundary().is_none());
            assert!(check_invariants(&s).is_empty());
        }
    }

    #[test]
    fn fork_step() {
        let a = inst(&[(0, 10), (1, 3)]);
        let mut s = init_state(&a);
        let o = s.process_interval(1);
        assert_eq!(o.case, Subcase::SplitSingle);
        assert!(o.spawned);
        assert_eq!(o.removed, 0);
        assert!(o.flags.all_fork);
        assert_eq!(xs(&s), vec![(12.into(), 9.into()), (13.into(), 3.into())]);
        assert_eq!(s.inner_last(), Some(1));
        assert_eq!(s.outer_last(), 0);
        assert_eq!(s.boundary().map(|b| s.true_x(b)), Some(12.into()));
        assert!(check_invariants(&s).is_empty());
        assert!(check_lineage(&s).is_empty());
        let b = s.lineage().branch(s.lineage().root()).unwrap();
        assert_eq!((b.interval, b.last), (1, 0));
    }

    #[test]
    fn disjoint_step_clamps() {
        let a = inst(&[(0, 1), (2, 3)]);
        let mut s = init_state(&a);
        let o = s.process_interval(1);
        assert_eq!(o.case, Subcase::AppendSingle);
        assert!(o.flags.clamp);
        assert_eq!(xs(&s), vec![(3.into(), 0.into())]);
        assert_eq!(s.outer_last(), 1);
        assert_eq!(o.removed, 0);
    }

    #[test]
    fn checker_flags_injected_tie() {
        let a = inst(&[(0, 10), (1, 3)]);
        let mut s = init_state(&a);
        s.process_interval(1);
        s.set_delta_at(1, 9.into());
        let v = check_invariants(&s);
        assert!(matches!(
            v.as_slice(),
            [InvariantViolation::EqualDelta { position: 1, .. }]
        ));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_fast(&inst(&[(0, 2), (1, 3)])).delta, Scalar::from(1));
        let a = inst(&[(0, 8), (2, 4), (3, 5)]);
        let f = solve_fast(&a);
        assert_eq!(f.delta, Scalar::from(6));
        let sol = f.reconstruct(&a).unwrap();
        assert_eq!(sol.delta, Scalar::from(6));
        let f = solve_fast(&inst(&[(0, 10), (1, 3)]));
        assert_eq!(
            f.reconstruct(&inst(&[(0, 10), (1, 3)])).unwrap().order,
            vec![1, 0]
        );
    }

    #[test]
    fn conservation_per_step() {
        let a = inst(&[
            (0, 20),
            (1, 3),
            (2, 4),
            (2, 19),
            (5, 6),
            (7, 9),
            (8, 30),
            (9, 10),
        ]);
        let mut s = init_state(&a);
        let mut before = s.leaf_count();
        while let Some(o) = s.step() {
            assert_eq!(o.leaves + o.removed, before + usize::from(o.spawned));
            before = o.leaves;
            assert!(check_invariants(&s).is_empty());
            assert!(check_lineage(&s).is_empty(), "{:?}", check_lineage(&s));
        }
        assert!(s.created() <= 2 * a.len());
    }

    #[test]
    fn trace_format() {
        let (_, trace) = solve_fast_traced(&inst(&[(0, 10), (1, 3)]));
        assert_eq!(
            trace,
            format!("{TRACE_HEADER}\n2\tsplit1\t0\t1\t2\tall-fork\n")
        );
    }
}
