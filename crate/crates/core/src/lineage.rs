//! Branch tree recording which candidate lists took the swapped order at a
//! Case-III step, and the replay that turns a tree leaf back into an
//! explicit order and configuration.
//!
//! Only branching steps are recorded. Every other step of a list is fully
//! determined by the list's last interval and its position, so replay
//! re-derives it.

use thiserror::Error;

use crate::model::{Configuration, Instance, Solution};
use crate::scalar::Scalar;

/// Handle to a node of a [`Lineage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// How a child continues its parent's list at the branching step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// The new interval goes after the previous last one: pair `(m, i)`.
    Append,
    /// The new interval goes before the previous last one: pair `(i, m)`.
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    /// Rank of the interval whose arrival split the list.
    pub interval: usize,
    /// Rank of the list's last interval just before the split.
    pub last: usize,
    pub append_child: NodeId,
    pub swap_child: NodeId,
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<(NodeId, Edge)>,
    branch: Option<Branch>,
}

#[derive(Debug, Clone)]
pub struct Lineage {
    nodes: Vec<Node>,
}

impl Default for Lineage {
    fn default() -> Self {
        Lineage::new()
    }
}

impl Lineage {
    /// A tree holding just the root leaf.
    pub fn new() -> Lineage {
        Lineage {
            nodes: vec![Node {
                parent: None,
                branch: None,
            }],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn branch(&self, node: NodeId) -> Option<&Branch> {
        self.nodes[node.index()].branch.as_ref()
    }

    pub fn parent(&self, node: NodeId) -> Option<(NodeId, Edge)> {
        self.nodes[node.index()].parent
    }

    /// Splits the leaf `parent` at interval `interval` whose list ended in
    /// `last`, returning the `(append, swap)` children.
    ///
    /// Panics if `parent` already branched.
    pub fn record_spawn(
        &mut self,
        parent: NodeId,
        interval: usize,
        last: usize,
    ) -> (NodeId, NodeId) {
        assert!(
            self.nodes[parent.index()].branch.is_none(),
            "lineage node {} already branched",
            parent.index()
        );
        let append_child = self.push(Node {
            parent: Some((parent, Edge::Append)),
            branch: None,
        });
        let swap_child = self.push(Node {
            parent: Some((parent, Edge::Swap)),
            branch: None,
        });
        self.nodes[parent.index()].branch = Some(Branch {
            interval,
            last,
            append_child,
            swap_child,
        });
        (append_child, swap_child)
    }

    fn push(&mut self, node: Node) -> NodeId {
        let id = u32::try_from(self.nodes.len()).expect("lineage node count exceeds u32");
        self.nodes.push(node);
        NodeId(id)
    }

    /// Branch points from the root down to `leaf`, each with the edge taken.
    pub fn path(&self, leaf: NodeId) -> Vec<(Branch, Edge)> {
        let mut path = Vec::new();
        let mut cur = leaf;
        while let Some((parent, edge)) = self.parent(cur) {
            let branch = self.nodes[parent.index()]
                .branch
                .expect("parent of a node has a branch");
            path.push((branch, edge));
            cur = parent;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("branch at interval {branch} lies before step {step} of the replay")]
    BranchSkipped { branch: usize, step: usize },
    #[error("branch at interval {branch} was never reached within {processed} intervals")]
    BranchUnused { branch: usize, processed: usize },
    #[error("branch at interval {interval} is not a swap step (last interval {last})")]
    NotASwapStep { interval: usize, last: usize },
    #[error("branch at interval {interval} expected last interval {expected}, found {found}")]
    LastMismatch {
        interval: usize,
        expected: usize,
        found: usize,
    },
    #[error("replayed max-displacement {replayed} differs from the solver's {expected}")]
    DeltaMismatch { replayed: Scalar, expected: Scalar },
    #[error("cannot replay {requested} intervals of an instance with {n}")]
    TooManyIntervals { requested: usize, n: usize },
}

/// An explicit candidate list rebuilt from the branch tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replayed {
    pub order: Vec<usize>,
    pub config: Configuration,
    pub delta: Scalar,
    pub last: usize,
    /// Right end of the last interval.
    pub x_end: Scalar,
}

/// Rebuilds the list ending at `leaf` over the first `upto` intervals.
///
/// Runs in time linear in `upto`.
pub fn replay(
    inst: &Instance,
    lineage: &Lineage,
    leaf: NodeId,
    upto: usize,
) -> Result<Replayed, ReplayError> {
    let n = inst.len();
    if upto == 0 || upto > n {
        return Err(ReplayError::TooManyIntervals { requested: upto, n });
    }
    let path = lineage.path(leaf);
    let mut next = path.iter().peekable();

    let mut config = Configuration::new(n);
    // The order is `body` followed by `last`; every insertion touches only
    // the tail, so the body is a plain stack.
    let mut body: Vec<usize> = Vec::with_capacity(upto);
    let mut last = 0;
    let mut last_pos = inst[0].left().clone();
    let mut before_last_end: Option<Scalar> = None;
    let mut delta = Scalar::ZERO;
    config.set(0, last_pos.clone());

    for i in 1..upto {
        let iv = &inst[i];
        let last_end = &last_pos + inst[last].length();
        let swap_step = iv.right() < inst[last].right() && iv.left() > &last_pos;
        let insert_before = if let Some((branch, edge)) = next.peek() {
            if branch.interval < i {
                return Err(ReplayError::BranchSkipped {
                    branch: branch.interval,
                    step: i,
                });
            }
            if branch.interval == i {
                if !swap_step {
                    return Err(ReplayError::NotASwapStep { interval: i, last });
                }
                if branch.last != last {
                    return Err(ReplayError::LastMismatch {
                        interval: i,
                        expected: branch.last,
                        found: last,
                    });
                }
                let swap = *edge == Edge::Swap;
                next.next();
                swap
            } else {
                !swap_step && iv.right() < inst[last].right()
            }
        } else {
            !swap_step && iv.right() < inst[last].right()
        };

        if insert_before {
            let pos = match &before_last_end {
                Some(e) if e > iv.left() => e.clone(),
                _ => iv.left().clone(),
            };
            let end = &pos + iv.length();
            delta = delta.max(&pos - iv.left());
            config.set(i, pos);
            last_pos = if &end > inst[last].left() {
                end.clone()
            } else {
                inst[last].left().clone()
            };
            delta = delta.max(&last_pos - inst[last].left());
            config.set(last, last_pos.clone());
            before_last_end = Some(end);
            body.push(i);
        } else {
            let pos = if &last_end > iv.left() {
                last_end.clone()
            } else {
                iv.left().clone()
            };
            delta = delta.max(&pos - iv.left());
            config.set(i, pos.clone());
            body.push(last);
            last = i;
            last_pos = pos;
            before_last_end = Some(last_end);
        }
    }
    if let Some((branch, _)) = next.next() {
        return Err(ReplayError::BranchUnused {
            branch: branch.interval,
            processed: upto,
        });
    }
    body.push(last);
    let x_end = &last_pos + inst[last].length();
    Ok(Replayed {
        order: body,
        config,
        delta,
        last,
        x_end,
    })
}

/// Replays a full-length list and checks it against the solver's value.
pub fn reconstruct(
    inst: &Instance,
    lineage: &Lineage,
    leaf: NodeId,
    expected: &Scalar,
) -> Result<Solution, ReplayError> {
    let r = replay(inst, lineage, leaf, inst.len())?;
    if &r.delta != expected {
        return Err(ReplayError::DeltaMismatch {
            replayed: r.delta,
            expected: expected.clone(),
        });
    }
    Ok(Solution {
        delta: r.delta,
        order: r.order,
        config: r.config,
        direction: crate::model::Direction::One,
    })
}
