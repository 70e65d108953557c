//! Finite event trees: situations, precedence, cuts and paths.
//!
//! Nodes are stored in depth-first preorder, so the situations following `t`
//! form the contiguous index range `t..t + size(t)` and the terminals through
//! `t` form a contiguous range of the terminal list. Most queries reduce to
//! range arithmetic on those two facts.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Stable, human-readable label of a situation (path-encoded by convention,
/// e.g. `"h,t"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SituationId(pub String);

impl fmt::Display for SituationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SituationId {
    fn from(s: &str) -> Self {
        SituationId(s.to_owned())
    }
}

/// Index of a situation inside one [`EventTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

/// Parsed but unvalidated tree: a root and parent → ordered children edges.
#[derive(Debug, Clone, Default)]
pub struct TreeDescription {
    pub root: String,
    pub edges: Vec<(String, Vec<String>)>,
    pub depth_bound: Option<usize>,
}

impl TreeDescription {
    pub fn new(root: impl Into<String>) -> Self {
        Self {
            root: root.into(),
            ..Self::default()
        }
    }

    pub fn node<I, T>(mut self, parent: impl Into<String>, children: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        self.edges
            .push((parent.into(), children.into_iter().map(Into::into).collect()));
        self
    }

    pub fn with_depth_bound(mut self, bound: usize) -> Self {
        self.depth_bound = Some(bound);
        self
    }
}

/// Immutable finite event tree.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTree {
    labels: Vec<SituationId>,
    index: HashMap<String, NodeId>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<usize>,
    subtree_len: Vec<usize>,
    terminals: Vec<NodeId>,
    terminal_range: Vec<Range<usize>>,
    depth_bound: usize,
}

/// A cut of `base`: situations following `base` such that every path through
/// `base` goes through exactly one of them. Members are kept in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    base: NodeId,
    members: Vec<NodeId>,
}

impl Cut {
    pub fn base(&self) -> NodeId {
        self.base
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn member_labels<'a>(&'a self, tree: &'a EventTree) -> impl Iterator<Item = &'a str> + 'a {
        self.members.iter().map(move |&m| tree.label(m))
    }
}

impl EventTree {
    /// Validates a description and builds the tree.
    pub fn build(desc: &TreeDescription) -> Result<Self> {
        let mut edges: HashMap<&str, &[String]> = HashMap::new();
        for (parent, kids) in &desc.edges {
            if edges.insert(parent.as_str(), kids.as_slice()).is_some() {
                return Err(Error::DuplicateId(parent.clone()));
            }
        }

        let mut labels = Vec::new();
        let mut parent_of = Vec::new();
        let mut depth = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut on_stack: HashSet<&str> = HashSet::new();

        // Iterative preorder DFS; frames are (node, next child position).
        index.insert(desc.root.clone(), NodeId(0));
        labels.push(SituationId(desc.root.clone()));
        parent_of.push(None);
        depth.push(0);
        on_stack.insert(desc.root.as_str());
        let mut stack: Vec<(NodeId, &str, usize)> = vec![(NodeId(0), desc.root.as_str(), 0)];

        while let Some(top) = stack.last_mut() {
            let (node, label, next) = *top;
            let kids = edges.get(label).copied().unwrap_or(&[]);
            if kids.len() == 1 {
                return Err(Error::SingletonMoveSpace(label.to_owned()));
            }
            if next == kids.len() {
                on_stack.remove(label);
                stack.pop();
                continue;
            }
            top.2 += 1;
            let child = kids[next].as_str();
            if on_stack.contains(child) {
                return Err(Error::Cycle(child.to_owned()));
            }
            if index.contains_key(child) {
                return Err(Error::DuplicateId(child.to_owned()));
            }
            let id = NodeId(labels.len());
            index.insert(child.to_owned(), id);
            labels.push(SituationId(child.to_owned()));
            parent_of.push(Some(node));
            depth.push(depth[node.0] + 1);
            on_stack.insert(child);
            stack.push((id, child, 0));
        }

        for (parent, _) in &desc.edges {
            if !index.contains_key(parent.as_str()) {
                return Err(Error::Disconnected(parent.clone()));
            }
        }

        let n = labels.len();
        let mut children = vec![Vec::new(); n];
        for (i, label) in labels.iter().enumerate() {
            if let Some(kids) = edges.get(label.0.as_str()) {
                children[i] = kids.iter().map(|k| index[k.as_str()]).collect();
            }
        }

        let mut subtree_len = vec![1usize; n];
        for i in (1..n).rev() {
            let p = parent_of[i].expect("non-root has a parent").0;
            subtree_len[p] += subtree_len[i];
        }

        let mut terminals = Vec::new();
        let mut first_terminal = vec![0usize; n];
        for i in 0..n {
            first_terminal[i] = terminals.len();
            if children[i].is_empty() {
                terminals.push(NodeId(i));
            }
        }
        let terminal_range = (0..n)
            .map(|i| {
                let end = if i + subtree_len[i] < n {
                    first_terminal[i + subtree_len[i]]
                } else {
                    terminals.len()
                };
                first_terminal[i]..end
            })
            .collect();

        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let depth_bound = match desc.depth_bound {
            Some(bound) if max_depth > bound => {
                return Err(Error::DepthExceeded {
                    depth: max_depth,
                    bound,
                })
            }
            Some(bound) => bound,
            None => max_depth,
        };

        Ok(Self {
            labels,
            index,
            parent: parent_of,
            children,
            depth,
            subtree_len,
            terminals,
            terminal_range,
            depth_bound,
        })
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    /// Resolves a label.
    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownId(label.to_owned()))
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.0].0
    }

    pub fn situation(&self, node: NodeId) -> &SituationId {
        &self.labels[node.0]
    }

    pub fn nodes(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node.0]
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node.0]
    }

    pub fn child_labels(&self, node: NodeId) -> Vec<String> {
        self.children[node.0]
            .iter()
            .map(|&c| self.label(c).to_owned())
            .collect()
    }

    pub fn is_terminal(&self, node: NodeId) -> bool {
        self.children[node.0].is_empty()
    }

    pub fn depth(&self, node: NodeId) -> usize {
        self.depth[node.0]
    }

    /// All terminal situations (the sample space), in preorder.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn terminal_labels(&self) -> Vec<String> {
        self.terminals
            .iter()
            .map(|&t| self.label(t).to_owned())
            .collect()
    }

    /// Non-terminal situations following `node` (inclusive), in preorder.
    pub fn non_terminals_from(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.subtree(node).filter(|&s| !self.is_terminal(s))
    }

    /// Every situation following `node`, itself included, in preorder.
    pub fn subtree(&self, node: NodeId) -> impl DoubleEndedIterator<Item = NodeId> {
        (node.0..node.0 + self.subtree_len[node.0]).map(NodeId)
    }

    pub fn subtree_len(&self, node: NodeId) -> usize {
        self.subtree_len[node.0]
    }

    /// Positions in [`Self::terminals`] of the paths through `node`.
    pub fn terminal_range(&self, node: NodeId) -> Range<usize> {
        self.terminal_range[node.0].clone()
    }

    /// Index-level precedence: `s ⊑ t`.
    pub fn precedes_node(&self, s: NodeId, t: NodeId) -> bool {
        s.0 <= t.0 && t.0 < s.0 + self.subtree_len[s.0]
    }

    /// The child of `ancestor` on the way to `descendant`. Requires
    /// `ancestor ⊏ descendant` strictly.
    pub fn child_towards(&self, ancestor: NodeId, descendant: NodeId) -> NodeId {
        debug_assert!(ancestor != descendant && self.precedes_node(ancestor, descendant));
        let kids = &self.children[ancestor.0];
        // Children occupy consecutive preorder ranges.
        let pos = kids.partition_point(|&c| c.0 <= descendant.0) - 1;
        kids[pos]
    }

    /// Position of `child` among the children of its parent.
    pub fn child_position(&self, child: NodeId) -> usize {
        let p = self.parent[child.0].expect("root has no position");
        self.children[p.0]
            .iter()
            .position(|&c| c == child)
            .expect("child listed under its parent")
    }

    /// True iff `s` lies on the root path of `t` (reflexive).
    pub fn precedes(&self, s: &str, t: &str) -> Result<bool> {
        Ok(self.precedes_node(self.node(s)?, self.node(t)?))
    }

    /// Number of arcs from `t` down to `s`.
    pub fn distance(&self, t: &str, s: &str) -> Result<usize> {
        self.distance_nodes(self.node(t)?, self.node(s)?)
    }

    pub fn distance_nodes(&self, t: NodeId, s: NodeId) -> Result<usize> {
        if !self.precedes_node(t, s) {
            return Err(Error::NotADescendant {
                from: self.label(t).to_owned(),
                to: self.label(s).to_owned(),
            });
        }
        Ok(self.depth[s.0] - self.depth[t.0])
    }

    /// Terminal situations through `t`.
    pub fn paths_through(&self, t: &str) -> Result<Vec<SituationId>> {
        let node = self.node(t)?;
        Ok(self.terminals[self.terminal_range(node)]
            .iter()
            .map(|&w| self.labels[w.0].clone())
            .collect())
    }

    /// Checks that `{↑u : u ∈ members}` partitions `↑base`.
    pub fn validate_cut<S: AsRef<str>>(&self, base: &str, members: &[S]) -> Result<Cut> {
        let base = self.node(base)?;
        let members = members
            .iter()
            .map(|m| self.node(m.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.cut_from_nodes(base, members)
    }

    pub fn cut_from_nodes(&self, base: NodeId, mut members: Vec<NodeId>) -> Result<Cut> {
        members.sort_unstable();
        let base_range = self.terminal_range(base);
        let mut covered = base_range.start;
        for (i, &m) in members.iter().enumerate() {
            if i > 0 && members[i - 1] == m {
                return Err(Error::NotAPartition(format!(
                    "`{}` listed twice",
                    self.label(m)
                )));
            }
            if !self.precedes_node(base, m) {
                return Err(Error::NotAPartition(format!(
                    "`{}` does not follow `{}`",
                    self.label(m),
                    self.label(base)
                )));
            }
            let r = self.terminal_range(m);
            if r.start < covered {
                return Err(Error::NotAPartition(format!(
                    "paths through `{}` are covered twice",
                    self.label(m)
                )));
            }
            if r.start > covered {
                return Err(Error::NotAPartition(format!(
                    "path `{}` misses every member",
                    self.label(self.terminals[covered])
                )));
            }
            covered = r.end;
        }
        if covered < base_range.end {
            return Err(Error::NotAPartition(format!(
                "path `{}` misses every member",
                self.label(self.terminals[covered])
            )));
        }
        Ok(Cut { base, members })
    }

    /// The cut made of the children of `t`.
    pub fn children_cut(&self, t: &str) -> Result<Cut> {
        self.children_cut_node(self.node(t)?)
    }

    pub fn children_cut_node(&self, t: NodeId) -> Result<Cut> {
        if self.is_terminal(t) {
            return Err(Error::TerminalSituation(self.label(t).to_owned()));
        }
        Ok(Cut {
            base: t,
            members: self.children[t.0].clone(),
        })
    }

    /// The trivial cut `{t}` of `t`.
    pub fn trivial_cut(&self, t: NodeId) -> Cut {
        Cut {
            base: t,
            members: vec![t],
        }
    }

    /// The cut of `t` made of all terminals through `t`.
    pub fn terminal_cut(&self, t: NodeId) -> Cut {
        Cut {
            base: t,
            members: self.terminals[self.terminal_range(t)].to_vec(),
        }
    }

    /// Situations following `t` at exactly `k` arcs, plus terminals reached
    /// earlier. Always a cut of `t`.
    pub fn level_cut(&self, t: NodeId, k: usize) -> Cut {
        let target = self.depth(t) + k;
        let members = self
            .subtree(t)
            .filter(|&s| {
                self.depth(s) == target || (self.depth(s) < target && self.is_terminal(s))
            })
            .collect();
        Cut { base: t, members }
    }

    /// The member of `cut` through which the path `omega` goes.
    pub fn cut_member_for(&self, cut: &Cut, omega: NodeId) -> Option<NodeId> {
        let pos = cut.members.partition_point(|&m| m.0 <= omega.0);
        let m = *cut.members.get(pos.checked_sub(1)?)?;
        self.precedes_node(m, omega).then_some(m)
    }

    /// Whether `s` lies strictly before the cut (`s ⊏ u` for some member).
    pub fn strictly_before_cut(&self, cut: &Cut, s: NodeId) -> bool {
        self.precedes_node(cut.base, s)
            && !cut
                .members
                .iter()
                .any(|&m| self.precedes_node(m, s))
    }

    /// Number of distinct cuts of `t`: `1 + Π_children count` for a
    /// non-terminal, 1 for a terminal.
    pub fn cut_count(&self, t: NodeId) -> u128 {
        let mut counts = vec![1u128; self.subtree_len(t)];
        for s in self.subtree(t).rev() {
            let kids = &self.children[s.0];
            if !kids.is_empty() {
                let product = kids
                    .iter()
                    .fold(1u128, |acc, c| acc.saturating_mul(counts[c.0 - t.0]));
                counts[s.0 - t.0] = product.saturating_add(1);
            }
        }
        counts[0]
    }

    /// Every cut of `t`, or `None` when there are more than `limit`.
    pub fn all_cuts(&self, t: NodeId, limit: usize) -> Option<Vec<Cut>> {
        if self.cut_count(t) > limit as u128 {
            return None;
        }
        let members = self.cut_members(t);
        Some(
            members
                .into_iter()
                .map(|members| Cut { base: t, members })
                .collect(),
        )
    }

    fn cut_members(&self, s: NodeId) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![s]];
        let kids = &self.children[s.0];
        if kids.is_empty() {
            return out;
        }
        // Cartesian product of the children's cuts, concatenated in child
        // order, which keeps members in preorder.
        let mut combos: Vec<Vec<NodeId>> = vec![Vec::new()];
        for &c in kids {
            let sub = self.cut_members(c);
            combos = combos
                .iter()
                .flat_map(|prefix| {
                    sub.iter().map(move |tail| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(tail);
                        v
                    })
                })
                .collect();
        }
        out.extend(combos);
        out
    }
}
