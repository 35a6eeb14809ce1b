//! Level-structured trees of bit sequences with indexed coding nodes.
//!
//! A tree here is a finite set of nodes organized into level sets, one per
//! length in its level list, closed under meets and under restriction to
//! level lengths.  Coding trees additionally carry a clique-forbidding
//! parameter `k` and an indexed family of coding nodes, where negative
//! indices address the ghost coding nodes below the zeroth one.

use std::collections::BTreeSet;

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

/// A finite node set organized by level: `sets[i]` holds the nodes of length
/// `levels[i]`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeLevels {
    levels: Vec<usize>,
    sets: Vec<Vec<BitSeq>>,
}

impl NodeLevels {
    /// Groups nodes by length.  The level list is the set of distinct
    /// lengths present, in increasing order.
    pub fn from_nodes<I: IntoIterator<Item = BitSeq>>(nodes: I) -> Self {
        let mut by_len: BTreeSet<BitSeq> = BTreeSet::new();
        let mut lengths: BTreeSet<usize> = BTreeSet::new();
        for n in nodes {
            lengths.insert(n.len());
            by_len.insert(n);
        }
        let levels: Vec<usize> = lengths.into_iter().collect();
        let mut sets: Vec<Vec<BitSeq>> = vec![Vec::new(); levels.len()];
        for n in by_len {
            let i = levels.binary_search(&n.len()).unwrap();
            sets[i].push(n);
        }
        NodeLevels { levels, sets }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Number of levels.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Total node count over all levels.
    pub fn node_count(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// Greatest length present, if any.
    pub fn max_len(&self) -> Option<usize> {
        self.levels.last().copied()
    }

    /// The level set at exactly length `l`, empty if `l` is not a level.
    pub fn level_set(&self, l: usize) -> &[BitSeq] {
        match self.levels.binary_search(&l) {
            Ok(i) => &self.sets[i],
            Err(_) => &[],
        }
    }

    /// The `i`-th level set in level order.
    pub fn level_set_at_rank(&self, i: usize) -> (&usize, &[BitSeq]) {
        (&self.levels[i], &self.sets[i])
    }

    /// Nodes of the top level.
    pub fn top_level(&self) -> &[BitSeq] {
        self.sets.last().map(|s| s.as_slice()).unwrap_or(&[])
    }

    /// All nodes, bottom level first, each level lexicographically sorted.
    pub fn iter_nodes(&self) -> impl Iterator<Item = &BitSeq> {
        self.sets.iter().flatten()
    }

    /// Exact membership at the node's own length.
    pub fn contains(&self, x: &BitSeq) -> bool {
        match self.levels.binary_search(&x.len()) {
            Ok(i) => self.sets[i].binary_search(x).is_ok(),
            Err(_) => false,
        }
    }

    /// Whether `x` is an initial segment of some node (membership in the
    /// downward closure, the hat of the tree).  By restriction-closure any
    /// extension of `x` is visible at the first level at or above its
    /// length, and extensions sit contiguously in lexicographic order, so a
    /// binary search of that one level decides.
    pub fn contains_prefix(&self, x: &BitSeq) -> bool {
        let start = self.levels.partition_point(|&l| l < x.len());
        let Some(set) = self.sets.get(start) else {
            return false;
        };
        set.binary_search_by(|n| n.restrict(x.len()).cmp(x)).is_ok()
    }

    /// The cross-section at an arbitrary length `l`: restrictions to `l` of
    /// all nodes at levels `>= l`, deduplicated and sorted.
    pub fn cross_section(&self, l: usize) -> Vec<BitSeq> {
        let start = self.levels.partition_point(|&x| x < l);
        let mut out: BTreeSet<BitSeq> = BTreeSet::new();
        for set in &self.sets[start..] {
            for n in set {
                out.insert(n.restrict(l));
            }
        }
        out.into_iter().collect()
    }

    /// Whether `s` has extensions with both continuation bits among higher
    /// nodes — the splitting-node test.  Since the structure is
    /// restriction-closed (see [`NodeLevels::check_closed`]), every strand
    /// through `s` is visible at the first level above `s` holding any
    /// extension of it, so the scan stops there.
    pub fn splits(&self, s: &BitSeq) -> bool {
        let l = s.len();
        let start = self.levels.partition_point(|&x| x <= l);
        for set in &self.sets[start..] {
            let mut seen = [false, false];
            let mut any = false;
            for n in set {
                if s.is_prefix_of(n) {
                    any = true;
                    seen[n.bit(l) as usize] = true;
                    if seen[0] && seen[1] {
                        return true;
                    }
                }
            }
            if any {
                return false;
            }
        }
        false
    }

    /// All splitting nodes, sorted by (length, lex).
    pub fn splitting_nodes(&self) -> Vec<BitSeq> {
        let mut out = Vec::new();
        for set in &self.sets {
            for n in set {
                if self.splits(n) {
                    out.push(n.clone());
                }
            }
        }
        out
    }

    /// Restriction of the structure to levels strictly below `cutoff_len`,
    /// keeping only initial segments of surviving nodes.
    pub fn truncate_below(&self, cutoff_len: usize) -> NodeLevels {
        let keep = self.levels.partition_point(|&l| l <= cutoff_len);
        NodeLevels {
            levels: self.levels[..keep].to_vec(),
            sets: self.sets[..keep].to_vec(),
        }
    }

    /// Checks meet-closure and restriction-closure; returns a description of
    /// the first violation.  Quadratic; intended for tests and validation.
    pub fn check_closed(&self) -> std::result::Result<(), String> {
        let all: Vec<&BitSeq> = self.iter_nodes().collect();
        for (i, s) in all.iter().enumerate() {
            for t in &all[i + 1..] {
                let m = s.meet(t);
                if m != **s && m != **t && !self.contains(&m) {
                    return Err(format!("meet {m:?} of {s:?} and {t:?} missing"));
                }
            }
        }
        for s in &all {
            for &l in &self.levels {
                if l < s.len() && !self.contains(&s.restrict(l)) {
                    return Err(format!("restriction of {s:?} to {l} missing"));
                }
            }
        }
        Ok(())
    }
}

/// Kind of a critical node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    /// A coding node with its index (negative for ghosts).  A coding node
    /// that also branches (only the root of the skew trees does) is
    /// classified as coding.
    Coding(i64),
    Splitting,
}

/// A critical node: a splitting node or a (ghost) coding node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalNode {
    pub len: usize,
    pub kind: CriticalKind,
    pub node: BitSeq,
}

/// A level-structured tree with indexed coding nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingTree {
    k: usize,
    nodes: NodeLevels,
    /// (index, node) with strictly increasing indices; ghosts occupy
    /// [-k+2, -1].
    coding: Vec<(i64, BitSeq)>,
    skew: bool,
}

impl CodingTree {
    /// Assembles a coding tree and validates the basic shape: coding
    /// indices strictly increasing, coding lengths strictly increasing with
    /// index, every coding node a member, ghosts within [-k+2, -1].
    pub fn new(
        k: usize,
        nodes: NodeLevels,
        coding: Vec<(i64, BitSeq)>,
        skew: bool,
    ) -> Result<CodingTree> {
        if k < 3 {
            return Err(Error::Precondition(format!(
                "clique-forbidding parameter must be at least 3, got {k}"
            )));
        }
        for w in coding.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Precondition(
                    "coding indices must strictly increase".into(),
                ));
            }
            if w[1].1.len() <= w[0].1.len() {
                return Err(Error::Precondition(
                    "coding lengths must strictly increase with index".into(),
                ));
            }
        }
        for (n, c) in &coding {
            if *n < -(k as i64) + 2 {
                return Err(Error::Precondition(format!(
                    "coding index {n} below ghost range [-{}, -1]",
                    k - 2
                )));
            }
            if !nodes.contains(c) {
                return Err(Error::Membership(format!(
                    "coding node {c:?} (index {n}) is not in the node set"
                )));
            }
        }
        Ok(CodingTree {
            k,
            nodes,
            coding,
            skew,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &NodeLevels {
        &self.nodes
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    /// Coding entries in index order, ghosts included or not.
    pub fn coding_entries(&self, include_ghosts: bool) -> impl Iterator<Item = (i64, &BitSeq)> {
        self.coding
            .iter()
            .filter(move |(n, _)| include_ghosts || *n >= 0)
            .map(|(n, c)| (*n, c))
    }

    /// The coding node with index `n` (ghosts at negative indices).
    pub fn coding_node(&self, n: i64) -> Option<&BitSeq> {
        self.coding
            .binary_search_by_key(&n, |(i, _)| *i)
            .ok()
            .map(|i| &self.coding[i].1)
    }

    /// Length of coding node `n`.
    pub fn coding_len(&self, n: i64) -> Option<usize> {
        self.coding_node(n).map(|c| c.len())
    }

    /// Number of non-ghost coding nodes.
    pub fn coding_count(&self) -> usize {
        self.coding.iter().filter(|(n, _)| *n >= 0).count()
    }

    /// Smallest coding index present (the lowest ghost, for the built trees).
    pub fn min_coding_index(&self) -> Option<i64> {
        self.coding.first().map(|(n, _)| *n)
    }

    /// Largest coding index present.
    pub fn max_coding_index(&self) -> Option<i64> {
        self.coding.last().map(|(n, _)| *n)
    }

    /// The coding index whose node has length `l`, if any.
    pub fn coding_index_at_len(&self, l: usize) -> Option<i64> {
        self.coding
            .iter()
            .find(|(_, c)| c.len() == l)
            .map(|(n, _)| *n)
    }

    /// The interval a length falls in: the least coding index `n` with
    /// `l <= |c_n|`, or one past the last coding index if `l` lies above
    /// every coding node.
    pub fn interval_of_len(&self, l: usize) -> i64 {
        for (n, c) in &self.coding {
            if l <= c.len() {
                return *n;
            }
        }
        self.coding.last().map(|(n, _)| *n + 1).unwrap_or(0)
    }

    /// Critical nodes in length order: the designated coding node of a level
    /// if there is one, and every splitting node.  A node that is both (the
    /// root of the skew trees) appears once, classified as coding.  One
    /// sweep over the level above marks both continuation bits per node, so
    /// the whole listing costs one restriction per node of the tree.
    pub fn critical_nodes(&self) -> Vec<CriticalNode> {
        let mut out = Vec::new();
        for (i, (&l, set)) in self
            .nodes
            .levels
            .iter()
            .zip(&self.nodes.sets)
            .enumerate()
        {
            let coding_here: Vec<(i64, &BitSeq)> = self
                .coding
                .iter()
                .filter(|(_, c)| c.len() == l)
                .map(|(n, c)| (*n, c))
                .collect();
            let mut bits = vec![[false, false]; set.len()];
            if let Some(above) = self.nodes.sets.get(i + 1) {
                for n in above {
                    let r = n.restrict(l);
                    if let Ok(j) = set.binary_search(&r) {
                        bits[j][n.bit(l) as usize] = true;
                    }
                }
            }
            for (j, n) in set.iter().enumerate() {
                let as_coding = coding_here.iter().find(|(_, c)| *c == n);
                if let Some((idx, _)) = as_coding {
                    out.push(CriticalNode {
                        len: l,
                        kind: CriticalKind::Coding(*idx),
                        node: n.clone(),
                    });
                } else if bits[j][0] && bits[j][1] {
                    out.push(CriticalNode {
                        len: l,
                        kind: CriticalKind::Splitting,
                        node: n.clone(),
                    });
                }
            }
        }
        out
    }

    /// Whether every level holds exactly one critical node.
    pub fn one_critical_per_level(&self) -> bool {
        let crit = self.critical_nodes();
        if crit.len() != self.nodes.height() {
            return false;
        }
        crit.iter()
            .zip(self.nodes.levels.iter())
            .all(|(c, &l)| c.len == l)
    }

    /// Whether every node passing by (not extending) a splitting node
    /// carries bit 0 at its level.
    pub fn is_strongly_skew(&self) -> bool {
        for s in self.nodes.splitting_nodes() {
            let l = s.len();
            let start = self.nodes.levels.partition_point(|&x| x <= l);
            for set in &self.nodes.sets[start..] {
                for t in set {
                    if !s.is_prefix_of(t) && t.bit(l) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether, within each interval between consecutive coding-node
    /// lengths, splitting-node lengths increase as lex order decreases.
    pub fn is_regular(&self) -> bool {
        let splitting = self.nodes.splitting_nodes();
        let mut bounds: Vec<usize> = self.coding.iter().map(|(_, c)| c.len()).collect();
        bounds.sort_unstable();
        // Group splitting nodes by interval, then compare adjacent pairs.
        let interval = |l: usize| bounds.partition_point(|&b| b < l);
        let mut by_interval: Vec<(usize, &BitSeq)> =
            splitting.iter().map(|s| (interval(s.len()), s)).collect();
        by_interval.sort_by_key(|(iv, s)| (*iv, s.len()));
        for w in by_interval.windows(2) {
            let ((iv0, s0), (iv1, s1)) = (&w[0], &w[1]);
            if iv0 == iv1 && s0.len() < s1.len() && *s0 < *s1 {
                return false;
            }
        }
        true
    }

    /// The subtree of the first `m` levels (a front of the level structure).
    pub fn first_levels(&self, m: usize) -> CodingTree {
        let m = m.min(self.nodes.height());
        let nodes = NodeLevels {
            levels: self.nodes.levels[..m].to_vec(),
            sets: self.nodes.sets[..m].to_vec(),
        };
        let cutoff = nodes.max_len().map(|l| l + 1).unwrap_or(0);
        let coding = self
            .coding
            .iter()
            .filter(|(_, c)| c.len() < cutoff)
            .cloned()
            .collect();
        CodingTree {
            k: self.k,
            nodes,
            coding,
            skew: self.skew,
        }
    }
}

/// Closes a finite node set under pairwise meets and under restriction of
/// members to the lengths of meet-closure elements.
pub fn meet_closure_tree<I: IntoIterator<Item = BitSeq>>(input: I) -> Result<NodeLevels> {
    let members: Vec<BitSeq> = input.into_iter().collect();
    if members.is_empty() {
        return Err(Error::EmptyInput("meet closure of an empty set".into()));
    }
    let mut closure: BTreeSet<BitSeq> = members.iter().cloned().collect();
    for (i, s) in members.iter().enumerate() {
        for t in &members[i + 1..] {
            closure.insert(s.meet(t));
        }
    }
    let lengths: BTreeSet<usize> = closure.iter().map(|x| x.len()).collect();
    let mut nodes: BTreeSet<BitSeq> = closure;
    for x in &members {
        for &l in lengths.range(..=x.len()) {
            nodes.insert(x.restrict(l));
        }
    }
    Ok(NodeLevels::from_nodes(nodes))
}

/// The bit of `t` at length `l`: the passing number of `t` at a node of
/// length `l`.
pub fn passing_number(t: &BitSeq, l: usize) -> Result<bool> {
    if l >= t.len() {
        return Err(Error::OutOfRange(format!(
            "passing number at {l} needs a node longer than {l}, got length {}",
            t.len()
        )));
    }
    Ok(t.bit(l))
}

/// The longest proper initial segment of `x` that is a splitting node of the
/// tree.
pub fn split_predecessor(tree: &NodeLevels, x: &BitSeq) -> Result<BitSeq> {
    if !tree.contains_prefix(x) {
        return Err(Error::Membership(format!(
            "{x:?} is not an initial segment of any tree node"
        )));
    }
    for l in (0..x.len()).rev() {
        let s = x.restrict(l);
        if tree.splits(&s) {
            return Ok(s);
        }
    }
    Err(Error::NotFound(format!(
        "no initial segment of {x:?} splits in the tree"
    )))
}

/// The initial segment of `w` below its first 1.
pub fn stem_point(w: &BitSeq) -> Result<BitSeq> {
    match w.first_one() {
        Some(l) => Ok(w.restrict(l)),
        None => Err(Error::NotFound(
            "stem point needs a sequence containing a 1".into(),
        )),
    }
}
