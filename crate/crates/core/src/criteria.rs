//! The clique-freeness criterion, the maximal-branching criterion (level-
//! aligned and skew forms), type realization, and the finite extension-
//! property report.

use std::collections::BTreeSet;

use crate::bitseq::BitSeq;
use crate::builders::{default_enumeration_node, marked_indices, subsets_with_clique, CodedCliques};
use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeLevels};

/// Outcome of a counterexample-returning check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Checked<C> {
    Holds,
    Failed(C),
}

impl<C> Checked<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Checked::Holds)
    }

    pub fn failure(&self) -> Option<&C> {
        match self {
            Checked::Holds => None,
            Checked::Failed(c) => Some(c),
        }
    }
}

/// A node whose marked coding indices span a (k-1)-clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueViolation {
    pub node: BitSeq,
    /// Increasing coding indices (ghosts included) coding the clique.
    pub indices: Vec<i64>,
}

/// Failure modes of the maximal-branching check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KfbcFailure {
    /// The clique-freeness criterion itself fails.
    Criterion(CliqueViolation),
    /// Level-aligned form: a permitted extension of `parent` by `bit` at the
    /// length of coding node `coding_index` is absent.
    MissingExtension {
        parent: BitSeq,
        bit: bool,
        coding_index: i64,
    },
    /// Skew form: `node` (one level above a coding node) fails to branch
    /// before the next coding level although branching is permitted.
    MissingBranch { node: BitSeq, coding_index: i64 },
    /// Skew form: `node` branches although the named indices forbid it.
    ForbiddenBranch {
        node: BitSeq,
        coding_index: i64,
        indices: Vec<i64>,
    },
}

/// Whether every node's marked coding set is (k-1)-clique-free: for every
/// increasing tuple i_0 < ... < i_{k-2} whose coding nodes code a
/// (k-1)-clique, no node carries bit 1 at all of their lengths.
pub fn satisfies_kfree_criterion(tree: &CodingTree) -> Checked<CliqueViolation> {
    let k = tree.k();
    let cliques = CodedCliques::new(tree);
    for t in tree.nodes().iter_nodes() {
        let marked = marked_indices(tree, t);
        if marked.len() < k - 1 {
            continue;
        }
        if let Some(tuple) = find_clique_subset(&cliques, &marked, k - 1) {
            return Checked::Failed(CliqueViolation {
                node: t.clone(),
                indices: tuple,
            });
        }
    }
    Checked::Holds
}

/// First `size`-subset of `candidates` (in lexicographic position order)
/// coding a clique, if any.
fn find_clique_subset(
    cliques: &CodedCliques<'_>,
    candidates: &[i64],
    size: usize,
) -> Option<Vec<i64>> {
    fn rec(
        cliques: &CodedCliques<'_>,
        candidates: &[i64],
        chosen: &mut Vec<i64>,
        size: usize,
        from: usize,
    ) -> Option<Vec<i64>> {
        if chosen.len() == size {
            if cliques.codes_clique(chosen) {
                return Some(chosen.clone());
            }
            return None;
        }
        for i in from..candidates.len() {
            chosen.push(candidates[i]);
            if let Some(found) = rec(cliques, candidates, chosen, size, from.max(i) + 1) {
                chosen.pop();
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
    rec(cliques, candidates, &mut Vec::new(), size, 0)
}

/// Maximal-branching check, dispatching on the tree's skew flag.
pub fn satisfies_kfbc(tree: &CodingTree) -> Checked<KfbcFailure> {
    if tree.is_skew() {
        satisfies_kfbc_skew(tree)
    } else {
        satisfies_kfbc_level_aligned(tree)
    }
}

/// Level-aligned form: at each coding node's length, every non-maximal node
/// has its 0-extension, and has its 1-extension exactly when no marked
/// (k-1)-clique pattern through that coding node forbids it.
pub fn satisfies_kfbc_level_aligned(tree: &CodingTree) -> Checked<KfbcFailure> {
    if let Checked::Failed(v) = satisfies_kfree_criterion(tree) {
        return Checked::Failed(KfbcFailure::Criterion(v));
    }
    let k = tree.k();
    let cliques = CodedCliques::new(tree);
    let Some(top) = tree.nodes().max_len() else {
        return Checked::Holds;
    };
    for (n, c) in tree.coding_entries(true) {
        let l = c.len();
        if l >= top {
            continue;
        }
        for t in tree.nodes().level_set(l) {
            if !tree.nodes().contains_prefix(&t.child(false)) {
                return Checked::Failed(KfbcFailure::MissingExtension {
                    parent: t.clone(),
                    bit: false,
                    coding_index: n,
                });
            }
            let neighbors: Vec<i64> = marked_indices(tree, t)
                .into_iter()
                .filter(|&i| cliques.adjacent(i, n))
                .collect();
            let allowed = !subsets_with_clique(&cliques, &neighbors, k - 2, n);
            let present = tree.nodes().contains_prefix(&t.child(true));
            if allowed && !present {
                return Checked::Failed(KfbcFailure::MissingExtension {
                    parent: t.clone(),
                    bit: true,
                    coding_index: n,
                });
            }
            // A present-but-forbidden 1-extension marks the clique itself
            // and is already caught by the criterion check above.
        }
    }
    Checked::Holds
}

/// Splitting nodes computed level pair by level pair: a node at one level
/// splits exactly when its extensions at the next level carry both bits at
/// its length (valid for restriction-closed level structures).
fn splitting_frontier(nodes: &NodeLevels) -> Vec<BitSeq> {
    let mut out = Vec::new();
    for rank in 0..nodes.height().saturating_sub(1) {
        let (&l, _) = nodes.level_set_at_rank(rank);
        let (_, above) = nodes.level_set_at_rank(rank + 1);
        let mut current: Option<(BitSeq, [bool; 2])> = None;
        for e in above {
            let parent = e.restrict(l);
            let bit = e.bit(l) as usize;
            let same = current.as_ref().is_some_and(|(p, _)| *p == parent);
            if same {
                if let Some((_, seen)) = current.as_mut() {
                    seen[bit] = true;
                }
            } else {
                if let Some((p, [true, true])) = current.take() {
                    out.push(p);
                }
                let mut seen = [false, false];
                seen[bit] = true;
                current = Some((parent, seen));
            }
        }
        if let Some((p, [true, true])) = current.take() {
            out.push(p);
        }
    }
    out
}

/// Skew form: for consecutive coding nodes c_n, c_{n+1} and u the initial
/// segment of c_{n+1} one level past c_n, each node w one level past c_n
/// branches before the level of c_{n+1} exactly when every (k-2)-subset I of
/// [-k+2, n] whose coding nodes code a (k-2)-clique marked by u has some
/// member not marked by w.
pub fn satisfies_kfbc_skew(tree: &CodingTree) -> Checked<KfbcFailure> {
    if let Checked::Failed(v) = satisfies_kfree_criterion(tree) {
        return Checked::Failed(KfbcFailure::Criterion(v));
    }
    let k = tree.k();
    let cliques = CodedCliques::new(tree);
    let splitters = splitting_frontier(tree.nodes());
    let entries: Vec<(i64, &BitSeq)> = tree.coding_entries(true).collect();
    for pair in entries.windows(2) {
        let (n, c_n) = pair[0];
        let (next, c_next) = pair[1];
        if c_next.len() <= c_n.len() {
            continue;
        }
        let u = c_next.restrict(c_n.len() + 1);
        // Indices i <= n marked by u, restricted to actual coding entries.
        let u_marked: Vec<i64> = entries
            .iter()
            .take_while(|(i, _)| *i <= n)
            .filter(|(_, c)| c.len() < u.len() && u.bit(c.len()))
            .map(|(i, _)| *i)
            .collect();
        // Forbidding sets: (k-2)-subsets of u_marked coding (k-2)-cliques.
        let mut forbidding: Vec<Vec<i64>> = Vec::new();
        collect_clique_subsets(&cliques, &u_marked, k - 2, &mut forbidding);
        for w in tree.nodes().level_set(c_n.len() + 1) {
            let violated: Option<&Vec<i64>> = forbidding
                .iter()
                .find(|set| set.iter().all(|&i| marked_by(tree, w, i)));
            let should_branch = violated.is_none();
            let does_branch = splitters
                .iter()
                .any(|s| s.len() < c_next.len() && w.is_prefix_of(s));
            match (should_branch, does_branch) {
                (true, false) => {
                    return Checked::Failed(KfbcFailure::MissingBranch {
                        node: w.clone(),
                        coding_index: next,
                    })
                }
                (false, true) => {
                    let mut indices = violated.unwrap().clone();
                    indices.push(next);
                    return Checked::Failed(KfbcFailure::ForbiddenBranch {
                        node: w.clone(),
                        coding_index: next,
                        indices,
                    });
                }
                _ => {}
            }
        }
    }
    Checked::Holds
}

fn marked_by(tree: &CodingTree, w: &BitSeq, index: i64) -> bool {
    tree.coding_node(index)
        .map(|c| c.len() < w.len() && w.bit(c.len()))
        .unwrap_or(false)
}

fn collect_clique_subsets(
    cliques: &CodedCliques<'_>,
    candidates: &[i64],
    size: usize,
    out: &mut Vec<Vec<i64>>,
) {
    fn rec(
        cliques: &CodedCliques<'_>,
        candidates: &[i64],
        chosen: &mut Vec<i64>,
        size: usize,
        from: usize,
        out: &mut Vec<Vec<i64>>,
    ) {
        if chosen.len() == size {
            if cliques.codes_clique(chosen) {
                out.push(chosen.clone());
            }
            return;
        }
        for i in from..candidates.len() {
            chosen.push(candidates[i]);
            rec(cliques, candidates, chosen, size, i + 1, out);
            chosen.pop();
        }
    }
    rec(cliques, candidates, &mut Vec::new(), size, 0, out);
}

/// The maximal node realizing the 1-type `F` over the graph coded by the
/// first N-1 coding nodes: bit 1 at the length of coding node n exactly for
/// n in `F`.  Free positions (ghost lengths and intermediate levels) are
/// resolved leftmost, making the output deterministic.
pub fn realize_type(tree: &CodingTree, type_set: &BTreeSet<usize>) -> Result<BitSeq> {
    let n_coding = tree.coding_count();
    if n_coding == 0 {
        return Err(Error::EmptyInput("tree has no coding nodes".into()));
    }
    for &n in type_set {
        if n + 1 >= n_coding {
            return Err(Error::OutOfRange(format!(
                "type index {n} out of range for {n_coding} coding nodes"
            )));
        }
    }
    let top = tree
        .coding_len(n_coding as i64 - 1)
        .ok_or_else(|| Error::NotFound("last coding node missing".into()))?;
    if tree.nodes().max_len() != Some(top) {
        return Err(Error::Precondition(
            "maximal nodes must sit at the last coding node's length".into(),
        ));
    }
    let cliques = CodedCliques::new(tree);
    let indices: Vec<i64> = type_set.iter().map(|&n| n as i64).collect();
    if tree.k() >= 3 && indices.len() >= tree.k() - 1 {
        if let Some(tuple) = find_clique_subset(&cliques, &indices, tree.k() - 1) {
            return Err(Error::Precondition(format!(
                "type set codes a {}-clique at indices {tuple:?}",
                tree.k() - 1
            )));
        }
    }
    let lengths: Vec<(usize, bool)> = (0..n_coding - 1)
        .map(|n| {
            let l = tree.coding_len(n as i64).expect("coding length");
            (l, type_set.contains(&n))
        })
        .collect();
    tree.nodes()
        .level_set(top)
        .iter()
        .find(|t| lengths.iter().all(|&(l, want)| t.bit(l) == want))
        .cloned()
        .ok_or_else(|| {
            Error::NotFound("no maximal node realizes the requested type".into())
        })
}

/// One requested 1-type in the extension-property report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeRequest {
    /// The requested neighborhood among earlier vertices.
    pub type_set: Vec<usize>,
    /// Coding index at which the default schedule first proposes it.
    pub scheduled_at: i64,
    /// Least coding index realizing it within the horizon, if any.
    pub realized_by: Option<i64>,
}

/// Report of the finite extension-property scan.
#[derive(Clone, Debug)]
pub struct AkTreeReport {
    /// Clause (i): the clique-freeness criterion.
    pub criterion: Checked<CliqueViolation>,
    /// Clause (ii), finitized: schedule-derived clique-free types and their
    /// realizers (exact marker pattern below the node's forced tail).
    pub requests: Vec<TypeRequest>,
    /// Minimal nodes with no coding node above them — where coding-node
    /// density fails so far.
    pub uncovered: Vec<BitSeq>,
}

impl AkTreeReport {
    /// Whether clause (i) holds; unrealized requests and uncovered nodes are
    /// warnings, not failures.
    pub fn passes_criterion(&self) -> bool {
        self.criterion.holds()
    }

    pub fn unrealized(&self) -> impl Iterator<Item = &TypeRequest> {
        self.requests.iter().filter(|r| r.realized_by.is_none())
    }
}

/// Whether coding node `c_m` (index `m`) realizes exactly the neighborhood
/// `type_set` among vertices below its forced tail of ones: bit 1 at the
/// length of coding node j, for j in [0, m-k+2), exactly when j is in the
/// set.
pub fn coding_node_realizes(tree: &CodingTree, m: i64, type_set: &BTreeSet<usize>) -> bool {
    let k = tree.k() as i64;
    let Some(c) = tree.coding_node(m) else {
        return false;
    };
    if let Some(&max) = type_set.iter().max() {
        if (max as i64) >= m - k + 2 {
            return false;
        }
    }
    for j in 0..(m - k + 2).max(0) {
        let Some(l) = tree.coding_len(j) else {
            return false;
        };
        if l >= c.len() {
            return false;
        }
        if c.bit(l) != type_set.contains(&(j as usize)) {
            return false;
        }
    }
    true
}

/// Finite extension-property scan: clause (i) in full, clause (ii) and
/// coding-node density restricted to levels at most `horizon`.
pub fn check_ak_tree(tree: &CodingTree, horizon: usize) -> AkTreeReport {
    let criterion = satisfies_kfree_criterion(tree);
    let k = tree.k();
    let cliques = CodedCliques::new(tree);
    let max_index = tree.max_coding_index().unwrap_or(-1);

    // Requests: marker patterns of the scheduled enumeration nodes whose
    // schedule falls inside the horizon and whose coding nodes are
    // (k-1)-clique-free.
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut requests: Vec<TypeRequest> = Vec::new();
    let mut i = 0usize;
    loop {
        let n = (i * (k - 1)) as i64;
        if n > max_index {
            break;
        }
        let within = tree
            .coding_len(n)
            .map(|l| l <= horizon)
            .unwrap_or(false);
        if within {
            let u = default_enumeration_node(i);
            if tree.nodes().contains_prefix(&u) {
                let type_set: Vec<usize> = tree
                    .coding_entries(false)
                    .filter(|(_, c)| c.len() < u.len() && u.bit(c.len()))
                    .map(|(j, _)| j as usize)
                    .collect();
                let indices: Vec<i64> = type_set.iter().map(|&j| j as i64).collect();
                let clique_free = indices.len() < k - 1
                    || find_clique_subset(&cliques, &indices, k - 1).is_none();
                if clique_free && seen.insert(type_set.clone()) {
                    let as_set: BTreeSet<usize> = type_set.iter().copied().collect();
                    let realized_by = (0..=max_index)
                        .filter(|&m| {
                            tree.coding_len(m).map(|l| l <= horizon).unwrap_or(false)
                        })
                        .find(|&m| coding_node_realizes(tree, m, &as_set));
                    requests.push(TypeRequest {
                        type_set,
                        scheduled_at: n,
                        realized_by,
                    });
                }
            }
        }
        i += 1;
    }

    // Density: minimal nodes with no coding extension, within the horizon.
    let coding: Vec<&BitSeq> = tree.coding_entries(true).map(|(_, c)| c).collect();
    let mut uncovered: Vec<BitSeq> = Vec::new();
    for t in tree.nodes().iter_nodes() {
        if t.len() > horizon {
            continue;
        }
        let covered = coding.iter().any(|c| t.is_prefix_of(c));
        if !covered {
            let parent_covered = t.is_empty() || {
                let p = t.restrict(t.len() - 1);
                coding.iter().any(|c| p.is_prefix_of(c))
            };
            if parent_covered {
                uncovered.push(t.clone());
            }
        }
    }

    AkTreeReport {
        criterion,
        requests,
        uncovered,
    }
}
