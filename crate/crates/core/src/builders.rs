//! Deterministic construction of the strong k-clique-free trees and their
//! skew counterparts.
//!
//! `build_sk` grows a maximally branching tree whose nodes carry bit 1 at a
//! coding length only when that keeps the marked coding nodes free of a
//! (k-1)-clique; coding nodes are designated level by level, ghosts first.
//! `build_tk` stretches that tree into its strongly skew, regular version:
//! every level holds exactly one critical node, the m-th critical node has
//! length m, and the lex-preserving level bijection back to the unskewed
//! tree preserves passing numbers, so both trees code the same graph.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeLevels};

/// The enumeration `u_0, u_1, ...` steering which earlier node each
/// multiple-of-(k-1) coding node extends.
#[derive(Clone, Debug)]
pub enum NodeEnumeration {
    /// All bit sequences, length-major, descending lexicographic within a
    /// length: u_0 = ⟨⟩, u_1 = ⟨1⟩, u_2 = ⟨0⟩, u_3 = ⟨1,1⟩, ...
    Default,
    /// An explicit prefix of the enumeration; entries beyond the table fall
    /// back to their default values.
    Table(Vec<BitSeq>),
}

impl NodeEnumeration {
    /// Validates a table: lengths non-decreasing and `|u_i| <= i`.
    pub fn table(entries: Vec<BitSeq>) -> Result<NodeEnumeration> {
        for (i, u) in entries.iter().enumerate() {
            if u.len() > i {
                return Err(Error::Precondition(format!(
                    "enumeration entry {i} has length {} > {i}",
                    u.len()
                )));
            }
            if i > 0 && entries[i - 1].len() > u.len() {
                return Err(Error::Precondition(
                    "enumeration lengths must be non-decreasing".into(),
                ));
            }
        }
        Ok(NodeEnumeration::Table(entries))
    }

    /// The i-th node of the enumeration.
    pub fn node(&self, i: usize) -> BitSeq {
        if let NodeEnumeration::Table(entries) = self {
            if let Some(u) = entries.get(i) {
                return u.clone();
            }
        }
        default_enumeration_node(i)
    }
}

/// The default enumeration: block of length L occupies indices
/// [2^L - 1, 2^(L+1) - 1), descending lexicographically within the block.
pub fn default_enumeration_node(i: usize) -> BitSeq {
    let mut len = 0usize;
    while (1usize << (len + 1)) - 1 <= i {
        len += 1;
    }
    let rank = i - ((1 << len) - 1);
    let value = ((1usize << len) - 1 - rank) as u64;
    BitSeq::from_bits((0..len).map(|b| (value >> (len - 1 - b)) & 1 == 1))
}

/// Rule choosing each non-ghost coding node within its level set.
#[derive(Clone, Debug, Default)]
pub enum CodingSelector {
    /// The closed formula: extend the scheduled enumeration node (when it is
    /// a member) by zeros and the forced tail of ones.
    #[default]
    Default,
    /// Explicit overrides by coding index; other indices use the default.
    /// Each override must lie in its level set and end in 1^(k-2).
    Replay(BTreeMap<i64, BitSeq>),
}

/// Memoized clique relation over a tree's coding nodes, by index set.
pub struct CodedCliques<'t> {
    tree: &'t CodingTree,
    memo: RefCell<HashMap<Vec<i64>, bool>>,
}

impl<'t> CodedCliques<'t> {
    pub fn new(tree: &'t CodingTree) -> Self {
        CodedCliques {
            tree,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Whether coding nodes i and j (distinct indices) code an edge.
    pub fn adjacent(&self, i: i64, j: i64) -> bool {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let (Some(a), Some(b)) = (self.tree.coding_node(lo), self.tree.coding_node(hi)) else {
            return false;
        };
        b.bit(a.len())
    }

    /// Whether the coding nodes at `indices` (distinct, any order) code a
    /// clique.
    pub fn codes_clique(&self, indices: &[i64]) -> bool {
        let mut key: Vec<i64> = indices.to_vec();
        key.sort_unstable();
        if let Some(&hit) = self.memo.borrow().get(&key) {
            return hit;
        }
        let mut ok = true;
        'outer: for a in 0..key.len() {
            for b in (a + 1)..key.len() {
                if !self.adjacent(key[a], key[b]) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        self.memo.borrow_mut().insert(key, ok);
        ok
    }
}

/// The marked coding indices of a node: every index (ghosts included) whose
/// coding length is below the node's length and carries bit 1.
pub fn marked_indices(tree: &CodingTree, t: &BitSeq) -> Vec<i64> {
    tree.coding_entries(true)
        .filter(|(_, c)| c.len() < t.len() && t.bit(c.len()))
        .map(|(n, _)| n)
        .collect()
}

/// Whether some `size`-subset of `candidates` together with `extra` codes a
/// clique (callers pass candidates already known adjacent to `extra`).
pub(crate) fn subsets_with_clique(
    cliques: &CodedCliques<'_>,
    candidates: &[i64],
    size: usize,
    extra: i64,
) -> bool {
    fn rec(
        cliques: &CodedCliques<'_>,
        candidates: &[i64],
        chosen: &mut Vec<i64>,
        size: usize,
        extra: i64,
        from: usize,
    ) -> bool {
        if chosen.len() == size {
            let mut all = chosen.clone();
            all.push(extra);
            return cliques.codes_clique(&all);
        }
        for i in from..candidates.len() {
            chosen.push(candidates[i]);
            if rec(cliques, candidates, chosen, size, extra, i + 1) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
        false
    }
    if size == 0 {
        return true;
    }
    rec(cliques, candidates, &mut Vec::new(), size, extra, 0)
}

/// Builds the strong k-clique-free tree to `n_coding` coding nodes (plus its
/// k-2 ghost coding nodes), with levels through the last coding node's
/// length.
pub fn build_sk(
    k: usize,
    n_coding: usize,
    enumeration: &NodeEnumeration,
    selector: &CodingSelector,
) -> Result<CodingTree> {
    if k < 3 {
        return Err(Error::Precondition(format!("k must be at least 3, got {k}")));
    }
    if n_coding < 1 {
        return Err(Error::Precondition(
            "at least one coding node must be requested".into(),
        ));
    }
    let mut levels: Vec<Vec<BitSeq>> = vec![vec![BitSeq::new()]];
    let mut coding: Vec<(i64, BitSeq)> = Vec::new();
    for n in (-(k as i64) + 2)..(n_coding as i64) {
        let l = (n + k as i64 - 2) as usize;
        let level = &levels[l];
        // Designate c_n.
        let c = if n < 0 {
            BitSeq::ones(l)
        } else {
            choose_coding_node(k, n, level, enumeration, selector)?
        };
        if level.binary_search(&c).is_err() {
            return Err(Error::Membership(format!(
                "selected coding node {c:?} (index {n}) is not in its level set"
            )));
        }
        if n >= 0 && !(1..=(k - 2)).all(|i| c.bit(l - i)) {
            return Err(Error::Precondition(format!(
                "selected coding node {c:?} does not end in {} ones",
                k - 2
            )));
        }
        coding.push((n, c));
        if n == n_coding as i64 - 1 {
            break;
        }
        // Grow the next level: 0-extensions always, 1-extensions unless the
        // marked set would span a (k-1)-clique through the new index n.
        let snapshot = CodingTree::new(
            k,
            NodeLevels::from_nodes(levels.iter().flatten().cloned()),
            coding.clone(),
            false,
        )?;
        let cliques = CodedCliques::new(&snapshot);
        let mut next = Vec::new();
        for t in &levels[l] {
            next.push(t.child(false));
            let lifted = t.child(true);
            let allowed = if k == 3 {
                // A 2-clique through n is a single marked neighbor of v_n.
                !marked_indices(&snapshot, &lifted)
                    .iter()
                    .any(|&i| i != n && cliques.adjacent(i, n))
            } else {
                let marked: Vec<i64> = marked_indices(&snapshot, &lifted)
                    .into_iter()
                    .filter(|&i| i != n && cliques.adjacent(i, n))
                    .collect();
                !subsets_with_clique(&cliques, &marked, k - 2, n)
            };
            if allowed {
                next.push(lifted);
            }
        }
        next.sort();
        levels.push(next);
    }
    CodingTree::new(
        k,
        NodeLevels::from_nodes(levels.iter().flatten().cloned()),
        coding,
        false,
    )
}

fn choose_coding_node(
    k: usize,
    n: i64,
    level: &[BitSeq],
    enumeration: &NodeEnumeration,
    selector: &CodingSelector,
) -> Result<BitSeq> {
    if let CodingSelector::Replay(map) = selector {
        if let Some(c) = map.get(&n) {
            return Ok(c.clone());
        }
    }
    let n = n as usize;
    let scheduled = if n % (k - 1) == 0 {
        let u = enumeration.node(n / (k - 1));
        level.iter().any(|t| u.is_prefix_of(t)).then_some(u)
    } else {
        None
    };
    let stem = match scheduled {
        // The enumerated node must itself be a member (it is a prefix of a
        // level node).
        Some(u) => u,
        None => BitSeq::new(),
    };
    let mut c = stem.clone();
    c.extend_zeros(n - stem.len());
    Ok(c.concat(&BitSeq::ones(k - 2)))
}

/// Builds the strongly skew, regular counterpart to `n_coding` coding nodes
/// (plus ghosts); levels run through the last coding node's length, and the
/// m-th critical node has length m.
pub fn build_tk(
    k: usize,
    n_coding: usize,
    enumeration: &NodeEnumeration,
    selector: &CodingSelector,
) -> Result<CodingTree> {
    if n_coding < 1 {
        return Err(Error::Precondition(
            "at least one coding node must be requested".into(),
        ));
    }
    let sk = build_sk(k, n_coding + 1, enumeration, selector)?;
    let s_level = |l: usize| sk.nodes().level_set(l);

    // Base: the root is the lowest ghost coding node and splits.
    let mut levels: Vec<Vec<BitSeq>> = vec![
        vec![BitSeq::new()],
        vec![BitSeq::zeros(1), BitSeq::ones(1)],
    ];
    let mut coding: Vec<(i64, BitSeq)> = vec![(-(k as i64) + 2, BitSeq::new())];
    // Strands at the current top level, paired with their unskewed partners.
    let mut strands: Vec<(BitSeq, BitSeq)> = levels[1]
        .iter()
        .cloned()
        .zip(s_level(1).iter().cloned())
        .collect();
    let mut m_n = 0usize;

    for n in (-(k as i64) + 2)..(n_coding as i64 - 1) {
        let s_here = (n + k as i64 - 1) as usize; // partners live in this level
        let s_next = s_here + 1;
        let next_level = s_level(s_next);
        // Splitters of the partner level, in reverse lex order, receive
        // splitting lengths m_n+1, m_n+2, ...
        let splitters: Vec<BitSeq> = s_level(s_here)
            .iter()
            .rev()
            .filter(|s| next_level.binary_search(&s.child(true)).is_ok())
            .cloned()
            .collect();
        let m_next = m_n + splitters.len() + 1;
        // Grow one length at a time; the strand partnered with the j-th
        // splitter forks when the level of length j+1 is built.
        for new_len in (m_n + 2)..=m_next {
            let forking = splitters.get(new_len - m_n - 2);
            let mut grown: Vec<(BitSeq, BitSeq)> = Vec::with_capacity(strands.len() + 1);
            for (t, partner) in &strands {
                if Some(partner) == forking {
                    grown.push((t.child(false), partner.child(false)));
                    grown.push((t.child(true), partner.child(true)));
                } else {
                    grown.push((t.child(false), partner.clone()));
                }
            }
            strands = grown;
            levels.push(strands.iter().map(|(t, _)| t.clone()).collect());
        }
        // Partners of non-forked strands advance by their unique 0-child.
        for (_, partner) in &mut strands {
            if partner.len() == s_here {
                partner.push(false);
            }
        }
        debug_assert!(strands.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(strands.windows(2).all(|w| w[0].1 < w[1].1));
        // Designate the next coding node: the strand whose partner is the
        // leftmost successor of the unskewed coding node.
        let s_coding = sk
            .coding_node(n + 1)
            .ok_or_else(|| Error::NotFound(format!("unskewed coding node {} missing", n + 1)))?
            .child(false);
        let c_next = strands
            .iter()
            .find(|(_, partner)| *partner == s_coding)
            .map(|(t, _)| t.clone())
            .ok_or_else(|| {
                Error::NotFound(format!("no strand partnered with {s_coding:?}"))
            })?;
        coding.push((n + 1, c_next));
        m_n = m_next;
        if n + 1 == n_coding as i64 - 1 {
            break;
        }
        // Echo level: each strand repeats the bit its partner just gained.
        for (t, partner) in &mut strands {
            t.push(partner.bit(partner.len() - 1));
        }
        levels.push(strands.iter().map(|(t, _)| t.clone()).collect());
    }

    CodingTree::new(
        k,
        NodeLevels::from_nodes(levels.into_iter().flatten()),
        coding,
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::decode_graph;
    use crate::tree::CriticalKind;

    fn seq(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    fn seqs(xs: &[&str]) -> Vec<BitSeq> {
        xs.iter().map(|s| seq(s)).collect()
    }

    fn default_sk(k: usize, n: usize) -> CodingTree {
        build_sk(k, n, &NodeEnumeration::Default, &CodingSelector::Default).unwrap()
    }

    fn default_tk(k: usize, n: usize) -> CodingTree {
        build_tk(k, n, &NodeEnumeration::Default, &CodingSelector::Default).unwrap()
    }

    #[test]
    fn default_enumeration_prefix() {
        let want = ["", "1", "0", "11", "10", "01", "00", "111", "110"];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(default_enumeration_node(i), seq(w), "u_{i}");
        }
        for i in 0..200 {
            assert!(default_enumeration_node(i).len() <= i);
        }
        for i in 1..200 {
            assert!(default_enumeration_node(i - 1).len() <= default_enumeration_node(i).len());
        }
        assert!(NodeEnumeration::table(seqs(&["", "11"])).is_err());
        assert!(NodeEnumeration::table(seqs(&["", "1", "0", ""])).is_err());
        assert!(NodeEnumeration::table(seqs(&["", "1", "0", "10"])).is_ok());
    }

    #[test]
    fn small_tree_coding_nodes_match_the_worked_example() {
        let t = default_sk(3, 9);
        assert_eq!(t.coding_node(-1), Some(&BitSeq::new()));
        let expect = [
            "1", "01", "101", "0001", "00001", "000001", "0000001", "00000001", "100000001",
        ];
        for (n, w) in expect.iter().enumerate() {
            assert_eq!(t.coding_node(n as i64), Some(&seq(w)), "c_{n}");
        }
    }

    #[test]
    fn small_tree_levels_and_widths() {
        let t = default_sk(3, 9);
        // Width profile computed independently from the marker predicate.
        let widths = [1, 2, 3, 5, 7, 12, 19, 31, 50, 81];
        for (l, w) in widths.iter().enumerate() {
            assert_eq!(t.nodes().level_set(l).len(), *w, "width at level {l}");
        }
        assert_eq!(t.nodes().level_set(2), seqs(&["00", "01", "10"]).as_slice());
        assert_eq!(
            t.nodes().level_set(4),
            seqs(&["0000", "0001", "0010", "0100", "0101", "1000", "1010"]).as_slice()
        );
        assert_eq!(
            t.nodes().level_set(5),
            seqs(&[
                "00000", "00001", "00010", "00100", "00101", "01000", "01001", "01010",
                "10000", "10001", "10100", "10101"
            ])
            .as_slice()
        );
    }

    #[test]
    fn four_clique_free_tree_matches_the_worked_example() {
        let t = default_sk(4, 7);
        assert_eq!(t.coding_node(-2), Some(&BitSeq::new()));
        assert_eq!(t.coding_node(-1), Some(&seq("1")));
        let expect = ["11", "011", "0011", "10011", "000011", "0000011", "00000011"];
        for (n, w) in expect.iter().enumerate() {
            assert_eq!(t.coding_node(n as i64), Some(&seq(w)), "c_{n}");
        }
        let widths = [1, 2, 4, 7, 13, 24, 44, 81, 149];
        for (l, w) in widths.iter().enumerate() {
            assert_eq!(t.nodes().level_set(l).len(), *w, "width at level {l}");
        }
        // Level 3 omits exactly the all-ones node (a marked triangle).
        assert_eq!(
            t.nodes().level_set(3),
            seqs(&["000", "001", "010", "011", "100", "101", "110"]).as_slice()
        );
    }

    #[test]
    fn coding_nodes_never_split() {
        for t in [default_sk(3, 8), default_sk(4, 6)] {
            for (n, c) in t.coding_entries(false) {
                assert!(!t.nodes().splits(c), "coding node {n} splits");
            }
        }
    }

    #[test]
    fn replay_selector_reproduces_figure_choices() {
        let sel3 = CodingSelector::Replay(BTreeMap::from([
            (4, seq("01001")),
            (6, seq("1010101")),
        ]));
        let t3 = build_sk(3, 8, &NodeEnumeration::Default, &sel3).unwrap();
        assert_eq!(t3.coding_node(2), Some(&seq("101")));
        assert_eq!(t3.coding_node(4), Some(&seq("01001")));
        assert_eq!(t3.coding_node(6), Some(&seq("1010101")));

        let sel4 = CodingSelector::Replay(BTreeMap::from([
            (3, seq("11011")),
            (6, seq("01100011")),
        ]));
        let t4 = build_sk(4, 7, &NodeEnumeration::Default, &sel4).unwrap();
        assert_eq!(t4.coding_node(3), Some(&seq("11011")));
        assert_eq!(t4.coding_node(6), Some(&seq("01100011")));

        // A node outside the level set is rejected: ⟨1,1⟩ is not in the
        // 3-clique-free tree.
        let bad = CodingSelector::Replay(BTreeMap::from([(2, seq("111"))]));
        assert!(matches!(
            build_sk(3, 4, &NodeEnumeration::Default, &bad),
            Err(Error::Membership(_))
        ));
        // A member that does not end in ones is rejected.
        let bad_tail = CodingSelector::Replay(BTreeMap::from([(2, seq("100"))]));
        assert!(matches!(
            build_sk(3, 4, &NodeEnumeration::Default, &bad_tail),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn preconditions() {
        assert!(build_sk(2, 3, &NodeEnumeration::Default, &CodingSelector::Default).is_err());
        assert!(build_sk(3, 0, &NodeEnumeration::Default, &CodingSelector::Default).is_err());
        assert!(build_tk(3, 0, &NodeEnumeration::Default, &CodingSelector::Default).is_err());
    }

    #[test]
    fn skew_tree_critical_structure() {
        let t = default_tk(3, 4);
        // Critical lengths: the m-th critical node has length m, one per
        // level.
        assert!(t.one_critical_per_level());
        let crit = t.critical_nodes();
        for (m, c) in crit.iter().enumerate() {
            assert_eq!(c.len, m);
        }
        assert!(t.is_strongly_skew());
        assert!(t.is_regular());

        // Hand-verified critical nodes of the first intervals.
        assert_eq!(crit[0].node, BitSeq::new());
        assert_eq!(crit[0].kind, CriticalKind::Coding(-1));
        assert_eq!(crit[1].node, seq("0"));
        assert_eq!(crit[1].kind, CriticalKind::Splitting);
        assert_eq!(crit[2].node, seq("10"));
        assert_eq!(crit[2].kind, CriticalKind::Coding(0));
        assert_eq!(crit[3].node, seq("100"));
        assert_eq!(crit[3].kind, CriticalKind::Splitting);
        assert_eq!(crit[4].node, seq("0000"));
        assert_eq!(crit[4].kind, CriticalKind::Splitting);
        assert_eq!(crit[5].node, seq("01100"));
        assert_eq!(crit[5].kind, CriticalKind::Coding(1));
    }

    #[test]
    fn skew_tree_levels_match_hand_computation() {
        let t = default_tk(3, 4);
        assert_eq!(t.coding_node(-1), Some(&BitSeq::new()));
        assert_eq!(t.coding_node(0), Some(&seq("10")));
        assert_eq!(t.coding_node(1), Some(&seq("01100")));
        assert_eq!(
            t.nodes().level_set(6),
            seqs(&["000000", "000011", "011000", "100000", "100101"]).as_slice()
        );
        // Coding lengths: m_0 = 2, m_1 = 5, m_2 = 8, m_3 = 14.
        assert_eq!(t.coding_len(0), Some(2));
        assert_eq!(t.coding_len(1), Some(5));
        assert_eq!(t.coding_len(2), Some(8));
        assert_eq!(t.coding_len(3), Some(14));
    }

    #[test]
    fn skew_tree_interval_lengths() {
        let t3 = default_tk(3, 8);
        let m3: Vec<usize> = (0..8).map(|n| t3.coding_len(n).unwrap()).collect();
        assert_eq!(m3, vec![2, 5, 8, 14, 22, 35, 55, 87]);

        let t4 = default_tk(4, 7);
        assert_eq!(t4.coding_len(-1), Some(3));
        let m4: Vec<usize> = (0..7).map(|n| t4.coding_len(n).unwrap()).collect();
        assert_eq!(m4, vec![7, 14, 26, 47, 85, 154, 280]);
    }

    #[test]
    fn four_clique_free_skew_tree_matches_hand_computation() {
        let t = default_tk(4, 3);
        assert_eq!(t.coding_node(-2), Some(&BitSeq::new()));
        assert_eq!(t.coding_node(-1), Some(&seq("100")));
        assert_eq!(t.coding_node(0), Some(&seq("1101000")));
        assert_eq!(
            t.nodes().level_set(4),
            seqs(&["0000", "0011", "1000", "1101"]).as_slice()
        );
        let crit = t.critical_nodes();
        assert_eq!(crit[1].node, seq("1"));
        assert_eq!(crit[2].node, seq("00"));
        assert_eq!(crit[3].node, seq("100"));
        assert_eq!(crit[3].kind, CriticalKind::Coding(-1));
        assert_eq!(crit[4].node, seq("1000"));
        assert_eq!(crit[5].node, seq("00110"));
        assert_eq!(crit[6].node, seq("000000"));
        assert!(t.one_critical_per_level());
        assert!(t.is_strongly_skew());
        assert!(t.is_regular());
    }

    #[test]
    fn skew_and_unskewed_trees_code_the_same_graph() {
        for (k, n) in [(3usize, 8usize), (4, 6)] {
            let s = default_sk(k, n);
            let t = default_tk(k, n);
            let sc: Vec<BitSeq> = s.coding_entries(false).map(|(_, c)| c.clone()).collect();
            let tc: Vec<BitSeq> = t.coding_entries(false).map(|(_, c)| c.clone()).collect();
            assert_eq!(
                decode_graph(&sc).unwrap(),
                decode_graph(&tc).unwrap(),
                "k = {k}"
            );
            // Ghosts included as well.
            let sg: Vec<BitSeq> = s.coding_entries(true).map(|(_, c)| c.clone()).collect();
            let tg: Vec<BitSeq> = t.coding_entries(true).map(|(_, c)| c.clone()).collect();
            assert_eq!(decode_graph(&sg).unwrap(), decode_graph(&tg).unwrap());
        }
    }

    #[test]
    fn coded_graph_has_forced_recent_edges_and_no_k_clique() {
        use crate::graph::has_clique;
        for (k, n) in [(3usize, 9usize), (4, 7)] {
            let t = default_sk(k, n);
            let coding: Vec<BitSeq> = t.coding_entries(true).map(|(_, c)| c.clone()).collect();
            let g = decode_graph(&coding).unwrap();
            assert!(!has_clique(&g, k).unwrap(), "k = {k}");
            // Trailing ones force each vertex adjacent to its k-2
            // predecessors.
            for v in 1..g.vertex_count() {
                for back in 1..=(k - 2).min(v) {
                    assert!(g.has_edge(v - back, v));
                }
            }
        }
    }

    #[test]
    fn clique_cache_agrees_with_direct_checks() {
        let t = default_sk(4, 6);
        let cliques = CodedCliques::new(&t);
        // v0, v1, v2 form a triangle (trailing ones), and the cache agrees
        // both times it is asked.
        assert!(cliques.codes_clique(&[0, 1, 2]));
        assert!(cliques.codes_clique(&[2, 0, 1]));
        assert!(!cliques.codes_clique(&[0, 1, 2, 3]) || !cliques.adjacent(0, 3));
    }
}
