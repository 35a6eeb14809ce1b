//! Strong similarity maps, strong isomorphism, and strict similarity
//! codes for coding trees and antichains of coding nodes.
//!
//! Two meet-closed node sets are strongly similar when the unique
//! order-forced bijection between them preserves lexicographic order,
//! meets, relative meet lengths, initial segments, coding designations,
//! and passing numbers at coding-node lengths.  A strong isomorphism is
//! a strong similarity map that additionally transports, interval by
//! critical interval, the maximal new pre-clique events of each tree.
//! The strict similarity code of an antichain of coding nodes packages
//! the induced tree's shape data together with the schedule of its new
//! pre-clique acquisitions, interleaved with the critical structure;
//! two antichains are strictly similar exactly when their codes agree.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::precliques::{schedule_with_boundaries, ScheduleOptions};
use crate::tree::{CodingTree, NodeLevels};

/// How much structure a similarity map must preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimilarityMode {
    /// Shape, lexicographic order, meets, relative lengths, initial
    /// segments, coding designations, and passing numbers.
    Similar,
    /// Additionally, the maximal new pre-clique events of corresponding
    /// critical intervals must agree; this requires ambient context.
    Isomorphic,
}

/// The unique candidate bijection between two strongly similar node
/// sets, listed as pairs in (length, lexicographic) order of the left
/// side.  Length classes map onto length classes in order, and nodes
/// within a class map in lexicographic order; no other bijection can
/// satisfy the similarity clauses, so verification never backtracks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityMap {
    pub pairs: Vec<(BitSeq, BitSeq)>,
}

impl SimilarityMap {
    /// The image of a left-side node, if present.
    pub fn image(&self, x: &BitSeq) -> Option<&BitSeq> {
        self.pairs
            .iter()
            .find(|(a, _)| a == x)
            .map(|(_, b)| b)
    }
}

/// The subtree of the ambient tree induced by a node set: restrictions
/// of every member to the length of every element of the meet closure.
/// Coding designations are inherited from the ambient tree (a node of
/// the result is a coding node exactly when it is a non-ghost coding
/// node of the ambient tree); ghost designations are not inherited,
/// since they are a labeling of the ambient tree rather than intrinsic
/// structure.
pub fn induced_tree(ambient: &CodingTree, members: &[BitSeq]) -> Result<CodingTree> {
    if members.is_empty() {
        return Err(Error::EmptyInput(
            "cannot induce a tree from an empty node set".into(),
        ));
    }
    for z in members {
        if !ambient.nodes().contains_prefix(z) {
            return Err(Error::Membership(format!(
                "{z} is not in the ambient tree's downward closure"
            )));
        }
    }
    let closure = crate::tree::meet_closure_tree(members.iter().cloned())?;
    let coding: Vec<(i64, BitSeq)> = ambient
        .coding_entries(false)
        .filter(|(_, c)| closure.contains(c))
        .map(|(n, c)| (n, c.clone()))
        .collect();
    CodingTree::new(ambient.k(), closure, coding, ambient.is_skew())
}

/// Closes a tree's node set under pairwise meets, keeping its coding
/// designations.  A single pairwise pass suffices: the meet of two
/// meets is itself a pairwise meet of original nodes.
fn ensure_meet_closed(tree: &CodingTree) -> Result<Cow<'_, CodingTree>> {
    let nodes: Vec<&BitSeq> = tree.nodes().iter_nodes().collect();
    let mut missing: BTreeSet<BitSeq> = BTreeSet::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let m = nodes[i].meet(nodes[j]);
            if !tree.nodes().contains(&m) {
                missing.insert(m);
            }
        }
    }
    if missing.is_empty() {
        return Ok(Cow::Borrowed(tree));
    }
    let mut all: Vec<BitSeq> = tree.nodes().iter_nodes().cloned().collect();
    all.extend(missing);
    let coding: Vec<(i64, BitSeq)> = tree
        .coding_entries(true)
        .map(|(n, c)| (n, c.clone()))
        .collect();
    Ok(Cow::Owned(CodingTree::new(
        tree.k(),
        NodeLevels::from_nodes(all),
        coding,
        tree.is_skew(),
    )?))
}

/// The passing bit just above a node: the common first-step bit of its
/// proper extensions.  With ambient context the bit is read from the
/// node's one-step extensions in the ambient tree; otherwise from the
/// extensions inside the tree itself.  None when no extension exists or
/// the extensions disagree.
fn successor_bit(tree: &CodingTree, ambient: Option<&CodingTree>, x: &BitSeq) -> Option<bool> {
    if let Some(amb) = ambient {
        let zero = amb.nodes().contains_prefix(&x.child(false));
        let one = amb.nodes().contains_prefix(&x.child(true));
        return match (zero, one) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        };
    }
    let mut bits: BTreeSet<bool> = BTreeSet::new();
    for t in tree.nodes().iter_nodes() {
        if x.is_proper_prefix_of(t) {
            bits.insert(t.bit(x.len()));
        }
    }
    if bits.len() == 1 {
        bits.into_iter().next()
    } else {
        None
    }
}

/// The unique bijection candidate: length classes in order, nodes
/// within a class in lexicographic order.  None when the class profiles
/// differ.
fn forced_pairs(s: &NodeLevels, t: &NodeLevels) -> Option<Vec<(BitSeq, BitSeq)>> {
    if s.height() != t.height() {
        return None;
    }
    let mut pairs = Vec::with_capacity(s.node_count());
    for rank in 0..s.height() {
        let (_, sa) = s.level_set_at_rank(rank);
        let (_, ta) = t.level_set_at_rank(rank);
        if sa.len() != ta.len() {
            return None;
        }
        for (a, b) in sa.iter().zip(ta.iter()) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    Some(pairs)
}

/// Verifies every strong-similarity clause against the forced
/// bijection.  `ambient` optionally supplies the context trees used to
/// resolve passing bits of nodes that are maximal on their side.
fn verify_similarity(
    s: &CodingTree,
    t: &CodingTree,
    pairs: &[(BitSeq, BitSeq)],
    ambient: Option<(&CodingTree, &CodingTree)>,
) -> bool {
    let f: BTreeMap<&BitSeq, &BitSeq> = pairs.iter().map(|(a, b)| (a, b)).collect();
    let nodes: Vec<&BitSeq> = pairs.iter().map(|(a, _)| a).collect();

    // Lexicographic order on incomparable pairs, and preservation of
    // the initial-segment relation in both directions.
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (a, b) = (nodes[i], nodes[j]);
            let (fa, fb) = (f[a], f[b]);
            if a.is_prefix_of(b) != fa.is_prefix_of(fb)
                || b.is_prefix_of(a) != fb.is_prefix_of(fa)
            {
                return false;
            }
            if !a.is_prefix_of(b) && !b.is_prefix_of(a) {
                let d = a.common_prefix_len(b);
                let d2 = fa.common_prefix_len(fb);
                if a.bit(d) != fa.bit(d2) {
                    return false;
                }
            }
        }
    }

    // Meets map to meets, and relative meet lengths are preserved: the
    // induced relation between meet lengths must be a strictly
    // increasing (single-valued, injective) correspondence.
    let mut length_map: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..nodes.len() {
        for j in i..nodes.len() {
            let (a, b) = (nodes[i], nodes[j]);
            let (fa, fb) = (f[a], f[b]);
            let m = a.meet(b);
            let fm = fa.meet(fb);
            match f.get(&m) {
                Some(img) => {
                    if **img != fm {
                        return false;
                    }
                }
                None => return false,
            }
            match length_map.get(&m.len()) {
                Some(&mapped) => {
                    if mapped != fm.len() {
                        return false;
                    }
                }
                None => {
                    length_map.insert(m.len(), fm.len());
                }
            }
        }
    }
    let mut prev: Option<usize> = None;
    for (_, v) in &length_map {
        if let Some(p) = prev {
            if *v <= p {
                return false;
            }
        }
        prev = Some(*v);
    }

    // Coding designations, ghost flags, and the pairing of coding nodes
    // in length order.
    let s_coding: Vec<(i64, &BitSeq)> = s.coding_entries(true).collect();
    let t_coding: Vec<(i64, &BitSeq)> = t.coding_entries(true).collect();
    if s_coding.len() != t_coding.len() {
        return false;
    }
    for ((ns, cs), (nt, ct)) in s_coding.iter().zip(t_coding.iter()) {
        match f.get(cs) {
            Some(img) => {
                if *img != *ct {
                    return false;
                }
            }
            None => return false,
        }
        if (*ns < 0) != (*nt < 0) {
            return false;
        }
    }

    // Passing numbers at coding-node lengths: every node at the length
    // of a coding node must carry the same one-step passing bit as its
    // image.
    let (amb_s, amb_t) = match ambient {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    for (_, c) in &s_coding {
        for x in s.nodes().level_set(c.len()) {
            let pn_s = successor_bit(s, amb_s, x);
            let pn_t = successor_bit(t, amb_t, f[x]);
            if pn_s != pn_t {
                return false;
            }
        }
    }
    true
}

/// The per-interval catalog of maximal new pre-clique events: for each
/// positive critical interval `(b[m-1], b[m]]`, the set of signatures
/// of events that are new and maximal there.  A signature records the
/// event's arity together with its fiber partition at the interval's
/// upper boundary: which positions of the lexicographically sorted
/// cross-section collapse onto which event member.  Positions are
/// lexicographic ranks, so equal catalogs mean the canonical bijection
/// transports every event.
fn interval_event_signatures(
    ambient: &CodingTree,
    carriers: &[BitSeq],
    boundaries: &[usize],
) -> Result<Vec<BTreeSet<IntervalEventSig>>> {
    let opts = ScheduleOptions {
        include_singleton_pre3: true,
    };
    let events = schedule_with_boundaries(ambient, carriers, boundaries, &opts)?;
    let mut out: Vec<BTreeSet<IntervalEventSig>> =
        vec![BTreeSet::new(); boundaries.len().saturating_sub(1)];
    for e in events.iter().filter(|e| e.is_new && e.is_maximal) {
        let m = boundaries.partition_point(|&b| b < e.level);
        if m == 0 || m >= boundaries.len() {
            continue;
        }
        let top = boundaries[m];
        let mut cs: Vec<BitSeq> = carriers
            .iter()
            .filter(|z| z.len() >= top)
            .map(|z| z.restrict(top))
            .collect();
        cs.sort();
        cs.dedup();
        let members: BTreeSet<&BitSeq> = e.members.iter().collect();
        let mut fibers: BTreeMap<BitSeq, Vec<usize>> = BTreeMap::new();
        for (pos, x) in cs.iter().enumerate() {
            let r = x.restrict(e.level);
            if members.contains(&r) {
                fibers.entry(r).or_default().push(pos);
            }
        }
        let mut sig: Vec<Vec<usize>> = fibers.into_values().collect();
        sig.sort();
        out[m - 1].insert(IntervalEventSig {
            arity: e.arity,
            fibers: sig,
        });
    }
    Ok(out)
}

/// The strong similarity map between two trees, if one exists.  The
/// bijection is forced — length classes in order, lexicographic within
/// a class — so the search reduces to verification.  `ambient`
/// optionally pairs each side with the tree it lives in, which resolves
/// passing bits of maximal nodes; `Isomorphic` mode requires it, since
/// maximal new pre-clique events are witnessed by ambient coding nodes.
/// Inputs that are not meet-closed are closed first.
pub fn strong_similarity_map(
    s: &CodingTree,
    t: &CodingTree,
    mode: SimilarityMode,
    ambient: Option<(&CodingTree, &CodingTree)>,
) -> Result<Option<SimilarityMap>> {
    if s.k() != t.k() {
        return Err(Error::Precondition(format!(
            "cannot compare trees over different clique bounds {} and {}",
            s.k(),
            t.k()
        )));
    }
    if mode == SimilarityMode::Isomorphic && ambient.is_none() {
        return Err(Error::Precondition(
            "strong isomorphism needs ambient context: pre-clique events are witnessed by \
             ambient coding nodes"
                .into(),
        ));
    }
    if let Some((amb_s, amb_t)) = ambient {
        if amb_s.k() != s.k() || amb_t.k() != t.k() {
            return Err(Error::Precondition(
                "ambient trees must share the clique bound of the compared trees".into(),
            ));
        }
        for x in s.nodes().iter_nodes() {
            if !amb_s.nodes().contains_prefix(x) {
                return Err(Error::Membership(format!(
                    "{x} is not in its ambient tree's downward closure"
                )));
            }
        }
        for x in t.nodes().iter_nodes() {
            if !amb_t.nodes().contains_prefix(x) {
                return Err(Error::Membership(format!(
                    "{x} is not in its ambient tree's downward closure"
                )));
            }
        }
    }
    let s = ensure_meet_closed(s)?;
    let t = ensure_meet_closed(t)?;
    let Some(pairs) = forced_pairs(s.nodes(), t.nodes()) else {
        return Ok(None);
    };
    if !verify_similarity(&s, &t, &pairs, ambient) {
        return Ok(None);
    }
    if mode == SimilarityMode::Isomorphic {
        let (amb_s, amb_t) = ambient.expect("checked above");
        let crit_s = s.critical_nodes();
        let crit_t = t.critical_nodes();
        if crit_s.len() != crit_t.len() {
            return Ok(None);
        }
        let mut bs: Vec<usize> = crit_s.iter().map(|c| c.len).collect();
        bs.dedup();
        let mut bt: Vec<usize> = crit_t.iter().map(|c| c.len).collect();
        bt.dedup();
        if bs.len() != bt.len() {
            return Ok(None);
        }
        let carriers_s: Vec<BitSeq> = s.nodes().iter_nodes().cloned().collect();
        let carriers_t: Vec<BitSeq> = t.nodes().iter_nodes().cloned().collect();
        let sig_s = interval_event_signatures(amb_s, &carriers_s, &bs)?;
        let sig_t = interval_event_signatures(amb_t, &carriers_t, &bt)?;
        if sig_s != sig_t {
            return Ok(None);
        }
    }
    Ok(Some(SimilarityMap { pairs }))
}

/// One entry of the merged schedule underlying a strict similarity
/// code: at each point of the merged linear order there is a critical
/// node of the induced tree, a new pre-clique acquisition, or a
/// coincidence of several of these.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ScheduleItem {
    /// The meet-closure node of this rank (in increasing length order)
    /// sits at this point of the merged order.
    Critical { rank: usize },
    /// A new pre-clique acquisition whose participants are exactly the
    /// members with these indices (in increasing length order).
    Event { indices: Vec<usize>, arity: usize },
}

/// The signature of one maximal new pre-clique event inside a critical
/// interval: its arity and its fiber partition at the interval's upper
/// boundary, written in lexicographic cross-section positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IntervalEventSig {
    pub arity: usize,
    pub fibers: Vec<Vec<usize>>,
}

/// The strict similarity code of an antichain of coding nodes: a
/// relabeling-invariant value equal for two antichains exactly when
/// they are strictly similar.  Members are sorted by length; all
/// indices refer to that order.  `meet_matrix[i][j]` is the rank of
/// `|z_i ∧ z_j|` among the distinct lengths of the meet closure;
/// `side_bits[i]` records, for each longer partner, which side of the
/// meet the shorter member takes; `coding_flags` marks which closure
/// nodes are ambient coding nodes; `passing_matrix[j]` lists the bits
/// of `z_j` at the lengths of all shorter members; `schedule` is the
/// merged order of closure nodes and new pre-clique acquisitions
/// (singleton pre-3-cliques excluded); `interval_events` catalogs the
/// maximal new pre-clique events of each positive critical interval
/// (singletons included).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StrictSimCode {
    pub k: usize,
    pub member_count: usize,
    pub meet_matrix: Vec<Vec<usize>>,
    pub side_bits: Vec<Vec<bool>>,
    pub coding_flags: Vec<bool>,
    pub passing_matrix: Vec<Vec<bool>>,
    pub schedule: Vec<Vec<ScheduleItem>>,
    pub interval_events: Vec<Vec<IntervalEventSig>>,
}

impl StrictSimCode {
    /// A stable byte serialization usable as a deduplication key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("a strict similarity code always serializes")
    }

    /// The arity-blind variant: acquisition tags keep their participant
    /// sets but forget which clique size was approximated.  The
    /// per-interval maximal-event catalog keeps its arities, since the
    /// strong-isomorphism requirement on induced trees is inherently
    /// arity-aware.
    pub fn unrefined(&self) -> StrictSimCode {
        let mut out = self.clone();
        for group in &mut out.schedule {
            for item in group.iter_mut() {
                if let ScheduleItem::Event { arity, .. } = item {
                    *arity = 0;
                }
            }
            group.sort();
        }
        out
    }
}

/// Computes the strict similarity code of an antichain of coding nodes
/// inside an ambient tree.  Preconditions: members nonempty, inside the
/// ambient tree's downward closure, pairwise incomparable, with
/// pairwise distinct lengths; all meet-closure lengths pairwise
/// distinct (automatic in strongly skew ambient trees).
pub fn strict_sim_code(ambient: &CodingTree, members: &[BitSeq]) -> Result<StrictSimCode> {
    if members.is_empty() {
        return Err(Error::EmptyInput(
            "cannot code an empty antichain".into(),
        ));
    }
    let mut ms: Vec<BitSeq> = members.to_vec();
    for z in &ms {
        if !ambient.nodes().contains_prefix(z) {
            return Err(Error::Membership(format!(
                "{z} is not in the ambient tree's downward closure"
            )));
        }
    }
    ms.sort();
    ms.dedup();
    ms.sort_by_key(BitSeq::len);
    for w in ms.windows(2) {
        if w[0].len() == w[1].len() {
            return Err(Error::Precondition(format!(
                "members must have pairwise distinct lengths; {} and {} share one",
                w[0], w[1]
            )));
        }
    }
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            if ms[i].is_prefix_of(&ms[j]) {
                return Err(Error::Precondition(format!(
                    "not an antichain: {} is an initial segment of {}",
                    ms[i], ms[j]
                )));
            }
        }
    }

    // Meet closure, sorted by length; all lengths must be distinct so
    // that length ranks identify closure nodes.
    let mut closure: BTreeSet<BitSeq> = ms.iter().cloned().collect();
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            closure.insert(ms[i].meet(&ms[j]));
        }
    }
    let mut closure: Vec<BitSeq> = closure.into_iter().collect();
    closure.sort_by_key(BitSeq::len);
    for w in closure.windows(2) {
        if w[0].len() == w[1].len() {
            return Err(Error::Precondition(format!(
                "closure lengths must be pairwise distinct; {} and {} share one",
                w[0], w[1]
            )));
        }
    }
    let rank_of: BTreeMap<usize, usize> = closure
        .iter()
        .enumerate()
        .map(|(r, u)| (u.len(), r))
        .collect();

    let meet_matrix: Vec<Vec<usize>> = ms
        .iter()
        .map(|a| ms.iter().map(|b| rank_of[&a.meet(b).len()]).collect())
        .collect();
    let side_bits: Vec<Vec<bool>> = (0..ms.len())
        .map(|i| {
            ((i + 1)..ms.len())
                .map(|j| ms[i].bit(ms[i].common_prefix_len(&ms[j])))
                .collect()
        })
        .collect();
    let coding_flags: Vec<bool> = closure
        .iter()
        .map(|u| ambient.coding_entries(false).any(|(_, c)| c == u))
        .collect();
    let passing_matrix: Vec<Vec<bool>> = (0..ms.len())
        .map(|j| (0..j).map(|i| ms[j].bit(ms[i].len())).collect())
        .collect();

    let boundaries: Vec<usize> = closure.iter().map(BitSeq::len).collect();
    let events = schedule_with_boundaries(
        ambient,
        &ms,
        &boundaries,
        &ScheduleOptions {
            include_singleton_pre3: false,
        },
    )?;
    let mut by_level: BTreeMap<usize, Vec<ScheduleItem>> = BTreeMap::new();
    for (rank, u) in closure.iter().enumerate() {
        by_level
            .entry(u.len())
            .or_default()
            .push(ScheduleItem::Critical { rank });
    }
    for e in events.iter().filter(|e| e.is_new) {
        let member_set: BTreeSet<&BitSeq> = e.members.iter().collect();
        let indices: Vec<usize> = ms
            .iter()
            .enumerate()
            .filter(|(_, z)| z.len() >= e.level && member_set.contains(&z.restrict(e.level)))
            .map(|(i, _)| i)
            .collect();
        by_level
            .entry(e.level)
            .or_default()
            .push(ScheduleItem::Event {
                indices,
                arity: e.arity,
            });
    }
    let schedule: Vec<Vec<ScheduleItem>> = by_level
        .into_values()
        .map(|mut group| {
            group.sort();
            group
        })
        .collect();

    let interval_events: Vec<Vec<IntervalEventSig>> =
        interval_event_signatures(ambient, &ms, &boundaries)?
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();

    Ok(StrictSimCode {
        k: ambient.k(),
        member_count: ms.len(),
        meet_matrix,
        side_bits,
        coding_flags,
        passing_matrix,
        schedule,
        interval_events,
    })
}

/// Whether two antichains of coding nodes in the same ambient tree are
/// strictly similar: their induced trees are strongly isomorphic and
/// their new pre-clique acquisitions appear in the same order, among
/// the same members, relative to the shared critical structure.  The
/// comparison is arity-blind on the acquisition sequence (the catalog
/// of per-interval maximal events remains arity-aware), matching the
/// similarity-type definition, which tracks which members acquire a new
/// pre-clique and when, but not the clique size being approximated.
pub fn strictly_similar(ambient: &CodingTree, y: &[BitSeq], z: &[BitSeq]) -> Result<bool> {
    let cy = strict_sim_code(ambient, y)?;
    let cz = strict_sim_code(ambient, z)?;
    Ok(cy.unrefined() == cz.unrefined())
}
