//! Pre-clique machinery: cumulative detection, first-acquisition events and
//! their schedules, the witnessing properties (plain, strong, strict), and
//! the freeness/validity checks used by the extension arguments.
//!
//! Two tiers of facts about a node set drive everything here.
//!
//! * **Cumulative**: a node set at level `l` *is* a pre-`a`-clique when some
//!   witness set of `a - 2` coding nodes (ghosts included) whose vertices
//!   code an `(a-2)`-clique sees every member pass with 1.  A member owns
//!   its bits below `l`; at the boundary position `l` itself the passing bit
//!   is read off the ambient tree's unique one-step successor, and counts as
//!   undetermined (never passing 1) where the member splits or has no
//!   extension.
//! * **Events**: a set *acquires* a pre-`a`-clique at the first level of its
//!   restriction chain where the cumulative test turns on.  An event is
//!   *anchored* when some witness realizes its maximum position exactly at
//!   the event level; only anchored events are subject to the witnessing
//!   properties, since an event first visible strictly above every witness
//!   position merely records a splitting boundary resolving, not a witness
//!   coming into view.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitseq::BitSeq;
use crate::builders::CodedCliques;
use crate::error::{Error, Result};
use crate::tree::{CodingTree, CriticalKind, NodeLevels};

/// Which witnessing property a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessMode {
    /// Sets of size at least two must be witnessed.
    Wp,
    /// Every set, singletons included, must be witnessed.
    StrongWp,
    /// The plain property plus the per-interval budget and the requirement
    /// that proper subsets of larger sets acquire their pre-cliques in
    /// strictly earlier intervals.
    StrictWp,
}

/// One pre-clique acquisition event in a schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreCliqueEvent {
    /// The level at which the cumulative test first turns on.
    pub level: usize,
    /// The clique size `a` being approximated, between 3 and k.
    pub arity: usize,
    /// The member nodes, all of length `level`, sorted and deduplicated.
    pub members: Vec<BitSeq>,
    /// The first witness found in colexicographic order: coding indices
    /// (ghosts negative) whose vertices code an `(arity-2)`-clique and at
    /// whose lengths every member passes with 1.
    pub witness_indices: Vec<i64>,
    /// Whether some witness realizes its maximum position exactly at
    /// `level`.  Only anchored events are subject to witnessing.
    pub anchored: bool,
    /// False when the event merely builds a lower-arity stage of a
    /// higher-arity acquisition by the same strands inside one staging
    /// interval.
    pub is_new: bool,
    /// Whether no acquisition of the same arity inside the staging interval
    /// strictly extends this event's members in shadow.
    pub is_maximal: bool,
}

/// Options controlling which events a schedule lists.
#[derive(Clone, Copy, Debug)]
pub struct ScheduleOptions {
    /// Whether events with a single member and arity 3 are listed.
    /// Similarity-type schedules drop them; witnessing keeps them.
    pub include_singleton_pre3: bool,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        ScheduleOptions {
            include_singleton_pre3: true,
        }
    }
}

/// Why a witnessing property fails at one event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The first critical node at or above the event level is not a coding
    /// node (or there is none), so the event cannot sit in a coding node's
    /// interval.
    OutsideCodingInterval,
    /// No witness set satisfies the three witnessing clauses.
    Unwitnessed,
    /// An interval holds more acquisition events than the strict budget
    /// (one multi-member event and no singletons, or one singleton member
    /// set and nothing else).
    IntervalBudget,
    /// A proper subset of a larger event's members acquires no pre-clique
    /// of the same arity in any strictly earlier interval.
    UnstagedSubset,
}

/// One failed check in a witnessing report.
#[derive(Clone, Debug)]
pub struct WitnessingViolation {
    pub kind: ViolationKind,
    pub level: usize,
    pub arity: usize,
    pub members: Vec<BitSeq>,
    pub detail: String,
}

/// The outcome of checking one witnessing property over a subtree.
#[derive(Clone, Debug)]
pub struct WitnessingReport {
    pub mode: WitnessMode,
    pub holds: bool,
    pub violations: Vec<WitnessingViolation>,
}

/// Whether node `x` passes position `pos` with 1.  Bits below the node's
/// length are owned; at the boundary `pos == |x|` the bit is read off the
/// ambient tree's unique one-step successor and counts as undetermined
/// (false) where `x` splits or has no extension; positions beyond the node
/// are undetermined.
pub fn passes_one(ambient: &CodingTree, x: &BitSeq, pos: usize) -> bool {
    match pos.cmp(&x.len()) {
        std::cmp::Ordering::Less => x.bit(pos),
        std::cmp::Ordering::Equal => {
            let nodes = ambient.nodes();
            !nodes.contains_prefix(&x.child(false)) && nodes.contains_prefix(&x.child(true))
        }
        std::cmp::Ordering::Greater => false,
    }
}

/// The coding entries (ghosts included) of `tree` with length at most
/// `max_pos`, as (index, length) pairs in index order.
fn witness_positions(tree: &CodingTree, max_pos: usize) -> Vec<(i64, usize)> {
    tree.coding_entries(true)
        .filter(|(_, c)| c.len() <= max_pos)
        .map(|(n, c)| (n, c.len()))
        .collect()
}

/// All size-`r` index subsets of `pool`, in colexicographic order.
fn colex_combinations(pool: &[(i64, usize)], r: usize) -> Vec<Vec<(i64, usize)>> {
    fn rec(
        pool: &[(i64, usize)],
        r: usize,
        from: usize,
        cur: &mut Vec<(i64, usize)>,
        out: &mut Vec<Vec<(i64, usize)>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i]);
            rec(pool, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(pool, r, 0, &mut Vec::new(), &mut out);
    // Colexicographic: compare largest indices first.
    out.sort_by(|a, b| {
        let ka: Vec<i64> = a.iter().rev().map(|(n, _)| *n).collect();
        let kb: Vec<i64> = b.iter().rev().map(|(n, _)| *n).collect();
        ka.cmp(&kb)
    });
    out
}

/// Restrictions of `members` to length `l`, sorted and deduplicated.
fn restrict_set(members: &[BitSeq], l: usize) -> Vec<BitSeq> {
    let mut out: Vec<BitSeq> = members.iter().map(|m| m.restrict(l)).collect();
    out.sort();
    out.dedup();
    out
}

/// Whether every member passes every position of `witness` with 1.
fn all_pass(ambient: &CodingTree, members: &[BitSeq], witness: &[(i64, usize)]) -> bool {
    members
        .iter()
        .all(|m| witness.iter().all(|(_, p)| passes_one(ambient, m, *p)))
}

/// The first witness, in colexicographic order, showing that the node set
/// `members` (all of length `level`) is a pre-`arity`-clique at `level`:
/// `arity - 2` coding indices (ghosts included) with lengths at most
/// `level`, coding an `(arity-2)`-clique, at whose lengths every member
/// passes with 1.  Returns None when the set is empty or no witness exists.
pub fn preclique_witness(
    ambient: &CodingTree,
    members: &[BitSeq],
    arity: usize,
    level: usize,
) -> Option<Vec<i64>> {
    if members.is_empty() || arity < 3 {
        return None;
    }
    let pool = witness_positions(ambient, level);
    if pool.len() < arity - 2 {
        return None;
    }
    let cliques = CodedCliques::new(ambient);
    for combo in colex_combinations(&pool, arity - 2) {
        let indices: Vec<i64> = combo.iter().map(|(n, _)| *n).collect();
        if !cliques.codes_clique(&indices) {
            continue;
        }
        if all_pass(ambient, members, &combo) {
            return Some(indices);
        }
    }
    None
}

/// Like [`preclique_witness`], but requires some witness to realize its
/// maximum position exactly at `level`.
fn anchored_witness(
    ambient: &CodingTree,
    members: &[BitSeq],
    arity: usize,
    level: usize,
) -> Option<Vec<i64>> {
    if members.is_empty() || arity < 3 {
        return None;
    }
    let anchor = ambient.coding_index_at_len(level)?;
    let pool: Vec<(i64, usize)> = witness_positions(ambient, level)
        .into_iter()
        .filter(|(_, p)| *p < level)
        .collect();
    if pool.len() + 1 < arity - 2 {
        return None;
    }
    let cliques = CodedCliques::new(ambient);
    for combo in colex_combinations(&pool, arity - 3) {
        let mut full = combo.clone();
        full.push((anchor, level));
        let indices: Vec<i64> = full.iter().map(|(n, _)| *n).collect();
        if !cliques.codes_clique(&indices) {
            continue;
        }
        if all_pass(ambient, members, &full) {
            return Some(indices);
        }
    }
    None
}

/// Whether the node set is a pre-`arity`-clique at `level` (cumulatively).
pub fn is_preclique(ambient: &CodingTree, members: &[BitSeq], arity: usize, level: usize) -> bool {
    preclique_witness(ambient, members, arity, level).is_some()
}

/// Whether the node set first acquires a pre-`arity`-clique at `level`:
/// the cumulative test holds there and fails one level down on the
/// restricted (possibly merged) set.
pub fn is_new_preclique_at(
    ambient: &CodingTree,
    members: &[BitSeq],
    arity: usize,
    level: usize,
) -> bool {
    if !is_preclique(ambient, members, arity, level) {
        return false;
    }
    if level == 0 {
        return true;
    }
    let below = restrict_set(members, level - 1);
    !is_preclique(ambient, &below, arity, level - 1)
}

/// Candidate event levels up to `max_len`: each coding length (ghosts
/// included) and its successor.  A cumulative test can only turn on where a
/// new witness position becomes usable or a splitting boundary resolves.
fn candidate_levels(ambient: &CodingTree, max_len: usize) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for (_, c) in ambient.coding_entries(true) {
        for l in [c.len(), c.len() + 1] {
            if l <= max_len {
                set.insert(l);
            }
        }
    }
    set.into_iter().collect()
}

/// The staging interval of a level: boundaries partition levels into
/// `(b_0, b_1], (b_1, b_2], ...` with everything at or below `b_0` in
/// interval 0.
fn interval_index(boundaries: &[usize], l: usize) -> usize {
    boundaries.partition_point(|&b| b < l)
}

fn as_set(members: &[BitSeq]) -> BTreeSet<BitSeq> {
    members.iter().cloned().collect()
}

/// The acquisition events of the carrier set against explicit staging
/// boundaries (sorted level list).  See [`preclique_schedule`].
pub(crate) fn schedule_with_boundaries(
    ambient: &CodingTree,
    carriers: &[BitSeq],
    boundaries: &[usize],
    opts: &ScheduleOptions,
) -> Result<Vec<PreCliqueEvent>> {
    for s in carriers {
        if !ambient.nodes().contains_prefix(s) {
            return Err(Error::Membership(format!(
                "carrier {s} is not in the ambient tree's downward closure"
            )));
        }
    }
    let Some(max_len) = carriers.iter().map(|s| s.len()).max() else {
        return Ok(Vec::new());
    };
    let cliques = CodedCliques::new(ambient);
    let mut events: Vec<PreCliqueEvent> = Vec::new();
    let mut seen: BTreeSet<(usize, Vec<BitSeq>)> = BTreeSet::new();
    for level in candidate_levels(ambient, max_len) {
        let long_enough: Vec<&BitSeq> = carriers.iter().filter(|s| s.len() >= level).collect();
        if long_enough.is_empty() {
            continue;
        }
        let mut m_all: Vec<BitSeq> = long_enough.iter().map(|s| s.restrict(level)).collect();
        m_all.sort();
        m_all.dedup();
        let pool = witness_positions(ambient, level);
        for arity in 3..=ambient.k() {
            if pool.len() < arity - 2 {
                continue;
            }
            for combo in colex_combinations(&pool, arity - 2) {
                let indices: Vec<i64> = combo.iter().map(|(n, _)| *n).collect();
                if !cliques.codes_clique(&indices) {
                    continue;
                }
                let members: Vec<BitSeq> = m_all
                    .iter()
                    .filter(|m| combo.iter().all(|(_, p)| passes_one(ambient, m, *p)))
                    .cloned()
                    .collect();
                if members.is_empty() {
                    continue;
                }
                if !is_new_preclique_at(ambient, &members, arity, level) {
                    continue;
                }
                let key = (arity, members.clone());
                if !seen.insert(key) {
                    continue;
                }
                let anchored = anchored_witness(ambient, &members, arity, level).is_some();
                events.push(PreCliqueEvent {
                    level,
                    arity,
                    members,
                    witness_indices: indices,
                    anchored,
                    is_new: true,
                    is_maximal: true,
                });
            }
        }
    }
    // Lower-arity stages of a higher-arity acquisition by the same strands
    // inside one staging interval merely build up and are not new.
    let snapshot = events.clone();
    for e in events.iter_mut() {
        let iv = interval_index(boundaries, e.level);
        let subsumed = snapshot.iter().any(|f| {
            f.arity > e.arity
                && f.level >= e.level
                && interval_index(boundaries, f.level) == iv
                && f.members.len() == e.members.len()
                && restrict_set(&f.members, e.level) == e.members
        });
        if subsumed {
            e.is_new = false;
        }
    }
    // Maximality: no same-arity acquisition in the window from the event's
    // level to the next boundary may strictly extend its shadow.
    for e in events.iter_mut() {
        let window_end = boundaries
            .iter()
            .copied()
            .find(|&b| b >= e.level)
            .unwrap_or(usize::MAX);
        let mine = as_set(&e.members);
        let dominated = snapshot.iter().any(|f| {
            f.arity == e.arity
                && f.level >= e.level
                && f.level <= window_end
                && {
                    let shadow = as_set(&restrict_set(&f.members, e.level));
                    shadow.is_superset(&mine) && shadow != mine
                }
        });
        if dominated {
            e.is_maximal = false;
        }
    }
    if !opts.include_singleton_pre3 {
        events.retain(|e| !(e.arity == 3 && e.members.len() == 1));
    }
    events.sort_by(|a, b| {
        (a.level, a.arity, &a.members).cmp(&(b.level, b.arity, &b.members))
    });
    Ok(events)
}

/// All pre-clique acquisition events of the level restrictions of the
/// carrier set `s` inside the ambient tree, each at the first level of its
/// restriction chain where the cumulative test turns on, sorted by level,
/// with build-up and maximality flags judged against the ambient tree's
/// critical levels.  Every carrier must lie in the ambient tree's downward
/// closure.
pub fn preclique_schedule(
    ambient: &CodingTree,
    s: &[BitSeq],
    opts: &ScheduleOptions,
) -> Result<Vec<PreCliqueEvent>> {
    let mut boundaries: Vec<usize> = ambient.critical_nodes().iter().map(|c| c.len).collect();
    boundaries.sort_unstable();
    boundaries.dedup();
    schedule_with_boundaries(ambient, s, &boundaries, opts)
}

/// Whether the level set `y` acquires no pre-clique over the level set `x`
/// it end-extends: for every clique-coding witness set reaching into the
/// window between the two levels, the members of `y` passing it must
/// restrict to a set that was already a pre-clique of the same arity at
/// `x`'s level.
pub fn no_new_over(ambient: &CodingTree, y: &[BitSeq], x: &[BitSeq]) -> Result<bool> {
    no_new_over_min_size(ambient, y, x, 1)
}

/// Like [`no_new_over`], but only counts acquisitions by member sets of at
/// least `min_size` nodes at the acquiring level.  The right strand of a
/// fresh splitting node is forced to pass its interval's coding node with 1,
/// so any construction that introduces new splitting nodes necessarily lets
/// some single strand acquire a pre-clique; `min_size = 2` is the strongest
/// form such constructions can preserve, and the form their callers rely on.
pub fn no_new_over_min_size(
    ambient: &CodingTree,
    y: &[BitSeq],
    x: &[BitSeq],
    min_size: usize,
) -> Result<bool> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyInput("both node sets must be nonempty".into()));
    }
    let lx = x[0].len();
    let ly = y[0].len();
    if x.iter().any(|n| n.len() != lx) || y.iter().any(|n| n.len() != ly) {
        return Err(Error::Precondition(
            "both node sets must be level sets".into(),
        ));
    }
    if ly < lx {
        return Err(Error::Precondition(
            "the extending set must sit at or above the base level".into(),
        ));
    }
    let base: BTreeSet<&BitSeq> = x.iter().collect();
    for node in y {
        if !base.contains(&node.restrict(lx)) {
            return Err(Error::Precondition(format!(
                "{node} does not restrict into the base set"
            )));
        }
    }
    for node in x {
        if !y.iter().any(|t| node.is_prefix_of(t)) {
            return Err(Error::Precondition(format!(
                "{node} has no extension in the extending set"
            )));
        }
    }
    if ly == lx {
        return Ok(true);
    }
    let cliques = CodedCliques::new(ambient);
    for level in candidate_levels(ambient, ly) {
        if level <= lx {
            continue;
        }
        let pool = witness_positions(ambient, level);
        for arity in 3..=ambient.k() {
            if pool.len() < arity - 2 {
                continue;
            }
            for combo in colex_combinations(&pool, arity - 2) {
                let indices: Vec<i64> = combo.iter().map(|(n, _)| *n).collect();
                if !cliques.codes_clique(&indices) {
                    continue;
                }
                let passing: Vec<BitSeq> = y
                    .iter()
                    .map(|t| t.restrict(level))
                    .filter(|m| combo.iter().all(|(_, p)| passes_one(ambient, m, *p)))
                    .collect();
                let z = {
                    let mut z = passing;
                    z.sort();
                    z.dedup();
                    z
                };
                if z.len() < min_size.max(1) {
                    continue;
                }
                let at_base = restrict_set(&z, lx);
                if !is_preclique(ambient, &at_base, arity, lx) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A witness set inside `tree` for the member set at `level`, per the three
/// witnessing clauses: the witness's coding vertices form a clique of the
/// right size; its maximal node sits at or above `level` with no critical
/// node of `tree` in between; and each member's unique continuation in
/// `tree` to the maximal witness's length passes every witness position
/// with 1, the boundary position read in the ambient tree.  Searches in
/// colexicographic order and returns the first witness, or None.
pub fn witnesses_for(
    ambient: &CodingTree,
    tree: &CodingTree,
    members: &[BitSeq],
    level: usize,
    arity: usize,
) -> Option<Vec<i64>> {
    if members.is_empty() || arity < 3 {
        return None;
    }
    let crits = tree.critical_nodes();
    let cliques = CodedCliques::new(tree);
    let entries: Vec<(i64, usize)> = tree
        .coding_entries(true)
        .map(|(n, c)| (n, c.len()))
        .collect();
    for &(top, top_len) in entries.iter().filter(|(_, l)| *l >= level) {
        // No critical node of the subtree may separate the event level from
        // the maximal witness.
        if crits.iter().any(|c| c.len >= level && c.len < top_len) {
            continue;
        }
        // Each member must continue uniquely to the maximal witness's level.
        let cross = tree.nodes().cross_section(top_len);
        let mut lifts = Vec::with_capacity(members.len());
        let mut ok = true;
        for m in members {
            let mut ext = cross.iter().filter(|y| m.is_prefix_of(y));
            match (ext.next(), ext.next()) {
                (Some(y), None) => lifts.push(y.clone()),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let lower: Vec<(i64, usize)> = entries.iter().copied().filter(|(n, _)| *n < top).collect();
        if lower.len() < arity - 3 {
            continue;
        }
        for combo in colex_combinations(&lower, arity - 3) {
            let mut full = combo.clone();
            full.push((top, top_len));
            let indices: Vec<i64> = full.iter().map(|(n, _)| *n).collect();
            if !cliques.codes_clique(&indices) {
                continue;
            }
            if lifts
                .iter()
                .all(|y| full.iter().all(|(_, p)| passes_one(ambient, y, *p)))
            {
                return Some(indices);
            }
        }
    }
    None
}

/// The nodes of a tree with no proper extension inside it.
fn maximal_nodes(tree: &CodingTree) -> Vec<BitSeq> {
    tree.nodes()
        .iter_nodes()
        .filter(|x| {
            !tree.nodes().contains_prefix(&x.child(false))
                && !tree.nodes().contains_prefix(&x.child(true))
        })
        .cloned()
        .collect()
}

/// Checks one witnessing property over the subtree: every anchored
/// acquisition event of its maximal nodes (restricted per mode) must sit in
/// a coding node's interval of the subtree and carry a witness inside it.
/// The strict mode additionally budgets events per interval and demands
/// that proper subsets of three-or-more-member events acquire their
/// pre-cliques strictly earlier.  Boundary passing bits are read in the
/// ambient tree.
pub fn witnessing_report(
    ambient: &CodingTree,
    tree: &CodingTree,
    mode: WitnessMode,
) -> Result<WitnessingReport> {
    let carriers = maximal_nodes(tree);
    let mut boundaries: Vec<usize> = tree.critical_nodes().iter().map(|c| c.len).collect();
    boundaries.sort_unstable();
    boundaries.dedup();
    let opts = ScheduleOptions {
        include_singleton_pre3: true,
    };
    let events = schedule_with_boundaries(ambient, &carriers, &boundaries, &opts)?;
    let tier_w: Vec<&PreCliqueEvent> = events.iter().filter(|e| e.anchored && e.is_new).collect();
    let crits = tree.critical_nodes();
    let mut violations: Vec<WitnessingViolation> = Vec::new();
    let checked: Vec<&&PreCliqueEvent> = tier_w
        .iter()
        .filter(|e| match mode {
            WitnessMode::StrongWp => true,
            WitnessMode::Wp | WitnessMode::StrictWp => e.members.len() >= 2,
        })
        .collect();
    for e in checked {
        if witnesses_for(ambient, tree, &e.members, e.level, e.arity).is_some() {
            continue;
        }
        let first_crit = crits.iter().find(|c| c.len >= e.level);
        let located = matches!(
            first_crit,
            Some(c) if matches!(c.kind, CriticalKind::Coding(_))
        );
        violations.push(WitnessingViolation {
            kind: if located {
                ViolationKind::Unwitnessed
            } else {
                ViolationKind::OutsideCodingInterval
            },
            level: e.level,
            arity: e.arity,
            members: e.members.clone(),
            detail: if located {
                "no witness set satisfies the witnessing clauses".into()
            } else {
                "the first critical node at or above the event is not a coding node".into()
            },
        });
    }
    if mode == WitnessMode::StrictWp {
        let mut by_interval: BTreeMap<usize, (usize, BTreeSet<Vec<BitSeq>>, &PreCliqueEvent)> =
            BTreeMap::new();
        for e in &tier_w {
            let iv = interval_index(&boundaries, e.level);
            let entry = by_interval
                .entry(iv)
                .or_insert_with(|| (0, BTreeSet::new(), e));
            if e.members.len() >= 2 {
                entry.0 += 1;
            } else {
                entry.1.insert(e.members.clone());
            }
        }
        for (_, (multi, singles, sample)) in by_interval {
            let ok = (multi <= 1 && singles.is_empty()) || (multi == 0 && singles.len() <= 1);
            if !ok {
                violations.push(WitnessingViolation {
                    kind: ViolationKind::IntervalBudget,
                    level: sample.level,
                    arity: sample.arity,
                    members: sample.members.clone(),
                    detail: format!(
                        "interval holds {multi} multi-member event(s) and {} singleton member set(s)",
                        singles.len()
                    ),
                });
            }
        }
        let candidates = candidate_levels(ambient, tree.nodes().max_len().unwrap_or(0));
        for e in &tier_w {
            if e.members.len() < 3 {
                continue;
            }
            let iv = interval_index(&boundaries, e.level);
            for picks in 1..(1usize << e.members.len()) - 1 {
                let subset: Vec<BitSeq> = e
                    .members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| picks >> i & 1 == 1)
                    .map(|(_, m)| m.clone())
                    .collect();
                let staged = candidates
                    .iter()
                    .filter(|&&l| interval_index(&boundaries, l) < iv)
                    .any(|&l| {
                        let below = restrict_set(&subset, l);
                        is_new_preclique_at(ambient, &below, e.arity, l)
                    });
                if !staged {
                    violations.push(WitnessingViolation {
                        kind: ViolationKind::UnstagedSubset,
                        level: e.level,
                        arity: e.arity,
                        members: subset,
                        detail: "subset acquires no pre-clique of this arity in an earlier interval"
                            .into(),
                    });
                }
            }
        }
    }
    Ok(WitnessingReport {
        mode,
        holds: violations.is_empty(),
        violations,
    })
}

/// The leftmost extension of a node to the target length inside a node
/// closure: prefer the 0-child at every step.
fn leftmost_to(nodes: &NodeLevels, x: &BitSeq, target: usize) -> Result<BitSeq> {
    let mut cur = x.clone();
    while cur.len() < target {
        let zero = cur.child(false);
        if nodes.contains_prefix(&zero) {
            cur = zero;
        } else {
            let one = cur.child(true);
            if nodes.contains_prefix(&one) {
                cur = one;
            } else {
                return Err(Error::Horizon(format!(
                    "{cur} has no extension toward length {target}"
                )));
            }
        }
    }
    Ok(cur)
}

/// Whether the level set is free in the ambient tree: its leftmost
/// extensions to the least coding-node length at or above it acquire no
/// pre-clique over it.
pub fn freeness(ambient: &CodingTree, x: &[BitSeq]) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::EmptyInput("the level set must be nonempty".into()));
    }
    let lx = x[0].len();
    if x.iter().any(|n| n.len() != lx) {
        return Err(Error::Precondition("the set must be a level set".into()));
    }
    let target = ambient
        .coding_entries(true)
        .map(|(_, c)| c.len())
        .filter(|&l| l >= lx)
        .min()
        .ok_or_else(|| {
            Error::Horizon(format!(
                "no coding node at or above level {lx} in the ambient tree"
            ))
        })?;
    let lifted: Vec<BitSeq> = x
        .iter()
        .map(|n| leftmost_to(ambient.nodes(), n, target))
        .collect::<Result<_>>()?;
    no_new_over(ambient, &lifted, x)
}

/// Whether the subtree is valid: the plain witnessing property holds and
/// its maximal nodes form a free level set.
pub fn validity(ambient: &CodingTree, tree: &CodingTree) -> Result<bool> {
    if !witnessing_report(ambient, tree, WitnessMode::Wp)?.holds {
        return Ok(false);
    }
    let top = maximal_nodes(tree);
    if top.is_empty() {
        return Err(Error::EmptyInput("the subtree has no nodes".into()));
    }
    let l = top[0].len();
    if top.iter().any(|n| n.len() != l) {
        return Err(Error::Precondition(
            "the maximal nodes do not form a level set".into(),
        ));
    }
    freeness(ambient, &top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_sk, build_tk, CodingSelector, NodeEnumeration};
    use crate::tree::meet_closure_tree;

    fn b(s: &str) -> BitSeq {
        if s.is_empty() {
            BitSeq::new()
        } else {
            s.parse().unwrap()
        }
    }

    fn bs(strs: &[&str]) -> Vec<BitSeq> {
        strs.iter().map(|s| b(s)).collect()
    }

    fn s3(n: usize) -> CodingTree {
        build_sk(3, n, &NodeEnumeration::Default, &CodingSelector::Default).unwrap()
    }

    fn t3(n: usize) -> CodingTree {
        build_tk(3, n, &NodeEnumeration::Default, &CodingSelector::Default).unwrap()
    }

    fn t4(n: usize) -> CodingTree {
        build_tk(4, n, &NodeEnumeration::Default, &CodingSelector::Default).unwrap()
    }

    #[test]
    fn boundary_determined_bit_drives_passing() {
        let t = t3(3);
        // The root splits: its boundary bit is undetermined.
        assert!(!passes_one(&t, &b(""), 0));
        // 10's unique successor is 100: it passes position 2 with 0.
        assert!(!passes_one(&t, &b("10"), 2));
        // 01's unique successor is 011: it passes position 2 with 1.
        assert!(passes_one(&t, &b("01"), 2));
        // Owned bits.
        assert!(passes_one(&t, &b("10"), 0));
        assert!(!passes_one(&t, &b("10"), 1));
        // Positions beyond the node are undetermined.
        assert!(!passes_one(&t, &b("10"), 7));
    }

    #[test]
    fn ghost_witnessed_marker_is_preclique_k4() {
        let t = t4(2);
        // A single node marked at the root ghost is a pre-3-clique at
        // level 1, witnessed by the first ghost.
        assert_eq!(preclique_witness(&t, &bs(&["1"]), 3, 1), Some(vec![-2]));
        // The root itself splits, so it is not a pre-clique at all.
        assert_eq!(preclique_witness(&t, &[BitSeq::new()], 3, 0), None);
        let t = t3(3);
        assert_eq!(preclique_witness(&t, &[BitSeq::new()], 3, 0), None);
        assert_eq!(preclique_witness(&t, &bs(&["1"]), 3, 1), Some(vec![-1]));
    }

    #[test]
    fn shared_marker_pair_event_at_boundary_plus_one() {
        // Two nodes marked at the first coding length acquire their shared
        // pre-3-clique one level above it, where the splitting boundary of
        // the other strand resolves.
        let s = s3(7);
        let events = preclique_schedule(&s, &bs(&["0100", "0101"]), &ScheduleOptions::default())
            .unwrap();
        assert_eq!(events.len(), 1);
        let e = &events[0];
        assert_eq!(e.level, 2);
        assert_eq!(e.arity, 3);
        assert_eq!(e.members, bs(&["01"]));
        assert_eq!(e.witness_indices, vec![0]);
        assert!(!e.anchored);
        assert!(e.is_new);
        assert!(e.is_maximal);
        // With singleton pre-3 events excluded the schedule is empty.
        let opts = ScheduleOptions {
            include_singleton_pre3: false,
        };
        assert!(preclique_schedule(&s, &bs(&["0100", "0101"]), &opts)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn inherited_marker_suppresses_later_pair_event() {
        // Both carriers extend a strand already marked at the root ghost:
        // their later separation fires no new pair event.
        let t = t3(3);
        let events = preclique_schedule(&t, &bs(&["10000", "10010"]), &ScheduleOptions::default())
            .unwrap();
        assert_eq!(events.len(), 1);
        let e = &events[0];
        assert_eq!(e.level, 1);
        assert_eq!(e.members, bs(&["1"]));
        assert_eq!(e.witness_indices, vec![-1]);
        assert!(!e.anchored);
    }

    #[test]
    fn all_zero_level_set_has_empty_schedule() {
        let t = t3(3);
        let events = preclique_schedule(&t, &bs(&["00000", "00001"]), &ScheduleOptions::default())
            .unwrap();
        // 00001 passes the second coding length via its forced successor,
        // so one singleton event fires there; the all-zero strand fires
        // nothing.  Restricting to the all-zero carrier alone is silent.
        let silent =
            preclique_schedule(&t, &bs(&["00000"]), &ScheduleOptions::default()).unwrap();
        assert!(silent.is_empty());
        assert!(events.iter().all(|e| e.members != bs(&["00000"])));
    }

    #[test]
    fn preclique_schedule_rejects_foreign_carriers() {
        let t = t3(3);
        let err = preclique_schedule(&t, &bs(&["11"]), &ScheduleOptions::default());
        assert!(matches!(err, Err(Error::Membership(_))));
    }

    #[test]
    fn trailing_strand_event_is_witnessed() {
        let t = t3(4);
        // The strand through 01 passes the first proper coding node via its
        // forced successor: its singleton event at level 2 is witnessed by
        // that coding node.
        assert_eq!(witnesses_for(&t, &t, &bs(&["01"]), 2, 3), Some(vec![0]));
        // The ghost-marked strand's event at level 1 sits under a splitting
        // node and has no witness.
        assert_eq!(witnesses_for(&t, &t, &bs(&["1"]), 1, 3), None);
    }

    #[test]
    fn strong_witnessing_holds_on_level_prefixes_k3() {
        let t = t3(6);
        for m in 2..=30 {
            let prefix = t.first_levels(m);
            let strong = witnessing_report(&t, &prefix, WitnessMode::StrongWp).unwrap();
            assert!(
                strong.holds,
                "strong witnessing fails on the {m}-level prefix: {:?}",
                strong.violations
            );
            let plain = witnessing_report(&t, &prefix, WitnessMode::Wp).unwrap();
            assert!(plain.holds);
        }
    }

    #[test]
    fn strong_witnessing_holds_on_level_prefixes_k4() {
        let t = t4(4);
        for m in 2..=28 {
            let prefix = t.first_levels(m);
            let strong = witnessing_report(&t, &prefix, WitnessMode::StrongWp).unwrap();
            assert!(
                strong.holds,
                "strong witnessing fails on the {m}-level prefix: {:?}",
                strong.violations
            );
        }
    }

    /// Two strands of the skew tree sharing their first marker at the
    /// second proper coding length, meeting only at the root — returned at
    /// lengths 6 and 7 so an induced tree can index them.
    fn shared_marker_leaves(t: &CodingTree) -> (BitSeq, BitSeq, usize) {
        let u = b("000011");
        assert!(t.nodes().contains(&u));
        let v = t
            .nodes()
            .level_set(7)
            .iter()
            .find(|n| b("100101").is_prefix_of(n))
            .expect("no length-7 extension of 100101")
            .clone();
        let p = t.coding_len(1).unwrap();
        assert_eq!(p, 5);
        assert!(u.bit(p) && v.bit(p));
        (u, v, p)
    }

    #[test]
    fn induced_pair_with_shared_marker_fails_wp() {
        // The induced tree of a raw two-leaf antichain whose strands share
        // a fresh marker above their meet: the pair acquisition there has
        // no witness inside the induced tree.
        let t = t3(4);
        let (u, v, p) = shared_marker_leaves(&t);
        let nodes = meet_closure_tree([u.clone(), v.clone()]).unwrap();
        let induced = CodingTree::new(3, nodes, vec![(0, u), (1, v)], false).unwrap();
        let report = witnessing_report(&t, &induced, WitnessMode::Wp).unwrap();
        assert!(!report.holds);
        assert!(
            report
                .violations
                .iter()
                .any(|w| w.kind == ViolationKind::Unwitnessed
                    && w.members.len() == 2
                    && w.level == p),
            "expected an unwitnessed pair event at the shared marker, got {:?}",
            report.violations
        );
    }

    #[test]
    fn zero_marker_tree_satisfies_all_modes() {
        // A chain tree with no 1 bits has no pre-cliques at all.
        let nodes =
            crate::tree::NodeLevels::from_nodes([b(""), b("0"), b("00"), b("000")]);
        let tree = CodingTree::new(3, nodes, vec![(0, b("00"))], false).unwrap();
        for mode in [WitnessMode::Wp, WitnessMode::StrongWp, WitnessMode::StrictWp] {
            let report = witnessing_report(&tree, &tree.first_levels(3), mode).unwrap();
            assert!(report.holds, "{mode:?} should hold: {:?}", report.violations);
        }
    }

    #[test]
    fn two_singleton_acquisitions_in_one_interval_fail_strict() {
        // An induced two-leaf subtree whose strands acquire singleton
        // pre-3-cliques at two different ambient coding lengths inside one
        // of its own intervals: the plain property ignores singletons, but
        // the strict per-interval budget rejects the pair of acquisitions.
        let t = t3(4);
        let v = b("000011");
        assert!(t.nodes().contains(&v));
        let u = t
            .nodes()
            .level_set(7)
            .iter()
            .find(|n| b("011000").is_prefix_of(n))
            .expect("no length-7 extension of 011000")
            .clone();
        let nodes = meet_closure_tree([u.clone(), v.clone()]).unwrap();
        let tree = CodingTree::new(3, nodes, vec![(0, v), (1, u)], false).unwrap();
        assert!(witnessing_report(&t, &tree, WitnessMode::Wp).unwrap().holds);
        let strict = witnessing_report(&t, &tree, WitnessMode::StrictWp).unwrap();
        assert!(!strict.holds);
        assert!(!strict.violations.is_empty());
        assert!(strict
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::IntervalBudget));
    }

    #[test]
    fn unstaged_triple_fails_strict() {
        // Three strands acquire a three-member pre-3-clique in one step;
        // no proper subset acquired anything earlier.
        let nodes = crate::tree::NodeLevels::from_nodes([
            b(""),
            b("0"),
            b("1"),
            b("00"),
            b("01"),
            b("10"),
            b("001"),
            b("011"),
            b("101"),
        ]);
        let tree = CodingTree::new(3, nodes, vec![(0, b("10"))], false).unwrap();
        let strong = witnessing_report(&tree, &tree, WitnessMode::StrongWp).unwrap();
        assert!(strong.holds, "{:?}", strong.violations);
        let strict = witnessing_report(&tree, &tree, WitnessMode::StrictWp).unwrap();
        assert!(!strict.holds);
        assert!(strict
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::UnstagedSubset));
    }

    #[test]
    fn leftmost_lifts_add_no_new_precliques() {
        let t = t3(4);
        let x = t.nodes().cross_section(3);
        let lifted: Vec<BitSeq> = x
            .iter()
            .map(|n| leftmost_to(t.nodes(), n, 5).unwrap())
            .collect();
        assert!(no_new_over(&t, &lifted, &x).unwrap());
        // A set trivially extends itself.
        assert!(no_new_over(&t, &x, &x).unwrap());
    }

    #[test]
    fn lift_past_shared_marker_violates() {
        let t = t3(4);
        let (u, v, p) = shared_marker_leaves(&t);
        let lx = u.meet(&v).len() + 1;
        let x = vec![u.restrict(lx), v.restrict(lx)];
        // Carrying both strands past the shared marker acquires the pair
        // pre-3-clique over the base.
        let past = vec![u.restrict(p + 1), v.restrict(p + 1)];
        assert!(!no_new_over(&t, &past, &x).unwrap());
        // Already at the marker's level the forced boundary bits reveal it.
        let at = vec![u.restrict(p), v.restrict(p)];
        assert!(!no_new_over(&t, &at, &x).unwrap());
        // Leftmost lifts of the same base stay silent.
        let leftmost: Vec<BitSeq> = x
            .iter()
            .map(|n| leftmost_to(t.nodes(), n, p + 1).unwrap())
            .collect();
        assert!(no_new_over(&t, &leftmost, &x).unwrap());
    }

    #[test]
    fn no_new_over_rejects_malformed_inputs() {
        let t = t3(3);
        assert!(matches!(
            no_new_over(&t, &bs(&["000", "0000"]), &bs(&["00"])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            no_new_over(&t, &bs(&["000"]), &bs(&["01"])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            no_new_over(&t, &bs(&["000"]), &bs(&["00", "01"])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            no_new_over(&t, &[], &bs(&["00"])),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn schedule_shrinks_monotonically() {
        // Restricting the carrier set never creates an event at a level and
        // arity the full set lacks.
        let t = t3(4);
        let full = t.nodes().cross_section(5);
        let sub = bs(&["10000", "10010"]);
        let opts = ScheduleOptions::default();
        let big = preclique_schedule(&t, &full, &opts).unwrap();
        let small = preclique_schedule(&t, &sub, &opts).unwrap();
        for e in &small {
            assert!(
                big.iter().any(|f| f.level == e.level && f.arity == e.arity),
                "event at level {} arity {} missing from the full schedule",
                e.level,
                e.arity
            );
        }
    }

    #[test]
    fn shadow_supersets_drop_maximality() {
        // Within one staging interval, an event whose shadow is strictly
        // extended by a same-arity event is not maximal.
        let t = t3(6);
        let carriers = t.nodes().cross_section(23);
        let events = preclique_schedule(&t, &carriers, &ScheduleOptions::default()).unwrap();
        let mut boundaries: Vec<usize> = t.critical_nodes().iter().map(|c| c.len).collect();
        boundaries.sort_unstable();
        boundaries.dedup();
        for e in &events {
            let window_end = boundaries
                .iter()
                .copied()
                .find(|&bb| bb >= e.level)
                .unwrap_or(usize::MAX);
            let mine = as_set(&e.members);
            let dominated = events.iter().any(|f| {
                f.arity == e.arity && f.level >= e.level && f.level <= window_end && {
                    let shadow = as_set(&restrict_set(&f.members, e.level));
                    shadow.is_superset(&mine) && shadow != mine
                }
            });
            assert_eq!(e.is_maximal, !dominated);
        }
    }

    #[test]
    fn lower_arity_stage_of_buildup_is_not_new() {
        // A strand marked at both ghosts of the four-clique-free tree
        // builds up to a pre-4-clique: inside one staging interval its
        // pre-3 stage is not new, only the completion is.
        let t = t4(2);
        let opts = ScheduleOptions::default();
        let events = schedule_with_boundaries(&t, &bs(&["1101"]), &[4], &opts).unwrap();
        let pre3 = events
            .iter()
            .find(|e| e.arity == 3 && e.level == 1)
            .expect("missing the pre-3 stage");
        assert_eq!(pre3.members, bs(&["1"]));
        assert!(!pre3.is_new);
        let pre4 = events
            .iter()
            .find(|e| e.arity == 4)
            .expect("missing the pre-4 completion");
        assert_eq!(pre4.level, 3);
        assert_eq!(pre4.members, bs(&["110"]));
        assert!(pre4.is_new);
        assert!(pre4.anchored);
        // Against the tree's own dense critical boundaries the stages fall
        // in different intervals and both stay new.
        let dense = preclique_schedule(&t, &bs(&["1101"]), &opts).unwrap();
        assert!(dense
            .iter()
            .all(|e| e.arity != 3 || e.level != 1 || e.is_new));
    }

    #[test]
    fn coding_level_sets_are_free() {
        let t = t3(4);
        for l in [0, 2, 5, 8] {
            let x = t.nodes().cross_section(l);
            assert!(freeness(&t, &x).unwrap(), "level {l} set should be free");
        }
        // Leftmost extensions of a free set stay free.
        let x = t.nodes().cross_section(2);
        let lifted: Vec<BitSeq> = x
            .iter()
            .map(|n| leftmost_to(t.nodes(), n, 3).unwrap())
            .collect();
        assert!(freeness(&t, &lifted).unwrap());
    }

    #[test]
    fn forced_marker_makes_a_set_unfree() {
        // A chain forced through a marker at the coding length: the lift of
        // the 0-strand must pass it with 1, acquiring a fresh singleton
        // pre-3-clique.
        let nodes = crate::tree::NodeLevels::from_nodes([
            b(""),
            b("0"),
            b("1"),
            b("01"),
            b("10"),
            b("011"),
            b("100"),
        ]);
        let tree =
            CodingTree::new(3, nodes, vec![(-1, b("")), (0, b("10"))], false).unwrap();
        assert!(!freeness(&tree, &bs(&["0"])).unwrap());
        // The 1-strand was already marked at the ghost: its lift is silent.
        assert!(freeness(&tree, &bs(&["1"])).unwrap());
    }

    #[test]
    fn level_prefixes_are_valid() {
        let t = t3(6);
        for m in [3, 6, 9, 15] {
            let prefix = t.first_levels(m);
            assert!(validity(&t, &prefix).unwrap(), "{m}-level prefix");
        }
    }
}

