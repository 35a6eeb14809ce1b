//! Extension searches inside a built tree prefix: leftmost strand walks,
//! splitting-node location within the certified window, passing-number
//! realization at a chosen coding level, ordered splitting extensions, and
//! enumeration of the end-extensions of a level set that reproduce a given
//! similarity type over a fixed base.
//!
//! Every search is depth-bounded by the prefix (or an explicit horizon) and
//! fails loudly with a horizon error when the prefix is too short; in the
//! infinite tree each of these searches is guaranteed to succeed, so a
//! horizon failure signals a tuning problem, not a logic error.  Searches
//! advance by increasing level and lexicographically within a level, and the
//! first hit is returned.

use itertools::Itertools;
use rayon::prelude::*;

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::precliques::{
    freeness, is_preclique, no_new_over, preclique_schedule, validity, witnesses_for,
    witnessing_report, ScheduleOptions, WitnessMode,
};
use crate::similarity::{strong_similarity_map, SimilarityMode};
use crate::tree::{meet_closure_tree, CodingTree};

/// Walks one strand of `t` from `s` up to length `l`, preferring the child
/// bit `prefer` at every step and taking the other bit where the preferred
/// child is absent.
fn walk_from(t: &CodingTree, s: &BitSeq, l: usize, prefer: bool) -> Result<BitSeq> {
    if l < s.len() {
        return Err(Error::Precondition(format!(
            "target length {l} is below the node's length {}",
            s.len()
        )));
    }
    let top = t.nodes().max_len().unwrap_or(0);
    if l > top {
        return Err(Error::Horizon(format!(
            "target length {l} is beyond the prefix's top level {top}"
        )));
    }
    let mut cur = s.clone();
    while cur.len() < l {
        let preferred = cur.child(prefer);
        let other = cur.child(!prefer);
        if t.nodes().contains(&preferred) {
            cur = preferred;
        } else if t.nodes().contains(&other) {
            cur = other;
        } else {
            return Err(Error::NotFound(format!(
                "strand {cur} has no extension at length {}",
                cur.len() + 1
            )));
        }
    }
    Ok(cur)
}

/// The passing bit of `u` read one step above its own length: the first bit
/// of its unique one-step successor in `t`, or `None` where `u` splits or
/// has no extension.
fn one_step_bit(t: &CodingTree, u: &BitSeq) -> Option<bool> {
    let zero = t.nodes().contains(&u.child(false));
    let one = t.nodes().contains(&u.child(true));
    match (zero, one) {
        (true, false) => Some(false),
        (false, true) => Some(true),
        _ => None,
    }
}

/// The subtree of `t` induced by a node set: the meet closure of the set
/// together with member restrictions at closure lengths, carrying every
/// coding designation of `t` — ghosts included — whose node survives in the
/// closure.  Unlike [`crate::similarity::induced_tree`], which re-derives
/// designations for a free-standing comparison and drops ghosts, this keeps
/// the ambient tree's full designation so witnessing intervals of the piece
/// match the ambient ones.
pub fn induced_subtree<I: IntoIterator<Item = BitSeq>>(
    t: &CodingTree,
    nodes: I,
) -> Result<CodingTree> {
    let levels = meet_closure_tree(nodes)?;
    let coding: Vec<(i64, BitSeq)> = t
        .coding_entries(true)
        .filter(|(_, c)| levels.contains(c))
        .map(|(n, c)| (n, c.clone()))
        .collect();
    CodingTree::new(t.k(), levels, coding, t.is_skew())
}

/// Extends every node of the level set `x` along the leftmost branches of
/// `t` to length `l`.  The result is returned in lexicographic order.  For a
/// free input the walk takes the 0 child at every opportunity, so the output
/// passes every coding node strictly between the two levels with 0, acquires
/// no new pre-clique over `x`, and is again free.
pub fn leftmost_extend(t: &CodingTree, x: &[BitSeq], l: usize) -> Result<Vec<BitSeq>> {
    if x.is_empty() {
        return Err(Error::EmptyInput("no nodes to extend".into()));
    }
    let lx = x[0].len();
    if x.iter().any(|n| n.len() != lx) {
        return Err(Error::Precondition(
            "the input must be a level set".into(),
        ));
    }
    if l < lx {
        return Err(Error::Precondition(format!(
            "target length {l} is below the level set's length {lx}"
        )));
    }
    for n in x {
        if !t.nodes().contains(n) {
            return Err(Error::Membership(format!("{n} is not a node of the tree")));
        }
    }
    let mut out = Vec::with_capacity(x.len());
    for n in x {
        out.push(walk_from(t, n, l, false)?);
    }
    out.sort();
    Ok(out)
}

/// Finds the first splitting node of `t` extending `s`, scanning levels in
/// increasing order (so `s` itself is returned when it already splits) and
/// lexicographically within a level.  Density of splitting nodes certifies a
/// hit at length at most `l_{n+k}`, where `n` is least with `|s| <= l_n`;
/// when the scan is cut short of that bound by `horizon` or by the prefix's
/// top, the failure is a horizon error.
pub fn splitting_extension(t: &CodingTree, s: &BitSeq, horizon: usize) -> Result<BitSeq> {
    if !t.nodes().contains_prefix(s) {
        return Err(Error::Membership(format!(
            "{s} is not in the tree's downward closure"
        )));
    }
    let n = t
        .coding_entries(false)
        .find(|(_, c)| c.len() >= s.len())
        .map(|(n, _)| n)
        .ok_or_else(|| {
            Error::Horizon(format!(
                "no coding level at or above length {} in this prefix",
                s.len()
            ))
        })?;
    // The certified window ends at the coding length `k` indices up; when
    // the prefix stops short of that length the scan still proceeds (a hit
    // below the window's end is a hit), only the exhausted outcome changes.
    let bound = t.coding_len(n + t.k() as i64);
    let top = t.nodes().max_len().unwrap_or(0);
    let cap = bound
        .unwrap_or(usize::MAX)
        .min(horizon)
        .min(top.saturating_sub(1));
    for l in s.len()..=cap {
        for node in t.nodes().level_set(l) {
            if s.is_prefix_of(node) && t.nodes().splits(node) {
                return Ok(node.clone());
            }
        }
    }
    match bound {
        Some(b) if cap >= b => Err(Error::NotFound(format!(
            "no splitting node over {s} within the certified window up to {b}"
        ))),
        _ => Err(Error::Horizon(format!(
            "no splitting node over {s} below length {cap}, short of the \
             certified window"
        ))),
    }
}

/// Extends the maximal level set of `a` to a coding level of `t`, realizing
/// the passing numbers `eps`: the search finds the first coding node with
/// index at least `from` whose strand extends the `d`-th maximal node, lifts
/// every other strand leftmost to the previous coding level and then
/// leftmost (for `eps = 0`) or rightmost (for `eps = 1`) one interval
/// further, and keeps the result only if every strand shows its prescribed
/// passing number at the coding node, no member set of two or more strands
/// acquires a pre-clique strictly between the base level and the final
/// interval, and the union keeps the witnessing property (the strong one
/// too, when `a` has it and the distinguished strand's pre-clique premise
/// holds).  Candidates failing any check are skipped, so the returned level
/// set always satisfies all three conclusions.  The result is indexed like
/// the maximal level set of `a` (lexicographic order), with the coding node
/// at position `d`.
pub fn passing_number_choice(
    t: &CodingTree,
    a: &CodingTree,
    d: usize,
    eps: &[bool],
    from: i64,
) -> Result<Vec<BitSeq>> {
    let tips: Vec<BitSeq> = a.nodes().top_level().to_vec();
    if tips.is_empty() {
        return Err(Error::EmptyInput("the subtree has no maximal nodes".into()));
    }
    if d >= tips.len() {
        return Err(Error::OutOfRange(format!(
            "index {d} into a maximal level set of {} nodes",
            tips.len()
        )));
    }
    if eps.len() != tips.len() {
        return Err(Error::Precondition(format!(
            "{} passing bits for {} maximal nodes",
            eps.len(),
            tips.len()
        )));
    }
    if eps[d] {
        return Err(Error::Precondition(
            "the distinguished strand must take passing number 0".into(),
        ));
    }
    for n in a.nodes().iter_nodes() {
        if !t.nodes().contains(n) {
            return Err(Error::Membership(format!(
                "{n} is not a node of the ambient tree"
            )));
        }
    }
    let la = tips[0].len();
    for (i, s) in tips.iter().enumerate() {
        if i != d && eps[i] && is_preclique(t, &[s.clone(), tips[d].clone()], t.k(), la) {
            return Err(Error::Precondition(format!(
                "passing number 1 prescribed at {s}, which forms a pre-{}-clique \
                 with the distinguished strand",
                t.k()
            )));
        }
    }
    if !freeness(t, &tips)? {
        return Err(Error::Precondition(
            "the maximal level set must be free in the ambient tree".into(),
        ));
    }
    let a_wp = witnessing_report(t, a, WitnessMode::Wp)?.holds;
    let a_swp = witnessing_report(t, a, WitnessMode::StrongWp)?.holds;
    let premise = t.k() == 3
        || witnesses_for(t, a, &[tips[d].clone()], la, t.k() - 1).is_some();
    let m = t
        .coding_entries(false)
        .find(|(_, c)| c.len() >= la)
        .map(|(n, _)| n)
        .ok_or_else(|| {
            Error::Horizon(format!(
                "no coding level at or above the base level {la} in this prefix"
            ))
        })?;
    let top = t.nodes().max_len().unwrap_or(0);
    let crits = t.critical_nodes();
    let lo = from.max(m + 1);
    let candidates: Vec<(i64, BitSeq)> = t
        .coding_entries(false)
        .filter(|(n, c)| *n >= lo && c.len() < top && tips[d].is_prefix_of(c))
        .map(|(n, c)| (n, c.clone()))
        .collect();
    'candidate: for (n, cn) in candidates {
        let ln = cn.len();
        let Some(ln_prev) = t.coding_len(n - 1) else {
            continue;
        };
        let mut y = Vec::with_capacity(tips.len());
        for (i, s) in tips.iter().enumerate() {
            if i == d {
                y.push(cn.clone());
            } else {
                let staged = walk_from(t, s, ln_prev, false)?;
                y.push(walk_from(t, &staged, ln, eps[i])?);
            }
        }
        for (i, u) in y.iter().enumerate() {
            if one_step_bit(t, u) != Some(eps[i]) {
                continue 'candidate;
            }
        }
        // Acquisitions by two or more strands must wait for the final
        // interval; the distinguished strand alone is exempt everywhere.
        let idx = crits.iter().position(|c| c.len == ln);
        let d_prev = match idx {
            Some(i) if i > 0 => crits[i - 1].len,
            _ => 0,
        };
        let events = preclique_schedule(t, &y, &ScheduleOptions::default())?;
        let early = events.iter().any(|e| {
            e.is_new
                && e.level > la
                && e.level <= d_prev
                && !(e.members.len() == 1 && e.members[0].is_prefix_of(&cn))
        });
        if early {
            continue;
        }
        let union = induced_subtree(
            t,
            a.nodes().iter_nodes().cloned().chain(y.iter().cloned()),
        )?;
        if a_wp && !witnessing_report(t, &union, WitnessMode::Wp)?.holds {
            continue;
        }
        if a_swp && premise && !witnessing_report(t, &union, WitnessMode::StrongWp)?.holds {
            continue;
        }
        return Ok(y);
    }
    Err(Error::Horizon(format!(
        "no coding level with index at least {lo} in this prefix realizes the \
         prescribed passing numbers"
    )))
}

/// Extends the strands of `x` (a subset of the maximal level set of `a`, in
/// the caller's enumeration order) so that each acquires one new splitting
/// node strictly above `l`, the splitting lengths strictly increasing along
/// the enumeration, while the strands of `z` are carried leftmost.  The
/// result is the level set at the coding level above the last split, listed
/// as the pairs of children of each new splitting node in enumeration order
/// (0 child first) followed by the `z` strands in their given order.  The
/// output is free; no member set of two or more strands acquires a
/// pre-clique over the maximal level set of `a`.
pub fn ordered_split_extend(
    t: &CodingTree,
    a: &CodingTree,
    x: &[BitSeq],
    z: &[BitSeq],
    l: usize,
) -> Result<Vec<BitSeq>> {
    if x.is_empty() {
        return Err(Error::Precondition(
            "at least one strand must acquire a splitting node".into(),
        ));
    }
    let tips: Vec<BitSeq> = a.nodes().top_level().to_vec();
    for n in a.nodes().iter_nodes() {
        if !t.nodes().contains(n) {
            return Err(Error::Membership(format!(
                "{n} is not a node of the ambient tree"
            )));
        }
    }
    for s in x.iter().chain(z) {
        if !tips.contains(s) {
            return Err(Error::Precondition(format!(
                "{s} is not a maximal node of the subtree"
            )));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for s in x.iter().chain(z) {
        if !seen.insert(s.clone()) {
            return Err(Error::Precondition(format!(
                "{s} is listed twice across the splitting and carried strands"
            )));
        }
    }
    if !freeness(t, &tips)? {
        return Err(Error::Precondition(
            "the maximal level set must be free in the ambient tree".into(),
        ));
    }
    let la = tips[0].len();
    let platform = t
        .coding_entries(false)
        .find(|(_, c)| c.len() >= l.max(la))
        .map(|(_, c)| c.len())
        .ok_or_else(|| {
            Error::Horizon(format!(
                "no coding level at or above length {} in this prefix",
                l.max(la)
            ))
        })?;
    let top = t.nodes().max_len().unwrap_or(0);
    let mut cur: Vec<BitSeq> = x
        .iter()
        .map(|s| walk_from(t, s, platform, false))
        .collect::<Result<_>>()?;
    let mut splits = Vec::with_capacity(x.len());
    let mut l_star = platform;
    for p in 0..cur.len() {
        let sp = splitting_extension(t, &cur[p], top)?;
        let resolve = t
            .coding_entries(false)
            .find(|(_, c)| c.len() > sp.len())
            .map(|(_, c)| c.len())
            .ok_or_else(|| {
                Error::Horizon(format!(
                    "no coding level above the splitting node at length {} in \
                     this prefix",
                    sp.len()
                ))
            })?;
        for q in cur.iter_mut().skip(p + 1) {
            *q = walk_from(t, q, resolve, false)?;
        }
        splits.push(sp);
        l_star = resolve;
    }
    let mut out = Vec::with_capacity(2 * x.len() + z.len());
    for sp in &splits {
        out.push(walk_from(t, &sp.child(false), l_star, false)?);
        out.push(walk_from(t, &sp.child(true), l_star, false)?);
    }
    for s in z {
        out.push(walk_from(t, s, l_star, false)?);
    }
    Ok(out)
}

/// All level sets of `t` up to length `horizon` that end-extend the pattern
/// of `x_tilde` and reproduce its similarity type over `a`: each member `X`
/// is free in `t`, the union of `a` and `X` is strongly similar to the union
/// of `a` and `x_tilde`, and `X` acquires no new pre-clique over `x_tilde` —
/// jointly equivalent to the unions being strongly isomorphic with the
/// extension valid in `t`.  Results are ordered by level and then
/// lexicographically; `x_tilde` itself is always the first.
pub fn ext_members(
    t: &CodingTree,
    a: &CodingTree,
    x_tilde: &[BitSeq],
    horizon: usize,
) -> Result<Vec<Vec<BitSeq>>> {
    if x_tilde.is_empty() {
        return Err(Error::EmptyInput("the seed level set is empty".into()));
    }
    let lx = x_tilde[0].len();
    if x_tilde.iter().any(|n| n.len() != lx) {
        return Err(Error::Precondition(
            "the seed must be a level set".into(),
        ));
    }
    for n in x_tilde.iter().chain(a.nodes().iter_nodes()) {
        if !t.nodes().contains(n) {
            return Err(Error::Membership(format!(
                "{n} is not a node of the ambient tree"
            )));
        }
    }
    let la = a.nodes().max_len().unwrap_or(0);
    if lx <= la {
        return Err(Error::Precondition(format!(
            "the seed level {lx} must lie strictly above the base's top level \
             {la}"
        )));
    }
    let top = t.nodes().max_len().unwrap_or(0);
    if horizon < lx {
        return Err(Error::Horizon(format!(
            "horizon {horizon} lies below the seed level {lx}"
        )));
    }
    let mut seed: Vec<BitSeq> = x_tilde.to_vec();
    seed.sort();
    let base_union = induced_subtree(
        t,
        a.nodes().iter_nodes().cloned().chain(seed.iter().cloned()),
    )?;
    if !validity(t, &base_union)? {
        return Err(Error::Precondition(
            "the union of the base and the seed must be valid in the ambient \
             tree"
            .into(),
        ));
    }
    let levels: Vec<usize> = (lx..=horizon.min(top)).collect();
    let per_level: Vec<Vec<Vec<BitSeq>>> = levels
        .into_par_iter()
        .map(|level| -> Result<Vec<Vec<BitSeq>>> {
            let lists: Vec<Vec<BitSeq>> = seed
                .iter()
                .map(|s| {
                    t.nodes()
                        .level_set(level)
                        .iter()
                        .filter(|n| s.is_prefix_of(n))
                        .cloned()
                        .collect()
                })
                .collect();
            if lists.iter().any(|l| l.is_empty()) {
                return Ok(Vec::new());
            }
            let mut found = Vec::new();
            for xs in lists
                .iter()
                .map(|l| l.iter().cloned())
                .multi_cartesian_product()
            {
                if !no_new_over(t, &xs, &seed)? {
                    continue;
                }
                if !freeness(t, &xs)? {
                    continue;
                }
                let union = induced_subtree(
                    t,
                    a.nodes().iter_nodes().cloned().chain(xs.iter().cloned()),
                )?;
                if strong_similarity_map(
                    &base_union,
                    &union,
                    SimilarityMode::Similar,
                    Some((t, t)),
                )?
                .is_none()
                {
                    continue;
                }
                found.push(xs);
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_level.into_iter().flatten().collect())
}
