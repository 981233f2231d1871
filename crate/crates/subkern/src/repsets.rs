//! Representative marking: shrink a host graph to a bounded vertex set that
//! still answers "does a pattern model extending φ0 survive after deleting
//! any ℓ vertices?". Constant-size remainders go through sunflower
//! stripping, thin bipartite remainders through a measure-driven recursion,
//! and `generic_repset` dispatches per component of pattern − separator.

use std::collections::{BTreeMap, BTreeSet};

use crate::detect::{self, ExtensionTask};
use crate::error::{input_err, Error, Result};
use crate::graph::{validate_partial_model, Graph};
use crate::recognize::{classify_all, for_each_combination, ComponentClass};

/// Sets whose pairwise intersections all equal the shared core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower {
    pub core: Vec<usize>,
    pub petals: Vec<Vec<usize>>,
}

impl Sunflower {
    /// Checks the defining property directly; a single petal passes.
    pub fn verify(&self) -> bool {
        let core: BTreeSet<usize> = self.core.iter().copied().collect();
        let petals: Vec<BTreeSet<usize>> =
            self.petals.iter().map(|p| p.iter().copied().collect()).collect();
        if petals.iter().any(|p| !core.is_subset(p)) {
            return false;
        }
        for i in 0..petals.len() {
            for j in i + 1..petals.len() {
                if petals[i].intersection(&petals[j]).copied().collect::<BTreeSet<_>>() != core {
                    return false;
                }
            }
        }
        true
    }
}

/// Greedy sunflower search. A maximal pairwise-disjoint subfamily either
/// already has k sets (a sunflower with empty core) or is hit by every set,
/// so the most frequent element (ties to the smallest) appears often enough
/// to recurse on. Families holding m!·(k−1)^m distinct sets of size at most
/// m always yield k petals.
pub fn find_sunflower(family: &[Vec<usize>], k: usize) -> Option<Sunflower> {
    if k == 0 {
        return Some(Sunflower { core: vec![], petals: vec![] });
    }
    let mut sets: Vec<Vec<usize>> = family
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    sets.sort();
    sets.dedup();
    sunflower_search(&sets, k)
}

fn sunflower_search(sets: &[Vec<usize>], k: usize) -> Option<Sunflower> {
    let mut taken: Vec<&Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for s in sets {
        if s.iter().all(|e| !seen.contains(e)) {
            taken.push(s);
            seen.extend(s.iter().copied());
            if taken.len() == k {
                return Some(Sunflower {
                    core: vec![],
                    petals: taken.into_iter().cloned().collect(),
                });
            }
        }
    }
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for s in sets {
        for &e in s {
            *freq.entry(e).or_default() += 1;
        }
    }
    let (&x, _) = freq.iter().max_by_key(|&(&e, &c)| (c, std::cmp::Reverse(e)))?;
    let mut reduced: Vec<Vec<usize>> = sets
        .iter()
        .filter(|s| s.binary_search(&x).is_ok())
        .map(|s| s.iter().copied().filter(|&e| e != x).collect())
        .collect();
    reduced.sort();
    reduced.dedup();
    let inner = sunflower_search(&reduced, k)?;
    let mut core = inner.core;
    core.push(x);
    core.sort_unstable();
    let petals = inner
        .petals
        .into_iter()
        .map(|mut p| {
            p.push(x);
            p.sort_unstable();
            p
        })
        .collect();
    Some(Sunflower { core, petals })
}

fn factorial(n: u32) -> u128 {
    (2..=u128::from(n)).fold(1, |acc, i| acc.saturating_mul(i))
}

fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Image sets φ(V(pattern) \ dom φ0) over every full model φ extending
/// `phi0`, deduplicated, each sorted ascending.
fn all_extension_image_sets(
    host: &Graph,
    pattern: &Graph,
    phi0: &BTreeMap<usize, usize>,
) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if pattern.vertex_count() > host.vertex_count() {
        return out;
    }
    let unplaced: Vec<usize> = pattern.vertices().filter(|v| !phi0.contains_key(v)).collect();
    let mut used = vec![false; host.vertex_count()];
    for &w in phi0.values() {
        used[w] = true;
    }
    fn rec(
        host: &Graph,
        pattern: &Graph,
        unplaced: &[usize],
        at: usize,
        phi: &mut BTreeMap<usize, usize>,
        used: &mut [bool],
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if at == unplaced.len() {
            let mut img: Vec<usize> = unplaced.iter().map(|v| phi[v]).collect();
            img.sort_unstable();
            out.insert(img);
            return;
        }
        let v = unplaced[at];
        for w in host.vertices() {
            if used[w] {
                continue;
            }
            let ok = pattern
                .neighbors(v)
                .iter()
                .filter(|u| phi.contains_key(u))
                .all(|u| host.has_edge(phi[u], w));
            if !ok {
                continue;
            }
            phi.insert(v, w);
            used[w] = true;
            rec(host, pattern, unplaced, at + 1, phi, used, out);
            phi.remove(&v);
            used[w] = false;
        }
    }
    let mut phi = phi0.clone();
    rec(host, pattern, &unplaced, 0, &mut phi, &mut used, &mut out);
    out
}

/// Marking for constant-size remainders. Collects the image sets of all
/// full extensions of `phi0` and strips the first petal of a sunflower
/// while one with budget+2 petals exists: a deletion of `budget` vertices
/// always leaves an untouched petal besides the stripped one, so the
/// survivors plus φ0's images answer extension queries after any such
/// deletion. Runs exhaustive enumeration, so the unplaced part of the
/// pattern must stay small.
pub fn repset_small(
    host: &Graph,
    pattern: &Graph,
    separator: &[usize],
    budget: usize,
    phi0: &BTreeMap<usize, usize>,
) -> Result<Vec<usize>> {
    if let Err(msg) = validate_partial_model(host, pattern, phi0) {
        return input_err(format!("invalid partial model: {msg}"));
    }
    for &v in separator {
        if v >= pattern.vertex_count() || !phi0.contains_key(&v) {
            return input_err(format!("separator vertex {v} must be placed by phi0"));
        }
    }
    let mut family: Vec<Vec<usize>> =
        all_extension_image_sets(host, pattern, phi0).into_iter().collect();
    while let Some(sf) = find_sunflower(&family, budget + 2) {
        let gone = &sf.petals[0];
        let at = family.iter().position(|s| s == gone).expect("petal comes from the family");
        family.remove(at);
    }
    let mut x: BTreeSet<usize> = phi0.values().copied().collect();
    x.extend(family.into_iter().flatten());
    let x: Vec<usize> = x.into_iter().collect();
    let alpha = (pattern.vertex_count() - phi0.len()) as u32;
    let bound = (pattern.vertex_count() as u128).saturating_add(
        factorial(alpha + 1).saturating_mul(pow_sat(budget as u128 + 1, alpha)),
    );
    assert!((x.len() as u128) <= bound, "marked set exceeds its size bound");
    Ok(x)
}

/// One thin-remainder marking problem: pattern − separator is connected and
/// bipartite with independent sides `side_a` / `side_b`, every separator
/// vertex is placed by `phi0`, and `b_n` lists the B-side vertices whose
/// closed neighborhood off the separator is not complete to the separator.
#[derive(Clone, Debug)]
pub struct ThinRepsetCall<'a> {
    pub host: &'a Graph,
    pub pattern: &'a Graph,
    pub separator: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub b_n: Vec<usize>,
    pub budget: usize,
    pub phi0: BTreeMap<usize, usize>,
}

impl<'a> ThinRepsetCall<'a> {
    /// Builds a call with `b_n` derived from the roles, then validates it.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        host: &'a Graph,
        pattern: &'a Graph,
        separator: Vec<usize>,
        side_a: Vec<usize>,
        side_b: Vec<usize>,
        budget: usize,
        phi0: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        let b_n = detect::non_universal_b(pattern, &separator, &side_b);
        let call = ThinRepsetCall { host, pattern, separator, side_a, side_b, b_n, budget, phi0 };
        call.validate()?;
        Ok(call)
    }

    fn validate(&self) -> Result<()> {
        if let Err(msg) = validate_partial_model(self.host, self.pattern, &self.phi0) {
            return input_err(format!("invalid partial model: {msg}"));
        }
        let n = self.pattern.vertex_count();
        let mut role = vec![0u8; n];
        for (vs, tag) in [(&self.separator, 1u8), (&self.side_a, 2), (&self.side_b, 3)] {
            for &v in vs.iter() {
                if v >= n {
                    return input_err(format!("vertex {v} out of range"));
                }
                if role[v] != 0 {
                    return input_err(format!("vertex {v} appears in two roles"));
                }
                role[v] = tag;
            }
        }
        if role.iter().any(|&r| r == 0) {
            return input_err("separator and sides must cover the pattern");
        }
        if self.side_a.is_empty() {
            return input_err("side A must be nonempty");
        }
        if self.side_a.len() > 30 {
            return Err(Error::Resource(format!(
                "side A of {} vertices needs too many marking pools",
                self.side_a.len()
            )));
        }
        for (u, v) in self.pattern.edges() {
            if role[u] >= 2 && role[u] == role[v] {
                return input_err(format!("edge {u}-{v} joins two vertices of one side"));
            }
        }
        for &d in &self.separator {
            if !self.phi0.contains_key(&d) {
                return input_err(format!("separator vertex {d} not placed"));
            }
        }
        let mut rest: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        rest.sort_unstable();
        let sub = self.pattern.induced_subgraph(&rest)?;
        if sub.graph.connected_components().len() != 1 {
            return input_err("pattern minus separator must be connected");
        }
        let expect = detect::non_universal_b(self.pattern, &self.separator, &self.side_b);
        let mut got = self.b_n.clone();
        got.sort_unstable();
        let mut want = expect;
        want.sort_unstable();
        if got != want {
            return input_err("b_n does not match the non-universal B vertices");
        }
        Ok(())
    }

    /// Work left before the recursion bottoms out: unplaced vertices of
    /// A ∪ B_N, plus per A-vertex the count of placed universal B-neighbors
    /// still missing out of |A| wanted. Strictly decreases along every
    /// recursive branch.
    pub fn measure(&self) -> usize {
        let alpha = self.side_a.len();
        let b_n: BTreeSet<usize> = self.b_n.iter().copied().collect();
        let b_all: BTreeSet<usize> = self.side_b.iter().copied().collect();
        let unplaced = self
            .side_a
            .iter()
            .chain(&self.b_n)
            .filter(|v| !self.phi0.contains_key(v))
            .count();
        let missing: usize = self
            .side_a
            .iter()
            .map(|&a| {
                let have = self
                    .pattern
                    .neighbors(a)
                    .iter()
                    .filter(|&u| {
                        self.phi0.contains_key(u) && b_all.contains(u) && !b_n.contains(u)
                    })
                    .count();
                alpha.saturating_sub(have)
            })
            .sum();
        unplaced + missing
    }
}

/// Marking for thin remainders: the returned vertex set X satisfies, for
/// every Z of at most `budget` vertices, that a full pattern model
/// extending φ0 in host − Z implies one in host[X] − Z agreeing with φ0 on
/// the separator.
pub fn repset_thin(call: &ThinRepsetCall) -> Result<Vec<usize>> {
    call.validate()?;
    let mut memo = BTreeMap::new();
    Ok(thin_mark(call, &mut memo)?.into_iter().collect())
}

/// Extends the call by placing v at w when that stays a valid partial
/// model: w unused and adjacent to the images of v's placed neighbors.
fn thin_child<'a>(call: &ThinRepsetCall<'a>, v: usize, w: usize) -> Option<ThinRepsetCall<'a>> {
    if call.phi0.values().any(|&img| img == w) {
        return None;
    }
    let ok = call
        .pattern
        .neighbors(v)
        .iter()
        .filter(|u| call.phi0.contains_key(u))
        .all(|u| call.host.has_edge(call.phi0[u], w));
    if !ok {
        return None;
    }
    let mut child = call.clone();
    child.phi0.insert(v, w);
    Some(child)
}

fn thin_bound(h: usize, budget: usize, alpha: usize, mu: usize) -> u128 {
    let (h, ell) = (h as u128, budget as u128);
    let cube = h.saturating_mul(h).saturating_mul(h);
    let base = h.saturating_mul(h).saturating_mul(ell).saturating_add(cube);
    let pools = pow_sat(2, alpha as u32).saturating_mul(ell.saturating_add(h));
    pow_sat(base, (mu as u32).saturating_add(1)).saturating_mul(pools.saturating_add(1))
}

fn thin_mark(
    call: &ThinRepsetCall,
    memo: &mut BTreeMap<Vec<(usize, usize)>, BTreeSet<usize>>,
) -> Result<BTreeSet<usize>> {
    let key: Vec<(usize, usize)> = call.phi0.iter().map(|(&v, &w)| (v, w)).collect();
    if let Some(done) = memo.get(&key) {
        return Ok(done.clone());
    }
    let (host, pattern, phi0) = (call.host, call.pattern, &call.phi0);
    let h = pattern.vertex_count();
    let cap = call.budget + h;
    let alpha = call.side_a.len();
    let mu = call.measure();
    let b_all: BTreeSet<usize> = call.side_b.iter().copied().collect();
    let b_n_set: BTreeSet<usize> = call.b_n.iter().copied().collect();
    let mut a_sorted = call.side_a.clone();
    a_sorted.sort_unstable();

    let x = 'done: {
        // an unplaced A vertex with |A| placed universal B neighbors is
        // confined to their common neighborhood (universality makes it
        // adjacent to the whole separator as well)
        let confined = a_sorted
            .iter()
            .copied()
            .filter(|a| !phi0.contains_key(a))
            .map(|a| {
                let r: Vec<usize> = pattern
                    .neighbors(a)
                    .iter()
                    .copied()
                    .filter(|u| {
                        phi0.contains_key(u) && b_all.contains(u) && !b_n_set.contains(u)
                    })
                    .collect();
                (a, r)
            })
            .find(|(_, r)| r.len() >= alpha);
        if let Some((a, r)) = confined {
            let mut pinned: Vec<usize> = r.iter().map(|v| phi0[v]).collect();
            pinned.extend(call.separator.iter().map(|v| phi0[v]));
            let t = host.common_neighborhood(&pinned);
            if t.len() >= cap {
                let mut x: BTreeSet<usize> = phi0.values().copied().collect();
                x.extend(t.into_iter().take(cap));
                break 'done x;
            }
            let mut x = BTreeSet::new();
            for w in t {
                let Some(child) = thin_child(call, a, w) else { continue };
                assert!(child.measure() < mu, "recursion must shrink the measure");
                x.extend(thin_mark(&child, memo)?);
            }
            break 'done x;
        }
        // otherwise pack disjoint extensions, dropping the universal B
        // vertices whose whole neighborhood is placed: those can be
        // re-placed afterwards inside marked common-neighborhood pools
        let dropped: BTreeSet<usize> = call
            .side_b
            .iter()
            .copied()
            .filter(|v| !b_n_set.contains(v))
            .filter(|&v| pattern.neighbors(v).iter().all(|u| phi0.contains_key(u)))
            .collect();
        let keep: Vec<usize> = pattern.vertices().filter(|v| !dropped.contains(v)).collect();
        let free: Vec<usize> = keep.iter().copied().filter(|v| !phi0.contains_key(v)).collect();
        let mut packing: Vec<Vec<usize>> = Vec::new();
        let mut fresh: BTreeSet<usize> = BTreeSet::new();
        if free.is_empty() {
            // nothing left to pack: the placed images alone stand in for a
            // full packing
            let imgs: Vec<usize> = keep.iter().map(|v| phi0[v]).collect();
            packing = vec![imgs; cap];
        } else {
            let sub = pattern.induced_subgraph(&keep).expect("pattern ids in range");
            let new_id: BTreeMap<usize, usize> =
                sub.old_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let relabel = |vs: &[usize]| -> Vec<usize> {
                vs.iter().filter(|v| new_id.contains_key(v)).map(|v| new_id[v]).collect()
            };
            let task = ExtensionTask {
                host,
                pattern: &sub.graph,
                separator: relabel(&call.separator),
                side_a: relabel(&call.side_a),
                side_b: relabel(&call.side_b),
                b_n: relabel(&call.b_n),
                phi0: phi0
                    .iter()
                    .filter(|(v, _)| new_id.contains_key(v))
                    .map(|(v, &w)| (new_id[v], w))
                    .collect(),
            };
            let free_new: Vec<usize> = free.iter().map(|v| new_id[v]).collect();
            let mut allowed = vec![true; host.vertex_count()];
            while packing.len() < cap {
                let Some(phi) = detect::extend_separated_in(&task, Some(&allowed))? else {
                    break;
                };
                for &v in &free_new {
                    allowed[phi[&v]] = false;
                    fresh.insert(phi[&v]);
                }
                packing.push(phi.values().copied().collect());
            }
        }
        if packing.len() < cap {
            // the packing is maximal but small, so every surviving model
            // reuses one of its fresh vertices somewhere
            let mut x = BTreeSet::new();
            for &v in &free {
                for &w in &fresh {
                    let Some(child) = thin_child(call, v, w) else { continue };
                    assert!(child.measure() < mu, "recursion must shrink the measure");
                    x.extend(thin_mark(&child, memo)?);
                }
            }
            break 'done x;
        }
        // enough disjoint extensions: keep them all, plus re-placement
        // pools for the dropped B vertices, one per subset of placed A
        // vertices (a dropped vertex's placed neighbors form such a subset)
        let mut x: BTreeSet<usize> = packing.into_iter().flatten().collect();
        let a_placed: Vec<usize> =
            a_sorted.iter().copied().filter(|v| phi0.contains_key(v)).collect();
        for mask in 0u64..(1u64 << a_placed.len()) {
            let mut pinned: Vec<usize> = call.separator.iter().map(|v| phi0[v]).collect();
            for (i, a) in a_placed.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    pinned.push(phi0[a]);
                }
            }
            x.extend(host.common_neighborhood(&pinned).into_iter().take(cap));
        }
        x
    };
    let bound = thin_bound(h, call.budget, alpha, mu);
    assert!((x.len() as u128) <= bound, "marked set exceeds its size bound");
    memo.insert(key, x.clone());
    Ok(x)
}

/// Marking for complete bipartite patterns with a small side of b and a
/// large side of `ell` vertices: after deleting any k vertices from the
/// host, a K_{b,ell} whose sides extend (`a_pre`, `b_pre`) survives in the
/// original iff some K_{b,ell} survives inside the marked set.
pub fn repset_biclique(
    host: &Graph,
    b: usize,
    ell: usize,
    k: usize,
    a_pre: &[usize],
    b_pre: &[usize],
) -> Result<Vec<usize>> {
    if ell <= b {
        return input_err(format!("large side {ell} must exceed small side {b}"));
    }
    if k < ell + b {
        return input_err(format!("deletion budget {k} cannot cover one K_{{{b},{ell}}}"));
    }
    let n = host.vertex_count();
    if a_pre.iter().chain(b_pre).any(|&v| v >= n) {
        return input_err("pinned vertex out of range");
    }
    let a_set: BTreeSet<usize> = a_pre.iter().copied().collect();
    let b_set: BTreeSet<usize> = b_pre.iter().copied().collect();
    if a_set.len() != a_pre.len() || b_set.len() != b_pre.len() {
        return input_err("pinned sides must be duplicate-free");
    }
    if a_set.intersection(&b_set).next().is_some() {
        return input_err("pinned sides must be disjoint");
    }
    if a_set.len() > b || b_set.len() > b {
        return input_err(format!("pinned sides must hold at most {b} vertices"));
    }
    let mut memo = BTreeMap::new();
    Ok(biclique_mark(host, b, ell, k, &a_set, &b_set, &mut memo).into_iter().collect())
}

type PinKey = (Vec<usize>, Vec<usize>);

fn biclique_mark(
    host: &Graph,
    b: usize,
    ell: usize,
    k: usize,
    a_set: &BTreeSet<usize>,
    b_set: &BTreeSet<usize>,
    memo: &mut BTreeMap<PinKey, BTreeSet<usize>>,
) -> BTreeSet<usize> {
    let key: PinKey =
        (a_set.iter().copied().collect(), b_set.iter().copied().collect());
    if let Some(done) = memo.get(&key) {
        return done.clone();
    }
    let spots = k + ell;
    let x = if a_set.len() == b {
        // the whole large side lives in the common neighborhood of A'
        let a_vec: Vec<usize> = a_set.iter().copied().collect();
        let mut x: BTreeSet<usize> = a_set.union(b_set).copied().collect();
        x.extend(host.common_neighborhood(&a_vec).into_iter().take(spots));
        x
    } else if b_set.len() == b {
        // B' is as large as any small side gets, so the remaining small-side
        // vertices live in its common neighborhood
        let b_vec: Vec<usize> = b_set.iter().copied().collect();
        let t = host.common_neighborhood(&b_vec);
        if t.len() >= spots {
            let mut x: BTreeSet<usize> = b_set.clone();
            x.extend(t.into_iter().take(spots));
            x
        } else {
            let mut x = BTreeSet::new();
            for w in t {
                if a_set.contains(&w) || b_set.contains(&w) {
                    continue;
                }
                let mut a2 = a_set.clone();
                a2.insert(w);
                x.extend(biclique_mark(host, b, ell, k, &a2, b_set, memo));
            }
            x
        }
    } else {
        let packing = biclique_packing(host, b, ell, k, a_set, b_set);
        if packing.len() > k {
            // k deletions cannot touch all members, so the union preserves
            // an intact extension
            packing.into_iter().flatten().collect()
        } else {
            // a maximal small packing: every surviving extension shares a
            // vertex with it, on one side or the other
            let touched: BTreeSet<usize> = packing.into_iter().flatten().collect();
            let mut x = BTreeSet::new();
            for &w in &touched {
                if a_set.contains(&w) || b_set.contains(&w) {
                    continue;
                }
                let mut a2 = a_set.clone();
                a2.insert(w);
                x.extend(biclique_mark(host, b, ell, k, &a2, b_set, memo));
                let mut b2 = b_set.clone();
                b2.insert(w);
                x.extend(biclique_mark(host, b, ell, k, a_set, &b2, memo));
            }
            x
        }
    };
    let missing = (2 * b - a_set.len() - b_set.len()) as u32;
    let kk = k as u128;
    let bound = pow_sat(3 * kk * kk, missing).max(3 * kk);
    assert!((x.len() as u128) <= bound, "marked set exceeds its size bound");
    memo.insert(key, x.clone());
    x
}

/// Maximal family (stopped at k+1) of K_{b,ell} vertex sets extending the
/// pins and pairwise intersecting only in them. Small-side completions are
/// tried in lexicographic order; large sides take the lowest fresh common
/// neighbors.
fn biclique_packing(
    host: &Graph,
    b: usize,
    ell: usize,
    k: usize,
    a_set: &BTreeSet<usize>,
    b_set: &BTreeSet<usize>,
) -> Vec<Vec<usize>> {
    let mut used = vec![false; host.vertex_count()];
    let mut packing: Vec<Vec<usize>> = Vec::new();
    while packing.len() <= k {
        let avail: Vec<usize> = host
            .vertices()
            .filter(|&v| !used[v] && !a_set.contains(&v) && !b_set.contains(&v))
            .collect();
        let need_a = b - a_set.len();
        let need_b = ell - b_set.len();
        let mut found: Option<Vec<usize>> = None;
        for_each_combination(avail.len(), need_a, &mut |picks| {
            if found.is_some() {
                return;
            }
            let mut small: Vec<usize> = a_set.iter().copied().collect();
            small.extend(picks.iter().map(|&i| avail[i]));
            if !b_set.iter().all(|&u| small.iter().all(|&v| host.has_edge(u, v))) {
                return;
            }
            let extra: Vec<usize> = host
                .common_neighborhood(&small)
                .into_iter()
                .filter(|&w| !used[w] && !b_set.contains(&w))
                .take(need_b)
                .collect();
            if extra.len() == need_b {
                let mut verts = small;
                verts.extend(b_set.iter().copied());
                verts.extend(extra);
                verts.sort_unstable();
                found = Some(verts);
            }
        });
        let Some(verts) = found else { break };
        for &v in &verts {
            if !a_set.contains(&v) && !b_set.contains(&v) {
                used[v] = true;
            }
        }
        packing.push(verts);
    }
    packing
}

/// Per-component marking for split patterns. `separator` must realize an
/// (a, b, |separator|, d)-split of the pattern and `phi0` must place exactly
/// the separator. Each component of pattern − separator, together with its
/// separator neighbors, is marked against a deletion budget of
/// |V(pattern)| − (component size + neighbors); the host restricted to the
/// union has a full pattern model extending φ0 iff the host does.
pub fn generic_repset(
    host: &Graph,
    pattern: &Graph,
    separator: &[usize],
    phi0: &BTreeMap<usize, usize>,
    a: usize,
    b: usize,
    d: usize,
) -> Result<Vec<usize>> {
    Ok(generic_repset_with_bound(host, pattern, separator, phi0, a, b, d)?.0)
}

/// Same marking plus the ceiling it is held to: |φ0| added to the
/// per-component formulas (factorial for small remainders, measure-indexed
/// for thin ones). The ceiling depends on the pattern, the split, and φ0's
/// domain but never its values, so a caller unioning markings over many
/// placements of the same separator may multiply it by the placement count.
pub fn generic_repset_with_bound(
    host: &Graph,
    pattern: &Graph,
    separator: &[usize],
    phi0: &BTreeMap<usize, usize>,
    a: usize,
    b: usize,
    d: usize,
) -> Result<(Vec<usize>, u128)> {
    if let Err(msg) = validate_partial_model(host, pattern, phi0) {
        return input_err(format!("invalid partial model: {msg}"));
    }
    let mut sep = separator.to_vec();
    sep.sort_unstable();
    sep.dedup();
    if sep.len() != separator.len() {
        return input_err("separator must be duplicate-free");
    }
    if sep.iter().any(|&v| v >= pattern.vertex_count()) {
        return input_err("separator vertex out of range");
    }
    if phi0.len() != sep.len() || sep.iter().any(|v| !phi0.contains_key(v)) {
        return input_err("phi0 must place exactly the separator");
    }
    let Some(components) = classify_all(pattern, &sep, a, b, d) else {
        return input_err("separator does not realize the required split");
    };
    let k = pattern.vertex_count();
    let mut x: BTreeSet<usize> = phi0.values().copied().collect();
    let mut total: u128 = phi0.len() as u128;
    for comp in components {
        let mut keep: BTreeSet<usize> = comp.vertices.iter().copied().collect();
        for &v in &comp.vertices {
            keep.extend(pattern.neighbors(v).iter().copied());
        }
        let keep: Vec<usize> = keep.into_iter().collect();
        let sub = pattern.induced_subgraph(&keep).expect("pattern ids in range");
        let new_id: BTreeMap<usize, usize> =
            sub.old_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sep_hat: Vec<usize> = keep
            .iter()
            .filter(|v| sep.binary_search(v).is_ok())
            .map(|v| new_id[v])
            .collect();
        let phi_hat: BTreeMap<usize, usize> = phi0
            .iter()
            .filter(|(v, _)| new_id.contains_key(v))
            .map(|(v, &w)| (new_id[v], w))
            .collect();
        let ell_hat = k - keep.len();
        let small_ceiling = || {
            let alpha = (keep.len() - sep_hat.len()) as u32;
            (keep.len() as u128).saturating_add(
                factorial(alpha + 1).saturating_mul(pow_sat(ell_hat as u128 + 1, alpha)),
            )
        };
        let (marked, ceiling) = match &comp.class {
            ComponentClass::Small => {
                let ceiling = small_ceiling();
                (repset_small(host, &sub.graph, &sep_hat, ell_hat, &phi_hat)?, ceiling)
            }
            ComponentClass::Thin { a_side, .. } if a_side.is_empty() => {
                // a lone vertex past the size threshold: exhaustive marking
                // is still constant-size
                debug_assert_eq!(comp.vertices.len(), 1);
                let ceiling = small_ceiling();
                (repset_small(host, &sub.graph, &sep_hat, ell_hat, &phi_hat)?, ceiling)
            }
            ComponentClass::Thin { a_side, b_side, .. } => {
                let call = ThinRepsetCall::new(
                    host,
                    &sub.graph,
                    sep_hat.clone(),
                    a_side.iter().map(|v| new_id[v]).collect(),
                    b_side.iter().map(|v| new_id[v]).collect(),
                    ell_hat,
                    phi_hat,
                )?;
                let ceiling =
                    thin_bound(sub.graph.vertex_count(), ell_hat, a_side.len(), call.measure());
                (repset_thin(&call)?, ceiling)
            }
        };
        total = total.saturating_add(ceiling);
        x.extend(marked);
    }
    Ok((x.into_iter().collect(), total))
}
