//! Polynomial-time construction of full pattern models: partial-model
//! extension through bipartite matching, the separated extension around a
//! placed separator, the randomized test for matching-splittable patterns,
//! and centered subdivided-star models.

use std::collections::BTreeMap;

use crate::error::{input_err, Result};
use crate::families::CenteredPattern;
use crate::graph::{validate_partial_model, Graph, Multigraph};
use crate::matching::{
    colored_matching, max_bipartite_matching, min_weight_matching_of_size, ColorDemand,
    RandomnessConfig,
};
use crate::recognize::is_matching_splittable;

/// One extension problem: extend `phi0` (domain ⊇ separator) to a full
/// model of `pattern` in `host`. `side_a` / `side_b` are the two
/// independent sides of pattern − separator; `b_n` holds the B-side
/// vertices whose closed neighborhood off the separator is not complete
/// to the separator (these must be placed by enumeration, the rest by
/// matching).
#[derive(Clone, Debug)]
pub struct ExtensionTask<'a> {
    pub host: &'a Graph,
    pub pattern: &'a Graph,
    pub separator: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub b_n: Vec<usize>,
    pub phi0: BTreeMap<usize, usize>,
}

/// Shared role checks: phi0 is a partial model, separator/side_a/side_b
/// partition the pattern, neither side has internal edges, separator ⊆
/// placed, b_n ⊆ side_b.
fn validate_roles(task: &ExtensionTask) -> Result<()> {
    let ExtensionTask { host, pattern, separator, side_a, side_b, b_n, phi0 } = task;
    if let Err(msg) = validate_partial_model(host, pattern, phi0) {
        return input_err(format!("invalid partial model: {msg}"));
    }
    let mut role = vec![0u8; pattern.vertex_count()];
    for (vs, tag) in [(separator, 1u8), (side_a, 2), (side_b, 3)] {
        for &v in vs.iter() {
            if v >= pattern.vertex_count() {
                return input_err(format!("pattern vertex {v} out of range"));
            }
            if role[v] != 0 {
                return input_err(format!("pattern vertex {v} in two roles"));
            }
            role[v] = tag;
        }
    }
    if role.iter().any(|&r| r == 0) {
        return input_err("separator and sides must cover the pattern");
    }
    for (u, v) in pattern.edges() {
        if role[u] >= 2 && role[u] == role[v] {
            return input_err(format!("edge {u}-{v} inside one side"));
        }
    }
    for &d in separator {
        if !phi0.contains_key(&d) {
            return input_err(format!("separator vertex {d} not placed"));
        }
    }
    for &b in b_n {
        if role.get(b).copied() != Some(3) {
            return input_err(format!("b_n vertex {b} not on the B side"));
        }
    }
    Ok(())
}

/// Extends a partial model with the whole A side (and the separator)
/// preplaced. Groups the unplaced B-side vertices by their placed
/// neighborhood, builds the auxiliary bipartite graph whose one side is
/// one slot per unplaced vertex (slots of a group are false twins, allowed
/// into the common host neighborhood of the group's placed images) and
/// whose other side is the free host vertices; a matching saturating every
/// slot is exactly an extension.
pub fn extend_bipartite_model(task: &ExtensionTask) -> Result<Option<BTreeMap<usize, usize>>> {
    validate_roles(task)?;
    for &a in &task.side_a {
        if !task.phi0.contains_key(&a) {
            return input_err(format!("A-side vertex {a} not placed"));
        }
    }
    extend_by_matching(task.host, task.pattern, &task.phi0, None)
}

/// Inner matching-based extension: every unplaced pattern vertex must have
/// all its neighbors placed. `universe`, when given, restricts the host
/// vertices new placements may use.
fn extend_by_matching(
    host: &Graph,
    pattern: &Graph,
    phi0: &BTreeMap<usize, usize>,
    universe: Option<&[bool]>,
) -> Result<Option<BTreeMap<usize, usize>>> {
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    let unplaced: Vec<usize> =
        pattern.vertices().filter(|v| !phi0.contains_key(v)).collect();
    for &b in &unplaced {
        if pattern.neighbors(b).iter().any(|u| !phi0.contains_key(u)) {
            return input_err(format!("unplaced vertex {b} has an unplaced neighbor"));
        }
    }
    if unplaced.is_empty() {
        return Ok(Some(phi0.clone()));
    }
    let mut used = vec![false; host.vertex_count()];
    for &w in phi0.values() {
        used[w] = true;
    }
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &b in &unplaced {
        groups.entry(pattern.neighbors(b).to_vec()).or_default().push(b);
    }
    // auxiliary bipartite graph: slots 0..t, then all host vertices
    let slots: Vec<usize> = groups.values().flatten().copied().collect();
    let t = slots.len();
    let mut aux = Graph::new(t + host.vertex_count());
    let mut slot_id = 0;
    for (nbhd, members) in &groups {
        let images: Vec<usize> = nbhd.iter().map(|u| phi0[u]).collect();
        let allowed: Vec<usize> = host
            .common_neighborhood(&images)
            .into_iter()
            .filter(|&w| !used[w] && universe.map_or(true, |uni| uni[w]))
            .collect();
        for _ in members {
            for &w in &allowed {
                aux.add_edge(slot_id, t + w);
            }
            slot_id += 1;
        }
    }
    let part_a: Vec<usize> = (0..t).collect();
    let part_b: Vec<usize> = (t..t + host.vertex_count()).collect();
    let matching = max_bipartite_matching(&aux, &part_a, &part_b)?;
    if matching.len() < t {
        return Ok(None);
    }
    let mut full = phi0.clone();
    for (slot, w) in matching {
        full.insert(slots[slot], w - t);
    }
    debug_assert!(validate_partial_model(host, pattern, &full).is_ok());
    Ok(Some(full))
}

/// B-side vertices whose closed neighborhood off the separator is not
/// complete to the whole separator. Any other B vertex can always be
/// re-placed inside the common host neighborhood of the separator's
/// images, so only these need direct enumeration.
pub fn non_universal_b(pattern: &Graph, separator: &[usize], side_b: &[usize]) -> Vec<usize> {
    let in_sep = {
        let mut m = vec![false; pattern.vertex_count()];
        for &v in separator {
            m[v] = true;
        }
        m
    };
    side_b
        .iter()
        .copied()
        .filter(|&b| {
            let mut closed: Vec<usize> =
                pattern.neighbors(b).iter().copied().filter(|&u| !in_sep[u]).collect();
            closed.push(b);
            !closed
                .iter()
                .all(|&u| separator.iter().all(|&d| pattern.has_edge(u, d)))
        })
        .collect()
}

/// Extends a partial model across a separated bipartite remainder: places
/// every vertex of (A ∪ B_N) \ P0 by direct enumeration (lexicographic
/// over host ids, first success), then restricts the host to the placed
/// images plus the common neighborhood of the separator's images and
/// finishes the leftover B side by matching.
pub fn extend_separated_model(task: &ExtensionTask) -> Result<Option<BTreeMap<usize, usize>>> {
    extend_separated_in(task, None)
}

/// Separated extension with an optional host-vertex mask: new placements
/// (enumerated and matched alike) may only use allowed vertices, while the
/// preplaced images of `phi0` are exempt. Used for packing pairwise
/// disjoint extensions of a shared partial model.
pub(crate) fn extend_separated_in(
    task: &ExtensionTask,
    allowed: Option<&[bool]>,
) -> Result<Option<BTreeMap<usize, usize>>> {
    validate_roles(task)?;
    let ExtensionTask { host, pattern, separator, side_a, side_b, b_n, phi0 } = task;
    // completeness guard: every non-universal B vertex must be enumerated
    // or already placed, otherwise the final host restriction could cut
    // off all of its valid images
    for v in non_universal_b(pattern, separator, side_b) {
        if !b_n.contains(&v) && !phi0.contains_key(&v) {
            return input_err(format!(
                "vertex {v} is not universal to the separator but missing from b_n"
            ));
        }
    }
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    let mut to_place: Vec<usize> = side_a
        .iter()
        .chain(b_n.iter())
        .copied()
        .filter(|v| !phi0.contains_key(v))
        .collect();
    to_place.sort_unstable();
    to_place.dedup();
    let sep_images: Vec<usize> = separator.iter().map(|&d| phi0[&d]).collect();
    let free: Vec<bool> =
        allowed.map_or_else(|| vec![true; host.vertex_count()], <[bool]>::to_vec);
    let mut universe = vec![false; host.vertex_count()];
    for w in host.common_neighborhood(&sep_images) {
        universe[w] = free[w];
    }

    fn place(
        host: &Graph,
        pattern: &Graph,
        order: &[usize],
        phi: &mut BTreeMap<usize, usize>,
        used: &mut Vec<bool>,
        universe: &[bool],
        free: &[bool],
    ) -> Result<Option<BTreeMap<usize, usize>>> {
        let Some((&v, rest)) = order.split_first() else {
            let mut uni = universe.to_vec();
            for &w in phi.values() {
                uni[w] = true;
            }
            return extend_by_matching(host, pattern, phi, Some(&uni));
        };
        for w in host.vertices() {
            if used[w] || !free[w] {
                continue;
            }
            let ok = pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|u| phi.contains_key(u))
                .all(|u| host.has_edge(phi[&u], w));
            if !ok {
                continue;
            }
            phi.insert(v, w);
            used[w] = true;
            let found = place(host, pattern, rest, phi, used, universe, free)?;
            phi.remove(&v);
            used[w] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    let mut phi = phi0.clone();
    let mut used = vec![false; host.vertex_count()];
    for &w in phi.values() {
        used[w] = true;
    }
    place(host, pattern, &to_place, &mut phi, &mut used, &universe, &free)
}

/// Randomized full-model search for a c-matching-splittable pattern. Finds
/// the separator S, then for every injective placement of S (lexicographic
/// over host ids, first success wins) reduces the rest to one colored
/// matching instance: each leftover host vertex v gets a pendant twin v'
/// with one {v,v'} edge per demanded single-vertex attachment subset v
/// supports, and each leftover host edge gets one parallel edge per
/// demanded two-vertex attachment pair it supports. One-sided error:
/// absence may be a miss, a returned model is always validated.
pub fn matching_splittable_test(
    host: &Graph,
    pattern: &Graph,
    c: usize,
    rc: &RandomnessConfig,
) -> Result<Option<BTreeMap<usize, usize>>> {
    let Some(s) = is_matching_splittable(pattern, c) else {
        return input_err(format!("pattern is not {c}-matching-splittable"));
    };
    if s.len() > 30 {
        return input_err("separator too large for subset encoding");
    }
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    // components of pattern − S, keyed by attachment masks over S positions
    let pos_of: BTreeMap<usize, usize> = s.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mask_of = |v: usize| -> u32 {
        let mut m = 0u32;
        for &u in pattern.neighbors(v) {
            if let Some(&i) = pos_of.get(&u) {
                m |= 1 << i;
            }
        }
        m
    };
    let rest: Vec<usize> = pattern.vertices().filter(|v| !pos_of.contains_key(v)).collect();
    let sub = pattern.induced_subgraph(&rest).expect("in range");
    let mut singles: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    // pair components keyed by (lo, hi) mask; members as (lo-vertex, hi-vertex)
    let mut pairs: BTreeMap<(u32, u32), Vec<(usize, usize)>> = BTreeMap::new();
    for comp in sub.graph.connected_components() {
        let verts: Vec<usize> = comp.iter().map(|&v| sub.old_ids[v]).collect();
        match verts.as_slice() {
            [u] => singles.entry(mask_of(*u)).or_default().push(*u),
            [p, q] => {
                let (mp, mq) = (mask_of(*p), mask_of(*q));
                if mp <= mq {
                    pairs.entry((mp, mq)).or_default().push((*p, *q));
                } else {
                    pairs.entry((mq, mp)).or_default().push((*q, *p));
                }
            }
            _ => unreachable!("matching-splittable leaves components of ≤ 2 vertices"),
        }
    }
    // flat colors: demanded single masks ascending, then demanded pairs lex
    let mut color_of_single: BTreeMap<u32, usize> = BTreeMap::new();
    let mut color_of_pair: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut demands: ColorDemand = ColorDemand::new();
    let mut next_color = 1;
    for (&m, members) in &singles {
        color_of_single.insert(m, next_color);
        demands.insert(next_color, members.len());
        next_color += 1;
    }
    for (&key, members) in &pairs {
        color_of_pair.insert(key, next_color);
        demands.insert(next_color, members.len());
        next_color += 1;
    }

    let mut placement: Vec<usize> = Vec::with_capacity(s.len());
    let mut used = vec![false; host.vertex_count()];
    enum_placements(host, pattern, &s, &mut placement, &mut used, &mut |phi0| {
        try_splittable_placement(
            host, pattern, &s, phi0, &singles, &pairs, &color_of_single, &color_of_pair,
            &demands, rc,
        )
    })
}

/// Depth-first injective, edge-preserving placement of `s` in ascending
/// host-id order, invoking `f` on each complete placement; first Some wins.
fn enum_placements(
    host: &Graph,
    pattern: &Graph,
    s: &[usize],
    placement: &mut Vec<usize>,
    used: &mut Vec<bool>,
    f: &mut impl FnMut(&BTreeMap<usize, usize>) -> Result<Option<BTreeMap<usize, usize>>>,
) -> Result<Option<BTreeMap<usize, usize>>> {
    if placement.len() == s.len() {
        let phi0: BTreeMap<usize, usize> =
            s.iter().copied().zip(placement.iter().copied()).collect();
        return f(&phi0);
    }
    let v = s[placement.len()];
    for w in host.vertices() {
        if used[w] {
            continue;
        }
        let ok = (0..placement.len())
            .all(|i| !pattern.has_edge(s[i], v) || host.has_edge(placement[i], w));
        if !ok {
            continue;
        }
        placement.push(w);
        used[w] = true;
        let found = enum_placements(host, pattern, s, placement, used, f)?;
        placement.pop();
        used[w] = false;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn try_splittable_placement(
    host: &Graph,
    pattern: &Graph,
    s: &[usize],
    phi0: &BTreeMap<usize, usize>,
    singles: &BTreeMap<u32, Vec<usize>>,
    pairs: &BTreeMap<(u32, u32), Vec<(usize, usize)>>,
    color_of_single: &BTreeMap<u32, usize>,
    color_of_pair: &BTreeMap<(u32, u32), usize>,
    demands: &ColorDemand,
    rc: &RandomnessConfig,
) -> Result<Option<BTreeMap<usize, usize>>> {
    let n_host = host.vertex_count();
    let mut image = vec![false; n_host];
    for &w in phi0.values() {
        image[w] = true;
    }
    // host-side adjacency masks over S positions
    let mut hmask = vec![0u32; n_host];
    for w in host.vertices() {
        if image[w] {
            continue;
        }
        for (i, &sv) in s.iter().enumerate() {
            if host.has_edge(phi0[&sv], w) {
                hmask[w] |= 1 << i;
            }
        }
    }
    enum Cand {
        Single { w: usize, mask: u32 },
        Pair { w1: usize, w2: usize, key: (u32, u32) },
    }
    let mut cands: Vec<(Cand, usize)> = Vec::new(); // (gadget, color)
    for w in host.vertices().filter(|&w| !image[w]) {
        for (&m, &color) in color_of_single {
            if m & hmask[w] == m {
                cands.push((Cand::Single { w, mask: m }, color));
            }
        }
    }
    for (w1, w2) in host.edges() {
        if image[w1] || image[w2] {
            continue;
        }
        for (&(x, y), &color) in color_of_pair {
            let fits = (x & hmask[w1] == x && y & hmask[w2] == y)
                || (x & hmask[w2] == x && y & hmask[w1] == y);
            if fits {
                cands.push((Cand::Pair { w1, w2, key: (x, y) }, color));
            }
        }
    }
    // cheap necessary condition before the randomized engine
    for (&color, &need) in demands {
        if cands.iter().filter(|(_, c)| *c == color).count() < need {
            return Ok(None);
        }
    }
    // compact multigraph over hosts that carry a gadget (twin v' only when
    // v has single-type gadgets); everything else could only ever be
    // pad-matched, so dropping it keeps the weight base low
    let mut mg_id = vec![usize::MAX; n_host];
    let mut twin_id = vec![usize::MAX; n_host];
    let mut n_mg = 0;
    for (cand, _) in &cands {
        match *cand {
            Cand::Single { w, .. } => {
                if mg_id[w] == usize::MAX {
                    mg_id[w] = n_mg;
                    n_mg += 1;
                }
                if twin_id[w] == usize::MAX {
                    twin_id[w] = n_mg;
                    n_mg += 1;
                }
            }
            Cand::Pair { w1, w2, .. } => {
                for w in [w1, w2] {
                    if mg_id[w] == usize::MAX {
                        mg_id[w] = n_mg;
                        n_mg += 1;
                    }
                }
            }
        }
    }
    let mut mg = Multigraph::new(n_mg);
    for (cand, color) in &cands {
        match *cand {
            Cand::Single { w, .. } => mg.add_edge(mg_id[w], twin_id[w], 0, Some(*color)),
            Cand::Pair { w1, w2, .. } => mg.add_edge(mg_id[w1], mg_id[w2], 0, Some(*color)),
        }
    }
    let Some(matched) = colored_matching(&mg, demands, rc)? else {
        return Ok(None);
    };
    // rebuild the model: hand out components per color class in canonical
    // order (multigraph edge i corresponds to cands[i])
    let mut full = phi0.clone();
    let mut sidx: BTreeMap<u32, usize> = BTreeMap::new();
    let mut pidx: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut hit: Vec<&(Cand, usize)> = matched.iter().map(|&e| &cands[e]).collect();
    hit.sort_by_key(|(cand, _)| match *cand {
        Cand::Single { w, .. } => (w, n_host),
        Cand::Pair { w1, w2, .. } => (w1.min(w2), w1.max(w2)),
    });
    for (cand, _) in hit {
        match *cand {
            Cand::Single { w, mask } => {
                let i = sidx.entry(mask).or_insert(0);
                full.insert(singles[&mask][*i], w);
                *i += 1;
            }
            Cand::Pair { w1, w2, key } => {
                let i = pidx.entry(key).or_insert(0);
                let (p_lo, p_hi) = pairs[&key][*i];
                *i += 1;
                let (x, y) = key;
                if x & hmask[w1] == x && y & hmask[w2] == y {
                    full.insert(p_lo, w1);
                    full.insert(p_hi, w2);
                } else {
                    full.insert(p_lo, w2);
                    full.insert(p_hi, w1);
                }
            }
        }
    }
    assert_eq!(full.len(), pattern.vertex_count(), "model incomplete");
    if let Err(msg) = validate_partial_model(host, pattern, &full) {
        panic!("reconstructed model invalid: {msg}");
    }
    Ok(Some(full))
}

/// Full model of a (partially) subdivided star centered at host vertex v:
/// weights every host edge keeping at least one endpoint in N(v) by its
/// endpoint count in N(v), asks for a minimum-weight matching of exactly
/// the number of subdivided legs, and checks the leftover degree at v
/// covers the plain legs.
pub fn centered_star_model(
    host: &Graph,
    star: &CenteredPattern,
    v: usize,
) -> Result<Option<BTreeMap<usize, usize>>> {
    let Some(center) = star.center else {
        return input_err("pattern has no designated center");
    };
    let h = &star.graph;
    if v >= host.vertex_count() {
        return input_err(format!("host vertex {v} out of range"));
    }
    // legs = components of pattern − center: a single center-neighbor, or
    // a subdivider–leaf edge with exactly the subdivider on the center
    let rest: Vec<usize> = h.vertices().filter(|&u| u != center).collect();
    let sub = h.induced_subgraph(&rest).expect("in range");
    let mut plain_legs: Vec<usize> = Vec::new();
    let mut sub_legs: Vec<(usize, usize)> = Vec::new(); // (subdivider, leaf)
    for comp in sub.graph.connected_components() {
        let verts: Vec<usize> = comp.iter().map(|&u| sub.old_ids[u]).collect();
        match verts.as_slice() {
            [u] if h.has_edge(*u, center) => plain_legs.push(*u),
            [p, q] => {
                let (sdv, leaf) = if h.has_edge(*p, center) { (*p, *q) } else { (*q, *p) };
                if !h.has_edge(sdv, center) || h.has_edge(leaf, center) {
                    return input_err("pattern is not a subdivided star");
                }
                sub_legs.push((sdv, leaf));
            }
            _ => return input_err("pattern is not a subdivided star"),
        }
    }
    let (k1, k2) = (plain_legs.len(), sub_legs.len());
    if h.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    let nv = {
        let mut m = vec![false; host.vertex_count()];
        for &w in host.neighbors(v) {
            m[w] = true;
        }
        m
    };
    // matching graph: host minus v, only edges keeping an endpoint in
    // N(v); v stays as an isolated vertex so ids line up
    let mut gc = Multigraph::new(host.vertex_count());
    for (x, y) in host.edges() {
        if x == v || y == v {
            continue;
        }
        let weight = nv[x] as u64 + nv[y] as u64;
        if weight > 0 {
            gc.add_edge(x, y, weight, None);
        }
    }
    let Some(matching) = min_weight_matching_of_size(&gc, k2)? else {
        return Ok(None);
    };
    let w_c: u64 = matching.iter().map(|&e| gc.edges[e].weight).sum();
    if (host.degree(v) as u64) < w_c + k1 as u64 {
        return Ok(None);
    }
    // rebuild: per matching edge the N(v)-endpoint (lower id on ties)
    // plays the subdivider; plain legs take the lowest untouched N(v)
    // vertices
    let mut full = BTreeMap::new();
    full.insert(center, v);
    let mut taken = vec![false; host.vertex_count()];
    taken[v] = true;
    let mut assigned: Vec<(usize, usize)> = Vec::new(); // (host subdivider, host leaf)
    for &e in &matching {
        let me = &gc.edges[e];
        let (x, y) = (me.u.min(me.v), me.u.max(me.v));
        let (hs, hl) = if nv[x] { (x, y) } else { (y, x) };
        taken[hs] = true;
        taken[hl] = true;
        assigned.push((hs, hl));
    }
    assigned.sort_unstable();
    for (&(ps, pl), &(hs, hl)) in sub_legs.iter().zip(&assigned) {
        full.insert(ps, hs);
        full.insert(pl, hl);
    }
    let free_n: Vec<usize> =
        host.neighbors(v).iter().copied().filter(|&w| !taken[w]).collect();
    for (&p, &w) in plain_legs.iter().zip(&free_n) {
        full.insert(p, w);
    }
    assert_eq!(full.len(), h.vertex_count(), "leg accounting off");
    if let Err(msg) = validate_partial_model(host, h, &full) {
        panic!("reconstructed star model invalid: {msg}");
    }
    Ok(Some(full))
}
