//! Exponential-time ground-truth solvers. Every search counts node
//! expansions against a budget and reports a resource error when exceeded —
//! never a silent wrong answer.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{input_err, Error, Result};
use crate::families::disjoint_copies;
use crate::graph::{Graph, Multigraph};
use crate::matching::ColorDemand;
use crate::reduce::SetSystem;

#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_host: usize,
    pub max_pattern: usize,
    pub node_cap: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_host: 18, max_pattern: 14, node_cap: 20_000_000 }
    }
}

impl OracleBudget {
    /// Size limits lifted; only the node cap guards the search.
    pub fn capped(node_cap: u64) -> Self {
        OracleBudget { max_host: usize::MAX, max_pattern: usize::MAX, node_cap }
    }
}

pub fn brute_subgraph(
    host: &Graph,
    pattern: &Graph,
    budget: &OracleBudget,
) -> Result<Option<BTreeMap<usize, usize>>> {
    brute_subgraph_pinned(host, pattern, &BTreeMap::new(), budget)
}

/// Exhaustive backtracking search for a full pattern model extending `pins`.
///
/// Pattern components are grouped by identity (exact equality after rank
/// relabeling); among the unpinned components of one group, minimum images
/// are forced to increase, which removes the t! orderings of t·H.
pub fn brute_subgraph_pinned(
    host: &Graph,
    pattern: &Graph,
    pins: &BTreeMap<usize, usize>,
    budget: &OracleBudget,
) -> Result<Option<BTreeMap<usize, usize>>> {
    if host.vertex_count() > budget.max_host {
        return Err(Error::Resource(format!(
            "oracle host size {} exceeds budget {}",
            host.vertex_count(),
            budget.max_host
        )));
    }
    if pattern.vertex_count() > budget.max_pattern {
        return Err(Error::Resource(format!(
            "oracle pattern size {} exceeds budget {}",
            pattern.vertex_count(),
            budget.max_pattern
        )));
    }
    for (&p, &h) in pins {
        if p >= pattern.vertex_count() {
            return input_err(format!("pin: pattern vertex {p} out of range"));
        }
        if h >= host.vertex_count() {
            return input_err(format!("pin: host vertex {h} out of range"));
        }
    }
    if crate::graph::validate_partial_model(host, pattern, pins).is_err() {
        return Ok(None);
    }
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }

    let comps = pattern.connected_components();
    let canon = |comp: &Vec<usize>| -> (usize, Vec<(usize, usize)>) {
        let mut edges = Vec::new();
        for (i, &u) in comp.iter().enumerate() {
            for &v in pattern.neighbors(u) {
                if v > u {
                    let j = comp.binary_search(&v).unwrap();
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        (comp.len(), edges)
    };
    let mut groups: Vec<((usize, Vec<(usize, usize)>), Vec<usize>)> = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        let key = canon(comp);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(ci),
            None => groups.push((key, vec![ci])),
        }
    }
    let has_pin = |ci: usize| comps[ci].iter().any(|v| pins.contains_key(v));
    // pinned and big components first; identical unpinned siblings stay adjacent
    groups.sort_by(|a, b| {
        let ka = (a.1.iter().any(|&c| has_pin(c)), a.0 .0, a.0 .1.len());
        let kb = (b.1.iter().any(|&c| has_pin(c)), b.0 .0, b.0 .1.len());
        kb.cmp(&ka).then(a.1[0].cmp(&b.1[0]))
    });

    let mut order: Vec<usize> = Vec::new();
    let mut comp_of_pos: Vec<usize> = Vec::new();
    let mut chain_prev: Vec<Option<usize>> = vec![None; comps.len()];
    for (_, members) in &groups {
        let mut prev_unpinned: Option<usize> = None;
        for &ci in members {
            if !has_pin(ci) {
                if let Some(p) = prev_unpinned {
                    chain_prev[ci] = Some(p);
                }
                prev_unpinned = Some(ci);
            }
            // vertex order inside the component: most placed neighbors first,
            // then max degree, then lowest id; pins are pre-placed
            let mut placed: Vec<usize> =
                comps[ci].iter().copied().filter(|v| pins.contains_key(v)).collect();
            let mut remaining: Vec<usize> =
                comps[ci].iter().copied().filter(|v| !pins.contains_key(v)).collect();
            while !remaining.is_empty() {
                let best = remaining
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, &v)| {
                        let placed_nb =
                            pattern.neighbors(v).iter().filter(|w| placed.contains(w)).count();
                        (placed_nb, pattern.degree(v), std::cmp::Reverse(v))
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                let v = remaining.swap_remove(best);
                placed.push(v);
                order.push(v);
                comp_of_pos.push(ci);
            }
        }
    }

    let mut used = vec![false; host.vertex_count()];
    for &h in pins.values() {
        used[h] = true;
    }
    let mut search = Search {
        host,
        pattern,
        comps: &comps,
        order: &order,
        comp_of_pos: &comp_of_pos,
        chain_prev: &chain_prev,
        assignment: pins.clone(),
        used,
        nodes_left: budget.node_cap,
    };
    if search.place(0)? {
        Ok(Some(search.assignment))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    comps: &'a [Vec<usize>],
    order: &'a [usize],
    comp_of_pos: &'a [usize],
    chain_prev: &'a [Option<usize>],
    assignment: BTreeMap<usize, usize>,
    used: Vec<bool>,
    nodes_left: u64,
}

impl Search<'_> {
    fn place(&mut self, pos: usize) -> Result<bool> {
        if pos == self.order.len() {
            return Ok(true);
        }
        let u = self.order[pos];
        let ci = self.comp_of_pos[pos];
        // the previous identical sibling's minimum image is a strict lower
        // bound for every image of this component
        let floor = match self.chain_prev[ci] {
            Some(prev) => {
                self.comps[prev].iter().map(|v| self.assignment[v]).min().unwrap() + 1
            }
            None => 0,
        };
        let deg_u = self.pattern.degree(u);
        let placed_nb: Vec<usize> = self
            .pattern
            .neighbors(u)
            .iter()
            .filter_map(|v| self.assignment.get(v).copied())
            .collect();
        let candidates: Vec<usize> = match placed_nb.split_first() {
            Some((&first, rest)) => self
                .host
                .neighbors(first)
                .iter()
                .copied()
                .filter(|&h| {
                    h >= floor
                        && !self.used[h]
                        && self.host.degree(h) >= deg_u
                        && rest.iter().all(|&w| self.host.has_edge(h, w))
                })
                .collect(),
            None => (floor..self.host.vertex_count())
                .filter(|&h| !self.used[h] && self.host.degree(h) >= deg_u)
                .collect(),
        };
        for h in candidates {
            if self.nodes_left == 0 {
                return Err(Error::Resource("oracle node budget exhausted".into()));
            }
            self.nodes_left -= 1;
            self.assignment.insert(u, h);
            self.used[h] = true;
            if self.place(pos + 1)? {
                return Ok(true);
            }
            self.assignment.remove(&u);
            self.used[h] = false;
        }
        Ok(false)
    }
}

/// Can `t` vertex-disjoint copies of `h` be packed into `g`?
pub fn brute_packing(g: &Graph, h: &Graph, t: usize, budget: &OracleBudget) -> Result<bool> {
    let th = disjoint_copies(h, t);
    Ok(brute_subgraph(g, &th, budget)?.is_some())
}

/// Exact-cover backtracking: branch on the lowest uncovered element.
pub fn brute_exact_cover(sys: &SetSystem, budget: &OracleBudget) -> Result<bool> {
    let n = sys.universe();
    let mut by_element: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (si, s) in sys.sets().iter().enumerate() {
        for &e in s {
            by_element[e].push(si);
        }
    }
    let mut covered = vec![false; n];
    let mut nodes_left = budget.node_cap;
    cover_rec(sys, &by_element, &mut covered, &mut nodes_left)
}

fn cover_rec(
    sys: &SetSystem,
    by_element: &[Vec<usize>],
    covered: &mut Vec<bool>,
    nodes_left: &mut u64,
) -> Result<bool> {
    let e = match covered.iter().position(|&c| !c) {
        None => return Ok(true),
        Some(e) => e,
    };
    for &si in &by_element[e] {
        let s = &sys.sets()[si];
        if s.iter().any(|&x| covered[x]) {
            continue;
        }
        if *nodes_left == 0 {
            return Err(Error::Resource("exact-cover node budget exhausted".into()));
        }
        *nodes_left -= 1;
        for &x in s {
            covered[x] = true;
        }
        let ok = cover_rec(sys, by_element, covered, nodes_left)?;
        for &x in s {
            covered[x] = false;
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Does the multigraph contain a matching with exactly `f(c)` edges of each
/// color `c` (and no edge of any other color)?
pub fn brute_colored_matching(
    g: &Multigraph,
    f: &ColorDemand,
    budget: &OracleBudget,
) -> Result<bool> {
    let mut remaining: BTreeMap<usize, usize> = f.clone();
    remaining.retain(|_, v| *v > 0);
    let total: usize = remaining.values().sum();
    let cand: Vec<usize> = (0..g.edges.len())
        .filter(|&i| match g.edges[i].color {
            Some(c) => remaining.contains_key(&c),
            None => false,
        })
        .collect();
    // avail[c] = candidate edges of color c at index ≥ current cursor
    let mut avail: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in &cand {
        *avail.entry(g.edges[i].color.unwrap()).or_insert(0) += 1;
    }
    let mut used = vec![false; g.n];
    let mut nodes_left = budget.node_cap;
    match_rec(g, &cand, 0, total, &mut remaining, &mut avail, &mut used, &mut nodes_left)
}

#[allow(clippy::too_many_arguments)]
fn match_rec(
    g: &Multigraph,
    cand: &[usize],
    from: usize,
    still_needed: usize,
    remaining: &mut BTreeMap<usize, usize>,
    avail: &mut BTreeMap<usize, usize>,
    used: &mut Vec<bool>,
    nodes_left: &mut u64,
) -> Result<bool> {
    if still_needed == 0 {
        return Ok(true);
    }
    if remaining.iter().any(|(c, need)| avail.get(c).copied().unwrap_or(0) < *need) {
        return Ok(false);
    }
    if from == cand.len() {
        return Ok(false);
    }
    if *nodes_left == 0 {
        return Err(Error::Resource("colored-matching node budget exhausted".into()));
    }
    *nodes_left -= 1;
    let e = &g.edges[cand[from]];
    let c = e.color.unwrap();
    // include the edge
    if remaining[&c] > 0 && !used[e.u] && !used[e.v] {
        used[e.u] = true;
        used[e.v] = true;
        *remaining.get_mut(&c).unwrap() -= 1;
        *avail.get_mut(&c).unwrap() -= 1;
        let ok = match_rec(g, cand, from + 1, still_needed - 1, remaining, avail, used, nodes_left)?;
        used[e.u] = false;
        used[e.v] = false;
        *remaining.get_mut(&c).unwrap() += 1;
        *avail.get_mut(&c).unwrap() += 1;
        if ok {
            return Ok(true);
        }
    }
    // exclude the edge
    *avail.get_mut(&c).unwrap() -= 1;
    let ok = match_rec(g, cand, from + 1, still_needed, remaining, avail, used, nodes_left)?;
    *avail.get_mut(&c).unwrap() += 1;
    Ok(ok)
}

// ---------------------------------------------------------------------------
// Shape-aware exact solvers. The generic search above removes only the t!
// orderings of identical pattern components; a single component with a large
// automorphism group (a star's legs, a fan's blades) still pays the factorial
// there. Hosts produced by the instance generators need these searches.

#[derive(Clone, Copy)]
enum PartShape {
    Triangle,
    Path,
}

fn part_shape(part: &Graph) -> Result<PartShape> {
    match (part.vertex_count(), part.edge_count()) {
        (3, 3) => Ok(PartShape::Triangle),
        (3, 2) => Ok(PartShape::Path),
        _ => input_err("partition class must be a triangle or a 3-vertex path"),
    }
}

/// Can the vertex set of `g` be partitioned into copies of `part`
/// (a triangle or a 3-vertex path)?
pub fn brute_perfect_partition(g: &Graph, part: &Graph, budget: &OracleBudget) -> Result<bool> {
    if g.vertex_count() > budget.max_host {
        return Err(Error::Resource(format!(
            "oracle host size {} exceeds budget {}",
            g.vertex_count(),
            budget.max_host
        )));
    }
    let shape = part_shape(part)?;
    if g.vertex_count() % 3 != 0 {
        return Ok(false);
    }
    let mut used = vec![false; g.vertex_count()];
    let mut nodes_left = budget.node_cap;
    partition_rec(g, shape, &mut used, &mut nodes_left)
}

fn partition_rec(
    g: &Graph,
    shape: PartShape,
    used: &mut Vec<bool>,
    nodes_left: &mut u64,
) -> Result<bool> {
    // branch on the lowest uncovered vertex; its class is decided here
    let v = match used.iter().position(|&u| !u) {
        None => return Ok(true),
        Some(v) => v,
    };
    if *nodes_left == 0 {
        return Err(Error::Resource("perfect-partition node budget exhausted".into()));
    }
    *nodes_left -= 1;
    used[v] = true;
    let nv: Vec<usize> = g.neighbors(v).iter().copied().filter(|&x| !used[x]).collect();
    match shape {
        PartShape::Triangle => {
            for (i, &a) in nv.iter().enumerate() {
                for &b in nv[i + 1..].iter() {
                    if !g.has_edge(a, b) {
                        continue;
                    }
                    used[a] = true;
                    used[b] = true;
                    if partition_rec(g, shape, used, nodes_left)? {
                        return Ok(true);
                    }
                    used[a] = false;
                    used[b] = false;
                }
            }
        }
        PartShape::Path => {
            // v in the middle: a-v-b
            for (i, &a) in nv.iter().enumerate() {
                for &b in nv[i + 1..].iter() {
                    used[a] = true;
                    used[b] = true;
                    if partition_rec(g, shape, used, nodes_left)? {
                        return Ok(true);
                    }
                    used[a] = false;
                    used[b] = false;
                }
            }
            // v at an end: v-a-b
            for &a in &nv {
                used[a] = true;
                for &b in g.neighbors(a) {
                    if used[b] {
                        continue;
                    }
                    used[b] = true;
                    if partition_rec(g, shape, used, nodes_left)? {
                        return Ok(true);
                    }
                    used[b] = false;
                }
                used[a] = false;
            }
        }
    }
    used[v] = false;
    Ok(false)
}

/// Edges usable as a subdivided leg of a star centered at `y`: both endpoints
/// free, at least one adjacent to `y`. A matching of size L among these edges
/// is exactly a set of L vertex-disjoint legs, so leg feasibility reduces to
/// maximum matching.
fn leg_edges(g: &Graph, y: usize, used: &[bool]) -> Vec<(usize, usize)> {
    let mut out: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &x in g.neighbors(y) {
        if used[x] {
            continue;
        }
        for &z in g.neighbors(x) {
            if z == y || used[z] {
                continue;
            }
            out.insert((x.min(z), x.max(z)));
        }
    }
    out.into_iter().collect()
}

/// Does the edge list contain a matching of at least `need` edges?
/// Solved per connected component, branch and bound with early exit.
fn matching_at_least(edges: &[(usize, usize)], need: usize, nodes_left: &mut u64) -> Result<bool> {
    if need == 0 {
        return Ok(true);
    }
    if edges.len() < need {
        return Ok(false);
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let keys: Vec<usize> = adj.keys().copied().collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut total = 0usize;
    for root in keys {
        if seen.contains(&root) {
            continue;
        }
        seen.insert(root);
        let mut comp = vec![root];
        let mut queue = VecDeque::from(vec![root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        let index: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut local: Vec<Vec<usize>> = vec![Vec::new(); comp.len()];
        for (i, &u) in comp.iter().enumerate() {
            local[i] = adj[&u].iter().map(|w| index[w]).collect();
            local[i].sort_unstable();
            local[i].dedup();
        }
        let cap = (need - total).min(comp.len() / 2);
        let mut best = 0usize;
        comp_matching_rec(&local, &mut vec![true; comp.len()], 0, &mut best, cap, nodes_left)?;
        total += best;
        if total >= need {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Maximum matching within one component, stopping early at `cap`. A free
/// vertex with a free neighbor is always covered by some maximum matching,
/// so only match-branches are explored.
fn comp_matching_rec(
    adj: &[Vec<usize>],
    free: &mut Vec<bool>,
    current: usize,
    best: &mut usize,
    cap: usize,
    nodes_left: &mut u64,
) -> Result<()> {
    if current > *best {
        *best = current;
    }
    if *best >= cap {
        return Ok(());
    }
    let v = match (0..adj.len()).find(|&u| free[u] && adj[u].iter().any(|&w| free[w])) {
        None => return Ok(()),
        Some(v) => v,
    };
    // every further edge consumes two free vertices that still have free edges
    let matchable = (v..adj.len()).filter(|&u| free[u] && adj[u].iter().any(|&w| free[w])).count();
    if current + matchable / 2 <= *best {
        return Ok(());
    }
    if *nodes_left == 0 {
        return Err(Error::Resource("star-leg matching node budget exhausted".into()));
    }
    *nodes_left -= 1;
    let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| free[w]).collect();
    free[v] = false;
    for &w in &nbrs {
        free[w] = false;
        comp_matching_rec(adj, free, current + 1, best, cap, nodes_left)?;
        free[w] = true;
        if *best >= cap {
            break;
        }
    }
    free[v] = true;
    Ok(())
}

/// Model search for a pattern made of once-subdivided stars plus 3-vertex
/// components: `legs[i]` legs for star i, and `copies` copies of `copy`
/// (triangle or 3-vertex path).
///
/// Centers go first; every star except the largest has its legs enumerated
/// as index-increasing edge combinations; the 3-vertex components follow with
/// strictly increasing minimum images; the largest star is decided last as a
/// matching problem, which sidesteps the m! orderings of its legs.
pub fn brute_stars_and_copies(
    g: &Graph,
    legs: &[usize],
    copy: &Graph,
    copies: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    if g.vertex_count() > budget.max_host {
        return Err(Error::Resource(format!(
            "oracle host size {} exceeds budget {}",
            g.vertex_count(),
            budget.max_host
        )));
    }
    let pattern_size = legs.iter().map(|&l| 2 * l + 1).sum::<usize>() + 3 * copies;
    if pattern_size > budget.max_pattern {
        return Err(Error::Resource(format!(
            "oracle pattern size {pattern_size} exceeds budget {}",
            budget.max_pattern
        )));
    }
    let shape = part_shape(copy)?;
    if pattern_size > g.vertex_count() {
        return Ok(false);
    }
    let mut sorted: Vec<usize> = legs.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut search = StarsCopies {
        g,
        legs: sorted,
        shape,
        copies,
        used: vec![false; g.vertex_count()],
        free: g.vertex_count(),
        centers: Vec::new(),
        nodes_left: budget.node_cap,
    };
    search.place_centers(0)
}

struct StarsCopies<'a> {
    g: &'a Graph,
    /// Leg counts in descending order; index 0 is the matching-checked star.
    legs: Vec<usize>,
    shape: PartShape,
    copies: usize,
    used: Vec<bool>,
    free: usize,
    centers: Vec<usize>,
    nodes_left: u64,
}

impl StarsCopies<'_> {
    fn tick(&mut self) -> Result<()> {
        if self.nodes_left == 0 {
            return Err(Error::Resource("stars-and-copies node budget exhausted".into()));
        }
        self.nodes_left -= 1;
        Ok(())
    }

    /// Vertices still required by stars `next_small..` plus star 0's legs
    /// plus the remaining copies (centers excluded).
    fn pending_demand(&self, next_small: usize, copies_left: usize) -> usize {
        let stars = if self.legs.is_empty() {
            0
        } else {
            2 * self.legs[0] + self.legs[next_small..].iter().map(|&l| 2 * l).sum::<usize>()
        };
        stars + 3 * copies_left
    }

    fn place_centers(&mut self, i: usize) -> Result<bool> {
        if i == self.legs.len() {
            return self.place_small_star(1);
        }
        if self.free < (self.legs.len() - i) + self.pending_demand(1, self.copies) {
            return Ok(false);
        }
        // stars with equal leg counts are interchangeable: force ascending centers
        let lo = if i > 0 && self.legs[i] == self.legs[i - 1] { self.centers[i - 1] + 1 } else { 0 };
        for v in lo..self.g.vertex_count() {
            if self.used[v] || self.g.degree(v) < self.legs[i] {
                continue;
            }
            self.tick()?;
            self.used[v] = true;
            self.free -= 1;
            self.centers.push(v);
            if self.place_centers(i + 1)? {
                return Ok(true);
            }
            self.centers.pop();
            self.used[v] = false;
            self.free += 1;
        }
        Ok(false)
    }

    fn place_small_star(&mut self, i: usize) -> Result<bool> {
        if i >= self.legs.len() {
            return self.place_copies(0, 0);
        }
        if self.free < self.pending_demand(i, self.copies) {
            return Ok(false);
        }
        let edges = leg_edges(self.g, self.centers[i], &self.used);
        self.star_leg_combo(i, &edges, 0, self.legs[i])
    }

    fn star_leg_combo(
        &mut self,
        i: usize,
        edges: &[(usize, usize)],
        from: usize,
        left: usize,
    ) -> Result<bool> {
        if left == 0 {
            return self.place_small_star(i + 1);
        }
        if edges.len().saturating_sub(from) < left {
            return Ok(false);
        }
        for e in from..edges.len() {
            let (x, z) = edges[e];
            if self.used[x] || self.used[z] {
                continue;
            }
            self.tick()?;
            self.used[x] = true;
            self.used[z] = true;
            self.free -= 2;
            if self.star_leg_combo(i, edges, e + 1, left - 1)? {
                return Ok(true);
            }
            self.used[x] = false;
            self.used[z] = false;
            self.free += 2;
        }
        Ok(false)
    }

    fn place_copies(&mut self, placed: usize, min_from: usize) -> Result<bool> {
        if placed == self.copies {
            return self.final_star();
        }
        if self.free < self.pending_demand(self.legs.len(), self.copies - placed) {
            return Ok(false);
        }
        for v in min_from..self.g.vertex_count() {
            if self.used[v] {
                continue;
            }
            // v is the minimum image of the next copy; partners come from above
            let nv: Vec<usize> =
                self.g.neighbors(v).iter().copied().filter(|&x| x > v && !self.used[x]).collect();
            self.used[v] = true;
            self.free -= 1;
            match self.shape {
                PartShape::Triangle => {
                    for (ai, &a) in nv.iter().enumerate() {
                        for &b in nv[ai + 1..].iter() {
                            if !self.g.has_edge(a, b) {
                                continue;
                            }
                            self.tick()?;
                            self.used[a] = true;
                            self.used[b] = true;
                            self.free -= 2;
                            if self.place_copies(placed + 1, v + 1)? {
                                return Ok(true);
                            }
                            self.used[a] = false;
                            self.used[b] = false;
                            self.free += 2;
                        }
                    }
                }
                PartShape::Path => {
                    // v in the middle: a-v-b
                    for (ai, &a) in nv.iter().enumerate() {
                        for &b in nv[ai + 1..].iter() {
                            self.tick()?;
                            self.used[a] = true;
                            self.used[b] = true;
                            self.free -= 2;
                            if self.place_copies(placed + 1, v + 1)? {
                                return Ok(true);
                            }
                            self.used[a] = false;
                            self.used[b] = false;
                            self.free += 2;
                        }
                    }
                    // v at an end: v-a-b
                    for &a in &nv {
                        self.used[a] = true;
                        self.free -= 1;
                        let ends: Vec<usize> = self
                            .g
                            .neighbors(a)
                            .iter()
                            .copied()
                            .filter(|&x| x > v && !self.used[x])
                            .collect();
                        for &b in &ends {
                            self.tick()?;
                            self.used[b] = true;
                            self.free -= 1;
                            if self.place_copies(placed + 1, v + 1)? {
                                return Ok(true);
                            }
                            self.used[b] = false;
                            self.free += 1;
                        }
                        self.used[a] = false;
                        self.free += 1;
                    }
                }
            }
            self.used[v] = false;
            self.free += 1;
        }
        Ok(false)
    }

    fn final_star(&mut self) -> Result<bool> {
        if self.legs.is_empty() {
            return Ok(true);
        }
        let edges = leg_edges(self.g, self.centers[0], &self.used);
        matching_at_least(&edges, self.legs[0], &mut self.nodes_left)
    }
}

/// Can each pool be assigned its demanded number of distinct vertices from
/// its candidate list, all assignments disjoint? (Kuhn's augmenting paths.)
fn disjoint_assignment(pools: &[(Vec<usize>, usize)]) -> bool {
    for (cands, d) in pools {
        if cands.len() < *d {
            return false;
        }
    }
    let slot_pool: Vec<usize> = pools
        .iter()
        .enumerate()
        .flat_map(|(i, (_, d))| std::iter::repeat(i).take(*d))
        .collect();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for s in 0..slot_pool.len() {
        let mut visited: BTreeSet<usize> = BTreeSet::new();
        if !assign_slot(pools, &slot_pool, s, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn assign_slot(
    pools: &[(Vec<usize>, usize)],
    slot_pool: &[usize],
    slot: usize,
    owner: &mut BTreeMap<usize, usize>,
    visited: &mut BTreeSet<usize>,
) -> bool {
    for &c in &pools[slot_pool[slot]].0 {
        if !visited.insert(c) {
            continue;
        }
        match owner.get(&c).copied() {
            None => {
                owner.insert(c, slot);
                return true;
            }
            Some(o) => {
                if assign_slot(pools, slot_pool, o, owner, visited) {
                    owner.insert(c, slot);
                    return true;
                }
            }
        }
    }
    false
}

/// Model search for the fan pattern with `q` blades: a hub plus `q` disjoint
/// K_{2,q} blades through it, each blade a tip and `q` common neighbors of
/// hub and tip. Tips are chosen in ascending order; side feasibility is a
/// disjoint-assignment problem, so the q! blade orderings never appear.
pub fn brute_hub_fan(g: &Graph, q: usize, budget: &OracleBudget) -> Result<bool> {
    if q == 0 {
        return input_err("fan blade count must be positive");
    }
    if g.vertex_count() > budget.max_host {
        return Err(Error::Resource(format!(
            "oracle host size {} exceeds budget {}",
            g.vertex_count(),
            budget.max_host
        )));
    }
    let pattern_size = 1 + q + q * q;
    if pattern_size > budget.max_pattern {
        return Err(Error::Resource(format!(
            "oracle pattern size {pattern_size} exceeds budget {}",
            budget.max_pattern
        )));
    }
    if pattern_size > g.vertex_count() {
        return Ok(false);
    }
    let mut nodes_left = budget.node_cap;
    for hub in g.vertices() {
        if g.degree(hub) < q * q {
            continue;
        }
        let tips: Vec<usize> = g
            .vertices()
            .filter(|&t| t != hub && g.common_neighborhood(&[hub, t]).len() >= q)
            .collect();
        if tips.len() < q {
            continue;
        }
        let mut chosen = Vec::new();
        if fan_tips(g, hub, q, &tips, 0, &mut chosen, &mut nodes_left)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn fan_tips(
    g: &Graph,
    hub: usize,
    q: usize,
    tips: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
    nodes_left: &mut u64,
) -> Result<bool> {
    if chosen.len() == q {
        let pools: Vec<(Vec<usize>, usize)> = chosen
            .iter()
            .map(|&t| {
                let cands: Vec<usize> = g
                    .common_neighborhood(&[hub, t])
                    .into_iter()
                    .filter(|x| !chosen.contains(x))
                    .collect();
                (cands, q)
            })
            .collect();
        return Ok(disjoint_assignment(&pools));
    }
    if tips.len() - from < q - chosen.len() {
        return Ok(false);
    }
    for i in from..tips.len() {
        if *nodes_left == 0 {
            return Err(Error::Resource("hub-fan node budget exhausted".into()));
        }
        *nodes_left -= 1;
        chosen.push(tips[i]);
        if fan_tips(g, hub, q, tips, i + 1, chosen, nodes_left)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Model search for the subdivided-tree pattern: a center with `q` disjoint
/// paths of `s` edges each, every path end carrying `q` private leaves.
/// Paths are enumerated with ascending first vertices; the leaves are decided
/// last as a disjoint-assignment problem.
pub fn brute_hub_tree(g: &Graph, s: usize, q: usize, budget: &OracleBudget) -> Result<bool> {
    if s == 0 || q == 0 {
        return input_err("subdivided tree needs positive path length and arity");
    }
    if g.vertex_count() > budget.max_host {
        return Err(Error::Resource(format!(
            "oracle host size {} exceeds budget {}",
            g.vertex_count(),
            budget.max_host
        )));
    }
    let pattern_size = 1 + q * (s + q);
    if pattern_size > budget.max_pattern {
        return Err(Error::Resource(format!(
            "oracle pattern size {pattern_size} exceeds budget {}",
            budget.max_pattern
        )));
    }
    if pattern_size > g.vertex_count() {
        return Ok(false);
    }
    let mut search = HubTree {
        g,
        s,
        q,
        used: vec![false; g.vertex_count()],
        leaves: Vec::new(),
        nodes_left: budget.node_cap,
    };
    for center in g.vertices() {
        if g.degree(center) < q {
            continue;
        }
        search.used[center] = true;
        let hit = search.place_paths(center, 0, 0)?;
        search.used[center] = false;
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

struct HubTree<'a> {
    g: &'a Graph,
    s: usize,
    q: usize,
    used: Vec<bool>,
    leaves: Vec<usize>,
    nodes_left: u64,
}

impl HubTree<'_> {
    fn tick(&mut self) -> Result<()> {
        if self.nodes_left == 0 {
            return Err(Error::Resource("hub-tree node budget exhausted".into()));
        }
        self.nodes_left -= 1;
        Ok(())
    }

    fn place_paths(&mut self, center: usize, placed: usize, min_first: usize) -> Result<bool> {
        if placed == self.q {
            let pools: Vec<(Vec<usize>, usize)> = self
                .leaves
                .iter()
                .map(|&w| {
                    let cands: Vec<usize> =
                        self.g.neighbors(w).iter().copied().filter(|&x| !self.used[x]).collect();
                    (cands, self.q)
                })
                .collect();
            return Ok(disjoint_assignment(&pools));
        }
        // whole legs are interchangeable: force ascending first vertices
        let firsts: Vec<usize> = self
            .g
            .neighbors(center)
            .iter()
            .copied()
            .filter(|&f| f >= min_first && !self.used[f])
            .collect();
        for &f in &firsts {
            self.tick()?;
            self.used[f] = true;
            if self.extend_path(center, placed, f, f, 1)? {
                return Ok(true);
            }
            self.used[f] = false;
        }
        Ok(false)
    }

    fn extend_path(
        &mut self,
        center: usize,
        placed: usize,
        first: usize,
        cur: usize,
        len: usize,
    ) -> Result<bool> {
        if len == self.s {
            // cur is this leg's leaf; used only grows, so this prune is sound
            if self.g.neighbors(cur).iter().filter(|&&x| !self.used[x]).count() < self.q {
                return Ok(false);
            }
            self.leaves.push(cur);
            let hit = self.place_paths(center, placed + 1, first + 1)?;
            self.leaves.pop();
            return Ok(hit);
        }
        let nexts: Vec<usize> =
            self.g.neighbors(cur).iter().copied().filter(|&x| !self.used[x]).collect();
        for &x in &nexts {
            self.tick()?;
            self.used[x] = true;
            if self.extend_path(center, placed, first, x, len + 1)? {
                return Ok(true);
            }
            self.used[x] = false;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiEdge;

    fn clique(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    /// Naive |V(G)|^|V(H)| sweep used as the meta-oracle.
    fn sweep(host: &Graph, pattern: &Graph, pins: &BTreeMap<usize, usize>) -> bool {
        let n = host.vertex_count();
        let k = pattern.vertex_count();
        if k == 0 {
            return true;
        }
        let mut idx = vec![0usize; k];
        loop {
            let map: BTreeMap<usize, usize> = (0..k).map(|p| (p, idx[p])).collect();
            let pins_ok = pins.iter().all(|(&p, &h)| map[&p] == h);
            if pins_ok && crate::graph::model_is_valid(host, pattern, &map) {
                return true;
            }
            let mut carry = k;
            for p in (0..k).rev() {
                idx[p] += 1;
                if idx[p] < n {
                    carry = p;
                    break;
                }
                idx[p] = 0;
            }
            if carry == k {
                return false;
            }
        }
    }

    #[test]
    fn basic_hits_and_misses() {
        let budget = OracleBudget::default();
        assert!(brute_subgraph(&clique(4), &clique(3), &budget).unwrap().is_some());
        assert!(brute_subgraph(&cycle(5), &clique(3), &budget).unwrap().is_none());
    }

    #[test]
    fn pins_respected() {
        let budget = OracleBudget::default();
        let host = {
            // a K4 plus a pendant vertex 4 attached to 0
            let mut g = clique(4);
            let mut h = Graph::new(5);
            for (u, v) in g.edges() {
                h.add_edge(u, v);
            }
            h.add_edge(0, 4);
            g = h;
            g
        };
        let pattern = star(3);
        // center pinned on the degree-1 vertex: impossible
        let pins: BTreeMap<usize, usize> = [(0usize, 4usize)].into_iter().collect();
        assert!(brute_subgraph_pinned(&host, &pattern, &pins, &budget).unwrap().is_none());
        // center pinned on the degree-4 vertex: fine, and the model keeps the pin
        let pins: BTreeMap<usize, usize> = [(0usize, 0usize)].into_iter().collect();
        let m = brute_subgraph_pinned(&host, &pattern, &pins, &budget).unwrap().unwrap();
        assert_eq!(m[&0], 0);
        assert!(crate::graph::model_is_valid(&host, &pattern, &m));
    }

    #[test]
    fn agrees_with_mapping_sweep() {
        // deterministic pseudo-random instance stream
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let budget = OracleBudget::capped(10_000_000);
        for trial in 0..60 {
            let n = 4 + (next() % 5) as usize; // 4..8
            let k = 2 + (next() % 3) as usize; // 2..4
            let mut host = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if next() % 100 < 45 {
                        host.add_edge(u, v);
                    }
                }
            }
            let mut pattern = Graph::new(k);
            for u in 0..k {
                for v in u + 1..k {
                    if next() % 100 < 55 {
                        pattern.add_edge(u, v);
                    }
                }
            }
            let mut pins = BTreeMap::new();
            if trial % 3 == 0 && k > 0 && n > 0 {
                pins.insert((next() % k as u64) as usize, (next() % n as u64) as usize);
            }
            let fast = brute_subgraph_pinned(&host, &pattern, &pins, &budget).unwrap();
            let slow = sweep(&host, &pattern, &pins);
            assert_eq!(fast.is_some(), slow, "trial {trial} host={host:?} pattern={pattern:?} pins={pins:?}");
            if let Some(m) = fast {
                assert!(pins.iter().all(|(p, h)| m[p] == *h));
                assert!(crate::graph::model_is_valid(&host, &pattern, &m));
            }
        }
    }

    #[test]
    fn packing_cases() {
        let budget = OracleBudget::default();
        let two_k3 = disjoint_copies(&clique(3), 2);
        assert!(brute_packing(&two_k3, &clique(3), 2, &budget).unwrap());
        assert!(!brute_packing(&clique(4), &clique(3), 2, &budget).unwrap());
    }

    #[test]
    fn identical_component_symmetry_is_safe() {
        // packing identical triangles into hosts near the feasibility edge
        let budget = OracleBudget::capped(10_000_000);
        let mut state = 0xabcdef1234567890u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let n = 6 + (next() % 3) as usize;
            let mut host = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if next() % 100 < 60 {
                        host.add_edge(u, v);
                    }
                }
            }
            let th = disjoint_copies(&clique(3), 2);
            let fast = brute_subgraph(&host, &th, &budget).unwrap().is_some();
            let slow = sweep(&host, &th, &BTreeMap::new());
            assert_eq!(fast, slow, "host={host:?}");
        }
    }

    #[test]
    fn resource_error_on_tiny_budget() {
        let budget = OracleBudget { max_host: 18, max_pattern: 14, node_cap: 3 };
        let host = clique(8);
        let pattern = disjoint_copies(&clique(2), 3);
        assert!(matches!(
            brute_subgraph(&host, &pattern, &budget),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn exact_cover_cases() {
        let budget = OracleBudget::default();
        let partition =
            SetSystem::new(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3]]).unwrap();
        assert!(brute_exact_cover(&partition, &budget).unwrap());
        let uncoverable = SetSystem::new(3, vec![vec![0, 1]]).unwrap();
        assert!(!brute_exact_cover(&uncoverable, &budget).unwrap());
        let empty = SetSystem::new(0, vec![]).unwrap();
        assert!(brute_exact_cover(&empty, &budget).unwrap());
    }

    /// Independent recount: subset-convolution style DP over element masks.
    fn exact_cover_count(sys: &SetSystem) -> u64 {
        let n = sys.universe();
        assert!(n <= 20);
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let masks: Vec<u32> = sys
            .sets()
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &e| m | (1 << e)))
            .collect();
        let mut dp = vec![0u64; (full as usize) + 1];
        dp[0] = 1;
        for mask in 1..=full {
            let low = mask.trailing_zeros();
            let mut acc = 0u64;
            for (_, &sm) in masks.iter().enumerate() {
                if sm & (1 << low) != 0 && sm & mask == sm {
                    acc += dp[(mask & !sm) as usize];
                }
            }
            dp[mask as usize] = acc;
        }
        dp[full as usize]
    }

    #[test]
    fn exact_cover_agrees_with_dp_recount() {
        let budget = OracleBudget::default();
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let n = 3 + (next() % 5) as usize; // 3..7
            let sets = (0..(2 + next() % 5) as usize)
                .map(|_| {
                    (0..n).filter(|_| next() % 100 < 40).collect::<Vec<usize>>()
                })
                .collect::<Vec<_>>();
            let sys = SetSystem::new(n, sets).unwrap();
            let fast = brute_exact_cover(&sys, &budget).unwrap();
            let count = exact_cover_count(&sys);
            assert_eq!(fast, count > 0, "sys={sys:?}");
        }
    }

    #[test]
    fn colored_matching_basic() {
        let budget = OracleBudget::default();
        // path 0-1-2-3 with colors 1,2,1
        let mut g = Multigraph::new(4);
        g.add_edge(0, 1, 0, Some(1));
        g.add_edge(1, 2, 0, Some(2));
        g.add_edge(2, 3, 0, Some(1));
        let f: ColorDemand = [(1usize, 2usize)].into_iter().collect();
        assert!(brute_colored_matching(&g, &f, &budget).unwrap());
        let f: ColorDemand = [(1usize, 1usize), (2usize, 1usize)].into_iter().collect();
        // edges of color 1 both touch the color-2 edge's endpoints... 0-1 (c1) and 1-2 (c2) clash; 2-3 (c1) and 1-2 (c2) clash
        assert!(!brute_colored_matching(&g, &f, &budget).unwrap());
        // zero-demand map: empty matching always works
        let f = ColorDemand::new();
        assert!(brute_colored_matching(&g, &f, &budget).unwrap());
        // demand on a color with no edges
        let f: ColorDemand = [(7usize, 1usize)].into_iter().collect();
        assert!(!brute_colored_matching(&g, &f, &budget).unwrap());
        // parallel edges of different colors
        let mut p = Multigraph::new(2);
        p.add_edge(0, 1, 0, Some(1));
        p.add_edge(0, 1, 0, Some(2));
        let f: ColorDemand = [(2usize, 1usize)].into_iter().collect();
        assert!(brute_colored_matching(&p, &f, &budget).unwrap());
    }

    #[test]
    fn multigraph_edge_fields() {
        let mut g = Multigraph::new(3);
        g.add_edge(0, 1, 5, None);
        assert_eq!(g.edges[0], MultiEdge { u: 0, v: 1, weight: 5, color: None });
    }

    fn rand_graph(n: usize, seed: u64, density_pct: u64) -> Graph {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if next() % 100 < density_pct {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    fn sprinkle_edges(g: &mut Graph, seed: u64, count: usize) {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(7);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let n = g.vertex_count() as u64;
        for _ in 0..count {
            let u = (next() % n) as usize;
            let v = (next() % n) as usize;
            if u != v {
                g.add_edge(u, v);
            }
        }
    }

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)])
    }

    #[test]
    fn perfect_partition_matches_packing() {
        let budget = OracleBudget::default();
        for seed in 0..60u64 {
            let n = 6 + 3 * (seed as usize % 2);
            let dens = 35 + (seed % 5) * 12;
            let g = rand_graph(n, seed ^ 0x7a31, dens);
            for part in [clique(3), path3()] {
                let want = brute_packing(&g, &part, n / 3, &budget).unwrap();
                let got = brute_perfect_partition(&g, &part, &budget).unwrap();
                assert_eq!(got, want, "seed={seed} n={n} dens={dens}");
            }
        }
        let g = rand_graph(7, 5, 80);
        assert!(!brute_perfect_partition(&g, &clique(3), &budget).unwrap());
    }

    #[test]
    fn stars_and_copies_matches_generic() {
        use crate::families::{build_family, disjoint_union, FamilySpec};
        let budget = OracleBudget::capped(50_000_000);
        let combos: [(&[usize], usize, usize); 6] = [
            (&[2], 1, 11),
            (&[3], 0, 11),
            (&[2, 2], 0, 11),
            (&[3, 2], 0, 13),
            (&[2], 2, 12),
            (&[2, 1], 1, 12),
        ];
        let (mut yes, mut no) = (0usize, 0usize);
        for seed in 0..25u64 {
            for &(legs, copies, n) in &combos {
                let g = rand_graph(n, seed ^ 0x57a2, 30 + (seed % 4) * 15);
                for part in [clique(3), path3()] {
                    let mut pat = Graph::new(0);
                    for &l in legs {
                        let star = build_family(&FamilySpec::SubdivStar { n: l }).unwrap().graph;
                        pat = disjoint_union(&pat, &star);
                    }
                    pat = disjoint_union(&pat, &disjoint_copies(&part, copies));
                    let want = brute_subgraph(&g, &pat, &budget).unwrap().is_some();
                    let got = brute_stars_and_copies(&g, legs, &part, copies, &budget).unwrap();
                    assert_eq!(got, want, "seed={seed} legs={legs:?} copies={copies} n={n}");
                    if want {
                        yes += 1;
                    } else {
                        no += 1;
                    }
                }
            }
        }
        assert!(yes > 0 && no > 0, "sweep degenerate: yes={yes} no={no}");
    }

    #[test]
    fn stars_and_copies_edge_shapes() {
        let budget = OracleBudget::default();
        for seed in 0..25u64 {
            let g = rand_graph(9, seed ^ 0x99, 40 + (seed % 3) * 20);
            let want = brute_packing(&g, &clique(3), 2, &budget).unwrap();
            let got = brute_stars_and_copies(&g, &[], &clique(3), 2, &budget).unwrap();
            assert_eq!(got, want, "seed={seed}");
        }
        // a star with zero legs is just a vertex
        assert!(brute_stars_and_copies(&Graph::new(1), &[0], &clique(3), 0, &budget).unwrap());
        let g = rand_graph(9, 3, 60);
        assert!(brute_stars_and_copies(&g, &[1], &clique(4), 1, &budget).is_err());
        assert!(brute_perfect_partition(&g, &star(2), &budget).is_ok());
        assert!(brute_perfect_partition(&g, &clique(4), &budget).is_err());
    }

    #[test]
    fn star_legs_respect_disjointness() {
        // spokes 1,2,3; legs 1-4 and 2-4 collide on 4, so only two legs fit
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 5)]);
        let budget = OracleBudget::default();
        assert!(brute_stars_and_copies(&g, &[2], &clique(3), 0, &budget).unwrap());
        assert!(!brute_stars_and_copies(&g, &[3], &clique(3), 0, &budget).unwrap());
    }

    #[test]
    fn hub_fan_matches_generic() {
        use crate::families::{build_family, FamilySpec};
        let budget = OracleBudget::capped(50_000_000);
        let fan2 = build_family(&FamilySpec::DiamondFan { n: 2 }).unwrap().graph;
        let (mut yes, mut no) = (0usize, 0usize);
        for seed in 0..50u64 {
            let g = rand_graph(10, seed ^ 0x0fa2, 40 + (seed % 4) * 15);
            let want = brute_subgraph(&g, &fan2, &budget).unwrap().is_some();
            let got = brute_hub_fan(&g, 2, &budget).unwrap();
            assert_eq!(got, want, "seed={seed}");
            if want {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(yes > 0 && no > 0, "sweep degenerate: yes={yes} no={no}");
    }

    #[test]
    fn hub_fan_planted() {
        use crate::families::{build_family, disjoint_union, FamilySpec};
        let budget = OracleBudget::capped(50_000_000);
        let fan3 = build_family(&FamilySpec::DiamondFan { n: 3 }).unwrap().graph;
        for seed in 0..6u64 {
            // extra vertices and edges never destroy a model
            let mut g = disjoint_union(&fan3, &rand_graph(2, seed, 50));
            sprinkle_edges(&mut g, seed ^ 0xfa17, 8);
            assert!(brute_hub_fan(&g, 3, &budget).unwrap(), "seed={seed}");
        }
        // shared sides force the assignment check: 3 common sides can't fill
        // two blades of two sides each
        let mut g = Graph::new(7);
        for s in 3..6 {
            g.add_edge(0, s);
            g.add_edge(1, s);
            g.add_edge(2, s);
        }
        assert!(!brute_hub_fan(&g, 2, &budget).unwrap());
        let mut h = Graph::new(7);
        for s in 3..7 {
            h.add_edge(0, s);
            h.add_edge(1, s);
            h.add_edge(2, s);
        }
        assert!(brute_hub_fan(&h, 2, &budget).unwrap());
    }

    #[test]
    fn hub_tree_matches_generic() {
        use crate::families::{build_family, FamilySpec};
        let budget = OracleBudget::capped(50_000_000);
        let (mut yes, mut no) = (0usize, 0usize);
        for seed in 0..40u64 {
            let g = rand_graph(10, seed ^ 0x77ee, 35 + (seed % 4) * 15);
            for s in [1usize, 2] {
                let pat = build_family(&FamilySpec::SubdivTree { s, n: 2 }).unwrap().graph;
                let want = brute_subgraph(&g, &pat, &budget).unwrap().is_some();
                let got = brute_hub_tree(&g, s, 2, &budget).unwrap();
                assert_eq!(got, want, "seed={seed} s={s}");
                if want {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
        assert!(yes > 0 && no > 0, "sweep degenerate: yes={yes} no={no}");
    }

    #[test]
    fn hub_tree_planted() {
        use crate::families::{build_family, disjoint_union, FamilySpec};
        let budget = OracleBudget::capped(50_000_000);
        let tree = build_family(&FamilySpec::SubdivTree { s: 1, n: 3 }).unwrap().graph;
        for seed in 0..6u64 {
            let mut g = disjoint_union(&tree, &rand_graph(2, seed ^ 0x3333, 50));
            sprinkle_edges(&mut g, seed ^ 0x7ee3, 8);
            assert!(brute_hub_tree(&g, 1, 3, &budget).unwrap(), "seed={seed}");
        }
        // 3 shared leaf candidates can't serve two path ends needing 2 each
        let mut g = Graph::new(7);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        for p in 3..6 {
            g.add_edge(1, p);
            g.add_edge(2, p);
        }
        assert!(!brute_hub_tree(&g, 1, 2, &budget).unwrap());
        let mut h = Graph::new(7);
        h.add_edge(0, 1);
        h.add_edge(0, 2);
        for p in 3..7 {
            h.add_edge(1, p);
            h.add_edge(2, p);
        }
        assert!(brute_hub_tree(&h, 1, 2, &budget).unwrap());
    }

    #[test]
    fn specialized_budgets_bite() {
        let tight = OracleBudget::capped(3);
        let g = rand_graph(12, 1, 70);
        assert!(matches!(
            brute_perfect_partition(&g, &clique(3), &tight),
            Err(Error::Resource(_))
        ));
        let g14 = rand_graph(14, 1, 70);
        assert!(matches!(
            brute_stars_and_copies(&g14, &[2, 2], &clique(3), 1, &tight),
            Err(Error::Resource(_))
        ));
        let big = rand_graph(19, 2, 50);
        assert!(matches!(
            brute_perfect_partition(&big, &clique(3), &OracleBudget::default()),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_hub_fan(&big, 2, &OracleBudget::default()),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_hub_tree(&big, 1, 2, &OracleBudget::default()),
            Err(Error::Resource(_))
        ));
    }
}
