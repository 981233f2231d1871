use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{input_err, Error, Result};

/// Finite simple undirected graph over dense vertex ids `0..n`.
/// Adjacency lists are kept sorted so every traversal is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
    labels: Vec<Option<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            m: 0,
            labels: vec![None; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Inserts an edge; duplicates are ignored. Self-loops and out-of-range
    /// endpoints are programmer errors.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range n={}", self.n);
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos2 = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos2, u);
                self.m += 1;
                true
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    /// All edges as (u,v) with u < v, in ascending lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        let label = label.into();
        assert!(v < self.n, "label vertex {v} out of range");
        assert!(!label.contains('\n'), "label must be single-line");
        self.labels[v] = Some(label);
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    /// Induced subgraph on `keep` (sorted, deduplicated internally).
    /// The result's vertex `i` corresponds to `old_ids[i]` in `self`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Induced> {
        let mut old_ids: Vec<usize> = keep.to_vec();
        old_ids.sort_unstable();
        old_ids.dedup();
        if let Some(&bad) = old_ids.iter().find(|&&v| v >= self.n) {
            return input_err(format!("induced subgraph: vertex {bad} out of range n={}", self.n));
        }
        let mut g = Graph::new(old_ids.len());
        for (i, &u) in old_ids.iter().enumerate() {
            if let Some(lbl) = &self.labels[u] {
                g.labels[i] = Some(lbl.clone());
            }
            for &v in &self.adj[u] {
                if v > u {
                    if let Ok(j) = old_ids.binary_search(&v) {
                        g.add_edge(i, j);
                    }
                }
            }
        }
        Ok(Induced { graph: g, old_ids })
    }

    /// Connected components as sorted vertex lists, ordered by minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut part = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                part.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.connected_components().len() == 1
    }

    /// Partite classes (A, B) of a connected bipartite graph with |A| ≤ |B|,
    /// ties resolved toward the class containing vertex 0. `None` when an odd
    /// cycle exists. Disconnected input is an error.
    pub fn bipartition(&self) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        if self.n == 0 || !self.is_connected() {
            return input_err("bipartition requires a connected nonempty graph");
        }
        let mut color = vec![u8::MAX; self.n];
        color[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return Ok(None);
                }
            }
        }
        let c0: Vec<usize> = (0..self.n).filter(|&v| color[v] == 0).collect();
        let c1: Vec<usize> = (0..self.n).filter(|&v| color[v] == 1).collect();
        // smaller class first; tie goes to the class of vertex 0
        if c1.len() < c0.len() {
            Ok(Some((c1, c0)))
        } else {
            Ok(Some((c0, c1)))
        }
    }

    /// ∩_{v∈D} N(v); the empty intersection is all of V by convention.
    pub fn common_neighborhood(&self, d: &[usize]) -> Vec<usize> {
        if d.is_empty() {
            return (0..self.n).collect();
        }
        assert!(d.iter().all(|&v| v < self.n), "common_neighborhood: vertex out of range");
        let mut acc: Vec<usize> = self.adj[d[0]].clone();
        for &v in &d[1..] {
            let nb = &self.adj[v];
            acc.retain(|x| nb.binary_search(x).is_ok());
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Serializes to the line format `p <n> <m>` / `e <u> <v>` / `l <v> <label>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        for v in 0..self.n {
            if let Some(lbl) = &self.labels[v] {
                out.push_str(&format!("l {v} {lbl}\n"));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("graph text: empty input".into()))?;
        let mut hp = header.split_whitespace();
        if hp.next() != Some("p") {
            return input_err("graph text: first line must be 'p <n> <m>'");
        }
        let n: usize = parse_field(hp.next(), "vertex count")?;
        let m: usize = parse_field(hp.next(), "edge count")?;
        if hp.next().is_some() {
            return input_err("graph text: trailing tokens on header line");
        }
        let mut g = Graph::new(n);
        for line in lines {
            let mut it = line.split_whitespace();
            match it.next() {
                Some("e") => {
                    let u: usize = parse_field(it.next(), "edge endpoint")?;
                    let v: usize = parse_field(it.next(), "edge endpoint")?;
                    if it.next().is_some() {
                        return input_err(format!("graph text: trailing tokens on edge line '{line}'"));
                    }
                    if u == v {
                        return input_err(format!("graph text: self-loop at {u}"));
                    }
                    if u >= n || v >= n {
                        return input_err(format!("graph text: edge ({u},{v}) out of range n={n}"));
                    }
                    if !g.add_edge(u, v) {
                        return input_err(format!("graph text: duplicate edge ({u},{v})"));
                    }
                }
                Some("l") => {
                    let v: usize = parse_field(it.next(), "label vertex")?;
                    if v >= n {
                        return input_err(format!("graph text: label vertex {v} out of range"));
                    }
                    let rest: Vec<&str> = it.collect();
                    if rest.is_empty() {
                        return input_err("graph text: empty label");
                    }
                    g.labels[v] = Some(rest.join(" "));
                }
                Some(other) => {
                    return input_err(format!("graph text: unknown line kind '{other}'"));
                }
                None => return input_err("graph text: blank line"),
            }
        }
        if g.m != m {
            return input_err(format!("graph text: header claims {m} edges, found {}", g.m));
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n, self.m, self.edges())
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Input(format!("graph text: missing {what}")))?
        .parse()
        .map_err(|_| Error::Input(format!("graph text: malformed {what}")))
}

/// Induced subgraph together with its id translation.
pub struct Induced {
    pub graph: Graph,
    /// new id `i` ↦ old id `old_ids[i]`; ascending.
    pub old_ids: Vec<usize>,
}

impl Induced {
    pub fn new_id(&self, old: usize) -> Option<usize> {
        self.old_ids.binary_search(&old).ok()
    }
}

/// Multigraph for the matching engine: parallel edges allowed, each carrying
/// a weight and an optional color.
#[derive(Clone, Debug)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<MultiEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
    pub color: Option<usize>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: u64, color: Option<usize>) {
        assert!(u != v, "multigraph self-loop {u}");
        assert!(u < self.n && v < self.n, "multigraph edge out of range");
        self.edges.push(MultiEdge { u, v, weight, color });
    }
}

/// Partial injective map from pattern vertices into host vertices.
/// Every pattern edge with both endpoints in the domain must map to a host
/// edge; `validate` reports the first violation.
#[derive(Clone)]
pub struct SubgraphModel<'a> {
    pub pattern: &'a Graph,
    pub host: &'a Graph,
    map: BTreeMap<usize, usize>,
}

impl<'a> SubgraphModel<'a> {
    pub fn new(pattern: &'a Graph, host: &'a Graph) -> Self {
        SubgraphModel { pattern, host, map: BTreeMap::new() }
    }

    pub fn from_map(pattern: &'a Graph, host: &'a Graph, map: BTreeMap<usize, usize>) -> Self {
        SubgraphModel { pattern, host, map }
    }

    pub fn assign(&mut self, p: usize, h: usize) {
        self.map.insert(p, h);
    }

    pub fn get(&self, p: usize) -> Option<usize> {
        self.map.get(&p).copied()
    }

    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.keys().copied()
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.values().copied().collect()
    }

    pub fn is_full(&self) -> bool {
        self.map.len() == self.pattern.vertex_count()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        validate_partial_model(self.host, self.pattern, &self.map)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

impl fmt::Debug for SubgraphModel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgraphModel({:?})", self.map)
    }
}

/// First-violation check of the partial-model contract for a raw map.
pub fn validate_partial_model(
    host: &Graph,
    pattern: &Graph,
    map: &BTreeMap<usize, usize>,
) -> std::result::Result<(), String> {
    let mut used: BTreeMap<usize, usize> = BTreeMap::new();
    for (&p, &h) in map {
        if p >= pattern.vertex_count() {
            return Err(format!("pattern vertex {p} out of range"));
        }
        if h >= host.vertex_count() {
            return Err(format!("host vertex {h} out of range"));
        }
        if let Some(&q) = used.get(&h) {
            return Err(format!("not injective: pattern {q} and {p} both map to host {h}"));
        }
        used.insert(h, p);
    }
    for (&p, &h) in map {
        for &q in pattern.neighbors(p) {
            if q > p {
                if let Some(&hq) = map.get(&q) {
                    if !host.has_edge(h, hq) {
                        return Err(format!(
                            "pattern edge ({p},{q}) not preserved: host pair ({h},{hq}) is a non-edge"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn model_is_valid(host: &Graph, pattern: &Graph, map: &BTreeMap<usize, usize>) -> bool {
    validate_partial_model(host, pattern, map).is_ok()
}

/// A separation (A,B) of a graph: A ∪ B = V and no edge joins A\B to B\A.
#[derive(Clone, Debug)]
pub struct Separation {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
}

impl Separation {
    pub fn new(a: impl IntoIterator<Item = usize>, b: impl IntoIterator<Item = usize>) -> Self {
        Separation { a: a.into_iter().collect(), b: b.into_iter().collect() }
    }

    pub fn separator(&self) -> BTreeSet<usize> {
        self.a.intersection(&self.b).copied().collect()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &v in self.a.union(&self.b) {
            if v >= g.vertex_count() {
                return input_err(format!("separation: vertex {v} out of range"));
            }
        }
        if self.a.union(&self.b).count() != g.vertex_count() {
            return input_err("separation: A ∪ B must cover all vertices");
        }
        for &u in self.a.difference(&self.b) {
            for &v in g.neighbors(u) {
                if self.b.contains(&v) && !self.a.contains(&v) {
                    return input_err(format!("separation: edge ({u},{v}) crosses A\\B – B\\A"));
                }
            }
        }
        Ok(())
    }
}

/// Glues a full H[A]-model and a full H[B]-model over a separation (A,B) of
/// the pattern into a full H-model extending `phi`. Preconditions (agreement
/// on A∩B with `phi`, disjoint images of A\B and B\A) are checked.
pub fn merge_models<'a>(
    phi: &SubgraphModel<'a>,
    sep: &Separation,
    phi_a: &SubgraphModel<'a>,
    phi_b: &SubgraphModel<'a>,
) -> Result<SubgraphModel<'a>> {
    let h = phi.pattern;
    sep.validate(h)?;
    let sep_vertices = sep.separator();
    for &s in &sep_vertices {
        if phi.get(s).is_none() {
            return input_err(format!("merge: base model does not cover separator vertex {s}"));
        }
    }
    let dom_a: BTreeSet<usize> = phi_a.domain().collect();
    let dom_b: BTreeSet<usize> = phi_b.domain().collect();
    if dom_a != sep.a {
        return input_err("merge: first part model must have domain exactly A");
    }
    if dom_b != sep.b {
        return input_err("merge: second part model must have domain exactly B");
    }
    for (part, name) in [(phi_a, "A"), (phi_b, "B")] {
        part.validate()
            .map_err(|e| Error::Input(format!("merge: invalid {name}-part model: {e}")))?;
        for p in part.domain() {
            if let Some(hv) = phi.get(p) {
                if part.get(p) != Some(hv) {
                    return input_err(format!("merge: {name}-part model disagrees with base at {p}"));
                }
            }
        }
    }
    let mut im_a_only: BTreeSet<usize> = BTreeSet::new();
    for &p in sep.a.difference(&sep.b) {
        im_a_only.insert(phi_a.get(p).unwrap());
    }
    for &p in sep.b.difference(&sep.a) {
        if im_a_only.contains(&phi_b.get(p).unwrap()) {
            return input_err("merge: images of A\\B and B\\A overlap");
        }
    }
    for &s in &sep_vertices {
        if phi_a.get(s) != phi_b.get(s) {
            return input_err(format!("merge: part models disagree on separator vertex {s}"));
        }
    }
    let mut merged = phi_a.map.clone();
    merged.extend(phi_b.map.iter().map(|(&k, &v)| (k, v)));
    let out = SubgraphModel::from_map(phi.pattern, phi.host, merged);
    debug_assert!(out.is_full());
    out.validate()
        .map_err(|e| Error::Input(format!("merge: glued map is not a valid model: {e}")))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    fn cycle(n: usize) -> Graph {
        let mut g = path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    fn clique(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn biclique(a: usize, b: usize) -> Graph {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn induced_subgraph_cases() {
        let k3 = clique(3);
        let sub = k3.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.graph.vertex_count(), 2);
        assert_eq!(sub.graph.edge_count(), 1);

        let full = k3.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(full.graph.edges(), k3.edges());

        let p4 = path(4);
        let iso = p4.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(iso.graph.vertex_count(), 2);
        assert_eq!(iso.graph.edge_count(), 0);

        assert!(matches!(k3.induced_subgraph(&[5]), Err(Error::Input(_))));
    }

    #[test]
    fn components_cases() {
        assert!(Graph::new(0).connected_components().is_empty());
        let mut two_k3 = Graph::new(6);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            two_k3.add_edge(u, v);
        }
        let parts = two_k3.connected_components();
        assert_eq!(parts, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn bipartition_cases() {
        let c4 = cycle(4);
        assert_eq!(c4.bipartition().unwrap(), Some((vec![0, 2], vec![1, 3])));
        assert_eq!(clique(3).bipartition().unwrap(), None);
        let (a, b) = biclique(2, 5).bipartition().unwrap().unwrap();
        assert_eq!((a.len(), b.len()), (2, 5));
        let mut disconnected = Graph::new(4);
        disconnected.add_edge(0, 1);
        assert!(disconnected.bipartition().is_err());
    }

    #[test]
    fn common_neighborhood_cases() {
        let star = biclique(1, 3);
        assert_eq!(star.common_neighborhood(&[]), vec![0, 1, 2, 3]);
        assert_eq!(star.common_neighborhood(&[0]), vec![1, 2, 3]);
        let c5 = cycle(5);
        assert_eq!(c5.common_neighborhood(&[0, 2]), vec![1]);
    }

    #[test]
    fn common_neighborhood_intersection_law() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5)]);
        for d1 in [vec![], vec![0], vec![2, 4]] {
            for d2 in [vec![], vec![2], vec![3]] {
                let mut d12 = d1.clone();
                d12.extend(&d2);
                let lhs = g.common_neighborhood(&d12);
                let a = g.common_neighborhood(&d1);
                let b = g.common_neighborhood(&d2);
                let rhs: Vec<usize> = a.into_iter().filter(|x| b.contains(x)).collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut g = biclique(2, 3);
        g.set_label(0, "left:0");
        g.set_label(4, "right:2");
        let text = g.to_text();
        let back = Graph::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);

        assert!(Graph::from_text("p 2 1\ne 0 0\n").is_err());
        assert!(Graph::from_text("p 2 2\ne 0 1\ne 1 0\n").is_err());
        assert!(Graph::from_text("p 2 0\ne 0 1\n").is_err());
        assert!(Graph::from_text("p 1 0\ne 0 5\n").is_err());
    }

    #[test]
    fn model_validation() {
        let k3 = clique(3);
        let c4 = cycle(4);
        let mut ident = SubgraphModel::new(&k3, &k3);
        for v in 0..3 {
            ident.assign(v, v);
        }
        assert!(ident.is_valid());

        let mut collapse = SubgraphModel::new(&k3, &k3);
        collapse.assign(0, 1);
        collapse.assign(1, 1);
        assert!(collapse.validate().unwrap_err().contains("not injective"));

        let mut bad = SubgraphModel::new(&k3, &c4);
        bad.assign(0, 0);
        bad.assign(1, 1);
        bad.assign(2, 2);
        assert!(bad.validate().unwrap_err().contains("not preserved"));
    }

    #[test]
    fn merge_two_disjoint_edges() {
        let h = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4)]);
        let phi = SubgraphModel::new(&h, &g);
        let sep = Separation::new([0, 1], [2, 3]);
        let mut pa = SubgraphModel::new(&h, &g);
        pa.assign(0, 0);
        pa.assign(1, 1);
        let mut pb = SubgraphModel::new(&h, &g);
        pb.assign(2, 3);
        pb.assign(3, 4);
        let merged = merge_models(&phi, &sep, &pa, &pb).unwrap();
        assert!(merged.is_full() && merged.is_valid());

        // overlapping images must be rejected
        let mut pb_bad = SubgraphModel::new(&h, &g);
        pb_bad.assign(2, 1);
        pb_bad.assign(3, 0);
        assert!(merge_models(&phi, &sep, &pa, &pb_bad).is_err());
    }

    #[test]
    fn merge_p3_at_middle() {
        let h = path(3);
        let g = cycle(4);
        let mut phi = SubgraphModel::new(&h, &g);
        phi.assign(1, 1);
        let sep = Separation::new([0, 1], [1, 2]);
        let mut pa = SubgraphModel::new(&h, &g);
        pa.assign(0, 0);
        pa.assign(1, 1);
        let mut pb = SubgraphModel::new(&h, &g);
        pb.assign(1, 1);
        pb.assign(2, 2);
        let merged = merge_models(&phi, &sep, &pa, &pb).unwrap();
        assert!(merged.is_valid());
        assert_eq!(merged.get(2), Some(2));
    }
}
