//! Deterministic constructors for the named pattern families and the
//! canonical template graphs. Vertex numbering is frozen per family
//! (backbone path/cycle first, then attachments in order) so generator
//! output is reproducible.

use crate::error::{input_err, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Path with `len` edges (len+1 vertices 0..len in path order).
    Path { len: usize },
    /// Complete graph on n vertices.
    Clique { n: usize },
    /// Complete bipartite K_{n,n}: left 0..n, right n..2n.
    Biclique { n: usize },
    /// Length-s path 0..s, n pendants on vertex 0 (ids s+1..s+n),
    /// then n pendants on vertex s (ids s+n+1..s+2n).
    DoubleBroom { s: usize, n: usize },
    /// Length-s path 0..s plus n vertices adjacent to both endpoints.
    OperaHouse { s: usize, n: usize },
    /// Length-s cycle 0..s-1 plus n pendants on vertex 0.
    Fountain { s: usize, n: usize },
    /// Length-s cycle, a length-t path grafted at cycle vertex 0
    /// (new vertices s..s+t-1), n pendants on the far path endpoint.
    LongFountain { s: usize, t: usize, n: usize },
    /// Star with n leaves, every edge subdivided once: center 0,
    /// subdividers 1..n, leaves n+1..2n; leg i is 0–i–(n+i).
    SubdivStar { n: usize },
    /// Star with n leaves, each edge subdivided s-1 times, n pendants per
    /// leaf. Leg i occupies 1+i*s .. 1+(i+1)*s-1 walking away from the
    /// center; pendants of leaf i occupy 1+n*s+i*n .. 1+n*s+(i+1)*n-1.
    SubdivTree { s: usize, n: usize },
    /// n copies of K_{2,n} with one degree-n vertex of each identified into
    /// z = 0; copy i has its other side vertex x_i = i (1-based) and its
    /// n-vertex side at n+1+(i-1)*n .. n+i*n.
    DiamondFan { n: usize },
    CanonicalK3 { n: usize },
    CanonicalP3 { n: usize },
}

/// A pattern graph together with its center (the unique strictly-max-degree
/// vertex) for the kinds where a center is meaningful.
#[derive(Clone, Debug)]
pub struct CenteredPattern {
    pub graph: Graph,
    pub center: Option<usize>,
}

pub fn build_family(spec: &FamilySpec) -> Result<CenteredPattern> {
    use FamilySpec::*;
    let graph = match *spec {
        Path { len } => path_graph(len),
        Clique { n } => clique(n),
        Biclique { n } => biclique(n, n),
        DoubleBroom { s, n } => {
            if s < 1 || n < 1 {
                return input_err(format!("double broom needs s ≥ 1, n ≥ 1, got s={s} n={n}"));
            }
            let mut g = path_graph(s);
            g = grow(g, 2 * n);
            for i in 0..n {
                g.add_edge(0, s + 1 + i);
            }
            for i in 0..n {
                g.add_edge(s, s + 1 + n + i);
            }
            g
        }
        OperaHouse { s, n } => {
            if s < 1 || n < 1 {
                return input_err(format!("opera house needs s ≥ 1, n ≥ 1, got s={s} n={n}"));
            }
            let mut g = grow(path_graph(s), n);
            for i in 0..n {
                g.add_edge(0, s + 1 + i);
                g.add_edge(s, s + 1 + i);
            }
            g
        }
        Fountain { s, n } => {
            if s < 3 || n < 1 {
                return input_err(format!("fountain needs s ≥ 3, n ≥ 1, got s={s} n={n}"));
            }
            let mut g = grow(cycle(s), n);
            for i in 0..n {
                g.add_edge(0, s + i);
            }
            g
        }
        LongFountain { s, t, n } => {
            if s < 3 || t < 1 || n < 1 {
                return input_err(format!(
                    "long fountain needs s ≥ 3, t ≥ 1, n ≥ 1, got s={s} t={t} n={n}"
                ));
            }
            let mut g = grow(cycle(s), t + n);
            g.add_edge(0, s);
            for i in 1..t {
                g.add_edge(s + i - 1, s + i);
            }
            let far = s + t - 1;
            for i in 0..n {
                g.add_edge(far, s + t + i);
            }
            g
        }
        SubdivStar { n } => {
            if n < 1 {
                return input_err(format!("subdivided star needs n ≥ 1, got n={n}"));
            }
            let mut g = Graph::new(2 * n + 1);
            for i in 1..=n {
                g.add_edge(0, i);
                g.add_edge(i, n + i);
            }
            g
        }
        SubdivTree { s, n } => {
            if s < 1 || n < 1 {
                return input_err(format!("subdivided tree needs s ≥ 1, n ≥ 1, got s={s} n={n}"));
            }
            let mut g = Graph::new(1 + n * s + n * n);
            for i in 0..n {
                let leg = 1 + i * s;
                g.add_edge(0, leg);
                for j in 1..s {
                    g.add_edge(leg + j - 1, leg + j);
                }
                let leaf = leg + s - 1;
                for j in 0..n {
                    g.add_edge(leaf, 1 + n * s + i * n + j);
                }
            }
            g
        }
        DiamondFan { n } => {
            if n < 1 {
                return input_err(format!("diamond fan needs n ≥ 1, got n={n}"));
            }
            let mut g = Graph::new(1 + n + n * n);
            for i in 1..=n {
                let side = n + 1 + (i - 1) * n;
                for j in 0..n {
                    g.add_edge(0, side + j);
                    g.add_edge(i, side + j);
                }
            }
            g
        }
        CanonicalK3 { n } => canonical_template(n, Gadget::K3)?,
        CanonicalP3 { n } => canonical_template(n, Gadget::P3)?,
    };
    let center = match spec {
        SubdivStar { .. } | Fountain { .. } => unique_max_degree_vertex(&graph),
        _ => None,
    };
    Ok(CenteredPattern { graph, center })
}

/// The unique vertex of strictly maximal degree, if any.
pub fn unique_max_degree_vertex(g: &Graph) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None; // (vertex, degree)
    let mut tied = false;
    for v in g.vertices() {
        match best {
            Some((_, d)) if g.degree(v) > d => {
                best = Some((v, g.degree(v)));
                tied = false;
            }
            Some((_, d)) if g.degree(v) == d => tied = true,
            None => best = Some((v, g.degree(v))),
            _ => {}
        }
    }
    match (best, tied) {
        (Some((v, _)), false) => Some(v),
        _ => None,
    }
}

fn grow(g: Graph, extra: usize) -> Graph {
    let mut out = Graph::new(g.vertex_count() + extra);
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for v in g.vertices() {
        if let Some(lbl) = g.label(v) {
            out.set_label(v, lbl);
        }
    }
    out
}

/// Path with `len` edges on vertices 0..=len.
pub fn path_graph(len: usize) -> Graph {
    let mut g = Graph::new(len + 1);
    for i in 0..len {
        g.add_edge(i, i + 1);
    }
    g
}

pub fn clique(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// K_{a,b}: left class 0..a, right class a..a+b.
pub fn biclique(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    g
}

/// Cycle on s ≥ 3 vertices 0..s-1.
pub fn cycle(s: usize) -> Graph {
    assert!(s >= 3, "cycle needs ≥ 3 vertices");
    let mut g = Graph::new(s);
    for i in 0..s {
        g.add_edge(i, (i + 1) % s);
    }
    g
}

/// Disjoint union of `t` copies of `h`, block-numbered: copy `i` occupies
/// ids `i*|V(h)| .. (i+1)*|V(h)|`.
pub fn disjoint_copies(h: &Graph, t: usize) -> Graph {
    let n = h.vertex_count();
    let mut g = Graph::new(n * t);
    for i in 0..t {
        let base = i * n;
        for (u, v) in h.edges() {
            g.add_edge(base + u, base + v);
        }
        for v in 0..n {
            if let Some(lbl) = h.label(v) {
                g.set_label(base + v, format!("copy{i}:{lbl}"));
            }
        }
    }
    g
}

/// Disjoint union of two graphs; the second block is shifted.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let na = a.vertex_count();
    let mut g = Graph::new(na + b.vertex_count());
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    for v in a.vertices() {
        if let Some(lbl) = a.label(v) {
            g.set_label(v, lbl);
        }
    }
    for (u, v) in b.edges() {
        g.add_edge(na + u, na + v);
    }
    for v in b.vertices() {
        if let Some(lbl) = b.label(v) {
            g.set_label(na + v, lbl);
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    K3,
    P3,
}

/// Gadget role offsets within a 9-vertex block, one (left, right, top)
/// triple per shared vertex in sorted order.
const ROLE_NAMES: [&str; 9] = ["al", "ar", "at", "bl", "br", "bt", "cl", "cr", "ct"];

/// All 3-subsets of 0..n in ascending lexicographic order.
pub fn lex_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Rank of the sorted triple in `lex_triples(n)` order.
pub fn triple_rank(n: usize, t: [usize; 3]) -> usize {
    let [a, b, c] = t;
    assert!(a < b && b < c && c < n, "triple must be sorted and in range");
    let c2 = |x: usize| x * (x - 1) / 2;
    let c3 = |x: usize| if x < 3 { 0 } else { x * (x - 1) * (x - 2) / 6 };
    // triples starting below a, plus pairs (b',c') with a fixed and b' < b,
    // plus c' between b+1 and c-1
    (c3(n) - c3(n - a)) + (c2(n - 1 - a) - c2(n - b)) + (c - b - 1)
}

/// Canonical template graph: an independent set U = 0..n plus one 9-vertex
/// gadget per 3-subset of U (block of triple j starts at n + 9j, roles in
/// ROLE_NAMES order). U vertices carry "u{i}" labels.
pub fn canonical_template(n: usize, gadget: Gadget) -> Result<Graph> {
    if n < 3 {
        return input_err(format!("canonical template needs n ≥ 3, got {n}"));
    }
    let triples = lex_triples(n);
    let mut g = Graph::new(n + 9 * triples.len());
    for u in 0..n {
        g.set_label(u, format!("u{u}"));
    }
    for (j, t) in triples.iter().enumerate() {
        let base = n + 9 * j;
        for (r, name) in ROLE_NAMES.iter().enumerate() {
            g.set_label(base + r, format!("g{j}:{name}"));
        }
        wire_gadget(&mut g, *t, base, gadget);
    }
    Ok(g)
}

/// Wires one gadget block: for each shared vertex s_i with local
/// (l,r,t) = (3i, 3i+1, 3i+2) relative to `base`:
/// K3 uses s–l, s–r, l–r, t–l, t–r and the top triangle t0t1t2;
/// P3 uses s–l, t–l, l–r and the top path t0–t1–t2.
fn wire_gadget(g: &mut Graph, shared: [usize; 3], base: usize, gadget: Gadget) {
    for i in 0..3 {
        let s = shared[i];
        let l = base + 3 * i;
        let r = base + 3 * i + 1;
        let t = base + 3 * i + 2;
        match gadget {
            Gadget::K3 => {
                g.add_edge(s, l);
                g.add_edge(s, r);
                g.add_edge(l, r);
                g.add_edge(t, l);
                g.add_edge(t, r);
            }
            Gadget::P3 => {
                g.add_edge(s, l);
                g.add_edge(t, l);
                g.add_edge(l, r);
            }
        }
    }
    let (t0, t1, t2) = (base + 2, base + 5, base + 8);
    match gadget {
        Gadget::K3 => {
            g.add_edge(t0, t1);
            g.add_edge(t1, t2);
            g.add_edge(t2, t0);
        }
        Gadget::P3 => {
            g.add_edge(t0, t1);
            g.add_edge(t1, t2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(spec: FamilySpec) -> (usize, usize) {
        let p = build_family(&spec).unwrap();
        (p.graph.vertex_count(), p.graph.edge_count())
    }

    #[test]
    fn vertex_and_edge_count_formulas() {
        for l in 0..=8 {
            assert_eq!(counts(FamilySpec::Path { len: l }), (l + 1, l));
        }
        for n in 0..=8 {
            assert_eq!(counts(FamilySpec::Clique { n }), (n, n * n.saturating_sub(1) / 2));
            assert_eq!(counts(FamilySpec::Biclique { n }), (2 * n, n * n));
        }
        for s in 1..=8 {
            for n in 1..=8 {
                assert_eq!(
                    counts(FamilySpec::DoubleBroom { s, n }),
                    ((s + 1) + 2 * n, s + 2 * n)
                );
                assert_eq!(counts(FamilySpec::OperaHouse { s, n }), ((s + 1) + n, s + 2 * n));
                assert_eq!(counts(FamilySpec::SubdivTree { s, n }), (1 + n * s + n * n, n * s + n * n));
            }
        }
        for s in 3..=8 {
            for n in 1..=8 {
                assert_eq!(counts(FamilySpec::Fountain { s, n }), (s + n, s + n));
                for t in 1..=4 {
                    assert_eq!(
                        counts(FamilySpec::LongFountain { s, t, n }),
                        (s + t + n, s + t + n)
                    );
                }
            }
        }
        for n in 1..=8 {
            assert_eq!(counts(FamilySpec::SubdivStar { n }), (2 * n + 1, 2 * n));
            assert_eq!(counts(FamilySpec::DiamondFan { n }), (n * n + n + 1, 2 * n * n));
        }
    }

    #[test]
    fn paper_stated_sizes() {
        assert_eq!(counts(FamilySpec::Path { len: 3 }), (4, 3));
        let q = 5;
        assert_eq!(counts(FamilySpec::DiamondFan { n: q }).0, q * q + q + 1);
        for s in 1..=3 {
            assert_eq!(counts(FamilySpec::SubdivTree { s, n: q }).0, q * q + q * s + 1);
        }
        let f = build_family(&FamilySpec::Fountain { s: 3, n: 5 }).unwrap();
        assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (8, 8));
        assert_eq!(f.center, Some(0));
        assert_eq!(f.graph.degree(0), 7);
    }

    #[test]
    fn parameter_guards() {
        assert!(build_family(&FamilySpec::Fountain { s: 2, n: 1 }).is_err());
        assert!(build_family(&FamilySpec::LongFountain { s: 3, t: 0, n: 1 }).is_err());
        assert!(build_family(&FamilySpec::SubdivTree { s: 0, n: 1 }).is_err());
        assert!(build_family(&FamilySpec::DoubleBroom { s: 0, n: 1 }).is_err());
        assert!(build_family(&FamilySpec::DiamondFan { n: 0 }).is_err());
        assert!(canonical_template(2, Gadget::K3).is_err());
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        let specs = [
            FamilySpec::Path { len: 4 },
            FamilySpec::Clique { n: 5 },
            FamilySpec::Biclique { n: 3 },
            FamilySpec::DoubleBroom { s: 3, n: 2 },
            FamilySpec::OperaHouse { s: 3, n: 2 },
            FamilySpec::OperaHouse { s: 4, n: 2 },
            FamilySpec::Fountain { s: 3, n: 2 },
            FamilySpec::Fountain { s: 4, n: 2 },
            FamilySpec::LongFountain { s: 5, t: 2, n: 2 },
            FamilySpec::SubdivStar { n: 4 },
            FamilySpec::SubdivTree { s: 2, n: 3 },
            FamilySpec::DiamondFan { n: 3 },
        ];
        for spec in specs {
            let g = build_family(&spec).unwrap().graph;
            assert!(g.is_connected(), "{spec:?} must be connected");
        }
        let bipartite = |spec: FamilySpec| {
            let g = build_family(&spec).unwrap().graph;
            g.bipartition().unwrap().is_some()
        };
        assert!(bipartite(FamilySpec::DoubleBroom { s: 3, n: 2 }));
        assert!(bipartite(FamilySpec::DoubleBroom { s: 4, n: 2 }));
        assert!(!bipartite(FamilySpec::OperaHouse { s: 3, n: 2 }));
        assert!(bipartite(FamilySpec::OperaHouse { s: 4, n: 2 }));
        assert!(!bipartite(FamilySpec::Fountain { s: 3, n: 2 }));
        assert!(bipartite(FamilySpec::Fountain { s: 4, n: 2 }));
        assert!(!bipartite(FamilySpec::LongFountain { s: 5, t: 2, n: 2 }));
        assert!(bipartite(FamilySpec::SubdivStar { n: 4 }));
        assert!(bipartite(FamilySpec::SubdivTree { s: 3, n: 3 }));
        assert!(bipartite(FamilySpec::DiamondFan { n: 4 }));
        assert!(!bipartite(FamilySpec::Clique { n: 3 }));
    }

    #[test]
    fn centers() {
        let c = |spec: FamilySpec| build_family(&spec).unwrap().center;
        assert_eq!(c(FamilySpec::SubdivStar { n: 1 }), Some(1)); // P3's middle
        assert_eq!(c(FamilySpec::SubdivStar { n: 2 }), None); // P5: degenerate
        assert_eq!(c(FamilySpec::SubdivStar { n: 3 }), Some(0));
        assert_eq!(c(FamilySpec::Fountain { s: 3, n: 1 }), Some(0));
        assert_eq!(c(FamilySpec::Fountain { s: 5, n: 4 }), Some(0));
        assert_eq!(c(FamilySpec::Clique { n: 4 }), None);
    }

    #[test]
    fn canonical_sizes() {
        let g = canonical_template(3, Gadget::K3).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 18);
        let g = canonical_template(5, Gadget::P3).unwrap();
        assert_eq!(g.vertex_count(), 95);
        assert_eq!(g.edge_count(), 11 * 10);
        // U is independent
        for u in 0..5 {
            for v in u + 1..5 {
                assert!(!g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn canonical_gadget_adjacency() {
        let n = 4;
        for gadget in [Gadget::K3, Gadget::P3] {
            let g = canonical_template(n, gadget).unwrap();
            for (j, t) in lex_triples(n).iter().enumerate() {
                let base = n + 9 * j;
                let mut expect = Graph::new(12);
                // local ids: shared 0,1,2 then the block 3..12
                let to_local = |v: usize| -> usize {
                    if let Some(i) = t.iter().position(|&x| x == v) {
                        i
                    } else {
                        assert!((base..base + 9).contains(&v));
                        3 + (v - base)
                    }
                };
                for i in 0..3 {
                    let (s, l, r, tt) = (i, 3 + 3 * i, 3 + 3 * i + 1, 3 + 3 * i + 2);
                    match gadget {
                        Gadget::K3 => {
                            for (u, v) in [(s, l), (s, r), (l, r), (tt, l), (tt, r)] {
                                expect.add_edge(u, v);
                            }
                        }
                        Gadget::P3 => {
                            for (u, v) in [(s, l), (tt, l), (l, r)] {
                                expect.add_edge(u, v);
                            }
                        }
                    }
                }
                match gadget {
                    Gadget::K3 => {
                        expect.add_edge(5, 8);
                        expect.add_edge(8, 11);
                        expect.add_edge(11, 5);
                    }
                    Gadget::P3 => {
                        expect.add_edge(5, 8);
                        expect.add_edge(8, 11);
                    }
                }
                let mut verts: Vec<usize> = t.to_vec();
                verts.extend(base..base + 9);
                let sub = g.induced_subgraph(&verts).unwrap();
                // compare against the expected local adjacency
                for u in 0..12 {
                    for v in u + 1..12 {
                        let gu = sub.old_ids[u];
                        let gv = sub.old_ids[v];
                        assert_eq!(
                            sub.graph.has_edge(u, v),
                            expect.has_edge(to_local(gu), to_local(gv)),
                            "gadget {j} ({gadget:?}) mismatch at {gu},{gv}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn triple_rank_matches_enumeration() {
        for n in 3..=9 {
            for (j, t) in lex_triples(n).iter().enumerate() {
                assert_eq!(triple_rank(n, *t), j, "n={n} t={t:?}");
            }
        }
    }

    #[test]
    fn disjoint_copies_cases() {
        let k3 = clique(3);
        assert_eq!(disjoint_copies(&k3, 0).vertex_count(), 0);
        let four = disjoint_copies(&k3, 4);
        assert_eq!((four.vertex_count(), four.edge_count()), (12, 12));
        assert_eq!(four.connected_components().len(), 4);
        let p3 = path_graph(2);
        let three = disjoint_copies(&p3, 3);
        for comp in three.connected_components() {
            let mut degs: Vec<usize> = comp.iter().map(|&v| three.degree(v)).collect();
            degs.sort_unstable();
            assert_eq!(degs, vec![1, 1, 2]);
        }
    }
}
