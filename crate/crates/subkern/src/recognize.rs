//! Recognizers for the structural pattern classes: a pattern H fits the
//! (a, b, c, d) split when some S with |S| ≤ c leaves only components that
//! are small (≤ a vertices) or thin (bipartite with a partite class of size
//! ≤ b, and at most d vertices per component whose closed neighborhood
//! inside the component is not universal to the component's neighbors in S).
//! The universality condition is enforced only for components larger than a;
//! small components pass unconditionally.

use crate::graph::Graph;

/// Witness that `s` realizes an (a, b, c, d)-split, with one classification
/// per component of H − S, ordered by smallest vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCertificate {
    pub s: Vec<usize>,
    pub components: Vec<ComponentSplit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSplit {
    /// Vertices of the component, in H's numbering, ascending.
    pub vertices: Vec<usize>,
    pub class: ComponentClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    /// Component has at most a vertices.
    Small,
    /// Bipartite component with |a_side| ≤ b; b_n lists the vertices whose
    /// closed neighborhood inside the component is not universal to the
    /// component's neighbors in S (at most d of them).
    Thin {
        a_side: Vec<usize>,
        b_side: Vec<usize>,
        b_n: Vec<usize>,
    },
}

/// Searches every S with |S| ≤ c in increasing size then lexicographic
/// order; first certificate wins.
pub fn find_split(h: &Graph, a: usize, b: usize, c: usize, d: usize) -> Option<SplitCertificate> {
    let n = h.vertex_count();
    for size in 0..=c.min(n) {
        let mut found = None;
        for_each_combination(n, size, &mut |s| {
            if found.is_none() {
                if let Some(components) = classify_all(h, s, a, b, d) {
                    found = Some(SplitCertificate {
                        s: s.to_vec(),
                        components,
                    });
                }
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Classifies every component of H − S, or None if some component fits
/// neither class.
pub(crate) fn classify_all(
    h: &Graph,
    s: &[usize],
    a: usize,
    b: usize,
    d: usize,
) -> Option<Vec<ComponentSplit>> {
    let in_s = membership(h.vertex_count(), s);
    let rest: Vec<usize> = h.vertices().filter(|&v| !in_s[v]).collect();
    let sub = h.induced_subgraph(&rest).expect("vertices in range");
    let mut out = Vec::new();
    for comp in sub.graph.connected_components() {
        let vertices: Vec<usize> = comp.iter().map(|&v| sub.old_ids[v]).collect();
        let class = classify_component(h, s, &vertices, a, b, d)?;
        out.push(ComponentSplit { vertices, class });
    }
    Some(out)
}

/// Classifies one component (given as sorted H-vertex ids) of H − S.
fn classify_component(
    h: &Graph,
    s: &[usize],
    comp: &[usize],
    a: usize,
    b: usize,
    d: usize,
) -> Option<ComponentClass> {
    if comp.len() <= a {
        return Some(ComponentClass::Small);
    }
    let sub = h.induced_subgraph(comp).expect("vertices in range");
    let (small_side, large_side) = sub.graph.bipartition().expect("nonempty component")?;
    if small_side.len() > b {
        return None;
    }
    let bad = non_universal_vertices(h, s, comp, &sub);
    if bad.len() > d {
        return None;
    }
    let lift = |side: &[usize]| side.iter().map(|&v| sub.old_ids[v]).collect::<Vec<_>>();
    Some(ComponentClass::Thin {
        a_side: lift(&small_side),
        b_side: lift(&large_side),
        b_n: bad,
    })
}

/// Vertices v of the component whose closed neighborhood inside the
/// component is not fully adjacent to every S-vertex the component sees.
fn non_universal_vertices(
    h: &Graph,
    s: &[usize],
    comp: &[usize],
    sub: &crate::graph::Induced,
) -> Vec<usize> {
    let in_s = membership(h.vertex_count(), s);
    let mut seen_s: Vec<usize> = comp
        .iter()
        .flat_map(|&v| h.neighbors(v).iter().copied())
        .filter(|&w| in_s[w])
        .collect();
    seen_s.sort_unstable();
    seen_s.dedup();
    let mut bad = Vec::new();
    for (i, &v) in comp.iter().enumerate() {
        let mut closed: Vec<usize> = sub.graph.neighbors(i).iter().map(|&j| comp[j]).collect();
        closed.push(v);
        let ok = closed
            .iter()
            .all(|&u| seen_s.iter().all(|&w| h.has_edge(u, w)));
        if !ok {
            bad.push(v);
        }
    }
    bad
}

/// Re-verifies a certificate directly against the split conditions.
pub fn verify_split(
    h: &Graph,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    cert: &SplitCertificate,
) -> bool {
    if cert.s.len() > c || cert.s.iter().any(|&v| v >= h.vertex_count()) {
        return false;
    }
    match classify_all(h, &cert.s, a, b, d) {
        Some(components) => components == cert.components,
        None => false,
    }
}

/// Every component either has ≤ a vertices or is bipartite with a partite
/// class of size ≤ b (the split with S = ∅); returns the per-component
/// classifications when that holds.
pub fn is_small_thin(h: &Graph, a: usize, b: usize) -> Option<Vec<ComponentSplit>> {
    classify_all(h, &[], a, b, 0)
}

/// Smallest S (increasing size, then lexicographic) with |S| ≤ c whose
/// removal leaves only components of at most two vertices.
pub fn is_matching_splittable(h: &Graph, c: usize) -> Option<Vec<usize>> {
    let n = h.vertex_count();
    for size in 0..=c.min(n) {
        let mut found = None;
        for_each_combination(n, size, &mut |s| {
            if found.is_none() && leaves_matching(h, s) {
                found = Some(s.to_vec());
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn leaves_matching(h: &Graph, s: &[usize]) -> bool {
    let in_s = membership(h.vertex_count(), s);
    let rest: Vec<usize> = h.vertices().filter(|&v| !in_s[v]).collect();
    let sub = h.induced_subgraph(&rest).expect("vertices in range");
    sub.graph
        .connected_components()
        .iter()
        .all(|comp| comp.len() <= 2)
}

fn membership(n: usize, s: &[usize]) -> Vec<bool> {
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    in_s
}

/// Calls `f` on every k-subset of 0..n in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut buf = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let need = k - buf.len();
        for v in start..=n.saturating_sub(need) {
            buf.push(v);
            rec(n, k, v + 1, buf, f);
            buf.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut buf, f);
    }
}
