//! End-to-end kernelization: the many-one kernel for disjoint packing, the
//! Turing kernel for splittable patterns, and the two many-one subgraph
//! kernels for star-plus-paths and fountain-plus-triangles patterns. Each
//! pipeline shrinks the host to a marked vertex set and hard-asserts the
//! polynomial size ceiling it promises.

use std::collections::{BTreeMap, BTreeSet};

use crate::detect::centered_star_model;
use crate::error::{input_err, Result};
use crate::families::{disjoint_copies, unique_max_degree_vertex, CenteredPattern};
use crate::graph::Graph;
use crate::oracle::{brute_subgraph, OracleBudget};
use crate::recognize::{find_split, is_small_thin};
use crate::repsets::{find_sunflower, generic_repset_with_bound};

/// `count` vertex-disjoint pattern copies sought in the host. The parameter
/// of the instance is count·|V(pattern)|.
#[derive(Clone, Debug)]
pub struct PackingInstance {
    pub host: Graph,
    pub pattern: Graph,
    pub count: usize,
}

impl PackingInstance {
    pub fn new(host: Graph, pattern: Graph, count: usize) -> Result<Self> {
        if count == 0 {
            return input_err("packing count must be at least 1");
        }
        Ok(PackingInstance { host, pattern, count })
    }

    pub fn parameter(&self) -> usize {
        self.count * self.pattern.vertex_count()
    }
}

/// A host/pattern pair for the plain subgraph question.
#[derive(Clone, Debug)]
pub struct SubgraphInstance {
    pub host: Graph,
    pub pattern: Graph,
}

/// The fixed no-instance emitted for patterns outside the promised shape:
/// one host vertex can never model an edge.
fn no_instance() -> SubgraphInstance {
    let mut pattern = Graph::new(2);
    pattern.add_edge(0, 1);
    SubgraphInstance { host: Graph::new(1), pattern }
}

/// Many-one kernel for disjoint packing. The pattern must be a-small/b-thin;
/// the marking runs on `count` disjoint pattern copies with an empty
/// separator, and the host shrinks to the marked set. Hosts too small to fit
/// the copies collapse to the empty graph.
pub fn packing_kernel(inst: &PackingInstance, a: usize, b: usize) -> Result<PackingInstance> {
    if inst.count == 0 {
        return input_err("packing count must be at least 1");
    }
    if is_small_thin(&inst.pattern, a, b).is_none() {
        return input_err(format!("pattern is not {a}-small/{b}-thin"));
    }
    if inst.parameter() > inst.host.vertex_count() {
        return Ok(PackingInstance {
            host: Graph::new(0),
            pattern: inst.pattern.clone(),
            count: inst.count,
        });
    }
    let query = disjoint_copies(&inst.pattern, inst.count);
    let (x, ceiling) =
        generic_repset_with_bound(&inst.host, &query, &[], &BTreeMap::new(), a, b, 0)?;
    assert!((x.len() as u128) <= ceiling, "marked host exceeds the packing ceiling");
    let sub = inst.host.induced_subgraph(&x).expect("marked ids in range");
    Ok(PackingInstance { host: sub.graph, pattern: inst.pattern.clone(), count: inst.count })
}

/// One Turing-kernel query: the split placement tried, the marked host
/// vertices in original numbering, and the oracle's verdict on the induced
/// subinstance.
#[derive(Clone, Debug)]
pub struct TuringSubinstance {
    pub pins: Vec<(usize, usize)>,
    pub vertices: Vec<usize>,
    pub answer: bool,
}

/// Transcript of a Turing-kernel run. `split` is absent when no set of the
/// allowed size realizes the split, in which case the pattern violates the
/// promise and the answer defaults to no.
#[derive(Clone, Debug, Default)]
pub struct TuringKernelOutput {
    pub split: Option<Vec<usize>>,
    pub subinstances: Vec<TuringSubinstance>,
    pub answer: bool,
}

/// Default oracle binding: the brute-force solver under the given budget.
pub fn brute_subgraph_oracle(budget: OracleBudget) -> impl FnMut(&Graph, &Graph) -> Result<bool> {
    move |g, h| Ok(brute_subgraph(g, h, &budget)?.is_some())
}

/// Every injective placement of `dset` into the host that realizes the
/// pattern edges inside `dset`, in lexicographic order.
fn split_placements(host: &Graph, pattern: &Graph, dset: &[usize]) -> Vec<BTreeMap<usize, usize>> {
    fn rec(
        host: &Graph,
        pattern: &Graph,
        dset: &[usize],
        at: usize,
        phi: &mut BTreeMap<usize, usize>,
        out: &mut Vec<BTreeMap<usize, usize>>,
    ) {
        if at == dset.len() {
            out.push(phi.clone());
            return;
        }
        let v = dset[at];
        'host: for w in host.vertices() {
            if phi.values().any(|&img| img == w) {
                continue;
            }
            for u in pattern.neighbors(v) {
                if let Some(&iu) = phi.get(u) {
                    if !host.has_edge(iu, w) {
                        continue 'host;
                    }
                }
            }
            phi.insert(v, w);
            rec(host, pattern, dset, at + 1, phi, out);
            phi.remove(&v);
        }
    }
    let mut out = Vec::new();
    rec(host, pattern, dset, 0, &mut BTreeMap::new(), &mut out);
    out
}

/// Turing kernel for (a,b,c,d)-splittable patterns: find a split set D of at
/// most c vertices, mark the host once per injective placement of D, and ask
/// the oracle about each induced subinstance. The pattern occurs in the host
/// iff some full model extends one of the placements, so the final answer is
/// the OR. All subinstances are produced; the oracle never sees the original
/// host.
pub fn turing_kernel(
    host: &Graph,
    pattern: &Graph,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    oracle: &mut dyn FnMut(&Graph, &Graph) -> Result<bool>,
) -> Result<TuringKernelOutput> {
    let Some(cert) = find_split(pattern, a, b, c, d) else {
        return Ok(TuringKernelOutput::default());
    };
    let dset = cert.s;
    let mut out = TuringKernelOutput {
        split: Some(dset.clone()),
        subinstances: Vec::new(),
        answer: false,
    };
    for phi in split_placements(host, pattern, &dset) {
        let (x, ceiling) = generic_repset_with_bound(host, pattern, &dset, &phi, a, b, d)?;
        assert!((x.len() as u128) <= ceiling, "subinstance exceeds the marking ceiling");
        let sub = host.induced_subgraph(&x).expect("marked ids in range");
        let answer = oracle(&sub.graph, pattern)?;
        out.answer |= answer;
        out.subinstances.push(TuringSubinstance {
            pins: phi.into_iter().collect(),
            vertices: x,
            answer,
        });
    }
    Ok(out)
}

/// Component split of a star-like pattern: (pendant legs, subdivided legs as
/// (subdivider, leaf) with the subdivider on the center).
fn star_legs(star: &Graph, center: usize) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
    let rest: Vec<usize> = star.vertices().filter(|&u| u != center).collect();
    let sub = star.induced_subgraph(&rest).expect("ids in range");
    let mut plain = Vec::new();
    let mut split = Vec::new();
    for comp in sub.graph.connected_components() {
        let verts: Vec<usize> = comp.iter().map(|&u| sub.old_ids[u]).collect();
        match verts.as_slice() {
            [u] if star.has_edge(*u, center) => plain.push(*u),
            [p, q] => {
                let (sdv, leaf) = if star.has_edge(*p, center) { (*p, *q) } else { (*q, *p) };
                if !star.has_edge(sdv, center) || star.has_edge(leaf, center) {
                    return input_err("pattern is not a subdivided star");
                }
                split.push((sdv, leaf));
            }
            _ => return input_err("pattern is not a subdivided star"),
        }
    }
    Ok((plain, split))
}

fn short_path_components(g: &Graph, max_len: usize) -> bool {
    g.connected_components().iter().all(|comp| {
        let sub = g.induced_subgraph(comp).expect("ids in range");
        comp.len() <= max_len
            && sub.graph.edge_count() == comp.len() - 1
            && sub.graph.max_degree() <= 2
    })
}

/// Candidate centers for a subdivided star `star` packaged with extra short
/// path components `rest`: every full model of star + rest in the host can
/// be re-centered onto the returned set. At most 4k + 18k² + 1 vertices for
/// k the combined pattern size.
///
/// High-degree hosts shortcut to a single center: with k vertices of degree
/// over 3k, or k disjoint three-vertex paths away from them, the path
/// components never compete with the star for space. Otherwise everything
/// outside S (high degree), T′ (a maximal short-path packing plus the
/// components hanging off it) lies in micro-components whose star models are
/// interchangeable, so one delegate x* represents them all.
pub fn relevant_centers_star(
    host: &Graph,
    star: &CenteredPattern,
    rest: &Graph,
) -> Result<Vec<usize>> {
    let Some(center) = star.center else {
        return input_err("pattern has no designated center");
    };
    let (plain_legs, _) = star_legs(&star.graph, center)?;
    let k1 = plain_legs.len();
    if !short_path_components(rest, 3) {
        return input_err("companion components must be paths on at most 3 vertices");
    }
    let k = star.graph.vertex_count() + rest.vertex_count();

    let mut first_center = None;
    for v in host.vertices() {
        if centered_star_model(host, star, v)?.is_some() {
            first_center = Some(v);
            break;
        }
    }
    let Some(first_center) = first_center else {
        return Ok(vec![]);
    };

    let high: Vec<usize> = host.vertices().filter(|&v| host.degree(v) > 3 * k).collect();
    if high.len() >= k {
        return Ok(vec![first_center]);
    }

    // maximal packing of three-vertex paths avoiding the high-degree set;
    // one ascending midpoint pass is enough since removals never free up a
    // skipped midpoint
    let mut used = vec![false; host.vertex_count()];
    for &v in &high {
        used[v] = true;
    }
    let mut packed: Vec<[usize; 3]> = Vec::new();
    for mid in host.vertices() {
        if used[mid] {
            continue;
        }
        let free: Vec<usize> =
            host.neighbors(mid).iter().copied().filter(|&w| !used[w]).take(2).collect();
        if free.len() == 2 {
            used[mid] = true;
            used[free[0]] = true;
            used[free[1]] = true;
            packed.push([free[0], mid, free[1]]);
        }
    }
    if packed.len() >= k {
        return Ok(vec![first_center]);
    }

    let leftovers: Vec<usize> = host.vertices().filter(|&v| !used[v]).collect();
    let sub = host.induced_subgraph(&leftovers).expect("ids in range");
    let packed_set: BTreeSet<usize> = packed.iter().flatten().copied().collect();
    let mut fringe: BTreeSet<usize> = packed_set.clone();
    let mut micro: Vec<Vec<usize>> = Vec::new();
    for comp in sub.graph.connected_components() {
        let verts: Vec<usize> = comp.iter().map(|&u| sub.old_ids[u]).collect();
        assert!(verts.len() <= 2, "path packing left a three-vertex component");
        let touches_packing =
            verts.iter().any(|&v| host.neighbors(v).iter().any(|w| packed_set.contains(w)));
        if touches_packing {
            fringe.extend(verts);
        } else {
            micro.push(verts);
        }
    }

    let centerable: Vec<usize> = {
        let mut out = Vec::new();
        for comp in &micro {
            for &v in comp {
                if centered_star_model(host, star, v)?.is_some() {
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    };
    let mut y: BTreeSet<usize> = high.iter().copied().collect();
    y.extend(fringe);
    if !centerable.is_empty() {
        // any centerable vertex serves as the delegate when the star has no
        // plain legs; otherwise prefer one with a companion vertex, which
        // can soak up a plain leg that would otherwise cost a high-degree
        // vertex
        let delegate = if k1 > 0 {
            micro
                .iter()
                .filter(|comp| comp.len() == 2)
                .flat_map(|comp| comp.iter())
                .find(|v| centerable.binary_search(v).is_ok())
                .copied()
                .unwrap_or(centerable[0])
        } else {
            centerable[0]
        };
        y.insert(delegate);
    }
    let y: Vec<usize> = y.into_iter().collect();
    assert!(y.len() <= 4 * k + 18 * k * k + 1, "center set exceeds its ceiling");
    Ok(y)
}

/// A triangle with pendants all on one vertex, described by its center and
/// the lone edge not through it.
fn fountain_center(g: &Graph) -> Option<usize> {
    let c = unique_max_degree_vertex(g)?;
    if g.degree(c) != g.vertex_count() - 1 || g.vertex_count() < 4 {
        return None;
    }
    let side = g.edges().iter().filter(|&&(u, v)| u != c && v != c).count();
    (side == 1).then_some(c)
}

/// Candidate centers for a pendant-decorated triangle `fountain` packaged
/// with extra components `rest` of at most three vertices each: every full
/// model in the host can be re-centered onto the returned set, of size at
/// most 18k³.
///
/// Collects all host triangles having a vertex of degree ≥ the center's
/// pattern degree, then strips sunflower petals while more than 6k³ triples
/// remain: a sunflower of k+1 triples is interchangeable (disjoint petals
/// each fit a displaced component; a shared core vertex has degree ≥ k+1 and
/// re-hosts the pendants), so dropping one petal preserves some full model.
pub fn relevant_centers_fountain(
    host: &Graph,
    fountain: &CenteredPattern,
    rest: &Graph,
) -> Result<Vec<usize>> {
    let Some(center) = fountain.center else {
        return input_err("pattern has no designated center");
    };
    if fountain_center(&fountain.graph) != Some(center) {
        return input_err("pattern is not a pendant-decorated triangle");
    }
    if rest.connected_components().iter().any(|comp| comp.len() > 3) {
        return input_err("companion components must have at most 3 vertices");
    }
    let k = fountain.graph.vertex_count() + rest.vertex_count();
    let center_degree = fountain.graph.degree(center);

    let mut triples: Vec<Vec<usize>> = Vec::new();
    for (u, v) in host.edges() {
        let (lo, hi) =
            if host.degree(u) <= host.degree(v) { (u, v) } else { (v, u) };
        for &w in host.neighbors(lo) {
            if w > v && host.has_edge(hi, w) {
                let deg_max = host.degree(u).max(host.degree(v)).max(host.degree(w));
                if deg_max >= center_degree {
                    triples.push(vec![u, v, w]);
                }
            }
        }
    }

    let limit = 6 * k * k * k;
    while triples.len() >= limit {
        let Some(sf) = find_sunflower(&triples, k + 1) else {
            break;
        };
        let gone = sf.petals[0].clone();
        let at = triples.iter().position(|t| *t == gone).expect("petal comes from the family");
        triples.remove(at);
    }
    assert!(triples.len() <= limit, "stripping failed to reach the family ceiling");

    let y: BTreeSet<usize> = triples.into_iter().flatten().collect();
    let y: Vec<usize> = y.into_iter().collect();
    assert!(y.len() <= 18 * k * k * k, "center set exceeds its ceiling");
    Ok(y)
}

/// Pattern decomposition shared by the two subgraph kernels: at most one
/// component may exceed three vertices.
struct BigComponent {
    graph: Graph,
    old_ids: Vec<usize>,
    rest: Graph,
}

fn split_off_big_component(pattern: &Graph) -> Option<Option<BigComponent>> {
    let comps = pattern.connected_components();
    let big: Vec<&Vec<usize>> = comps.iter().filter(|c| c.len() > 3).collect();
    match big.len() {
        0 => Some(None),
        1 => {
            let sub = pattern.induced_subgraph(big[0]).expect("ids in range");
            let rest_ids: Vec<usize> =
                pattern.vertices().filter(|v| big[0].binary_search(v).is_err()).collect();
            let rest = pattern.induced_subgraph(&rest_ids).expect("ids in range").graph;
            Some(Some(BigComponent { graph: sub.graph, old_ids: sub.old_ids, rest }))
        }
        _ => None,
    }
}

/// Union of pinned markings over every candidate center, with the combined
/// ceiling |Y|·(per-center ceiling) asserted. Every component of
/// pattern − center must have at most three vertices.
fn union_over_centers(
    host: &Graph,
    pattern: &Graph,
    center: usize,
    centers: &[usize],
) -> Result<SubgraphInstance> {
    let mut x: BTreeSet<usize> = BTreeSet::new();
    let mut per_center: u128 = 0;
    for &y in centers {
        let phi0: BTreeMap<usize, usize> = [(center, y)].into();
        let (xi, ceiling) =
            generic_repset_with_bound(host, pattern, &[center], &phi0, 3, 0, 0)?;
        per_center = ceiling;
        x.extend(xi);
    }
    let x: Vec<usize> = x.into_iter().collect();
    assert!(
        (x.len() as u128) <= (centers.len() as u128).saturating_mul(per_center),
        "combined marking exceeds |Y| times the per-center ceiling"
    );
    let sub = host.induced_subgraph(&x).expect("marked ids in range");
    Ok(SubgraphInstance { host: sub.graph, pattern: pattern.clone() })
}

fn packing_route(host: &Graph, pattern: &Graph, a: usize, b: usize) -> Result<SubgraphInstance> {
    let inst = PackingInstance { host: host.clone(), pattern: pattern.clone(), count: 1 };
    let out = packing_kernel(&inst, a, b)?;
    Ok(SubgraphInstance { host: out.host, pattern: out.pattern })
}

/// Many-one kernel for patterns made of one subdivided star plus short path
/// components. A star with a unique center goes through the relevant-center
/// pipeline; a center-free star is a path on at most five vertices, making
/// the whole pattern 5-small and a packing kernel with one copy. Patterns
/// outside the shape collapse to a fixed no-instance.
pub fn star_paths_kernel(host: &Graph, pattern: &Graph) -> Result<SubgraphInstance> {
    let Some(shape) = split_off_big_component(pattern) else {
        return Ok(no_instance());
    };
    let Some(big) = shape else {
        return if short_path_components(pattern, 3) {
            packing_route(host, pattern, 3, 0)
        } else {
            Ok(no_instance())
        };
    };
    if !short_path_components(&big.rest, 3) {
        return Ok(no_instance());
    }
    if let Some(center) = unique_max_degree_vertex(&big.graph) {
        if star_legs(&big.graph, center).is_ok() {
            let star = CenteredPattern { graph: big.graph.clone(), center: Some(center) };
            let y = relevant_centers_star(host, &star, &big.rest)?;
            return union_over_centers(host, pattern, big.old_ids[center], &y);
        }
    }
    if short_path_components(&big.graph, 5) {
        return packing_route(host, pattern, 5, 0);
    }
    Ok(no_instance())
}

/// Many-one kernel for patterns made of one pendant-decorated triangle plus
/// components of at most three vertices. A decorated triangle with a center
/// goes through the relevant-center pipeline; a bare star or triangle leaves
/// the pattern 3-small/1-thin and a packing kernel with one copy. Patterns
/// outside the shape collapse to a fixed no-instance.
pub fn fountain_triangles_kernel(host: &Graph, pattern: &Graph) -> Result<SubgraphInstance> {
    let Some(shape) = split_off_big_component(pattern) else {
        return Ok(no_instance());
    };
    let Some(big) = shape else {
        return packing_route(host, pattern, 3, 1);
    };
    if let Some(center) = fountain_center(&big.graph) {
        let fountain = CenteredPattern { graph: big.graph.clone(), center: Some(center) };
        let y = relevant_centers_fountain(host, &fountain, &big.rest)?;
        return union_over_centers(host, pattern, big.old_ids[center], &y);
    }
    let n = big.graph.vertex_count();
    let is_star = big.graph.edge_count() == n - 1 && big.graph.max_degree() == n - 1;
    if is_star {
        return packing_route(host, pattern, 3, 1);
    }
    Ok(no_instance())
}
