//! Instance generators that translate exact-cover questions into packing and
//! subgraph questions with the same answer. Every generator re-checks its
//! structural bounds numerically on each call, and generated hosts carry role
//! labels ("selector:j=3") so a failed downstream check can name the vertex
//! it tripped on.

use crate::error::{input_err, Error, Result};
use crate::families::{
    build_family, canonical_template, clique, disjoint_copies, disjoint_union, path_graph,
    triple_rank, FamilySpec, Gadget,
};
use crate::graph::Graph;
use crate::kernel::{PackingInstance, SubgraphInstance};
use crate::oracle::{brute_perfect_partition, OracleBudget};

/// A set system: universe {0..universe-1} plus a family of subsets.
/// Every set is sorted and duplicate-free; element ids are in range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&e| e >= universe) {
                return input_err(format!("set system: element {bad} out of range u={universe}"));
            }
            cleaned.push(s);
        }
        Ok(SetSystem { universe, sets: cleaned })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Common set size, if every set has one (requires at least one set).
    pub fn uniformity(&self) -> Option<usize> {
        let first = self.sets.first()?.len();
        self.sets.iter().all(|s| s.len() == first).then_some(first)
    }

    /// Text form: a `u <universe>` line, then one `s <e1> <e2> ...` per set.
    pub fn to_text(&self) -> String {
        let mut out = format!("u {}\n", self.universe);
        for s in &self.sets {
            out.push('s');
            for e in s {
                out.push(' ');
                out.push_str(&e.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `to_text` format. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut universe: Option<usize> = None;
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap();
            let mut nums = Vec::new();
            for p in parts {
                match p.parse::<usize>() {
                    Ok(v) => nums.push(v),
                    Err(_) => return input_err(format!("line {lineno}: bad number {p:?}")),
                }
            }
            match tag {
                "u" => {
                    if universe.is_some() {
                        return input_err(format!("line {lineno}: duplicate universe line"));
                    }
                    if nums.len() != 1 {
                        return input_err(format!("line {lineno}: want exactly `u <n>`"));
                    }
                    universe = Some(nums[0]);
                }
                "s" => {
                    if universe.is_none() {
                        return input_err(format!("line {lineno}: set before universe line"));
                    }
                    sets.push(nums);
                }
                other => {
                    return input_err(format!("line {lineno}: unknown tag {other:?}"));
                }
            }
        }
        match universe {
            Some(u) => SetSystem::new(u, sets),
            None => input_err("missing universe line"),
        }
    }
}

/// Exact cover by 3-sets: universe {0..universe-1} and a family of 3-element
/// subsets. Triples are kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3CInstance {
    universe: usize,
    triples: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(universe: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(triples.len());
        for mut t in triples {
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return input_err(format!("triple {t:?} repeats an element"));
            }
            if t[2] >= universe {
                return input_err(format!("triple element {} out of range u={universe}", t[2]));
            }
            cleaned.push(t);
        }
        cleaned.sort_unstable();
        cleaned.dedup();
        Ok(X3CInstance { universe, triples: cleaned })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn to_system(&self) -> SetSystem {
        SetSystem::new(self.universe, self.triples.iter().map(|t| t.to_vec()).collect())
            .expect("triples already validated")
    }
}

/// Rewrites an exact-cover instance over universe n ≥ 2 into one with the
/// same answer that is 2n-uniform over exactly 2n + 2n² elements.
///
/// Fresh elements n..2n-1 receive every contiguous interval as an extra base
/// set, so a cover of the originals extends to exactly n+1 disjoint bases;
/// 2n² trailing filler elements then absorb all size differences: each base
/// is emitted once per placement of a contiguous filler run completing it to
/// size 2n, and n+1 runs of total length 2n² tile the filler exactly.
/// Inputs with n < 2 are solved directly and replaced by a fixed instance
/// with the same answer and the same shape.
pub fn regularize_setcover(sys: &SetSystem) -> Result<SetSystem> {
    let n = sys.universe();
    if n < 2 {
        let yes = n == 0 || sys.sets().iter().any(|s| s.as_slice() == [0]);
        return Ok(fixed_regular_instance(n, yes));
    }
    let mut bases: Vec<Vec<usize>> = sys.sets().to_vec();
    for i in 0..n {
        for j in i..n {
            bases.push((n + i..=n + j).collect());
        }
    }
    let filler0 = 2 * n;
    let filler = 2 * n * n;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for base in &bases {
        let need = 2 * n - base.len();
        for start in 0..=(filler - need) {
            let mut s = base.clone();
            s.extend(filler0 + start..filler0 + start + need);
            out.push(s);
        }
    }
    let result = SetSystem::new(filler0 + filler, out)?;
    assert_eq!(result.universe(), 2 * n + 2 * n * n, "universe shape");
    assert_eq!(result.uniformity(), Some(2 * n), "uniformity shape");
    Ok(result)
}

/// Shape-conforming stand-in emitted for degenerate regularization inputs.
fn fixed_regular_instance(n: usize, yes: bool) -> SetSystem {
    let sets = match (n, yes) {
        (0, _) => vec![vec![]],
        (_, true) => vec![vec![0, 1], vec![2, 3]],
        (_, false) => vec![vec![0, 1]],
    };
    SetSystem::new(2 * n + 2 * n * n, sets).expect("fixed instance is well-formed")
}

/// Host family targeted by [`reduce_to_packing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackingTarget {
    /// Odd cycle of length `s ≥ 3` with pendants at one cycle vertex.
    Fountain { s: usize },
    /// Odd cycle of length `s ≥ 3`, a stem of `stem ≥ 1` edges, pendants at
    /// the far stem end.
    LongFountain { s: usize, stem: usize },
    /// Odd path of length `s ≥ 1` whose two endpoints share the pendant set.
    OperaHouse { s: usize },
    /// Star with every edge subdivided once.
    SubdivStar,
    /// Odd path of length `s ≥ 1` with a pendant bundle at each end.
    DoubleBroom { s: usize },
}

/// Translates a uniform exact-cover instance (set size r ≥ 3 dividing the
/// universe n) into disjoint packing: the universe becomes an independent
/// set, each set contributes one attachment gadget wired to its elements,
/// and the question becomes packing t = n/r pattern copies. The parameter
/// t·|V(pattern)| stays linear in n; asserted on every call.
pub fn reduce_to_packing(sys: &SetSystem, target: PackingTarget) -> Result<PackingInstance> {
    let n = sys.universe();
    if n == 0 {
        return input_err("packing reduction: empty universe");
    }
    let r = match sys.uniformity() {
        Some(r) => r,
        None => return input_err("packing reduction needs a uniform set system"),
    };
    if r < 3 {
        return input_err(format!("packing reduction needs sets of size ≥ 3, got {r}"));
    }
    if n % r != 0 {
        return input_err(format!("packing reduction: set size {r} does not divide universe {n}"));
    }
    let (s, stem) = match target {
        PackingTarget::Fountain { s } | PackingTarget::LongFountain { s, .. } => {
            if s < 3 || s % 2 == 0 {
                return input_err(format!("cycle length must be odd and ≥ 3, got {s}"));
            }
            let stem = match target {
                PackingTarget::LongFountain { stem, .. } => {
                    if stem < 1 {
                        return input_err(format!("stem length must be ≥ 1, got {stem}"));
                    }
                    stem
                }
                _ => 0,
            };
            (s, stem)
        }
        PackingTarget::OperaHouse { s } | PackingTarget::DoubleBroom { s } => {
            if s % 2 == 0 {
                return input_err(format!("path length must be odd, got {s}"));
            }
            (s, 0)
        }
        PackingTarget::SubdivStar => (0, 0),
    };
    let t = n / r;
    let spec = match target {
        PackingTarget::Fountain { s } => FamilySpec::Fountain { s, n: r },
        PackingTarget::LongFountain { s, stem } => FamilySpec::LongFountain { s, t: stem, n: r },
        PackingTarget::OperaHouse { s } => FamilySpec::OperaHouse { s, n: r },
        PackingTarget::SubdivStar => FamilySpec::SubdivStar { n: r },
        PackingTarget::DoubleBroom { s } => FamilySpec::DoubleBroom { s, n: r },
    };
    let pattern = build_family(&spec)?.graph;
    let k = t * pattern.vertex_count();
    assert!(k <= (s + stem + 3) * n, "parameter k={k} exceeds ({s}+{stem}+3)·{n}");
    let m = sys.sets().len();
    let block = match target {
        PackingTarget::Fountain { .. } => s,
        PackingTarget::LongFountain { .. } => s + stem,
        PackingTarget::OperaHouse { .. } => s + 1,
        PackingTarget::SubdivStar => 1,
        PackingTarget::DoubleBroom { .. } => s + 1 + r,
    };
    let extra = if matches!(target, PackingTarget::SubdivStar) { n } else { 0 };
    let mut host = Graph::new(n + extra + m * block);
    for u in 0..n {
        host.set_label(u, format!("elem:u={u}"));
    }
    match target {
        PackingTarget::Fountain { .. } => {
            for (j, set) in sys.sets().iter().enumerate() {
                let base = n + j * block;
                for p in 0..s {
                    host.add_edge(base + p, base + (p + 1) % s);
                    host.set_label(base + p, format!("cyc:j={j},p={p}"));
                }
                host.set_label(base, format!("attach:j={j}"));
                for &u in set {
                    host.add_edge(base, u);
                }
            }
        }
        PackingTarget::LongFountain { .. } => {
            for (j, set) in sys.sets().iter().enumerate() {
                let base = n + j * block;
                for p in 0..s {
                    host.add_edge(base + p, base + (p + 1) % s);
                    host.set_label(base + p, format!("cyc:j={j},p={p}"));
                }
                for p in 0..stem {
                    let v = base + s + p;
                    let prev = if p == 0 { base } else { v - 1 };
                    host.add_edge(prev, v);
                    host.set_label(v, format!("stem:j={j},p={p}"));
                }
                let attach = base + s + stem - 1;
                host.set_label(attach, format!("attach:j={j}"));
                for &u in set {
                    host.add_edge(attach, u);
                }
            }
        }
        PackingTarget::OperaHouse { .. } => {
            for (j, set) in sys.sets().iter().enumerate() {
                let base = n + j * block;
                for p in 0..s {
                    host.add_edge(base + p, base + p + 1);
                }
                for p in 0..=s {
                    host.set_label(base + p, format!("path:j={j},p={p}"));
                }
                host.set_label(base, format!("end:j={j},side=0"));
                host.set_label(base + s, format!("end:j={j},side=1"));
                for &u in set {
                    host.add_edge(base, u);
                    host.add_edge(base + s, u);
                }
            }
        }
        PackingTarget::SubdivStar => {
            for u in 0..n {
                host.add_edge(u, n + u);
                host.set_label(n + u, format!("leaf:u={u}"));
            }
            for (j, set) in sys.sets().iter().enumerate() {
                let xj = 2 * n + j;
                host.set_label(xj, format!("center:j={j}"));
                for &u in set {
                    host.add_edge(xj, u);
                }
            }
        }
        PackingTarget::DoubleBroom { .. } => {
            for (j, set) in sys.sets().iter().enumerate() {
                let base = n + j * block;
                for p in 0..s {
                    host.add_edge(base + p, base + p + 1);
                    host.set_label(base + p, format!("path:j={j},p={p}"));
                }
                host.set_label(base, format!("x:j={j}"));
                host.set_label(base + s, format!("y:j={j}"));
                for &u in set {
                    host.add_edge(base, u);
                }
                for p in 0..r {
                    let v = base + s + 1 + p;
                    host.add_edge(base + s, v);
                    host.set_label(v, format!("ypend:j={j},p={p}"));
                }
            }
        }
    }
    PackingInstance::new(host, pattern, t)
}

/// Pattern family targeted by [`reduce_to_subgraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgraphTarget {
    /// Fan of K_{2,Q} blades around a shared hub, Q = universe + 1.
    DiamondFan,
    /// Subdivided tree with arms of `s ≥ 1` edges, Q = universe + 2.
    SubdivTree { s: usize },
}

/// Translates a uniform exact-cover instance into a single-pattern subgraph
/// question: Q − t filler branches around a shared hub plus one selector
/// branch per set, where using a set's branch consumes exactly its elements.
pub fn reduce_to_subgraph(sys: &SetSystem, target: SubgraphTarget) -> Result<SubgraphInstance> {
    let n = sys.universe();
    if n == 0 {
        return input_err("subgraph reduction: empty universe");
    }
    let r = match sys.uniformity() {
        Some(r) => r,
        None => return input_err("subgraph reduction needs a uniform set system"),
    };
    if r < 3 {
        return input_err(format!("subgraph reduction needs sets of size ≥ 3, got {r}"));
    }
    if n % r != 0 {
        return input_err(format!("subgraph reduction: set size {r} does not divide universe {n}"));
    }
    let t = n / r;
    let m = sys.sets().len();
    match target {
        SubgraphTarget::DiamondFan => {
            let q = n + 1;
            let pattern = build_family(&FamilySpec::DiamondFan { n: q })?.graph;
            assert_eq!(pattern.vertex_count(), q * q + q + 1, "pattern size");
            let blades = q - t;
            let blade_block = 1 + q;
            let sel_block = 1 + (q - r);
            let sel0 = n + 1 + blades * blade_block;
            let mut host = Graph::new(sel0 + m * sel_block);
            let z = n;
            host.set_label(z, "hub");
            for u in 0..n {
                host.set_label(u, format!("elem:u={u}"));
                // the hub must see every element a selector blade will claim
                host.add_edge(z, u);
            }
            for i in 0..blades {
                let tip = n + 1 + i * blade_block;
                host.set_label(tip, format!("tip:i={i}"));
                for p in 0..q {
                    let side = tip + 1 + p;
                    host.add_edge(side, z);
                    host.add_edge(side, tip);
                    host.set_label(side, format!("side:i={i},p={p}"));
                }
            }
            for (j, set) in sys.sets().iter().enumerate() {
                let vj = sel0 + j * sel_block;
                host.set_label(vj, format!("selector:j={j}"));
                for &u in set {
                    host.add_edge(vj, u);
                }
                for p in 0..(q - r) {
                    let w = vj + 1 + p;
                    host.add_edge(w, vj);
                    host.add_edge(w, z);
                    host.set_label(w, format!("pad:j={j},p={p}"));
                }
                assert_eq!(host.degree(vj), q, "selector degree");
            }
            Ok(SubgraphInstance { host, pattern })
        }
        SubgraphTarget::SubdivTree { s } => {
            if s < 1 {
                return input_err("arm length must be ≥ 1");
            }
            let q = n + 2;
            let pattern = build_family(&FamilySpec::SubdivTree { s, n: q })?.graph;
            assert_eq!(pattern.vertex_count(), q * q + q * s + 1, "pattern size");
            let blades = q - t;
            let blade_block = s + q;
            let sel_block = s + (q - r);
            let sel0 = n + 1 + blades * blade_block;
            let mut host = Graph::new(sel0 + m * sel_block);
            let z = n;
            host.set_label(z, "hub");
            for u in 0..n {
                host.set_label(u, format!("elem:u={u}"));
            }
            for i in 0..blades {
                let tip = n + 1 + i * blade_block;
                host.set_label(tip, format!("tip:i={i}"));
                let mut prev = tip;
                for p in 0..s - 1 {
                    let w = tip + 1 + p;
                    host.add_edge(prev, w);
                    host.set_label(w, format!("tippath:i={i},p={p}"));
                    prev = w;
                }
                host.add_edge(prev, z);
                for p in 0..q {
                    let w = tip + s + p;
                    host.add_edge(tip, w);
                    host.set_label(w, format!("tippend:i={i},p={p}"));
                }
            }
            for (j, set) in sys.sets().iter().enumerate() {
                let vj = sel0 + j * sel_block;
                host.set_label(vj, format!("selector:j={j}"));
                for &u in set {
                    host.add_edge(vj, u);
                }
                let mut prev = vj;
                for p in 0..s - 1 {
                    let w = vj + 1 + p;
                    host.add_edge(prev, w);
                    host.set_label(w, format!("selpath:j={j},p={p}"));
                    prev = w;
                }
                host.add_edge(prev, z);
                for p in 0..(q - r) {
                    let w = vj + s + p;
                    host.add_edge(vj, w);
                    host.set_label(w, format!("selpend:j={j},p={p}"));
                }
                assert_eq!(host.degree(vj), q + 1, "selector degree");
            }
            Ok(SubgraphInstance { host, pattern })
        }
    }
}

/// Vertex count of the shared template on ground set size n.
pub fn canonical_size(n: usize) -> usize {
    if n < 3 {
        n
    } else {
        n + 9 * (n * (n - 1) * (n - 2) / 6)
    }
}

/// Maximum degree of the template, by formula: a ground vertex gains 2
/// (triangle gadget) or 1 (path gadget) edges per incident 3-subset, and the
/// private block vertices sit at constant degree 4 resp. 3.
pub fn canonical_max_degree(n: usize, gadget: Gadget) -> usize {
    let inc = if n >= 3 { (n - 1) * (n - 2) / 2 } else { 0 };
    match gadget {
        Gadget::K3 => (2 * inc).max(4),
        Gadget::P3 => inc.max(3),
    }
}

/// A selected-vertex instance over the shared template: `n` fixes the
/// template, `selected` lists the vertices whose induced subgraph is asked to
/// split into gadget copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalInstance {
    n: usize,
    selected: Vec<usize>,
}

impl CanonicalInstance {
    pub fn new(n: usize, mut selected: Vec<usize>) -> Result<Self> {
        if n < 3 {
            return input_err(format!("canonical instance needs n ≥ 3, got {n}"));
        }
        let size = canonical_size(n);
        selected.sort_unstable();
        selected.dedup();
        if let Some(&bad) = selected.iter().find(|&&v| v >= size) {
            return input_err(format!("canonical instance: vertex {bad} out of range {size}"));
        }
        Ok(CanonicalInstance { n, selected })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }
}

/// Encodes exact cover by 3-sets as a selected-vertex instance: the selection
/// holds every ground vertex plus the 9-vertex block of every listed triple.
///
/// With `pad_for_degree`, the universe is first enlarged by 3n⁵ fresh
/// elements and all triples over the fresh elements are added — this keeps
/// the answer while pushing the selection count above the template's maximum
/// degree plus one (asserted). Padding is materialized only while the
/// selection stays below a fixed id budget; larger requests get a resource
/// error rather than a partial instance.
pub fn x3c_to_canonical(
    x: &X3CInstance,
    gadget: Gadget,
    pad_for_degree: bool,
) -> Result<CanonicalInstance> {
    let n = x.universe();
    let (n_eff, extra) = if pad_for_degree {
        if n == 0 {
            return input_err("degree padding needs a nonempty universe");
        }
        let pad = 3 * n.pow(5);
        let n_eff = n + pad;
        let pad128 = pad as u128;
        let extra_triples = pad128 * (pad128 - 1) * (pad128 - 2) / 6;
        let ids = n_eff as u128 + 9 * (x.triples().len() as u128 + extra_triples);
        const MAX_IDS: u128 = 8_000_000;
        if ids > MAX_IDS {
            return Err(Error::Resource(format!(
                "padded selection would hold {ids} ids (cap {MAX_IDS})"
            )));
        }
        let mut extra = Vec::with_capacity(extra_triples as usize);
        for a in n..n_eff {
            for b in a + 1..n_eff {
                for c in b + 1..n_eff {
                    extra.push([a, b, c]);
                }
            }
        }
        (n_eff, extra)
    } else {
        if n < 3 {
            return input_err(format!("canonical encoding needs universe ≥ 3, got {n}"));
        }
        (n, Vec::new())
    };
    let mut selected: Vec<usize> = (0..n_eff).collect();
    for t in x.triples().iter().chain(extra.iter()) {
        let base = n_eff + 9 * triple_rank(n_eff, *t);
        selected.extend(base..base + 9);
    }
    let inst = CanonicalInstance::new(n_eff, selected)?;
    if pad_for_degree {
        let delta = canonical_max_degree(n_eff, gadget);
        assert!(
            inst.selected.len() > delta + 1,
            "padding must lift the selection above max degree: |S|={} delta={delta}",
            inst.selected.len()
        );
    }
    Ok(inst)
}

/// Ground-truth answer for a selected-vertex instance: materialize the
/// template, restrict to the selection, and search for a perfect partition
/// into gadget copies. Templates beyond n = 100 and selections beyond 2000
/// vertices are refused as resource errors.
pub fn canonical_packing_answer(
    inst: &CanonicalInstance,
    gadget: Gadget,
    budget: &OracleBudget,
) -> Result<bool> {
    if inst.n > 100 {
        return Err(Error::Resource(format!(
            "template on {} ground vertices is too large to materialize",
            inst.n
        )));
    }
    if inst.selected.len() > 2000 {
        return Err(Error::Resource(format!(
            "selection of {} vertices is too large to solve directly",
            inst.selected.len()
        )));
    }
    let template = canonical_template(inst.n, gadget)?;
    let sub = template.induced_subgraph(&inst.selected)?.graph;
    let part = gadget_part(gadget);
    brute_perfect_partition(&sub, &part, budget)
}

fn gadget_part(gadget: Gadget) -> Graph {
    match gadget {
        Gadget::K3 => clique(3),
        Gadget::P3 => path_graph(2),
    }
}

fn compose_validate(inputs: &[CanonicalInstance]) -> Result<(usize, usize)> {
    let first = match inputs.first() {
        Some(f) => f,
        None => return input_err("composition needs at least one input"),
    };
    let n = first.n;
    let m = first.selected.len();
    for inst in inputs {
        if inst.n != n {
            return input_err(format!(
                "composition inputs disagree on ground size: {} vs {n}",
                inst.n
            ));
        }
        if inst.selected.len() != m {
            return input_err(format!(
                "composition inputs disagree on selection size: {} vs {m}",
                inst.selected.len()
            ));
        }
    }
    Ok((n, m))
}

/// Fixed one-word instances carrying a known answer: a triangle pattern fits
/// a triangle host and does not fit a single edge.
fn trivial_subgraph_instance(yes: bool) -> SubgraphInstance {
    let host = if yes { clique(3) } else { path_graph(1) };
    SubgraphInstance { host, pattern: clique(3) }
}

fn solve_inputs_directly(inputs: &[CanonicalInstance], gadget: Gadget) -> Result<bool> {
    let budget = OracleBudget::capped(100_000_000);
    for inst in inputs {
        if canonical_packing_answer(inst, gadget, &budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Combines any number of same-shape triangle-template instances into ONE
/// subgraph question answering their disjunction: per template vertex a
/// dummy/activator triangle, per input a selector adjacent to the activators
/// of its selection; the pattern is a subdivided star with m legs plus
/// t = |V(template)| − m + m/3 triangles.
///
/// Inputs below the composition scale (n or m under 10) are solved directly
/// and answered by a fixed instance; selection sizes off the 3-grid are
/// unsatisfiable and likewise answered by a fixed no-instance.
pub fn crosscompose_star_triangles(inputs: &[CanonicalInstance]) -> Result<SubgraphInstance> {
    let (n, m) = compose_validate(inputs)?;
    if m % 3 != 0 {
        return Ok(trivial_subgraph_instance(false));
    }
    if n < 10 || m < 10 {
        let yes = solve_inputs_directly(inputs, Gadget::K3)?;
        return Ok(trivial_subgraph_instance(yes));
    }
    star_triangles_wired(inputs, n, m)
}

/// As [`crosscompose_star_triangles`], for path-template instances: blockers,
/// propagators, dummies and communicators per template vertex, one carving
/// vertex adjacent to every blocker and propagator, (n')² carving pendant
/// edges, and selectors adjacent to the communicators of their selection.
/// The pattern packs m/3 paths plus two subdivided stars.
///
/// Besides the n, m ≥ 10 scale guard this composition also requires the
/// selection count to exceed the template's maximum degree plus one; smaller
/// inputs are solved directly.
pub fn crosscompose_twostars_paths(inputs: &[CanonicalInstance]) -> Result<SubgraphInstance> {
    let (n, m) = compose_validate(inputs)?;
    if m % 3 != 0 {
        return Ok(trivial_subgraph_instance(false));
    }
    let delta = canonical_max_degree(n, Gadget::P3);
    if n < 10 || m < 10 || m <= delta + 1 {
        let yes = solve_inputs_directly(inputs, Gadget::P3)?;
        return Ok(trivial_subgraph_instance(yes));
    }
    twostars_wired(inputs, n, m)
}

/// Raw star/triangles composition wiring with the scale guards lifted, for
/// equivalence testing at oracle-tractable sizes. Requires 3 | m, m ≥ 3.
#[cfg(any(test, feature = "relaxed-guards"))]
pub fn crosscompose_star_triangles_relaxed(
    inputs: &[CanonicalInstance],
) -> Result<SubgraphInstance> {
    let (n, m) = compose_validate(inputs)?;
    if m == 0 || m % 3 != 0 {
        return input_err(format!("relaxed wiring needs a selection size on the 3-grid, got {m}"));
    }
    star_triangles_wired(inputs, n, m)
}

/// Raw two-stars/paths composition wiring with the scale guards lifted, for
/// equivalence testing at oracle-tractable sizes. Requires 3 | m, m ≥ 3.
#[cfg(any(test, feature = "relaxed-guards"))]
pub fn crosscompose_twostars_paths_relaxed(
    inputs: &[CanonicalInstance],
) -> Result<SubgraphInstance> {
    let (n, m) = compose_validate(inputs)?;
    if m == 0 || m % 3 != 0 {
        return input_err(format!("relaxed wiring needs a selection size on the 3-grid, got {m}"));
    }
    twostars_wired(inputs, n, m)
}

fn star_triangles_wired(inputs: &[CanonicalInstance], n: usize, m: usize) -> Result<SubgraphInstance> {
    let template = canonical_template(n, Gadget::K3)?;
    let np = template.vertex_count();
    let mut host = Graph::new(3 * np + inputs.len());
    for v in 0..np {
        if let Some(l) = template.label(v) {
            host.set_label(v, l.to_string());
        }
    }
    for (u, v) in template.edges() {
        host.add_edge(u, v);
    }
    for v in 0..np {
        let dv = np + 2 * v;
        let av = np + 2 * v + 1;
        host.add_edge(v, dv);
        host.add_edge(v, av);
        host.add_edge(dv, av);
        host.set_label(dv, format!("dummy:v={v}"));
        host.set_label(av, format!("activator:v={v}"));
    }
    for (i, inst) in inputs.iter().enumerate() {
        let ui = 3 * np + i;
        host.set_label(ui, format!("selector:i={i}"));
        for &v in inst.selected() {
            host.add_edge(ui, np + 2 * v + 1);
        }
        assert_eq!(host.degree(ui), m, "selector degree");
    }
    let t = np - m + m / 3;
    let star = build_family(&FamilySpec::SubdivStar { n: m })?.graph;
    let pattern = disjoint_union(&star, &disjoint_copies(&clique(3), t));
    assert_eq!(pattern.vertex_count(), (2 * m + 1) + 3 * t, "pattern size");
    Ok(SubgraphInstance { host, pattern })
}

fn twostars_wired(inputs: &[CanonicalInstance], n: usize, m: usize) -> Result<SubgraphInstance> {
    let template = canonical_template(n, Gadget::P3)?;
    let np = template.vertex_count();
    let pairs = np * np;
    let sel0 = 5 * np + 1 + 2 * pairs;
    let mut host = Graph::new(sel0 + inputs.len());
    for v in 0..np {
        if let Some(l) = template.label(v) {
            host.set_label(v, l.to_string());
        }
    }
    for (u, v) in template.edges() {
        host.add_edge(u, v);
    }
    for j in 0..np {
        let b = np + j;
        let p = 2 * np + j;
        let d = 3 * np + j;
        let c = 4 * np + j;
        host.add_edge(b, p);
        host.add_edge(b, j);
        host.add_edge(d, c);
        host.add_edge(c, p);
        host.set_label(b, format!("blocker:j={j}"));
        host.set_label(p, format!("propagator:j={j}"));
        host.set_label(d, format!("dummy:j={j}"));
        host.set_label(c, format!("communicator:j={j}"));
    }
    let z = 5 * np;
    host.set_label(z, "carving");
    for j in 0..np {
        host.add_edge(z, np + j);
        host.add_edge(z, 2 * np + j);
    }
    for q in 0..pairs {
        let near = 5 * np + 1 + 2 * q;
        host.add_edge(near, near + 1);
        host.add_edge(z, near);
        host.set_label(near, format!("near:q={q}"));
        host.set_label(near + 1, format!("far:q={q}"));
    }
    for (i, inst) in inputs.iter().enumerate() {
        let ui = sel0 + i;
        host.set_label(ui, format!("selector:i={i}"));
        for &v in inst.selected() {
            host.add_edge(ui, 4 * np + v);
        }
        assert_eq!(host.degree(ui), m, "selector degree");
    }
    assert_eq!(host.degree(z), 2 * np + pairs, "carving degree");
    let legs1 = (2 * np - m) + pairs;
    let h1 = build_family(&FamilySpec::SubdivStar { n: legs1 })?.graph;
    let h2 = build_family(&FamilySpec::SubdivStar { n: m })?.graph;
    let paths = disjoint_copies(&path_graph(2), m / 3);
    let pattern = disjoint_union(&disjoint_union(&paths, &h1), &h2);
    assert_eq!(pattern.vertex_count(), m + (2 * legs1 + 1) + (2 * m + 1), "pattern size");
    Ok(SubgraphInstance { host, pattern })
}
