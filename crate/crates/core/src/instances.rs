//! COP instances: a ground set plus the fully enumerated set of feasible
//! incidence vectors, built-in generators for a few classic families, and
//! the brute-force optimizer used as ground truth everywhere else.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CopxError, Result};
use crate::rational::{Rat, RatVec};

pub const INSTANCE_SCHEMA: &str = "copx-instance-v1";
pub const WEIGHTS_SCHEMA: &str = "copx-weights-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    labels: Vec<String>,
    vertices: Vec<Vec<u8>>,
    family: String,
}

impl Instance {
    /// Validates and wraps an explicit vertex list. Vertex order is kept as given.
    pub fn new(labels: Vec<String>, vertices: Vec<Vec<u8>>, family: impl Into<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(CopxError::InvalidInstance("ground set must be nonempty".into()));
        }
        if vertices.is_empty() {
            return Err(CopxError::InvalidInstance("feasible family is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != n {
                return Err(CopxError::InvalidInstance(format!(
                    "vertex {i} has length {} but the ground set has {n} elements",
                    v.len()
                )));
            }
            if let Some(bad) = v.iter().find(|&&x| x > 1) {
                return Err(CopxError::InvalidInstance(format!("vertex {i} has non-binary entry {bad}")));
            }
            if !seen.insert(v.as_slice()) {
                return Err(CopxError::InvalidInstance(format!("duplicate vertex {v:?} at index {i}")));
            }
        }
        Ok(Instance { labels, vertices, family: family.into() })
    }

    /// Like [`Instance::new`] with generic labels `e0..e{n-1}`.
    pub fn from_vertices(vertices: Vec<Vec<u8>>, family: impl Into<String>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        Self::new(element_labels(n), vertices, family)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> &[u8] {
        &self.vertices[k]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_rat(&self, k: usize) -> RatVec {
        RatVec::from_ints(self.vertices[k].iter().map(|&x| x as i64))
    }

    pub fn index_of(&self, v: &[u8]) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(CopxError::InvalidParams(format!("vertex index {k} out of range for |X| = {}", self.len())));
        }
        Ok(())
    }
}

pub fn element_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// The weight vector `c` of a COP.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub RatVec);

impl WeightVector {
    pub fn new(entries: RatVec) -> Self {
        WeightVector(entries)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(values: I) -> Self {
        WeightVector(RatVec::from_ints(values))
    }

    pub fn entries(&self) -> &RatVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Indices of strictly negative components.
    pub fn negative_support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, x)| x.is_negative()).map(|(i, _)| i).collect()
    }

    pub fn scale(&self, alpha: &Rat) -> WeightVector {
        WeightVector(self.0.scale(alpha))
    }
}

/// Value `c · x_k`.
pub fn objective(inst: &Instance, c: &WeightVector, k: usize) -> Result<Rat> {
    c.0.dot_int(inst.vertex(k))
}

/// All vertex indices attaining the maximum of `c · x` over X.
pub fn argmax_brute(inst: &Instance, c: &WeightVector) -> Result<Vec<usize>> {
    if c.len() != inst.n() {
        return Err(CopxError::DimensionMismatch { expected: inst.n(), found: c.len() });
    }
    let values: Vec<Rat> = (0..inst.len()).map(|k| objective(inst, c, k)).collect::<Result<_>>()?;
    let best = values.iter().max().expect("instances are nonempty");
    Ok(values.iter().enumerate().filter(|(_, v)| *v == best).map(|(k, _)| k).collect())
}

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= nodes || v >= nodes {
                return Err(CopxError::InvalidParams(format!("edge {u}-{v} references a node >= {nodes}")));
            }
            if u == v {
                return Err(CopxError::InvalidParams(format!("self-loop at node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(CopxError::InvalidParams(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(Graph { nodes, edges })
    }

    pub fn complete(nodes: usize) -> Self {
        let edges = (0..nodes).flat_map(|u| (u + 1..nodes).map(move |v| (u, v))).collect();
        Graph { nodes, edges }
    }

    pub fn triangle() -> Self {
        Graph::complete(3)
    }

    /// Parses `triangle`, `k<m>` (complete graph) or an edge list `0-1,1-2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("triangle") {
            return Ok(Graph::triangle());
        }
        if let Some(m) = spec.strip_prefix('k').or_else(|| spec.strip_prefix('K')) {
            let m: usize =
                m.parse().map_err(|_| CopxError::InvalidParams(format!("bad complete-graph size in {spec:?}")))?;
            return Ok(Graph::complete(m));
        }
        let mut edges = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (u, v) = part
                .split_once('-')
                .ok_or_else(|| CopxError::InvalidParams(format!("bad edge {part:?}, expected u-v")))?;
            let parse =
                |s: &str| s.trim().parse::<usize>().map_err(|_| CopxError::InvalidParams(format!("bad node id {s:?}")));
            edges.push((parse(u)?, parse(v)?));
        }
        let nodes = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::new(nodes, edges)
    }

    fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    KSubsets { n: usize, k: usize },
    SpanningTrees(Graph),
    PerfectMatchings(Graph),
    TspTours { cities: usize },
    Explicit { labels: Option<Vec<String>>, vertices: Vec<Vec<u8>> },
}

impl Family {
    pub fn tag(&self) -> String {
        match self {
            Family::KSubsets { n, k } => format!("k_subsets(n={n},k={k})"),
            Family::SpanningTrees(g) => format!("spanning_trees(nodes={},edges={})", g.nodes, g.edges.len()),
            Family::PerfectMatchings(g) => format!("perfect_matchings(nodes={},edges={})", g.nodes, g.edges.len()),
            Family::TspTours { cities } => format!("tsp_tours(m={cities})"),
            Family::Explicit { .. } => "explicit".into(),
        }
    }
}

/// Size guardrails for enumeration.
#[derive(Clone, Copy, Debug)]
pub struct GenLimits {
    pub max_ground_set: usize,
    pub max_vertices: usize,
    pub max_candidates: u128,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits { max_ground_set: 64, max_vertices: 1_000_000, max_candidates: 50_000_000 }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Visits every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

fn check_candidates(count: u128, limits: &GenLimits, what: &'static str) -> Result<()> {
    if count > limits.max_candidates {
        return Err(CopxError::SizeCap {
            what,
            n: usize::try_from(count).unwrap_or(usize::MAX),
            cap: usize::try_from(limits.max_candidates).unwrap_or(usize::MAX),
        });
    }
    Ok(())
}

fn subsets_to_vertices(n: usize, subsets: Vec<Vec<usize>>) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = subsets
        .into_iter()
        .map(|s| {
            let mut v = vec![0u8; n];
            for i in s {
                v[i] = 1;
            }
            v
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn spanning_trees(g: &Graph, limits: &GenLimits) -> Result<Vec<Vec<u8>>> {
    if g.nodes == 0 {
        return Err(CopxError::InvalidParams("spanning trees need at least one node".into()));
    }
    let size = g.nodes - 1;
    check_candidates(binomial(g.edges.len(), size), limits, "spanning_trees")?;
    let mut found = Vec::new();
    for_each_combination(g.edges.len(), size, |combo| {
        let mut uf = UnionFind::new(g.nodes);
        if combo.iter().all(|&e| uf.union(g.edges[e].0, g.edges[e].1)) {
            found.push(combo.to_vec());
        }
    });
    Ok(subsets_to_vertices(g.edges.len(), found))
}

fn perfect_matchings(g: &Graph, limits: &GenLimits) -> Result<Vec<Vec<u8>>> {
    if g.nodes == 0 || g.nodes % 2 == 1 {
        return Err(CopxError::InvalidParams(format!(
            "perfect matchings need a positive even node count, got {}",
            g.nodes
        )));
    }
    let size = g.nodes / 2;
    check_candidates(binomial(g.edges.len(), size), limits, "perfect_matchings")?;
    let mut found = Vec::new();
    for_each_combination(g.edges.len(), size, |combo| {
        let mut covered = vec![false; g.nodes];
        let disjoint = combo.iter().all(|&e| {
            let (u, v) = g.edges[e];
            let ok = !covered[u] && !covered[v];
            covered[u] = true;
            covered[v] = true;
            ok
        });
        if disjoint {
            found.push(combo.to_vec());
        }
    });
    Ok(subsets_to_vertices(g.edges.len(), found))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn tsp_tours(cities: usize, limits: &GenLimits) -> Result<(Graph, Vec<Vec<u8>>)> {
    if cities < 3 {
        return Err(CopxError::InvalidParams(format!("tsp_tours needs at least 3 cities, got {cities}")));
    }
    let count: u128 = (1..cities as u128).product::<u128>() / 2;
    check_candidates(count, limits, "tsp_tours")?;
    let g = Graph::complete(cities);
    let edge_index = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        g.edges.iter().position(|&e| e == (a, b)).expect("complete graph has every edge")
    };
    let mut rest: Vec<usize> = (1..cities).collect();
    let mut found = Vec::new();
    loop {
        if rest[0] < rest[rest.len() - 1] {
            let mut tour = Vec::with_capacity(cities);
            let mut prev = 0;
            for &c in &rest {
                tour.push(edge_index(prev, c));
                prev = c;
            }
            tour.push(edge_index(prev, 0));
            found.push(tour);
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    let vertices = subsets_to_vertices(g.edges.len(), found);
    Ok((g, vertices))
}

/// Builds the instance whose vertices are all incidence vectors of the family,
/// sorted lexicographically.
pub fn gen_family(family: &Family, limits: &GenLimits) -> Result<Instance> {
    let (labels, vertices) = match family {
        Family::KSubsets { n, k } => {
            if *n == 0 || k > n {
                return Err(CopxError::InvalidParams(format!("k_subsets needs 1 <= n and k <= n (n={n}, k={k})")));
            }
            check_candidates(binomial(*n, *k), limits, "k_subsets")?;
            let mut found = Vec::new();
            for_each_combination(*n, *k, |c| found.push(c.to_vec()));
            (element_labels(*n), subsets_to_vertices(*n, found))
        }
        Family::SpanningTrees(g) => (g.edge_labels(), spanning_trees(g, limits)?),
        Family::PerfectMatchings(g) => (g.edge_labels(), perfect_matchings(g, limits)?),
        Family::TspTours { cities } => {
            let (g, v) = tsp_tours(*cities, limits)?;
            (g.edge_labels(), v)
        }
        Family::Explicit { labels, vertices } => {
            let n = vertices.first().map_or(0, Vec::len);
            (labels.clone().unwrap_or_else(|| element_labels(n)), vertices.clone())
        }
    };
    if labels.len() > limits.max_ground_set {
        return Err(CopxError::SizeCap { what: "ground set", n: labels.len(), cap: limits.max_ground_set });
    }
    if vertices.is_empty() {
        return Err(CopxError::InvalidParams(format!("{} has no feasible subsets", family.tag())));
    }
    if vertices.len() > limits.max_vertices {
        return Err(CopxError::SizeCap { what: "vertex set", n: vertices.len(), cap: limits.max_vertices });
    }
    Instance::new(labels, vertices, family.tag())
}

// ---------------------------------------------------------------------------
// JSON files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema: String,
    n: usize,
    labels: Vec<String>,
    family: String,
    vertices: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    schema: String,
    c: Vec<Rat>,
}

pub fn instance_to_json(inst: &Instance) -> serde_json::Value {
    let file = InstanceFile {
        schema: INSTANCE_SCHEMA.into(),
        n: inst.n(),
        labels: inst.labels.clone(),
        family: inst.family.clone(),
        vertices: inst.vertices.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect(),
    };
    serde_json::to_value(file).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CopxError::Schema(e.to_string()))?;
    if file.schema != INSTANCE_SCHEMA {
        return Err(CopxError::Schema(format!("expected schema {INSTANCE_SCHEMA:?}, found {:?}", file.schema)));
    }
    if file.labels.len() != file.n {
        return Err(CopxError::Schema(format!("n = {} but {} labels given", file.n, file.labels.len())));
    }
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for (i, v) in file.vertices.iter().enumerate() {
        let row = v
            .iter()
            .map(|&x| match x {
                0 | 1 => Ok(x as u8),
                _ => Err(CopxError::InvalidInstance(format!("vertex {i} has non-binary entry {x}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        vertices.push(row);
    }
    Instance::new(file.labels, vertices, file.family)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&instance_to_json(inst))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn weights_to_json(c: &WeightVector) -> serde_json::Value {
    let file = WeightsFile { schema: WEIGHTS_SCHEMA.into(), c: c.0.entries().to_vec() };
    serde_json::to_value(file).expect("weights serialize")
}

pub fn weights_from_json(text: &str) -> Result<WeightVector> {
    let file: WeightsFile = serde_json::from_str(text).map_err(|e| CopxError::Schema(e.to_string()))?;
    if file.schema != WEIGHTS_SCHEMA {
        return Err(CopxError::Schema(format!("expected schema {WEIGHTS_SCHEMA:?}, found {:?}", file.schema)));
    }
    Ok(WeightVector(RatVec::new(file.c)))
}

pub fn save_weights(c: &WeightVector, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&weights_to_json(c))? + "\n")?;
    Ok(())
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<WeightVector> {
    weights_from_json(&fs::read_to_string(path)?)
}

/// The three-node spanning-tree instance used throughout the docs and tests.
pub fn triangle_trees() -> Instance {
    gen_family(&Family::SpanningTrees(Graph::triangle()), &GenLimits::default()).expect("triangle is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rat;

    fn limits() -> GenLimits {
        GenLimits::default()
    }

    /// Independent oracle: scan every subset of the ground set.
    fn brute_subsets(n: usize, feasible: impl Fn(&[usize]) -> bool) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if feasible(&set) {
                out.push((0..n).map(|i| (mask >> i & 1) as u8).collect());
            }
        }
        out.sort();
        out
    }

    fn degrees(g: &Graph, set: &[usize]) -> Vec<usize> {
        let mut d = vec![0; g.nodes];
        for &e in set {
            d[g.edges[e].0] += 1;
            d[g.edges[e].1] += 1;
        }
        d
    }

    fn connected(g: &Graph, set: &[usize]) -> bool {
        let mut uf = UnionFind::new(g.nodes);
        for &e in set {
            uf.union(g.edges[e].0, g.edges[e].1);
        }
        let r = uf.find(0);
        (0..g.nodes).all(|v| uf.find(v) == r)
    }

    #[test]
    fn triangle_trees_vertices() {
        let inst = triangle_trees();
        assert_eq!(inst.vertices(), &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(inst.n(), 3);
    }

    #[test]
    fn k_subsets_full() {
        let inst = gen_family(&Family::KSubsets { n: 3, k: 3 }, &limits()).unwrap();
        assert_eq!(inst.vertices(), &[vec![1, 1, 1]]);
        assert!(gen_family(&Family::KSubsets { n: 3, k: 4 }, &limits()).is_err());
    }

    #[test]
    fn family_counts_match_subset_enumeration() {
        let k4 = Graph::complete(4);
        let trees = gen_family(&Family::SpanningTrees(k4.clone()), &limits()).unwrap();
        let oracle = brute_subsets(6, |s| s.len() == 3 && connected(&k4, s));
        assert_eq!(oracle.len(), 16);
        assert_eq!(trees.vertices(), oracle.as_slice());

        let matchings = gen_family(&Family::PerfectMatchings(k4.clone()), &limits()).unwrap();
        let oracle = brute_subsets(6, |s| degrees(&k4, s).iter().all(|&d| d == 1));
        assert_eq!(oracle.len(), 3);
        assert_eq!(matchings.vertices(), oracle.as_slice());

        for (m, count) in [(4, 3), (5, 12)] {
            let km = Graph::complete(m);
            let tours = gen_family(&Family::TspTours { cities: m }, &limits()).unwrap();
            let ne = km.edges.len();
            let oracle = brute_subsets(ne, |s| degrees(&km, s).iter().all(|&d| d == 2) && connected(&km, s));
            assert_eq!(oracle.len(), count);
            assert_eq!(tours.n(), m * (m - 1) / 2);
            assert_eq!(tours.vertices(), oracle.as_slice());
        }
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(gen_family(&Family::TspTours { cities: 2 }, &limits()).is_err());
        assert!(gen_family(&Family::PerfectMatchings(Graph::triangle()), &limits()).is_err());
        // a graph with no spanning tree
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(gen_family(&Family::SpanningTrees(g), &limits()), Err(CopxError::InvalidParams(_))));
        let tiny = GenLimits { max_ground_set: 64, max_vertices: 2, max_candidates: 1000 };
        assert!(matches!(gen_family(&Family::TspTours { cities: 5 }, &tiny), Err(CopxError::SizeCap { .. })));
    }

    #[test]
    fn graph_parsing() {
        assert_eq!(Graph::parse("triangle").unwrap(), Graph::complete(3));
        assert_eq!(Graph::parse("k4").unwrap().edges.len(), 6);
        let g = Graph::parse("0-1, 1-2,2-0").unwrap();
        assert_eq!(g.nodes, 3);
        assert!(Graph::parse("0-1,1-0").is_err());
        assert!(Graph::parse("0-0").is_err());
        assert!(Graph::parse("0+1").is_err());
    }

    #[test]
    fn argmax_examples() {
        let inst = triangle_trees();
        assert_eq!(argmax_brute(&inst, &WeightVector::from_ints([0, 1, 1])).unwrap(), vec![0]);
        assert_eq!(argmax_brute(&inst, &WeightVector::from_ints([0, 0, 0])).unwrap(), vec![0, 1, 2]);
        assert_eq!(argmax_brute(&inst, &WeightVector::from_ints([1, 1, 1])).unwrap(), vec![0, 1, 2]);
        assert!(argmax_brute(&inst, &WeightVector::from_ints([1, 1])).is_err());
        let c =
            WeightVector::new(RatVec::new(vec![parse_rat("-1/2").unwrap(), parse_rat("1/3").unwrap(), Rat::zero()]));
        assert_eq!(argmax_brute(&inst, &c).unwrap(), vec![0]);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let tsp = gen_family(&Family::TspTours { cities: 4 }, &limits()).unwrap();
        let path = dir.path().join("tsp4.json");
        save_instance(&tsp, &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), tsp);

        let fig = r#"{"schema":"copx-instance-v1","n":3,"labels":["a","b","c"],"family":"explicit",
                      "vertices":[[0,1,1],[1,0,1],[1,1,0]]}"#;
        assert_eq!(instance_from_json(fig).unwrap().vertices(), triangle_trees().vertices());

        let dup = r#"{"schema":"copx-instance-v1","n":2,"labels":["a","b"],"family":"x","vertices":[[0,1],[0,1]]}"#;
        let err = instance_from_json(dup).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        let nonbin = r#"{"schema":"copx-instance-v1","n":2,"labels":["a","b"],"family":"x","vertices":[[0,2]]}"#;
        assert!(instance_from_json(nonbin).unwrap_err().to_string().contains("non-binary"));

        let wrong = r#"{"schema":"other","n":1,"labels":["a"],"family":"x","vertices":[[1]]}"#;
        assert!(matches!(instance_from_json(wrong), Err(CopxError::Schema(_))));

        let c = WeightVector::new(RatVec::new(vec![parse_rat("1/2").unwrap(), Rat::from_int(-3)]));
        let text = weights_to_json(&c).to_string();
        assert_eq!(text, r#"{"c":["1/2","-3"],"schema":"copx-weights-v1"}"#);
        assert_eq!(weights_from_json(&text).unwrap(), c);
    }

    #[test]
    fn argmax_invariant_under_positive_scaling() {
        use rand::{Rng, SeedableRng};
        let inst = gen_family(&Family::SpanningTrees(Graph::complete(4)), &limits()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let c = WeightVector::new(RatVec::new(
                (0..6).map(|_| Rat::new(rng.gen_range(-20..=20), rng.gen_range(1..=9)).unwrap()).collect(),
            ));
            let alpha = Rat::new(rng.gen_range(1..=50), rng.gen_range(1..=50)).unwrap();
            assert_eq!(argmax_brute(&inst, &c).unwrap(), argmax_brute(&inst, &c.scale(&alpha)).unwrap());
        }
    }
}
