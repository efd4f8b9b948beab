//! Concrete Halin graphs, rotation systems and face tracing.
//!
//! This engine shares no code with the matrix or recurrence engines: it
//! builds the graph, enumerates every T-rotation system and counts faces.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exec::{partitioned_histogram, Execution};
use crate::params::ParamTuple;
use crate::polynomial::GenusPolynomial;

pub const DEFAULT_BUDGET_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexRole {
    /// `v_0` or `v_{l+1}`, the two ends of the spine path.
    EndLeaf,
    /// `v_1..v_l`.
    Spine,
    UpLeaf,
    DownLeaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeRole {
    Spine,
    Pendant,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TreeStrategy {
    /// Breadth-first search from `v_0`.
    #[default]
    BfsFromStart,
    /// Depth-first search from `v_{l+1}`.
    DfsFromEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub role: EdgeRole,
}

/// A cubic caterpillar-Halin graph with its plane reference rotation and a
/// spanning tree.
///
/// Vertex ids: spine path `v_0..v_{l+1}` are `0..=l+1`, the pendant leaf
/// `u_i` of `v_i` is `l + 1 + i`.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    spine_len: usize,
    roles: Vec<VertexRole>,
    edges: Vec<Edge>,
    /// Counter-clockwise edge order at each vertex in the plane drawing.
    rotation: Vec<[usize; 3]>,
    in_tree: Vec<bool>,
    cotree: Vec<usize>,
}

impl EmbeddedGraph {
    pub fn build(params: &ParamTuple) -> Result<Self> {
        Self::build_with_tree(params, TreeStrategy::default())
    }

    pub fn build_with_tree(params: &ParamTuple, strategy: TreeStrategy) -> Result<Self> {
        params.require_strict()?;
        let mut up = Vec::new();
        for (run, &len) in params.run_lengths().iter().enumerate() {
            up.extend(std::iter::repeat_n(run % 2 == 0, len as usize));
        }
        let l = up.len();
        let nv = 2 * l + 2;
        let leaf = |i: usize| l + 1 + i;

        let mut roles = vec![VertexRole::Spine; nv];
        roles[0] = VertexRole::EndLeaf;
        roles[l + 1] = VertexRole::EndLeaf;
        for i in 1..=l {
            roles[leaf(i)] = if up[i - 1] { VertexRole::UpLeaf } else { VertexRole::DownLeaf };
        }

        let mut edges = Vec::with_capacity(3 * nv / 2);
        for i in 0..=l {
            edges.push(Edge { u: i, v: i + 1, role: EdgeRole::Spine });
        }
        for i in 1..=l {
            edges.push(Edge { u: i, v: leaf(i), role: EdgeRole::Pendant });
        }
        let mut cycle = vec![0];
        cycle.extend((1..=l).filter(|&i| up[i - 1]).map(leaf));
        cycle.push(l + 1);
        cycle.extend((1..=l).rev().filter(|&i| !up[i - 1]).map(leaf));
        let n = cycle.len();
        let mut next = vec![0; nv];
        let mut prev = vec![0; nv];
        for j in 0..n {
            let (a, b) = (cycle[j], cycle[(j + 1) % n]);
            edges.push(Edge { u: a, v: b, role: EdgeRole::Cycle });
            next[a] = b;
            prev[b] = a;
        }

        let neighbours: Vec<[usize; 3]> = (0..nv)
            .map(|v| {
                if v == 0 {
                    [1, next[0], prev[0]]
                } else if v == l + 1 {
                    [prev[v], l, next[v]]
                } else if v <= l {
                    if up[v - 1] {
                        [v + 1, leaf(v), v - 1]
                    } else {
                        [v + 1, v - 1, leaf(v)]
                    }
                } else {
                    let i = v - l - 1;
                    if up[i - 1] {
                        [next[v], prev[v], i]
                    } else {
                        [prev[v], i, next[v]]
                    }
                }
            })
            .collect();
        let edge_id = |a: usize, b: usize| {
            edges
                .iter()
                .position(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
                .expect("rotation neighbour is adjacent")
        };
        let rotation = neighbours
            .iter()
            .enumerate()
            .map(|(v, ws)| ws.map(|w| edge_id(v, w)))
            .collect();

        let mut g = Self { spine_len: l, roles, edges, rotation, in_tree: Vec::new(), cotree: Vec::new() };
        g.choose_tree(strategy);
        g.check_structure()?;
        Ok(g)
    }

    fn choose_tree(&mut self, strategy: TreeStrategy) {
        let nv = self.vertex_count();
        let mut adj = vec![Vec::new(); nv];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; nv];
        match strategy {
            TreeStrategy::BfsFromStart => {
                seen[0] = true;
                let mut queue = VecDeque::from([0]);
                while let Some(v) = queue.pop_front() {
                    for &(w, id) in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            in_tree[id] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            TreeStrategy::DfsFromEnd => {
                let mut stack = vec![(self.spine_len + 1, None)];
                while let Some((v, via)) = stack.pop() {
                    if seen[v] {
                        continue;
                    }
                    seen[v] = true;
                    if let Some(id) = via {
                        in_tree[id] = true;
                    }
                    for &(w, id) in &adj[v] {
                        if !seen[w] {
                            stack.push((w, Some(id)));
                        }
                    }
                }
            }
        }
        self.cotree = (0..self.edges.len()).filter(|&id| !in_tree[id]).collect();
        self.in_tree = in_tree;
    }

    fn check_structure(&self) -> Result<()> {
        let mut degree = vec![0; self.vertex_count()];
        for e in &self.edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::InvariantViolation(format!("vertex {v} has degree {}", degree[v])));
        }
        if self.cotree.len() != self.betti() {
            return Err(Error::InvariantViolation("spanning tree does not span".into()));
        }
        Ok(())
    }

    pub fn spine_len(&self) -> usize {
        self.spine_len
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E| - |V| + 1`, the number of co-tree edges.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.roles.len()
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rotation(&self) -> &[[usize; 3]] {
        &self.rotation
    }

    pub fn is_tree_edge(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn cotree(&self) -> &[usize] {
        &self.cotree
    }

    /// Rotation bits plus co-tree twist bits.
    pub fn system_bits(&self) -> u32 {
        (self.vertex_count() + self.betti()) as u32
    }

    /// Debug dump: `{"vertices":[{"id","role"}],"edges":[{"u","v","role","tree"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = self
            .roles
            .iter()
            .enumerate()
            .map(|(id, role)| serde_json::json!({ "id": id, "role": role }))
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| serde_json::json!({ "u": e.u, "v": e.v, "role": e.role, "tree": self.in_tree[id] }))
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges })
    }
}

/// A T-rotation system: per-vertex reversal of the reference rotation and
/// per-edge twist, with twists on tree edges held at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    pub reversed: Vec<bool>,
    pub twist: Vec<bool>,
}

impl RotationSystem {
    pub fn reference(g: &EmbeddedGraph) -> Self {
        Self { reversed: vec![false; g.vertex_count()], twist: vec![false; g.edge_count()] }
    }

    /// System number `index`: bit `v` reverses vertex `v`, bit `|V| + j` twists
    /// the `j`-th co-tree edge.
    pub fn from_index(g: &EmbeddedGraph, index: u64) -> Result<Self> {
        let bits = g.system_bits();
        if bits < 64 && index >> bits != 0 {
            return invalid(format!("system index {index} exceeds {bits} bits"));
        }
        let nv = g.vertex_count();
        let mut rs = Self::reference(g);
        for v in 0..nv {
            rs.reversed[v] = index >> v & 1 == 1;
        }
        for (j, &e) in g.cotree.iter().enumerate() {
            rs.twist[e] = index >> (nv + j) & 1 == 1;
        }
        Ok(rs)
    }

    fn validate(&self, g: &EmbeddedGraph) -> Result<()> {
        if self.reversed.len() != g.vertex_count() || self.twist.len() != g.edge_count() {
            return invalid("rotation system does not match the graph's size");
        }
        if let Some(e) = (0..g.edge_count()).find(|&e| g.in_tree[e] && self.twist[e]) {
            return invalid(format!("edge {e} is a spanning-tree edge and cannot be twisted"));
        }
        Ok(())
    }
}

/// Precomputed dart successors for repeated face tracing on one graph.
///
/// A dart is `2e + d` (`d = 0` runs `u -> v`); a state is `2 * dart + side`.
#[derive(Clone, Debug)]
pub struct FaceTracer {
    head: Vec<u8>,
    edge_of: Vec<u8>,
    /// Next dart leaving `head(dart)`, `[0]` going forward in the rotation,
    /// `[1]` going backward.
    succ: Vec<[u8; 2]>,
    cotree_mask: Vec<u64>,
    vertex_count: usize,
    edge_count: usize,
    seen: Vec<u32>,
    epoch: u32,
}

impl FaceTracer {
    pub fn new(g: &EmbeddedGraph) -> Result<Self> {
        let ne = g.edge_count();
        if 4 * ne > 256 || g.vertex_count() > 63 {
            return invalid(format!("graph with {ne} edges is too large for face enumeration"));
        }
        let mut head = Vec::with_capacity(2 * ne);
        let mut edge_of = Vec::with_capacity(2 * ne);
        let mut succ = Vec::with_capacity(2 * ne);
        for (e, edge) in g.edges.iter().enumerate() {
            for d in 0..2 {
                let v = if d == 0 { edge.v } else { edge.u };
                let rot = &g.rotation[v];
                let p = rot.iter().position(|&x| x == e).expect("edge in rotation at its end");
                let leave = |w: usize| {
                    let we = &g.edges[w];
                    (2 * w + usize::from(we.u != v)) as u8
                };
                head.push(v as u8);
                edge_of.push(e as u8);
                succ.push([leave(rot[(p + 1) % 3]), leave(rot[(p + 2) % 3])]);
            }
        }
        let cotree_mask = g.cotree.iter().map(|&e| 1u64 << e).collect();
        Ok(Self {
            head,
            edge_of,
            succ,
            cotree_mask,
            vertex_count: g.vertex_count(),
            edge_count: ne,
            seen: vec![0; 4 * ne],
            epoch: 0,
        })
    }

    /// Faces of the embedding with reversed-vertex mask `flips` and twisted-edge
    /// mask `twists`.
    pub fn faces(&mut self, flips: u64, twists: u64) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let mut orbits = 0;
        for start in 0..self.seen.len() {
            if self.seen[start] == epoch {
                continue;
            }
            orbits += 1;
            let mut state = start;
            while self.seen[state] != epoch {
                self.seen[state] = epoch;
                let dart = state >> 1;
                let side = (state & 1) as u64 ^ (twists >> self.edge_of[dart] & 1);
                let step = side ^ (flips >> self.head[dart] & 1);
                state = (self.succ[dart][step as usize] as usize) << 1 | side as usize;
            }
        }
        orbits / 2
    }

    /// Faces of system number `index` in the layout of [`RotationSystem::from_index`].
    pub fn faces_of_index(&mut self, index: u64) -> u32 {
        let flips = index & ((1u64 << self.vertex_count) - 1);
        let mut rest = index >> self.vertex_count;
        let mut twists = 0;
        let mut j = 0;
        while rest != 0 {
            if rest & 1 == 1 {
                twists |= self.cotree_mask[j];
            }
            rest >>= 1;
            j += 1;
        }
        self.faces(flips, twists)
    }

    fn genus_of_faces(&self, faces: u32) -> i64 {
        2 - self.vertex_count as i64 + self.edge_count as i64 - i64::from(faces)
    }
}

fn masks(rs: &RotationSystem) -> (u64, u64) {
    let pack = |bits: &[bool]| bits.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
    (pack(&rs.reversed), pack(&rs.twist))
}

/// Number of faces of the embedding `(g, rs)`.
pub fn trace_faces(g: &EmbeddedGraph, rs: &RotationSystem) -> Result<u32> {
    rs.validate(g)?;
    let (flips, twists) = masks(rs);
    Ok(FaceTracer::new(g)?.faces(flips, twists))
}

/// `2 - |V| + |E| - F`.
pub fn euler_genus_of(g: &EmbeddedGraph, rs: &RotationSystem) -> Result<u32> {
    let faces = trace_faces(g, rs)?;
    let genus = 2 - g.vertex_count() as i64 + g.edge_count() as i64 - i64::from(faces);
    if genus < 0 || genus > g.betti() as i64 {
        return Err(Error::InvariantViolation(format!(
            "Euler genus {genus} outside [0, {}] ({faces} faces)",
            g.betti()
        )));
    }
    Ok(genus as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub budget_bits: u32,
    pub execution: Execution,
    pub tree: TreeStrategy,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self { budget_bits: DEFAULT_BUDGET_BITS, execution: Execution::default(), tree: TreeStrategy::default() }
    }
}

/// Histogram of Euler genus over all `2^{|V| + beta}` T-rotation systems.
pub fn embedding_distribution(params: &ParamTuple, config: &EmbeddingConfig) -> Result<GenusPolynomial> {
    let p = if params.is_strict() { params.clone() } else { params.normalize_tail() };
    let g = EmbeddedGraph::build_with_tree(&p, config.tree)?;
    let bits = g.system_bits();
    if bits > config.budget_bits || bits > 63 {
        return Err(Error::ResourceLimit { bits, budget: config.budget_bits.min(63) });
    }
    let template = FaceTracer::new(&g)?;
    let beta = g.betti();
    // the extra bin collects out-of-range genera
    let hist = partitioned_histogram(config.execution, bits, beta + 2, |high, low_bits, h| {
        let mut tracer = template.clone();
        let base = high << low_bits;
        for low in 0..(1u64 << low_bits) {
            let faces = tracer.faces_of_index(base | low);
            let genus = tracer.genus_of_faces(faces);
            let bin = if (0..=beta as i64).contains(&genus) { genus as usize } else { beta + 1 };
            h[bin] += 1;
        }
    });
    if hist[beta + 1] != 0 {
        return Err(Error::InvariantViolation(format!(
            "{} rotation systems traced to an Euler genus outside [0, {beta}]",
            hist[beta + 1]
        )));
    }
    Ok(GenusPolynomial::from_histogram(&hist[..=beta]))
}
