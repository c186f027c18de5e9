//! Graphs of finite groups and the construction plan for their fundamental
//! group: amalgamations along a breadth-first spanning tree, then one HNN
//! extension per remaining edge. Each step tracks the generating set and the
//! locality constant `k`, which grows as `k ↦ 3k − 2`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::finite::{EmbeddingSpec, FiniteGroup, GroupSpec, SubgroupEmbedding};
use crate::words::InvolutiveAlphabet;

/// Locality constant assigned to the base (finite) group.
pub const BASE_K: usize = 2;

/// `k′ = 3k − 2`.
pub fn next_k(k: usize) -> usize {
    3 * k - 2
}

/// Closed form of iterating [`next_k`] `steps` times from [`BASE_K`].
pub fn k_after_steps(steps: u32) -> usize {
    3usize.pow(steps) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub ends: [usize; 2],
    pub group: GroupSpec,
    pub maps: [EmbeddingSpec; 2],
}

/// The structured input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<GroupSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GraphError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub ends: [usize; 2],
    pub group: Arc<FiniteGroup>,
    /// `maps[i]` embeds the edge group into vertex `ends[i]`.
    pub maps: [SubgroupEmbedding; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    pub vertices: Vec<Arc<FiniteGroup>>,
    pub edges: Vec<Edge>,
}

impl GraphOfGroups {
    /// Load groups and resolve embeddings. Group-table errors and malformed
    /// references fail here; connectivity and homomorphism checks are left
    /// to [`GraphOfGroups::validate`].
    pub fn load(spec: &GraphSpec) -> Result<Self, GraphError> {
        let vertices = spec
            .vertices
            .iter()
            .enumerate()
            .map(|(i, g)| {
                FiniteGroup::load(g).map(Arc::new).map_err(|source| GraphError::Group {
                    context: format!("vertex {i}"),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (e, edge) in spec.edges.iter().enumerate() {
            let ctx = format!("edge {e}");
            let group = Arc::new(FiniteGroup::load(&edge.group).map_err(|source| {
                GraphError::Group {
                    context: ctx.clone(),
                    source,
                }
            })?);
            let mut maps = Vec::with_capacity(2);
            for side in 0..2 {
                let v = edge.ends[side];
                let target = vertices.get(v).ok_or_else(|| GraphError::Spec {
                    context: ctx.clone(),
                    message: format!("endpoint {v} is not a vertex"),
                })?;
                let m = &edge.maps[side];
                check_ref(&m.from, None, &ctx)?;
                check_ref(&m.into, Some(v), &ctx)?;
                let emb = SubgroupEmbedding::from_names(group.clone(), target.clone(), &m.map)
                    .map_err(|message| GraphError::Spec {
                        context: format!("{ctx}, map {side}"),
                        message,
                    })?;
                maps.push(emb);
            }
            let [m0, m1]: [SubgroupEmbedding; 2] = maps.try_into().expect("two maps");
            edges.push(Edge {
                ends: edge.ends,
                group,
                maps: [m0, m1],
            });
        }
        Ok(GraphOfGroups { vertices, edges })
    }

    pub fn from_path(path: &Path) -> Result<Self, GraphError> {
        Self::load(&GraphSpec::from_path(path)?)
    }

    /// Connectivity and embedding diagnostics; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut diagnostics = Vec::new();
        if self.vertices.is_empty() {
            diagnostics.push("graph has no vertices".to_string());
            return diagnostics;
        }
        for (e, edge) in self.edges.iter().enumerate() {
            for (side, emb) in edge.maps.iter().enumerate() {
                if let Err(v) = emb.check() {
                    diagnostics.push(format!(
                        "edge {e}: embedding into vertex {}: {v}",
                        edge.ends[side]
                    ));
                }
            }
        }
        let reached = self.bfs_tree().0;
        let missing: Vec<String> = (0..self.vertices.len())
            .filter(|v| !reached.contains(v))
            .map(|v| v.to_string())
            .collect();
        if !missing.is_empty() {
            diagnostics.push(format!(
                "graph is disconnected: vertices {} unreachable from vertex 0",
                missing.join(", ")
            ));
        }
        diagnostics
    }

    /// Vertices in discovery order and, for each discovered vertex after the
    /// first, the tree edge that reached it.
    fn bfs_tree(&self) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut order = vec![0];
        let mut tree = Vec::new();
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for (e, edge) in self.edges.iter().enumerate() {
                if edge.is_loop() {
                    continue;
                }
                let other = match edge.ends {
                    [a, b] if a == u => b,
                    [a, b] if b == u => a,
                    _ => continue,
                };
                if !seen[other] {
                    seen[other] = true;
                    order.push(other);
                    tree.push((other, e));
                    queue.push_back(other);
                }
            }
        }
        (order, tree)
    }

    pub fn plan(&self) -> Result<ConstructionPlan, GraphError> {
        let diagnostics = self.validate();
        if !diagnostics.is_empty() {
            return Err(GraphError::Invalid(diagnostics));
        }
        PlanBuilder::new(self).build()
    }
}

fn check_ref(r: &Option<serde_json::Value>, vertex: Option<usize>, ctx: &str) -> Result<(), GraphError> {
    let Some(value) = r else { return Ok(()) };
    let ok = match (vertex, value) {
        (None, serde_json::Value::String(s)) => s == "edge",
        (Some(v), serde_json::Value::Number(n)) => n.as_u64() == Some(v as u64),
        (Some(v), serde_json::Value::String(s)) => s == &format!("vertex {v}") || s == &v.to_string(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(GraphError::Spec {
            context: ctx.to_string(),
            message: format!("group reference {value} does not match the edge's position"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl PartialOrd for Sign {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sign {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let rank = |s: &Sign| matches!(s, Sign::Neg) as u8;
        rank(self).cmp(&rank(other))
    }
}

/// What a letter of the generating set stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterDef {
    /// A non-identity element of a vertex group.
    Vertex { vertex: usize, element: usize },
    /// `t^sign · x`, with `x` the image of edge-group element `edge_element`
    /// under the embedding on the `sign` side (`A` for `+`, `B` for `−`).
    Stable {
        step: usize,
        sign: Sign,
        edge_element: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Base { vertex: usize },
    Amalgamate { vertex: usize, edge: usize, from: usize },
    HnnExtend { edge: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub kind: StepKind,
    /// `|X|` before and after this step (generating sets only grow, so the
    /// set after step `i` is a prefix of the final alphabet).
    pub letters_before: usize,
    pub letters_after: usize,
    pub k_before: usize,
    pub k_after: usize,
}

/// The sequence of groups `1 = H₁, …, H_r = G` with the generating set and
/// locality constant after each step.
#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    pub steps: Vec<PlanStep>,
    pub alphabet: InvolutiveAlphabet,
    pub letters: Vec<LetterDef>,
    /// `vertex_letters[v][g]`: the letter naming element `g` of vertex `v`
    /// (`None` for the identity).
    pub vertex_letters: Vec<Vec<Option<usize>>>,
}

impl ConstructionPlan {
    pub fn final_k(&self) -> usize {
        self.steps.last().map_or(BASE_K, |s| s.k_after)
    }

    /// `(|X′|, k′)` of the final group.
    pub fn star_size(&self) -> (usize, usize) {
        (self.alphabet.len(), self.final_k())
    }

    /// Letters available after step `i`.
    pub fn alphabet_after(&self, i: usize) -> &[String] {
        &self.alphabet.names()[..self.steps[i].letters_after]
    }

    pub fn post_base_steps(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    /// Check the structural invariants; returns a description of the first
    /// violation.
    pub fn check_invariants(&self, graph: &GraphOfGroups) -> Result<(), String> {
        let mut seen_hnn = false;
        let mut vertices = HashSet::new();
        let mut hnn_edges = HashSet::new();
        let mut k = BASE_K;
        for (i, s) in self.steps.iter().enumerate() {
            match (&s.kind, i) {
                (StepKind::Base { vertex }, 0) => {
                    vertices.insert(*vertex);
                    if s.k_after != BASE_K {
                        return Err("base step must have k = 2".into());
                    }
                }
                (StepKind::Base { .. }, _) => return Err("base step after the start".into()),
                (_, 0) => return Err("plan must start with a base step".into()),
                (StepKind::Amalgamate { vertex, .. }, _) => {
                    if seen_hnn {
                        return Err("amalgamation after an HNN step".into());
                    }
                    if !vertices.insert(*vertex) {
                        return Err(format!("vertex {vertex} amalgamated twice"));
                    }
                }
                (StepKind::HnnExtend { edge, .. }, _) => {
                    seen_hnn = true;
                    if !hnn_edges.insert(*edge) {
                        return Err(format!("edge {edge} extended twice"));
                    }
                }
            }
            if i > 0 {
                if s.k_before != k || s.k_after != next_k(s.k_before) {
                    return Err(format!("step {i}: k′ ≠ 3k − 2"));
                }
                if s.letters_after <= s.letters_before && !matches!(s.kind, StepKind::Amalgamate { .. }) {
                    return Err(format!("step {i}: generating set did not grow"));
                }
            }
            k = s.k_after;
        }
        if vertices.len() != graph.vertices.len() {
            return Err("not every vertex is amalgamated".into());
        }
        if hnn_edges.len() + graph.vertices.len() - 1 != graph.edges.len() {
            return Err("not every non-tree edge is extended".into());
        }
        if self.final_k() != k_after_steps(self.post_base_steps() as u32) {
            return Err("final k does not match 3^s + 1".into());
        }
        Ok(())
    }
}

impl fmt::Display for ConstructionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let what = match &s.kind {
                StepKind::Base { vertex } => format!("base vertex {vertex}"),
                StepKind::Amalgamate { vertex, edge, from } => {
                    format!("amalgamate vertex {vertex} to vertex {from} over edge {edge}")
                }
                StepKind::HnnExtend { edge, index } => {
                    format!("HNN extend over edge {edge} with stable letter t{index}")
                }
            };
            let new = &self.alphabet.names()[s.letters_before..s.letters_after];
            writeln!(
                f,
                "step {i}: {what}; k {} -> {}; |X| {} -> {}; new letters: {{{}}}",
                s.k_before,
                s.k_after,
                s.letters_before,
                s.letters_after,
                new.join(", ")
            )?;
        }
        Ok(())
    }
}

struct PlanBuilder<'g> {
    graph: &'g GraphOfGroups,
    names: Vec<String>,
    inverse_names: Vec<String>,
    letters: Vec<LetterDef>,
    vertex_letters: Vec<Vec<Option<usize>>>,
    taken: HashSet<String>,
}

impl<'g> PlanBuilder<'g> {
    fn new(graph: &'g GraphOfGroups) -> Self {
        PlanBuilder {
            graph,
            names: Vec::new(),
            inverse_names: Vec::new(),
            letters: Vec::new(),
            vertex_letters: graph.vertices.iter().map(|g| vec![None; g.order()]).collect(),
            taken: HashSet::new(),
        }
    }

    fn add(&mut self, name: String, inverse: String, def: LetterDef) -> Result<usize, GraphError> {
        if !self.taken.insert(name.clone()) {
            return Err(GraphError::LetterClash(name));
        }
        self.names.push(name);
        self.inverse_names.push(inverse);
        self.letters.push(def);
        Ok(self.names.len() - 1)
    }

    /// New letters for the elements of `vertex` outside `identified`, whose
    /// letters are already known.
    fn add_vertex(&mut self, vertex: usize, identified: &[(usize, Option<usize>)]) -> Result<(), GraphError> {
        let group = self.graph.vertices[vertex].clone();
        for &(element, letter) in identified {
            self.vertex_letters[vertex][element] = letter;
        }
        for g in 1..group.order() {
            if identified.iter().any(|&(e, _)| e == g) {
                continue;
            }
            let name = group.name(g).to_string();
            let inverse = group.name(group.inverse(g)).to_string();
            let id = self.add(name, inverse, LetterDef::Vertex { vertex, element: g })?;
            self.vertex_letters[vertex][g] = Some(id);
        }
        Ok(())
    }

    fn letter_name(&self, vertex: usize, element: usize) -> Option<&str> {
        self.vertex_letters[vertex][element].map(|l| self.names[l].as_str())
    }

    fn build(mut self) -> Result<ConstructionPlan, GraphError> {
        let graph = self.graph;
        let (_, tree) = graph.bfs_tree();
        let tree_edges: HashSet<usize> = tree.iter().map(|&(_, e)| e).collect();
        let mut steps = Vec::new();

        self.add_vertex(0, &[])?;
        steps.push(PlanStep {
            kind: StepKind::Base { vertex: 0 },
            letters_before: 0,
            letters_after: self.names.len(),
            k_before: BASE_K,
            k_after: BASE_K,
        });
        let mut k = BASE_K;

        for &(vertex, e) in &tree {
            let edge = &graph.edges[e];
            let side = if edge.ends[0] == vertex { 0 } else { 1 };
            let from = edge.ends[1 - side];
            let identified: Vec<(usize, Option<usize>)> = (0..edge.group.order())
                .map(|x| {
                    (
                        edge.maps[side].apply(x),
                        self.vertex_letters[from][edge.maps[1 - side].apply(x)],
                    )
                })
                .collect();
            let before = self.names.len();
            self.add_vertex(vertex, &identified)?;
            steps.push(PlanStep {
                kind: StepKind::Amalgamate { vertex, edge: e, from },
                letters_before: before,
                letters_after: self.names.len(),
                k_before: k,
                k_after: next_k(k),
            });
            k = next_k(k);
        }

        let mut index = 0;
        for (e, edge) in graph.edges.iter().enumerate() {
            if tree_edges.contains(&e) {
                continue;
            }
            index += 1;
            let step = steps.len();
            let before = self.names.len();
            let eg = &edge.group;
            let [alpha, beta] = &edge.maps;
            let [u, v] = edge.ends;
            let t = format!("t{index}");
            let t_inv = format!("t{index}^-1");
            let compose = |base: &str, suffix: Option<&str>| match suffix {
                Some(s) => format!("{base}.{s}"),
                None => base.to_string(),
            };
            // t·α(x) has inverse t⁻¹·β(x⁻¹).
            let mut pending = Vec::new();
            for x in 0..eg.order() {
                let name = compose(&t, self.letter_name(u, alpha.apply(x)));
                let inverse = compose(&t_inv, self.letter_name(v, beta.apply(eg.inverse(x))));
                pending.push((name, inverse, Sign::Pos, x));
            }
            for x in 0..eg.order() {
                let name = compose(&t_inv, self.letter_name(v, beta.apply(x)));
                let inverse = compose(&t, self.letter_name(u, alpha.apply(eg.inverse(x))));
                pending.push((name, inverse, Sign::Neg, x));
            }
            for (name, inverse, sign, x) in pending {
                self.add(
                    name,
                    inverse,
                    LetterDef::Stable {
                        step,
                        sign,
                        edge_element: x,
                    },
                )?;
            }
            steps.push(PlanStep {
                kind: StepKind::HnnExtend { edge: e, index },
                letters_before: before,
                letters_after: self.names.len(),
                k_before: k,
                k_after: next_k(k),
            });
            k = next_k(k);
        }

        let pairs: Vec<(&str, &str)> = self
            .names
            .iter()
            .zip(&self.inverse_names)
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let alphabet = InvolutiveAlphabet::new(&pairs)?;
        Ok(ConstructionPlan {
            steps,
            alphabet,
            letters: self.letters,
            vertex_letters: self.vertex_letters,
        })
    }
}
