//! Chain decomposition of the bipartite graph of two injections and the
//! bijection assembled from it.
//!
//! Finite graphs stand in for countable ones: a node flagged `truncated`
//! marks where an infinite chain was cut, and matches that would depend on
//! the missing part are reported as uncovered instead of guessed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::enumeration::Enumerator;
use crate::error::{Error, Result};
use crate::mappings::MappingEntry;
use crate::perm::permutations_fixing;
use crate::relmodel::text::content_lines;
use crate::relmodel::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// Starts at an X node with no incoming edge.
    SH1,
    /// Starts at a Y node with no incoming edge.
    SH2,
    /// Starts where a backward-infinite chain was cut.
    SH3,
    /// A finite cycle.
    SH4,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteFunctionalGraph {
    names: Vec<String>,
    sides: Vec<Side>,
    truncated: Vec<bool>,
    /// f for X nodes, g for Y nodes.
    next: Vec<Option<usize>>,
    index: HashMap<String, usize>,
}

impl BipartiteFunctionalGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str, side: Side, truncated: bool) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::usage(format!("node {name} declared twice")));
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.sides.push(side);
        self.truncated.push(truncated);
        self.next.push(None);
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    fn node(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown node {name}")))
    }

    fn add_edge(&mut self, from: &str, to: &str, from_side: Side) -> Result<()> {
        let (a, b) = (self.node(from)?, self.node(to)?);
        let label = if from_side == Side::X { "f" } else { "g" };
        if self.sides[a] != from_side || self.sides[b] == from_side {
            return Err(Error::usage(format!("{label} edge {from} -> {to} has the wrong sides")));
        }
        if self.next[a].is_some() {
            return Err(Error::usage(format!("{from} has two outgoing edges")));
        }
        self.next[a] = Some(b);
        Ok(())
    }

    pub fn add_f(&mut self, x: &str, y: &str) -> Result<()> {
        self.add_edge(x, y, Side::X)
    }

    pub fn add_g(&mut self, y: &str, x: &str) -> Result<()> {
        self.add_edge(y, x, Side::Y)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn side(&self, name: &str) -> Option<Side> {
        self.index.get(name).map(|&i| self.sides[i])
    }

    pub fn is_truncated(&self, name: &str) -> Option<bool> {
        self.index.get(name).map(|&i| self.truncated[i])
    }

    /// Target of the outgoing edge of `name`.
    pub fn successor(&self, name: &str) -> Option<&str> {
        let i = *self.index.get(name)?;
        self.next[i].map(|j| self.names[j].as_str())
    }

    fn predecessors(&self) -> Vec<Option<usize>> {
        let mut pred = vec![None; self.len()];
        for (i, n) in self.next.iter().enumerate() {
            if let Some(j) = *n {
                pred[j] = Some(i);
            }
        }
        pred
    }

    /// Out-degree exactly one except at truncated nodes, in-degree at most one.
    pub fn validate(&self) -> Result<()> {
        let mut indeg = vec![0usize; self.len()];
        for (i, n) in self.next.iter().enumerate() {
            match n {
                Some(j) => indeg[*j] += 1,
                None if !self.truncated[i] => {
                    return Err(Error::usage(format!("{} has no outgoing edge and is not truncated", self.names[i])))
                }
                None => {}
            }
        }
        if let Some(j) = indeg.iter().position(|&d| d > 1) {
            return Err(Error::usage(format!("{} has several incoming edges", self.names[j])));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let side = if self.sides[i] == Side::X { "X" } else { "Y" };
            let flag = if self.truncated[i] { " truncated" } else { "" };
            out.push_str(&format!("node {} {side}{flag}\n", self.names[i]));
        }
        for i in 0..self.len() {
            if let Some(j) = self.next[i] {
                let label = if self.sides[i] == Side::X { "f" } else { "g" };
                out.push_str(&format!("{label} {} {}\n", self.names[i], self.names[j]));
            }
        }
        out
    }
}

/// Reads `node <name> X|Y [truncated]`, `f <x> <y>` and `g <y> <x>` lines;
/// `--` starts a comment line.
pub fn parse_graph(text: &str) -> Result<BipartiteFunctionalGraph> {
    let mut g = BipartiteFunctionalGraph::new();
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line, msg };
        let wrap = |e: Error| err(e.to_string());
        match tokens.as_slice() {
            ["node", name, side, rest @ ..] => {
                let side = match *side {
                    "X" | "x" => Side::X,
                    "Y" | "y" => Side::Y,
                    other => return Err(err(format!("side must be X or Y, not {other}"))),
                };
                let truncated = match rest {
                    [] => false,
                    ["truncated"] => true,
                    _ => return Err(err(format!("unexpected tokens after node {name}"))),
                };
                g.add_node(name, side, truncated).map_err(wrap)?;
            }
            ["f", x, y] => g.add_f(x, y).map_err(wrap)?,
            ["g", y, x] => g.add_g(y, x).map_err(wrap)?,
            _ => return Err(err(format!("cannot read {content:?}"))),
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComponent {
    /// Node names in edge order; for a cycle, starting at its least index.
    pub nodes: Vec<String>,
    pub shape: Shape,
}

fn components(g: &BipartiteFunctionalGraph) -> Vec<(Vec<usize>, Shape)> {
    let pred = g.predecessors();
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    let walk = |start: usize, seen: &mut Vec<bool>| {
        let mut nodes = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(n) = g.next[cur] {
            if seen[n] {
                break;
            }
            seen[n] = true;
            nodes.push(n);
            cur = n;
        }
        nodes
    };
    for (start, p) in pred.iter().enumerate() {
        if p.is_none() {
            let shape = match (g.truncated[start], g.sides[start]) {
                (true, _) => Shape::SH3,
                (false, Side::X) => Shape::SH1,
                (false, Side::Y) => Shape::SH2,
            };
            out.push((walk(start, &mut seen), shape));
        }
    }
    for start in 0..g.len() {
        if !seen[start] {
            out.push((walk(start, &mut seen), Shape::SH4));
        }
    }
    out.sort_by_key(|(nodes, _)| *nodes.iter().min().expect("components are nonempty"));
    out
}

/// Splits the graph into its path and cycle components, ordered by their
/// earliest declared node.
pub fn classify_chains(g: &BipartiteFunctionalGraph) -> Result<Vec<ChainComponent>> {
    g.validate()?;
    Ok(components(g)
        .into_iter()
        .map(|(nodes, shape)| ChainComponent {
            nodes: nodes.into_iter().map(|i| g.names[i].clone()).collect(),
            shape,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchRule {
    /// Pair x with f(x).
    Forward,
    /// Pair x with the y whose g edge enters x.
    GInverse,
}

impl MatchRule {
    pub fn for_shape(shape: Shape) -> MatchRule {
        match shape {
            Shape::SH2 => MatchRule::GInverse,
            Shape::SH1 | Shape::SH3 | Shape::SH4 => MatchRule::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionResult {
    /// (x, y) pairs.
    pub pairs: BTreeSet<(String, String)>,
    pub rules: Vec<(ChainComponent, MatchRule)>,
    /// Nodes whose partner lies beyond a truncation.
    pub uncovered: BTreeSet<String>,
}

impl BijectionResult {
    pub fn is_total(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn image(&self, x: &str) -> Option<&str> {
        self.pairs.iter().find(|(a, _)| a == x).map(|(_, b)| b.as_str())
    }
}

/// f edges on SH1, SH3 and SH4 components, inverted g edges on SH2.
pub fn sb_bijection(g: &BipartiteFunctionalGraph) -> Result<BijectionResult> {
    g.validate()?;
    let pred = g.predecessors();
    let mut pairs = BTreeSet::new();
    let mut rules = Vec::new();
    let mut matched = vec![false; g.len()];
    for (nodes, shape) in components(g) {
        let rule = MatchRule::for_shape(shape);
        for &x in nodes.iter().filter(|&&i| g.sides[i] == Side::X) {
            let partner = match rule {
                MatchRule::Forward => g.next[x],
                MatchRule::GInverse => pred[x],
            };
            if let Some(y) = partner {
                pairs.insert((g.names[x].clone(), g.names[y].clone()));
                matched[x] = true;
                matched[y] = true;
            }
        }
        rules.push((
            ChainComponent {
                nodes: nodes.iter().map(|&i| g.names[i].clone()).collect(),
                shape,
            },
            rule,
        ));
    }
    let uncovered = (0..g.len()).filter(|&i| !matched[i]).map(|i| g.names[i].clone()).collect();
    Ok(BijectionResult { pairs, rules, uncovered })
}

/// A permutation of graph nodes by name; unlisted nodes are fixed.
pub type NodeMap = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivarianceVerdict {
    Pass { permutations: usize, pairs: usize },
    /// `h(π(x)) ≠ π(h(x))` for the permutation at `perm_index`.
    Counterexample { perm_index: usize, x: String },
}

impl EquivarianceVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, EquivarianceVerdict::Pass { .. })
    }
}

fn apply<'a>(p: &'a NodeMap, n: &'a str) -> &'a str {
    p.get(n).map(String::as_str).unwrap_or(n)
}

fn check_action(g: &BipartiteFunctionalGraph, k: usize, p: &NodeMap) -> Result<()> {
    let bad = |m: String| Err(Error::Precondition(format!("action element {k}: {m}")));
    let images: BTreeSet<&str> = g.names.iter().map(|n| apply(p, n)).collect();
    if images.len() != g.len() || p.keys().any(|n| !g.index.contains_key(n)) {
        return bad("not a permutation of the nodes".into());
    }
    for (i, n) in g.names.iter().enumerate() {
        let m = apply(p, n);
        let j = match g.index.get(m) {
            Some(&j) => j,
            None => return bad(format!("{n} maps to unknown node {m}")),
        };
        if g.sides[i] != g.sides[j] || g.truncated[i] != g.truncated[j] {
            return bad(format!("{n} and {m} differ in side or truncation"));
        }
        let moved_next = g.next[i].map(|t| apply(p, &g.names[t]));
        let next_of_moved = g.next[j].map(|t| g.names[t].as_str());
        if moved_next != next_of_moved {
            return bad(format!("does not commute with the edge leaving {n}"));
        }
    }
    Ok(())
}

/// Checks that every action element preserves sides, flags and both edge
/// maps (a precondition error otherwise), then that the assembled bijection
/// commutes with each of them.
pub fn check_equivariant_bijection(g: &BipartiteFunctionalGraph, action: &[NodeMap]) -> Result<EquivarianceVerdict> {
    g.validate()?;
    for (k, p) in action.iter().enumerate() {
        check_action(g, k, p)?;
    }
    let h = sb_bijection(g)?;
    for (k, p) in action.iter().enumerate() {
        for (x, y) in &h.pairs {
            let moved = (apply(p, x).to_string(), apply(p, y).to_string());
            if !h.pairs.contains(&moved) {
                return Ok(EquivarianceVerdict::Counterexample {
                    perm_index: k,
                    x: x.clone(),
                });
            }
        }
        if let Some(u) = h.uncovered.iter().find(|u| !h.uncovered.contains(apply(p, u))) {
            return Ok(EquivarianceVerdict::Counterexample {
                perm_index: k,
                x: u.clone(),
            });
        }
    }
    Ok(EquivarianceVerdict::Pass {
        permutations: action.len(),
        pairs: h.pairs.len(),
    })
}

/// The graph of two total maps `f: xs → ys` and `g: ys → xs`, with nodes
/// named `x:<name>` and `y:<name>`.
pub fn graph_from_injections<S: Ord>(
    xs: &[S],
    ys: &[S],
    f: impl Fn(&S) -> Result<S>,
    g: impl Fn(&S) -> Result<S>,
    name: impl Fn(&S) -> String,
) -> Result<BipartiteFunctionalGraph> {
    let mut out = BipartiteFunctionalGraph::new();
    for x in xs {
        out.add_node(&format!("x:{}", name(x)), Side::X, false)?;
    }
    for y in ys {
        out.add_node(&format!("y:{}", name(y)), Side::Y, false)?;
    }
    for x in xs {
        out.add_f(&format!("x:{}", name(x)), &format!("y:{}", name(&f(x)?)))?;
    }
    for y in ys {
        out.add_g(&format!("y:{}", name(y)), &format!("x:{}", name(&g(y)?)))?;
    }
    out.validate()?;
    Ok(out)
}

/// The node permutation induced on such a graph by acting on both sides.
pub fn induced_action<S>(xs: &[S], ys: &[S], act: impl Fn(&S) -> S, name: impl Fn(&S) -> String) -> NodeMap {
    xs.iter()
        .map(|x| (format!("x:{}", name(x)), format!("x:{}", name(&act(x)))))
        .chain(ys.iter().map(|y| (format!("y:{}", name(y)), format!("y:{}", name(&act(y))))))
        .collect()
}

/// The graph of two catalog mappings `f: A → B`, `g: B → A` over an n-value
/// domain, with the action of every constant-fixing domain permutation.
pub fn mapping_pair_graph(
    f: &MappingEntry,
    g: &MappingEntry,
    n: usize,
    en: &Enumerator,
) -> Result<(BipartiteFunctionalGraph, Vec<NodeMap>)> {
    if f.source != g.target || f.target != g.source {
        return Err(Error::usage(format!("{} and {} do not run in opposite directions", f.name, g.name)));
    }
    let values = f.domain_values(n);
    let xs = en.enumerate_over(&f.source, &values)?;
    let ys = en.enumerate_over(&f.target, &values)?;
    let name = |i: &Instance| i.to_string();
    let graph = graph_from_injections(&xs, &ys, |x| f.forward(x), |y| g.forward(y), name)?;
    let fixed = f.constants.union(&g.constants).copied().collect();
    let action = permutations_fixing(&values, &fixed)
        .iter()
        .map(|p| induced_action(&xs, &ys, |i| i.permute_extended(p), name))
        .collect();
    Ok((graph, action))
}
