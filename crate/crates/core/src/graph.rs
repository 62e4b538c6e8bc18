//! Variable co-occurrence graph of a formula and the structural queries the
//! branching rules read: degrees, connected components, boundary-neighbor
//! counts, and path/cycle classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::formula::{Clause, Formula, Var};

/// Undirected graph whose vertices are the variables occurring in a formula,
/// with an edge between two variables whenever they share a clause. Polarity
/// and clause multiplicity are abstracted away: two variables sharing several
/// clauses still form one edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintGraph {
    adj: BTreeMap<Var, BTreeSet<Var>>,
}

impl ConstraintGraph {
    /// Builds the graph of `f`. Unit and empty clauses contribute no edges,
    /// but unit-clause variables still appear as (isolated) vertices.
    pub fn build(f: &Formula) -> ConstraintGraph {
        let mut adj: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
        for clause in f.clauses() {
            let lits = clause.literals();
            for lit in lits {
                adj.entry(lit.var()).or_default();
            }
            for (i, a) in lits.iter().enumerate() {
                for b in &lits[i + 1..] {
                    adj.get_mut(&a.var()).unwrap().insert(b.var());
                    adj.get_mut(&b.var()).unwrap().insert(a.var());
                }
            }
        }
        ConstraintGraph { adj }
    }

    /// Vertices in ascending variable order.
    pub fn vertices(&self) -> impl Iterator<Item = Var> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn neighbors(&self, v: Var) -> Option<&BTreeSet<Var>> {
        self.adj.get(&v)
    }

    /// Degree of `v`, or `None` for an unknown vertex.
    pub fn degree(&self, v: Var) -> Option<usize> {
        self.adj.get(&v).map(BTreeSet::len)
    }

    /// Maximum vertex degree; zero for the empty graph.
    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Neighbors of `v` that have at least one neighbor outside the closed
    /// neighborhood of `v`; these are the neighbors through which a branch on
    /// `v` stays connected to the rest of the graph.
    pub fn boundary_neighbors(&self, v: Var) -> Option<Vec<Var>> {
        let nbrs = self.adj.get(&v)?;
        let out = nbrs
            .iter()
            .copied()
            .filter(|&u| {
                self.adj[&u]
                    .iter()
                    .any(|&w| w != v && !nbrs.contains(&w))
            })
            .collect();
        Some(out)
    }

    /// The count of boundary neighbors of `v`.
    pub fn boundary_neighbor_count(&self, v: Var) -> Option<usize> {
        self.boundary_neighbors(v).map(|b| b.len())
    }

    /// The single boundary neighbor of `v`, when there is exactly one.
    pub fn sole_boundary_neighbor(&self, v: Var) -> Option<Var> {
        match self.boundary_neighbors(v)?.as_slice() {
            [u] => Some(*u),
            _ => None,
        }
    }

    /// Classifies a connected graph by its shape. Requires connectivity;
    /// a single vertex is a path of length one.
    pub fn classify(&self) -> ComponentShape {
        if self.adj.is_empty() {
            return ComponentShape::Other;
        }
        if self.max_degree() > 2 {
            return ComponentShape::Other;
        }
        let endpoints: Vec<Var> = self
            .adj
            .iter()
            .filter(|(_, nbrs)| nbrs.len() <= 1)
            .map(|(&v, _)| v)
            .collect();
        if endpoints.is_empty() {
            // every degree is 2: a cycle; start at the lowest id and walk
            // toward its smaller neighbor
            let start = *self.adj.keys().next().unwrap();
            let next = *self.adj[&start].iter().next().unwrap();
            ComponentShape::Cycle(self.walk(start, next))
        } else {
            let start = endpoints[0];
            let order = match self.adj[&start].iter().next() {
                Some(&next) => self.walk(start, next),
                None => vec![start],
            };
            ComponentShape::Path(order)
        }
    }

    fn walk(&self, start: Var, second: Var) -> Vec<Var> {
        let mut order = vec![start, second];
        let (mut prev, mut cur) = (start, second);
        loop {
            let next = self.adj[&cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) if w != start => {
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        order
    }

    /// Graphviz dump with vertices labeled by variable id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph constraints {\n");
        for v in self.adj.keys() {
            writeln!(out, "  {};", v).unwrap();
        }
        for (v, nbrs) in &self.adj {
            for u in nbrs.iter().filter(|&&u| u > *v) {
                writeln!(out, "  {} -- {};", v, u).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Shape of a connected component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ComponentShape {
    /// A path given endpoint-to-endpoint, starting from the lower-id endpoint.
    Path(Vec<Var>),
    /// A cycle given in cyclic order starting from the lowest-id vertex.
    Cycle(Vec<Var>),
    /// Some vertex has degree above two.
    Other,
}

/// The vertex whose removal splits a path most evenly: position `ceil(n/2)`
/// (1-based) of the endpoint-to-endpoint order, leaving sides of
/// `ceil(n/2) - 1` and `floor(n/2)` vertices.
pub fn path_split_vertex(order: &[Var]) -> Var {
    assert!(!order.is_empty(), "a path has at least one vertex");
    order[(order.len() - 1) / 2]
}

/// A partition of a formula into variable-disjoint connected parts, each
/// paired with its constraint graph. The model count of the whole is the
/// product of the parts' counts.
#[derive(Clone, Debug)]
pub struct ComponentSplit {
    pub parts: Vec<(Formula, ConstraintGraph)>,
}

impl ComponentSplit {
    pub fn is_single(&self) -> bool {
        self.parts.len() == 1
    }
}

/// Groups clauses by the connected component of their variables. An empty
/// clause forms its own leading part (it zeroes the whole product). Each
/// part's declared universe covers only its own variables.
pub fn split_components(f: &Formula, g: &ConstraintGraph) -> ComponentSplit {
    let mut component_of: BTreeMap<Var, usize> = BTreeMap::new();
    let mut next = 0usize;
    for v in g.vertices() {
        if component_of.contains_key(&v) {
            continue;
        }
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if component_of.insert(u, next).is_none() {
                stack.extend(g.neighbors(u).into_iter().flatten().copied());
            }
        }
        next += 1;
    }

    let mut empty_part: Vec<Clause> = Vec::new();
    let mut grouped: Vec<Vec<Clause>> = vec![Vec::new(); next];
    for clause in f.clauses() {
        match clause.literals().first() {
            None => empty_part.push(clause.clone()),
            Some(lit) => grouped[component_of[&lit.var()]].push(clause.clone()),
        }
    }

    let mut parts = Vec::new();
    if !empty_part.is_empty() {
        let part = Formula::from_parts_unchecked(empty_part, 0);
        let graph = ConstraintGraph::build(&part);
        parts.push((part, graph));
    }
    // component discovery order is ascending by smallest variable id
    for clauses in grouped {
        let num_vars = clauses
            .iter()
            .flat_map(|c| c.literals())
            .map(|l| l.var().id())
            .max()
            .unwrap_or(0);
        let part = Formula::from_parts_unchecked(clauses, num_vars);
        let graph = ConstraintGraph::build(&part);
        parts.push((part, graph));
    }
    ComponentSplit { parts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::parse_dimacs;
    use crate::formula::Lit;
    use crate::propagate::exhaustive_count;

    fn formula(text: &str) -> Formula {
        parse_dimacs(text).unwrap().formula
    }

    fn var(id: u32) -> Var {
        Var::new(id)
    }

    #[test]
    fn overlapping_clauses_form_a_path() {
        let f = formula("p cnf 3 2\n1 2 0\n2 3 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.degree(var(2)), Some(2));
        assert_eq!(g.degree(var(1)), Some(1));
        assert_eq!(g.max_degree(), 2);
        assert!(matches!(g.classify(), ComponentShape::Path(ref o) if *o == [var(1), var(2), var(3)]));
    }

    #[test]
    fn polarity_does_not_matter() {
        let pos = formula("p cnf 2 1\n1 2 0\n");
        let neg = formula("p cnf 2 1\n-1 -2 0\n");
        assert_eq!(ConstraintGraph::build(&pos), ConstraintGraph::build(&neg));
    }

    #[test]
    fn multi_clause_pairs_are_one_edge() {
        let f = formula("p cnf 2 2\n1 2 0\n1 -2 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn unit_clause_vars_are_isolated_vertices() {
        let f = formula("p cnf 2 2\n1 0\n2 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.degree(var(1)), Some(0));
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn unknown_vertex_queries_return_none() {
        let g = ConstraintGraph::build(&formula("p cnf 2 1\n1 2 0\n"));
        assert_eq!(g.degree(var(9)), None);
        assert_eq!(g.boundary_neighbor_count(var(9)), None);
    }

    #[test]
    fn empty_graph_has_degree_zero() {
        let g = ConstraintGraph::build(&Formula::empty(3));
        assert_eq!(g.max_degree(), 0);
        assert_eq!(g.vertex_count(), 0);
    }

    // A star center has no boundary neighbors: the leaves see nothing outside.
    #[test]
    fn star_center_has_no_boundary_neighbors() {
        let f = formula("p cnf 4 3\n1 2 0\n1 3 0\n1 4 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.boundary_neighbor_count(var(1)), Some(0));
    }

    // The configuration with exactly one neighbor reaching outside: the walk
    // continues through that unique neighbor.
    #[test]
    fn unique_boundary_neighbor_is_found() {
        // 2 -- 1 -- 3 -- 4: querying 1, only 3 reaches outside {1,2,3}
        let f = formula("p cnf 4 3\n1 2 0\n1 3 0\n3 4 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.boundary_neighbor_count(var(1)), Some(1));
        assert_eq!(g.sole_boundary_neighbor(var(1)), Some(var(3)));
    }

    #[test]
    fn four_path_midpoint_neighbor() {
        // path 1 -- 2 -- 3 -- 4, querying 2: unique boundary neighbor is 3
        let f = formula("p cnf 4 3\n1 2 0\n2 3 0\n3 4 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.sole_boundary_neighbor(var(2)), Some(var(3)));
    }

    #[test]
    fn sole_boundary_neighbor_requires_exactly_one() {
        // degree-3 hub shape: both chain neighbors reach outside
        let f = formula("p cnf 6 5\n1 2 0\n1 3 0\n1 4 0\n3 5 0\n4 6 0\n");
        let g = ConstraintGraph::build(&f);
        assert_eq!(g.boundary_neighbor_count(var(1)), Some(2));
        assert_eq!(g.sole_boundary_neighbor(var(1)), None);
        assert_eq!(g.degree(var(1)), Some(3));
        assert_eq!(g.max_degree(), 3);
        assert!(matches!(g.classify(), ComponentShape::Other));
    }

    #[test]
    fn triangle_is_a_cycle() {
        let f = formula("p cnf 3 3\n1 2 0\n2 3 0\n1 3 0\n");
        let g = ConstraintGraph::build(&f);
        match g.classify() {
            ComponentShape::Cycle(order) => {
                assert_eq!(order.len(), 3);
                assert_eq!(order[0], var(1));
            }
            other => panic!("expected a cycle, got {:?}", other),
        }
    }

    #[test]
    fn single_vertex_is_a_path() {
        let f = formula("p cnf 1 1\n1 0\n");
        let g = ConstraintGraph::build(&f);
        assert!(matches!(g.classify(), ComponentShape::Path(ref o) if *o == [var(1)]));
    }

    #[test]
    fn path_split_positions() {
        let v: Vec<Var> = (1..=4).map(var).collect();
        assert_eq!(path_split_vertex(&v[..3]), var(2));
        assert_eq!(path_split_vertex(&v[..1]), var(1));
        assert_eq!(path_split_vertex(&v[..4]), var(2));
        // both sides stay within ceil(n/2) vertices
        for n in 1..=9usize {
            let order: Vec<Var> = (1..=n as u32).map(var).collect();
            let mid = path_split_vertex(&order);
            let pos = order.iter().position(|&x| x == mid).unwrap();
            let (left, right) = (pos, n - pos - 1);
            assert!(left <= n.div_ceil(2) && right <= n.div_ceil(2), "n={n}");
        }
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let f = formula("p cnf 5 4\n1 2 0\n2 3 0\n3 4 0\n-1 5 0\n");
        let g = ConstraintGraph::build(&f);
        let sum: usize = g.vertices().map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn boundary_count_never_exceeds_degree() {
        let f = formula("p cnf 6 6\n1 2 0\n1 3 0\n2 3 0\n3 4 0\n4 5 0\n5 6 0\n");
        let g = ConstraintGraph::build(&f);
        for v in g.vertices() {
            assert!(g.boundary_neighbor_count(v).unwrap() <= g.degree(v).unwrap());
        }
    }

    #[test]
    fn disjoint_clauses_split_into_two_parts() {
        let f = formula("p cnf 4 2\n1 2 0\n3 4 0\n");
        let g = ConstraintGraph::build(&f);
        let split = split_components(&f, &g);
        assert_eq!(split.parts.len(), 2);
        let union: usize = split.parts.iter().map(|(p, _)| p.clause_count()).sum();
        assert_eq!(union, f.clause_count());
        // count of the whole is the product of part counts: 3 * 3 = 9
        let product = split
            .parts
            .iter()
            .map(|(p, _)| exhaustive_count(p).unwrap())
            .fold(crate::formula::ModelCount::one(), |acc, c| acc * c);
        assert_eq!(product, exhaustive_count(&f).unwrap());
        assert_eq!(product.to_string(), "9");
    }

    #[test]
    fn connected_formula_is_one_part() {
        let f = formula("p cnf 3 2\n1 2 0\n2 3 0\n");
        let g = ConstraintGraph::build(&f);
        assert!(split_components(&f, &g).is_single());
    }

    #[test]
    fn empty_clause_forms_its_own_leading_part() {
        let f = formula("p cnf 2 2\n0\n1 2 0\n");
        let g = ConstraintGraph::build(&f);
        let split = split_components(&f, &g);
        assert_eq!(split.parts.len(), 2);
        assert!(split.parts[0].0.has_empty_clause());
    }

    #[test]
    fn component_variable_sets_partition_occurring_vars() {
        let f = formula("p cnf 7 4\n1 2 0\n3 4 0\n4 5 0\n7 0\n");
        let g = ConstraintGraph::build(&f);
        let split = split_components(&f, &g);
        let mut seen = std::collections::BTreeSet::new();
        for (part, pg) in &split.parts {
            for v in part.occurring_vars() {
                assert!(seen.insert(v), "variable {v} appears in two parts");
                assert!(pg.contains(v));
            }
        }
        assert_eq!(seen, f.occurring_vars());
    }

    #[test]
    fn graph_ignores_literal_signs_under_random_flips() {
        let base = formula("p cnf 6 5\n1 2 0\n2 3 0\n3 4 0\n4 5 0\n5 6 0\n");
        let g0 = ConstraintGraph::build(&base);
        // flip every subset of clause polarities via a counter mask
        for mask in 0u32..32 {
            let clauses: Vec<Clause> = base
                .clauses()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let lits: Vec<Lit> = c
                        .literals()
                        .iter()
                        .map(|&l| if mask & (1 << i) != 0 { l.negate() } else { l })
                        .collect();
                    Clause::new(lits).unwrap()
                })
                .collect();
            let flipped = Formula::new(clauses, 6).unwrap();
            assert_eq!(ConstraintGraph::build(&flipped), g0);
        }
    }

    #[test]
    fn dot_output_lists_vertices_and_edges() {
        let f = formula("p cnf 3 2\n1 2 0\n3 0\n");
        let dot = ConstraintGraph::build(&f).to_dot();
        assert!(dot.contains("1 -- 2;"));
        assert!(dot.contains("  3;"));
        assert!(dot.starts_with("graph constraints {"));
    }
}
