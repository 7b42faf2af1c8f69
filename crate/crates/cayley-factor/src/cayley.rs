//! Cayley graphs as simple undirected regular graphs, connected components
//! as cosets, and quotient graphs with edge fibers and covering-condition
//! checks.

use std::collections::BTreeSet;

use crate::edge_color::SimpleGraph;
use crate::group::{self, Group, Subgroup};
use crate::Error;

/// The Cayley graph of a group with respect to a generating set: vertex set
/// is the group, edges are `{g, sg}` for `s` in the inverse-closed connection
/// set. Edges are canonically ordered pairs `(u < v)` in a globally sorted
/// list so downstream colorings are stable across runs.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub group: Group,
    /// Sorted generating set S (identity excluded).
    pub gens: Vec<usize>,
    /// S union S^-1, sorted.
    pub connection_set: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub valence: usize,
}

/// `S union S^-1`, deduplicated and sorted.
pub fn connection_set(g: &Group, s: &[usize]) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for &x in s {
        set.insert(x);
        set.insert(g.inv(x));
    }
    set.into_iter().collect()
}

fn validate_gens(g: &Group, s: &[usize]) -> Result<Vec<usize>, Error> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("generating set must be non-empty".into()));
    }
    let mut gens: Vec<usize> = s.to_vec();
    gens.sort_unstable();
    gens.dedup();
    for &x in &gens {
        if x >= g.order() {
            return Err(Error::InvalidArgument(format!("generator {} out of range", x)));
        }
        if x == g.identity() {
            return Err(Error::InvalidArgument("generating set must exclude the identity".into()));
        }
    }
    Ok(gens)
}

/// Builds the simple |S u S^-1|-regular Cayley graph.
pub fn build_cayley(g: &Group, s: &[usize]) -> Result<CayleyGraph, Error> {
    let gens = validate_gens(g, s)?;
    let conn = connection_set(g, &gens);
    let mut edges = BTreeSet::new();
    for x in g.elements() {
        for &c in &conn {
            let y = g.mul(c, x);
            edges.insert((x.min(y), x.max(y)));
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let valence = conn.len();
    let graph = CayleyGraph { group: g.clone(), gens, connection_set: conn, edges, valence };
    debug_assert!(graph.to_simple().degrees().iter().all(|&d| d == valence));
    Ok(graph)
}

impl CayleyGraph {
    pub fn to_simple(&self) -> SimpleGraph {
        SimpleGraph::new(self.group.order(), self.edges.clone())
            .expect("cayley edges form a valid simple graph")
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }
}

/// Connected components of `Gamma(S:G)`; each is a right coset `<S> t`.
pub fn components_by_cosets(g: &Group, s: &[usize]) -> Vec<Vec<usize>> {
    let span = group::generated_subgroup(g, s);
    group::right_transversal(g, &span)
        .into_iter()
        .map(|t| {
            let mut comp: Vec<usize> = span.members().iter().map(|&m| g.mul(m, t)).collect();
            comp.sort_unstable();
            comp
        })
        .collect()
}

/// The projection of a Cayley graph onto the quotient by a normal subgroup,
/// with per-edge fibers and per-generator fold flags.
///
/// A generator `s` is a "fold" when its quotient image is an involution while
/// `s^2 != 1`; its fibers are even cycles rather than matchings, and the lift
/// operation must split them.
#[derive(Clone, Debug)]
pub struct QuotientFibration {
    pub source: CayleyGraph,
    pub target: CayleyGraph,
    /// source element -> target element
    pub vertex_projection: Vec<usize>,
    /// per target edge index: the source edge indices over it
    pub edge_fibers: Vec<Vec<usize>>,
    /// source generators whose quotient image folds (image an involution, s^2 != 1)
    pub fold_generators: Vec<usize>,
    /// whether for all s != t^{+-1} in S neither st nor st^-1 lies in N
    pub covering_ok: bool,
}

/// Builds `Gamma(SN/N : G/N)` with the vertex projection, edge fibers and
/// fold flags. The covering condition is reported as a flag, not an error.
pub fn quotient_graph(gamma: &CayleyGraph, n: &Subgroup) -> Result<QuotientFibration, Error> {
    let g = &gamma.group;
    if !group::is_normal(g, n) {
        return Err(Error::Precondition("quotient subgroup is not normal".into()));
    }
    for &s in &gamma.gens {
        if n.contains(s) {
            return Err(Error::Precondition(format!(
                "generator {} lies in the quotient subgroup",
                s
            )));
        }
    }
    let (qg, proj) = group::quotient_group(g, n)?;
    let mut tgens: Vec<usize> = gamma.gens.iter().map(|&s| proj[s]).collect();
    tgens.sort_unstable();
    tgens.dedup();
    let target = build_cayley(&qg, &tgens)?;

    let mut covering_ok = true;
    for &s in &gamma.gens {
        for &t in &gamma.gens {
            if t == s || t == g.inv(s) {
                continue;
            }
            if n.contains(g.mul(s, t)) || n.contains(g.mul(s, g.inv(t))) {
                covering_ok = false;
            }
        }
    }

    let mut fold_generators = Vec::new();
    for &s in &gamma.gens {
        let sq = proj[s];
        if qg.mul(sq, sq) == qg.identity() && g.mul(s, s) != g.identity() {
            fold_generators.push(s);
        }
    }

    let mut edge_fibers: Vec<Vec<usize>> = vec![Vec::new(); target.edges.len()];
    for (i, &(u, v)) in gamma.edges.iter().enumerate() {
        let (pu, pv) = (proj[u], proj[v]);
        if pu == pv {
            return Err(Error::Internal("source edge collapses in the quotient".into()));
        }
        let ti = target
            .edge_index(pu, pv)
            .ok_or_else(|| Error::Internal("projected edge missing in target".into()))?;
        edge_fibers[ti].push(i);
    }

    Ok(QuotientFibration {
        source: gamma.clone(),
        target,
        vertex_projection: proj,
        edge_fibers,
        fold_generators,
        covering_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, direct_product, generated_subgroup};

    #[test]
    fn connection_sets() {
        let z6 = build_cyclic(6).unwrap();
        assert_eq!(connection_set(&z6, &[1]), vec![1, 5]);
        assert_eq!(connection_set(&z6, &[3]), vec![3]);
        let z4z3 = direct_product(&build_cyclic(4).unwrap(), &build_cyclic(3).unwrap()).unwrap();
        // (1,1) = 4, inverse (3,2) = 11
        assert_eq!(connection_set(&z4z3, &[4]), vec![4, 11]);
    }

    #[test]
    fn small_cayley_graphs() {
        let z2 = build_cyclic(2).unwrap();
        let g = build_cayley(&z2, &[1]).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.valence, 1);

        let z4 = build_cyclic(4).unwrap();
        let g = build_cayley(&z4, &[1]).unwrap();
        assert_eq!(g.valence, 2);
        assert_eq!(g.edges.len(), 4);

        let z2z3 = build_cyclic(6).unwrap();
        // octahedron: circulant C6(1, 2)
        let g = build_cayley(&z2z3, &[1, 2]).unwrap();
        assert_eq!(g.valence, 4);
        assert_eq!(g.edges.len(), 12);
        assert!(g.to_simple().degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn rejects_identity_and_empty() {
        let z4 = build_cyclic(4).unwrap();
        assert!(build_cayley(&z4, &[]).is_err());
        assert!(build_cayley(&z4, &[0]).is_err());
    }

    #[test]
    fn components() {
        let z4 = build_cyclic(4).unwrap();
        let comps = components_by_cosets(&z4, &[1]);
        assert_eq!(comps.len(), 1);
        let comps = components_by_cosets(&z4, &[2]);
        assert_eq!(comps, vec![vec![0, 2], vec![1, 3]]);
        let z12 = build_cyclic(12).unwrap();
        let comps = components_by_cosets(&z12, &[4]);
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn vertex_transitivity_witness() {
        let z4z3 = direct_product(&build_cyclic(4).unwrap(), &build_cyclic(3).unwrap()).unwrap();
        let gamma = build_cayley(&z4z3, &[4, 1]).unwrap();
        for t in z4z3.elements() {
            for &(u, v) in &gamma.edges {
                let (ut, vt) = (z4z3.mul(u, t), z4z3.mul(v, t));
                assert!(gamma.edge_index(ut, vt).is_some());
            }
        }
    }

    #[test]
    fn odd_group_even_valence() {
        let z9 = build_cyclic(9).unwrap();
        for s in [vec![1], vec![1, 3], vec![2, 4]] {
            let gamma = build_cayley(&z9, &s).unwrap();
            assert_eq!(gamma.valence % 2, 0);
        }
    }

    #[test]
    fn fold_quotient_z4() {
        let z4 = build_cyclic(4).unwrap();
        let gamma = build_cayley(&z4, &[1]).unwrap();
        let n = generated_subgroup(&z4, &[2]);
        let fib = quotient_graph(&gamma, &n).unwrap();
        assert_eq!(fib.target.group.order(), 2);
        assert_eq!(fib.target.edges.len(), 1);
        assert_eq!(fib.fold_generators, vec![1]);
        assert!(fib.covering_ok);
        // fiber of the single edge is the whole 4-cycle
        assert_eq!(fib.edge_fibers[0].len(), 4);
    }

    #[test]
    fn nonfold_quotient_z4z3() {
        let z4z3 = direct_product(&build_cyclic(4).unwrap(), &build_cyclic(3).unwrap()).unwrap();
        let gamma = build_cayley(&z4z3, &[4, 1]).unwrap(); // S = {(1,1), (0,1)}
        let n = generated_subgroup(&z4z3, &[6]); // <(2,0)>
        let fib = quotient_graph(&gamma, &n).unwrap();
        assert_eq!(fib.target.group.order(), 6);
        assert_eq!(fib.target.valence, 4);
        assert!(fib.fold_generators.is_empty());
        assert!(fib.covering_ok);
        assert!(fib.edge_fibers.iter().all(|f| f.len() == 2));
        let total: usize = fib.edge_fibers.iter().map(|f| f.len()).sum();
        assert_eq!(total, gamma.edges.len());
    }

    #[test]
    fn identity_quotient_is_isomorphic() {
        let z4 = build_cyclic(4).unwrap();
        let gamma = build_cayley(&z4, &[1]).unwrap();
        let n = generated_subgroup(&z4, &[]);
        let fib = quotient_graph(&gamma, &n).unwrap();
        assert_eq!(fib.target.edges.len(), gamma.edges.len());
        assert!(fib.edge_fibers.iter().all(|f| f.len() == 1));
        assert!(fib.fold_generators.is_empty());
    }

    #[test]
    fn quotient_preconditions() {
        let z4 = build_cyclic(4).unwrap();
        let gamma = build_cayley(&z4, &[2]).unwrap();
        let n = generated_subgroup(&z4, &[2]);
        assert!(quotient_graph(&gamma, &n).is_err()); // N intersects S
    }
}
