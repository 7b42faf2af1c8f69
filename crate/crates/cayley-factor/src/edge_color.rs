//! Generic edge-coloring machinery: the Misra-Gries constructive Delta+1
//! edge colorer, mirrored colorings of isomorphic halves, constrained
//! cross-edge completion with Kempe-chain repair, and an exact backtracking
//! 1-factorization oracle for small graphs.

use serde::{Deserialize, Serialize};

use crate::Error;

/// A simple undirected graph with a canonically sorted edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {}", u)));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range",
                    u, v
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::InvalidArgument("duplicate edges".into()));
        }
        Ok(SimpleGraph { vertex_count, edges: norm })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `Some(d)` iff every vertex has degree `d`.
    pub fn regular_valence(&self) -> Option<usize> {
        let deg = self.degrees();
        match deg.first() {
            None => Some(0),
            Some(&d) => deg.iter().all(|&x| x == d).then_some(d),
        }
    }

    /// Per-vertex list of (neighbor, edge index).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }
}

/// A total proper edge coloring: `color_of[edge index] = color`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub color_of: Vec<usize>,
    pub palette_size: usize,
}

/// An ordered list of color classes, each a set of edges. For a valid
/// 1-factorization every class is a perfect matching and the classes
/// partition the edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl Factorization {
    /// Canonical form: edges sorted within each class, classes ordered by
    /// their least edge.
    pub fn canonicalize(&mut self) {
        for class in &mut self.classes {
            for e in class.iter_mut() {
                *e = (e.0.min(e.1), e.0.max(e.1));
            }
            class.sort_unstable();
        }
        self.classes.sort();
    }

    pub fn from_coloring(g: &SimpleGraph, coloring: &EdgeColoring) -> Factorization {
        let mut classes = vec![Vec::new(); coloring.palette_size];
        for (i, &c) in coloring.color_of.iter().enumerate() {
            classes[c].push(g.edges()[i]);
        }
        classes.retain(|c| !c.is_empty());
        let mut f = Factorization { classes };
        f.canonicalize();
        f
    }
}

// ---------------------------------------------------------------------------
// Misra-Gries Delta+1 coloring
// ---------------------------------------------------------------------------

struct ColorState<'a> {
    g: &'a SimpleGraph,
    palette: usize,
    color: Vec<Option<usize>>,
    /// at[v][c] = edge colored c incident to v
    at: Vec<Vec<Option<usize>>>,
}

impl<'a> ColorState<'a> {
    fn new(g: &'a SimpleGraph, palette: usize) -> Self {
        ColorState {
            g,
            palette,
            color: vec![None; g.edge_count()],
            at: vec![vec![None; palette]; g.vertex_count],
        }
    }

    fn set(&mut self, e: usize, c: usize) {
        debug_assert!(self.color[e].is_none());
        let (u, v) = self.g.edges()[e];
        debug_assert!(self.at[u][c].is_none() && self.at[v][c].is_none());
        self.color[e] = Some(c);
        self.at[u][c] = Some(e);
        self.at[v][c] = Some(e);
    }

    fn unset(&mut self, e: usize) {
        let c = self.color[e].expect("unset of uncolored edge");
        let (u, v) = self.g.edges()[e];
        self.color[e] = None;
        self.at[u][c] = None;
        self.at[v][c] = None;
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn free_color(&self, v: usize) -> usize {
        (0..self.palette)
            .find(|&c| self.is_free(v, c))
            .expect("vertex with no free color")
    }

    fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.g.edges()[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Swaps colors c and d along the maximal cd-path starting at `start`
    /// (which must miss one of the two colors).
    fn invert_path(&mut self, start: usize, c: usize, d: usize) {
        let mut path = Vec::new();
        let mut cur = start;
        let mut col = if self.is_free(start, c) { d } else { c };
        while let Some(e) = self.at[cur][col] {
            path.push(e);
            cur = self.other_end(e, cur);
            col = c + d - col;
        }
        let olds: Vec<usize> = path.iter().map(|&e| self.color[e].unwrap()).collect();
        for &e in &path {
            self.unset(e);
        }
        for (&e, &old) in path.iter().zip(&olds) {
            self.set(e, c + d - old);
        }
    }
}

/// Proper edge coloring with at most Delta+1 colors via the Misra-Gries
/// fan-rotation construction. Deterministic given the canonical edge order.
pub fn vizing_color(g: &SimpleGraph) -> EdgeColoring {
    let m = g.edge_count();
    if m == 0 {
        return EdgeColoring { color_of: Vec::new(), palette_size: 0 };
    }
    let palette = g.max_degree() + 1;
    let mut st = ColorState::new(g, palette);

    for e in 0..m {
        let (u, v) = g.edges()[e];
        // maximal fan of u starting at v
        let mut fan = vec![v];
        let mut in_fan = vec![false; g.vertex_count];
        in_fan[v] = true;
        loop {
            let last = *fan.last().unwrap();
            let mut next = None;
            for c in 0..palette {
                if st.is_free(last, c) {
                    if let Some(e2) = st.at[u][c] {
                        let w = st.other_end(e2, u);
                        if !in_fan[w] {
                            next = Some(w);
                            break;
                        }
                    }
                }
            }
            match next {
                Some(w) => {
                    in_fan[w] = true;
                    fan.push(w);
                }
                None => break,
            }
        }
        let c = st.free_color(u);
        let d = st.free_color(*fan.last().unwrap());

        let rotate_to = |st: &mut ColorState, fan: &[usize], i: usize, d: usize| {
            for j in 0..i {
                let e_next = g.edge_index(u, fan[j + 1]).unwrap();
                let col = st.color[e_next].unwrap();
                st.unset(e_next);
                let e_cur = g.edge_index(u, fan[j]).unwrap();
                st.set(e_cur, col);
            }
            let e_last = g.edge_index(u, fan[i]).unwrap();
            st.set(e_last, d);
        };

        if st.is_free(u, d) {
            rotate_to(&mut st, &fan, fan.len() - 1, d);
        } else {
            st.invert_path(u, c, d);
            debug_assert!(st.is_free(u, d));
            let mut placed = false;
            for i in 0..fan.len() {
                if !st.is_free(fan[i], d) {
                    continue;
                }
                // the prefix must still be a fan after the path inversion
                let mut ok = true;
                for j in 1..=i {
                    let ej = g.edge_index(u, fan[j]).unwrap();
                    match st.color[ej] {
                        Some(col) if st.is_free(fan[j - 1], col) => {}
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    rotate_to(&mut st, &fan, i, d);
                    placed = true;
                    break;
                }
            }
            assert!(placed, "misra-gries: no rotatable fan prefix");
        }
    }

    EdgeColoring {
        color_of: st.color.into_iter().map(|c| c.unwrap()).collect(),
        palette_size: palette,
    }
}

// ---------------------------------------------------------------------------
// Mirrored colorings
// ---------------------------------------------------------------------------

/// Colors `g1` with [`vizing_color`] and transports the coloring along a
/// vertex bijection `iso` so the edge `{x, y}` of `g1` and
/// `{iso(x), iso(y)}` of `g2` receive equal colors. `iso` is checked to be a
/// graph isomorphism.
pub fn mirror_color(
    g1: &SimpleGraph,
    iso: &[usize],
    g2: &SimpleGraph,
) -> Result<(EdgeColoring, EdgeColoring), Error> {
    if iso.len() != g1.vertex_count || g1.vertex_count != g2.vertex_count {
        return Err(Error::Precondition("iso must be a bijection between equal vertex sets".into()));
    }
    let mut seen = vec![false; g2.vertex_count];
    for &y in iso {
        if y >= g2.vertex_count || seen[y] {
            return Err(Error::Precondition("iso is not a bijection".into()));
        }
        seen[y] = true;
    }
    if g1.edge_count() != g2.edge_count() {
        return Err(Error::Precondition("iso is not a graph isomorphism".into()));
    }
    let mut mapping = vec![usize::MAX; g1.edge_count()];
    for (i, &(u, v)) in g1.edges().iter().enumerate() {
        match g2.edge_index(iso[u], iso[v]) {
            Some(j) => mapping[i] = j,
            None => return Err(Error::Precondition("iso is not a graph isomorphism".into())),
        }
    }
    let c1 = vizing_color(g1);
    let mut color2 = vec![0usize; g2.edge_count()];
    for (i, &j) in mapping.iter().enumerate() {
        color2[j] = c1.color_of[i];
    }
    let c2 = EdgeColoring { color_of: color2, palette_size: c1.palette_size };
    Ok((c1, c2))
}

// ---------------------------------------------------------------------------
// Cross-edge completion
// ---------------------------------------------------------------------------

const REPAIR_BOUND: usize = 512;

/// Extends a partial proper coloring of a `palette`-regular graph to a total
/// coloring in `palette` colors whose classes are all perfect matchings.
///
/// The uncolored ("cross") edges must form a 1- or 2-regular subgraph on the
/// vertices they touch, and every vertex must miss exactly as many colors as
/// it has uncolored edges. Strategy: greedy propagation of missing colors
/// along the cross cycles, Kempe-chain recoloring of the colored base on
/// conflict, bounded retries. Fails loudly; never returns a partially valid
/// object.
pub fn complete_cross_edges(
    g: &SimpleGraph,
    partial: &[Option<usize>],
    palette: usize,
) -> Result<EdgeColoring, Error> {
    let m = g.edge_count();
    if partial.len() != m {
        return Err(Error::Precondition("partial coloring length mismatch".into()));
    }
    match g.regular_valence() {
        Some(d) if d == palette => {}
        _ => {
            return Err(Error::Precondition(format!(
                "graph must be {}-regular to complete into {} perfect matchings",
                palette, palette
            )))
        }
    }
    if g.vertex_count % 2 != 0 {
        return Err(Error::Precondition("odd vertex count admits no perfect matching".into()));
    }

    let adj = g.adjacency();
    let mut st = ColorState::new(g, palette);
    for (e, c) in partial.iter().enumerate() {
        if let Some(c) = *c {
            if c >= palette {
                return Err(Error::Precondition(format!("color {} outside palette", c)));
            }
            let (u, v) = g.edges()[e];
            if !st.is_free(u, c) || !st.is_free(v, c) {
                return Err(Error::Precondition("partial coloring is not proper".into()));
            }
            st.set(e, c);
        }
    }
    let cross: Vec<usize> = (0..m).filter(|&e| partial[e].is_none()).collect();
    for v in 0..g.vertex_count {
        let cross_deg = adj[v].iter().filter(|&&(_, e)| partial[e].is_none()).count();
        let missing = (0..palette).filter(|&c| st.is_free(v, c)).count();
        if cross_deg != missing {
            return Err(Error::Precondition(format!(
                "vertex {} misses {} colors but has {} uncolored edges",
                v, missing, cross_deg
            )));
        }
        if cross_deg > 2 {
            return Err(Error::Precondition("cross set must be 1- or 2-regular".into()));
        }
    }

    // components of the cross subgraph, each walked canonically
    let components = cross_components(g, &adj, &cross);

    let mut attempt = 0usize;
    loop {
        match try_assign_cross(g, &st, &components) {
            AssignOutcome::Complete(assignment) => {
                let mut full = st.color.clone();
                for (e, c) in assignment {
                    full[e] = Some(c);
                }
                let coloring = EdgeColoring {
                    color_of: full.into_iter().map(|c| c.unwrap()).collect(),
                    palette_size: palette,
                };
                verify_perfect_classes(g, &coloring)?;
                return Ok(coloring);
            }
            AssignOutcome::Conflict(conflicts) => {
                if attempt >= REPAIR_BOUND {
                    return Err(Error::CompletionFailed(format!(
                        "kempe repair bound exhausted after {} attempts",
                        attempt
                    )));
                }
                // vary the conflict and swap-color choice deterministically
                let (w, wanted) = conflicts[attempt % conflicts.len()];
                let missing: Vec<usize> =
                    (0..palette).filter(|&c| st.is_free(w, c)).collect();
                let turn = attempt / conflicts.len().max(1);
                if missing.contains(&wanted) {
                    // cycle-closing conflict: displace `wanted` out of w's missing set
                    let present: Vec<usize> =
                        (0..palette).filter(|&c| !st.is_free(w, c)).collect();
                    if present.is_empty() {
                        return Err(Error::CompletionFailed(
                            "conflict vertex in inconsistent state".into(),
                        ));
                    }
                    st.invert_path(w, present[turn % present.len()], wanted);
                } else {
                    if missing.is_empty() {
                        return Err(Error::CompletionFailed(
                            "conflict vertex in inconsistent state".into(),
                        ));
                    }
                    st.invert_path(w, wanted, missing[turn % missing.len()]);
                }
                attempt += 1;
            }
        }
    }
}

enum AssignOutcome {
    Complete(Vec<(usize, usize)>),
    Conflict(Vec<(usize, usize)>),
}

/// Cross components as closed or open walks: ordered lists of (vertex list,
/// edge list) with edge i joining vertex i and vertex i+1 (mod len for
/// cycles).
struct CrossComponent {
    vertices: Vec<usize>,
    edge_ids: Vec<usize>,
    is_cycle: bool,
}

fn cross_components(
    g: &SimpleGraph,
    adj: &[Vec<(usize, usize)>],
    cross: &[usize],
) -> Vec<CrossComponent> {
    let in_cross: std::collections::HashSet<usize> = cross.iter().copied().collect();
    let cross_adj: Vec<Vec<(usize, usize)>> = adj
        .iter()
        .map(|nb| nb.iter().copied().filter(|&(_, e)| in_cross.contains(&e)).collect())
        .collect();
    let mut visited_edge = vec![false; g.edge_count()];
    let mut comps = Vec::new();
    // endpoints of paths first so open walks start at a degree-1 vertex
    let mut starts: Vec<usize> = (0..g.vertex_count)
        .filter(|&v| cross_adj[v].len() == 1)
        .collect();
    starts.extend((0..g.vertex_count).filter(|&v| cross_adj[v].len() == 2));
    for &start in &starts {
        if cross_adj[start].iter().all(|&(_, e)| visited_edge[e]) {
            continue;
        }
        let mut vertices = vec![start];
        let mut edge_ids = Vec::new();
        let mut cur = start;
        loop {
            // next unvisited cross edge at cur, smallest neighbor first
            let mut next: Option<(usize, usize)> = None;
            for &(w, e) in &cross_adj[cur] {
                if !visited_edge[e] && next.map_or(true, |(nw, _)| w < nw) {
                    next = Some((w, e));
                }
            }
            match next {
                Some((w, e)) => {
                    visited_edge[e] = true;
                    edge_ids.push(e);
                    if w == start {
                        comps.push(CrossComponent { vertices, edge_ids, is_cycle: true });
                        break;
                    }
                    vertices.push(w);
                    cur = w;
                }
                None => {
                    comps.push(CrossComponent { vertices, edge_ids, is_cycle: false });
                    break;
                }
            }
        }
    }
    comps.retain(|c| !c.edge_ids.is_empty());
    comps
}

fn try_assign_cross(
    _g: &SimpleGraph,
    st: &ColorState,
    components: &[CrossComponent],
) -> AssignOutcome {
    let missing_of = |v: usize| -> Vec<usize> {
        (0..st.palette).filter(|&c| st.is_free(v, c)).collect()
    };
    let mut assignment = Vec::new();
    let mut conflicts = Vec::new();
    for comp in components {
        let k = comp.edge_ids.len();
        let mut done = false;
        let v0 = comp.vertices[0];
        let first_candidates = missing_of(v0);
        'candidates: for &c0 in &first_candidates {
            let mut local = Vec::with_capacity(k);
            let mut prev = c0;
            let mut local_conflicts = Vec::new();
            for i in 0..k {
                let tail = if comp.is_cycle {
                    comp.vertices[(i + 1) % comp.vertices.len()]
                } else {
                    comp.vertices[i + 1]
                };
                let mt = missing_of(tail);
                if !mt.contains(&prev) {
                    local_conflicts.push((tail, prev));
                    conflicts.extend(local_conflicts);
                    continue 'candidates;
                }
                local.push((comp.edge_ids[i], prev));
                if i + 1 < k {
                    // next edge at `tail` takes tail's other missing color
                    match mt.iter().copied().find(|&c| c != prev) {
                        Some(next) => prev = next,
                        None => {
                            local_conflicts.push((tail, prev));
                            conflicts.extend(local_conflicts);
                            continue 'candidates;
                        }
                    }
                } else if comp.is_cycle {
                    // closing edge must differ from the opening one at v0
                    if prev == c0 {
                        local_conflicts.push((v0, prev));
                        conflicts.extend(local_conflicts);
                        continue 'candidates;
                    }
                }
            }
            assignment.extend(local);
            done = true;
            break;
        }
        if !done {
            if conflicts.is_empty() {
                conflicts.push((v0, first_candidates.first().copied().unwrap_or(0)));
            }
            return AssignOutcome::Conflict(conflicts);
        }
    }
    AssignOutcome::Complete(assignment)
}

fn verify_perfect_classes(g: &SimpleGraph, coloring: &EdgeColoring) -> Result<(), Error> {
    let report = verify_coloring(
        g,
        &coloring.color_of.iter().map(|&c| Some(c)).collect::<Vec<_>>(),
        coloring.palette_size,
    );
    if !report.violations.is_empty() {
        return Err(Error::CompletionFailed(format!(
            "completed coloring improper: {}",
            report.violations[0]
        )));
    }
    let mut cover = vec![vec![0usize; g.vertex_count]; coloring.palette_size];
    for (e, &c) in coloring.color_of.iter().enumerate() {
        let (u, v) = g.edges()[e];
        cover[c][u] += 1;
        cover[c][v] += 1;
    }
    for (c, cov) in cover.iter().enumerate() {
        if cov.iter().any(|&x| x != 1) {
            return Err(Error::CompletionFailed(format!(
                "color class {} is not a perfect matching",
                c
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Coloring verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringViolation {
    Improper { vertex: usize, color: usize, edge_a: usize, edge_b: usize },
    Uncolored { edge: usize },
    PaletteExceeded { edge: usize, color: usize, palette: usize },
}

impl std::fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColoringViolation::Improper { vertex, color, edge_a, edge_b } => write!(
                f,
                "edges {} and {} share vertex {} and color {}",
                edge_a, edge_b, vertex, color
            ),
            ColoringViolation::Uncolored { edge } => write!(f, "edge {} is uncolored", edge),
            ColoringViolation::PaletteExceeded { edge, color, palette } => {
                write!(f, "edge {} has color {} outside palette {}", edge, color, palette)
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ColoringReport {
    pub violations: Vec<ColoringViolation>,
}

/// Checks properness, totality and the palette bound; the report lists every
/// violation.
pub fn verify_coloring(
    g: &SimpleGraph,
    colors: &[Option<usize>],
    palette: usize,
) -> ColoringReport {
    let mut report = ColoringReport::default();
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; palette]; g.vertex_count];
    for (e, c) in colors.iter().enumerate() {
        match *c {
            None => report.violations.push(ColoringViolation::Uncolored { edge: e }),
            Some(c) if c >= palette => {
                report.violations.push(ColoringViolation::PaletteExceeded {
                    edge: e,
                    color: c,
                    palette,
                });
            }
            Some(c) => {
                let (u, v) = g.edges()[e];
                for vtx in [u, v] {
                    if let Some(other) = at[vtx][c] {
                        report.violations.push(ColoringViolation::Improper {
                            vertex: vtx,
                            color: c,
                            edge_a: other,
                            edge_b: e,
                        });
                    } else {
                        at[vtx][c] = Some(e);
                    }
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Exact backtracking oracle
// ---------------------------------------------------------------------------

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Factorized(Factorization),
    NotFactorizable,
    BudgetExceeded,
}

/// Exact 1-factorization by backtracking: build color classes one at a time,
/// always extending at the least vertex uncovered by the current class.
/// Classes are forced to pick their vertex-0 edge in increasing edge order,
/// which breaks class-permutation symmetry and makes the output canonical.
pub fn exact_one_factorize(g: &SimpleGraph) -> ExactOutcome {
    exact_one_factorize_budget(g, DEFAULT_BUDGET)
}

pub fn exact_one_factorize_budget(g: &SimpleGraph, budget: u64) -> ExactOutcome {
    let valence = match g.regular_valence() {
        Some(v) => v,
        None => return ExactOutcome::NotFactorizable,
    };
    if g.vertex_count == 0 || valence == 0 {
        return ExactOutcome::Factorized(Factorization { classes: Vec::new() });
    }
    if g.vertex_count % 2 != 0 {
        return ExactOutcome::NotFactorizable;
    }
    let mut search = ExactSearch {
        g,
        adj: g.adjacency(),
        valence,
        edge_class: vec![None; g.edge_count()],
        covered: vec![false; g.vertex_count],
        anchor_edges: Vec::new(),
        budget,
    };
    match search.solve(0) {
        SearchResult::Found => {
            let mut classes = vec![Vec::new(); valence];
            for (e, k) in search.edge_class.iter().enumerate() {
                classes[k.unwrap()].push(g.edges()[e]);
            }
            let mut f = Factorization { classes };
            f.canonicalize();
            ExactOutcome::Factorized(f)
        }
        SearchResult::Exhausted => ExactOutcome::NotFactorizable,
        SearchResult::Budget => ExactOutcome::BudgetExceeded,
    }
}

enum SearchResult {
    Found,
    Exhausted,
    Budget,
}

struct ExactSearch<'a> {
    g: &'a SimpleGraph,
    adj: Vec<Vec<(usize, usize)>>,
    valence: usize,
    edge_class: Vec<Option<usize>>,
    covered: Vec<bool>,
    /// vertex-0 edge chosen by each completed class, kept increasing
    anchor_edges: Vec<usize>,
    budget: u64,
}

impl<'a> ExactSearch<'a> {
    fn solve(&mut self, class: usize) -> SearchResult {
        let v = match (0..self.g.vertex_count).find(|&v| !self.covered[v]) {
            Some(v) => v,
            None => {
                // class complete
                if class + 1 == self.valence {
                    debug_assert!(self.edge_class.iter().all(|c| c.is_some()));
                    return SearchResult::Found;
                }
                self.covered.iter_mut().for_each(|c| *c = false);
                let r = self.solve(class + 1);
                if matches!(r, SearchResult::Exhausted) {
                    self.covered.iter_mut().for_each(|c| *c = true);
                }
                return r;
            }
        };
        // symmetry break: each class picks a strictly larger vertex-0 edge
        let min_anchor =
            if v == 0 { self.anchor_edges.last().map_or(0, |&e| e + 1) } else { 0 };
        let candidates: Vec<(usize, usize)> = self.adj[v]
            .iter()
            .copied()
            .filter(|&(w, e)| self.edge_class[e].is_none() && !self.covered[w] && e >= min_anchor)
            .collect();
        for (w, e) in candidates {
            if self.budget == 0 {
                return SearchResult::Budget;
            }
            self.budget -= 1;
            self.edge_class[e] = Some(class);
            self.covered[v] = true;
            self.covered[w] = true;
            if v == 0 {
                self.anchor_edges.push(e);
            }
            match self.solve(class) {
                SearchResult::Exhausted => {}
                done => return done,
            }
            if v == 0 {
                self.anchor_edges.pop();
            }
            self.edge_class[e] = None;
            self.covered[v] = false;
            self.covered[w] = false;
        }
        SearchResult::Exhausted
    }
}
