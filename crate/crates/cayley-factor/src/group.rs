//! Finite groups as explicit multiplication tables, plus the group-theoretic
//! operations the factorization pipeline needs: orders, generated subgroups,
//! normality, quotients, direct products, the even/odd split of an element,
//! and Sylow-2 / odd-part decomposition.
//!
//! Everything is exact and exhaustive. Group axioms are checked in O(n^3) at
//! construction for every group up to the size cap, so downstream code never
//! has to doubt a table.

use std::collections::HashMap;

use crate::Error;

/// Default hard cap on group order for table-backed construction.
pub const DEFAULT_SIZE_CAP: usize = 512;

/// A finite group given by its full multiplication table.
///
/// Element `i * order + j` of `mul` is the index of the product of elements
/// `i` and `j`. The identity and inverse tables are derived and verified at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    pub name: Option<String>,
}

impl Group {
    /// Builds a group from a row-major multiplication table, locating the
    /// identity, deriving inverses, and checking all group axioms.
    pub fn from_table(order: usize, table: Vec<usize>, name: Option<String>) -> Result<Self, Error> {
        Self::from_table_capped(order, table, name, DEFAULT_SIZE_CAP)
    }

    pub fn from_table_capped(
        order: usize,
        table: Vec<usize>,
        name: Option<String>,
        cap: usize,
    ) -> Result<Self, Error> {
        if order == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        if order > cap {
            return Err(Error::SizeLimit(format!("group order {} exceeds cap {}", order, cap)));
        }
        if table.len() != order * order {
            return Err(Error::InvalidArgument(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidArgument(format!(
                "table entry {} out of range for order {}",
                bad, order
            )));
        }
        let at = |i: usize, j: usize| table[i * order + j];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidArgument("table has no two-sided identity".into()))?;
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("element {} has no two-sided inverse", a))
                })?;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidArgument(format!(
                            "associativity fails on ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(Group { order, mul: table, identity, inv, name })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a^k` by repeated multiplication.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }
}

/// A subgroup, stored as the sorted set of its member indices in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a sorted member list after checking closure, identity and inverses.
    pub fn new(g: &Group, mut members: Vec<usize>) -> Result<Self, Error> {
        members.sort_unstable();
        members.dedup();
        let sub = Subgroup { members };
        if !sub.contains(g.identity()) {
            return Err(Error::Precondition("subgroup must contain the identity".into()));
        }
        for &a in &sub.members {
            if a >= g.order() {
                return Err(Error::InvalidArgument(format!("element {} out of range", a)));
            }
            if !sub.contains(g.inv(a)) {
                return Err(Error::Precondition(format!("not closed under inverse at {}", a)));
            }
            for &b in &sub.members {
                if !sub.contains(g.mul(a, b)) {
                    return Err(Error::Precondition(format!(
                        "not closed under multiplication at ({}, {})",
                        a, b
                    )));
                }
            }
        }
        Ok(sub)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// The cyclic group Z_n with `mul(i, j) = (i + j) mod n`.
pub fn build_cyclic(n: usize) -> Result<Group, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group order must be positive".into()));
    }
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push((i + j) % n);
        }
    }
    Group::from_table(n, table, Some(format!("Z{}", n)))
}

/// Direct product with row-major element encoding: `(i, j) -> i * |g2| + j`.
pub fn direct_product(g1: &Group, g2: &Group) -> Result<Group, Error> {
    direct_product_capped(g1, g2, DEFAULT_SIZE_CAP)
}

pub fn direct_product_capped(g1: &Group, g2: &Group, cap: usize) -> Result<Group, Error> {
    let n1 = g1.order();
    let n2 = g2.order();
    let n = n1.checked_mul(n2).ok_or_else(|| Error::SizeLimit("product order overflow".into()))?;
    if n > cap {
        return Err(Error::SizeLimit(format!("product order {} exceeds cap {}", n, cap)));
    }
    let mut table = vec![0usize; n * n];
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            let a = a1 * n2 + a2;
            for b1 in 0..n1 {
                for b2 in 0..n2 {
                    let b = b1 * n2 + b2;
                    table[a * n + b] = g1.mul(a1, b1) * n2 + g2.mul(a2, b2);
                }
            }
        }
    }
    let name = match (&g1.name, &g2.name) {
        (Some(a), Some(b)) => Some(format!("{}*{}", a, b)),
        _ => None,
    };
    Group::from_table_capped(n, table, name, cap)
}

/// Group generated by permutations of a common ground set, as a table-backed
/// group. Elements are ordered by breadth-first discovery from the identity.
pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Group, Error> {
    from_permutations_capped(generators, DEFAULT_SIZE_CAP)
}

pub fn from_permutations_capped(generators: &[Vec<usize>], cap: usize) -> Result<Group, Error> {
    let m = generators.first().map_or(1, |p| p.len());
    for p in generators {
        if p.len() != m {
            return Err(Error::InvalidArgument("generators act on different ground sets".into()));
        }
        let mut seen = vec![false; m];
        for &x in p {
            if x >= m || seen[x] {
                return Err(Error::InvalidArgument("generator is not a bijection".into()));
            }
            seen[x] = true;
        }
    }
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> {
        // (p . q)(x) = p(q(x))
        (0..m).map(|x| p[q[x]]).collect()
    };
    let id: Vec<usize> = (0..m).collect();
    let mut elems: Vec<Vec<usize>> = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(id, 0);
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        for gen in generators {
            let next = compose(gen, &cur);
            if !index.contains_key(&next) {
                if elems.len() >= cap {
                    return Err(Error::SizeLimit(format!("closure exceeds cap {}", cap)));
                }
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        head += 1;
    }
    let n = elems.len();
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let prod = compose(&elems[i], &elems[j]);
            table[i * n + j] = *index
                .get(&prod)
                .ok_or_else(|| Error::Internal("closure not closed".into()))?;
        }
    }
    Group::from_table_capped(n, table, None, cap)
}

/// Least `k >= 1` with `x^k = 1`.
pub fn element_order(g: &Group, x: usize) -> usize {
    let mut acc = x;
    let mut k = 1;
    while acc != g.identity() {
        acc = g.mul(acc, x);
        k += 1;
    }
    k
}

/// Smallest subgroup containing `xs`, by breadth-first closure.
pub fn generated_subgroup(g: &Group, xs: &[usize]) -> Subgroup {
    let mut in_set = vec![false; g.order()];
    in_set[g.identity()] = true;
    let mut queue = vec![g.identity()];
    for &x in xs {
        if !in_set[x] {
            in_set[x] = true;
            queue.push(x);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        for &x in xs {
            for p in [g.mul(a, x), g.mul(x, a), g.inv(a)] {
                if !in_set[p] {
                    in_set[p] = true;
                    queue.push(p);
                }
            }
        }
        // closure of the accumulated set under products with itself
        for i in 0..queue.len() {
            let b = queue[i];
            let p = g.mul(a, b);
            if !in_set[p] {
                in_set[p] = true;
                queue.push(p);
            }
        }
    }
    let mut members: Vec<usize> = (0..g.order()).filter(|&i| in_set[i]).collect();
    members.sort_unstable();
    Subgroup { members }
}

/// True iff `gN = Ng` for all `g`, checked by conjugation closure.
pub fn is_normal(g: &Group, n: &Subgroup) -> bool {
    for x in g.elements() {
        let xi = g.inv(x);
        for &m in n.members() {
            if !n.contains(g.mul(g.mul(x, m), xi)) {
                return false;
            }
        }
    }
    true
}

/// Quotient `g / n` with cosets as elements (canonical representative = least
/// member index), plus the projection map. The projection is verified to be a
/// homomorphism on all pairs.
pub fn quotient_group(g: &Group, n: &Subgroup) -> Result<(Group, Vec<usize>), Error> {
    if !is_normal(g, n) {
        return Err(Error::Precondition("subgroup is not normal".into()));
    }
    // coset representative per element: least member of N*x
    let mut rep = vec![usize::MAX; g.order()];
    for x in g.elements() {
        let r = n.members().iter().map(|&m| g.mul(m, x)).min().unwrap();
        rep[x] = r;
    }
    let mut reps: Vec<usize> = rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let coset_index: HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let q = reps.len();
    let mut table = vec![0usize; q * q];
    for (i, &ri) in reps.iter().enumerate() {
        for (j, &rj) in reps.iter().enumerate() {
            table[i * q + j] = coset_index[&rep[g.mul(ri, rj)]];
        }
    }
    let name = g.name.as_ref().map(|s| format!("{}/N{}", s, n.order()));
    let qg = Group::from_table_capped(q, table, name, g.order())?;
    let projection: Vec<usize> = (0..g.order()).map(|x| coset_index[&rep[x]]).collect();
    for x in g.elements() {
        for y in g.elements() {
            if projection[g.mul(x, y)] != qg.mul(projection[x], projection[y]) {
                return Err(Error::Internal("quotient projection is not a homomorphism".into()));
            }
        }
    }
    Ok((qg, projection))
}

fn inv_mod(a: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    (1..n).find(|&x| (a % n) * x % n == 1)
}

/// Splits `a` into commuting parts `a = a1 * a2` with `ord(a1)` a 2-power and
/// `ord(a2)` odd, via the CRT power formula inside the cyclic group `<a>`.
pub fn split_even_odd_parts(g: &Group, a: usize) -> (usize, usize) {
    let ord = element_order(g, a);
    let e = ord.trailing_zeros() as usize;
    if e == 0 {
        return (g.identity(), a);
    }
    let two_e = 1usize << e;
    let m = ord >> e;
    let m_inv = inv_mod(m, two_e).expect("odd part invertible mod 2^e");
    let a1 = g.pow(a, m * m_inv % ord);
    let v = inv_mod(two_e, m).expect("2-power invertible mod odd part");
    let a2 = g.pow(a, two_e * v % ord);
    debug_assert_eq!(g.mul(a1, a2), a);
    debug_assert_eq!(g.mul(a2, a1), a);
    (a1, a2)
}

fn is_two_power(n: usize) -> bool {
    n.is_power_of_two()
}

/// Splits an even-order group into its Sylow 2-subgroup `q` (all 2-power-order
/// elements) and odd part `h` (all odd-order elements), verifying the internal
/// direct product exhaustively. Fails for groups that are not of `Q x H` shape
/// (e.g. S3).
pub fn sylow_q2_decompose(g: &Group) -> Result<(Subgroup, Subgroup), Error> {
    if g.order() % 2 != 0 {
        return Err(Error::Precondition("group order must be even".into()));
    }
    let mut q_members = Vec::new();
    let mut h_members = Vec::new();
    for x in g.elements() {
        let ord = element_order(g, x);
        if is_two_power(ord) {
            q_members.push(x);
        }
        if ord % 2 == 1 {
            h_members.push(x);
        }
    }
    let q = Subgroup::new(g, q_members)
        .map_err(|e| Error::NotDecomposable(format!("2-power-order elements: {}", e)))?;
    let h = Subgroup::new(g, h_members)
        .map_err(|e| Error::NotDecomposable(format!("odd-order elements: {}", e)))?;
    if q.order() * h.order() != g.order() {
        return Err(Error::NotDecomposable(format!(
            "|Q| * |H| = {} * {} != {}",
            q.order(),
            h.order(),
            g.order()
        )));
    }
    for &a in q.members() {
        for &b in h.members() {
            if g.mul(a, b) != g.mul(b, a) {
                return Err(Error::NotDecomposable(format!(
                    "elements {} and {} do not commute",
                    a, b
                )));
            }
        }
    }
    // q.order * h.order == order and Q `intersect` H = {1} (orders are coprime),
    // so (q, h) -> qh is a bijection and the product is internal direct.
    Ok((q, h))
}

/// One representative per right coset `s * t`, least element index per coset,
/// identity first.
pub fn right_transversal(g: &Group, s: &Subgroup) -> Vec<usize> {
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    let mark = |t: usize, covered: &mut Vec<bool>| {
        for &m in s.members() {
            covered[g.mul(m, t)] = true;
        }
    };
    reps.push(g.identity());
    mark(g.identity(), &mut covered);
    for t in g.elements() {
        if !covered[t] {
            reps.push(t);
            mark(t, &mut covered);
        }
    }
    reps
}

/// Re-indexes a subgroup as a standalone table-backed group. Returns the
/// group together with the embedding `new index -> parent index` (which is
/// just the sorted member list).
pub fn subgroup_as_group(g: &Group, s: &Subgroup) -> Result<(Group, Vec<usize>), Error> {
    let embed = s.members().to_vec();
    let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = embed.len();
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = pos[&g.mul(embed[i], embed[j])];
        }
    }
    let name = g.name.as_ref().map(|s0| format!("{}|sub{}", s0, n));
    let sub = Group::from_table_capped(n, table, name, g.order().max(1))?;
    Ok((sub, embed))
}
