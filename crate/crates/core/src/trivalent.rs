//! Trivalent graphs for 2n = 2: undecorated graphs, the sign normalization Φ,
//! reduction of corollas to trivalent graphs and the modified IH relation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chi::ChiScalar;
use crate::error::{Error, Result};
use crate::graph::{permutation_parity, Draft, End, Flavor, LegName, MarkedGraph};
use crate::label::LabelMonomial;
use crate::linalg::generic_rank;
use crate::rewrite::{apply_scalar_rules, contract_legs, reduce, remove_bivalent, LabeledPartition, Part};
use crate::vector::GraphVector;

/// Endpoint of an edge of an undecorated graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Port {
    V(usize),
    L(LegName),
}

/// A trivalent graph without orderings: every vertex meets exactly three edge ends,
/// every leg exactly one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UndecoratedGraph {
    legs: Vec<LegName>,
    vertices: usize,
    edges: Vec<(Port, Port)>,
}

#[derive(Serialize, Deserialize)]
struct UndecoratedJson {
    legs: Vec<LegName>,
    vertices: usize,
    edges: Vec<(String, String)>,
}

impl UndecoratedGraph {
    pub fn new(mut legs: Vec<LegName>, vertices: usize, edges: Vec<(Port, Port)>) -> Result<Self> {
        legs.sort();
        let mut vdeg = vec![0usize; vertices];
        let mut ldeg: BTreeMap<&LegName, usize> = legs.iter().map(|l| (l, 0)).collect();
        for (a, b) in &edges {
            for p in [a, b] {
                match p {
                    Port::V(i) if *i < vertices => vdeg[*i] += 1,
                    Port::V(i) => return Err(Error::InvalidGraph(format!("no vertex v{i}"))),
                    Port::L(l) => match ldeg.get_mut(l) {
                        Some(d) => *d += 1,
                        None => return Err(Error::InvalidGraph(format!("unknown leg {l}"))),
                    },
                }
            }
        }
        if vdeg.iter().any(|&d| d != 3) {
            return Err(Error::InvalidGraph("every vertex must be trivalent".into()));
        }
        if ldeg.values().any(|&d| d != 1) {
            return Err(Error::InvalidGraph("every leg must meet exactly one edge".into()));
        }
        Ok(UndecoratedGraph { legs, vertices, edges })
    }

    pub fn legs(&self) -> &[LegName] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(Port, Port)] {
        &self.edges
    }

    /// Degree for n = 1, which is the number of vertices.
    pub fn degree(&self) -> i64 {
        self.vertices as i64
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|(a, b)| matches!((a, b), (Port::V(x), Port::V(y)) if x == y))
    }

    /// The theta graph.
    pub fn theta() -> Self {
        let e = (Port::V(0), Port::V(1));
        UndecoratedGraph::new(vec![], 2, vec![e.clone(), e.clone(), e]).unwrap()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: UndecoratedJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(j)
    }

    fn from_json(j: UndecoratedJson) -> Result<Self> {
        let legset: BTreeSet<LegName> = j.legs.iter().cloned().collect();
        let port = |s: &str| -> Result<Port> {
            let name = LegName::parse(s);
            if legset.contains(&name) {
                return Ok(Port::L(name));
            }
            s.strip_prefix('v')
                .and_then(|d| d.parse().ok())
                .map(Port::V)
                .ok_or_else(|| Error::InvalidGraph(format!("bad endpoint {s}")))
        };
        let edges = j.edges.iter().map(|(a, b)| Ok((port(a)?, port(b)?))).collect::<Result<_>>()?;
        Self::new(j.legs, j.vertices, edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = |p: &Port| match p {
            Port::V(i) => format!("v{i}"),
            Port::L(l) => l.to_string(),
        };
        let j = UndecoratedJson {
            legs: self.legs.clone(),
            vertices: self.vertices,
            edges: self.edges.iter().map(|(a, b)| (name(a), name(b))).collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Half-edge slots of each vertex as (edge index, end index), in edge-list order.
    fn slots(&self) -> Vec<Vec<(usize, usize)>> {
        let mut s = vec![Vec::new(); self.vertices];
        for (k, (a, b)) in self.edges.iter().enumerate() {
            for (end, p) in [a, b].into_iter().enumerate() {
                if let Port::V(i) = p {
                    s[*i].push((k, end));
                }
            }
        }
        s
    }

    /// The ordered graph Γ_choice for the given vertex order, half-edge orders and leg
    /// order, with the sign of ρ. Returns None for graphs with a loop.
    fn choice(&self, vertex_order: &[usize], half_orders: &[[usize; 3]], leg_order: &[LegName]) -> Option<(Draft, bool)> {
        if self.has_loop() {
            return None;
        }
        let slots = self.slots();
        let nh = 3 * self.vertices;
        // global position of every edge end
        let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = 0;
        for &v in vertex_order {
            for &k in &half_orders[v] {
                pos.insert(slots[v][k], next);
                next += 1;
            }
        }
        let leg_pos: HashMap<&LegName, usize> = leg_order.iter().enumerate().map(|(i, l)| (l, nh + i)).collect();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (k, (a, b)) in self.edges.iter().enumerate() {
            let p = |end: usize, port: &Port| match port {
                Port::V(_) => pos[&(k, end)],
                Port::L(l) => leg_pos[l],
            };
            let (x, y) = (p(0, a), p(1, b));
            pairs.push((x.min(y), x.max(y)));
        }
        pairs.sort();
        let seq: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let odd = permutation_parity(&seq);
        let mut d = Draft::new(1, Flavor::Closed, leg_order.to_vec());
        for _ in 0..self.vertices {
            d.add_vertex(LabelMonomial::one(), 3);
        }
        let end = |x: usize| if x < nh { End::H(x as u32) } else { End::L((x - nh) as u32) };
        d.pairs = pairs.iter().map(|&(a, b)| (end(a), end(b))).collect();
        Some((d, odd))
    }

    /// Φ for an explicit choice of orderings.
    pub fn phi_with_choice(&self, vertex_order: &[usize], half_orders: &[[usize; 3]], leg_order: &[LegName]) -> Result<GraphVector> {
        let sorted: BTreeSet<&LegName> = leg_order.iter().collect();
        if sorted.len() != leg_order.len() || sorted.into_iter().cloned().collect::<Vec<_>>() != self.legs {
            return Err(Error::LegMismatch("leg order is not an ordering of the legs".into()));
        }
        let mut v = GraphVector::zero(1, Flavor::Closed, self.legs.clone());
        if let Some((d, odd)) = self.choice(vertex_order, half_orders, leg_order) {
            let c = if odd { -ChiScalar::one() } else { ChiScalar::one() };
            v.add_draft(d, &LabelMonomial::one(), &c);
        }
        Ok(v)
    }

    /// Φ with the vertex and half-edge orders as stored.
    pub fn phi(&self, leg_order: &[LegName]) -> Result<GraphVector> {
        let vo: Vec<usize> = (0..self.vertices).collect();
        let ho = vec![[0, 1, 2]; self.vertices];
        self.phi_with_choice(&vo, &ho, leg_order)
    }

    /// Isomorphism-invariant key (structure only, no sign).
    pub fn canonical_key(&self) -> MarkedGraph {
        let vo: Vec<usize> = (0..self.vertices).collect();
        let slots = self.slots();
        let mut d = Draft::new(1, Flavor::Closed, self.legs.clone());
        let mut pos: HashMap<(usize, usize), u32> = HashMap::new();
        for &v in &vo {
            let ids = d.add_vertex(LabelMonomial::one(), 3);
            for (k, s) in slots[v].iter().enumerate() {
                pos.insert(*s, ids[k]);
            }
        }
        for (k, (a, b)) in self.edges.iter().enumerate() {
            let p = |end: usize, port: &Port| match port {
                Port::V(_) => End::H(pos[&(k, end)]),
                Port::L(l) => End::L(self.legs.binary_search(l).unwrap() as u32),
            };
            d.pairs.push((p(0, a), p(1, b)));
        }
        d.to_graph().canonicalize().0
    }
}

/// Sign normalization Φ with the stored orderings and sorted legs.
pub fn phi(g: &UndecoratedGraph) -> GraphVector {
    g.phi(&g.legs.clone()).expect("sorted legs are an ordering")
}

/// Local ports used while rewriting: original ports, new vertices, or the four cut strands.
#[derive(Clone, PartialEq, Eq, Debug)]
enum Q {
    V(usize),
    L(LegName),
    T(u8),
}

/// Join edges through the temporary ports; returns the edges and the number of closed circles.
fn resolve(mut edges: Vec<(Q, Q)>) -> (Vec<(Q, Q)>, usize) {
    let mut circles = 0;
    loop {
        let Some((i, t)) = edges.iter().enumerate().find_map(|(i, (a, b))| match (a, b) {
            (Q::T(t), _) | (_, Q::T(t)) => Some((i, *t)),
            _ => None,
        }) else {
            return (edges, circles);
        };
        let (a, b) = edges[i].clone();
        if a == Q::T(t) && b == Q::T(t) {
            edges.swap_remove(i);
            circles += 1;
            continue;
        }
        let rest1 = if a == Q::T(t) { b } else { a };
        let j = edges
            .iter()
            .enumerate()
            .position(|(j, (x, y))| j != i && (*x == Q::T(t) || *y == Q::T(t)))
            .expect("each cut strand has two ends");
        let (x, y) = edges[j].clone();
        let rest2 = if x == Q::T(t) { y } else { x };
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        edges.swap_remove(hi);
        edges.swap_remove(lo);
        edges.push((rest1, rest2));
    }
}

/// Which of the two I-shapes an IH instance uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IhShape {
    /// With the H vertices holding {a, c} and {b, d}, I joins a–b and c–d.
    Straight,
    /// The other pairing, I joins a–d and c–b.
    Crossed,
}

/// The right-hand side of the modified IH relation at the internal edge `edge`:
/// a list of undecorated graphs (loops included) with coefficients; circles become χ−2.
///
/// With H holding {a, c} and {b, d} and I joining a–b and c–d, the correction terms are
/// Θ and bubbles placed on the I pairing with a plus sign and on the H pairing with a
/// minus sign.
pub fn ih_rewrite(g: &UndecoratedGraph, edge: usize, shape: IhShape) -> Result<Vec<(UndecoratedGraph, ChiScalar)>> {
    let (x, y) = match g.edges.get(edge) {
        Some((Port::V(x), Port::V(y))) if x != y => (*x, *y),
        _ => return Err(Error::Precondition("IH needs an internal edge joining two distinct vertices".into())),
    };
    // cut strand ids: a = 0, b = 1, c = 2, d = 3
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, (p, q)) in g.edges.iter().enumerate() {
        if k == edge {
            continue;
        }
        for (end, port) in [p, q].into_iter().enumerate() {
            match port {
                Port::V(v) if *v == x => xs.push((k, end)),
                Port::V(v) if *v == y => ys.push((k, end)),
                _ => {}
            }
        }
    }
    let (b_id, d_id) = match shape {
        IhShape::Straight => (1u8, 3u8),
        IhShape::Crossed => (3u8, 1u8),
    };
    let temp: HashMap<(usize, usize), u8> =
        [(xs[0], 0u8), (xs[1], 2u8), (ys[0], b_id), (ys[1], d_id)].into_iter().collect();
    let renum = |v: usize| v - usize::from(v > x) - usize::from(v > y);
    let base = g.vertices - 2;
    let mut outside: Vec<(Q, Q)> = Vec::new();
    for (k, (p, q)) in g.edges.iter().enumerate() {
        if k == edge {
            continue;
        }
        let conv = |end: usize, port: &Port| match temp.get(&(k, end)) {
            Some(&t) => Q::T(t),
            None => match port {
                Port::V(v) => Q::V(renum(*v)),
                Port::L(l) => Q::L(l.clone()),
            },
        };
        outside.push((conv(0, p), conv(1, q)));
    }
    let (a, b, c, d) = (Q::T(0), Q::T(1), Q::T(2), Q::T(3));
    let p = Q::V(base);
    let q = Q::V(base + 1);
    let strand = |u: &Q, w: &Q| (u.clone(), w.clone());
    let theta = vec![strand(&p, &q), strand(&p, &q), strand(&p, &q)];
    let bubble = |u: &Q, w: &Q| {
        vec![strand(u, &p), strand(&p, &q), strand(&p, &q), strand(&q, w)]
    };
    let k1 = ChiScalar::one()
        .checked_div(&(&ChiScalar::chi_minus(4) * &(ChiScalar::from_int(3) - ChiScalar::chi())))
        .unwrap();
    let k2 = ChiScalar::chi_minus(4).inv().unwrap();
    let cat = |mut x: Vec<(Q, Q)>, y: Vec<(Q, Q)>| {
        x.extend(y);
        x
    };
    let terms: Vec<(Vec<(Q, Q)>, ChiScalar)> = vec![
        (vec![strand(&a, &p), strand(&b, &p), strand(&p, &q), strand(&c, &q), strand(&d, &q)], ChiScalar::one()),
        (cat(theta.clone(), vec![strand(&a, &b), strand(&c, &d)]), k1.clone()),
        (cat(theta, vec![strand(&a, &c), strand(&b, &d)]), -&k1),
        (cat(bubble(&a, &b), vec![strand(&c, &d)]), k2.clone()),
        (cat(bubble(&c, &d), vec![strand(&a, &b)]), k2.clone()),
        (cat(bubble(&a, &c), vec![strand(&b, &d)]), -&k2),
        (cat(bubble(&b, &d), vec![strand(&a, &c)]), -&k2),
    ];
    let mut out = Vec::new();
    for (local, coeff) in terms {
        let mut all = outside.clone();
        all.extend(local);
        let (edges, circles) = resolve(all);
        let edges: Vec<(Port, Port)> = edges
            .into_iter()
            .map(|(u, w)| {
                let conv = |z: Q| match z {
                    Q::V(v) => Port::V(v),
                    Q::L(l) => Port::L(l),
                    Q::T(_) => unreachable!("temporary ports are resolved"),
                };
                (conv(u), conv(w))
            })
            .collect();
        let graph = UndecoratedGraph::new(g.legs.clone(), g.vertices, edges)?;
        let mut c = coeff;
        for _ in 0..circles {
            c = &c * &ChiScalar::chi_minus(2);
        }
        out.push((graph, c));
    }
    Ok(out)
}

/// True when the four outer half-edges at the endpoints of `edge` lie on four distinct
/// edges different from `edge` (no double edge, no loop).
pub fn is_generic_ih_site(g: &UndecoratedGraph, edge: usize) -> bool {
    let (x, y) = match g.edges.get(edge) {
        Some((Port::V(x), Port::V(y))) if x != y => (*x, *y),
        _ => return false,
    };
    g.edges.iter().enumerate().all(|(k, (p, q))| {
        if k == edge {
            return true;
        }
        let at = |v: usize| usize::from(*p == Port::V(v)) + usize::from(*q == Port::V(v));
        at(x) + at(y) <= 1
    })
}

/// Φ(LHS) − Φ(RHS) for an IH instance, as a graph vector.
pub fn ih_defect(g: &UndecoratedGraph, edge: usize, shape: IhShape) -> Result<GraphVector> {
    let mut v = phi(g);
    for (h, c) in ih_rewrite(g, edge, shape)? {
        v.add_assign_scaled(&phi(&h), &-c)?;
    }
    Ok(v)
}

/// All loopless trivalent graphs with the given legs and number of vertices, up to isomorphism.
pub fn enumerate_trivalent(legs: &[LegName], vertices: usize) -> Vec<UndecoratedGraph> {
    let mut legs = legs.to_vec();
    legs.sort();
    let nl = legs.len();
    if (3 * vertices + nl) % 2 == 1 {
        return vec![];
    }
    let total = vertices + nl;
    let target: Vec<usize> = (0..total).map(|i| if i < vertices { 3 } else { 1 }).collect();
    let mut adj = vec![vec![0usize; total]; total];
    let mut deg = vec![0usize; total];
    let mut found: BTreeMap<MarkedGraph, UndecoratedGraph> = BTreeMap::new();

    struct Ctx<'a> {
        vertices: usize,
        total: usize,
        target: &'a [usize],
        legs: &'a [LegName],
    }

    fn emit(ctx: &Ctx, adj: &[Vec<usize>], found: &mut BTreeMap<MarkedGraph, UndecoratedGraph>) {
        let port = |i: usize| if i < ctx.vertices { Port::V(i) } else { Port::L(ctx.legs[i - ctx.vertices].clone()) };
        let mut edges = Vec::new();
        for i in 0..ctx.total {
            for j in i + 1..ctx.total {
                for _ in 0..adj[i][j] {
                    edges.push((port(i), port(j)));
                }
            }
        }
        let g = UndecoratedGraph::new(ctx.legs.to_vec(), ctx.vertices, edges).expect("valid by construction");
        found.entry(g.canonical_key()).or_insert(g);
    }

    // Fill row i from column j onward; `fresh` marks vertices untouched before row i began.
    #[allow(clippy::too_many_arguments)]
    fn fill(
        ctx: &Ctx,
        i: usize,
        j: usize,
        fresh: &[bool],
        last_fresh: Option<(usize, usize)>,
        adj: &mut Vec<Vec<usize>>,
        deg: &mut Vec<usize>,
        found: &mut BTreeMap<MarkedGraph, UndecoratedGraph>,
    ) {
        if deg[i] == ctx.target[i] {
            let mut k = i + 1;
            while k < ctx.total && deg[k] == ctx.target[k] {
                k += 1;
            }
            if k == ctx.total {
                emit(ctx, adj, found);
                return;
            }
            if deg[k] > ctx.target[k] {
                return;
            }
            let fresh: Vec<bool> = (0..ctx.total).map(|v| v < ctx.vertices && deg[v] == 0).collect();
            fill(ctx, k, k + 1, &fresh, None, adj, deg, found);
            return;
        }
        if j >= ctx.total {
            return;
        }
        let room = (ctx.target[i] - deg[i]).min(ctx.target[j] - deg[j]);
        for m in (0..=room).rev() {
            let mut next_fresh = last_fresh;
            if fresh[j] {
                // untouched vertices are interchangeable: use them in order, with
                // non-increasing multiplicities
                match last_fresh {
                    Some((_, lm)) if m > lm => continue,
                    Some((lj, 0)) if m > 0 && lj < j => continue,
                    _ => {}
                }
                next_fresh = Some((j, m));
            }
            adj[i][j] += m;
            adj[j][i] += m;
            deg[i] += m;
            deg[j] += m;
            fill(ctx, i, j + 1, fresh, next_fresh, adj, deg, found);
            adj[i][j] -= m;
            adj[j][i] -= m;
            deg[i] -= m;
            deg[j] -= m;
        }
    }

    let ctx = Ctx { vertices, total, target: &target, legs: &legs };
    if total == 0 {
        return vec![UndecoratedGraph::new(vec![], 0, vec![]).unwrap()];
    }
    let fresh: Vec<bool> = (0..total).map(|v| v < vertices).collect();
    fill(&ctx, 0, 1, &fresh, None, &mut adj, &mut deg, &mut found);
    found.into_values().collect()
}

/// Rank of the span of loopless undecorated trivalent graphs with legs S and `degree`
/// vertices modulo all IH instances at generic sites, over Q(χ).
pub fn rank_undec_mod_ih(legs: &[LegName], degree: usize) -> usize {
    let basis = enumerate_trivalent(legs, degree);
    let index: HashMap<MarkedGraph, usize> = basis.iter().enumerate().map(|(i, g)| (g.canonical_key(), i)).collect();
    let mut rows: Vec<Vec<ChiScalar>> = Vec::new();
    for g in &basis {
        for k in 0..g.edges.len() {
            if !is_generic_ih_site(g, k) {
                continue;
            }
            for shape in [IhShape::Straight, IhShape::Crossed] {
                let mut row = vec![ChiScalar::zero(); basis.len()];
                row[index[&g.canonical_key()]] += &ChiScalar::one();
                for (h, c) in ih_rewrite(g, k, shape).expect("generic site") {
                    if h.has_loop() {
                        continue;
                    }
                    row[index[&h.canonical_key()]] -= &c;
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return basis.len();
    }
    basis.len() - generic_rank(&rows, 5, 17, 200)
}

/// Rewrites corollas (n = 1, blue flavors) as combinations of trivalent label-1 graphs.
pub struct Trivalizer {
    flavor: Flavor,
    memo: HashMap<(usize, u32), GraphVector>,
    active: BTreeSet<(usize, u32)>,
}

fn num(k: u64) -> LegName {
    LegName::Num(k)
}

fn fresh_pair(taken: &[LegName]) -> (LegName, LegName) {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < 2 {
        let l = LegName::Sym(format!("~{i}"));
        if !taken.contains(&l) {
            out.push(l);
        }
        i += 1;
    }
    (out[0].clone(), out[1].clone())
}

impl Trivalizer {
    pub fn new(flavor: Flavor) -> Result<Self> {
        if !flavor.is_blue() {
            return Err(Error::Unsupported("trivalent reduction is available in the theta and closed flavors".into()));
        }
        Ok(Trivalizer { flavor, memo: HashMap::new(), active: BTreeSet::new() })
    }

    fn corolla(&self, legs: &[LegName], e: u32) -> GraphVector {
        GraphVector::corolla(1, self.flavor, legs, LabelMonomial::e_pow(e))
    }

    fn lam(v: &GraphVector, a: &LegName, b: &LegName) -> GraphVector {
        contract_legs(v, a, b).expect("legs present")
    }

    /// Trivalent form of an arbitrary vector.
    pub fn trivalize(&mut self, v: &GraphVector) -> Result<GraphVector> {
        if v.n() != 1 {
            return Err(Error::Unsupported(format!("trivalent reduction needs n = 1, got n = {}", v.n())));
        }
        if v.flavor() != self.flavor {
            return Err(Error::FlavorMismatch("trivalizer and vector flavors differ".into()));
        }
        let r = reduce(v);
        let mut out = GraphVector::zero(1, self.flavor, v.legs().to_vec());
        for (p, c) in &r.terms {
            let t = self.partition(p)?;
            out.add_assign_scaled(&t, c)?;
        }
        Ok(out)
    }

    /// Trivalent vector equal to the basis element e_P.
    fn partition(&mut self, p: &LabeledPartition) -> Result<GraphVector> {
        let mut prod = GraphVector::scalar(1, self.flavor, ChiScalar::one());
        let mut tri = prod.clone();
        for part in &p.parts {
            let single = LabeledPartition::new(vec![part.clone()], None);
            let (g, eta) = single.to_graph(1, self.flavor);
            let mut e = GraphVector::zero(1, self.flavor, part.legs.clone());
            e.add_graph(&g, &LabelMonomial::one(), &ChiScalar::from_int(eta as i64));
            prod = prod.product(&e)?;
            let t = self.single(&part.legs, part.label.e_exp())?;
            tri = tri.product(&t)?;
        }
        let r = reduce(&prod);
        let sigma = r.terms.get(p).cloned().ok_or_else(|| Error::Precondition("partition product does not reduce to itself".into()))?;
        Ok(tri.scale(&sigma.inv()?))
    }

    /// Trivalent vector equal to e_P for the single part (legs, e^b).
    fn single(&mut self, legs: &[LegName], b: u32) -> Result<GraphVector> {
        let k = legs.len();
        let key = (k, b);
        if !self.memo.contains_key(&key) {
            if !self.active.insert(key) {
                return Err(Error::Precondition(format!("circular trivalent reduction at ({k}, {b})")));
            }
            let t = self.solve_single(k, b)?;
            self.active.remove(&key);
            self.memo.insert(key, t);
        }
        let base = &self.memo[&key];
        let map: BTreeMap<LegName, LegName> = (1..=k as u64).map(num).zip(legs.iter().cloned()).collect();
        base.relabel(&map)
    }

    fn solve_single(&mut self, k: usize, b: u32) -> Result<GraphVector> {
        let legs: Vec<LegName> = (1..=k as u64).map(num).collect();
        let target = LabeledPartition::new(vec![Part { legs: legs.clone(), label: LabelMonomial::e_pow(b) }], None);
        let rename = |v: &GraphVector, pairs: &[(u64, u64)]| -> GraphVector {
            let map: BTreeMap<LegName, LegName> = pairs.iter().map(|&(a, c)| (num(a), num(c))).collect();
            v.relabel(&map).expect("bijective")
        };
        let (witness, witness_tri) = match (k, b) {
            (2, 0) | (3, 0) => {
                let c = self.corolla(&legs, 0);
                (c.clone(), c)
            }
            (0, 2) => {
                let a = self.corolla(&[num(1), num(2), num(3)], 0);
                let c = self.corolla(&[num(4), num(5), num(6)], 0);
                let t = a.product(&c)?;
                let t = Self::lam(&Self::lam(&Self::lam(&t, &num(3), &num(4)), &num(2), &num(6)), &num(1), &num(5));
                (t.clone(), t)
            }
            (2, 1) => {
                let a = self.corolla(&[num(1), num(2), num(3)], 0);
                let c = self.corolla(&[num(4), num(5), num(6)], 0);
                let t = Self::lam(&Self::lam(&a.product(&c)?, &num(3), &num(4)), &num(2), &num(5));
                let t = rename(&t, &[(1, 1), (6, 2)]);
                (t.clone(), t)
            }
            (1, 2) => {
                let t = self
                    .corolla(&[num(1), num(2), num(3)], 0)
                    .product(&self.corolla(&[num(4), num(5), num(6)], 0))?
                    .product(&self.corolla(&[num(7), num(8), num(9)], 0))?;
                let t = [(2, 4), (3, 7), (5, 8), (6, 9)]
                    .iter()
                    .fold(t, |acc, &(x, y)| Self::lam(&acc, &num(x), &num(y)));
                (t.clone(), t)
            }
            (3, 1) => {
                let a = self.corolla(&[num(1), num(2), num(3)], 0);
                let c = self.corolla(&[num(4), num(5), num(6), num(7)], 0);
                let ct = self.single(&[num(4), num(5), num(6), num(7)], 0)?;
                let build = |c: &GraphVector| -> Result<GraphVector> {
                    let t = Self::lam(&Self::lam(&a.product(c)?, &num(3), &num(4)), &num(2), &num(5));
                    Ok(rename(&t, &[(1, 1), (6, 2), (7, 3)]))
                };
                (build(&c)?, build(&ct)?)
            }
            (k, 0) if k >= 4 => {
                let a = if k >= 6 { 3 } else { 2 };
                let (p, q) = fresh_pair(&legs);
                let mut l1: Vec<LegName> = legs[..a].to_vec();
                l1.push(p.clone());
                let mut l2: Vec<LegName> = legs[a..].to_vec();
                l2.push(q.clone());
                let w = Self::lam(&self.corolla(&l1, 0).product(&self.corolla(&l2, 0))?, &p, &q);
                let t1 = self.single(&l1, 0)?;
                let t2 = self.single(&l2, 0)?;
                let wt = Self::lam(&t1.product(&t2)?, &p, &q);
                (w, wt)
            }
            (_, b) if b >= 1 => {
                let (u, v) = fresh_pair(&legs);
                let mut l = legs.clone();
                l.push(u.clone());
                l.push(v.clone());
                let w = Self::lam(&self.corolla(&l, b - 1), &u, &v);
                let inner = self.single(&l, b - 1)?;
                let wt = Self::lam(&inner, &u, &v);
                (w, wt)
            }
            _ => return Err(Error::Precondition(format!("corolla ({k}, {b}) is not a basis element"))),
        };
        let r = reduce(&witness);
        let alpha = r
            .terms
            .get(&target)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("witness for ({k}, {b}) misses its target")))?;
        let mut acc = witness_tri;
        for (q, c) in &r.terms {
            if *q == target {
                continue;
            }
            let t = self.partition(q)?;
            acc.add_assign_scaled(&t, &-c)?;
        }
        Ok(clean(&acc.scale(&alpha.inv()?)))
    }
}

/// Remove bivalent label-1 vertices and terms whose value vanishes by the loop identity.
fn clean(v: &GraphVector) -> GraphVector {
    let w = remove_bivalent(v);
    let mut out = GraphVector::zero(w.n(), w.flavor(), w.legs().to_vec());
    for (t, c) in w.terms() {
        let g = &t.graph;
        let vals = g.valences();
        let trivalent_loop = g.matching().iter().any(|&(a, b)| match (a, b) {
            (End::H(x), End::H(y)) => {
                let v = g.incidence()[x as usize];
                v == g.incidence()[y as usize] && vals[v as usize] == 3 && g.labels()[v as usize].is_one()
            }
            _ => false,
        });
        if !trivalent_loop {
            out.add_assign_scaled(&apply_scalar_rules(&t.graph, &t.external), c).expect("same legs");
        }
    }
    out
}

/// Trivalent form of κ_{ε̄^a e^b} with legs 1..a (n = 1, flavor closed).
pub fn trivalize_corolla(a: usize, b: u32) -> Result<GraphVector> {
    let legs: Vec<LegName> = (1..=a as u64).map(num).collect();
    let v = GraphVector::corolla(1, Flavor::Closed, &legs, LabelMonomial::e_pow(b));
    Trivalizer::new(Flavor::Closed)?.trivalize(&v)
}

/// Trivalent form of any vector (n = 1, blue flavors).
pub fn trivalize(v: &GraphVector) -> Result<GraphVector> {
    Trivalizer::new(v.flavor())?.trivalize(v)
}

/// True when every vertex of every term is trivalent (or a bivalent label-1 strand) with label 1.
pub fn is_trivalent(v: &GraphVector) -> bool {
    v.terms().keys().all(|t| {
        let g = &t.graph;
        g.valences().iter().zip(g.labels()).all(|(&k, l)| l.is_one() && (k == 3 || k == 2))
    })
}
