//! Seeded random generators for graphs, reorderings and vectors.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chi::{int, ChiScalar, Poly};
use crate::graph::{Draft, End, Flavor, LegName, MarkedGraph};
use crate::label::LabelMonomial;
use crate::vector::GraphVector;

#[derive(Clone, Copy, Debug)]
pub struct GraphParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_exp: u32,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams { max_vertices: 4, max_edges: 5, max_exp: 2 }
    }
}

/// A random label admissible for the flavor, with exponents at most `max_exp`.
pub fn random_label<R: Rng>(rng: &mut R, n: u32, flavor: Flavor, max_exp: u32) -> LabelMonomial {
    loop {
        let e = rng.gen_range(0..=max_exp);
        let p: Vec<u32> = (1..n as usize).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0..=max_exp.min(1)) } else { 0 }).collect();
        let l = LabelMonomial::new(e, p);
        if flavor.admits_label(n, &l) {
            return l;
        }
    }
}

/// A random marked graph with the given legs (attached to random vertices).
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: u32,
    flavor: Flavor,
    legs: &[LegName],
    params: GraphParams,
) -> MarkedGraph {
    let nv = rng.gen_range(1..=params.max_vertices.max(1));
    let ne = rng.gen_range(0..=params.max_edges);
    let mut sorted = legs.to_vec();
    sorted.sort();
    let mut d = Draft::new(n, flavor, sorted.clone());
    let mut others: Vec<(usize, usize)> = Vec::new();
    for _ in 0..ne {
        others.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    let leg_at: Vec<usize> = sorted.iter().map(|_| rng.gen_range(0..nv)).collect();
    let mut counts = vec![0usize; nv];
    for &(a, b) in &others {
        counts[a] += 1;
        counts[b] += 1;
    }
    for &v in &leg_at {
        counts[v] += 1;
    }
    let mut ids: Vec<Vec<u32>> = Vec::new();
    for c in &counts {
        let label = random_label(rng, n, flavor, params.max_exp);
        ids.push(d.add_vertex(label, *c));
    }
    let mut next = vec![0usize; nv];
    let take = |v: usize, next: &mut Vec<usize>| {
        let h = ids[v][next[v]];
        next[v] += 1;
        End::H(h)
    };
    for &(a, b) in &others {
        let x = take(a, &mut next);
        let y = take(b, &mut next);
        d.pairs.push((x, y));
    }
    for (j, &v) in leg_at.iter().enumerate() {
        let x = take(v, &mut next);
        d.pairs.push((x, End::L(j as u32)));
    }
    reorder(rng, &d.to_graph()).0
}

/// A random re-presentation of the same graph: vertices, half-edges within vertices,
/// pair order and pair orientation are shuffled. Returns the new graph and the sign
/// relating the two values, so that value(new) = sign · value(old) as marked graphs.
pub fn reorder<R: Rng>(rng: &mut R, g: &MarkedGraph) -> (MarkedGraph, i8) {
    let mut d = Draft::from_graph(g);
    let before = d.koszul();
    d.verts.shuffle(rng);
    for v in &mut d.verts {
        v.halfs.shuffle(rng);
    }
    d.pairs.shuffle(rng);
    for p in &mut d.pairs {
        let swappable = !matches!(p, (End::H(_), End::L(_)) | (End::L(_), End::H(_)));
        if swappable && rng.gen_bool(0.5) {
            *p = (p.1, p.0);
        }
    }
    let after = d.koszul();
    (d.to_graph(), before * after)
}

/// A random nonzero scalar: a small polynomial in χ over a power of χ.
pub fn random_scalar<R: Rng>(rng: &mut R) -> ChiScalar {
    loop {
        let deg = rng.gen_range(0..=2);
        let coeffs = (0..=deg).map(|_| int(rng.gen_range(-3..=3))).collect();
        let p = ChiScalar::from_poly(Poly::from_coeffs(coeffs));
        if !p.is_zero() {
            return &p * &ChiScalar::chi_pow(-rng.gen_range(0..=1));
        }
    }
}

/// A random vector of up to `terms` graphs, all of the same degree as the first.
pub fn random_vector<R: Rng>(
    rng: &mut R,
    n: u32,
    flavor: Flavor,
    legs: &[LegName],
    params: GraphParams,
    terms: usize,
) -> GraphVector {
    let mut v = GraphVector::zero(n, flavor, legs.to_vec());
    let mut degree = None;
    let mut attempts = 0;
    let mut added = 0;
    while added < terms && attempts < 200 {
        attempts += 1;
        let g = random_graph(rng, n, flavor, legs, params);
        let d = g.degree();
        if degree.is_some_and(|x| x != d) {
            continue;
        }
        degree = Some(d);
        v.add_graph(&g, &LabelMonomial::one(), &random_scalar(rng));
        added += 1;
    }
    v
}

/// Leg names 1..=k.
pub fn numbered_legs(k: u64) -> Vec<LegName> {
    (1..=k).map(LegName::Num).collect()
}

/// A random morphism out of `source`; target legs are drawn from `names` in order.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    signed: bool,
    source: &[LegName],
    names: &[LegName],
    max_cups: usize,
) -> crate::brauer::BrauerMorphism {
    let mut src = source.to_vec();
    src.shuffle(rng);
    let ncaps = rng.gen_range(0..=src.len() / 2);
    let caps: Vec<(LegName, LegName)> =
        (0..ncaps).map(|i| (src[2 * i].clone(), src[2 * i + 1].clone())).collect();
    let rest = &src[2 * ncaps..];
    let ncups = rng.gen_range(0..=max_cups);
    let mut pool = names[..rest.len() + 2 * ncups].to_vec();
    pool.shuffle(rng);
    let bij = rest.iter().cloned().zip(pool.iter().cloned()).collect();
    let cups = (0..ncups)
        .map(|i| (pool[rest.len() + 2 * i].clone(), pool[rest.len() + 2 * i + 1].clone()))
        .collect();
    crate::brauer::BrauerMorphism::new(signed, source.to_vec(), pool, bij, caps, cups, ChiScalar::one())
        .expect("random morphism is valid")
}
