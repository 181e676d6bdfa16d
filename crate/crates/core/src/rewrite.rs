//! Scalar rules, contraction formulas and reduction to the corolla basis.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chi::ChiScalar;
use crate::error::{Error, Result};
use crate::graph::{permutation_parity, Draft, DraftVertex, End, Flavor, LegName, MarkedGraph};
use crate::label::LabelMonomial;
use crate::vector::{GraphVector, Term};

/// A part of a labelled partition: a set of legs (sorted) and a label.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Part {
    pub legs: Vec<LegName>,
    pub label: LabelMonomial,
}

impl Ord for Part {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.legs.len(), &self.label, &self.legs).cmp(&(o.legs.len(), &o.label, &o.legs))
    }
}

impl PartialOrd for Part {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Corolla basis element: disjoint union of corollas, one per part.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct LabeledPartition {
    pub parts: Vec<Part>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external: Option<LabelMonomial>,
}

impl LabeledPartition {
    pub fn new(mut parts: Vec<Part>, external: Option<LabelMonomial>) -> Self {
        for p in &mut parts {
            p.legs.sort();
        }
        parts.sort();
        LabeledPartition { parts, external }
    }

    pub fn legs(&self) -> Vec<LegName> {
        let mut v: Vec<LegName> = self.parts.iter().flat_map(|p| p.legs.iter().cloned()).collect();
        v.sort();
        v
    }

    pub fn degree(&self, n: u32) -> i64 {
        let mut d: i64 = self
            .parts
            .iter()
            .map(|p| p.label.degree(n) + n as i64 * (p.legs.len() as i64 - 2))
            .sum();
        if let Some(e) = &self.external {
            d += e.degree(n);
        }
        d
    }

    /// The canonical corolla graph and the sign η with e_P = η · graph.
    pub fn to_graph(&self, n: u32, flavor: Flavor) -> (MarkedGraph, i8) {
        let legs = self.legs();
        let mut d = Draft::new(n, flavor, legs.clone());
        for p in &self.parts {
            let hs = d.add_vertex(p.label.clone(), p.legs.len());
            for (h, l) in hs.iter().zip(&p.legs) {
                let j = legs.binary_search(l).unwrap() as u32;
                d.pairs.push((End::H(*h), End::L(j)));
            }
        }
        let (g, _) = d.to_graph().canonicalize();
        let eta = corolla_eta(&g);
        (g, eta)
    }

    pub fn relabel(&self, map: &BTreeMap<LegName, LegName>) -> LabeledPartition {
        let parts = self
            .parts
            .iter()
            .map(|p| Part { legs: p.legs.iter().map(|l| map[l].clone()).collect(), label: p.label.clone() })
            .collect();
        LabeledPartition::new(parts, self.external.clone())
    }

    pub fn to_text(&self, blue: bool) -> String {
        let eps = if blue { "epsbar" } else { "eps" };
        let mut out: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let mut inner = Vec::new();
                if !p.legs.is_empty() {
                    let ls: Vec<String> = p.legs.iter().map(|l| l.to_string()).collect();
                    inner.push(format!("{eps}^{{{}}}", ls.join(",")));
                }
                if !p.label.is_one() || p.legs.is_empty() {
                    inner.push(p.label.to_text());
                }
                format!("kappa_{{{}}}", inner.join(" "))
            })
            .collect();
        if let Some(e) = &self.external {
            if !e.is_one() {
                out.push(format!("[{}]", e.to_text()));
            }
        }
        if out.is_empty() {
            "1".into()
        } else {
            out.join(" ")
        }
    }

    pub fn to_latex(&self, blue: bool) -> String {
        let eps = if blue { "\\bar{\\epsilon}" } else { "\\epsilon" };
        let mut out: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let mut inner = String::new();
                if !p.legs.is_empty() {
                    let ls: Vec<String> = p.legs.iter().map(|l| l.to_string()).collect();
                    inner.push_str(&format!("{eps}^{{{}}}", ls.join(",")));
                }
                if !p.label.is_one() || p.legs.is_empty() {
                    if !inner.is_empty() {
                        inner.push(' ');
                    }
                    inner.push_str(&p.label.to_latex());
                }
                format!("\\kappa_{{{inner}}}")
            })
            .collect();
        if let Some(e) = &self.external {
            if !e.is_one() {
                out.push(format!("[{}]", e.to_latex()));
            }
        }
        if out.is_empty() {
            "1".into()
        } else {
            out.join("\\,")
        }
    }
}

/// Sign of the permutation reading legs along the half-edge word of an edgeless graph, to the n.
fn corolla_eta(g: &MarkedGraph) -> i8 {
    if g.n() % 2 == 0 {
        return 1;
    }
    let mut seq = vec![0usize; g.half_edge_count()];
    for &(a, b) in g.matching() {
        if let (End::H(h), End::L(j)) = (a, b) {
            seq[h as usize] = j as usize;
        }
    }
    if permutation_parity(&seq) {
        -1
    } else {
        1
    }
}

/// Read the labelled partition off an edgeless graph without strands.
fn partition_of(t: &Term) -> (LabeledPartition, i8) {
    let g = &t.graph;
    let mut parts: Vec<Part> =
        g.labels().iter().map(|l| Part { legs: Vec::new(), label: l.clone() }).collect();
    for &(a, b) in g.matching() {
        match (a, b) {
            (End::H(h), End::L(j)) => parts[g.incidence()[h as usize] as usize].legs.push(g.legs()[j as usize].clone()),
            _ => panic!("partition_of called on a graph with edges"),
        }
    }
    let ext = if g.flavor().is_pointed() { Some(t.external.clone()) } else { None };
    (LabeledPartition::new(parts, ext), corolla_eta(g))
}

/// Finite combination of labelled partitions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorollaVector {
    pub n: u32,
    pub flavor: Flavor,
    pub legs: Vec<LegName>,
    pub terms: BTreeMap<LabeledPartition, ChiScalar>,
}

impl CorollaVector {
    pub fn zero(n: u32, flavor: Flavor, mut legs: Vec<LegName>) -> Self {
        legs.sort();
        CorollaVector { n, flavor, legs, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, p: LabeledPartition, c: &ChiScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(ChiScalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &ChiScalar) -> CorollaVector {
        let mut r = Self::zero(self.n, self.flavor, self.legs.clone());
        for (p, x) in &self.terms {
            r.add(p.clone(), &(x * c));
        }
        r
    }

    pub fn sub(&self, o: &CorollaVector) -> CorollaVector {
        let mut r = self.clone();
        for (p, x) in &o.terms {
            r.add(p.clone(), &-x);
        }
        r
    }

    pub fn relabel(&self, map: &BTreeMap<LegName, LegName>) -> CorollaVector {
        let legs = self.legs.iter().map(|l| map[l].clone()).collect();
        let mut r = Self::zero(self.n, self.flavor, legs);
        for (p, x) in &self.terms {
            r.add(p.relabel(map), x);
        }
        r
    }

    pub fn to_graph_vector(&self) -> GraphVector {
        let mut v = GraphVector::zero(self.n, self.flavor, self.legs.clone());
        for (p, c) in &self.terms {
            let (g, eta) = p.to_graph(self.n, self.flavor);
            let ext = p.external.clone().unwrap_or_default();
            v.add_canonical(Term { graph: g, external: ext }, &c.sign_mul(eta));
        }
        v
    }

    /// Union of denominator factors over all coefficients.
    pub fn denominator_support(&self) -> Vec<crate::chi::Poly> {
        let mut out: Vec<_> = self.terms.values().flat_map(|c| c.denominator_support()).collect();
        crate::chi::sort_factors(&mut out);
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&ChiScalar) -> ChiScalar) -> CorollaVector {
        let mut r = Self::zero(self.n, self.flavor, self.legs.clone());
        for (p, c) in &self.terms {
            r.add(p.clone(), &f(c));
        }
        r
    }
}

enum ScalarOutcome {
    Unchanged,
    Zero,
    Changed(Draft, LabelMonomial, ChiScalar),
}

fn vertex_degree(n: u32, v: &DraftVertex) -> i64 {
    v.label.degree(n) + n as i64 * (v.halfs.len() as i64 - 2)
}

/// Apply rules (b), (c) and their variants until none fires.
fn scalar_rules(g: &MarkedGraph, external: &LabelMonomial) -> ScalarOutcome {
    let n = g.n();
    let flavor = g.flavor();
    let mut d = Draft::from_graph(g);
    let mut ext = external.clone();
    let mut coeff = ChiScalar::one();
    let mut changed = false;
    let low = n as usize / 4;
    let e = LabelMonomial::e_pow(1);
    loop {
        if d.verts.iter().any(|v| vertex_degree(n, v) < 0) {
            return ScalarOutcome::Zero;
        }
        if low > 0 && flavor.full_labels() {
            let hit = d.verts.iter().enumerate().find_map(|(k, v)| {
                let i = v.label.lowest_p_up_to(low)?;
                let special = v.halfs.is_empty() && v.label == LabelMonomial::p_pow(i, 1).times_e();
                (!special).then_some((k, i))
            });
            if let Some((k, i)) = hit {
                d.verts[k].label = d.verts[k].label.without_p(i);
                if flavor == Flavor::Closed {
                    d.add_vertex(LabelMonomial::p_pow(i, 1).times_e(), 0);
                    coeff = &coeff * &ChiScalar::chi_pow(-1);
                } else {
                    ext = ext.mul(&LabelMonomial::p_pow(i, 1));
                }
                changed = true;
                continue;
            }
        }
        if let Some(k) = d.verts.iter().position(|v| v.halfs.is_empty() && v.label == e) {
            d.verts.remove(k);
            coeff = &coeff * &ChiScalar::chi();
            changed = true;
            continue;
        }
        if d
            .verts
            .iter()
            .any(|v| v.halfs.is_empty() && v.label.e_exp() == 0 && v.label.degree(n) == 2 * n as i64)
        {
            return ScalarOutcome::Zero;
        }
        if flavor.is_blue() && d.verts.iter().any(|v| v.halfs.len() == 1 && v.label == e) {
            return ScalarOutcome::Zero;
        }
        break;
    }
    if changed {
        ScalarOutcome::Changed(d, ext, coeff)
    } else {
        ScalarOutcome::Unchanged
    }
}

/// Scalar rules applied to a single graph, as a vector.
pub fn apply_scalar_rules(g: &MarkedGraph, external: &LabelMonomial) -> GraphVector {
    let mut out = GraphVector::zero(g.n(), g.flavor(), g.legs().to_vec());
    match scalar_rules(g, external) {
        ScalarOutcome::Zero => {}
        ScalarOutcome::Unchanged => out.add_graph(g, external, &ChiScalar::one()),
        ScalarOutcome::Changed(d, ext, c) => out.add_draft(d, &ext, &c),
    }
    out
}

/// One output term of a contraction: an uncanonicalized draft with its external label and coefficient.
pub type RawTerm = (Draft, LabelMonomial, ChiScalar);

/// Contract the internal edge given by matching index `pair`.
pub fn contract_edge_raw(g: &MarkedGraph, external: &LabelMonomial, pair: usize) -> Result<Vec<RawTerm>> {
    let (a, b) = *g
        .matching()
        .get(pair)
        .ok_or_else(|| Error::Precondition(format!("no pair {pair}")))?;
    let (x, y) = match (a, b) {
        (End::H(x), End::H(y)) => (x, y),
        _ => return Err(Error::Precondition("contracted pair is not an internal edge".into())),
    };
    let n = g.n();
    let flavor = g.flavor();
    let src = Draft::from_graph(g);
    let s0 = src.koszul();
    let vx = g.incidence()[x as usize] as usize;
    let vy = g.incidence()[y as usize] as usize;
    let others: Vec<DraftVertex> = src
        .verts
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != vx && k != vy)
        .map(|(_, v)| v.clone())
        .collect();
    let rest_pairs: Vec<(End, End)> =
        src.pairs.iter().enumerate().filter(|&(k, _)| k != pair).map(|(_, p)| *p).collect();
    let one = ChiScalar::one();
    let chi = ChiScalar::chi();
    let inv = ChiScalar::chi_pow(-1);
    let inv2 = ChiScalar::chi_pow(-2);
    let e = LabelMonomial::e_pow(1);
    let mut out: Vec<RawTerm> = Vec::new();
    let build = |front: Vec<DraftVertex>| -> Draft {
        let mut d = src.clone();
        d.verts = front;
        d.verts.extend(others.iter().cloned());
        d.pairs = rest_pairs.clone();
        d
    };
    let vert = |label: &LabelMonomial, halfs: &[u32]| DraftVertex { label: label.clone(), halfs: halfs.to_vec() };

    let sign;
    if vx == vy {
        let c = src.verts[vx].label.clone();
        let rest: Vec<u32> = src.verts[vx].halfs.iter().copied().filter(|&h| h != x && h != y).collect();
        let mut std = src.clone();
        let mut front_halfs = vec![x, y];
        front_halfs.extend(&rest);
        std.verts = vec![vert(&c, &front_halfs)];
        std.verts.extend(others.iter().cloned());
        std.pairs = vec![(End::H(x), End::H(y))];
        std.pairs.extend(rest_pairs.iter().copied());
        sign = s0 * std.koszul();
        let ce = c.times_e();
        if flavor.is_blue() {
            out.push((build(vec![vert(&ce, &rest)]), external.clone(), (&chi - &ChiScalar::from_int(2)) * &inv));
            out.push((
                build(vec![vert(&c, &rest), vert(&LabelMonomial::e_pow(2), &[])]),
                external.clone(),
                inv2.clone(),
            ));
        } else if flavor == Flavor::Disc {
            out.push((build(vec![vert(&ce, &rest)]), external.clone(), one.clone()));
            if rest.is_empty() && c.is_one() {
                out.push((build(vec![]), external.clone(), ChiScalar::from_int(-2)));
            }
        } else {
            out.push((build(vec![vert(&ce, &rest)]), external.clone(), one.clone()));
            out.push((build(vec![vert(&c, &rest)]), external.mul(&e), one.clone()));
            if rest.is_empty() {
                out.push((build(vec![]), external.mul(&c), ChiScalar::from_int(-2)));
            }
        }
    } else {
        let c = src.verts[vx].label.clone();
        let c2 = src.verts[vy].label.clone();
        let rx: Vec<u32> = src.verts[vx].halfs.iter().copied().filter(|&h| h != x).collect();
        let ry: Vec<u32> = src.verts[vy].halfs.iter().copied().filter(|&h| h != y).collect();
        let mut std = src.clone();
        let mut hx = rx.clone();
        hx.push(x);
        let mut hy = vec![y];
        hy.extend(&ry);
        std.verts = vec![vert(&c, &hx), vert(&c2, &hy)];
        std.verts.extend(others.iter().cloned());
        std.pairs = vec![(End::H(x), End::H(y))];
        std.pairs.extend(rest_pairs.iter().copied());
        sign = s0 * std.koszul();
        let mut merged = rx.clone();
        merged.extend(&ry);
        out.push((build(vec![vert(&c.mul(&c2), &merged)]), external.clone(), one.clone()));
        if flavor.is_blue() {
            out.push((
                build(vec![vert(&c, &rx), vert(&c2, &ry), vert(&LabelMonomial::e_pow(2), &[])]),
                external.clone(),
                inv2.clone(),
            ));
            out.push((build(vec![vert(&c.times_e(), &rx), vert(&c2, &ry)]), external.clone(), -&inv));
            out.push((build(vec![vert(&c, &rx), vert(&c2.times_e(), &ry)]), external.clone(), -&inv));
        } else if flavor == Flavor::Disc {
            if rx.is_empty() && c.is_one() {
                out.push((build(vec![vert(&c2, &ry)]), external.clone(), -&one));
            }
            if ry.is_empty() && c2.is_one() {
                out.push((build(vec![vert(&c, &rx)]), external.clone(), -&one));
            }
        } else {
            out.push((build(vec![vert(&c, &rx), vert(&c2, &ry)]), external.mul(&e), one.clone()));
            if rx.is_empty() {
                out.push((build(vec![vert(&c2, &ry)]), external.mul(&c), -&one));
            }
            if ry.is_empty() {
                out.push((build(vec![vert(&c, &rx)]), external.mul(&c2), -&one));
            }
        }
    }
    let _ = n;
    for t in &mut out {
        t.2 = t.2.sign_mul(sign);
    }
    Ok(out)
}

/// Contract one internal edge of a graph, returning a canonicalized vector.
pub fn contract_edge(g: &MarkedGraph, pair: usize) -> Result<GraphVector> {
    contract_edge_ext(g, &LabelMonomial::one(), pair)
}

pub fn contract_edge_ext(g: &MarkedGraph, external: &LabelMonomial, pair: usize) -> Result<GraphVector> {
    let mut v = GraphVector::zero(g.n(), g.flavor(), g.legs().to_vec());
    for (d, ext, c) in contract_edge_raw(g, external, pair)? {
        v.add_draft(d, &ext, &c);
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Always contract the first internal edge of the canonical form.
    Deterministic,
    /// Contract a uniformly random internal edge, seeded.
    Seeded(u64),
}

type Reduced = Rc<Vec<(LabeledPartition, ChiScalar)>>;

struct Reducer {
    memo: HashMap<Term, Reduced>,
    rng: Option<ChaCha8Rng>,
}

impl Reducer {
    fn new(strategy: Strategy) -> Self {
        let rng = match strategy {
            Strategy::Deterministic => None,
            Strategy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        };
        Reducer { memo: HashMap::new(), rng }
    }

    fn reduce_term(&mut self, t: &Term) -> Reduced {
        if self.rng.is_none() {
            if let Some(r) = self.memo.get(t) {
                return r.clone();
            }
        }
        let mut acc: BTreeMap<LabeledPartition, ChiScalar> = BTreeMap::new();
        let push = |acc: &mut BTreeMap<LabeledPartition, ChiScalar>, items: &[(LabeledPartition, ChiScalar)], c: &ChiScalar| {
            for (p, x) in items {
                let e = acc.entry(p.clone()).or_insert_with(ChiScalar::zero);
                *e += &(x * c);
            }
        };
        match scalar_rules(&t.graph, &t.external) {
            ScalarOutcome::Zero => {}
            ScalarOutcome::Changed(d, ext, c) => {
                let (g, s) = d.to_graph().canonicalize();
                if s != 0 {
                    let sub = self.reduce_term(&Term { graph: g, external: ext });
                    push(&mut acc, &sub, &c.sign_mul(s));
                }
            }
            ScalarOutcome::Unchanged => {
                let edges = t.graph.internal_edges();
                if edges.is_empty() {
                    let (p, eta) = partition_of(t);
                    acc.insert(p, ChiScalar::from_int(eta as i64));
                } else {
                    let pick = match &mut self.rng {
                        None => edges[0],
                        Some(r) => edges[r.gen_range(0..edges.len())],
                    };
                    let raw = contract_edge_raw(&t.graph, &t.external, pick).expect("internal edge");
                    for (d, ext, c) in raw {
                        let (g, s) = d.to_graph().canonicalize();
                        if s == 0 {
                            continue;
                        }
                        let sub = self.reduce_term(&Term { graph: g, external: ext });
                        push(&mut acc, &sub, &c.sign_mul(s));
                    }
                }
            }
        }
        let res: Reduced = Rc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        if self.rng.is_none() {
            self.memo.insert(t.clone(), res.clone());
        }
        res
    }
}

/// Reduce a vector to the corolla basis.
pub fn reduce_to_corollas(v: &GraphVector, strategy: Strategy) -> CorollaVector {
    let mut r = Reducer::new(strategy);
    let mut out = CorollaVector::zero(v.n(), v.flavor(), v.legs().to_vec());
    for (t, c) in v.terms() {
        let sub = r.reduce_term(t);
        for (p, x) in sub.iter() {
            out.add(p.clone(), &(x * c));
        }
    }
    out
}

pub fn reduce(v: &GraphVector) -> CorollaVector {
    reduce_to_corollas(v, Strategy::Deterministic)
}

/// Contraction λ_{i,j}: join the partners of legs i and j through two bivalent vertices.
pub fn contract_legs(v: &GraphVector, i: &LegName, j: &LegName) -> Result<GraphVector> {
    if i == j {
        return Err(Error::Precondition("contracting a leg with itself".into()));
    }
    let li = v.legs().iter().position(|l| l == i).ok_or_else(|| Error::LegMismatch(format!("missing leg {i}")))?;
    let lj = v.legs().iter().position(|l| l == j).ok_or_else(|| Error::LegMismatch(format!("missing leg {j}")))?;
    let new_legs: Vec<LegName> = v.legs().iter().filter(|l| *l != i && *l != j).cloned().collect();
    let mut out = GraphVector::zero(v.n(), v.flavor(), new_legs);
    for (t, c) in v.terms() {
        let mut d = Draft::from_graph(&t.graph);
        let bi = d.add_vertex(LabelMonomial::one(), 2);
        let bj = d.add_vertex(LabelMonomial::one(), 2);
        for p in &mut d.pairs {
            for e in [&mut p.0, &mut p.1] {
                if *e == End::L(li as u32) {
                    *e = End::H(bi[0]);
                } else if *e == End::L(lj as u32) {
                    *e = End::H(bj[0]);
                }
            }
        }
        d.pairs.push((End::H(bi[1]), End::H(bj[1])));
        let (hi, lo) = if li > lj { (li, lj) } else { (lj, li) };
        d.remove_leg(hi as u32);
        d.remove_leg(lo as u32);
        out.add_draft(d, &t.external, c);
    }
    Ok(out)
}

/// Contract every internal edge at a bivalent label-1 vertex, which acts as an identity;
/// a bivalent vertex closed up on itself becomes a circle.
pub fn remove_bivalent(v: &GraphVector) -> GraphVector {
    let mut cur = v.clone();
    loop {
        let mut next = GraphVector::zero(cur.n(), cur.flavor(), cur.legs().to_vec());
        let mut changed = false;
        for (t, c) in cur.terms() {
            let g = &t.graph;
            let vals = g.valences();
            let hit = g.internal_edges().into_iter().find(|&k| {
                let (a, b) = g.matching()[k];
                let (End::H(x), End::H(y)) = (a, b) else { return false };
                let vx = g.incidence()[x as usize] as usize;
                let vy = g.incidence()[y as usize] as usize;
                let biv = |u: usize| vals[u] == 2 && g.labels()[u].is_one();
                biv(vx) || biv(vy)
            });
            match hit {
                Some(k) => {
                    changed = true;
                    let w = contract_edge_ext(g, &t.external, k).expect("internal edge");
                    for (u, cu) in w.terms() {
                        let s = apply_scalar_rules(&u.graph, &u.external);
                        next.add_assign_scaled(&s, &(cu * c)).expect("same legs");
                    }
                }
                None => next.add_canonical(t.clone(), c),
            }
        }
        cur = next;
        if !changed {
            return cur;
        }
    }
}

/// Bernoulli numbers B_0..B_m.
fn bernoulli(m: usize) -> Vec<crate::chi::Rational> {
    use crate::chi::{int, Rational};
    use num_traits::Zero;
    let mut b = vec![Rational::zero(); m + 1];
    b[0] = int(1);
    for k in 1..=m {
        let mut s = Rational::zero();
        let mut binom = int(1);
        for j in 0..k {
            s += &binom * &b[j];
            binom = binom * int((k + 1 - j) as i64) / int((j + 1) as i64);
        }
        b[k] = -s / int((k + 1) as i64);
    }
    b
}

type PPoly = BTreeMap<Vec<u32>, crate::chi::Rational>;

fn weight(m: &[u32]) -> usize {
    m.iter().enumerate().map(|(i, k)| (i + 1) * *k as usize).sum()
}

fn pmul(a: &PPoly, b: &PPoly, max_w: usize, vars: usize) -> PPoly {
    let mut out = PPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = (0..vars).map(|i| ma[i] + mb[i]).collect();
            if weight(&m) > max_w {
                continue;
            }
            let e = out.entry(m).or_insert_with(num_traits::Zero::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !num_traits::Zero::is_zero(c));
    out
}

/// Degree-i part of the multiplicative sequence of √z/tanh√z as a polynomial in p_1..p_i,
/// keyed by exponent vectors.
pub fn lclass_pontryagin(i: usize) -> PPoly {
    use crate::chi::{int, Rational};
    use num_traits::{One, Zero};
    let vars = i.max(1);
    let unit = |c: Rational| -> PPoly {
        let mut p = PPoly::new();
        p.insert(vec![0; vars], c);
        p
    };
    if i == 0 {
        return unit(Rational::one());
    }
    // Q(z) = Σ 2^{2k} B_{2k} z^k / (2k)!
    let b = bernoulli(2 * i);
    let mut q = vec![Rational::zero(); i + 1];
    let mut fact = int(1);
    for k in 0..=2 * i {
        if k > 0 {
            fact = fact * int(k as i64);
        }
        if k % 2 == 0 {
            q[k / 2] = int(1i64 << k) * &b[k] / &fact;
        }
    }
    // log Q = Σ a_k z^k
    let mut a = vec![Rational::zero(); i + 1];
    for k in 1..=i {
        let mut s = int(k as i64) * &q[k];
        for j in 1..k {
            s -= int(j as i64) * &a[j] * &q[k - j];
        }
        a[k] = s / int(k as i64);
    }
    // power sums in elementary symmetric polynomials (Newton)
    let var = |j: usize| -> PPoly {
        let mut m = vec![0; vars];
        m[j - 1] = 1;
        let mut p = PPoly::new();
        p.insert(m, int(1));
        p
    };
    let mut s: Vec<PPoly> = vec![PPoly::new(); i + 1];
    for k in 1..=i {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let mut acc: PPoly = var(k).into_iter().map(|(m, c)| (m, c * int(sign * k as i64))).collect();
        for j in 1..k {
            let sg = if j % 2 == 1 { 1 } else { -1 };
            for (m, c) in pmul(&var(j), &s[k - j], i, vars) {
                let e = acc.entry(m).or_insert_with(Rational::zero);
                *e += c * int(sg);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        s[k] = acc;
    }
    let mut log_l = PPoly::new();
    for k in 1..=i {
        for (m, c) in &s[k] {
            let e = log_l.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c * &a[k];
        }
    }
    // exp(log_l) truncated at weight i
    let mut result = unit(Rational::one());
    let mut power = unit(Rational::one());
    let mut fact = int(1);
    for k in 1..=i {
        power = pmul(&power, &log_l, i, vars);
        fact = fact * int(k as i64);
        for (m, c) in &power {
            let e = result.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c / &fact;
        }
    }
    result.retain(|m, c| !c.is_zero() && weight(m) == i);
    result
}

/// L_i as a combination of labels in dimension n, with p_n = e² and p_k = 0 for k > n.
pub fn lclass(i: usize, n: u32) -> Vec<(LabelMonomial, crate::chi::Rational)> {
    let mut out: BTreeMap<LabelMonomial, crate::chi::Rational> = BTreeMap::new();
    'terms: for (m, c) in lclass_pontryagin(i) {
        let mut label = LabelMonomial::one();
        for (k, &ex) in m.iter().enumerate() {
            if ex == 0 {
                continue;
            }
            let idx = k + 1;
            if idx > n as usize {
                continue 'terms;
            }
            let f = if idx == n as usize { LabelMonomial::e_pow(2 * ex) } else { LabelMonomial::p_pow(idx, ex) };
            label = label.mul(&f);
        }
        let e = out.entry(label).or_insert_with(num_traits::Zero::zero);
        *e += c;
    }
    out.into_iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).collect()
}

/// The vector Σ c·κ_{c-monomial} of 0-valent vertices spanning the L-class relation.
pub fn lclass_kappa(i: usize, n: u32, flavor: Flavor) -> GraphVector {
    let mut v = GraphVector::zero(n, flavor, vec![]);
    for (label, c) in lclass(i, n) {
        let mut d = Draft::new(n, flavor, vec![]);
        d.add_vertex(label, 0);
        let g = d.to_graph();
        let w = apply_scalar_rules(&g, &LabelMonomial::one());
        v.add_assign_scaled(&w, &ChiScalar::from_rational(c)).expect("same legs");
    }
    v
}
