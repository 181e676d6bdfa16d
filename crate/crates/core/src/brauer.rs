//! Signed and unsigned Brauer categories and their action on graph vectors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::chi::ChiScalar;
use crate::error::{Error, Result};
use crate::graph::{Draft, End, LegName};
use crate::label::LabelMonomial;
use crate::rewrite::contract_legs;
use crate::vector::GraphVector;

/// A scaled basis morphism (f, m_S, m_T) from `source` to `target`.
///
/// `caps` is the matching on the source, `cups` the matching on the target. In the
/// signed variant a cap (a, b) is oriented from b to a and a cup (a, b) from a to b.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BrauerMorphism {
    pub signed: bool,
    pub source: Vec<LegName>,
    pub target: Vec<LegName>,
    #[serde(default)]
    pub bij: BTreeMap<LegName, LegName>,
    #[serde(default)]
    pub cups: Vec<(LegName, LegName)>,
    #[serde(default)]
    pub caps: Vec<(LegName, LegName)>,
    #[serde(default = "ChiScalar::one")]
    pub coeff: ChiScalar,
}

impl BrauerMorphism {
    /// Validate and normalize: sorted leg lists, pairs ordered (min, max) and sorted.
    pub fn new(
        signed: bool,
        source: Vec<LegName>,
        target: Vec<LegName>,
        bij: BTreeMap<LegName, LegName>,
        caps: Vec<(LegName, LegName)>,
        cups: Vec<(LegName, LegName)>,
        coeff: ChiScalar,
    ) -> Result<Self> {
        let m = BrauerMorphism { signed, source, target, bij, cups, caps, coeff };
        m.normalized()
    }

    pub fn identity(signed: bool, legs: &[LegName]) -> Self {
        let bij = legs.iter().map(|l| (l.clone(), l.clone())).collect();
        BrauerMorphism::new(signed, legs.to_vec(), legs.to_vec(), bij, vec![], vec![], ChiScalar::one())
            .expect("identity is valid")
    }

    pub fn normalized(mut self) -> Result<Self> {
        fn covers(all: &[LegName], single: &BTreeSet<&LegName>, pairs: &[(LegName, LegName)]) -> bool {
            let mut seen: BTreeSet<&LegName> = single.clone();
            for (a, b) in pairs {
                if !seen.insert(a) || !seen.insert(b) {
                    return false;
                }
            }
            let all_set: BTreeSet<&LegName> = all.iter().collect();
            all_set.len() == all.len() && seen == all_set
        }
        let dom: BTreeSet<&LegName> = self.bij.keys().collect();
        let img: BTreeSet<&LegName> = self.bij.values().collect();
        if img.len() != dom.len() {
            return Err(Error::Precondition("leg map is not injective".into()));
        }
        if !covers(&self.source, &dom, &self.caps) {
            return Err(Error::LegMismatch("caps and map do not partition the source".into()));
        }
        if !covers(&self.target, &img, &self.cups) {
            return Err(Error::LegMismatch("cups and map do not partition the target".into()));
        }
        self.source.sort();
        self.target.sort();
        let mut sign = 1i64;
        for p in self.caps.iter_mut().chain(self.cups.iter_mut()) {
            if p.1 < p.0 {
                std::mem::swap(&mut p.0, &mut p.1);
                if self.signed {
                    sign = -sign;
                }
            }
        }
        self.caps.sort();
        self.cups.sort();
        self.coeff = self.coeff.scale(&crate::chi::int(sign));
        Ok(self)
    }

    /// Downward morphisms create no new pairs.
    pub fn is_downward(&self) -> bool {
        self.cups.is_empty()
    }

    /// g ∘ self.
    pub fn then(&self, g: &BrauerMorphism) -> Result<BrauerMorphism> {
        compose(g, self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Layer {
    S,
    T,
    U,
}

type Node = (Layer, LegName);

/// One arc of the glued 1-manifold. `arrow` is Some(head) for matching arcs.
#[derive(Clone, Debug)]
struct Arc {
    ends: [Node; 2],
    arrow: Option<Node>,
}

/// Composite g ∘ f, with closed components replaced by χ−2 (unsigned) or −(χ−2) (signed).
pub fn compose(g: &BrauerMorphism, f: &BrauerMorphism) -> Result<BrauerMorphism> {
    if f.signed != g.signed {
        return Err(Error::Precondition("mixing signed and unsigned morphisms".into()));
    }
    let ft: BTreeSet<_> = f.target.iter().collect();
    let gs: BTreeSet<_> = g.source.iter().collect();
    if ft != gs {
        return Err(Error::LegMismatch("target of the first morphism is not the source of the second".into()));
    }
    let mut arcs: Vec<Arc> = Vec::new();
    let node = |l: Layer, n: &LegName| (l, n.clone());
    for (s, t) in &f.bij {
        arcs.push(Arc { ends: [node(Layer::S, s), node(Layer::T, t)], arrow: None });
    }
    for (a, b) in &f.caps {
        arcs.push(Arc { ends: [node(Layer::S, a), node(Layer::S, b)], arrow: Some(node(Layer::S, a)) });
    }
    for (a, b) in &f.cups {
        arcs.push(Arc { ends: [node(Layer::T, a), node(Layer::T, b)], arrow: Some(node(Layer::T, b)) });
    }
    for (t, u) in &g.bij {
        arcs.push(Arc { ends: [node(Layer::T, t), node(Layer::U, u)], arrow: None });
    }
    for (a, b) in &g.caps {
        arcs.push(Arc { ends: [node(Layer::T, a), node(Layer::T, b)], arrow: Some(node(Layer::T, a)) });
    }
    for (a, b) in &g.cups {
        arcs.push(Arc { ends: [node(Layer::U, a), node(Layer::U, b)], arrow: Some(node(Layer::U, b)) });
    }
    let mut at: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
    for (i, a) in arcs.iter().enumerate() {
        for e in &a.ends {
            at.entry(e.clone()).or_default().push(i);
        }
    }
    let mut used = vec![false; arcs.len()];
    // Walk from `start` along arc `first`; returns the end node and the number of
    // matching arcs traversed against their arrow.
    let walk = |start: &Node, first: usize, used: &mut Vec<bool>| -> (Node, usize) {
        let mut cur = start.clone();
        let mut arc = first;
        let mut against = 0;
        loop {
            used[arc] = true;
            let a = &arcs[arc];
            let next = if a.ends[0] == cur { a.ends[1].clone() } else { a.ends[0].clone() };
            if let Some(head) = &a.arrow {
                if *head != next {
                    against += 1;
                }
            }
            cur = next;
            if cur.0 != Layer::T {
                return (cur, against);
            }
            match at[&cur].iter().find(|&&i| !used[i]) {
                Some(&i) => arc = i,
                None => return (cur, against),
            }
        }
    };
    let mut bij = BTreeMap::new();
    let mut caps = Vec::new();
    let mut cups = Vec::new();
    let mut sign = 1i64;
    let endpoints: Vec<Node> = at.keys().filter(|n| n.0 != Layer::T).cloned().collect();
    for start in endpoints {
        let first = at[&start][0];
        if used[first] {
            continue;
        }
        let (end, against) = walk(&start, first, &mut used);
        if f.signed && against % 2 == 1 {
            sign = -sign;
        }
        match (start.0, end.0) {
            (Layer::S, Layer::S) => caps.push((end.1, start.1)),
            (Layer::U, Layer::U) => cups.push((start.1, end.1)),
            (Layer::S, Layer::U) => {
                bij.insert(start.1, end.1);
            }
            (Layer::U, Layer::S) => {
                bij.insert(end.1, start.1);
            }
            _ => unreachable!("paths end outside the middle layer"),
        }
    }
    let mut coeff = &f.coeff * &g.coeff;
    let circle = if f.signed { -(ChiScalar::chi_minus(2)) } else { ChiScalar::chi_minus(2) };
    for i in 0..arcs.len() {
        if used[i] {
            continue;
        }
        let start = arcs[i].ends[0].clone();
        let (_, against) = walk(&start, i, &mut used);
        if f.signed && against % 2 == 1 {
            sign = -sign;
        }
        coeff = &coeff * &circle;
    }
    BrauerMorphism::new(
        f.signed,
        f.source.clone(),
        g.target.clone(),
        bij,
        caps,
        cups,
        coeff.scale(&crate::chi::int(sign)),
    )
}

/// The vector with a single strand joining legs a and b.
pub fn strand(n: u32, flavor: crate::graph::Flavor, a: &LegName, b: &LegName) -> GraphVector {
    let mut legs = vec![a.clone(), b.clone()];
    legs.sort();
    let ia = legs.iter().position(|l| l == a).unwrap() as u32;
    let ib = 1 - ia;
    let mut d = Draft::new(n, flavor, legs.clone());
    d.pairs.push((End::L(ia), End::L(ib)));
    let mut v = GraphVector::zero(n, flavor, legs);
    v.add_draft(d, &LabelMonomial::one(), &ChiScalar::one());
    v
}

/// Apply a morphism: contract caps, rename along the map, then adjoin a strand per cup.
pub fn act(m: &BrauerMorphism, v: &GraphVector) -> Result<GraphVector> {
    let src: BTreeSet<_> = m.source.iter().collect();
    let have: BTreeSet<_> = v.legs().iter().collect();
    if src != have {
        return Err(Error::LegMismatch("morphism source does not match the vector's legs".into()));
    }
    if m.signed != (v.n() % 2 == 1) {
        return Err(Error::Precondition("signed morphisms act in odd n, unsigned in even n".into()));
    }
    let mut w = v.clone();
    for (a, b) in &m.caps {
        w = contract_legs(&w, a, b)?;
    }
    w = w.relabel(&m.bij)?;
    for (a, b) in &m.cups {
        w = w.product(&strand(v.n(), v.flavor(), a, b))?;
    }
    Ok(w.scale(&m.coeff))
}
