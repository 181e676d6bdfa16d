//! Linear combinations of canonical marked graphs.

use std::collections::{BTreeMap, BTreeSet};

use crate::chi::ChiScalar;
use crate::error::{Error, Result};
use crate::graph::{Draft, End, Flavor, LegName, MarkedGraph};
use crate::label::LabelMonomial;

/// A canonical graph together with the external label (always 1 outside pointed flavors).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    pub graph: MarkedGraph,
    pub external: LabelMonomial,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphVector {
    n: u32,
    flavor: Flavor,
    legs: Vec<LegName>,
    terms: BTreeMap<Term, ChiScalar>,
}

impl GraphVector {
    /// The zero vector with the given (sorted) leg set.
    pub fn zero(n: u32, flavor: Flavor, mut legs: Vec<LegName>) -> Self {
        legs.sort();
        GraphVector { n, flavor, legs, terms: BTreeMap::new() }
    }

    /// The scalar multiple of the empty graph.
    pub fn scalar(n: u32, flavor: Flavor, c: ChiScalar) -> Self {
        let mut v = Self::zero(n, flavor, vec![]);
        v.add_graph(&MarkedGraph::empty(n, flavor), &LabelMonomial::one(), &c);
        v
    }

    pub fn from_graph(g: &MarkedGraph) -> Self {
        let mut v = Self::zero(g.n(), g.flavor(), g.legs().to_vec());
        v.add_graph(g, &LabelMonomial::one(), &ChiScalar::one());
        v
    }

    /// A single corolla with the given legs (in half-edge order) and label.
    pub fn corolla(n: u32, flavor: Flavor, legs: &[LegName], label: LabelMonomial) -> Self {
        let mut sorted = legs.to_vec();
        sorted.sort();
        let mut d = Draft::new(n, flavor, sorted.clone());
        let hs = d.add_vertex(label, legs.len());
        for (h, l) in hs.iter().zip(legs) {
            let j = sorted.binary_search(l).expect("distinct legs") as u32;
            d.pairs.push((End::H(*h), End::L(j)));
        }
        let mut v = Self::zero(n, flavor, sorted);
        v.add_draft(d, &LabelMonomial::one(), &ChiScalar::one());
        v
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn legs(&self) -> &[LegName] {
        &self.legs
    }

    pub fn terms(&self) -> &BTreeMap<Term, ChiScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, term: Term, c: ChiScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&term) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&term);
                }
            }
            None => {
                self.terms.insert(term, c);
            }
        }
    }

    /// Add c times a draft, expanding strands, sorting legs and canonicalizing.
    pub fn add_draft(&mut self, mut d: Draft, external: &LabelMonomial, c: &ChiScalar) {
        if c.is_zero() {
            return;
        }
        let s = d.expand_strands();
        d.sort_legs();
        debug_assert_eq!(d.legs, self.legs, "leg set mismatch");
        let (g, cs) = d.to_graph().canonicalize();
        if cs == 0 {
            return;
        }
        self.insert(Term { graph: g, external: external.clone() }, c.sign_mul(s * cs));
    }

    pub fn add_graph(&mut self, g: &MarkedGraph, external: &LabelMonomial, c: &ChiScalar) {
        self.add_draft(Draft::from_graph(g), external, c);
    }

    /// Insert a term already known to be canonical.
    pub fn add_canonical(&mut self, t: Term, c: &ChiScalar) {
        self.insert(t, c.clone());
    }

    pub fn check_compatible(&self, o: &GraphVector) -> Result<()> {
        if self.n != o.n || self.flavor != o.flavor {
            return Err(Error::FlavorMismatch(format!(
                "({}, n={}) vs ({}, n={})",
                self.flavor, self.n, o.flavor, o.n
            )));
        }
        if self.legs != o.legs {
            return Err(Error::LegMismatch("vectors have different leg sets".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &GraphVector) -> Result<GraphVector> {
        self.check_compatible(o)?;
        let mut r = self.clone();
        for (t, c) in &o.terms {
            r.insert(t.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &GraphVector) -> Result<GraphVector> {
        self.add(&o.scale(&-ChiScalar::one()))
    }

    pub fn add_assign_scaled(&mut self, o: &GraphVector, c: &ChiScalar) -> Result<()> {
        self.check_compatible(o)?;
        for (t, x) in &o.terms {
            self.insert(t.clone(), x * c);
        }
        Ok(())
    }

    pub fn scale(&self, c: &ChiScalar) -> GraphVector {
        let mut r = Self::zero(self.n, self.flavor, self.legs.clone());
        if c.is_zero() {
            return r;
        }
        for (t, x) in &self.terms {
            r.terms.insert(t.clone(), x * c);
        }
        r
    }

    /// Disjoint union, with the half-edges of `self` first.
    pub fn product(&self, o: &GraphVector) -> Result<GraphVector> {
        if self.n != o.n || self.flavor != o.flavor {
            return Err(Error::FlavorMismatch("product of vectors of different flavors".into()));
        }
        let shared: BTreeSet<_> = self.legs.iter().collect();
        if o.legs.iter().any(|l| shared.contains(l)) {
            return Err(Error::LegMismatch("product of vectors sharing a leg".into()));
        }
        let mut legs = self.legs.clone();
        legs.extend(o.legs.iter().cloned());
        let mut r = Self::zero(self.n, self.flavor, legs);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &o.terms {
                let d = disjoint_union(&ta.graph, &tb.graph);
                r.add_draft(d, &ta.external.mul(&tb.external), &(ca * cb));
            }
        }
        Ok(r)
    }

    /// Rename legs by a bijection. Each leg keeps its partner, so a corolla picks up sign(σ)ⁿ
    /// when written back in sorted leg order.
    pub fn relabel(&self, map: &BTreeMap<LegName, LegName>) -> Result<GraphVector> {
        let new_legs: Vec<LegName> = self
            .legs
            .iter()
            .map(|l| map.get(l).cloned().ok_or_else(|| Error::LegMismatch(format!("leg {l} not mapped"))))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<_> = new_legs.iter().collect();
        if distinct.len() != new_legs.len() {
            return Err(Error::LegMismatch("relabelling is not injective".into()));
        }
        let mut r = Self::zero(self.n, self.flavor, new_legs.clone());
        for (t, c) in &self.terms {
            let mut d = Draft::from_graph(&t.graph);
            d.legs = new_legs.clone();
            r.add_draft(d, &t.external, c);
        }
        Ok(r)
    }

    /// Relabel legs by a permutation of the leg set.
    pub fn permute_legs(&self, sigma: &BTreeMap<LegName, LegName>) -> Result<GraphVector> {
        let img: BTreeSet<_> = sigma.values().collect();
        let dom: BTreeSet<_> = sigma.keys().collect();
        let legs: BTreeSet<_> = self.legs.iter().collect();
        if img != legs || dom != legs {
            return Err(Error::LegMismatch("not a permutation of the leg set".into()));
        }
        self.relabel(sigma)
    }

    /// Common degree of all terms, or None for the zero vector.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next().map(|t| t.graph.degree() + t.external.degree(self.n))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|t| t.graph.degree() + t.external.degree(self.n));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn with_flavor(&self, flavor: Flavor) -> GraphVector {
        let mut r = Self::zero(self.n, flavor, self.legs.clone());
        for (t, c) in &self.terms {
            r.add_graph(&t.graph.with_flavor(flavor), &t.external, c);
        }
        r
    }

    pub fn map_coefficients(&self, f: impl Fn(&ChiScalar) -> ChiScalar) -> GraphVector {
        let mut r = Self::zero(self.n, self.flavor, self.legs.clone());
        for (t, c) in &self.terms {
            r.insert(t.clone(), f(c));
        }
        r
    }
}

/// Concatenate vertices, half-edges, legs and pairs.
pub fn disjoint_union(a: &MarkedGraph, b: &MarkedGraph) -> Draft {
    let mut d = Draft::from_graph(a);
    let hb = a.half_edge_count() as u32;
    let lb = a.legs().len() as u32;
    let db = Draft::from_graph(b);
    for v in db.verts {
        let halfs = v.halfs.iter().map(|h| h + hb).collect();
        d.verts.push(crate::graph::DraftVertex { label: v.label, halfs });
    }
    for _ in 0..b.half_edge_count() {
        d.fresh();
    }
    d.legs.extend(b.legs().iter().cloned());
    let shift = |e: End| match e {
        End::H(h) => End::H(h + hb),
        End::L(j) => End::L(j + lb),
    };
    for &(x, y) in b.matching() {
        d.pairs.push((shift(x), shift(y)));
    }
    d
}
