//! Comparison maps between flavors: blue to red conversion, label projection,
//! augmentation of the external label, and pushforward of a label.

use crate::chi::ChiScalar;
use crate::error::{Error, Result};
use crate::graph::{Draft, DraftVertex, Flavor, MarkedGraph};
use crate::label::LabelMonomial;
use crate::rewrite::apply_scalar_rules;
use crate::vector::GraphVector;

fn red_partner(blue: Flavor) -> Option<Flavor> {
    match blue {
        Flavor::Theta => Some(Flavor::ThetaPointed),
        Flavor::Closed => Some(Flavor::Pointed),
        _ => None,
    }
}

/// Expand one graph vertex by vertex: every half-edge either stays at its vertex or moves
/// to a new univalent e-vertex with coefficient −1/χ. The new vertices precede the vertex
/// they split from, with the Koszul sign of moving their half-edges to the front.
fn convert_graph(g: &MarkedGraph, target: Flavor, c: &ChiScalar, out: &mut GraphVector) {
    let base = Draft::from_graph(g);
    let n = g.n();
    let minus_inv_chi = -ChiScalar::chi_pow(-1);
    let mut partial: Vec<(Vec<DraftVertex>, ChiScalar)> = vec![(Vec::new(), c.clone())];
    for v in &base.verts {
        let k = v.halfs.len();
        let mut next = Vec::with_capacity(partial.len() << k);
        for (verts, coeff) in &partial {
            for mask in 0u32..(1 << k) {
                let mut vs = verts.clone();
                let mut cf = coeff.clone();
                let mut crossings = 0;
                for i in (0..k).filter(|&i| mask & (1 << i) == 0) {
                    vs.push(DraftVertex { label: LabelMonomial::e_pow(1), halfs: vec![v.halfs[i]] });
                    cf = &cf * &minus_inv_chi;
                    crossings += (0..i).filter(|&j| mask & (1 << j) != 0).count();
                }
                let kept: Vec<u32> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| v.halfs[i]).collect();
                vs.push(DraftVertex { label: v.label.clone(), halfs: kept });
                if n % 2 == 1 && crossings % 2 == 1 {
                    cf = -cf;
                }
                next.push((vs, cf));
            }
        }
        partial = next;
    }
    for (verts, coeff) in partial {
        let mut d = base.clone();
        d.flavor = target;
        d.verts = verts;
        let g = d.to_graph();
        for (t, c2) in apply_scalar_rules(&g, &LabelMonomial::one()).terms() {
            out.add_canonical(t.clone(), &(&coeff * c2));
        }
    }
}

/// The conversion from a blue flavor (theta, closed) to its red partner (theta_pointed, pointed).
pub fn blue_to_red(v: &GraphVector, target: Flavor) -> Result<GraphVector> {
    if red_partner(v.flavor()) != Some(target) {
        return Err(Error::FlavorMismatch(format!("cannot convert {} to {}", v.flavor(), target)));
    }
    let mut out = GraphVector::zero(v.n(), target, v.legs().to_vec());
    for (t, c) in v.terms() {
        convert_graph(&t.graph, target, c, &mut out);
    }
    Ok(out)
}

/// Projection of full labels onto connective ones (pointed → theta_pointed, closed → theta).
pub fn project_labels(v: &GraphVector) -> Result<GraphVector> {
    let target = match v.flavor() {
        Flavor::Pointed => Flavor::ThetaPointed,
        Flavor::Closed => Flavor::Theta,
        f => return Err(Error::FlavorMismatch(format!("no label projection out of {f}"))),
    };
    let n = v.n();
    let mut out = GraphVector::zero(n, target, v.legs().to_vec());
    for (t, c) in v.terms() {
        let keep = t.graph.labels().iter().all(|l| l.is_connective(n)) && t.external.is_connective(n);
        if keep {
            out.add_graph(&t.graph.with_flavor(target), &t.external, c);
        }
    }
    Ok(out)
}

/// Augmentation of the external label (pointed flavors → disc): terms with a nontrivial
/// external label, or with labels outside the disc label algebra, are killed.
pub fn augment_external(v: &GraphVector) -> Result<GraphVector> {
    if !v.flavor().is_pointed() {
        return Err(Error::FlavorMismatch(format!("no augmentation out of {}", v.flavor())));
    }
    let n = v.n();
    let mut out = GraphVector::zero(n, Flavor::Disc, v.legs().to_vec());
    for (t, c) in v.terms() {
        let keep = t.external.is_one() && t.graph.labels().iter().all(|l| Flavor::Disc.admits_label(n, l));
        if keep {
            out.add_graph(&t.graph.with_flavor(Flavor::Disc), &LabelMonomial::one(), c);
        }
    }
    Ok(out)
}

/// The graph with a single 0-valent vertex labelled c, after the scalar rules.
pub fn pushforward(n: u32, c: &LabelMonomial, target: Flavor) -> Result<GraphVector> {
    if !target.is_blue() {
        return Err(Error::FlavorMismatch(format!("pushforward lands in theta or closed, not {target}")));
    }
    if !target.admits_label(n, c) {
        return Err(Error::Precondition(format!("label {c} is not in the {target} label algebra")));
    }
    let mut d = Draft::new(n, target, vec![]);
    d.add_vertex(c.clone(), 0);
    Ok(apply_scalar_rules(&d.to_graph(), &LabelMonomial::one()))
}
