//! Corolla bases, Hilbert series and independence checks.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chi::ChiScalar;
use crate::graph::{Flavor, LegName};
use crate::label::{first_connective_index, monomials_of_degree, LabelMonomial};
use crate::random::{random_graph, GraphParams};
use crate::rewrite::{apply_scalar_rules, reduce, CorollaVector, LabeledPartition, Part};
use crate::vector::GraphVector;

fn labels_of_degree(n: u32, flavor: Flavor, degree: i64) -> Vec<LabelMonomial> {
    let lo = if flavor.full_labels() { 1 } else { first_connective_index(n) };
    let hi = n.saturating_sub(1) as usize;
    monomials_of_degree(n, degree, lo, hi).into_iter().filter(|l| flavor.admits_label(n, l)).collect()
}

/// Whether the single corolla survives the scalar rules unchanged.
fn admissible(n: u32, flavor: Flavor, part: &Part) -> bool {
    let p = LabeledPartition::new(vec![part.clone()], flavor.is_pointed().then(LabelMonomial::one));
    let (g, _) = p.to_graph(n, flavor);
    let v = apply_scalar_rules(&g, &LabelMonomial::one());
    v.len() == 1 && v.terms().keys().next().is_some_and(|t| t.graph == g)
}

fn set_partitions(items: &[LegName]) -> Vec<Vec<Vec<LegName>>> {
    let Some((first, rest)) = items.split_first() else { return vec![vec![]] };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first.clone());
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first.clone()]);
        out.push(q);
    }
    out
}

/// All admissible labelled partitions of `legs` of total degree `degree`, sorted.
pub fn corolla_basis(legs: &[LegName], flavor: Flavor, n: u32, degree: i64) -> Vec<LabeledPartition> {
    let mut found = BTreeSet::new();
    if degree < 0 {
        return vec![];
    }
    let ni = n as i64;
    // 0-leg parts by degree
    let free_parts: Vec<Vec<Part>> = (0..=degree)
        .map(|d| {
            labels_of_degree(n, flavor, d + 2 * ni)
                .into_iter()
                .map(|label| Part { legs: vec![], label })
                .filter(|p| admissible(n, flavor, p))
                .collect()
        })
        .collect();
    let externals: Vec<Vec<LabelMonomial>> =
        (0..=degree).map(|d| if flavor.is_pointed() { labels_of_degree(n, flavor, d) } else { vec![] }).collect();

    for blocks in set_partitions(legs) {
        let mut acc = Vec::new();
        assign_blocks(n, flavor, &blocks, 0, degree, &mut acc, &mut |parts, left| {
            let ext_options: Vec<(Option<LabelMonomial>, i64)> = if flavor.is_pointed() {
                (0..=left).flat_map(|d| externals[d as usize].iter().map(move |e| (Some(e.clone()), d))).collect()
            } else {
                vec![(None, 0)]
            };
            for (ext, ed) in ext_options {
                let mut free = Vec::new();
                free_multisets(&free_parts, left - ed, 1, 0, &mut free, &mut |fs| {
                    let mut all = parts.to_vec();
                    all.extend(fs.iter().cloned());
                    found.insert(LabeledPartition::new(all, ext.clone()));
                });
            }
        });
    }
    found.into_iter().collect()
}

fn assign_blocks(
    n: u32,
    flavor: Flavor,
    blocks: &[Vec<LegName>],
    i: usize,
    left: i64,
    acc: &mut Vec<Part>,
    f: &mut dyn FnMut(&[Part], i64),
) {
    if i == blocks.len() {
        f(acc, left);
        return;
    }
    let k = blocks[i].len() as i64;
    let base = n as i64 * (k - 2);
    for ld in 0..=(left - base) {
        for label in labels_of_degree(n, flavor, ld) {
            let part = Part { legs: blocks[i].clone(), label };
            if !admissible(n, flavor, &part) {
                continue;
            }
            acc.push(part);
            assign_blocks(n, flavor, blocks, i + 1, left - base - ld, acc, f);
            acc.pop();
        }
    }
}

/// Multisets of 0-leg parts with total degree `left`, parts taken in non-decreasing
/// (degree, index) order.
fn free_multisets(
    by_degree: &[Vec<Part>],
    left: i64,
    min_deg: i64,
    min_idx: usize,
    acc: &mut Vec<Part>,
    f: &mut dyn FnMut(&[Part]),
) {
    if left == 0 {
        f(acc);
        return;
    }
    for d in min_deg..=left {
        let start = if d == min_deg { min_idx } else { 0 };
        for (j, p) in by_degree[d as usize].iter().enumerate().skip(start) {
            acc.push(p.clone());
            free_multisets(by_degree, left - d, d, j, acc, f);
            acc.pop();
        }
    }
}

/// Dimensions of the corolla basis with no legs (flavor closed, n = 1) in degrees 0..=max_degree.
pub fn hilbert_series(max_degree: usize) -> Vec<usize> {
    (0..=max_degree as i64).map(|d| corolla_basis(&[], Flavor::Closed, 1, d).len()).collect()
}

/// Checks that every basis element is a fixed point of reduction and that random vectors of
/// the given degree reduce into the span of the basis, consistently with linearity.
pub fn independence_check(legs: &[LegName], flavor: Flavor, n: u32, degree: i64, samples: usize, seed: u64) -> bool {
    let basis = corolla_basis(legs, flavor, n, degree);
    let known: BTreeSet<&LabeledPartition> = basis.iter().collect();
    for p in &basis {
        let mut single = CorollaVector::zero(n, flavor, legs.to_vec());
        single.add(p.clone(), &ChiScalar::one());
        if reduce(&single.to_graph_vector()) != single {
            return false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = GraphParams::default();
    let mut done = 0;
    let mut attempts = 0;
    let mut previous: Option<(GraphVector, CorollaVector)> = None;
    while done < samples && attempts < 200 * samples.max(1) {
        attempts += 1;
        let g = random_graph(&mut rng, n, flavor, legs, params);
        if g.degree() != degree {
            continue;
        }
        done += 1;
        let mut v = GraphVector::zero(n, flavor, legs.to_vec());
        v.add_graph(&g, &LabelMonomial::one(), &ChiScalar::one());
        let r = reduce(&v);
        if r.terms.keys().any(|p| !known.contains(p)) {
            return false;
        }
        // the normal form of v minus the graph vector of its normal form is zero
        let diff = v.sub(&r.to_graph_vector()).expect("same legs");
        if !reduce(&diff).is_zero() {
            return false;
        }
        if let Some((pv, pr)) = &previous {
            let sum = v.add(pv).expect("same legs");
            let mut expected = r.clone();
            for (p, c) in &pr.terms {
                expected.add(p.clone(), c);
            }
            if reduce(&sum) != expected {
                return false;
            }
        }
        previous = Some((v, r));
    }
    true
}
