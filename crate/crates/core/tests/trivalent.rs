use kappa_calculus::graph::{Flavor, LegName};
use kappa_calculus::label::LabelMonomial;
use kappa_calculus::rewrite::{reduce, LabeledPartition, Part};
use kappa_calculus::trivalent::{
    enumerate_trivalent, ih_defect, is_generic_ih_site, is_trivalent, phi, rank_undec_mod_ih, trivalize_corolla, IhShape,
    Port, UndecoratedGraph,
};
use kappa_calculus::{ChiScalar, GraphVector, Poly};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(s: &str) -> LegName {
    LegName::Sym(s.into())
}

fn h_graph() -> UndecoratedGraph {
    use Port::*;
    UndecoratedGraph::new(
        vec![sym("a"), sym("b"), sym("c"), sym("d")],
        2,
        vec![(V(0), L(sym("a"))), (V(0), L(sym("c"))), (V(0), V(1)), (V(1), L(sym("b"))), (V(1), L(sym("d")))],
    )
    .unwrap()
}

#[test]
fn phi_of_theta_reduces_to_e_squared() {
    let t = UndecoratedGraph::theta();
    let r = reduce(&phi(&t));
    let p = LabeledPartition::new(vec![Part { legs: vec![], label: LabelMonomial::e_pow(2) }], None);
    let expected = (ChiScalar::chi() - ChiScalar::from_int(3)).checked_div(&ChiScalar::chi()).unwrap();
    assert_eq!(r.terms.len(), 1);
    assert_eq!(r.terms[&p], expected);
}

#[test]
fn phi_ignores_vertex_and_half_edge_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut graphs = enumerate_trivalent(&[], 4);
    graphs.extend(enumerate_trivalent(&[LegName::Num(1), LegName::Num(2)], 2));
    graphs.push(h_graph());
    for g in graphs {
        let base = phi(&g);
        for _ in 0..6 {
            let mut vo: Vec<usize> = (0..g.vertex_count()).collect();
            vo.shuffle(&mut rng);
            let ho: Vec<[usize; 3]> = (0..g.vertex_count())
                .map(|_| {
                    let mut p = [0, 1, 2];
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            let legs = g.legs().to_vec();
            assert_eq!(g.phi_with_choice(&vo, &ho, &legs).unwrap(), base);
        }
    }
}

#[test]
fn phi_leg_order_acts_by_sign() {
    let g = h_graph();
    let order = vec![sym("b"), sym("a"), sym("c"), sym("d")];
    let swapped = g.phi(&order).unwrap();
    assert_eq!(swapped, phi(&g).scale(&ChiScalar::from_int(-1)));
}

#[test]
fn ih_relation_is_sound_on_h() {
    let g = h_graph();
    for shape in [IhShape::Straight, IhShape::Crossed] {
        let d = ih_defect(&g, 2, shape).unwrap();
        assert!(reduce(&d).is_zero(), "{shape:?}");
    }
}

#[test]
fn ih_relation_is_sound_inside_closed_graphs() {
    for v in [4, 6] {
        for g in enumerate_trivalent(&[], v) {
            for k in 0..g.edges().len() {
                if !is_generic_ih_site(&g, k) {
                    continue;
                }
                for shape in [IhShape::Straight, IhShape::Crossed] {
                    assert!(reduce(&ih_defect(&g, k, shape).unwrap()).is_zero());
                }
            }
        }
    }
}

#[test]
fn cubic_graph_counts() {
    // loopless cubic multigraphs, connected or not
    assert_eq!(enumerate_trivalent(&[], 2).len(), 1);
    assert_eq!(enumerate_trivalent(&[], 4).len(), 3);
}

#[test]
fn ih_quotient_matches_partitions() {
    assert_eq!(rank_undec_mod_ih(&[], 2), 1);
    assert_eq!(rank_undec_mod_ih(&[], 4), 2);
    assert_eq!(rank_undec_mod_ih(&[], 6), 3);
    assert_eq!(rank_undec_mod_ih(&[], 8), 5);
}

#[test]
fn ih_relation_holds_at_degenerate_sites() {
    for v in [2, 4] {
        for g in enumerate_trivalent(&[], v) {
            for k in 0..g.edges().len() {
                if is_generic_ih_site(&g, k) {
                    continue;
                }
                for shape in [IhShape::Straight, IhShape::Crossed] {
                    assert!(reduce(&ih_defect(&g, k, shape).unwrap()).is_zero());
                }
            }
        }
    }
}

#[test]
fn trivalize_round_trips() {
    let allowed: Vec<Poly> = [0, 2, 3, 4].iter().map(|&k| Poly::linear(kappa_calculus::chi::int(k))).collect();
    for (a, b) in [(0, 2), (2, 0), (3, 0), (2, 1), (3, 1), (4, 0), (5, 0), (1, 2), (0, 3), (6, 0), (4, 1)] {
        let legs: Vec<LegName> = (1..=a as u64).map(LegName::Num).collect();
        let corolla = GraphVector::corolla(1, Flavor::Closed, &legs, LabelMonomial::e_pow(b));
        let t = trivalize_corolla(a, b).unwrap();
        assert!(is_trivalent(&t), "({a}, {b})");
        assert_eq!(reduce(&t), reduce(&corolla), "({a}, {b})");
        for (_, c) in t.terms() {
            for f in c.denominator_support() {
                assert!(allowed.contains(&f), "({a}, {b}) has denominator factor {f:?}");
            }
        }
    }
}
