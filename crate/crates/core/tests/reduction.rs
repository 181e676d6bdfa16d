use kappa_calculus::chi::{int, Rational};
use kappa_calculus::graph::{End, Flavor, LegName, MarkedGraph};
use kappa_calculus::label::LabelMonomial;
use kappa_calculus::rewrite::{contract_legs, reduce, CorollaVector, LabeledPartition, Part};
use kappa_calculus::{ChiScalar, GraphVector};

fn x() -> ChiScalar {
    ChiScalar::chi()
}

fn c(k: i64) -> ChiScalar {
    ChiScalar::from_int(k)
}

fn sgn(n: u32) -> ChiScalar {
    c(if n % 2 == 0 { 1 } else { -1 })
}

fn legs(ks: &[u64]) -> Vec<LegName> {
    ks.iter().map(|&k| LegName::Num(k)).collect()
}

fn theta(n: u32, flavor: Flavor) -> MarkedGraph {
    MarkedGraph::new(
        n,
        flavor,
        vec![LabelMonomial::one(), LabelMonomial::one()],
        vec![0, 0, 0, 1, 1, 1],
        vec![],
        vec![(End::H(0), End::H(4)), (End::H(1), End::H(5)), (End::H(2), End::H(3))],
    )
    .unwrap()
}

fn e2(flavor: Flavor) -> LabeledPartition {
    let ext = flavor.is_pointed().then(LabelMonomial::one);
    LabeledPartition::new(vec![Part { legs: vec![], label: LabelMonomial::e_pow(2) }], ext)
}

fn single(n: u32, flavor: Flavor, p: LabeledPartition, coeff: ChiScalar) -> CorollaVector {
    let mut v = CorollaVector::zero(n, flavor, vec![]);
    v.add(p, &coeff);
    v
}

fn frac(a: ChiScalar, b: ChiScalar) -> ChiScalar {
    a.checked_div(&b).unwrap()
}

#[test]
fn theta_closed() {
    for n in [1, 2, 3] {
        let r = reduce(&GraphVector::from_graph(&theta(n, Flavor::Closed)));
        let want = &sgn(n) * &frac(x() - c(3), x());
        assert_eq!(r, single(n, Flavor::Closed, e2(Flavor::Closed), want), "n={n}");
    }
}

#[test]
fn double_loop_chain() {
    for n in [1, 2] {
        let k = GraphVector::corolla(n, Flavor::Closed, &legs(&[1, 2, 5, 6]), LabelMonomial::one());
        let k = contract_legs(&k, &LegName::Num(1), &LegName::Num(5)).unwrap();
        let k = contract_legs(&k, &LegName::Num(2), &LegName::Num(6)).unwrap();
        let r = reduce(&k);
        let xm2 = x() - c(2);
        let chi2 = ChiScalar::chi_pow(2);
        let want = &sgn(n) * &(frac(&xm2 * &xm2, chi2.clone()) + frac(&c(2) * &xm2, chi2));
        assert_eq!(r, single(n, Flavor::Closed, e2(Flavor::Closed), want), "n={n}");
    }
}

#[test]
fn loop_on_trivalent_corolla_vanishes() {
    for flavor in [Flavor::Theta, Flavor::Closed] {
        for n in [1, 2, 3] {
            let k = GraphVector::corolla(n, flavor, &legs(&[1, 2, 3]), LabelMonomial::one());
            let k = contract_legs(&k, &LegName::Num(1), &LegName::Num(2)).unwrap();
            assert!(reduce(&k).is_zero(), "{flavor} n={n}");
        }
    }
}

#[test]
fn bivalent_corolla_closes_to_chi_minus_two() {
    for flavor in Flavor::ALL {
        for n in [1, 2] {
            let k = GraphVector::corolla(n, flavor, &legs(&[1, 2]), LabelMonomial::one());
            let r = reduce(&contract_legs(&k, &LegName::Num(1), &LegName::Num(2)).unwrap());
            let mut want = CorollaVector::zero(n, flavor, vec![]);
            want.add(LabeledPartition::new(vec![], flavor.is_pointed().then(LabelMonomial::one)), &(x() - c(2)));
            assert_eq!(r, want, "{flavor} n={n}");
        }
    }
}

#[test]
fn euler_class_vertex_is_chi() {
    let r = reduce(&GraphVector::corolla(2, Flavor::Closed, &[], LabelMonomial::e_pow(1)));
    let mut want = CorollaVector::zero(2, Flavor::Closed, vec![]);
    want.add(LabeledPartition::new(vec![], None), &x());
    assert_eq!(r, want);
    let _: Rational = int(0);
}

fn lam(v: &GraphVector, i: u64, j: u64) -> GraphVector {
    contract_legs(v, &LegName::Num(i), &LegName::Num(j)).unwrap()
}

#[test]
fn third_term_chain() {
    for n in [1, 2] {
        let a = GraphVector::corolla(n, Flavor::Closed, &legs(&[1, 2]), LabelMonomial::e_pow(1));
        let b = GraphVector::corolla(n, Flavor::Closed, &legs(&[5, 6]), LabelMonomial::one());
        let v = lam(&lam(&a.product(&b).unwrap(), 2, 6), 1, 5);
        let r = reduce(&v.scale(&-ChiScalar::chi_pow(-1)));
        let want = &-sgn(n) * &frac(x() - c(1), ChiScalar::chi_pow(2));
        assert_eq!(r, single(n, Flavor::Closed, e2(Flavor::Closed), want), "n={n}");
    }
}

#[test]
fn theta_by_contracting_two_corollas() {
    for n in [1, 2, 3, 4] {
        let a = GraphVector::corolla(n, Flavor::Closed, &legs(&[1, 2, 3]), LabelMonomial::one());
        let b = GraphVector::corolla(n, Flavor::Closed, &legs(&[4, 5, 6]), LabelMonomial::one());
        let v = lam(&lam(&lam(&a.product(&b).unwrap(), 3, 4), 2, 6), 1, 5);
        let want = &sgn(n) * &frac(x() - c(3), x());
        assert_eq!(reduce(&v), single(n, Flavor::Closed, e2(Flavor::Closed), want), "n={n}");
    }
}

mod properties {
    use super::*;
    use kappa_calculus::random::{numbered_legs, random_graph, reorder, GraphParams};
    use kappa_calculus::rewrite::{reduce_to_corollas, Strategy};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn confluence_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..40 {
            for flavor in Flavor::ALL {
                for n in [1, 2] {
                    let k = rng.gen_range(0..=2);
                    let g = random_graph(&mut rng, n, flavor, &numbered_legs(k), GraphParams::default());
                    let v = GraphVector::from_graph(&g);
                    let base = reduce(&v);
                    for s in 0..5 {
                        let r = reduce_to_corollas(&v, Strategy::Seeded(round * 100 + s));
                        assert_eq!(r, base, "{flavor} n={n} graph={g:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reordering_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            for flavor in Flavor::ALL {
                let n = rng.gen_range(1..=2);
                let g = random_graph(&mut rng, n, flavor, &numbered_legs(2), GraphParams::default());
                let (h, s) = reorder(&mut rng, &g);
                let a = reduce(&GraphVector::from_graph(&g));
                let b = reduce(&GraphVector::from_graph(&h));
                assert_eq!(b, a.scale(&c(s as i64)));
            }
        }
    }
}
