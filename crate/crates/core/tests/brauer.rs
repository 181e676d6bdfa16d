use std::collections::BTreeMap;

use kappa_calculus::brauer::{act, compose, BrauerMorphism};
use kappa_calculus::graph::{Flavor, LegName};
use kappa_calculus::label::LabelMonomial;
use kappa_calculus::random::{random_morphism, random_vector, GraphParams};
use kappa_calculus::rewrite::reduce;
use kappa_calculus::{ChiScalar, GraphVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(prefix: &str, k: usize) -> Vec<LegName> {
    (0..k).map(|i| LegName::Sym(format!("{prefix}{i}"))).collect()
}

fn l(k: u64) -> LegName {
    LegName::Num(k)
}

#[test]
fn snake_acts_as_identity() {
    for n in [1, 2] {
        let signed = n % 2 == 1;
        for flavor in Flavor::ALL {
            let v = GraphVector::corolla(n, flavor, &[l(1), l(2), l(3)], LabelMonomial::e_pow(1));
            // cup on (4, 5), then cap (3, 4): leg 3 is carried to 5.
            let mut bij = BTreeMap::new();
            bij.insert(l(1), l(1));
            bij.insert(l(2), l(2));
            let cupm = BrauerMorphism::new(
                signed,
                vec![l(1), l(2), l(3)],
                vec![l(1), l(2), l(3), l(4), l(5)],
                [(l(1), l(1)), (l(2), l(2)), (l(3), l(3))].into_iter().collect(),
                vec![],
                vec![(l(4), l(5))],
                ChiScalar::one(),
            )
            .unwrap();
            let capm = BrauerMorphism::new(
                signed,
                vec![l(1), l(2), l(3), l(4), l(5)],
                vec![l(1), l(2), l(5)],
                [(l(1), l(1)), (l(2), l(2)), (l(5), l(5))].into_iter().collect(),
                vec![(l(3), l(4))],
                vec![],
                ChiScalar::one(),
            )
            .unwrap();
            let composite = compose(&capm, &cupm).unwrap();
            let mut rename = bij.clone();
            rename.insert(l(3), l(5));
            let sign = if signed { -ChiScalar::one() } else { ChiScalar::one() };
            let expect = BrauerMorphism::new(signed, vec![l(1), l(2), l(3)], vec![l(1), l(2), l(5)], rename.clone(), vec![], vec![], sign).unwrap();
            assert_eq!(composite, expect);
            let two_step = act(&capm, &act(&cupm, &v).unwrap()).unwrap();
            assert_eq!(reduce(&two_step), reduce(&act(&composite, &v).unwrap()), "{flavor} n={n}");
        }
    }
}

#[test]
fn functoriality() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for round in 0..60 {
        let n = 1 + round % 2;
        let signed = n % 2 == 1;
        let flavor = Flavor::ALL[rng.gen_range(0..5)];
        let k = rng.gen_range(0..=4);
        let s = names("s", k);
        let v = random_vector(&mut rng, n, flavor, &s, GraphParams { max_vertices: 3, max_edges: 2, max_exp: 1 }, 2);
        let f = random_morphism(&mut rng, signed, &s, &names("t", 12), 1);
        let g = random_morphism(&mut rng, signed, &f.target, &names("u", 12), 1);
        let gf = compose(&g, &f).unwrap();
        let lhs = reduce(&act(&gf, &v).unwrap());
        let rhs = reduce(&act(&g, &act(&f, &v).unwrap()).unwrap());
        if !lhs.is_zero() {
            nonzero += 1;
        }
        assert_eq!(lhs, rhs, "round {round}: f={f:?} g={g:?}");
    }
    assert!(nonzero > 10, "{nonzero}");
}
