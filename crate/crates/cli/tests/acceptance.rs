use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use kappa_calculus::brauer::{act, compose, BrauerMorphism};
use kappa_calculus::chi::{int, Poly};
use kappa_calculus::graph::{permutation_parity, End, Flavor, LegName, MarkedGraph};
use kappa_calculus::random::{numbered_legs, random_graph, random_morphism, random_vector, reorder, GraphParams};
use kappa_calculus::rewrite::{contract_legs, reduce, reduce_to_corollas, CorollaVector, LabeledPartition, Part, Strategy};
use kappa_calculus::trivalent::{
    enumerate_trivalent, ih_defect, is_generic_ih_site, is_trivalent, phi, rank_undec_mod_ih, IhShape, Port, Trivalizer,
    UndecoratedGraph,
};
use kappa_calculus::{blue_to_red, hilbert_series, ChiScalar, GraphVector, LabelMonomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONFLUENCE_BUDGET: Duration = Duration::from_secs(300);
const THETA_BUDGET: Duration = Duration::from_secs(1);
const THETA_EXPR: &str = "lam(1,5) lam(2,6) lam(3,4) (kbar(1,2,3) * kbar(4,5,6))";

type Outcome = Result<String, String>;

fn x() -> ChiScalar {
    ChiScalar::chi()
}

fn c(k: i64) -> ChiScalar {
    ChiScalar::from_int(k)
}

fn frac(a: ChiScalar, b: ChiScalar) -> ChiScalar {
    a.checked_div(&b).unwrap()
}

fn sgn(n: u32) -> ChiScalar {
    c(if n % 2 == 0 { 1 } else { -1 })
}

fn l(k: u64) -> LegName {
    LegName::Num(k)
}

fn lam(v: &GraphVector, i: u64, j: u64) -> GraphVector {
    contract_legs(v, &l(i), &l(j)).unwrap()
}

fn e2_only(n: u32, coeff: ChiScalar) -> CorollaVector {
    let mut v = CorollaVector::zero(n, Flavor::Closed, vec![]);
    v.add(LabeledPartition::new(vec![Part { legs: vec![], label: LabelMonomial::e_pow(2) }], None), &coeff);
    v
}

fn marked_theta(n: u32) -> MarkedGraph {
    MarkedGraph::new(
        n,
        Flavor::Closed,
        vec![LabelMonomial::one(), LabelMonomial::one()],
        vec![0, 0, 0, 1, 1, 1],
        vec![],
        vec![(End::H(0), End::H(4)), (End::H(1), End::H(5)), (End::H(2), End::H(3))],
    )
    .unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn theta_value() -> Outcome {
    let start = Instant::now();
    for n in [1, 2] {
        let r = reduce(&GraphVector::from_graph(&marked_theta(n)));
        ensure(r == e2_only(n, &sgn(n) * &frac(x() - c(3), x())), format!("n={n}: got {r:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < THETA_BUDGET, format!("took {t:?}"))?;
    Ok(format!("n=1,2 in {t:?}"))
}

fn intermediate_terms() -> Outcome {
    for n in [1, 2] {
        let k = GraphVector::corolla(n, Flavor::Closed, &[l(1), l(2), l(5), l(6)], LabelMonomial::one());
        let r = reduce(&lam(&lam(&k, 1, 5), 2, 6));
        let xm2 = x() - c(2);
        let chi2 = ChiScalar::chi_pow(2);
        let want = &sgn(n) * &(frac(&xm2 * &xm2, chi2.clone()) + frac(&c(2) * &xm2, chi2.clone()));
        ensure(r == e2_only(n, want), format!("double loop n={n}"))?;

        let a = GraphVector::corolla(n, Flavor::Closed, &[l(1), l(2)], LabelMonomial::e_pow(1));
        let b = GraphVector::corolla(n, Flavor::Closed, &[l(5), l(6)], LabelMonomial::one());
        let v = lam(&lam(&a.product(&b).unwrap(), 2, 6), 1, 5).scale(&-ChiScalar::chi_pow(-1));
        let want = &-sgn(n) * &frac(x() - c(1), chi2);
        ensure(reduce(&v) == e2_only(n, want), format!("third term n={n}"))?;
    }
    Ok("both chains exact for n=1,2".into())
}

fn loop_vanishing() -> Outcome {
    for flavor in [Flavor::Theta, Flavor::Closed] {
        for n in [1, 2, 3] {
            let k = GraphVector::corolla(n, flavor, &numbered_legs(3), LabelMonomial::one());
            ensure(reduce(&lam(&k, 1, 2)).is_zero(), format!("{flavor} n={n}"))?;
        }
    }
    Ok("theta and closed, n=1..3".into())
}

fn confluence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for flavor in Flavor::ALL {
        for n in [1, 2] {
            for g_idx in 0..100u64 {
                let k = rng.gen_range(0..=2);
                let g = random_graph(&mut rng, n, flavor, &numbered_legs(k), GraphParams::default());
                let v = GraphVector::from_graph(&g);
                let base = reduce(&v);
                for s in 0..20 {
                    let r = reduce_to_corollas(&v, Strategy::Seeded(g_idx * 1000 + s));
                    ensure(r == base, format!("{flavor} n={n} graph {g:?} order {s}"))?;
                    checked += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < CONFLUENCE_BUDGET, format!("took {t:?}"))?;
    Ok(format!("{checked} reductions agree in {t:?}"))
}

fn sign_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..200 {
        let flavor = Flavor::ALL[i % 5];
        let n = rng.gen_range(1..=2);
        let g = random_graph(&mut rng, n, flavor, &numbered_legs(2), GraphParams::default());
        let (h, s) = reorder(&mut rng, &g);
        let a = reduce(&GraphVector::from_graph(&g));
        let b = reduce(&GraphVector::from_graph(&h));
        ensure(b == a.scale(&c(s as i64)), format!("reorder pair {i}"))?;

        let legs = numbered_legs(3);
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut rng);
        let sigma: BTreeMap<LegName, LegName> = (0..3).map(|j| (legs[j].clone(), legs[perm[j]].clone())).collect();
        let v = GraphVector::from_graph(&random_graph(&mut rng, n, flavor, &legs, GraphParams::default()));
        let lhs = reduce(&v.permute_legs(&sigma).unwrap());
        let rhs = reduce(&reduce(&v).to_graph_vector().permute_legs(&sigma).unwrap());
        ensure(lhs == rhs, format!("permuted reduction {i}"))?;
        let odd = permutation_parity(&perm) && n % 2 == 1;
        let corolla = GraphVector::corolla(n, flavor, &legs, LabelMonomial::one());
        let cr = reduce(&corolla.permute_legs(&sigma).unwrap());
        let cexp = if odd { reduce(&corolla).scale(&c(-1)) } else { reduce(&corolla) };
        ensure(cr == cexp, format!("corolla permutation {i}"))?;
    }
    Ok("200 reorderings and 200 leg permutations".into())
}

fn trivalent_pool() -> Vec<UndecoratedGraph> {
    let mut pool = Vec::new();
    for (k, vs) in [(0u64, vec![2, 4, 6]), (1, vec![1, 3, 5]), (2, vec![2, 4]), (3, vec![1, 3]), (4, vec![2, 4])] {
        for v in vs {
            pool.extend(enumerate_trivalent(&numbered_legs(k), v).into_iter().filter(|g| !g.has_loop()));
        }
    }
    pool
}

fn phi_well_defined() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pool = trivalent_pool();
    pool.shuffle(&mut rng);
    ensure(pool.len() >= 50, format!("only {} graphs", pool.len()))?;
    for g in pool.iter().take(50) {
        let base = phi(g);
        for _ in 0..10 {
            let mut vo: Vec<usize> = (0..g.vertex_count()).collect();
            vo.shuffle(&mut rng);
            let ho: Vec<[usize; 3]> = (0..g.vertex_count())
                .map(|_| {
                    let mut p = [0, 1, 2];
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            ensure(g.phi_with_choice(&vo, &ho, g.legs()).unwrap() == base, format!("{}", g.to_json()))?;
        }
    }
    ensure(permutation_parity(&[0, 4, 1, 5, 2, 3]), "theta ordering ρ is even")?;
    let t = phi(&UndecoratedGraph::theta());
    ensure(t == GraphVector::from_graph(&marked_theta(1)).scale(&c(-1)), "Φ(Θ) is not −(marked theta)")?;
    let mut want = CorollaVector::zero(1, Flavor::Closed, vec![]);
    want.add(LabeledPartition::new(vec![Part { legs: vec![], label: LabelMonomial::e_pow(2) }], None), &frac(x() - c(3), x()));
    ensure(reduce(&t) == want, "Φ(Θ) value")?;
    Ok("50 graphs x 10 orderings; ρ odd; Φ(Θ) = (χ-3)/χ κ_{e²}".into())
}

fn ih_soundness() -> Outcome {
    let s = |t: &str| LegName::Sym(t.into());
    let h = UndecoratedGraph::new(
        vec![s("a"), s("b"), s("c"), s("d")],
        2,
        vec![
            (Port::V(0), Port::L(s("a"))),
            (Port::V(0), Port::L(s("c"))),
            (Port::V(0), Port::V(1)),
            (Port::V(1), Port::L(s("b"))),
            (Port::V(1), Port::L(s("d"))),
        ],
    )
    .unwrap();
    for shape in [IhShape::Straight, IhShape::Crossed] {
        ensure(reduce(&ih_defect(&h, 2, shape).unwrap()).is_zero(), format!("bare H {shape:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut sites = Vec::new();
    for g in trivalent_pool().into_iter().filter(|g| g.vertex_count() >= 4) {
        for k in 0..g.edges().len() {
            if is_generic_ih_site(&g, k) {
                sites.push((g.clone(), k));
            }
        }
    }
    sites.shuffle(&mut rng);
    ensure(sites.len() >= 10, "too few embeddings")?;
    for (g, k) in sites.iter().take(10) {
        for shape in [IhShape::Straight, IhShape::Crossed] {
            ensure(reduce(&ih_defect(g, *k, shape).unwrap()).is_zero(), format!("{} edge {k} {shape:?}", g.to_json()))?;
        }
    }
    Ok("bare H and 10 embeddings, both shapes".into())
}

fn trivalent_round_trip() -> Outcome {
    let allowed: Vec<Poly> = [0, 2, 3, 4].iter().map(|&k| Poly::linear(int(k))).collect();
    let mut tz = Trivalizer::new(Flavor::Closed).map_err(|e| e.to_string())?;
    let mut count = 0;
    for a in 0..=10usize {
        for b in 0..=5u32 {
            let degree = a as i64 - 2 + 2 * b as i64;
            if degree > 8 {
                continue;
            }
            let legs = numbered_legs(a as u64);
            let corolla = GraphVector::corolla(1, Flavor::Closed, &legs, LabelMonomial::e_pow(b));
            let t = tz.trivalize(&corolla).map_err(|e| format!("({a},{b}): {e}"))?;
            ensure(is_trivalent(&t), format!("({a},{b}) not trivalent"))?;
            ensure(reduce(&t) == reduce(&corolla), format!("({a},{b}) round trip"))?;
            for (_, coeff) in t.terms() {
                for f in coeff.denominator_support() {
                    ensure(allowed.contains(&f), format!("({a},{b}) denominator {f:?}"))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} corollas of degree <= 8"))
}

fn partitions(upto: usize) -> Vec<usize> {
    let mut p = vec![0usize; upto + 1];
    p[0] = 1;
    for part in 1..=upto {
        for m in part..=upto {
            p[m] += p[m - part];
        }
    }
    p
}

fn hilbert_dimensions() -> Outcome {
    let p = partitions(10);
    ensure(p == vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42], "partition oracle")?;
    let h = hilbert_series(20);
    for d in 0..=20 {
        let want = if d % 2 == 0 { p[d / 2] } else { 0 };
        ensure(h[d] == want, format!("degree {d}: {} vs {want}", h[d]))?;
    }
    for d in 1..=4 {
        let r = rank_undec_mod_ih(&[], 2 * d);
        ensure(r == p[d], format!("IH rank at 2d={}: {r}", 2 * d))?;
    }
    Ok("p(0..10) through degree 20; IH ranks for d <= 4".into())
}

fn brauer_functoriality() -> Outcome {
    let names = |prefix: &str| (0..12).map(|i| LegName::Sym(format!("{prefix}{i}"))).collect::<Vec<_>>();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..50 {
        let n = 1 + round % 2;
        let signed = n % 2 == 1;
        let flavor = Flavor::ALL[rng.gen_range(0..5)];
        let k = rng.gen_range(0..=4);
        let s: Vec<LegName> = names("s").into_iter().take(k).collect();
        let v = random_vector(&mut rng, n as u32, flavor, &s, GraphParams { max_vertices: 3, max_edges: 2, max_exp: 1 }, 2);
        let f = random_morphism(&mut rng, signed, &s, &names("t"), 1);
        let g = random_morphism(&mut rng, signed, &f.target, &names("u"), 1);
        let gf = compose(&g, &f).map_err(|e| e.to_string())?;
        let lhs = reduce(&act(&gf, &v).unwrap());
        let rhs = reduce(&act(&g, &act(&f, &v).unwrap()).unwrap());
        ensure(lhs == rhs, format!("round {round}"))?;
    }
    for signed in [false, true] {
        let cup = BrauerMorphism::new(signed, vec![], vec![l(1), l(2)], BTreeMap::new(), vec![], vec![(l(1), l(2))], c(1)).unwrap();
        let cap = BrauerMorphism::new(signed, vec![l(1), l(2)], vec![], BTreeMap::new(), vec![(l(1), l(2))], vec![], c(1)).unwrap();
        let circle = compose(&cap, &cup).unwrap();
        let want = if signed { -(x() - c(2)) } else { x() - c(2) };
        ensure(circle.coeff == want, format!("circle signed={signed}: {}", circle.coeff))?;
    }
    Ok("50 composable pairs; circles χ-2 and -(χ-2)".into())
}

fn conversion_naturality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let params = GraphParams { max_vertices: 3, max_edges: 4, max_exp: 2 };
    for round in 0..30 {
        let (blue, red) = if round % 2 == 0 { (Flavor::Closed, Flavor::Pointed) } else { (Flavor::Theta, Flavor::ThetaPointed) };
        let n = rng.gen_range(1..=2);
        let legs = numbered_legs(rng.gen_range(0..=2));
        let v = random_vector(&mut rng, n, blue, &legs, params, 2);
        let lhs = reduce(&blue_to_red(&v, red).unwrap());
        let rhs = reduce(&blue_to_red(&reduce(&v).to_graph_vector(), red).unwrap());
        ensure(lhs == rhs, format!("round {round}"))?;
    }
    Ok("30 random blue vectors".into())
}

fn run_cli(args: &[&str], stdin: Option<&str>) -> (String, i32) {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn cli_goldens() -> Outcome {
    let cases: [(&[&str], Option<&str>, &str); 3] = [
        (&["reduce", "--flavor", "closed", "--n", "1", "--format", "latex"], Some(THETA_EXPR), "-\\frac{\\chi-3}{\\chi}\\,\\kappa_{e^2}\n"),
        (&["reduce", "--chi", "genus:2", "--n", "1"], Some(THETA_EXPR), "-5/2 * kappa_{e^2}\n"),
        (&["hilbert", "--flavor", "closed", "--n", "1", "--max-degree", "8"], None, "1 0 1 0 2 0 3 0 5\n"),
    ];
    for (args, stdin, want) in cases {
        let (out, code) = run_cli(args, stdin);
        ensure(code == 0 && out == want, format!("{args:?}: {out:?} (exit {code})"))?;
    }
    let (_, code) = run_cli(&["reduce", "--chi", "genus:1", "--n", "1", THETA_EXPR], None);
    ensure(code == 3, format!("genus:1 exit {code}"))?;
    let (_, code) = run_cli(&["reduce", "k(1,2"], None);
    ensure(code == 2, format!("parse error exit {code}"))?;
    Ok("three goldens byte-identical; exit codes 2 and 3".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("theta value", theta_value),
        ("example intermediate terms", intermediate_terms),
        ("loop vanishing", loop_vanishing),
        ("confluence", confluence),
        ("sign coherence", sign_coherence),
        ("phi well-definedness", phi_well_defined),
        ("IH soundness", ih_soundness),
        ("trivalent round trip", trivalent_round_trip),
        ("hilbert and dimensions", hilbert_dimensions),
        ("brauer functoriality", brauer_functoriality),
        ("conversion naturality", conversion_naturality),
        ("cli goldens", cli_goldens),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
