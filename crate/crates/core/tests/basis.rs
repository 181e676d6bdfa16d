use kappa_calculus::graph::{Flavor, LegName};
use kappa_calculus::label::LabelMonomial;
use kappa_calculus::rewrite::{LabeledPartition, Part};
use kappa_calculus::{corolla_basis, hilbert_series, independence_check};

fn partitions(k: usize) -> usize {
    // p(k) by the standard dynamic program over part sizes
    let mut p = vec![0usize; k + 1];
    p[0] = 1;
    for part in 1..=k {
        for m in part..=k {
            p[m] += p[m - part];
        }
    }
    p[k]
}

fn free(e: u32) -> Part {
    Part { legs: vec![], label: LabelMonomial::e_pow(e) }
}

#[test]
fn degree_four_closed() {
    let b = corolla_basis(&[], Flavor::Closed, 1, 4);
    let expected = vec![
        LabeledPartition::new(vec![free(2), free(2)], None),
        LabeledPartition::new(vec![free(3)], None),
    ];
    let mut sorted = expected.clone();
    sorted.sort();
    assert_eq!(b, sorted);
}

#[test]
fn degree_zero_is_the_empty_partition() {
    for f in Flavor::ALL {
        for n in 1..=3 {
            let b = corolla_basis(&[], f, n, 0);
            assert_eq!(b.len(), 1, "{f} n = {n}");
            assert!(b[0].parts.is_empty());
        }
    }
}

#[test]
fn univalent_singletons_in_theta() {
    let a = vec![LegName::Sym("a".into())];
    assert!(corolla_basis(&a, Flavor::Theta, 1, 1).is_empty());
    let d3 = corolla_basis(&a, Flavor::Theta, 1, 3);
    assert!(d3.contains(&LabeledPartition::new(
        vec![Part { legs: a.clone(), label: LabelMonomial::e_pow(2) }],
        None
    )));
}

#[test]
fn hilbert_series_counts_partitions() {
    let h = hilbert_series(20);
    for (d, &c) in h.iter().enumerate() {
        let expected = if d % 2 == 0 { partitions(d / 2) } else { 0 };
        assert_eq!(c, expected, "degree {d}");
    }
    assert_eq!(&h[..9], &[1, 0, 1, 0, 2, 0, 3, 0, 5]);
    assert_eq!(h[20], 42);
}

#[test]
fn corollas_are_independent() {
    assert!(independence_check(&[], Flavor::Closed, 1, 2, 50, 1));
    assert!(independence_check(&[], Flavor::Closed, 1, 0, 10, 1));
    assert!(independence_check(&[], Flavor::Disc, 1, 2, 50, 2));
    let legs: Vec<LegName> = (1..=2).map(LegName::Num).collect();
    for f in Flavor::ALL {
        assert!(independence_check(&legs, f, 2, 2, 30, 3), "{f}");
    }
}
