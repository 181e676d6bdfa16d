//! Exact Gaussian elimination over Q and over Q(χ).

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chi::{int, ChiScalar, Rational};

/// Rank of a rational matrix (rows of equal length).
pub fn rank_q(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = Rational::one() / &m[rank][col];
        for x in m[rank].iter_mut().skip(col) {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over Q(χ); returns the pivot columns.
fn rref(m: &mut [Vec<ChiScalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for x in m[rank].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..m[r].len() {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= &sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    pivots
}

/// Rank over the field Q(χ).
pub fn rank_chi(rows: &[Vec<ChiScalar>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    rref(&mut m, ncols).len()
}

/// Solve A·x = b over Q(χ), with free variables set to zero. A is given by rows.
pub fn solve_chi(a: &[Vec<ChiScalar>], b: &[ChiScalar]) -> Option<Vec<ChiScalar>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<ChiScalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    if m.iter().skip(pivots.len()).any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![ChiScalar::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

/// Generic rank over Q(χ): the maximum rank after substituting `samples` random rationals
/// avoiding {0, 2, 3, 4} and every pole, confirmed symbolically for matrices of at most
/// `symbolic_limit` rows and columns.
pub fn generic_rank(rows: &[Vec<ChiScalar>], samples: usize, seed: u64, symbolic_limit: usize) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut done = 0;
    while done < samples {
        let x = int(rng.gen_range(-400..400)) / int(rng.gen_range(1..37));
        if [0, 2, 3, 4].iter().any(|&k| x == int(k)) {
            continue;
        }
        let evaluated: Option<Vec<Vec<Rational>>> =
            rows.iter().map(|r| r.iter().map(|c| c.eval_at(&x).ok()).collect()).collect();
        let Some(m) = evaluated else { continue };
        best = best.max(rank_q(&m));
        done += 1;
    }
    if rows.len() <= symbolic_limit && ncols <= symbolic_limit {
        let exact = rank_chi(rows);
        debug_assert!(exact >= best);
        return exact;
    }
    best
}
