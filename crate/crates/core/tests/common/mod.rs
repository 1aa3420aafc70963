//! Brute-force oracles on plain `Vec<Vec<u64>>` matrices, written without
//! touching the library's elimination code.

#![allow(dead_code)]

use quasisep::generators::random::{random_left_triangular, random_qs, seeded_rng};
use quasisep::orders::lower_left_triangular;
use quasisep::{DenseMatrix, PrimeField};
use rand::Rng;

pub type Mat = Vec<Vec<u64>>;

pub fn to_vecs(a: &DenseMatrix) -> Mat {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank by row reduction on a copy.
pub fn rank(a: &Mat, p: u64) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow(m[r][c], p - 2, p);
        for i in r + 1..rows {
            if m[i][c] != 0 {
                let factor = m[i][c] * inv % p;
                let pivot_row = m[r].clone();
                for (x, &y) in m[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn block(a: &Mat, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
    a[r0..r1].iter().map(|row| row[c0..c1].to_vec()).collect()
}

pub fn mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(0, |acc, (&x, brow)| (acc + x * brow[j]) % p))
                .collect()
        })
        .collect()
}

pub fn matvec(a: &Mat, x: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(0, |acc, (&u, &v)| (acc + u * v) % p))
        .collect()
}

/// Keeps entries with `i + j <= n - 2` (0-based).
pub fn left(a: &Mat) -> Mat {
    let n = a.len();
    a.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &v)| if i + j + 2 <= n { v } else { 0 }).collect())
        .collect()
}

/// Pivots where the rank of the leading submatrices jumps in both directions.
pub fn rpm(a: &Mat, p: u64) -> Vec<(usize, usize)> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let lr = |i: usize, j: usize| if i == 0 || j == 0 { 0 } else { rank(&block(a, 0, i, 0, j), p) };
    let mut table = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = lr(i, j);
        }
    }
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if table[i + 1][j + 1] + table[i][j] == table[i][j + 1] + table[i + 1][j] + 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// `max_k rank(A[0..k, 0..n-k])`.
pub fn lt_order(a: &Mat, p: u64) -> usize {
    let n = a.len();
    (1..n).map(|k| rank(&block(a, 0, k, 0, n - k), p)).max().unwrap_or(0)
}

/// Orders straight from the definition: ranks of the blocks strictly below
/// and strictly above the diagonal.
pub fn qs_orders(m: &Mat, p: u64) -> (usize, usize) {
    let n = m.len();
    let lower = (1..n).map(|k| rank(&block(m, k, n, 0, k), p)).max().unwrap_or(0);
    let upper = (1..n).map(|k| rank(&block(m, 0, k, k, n), p)).max().unwrap_or(0);
    (lower, upper)
}

pub fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn random_vec(f: PrimeField, n: usize, seed: u64) -> Vec<u64> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| rng.gen_range(0..f.modulus())).collect()
}

/// A left triangular test instance of order at most `s`. Even seeds give a
/// low-rank corner `Left(X Y)`; odd seeds give the reversed strictly lower
/// part of a rank-`s` matrix, whose pivots run along the anti-diagonal.
pub fn lt_instance(f: PrimeField, n: usize, s: usize, seed: u64) -> DenseMatrix {
    if seed.is_multiple_of(2) || n < 2 {
        random_left_triangular(f, n, s, &mut seeded_rng(seed))
    } else {
        let m = random_qs(n, s.min(n - 1), 0, seed, f).unwrap();
        lower_left_triangular(&m)
    }
}
