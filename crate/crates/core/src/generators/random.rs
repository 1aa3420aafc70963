//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::matrix::{left_part_unchecked, mat_mul, strict_lower, strict_upper, DenseMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    let p = field.modulus();
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    DenseMatrix::from_row_major(field, rows, cols, data).expect("length matches")
}

/// `X * Y` with `X` of size `rows x rank` and `Y` of size `rank x cols`.
pub fn random_low_rank<R: Rng + ?Sized>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut R,
) -> DenseMatrix {
    let x = random_matrix(field, rows, rank, rng);
    let y = random_matrix(field, rank, cols, rng);
    mat_mul(&x, &y, &mut OpCounter::new()).expect("shapes agree")
}

/// `Left(X * Y)` for random `X` (`n x s`) and `Y` (`s x n`): left triangular
/// with quasiseparable order at most `s`.
pub fn random_left_triangular<R: Rng + ?Sized>(field: PrimeField, n: usize, s: usize, rng: &mut R) -> DenseMatrix {
    left_part_unchecked(&random_low_rank(field, n, n, s, rng))
}

/// Random `(r_L, r_U)`-quasiseparable matrix (orders are upper bounds):
/// `strictlower(X_L Y_L) + diag + strictupper(X_U Y_U)`.
pub fn random_qs(n: usize, lower: usize, upper: usize, seed: u64, field: PrimeField) -> Result<DenseMatrix> {
    if n > 0 && (lower >= n || upper >= n) {
        return Err(Error::InvalidArgument("target orders must be smaller than n"));
    }
    let mut rng = seeded_rng(seed);
    let low = strict_lower(&random_low_rank(field, n, n, lower, &mut rng));
    let up = strict_upper(&random_low_rank(field, n, n, upper, &mut rng));
    let p = field.modulus();
    let mut m = low.add(&up)?;
    for i in 0..n {
        m.set(i, i, rng.gen_range(0..p));
    }
    Ok(m)
}
