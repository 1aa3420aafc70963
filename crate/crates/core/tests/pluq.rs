mod common;

use common::{gf, to_vecs};
use proptest::prelude::*;
use quasisep::generators::random::{random_low_rank, random_matrix, seeded_rng};
use quasisep::pluq::{check_theorem1, pluq_rpm, rpm_bruteforce, rpm_from_pluq};
use quasisep::{DenseMatrix, OpCounter, PrimeField};
use rand::Rng;

/// 200 matrices with shapes up to 24 x 24 and a spread of ranks.
fn corpus() -> Vec<(DenseMatrix, u64)> {
    let mut rng = seeded_rng(0x5eed);
    (0..200)
        .map(|k| {
            let p = [2, 3, 65521][k % 3];
            let f = gf(p);
            let m = rng.gen_range(1..=24);
            let n = rng.gen_range(1..=24);
            let a = if k % 2 == 0 {
                random_matrix(f, m, n, &mut rng)
            } else {
                let r = rng.gen_range(0..=m.min(n));
                random_low_rank(f, m, n, r, &mut rng)
            };
            (a, p)
        })
        .collect()
}

#[test]
fn pluq_matches_oracle_on_random_corpus() {
    for (a, p) in corpus() {
        let d = pluq_rpm(&a, &mut OpCounter::new());
        d.validate().unwrap();
        assert_eq!(d.reconstruct(&mut OpCounter::new()), a);
        let expected = common::rpm(&to_vecs(&a), p);
        assert_eq!(rpm_from_pluq(&d).pivots(), &expected[..]);
        assert_eq!(rpm_bruteforce(&a).pivots(), &expected[..]);
        assert!(check_theorem1(&d));
        assert_eq!(d.rank(), common::rank(&to_vecs(&a), p));
    }
}

#[test]
fn pluq_matches_oracle_on_all_binary_3x3() {
    let f = gf(2);
    for bits in 0u32..512 {
        let data = (0..9).map(|k| u64::from((bits >> k) & 1)).collect();
        let a = DenseMatrix::from_row_major(f, 3, 3, data).unwrap();
        let d = pluq_rpm(&a, &mut OpCounter::new());
        assert_eq!(d.reconstruct(&mut OpCounter::new()), a);
        assert_eq!(rpm_from_pluq(&d).pivots(), &common::rpm(&to_vecs(&a), 2)[..]);
        assert!(check_theorem1(&d));
    }
}

#[test]
fn small_rank_profiles() {
    let f = gf(5);
    let c = &mut OpCounter::new();
    let example = DenseMatrix::from_rows(f, &[[1, 1, 0], [1, 0, 0], [0, 0, 0]]);
    assert_eq!(rpm_from_pluq(&pluq_rpm(&example, c)).pivots(), &[(0, 0), (1, 1)]);
    let swap = DenseMatrix::from_rows(f, &[[0, 1], [1, 0]]);
    assert_eq!(rpm_bruteforce(&swap).pivots(), &[(0, 1), (1, 0)]);
    let id = DenseMatrix::identity(f, 3);
    assert_eq!(rpm_bruteforce(&id).pivots(), &[(0, 0), (1, 1), (2, 2)]);
    let zero = pluq_rpm(&DenseMatrix::zeros(f, 3, 4), c);
    assert_eq!(zero.rank(), 0);
    assert!(zero.p.is_identity() && zero.q.is_identity());
}

fn lower_unit(f: PrimeField, n: usize, rng: &mut impl Rng, upper: bool) -> DenseMatrix {
    let mut t = random_matrix(f, n, n, rng);
    for i in 0..n {
        t.set(i, i, rng.gen_range(1..f.modulus()));
        for j in 0..n {
            if (j > i && !upper) || (j < i && upper) {
                t.set(i, j, 0);
            }
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangular_multipliers_preserve_rank_profile(
        p in prop_oneof![Just(2u64), Just(3), Just(65521)],
        m in 1usize..9,
        n in 1usize..9,
        r in 0usize..5,
        seed in any::<u64>(),
    ) {
        let f = gf(p);
        let mut rng = seeded_rng(seed);
        let a = random_low_rank(f, m, n, r, &mut rng);
        let l = lower_unit(f, m, &mut rng, false);
        let u = lower_unit(f, n, &mut rng, true);
        let base = common::rpm(&to_vecs(&a), p);
        let la = common::mul(&to_vecs(&l), &to_vecs(&a), p);
        let au = common::mul(&to_vecs(&a), &to_vecs(&u), p);
        prop_assert_eq!(common::rpm(&la, p), base.clone());
        prop_assert_eq!(common::rpm(&au, p), base.clone());
        let pivots = rpm_bruteforce(&a);
        prop_assert!(pivots.rank() <= m.min(n));
        prop_assert_eq!(pivots.pivots(), &base[..]);
    }
}
