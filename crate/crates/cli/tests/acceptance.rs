//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{gf, to_vecs};
use quasisep::generators::{
    compact_bruhat, compress_echelon, compress_echelon_transposed, decompress_echelon, lt_bruhat, qs_from_dense,
    random_left_triangular, random_low_rank, random_matrix, random_qs, seeded_rng, tree_generator, LtRep, RepKind,
};
use quasisep::matrix::{left_part, mat_mul};
use quasisep::orders::{lower_left_triangular, lt_rpm, qs_order, qs_order_bruteforce};
use quasisep::pluq::{check_theorem1, rpm_bruteforce, rpm_from_pluq};
use quasisep::structops::{matvec_lt, mul_qs_qs};
use quasisep::{pluq_rpm, DenseMatrix, OpCounter};
use quasisep_cli::bench::{self, Algo, CSV_HEADER};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binary_3x3() -> impl Iterator<Item = DenseMatrix> {
    let f = gf(2);
    (0u32..512).map(move |bits| {
        let data = (0..9).map(|k| u64::from((bits >> k) & 1)).collect();
        DenseMatrix::from_row_major(f, 3, 3, data).unwrap()
    })
}

/// 200 square matrices, `n <= 32`, over GF(2), GF(3) and GF(65521).
fn random_square_corpus() -> Vec<(DenseMatrix, u64)> {
    let mut rng = seeded_rng(2024);
    (0..200)
        .map(|k| {
            let p = [2, 3, 65521][k % 3];
            let f = gf(p);
            let n = rng.gen_range(1..=32);
            let a = match k % 4 {
                0 => random_matrix(f, n, n, &mut rng),
                1 => left_part(&random_matrix(f, n, n, &mut rng)).unwrap(),
                2 => {
                    let r = rng.gen_range(0..=n);
                    random_low_rank(f, n, n, r, &mut rng)
                }
                _ => common::lt_instance(f, n, rng.gen_range(0..=n / 2), k as u64),
            };
            (a, p)
        })
        .collect()
}

fn left_pivots(p: Vec<(usize, usize)>, n: usize) -> Vec<(usize, usize)> {
    p.into_iter().filter(|&(i, j)| i + j + 2 <= n).collect()
}

fn criterion1() -> Outcome {
    for p in [2, 65521] {
        let a = DenseMatrix::from_rows(gf(p), &[[1, 1, 0], [1, 0, 0], [0, 0, 0]]);
        let want = [(0, 0), (1, 1)];
        check(rpm_bruteforce(&a).pivots() == want, || format!("brute force gives {:?}", rpm_bruteforce(&a).pivots()))?;
        let got = rpm_from_pluq(&pluq_rpm(&a, &mut OpCounter::new()));
        check(got.pivots() == want, || format!("PLUQ gives {:?}", got.pivots()))?;
        check(common::rpm(&to_vecs(&a), p) == want, || "independent oracle disagrees".into())?;
    }
    Ok("pivots {(1,1), (2,2)} in 1-based indexing".into())
}

fn criterion2() -> Outcome {
    let mut count = 0;
    let binary = binary_3x3().map(|a| (a, 2));
    for (a, p) in binary.chain(random_square_corpus()) {
        let n = a.rows();
        let got = lt_rpm(&a, &mut OpCounter::new()).map_err(|e| e.to_string())?;
        let lib_oracle = rpm_bruteforce(&a).left_part();
        let want = left_pivots(common::rpm(&to_vecs(&a), p), n);
        check(got == lib_oracle && got.pivots() == want, || format!("mismatch at n = {n}, p = {p}"))?;
        count += 1;
    }
    Ok(format!("{count} matrices"))
}

fn criterion3() -> Outcome {
    let mut count = 0;
    let binary = binary_3x3().map(|a| (a, 2));
    for (a, p) in binary.chain(random_square_corpus()) {
        let n = a.rows();
        let l = left_part(&a).unwrap();
        let fast = qs_order(lt_rpm(&l, &mut OpCounter::new()).unwrap().pivots(), n);
        let want = common::lt_order(&to_vecs(&l), p);
        check(fast == want && qs_order_bruteforce(&l) == want, || format!("order mismatch at n = {n}, p = {p}"))?;
        count += 1;
    }
    let f = gf(65521);
    for n in [4, 8, 13] {
        let mut band = DenseMatrix::zeros(f, n, n);
        for i in 0..n - 1 {
            band.set(i, n - 2 - i, 1);
        }
        let o = qs_order(lt_rpm(&band, &mut OpCounter::new()).unwrap().pivots(), n);
        check(o == 1 && common::lt_order(&to_vecs(&band), 65521) == 1, || format!("band of size {n} has order {o}"))?;
    }
    for r in 1..=5 {
        let a = random_matrix(f, r, r, &mut seeded_rng(r as u64)).embed(12, 0, 0);
        let o = qs_order(lt_rpm(&a, &mut OpCounter::new()).unwrap().pivots(), 12);
        check(o == r && common::rank(&to_vecs(&a), 65521) == r, || format!("rank {r} leading block has order {o}"))?;
    }
    Ok(format!("{count} matrices plus band and leading block fixtures"))
}

fn criterion4() -> Outcome {
    let mut rng = seeded_rng(4);
    for k in 0..200 {
        let f = gf([2, 3, 65521][k % 3]);
        let (m, n) = (rng.gen_range(1..=24), rng.gen_range(1..=24));
        let a = if k % 2 == 0 {
            random_matrix(f, m, n, &mut rng)
        } else {
            let r = rng.gen_range(0..=m.min(n));
            random_low_rank(f, m, n, r, &mut rng)
        };
        let d = pluq_rpm(&a, &mut OpCounter::new());
        check(check_theorem1(&d), || format!("block structure fails for {m}x{n}"))?;
        check(d.reconstruct(&mut OpCounter::new()) == a, || "factors do not multiply back".into())?;
    }
    Ok("200 matrices".into())
}

fn criterion5() -> Outcome {
    let f = gf(65521);
    let mut rng = seeded_rng(5);
    for k in 0..100u64 {
        let n = rng.gen_range(1..=128);
        let a = common::lt_instance(f, n, rng.gen_range(0..=6.min(n)), k);
        let s = common::lt_order(&to_vecs(&a), 65521);
        let g = lt_bruhat(&a, &mut OpCounter::new()).unwrap();
        // Left(𝓛 𝓔ᵀ 𝓤) rebuilt from the dense factors and the pivot pattern
        let mut e = DenseMatrix::zeros(f, n, n);
        for p in g.pivots() {
            e.set(p.row, p.col, 1);
        }
        let c = &mut OpCounter::new();
        let prod = mat_mul(&mat_mul(&g.lower_dense(), &e.transpose(), c).unwrap(), &g.upper_dense(), c).unwrap();
        check(left_part(&prod).unwrap() == a, || format!("reconstruction differs at n = {n}"))?;
        check(g.reconstruct() == a, || "library reconstruction differs".into())?;
        let bound = s * (n - s);
        check(g.lower_nonzeros() <= bound && g.upper_nonzeros() <= bound, || {
            format!("n = {n}, s = {s}: nonzeros {} and {} exceed {bound}", g.lower_nonzeros(), g.upper_nonzeros())
        })?;
    }
    let mut worst = 0;
    for seed in [1u64, 3, 5] {
        let a = lower_left_triangular(&random_qs(80, 5, 5, seed, f).unwrap());
        let s = common::lt_order(&to_vecs(&a), 65521);
        let g = lt_bruhat(&a, &mut OpCounter::new()).unwrap();
        check(s == 5, || format!("instance has order {s}"))?;
        check(g.stored_elems() <= 750, || format!("{} stored elements", g.stored_elems()))?;
        worst = worst.max(g.stored_elems());
    }
    Ok(format!("100 instances; n = 80, s = 5 stores at most {worst} <= 750"))
}

fn criterion6() -> Outcome {
    let f = gf(65521);
    let mut rng = seeded_rng(6);
    for k in 0..100u64 {
        let n = rng.gen_range(1..=64);
        let a = common::lt_instance(f, n, rng.gen_range(0..=6.min(n)), k);
        let s = common::lt_order(&to_vecs(&a), 65521);
        let g = lt_bruhat(&a, &mut OpCounter::new()).unwrap();
        let lower = compress_echelon(&g, s).map_err(|e| e.to_string())?;
        let upper = compress_echelon_transposed(&g, s).map_err(|e| e.to_string())?;
        check(decompress_echelon(&lower) == g.lower_dense(), || format!("lower round trip differs at n = {n}"))?;
        check(decompress_echelon(&upper).transpose() == g.upper_dense(), || "upper round trip differs".into())?;
        // 𝓛 = [D + S T | 0] 𝓠ᵀ, assembled here from the stored blocks
        let c = &mut OpCounter::new();
        let st = mat_mul(&lower.s_dense(), &lower.t_dense(), c).unwrap();
        let dst = lower.d_dense().add(&st).unwrap();
        check(dst.embed(n, 0, 0).permute_cols_inv(lower.perm()) == g.lower_dense(), || {
            "lower factor is not [D + S T | 0] Q^T".into()
        })?;
        for e in [&lower, &upper] {
            for (b, &rows) in e.block_rows().iter().enumerate() {
                if e.diag_blocks()[b].cols() == s {
                    check(rows >= s, || format!("full block {b} has {rows} rows for s = {s}"))?;
                }
            }
        }
        let cg = compact_bruhat(&g, s).map_err(|e| e.to_string())?;
        let cl = dense_echelon(cg.lower());
        let cu = dense_echelon(cg.upper()).transpose();
        let r = DenseMatrix::identity(f, g.rank()).permute_cols(cg.r());
        let prod = mat_mul(&mat_mul(&cl, &r, c).unwrap(), &cu, c).unwrap();
        check(left_part(&prod).unwrap() == a, || format!("compact product differs at n = {n}"))?;
    }
    Ok("100 instances".into())
}

/// `D + S T` from the stored blocks.
fn dense_echelon(e: &quasisep::generators::CompactEchelon) -> DenseMatrix {
    let st = mat_mul(&e.s_dense(), &e.t_dense(), &mut OpCounter::new()).unwrap();
    e.d_dense().add(&st).unwrap()
}

fn criterion7() -> Outcome {
    let f = gf(65521);
    let n = 256;
    let mut parts = Vec::new();
    for s in [1, 2, 4, 8, 16] {
        let a = random_left_triangular(f, n, s, &mut seeded_rng(700 + s as u64));
        let order = qs_order(lt_rpm(&a, &mut OpCounter::new()).unwrap().pivots(), n);
        check(order <= s, || format!("instance order {order} exceeds {s}"))?;
        let g = tree_generator(&a, &mut OpCounter::new()).unwrap();
        let bound = s * n * ((n / s).ilog2() as usize + 1);
        check(g.stored_elems() <= bound, || format!("s = {s}: {} > {bound}", g.stored_elems()))?;
        check(g.reconstruct() == a, || "tree reconstruction differs".into())?;
        parts.push(format!("s={s}: {}/{bound}", g.stored_elems()));
    }
    Ok(parts.join(", "))
}

fn criterion8() -> Outcome {
    let f = gf(65521);
    let mut rng = seeded_rng(8);
    for k in 0..100u64 {
        let n = rng.gen_range(1..=96);
        let a = common::lt_instance(f, n, rng.gen_range(0..=6.min(n)), k);
        let x = common::random_vec(f, n, k);
        let want = common::matvec(&to_vecs(&a), &x, 65521);
        for kind in [RepKind::Tree, RepKind::Bruhat, RepKind::Compact] {
            let rep = LtRep::build(&a, kind, Default::default(), &mut OpCounter::new()).unwrap();
            let mut c = OpCounter::new();
            let got = matvec_lt(&rep, &x, &mut c).unwrap();
            check(got == want, || format!("{} matvec differs at n = {n}", kind.name()))?;
            if let LtRep::Bruhat(g) = &rep {
                let bound = (g.lower_nonzeros() + g.upper_nonzeros()) as u64;
                check(c.muls <= bound, || format!("{} multiplications exceed {bound}", c.muls))?;
            }
        }
    }
    Ok("100 pairs for each representation".into())
}

fn criterion9() -> Outcome {
    let p = 65521;
    let f = gf(p);
    let mut rng = seeded_rng(9);
    for k in 0..50u64 {
        let n = rng.gen_range(2..=128);
        let t = n.min(4);
        let (la, ua, lb, ub) = (rng.gen_range(0..t), rng.gen_range(0..t), rng.gen_range(0..t), rng.gen_range(0..t));
        let ma = random_qs(n, la, ua, 2 * k, f).unwrap();
        let mb = random_qs(n, lb, ub, 2 * k + 1, f).unwrap();
        let kind = [RepKind::Tree, RepKind::Bruhat, RepKind::Compact][k as usize % 3];
        let qa = qs_from_dense(&ma, kind, &mut OpCounter::new()).unwrap();
        let qb = qs_from_dense(&mb, kind, &mut OpCounter::new()).unwrap();
        let prod = mul_qs_qs(&qa, &qb, &mut OpCounter::new()).unwrap();
        check(to_vecs(&prod) == common::mul(&to_vecs(&ma), &to_vecs(&mb), p), || format!("product differs at n = {n}"))?;
        let (oa, ob) = (common::qs_orders(&to_vecs(&ma), p), common::qs_orders(&to_vecs(&mb), p));
        let (l, u) = common::qs_orders(&to_vecs(&prod), p);
        check(l <= oa.0 + ob.0 && u <= oa.1 + ob.1, || format!("product orders ({l}, {u}) exceed the sums"))?;
    }
    Ok("50 pairs".into())
}

fn criterion10() -> Outcome {
    let f = gf(65521);
    let mut parts = Vec::new();
    for algo in [Algo::LtRpm, Algo::LtBruhat, Algo::MulLtLt] {
        let muls = |n, s| bench::run_cell(algo, f, n, s, 10).map(|r| r.counter.muls as f64);
        let (a, b, c) = (muls(128, 4), muls(256, 4), muls(256, 8));
        let (a, b, c) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?, c.map_err(|e| e.to_string())?);
        let (rn, rs) = (b / a, c / b);
        parts.push(format!("{} n-ratio {rn:.2} s-ratio {rs:.2}", algo.name()));
        check((3.0..=5.0).contains(&rn) && rs <= 2.6, || parts.join("; "))?;
    }
    Ok(parts.join("; "))
}

fn criterion11() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_quasisep");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| Command::new(exe).args(args).output().map_err(|e| e.to_string());
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for path in [&a, &b] {
        let o = run(&["generate", "--n", "32", "--rl", "3", "--ru", "2", "--seed", "42", "--out", path.to_str().unwrap()])?;
        check(o.status.success(), || "generate failed".into())?;
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    check(ba == bb && !ba.is_empty(), || "generate output differs between runs".into())?;
    let v = run(&["verify", "all"])?;
    check(v.status.code() == Some(0), || String::from_utf8_lossy(&v.stdout).into_owned())?;
    let csv = dir.path().join("bench.csv");
    let o = run(&["bench", "--n", "32,64", "--s", "2", "--csv", csv.to_str().unwrap()])?;
    check(o.status.success(), || "bench failed".into())?;
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap_or("");
    check(header.as_bytes() == CSV_HEADER.as_bytes(), || format!("header {header:?}"))?;
    check(CSV_HEADER == "algo,n,s_target,s_actual,p,seed,adds,muls,invs,wall_ns,stored_elems", || {
        "declared header changed".into()
    })?;
    Ok("generate is byte-identical, verify all exits 0, CSV header matches".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("RPM of the 3x3 example", criterion1),
        ("left triangular RPM matches brute force", criterion2),
        ("quasiseparable orders match brute force", criterion3),
        ("PLUQ block structure", criterion4),
        ("Bruhat reconstruction and size", criterion5),
        ("compact Bruhat round trip and product", criterion6),
        ("tree generator storage", criterion7),
        ("structured matvec", criterion8),
        ("quasiseparable product", criterion9),
        ("operation count scaling", criterion10),
        ("CLI determinism", criterion11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{ms} ms]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{ms} ms]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
