//! Randomized self-checks run by `quasisep verify`.
//!
//! Each check draws `trials` fresh instances from the seed and compares the
//! fast algorithms against brute force when `n <= ORACLE_CUTOFF`; larger
//! instances only get internal consistency checks.

use quasisep::generators::{
    compact_bruhat, compress_echelon, compress_echelon_transposed, decompress_echelon, lt_bruhat, qs_from_dense,
    random_left_triangular, random_low_rank, random_matrix, random_qs, seeded_rng, tree_generator, LtRep,
    RepKind,
};
use quasisep::matrix::{left_part, mat_mul, rank};
use quasisep::orders::{
    lower_left_triangular, lt_rpm, lt_rpm_with_crossover, qs_order, quasiseparable_orders_bruteforce,
};
use quasisep::pluq::{check_theorem1, rpm_bruteforce, rpm_from_pluq};
use quasisep::structops::{matvec_lt, mul_lt_lt, mul_qs_qs, MulMode};
use quasisep::{pluq_rpm, quasiseparable_orders, DenseMatrix, OpCounter, PrimeField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::format;

pub const ORACLE_CUTOFF: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    All,
    Pluq,
    Orders,
    Generators,
    Ops,
}

impl std::str::FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Scope::All,
            "pluq" => Scope::Pluq,
            "orders" => Scope::Orders,
            "generators" => Scope::Generators,
            "ops" => Scope::Ops,
            _ => return Err(format!("unknown scope {s:?}")),
        })
    }
}

type CheckFn = fn(&mut ChaCha8Rng) -> Result<(), String>;

struct Check {
    scope: Scope,
    name: &'static str,
    run: CheckFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub trials: usize,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("PASS {} ({} trials)", self.name, self.trials),
            Some(why) => format!("FAIL {}: {why}", self.name),
        }
    }
}

const CHECKS: &[Check] = &[
    Check { scope: Scope::Pluq, name: "pluq.reconstruct", run: pluq_reconstruct },
    Check { scope: Scope::Pluq, name: "pluq.rank_profile", run: pluq_rank_profile },
    Check { scope: Scope::Pluq, name: "pluq.block_structure", run: pluq_block_structure },
    Check { scope: Scope::Orders, name: "orders.lt_rpm", run: orders_lt_rpm },
    Check { scope: Scope::Orders, name: "orders.qs_orders", run: orders_qs },
    Check { scope: Scope::Generators, name: "generators.tree", run: gen_tree },
    Check { scope: Scope::Generators, name: "generators.tree_storage", run: gen_tree_storage },
    Check { scope: Scope::Generators, name: "generators.bruhat", run: gen_bruhat },
    Check { scope: Scope::Generators, name: "generators.compact", run: gen_compact },
    Check { scope: Scope::Generators, name: "generators.text_round_trip", run: gen_text },
    Check { scope: Scope::Ops, name: "ops.matvec", run: ops_matvec },
    Check { scope: Scope::Ops, name: "ops.mul_lt_lt", run: ops_mul_lt_lt },
    Check { scope: Scope::Ops, name: "ops.mul_qs_qs", run: ops_mul_qs_qs },
];

/// Names of the checks selected by `scope`, in run order.
pub fn check_names(scope: Scope) -> Vec<&'static str> {
    selected(scope).map(|c| c.name).collect()
}

fn selected(scope: Scope) -> impl Iterator<Item = &'static Check> {
    CHECKS.iter().filter(move |c| scope == Scope::All || c.scope == scope)
}

pub fn run(scope: Scope, seed: u64, trials: usize) -> Vec<Outcome> {
    selected(scope)
        .enumerate()
        .map(|(idx, c)| {
            let mut failure = None;
            for t in 0..trials {
                let s = seed.wrapping_mul(0x9e37_79b9).wrapping_add(((idx as u64) << 32) | t as u64);
                if let Err(why) = (c.run)(&mut seeded_rng(s)) {
                    failure = Some(format!("trial {t}: {why}"));
                    break;
                }
            }
            Outcome { name: c.name, trials, failure }
        })
        .collect()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn lib<T>(r: quasisep::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn pick_field(rng: &mut ChaCha8Rng) -> PrimeField {
    let p = [65521, 2, 3, 65521, 7][rng.gen_range(0..5)];
    PrimeField::new(p).expect("prime")
}

/// Size in `1..=40`, occasionally above the oracle cutoff.
fn pick_n(rng: &mut ChaCha8Rng) -> usize {
    if rng.gen_ratio(1, 8) {
        rng.gen_range(ORACLE_CUTOFF + 1..=96)
    } else {
        rng.gen_range(1..=40)
    }
}

fn pick_lt(rng: &mut ChaCha8Rng, f: PrimeField, n: usize) -> DenseMatrix {
    let s = rng.gen_range(0..=n.min(6));
    if rng.gen_bool(0.5) {
        random_left_triangular(f, n, s, rng)
    } else {
        let m = random_qs(n, s.min(n.saturating_sub(1)), 0, rng.gen(), f).expect("valid orders");
        lower_left_triangular(&m)
    }
}

fn pluq_reconstruct(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let (m, n) = (rng.gen_range(0..=32), rng.gen_range(0..=32));
    let r = rng.gen_range(0..=m.min(n));
    let a = random_low_rank(f, m, n, r, rng);
    let d = pluq_rpm(&a, &mut OpCounter::new());
    lib(d.validate())?;
    ensure(d.reconstruct(&mut OpCounter::new()) == a, || format!("P L U Q differs from A ({m}x{n})"))
}

fn pluq_rank_profile(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = random_low_rank(f, n, n, rng.gen_range(0..=n), rng);
    let d = pluq_rpm(&a, &mut OpCounter::new());
    let got = rpm_from_pluq(&d);
    if n <= ORACLE_CUTOFF {
        ensure(got == rpm_bruteforce(&a), || format!("rank profile differs from brute force (n = {n})"))
    } else {
        ensure(got.rank() == rank(&a), || format!("pivot count differs from the rank (n = {n})"))
    }
}

fn pluq_block_structure(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let (m, n) = (rng.gen_range(0..=24), rng.gen_range(0..=24));
    let a = if rng.gen_bool(0.5) {
        random_matrix(f, m, n, rng)
    } else {
        random_low_rank(f, m, n, rng.gen_range(0..=m.min(n)), rng)
    };
    ensure(check_theorem1(&pluq_rpm(&a, &mut OpCounter::new())), || {
        format!("factors lack the rank profile block structure ({m}x{n})")
    })
}

fn orders_lt_rpm(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = pick_lt(rng, f, n);
    let got = lib(lt_rpm(&a, &mut OpCounter::new()))?;
    ensure(got == lib(lt_rpm_with_crossover(&a, 2, &mut OpCounter::new()))?, || {
        format!("result depends on the base case size (n = {n})")
    })?;
    if n <= ORACLE_CUTOFF {
        ensure(got == rpm_bruteforce(&a).left_part(), || format!("differs from the brute force left part (n = {n})"))?;
    }
    Ok(())
}

fn orders_qs(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let (rl, ru) = (rng.gen_range(0..n.clamp(1, 6)), rng.gen_range(0..n.clamp(1, 6)));
    let m = lib(random_qs(n, rl, ru, rng.gen(), f))?;
    let got = lib(quasiseparable_orders(&m, &mut OpCounter::new()))?;
    ensure(got.lower <= rl && got.upper <= ru, || format!("orders {got:?} exceed the targets ({rl}, {ru})"))?;
    if n <= ORACLE_CUTOFF {
        ensure(got == quasiseparable_orders_bruteforce(&m), || format!("differs from brute force (n = {n})"))?;
    }
    Ok(())
}

fn gen_tree(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = pick_lt(rng, f, n);
    let g = lib(tree_generator(&a, &mut OpCounter::new()))?;
    ensure(g.reconstruct() == a, || format!("tree reconstruction differs (n = {n})"))
}

fn gen_tree_storage(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = PrimeField::new(65521).expect("prime");
    let n = 1usize << rng.gen_range(3..=6);
    let a = random_left_triangular(f, n, rng.gen_range(1..=8), rng);
    let s = qs_order(lib(lt_rpm(&a, &mut OpCounter::new()))?.pivots(), n).max(1);
    let g = lib(tree_generator(&a, &mut OpCounter::new()))?;
    let bound = s * n * ((n as f64 / s as f64).log2().ceil() as usize + 1);
    ensure(g.stored_elems() <= bound, || format!("{} stored elements exceed {bound} (n = {n}, s = {s})", g.stored_elems()))
}

fn gen_bruhat(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = pick_lt(rng, f, n);
    let g = lib(lt_bruhat(&a, &mut OpCounter::new()))?;
    ensure(g.reconstruct() == a, || format!("Bruhat reconstruction differs (n = {n})"))?;
    let rpm = lib(lt_rpm(&a, &mut OpCounter::new()))?;
    ensure(g.rank_profile() == rpm, || "pivots differ from the left rank profile".into())?;
    let s = g.order();
    let bound = s * (n - s);
    ensure(g.lower_nonzeros() <= bound && g.upper_nonzeros() <= bound, || {
        format!("factor support exceeds s(n - s) = {bound}")
    })?;
    let (l, u) = (g.lower_dense(), g.upper_dense());
    for p in g.pivots() {
        ensure(l.get(p.row, p.col) == 1 && u.get(p.row, p.col) != 0, || {
            format!("pivot ({}, {}) does not lead its row and column", p.row, p.col)
        })?;
    }
    let pivots = rpm.pivots();
    for i in 0..n {
        for j in 0..n {
            if l.get(i, j) != 0 && u.get(i, j) != 0 && !pivots.contains(&(i, j)) {
                return Err(format!("factor supports overlap at ({i}, {j})"));
            }
        }
    }
    // the factors of the row-major PLUQ form a generator too
    let d = pluq_rpm(&a, &mut OpCounter::new());
    let lcal = lib(left_part(&d.l.embed(n, 0, 0).permute_rows(&d.p).permute_cols(&d.q)))?;
    let ucal = lib(left_part(&d.u.embed(n, 0, 0).permute_rows(&d.p).permute_cols(&d.q)))?;
    let c = &mut OpCounter::new();
    let e = rpm.to_dense(f).transpose();
    let prod = lib(mat_mul(&lib(mat_mul(&lcal, &e, c))?, &ucal, c))?;
    ensure(lib(left_part(&prod))? == a, || "Left(L E^T U) from the PLUQ factors differs".into())
}

fn gen_compact(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = pick_lt(rng, f, n);
    let g = lib(lt_bruhat(&a, &mut OpCounter::new()))?;
    let s = g.order() + rng.gen_range(0..=2);
    let lower = lib(compress_echelon(&g, s))?;
    let upper = lib(compress_echelon_transposed(&g, s))?;
    ensure(decompress_echelon(&lower) == g.lower_dense(), || "lower echelon round trip differs".into())?;
    ensure(decompress_echelon(&upper).transpose() == g.upper_dense(), || "upper echelon round trip differs".into())?;
    for e in [&lower, &upper] {
        for (b, &k) in e.block_rows().iter().enumerate() {
            let w = e.diag_blocks()[b].cols();
            ensure(k >= w, || format!("block {b} has {k} rows for width {w}"))?;
        }
    }
    let c = lib(compact_bruhat(&g, s))?;
    ensure(c.reconstruct() == a, || format!("compact reconstruction differs (n = {n}, s = {s})"))?;
    ensure(lib(c.to_bruhat())? == g, || "compact form does not recover the Bruhat generator".into())
}

fn gen_text(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = rng.gen_range(1..=40);
    let (rl, ru) = (rng.gen_range(0..n.min(5)), rng.gen_range(0..n.min(5)));
    let m = lib(random_qs(n, rl, ru, rng.gen(), f))?;
    ensure(format::parse_matrix(&format::write_matrix(&m)).map_err(|e| e.to_string())? == m, || {
        "matrix text round trip differs".into()
    })?;
    for kind in [RepKind::Tree, RepKind::Bruhat, RepKind::Compact] {
        let q = lib(qs_from_dense(&m, kind, &mut OpCounter::new()))?;
        let back = format::parse_qs(&format::write_qs(&q)).map_err(|e| e.to_string())?;
        ensure(back == q && back.reconstruct() == m, || format!("{} text round trip differs", kind.name()))?;
    }
    Ok(())
}

fn ops_matvec(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let a = pick_lt(rng, f, n);
    let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..f.modulus())).collect();
    let want = lib(a.matvec(&x, &mut OpCounter::new()))?;
    for kind in [RepKind::Tree, RepKind::Bruhat, RepKind::Compact] {
        let rep = lib(LtRep::build(&a, kind, Default::default(), &mut OpCounter::new()))?;
        let mut c = OpCounter::new();
        let got = lib(matvec_lt(&rep, &x, &mut c))?;
        ensure(got == want, || format!("{} matvec differs (n = {n})", kind.name()))?;
        if let LtRep::Bruhat(g) = &rep {
            let bound = (g.lower_nonzeros() + g.upper_nonzeros()) as u64;
            ensure(c.muls <= bound, || format!("{} multiplications exceed {bound}", c.muls))?;
        }
    }
    Ok(())
}

fn ops_mul_lt_lt(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = rng.gen_range(1..=48);
    let a = pick_lt(rng, f, n);
    let b = pick_lt(rng, f, n);
    let ga = lib(tree_generator(&a, &mut OpCounter::new()))?;
    let gb = lib(tree_generator(&b, &mut OpCounter::new()))?;
    let c = &mut OpCounter::new();
    let direct = lib(mat_mul(&a, &b, c))?;
    ensure(lib(mul_lt_lt(&ga, &gb, MulMode::Direct, c))? == direct, || format!("A B differs (n = {n})"))?;
    let reversed = lib(mat_mul(&a, &quasisep::matrix::reverse_rows(&b), c))?;
    ensure(lib(mul_lt_lt(&ga, &gb, MulMode::MiddleReversed, c))? == reversed, || format!("A J B differs (n = {n})"))
}

fn ops_mul_qs_qs(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = pick_field(rng);
    let n = pick_n(rng);
    let t = n.clamp(1, 4);
    let (la, ua, lb, ub) = (rng.gen_range(0..t), rng.gen_range(0..t), rng.gen_range(0..t), rng.gen_range(0..t));
    let ma = lib(random_qs(n, la, ua, rng.gen(), f))?;
    let mb = lib(random_qs(n, lb, ub, rng.gen(), f))?;
    let kind = [RepKind::Tree, RepKind::Bruhat, RepKind::Compact][rng.gen_range(0..3)];
    let qa = lib(qs_from_dense(&ma, kind, &mut OpCounter::new()))?;
    let qb = lib(qs_from_dense(&mb, kind, &mut OpCounter::new()))?;
    let got = lib(mul_qs_qs(&qa, &qb, &mut OpCounter::new()))?;
    ensure(got == lib(mat_mul(&ma, &mb, &mut OpCounter::new()))?, || format!("product differs (n = {n})"))?;
    let o = if n <= ORACLE_CUTOFF {
        quasiseparable_orders_bruteforce(&got)
    } else {
        lib(quasiseparable_orders(&got, &mut OpCounter::new()))?
    };
    ensure(o.lower <= la + lb && o.upper <= ua + ub, || format!("product orders {o:?} exceed the sums"))
}
