//! Operation-count benchmarks written as CSV.

use std::time::Instant;

use quasisep::generators::{compact_bruhat, lt_bruhat, qs_from_dense, random_qs, tree_generator, RepKind};
use quasisep::orders::{lower_left_triangular, lt_rpm, qs_order, qs_order_bruteforce};
use quasisep::structops::{matvec_bruhat, mul_lt_lt, mul_qs_qs, MulMode};
use quasisep::{DenseMatrix, OpCounter, PrimeField};

use crate::verify::ORACLE_CUTOFF;

pub const CSV_HEADER: &str = "algo,n,s_target,s_actual,p,seed,adds,muls,invs,wall_ns,stored_elems";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    LtRpm,
    LtBruhat,
    Compact,
    Tree,
    MatvecBruhat,
    MulLtLt,
    MulLtLtReversed,
    MulQsQs,
}

impl Algo {
    pub const ALL: [Algo; 8] = [
        Algo::LtRpm,
        Algo::LtBruhat,
        Algo::Compact,
        Algo::Tree,
        Algo::MatvecBruhat,
        Algo::MulLtLt,
        Algo::MulLtLtReversed,
        Algo::MulQsQs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::LtRpm => "lt_rpm",
            Algo::LtBruhat => "lt_bruhat",
            Algo::Compact => "compact",
            Algo::Tree => "tree",
            Algo::MatvecBruhat => "matvec_bruhat",
            Algo::MulLtLt => "mul_lt_lt",
            Algo::MulLtLtReversed => "mul_lt_lt_reversed",
            Algo::MulQsQs => "mul_qs_qs",
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub algo: Algo,
    pub n: usize,
    pub s_target: usize,
    pub s_actual: usize,
    pub p: u64,
    pub seed: u64,
    pub counter: OpCounter,
    pub wall_ns: u128,
    pub stored_elems: usize,
}

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.algo.name(),
            self.n,
            self.s_target,
            self.s_actual,
            self.p,
            self.seed,
            self.counter.adds,
            self.counter.muls,
            self.counter.invs,
            self.wall_ns,
            self.stored_elems
        )
    }
}

/// Lower left triangular part of `random_qs(n, s, s, seed)`.
pub fn instance(f: PrimeField, n: usize, s: usize, seed: u64) -> quasisep::Result<DenseMatrix> {
    Ok(lower_left_triangular(&random_qs(n, s, s, seed, f)?))
}

pub fn run_cell(algo: Algo, f: PrimeField, n: usize, s: usize, seed: u64) -> quasisep::Result<BenchRecord> {
    let a = instance(f, n, s, seed)?;
    let s_actual = if n <= ORACLE_CUTOFF {
        qs_order_bruteforce(&a)
    } else {
        qs_order(lt_rpm(&a, &mut OpCounter::new())?.pivots(), n)
    };
    let mut c = OpCounter::new();
    let mut stored = 0;
    let start;
    match algo {
        Algo::LtRpm => {
            start = Instant::now();
            lt_rpm(&a, &mut c)?;
        }
        Algo::LtBruhat => {
            start = Instant::now();
            stored = lt_bruhat(&a, &mut c)?.stored_elems();
        }
        Algo::Compact => {
            start = Instant::now();
            let g = lt_bruhat(&a, &mut c)?;
            stored = compact_bruhat(&g, g.order())?.stored_elems();
        }
        Algo::Tree => {
            start = Instant::now();
            stored = tree_generator(&a, &mut c)?.stored_elems();
        }
        Algo::MatvecBruhat => {
            let g = lt_bruhat(&a, &mut OpCounter::new())?;
            let x: Vec<u64> = (0..n as u64).map(|i| f.reduce(i + 1)).collect();
            stored = g.stored_elems();
            start = Instant::now();
            matvec_bruhat(&g, &x, &mut c)?;
        }
        Algo::MulLtLt | Algo::MulLtLtReversed => {
            let b = instance(f, n, s, seed.wrapping_add(1))?;
            let ga = tree_generator(&a, &mut OpCounter::new())?;
            let gb = tree_generator(&b, &mut OpCounter::new())?;
            stored = ga.stored_elems() + gb.stored_elems();
            let mode = if algo == Algo::MulLtLt { MulMode::Direct } else { MulMode::MiddleReversed };
            start = Instant::now();
            mul_lt_lt(&ga, &gb, mode, &mut c)?;
        }
        Algo::MulQsQs => {
            let qa = qs_from_dense(&random_qs(n, s, s, seed, f)?, RepKind::Tree, &mut OpCounter::new())?;
            let qb = qs_from_dense(&random_qs(n, s, s, seed.wrapping_add(1), f)?, RepKind::Tree, &mut OpCounter::new())?;
            stored = qa.stored_elems() + qb.stored_elems();
            start = Instant::now();
            mul_qs_qs(&qa, &qb, &mut c)?;
        }
    }
    let wall_ns = start.elapsed().as_nanos();
    Ok(BenchRecord {
        algo,
        n,
        s_target: s,
        s_actual,
        p: f.modulus(),
        seed,
        counter: c,
        wall_ns,
        stored_elems: stored,
    })
}

/// One row per `(algo, n, s)` in that nesting order.
pub fn run(algos: &[Algo], ns: &[usize], ss: &[usize], f: PrimeField, seed: u64) -> quasisep::Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &algo in algos {
        for &n in ns {
            for &s in ss {
                out.push(run_cell(algo, f, n, s, seed)?);
            }
        }
    }
    Ok(out)
}

pub fn to_csv(records: &[BenchRecord], wall: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let mut r = r.clone();
        if !wall {
            r.wall_ns = 0;
        }
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_is_header_only() {
        let f = PrimeField::new(65521).unwrap();
        let recs = run(&Algo::ALL, &[], &[4], f, 1).unwrap();
        assert_eq!(to_csv(&recs, true), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn counts_are_deterministic() {
        let f = PrimeField::new(65521).unwrap();
        let a = to_csv(&run(&Algo::ALL, &[16, 32], &[2], f, 9).unwrap(), false);
        let b = to_csv(&run(&Algo::ALL, &[16, 32], &[2], f, 9).unwrap(), false);
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 2 * Algo::ALL.len());
        for line in a.lines().skip(1) {
            assert_eq!(line.split(',').count(), 11);
        }
    }

    #[test]
    fn names_parse_back() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        assert!("lu".parse::<Algo>().is_err());
    }
}
