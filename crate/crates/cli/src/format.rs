//! Plain text formats for matrices and generators.
//!
//! Every format is line oriented: space separated decimal integers, LF line
//! endings, no trailing whitespace. A matrix file is a header `m n p`
//! followed by `m` rows of `n` residues. Generators start with a keyword
//! header (`BRUHAT`, `COMPACT`, `TREE`) and a quasiseparable container with
//! `QS`.

use std::fmt::Write as _;

use quasisep::generators::{
    BruhatGenerator, BruhatPivot, CompactBruhatGenerator, CompactEchelon, LtRep, Placement, QsMatrix,
    TreeGenerator, TreeNode,
};
use quasisep::{DenseMatrix, Permutation, PluqDecomposition, PrimeField};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// Line cursor with 1-based line numbers for error messages.
pub struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Reader { lines, pos: 0 }
    }

    fn err<T>(&self, line: usize, message: impl Into<String>) -> Result<T> {
        Err(FormatError {
            line,
            message: message.into(),
        })
    }

    /// Number of the line that `next_line` would return.
    pub fn line_no(&self) -> usize {
        self.pos + 1
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    pub fn next_line(&mut self) -> Result<(usize, &'a str)> {
        let no = self.line_no();
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                if l.ends_with('\r') {
                    return self.err(no, "CR line endings are not accepted");
                }
                Ok((no, l))
            }
            None => self.err(no, "unexpected end of file"),
        }
    }

    /// Next line as integers; `expected` fixes the count.
    pub fn numbers(&mut self, expected: Option<usize>) -> Result<Vec<u64>> {
        let (no, line) = self.next_line()?;
        let vals = parse_numbers(no, line)?;
        if let Some(k) = expected {
            if vals.len() != k {
                return self.err(no, format!("expected {k} values, found {}", vals.len()));
            }
        }
        Ok(vals)
    }

    /// Next line as residues of `f`.
    pub fn residues(&mut self, f: PrimeField, expected: usize) -> Result<Vec<u64>> {
        let no = self.line_no();
        let vals = self.numbers(Some(expected))?;
        check_residues(no, f, &vals)?;
        Ok(vals)
    }

    /// Next line as `keyword` followed by integers.
    pub fn header(&mut self, keyword: &str, count: usize) -> Result<(usize, Vec<u64>)> {
        let (no, line) = self.next_line()?;
        let mut parts = line.splitn(2, ' ');
        if parts.next() != Some(keyword) {
            return self.err(no, format!("expected a {keyword} header"));
        }
        let vals = parse_numbers(no, parts.next().unwrap_or(""))?;
        if vals.len() != count {
            return self.err(no, format!("{keyword} header takes {count} values, found {}", vals.len()));
        }
        Ok((no, vals))
    }

    pub fn permutation(&mut self, len: usize) -> Result<Permutation> {
        let no = self.line_no();
        let vals = self.numbers(Some(len))?;
        Permutation::from_image(vals.into_iter().map(|v| v as usize).collect()).or_else(|_| self.err(no, "not a permutation"))
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos < self.lines.len() {
            return self.err(self.line_no(), "unexpected content after the end of the data");
        }
        Ok(())
    }
}

fn parse_numbers(no: usize, line: &str) -> Result<Vec<u64>> {
    if line.is_empty() {
        return Ok(Vec::new());
    }
    if line.starts_with(' ') || line.ends_with(' ') || line.contains("  ") {
        return Err(FormatError {
            line: no,
            message: "values must be separated by single spaces without leading or trailing whitespace".into(),
        });
    }
    line.split(' ')
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| FormatError {
                line: no,
                message: format!("invalid integer {tok:?}"),
            })
        })
        .collect()
}

fn check_residues(no: usize, f: PrimeField, vals: &[u64]) -> Result<()> {
    if let Some(v) = vals.iter().find(|&&v| v >= f.modulus()) {
        return Err(FormatError {
            line: no,
            message: format!("{v} is not a residue modulo {}", f.modulus()),
        });
    }
    Ok(())
}

fn field(no: usize, p: u64) -> Result<PrimeField> {
    PrimeField::new(p).map_err(|e| FormatError {
        line: no,
        message: e.to_string(),
    })
}

fn lib_err<T>(no: usize, r: quasisep::Result<T>) -> Result<T> {
    r.map_err(|e| FormatError {
        line: no,
        message: e.to_string(),
    })
}

fn push_line<I: IntoIterator<Item = T>, T: std::fmt::Display>(out: &mut String, vals: I) {
    let mut first = true;
    for v in vals {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{v}").unwrap();
    }
    out.push('\n');
}

// ---- dense matrices ----

pub fn write_matrix(m: &DenseMatrix) -> String {
    let mut out = String::new();
    push_line(&mut out, [m.rows() as u64, m.cols() as u64, m.field().modulus()]);
    for i in 0..m.rows() {
        push_line(&mut out, m.row(i).iter());
    }
    out
}

fn read_matrix_body(r: &mut Reader<'_>) -> Result<DenseMatrix> {
    let no = r.line_no();
    let head = r.numbers(None)?;
    let [m, n, p] = head[..] else {
        return Err(FormatError {
            line: no,
            message: "matrix header must be `rows cols p`".into(),
        });
    };
    let f = field(no, p)?;
    let (m, n) = (m as usize, n as usize);
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        data.extend(r.residues(f, n)?);
    }
    lib_err(no, DenseMatrix::from_row_major(f, m, n, data))
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut r = Reader::new(text);
    let m = read_matrix_body(&mut r)?;
    r.finish()?;
    Ok(m)
}

// ---- Bruhat generator ----

pub fn write_bruhat(g: &BruhatGenerator, out: &mut String) {
    push_line(out, ["BRUHAT".to_string(), g.n().to_string(), g.field().modulus().to_string(), g.rank().to_string()]);
    for p in g.pivots() {
        push_line(out, [p.row, p.col]);
    }
    for p in g.pivots() {
        push_line(out, p.lower.iter());
        push_line(out, p.upper.iter());
    }
}

fn read_bruhat(r: &mut Reader<'_>) -> Result<BruhatGenerator> {
    let (no, h) = r.header("BRUHAT", 3)?;
    let (n, f, rank) = (h[0] as usize, field(no, h[1])?, h[2] as usize);
    let mut pos = Vec::with_capacity(rank);
    for _ in 0..rank {
        let pno = r.line_no();
        let v = r.numbers(Some(2))?;
        let (row, col) = (v[0] as usize, v[1] as usize);
        if row + col + 2 > n {
            return Err(FormatError {
                line: pno,
                message: format!("pivot ({row}, {col}) lies outside the left triangle"),
            });
        }
        pos.push((row, col));
    }
    let mut pivots = Vec::with_capacity(rank);
    for (row, col) in pos {
        let len = n - 1 - row - col;
        let lower = r.residues(f, len)?;
        let upper = r.residues(f, len)?;
        pivots.push(BruhatPivot { row, col, lower, upper });
    }
    lib_err(no, BruhatGenerator::new(n, f, pivots))
}

// ---- compact Bruhat generator ----

fn write_echelon(e: &CompactEchelon, out: &mut String) {
    push_line(out, e.block_rows().iter());
    for d in e.diag_blocks() {
        push_line(out, d.as_slice().iter());
    }
    for s in e.sub_blocks() {
        push_line(out, s.as_slice().iter());
    }
    push_line(out, e.t_map().iter());
    push_line(out, e.perm().image().iter());
}

pub fn write_compact(g: &CompactBruhatGenerator, out: &mut String) {
    push_line(
        out,
        [
            "COMPACT".to_string(),
            g.n().to_string(),
            g.field().modulus().to_string(),
            g.block_width().to_string(),
            g.rank().to_string(),
            g.lower().blocks().to_string(),
        ],
    );
    write_echelon(g.lower(), out);
    write_echelon(g.upper(), out);
    push_line(out, g.r().image().iter());
}

fn width(r: usize, s: usize, b: usize) -> usize {
    r.saturating_sub(b * s).min(s)
}

fn read_echelon(r: &mut Reader<'_>, n: usize, f: PrimeField, s: usize, rank: usize, t: usize) -> Result<CompactEchelon> {
    let no = r.line_no();
    let block_rows: Vec<usize> = r.numbers(Some(t))?.into_iter().map(|v| v as usize).collect();
    if block_rows.iter().sum::<usize>() != n {
        return Err(FormatError {
            line: no,
            message: format!("block rows must sum to {n}"),
        });
    }
    let mut diag = Vec::with_capacity(t);
    for (b, &k) in block_rows.iter().enumerate() {
        let w = width(rank, s, b);
        let bno = r.line_no();
        let vals = r.residues(f, k * w)?;
        diag.push(lib_err(bno, DenseMatrix::from_row_major(f, k, w, vals))?);
    }
    let mut sub = Vec::with_capacity(t.saturating_sub(1));
    for (b, &k) in block_rows.iter().enumerate().skip(1) {
        let w = width(rank, s, b - 1);
        let bno = r.line_no();
        let vals = r.residues(f, k * w)?;
        sub.push(lib_err(bno, DenseMatrix::from_row_major(f, k, w, vals))?);
    }
    let t_map: Vec<usize> = r.numbers(Some(rank))?.into_iter().map(|v| v as usize).collect();
    let perm = r.permutation(n)?;
    lib_err(no, CompactEchelon::from_parts(n, f, s, perm, block_rows, diag, sub, t_map))
}

fn read_compact(r: &mut Reader<'_>) -> Result<CompactBruhatGenerator> {
    let (no, h) = r.header("COMPACT", 5)?;
    let (n, f) = (h[0] as usize, field(no, h[1])?);
    let (s, rank, t) = (h[2] as usize, h[3] as usize, h[4] as usize);
    let expected_t = if rank == 0 { 1 } else if s == 0 { 0 } else { rank.div_ceil(s) };
    if t != expected_t || rank > n {
        return Err(FormatError {
            line: no,
            message: "block count does not match rank and block width".into(),
        });
    }
    let lower = read_echelon(r, n, f, s, rank, t)?;
    let upper = read_echelon(r, n, f, s, rank, t)?;
    let rperm = r.permutation(rank)?;
    lib_err(no, CompactBruhatGenerator::from_parts(lower, upper, rperm))
}

// ---- tree generator ----

fn write_node(node: &TreeNode, out: &mut String) {
    match node {
        TreeNode::Leaf(m) => {
            push_line(out, ["LEAF".to_string(), m.rows().to_string()]);
            push_line(out, m.as_slice().iter());
        }
        TreeNode::Node {
            size,
            pluq,
            top_right,
            bottom_left,
        } => {
            push_line(out, ["NODE".to_string(), size.to_string(), pluq.rank().to_string()]);
            push_line(out, pluq.p.image().iter());
            push_line(out, pluq.q.image().iter());
            push_line(out, pluq.l.as_slice().iter());
            push_line(out, pluq.u.as_slice().iter());
            write_node(top_right, out);
            write_node(bottom_left, out);
        }
    }
}

pub fn write_tree(g: &TreeGenerator, out: &mut String) {
    let Placement { row, col } = g.placement();
    out.push_str("TREE ");
    push_line(
        out,
        [g.n() as u64, g.field().modulus(), g.size() as u64, g.leaf_size() as u64, row as u64, col as u64],
    );
    write_node(g.root(), out);
}

fn read_node(r: &mut Reader<'_>, f: PrimeField, expected: usize, depth: usize) -> Result<TreeNode> {
    let no = r.line_no();
    let bad = |message: &str| FormatError {
        line: no,
        message: message.into(),
    };
    if depth > 64 {
        return Err(bad("tree is too deep"));
    }
    let line = r.peek().unwrap_or("");
    if line.starts_with("LEAF") {
        let (_, h) = r.header("LEAF", 1)?;
        let m = h[0] as usize;
        if m != expected {
            return Err(bad("leaf size does not match its position"));
        }
        let vals = r.residues(f, m * m)?;
        return lib_err(no, DenseMatrix::from_row_major(f, m, m, vals)).map(TreeNode::Leaf);
    }
    let (_, h) = r.header("NODE", 2)?;
    let (size, rank) = (h[0] as usize, h[1] as usize);
    if size != expected || size < 2 {
        return Err(bad("node size does not match its position"));
    }
    let half = size / 2;
    if rank > half {
        return Err(bad("rank exceeds the block size"));
    }
    let p = r.permutation(half)?;
    let q = r.permutation(half)?;
    let lno = r.line_no();
    let l = lib_err(lno, DenseMatrix::from_row_major(f, half, rank, r.residues(f, half * rank)?))?;
    let uno = r.line_no();
    let u = lib_err(uno, DenseMatrix::from_row_major(f, rank, half, r.residues(f, rank * half)?))?;
    let pluq = PluqDecomposition { p, l, u, q };
    let top_right = read_node(r, f, half, depth + 1)?;
    let bottom_left = read_node(r, f, half, depth + 1)?;
    Ok(TreeNode::Node {
        size,
        pluq,
        top_right: Box::new(top_right),
        bottom_left: Box::new(bottom_left),
    })
}

fn read_tree(r: &mut Reader<'_>) -> Result<TreeGenerator> {
    let (no, h) = r.header("TREE", 6)?;
    let (n, f, size, leaf) = (h[0] as usize, field(no, h[1])?, h[2] as usize, h[3] as usize);
    let placement = Placement {
        row: h[4] as usize,
        col: h[5] as usize,
    };
    if size != n.max(1).next_power_of_two() {
        return Err(FormatError {
            line: no,
            message: "padded size must be the next power of two".into(),
        });
    }
    let root = read_node(r, f, size, 0)?;
    lib_err(no, TreeGenerator::from_parts(n, placement, leaf, root))
}

// ---- left triangular representations and the container ----

pub fn write_lt(rep: &LtRep, out: &mut String) {
    match rep {
        LtRep::Tree(g) => write_tree(g, out),
        LtRep::Bruhat(g) => write_bruhat(g, out),
        LtRep::Compact(g) => write_compact(g, out),
    }
}

pub fn read_lt(r: &mut Reader<'_>) -> Result<LtRep> {
    let line = r.peek().unwrap_or("");
    let keyword = line.split(' ').next().unwrap_or("");
    match keyword {
        "TREE" => read_tree(r).map(LtRep::Tree),
        "BRUHAT" => read_bruhat(r).map(LtRep::Bruhat),
        "COMPACT" => read_compact(r).map(LtRep::Compact),
        _ => Err(FormatError {
            line: r.line_no(),
            message: "expected a TREE, BRUHAT or COMPACT header".into(),
        }),
    }
}

/// A single left triangular generator file.
pub fn parse_lt(text: &str) -> Result<LtRep> {
    let mut r = Reader::new(text);
    let g = read_lt(&mut r)?;
    r.finish()?;
    Ok(g)
}

pub fn write_lt_file(rep: &LtRep) -> String {
    let mut out = String::new();
    write_lt(rep, &mut out);
    out
}

/// `QS n p kind`, the diagonal, then the generators of `J strictlower(M)`
/// and `strictupper(M) J`.
pub fn write_qs(m: &QsMatrix) -> String {
    let mut out = String::new();
    push_line(
        &mut out,
        ["QS".to_string(), m.n().to_string(), m.field().modulus().to_string(), m.kind().name().to_string()],
    );
    push_line(&mut out, m.diag().iter());
    write_lt(m.lower(), &mut out);
    write_lt(m.upper(), &mut out);
    out
}

pub fn parse_qs(text: &str) -> Result<QsMatrix> {
    let mut r = Reader::new(text);
    let (no, line) = r.next_line()?;
    let parts: Vec<&str> = line.split(' ').collect();
    let bad = |message: &str| FormatError {
        line: no,
        message: message.into(),
    };
    if parts.len() != 4 || parts[0] != "QS" {
        return Err(bad("expected header `QS n p kind`"));
    }
    let n: usize = parts[1].parse().map_err(|_| bad("invalid n"))?;
    let p: u64 = parts[2].parse().map_err(|_| bad("invalid modulus"))?;
    let kind: quasisep::generators::RepKind = parts[3].parse().map_err(|_| bad("unknown representation kind"))?;
    let f = field(no, p)?;
    let diag = r.residues(f, n)?;
    let lower = read_lt(&mut r)?;
    let upper = read_lt(&mut r)?;
    r.finish()?;
    if lower.kind() != kind || upper.kind() != kind {
        return Err(bad("generator kinds differ from the header"));
    }
    if lower.field() != f || upper.field() != f {
        return Err(bad("generator modulus differs from the header"));
    }
    lib_err(no, QsMatrix::from_parts(diag, lower, upper))
}

/// Either a dense matrix or a `QS` container.
pub enum Input {
    Dense(DenseMatrix),
    Qs(Box<QsMatrix>),
}

pub fn parse_input(text: &str) -> Result<Input> {
    if text.starts_with("QS ") {
        parse_qs(text).map(|q| Input::Qs(Box::new(q)))
    } else {
        parse_matrix(text).map(Input::Dense)
    }
}
