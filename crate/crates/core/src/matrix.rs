//! Dense matrices over a prime field: rank by elimination, blocked
//! rectangular multiplication with pluggable square kernels, low-rank +
//! sparse reconstruction checks, and a brute-force rigidity counter.

use crate::error::{parse_err, Error, Result};
use crate::field::Gf;

/// Cell budget for [`brute_rigidity`]'s support enumeration.
pub const MAX_RIGIDITY_CELLS: u64 = 16;

/// Default per-support cap on nonzero value combinations in
/// [`brute_rigidity`]; exceeding it refuses rather than approximating.
pub const DEFAULT_RIGIDITY_COMBOS: u64 = 1 << 16;

/// A dense row-major matrix with entries reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    gf: Gf,
    entries: Vec<u64>,
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, gf: Gf, entries: Vec<u64>) -> Result<FieldMatrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix dimensions must be positive".into()));
        }
        let total = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::Invalid(format!("matrix shape {rows}x{cols} overflows")))?;
        if entries.len() != total {
            return Err(Error::Invalid(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|&&e| e >= gf.p()) {
            return Err(Error::Invalid(format!(
                "entry {e} outside field of order {}",
                gf.p()
            )));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            gf,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, gf: Gf) -> FieldMatrix {
        FieldMatrix::new(rows, cols, gf, vec![0; rows * cols]).unwrap()
    }

    pub fn identity(n: usize, gf: Gf) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(n, n, gf);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn random(rows: usize, cols: usize, gf: Gf, rng: &mut impl rand::Rng) -> FieldMatrix {
        let entries = (0..rows * cols).map(|_| rng.random_range(0..gf.p())).collect();
        FieldMatrix::new(rows, cols, gf, entries).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn gf(&self) -> Gf {
        self.gf
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = self.gf.el(v);
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.gf != other.gf {
            return Err(Error::Invalid("field mismatch".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Invalid("shape mismatch in addition".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.gf.add(a, b))
            .collect();
        FieldMatrix::new(self.rows, self.cols, self.gf, entries)
    }

    pub fn sub(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Invalid("shape mismatch in subtraction".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.gf.sub(a, b))
            .collect();
        FieldMatrix::new(self.rows, self.cols, self.gf, entries)
    }

    /// Plain cubic multiplication; the oracle every blocked variant is
    /// tested against.
    pub fn mul_naive(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Invalid(format!(
                "inner dimensions {} and {} differ",
                self.cols, other.rows
            )));
        }
        let gf = self.gf;
        let mut out = FieldMatrix::zeros(self.rows, other.cols, gf);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = gf.add(out.get(i, j), gf.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(self.cols, self.rows, self.gf);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Outer product of a column and a row vector.
    pub fn outer(col: &[u64], row: &[u64], gf: Gf) -> Result<FieldMatrix> {
        if col.is_empty() || row.is_empty() {
            return Err(Error::Invalid("empty outer-product vector".into()));
        }
        let mut out = FieldMatrix::zeros(col.len(), row.len(), gf);
        for (r, &a) in col.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                out.set(r, c, gf.mul(gf.el(a), gf.el(b)));
            }
        }
        Ok(out)
    }

    /// Copies `self` into the top-left corner of a zero matrix of the given
    /// (not smaller) shape.
    pub fn padded(&self, rows: usize, cols: usize) -> FieldMatrix {
        assert!(rows >= self.rows && cols >= self.cols);
        let mut out = FieldMatrix::zeros(rows, cols, self.gf);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    /// Top-left `rows` x `cols` submatrix.
    pub fn cropped(&self, rows: usize, cols: usize) -> FieldMatrix {
        assert!(rows <= self.rows && cols <= self.cols);
        let mut out = FieldMatrix::zeros(rows, cols, self.gf);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    fn block(&self, br: usize, bc: usize, size: usize) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(size, size, self.gf);
        for r in 0..size {
            for c in 0..size {
                out.set(r, c, self.get(br * size + r, bc * size + c));
            }
        }
        out
    }

    /// `mat <rows> <cols> <p>` header, then one line of decimals per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("mat {} {} {}\n", self.rows, self.cols, self.gf.p());
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<FieldMatrix> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("mat") {
            return Err(parse_err(1, "expected `mat <rows> <cols> <p>` header"));
        }
        let rows: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad row count"))?;
        let cols: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad column count"))?;
        let p: u64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad modulus"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let gf = Gf::new(p)?;
        // declared sizes are untrusted: grow with the actual content
        let mut entries = Vec::new();
        for _ in 0..rows {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer rows than declared"))?;
            let row: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(parse_err(
                    lineno + 1,
                    format!("{} entries in a row of declared width {cols}", row.len()),
                ));
            }
            entries.extend(row);
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(parse_err(lineno + 1, "content after final row"));
        }
        FieldMatrix::new(rows, cols, gf, entries)
    }
}

/// Gaussian elimination over F_p.
pub fn mat_rank(m: &FieldMatrix) -> usize {
    let gf = m.gf();
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..a.cols() {
        let pivot = (rank..a.rows()).find(|&r| a.get(r, col) != 0);
        let Some(pr) = pivot else { continue };
        // swap pivot row up
        for c in 0..a.cols() {
            let (x, y) = (a.get(rank, c), a.get(pr, c));
            a.set(rank, c, y);
            a.set(pr, c, x);
        }
        let inv = gf.inv(a.get(rank, col)).expect("pivot is nonzero");
        for c in 0..a.cols() {
            let v = gf.mul(a.get(rank, c), inv);
            a.set(rank, c, v);
        }
        for r in 0..a.rows() {
            if r != rank && a.get(r, col) != 0 {
                let f = a.get(r, col);
                for c in 0..a.cols() {
                    let v = gf.sub(a.get(r, c), gf.mul(f, a.get(rank, c)));
                    a.set(r, c, v);
                }
            }
        }
        rank += 1;
        if rank == a.rows() {
            break;
        }
    }
    rank
}

/// Square-multiplier plugged into [`mat_mul_blocked`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MulKernel {
    #[default]
    Naive,
    Strassen,
}

impl MulKernel {
    /// Multiplies two same-size square matrices.
    pub fn mul_square(&self, a: &FieldMatrix, b: &FieldMatrix) -> Result<FieldMatrix> {
        assert_eq!(a.rows(), a.cols());
        assert_eq!(b.rows(), b.cols());
        assert_eq!(a.rows(), b.rows());
        match self {
            MulKernel::Naive => a.mul_naive(b),
            MulKernel::Strassen => {
                a.same_field(b)?;
                let n = a.rows();
                let full = n.next_power_of_two();
                let out = strassen_pow2(&a.padded(full, full), &b.padded(full, full));
                Ok(out.cropped(n, n))
            }
        }
    }
}

/// Seven-multiplication recursion on power-of-two sizes; falls back to the
/// cubic loop at small blocks where recursion overhead dominates.
fn strassen_pow2(a: &FieldMatrix, b: &FieldMatrix) -> FieldMatrix {
    let n = a.rows();
    if n <= 8 {
        return a.mul_naive(b).unwrap();
    }
    let h = n / 2;
    let gf = a.gf();
    let quad = |m: &FieldMatrix, r: usize, c: usize| -> FieldMatrix {
        let mut out = FieldMatrix::zeros(h, h, gf);
        for i in 0..h {
            for j in 0..h {
                out.set(i, j, m.get(r * h + i, c * h + j));
            }
        }
        out
    };
    let (a11, a12, a21, a22) = (quad(a, 0, 0), quad(a, 0, 1), quad(a, 1, 0), quad(a, 1, 1));
    let (b11, b12, b21, b22) = (quad(b, 0, 0), quad(b, 0, 1), quad(b, 1, 0), quad(b, 1, 1));
    let m1 = strassen_pow2(&a11.add(&a22).unwrap(), &b11.add(&b22).unwrap());
    let m2 = strassen_pow2(&a21.add(&a22).unwrap(), &b11);
    let m3 = strassen_pow2(&a11, &b12.sub(&b22).unwrap());
    let m4 = strassen_pow2(&a22, &b21.sub(&b11).unwrap());
    let m5 = strassen_pow2(&a11.add(&a12).unwrap(), &b22);
    let m6 = strassen_pow2(&a21.sub(&a11).unwrap(), &b11.add(&b12).unwrap());
    let m7 = strassen_pow2(&a12.sub(&a22).unwrap(), &b21.add(&b22).unwrap());
    let c11 = m1.add(&m4).unwrap().sub(&m5).unwrap().add(&m7).unwrap();
    let c12 = m3.add(&m5).unwrap();
    let c21 = m2.add(&m4).unwrap();
    let c22 = m1.sub(&m2).unwrap().add(&m3).unwrap().add(&m6).unwrap();
    let mut out = FieldMatrix::zeros(n, n, gf);
    for (qr, qc, q) in [(0, 0, &c11), (0, 1, &c12), (1, 0, &c21), (1, 1, &c22)] {
        for i in 0..h {
            for j in 0..h {
                out.set(qr * h + i, qc * h + j, q.get(i, j));
            }
        }
    }
    out
}

/// Rectangular product by partitioning into `block`-sized squares: all three
/// dimensions are zero-padded up to block multiples, block products are
/// accumulated, and the result is cropped back.
pub fn mat_mul_blocked(
    a: &FieldMatrix,
    b: &FieldMatrix,
    block: usize,
    kernel: MulKernel,
) -> Result<FieldMatrix> {
    a.same_field(b)?;
    if a.cols() != b.rows() {
        return Err(Error::Invalid(format!(
            "inner dimensions {} and {} differ",
            a.cols(),
            b.rows()
        )));
    }
    if block == 0 {
        return Err(Error::Invalid("block size must be positive".into()));
    }
    let gf = a.gf();
    let pad = |d: usize| d.div_ceil(block) * block;
    let (ra, rn, rb) = (pad(a.rows()), pad(a.cols()), pad(b.cols()));
    let ap = a.padded(ra, rn);
    let bp = b.padded(rn, rb);
    let mut out = FieldMatrix::zeros(ra, rb, gf);
    for bi in 0..ra / block {
        for bj in 0..rb / block {
            let mut acc = FieldMatrix::zeros(block, block, gf);
            for bk in 0..rn / block {
                let prod = kernel.mul_square(&ap.block(bi, bk, block), &bp.block(bk, bj, block))?;
                acc = acc.add(&prod)?;
            }
            for r in 0..block {
                for c in 0..block {
                    out.set(bi * block + r, bj * block + c, acc.get(r, c));
                }
            }
        }
    }
    Ok(out.cropped(a.rows(), b.cols()))
}

/// Rank factors for a matrix: pairs of (column vector, row vector) whose
/// outer products sum to the low-rank part.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatrixFactors {
    pub pairs: Vec<(Vec<u64>, Vec<u64>)>,
}

impl MatrixFactors {
    /// `factors <count> pair` header, then alternating column/row vector
    /// lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("factors {} pair\n", self.pairs.len());
        for (a, b) in &self.pairs {
            let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            out.push_str(&fmt(a));
            out.push('\n');
            out.push_str(&fmt(b));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<MatrixFactors> {
        let vectors = parse_factor_lines(text, "pair", 2)?;
        let pairs = vectors
            .into_iter()
            .map(|mut v| {
                let b = v.pop().unwrap();
                let a = v.pop().unwrap();
                (a, b)
            })
            .collect();
        Ok(MatrixFactors { pairs })
    }

    /// Sum of the outer products, bound to a concrete shape and field.
    pub fn reconstruct(&self, rows: usize, cols: usize, gf: Gf) -> Result<FieldMatrix> {
        let mut acc = FieldMatrix::zeros(rows, cols, gf);
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if a.len() != rows || b.len() != cols {
                return Err(Error::Invalid(format!(
                    "factor {}: vector lengths {}/{} for a {rows}x{cols} matrix",
                    i + 1,
                    a.len(),
                    b.len()
                )));
            }
            check_field(a, gf)?;
            check_field(b, gf)?;
            acc = acc.add(&FieldMatrix::outer(a, b, gf)?)?;
        }
        Ok(acc)
    }
}

pub(crate) fn check_field(v: &[u64], gf: Gf) -> Result<()> {
    if let Some(e) = v.iter().find(|&&e| e >= gf.p()) {
        return Err(Error::Invalid(format!(
            "entry {e} outside field of order {}",
            gf.p()
        )));
    }
    Ok(())
}

/// Shared reader for `factors <count> <kind>` files; returns `count` groups
/// of `group` vectors each.
pub(crate) fn parse_factor_lines(
    text: &str,
    kind: &str,
    group: usize,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("factors") {
        return Err(parse_err(1, "expected `factors <count> <kind>` header"));
    }
    let count: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(1, "bad factor count"))?;
    match it.next() {
        Some(k) if k == kind => {}
        Some(k) => return Err(parse_err(1, format!("expected kind `{kind}`, found `{k}`"))),
        None => return Err(parse_err(1, "missing factor kind")),
    }
    if it.next().is_some() {
        return Err(parse_err(1, "trailing tokens after header"));
    }
    // declared counts are untrusted: grow with the actual content
    let mut groups = Vec::new();
    for _ in 0..count {
        let mut vs = Vec::new();
        for _ in 0..group {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer vectors than declared"))?;
            let v: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if v.is_empty() {
                return Err(parse_err(lineno + 1, "empty vector"));
            }
            vs.push(v);
        }
        groups.push(vs);
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno + 1, "content after final vector"));
    }
    Ok(groups)
}

/// Explicit sparse corrections: (row, col, value) with distinct positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseEntries {
    pub entries: Vec<(usize, usize, u64)>,
}

impl SparseEntries {
    pub fn validate(&self, rows: usize, cols: usize, gf: Gf) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for &(r, c, v) in &self.entries {
            if r >= rows || c >= cols {
                return Err(Error::Invalid(format!(
                    "sparse entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            if v >= gf.p() {
                return Err(Error::Invalid(format!(
                    "entry {v} outside field of order {}",
                    gf.p()
                )));
            }
            if !seen.insert((r, c)) {
                return Err(Error::Invalid(format!("duplicate sparse position ({r},{c})")));
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self, rows: usize, cols: usize, gf: Gf) -> Result<FieldMatrix> {
        self.validate(rows, cols, gf)?;
        let mut m = FieldMatrix::zeros(rows, cols, gf);
        for &(r, c, v) in &self.entries {
            m.set(r, c, v);
        }
        Ok(m)
    }
}

/// Outcome of a reconstruction check: 0 residues means exact agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorCheck {
    /// Number of entries where the reconstruction differs from the target.
    pub residues: usize,
}

impl FactorCheck {
    pub fn accepted(&self) -> bool {
        self.residues == 0
    }
}

/// Does `Σ outer products + S` reconstruct `M` exactly?  Counts the
/// disagreeing entries instead of stopping at the first.
pub fn verify_matrix_factors(
    m: &FieldMatrix,
    factors: &MatrixFactors,
    sparse: &SparseEntries,
) -> Result<FactorCheck> {
    let low = factors.reconstruct(m.rows(), m.cols(), m.gf())?;
    let s = sparse.to_matrix(m.rows(), m.cols(), m.gf())?;
    let rebuilt = low.add(&s)?;
    let residues = m
        .entries()
        .iter()
        .zip(rebuilt.entries())
        .filter(|(a, b)| a != b)
        .count();
    Ok(FactorCheck { residues })
}

/// Minimum number of entry changes that bring `M`'s rank down to `r`, by
/// support enumeration in increasing size with exhaustive nonzero values per
/// support.  Exact or refused: a support whose value combinations exceed
/// `max_combos` is a size error, never an approximation.
pub fn brute_rigidity(m: &FieldMatrix, r: usize, max_combos: u64) -> Result<usize> {
    let cells = m.rows() * m.cols();
    if cells as u64 > MAX_RIGIDITY_CELLS {
        return Err(Error::SizeBound {
            what: "rigidity cells",
            limit: MAX_RIGIDITY_CELLS,
            got: cells as u64,
        });
    }
    let gf = m.gf();
    let nonzero = gf.p() - 1;
    for s in 0..=cells {
        // combos per support: (p-1)^s, refusing on overflow of the budget
        let mut combos: u64 = 1;
        for _ in 0..s {
            combos = combos.saturating_mul(nonzero);
        }
        if combos > max_combos {
            return Err(Error::SizeBound {
                what: "value combinations per support",
                limit: max_combos,
                got: combos,
            });
        }
        let mut support: Vec<usize> = (0..s).collect();
        'supports: loop {
            // try every all-nonzero assignment on this support
            for combo_idx in 0..combos {
                let mut changed = m.clone();
                let mut rem = combo_idx;
                for &cell in &support {
                    let delta = 1 + rem % nonzero;
                    rem /= nonzero;
                    let (rr, cc) = (cell / m.cols(), cell % m.cols());
                    changed.set(rr, cc, gf.sub(m.get(rr, cc), delta));
                }
                if mat_rank(&changed) <= r {
                    return Ok(s);
                }
            }
            // advance to the lexicographically next size-s combination
            let mut i = s;
            loop {
                if i == 0 {
                    break 'supports; // all combinations of this size exhausted
                }
                i -= 1;
                if support[i] < i + cells - s {
                    support[i] += 1;
                    for j in i + 1..s {
                        support[j] = support[j - 1] + 1;
                    }
                    continue 'supports;
                }
            }
        }
    }
    unreachable!("changing every nonzero entry zeroes the matrix, and rank 0 <= r")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Gf {
        Gf::new(2).unwrap()
    }

    fn big() -> Gf {
        Gf::default_field()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(mat_rank(&FieldMatrix::identity(2, big())), 2);
        assert_eq!(mat_rank(&FieldMatrix::zeros(3, 2, big())), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Vec<u64> = (0..3).map(|_| rng.random_range(1..big().p())).collect();
            let b: Vec<u64> = (0..3).map(|_| rng.random_range(1..big().p())).collect();
            let m = FieldMatrix::outer(&a, &b, big()).unwrap();
            assert_eq!(mat_rank(&m), 1);
        }
    }

    #[test]
    fn rank_three_by_three_vs_minor_enumeration() {
        // all 2^9 matrices over F_2: elimination rank equals the largest
        // size of a nonvanishing minor
        let gf = f2();
        for bits in 0..1u32 << 9 {
            let entries: Vec<u64> = (0..9).map(|i| (bits >> i & 1) as u64).collect();
            let m = FieldMatrix::new(3, 3, gf, entries).unwrap();
            let det2 = |r0: usize, r1: usize, c0: usize, c1: usize| {
                (m.get(r0, c0) * m.get(r1, c1) + m.get(r0, c1) * m.get(r1, c0)) % 2
            };
            let mut minor_rank = 0;
            if m.entries().iter().any(|&e| e != 0) {
                minor_rank = 1;
            }
            'outer: for rows in [(0, 1), (0, 2), (1, 2)] {
                for cols in [(0, 1), (0, 2), (1, 2)] {
                    if det2(rows.0, rows.1, cols.0, cols.1) != 0 {
                        minor_rank = 2;
                        break 'outer;
                    }
                }
            }
            // 3x3 determinant over F_2 by cofactor expansion
            let det3 = (m.get(0, 0) * det2(1, 2, 1, 2)
                + m.get(0, 1) * det2(1, 2, 0, 2)
                + m.get(0, 2) * det2(1, 2, 0, 1))
                % 2;
            if det3 != 0 {
                minor_rank = 3;
            }
            assert_eq!(mat_rank(&m), minor_rank, "entries {:?}", m.entries());
        }
    }

    #[test]
    fn rank_subadditivity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = FieldMatrix::random(4, 5, big(), &mut rng);
            let b = FieldMatrix::random(4, 5, big(), &mut rng);
            assert!(mat_rank(&a.add(&b).unwrap()) <= mat_rank(&a) + mat_rank(&b));
        }
    }

    #[test]
    fn blocked_equals_naive_on_worked_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = FieldMatrix::random(4, 2, big(), &mut rng);
        let b = FieldMatrix::random(2, 4, big(), &mut rng);
        assert_eq!(
            mat_mul_blocked(&a, &b, 2, MulKernel::Naive).unwrap(),
            a.mul_naive(&b).unwrap()
        );
        let a = FieldMatrix::random(6, 3, f2(), &mut rng);
        let b = FieldMatrix::random(3, 6, f2(), &mut rng);
        assert_eq!(
            mat_mul_blocked(&a, &b, 3, MulKernel::Naive).unwrap(),
            a.mul_naive(&b).unwrap()
        );
    }

    #[test]
    fn identity_is_neutral_under_blocking() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = FieldMatrix::random(5, 3, big(), &mut rng);
        let id = FieldMatrix::identity(3, big());
        assert_eq!(mat_mul_blocked(&a, &id, 2, MulKernel::Naive).unwrap(), a);
    }

    #[test]
    fn blocked_equals_naive_many_random_shapes_and_kernels() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let gf = if trial % 3 == 0 { f2() } else { big() };
            let (m, n, k) = (
                rng.random_range(1..=7),
                rng.random_range(1..=7),
                rng.random_range(1..=7),
            );
            let a = FieldMatrix::random(m, n, gf, &mut rng);
            let b = FieldMatrix::random(n, k, gf, &mut rng);
            let want = a.mul_naive(&b).unwrap();
            for block in 1..=4 {
                for kernel in [MulKernel::Naive, MulKernel::Strassen] {
                    assert_eq!(
                        mat_mul_blocked(&a, &b, block, kernel).unwrap(),
                        want,
                        "{m}x{n}x{k} block {block} {kernel:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn strassen_kernel_matches_naive_on_larger_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [9usize, 16, 17] {
            let a = FieldMatrix::random(n, n, big(), &mut rng);
            let b = FieldMatrix::random(n, n, big(), &mut rng);
            assert_eq!(
                MulKernel::Strassen.mul_square(&a, &b).unwrap(),
                a.mul_naive(&b).unwrap()
            );
        }
    }

    #[test]
    fn inner_dimension_mismatch_is_an_error() {
        let a = FieldMatrix::zeros(2, 3, big());
        let b = FieldMatrix::zeros(2, 2, big());
        assert!(mat_mul_blocked(&a, &b, 2, MulKernel::Naive).is_err());
        assert!(a.mul_naive(&b).is_err());
    }

    #[test]
    fn factor_verification_trivial_decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = FieldMatrix::random(3, 4, big(), &mut rng);
        // empty factors, all entries sparse
        let sparse = SparseEntries {
            entries: (0..3)
                .flat_map(|r| (0..4).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, m.get(r, c)))
                .collect(),
        };
        let check = verify_matrix_factors(&m, &MatrixFactors::default(), &sparse).unwrap();
        assert!(check.accepted());
        // rows as outer products with unit vectors, empty sparse part
        let pairs = (0..3)
            .map(|r| {
                let mut e = vec![0u64; 3];
                e[r] = 1;
                let row: Vec<u64> = (0..4).map(|c| m.get(r, c)).collect();
                (e, row)
            })
            .collect();
        let check =
            verify_matrix_factors(&m, &MatrixFactors { pairs }, &SparseEntries::default())
                .unwrap();
        assert!(check.accepted());
    }

    #[test]
    fn perturbed_sparse_entry_rejects_with_residue_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = FieldMatrix::random(2, 2, big(), &mut rng);
        let mut entries: Vec<(usize, usize, u64)> = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, m.get(r, c)))
            .collect();
        entries[3].2 = m.gf().add(entries[3].2, 1);
        let check = verify_matrix_factors(
            &m,
            &MatrixFactors::default(),
            &SparseEntries { entries },
        )
        .unwrap();
        assert_eq!(check.residues, 1);
    }

    #[test]
    fn factor_file_roundtrip_and_errors() {
        let f = MatrixFactors {
            pairs: vec![(vec![1, 0], vec![3, 4, 5]), (vec![0, 1], vec![6, 7, 8])],
        };
        let text = f.to_text();
        assert_eq!(MatrixFactors::parse_text(&text).unwrap(), f);
        assert!(MatrixFactors::parse_text("factors 1 triple\n1\n1\n1\n").is_err());
        assert!(MatrixFactors::parse_text("factors 2 pair\n1\n1\n").is_err());
        assert!(MatrixFactors::parse_text("factors 1 pair\n1\nx\n").is_err());
    }

    #[test]
    fn matrix_file_roundtrip_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = FieldMatrix::random(3, 2, big(), &mut rng);
        assert_eq!(FieldMatrix::parse_text(&m.to_text()).unwrap(), m);
        assert!(FieldMatrix::parse_text("mat 2 2 4\n0 0\n0 0\n").is_err()); // non-prime
        assert!(FieldMatrix::parse_text("mat 2 2 2\n0 0\n").is_err()); // short
        assert!(FieldMatrix::parse_text("mat 2 2 2\n0 0 0\n0 0\n").is_err()); // wide row
        assert!(FieldMatrix::parse_text("mat 2 2 2\n0 0\n0 2\n").is_err()); // entry >= p
        assert!(FieldMatrix::parse_text("mat 2 2 2\n0 0\n0 0\n1\n").is_err()); // trailing
    }

    #[test]
    fn rigidity_worked_examples() {
        let gf = f2();
        let zero = FieldMatrix::zeros(2, 2, gf);
        assert_eq!(brute_rigidity(&zero, 0, DEFAULT_RIGIDITY_COMBOS).unwrap(), 0);
        let id = FieldMatrix::identity(2, gf);
        assert_eq!(brute_rigidity(&id, 1, DEFAULT_RIGIDITY_COMBOS).unwrap(), 1);
        assert_eq!(brute_rigidity(&id, 2, DEFAULT_RIGIDITY_COMBOS).unwrap(), 0);
        assert_eq!(brute_rigidity(&id, 0, DEFAULT_RIGIDITY_COMBOS).unwrap(), 2);
    }

    #[test]
    fn rigidity_zero_iff_rank_already_low() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let m = FieldMatrix::random(2, 2, f2(), &mut rng);
            for r in 0..=2 {
                let rig = brute_rigidity(&m, r, DEFAULT_RIGIDITY_COMBOS).unwrap();
                assert_eq!(rig == 0, mat_rank(&m) <= r);
            }
        }
    }

    #[test]
    fn rigidity_respects_bounds() {
        let m = FieldMatrix::zeros(5, 4, f2());
        assert!(matches!(
            brute_rigidity(&m, 0, DEFAULT_RIGIDITY_COMBOS),
            Err(Error::SizeBound { .. })
        ));
        let m = FieldMatrix::identity(3, big());
        // (p-1)^1 is astronomically past a budget of 1; s=0 passes first for r=3
        assert_eq!(brute_rigidity(&m, 3, 1).unwrap(), 0);
        assert!(matches!(
            brute_rigidity(&m, 0, 1),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn rigidity_odd_prime_small_case() {
        // I_2 over F_5: one change (zeroing a diagonal entry) reaches rank 1
        let gf = Gf::new(5).unwrap();
        let id = FieldMatrix::identity(2, gf);
        assert_eq!(brute_rigidity(&id, 1, DEFAULT_RIGIDITY_COMBOS).unwrap(), 1);
        assert_eq!(brute_rigidity(&id, 0, DEFAULT_RIGIDITY_COMBOS).unwrap(), 2);
    }
}
