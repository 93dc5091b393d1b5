//! Order-3 tensors over a prime field: the triple-sum evaluator, rank-factor
//! verification, the matrix-multiplication tensor with its rank-7
//! decomposition at size 2, and a tiny exhaustive rank search over F_2.

use crate::error::{parse_err, Error, Result};
use crate::field::Gf;
use crate::matrix::{check_field, mat_mul_blocked, parse_factor_lines, FactorCheck, FieldMatrix, MulKernel};

/// Largest `n` accepted by [`matmul_tensor`] (the result is dense with n^6
/// entries).
pub const MAX_MATMUL_TENSOR_N: usize = 12;

/// Dimension cap for [`brute_tensor_rank_at_most`].
pub const MAX_BRUTE_RANK_DIM: usize = 2;

/// Factor-count cap for [`brute_tensor_rank_at_most`].
pub const MAX_BRUTE_RANK_Q: usize = 3;

/// A dense order-3 tensor; entry (i, j, m) lives at `(i*d2 + j)*d3 + m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    d1: usize,
    d2: usize,
    d3: usize,
    gf: Gf,
    entries: Vec<u64>,
}

impl Tensor3 {
    pub fn new(d1: usize, d2: usize, d3: usize, gf: Gf, entries: Vec<u64>) -> Result<Tensor3> {
        if d1 == 0 || d2 == 0 || d3 == 0 {
            return Err(Error::Invalid("tensor dimensions must be positive".into()));
        }
        let total = d1
            .checked_mul(d2)
            .and_then(|v| v.checked_mul(d3))
            .ok_or_else(|| Error::Invalid(format!("tensor shape {d1}x{d2}x{d3} overflows")))?;
        if entries.len() != total {
            return Err(Error::Invalid(format!(
                "{} entries for a {d1}x{d2}x{d3} tensor",
                entries.len()
            )));
        }
        check_field(&entries, gf)?;
        Ok(Tensor3 {
            d1,
            d2,
            d3,
            gf,
            entries,
        })
    }

    pub fn zeros(d1: usize, d2: usize, d3: usize, gf: Gf) -> Tensor3 {
        Tensor3::new(d1, d2, d3, gf, vec![0; d1 * d2 * d3]).unwrap()
    }

    pub fn random(d1: usize, d2: usize, d3: usize, gf: Gf, rng: &mut impl rand::Rng) -> Tensor3 {
        let entries = (0..d1 * d2 * d3)
            .map(|_| rng.random_range(0..gf.p()))
            .collect();
        Tensor3::new(d1, d2, d3, gf, entries).unwrap()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }

    pub fn gf(&self) -> Gf {
        self.gf
    }

    pub fn get(&self, i: usize, j: usize, m: usize) -> u64 {
        assert!(i < self.d1 && j < self.d2 && m < self.d3, "index out of range");
        self.entries[(i * self.d2 + j) * self.d3 + m]
    }

    pub fn set(&mut self, i: usize, j: usize, m: usize, v: u64) {
        assert!(i < self.d1 && j < self.d2 && m < self.d3, "index out of range");
        self.entries[(i * self.d2 + j) * self.d3 + m] = self.gf.el(v);
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// Number of entries where the two tensors disagree.
    pub fn residues(&self, other: &Tensor3) -> Result<usize> {
        if self.dims() != other.dims() || self.gf != other.gf {
            return Err(Error::Invalid("tensor shape or field mismatch".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// `ten <d1> <d2> <d3> <p>` header, then d1 blocks of d2 rows of d3
    /// decimals, blocks separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("ten {} {} {} {}\n", self.d1, self.d2, self.d3, self.gf.p());
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                let row: Vec<String> =
                    (0..self.d3).map(|m| self.get(i, j, m).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            if i + 1 < self.d1 {
                out.push('\n');
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Tensor3> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("ten") {
            return Err(parse_err(1, "expected `ten <d1> <d2> <d3> <p>` header"));
        }
        let mut dim = || -> Result<usize> {
            it.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(1, "bad dimension"))
        };
        let (d1, d2, d3) = (dim()?, dim()?, dim()?);
        let p: u64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad modulus"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let gf = Gf::new(p)?;
        // declared sizes are untrusted: grow with the actual content and let
        // checked arithmetic reject shapes the entry count can never match
        let declared_rows = d1
            .checked_mul(d2)
            .ok_or_else(|| parse_err(1, "tensor shape overflows"))?;
        let mut entries = Vec::new();
        for _ in 0..declared_rows {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer rows than declared"))?;
            let row: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != d3 {
                return Err(parse_err(
                    lineno + 1,
                    format!("{} entries in a row of declared depth {d3}", row.len()),
                ));
            }
            entries.extend(row);
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(parse_err(lineno + 1, "content after final row"));
        }
        Tensor3::new(d1, d2, d3, gf, entries)
    }
}

/// Rank factors for a tensor: triples of vectors whose outer products sum to
/// the target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorFactors {
    pub triples: Vec<(Vec<u64>, Vec<u64>, Vec<u64>)>,
}

impl TensorFactors {
    /// `factors <count> triple` header, then three vector lines per factor.
    pub fn to_text(&self) -> String {
        let mut out = format!("factors {} triple\n", self.triples.len());
        let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        for (a, b, c) in &self.triples {
            out.push_str(&fmt(a));
            out.push('\n');
            out.push_str(&fmt(b));
            out.push('\n');
            out.push_str(&fmt(c));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<TensorFactors> {
        let vectors = parse_factor_lines(text, "triple", 3)?;
        let triples = vectors
            .into_iter()
            .map(|mut v| {
                let c = v.pop().unwrap();
                let b = v.pop().unwrap();
                let a = v.pop().unwrap();
                (a, b, c)
            })
            .collect();
        Ok(TensorFactors { triples })
    }

    /// Direct reconstruction Σ a ⊗ b ⊗ c; the slow oracle the evaluator-based
    /// verification is tested against.
    pub fn reconstruct(&self, d1: usize, d2: usize, d3: usize, gf: Gf) -> Result<Tensor3> {
        let mut acc = Tensor3::zeros(d1, d2, d3, gf);
        for (idx, (a, b, c)) in self.triples.iter().enumerate() {
            if a.len() != d1 || b.len() != d2 || c.len() != d3 {
                return Err(Error::Invalid(format!(
                    "factor {}: vector lengths {}/{}/{} for a {d1}x{d2}x{d3} tensor",
                    idx + 1,
                    a.len(),
                    b.len(),
                    c.len()
                )));
            }
            check_field(a, gf)?;
            check_field(b, gf)?;
            check_field(c, gf)?;
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    let ab = gf.mul(ai, bj);
                    if ab == 0 {
                        continue;
                    }
                    for (m, &cm) in c.iter().enumerate() {
                        let v = gf.add(acc.get(i, j, m), gf.mul(ab, cm));
                        acc.set(i, j, m, v);
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// All triple sums f(i,j,m) = Σ_l A[l,i]·B[l,j]·C[l,m] for q×k inputs,
/// computed per fixed i as a rectangular matrix product: scale B's rows by
/// column i of A, then multiply the transpose against C.
pub fn evaluate_sum_all(a: &FieldMatrix, b: &FieldMatrix, c: &FieldMatrix) -> Result<Tensor3> {
    let (q, k) = (a.rows(), a.cols());
    if b.rows() != q || c.rows() != q || b.cols() != k || c.cols() != k {
        return Err(Error::Invalid(format!(
            "factor matrices must share one q x k shape, got {}x{}, {}x{}, {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if a.gf() != b.gf() || a.gf() != c.gf() {
        return Err(Error::Invalid("field mismatch".into()));
    }
    if q < k {
        return Err(Error::Invalid(format!(
            "factor count {q} below dimension {k}; pad with zero factors first"
        )));
    }
    let gf = a.gf();
    let mut out = Tensor3::zeros(k, k, k, gf);
    for i in 0..k {
        let mut d = FieldMatrix::zeros(q, k, gf);
        for l in 0..q {
            let ai = a.get(l, i);
            for j in 0..k {
                d.set(l, j, gf.mul(b.get(l, j), ai));
            }
        }
        let slice = mat_mul_blocked(&d.transpose(), c, k, MulKernel::Naive)?;
        for j in 0..k {
            for m in 0..k {
                out.set(i, j, m, slice.get(j, m));
            }
        }
    }
    Ok(out)
}

/// The quadruple-loop oracle for [`evaluate_sum_all`].
pub fn naive_sum_all(a: &FieldMatrix, b: &FieldMatrix, c: &FieldMatrix) -> Result<Tensor3> {
    let (q, k) = (a.rows(), a.cols());
    if b.rows() != q || c.rows() != q || b.cols() != k || c.cols() != k {
        return Err(Error::Invalid("factor matrices must share one q x k shape".into()));
    }
    if a.gf() != b.gf() || a.gf() != c.gf() {
        return Err(Error::Invalid("field mismatch".into()));
    }
    let gf = a.gf();
    let mut out = Tensor3::zeros(k, k, k, gf);
    for i in 0..k {
        for j in 0..k {
            for m in 0..k {
                let mut s = 0;
                for l in 0..q {
                    s = gf.add(s, gf.mul(gf.mul(a.get(l, i), b.get(l, j)), c.get(l, m)));
                }
                out.set(i, j, m, s);
            }
        }
    }
    Ok(out)
}

/// Checks that the factor triples reconstruct a cubical tensor exactly, via
/// the triple-sum evaluator over the stacked factor matrices.  Shorter factor
/// lists are padded with zero triples so the evaluator's q ≥ k precondition
/// holds.
pub fn verify_tensor_factors(t: &Tensor3, factors: &TensorFactors) -> Result<FactorCheck> {
    let (d1, d2, d3) = t.dims();
    if d1 != d2 || d2 != d3 {
        return Err(Error::Invalid(format!(
            "factor verification needs a cubical tensor, got {d1}x{d2}x{d3}"
        )));
    }
    let k = d1;
    let gf = t.gf();
    let q = factors.triples.len().max(k);
    let mut a = FieldMatrix::zeros(q, k, gf);
    let mut b = FieldMatrix::zeros(q, k, gf);
    let mut c = FieldMatrix::zeros(q, k, gf);
    for (l, (va, vb, vc)) in factors.triples.iter().enumerate() {
        if va.len() != k || vb.len() != k || vc.len() != k {
            return Err(Error::Invalid(format!(
                "factor {}: vector lengths {}/{}/{} for a {k}x{k}x{k} tensor",
                l + 1,
                va.len(),
                vb.len(),
                vc.len()
            )));
        }
        check_field(va, gf)?;
        check_field(vb, gf)?;
        check_field(vc, gf)?;
        for i in 0..k {
            a.set(l, i, va[i]);
            b.set(l, i, vb[i]);
            c.set(l, i, vc[i]);
        }
    }
    let rebuilt = evaluate_sum_all(&a, &b, &c)?;
    Ok(FactorCheck {
        residues: t.residues(&rebuilt)?,
    })
}

/// The tensor whose nonzero pattern encodes n×n matrix multiplication:
/// entry ((i,j), (i,k), (k,j)) = 1 with row-major pair flattening
/// (i,j) → i·n + j, exactly n³ ones among n⁶ entries.
pub fn matmul_tensor(n: usize, gf: Gf) -> Result<Tensor3> {
    if n == 0 {
        return Err(Error::Invalid("size must be positive".into()));
    }
    if n > MAX_MATMUL_TENSOR_N {
        return Err(Error::SizeBound {
            what: "matrix-multiplication tensor size",
            limit: MAX_MATMUL_TENSOR_N as u64,
            got: n as u64,
        });
    }
    let d = n * n;
    let mut t = Tensor3::zeros(d, d, d, gf);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t.set(i * n + j, i * n + k, k * n + j, 1);
            }
        }
    }
    Ok(t)
}

/// The classical seven-product decomposition of [`matmul_tensor`] at n = 2:
/// factor l is (output combination, left-operand combination, right-operand
/// combination), with −1 represented as p − 1.
pub fn strassen_triples(gf: Gf) -> TensorFactors {
    let neg = gf.neg(1);
    let v = |coeffs: [i8; 4]| -> Vec<u64> {
        coeffs
            .iter()
            .map(|&c| match c {
                0 => 0,
                1 => 1,
                -1 => neg,
                _ => unreachable!(),
            })
            .collect()
    };
    // rows: (w = where the product lands in C, u = A-side sums, v = B-side sums)
    let rows: [([i8; 4], [i8; 4], [i8; 4]); 7] = [
        ([1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]),
        ([0, 0, 1, -1], [0, 0, 1, 1], [1, 0, 0, 0]),
        ([0, 1, 0, 1], [1, 0, 0, 0], [0, 1, 0, -1]),
        ([1, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 1, 0]),
        ([-1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1]),
        ([0, 0, 0, 1], [-1, 0, 1, 0], [1, 1, 0, 0]),
        ([1, 0, 0, 0], [0, 1, 0, -1], [0, 0, 1, 1]),
    ];
    TensorFactors {
        triples: rows.iter().map(|&(w, u, vv)| (v(w), v(u), v(vv))).collect(),
    }
}

/// Exhaustive test for rank ≤ q over F_2 on tiny tensors: every choice of q
/// vector triples is tried (zero triples included, so smaller ranks pass).
pub fn brute_tensor_rank_at_most(t: &Tensor3, q: usize) -> Result<bool> {
    let (d1, d2, d3) = t.dims();
    if t.gf().p() != 2 {
        return Err(Error::Invalid("rank search is implemented over F_2 only".into()));
    }
    if d1 > MAX_BRUTE_RANK_DIM || d2 > MAX_BRUTE_RANK_DIM || d3 > MAX_BRUTE_RANK_DIM {
        return Err(Error::SizeBound {
            what: "rank-search dimension",
            limit: MAX_BRUTE_RANK_DIM as u64,
            got: d1.max(d2).max(d3) as u64,
        });
    }
    if q > MAX_BRUTE_RANK_Q {
        return Err(Error::SizeBound {
            what: "rank-search factor count",
            limit: MAX_BRUTE_RANK_Q as u64,
            got: q as u64,
        });
    }
    let gf = t.gf();
    let bits = d1 + d2 + d3;
    let options = 1u64 << bits;
    let unpack = |code: u64| -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let bit = |i: usize| (code >> i & 1) as u64;
        (
            (0..d1).map(&bit).collect(),
            (d1..d1 + d2).map(&bit).collect(),
            (d1 + d2..bits).map(&bit).collect(),
        )
    };
    // odometer over q factor codes, repetition allowed
    let mut codes = vec![0u64; q];
    loop {
        let factors = TensorFactors {
            triples: codes.iter().map(|&c| unpack(c)).collect(),
        };
        if factors.reconstruct(d1, d2, d3, gf)? == *t {
            return Ok(true);
        }
        let mut pos = q;
        loop {
            if pos == 0 {
                return Ok(false);
            }
            pos -= 1;
            codes[pos] += 1;
            if codes[pos] < options {
                break;
            }
            codes[pos] = 0;
        }
    }
}
