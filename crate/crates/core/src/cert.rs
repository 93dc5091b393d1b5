//! Certificate-driven clique counting.
//!
//! A clique instance's 4-index cycle sum factors per pair (j0,j1) — or per
//! j0 — into slices of the edge tensors.  A certificate supplies each slice
//! as an explicit low-rank + sparse decomposition (or, for the first edge
//! tensor, a rank-one-sum decomposition); after exact validation the count
//! is recomputed purely through the decomposition algebra: low-rank parts
//! meet in short inner products, sparse parts are walked over their
//! supports.  The result provably equals the brute-force count, which is
//! what the tests assert.

use std::collections::HashMap;

use crate::clique::CliqueInstance;
use crate::error::{parse_err, Error, Result};
use crate::field::Gf;
use crate::matrix::{
    mat_mul_blocked, verify_matrix_factors, FieldMatrix, MatrixFactors, MulKernel, SparseEntries,
};
use crate::tensor::{verify_tensor_factors, Tensor3, TensorFactors};

/// Low-rank + sparse decomposition of one k×k slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityCertificate {
    rows: usize,
    cols: usize,
    factors: MatrixFactors,
    sparse: SparseEntries,
}

impl RigidityCertificate {
    pub fn new(
        rows: usize,
        cols: usize,
        factors: MatrixFactors,
        sparse: SparseEntries,
    ) -> Result<RigidityCertificate> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("certificate shape must be positive".into()));
        }
        for (i, (a, b)) in factors.pairs.iter().enumerate() {
            if a.len() != rows || b.len() != cols {
                return Err(Error::Invalid(format!(
                    "factor {}: vector lengths {}/{} for a {rows}x{cols} slice",
                    i + 1,
                    a.len(),
                    b.len()
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &(r, c, _) in &sparse.entries {
            if r >= rows || c >= cols {
                return Err(Error::Invalid(format!(
                    "sparse entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            if !seen.insert((r, c)) {
                return Err(Error::Invalid(format!("duplicate sparse position ({r},{c})")));
            }
        }
        Ok(RigidityCertificate {
            rows,
            cols,
            factors,
            sparse,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Declared rank bound: the number of outer-product pairs.
    pub fn r(&self) -> usize {
        self.factors.pairs.len()
    }

    /// Number of explicit sparse corrections.
    pub fn s(&self) -> usize {
        self.sparse.entries.len()
    }

    pub fn factors(&self) -> &MatrixFactors {
        &self.factors
    }

    pub fn sparse(&self) -> &SparseEntries {
        &self.sparse
    }

    /// `cert rigidity <rows> <cols> <r>` + alternating factor vector lines +
    /// `sparse <count>` + one `row col value` triple per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("cert rigidity {} {} {}\n", self.rows, self.cols, self.r());
        let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        for (a, b) in &self.factors.pairs {
            out.push_str(&fmt(a));
            out.push('\n');
            out.push_str(&fmt(b));
            out.push('\n');
        }
        out.push_str(&format!("sparse {}\n", self.s()));
        for &(r, c, v) in &self.sparse.entries {
            out.push_str(&format!("{r} {c} {v}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<RigidityCertificate> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if (it.next(), it.next()) != (Some("cert"), Some("rigidity")) {
            return Err(parse_err(1, "expected `cert rigidity <rows> <cols> <r>`"));
        }
        let mut num = |what: &str| -> Result<usize> {
            it.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(1, format!("bad {what}")))
        };
        let (rows, cols, r) = (num("row count")?, num("column count")?, num("rank")?);
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let read_vec = |lines: &mut dyn Iterator<Item = (usize, &str)>| -> Result<Vec<u64>> {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer lines than declared"))?;
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect()
        };
        // declared counts are untrusted: grow with the actual content
        let mut pairs = Vec::new();
        for _ in 0..r {
            let a = read_vec(&mut lines)?;
            let b = read_vec(&mut lines)?;
            pairs.push((a, b));
        }
        let (sline_no, sline) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing `sparse <count>` line"))?;
        let mut it = sline.split_whitespace();
        if it.next() != Some("sparse") {
            return Err(parse_err(sline_no + 1, "expected `sparse <count>`"));
        }
        let count: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(sline_no + 1, "bad sparse count"))?;
        if it.next().is_some() {
            return Err(parse_err(sline_no + 1, "trailing tokens after sparse count"));
        }
        let mut entries = Vec::new();
        for _ in 0..count {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer sparse entries than declared"))?;
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if nums.len() != 3 {
                return Err(parse_err(lineno + 1, "expected `row col value`"));
            }
            entries.push((nums[0] as usize, nums[1] as usize, nums[2]));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(parse_err(lineno + 1, "content after final entry"));
        }
        RigidityCertificate::new(rows, cols, MatrixFactors { pairs }, SparseEntries { entries })
    }
}

/// Rank-one-sum decomposition of one k×k×k tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorRankCertificate {
    k: usize,
    factors: TensorFactors,
}

impl TensorRankCertificate {
    pub fn new(k: usize, factors: TensorFactors) -> Result<TensorRankCertificate> {
        if k == 0 {
            return Err(Error::Invalid("certificate dimension must be positive".into()));
        }
        for (i, (a, b, c)) in factors.triples.iter().enumerate() {
            if a.len() != k || b.len() != k || c.len() != k {
                return Err(Error::Invalid(format!(
                    "triple {}: vector lengths {}/{}/{} for a {k}x{k}x{k} tensor",
                    i + 1,
                    a.len(),
                    b.len(),
                    c.len()
                )));
            }
        }
        Ok(TensorRankCertificate { k, factors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Declared rank bound: the number of triples.
    pub fn q(&self) -> usize {
        self.factors.triples.len()
    }

    pub fn factors(&self) -> &TensorFactors {
        &self.factors
    }

    /// `cert tensor <k> <q>` + three vector lines per triple.
    pub fn to_text(&self) -> String {
        let mut out = format!("cert tensor {} {}\n", self.k, self.q());
        let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        for (a, b, c) in &self.factors.triples {
            out.push_str(&fmt(a));
            out.push('\n');
            out.push_str(&fmt(b));
            out.push('\n');
            out.push_str(&fmt(c));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<TensorRankCertificate> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if (it.next(), it.next()) != (Some("cert"), Some("tensor")) {
            return Err(parse_err(1, "expected `cert tensor <k> <q>`"));
        }
        let k: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad dimension"))?;
        let q: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad rank"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let read_vec = |lines: &mut dyn Iterator<Item = (usize, &str)>| -> Result<Vec<u64>> {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "fewer lines than declared"))?;
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(lineno + 1, format!("bad entry `{t}`"))))
                .collect()
        };
        // declared counts are untrusted: grow with the actual content
        let mut triples = Vec::new();
        for _ in 0..q {
            let a = read_vec(&mut lines)?;
            let b = read_vec(&mut lines)?;
            let c = read_vec(&mut lines)?;
            triples.push((a, b, c));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(parse_err(lineno + 1, "content after final triple"));
        }
        TensorRankCertificate::new(k, TensorFactors { triples })
    }
}

/// Multiplication counter; filled by the certificate evaluators so scaling
/// trends can be inspected.  Counts every field multiplication actually
/// performed, with blocked matrix products counted analytically from their
/// padded shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpStats {
    pub muls: u64,
}

fn cmul(gf: Gf, ops: &mut OpStats, a: u64, b: u64) -> u64 {
    ops.muls += 1;
    gf.mul(a, b)
}

/// Multiplications a blocked product of these shapes performs with the
/// naive kernel: the product of the block-padded dimensions.
fn blocked_mul_count(a_rows: usize, inner: usize, b_cols: usize, block: usize) -> u64 {
    let pad = |d: usize| d.div_ceil(block) * block;
    (pad(a_rows) as u64) * (pad(inner) as u64) * (pad(b_cols) as u64)
}

// ---- slice extractors -------------------------------------------------

/// Pair-indexed path, left slice: M[i,l] = A_0[j1,i,l].
pub fn rigidity_slice_m(inst: &CliqueInstance, j1: usize) -> FieldMatrix {
    let k = inst.k();
    let mut m = FieldMatrix::zeros(k, k, inst.gf());
    for i in 0..k {
        for l in 0..k {
            m.set(i, l, inst.tensor(0).get(j1, i, l));
        }
    }
    m
}

/// Pair-indexed path, right slice: L[i,l] = A_1[i,l,j0].
pub fn rigidity_slice_l(inst: &CliqueInstance, j0: usize) -> FieldMatrix {
    let k = inst.k();
    let mut m = FieldMatrix::zeros(k, k, inst.gf());
    for i in 0..k {
        for l in 0..k {
            m.set(i, l, inst.tensor(1).get(i, l, j0));
        }
    }
    m
}

/// Pair-indexed path: u[l] = A_2[l,j0,j1].
pub fn rigidity_u(inst: &CliqueInstance, j0: usize, j1: usize) -> Vec<u64> {
    (0..inst.k()).map(|l| inst.tensor(2).get(l, j0, j1)).collect()
}

/// Pair-indexed path: v[i] = A_3[j0,j1,i].
pub fn rigidity_v(inst: &CliqueInstance, j0: usize, j1: usize) -> Vec<u64> {
    (0..inst.k()).map(|i| inst.tensor(3).get(j0, j1, i)).collect()
}

/// Index-indexed path: M[j2,j3] = A_1[j2,j3,j0].
pub fn tensor_slice_m(inst: &CliqueInstance, j0: usize) -> FieldMatrix {
    let k = inst.k();
    let mut m = FieldMatrix::zeros(k, k, inst.gf());
    for j2 in 0..k {
        for j3 in 0..k {
            m.set(j2, j3, inst.tensor(1).get(j2, j3, j0));
        }
    }
    m
}

/// Index-indexed path: L[j3,j1] = A_2[j3,j0,j1].
pub fn tensor_slice_l(inst: &CliqueInstance, j0: usize) -> FieldMatrix {
    let k = inst.k();
    let mut m = FieldMatrix::zeros(k, k, inst.gf());
    for j3 in 0..k {
        for j1 in 0..k {
            m.set(j3, j1, inst.tensor(2).get(j3, j0, j1));
        }
    }
    m
}

/// Index-indexed path: T[j1,j2] = A_3[j0,j1,j2].
pub fn tensor_slice_t(inst: &CliqueInstance, j0: usize) -> FieldMatrix {
    let k = inst.k();
    let mut m = FieldMatrix::zeros(k, k, inst.gf());
    for j1 in 0..k {
        for j2 in 0..k {
            m.set(j1, j2, inst.tensor(3).get(j0, j1, j2));
        }
    }
    m
}

// ---- honest provers ----------------------------------------------------

/// Which trivial decomposition [`prove_trivial`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialFlavor {
    /// No factors; every nonzero entry goes into the sparse part.
    Sparse,
    /// One outer product per nonzero row (unit vector times the row); no
    /// sparse part.
    Rank,
}

/// A certificate that restates the matrix itself; always validates.
pub fn prove_trivial(m: &FieldMatrix, flavor: TrivialFlavor) -> RigidityCertificate {
    match flavor {
        TrivialFlavor::Sparse => {
            let entries = (0..m.rows())
                .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
                .filter(|&(r, c)| m.get(r, c) != 0)
                .map(|(r, c)| (r, c, m.get(r, c)))
                .collect();
            RigidityCertificate::new(
                m.rows(),
                m.cols(),
                MatrixFactors::default(),
                SparseEntries { entries },
            )
            .expect("trivial sparse certificate is well-formed")
        }
        TrivialFlavor::Rank => {
            let pairs = (0..m.rows())
                .filter(|&r| (0..m.cols()).any(|c| m.get(r, c) != 0))
                .map(|r| {
                    let mut e = vec![0u64; m.rows()];
                    e[r] = 1;
                    let row: Vec<u64> = (0..m.cols()).map(|c| m.get(r, c)).collect();
                    (e, row)
                })
                .collect();
            RigidityCertificate::new(
                m.rows(),
                m.cols(),
                MatrixFactors { pairs },
                SparseEntries::default(),
            )
            .expect("trivial rank certificate is well-formed")
        }
    }
}

/// A random valid decomposition: a random rank-≤r part plus whatever sparse
/// remainder makes the reconstruction exact.  Deterministic for a fixed rng
/// stream.
pub fn prove_split(
    m: &FieldMatrix,
    r: usize,
    rng: &mut impl rand::Rng,
) -> Result<RigidityCertificate> {
    if r > m.rows().min(m.cols()) {
        return Err(Error::Invalid(format!(
            "rank {r} exceeds min dimension {}",
            m.rows().min(m.cols())
        )));
    }
    let gf = m.gf();
    let mut pairs = Vec::with_capacity(r);
    let mut low = FieldMatrix::zeros(m.rows(), m.cols(), gf);
    for _ in 0..r {
        let a: Vec<u64> = (0..m.rows()).map(|_| rng.random_range(0..gf.p())).collect();
        let b: Vec<u64> = (0..m.cols()).map(|_| rng.random_range(0..gf.p())).collect();
        low = low.add(&FieldMatrix::outer(&a, &b, gf)?)?;
        pairs.push((a, b));
    }
    let diff = m.sub(&low)?;
    let entries = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| diff.get(r, c) != 0)
        .map(|(r, c)| (r, c, diff.get(r, c)))
        .collect();
    RigidityCertificate::new(
        m.rows(),
        m.cols(),
        MatrixFactors { pairs },
        SparseEntries { entries },
    )
}

/// Exact rank-one-sum certificate with one triple per (first, second) index
/// pair: e_{j1} ⊗ e_{j2} ⊗ T[j1,j2,·].  q = k².
pub fn prove_tensor_slices(t: &Tensor3) -> Result<TensorRankCertificate> {
    let (d1, d2, d3) = t.dims();
    if d1 != d2 || d2 != d3 {
        return Err(Error::Invalid(format!(
            "tensor certificates need a cubical tensor, got {d1}x{d2}x{d3}"
        )));
    }
    let k = d1;
    let mut triples = Vec::with_capacity(k * k);
    for j1 in 0..k {
        for j2 in 0..k {
            let mut a = vec![0u64; k];
            a[j1] = 1;
            let mut b = vec![0u64; k];
            b[j2] = 1;
            let c: Vec<u64> = (0..k).map(|j3| t.get(j1, j2, j3)).collect();
            triples.push((a, b, c));
        }
    }
    TensorRankCertificate::new(k, TensorFactors { triples })
}

/// Exact rank-one-sum certificate with one triple per nonzero entry:
/// e_{j1} ⊗ e_{j2} ⊗ (value · e_{j3}).  q = number of nonzeros.
pub fn prove_tensor_entries(t: &Tensor3) -> Result<TensorRankCertificate> {
    let (d1, d2, d3) = t.dims();
    if d1 != d2 || d2 != d3 {
        return Err(Error::Invalid(format!(
            "tensor certificates need a cubical tensor, got {d1}x{d2}x{d3}"
        )));
    }
    let k = d1;
    let mut triples = Vec::new();
    for j1 in 0..k {
        for j2 in 0..k {
            for j3 in 0..k {
                let w = t.get(j1, j2, j3);
                if w == 0 {
                    continue;
                }
                let mut a = vec![0u64; k];
                a[j1] = 1;
                let mut b = vec![0u64; k];
                b[j2] = 1;
                let mut c = vec![0u64; k];
                c[j3] = w;
                triples.push((a, b, c));
            }
        }
    }
    TensorRankCertificate::new(k, TensorFactors { triples })
}

// ---- validation --------------------------------------------------------

fn validate_slice_cert(
    cert: &RigidityCertificate,
    slice: &FieldMatrix,
    role: &'static str,
    location: &str,
) -> Result<()> {
    if cert.rows() != slice.rows() || cert.cols() != slice.cols() {
        return Err(Error::Certificate {
            role,
            location: location.to_string(),
            msg: format!(
                "declared shape {}x{} does not match the {}x{} slice",
                cert.rows(),
                cert.cols(),
                slice.rows(),
                slice.cols()
            ),
        });
    }
    let check =
        verify_matrix_factors(slice, cert.factors(), cert.sparse()).map_err(|e| {
            Error::Certificate {
                role,
                location: location.to_string(),
                msg: e.to_string(),
            }
        })?;
    if !check.accepted() {
        return Err(Error::Certificate {
            role,
            location: location.to_string(),
            msg: format!("reconstruction differs from the slice at {} entries", check.residues),
        });
    }
    Ok(())
}

// ---- pair-indexed evaluator ---------------------------------------------

/// Evaluates the 4-index cycle sum through per-(j0,j1) slice certificates:
/// for each pair, the left and right slices meet coordinatewise against two
/// instance-read vectors, with the low-rank × low-rank part reduced to r×r
/// pairs of length-k inner products and the sparse cross-terms walked over
/// the certificate supports.  Every certificate is validated in full before
/// any arithmetic; the result equals the brute-force count whenever the
/// field order exceeds k⁴.
#[allow(non_snake_case)]
pub fn compute_R_rigidity(
    inst: &CliqueInstance,
    certs: &[Vec<(RigidityCertificate, RigidityCertificate)>],
) -> Result<(u64, OpStats)> {
    let k = inst.k();
    let gf = inst.gf();
    if certs.len() != k || certs.iter().any(|row| row.len() != k) {
        return Err(Error::Invalid(format!(
            "certificate map must cover all {k}x{k} index pairs"
        )));
    }
    for j0 in 0..k {
        for j1 in 0..k {
            let (cm, cl) = &certs[j0][j1];
            let loc = format!("(j0={j0}, j1={j1})");
            validate_slice_cert(cm, &rigidity_slice_m(inst, j1), "M", &loc)?;
            validate_slice_cert(cl, &rigidity_slice_l(inst, j0), "L", &loc)?;
        }
    }
    let mut ops = OpStats::default();
    let mut total = 0u64;
    for j0 in 0..k {
        for j1 in 0..k {
            let (cm, cl) = &certs[j0][j1];
            let u = rigidity_u(inst, j0, j1);
            let v = rigidity_v(inst, j0, j1);
            // low-rank x low-rank: r_M * r_L pairs of length-k inner products
            for (a, b) in &cm.factors().pairs {
                for (c, d) in &cl.factors().pairs {
                    let mut s1 = 0u64;
                    for i in 0..k {
                        let t = cmul(gf, &mut ops, a[i], c[i]);
                        s1 = gf.add(s1, cmul(gf, &mut ops, t, v[i]));
                    }
                    let mut s2 = 0u64;
                    for l in 0..k {
                        let t = cmul(gf, &mut ops, b[l], d[l]);
                        s2 = gf.add(s2, cmul(gf, &mut ops, t, u[l]));
                    }
                    total = gf.add(total, cmul(gf, &mut ops, s1, s2));
                }
            }
            // sparse left part against the full right value: S·(T + R_L)
            let t_map: HashMap<(usize, usize), u64> = cl
                .sparse()
                .entries
                .iter()
                .map(|&(r, c, val)| ((r, c), val))
                .collect();
            for &(i, l, sv) in &cm.sparse().entries {
                let tv = *t_map.get(&(i, l)).unwrap_or(&0);
                let mut rl = 0u64;
                for (c, d) in &cl.factors().pairs {
                    rl = gf.add(rl, cmul(gf, &mut ops, c[i], d[l]));
                }
                let prod = cmul(gf, &mut ops, sv, gf.add(tv, rl));
                let prod = cmul(gf, &mut ops, prod, u[l]);
                total = gf.add(total, cmul(gf, &mut ops, prod, v[i]));
            }
            // low-rank left against sparse right: R_M·T
            for &(i, l, tv) in &cl.sparse().entries {
                let mut rm = 0u64;
                for (a, b) in &cm.factors().pairs {
                    rm = gf.add(rm, cmul(gf, &mut ops, a[i], b[l]));
                }
                let prod = cmul(gf, &mut ops, rm, tv);
                let prod = cmul(gf, &mut ops, prod, u[l]);
                total = gf.add(total, cmul(gf, &mut ops, prod, v[i]));
            }
        }
    }
    Ok((total, ops))
}

// ---- index-indexed evaluator ----------------------------------------------

fn stack_pairs(pairs: &[(Vec<u64>, Vec<u64>)], which: usize, k: usize, gf: Gf) -> FieldMatrix {
    let mut m = FieldMatrix::zeros(pairs.len().max(1), k, gf);
    for (row, pair) in pairs.iter().enumerate() {
        let v = if which == 0 { &pair.0 } else { &pair.1 };
        for (col, &e) in v.iter().enumerate() {
            m.set(row, col, e);
        }
    }
    m
}

fn scaled_stack(
    pairs: &[(Vec<u64>, Vec<u64>)],
    which: usize,
    scale: &[u64],
    gf: Gf,
    ops: &mut OpStats,
) -> FieldMatrix {
    let k = scale.len();
    let mut m = FieldMatrix::zeros(pairs.len().max(1), k, gf);
    for (row, pair) in pairs.iter().enumerate() {
        let v = if which == 0 { &pair.0 } else { &pair.1 };
        for (col, &e) in v.iter().enumerate() {
            m.set(row, col, cmul(gf, ops, e, scale[col]));
        }
    }
    m
}

fn dense_from_pairs(
    pairs: &[(Vec<u64>, Vec<u64>)],
    k: usize,
    gf: Gf,
    ops: &mut OpStats,
) -> FieldMatrix {
    let mut m = FieldMatrix::zeros(k, k, gf);
    for (a, b) in pairs {
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                let v = gf.add(m.get(i, j), cmul(gf, ops, a[i], b[j]));
                m.set(i, j, v);
            }
        }
    }
    m
}

/// Evaluates the 4-index cycle sum through a rank-one-sum certificate for
/// the first edge tensor plus per-j0 slice certificates for the other
/// three.  The all-low-rank term contracts through three families of
/// triple inner products (each batch computed as one rectangular matrix
/// product); the remainder telescopes into three terms, each walked over
/// one sparse support with an O(k) inner loop of constant-time lookups
/// into the densely stored tensors.
#[allow(non_snake_case)]
pub fn compute_R_tensor(
    inst: &CliqueInstance,
    a0_cert: &TensorRankCertificate,
    certs: &[(RigidityCertificate, RigidityCertificate, RigidityCertificate)],
) -> Result<(u64, OpStats)> {
    let k = inst.k();
    let gf = inst.gf();
    if certs.len() != k {
        return Err(Error::Invalid(format!(
            "certificate list must cover all {k} indices"
        )));
    }
    if a0_cert.k() != k {
        return Err(Error::Certificate {
            role: "A_0",
            location: "-".into(),
            msg: format!("declared dimension {} does not match k = {k}", a0_cert.k()),
        });
    }
    let check = verify_tensor_factors(inst.tensor(0), a0_cert.factors()).map_err(|e| {
        Error::Certificate {
            role: "A_0",
            location: "-".into(),
            msg: e.to_string(),
        }
    })?;
    if !check.accepted() {
        return Err(Error::Certificate {
            role: "A_0",
            location: "-".into(),
            msg: format!(
                "reconstruction differs from the tensor at {} entries",
                check.residues
            ),
        });
    }
    for (j0, (cm, cl, ct)) in certs.iter().enumerate() {
        let loc = format!("(j0={j0})");
        validate_slice_cert(cm, &tensor_slice_m(inst, j0), "M", &loc)?;
        validate_slice_cert(cl, &tensor_slice_l(inst, j0), "L", &loc)?;
        validate_slice_cert(ct, &tensor_slice_t(inst, j0), "T", &loc)?;
    }
    let mut ops = OpStats::default();
    let mut total = 0u64;
    let a0 = inst.tensor(0);
    for (j0, (cm, cl, ct)) in certs.iter().enumerate() {
        let (mp, lp, tp) = (&cm.factors().pairs, &cl.factors().pairs, &ct.factors().pairs);
        let (rm, rl, rt) = (mp.len(), lp.len(), tp.len());
        // dense low-rank parts for the remainder terms
        let rm_dense = dense_from_pairs(mp, k, gf, &mut ops);
        let rl_dense = dense_from_pairs(lp, k, gf, &mut ops);
        // all-low-rank main term through the triple-inner-product batches
        if a0_cert.q() > 0 && rm > 0 && rl > 0 && rt > 0 {
            let ta_stack = stack_pairs(tp, 0, k, gf).transpose(); // k x r_T
            let ma_stack = stack_pairs(mp, 0, k, gf).transpose(); // k x r_M
            let la_stack = stack_pairs(lp, 0, k, gf).transpose(); // k x r_L
            for (ai, bi, ci) in &a0_cert.factors().triples {
                // V[l,t] = Σ_{j1} a_i[j1]·(L pair l).1[j1]·(T pair t).0[j1]
                let p1 = scaled_stack(lp, 1, ai, gf, &mut ops);
                let v_i = mat_mul_blocked(&p1, &ta_stack, k, MulKernel::Naive)?;
                ops.muls += blocked_mul_count(rl, k, rt, k);
                // Z[t,m] = Σ_{j2} b_i[j2]·(T pair t).1[j2]·(M pair m).0[j2]
                let p2 = scaled_stack(tp, 1, bi, gf, &mut ops);
                let z_i = mat_mul_blocked(&p2, &ma_stack, k, MulKernel::Naive)?;
                ops.muls += blocked_mul_count(rt, k, rm, k);
                // H[m,l] = Σ_{j3} c_i[j3]·(M pair m).1[j3]·(L pair l).0[j3]
                let p3 = scaled_stack(mp, 1, ci, gf, &mut ops);
                let h3_i = mat_mul_blocked(&p3, &la_stack, k, MulKernel::Naive)?;
                ops.muls += blocked_mul_count(rm, k, rl, k);
                let vz = mat_mul_blocked(&v_i, &z_i, k, MulKernel::Naive)?;
                ops.muls += blocked_mul_count(rl, rt, rm, k);
                for l in 0..rl {
                    for m in 0..rm {
                        total = gf.add(total, cmul(gf, &mut ops, h3_i.get(m, l), vz.get(l, m)));
                    }
                }
            }
        }
        // remainder: sparse M against full L, T
        for &(j2, j3, sv) in &cm.sparse().entries {
            let mut inner = 0u64;
            for j1 in 0..k {
                let lv = inst.tensor(2).get(j3, j0, j1);
                let tv = inst.tensor(3).get(j0, j1, j2);
                let prod = cmul(gf, &mut ops, a0.get(j1, j2, j3), lv);
                inner = gf.add(inner, cmul(gf, &mut ops, prod, tv));
            }
            total = gf.add(total, cmul(gf, &mut ops, sv, inner));
        }
        // remainder: low-rank M against sparse L, full T
        for &(j3, j1, sv) in &cl.sparse().entries {
            let mut inner = 0u64;
            for j2 in 0..k {
                let tv = inst.tensor(3).get(j0, j1, j2);
                let prod = cmul(gf, &mut ops, a0.get(j1, j2, j3), rm_dense.get(j2, j3));
                inner = gf.add(inner, cmul(gf, &mut ops, prod, tv));
            }
            total = gf.add(total, cmul(gf, &mut ops, sv, inner));
        }
        // remainder: low-rank M and L against sparse T
        for &(j1, j2, sv) in &ct.sparse().entries {
            let mut inner = 0u64;
            for j3 in 0..k {
                let prod = cmul(gf, &mut ops, a0.get(j1, j2, j3), rm_dense.get(j2, j3));
                inner = gf.add(inner, cmul(gf, &mut ops, prod, rl_dense.get(j3, j1)));
            }
            total = gf.add(total, cmul(gf, &mut ops, sv, inner));
        }
    }
    Ok((total, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::{brute_clique_R, build_clique_instance};
    use crate::cnf::{Formula, Lit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Gf {
        Gf::default_field()
    }

    fn single_clause_instance() -> CliqueInstance {
        let f = Formula::new(4, vec![vec![Lit::pos(1), Lit::pos(2), Lit::pos(3)]]).unwrap();
        build_clique_instance(&f, [0, 0, 0, 1], gf()).unwrap()
    }

    fn trivial_pair_certs(
        inst: &CliqueInstance,
        flavor: TrivialFlavor,
    ) -> Vec<Vec<(RigidityCertificate, RigidityCertificate)>> {
        let k = inst.k();
        (0..k)
            .map(|j0| {
                (0..k)
                    .map(|j1| {
                        (
                            prove_trivial(&rigidity_slice_m(inst, j1), flavor),
                            prove_trivial(&rigidity_slice_l(inst, j0), flavor),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    fn trivial_index_certs(
        inst: &CliqueInstance,
        flavor: TrivialFlavor,
    ) -> Vec<(RigidityCertificate, RigidityCertificate, RigidityCertificate)> {
        (0..inst.k())
            .map(|j0| {
                (
                    prove_trivial(&tensor_slice_m(inst, j0), flavor),
                    prove_trivial(&tensor_slice_l(inst, j0), flavor),
                    prove_trivial(&tensor_slice_t(inst, j0), flavor),
                )
            })
            .collect()
    }

    #[test]
    fn trivial_certificates_worked_examples() {
        let zero = FieldMatrix::zeros(2, 3, gf());
        let c = prove_trivial(&zero, TrivialFlavor::Sparse);
        assert_eq!((c.r(), c.s()), (0, 0));
        let c = prove_trivial(&zero, TrivialFlavor::Rank);
        assert_eq!((c.r(), c.s()), (0, 0));
        let id = FieldMatrix::identity(2, gf());
        let c = prove_trivial(&id, TrivialFlavor::Sparse);
        assert_eq!(c.sparse().entries, vec![(0, 0, 1), (1, 1, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = FieldMatrix::random(3, 4, gf(), &mut rng);
        let c = prove_trivial(&m, TrivialFlavor::Rank);
        assert_eq!(c.r(), 3);
        assert!(verify_matrix_factors(&m, c.factors(), c.sparse())
            .unwrap()
            .accepted());
    }

    #[test]
    fn split_certificates_validate_and_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = FieldMatrix::random(3, 3, gf(), &mut rng);
        for r in 0..=3 {
            let mut rng_a = ChaCha8Rng::seed_from_u64(77);
            let mut rng_b = ChaCha8Rng::seed_from_u64(77);
            let ca = prove_split(&m, r, &mut rng_a).unwrap();
            let cb = prove_split(&m, r, &mut rng_b).unwrap();
            assert_eq!(ca, cb);
            assert_eq!(ca.r(), r);
            assert!(verify_matrix_factors(&m, ca.factors(), ca.sparse())
                .unwrap()
                .accepted());
        }
        // r = 0 coincides with the sparse-flavor trivial certificate
        let mut rng_c = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            prove_split(&m, 0, &mut rng_c).unwrap(),
            prove_trivial(&m, TrivialFlavor::Sparse)
        );
        assert!(prove_split(&m, 4, &mut rng_c).is_err());
    }

    #[test]
    fn pair_evaluator_matches_brute_force_on_the_single_clause() {
        let inst = single_clause_instance();
        let want = gf().el(brute_clique_R(&inst).unwrap());
        assert_eq!(want, 14);
        for flavor in [TrivialFlavor::Sparse, TrivialFlavor::Rank] {
            let certs = trivial_pair_certs(&inst, flavor);
            let (got, ops) = compute_R_rigidity(&inst, &certs).unwrap();
            assert_eq!(got, want, "{flavor:?}");
            assert!(ops.muls > 0);
        }
    }

    #[test]
    fn pair_evaluator_accepts_random_split_ranks() {
        let inst = single_clause_instance();
        let want = gf().el(brute_clique_R(&inst).unwrap());
        let k = inst.k();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let certs: Vec<Vec<_>> = (0..k)
            .map(|j0| {
                (0..k)
                    .map(|j1| {
                        let rm = rng.random_range(0..=k);
                        let rl = rng.random_range(0..=k);
                        (
                            prove_split(&rigidity_slice_m(&inst, j1), rm, &mut rng).unwrap(),
                            prove_split(&rigidity_slice_l(&inst, j0), rl, &mut rng).unwrap(),
                        )
                    })
                    .collect()
            })
            .collect();
        let (got, _) = compute_R_rigidity(&inst, &certs).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn tampered_certificate_is_rejected_with_location() {
        let inst = single_clause_instance();
        let mut certs = trivial_pair_certs(&inst, TrivialFlavor::Sparse);
        // perturb one sparse value in the M certificate at (j0=1, j1=0)
        let cert = &mut certs[1][0].0;
        let mut entries = cert.sparse().entries.clone();
        entries[0].2 = gf().add(entries[0].2, 1);
        *cert = RigidityCertificate::new(
            cert.rows(),
            cert.cols(),
            cert.factors().clone(),
            SparseEntries { entries },
        )
        .unwrap();
        match compute_R_rigidity(&inst, &certs) {
            Err(Error::Certificate { role, location, .. }) => {
                assert_eq!(role, "M");
                assert!(location.contains("j0=1") && location.contains("j1=0"));
            }
            other => panic!("expected certificate rejection, got {other:?}"),
        }
    }

    #[test]
    fn index_evaluator_matches_brute_force_on_the_single_clause() {
        let inst = single_clause_instance();
        let want = gf().el(brute_clique_R(&inst).unwrap());
        // A_0 is all-ones: a single all-ones triple is an exact rank-1 certificate
        let k = inst.k();
        let ones = vec![1u64; k];
        let a0 = TensorRankCertificate::new(
            k,
            TensorFactors {
                triples: vec![(ones.clone(), ones.clone(), ones)],
            },
        )
        .unwrap();
        for flavor in [TrivialFlavor::Sparse, TrivialFlavor::Rank] {
            let certs = trivial_index_certs(&inst, flavor);
            let (got, ops) = compute_R_tensor(&inst, &a0, &certs).unwrap();
            assert_eq!(got, want, "{flavor:?}");
            assert!(ops.muls > 0);
        }
        // and with the generic honest tensor provers
        for a0 in [
            prove_tensor_slices(inst.tensor(0)).unwrap(),
            prove_tensor_entries(inst.tensor(0)).unwrap(),
        ] {
            let certs = trivial_index_certs(&inst, TrivialFlavor::Rank);
            let (got, _) = compute_R_tensor(&inst, &a0, &certs).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn index_evaluator_zero_first_tensor_with_empty_certificate() {
        let f = Formula::new(4, vec![vec![Lit::pos(1), Lit::pos(2), Lit::pos(3)]]).unwrap();
        // target 5 label-0 clauses: impossible, so the first tensor is zero
        let inst = build_clique_instance(&f, [5, 0, 0, 1], gf()).unwrap();
        assert_eq!(inst.tensor(0).count_nonzero(), 0);
        let a0 = TensorRankCertificate::new(inst.k(), TensorFactors::default()).unwrap();
        let certs = trivial_index_certs(&inst, TrivialFlavor::Sparse);
        let (got, _) = compute_R_tensor(&inst, &a0, &certs).unwrap();
        assert_eq!(got, 0);
    }

    #[test]
    fn both_evaluators_agree_on_random_mixed_certificates() {
        let f = Formula::new(
            4,
            vec![
                vec![Lit::pos(1), Lit::neg(2)],
                vec![Lit::neg(1), Lit::pos(3), Lit::pos(4)],
            ],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for tvec in [[0, 0, 0, 2], [0, 0, 0, 1], [0, 0, 1, 1], [1, 0, 0, 1]] {
            let inst = build_clique_instance(&f, tvec, gf()).unwrap();
            let want = gf().el(brute_clique_R(&inst).unwrap());
            let k = inst.k();
            let pair_certs: Vec<Vec<_>> = (0..k)
                .map(|j0| {
                    (0..k)
                        .map(|j1| {
                            let rm = rng.random_range(0..=k);
                            (
                                prove_split(&rigidity_slice_m(&inst, j1), rm, &mut rng).unwrap(),
                                prove_trivial(
                                    &rigidity_slice_l(&inst, j0),
                                    if rm % 2 == 0 {
                                        TrivialFlavor::Sparse
                                    } else {
                                        TrivialFlavor::Rank
                                    },
                                ),
                            )
                        })
                        .collect()
                })
                .collect();
            let (got_pair, _) = compute_R_rigidity(&inst, &pair_certs).unwrap();
            assert_eq!(got_pair, want, "pair path, tvec {tvec:?}");
            let a0 = prove_tensor_slices(inst.tensor(0)).unwrap();
            let index_certs: Vec<_> = (0..k)
                .map(|j0| {
                    let r = rng.random_range(0..=k);
                    (
                        prove_split(&tensor_slice_m(&inst, j0), r, &mut rng).unwrap(),
                        prove_trivial(&tensor_slice_l(&inst, j0), TrivialFlavor::Rank),
                        prove_split(&tensor_slice_t(&inst, j0), k - r, &mut rng).unwrap(),
                    )
                })
                .collect();
            let (got_index, _) = compute_R_tensor(&inst, &a0, &index_certs).unwrap();
            assert_eq!(got_index, want, "index path, tvec {tvec:?}");
        }
    }

    #[test]
    fn certificate_files_roundtrip_and_reject_malformed_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = FieldMatrix::random(2, 3, gf(), &mut rng);
        let c = prove_split(&m, 1, &mut rng).unwrap();
        let text = c.to_text();
        assert_eq!(RigidityCertificate::parse_text(&text).unwrap(), c);
        assert!(RigidityCertificate::parse_text("cert rigidity 2 2 0\n").is_err()); // no sparse line
        assert!(RigidityCertificate::parse_text("cert rigidity 2 2 0\nsparse 1\n").is_err());
        assert!(
            RigidityCertificate::parse_text("cert rigidity 2 2 0\nsparse 2\n0 0 1\n0 0 2\n")
                .is_err() // duplicate position
        );
        let t = prove_tensor_entries(
            &crate::tensor::matmul_tensor(1, gf()).unwrap(),
        )
        .unwrap();
        let text = t.to_text();
        assert_eq!(TensorRankCertificate::parse_text(&text).unwrap(), t);
        assert!(TensorRankCertificate::parse_text("cert tensor 1 1\n1\n1\n").is_err());
        assert!(TensorRankCertificate::parse_text("cert rigidity 1 1 0\nsparse 0\n").is_err());
    }

    #[test]
    fn operation_counts_are_deterministic_and_flavor_sensitive() {
        let inst = single_clause_instance();
        let sparse = trivial_pair_certs(&inst, TrivialFlavor::Sparse);
        let rank = trivial_pair_certs(&inst, TrivialFlavor::Rank);
        let (_, ops_a) = compute_R_rigidity(&inst, &sparse).unwrap();
        let (_, ops_b) = compute_R_rigidity(&inst, &sparse).unwrap();
        assert_eq!(ops_a, ops_b);
        let (_, ops_c) = compute_R_rigidity(&inst, &rank).unwrap();
        assert_ne!(ops_a, ops_c);
    }
}
