//! Exact-satisfaction targets as 4-partite 3-uniform hypergraph cliques.
//!
//! Variables are split into four contiguous groups; each width-≤3 clause is
//! labeled by the first group it avoids, and, for each label, a count tensor
//! records how many such clauses a joint assignment of the other three
//! groups satisfies.  Fixing a per-label target tuple turns the counts into
//! 0/1 indicator tensors whose 4-index cycle product counts the assignments
//! hitting every target simultaneously — a clique count that is positive
//! exactly when some assignment satisfies the targeted clause numbers.

use crate::cnf::{eval_clauses, index_to_bits, Assignment, Formula};
use crate::error::{parse_err, Error, Result};
use crate::field::Gf;
use crate::ov::group_ranges;
use crate::tensor::Tensor3;

/// Cap on the per-group assignment count 2^(n/4).
pub const MAX_GROUP_SIZE: u64 = 64;

/// Cap on the part size for the quartic brute-force count.
pub const MAX_BRUTE_CLIQUE_K: usize = 16;

/// The four contiguous variable groups of a formula with 4 | n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition4 {
    /// (first variable, length) per group, in variable order.
    pub groups: [(u32, u32); 4],
}

impl Partition4 {
    pub fn contiguous(n: u32) -> Result<Partition4> {
        let ranges = group_ranges(n, 4)?;
        Ok(Partition4 {
            groups: [ranges[0], ranges[1], ranges[2], ranges[3]],
        })
    }

    /// Which group a variable belongs to.
    pub fn group_of(&self, var: u32) -> usize {
        self.groups
            .iter()
            .position(|&(first, len)| var >= first && var < first + len)
            .expect("variable outside the partitioned range")
    }

    /// Assignments per group.
    pub fn group_size(&self) -> u64 {
        1 << self.groups[0].1
    }
}

/// Smallest label i such that the clause has no variable in group i.
/// Clauses of width ≤ 3 cannot touch all four groups, so a label exists.
pub fn label_clauses(f: &Formula, part: &Partition4) -> Result<Vec<usize>> {
    if f.width() > 3 {
        return Err(Error::Invalid(format!(
            "labeling needs width <= 3, formula has a clause of width {}",
            f.width()
        )));
    }
    Ok(f.clauses()
        .iter()
        .map(|clause| {
            (0..4)
                .find(|&i| clause.iter().all(|lit| part.group_of(lit.var) != i))
                .expect("a width-<=3 clause avoids some group")
        })
        .collect())
}

/// Per-label satisfied-clause counts, indexed by the assignments of the
/// other three groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTensors {
    k: usize,
    /// counts[i] holds T_i in row-major (U1, U2, U3) order, where U1, U2, U3
    /// assign groups (i+1)%4, (i+2)%4, (i+3)%4.
    counts: [Vec<u64>; 4],
}

impl CountTensors {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, u1: usize, u2: usize, u3: usize) -> u64 {
        assert!(i < 4 && u1 < self.k && u2 < self.k && u3 < self.k);
        self.counts[i][(u1 * self.k + u2) * self.k + u3]
    }
}

/// Builds the four count tensors: entry (U1,U2,U3) of tensor i is the number
/// of label-i clauses satisfied once groups (i+1)%4, (i+2)%4, (i+3)%4 take
/// the assignments with lexicographic indices U1, U2, U3.  Label-i clauses
/// avoid group i, so these partial assignments decide them completely.
pub fn build_count_tensors(f: &Formula) -> Result<CountTensors> {
    let part = Partition4::contiguous(f.n())?;
    let labels = label_clauses(f, &part)?;
    let k64 = part.group_size();
    if k64 > MAX_GROUP_SIZE {
        return Err(Error::SizeBound {
            what: "assignments per group",
            limit: MAX_GROUP_SIZE,
            got: k64,
        });
    }
    let k = k64 as usize;
    let mut counts: [Vec<u64>; 4] = std::array::from_fn(|_| vec![0; k * k * k]);
    for i in 0..4 {
        let others = [(i + 1) % 4, (i + 2) % 4, (i + 3) % 4];
        for u1 in 0..k {
            for u2 in 0..k {
                for u3 in 0..k {
                    let mut pairs: Vec<(u32, bool)> = Vec::with_capacity(3 * k);
                    for (g, u) in others.iter().zip([u1, u2, u3]) {
                        let (first, len) = part.groups[*g];
                        for (off, bit) in index_to_bits(u as u64, len).into_iter().enumerate() {
                            pairs.push((first + off as u32, bit));
                        }
                    }
                    let sat = eval_clauses(f, &Assignment::partial(&pairs)?);
                    let count = labels
                        .iter()
                        .enumerate()
                        .filter(|&(j, &lab)| lab == i && sat.bits.get(j))
                        .count() as u64;
                    counts[i][(u1 * k + u2) * k + u3] = count;
                }
            }
        }
    }
    Ok(CountTensors { k, counts })
}

/// Four 0/1 indicator tensors over one field, plus the per-label targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    k: usize,
    tvec: [u64; 4],
    tensors: [Tensor3; 4],
}

impl CliqueInstance {
    /// Validates 0/1 entries, one cubical shape and field across all four
    /// tensors, and — unless `allow_small_field` — that the field order
    /// exceeds k⁴ so clique counts are faithful integers.
    pub fn new(
        tensors: [Tensor3; 4],
        tvec: [u64; 4],
        allow_small_field: bool,
    ) -> Result<CliqueInstance> {
        let (d1, d2, d3) = tensors[0].dims();
        if d1 != d2 || d2 != d3 {
            return Err(Error::Invalid(format!(
                "edge tensors must be cubical, got {d1}x{d2}x{d3}"
            )));
        }
        let k = d1;
        let gf = tensors[0].gf();
        for (i, t) in tensors.iter().enumerate() {
            if t.dims() != (k, k, k) || t.gf() != gf {
                return Err(Error::Invalid(format!(
                    "edge tensor {i} differs in shape or field"
                )));
            }
            if t.entries().iter().any(|&e| e > 1) {
                return Err(Error::Invalid(format!("edge tensor {i} has non-0/1 entries")));
            }
        }
        let k4 = (k as u64).pow(4);
        if !allow_small_field && gf.p() <= k4 {
            return Err(Error::Invalid(format!(
                "field order {} must exceed k^4 = {k4} for faithful counts",
                gf.p()
            )));
        }
        Ok(CliqueInstance { k, tvec, tensors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gf(&self) -> Gf {
        self.tensors[0].gf()
    }

    pub fn tvec(&self) -> [u64; 4] {
        self.tvec
    }

    /// Overall satisfaction target Σ tvec.
    pub fn t(&self) -> u64 {
        self.tvec.iter().sum()
    }

    pub fn tensor(&self, i: usize) -> &Tensor3 {
        &self.tensors[i]
    }

    /// `clique <k> <p>` + `tvec <t0> <t1> <t2> <t3>` + four tensor blocks.
    pub fn to_text(&self) -> String {
        let mut out = format!("clique {} {}\n", self.k, self.gf().p());
        out.push_str(&format!(
            "tvec {} {} {} {}\n",
            self.tvec[0], self.tvec[1], self.tvec[2], self.tvec[3]
        ));
        for t in &self.tensors {
            out.push('\n');
            out.push_str(&t.to_text());
        }
        out
    }

    /// Strict inverse of [`CliqueInstance::to_text`].  The field check is
    /// re-run; files written with a small field re-parse only through
    /// [`CliqueInstance::parse_text_with_small_field`].
    pub fn parse_text(text: &str) -> Result<CliqueInstance> {
        Self::parse_inner(text, false)
    }

    pub fn parse_text_with_small_field(text: &str) -> Result<CliqueInstance> {
        Self::parse_inner(text, true)
    }

    fn parse_inner(text: &str, allow_small_field: bool) -> Result<CliqueInstance> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("clique") {
            return Err(parse_err(1, "expected `clique <k> <p>` header"));
        }
        let k: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad part size"))?;
        let p: u64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad modulus"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        if k == 0 {
            return Err(parse_err(1, "part size must be positive"));
        }
        let (tline_no, tline) = lines.next().ok_or_else(|| parse_err(2, "missing tvec line"))?;
        let mut it = tline.split_whitespace();
        if it.next() != Some("tvec") {
            return Err(parse_err(tline_no + 1, "expected `tvec <t0> <t1> <t2> <t3>`"));
        }
        let mut tvec = [0u64; 4];
        for slot in &mut tvec {
            *slot = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(tline_no + 1, "bad target entry"))?;
        }
        if it.next().is_some() {
            return Err(parse_err(tline_no + 1, "trailing tokens after targets"));
        }
        // each tensor block: one `ten` header + k*k content rows
        let rest: Vec<(usize, &str)> = lines.collect();
        let per_block = 1 + k * k;
        if rest.len() != 4 * per_block {
            return Err(Error::Parse {
                line: rest.last().map(|&(l, _)| l + 1).unwrap_or(3),
                msg: format!(
                    "expected 4 tensor blocks of {per_block} lines, found {} lines",
                    rest.len()
                ),
            });
        }
        let mut tensors = Vec::with_capacity(4);
        for chunk in rest.chunks(per_block) {
            let block: String = chunk
                .iter()
                .map(|&(_, l)| l)
                .collect::<Vec<_>>()
                .join("\n");
            let t = Tensor3::parse_text(&block)?;
            if t.gf().p() != p {
                return Err(Error::Invalid(
                    "tensor block modulus differs from instance header".into(),
                ));
            }
            tensors.push(t);
        }
        let tensors: [Tensor3; 4] = tensors.try_into().expect("four blocks read");
        CliqueInstance::new(tensors, tvec, allow_small_field)
    }
}

/// Indicator instance for one target tuple: A_i = [T_i = tvec[i]].
pub fn build_clique_instance(f: &Formula, tvec: [u64; 4], gf: Gf) -> Result<CliqueInstance> {
    let counts = build_count_tensors(f)?;
    let k = counts.k();
    let mut tensors = Vec::with_capacity(4);
    for i in 0..4 {
        let mut t = Tensor3::zeros(k, k, k, gf);
        for u1 in 0..k {
            for u2 in 0..k {
                for u3 in 0..k {
                    if counts.get(i, u1, u2, u3) == tvec[i] {
                        t.set(u1, u2, u3, 1);
                    }
                }
            }
        }
        tensors.push(t);
    }
    let tensors: [Tensor3; 4] = tensors.try_into().expect("four tensors built");
    CliqueInstance::new(tensors, tvec, false)
}

/// The exact 4-index cycle sum
/// Σ A_0[j1,j2,j3]·A_1[j2,j3,j0]·A_2[j3,j0,j1]·A_3[j0,j1,j2] as an integer
/// (entries are 0/1, so the sum counts cliques and fits k⁴).
#[allow(non_snake_case)]
pub fn brute_clique_R(inst: &CliqueInstance) -> Result<u64> {
    let k = inst.k();
    if k > MAX_BRUTE_CLIQUE_K {
        return Err(Error::SizeBound {
            what: "brute-force clique part size",
            limit: MAX_BRUTE_CLIQUE_K as u64,
            got: k as u64,
        });
    }
    let mut r = 0u64;
    for j0 in 0..k {
        for j1 in 0..k {
            for j2 in 0..k {
                for j3 in 0..k {
                    r += inst.tensor(0).get(j1, j2, j3)
                        * inst.tensor(1).get(j2, j3, j0)
                        * inst.tensor(2).get(j3, j0, j1)
                        * inst.tensor(3).get(j0, j1, j2);
                }
            }
        }
    }
    Ok(r)
}

/// Lexicographically first (j0,j1,j2,j3) whose four edge indicators are all
/// 1, if any.
pub fn find_clique(inst: &CliqueInstance) -> Result<Option<[usize; 4]>> {
    let k = inst.k();
    if k > MAX_BRUTE_CLIQUE_K {
        return Err(Error::SizeBound {
            what: "brute-force clique part size",
            limit: MAX_BRUTE_CLIQUE_K as u64,
            got: k as u64,
        });
    }
    for j0 in 0..k {
        for j1 in 0..k {
            for j2 in 0..k {
                for j3 in 0..k {
                    if inst.tensor(0).get(j1, j2, j3) == 1
                        && inst.tensor(1).get(j2, j3, j0) == 1
                        && inst.tensor(2).get(j3, j0, j1) == 1
                        && inst.tensor(3).get(j0, j1, j2) == 1
                    {
                        return Ok(Some([j0, j1, j2, j3]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Can exactly `t` clauses be satisfied?  Decided through the hypergraph:
/// the formula is padded to 4 | n, and every nonnegative 4-tuple summing to
/// `t` is tried until some instance has a positive clique count.  Tuples
/// with a per-label target above that label's clause count are skipped —
/// their indicator tensor is identically zero.
pub fn max3sat_via_cliques(f: &Formula, t: usize, gf: Gf) -> Result<bool> {
    if t > f.m() {
        return Ok(false);
    }
    let f = f.pad_to_multiple(4)?;
    let labels = label_clauses(&f, &Partition4::contiguous(f.n())?)?;
    let mut label_count = [0u64; 4];
    for &lab in &labels {
        label_count[lab] += 1;
    }
    let t = t as u64;
    for t0 in 0..=t.min(label_count[0]) {
        for t1 in 0..=(t - t0).min(label_count[1]) {
            for t2 in 0..=(t - t0 - t1).min(label_count[2]) {
                let t3 = t - t0 - t1 - t2;
                if t3 > label_count[3] {
                    continue;
                }
                let inst = build_clique_instance(&f, [t0, t1, t2, t3], gf)?;
                if brute_clique_R(&inst)? > 0 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
