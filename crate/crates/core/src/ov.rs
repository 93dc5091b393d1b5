//! Orthogonal-vectors instances and the satisfiability reductions into them.
//!
//! An instance is `t >= 2` parts of equal-dimension 0/1 vectors; it is a YES
//! instance when one vector per part can be chosen with no coordinate equal
//! to 1 in all of them.  The reduction from a CNF formula splits the
//! variables into `t` equal contiguous groups and maps each group assignment
//! to the vector of clauses it fails to satisfy, so an orthogonal tuple is
//! exactly a satisfying assignment reassembled from group pieces.

use crate::bits::BitVec;
use crate::cnf::{eval_clauses, index_to_bits, Assignment, Formula};
use crate::error::{parse_err, Error, Result};

/// Largest group bit-width the reduction will enumerate (2^20 vectors).
pub const MAX_GROUP_BITS: u32 = 20;

/// Default cap on the number of tuples [`brute_ov`] will inspect.
pub const MAX_BRUTE_TUPLES: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    dim: usize,
    parts: Vec<Vec<BitVec>>,
}

impl OvInstance {
    /// Validates: at least two parts, every vector of every part has length
    /// `dim`.  Parts may be empty.
    pub fn new(dim: usize, parts: Vec<Vec<BitVec>>) -> Result<OvInstance> {
        if parts.len() < 2 {
            return Err(Error::Invalid(format!(
                "need at least 2 parts, got {}",
                parts.len()
            )));
        }
        for (i, part) in parts.iter().enumerate() {
            for v in part {
                if v.len() != dim {
                    return Err(Error::Invalid(format!(
                        "part {}: vector of length {} in dimension-{} instance",
                        i + 1,
                        v.len(),
                        dim
                    )));
                }
            }
        }
        Ok(OvInstance { dim, parts })
    }

    pub fn t(&self) -> usize {
        self.parts.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[Vec<BitVec>] {
        &self.parts
    }

    /// `ov <t> <dim> <size_1> ... <size_t>` header, then every vector as a
    /// 0/1 line, parts in order.
    pub fn to_text(&self) -> String {
        let mut out = format!("ov {} {}", self.t(), self.dim);
        for part in &self.parts {
            out.push_str(&format!(" {}", part.len()));
        }
        out.push('\n');
        for part in &self.parts {
            for v in part {
                out.push_str(&v.to_01());
                out.push('\n');
            }
        }
        out
    }

    /// Strict inverse of [`OvInstance::to_text`].
    pub fn parse_text(text: &str) -> Result<OvInstance> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("ov") {
            return Err(parse_err(1, "expected `ov` header"));
        }
        let t: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad part count"))?;
        let dim: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad dimension"))?;
        // declared sizes are untrusted: grow with the actual content
        let mut sizes = Vec::new();
        for _ in 0..t {
            let s: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(1, "missing part size"))?;
            sizes.push(s);
        }
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let mut parts = Vec::new();
        for (pi, size) in sizes.iter().enumerate() {
            let mut part = Vec::new();
            for _ in 0..*size {
                let (lineno, line) = lines.next().ok_or_else(|| {
                    parse_err(0, format!("unexpected end of input in part {}", pi + 1))
                })?;
                let v = BitVec::parse_01(line.trim_end())
                    .ok_or_else(|| parse_err(lineno + 1, "vector line must be 0/1"))?;
                if v.len() != dim {
                    return Err(parse_err(
                        lineno + 1,
                        format!("vector length {} != dimension {}", v.len(), dim),
                    ));
                }
                part.push(v);
            }
            parts.push(part);
        }
        if let Some((lineno, line)) = lines.next() {
            if !line.trim().is_empty() {
                return Err(parse_err(lineno + 1, "trailing content"));
            }
            if lines.any(|(_, l)| !l.trim().is_empty()) {
                return Err(parse_err(lineno + 1, "trailing content"));
            }
        }
        OvInstance::new(dim, parts)
    }
}

/// Contiguous split of variables `1..=n` into `t` equal groups:
/// `(first_var, group_len)` per group.  Requires `t | n` (or `n == 0`).
pub fn group_ranges(n: u32, t: u32) -> Result<Vec<(u32, u32)>> {
    if t < 2 {
        return Err(Error::Invalid(format!("need t >= 2, got {t}")));
    }
    if n % t != 0 {
        return Err(Error::Invalid(format!("{t} does not divide n = {n}")));
    }
    let g = n / t;
    Ok((0..t).map(|i| (1 + i * g, g)).collect())
}

/// The clause-indexed vector of a partial assignment under the
/// "1 = not satisfied" reading used by every reduction here.
pub fn unsat_vector(f: &Formula, a: &Assignment) -> BitVec {
    eval_clauses(f, a).bits.complement()
}

/// Reduction to `t` parts.  Requires `t | n` — pad the formula first (the
/// added variables change nothing: their group vectors repeat).  Part `i`'s
/// vector `j` corresponds to assigning group `i` the bits
/// [`index_to_bits`]`(j, n/t)`, so vectors appear in lexicographic order of
/// their group assignment and index `j` recovers the assignment exactly.
pub fn sat_to_tov(f: &Formula, t: u32) -> Result<OvInstance> {
    let ranges = group_ranges(f.n(), t)?;
    let g = f.n() / t;
    if g > MAX_GROUP_BITS {
        return Err(Error::SizeBound {
            what: "group bit-width",
            limit: MAX_GROUP_BITS as u64,
            got: g as u64,
        });
    }
    let mut parts = Vec::with_capacity(t as usize);
    for &(first, len) in &ranges {
        let mut part = Vec::with_capacity(1usize << len);
        for idx in 0u64..1 << len {
            let bits = index_to_bits(idx, len);
            let a = Assignment::range(first, &bits);
            part.push(unsat_vector(f, &a));
        }
        parts.push(part);
    }
    OvInstance::new(f.m(), parts)
}

/// Two-part special case.
pub fn sat_to_ov(f: &Formula) -> Result<OvInstance> {
    sat_to_tov(f, 2)
}

/// Exhaustive orthogonality search; returns the lexicographically first
/// witness tuple (one 0-based index per part) or `None`.
pub fn brute_ov_bounded(inst: &OvInstance, max_tuples: u64) -> Result<Option<Vec<u64>>> {
    let mut tuples: u64 = 1;
    for part in inst.parts() {
        tuples = tuples.saturating_mul(part.len() as u64);
    }
    if tuples > max_tuples {
        return Err(Error::SizeBound {
            what: "orthogonality search tuples",
            limit: max_tuples,
            got: tuples,
        });
    }
    if inst.parts().iter().any(|p| p.is_empty()) {
        return Ok(None); // no tuple can be formed
    }
    let t = inst.t();
    let mut idx = vec![0u64; t];
    loop {
        let mut acc = inst.parts()[0][idx[0] as usize].clone();
        for i in 1..t {
            acc.and_assign(&inst.parts()[i][idx[i] as usize]);
        }
        if acc.is_zero() {
            return Ok(Some(idx));
        }
        // odometer increment, last index fastest
        let mut k = t;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            idx[k] += 1;
            if (idx[k] as usize) < inst.parts()[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// [`brute_ov_bounded`] at the default tuple cap.
pub fn brute_ov(inst: &OvInstance) -> Result<Option<Vec<u64>>> {
    brute_ov_bounded(inst, MAX_BRUTE_TUPLES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_sat, Lit};

    fn f_sat() -> Formula {
        Formula::new(
            2,
            vec![
                vec![Lit::pos(1), Lit::pos(2)],
                vec![Lit::neg(1), Lit::neg(2)],
            ],
        )
        .unwrap()
    }

    fn f_unsat() -> Formula {
        Formula::new(1, vec![vec![Lit::pos(1)], vec![Lit::neg(1)]]).unwrap()
    }

    #[test]
    fn two_part_reduction_matches_worked_example() {
        let inst = sat_to_ov(&f_sat()).unwrap();
        assert_eq!(inst.t(), 2);
        assert_eq!(inst.dim(), 2);
        let a: Vec<String> = inst.parts()[0].iter().map(|v| v.to_01()).collect();
        let b: Vec<String> = inst.parts()[1].iter().map(|v| v.to_01()).collect();
        assert_eq!(a, vec!["10", "01"]);
        assert_eq!(b, vec!["10", "01"]);
        // witness (0,1): x1=0 with x2=1
        assert_eq!(brute_ov(&inst).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn odd_variable_count_is_a_precondition_error() {
        assert!(sat_to_ov(&f_unsat()).is_err());
        assert!(sat_to_tov(&f_sat(), 4).is_err()); // 4 does not divide 2
    }

    #[test]
    fn unsat_formula_padded_has_no_orthogonal_pair() {
        let inst = sat_to_ov(&f_unsat().pad_to_multiple(2).unwrap()).unwrap();
        let a: Vec<String> = inst.parts()[0].iter().map(|v| v.to_01()).collect();
        let b: Vec<String> = inst.parts()[1].iter().map(|v| v.to_01()).collect();
        assert_eq!(a, vec!["10", "01"]);
        assert_eq!(b, vec!["11", "11"]);
        assert_eq!(brute_ov(&inst).unwrap(), None);
    }

    #[test]
    fn empty_formula_yields_zero_dim_orthogonal_instance() {
        let f = Formula::new(2, vec![]).unwrap();
        let inst = sat_to_ov(&f).unwrap();
        assert_eq!(inst.dim(), 0);
        assert_eq!(inst.parts()[0].len(), 2);
        assert_eq!(brute_ov(&inst).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn t_two_equals_two_part_reduction_bitwise() {
        let f = f_sat();
        assert_eq!(sat_to_ov(&f).unwrap(), sat_to_tov(&f, 2).unwrap());
    }

    #[test]
    fn four_part_reduction_agrees_with_sat() {
        let f = f_sat().pad_to_multiple(4).unwrap();
        let inst = sat_to_tov(&f, 4).unwrap();
        assert_eq!(inst.t(), 4);
        assert_eq!(inst.parts()[0].len(), 2);
        let w = brute_ov(&inst).unwrap();
        assert_eq!(w.is_some(), brute_sat(&f).unwrap().is_some());
    }

    #[test]
    fn group_ranges_are_contiguous() {
        assert_eq!(group_ranges(4, 2).unwrap(), vec![(1, 2), (3, 2)]);
        assert_eq!(
            group_ranges(8, 4).unwrap(),
            vec![(1, 2), (3, 2), (5, 2), (7, 2)]
        );
        assert!(group_ranges(5, 2).is_err());
        assert!(group_ranges(4, 1).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let inst = sat_to_ov(&f_sat()).unwrap();
        let text = inst.to_text();
        assert!(text.starts_with("ov 2 2 2 2\n"));
        assert_eq!(OvInstance::parse_text(&text).unwrap(), inst);
        // zero-dimension instances round-trip too (empty vector lines)
        let z = sat_to_ov(&Formula::new(2, vec![]).unwrap()).unwrap();
        assert_eq!(OvInstance::parse_text(&z.to_text()).unwrap(), z);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(OvInstance::parse_text("").is_err());
        assert!(OvInstance::parse_text("ov 2 2 1\n10\n").is_err()); // missing size
        assert!(OvInstance::parse_text("ov 2 2 1 1\n10\n").is_err()); // missing vector
        assert!(OvInstance::parse_text("ov 2 2 1 1\n10\n011\n").is_err()); // wrong length
        assert!(OvInstance::parse_text("ov 2 2 1 1\n10\n01\nxx\n").is_err()); // trailing
        assert!(OvInstance::parse_text("ov 1 2 1\n10\n").is_err()); // t < 2
        assert!(OvInstance::parse_text("ov 2 2 1 1\n10\n0a\n").is_err()); // bad char
    }

    #[test]
    fn empty_parts_mean_no_tuple() {
        let v = |s: &str| BitVec::parse_01(s).unwrap();
        let inst = OvInstance::new(2, vec![vec![v("00")], vec![]]).unwrap();
        assert_eq!(brute_ov(&inst).unwrap(), None);
        assert_eq!(OvInstance::parse_text(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn direct_instances_with_disjoint_supports() {
        let v = |s: &str| BitVec::parse_01(s).unwrap();
        let inst = OvInstance::new(2, vec![vec![v("10")], vec![v("01")]]).unwrap();
        assert_eq!(brute_ov(&inst).unwrap(), Some(vec![0, 0]));
        let inst3 =
            OvInstance::new(2, vec![vec![v("10")], vec![v("10")], vec![v("01")]]).unwrap();
        assert_eq!(brute_ov(&inst3).unwrap(), Some(vec![0, 0, 0]));
    }

    #[test]
    fn brute_ov_respects_tuple_cap() {
        let inst = sat_to_ov(&f_sat()).unwrap();
        assert!(brute_ov_bounded(&inst, 3).is_err());
        assert!(brute_ov_bounded(&inst, 4).unwrap().is_some());
    }

    #[test]
    fn group_width_cap_enforced() {
        let f = Formula::new(60, vec![]).unwrap();
        assert!(matches!(
            sat_to_ov(&f),
            Err(Error::SizeBound {
                what: "group bit-width",
                ..
            })
        ));
    }
}
