//! Threshold circuits and the t-wise common-zero property.
//!
//! A `THR` gate with threshold `a` over `b` wires fires when at least `a` of
//! its inputs are 1.  Circuits here carry a parameter `t` and are
//! structurally valid when every gate satisfies `b = (a-1)*t + 1`, `a >= 2`:
//! any `t` inputs that each keep such a gate at 0 leave a wire that is 0 in
//! all of them, a property that survives composition.  That makes circuit
//! witnesses checkable: a valid circuit that never fires on the complements
//! of an instance's vectors certifies that no orthogonal tuple exists.

use crate::bits::BitVec;
use crate::error::{parse_err, Error, Result};
use crate::ov::OvInstance;

/// Largest truth-table arity.
pub const MAX_TT_ARITY: u32 = 20;

/// Default cap on multiset enumeration in [`qt_membership_naive`].
pub const MAX_NAIVE_MULTISETS: u64 = 1 << 22;

/// Gate input: variable (1-based) or earlier gate (1-based).  No constants,
/// no negations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThrRef {
    Var(u32),
    Gate(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThrGate {
    /// Fires when at least this many inputs are 1.
    pub threshold: u64,
    pub inputs: Vec<ThrRef>,
}

/// A threshold circuit with its declared `t`.  The last gate is the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThrCircuit {
    t: u32,
    gates: Vec<ThrGate>,
}

impl ThrCircuit {
    /// Validates references (acyclicity by construction: gates may only read
    /// earlier gates) and non-emptiness.  Shape rules are checked separately
    /// by [`ThrCircuit::validate_shape`] so that mis-shaped circuits can be
    /// constructed and then rejected as structurally invalid.
    pub fn new(t: u32, gates: Vec<ThrGate>) -> Result<ThrCircuit> {
        if t == 0 {
            return Err(Error::Invalid("t must be at least 1".into()));
        }
        if gates.is_empty() {
            return Err(Error::Invalid("circuit has no gates".into()));
        }
        for (i, g) in gates.iter().enumerate() {
            if g.inputs.is_empty() {
                return Err(Error::Invalid(format!("gate {} has no inputs", i + 1)));
            }
            for r in &g.inputs {
                match *r {
                    ThrRef::Var(0) => {
                        return Err(Error::Invalid(format!(
                            "gate {}: variable index 0",
                            i + 1
                        )))
                    }
                    ThrRef::Gate(j) if j == 0 || j as usize > i => {
                        return Err(Error::Invalid(format!(
                            "gate {}: reference g{} is not an earlier gate",
                            i + 1,
                            j
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(ThrCircuit { t, gates })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn gates(&self) -> &[ThrGate] {
        &self.gates
    }

    /// Largest referenced variable index.
    pub fn arity(&self) -> u32 {
        self.gates
            .iter()
            .flat_map(|g| g.inputs.iter())
            .filter_map(|r| match r {
                ThrRef::Var(j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Structural validity: every gate's wire count `b` equals
    /// `(a - 1) * t + 1` with threshold `a >= 2`.
    pub fn validate_shape(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            let a = g.threshold;
            let b = g.inputs.len() as u64;
            if a < 2 {
                return Err(Error::Structural(format!(
                    "gate {}: threshold {} below 2",
                    i + 1,
                    a
                )));
            }
            if b != (a - 1) * self.t as u64 + 1 {
                return Err(Error::Structural(format!(
                    "gate {}: {} wires, threshold {} requires {} for t = {}",
                    i + 1,
                    b,
                    a,
                    (a - 1) * self.t as u64 + 1,
                    self.t
                )));
            }
        }
        Ok(())
    }

    /// Gate-by-gate evaluation; inputs may be longer than the circuit's
    /// arity, never shorter.
    pub fn eval(&self, input: &BitVec) -> Result<bool> {
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let mut ones = 0u64;
            for r in &g.inputs {
                let v = match *r {
                    ThrRef::Var(j) => {
                        if j as usize > input.len() {
                            return Err(Error::Invalid(format!(
                                "circuit reads x{} but input has {} coordinates",
                                j,
                                input.len()
                            )));
                        }
                        input.get(j as usize - 1)
                    }
                    ThrRef::Gate(j) => values[j as usize - 1],
                };
                ones += v as u64;
            }
            values.push(ones >= g.threshold);
        }
        Ok(*values.last().unwrap())
    }

    /// `t <t>` header, then one gate per line:
    /// `g<i> = THR <a> <b> <ref...>` with `b` references `x<j>` / `g<j>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("t {}\n", self.t);
        for (i, g) in self.gates.iter().enumerate() {
            out.push_str(&format!("g{} = THR {} {}", i + 1, g.threshold, g.inputs.len()));
            for r in &g.inputs {
                match r {
                    ThrRef::Var(j) => out.push_str(&format!(" x{j}")),
                    ThrRef::Gate(j) => out.push_str(&format!(" g{j}")),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Strict inverse of [`ThrCircuit::to_text`].
    pub fn parse_text(text: &str) -> Result<ThrCircuit> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("t") {
            return Err(parse_err(1, "expected `t <t>` header"));
        }
        let t: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(1, "bad t"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "trailing tokens after header"));
        }
        let mut gates: Vec<ThrGate> = Vec::new();
        for (lineno, raw) in lines {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let id = it.next().unwrap_or("");
            let expect = gates.len() + 1;
            if id != format!("g{expect}") {
                return Err(parse_err(
                    lineno,
                    format!("expected gate id g{expect}, found `{id}`"),
                ));
            }
            if it.next() != Some("=") {
                return Err(parse_err(lineno, "expected `=`"));
            }
            match it.next() {
                Some("THR") => {}
                Some(other) => {
                    return Err(Error::Structural(format!(
                        "line {lineno}: gate kind `{other}` not supported (THR only)"
                    )))
                }
                None => return Err(parse_err(lineno, "missing gate kind")),
            }
            let a: u64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(lineno, "bad threshold"))?;
            let b: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(lineno, "bad wire count"))?;
            // the declared count is untrusted: grow with the actual tokens
            let mut inputs = Vec::new();
            for _ in 0..b {
                let tok = it
                    .next()
                    .ok_or_else(|| parse_err(lineno, "fewer references than declared"))?;
                if let Some(d) = tok.strip_prefix('x') {
                    let j: u32 = d
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad reference `{tok}`")))?;
                    inputs.push(ThrRef::Var(j));
                } else if let Some(d) = tok.strip_prefix('g') {
                    let j: u32 = d
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad reference `{tok}`")))?;
                    inputs.push(ThrRef::Gate(j));
                } else {
                    return Err(parse_err(lineno, format!("bad reference `{tok}`")));
                }
            }
            if it.next().is_some() {
                return Err(parse_err(lineno, "more references than declared"));
            }
            // defer full ref validation to the constructor
            gates.push(ThrGate {
                threshold: a,
                inputs,
            });
        }
        ThrCircuit::new(t, gates)
    }
}

/// The canonical witness for a family whose vectors all have coordinate
/// `coord` (1-based) equal to 1: one gate `THR` with threshold 2 over `t+1`
/// copies of that coordinate, which computes the coordinate itself.
pub fn common_coordinate_witness(coord: u32, t: u32) -> Result<ThrCircuit> {
    if coord == 0 {
        return Err(Error::Invalid("coordinates are 1-based".into()));
    }
    ThrCircuit::new(
        t,
        vec![ThrGate {
            threshold: 2,
            inputs: vec![ThrRef::Var(coord); t as usize + 1],
        }],
    )
}

/// A truth table over `n <= 20` inputs; entry `i` is the value on the input
/// whose bits are the big-endian digits of `i` (variable 1 most significant,
/// matching assignment enumeration order everywhere else).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u32,
    bits: BitVec,
}

impl TruthTable {
    pub fn new(n: u32, bits: BitVec) -> Result<TruthTable> {
        if n == 0 || n > MAX_TT_ARITY {
            return Err(Error::SizeBound {
                what: "truth-table arity",
                limit: MAX_TT_ARITY as u64,
                got: n as u64,
            });
        }
        if bits.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "table length {} != 2^{}",
                bits.len(),
                n
            )));
        }
        Ok(TruthTable { n, bits })
    }

    pub fn from_fn(n: u32, f: impl Fn(u64) -> bool) -> Result<TruthTable> {
        if n == 0 || n > MAX_TT_ARITY {
            return Err(Error::SizeBound {
                what: "truth-table arity",
                limit: MAX_TT_ARITY as u64,
                got: n as u64,
            });
        }
        let mut bits = BitVec::zeros(1 << n);
        for i in 0..1u64 << n {
            if f(i) {
                bits.set(i as usize, true);
            }
        }
        TruthTable::new(n, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get_idx(&self, i: u64) -> bool {
        self.bits.get(i as usize)
    }

    /// Indices of inputs mapped to 0.
    pub fn zero_indices(&self) -> Vec<u64> {
        (0..1u64 << self.n).filter(|&i| !self.get_idx(i)).collect()
    }
}

/// Whether every `t`-multiset of zeros of `f` shares a coordinate that is 0
/// in all of them.  Computed by closing the set of one-supports of zeros
/// under pairwise union `t - 1` times and asking whether the full support is
/// reachable — reachable exactly when some `t` zeros jointly cover every
/// coordinate with 1s, i.e. share no common zero coordinate.
pub fn qt_membership(f: &TruthTable, t: u32) -> Result<bool> {
    if t == 0 {
        return Err(Error::Invalid("t must be at least 1".into()));
    }
    let n = f.n();
    let full: u64 = (1 << n) - 1;
    let size = 1usize << n;
    // one-supports of zeros, as masks (bit k of the mask = variable k+1's value)
    let mut base = vec![false; size];
    for z in f.zero_indices() {
        base[z as usize] = true;
    }
    let mut reach = base.clone();
    for _ in 1..t {
        let mut next = reach.clone();
        for u in 0..size {
            if !reach[u] {
                continue;
            }
            for (s, &is_zero) in base.iter().enumerate() {
                if is_zero {
                    next[u | s] = true;
                }
            }
        }
        if next == reach {
            break; // closed early
        }
        reach = next;
    }
    Ok(!reach[full as usize])
}

/// Reference implementation: enumerates all `t`-multisets of zeros and looks
/// for a common zero coordinate directly.  Refuses when the multiset count
/// exceeds `max_multisets`.
pub fn qt_membership_naive(f: &TruthTable, t: u32, max_multisets: u64) -> Result<bool> {
    if t == 0 {
        return Err(Error::Invalid("t must be at least 1".into()));
    }
    let zeros = f.zero_indices();
    let z = zeros.len() as u64;
    // C(z + t - 1, t), saturating
    let mut count: u64 = 1;
    for i in 0..t as u64 {
        count = count.saturating_mul(z + i) / (i + 1);
    }
    if count > max_multisets {
        return Err(Error::SizeBound {
            what: "zero multisets",
            limit: max_multisets,
            got: count,
        });
    }
    let full: u64 = (1 << f.n()) - 1;
    // depth-first over non-decreasing index tuples, carrying the OR of supports
    fn rec(zeros: &[u64], start: usize, depth: u32, acc: u64, full: u64) -> bool {
        if acc == full {
            return true; // no common zero coordinate in this multiset
        }
        if depth == 0 {
            return false;
        }
        for i in start..zeros.len() {
            if rec(zeros, i, depth - 1, acc | zeros[i], full) {
                return true;
            }
        }
        false
    }
    Ok(!rec(&zeros, 0, t, 0, full))
}

/// Checks a circuit witness for membership: structural validity for `t`
/// (errors on violation, distinctly from a semantic `false`), then
/// `C(x) <= f(x)` for every input.  Acceptance certifies `f` has the
/// `t`-wise common-zero property.
pub fn verify_qt_witness(f: &TruthTable, c: &ThrCircuit, t: u32) -> Result<bool> {
    if c.t() != t {
        return Err(Error::Structural(format!(
            "circuit declares t = {}, verifier given t = {}",
            c.t(),
            t
        )));
    }
    c.validate_shape()?;
    if c.arity() > f.n() {
        return Err(Error::Invalid(format!(
            "circuit arity {} exceeds table arity {}",
            c.arity(),
            f.n()
        )));
    }
    let n = f.n();
    for i in 0..1u64 << n {
        let x = BitVec::from_bools(&crate::cnf::index_to_bits(i, n));
        if c.eval(&x)? && !f.get_idx(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a circuit certificate that an instance has no orthogonal tuple:
/// the circuit must be structurally valid for the instance's part count and
/// output 0 on the complement of every vector in every part.
pub fn verify_tov_certificate(inst: &OvInstance, c: &ThrCircuit) -> Result<bool> {
    if c.t() as usize != inst.t() {
        return Err(Error::Structural(format!(
            "circuit declares t = {}, instance has {} parts",
            c.t(),
            inst.t()
        )));
    }
    c.validate_shape()?;
    if c.arity() as usize > inst.dim() {
        return Err(Error::Invalid(format!(
            "circuit arity {} exceeds instance dimension {}",
            c.arity(),
            inst.dim()
        )));
    }
    for part in inst.parts() {
        for x in part {
            if c.eval(&x.complement())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
