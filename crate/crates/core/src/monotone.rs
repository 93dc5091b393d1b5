//! Monotone separation: balanced-string encodings, the two-sided vector
//! instances extracted from a CNF reduction, the universal monotone function
//! over (encoded formula, clause vector) pairs, and monotone-circuit
//! certificates of unsatisfiability.
//!
//! The balanced encoding maps a payload `x` (at most `n_cap` bits) to
//! `1^|x| 0 x 1^a 0^b` of length `4*n_cap` and weight exactly `2*n_cap`,
//! injectively.  A formula is serialized as sign+index tokens (index width
//! `ceil(log2(n+1))`, an all-zero index closing each clause) and then
//! balanced-encoded, so a fixed-length Boolean word either decodes to a
//! formula of the declared class or provably decodes to nothing.

use crate::bits::BitVec;
use crate::cnf::{brute_sat, index_to_bits, Formula, Lit};
use crate::error::{parse_err, Error, Result};
use crate::ov::sat_to_ov;

/// Balanced encoding `1^|x| 0 x 1^a 0^b` into length `4*n_cap`, weight `2*n_cap`.
pub fn encode_balanced(x: &[bool], n_cap: usize) -> Result<BitVec> {
    if x.len() > n_cap {
        return Err(Error::Invalid(format!(
            "payload length {} exceeds capacity {}",
            x.len(),
            n_cap
        )));
    }
    let weight: usize = x.iter().filter(|&&b| b).count();
    let a = 2 * n_cap - x.len() - weight;
    let total = 4 * n_cap;
    let mut bits = Vec::with_capacity(total);
    bits.extend(std::iter::repeat(true).take(x.len()));
    bits.push(false);
    bits.extend_from_slice(x);
    bits.extend(std::iter::repeat(true).take(a));
    while bits.len() < total {
        bits.push(false);
    }
    if bits.len() != total {
        // only possible when n_cap == 0: the 1-bit terminator does not fit
        return Err(Error::Invalid(
            "capacity 0 admits no balanced encoding".into(),
        ));
    }
    let out = BitVec::from_bools(&bits);
    debug_assert_eq!(out.count_ones(), 2 * n_cap);
    Ok(out)
}

/// Inverse of [`encode_balanced`]; `None` for any string outside the image
/// (wrong length, wrong weight, truncated payload, malformed padding).
pub fn decode_balanced(c: &BitVec) -> Option<Vec<bool>> {
    if c.len() % 4 != 0 || c.is_empty() {
        return None;
    }
    let n_cap = c.len() / 4;
    if c.count_ones() != 2 * n_cap {
        return None;
    }
    let bits = c.to_bools();
    let j = bits.iter().take_while(|&&b| b).count();
    if j > n_cap || j >= bits.len() {
        return None; // no terminator or oversized prefix
    }
    // bits[j] is the 0 terminator
    let payload_start = j + 1;
    let payload_end = payload_start + j;
    if payload_end > bits.len() {
        return None;
    }
    let payload: Vec<bool> = bits[payload_start..payload_end].to_vec();
    let w: usize = payload.iter().filter(|&&b| b).count();
    let a = 2 * n_cap - j - w; // >= 0 since j + w <= 2*n_cap by weight count
    let rest = &bits[payload_end..];
    if rest.len() < a {
        return None;
    }
    if !rest[..a].iter().all(|&b| b) {
        return None;
    }
    if rest[a..].iter().any(|&b| b) {
        return None;
    }
    Some(payload)
}

/// A formula class: formulas over exactly `n` variables, clause width at
/// most `width`, at most `floor(beta * n)` clauses.  Fixes the serialized
/// word length `l` and the clause-vector length `m` of the universal
/// function's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaClass {
    pub n: u32,
    pub width: u32,
    pub beta: f64,
}

impl FormulaClass {
    pub fn new(n: u32, width: u32, beta: f64) -> Result<FormulaClass> {
        if n == 0 {
            return Err(Error::Invalid("class needs n >= 1".into()));
        }
        if width == 0 {
            return Err(Error::Invalid("class needs width >= 1".into()));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Invalid("class needs finite beta > 0".into()));
        }
        if (beta * n as f64).floor() < 1.0 {
            return Err(Error::Invalid(
                "class admits no clauses (beta * n < 1)".into(),
            ));
        }
        Ok(FormulaClass { n, width, beta })
    }

    /// Maximum clause count in the class.
    pub fn max_clauses(&self) -> usize {
        (self.beta * self.n as f64).floor() as usize
    }

    /// Bits per variable index; indices `1..=n` are the nonzero patterns, the
    /// all-zero pattern closes a clause.
    pub fn index_width(&self) -> usize {
        let mut w = 0;
        while (1u64 << w) < self.n as u64 + 1 {
            w += 1;
        }
        w
    }

    /// Payload capacity: every serialized class member fits in this many bits.
    pub fn payload_cap(&self) -> usize {
        self.max_clauses() * (self.width as usize + 1) * (1 + self.index_width())
    }

    /// Length of the balanced code word `c`.
    pub fn word_len(&self) -> usize {
        4 * self.payload_cap()
    }

    /// Length of the clause vector `x`.
    pub fn x_len(&self) -> usize {
        self.max_clauses()
    }

    fn check_member(&self, f: &Formula) -> Result<()> {
        if f.n() != self.n {
            return Err(Error::Invalid(format!(
                "formula has n = {}, class requires exactly {}",
                f.n(),
                self.n
            )));
        }
        if f.width() > self.width as usize {
            return Err(Error::Invalid(format!(
                "formula width {} exceeds class width {}",
                f.width(),
                self.width
            )));
        }
        if f.m() > self.max_clauses() {
            return Err(Error::Invalid(format!(
                "formula has {} clauses, class allows {}",
                f.m(),
                self.max_clauses()
            )));
        }
        Ok(())
    }
}

fn push_index(bits: &mut Vec<bool>, v: u64, w: usize) {
    for i in 0..w {
        bits.push(v >> (w - 1 - i) & 1 == 1);
    }
}

fn read_index(bits: &[bool], pos: usize, w: usize) -> Option<u64> {
    if pos + w > bits.len() {
        return None;
    }
    let mut v = 0u64;
    for i in 0..w {
        v = v << 1 | bits[pos + i] as u64;
    }
    Some(v)
}

/// Serializes a class member and balanced-encodes it into the class word
/// length.  Injective over the class.
pub fn encode_formula(f: &Formula, class: &FormulaClass) -> Result<BitVec> {
    class.check_member(f)?;
    let w = class.index_width();
    let mut bits = Vec::new();
    for clause in f.clauses() {
        for lit in clause {
            bits.push(lit.negated);
            push_index(&mut bits, lit.var as u64, w);
        }
        bits.push(false); // delimiter sign
        push_index(&mut bits, 0, w); // all-zero index closes the clause
    }
    encode_balanced(&bits, class.payload_cap())
}

/// Deserializes a payload back to a formula; `None` for anything that is not
/// the exact serialization of a class member.
pub fn decode_formula(payload: &[bool], class: &FormulaClass) -> Option<Formula> {
    let w = class.index_width();
    let tok = 1 + w;
    if payload.len() % tok != 0 {
        return None;
    }
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut pos = 0;
    while pos < payload.len() {
        let sign = payload[pos];
        let idx = read_index(payload, pos + 1, w)?;
        pos += tok;
        if idx == 0 {
            if sign {
                return None; // delimiter must carry sign 0
            }
            if current.is_empty() {
                return None; // empty clause
            }
            if current.len() > class.width as usize {
                return None;
            }
            clauses.push(std::mem::take(&mut current));
        } else {
            if idx > class.n as u64 {
                return None;
            }
            current.push(Lit {
                var: idx as u32,
                negated: sign,
            });
        }
    }
    if !current.is_empty() {
        return None; // payload ended mid-clause
    }
    if clauses.len() > class.max_clauses() {
        return None;
    }
    Formula::new(class.n, clauses).ok()
}

/// [`decode_balanced`] followed by [`decode_formula`].
pub fn decode_word(c: &BitVec, class: &FormulaClass) -> Option<Formula> {
    if c.len() != class.word_len() {
        return None;
    }
    decode_balanced(c).and_then(|p| decode_formula(&p, class))
}

/// Two vector families to be separated by a monotone function: 1 on every
/// `ones` vector, 0 on every `zeros` vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationInstance {
    pub dim: usize,
    pub ones: Vec<BitVec>,
    pub zeros: Vec<BitVec>,
}

impl SeparationInstance {
    pub fn new(dim: usize, ones: Vec<BitVec>, zeros: Vec<BitVec>) -> Result<SeparationInstance> {
        for v in ones.iter().chain(zeros.iter()) {
            if v.len() != dim {
                return Err(Error::Invalid(format!(
                    "vector of length {} in dimension-{} instance",
                    v.len(),
                    dim
                )));
            }
        }
        Ok(SeparationInstance { dim, ones, zeros })
    }
}

/// The separation instance of a formula: the first reduction part on the
/// ones side, the coordinatewise complement of the second part on the zeros
/// side.  Separability of this instance is exactly unsatisfiability.
pub fn build_separation_instance(f: &Formula) -> Result<SeparationInstance> {
    let inst = sat_to_ov(&f.pad_to_multiple(2)?)?;
    let ones = inst.parts()[0].clone();
    let zeros = inst.parts()[1].iter().map(|b| b.complement()).collect();
    SeparationInstance::new(inst.dim(), ones, zeros)
}

/// Decides whether some monotone function separates the instance: possible
/// iff no zeros-side vector dominates a ones-side vector (the upward closure
/// of the ones side is then such a function).
pub fn separable_monotone(inst: &SeparationInstance) -> bool {
    !inst
        .zeros
        .iter()
        .any(|z| inst.ones.iter().any(|a| z.dominates(a)))
}

/// The canonical separator: 1 iff `z` dominates some ones-side member.
pub fn closure_separator_eval(a_side: &[BitVec], z: &BitVec) -> bool {
    a_side.iter().any(|a| z.dominates(a))
}

/// The formula's own monotone separator: 1 iff no complemented-second-part
/// vector dominates `x`.  `x` has one coordinate per clause.
pub fn eval_f_f(f: &Formula, x: &BitVec) -> Result<bool> {
    if x.len() != f.m() {
        return Err(Error::Invalid(format!(
            "x has length {}, formula has {} clauses",
            x.len(),
            f.m()
        )));
    }
    let inst = sat_to_ov(&f.pad_to_multiple(2)?)?;
    Ok(!inst.parts()[1].iter().any(|b| b.complement().dominates(x)))
}

/// The universal monotone function of a class, with a pluggable
/// satisfiability oracle.  Case order: word weight above half -> 1, below
/// half -> 0; balanced but non-decodable -> 1; decodes satisfiable -> 0;
/// decodes unsatisfiable -> that formula's own separator on the clause
/// vector prefix.
pub fn eval_universal_with(
    c: &BitVec,
    x: &BitVec,
    class: &FormulaClass,
    sat_oracle: &mut dyn FnMut(&Formula) -> Result<bool>,
) -> Result<bool> {
    let l = class.word_len();
    if c.len() != l {
        return Err(Error::Invalid(format!(
            "word length {} != class word length {}",
            c.len(),
            l
        )));
    }
    if x.len() != class.x_len() {
        return Err(Error::Invalid(format!(
            "clause vector length {} != class bound {}",
            x.len(),
            class.x_len()
        )));
    }
    let weight = c.count_ones();
    if 2 * weight > l {
        return Ok(true);
    }
    if 2 * weight < l {
        return Ok(false);
    }
    let f = match decode_word(c, class) {
        None => return Ok(true),
        Some(f) => f,
    };
    if sat_oracle(&f)? {
        return Ok(false);
    }
    let mut prefix = BitVec::zeros(f.m());
    for j in 0..f.m() {
        prefix.set(j, x.get(j));
    }
    eval_f_f(&f, &prefix)
}

/// [`eval_universal_with`] using the exhaustive satisfiability oracle.
pub fn eval_universal(c: &BitVec, x: &BitVec, class: &FormulaClass) -> Result<bool> {
    eval_universal_with(c, x, class, &mut |f| Ok(brute_sat(f)?.is_some()))
}

/// Reference into a monotone circuit: input variable (1-based), constant, or
/// earlier gate (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoRef {
    Var(u32),
    Const(bool),
    Gate(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoOp {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoGate {
    pub op: MonoOp,
    pub left: MonoRef,
    pub right: MonoRef,
}

/// A fan-in-2 AND/OR circuit over variables and constants; the last gate is
/// the output.  Monotone by construction: no other gate kinds exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneCircuit {
    gates: Vec<MonoGate>,
}

impl MonotoneCircuit {
    /// Validates gate references: `Gate(j)` must point to an earlier gate,
    /// `Var(j)` must be positive.
    pub fn new(gates: Vec<MonoGate>) -> Result<MonotoneCircuit> {
        if gates.is_empty() {
            return Err(Error::Structural("circuit has no gates".into()));
        }
        for (i, g) in gates.iter().enumerate() {
            for r in [g.left, g.right] {
                match r {
                    MonoRef::Var(0) => {
                        return Err(Error::Structural(format!(
                            "gate {}: variable index 0",
                            i + 1
                        )))
                    }
                    MonoRef::Gate(j) if j == 0 || j as usize > i => {
                        return Err(Error::Structural(format!(
                            "gate {}: reference g{} is not an earlier gate",
                            i + 1,
                            j
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(MonotoneCircuit { gates })
    }

    pub fn gates(&self) -> &[MonoGate] {
        &self.gates
    }

    /// Largest referenced input index (0 when only constants appear).
    pub fn arity(&self) -> u32 {
        self.gates
            .iter()
            .flat_map(|g| [g.left, g.right])
            .filter_map(|r| match r {
                MonoRef::Var(j) => Some(j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Evaluates on an input vector; fails if the circuit references a
    /// variable beyond the input length.
    pub fn eval(&self, input: &BitVec) -> Result<bool> {
        let mut values = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let read = |r: MonoRef| -> Result<bool> {
                Ok(match r {
                    MonoRef::Const(b) => b,
                    MonoRef::Var(j) => {
                        if j as usize > input.len() {
                            return Err(Error::Invalid(format!(
                                "circuit reads x{} but input has {} coordinates",
                                j,
                                input.len()
                            )));
                        }
                        input.get(j as usize - 1)
                    }
                    MonoRef::Gate(j) => values[j as usize - 1],
                })
            };
            let l = read(g.left)?;
            let r = read(g.right)?;
            values.push(match g.op {
                MonoOp::And => l && r,
                MonoOp::Or => l || r,
            });
        }
        Ok(*values.last().unwrap())
    }

    /// One gate per line: `g<i> = AND|OR <ref> <ref>` with refs `x<j>`, `0`,
    /// `1`, or `g<j>` (`j < i`); the last line is the output gate.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.gates.iter().enumerate() {
            let op = match g.op {
                MonoOp::And => "AND",
                MonoOp::Or => "OR",
            };
            out.push_str(&format!(
                "g{} = {} {} {}\n",
                i + 1,
                op,
                render_ref(g.left),
                render_ref(g.right)
            ));
        }
        out
    }

    /// Strict inverse of [`MonotoneCircuit::to_text`].  Gate ids must be
    /// `g1, g2, ...` in order; any gate kind other than AND/OR is a
    /// structural error.
    pub fn parse_text(text: &str) -> Result<MonotoneCircuit> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
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
            let op = match it.next() {
                Some("AND") => MonoOp::And,
                Some("OR") => MonoOp::Or,
                Some(other) => {
                    return Err(Error::Structural(format!(
                        "line {lineno}: gate kind `{other}` is not monotone (AND/OR only)"
                    )))
                }
                None => return Err(parse_err(lineno, "missing gate kind")),
            };
            let l = parse_ref(it.next(), lineno, gates.len())?;
            let r = parse_ref(it.next(), lineno, gates.len())?;
            if it.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens"));
            }
            gates.push(MonoGate { op, left: l, right: r });
        }
        MonotoneCircuit::new(gates)
    }
}

fn render_ref(r: MonoRef) -> String {
    match r {
        MonoRef::Var(j) => format!("x{j}"),
        MonoRef::Const(b) => if b { "1" } else { "0" }.to_string(),
        MonoRef::Gate(j) => format!("g{j}"),
    }
}

fn parse_ref(tok: Option<&str>, lineno: usize, gates_so_far: usize) -> Result<MonoRef> {
    let tok = tok.ok_or_else(|| parse_err(lineno, "missing operand"))?;
    if tok == "0" {
        return Ok(MonoRef::Const(false));
    }
    if tok == "1" {
        return Ok(MonoRef::Const(true));
    }
    if let Some(d) = tok.strip_prefix('x') {
        let j: u32 = d
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad input reference `{tok}`")))?;
        if j == 0 {
            return Err(parse_err(lineno, "input indices start at x1"));
        }
        return Ok(MonoRef::Var(j));
    }
    if let Some(d) = tok.strip_prefix('g') {
        let j: u32 = d
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad gate reference `{tok}`")))?;
        if j == 0 || j as usize > gates_so_far {
            return Err(parse_err(
                lineno,
                format!("g{j} does not refer to an earlier gate"),
            ));
        }
        return Ok(MonoRef::Gate(j));
    }
    Err(parse_err(lineno, format!("unrecognized operand `{tok}`")))
}

/// Materializes the upward closure of `a_side` as a circuit: an OR over one
/// AND-chain per member (a member with no 1s contributes constant 1; an
/// empty family is constant 0).  Evaluates identically to
/// [`closure_separator_eval`] on every input of length `dim`.
pub fn closure_circuit(a_side: &[BitVec], dim: usize) -> Result<MonotoneCircuit> {
    let mut gates: Vec<MonoGate> = Vec::new();
    let mut member_refs: Vec<MonoRef> = Vec::new();
    for a in a_side {
        if a.len() != dim {
            return Err(Error::Invalid("member length != dim".into()));
        }
        let coords: Vec<u32> = (0..dim as u32).filter(|&i| a.get(i as usize)).collect();
        let r = match coords.len() {
            0 => MonoRef::Const(true),
            1 => MonoRef::Var(coords[0] + 1),
            _ => {
                let mut acc = MonoRef::Var(coords[0] + 1);
                for &c in &coords[1..] {
                    gates.push(MonoGate {
                        op: MonoOp::And,
                        left: acc,
                        right: MonoRef::Var(c + 1),
                    });
                    acc = MonoRef::Gate(gates.len() as u32);
                }
                acc
            }
        };
        member_refs.push(r);
    }
    let out = match member_refs.len() {
        0 => {
            gates.push(MonoGate {
                op: MonoOp::And,
                left: MonoRef::Const(false),
                right: MonoRef::Const(false),
            });
            MonoRef::Gate(gates.len() as u32)
        }
        1 => member_refs[0],
        _ => {
            let mut acc = member_refs[0];
            for &r in &member_refs[1..] {
                gates.push(MonoGate {
                    op: MonoOp::Or,
                    left: acc,
                    right: r,
                });
                acc = MonoRef::Gate(gates.len() as u32);
            }
            acc
        }
    };
    // ensure the output is a gate (the wire format has no bare-wire output)
    if !matches!(out, MonoRef::Gate(j) if j as usize == gates.len()) {
        gates.push(MonoGate {
            op: MonoOp::Or,
            left: out,
            right: out,
        });
    }
    MonotoneCircuit::new(gates)
}

/// The primed two-sided instance of a formula: ones-side vectors carry the
/// balanced encoding of their originating half-assignment index in front of
/// the clause vector; zeros-side vectors are the full-vector complements of
/// zero-prefixed second-part vectors.  Separability again equals
/// unsatisfiability, and the upward closure of the ones side is the
/// canonical separator.
pub fn build_primed_instance(f: &Formula) -> Result<SeparationInstance> {
    let padded = f.pad_to_multiple(2)?;
    let inst = sat_to_ov(&padded)?;
    let h = (padded.n() / 2) as usize;
    let l = 4 * h; // balanced-word length for h-bit half-assignment payloads
    let m = inst.dim();
    let mut ones = Vec::with_capacity(inst.parts()[0].len());
    for (j, a) in inst.parts()[0].iter().enumerate() {
        let ind = index_to_bits(j as u64, h as u32);
        let e = if h == 0 {
            BitVec::zeros(0)
        } else {
            encode_balanced(&ind, h)?
        };
        ones.push(e.concat(a));
    }
    let zeros = inst.parts()[1]
        .iter()
        .map(|b| BitVec::zeros(l).concat(b).complement())
        .collect();
    SeparationInstance::new(l + m, ones, zeros)
}

/// Checks a monotone circuit against a formula's separation instance (the
/// primed variant when `primed` is set): accepted iff it outputs 1 on every
/// ones-side vector and 0 on every zeros-side vector.  Acceptance certifies
/// unsatisfiability.
pub fn verify_unsat_certificate(
    f: &Formula,
    c: &MonotoneCircuit,
    primed: bool,
) -> Result<bool> {
    let inst = if primed {
        build_primed_instance(f)?
    } else {
        build_separation_instance(f)?
    };
    if c.arity() as usize > inst.dim {
        return Err(Error::Invalid(format!(
            "circuit arity {} exceeds instance dimension {}",
            c.arity(),
            inst.dim
        )));
    }
    for a in &inst.ones {
        if !c.eval(a)? {
            return Ok(false);
        }
    }
    for z in &inst.zeros {
        if c.eval(z)? {
            return Ok(false);
        }
    }
    Ok(true)
}
