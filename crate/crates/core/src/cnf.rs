//! CNF formulas: representation, strict DIMACS parsing, clause evaluation
//! under partial assignments, and the brute-force satisfiability oracles the
//! rest of the crate is validated against.

use crate::bits::BitVec;
use crate::error::{parse_err, Error, Result};

/// Exhaustive searches refuse formulas with more variables than this unless
/// the caller raises the bound explicitly.
pub const DEFAULT_EXHAUSTIVE_BOUND: u32 = 24;

/// A literal: 1-based variable index plus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: u32,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Lit {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Lit {
        Lit { var, negated: true }
    }

    /// True iff the literal is satisfied when its variable takes `value`.
    #[inline]
    pub fn satisfied_by(&self, value: bool) -> bool {
        value != self.negated
    }

    /// DIMACS form: `v` or `-v`.
    pub fn to_dimacs(&self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }
}

pub type Clause = Vec<Lit>;

/// A CNF formula over variables `1..=n`.  Clause order is significant: it
/// fixes coordinate order everywhere a clause index becomes a vector
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    /// Validates: no empty clause, variables in `1..=n`, no duplicate
    /// variable inside a clause (this also excludes tautologies).
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Formula> {
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Invalid(format!("clause {} is empty", ci + 1)));
            }
            for lit in clause {
                if lit.var == 0 || lit.var > n {
                    return Err(Error::Invalid(format!(
                        "clause {}: variable {} out of range 1..={}",
                        ci + 1,
                        lit.var,
                        n
                    )));
                }
            }
            for (i, a) in clause.iter().enumerate() {
                for b in &clause[i + 1..] {
                    if a.var == b.var {
                        return Err(Error::Invalid(format!(
                            "clause {}: variable {} repeats (duplicate literal or tautology)",
                            ci + 1,
                            a.var
                        )));
                    }
                }
            }
        }
        Ok(Formula { n, clauses })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Widest clause, 0 for the empty formula.
    pub fn width(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Same clauses over a larger variable range.  The added variables appear
    /// in no clause.  `d` must be positive; the result has the smallest
    /// `n' >= n` divisible by `d`.
    pub fn pad_to_multiple(&self, d: u32) -> Result<Formula> {
        if d == 0 {
            return Err(Error::Invalid("padding divisor must be positive".into()));
        }
        let n2 = self.n.div_ceil(d) * d;
        Ok(Formula {
            n: n2,
            clauses: self.clauses.clone(),
        })
    }
}

/// A duplicate-free partial assignment; empty scope is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    vars: Vec<u32>,
    vals: Vec<bool>,
}

impl Assignment {
    pub fn empty() -> Assignment {
        Assignment {
            vars: vec![],
            vals: vec![],
        }
    }

    pub fn partial(pairs: &[(u32, bool)]) -> Result<Assignment> {
        let mut a = Assignment::empty();
        for &(v, b) in pairs {
            if v == 0 {
                return Err(Error::Invalid("variable 0 in assignment".into()));
            }
            if a.vars.contains(&v) {
                return Err(Error::Invalid(format!("variable {v} assigned twice")));
            }
            a.vars.push(v);
            a.vals.push(b);
        }
        Ok(a)
    }

    /// Total assignment to variables `1..=bits.len()` in order.
    pub fn total(bits: &[bool]) -> Assignment {
        Assignment {
            vars: (1..=bits.len() as u32).collect(),
            vals: bits.to_vec(),
        }
    }

    /// Assigns consecutive variables `first..first+bits.len()`.
    pub fn range(first: u32, bits: &[bool]) -> Assignment {
        Assignment {
            vars: (first..first + bits.len() as u32).collect(),
            vals: bits.to_vec(),
        }
    }

    pub fn value_of(&self, var: u32) -> Option<bool> {
        self.vars.iter().position(|&v| v == var).map(|i| self.vals[i])
    }

    pub fn scope_len(&self) -> usize {
        self.vars.len()
    }
}

/// Which reading a clause-indexed bit vector uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// bit j = 1 iff clause j is satisfied
    Satisfied,
    /// bit j = 1 iff clause j is NOT satisfied
    Unsatisfied,
}

/// One bit per clause, in clause order, under a declared convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfactionVector {
    pub bits: BitVec,
    pub convention: Convention,
}

impl SatisfactionVector {
    pub fn flip_convention(&self) -> SatisfactionVector {
        SatisfactionVector {
            bits: self.bits.complement(),
            convention: match self.convention {
                Convention::Satisfied => Convention::Unsatisfied,
                Convention::Unsatisfied => Convention::Satisfied,
            },
        }
    }
}

/// Evaluates every clause under a (possibly partial) assignment.  A clause
/// counts as satisfied only if some literal whose variable is assigned is
/// made true; unassigned literals contribute nothing.
pub fn eval_clauses(f: &Formula, a: &Assignment) -> SatisfactionVector {
    let mut bits = BitVec::zeros(f.m());
    for (j, clause) in f.clauses().iter().enumerate() {
        let sat = clause
            .iter()
            .any(|lit| a.value_of(lit.var).map(|v| lit.satisfied_by(v)).unwrap_or(false));
        if sat {
            bits.set(j, true);
        }
    }
    SatisfactionVector {
        bits,
        convention: Convention::Satisfied,
    }
}

/// Number of clauses a total assignment satisfies.
pub fn count_satisfied(f: &Formula, bits: &[bool]) -> usize {
    assert_eq!(bits.len(), f.n() as usize, "assignment length != n");
    f.clauses()
        .iter()
        .filter(|clause| {
            clause
                .iter()
                .any(|lit| lit.satisfied_by(bits[(lit.var - 1) as usize]))
        })
        .count()
}

/// The assignment whose bits are the big-endian binary digits of `index`:
/// variable 1 is the most significant bit, so increasing `index` enumerates
/// assignments in lexicographic order.
pub fn index_to_bits(index: u64, len: u32) -> Vec<bool> {
    (0..len)
        .map(|i| index >> (len - 1 - i) & 1 == 1)
        .collect()
}

/// Lexicographically first satisfying assignment, or `None`.  Refuses
/// formulas with more than `bound` variables.
pub fn brute_sat_bounded(f: &Formula, bound: u32) -> Result<Option<Vec<bool>>> {
    if f.n() > bound {
        return Err(Error::SizeBound {
            what: "brute_sat variables",
            limit: bound as u64,
            got: f.n() as u64,
        });
    }
    let n = f.n();
    for idx in 0u64..1 << n {
        let bits = index_to_bits(idx, n);
        if count_satisfied(f, &bits) == f.m() {
            return Ok(Some(bits));
        }
    }
    Ok(None)
}

/// [`brute_sat_bounded`] at the default bound.
pub fn brute_sat(f: &Formula) -> Result<Option<Vec<bool>>> {
    brute_sat_bounded(f, DEFAULT_EXHAUSTIVE_BOUND)
}

/// True iff some total assignment satisfies exactly `t` clauses.  Only
/// defined for width <= 3 formulas; `t > m` is an ordinary `false`.
pub fn brute_max3sat_exact(f: &Formula, t: usize, bound: u32) -> Result<bool> {
    if f.width() > 3 {
        return Err(Error::Invalid(format!(
            "clause width {} exceeds 3",
            f.width()
        )));
    }
    if f.n() > bound {
        return Err(Error::SizeBound {
            what: "exact-count search variables",
            limit: bound as u64,
            got: f.n() as u64,
        });
    }
    if t > f.m() {
        return Ok(false);
    }
    let n = f.n();
    for idx in 0u64..1 << n {
        if count_satisfied(f, &index_to_bits(idx, n)) == t {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of a sparsification pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifyOutcome {
    /// F is satisfiable iff at least one output formula is.
    pub formulas: Vec<Formula>,
    /// For strategies that track a density target: whether every output meets
    /// `m <= beta * n`.
    pub sparse: Option<bool>,
}

/// A pluggable sparsification strategy.  Implementations must preserve
/// width, never grow the variable count, and keep the disjunction of the
/// outputs equisatisfiable with the input.
pub trait Sparsifier {
    fn sparsify(&self, f: &Formula, eps: f64) -> Result<SparsifyOutcome>;
}

/// Default strategy: returns the formula unchanged and reports whether it
/// already meets the caller-supplied density `m <= beta * n`.
pub struct PassThrough {
    pub beta: f64,
}

impl Sparsifier for PassThrough {
    fn sparsify(&self, f: &Formula, _eps: f64) -> Result<SparsifyOutcome> {
        let sparse = (f.m() as f64) <= self.beta * f.n() as f64;
        Ok(SparsifyOutcome {
            formulas: vec![f.clone()],
            sparse: Some(sparse),
        })
    }
}

/// Test strategy: branch on one variable and simplify both restrictions.
/// Every output keeps the input's variable range.  A branch whose
/// simplification empties a clause is replaced by a canonical contradiction
/// so the invariants (no empty clause) hold while the branch stays
/// unsatisfiable.
pub struct SplitOnVariable {
    pub var: u32,
}

impl Sparsifier for SplitOnVariable {
    fn sparsify(&self, f: &Formula, _eps: f64) -> Result<SparsifyOutcome> {
        if self.var == 0 || self.var > f.n() {
            return Err(Error::Invalid(format!(
                "split variable {} out of range 1..={}",
                self.var,
                f.n()
            )));
        }
        let mut out = Vec::with_capacity(2);
        for value in [false, true] {
            let mut clauses = Vec::new();
            let mut contradiction = false;
            for clause in f.clauses() {
                let mut kept = Vec::new();
                let mut satisfied = false;
                for lit in clause {
                    if lit.var == self.var {
                        if lit.satisfied_by(value) {
                            satisfied = true;
                            break;
                        }
                        // literal falsified: drop it
                    } else {
                        kept.push(*lit);
                    }
                }
                if satisfied {
                    continue;
                }
                if kept.is_empty() {
                    contradiction = true;
                    break;
                }
                clauses.push(kept);
            }
            let branch = if contradiction {
                Formula::new(f.n(), vec![vec![Lit::pos(self.var)], vec![Lit::neg(self.var)]])?
            } else {
                // pin the branch variable so the two branches stay disjoint
                let mut cs = clauses;
                cs.push(vec![Lit {
                    var: self.var,
                    negated: !value,
                }]);
                Formula::new(f.n(), cs)?
            };
            out.push(branch);
        }
        Ok(SparsifyOutcome {
            formulas: out,
            sparse: None,
        })
    }
}

/// Strict DIMACS CNF parser.  Comments (`c ...`) may appear anywhere;
/// exactly one `p cnf <n> <m>` header precedes the clauses; every clause is
/// a 0-terminated run of literals; the clause count must equal `m`.
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut current_line = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(lineno, "duplicate header"));
            }
            let mut it = line.split_whitespace();
            let (p, kind) = (it.next(), it.next());
            if p != Some("p") || kind != Some("cnf") {
                return Err(parse_err(lineno, "expected `p cnf <n> <m>`"));
            }
            let n: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(lineno, "bad variable count"))?;
            let m: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(lineno, "bad clause count"))?;
            if it.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens after header"));
            }
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(lineno, "clause before `p cnf` header"))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad literal `{tok}`")))?;
            if v == 0 {
                if current.is_empty() {
                    return Err(parse_err(lineno, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = v.unsigned_abs();
                if var > n as u64 {
                    return Err(parse_err(
                        lineno,
                        format!("variable {var} out of range 1..={n}"),
                    ));
                }
                current.push(Lit {
                    var: var as u32,
                    negated: v < 0,
                });
                current_line = lineno;
            }
        }
    }

    let (n, m) = header.ok_or_else(|| parse_err(1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(parse_err(current_line, "unterminated clause (missing 0)"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            1,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Formula::new(n, clauses).map_err(|e| match e {
        Error::Invalid(msg) => parse_err(1, msg),
        other => other,
    })
}

/// Serializes back to DIMACS, one clause per line.
pub fn write_dimacs(f: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", f.n(), f.m());
    for clause in f.clauses() {
        for lit in clause {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
