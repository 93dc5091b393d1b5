//! Shared corpus builders for the integration tests.
//!
//! The exhaustive family is deliberately small-but-complete: every clause of
//! width at most three over `n` variables, and every formula with at most two
//! such clauses (unordered, repetition allowed).  That family exercises every
//! label/count combination the reductions can produce at desk scale while
//! staying cheap enough to sweep inside the acceptance budget.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use redcert::bits::BitVec;
use redcert::cnf::{Formula, Lit};
use redcert::ov::OvInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every clause over variables 1..=n using between 1 and `width` distinct
/// variables, with every sign pattern.
pub fn all_clauses(n: u32, width: usize) -> Vec<Vec<Lit>> {
    let mut out = Vec::new();
    let vars: Vec<u32> = (1..=n).collect();
    for size in 1..=width.min(n as usize) {
        for combo in combinations(&vars, size) {
            for signs in 0..(1u32 << size) {
                let clause: Vec<Lit> = combo
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        if signs >> i & 1 == 1 {
                            Lit::neg(v)
                        } else {
                            Lit::pos(v)
                        }
                    })
                    .collect();
                out.push(clause);
            }
        }
    }
    out
}

fn combinations(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        for mut tail in combinations(&items[i + 1..], size - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// The empty formula, every single clause, and every unordered pair of
/// clauses (repetition allowed) over `n` variables.
pub fn exhaustive_formulas(n: u32, width: usize) -> Vec<Formula> {
    let clauses = all_clauses(n, width);
    let mut out = Vec::with_capacity(1 + clauses.len() + clauses.len() * (clauses.len() + 1) / 2);
    out.push(Formula::new(n, Vec::new()).unwrap());
    for c in &clauses {
        out.push(Formula::new(n, vec![c.clone()]).unwrap());
    }
    for i in 0..clauses.len() {
        for j in i..clauses.len() {
            out.push(Formula::new(n, vec![clauses[i].clone(), clauses[j].clone()]).unwrap());
        }
    }
    out
}

/// A random formula with exactly `m` clauses of width 1..=`width`.
pub fn random_formula(rng: &mut ChaCha8Rng, n: u32, width: usize, m: usize) -> Formula {
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        clauses.push(random_clause(rng, n, width));
    }
    Formula::new(n, clauses).unwrap()
}

pub fn random_clause(rng: &mut ChaCha8Rng, n: u32, width: usize) -> Vec<Lit> {
    let size = rng.random_range(1..=width.min(n as usize));
    let mut vars: Vec<u32> = (1..=n).collect();
    let mut clause = Vec::with_capacity(size);
    for _ in 0..size {
        let pick = rng.random_range(0..vars.len());
        let v = vars.swap_remove(pick);
        if rng.random_bool(0.5) {
            clause.push(Lit::pos(v));
        } else {
            clause.push(Lit::neg(v));
        }
    }
    clause
}

/// A random orthogonal-vectors instance with `t` parts of the given size.
#[allow(dead_code)]
pub fn random_ov(rng: &mut ChaCha8Rng, t: usize, dim: usize, size: usize, density: f64) -> OvInstance {
    let parts: Vec<Vec<BitVec>> = (0..t)
        .map(|_| {
            (0..size)
                .map(|_| {
                    let mut v = BitVec::zeros(dim);
                    for b in 0..dim {
                        if rng.random_bool(density) {
                            v.set(b, true);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    OvInstance::new(dim, parts).unwrap()
}
