//! Seeded generator for matrices and tensors drawn from clique instances.
//!
//! A seed is one text line carrying a hex-packed encoded formula, a
//! satisfaction target with its per-label split, two part indices, and a
//! selector naming which slice (or tensor) of the induced clique instance
//! to emit.  The generator is a total function: any invalid seed — bad
//! hex, a word that does not decode to a class member, a target/split
//! mismatch, out-of-range indices, or a selector whose side condition
//! fails — yields the designated empty output rather than an error.

use crate::bits::BitVec;
use crate::cert::{
    rigidity_slice_l, rigidity_slice_m, tensor_slice_l, tensor_slice_m, tensor_slice_t,
};
use crate::clique::build_clique_instance;
use crate::error::{parse_err, Result};
use crate::field::Gf;
use crate::matrix::FieldMatrix;
use crate::monotone::{decode_word, encode_formula, FormulaClass};
use crate::tensor::{matmul_tensor, Tensor3};

/// Which object a seed asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    /// Pair-indexed left slice M[i,l] = A_0[j1,i,l].
    PairM,
    /// Pair-indexed right slice L[i,l] = A_1[i,l,j0].
    PairL,
    /// Index-indexed slice M[j2,j3] = A_1[j2,j3,j0].
    IndexM,
    /// Index-indexed slice L[j3,j1] = A_2[j3,j0,j1].
    IndexL,
    /// Index-indexed slice T[j1,j2] = A_3[j0,j1,j2].
    IndexT,
    /// The instance tensor A_0 itself.
    InstanceTensor,
    /// The k^(1/2) matrix-multiplication tensor; needs k a perfect square.
    Matmul,
}

impl Selector {
    pub fn name(self) -> &'static str {
        match self {
            Selector::PairM => "m",
            Selector::PairL => "l",
            Selector::IndexM => "tm",
            Selector::IndexL => "tl",
            Selector::IndexT => "tt",
            Selector::InstanceTensor => "a0",
            Selector::Matmul => "mm",
        }
    }

    pub fn parse(s: &str) -> Option<Selector> {
        Some(match s {
            "m" => Selector::PairM,
            "l" => Selector::PairL,
            "tm" => Selector::IndexM,
            "tl" => Selector::IndexL,
            "tt" => Selector::IndexT,
            "a0" => Selector::InstanceTensor,
            "mm" => Selector::Matmul,
            _ => return None,
        })
    }
}

/// Parsed seed line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSeed {
    /// Hex-packed balanced code word for the formula (MSB-first nibbles).
    pub word_hex: String,
    /// Total satisfaction target; must equal the tvec sum.
    pub t: u64,
    /// Per-label satisfaction targets.
    pub tvec: [u64; 4],
    pub j0: usize,
    pub j1: usize,
    pub selector: Selector,
}

impl GeneratorSeed {
    /// `seed <formula-hex> <t> <t0> <t1> <t2> <t3> <j0> <j1> <selector>`.
    pub fn to_text(&self) -> String {
        format!(
            "seed {} {} {} {} {} {} {} {} {}\n",
            self.word_hex,
            self.t,
            self.tvec[0],
            self.tvec[1],
            self.tvec[2],
            self.tvec[3],
            self.j0,
            self.j1,
            self.selector.name()
        )
    }

    pub fn parse_text(line: &str) -> Result<GeneratorSeed> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 10 || toks[0] != "seed" {
            return Err(parse_err(
                1,
                "expected `seed <formula-hex> <t> <t0> <t1> <t2> <t3> <j0> <j1> <selector>`",
            ));
        }
        let num = |i: usize, what: &str| -> Result<u64> {
            toks[i]
                .parse()
                .map_err(|_| parse_err(1, format!("bad {what} `{}`", toks[i])))
        };
        let word_hex = toks[1].to_string();
        if word_hex.is_empty() || !word_hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(parse_err(1, "formula-hex must be nonempty hex digits"));
        }
        let t = num(2, "target")?;
        let tvec = [
            num(3, "tvec entry")?,
            num(4, "tvec entry")?,
            num(5, "tvec entry")?,
            num(6, "tvec entry")?,
        ];
        let j0 = num(7, "index j0")? as usize;
        let j1 = num(8, "index j1")? as usize;
        let selector = Selector::parse(toks[9])
            .ok_or_else(|| parse_err(1, format!("unknown selector `{}`", toks[9])))?;
        Ok(GeneratorSeed {
            word_hex,
            t,
            tvec,
            j0,
            j1,
            selector,
        })
    }

    /// Builds a seed for a concrete class member.
    pub fn for_formula(
        f: &crate::cnf::Formula,
        class: &FormulaClass,
        tvec: [u64; 4],
        j0: usize,
        j1: usize,
        selector: Selector,
    ) -> Result<GeneratorSeed> {
        let word = encode_formula(f, class)?;
        Ok(GeneratorSeed {
            word_hex: bits_to_hex(&word),
            t: tvec.iter().sum(),
            tvec,
            j0,
            j1,
            selector,
        })
    }
}

/// Packs bits into hex, MSB-first within each nibble, zero-padded at the
/// end to a nibble boundary.
pub fn bits_to_hex(bits: &BitVec) -> String {
    let mut out = String::with_capacity(bits.len().div_ceil(4));
    for chunk_start in (0..bits.len()).step_by(4) {
        let mut nib = 0u8;
        for offset in 0..4 {
            nib <<= 1;
            if chunk_start + offset < bits.len() && bits.get(chunk_start + offset) {
                nib |= 1;
            }
        }
        out.push(char::from_digit(nib as u32, 16).expect("nibble < 16"));
    }
    out
}

/// Inverse of [`bits_to_hex`] for a known bit length; `None` when the hex
/// string has the wrong length or a nonzero padding bit.
pub fn hex_to_bits(hex: &str, len: usize) -> Option<BitVec> {
    if hex.len() != len.div_ceil(4).max(1) && !(len == 0 && hex.is_empty()) {
        return None;
    }
    let mut bits = BitVec::zeros(len);
    for (ni, ch) in hex.chars().enumerate() {
        let nib = ch.to_digit(16)? as u8;
        for offset in 0..4 {
            let bit = nib & (1 << (3 - offset)) != 0;
            let pos = ni * 4 + offset;
            if pos < len {
                bits.set(pos, bit);
            } else if bit {
                return None; // padding must be zero
            }
        }
    }
    Some(bits)
}

/// Generator output: a matrix, a tensor, or the designated empty family.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Matrix(FieldMatrix),
    Tensor(Tensor3),
    Empty,
}

impl Generated {
    pub fn is_empty(&self) -> bool {
        matches!(self, Generated::Empty)
    }

    /// Matrix and tensor outputs render in their own wire formats; the
    /// empty family renders as the single line `empty`.
    pub fn to_text(&self) -> String {
        match self {
            Generated::Matrix(m) => m.to_text(),
            Generated::Tensor(t) => t.to_text(),
            Generated::Empty => "empty\n".to_string(),
        }
    }
}

/// Evaluates a seed against a formula class.  Total: every invalid seed
/// maps to [`Generated::Empty`].
pub fn generate(seed: &GeneratorSeed, class: &FormulaClass, gf: Gf) -> Generated {
    let Some(word) = hex_to_bits(&seed.word_hex, class.word_len()) else {
        return Generated::Empty;
    };
    let Some(f) = decode_word(&word, class) else {
        return Generated::Empty;
    };
    if seed.tvec.iter().sum::<u64>() != seed.t {
        return Generated::Empty;
    }
    let Ok(padded) = f.pad_to_multiple(4) else {
        return Generated::Empty;
    };
    let Ok(inst) = build_clique_instance(&padded, seed.tvec, gf) else {
        return Generated::Empty;
    };
    let k = inst.k();
    if seed.j0 >= k || seed.j1 >= k {
        return Generated::Empty;
    }
    match seed.selector {
        Selector::PairM => Generated::Matrix(rigidity_slice_m(&inst, seed.j1)),
        Selector::PairL => Generated::Matrix(rigidity_slice_l(&inst, seed.j0)),
        Selector::IndexM => Generated::Matrix(tensor_slice_m(&inst, seed.j0)),
        Selector::IndexL => Generated::Matrix(tensor_slice_l(&inst, seed.j0)),
        Selector::IndexT => Generated::Matrix(tensor_slice_t(&inst, seed.j0)),
        Selector::InstanceTensor => Generated::Tensor(inst.tensor(0).clone()),
        Selector::Matmul => {
            let root = (k as f64).sqrt().round() as usize;
            if root * root != k {
                return Generated::Empty;
            }
            match matmul_tensor(root, gf) {
                Ok(t) => Generated::Tensor(t),
                Err(_) => Generated::Empty,
            }
        }
    }
}

/// Parses and evaluates a seed line; parse failures are invalid seeds.
pub fn generate_line(line: &str, class: &FormulaClass, gf: Gf) -> Generated {
    match GeneratorSeed::parse_text(line) {
        Ok(seed) => generate(&seed, class, gf),
        Err(_) => Generated::Empty,
    }
}
