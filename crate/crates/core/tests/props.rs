//! Property tests: wire-format roundtrips, encoding inverses, and algebraic
//! invariants that must hold for arbitrary well-formed inputs.

use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use redcert::bits::BitVec;
use redcert::cert::{prove_split, prove_tensor_entries, RigidityCertificate, TensorRankCertificate};
use redcert::cnf::{brute_sat, parse_dimacs, write_dimacs, Formula, Lit};
use redcert::field::{Gf, DEFAULT_PRIME};
use redcert::gen::{bits_to_hex, hex_to_bits, GeneratorSeed, Selector};
use redcert::matrix::{mat_mul_blocked, mat_rank, FieldMatrix, MulKernel};
use redcert::monotone::{
    decode_balanced, decode_word, encode_balanced, encode_formula, FormulaClass,
};
use redcert::ov::OvInstance;
use redcert::regime::{check_regime, RegimeParams, RegimeVariant};
use redcert::tensor::Tensor3;
use redcert::threshold::{ThrCircuit, ThrGate, ThrRef};

fn arb_formula(max_n: u32, max_m: usize) -> impl Strategy<Value = Formula> {
    (1..=max_n).prop_flat_map(move |n| {
        let clause = prop::sample::subsequence((1..=n).collect::<Vec<u32>>(), 1..=3.min(n as usize))
            .prop_flat_map(|vars| {
                let len = vars.len();
                (Just(vars), prop::collection::vec(any::<bool>(), len))
            })
            .prop_map(|(vars, signs)| {
                vars.into_iter()
                    .zip(signs)
                    .map(|(v, neg)| if neg { Lit::neg(v) } else { Lit::pos(v) })
                    .collect::<Vec<Lit>>()
            });
        prop::collection::vec(clause, 0..=max_m)
            .prop_map(move |clauses| Formula::new(n, clauses).unwrap())
    })
}

fn arb_field() -> impl Strategy<Value = Gf> {
    prop::sample::select(vec![2u64, 3, 5, 13, DEFAULT_PRIME]).prop_map(|p| Gf::new(p).unwrap())
}

fn arb_matrix(max_dim: usize) -> impl Strategy<Value = FieldMatrix> {
    (1..=max_dim, 1..=max_dim, arb_field()).prop_flat_map(|(r, c, gf)| {
        prop::collection::vec(any::<u64>(), r * c).prop_map(move |ents| {
            let reduced: Vec<u64> = ents.into_iter().map(|e| e % gf.p()).collect();
            FieldMatrix::new(r, c, gf, reduced).unwrap()
        })
    })
}

fn arb_tensor(max_dim: usize) -> impl Strategy<Value = Tensor3> {
    (1..=max_dim, 1..=max_dim, 1..=max_dim, arb_field()).prop_flat_map(|(d1, d2, d3, gf)| {
        prop::collection::vec(any::<u64>(), d1 * d2 * d3).prop_map(move |ents| {
            let reduced: Vec<u64> = ents.into_iter().map(|e| e % gf.p()).collect();
            Tensor3::new(d1, d2, d3, gf, reduced).unwrap()
        })
    })
}

fn arb_ov() -> impl Strategy<Value = OvInstance> {
    (2usize..=4, 1usize..=6).prop_flat_map(|(t, dim)| {
        prop::collection::vec(
            prop::collection::vec(prop::collection::vec(any::<bool>(), dim), 1..=3),
            t..=t,
        )
        .prop_map(move |parts| {
            let parts = parts
                .into_iter()
                .map(|part| part.into_iter().map(|v| BitVec::from_bools(&v)).collect())
                .collect();
            OvInstance::new(dim, parts).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn dimacs_text_roundtrips(f in arb_formula(6, 4)) {
        let text = write_dimacs(&f);
        let parsed = parse_dimacs(&text).unwrap();
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn ov_text_roundtrips(inst in arb_ov()) {
        let parsed = OvInstance::parse_text(&inst.to_text()).unwrap();
        prop_assert_eq!(parsed, inst);
    }

    #[test]
    fn matrix_text_roundtrips(m in arb_matrix(8)) {
        let parsed = FieldMatrix::parse_text(&m.to_text()).unwrap();
        prop_assert_eq!(parsed.entries(), m.entries());
        prop_assert_eq!((parsed.rows(), parsed.cols()), (m.rows(), m.cols()));
        prop_assert_eq!(parsed.gf().p(), m.gf().p());
    }

    #[test]
    fn tensor_text_roundtrips(t in arb_tensor(5)) {
        let parsed = Tensor3::parse_text(&t.to_text()).unwrap();
        prop_assert_eq!(parsed.entries(), t.entries());
        prop_assert_eq!(parsed.dims(), t.dims());
    }

    #[test]
    fn split_certificates_roundtrip_and_validate(
        m in arb_matrix(6),
        rank in 0usize..=6,
        seed in any::<u64>(),
    ) {
        let r = rank.min(m.rows().min(m.cols()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cert = prove_split(&m, r, &mut rng).unwrap();
        let parsed = RigidityCertificate::parse_text(&cert.to_text()).unwrap();
        prop_assert_eq!(parsed.to_text(), cert.to_text());
        prop_assert!(cert.r() <= r);
    }

    #[test]
    fn tensor_certificates_roundtrip(
        t in (1usize..=4, arb_field()).prop_flat_map(|(k, gf)| {
            prop::collection::vec(any::<u64>(), k * k * k).prop_map(move |ents| {
                let reduced: Vec<u64> = ents.into_iter().map(|e| e % gf.p()).collect();
                Tensor3::new(k, k, k, gf, reduced).unwrap()
            })
        }),
    ) {
        let cert = prove_tensor_entries(&t).unwrap();
        let parsed = TensorRankCertificate::parse_text(&cert.to_text()).unwrap();
        prop_assert_eq!(parsed.to_text(), cert.to_text());
        prop_assert_eq!(cert.q(), t.count_nonzero());
    }

    #[test]
    fn balanced_encoding_is_injective_with_fixed_shape(
        payload in prop::collection::vec(any::<bool>(), 0..=12),
        extra in 0usize..=4,
    ) {
        let cap = payload.len() + extra;
        prop_assume!(cap >= 1);
        let word = encode_balanced(&payload, cap).unwrap();
        prop_assert_eq!(word.len(), 4 * cap);
        prop_assert_eq!(word.count_ones(), 2 * cap);
        prop_assert_eq!(decode_balanced(&word), Some(payload));
    }

    #[test]
    fn class_words_decode_back_to_their_formula(f in arb_formula(3, 3)) {
        let class = FormulaClass::new(f.n(), 3, 1.0).unwrap();
        prop_assume!(f.m() <= class.max_clauses());
        let word = encode_formula(&f, &class).unwrap();
        prop_assert_eq!(decode_word(&word, &class), Some(f));
    }

    #[test]
    fn rank_is_subadditive_and_bounded(
        pair in (1usize..=7, 1usize..=7, arb_field()).prop_flat_map(|(r, c, gf)| {
            let ents = prop::collection::vec(any::<u64>(), r * c);
            (ents.clone(), ents).prop_map(move |(ea, eb)| {
                let fix = |v: Vec<u64>| v.into_iter().map(|e| e % gf.p()).collect::<Vec<_>>();
                (
                    FieldMatrix::new(r, c, gf, fix(ea)).unwrap(),
                    FieldMatrix::new(r, c, gf, fix(eb)).unwrap(),
                )
            })
        }),
    ) {
        let (a, b) = pair;
        let ra = mat_rank(&a);
        let rb = mat_rank(&b);
        prop_assert!(ra <= a.rows().min(a.cols()));
        prop_assert!(mat_rank(&a.add(&b).unwrap()) <= ra + rb);
    }

    #[test]
    fn blocked_multiply_matches_naive(
        dims in (1usize..=10, 1usize..=10, 1usize..=10),
        block in 1usize..=6,
        strassen in any::<bool>(),
        seed in any::<u64>(),
        gf in arb_field(),
    ) {
        let (r, inner, c) = dims;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FieldMatrix::random(r, inner, gf, &mut rng);
        let b = FieldMatrix::random(inner, c, gf, &mut rng);
        let kernel = if strassen { MulKernel::Strassen } else { MulKernel::Naive };
        let got = mat_mul_blocked(&a, &b, block, kernel).unwrap();
        let want = a.mul_naive(&b).unwrap();
        prop_assert_eq!(got.entries(), want.entries());
    }

    #[test]
    fn hex_packing_roundtrips(bits in prop::collection::vec(any::<bool>(), 0..=70)) {
        let v = BitVec::from_bools(&bits);
        let hex = bits_to_hex(&v);
        prop_assert_eq!(hex_to_bits(&hex, v.len()), Some(v));
    }

    #[test]
    fn seed_lines_roundtrip(
        word in prop::collection::vec(any::<bool>(), 1..=40),
        t in 1u64..=8,
        tvec in [0u64..=4, 0u64..=4, 0u64..=4, 0u64..=4],
        j0 in 0usize..=8,
        j1 in 0usize..=8,
        sel in prop::sample::select(vec!["m", "l", "tm", "tl", "tt", "a0", "mm"]),
    ) {
        let seed = GeneratorSeed {
            word_hex: bits_to_hex(&BitVec::from_bools(&word)),
            t,
            tvec,
            j0,
            j1,
            selector: Selector::parse(sel).unwrap(),
        };
        let parsed = GeneratorSeed::parse_text(&seed.to_text()).unwrap();
        prop_assert_eq!(parsed, seed);
    }

    #[test]
    fn threshold_circuits_roundtrip(
        t in 1u32..=4,
        gate_plan in prop::collection::vec((1u64..=5, prop::collection::vec((any::<bool>(), 1u32..=5), 1..=5)), 1..=4),
    ) {
        let mut gates = Vec::new();
        for (i, (threshold, refs)) in gate_plan.iter().enumerate() {
            let inputs: Vec<ThrRef> = refs
                .iter()
                .map(|&(is_gate, idx)| {
                    if is_gate && i > 0 {
                        ThrRef::Gate((idx as u32 - 1) % i as u32 + 1)
                    } else {
                        ThrRef::Var(idx)
                    }
                })
                .collect();
            let cap = inputs.len() as u64;
            gates.push(ThrGate { threshold: (*threshold).min(cap), inputs });
        }
        let c = ThrCircuit::new(t, gates).unwrap();
        let parsed = ThrCircuit::parse_text(&c.to_text()).unwrap();
        prop_assert_eq!(parsed, c);
    }

    #[test]
    fn padding_preserves_satisfiability(f in arb_formula(5, 3), d in 1u32..=4) {
        let padded = f.pad_to_multiple(d).unwrap();
        prop_assert_eq!(padded.n() % d, 0);
        prop_assert!(padded.n() >= f.n());
        prop_assert_eq!(
            brute_sat(&padded).unwrap().is_some(),
            brute_sat(&f).unwrap().is_some()
        );
    }

    #[test]
    fn relaxing_tradeoff_parameters_never_breaks_a_pass(
        alpha in 0.5f64..=1.0,
        beta in 1.0f64..=1.5,
        omega in 2.0f64..=2.5,
        fa in 0.0f64..=1.0,
        fb in 0.0f64..=1.0,
    ) {
        let params = RegimeParams { alpha, beta, omega, ..RegimeParams::default() };
        let report = check_regime(&params, RegimeVariant::Tradeoff).unwrap();
        if report.pass {
            let relaxed = RegimeParams {
                alpha: 0.5 + (alpha - 0.5) * fa,
                beta: 1.0 + (beta - 1.0) * fb,
                omega,
                ..RegimeParams::default()
            };
            let relaxed_report = check_regime(&relaxed, RegimeVariant::Tradeoff).unwrap();
            prop_assert!(relaxed_report.pass, "relaxation flipped a pass to fail");
        }
    }
}
