#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::bits::BitVec;
use redcert::monotone::{decode_balanced, decode_word, encode_balanced, FormulaClass};

fuzz_target!(|data: &[u8]| {
    // Unpack the bytes into a bit string (at most 512 bits).
    let bits: Vec<bool> = data
        .iter()
        .flat_map(|b| (0..8).map(move |i| b >> i & 1 == 1))
        .take(512)
        .collect();
    let word = BitVec::from_bools(&bits);
    if let Some(payload) = decode_balanced(&word) {
        // Decoding succeeds only on the exact image of the encoder.
        let again = encode_balanced(&payload, word.len() / 4).unwrap();
        assert_eq!(again, word, "decoder accepted a non-canonical word");
    }
    let class = FormulaClass::new(2, 2, 1.0).unwrap();
    if word.len() >= class.word_len() {
        let prefix: Vec<bool> = (0..class.word_len()).map(|i| word.get(i)).collect();
        let _ = decode_word(&BitVec::from_bools(&prefix), &class);
    }
});
