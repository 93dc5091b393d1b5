#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::matrix::MatrixFactors;
use redcert::tensor::TensorFactors;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = MatrixFactors::parse_text(text) {
        let reparsed = MatrixFactors::parse_text(&f.to_text()).expect("writer output must parse");
        assert_eq!(reparsed.pairs, f.pairs);
    }
    if let Ok(f) = TensorFactors::parse_text(text) {
        let reparsed = TensorFactors::parse_text(&f.to_text()).expect("writer output must parse");
        assert_eq!(reparsed.triples, f.triples);
    }
});
