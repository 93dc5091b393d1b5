#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::field::Gf;
use redcert::gen::{generate_line, GeneratorSeed};
use redcert::monotone::FormulaClass;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some(line) = text.lines().next() else {
        return;
    };
    if let Ok(seed) = GeneratorSeed::parse_text(line) {
        let reparsed = GeneratorSeed::parse_text(&seed.to_text()).expect("writer output must parse");
        assert_eq!(reparsed, seed);
    }
    // Evaluation is total: any line maps to a family member or to `empty`.
    let class = FormulaClass::new(4, 3, 1.0).unwrap();
    let generated = generate_line(line, &class, Gf::new(13).unwrap());
    let _ = generated.to_text();
});
