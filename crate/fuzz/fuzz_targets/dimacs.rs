#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::cnf::{parse_dimacs, write_dimacs};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_dimacs(text) {
        let reparsed = parse_dimacs(&write_dimacs(&f)).expect("writer output must parse");
        assert_eq!(reparsed, f);
    }
});
