#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::ov::{brute_ov_bounded, OvInstance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = OvInstance::parse_text(text) {
        let reparsed = OvInstance::parse_text(&inst.to_text()).expect("writer output must parse");
        assert_eq!(reparsed, inst);
        let _ = brute_ov_bounded(&inst, 10_000);
    }
});
