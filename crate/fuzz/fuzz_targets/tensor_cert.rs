#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::cert::TensorRankCertificate;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = TensorRankCertificate::parse_text(text) {
        let reparsed =
            TensorRankCertificate::parse_text(&c.to_text()).expect("writer output must parse");
        assert_eq!(reparsed.to_text(), c.to_text());
    }
});
