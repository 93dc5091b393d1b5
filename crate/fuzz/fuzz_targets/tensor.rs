#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::tensor::Tensor3;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = Tensor3::parse_text(text) {
        let reparsed = Tensor3::parse_text(&t.to_text()).expect("writer output must parse");
        assert_eq!(reparsed.dims(), t.dims());
        assert_eq!(reparsed.entries(), t.entries());
    }
});
