#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::clique::{brute_clique_R, find_clique, CliqueInstance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for parse in [
        CliqueInstance::parse_text,
        CliqueInstance::parse_text_with_small_field,
    ] {
        if let Ok(inst) = parse(text) {
            let reparsed = parse(&inst.to_text()).expect("writer output must parse");
            assert_eq!(reparsed.to_text(), inst.to_text());
            if inst.k() <= 4 {
                let _ = brute_clique_R(&inst);
                let _ = find_clique(&inst);
            }
        }
    }
});
