#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::matrix::{mat_rank, FieldMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = FieldMatrix::parse_text(text) {
        let reparsed = FieldMatrix::parse_text(&m.to_text()).expect("writer output must parse");
        assert_eq!(reparsed.entries(), m.entries());
        if m.rows() * m.cols() <= 64 {
            let twice = m.transpose().transpose();
            assert_eq!(twice.entries(), m.entries());
            assert!(mat_rank(&m) <= m.rows().min(m.cols()));
        }
    }
});
