#![no_main]

use libfuzzer_sys::fuzz_target;
use redcert::bits::BitVec;
use redcert::monotone::MonotoneCircuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = MonotoneCircuit::parse_text(text) {
        let reparsed =
            MonotoneCircuit::parse_text(&c.to_text()).expect("writer output must parse");
        assert_eq!(reparsed, c);
        let arity = c.arity() as usize;
        if arity <= 64 {
            let lo = c.eval(&BitVec::zeros(arity)).unwrap();
            let ones = BitVec::from_bools(&vec![true; arity]);
            let hi = c.eval(&ones).unwrap();
            assert!(!lo || hi, "monotone circuit decreased on the top input");
        }
    }
});
