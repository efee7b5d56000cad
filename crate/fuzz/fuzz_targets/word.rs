#![no_main]

use itm_sim::Word;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(w) = Word::parse_ascii(data) {
        let again: Word = w.to_string().parse().expect("display output parses");
        assert_eq!(again, w);
    }
});
