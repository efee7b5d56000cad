#![no_main]

use itm_certificates::EdgeWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(w) = s.parse::<EdgeWord>() {
        let again: EdgeWord = w.to_string().parse().expect("display output parses");
        assert_eq!(again, w);
    }
});
