#![no_main]

use itm_renorm::KSeqSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(spec) = s.parse::<KSeqSpec>() {
        let again: KSeqSpec = spec.to_string().parse().expect("display output parses");
        assert_eq!(again, spec);
        let _ = spec.prefix(64);
        let _ = spec.satisfies_k2();
    }
});
