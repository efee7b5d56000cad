#![no_main]

use itm_sadic::{chi, desubstitute};
use itm_sim::Word;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let k = u64::from(k % 8) + 1;
    let Ok(w) = Word::parse_ascii(rest) else { return };
    if let Ok(d) = desubstitute(&w, k) {
        if d.complete {
            assert_eq!(chi(k).unwrap().apply(&d.preimage), w);
        }
    }
});
