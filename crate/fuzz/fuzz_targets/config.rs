#![no_main]

use itm_lab::{parse_grid, Config};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(cfg) = Config::parse(s) {
        assert!(cfg.validate().is_ok());
    }
    if let Ok((w, h)) = parse_grid(s) {
        assert!(w > 0 && h > 0);
    }
});
