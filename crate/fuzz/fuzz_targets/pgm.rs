#![no_main]

use itm_renorm::Pgm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = Pgm::parse(data) {
        assert_eq!(img.pixels.len(), img.width * img.height);
        let again = Pgm::parse(&img.to_bytes()).expect("written image parses");
        assert_eq!((again.width, again.height, &again.pixels), (img.width, img.height, &img.pixels));
    }
});
