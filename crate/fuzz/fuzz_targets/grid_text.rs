#![no_main]

use gridcal::text::{encode, parse};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse(s) {
        assert_eq!(parse(&encode(&d)).unwrap(), d);
        let k = d.canonical_key();
        assert_eq!(k.decode().unwrap().canonical_key(), k);
    }
});
