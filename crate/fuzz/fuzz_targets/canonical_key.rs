#![no_main]

use gridcal::CanonicalKey;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(k) = CanonicalKey::from_hex(s) {
        if let Ok(d) = k.decode() {
            assert!(d.n() == k.grid_size());
            let _ = d.canonical_key();
        }
    }
});
