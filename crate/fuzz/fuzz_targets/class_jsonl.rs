#![no_main]

use gridcal::exchange::ExchangeClass;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = ExchangeClass::from_jsonl(s) {
        let _ = c.fingerprint();
        let _ = c.to_jsonl();
    }
});
